"""
Integration tests for the command-line frontend
Exit codes: 0 pass, 1 check failed, 2 configuration error, 3 output error
"""
import json

import pytest

from backend.app import cli

FAST = ["--k-max", "3", "--samples", "20000", "--resolution", "128"]


def _stdout_json(capsys):
    return json.loads(capsys.readouterr().out)


class TestValidateSequence:
    """validate-sequence"""

    @pytest.mark.integration
    @pytest.mark.critical
    def test_default_sequence(self, capsys):
        """Exit 0 and the window starts at j0 = 0"""
        # Act
        code = cli.main(["validate-sequence"])

        # Assert
        report = _stdout_json(capsys)
        assert code == cli.EXIT_OK
        assert report["valid"] is True
        assert report["j0"] == 0
        assert len(report["ratios"]) == 29

    @pytest.mark.integration
    @pytest.mark.critical
    def test_tight_envelope_exits_nonzero(self, capsys):
        """(0.58, 0.61) is reported and rejected"""
        # Act
        code = cli.main(["validate-sequence", "--lambda", "0.58", "--mu", "0.61"])

        # Assert
        report = _stdout_json(capsys)
        assert code == cli.EXIT_CHECK_FAILED
        assert report["valid"] is False
        assert report["errors"]

    @pytest.mark.integration
    def test_reindexing_allowed_by_flag(self, capsys):
        """--max-reindex 1 accepts the tight envelope from j0 = 1"""
        # Act
        code = cli.main(["validate-sequence", "--lambda", "0.58", "--mu", "0.61", "--max-reindex", "1"])

        # Assert
        assert code == cli.EXIT_OK
        assert _stdout_json(capsys)["j0"] == 1

    @pytest.mark.integration
    def test_angles_file(self, tmp_path, capsys):
        """An explicit list is validated and echoed"""
        # Arrange
        angles_file = tmp_path / "angles.txt"
        angles_file.write_text("\n".join(str(0.5 / 2 ** j) for j in range(8)) + "\n", encoding="utf-8")

        # Act
        code = cli.main(["validate-sequence", "--angles-file", str(angles_file), "--lambda", "0.4", "--mu", "0.6"])

        # Assert
        report = _stdout_json(capsys)
        assert code == cli.EXIT_OK
        assert report["prefix"] == 8
        assert len(report["slopes"]) == 8

    @pytest.mark.integration
    def test_invalid_config_exits_two(self, capsys):
        """lambda >= mu is a configuration error"""
        assert cli.main(["validate-sequence", "--lambda", "0.9", "--mu", "0.8"]) == cli.EXIT_CONFIG_ERROR

    @pytest.mark.integration
    def test_missing_config_file_exits_two(self, tmp_path):
        """--config must point to a file"""
        assert cli.main(["validate-sequence", "--config", str(tmp_path / "nope.cfg")]) == cli.EXIT_CONFIG_ERROR


class TestVerify:
    """verify <suite>"""

    @pytest.mark.integration
    @pytest.mark.critical
    def test_verify_lemma2(self, out_dir):
        """Exit 0 with report.json and table_lemma2.csv"""
        # Act
        code = cli.main(["verify", "lemma2", "--out", str(out_dir)] + FAST)

        # Assert
        assert code == cli.EXIT_OK
        report = json.loads((out_dir / "report.json").read_text(encoding="utf-8"))
        assert report["command"] == "verify lemma2"
        assert report["passed"] is True
        assert report["slope_window"]["j0"] == 0
        assert (out_dir / "table_lemma2.csv").is_file()

    @pytest.mark.integration
    def test_verify_divergence_with_c(self, out_dir):
        """--C 2 keeps the ratio increasing"""
        # Act
        code = cli.main(["verify", "divergence", "--C", "2", "--out", str(out_dir)] + FAST)

        # Assert
        report = json.loads((out_dir / "report.json").read_text(encoding="utf-8"))
        assert code == cli.EXIT_OK
        assert report["config"]["scale_c"] == 2.0

    @pytest.mark.integration
    def test_failed_check_exits_one_and_still_writes(self, out_dir):
        """Phi_0 as Phi fails divergence; artifacts are written anyway"""
        # Act
        code = cli.main(["verify", "divergence", "--phi", "loglike:1", "--out", str(out_dir)] + FAST)

        # Assert
        assert code == cli.EXIT_CHECK_FAILED
        report = json.loads((out_dir / "report.json").read_text(encoding="utf-8"))
        assert report["passed"] is False

    @pytest.mark.integration
    def test_bad_phi_exits_two(self, out_dir):
        """Unknown Orlicz kinds are rejected before any suite runs"""
        # Act
        code = cli.main(["verify", "divergence", "--phi", "cubic:3", "--out", str(out_dir)])

        # Assert
        assert code == cli.EXIT_CONFIG_ERROR
        assert not (out_dir / "report.json").exists()

    @pytest.mark.integration
    def test_output_dir_from_environment(self, tmp_path, monkeypatch):
        """WORKBENCH_OUTPUT_DIR applies when --out is absent"""
        # Arrange
        target = tmp_path / "from_env"
        monkeypatch.setattr(cli.settings, "output_dir", str(target))

        # Act
        code = cli.main(["verify", "lemma1"] + FAST)

        # Assert
        assert code == cli.EXIT_OK
        assert (target / "report.json").is_file()

    @pytest.mark.integration
    def test_unwritable_output_exits_three(self, tmp_path):
        """A file in place of --out is an output error"""
        # Arrange
        blocker = tmp_path / "blocker"
        blocker.write_text("x", encoding="utf-8")

        # Act & Assert
        assert cli.main(["verify", "lemma1", "--out", str(blocker)] + FAST) == cli.EXIT_IO_ERROR


class TestOtherCommands:
    """blowup-table, figures and schema"""

    @pytest.mark.integration
    def test_blowup_table_single_level(self, out_dir):
        """K = 1 writes a one-row table"""
        # Act
        code = cli.main(["blowup-table", "--k-max", "1", "--resolution", "128", "--out", str(out_dir)])

        # Assert
        assert code == cli.EXIT_OK
        lines = (out_dir / "table_blowup.csv").read_text(encoding="utf-8").splitlines()
        assert lines[0].startswith("k,rotated_ratio,axis_weak11")
        assert len(lines) == 2

    @pytest.mark.integration
    @pytest.mark.critical
    def test_figures(self, tmp_path):
        """fig1.svg and fig2.svg are written and byte-identical across runs"""
        # Act
        first = cli.main(["figures", "--out", str(tmp_path / "a")])
        second = cli.main(["figures", "--out", str(tmp_path / "b")])

        # Assert
        assert first == second == cli.EXIT_OK
        for name in ("fig1.svg", "fig2.svg"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
        assert 'id="intersection"' in (tmp_path / "a" / "fig2.svg").read_text(encoding="utf-8")

    @pytest.mark.integration
    def test_figures_into_a_file_exits_three(self, tmp_path):
        """Output errors map to exit 3"""
        # Arrange
        blocker = tmp_path / "blocker"
        blocker.write_text("x", encoding="utf-8")

        # Act & Assert
        assert cli.main(["figures", "--out", str(blocker)]) == cli.EXIT_IO_ERROR

    @pytest.mark.integration
    def test_schema_to_stdout(self, capsys):
        """The printed schema describes VerificationReport"""
        # Act
        code = cli.main(["schema"])

        # Assert
        schema = _stdout_json(capsys)
        assert code == cli.EXIT_OK
        assert schema["title"] == "VerificationReport"
        assert "CheckRecord" in schema["$defs"]

    @pytest.mark.integration
    def test_schema_to_directory(self, out_dir):
        """--out writes verification_report.schema.json"""
        # Act
        code = cli.main(["schema", "--out", str(out_dir)])

        # Assert
        assert code == cli.EXIT_OK
        assert (out_dir / cli.SCHEMA_FILE).is_file()
