from pydantic_settings import BaseSettings, SettingsConfigDict
from typing import Optional


class Settings(BaseSettings):
    # Output override (the only campaign input read from the environment)
    output_dir: Optional[str] = None

    # Process configuration
    log_level: str = "INFO"
    n_jobs: int = 1  # joblib workers for point certification

    model_config = SettingsConfigDict(
        env_prefix="WORKBENCH_",
        env_file=".env",
        extra="ignore",
    )


settings = Settings()
