# Lacunary rectangle workbench
__version__ = "1.0.0"
