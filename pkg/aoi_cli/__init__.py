"""Command-line front end: ``python -m aoi_cli <command> [flags]``."""
