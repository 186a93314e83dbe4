"""Bundled data: default MCS table, demo scenarios, and candidate-position lists."""

from importlib import resources
from pathlib import Path


def data_path(name: str) -> Path:
    """Filesystem path of a bundled data file (for CLI use and docs)."""
    path = Path(str(resources.files(__package__).joinpath(name)))
    if not path.exists():
        raise FileNotFoundError(f"no bundled data file named {name!r}")
    return path
