from __future__ import annotations

from pathlib import Path


def get_project_root() -> Path:
    """Return the directory holding the package and the bundled configs."""
    return Path(__file__).resolve().parent.parent


def get_configs_dir() -> Path:
    """Return the bundled scenario configs directory."""
    return get_project_root() / "configs"


def get_scenario_path(name: str) -> Path:
    """Return the path of a bundled scenario config by stem or file name."""
    file_name = name if name.endswith(".json") else f"{name}.json"
    return get_configs_dir() / file_name
