"""Access to the fixture files shipped with the package."""

from importlib import resources
from pathlib import Path


def fixture_path(name: str) -> Path:
    """Filesystem path of a shipped fixture, e.g. fixture_path("gamma2.json")."""
    p = resources.files("loopforge") / "fixtures" / name
    with resources.as_file(p) as concrete:
        return Path(concrete)


def list_fixtures():
    base = resources.files("loopforge") / "fixtures"
    return sorted(f.name for f in base.iterdir() if f.name.endswith(".json"))
