"""Small named quivers used as examples and regression inputs."""

from importlib import resources

from ..dsl import QuiverDocument, parse_dsl
from ..quiver import GentleQuiver, validate_gentle

NAMES = ("F1", "F2", "F3", "F4", "F5", "F6", "F7", "F8")


def fixture_text(name: str) -> str:
    if name not in NAMES:
        raise KeyError(f"no fixture called {name!r}")
    return resources.files(__name__).joinpath(f"{name}.quiver").read_text(encoding="utf-8")


def fixture_document(name: str) -> QuiverDocument:
    return parse_dsl(fixture_text(name))


def fixture(name: str) -> GentleQuiver:
    return validate_gentle(fixture_document(name).body)
