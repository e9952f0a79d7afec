"""Bundled example graphs of groups, shipped as *.gog.json documents."""
from __future__ import annotations

from importlib import resources

from ..documents import parse_document
from ..gog import GraphOfGroups

FIXTURE_NAMES = ("c4c6", "c6hnn", "c4c2c4", "c2c2", "expand_demo")


def fixture_text(name: str) -> str:
    """Raw JSON text of a bundled fixture."""
    if name not in FIXTURE_NAMES:
        raise ValueError(f"unknown fixture {name!r}; choose from {FIXTURE_NAMES}")
    return (resources.files(__package__) / f"{name}.gog.json").read_text("utf-8")


def load_fixture(name: str) -> GraphOfGroups:
    """Parse a bundled fixture into a fresh graph of groups."""
    return parse_document(fixture_text(name)).gog
