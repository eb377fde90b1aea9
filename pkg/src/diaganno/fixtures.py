"""Bundled example data: the rock-cycle diagram #4210.

The package ships the diagram in three forms: the corpus ingestion file, the
original layered annotation, and a decomposed version produced by replaying
the recorded decomposition log (see tools/build_fixtures.py in the repo).
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from . import codec
from .model import DiagramDocument

ROCK_CYCLE_ID = "4210"


def fixture_path(*parts: str) -> Path:
    """Path of a bundled fixture file, e.g. fixture_path("4210_original.json")."""
    base = resources.files(__package__) / "fixtures"
    return Path(str(base.joinpath(*parts)))


def read_fixture(*parts: str) -> bytes:
    return fixture_path(*parts).read_bytes()


def corpus_root() -> Path:
    """Root of the bundled three-diagram example corpus."""
    return fixture_path("corpus")


def rock_cycle_ai2d() -> bytes:
    """Corpus ingestion file for diagram #4210."""
    return read_fixture("corpus", "annotations", f"{ROCK_CYCLE_ID}.json")


def rock_cycle_layers() -> bytes:
    """Original layered annotation (layers schema) for diagram #4210."""
    return read_fixture("corpus", "layers", f"{ROCK_CYCLE_ID}.json")


def rock_cycle_original() -> DiagramDocument:
    """Diagram #4210 as originally annotated: layers plus parse graph."""
    return codec.parse_document(read_fixture(f"{ROCK_CYCLE_ID}_original.json"))


def rock_cycle_decomposed() -> DiagramDocument:
    """Diagram #4210 after discourse-driven decomposition of the cross-section."""
    return codec.parse_document(read_fixture(f"{ROCK_CYCLE_ID}_decomposed.json"))


def rock_cycle_decomposition_log() -> list:
    """The recorded edit ops that turn the original into the decomposed form."""
    import json

    raw = json.loads(read_fixture(f"{ROCK_CYCLE_ID}_decomposition_log.json"))
    return [
        codec._edit_op_from_obj(obj)  # noqa: SLF001 - same package
        for obj in raw["editLog"]
    ]
