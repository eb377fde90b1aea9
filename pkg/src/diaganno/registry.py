"""Declarative inventory of edge labels and rhetorical relation types.

The registry has two sections: semantic edge labels used by diagram parse
graphs, and rhetorical relation types used by the discourse layer. Each
rhetorical relation carries a nuclearity class, which fixes the multiset of
child roles a relation node may take:

* mononuclear -- exactly one nucleus and one satellite;
* multinuclear -- two or more nuclei, no satellites;
* unconstrained -- any children.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Optional

from .errors import MalformedDocument, ModelError
from .model import Role


class Nuclearity(str, Enum):
    MONONUCLEAR = "mononuclear"
    MULTINUCLEAR = "multinuclear"
    UNCONSTRAINED = "unconstrained"


@dataclass(frozen=True)
class EdgeLabel:
    name: str
    description: str


@dataclass(frozen=True)
class RstRelation:
    name: str
    nuclearity: Nuclearity
    nucleus_gloss: str
    satellite_gloss: Optional[str] = None


@dataclass
class RelationRegistry:
    ai2d: list[EdgeLabel] = field(default_factory=list)
    rst: list[RstRelation] = field(default_factory=list)

    def __post_init__(self):
        for section, names in (
            ("ai2d", [r.name for r in self.ai2d]),
            ("rst", [r.name for r in self.rst]),
        ):
            if len(names) != len(set(names)):
                raise ModelError(f"duplicate relation names in {section} section")

    def ai2d_names(self) -> set[str]:
        return {r.name for r in self.ai2d}

    def rst_names(self) -> set[str]:
        return {r.name for r in self.rst}

    def rst_relation(self, name: str) -> Optional[RstRelation]:
        for r in self.rst:
            if r.name == name:
                return r
        return None

    def nuclearity_ok(self, relation_type: str, roles: list[Role]) -> bool:
        """Arity rule for one relation node given its child role list."""
        rel = self.rst_relation(relation_type)
        if rel is None:
            return False
        n = sum(1 for r in roles if r is Role.NUCLEUS)
        s = sum(1 for r in roles if r is Role.SATELLITE)
        if rel.nuclearity is Nuclearity.MONONUCLEAR:
            return n == 1 and s == 1
        if rel.nuclearity is Nuclearity.MULTINUCLEAR:
            return n >= 2 and s == 0
        return True

    def to_json_obj(self) -> dict:
        return {
            "ai2d": [{"name": r.name, "description": r.description} for r in self.ai2d],
            "rst": [
                {
                    "name": r.name,
                    "nuclearity": r.nuclearity.value,
                    "nucleusGloss": r.nucleus_gloss,
                    "satelliteGloss": r.satellite_gloss,
                }
                for r in self.rst
            ],
        }


def default_registry() -> RelationRegistry:
    """Built-in registry seeding the documented edge labels and relations."""
    return RelationRegistry(
        ai2d=[
            EdgeLabel("arrowHeadTail", "Binds an arrow to the arrowhead terminating it."),
            EdgeLabel(
                "interObjectLinkage",
                "Connects two elements whose relation is signalled by a connector "
                "such as an arrow or a line.",
            ),
            EdgeLabel(
                "intraObjectRegionLabel",
                "Links a label to the region of a larger object that it names.",
            ),
        ],
        rst=[
            RstRelation("identification", Nuclearity.MONONUCLEAR, "Identified", "Identifier"),
            RstRelation("joint", Nuclearity.UNCONSTRAINED, "No constraints", "No constraints"),
            RstRelation(
                "elaboration", Nuclearity.MONONUCLEAR, "Basic information", "Additional information"
            ),
            RstRelation("disjunction", Nuclearity.MULTINUCLEAR, "Two or more alternatives"),
            RstRelation("cyclic sequence", Nuclearity.MULTINUCLEAR, "Repeated steps"),
            RstRelation(
                "background",
                Nuclearity.MONONUCLEAR,
                "Content to be understood",
                "Context that increases the ability to understand the nucleus",
            ),
        ],
    )


def load_registry(path: str | Path) -> RelationRegistry:
    """Read a registry JSON file ({"ai2d": [...], "rst": [...]})."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise MalformedDocument(f"cannot read registry {path}: {exc}") from exc
    return registry_from_json_obj(raw)


def registry_from_json_obj(raw: dict) -> RelationRegistry:
    if not isinstance(raw, dict):
        raise MalformedDocument("registry document must be an object")
    try:
        ai2d = [
            EdgeLabel(entry["name"], entry.get("description", ""))
            for entry in raw.get("ai2d", [])
        ]
        rst = [
            RstRelation(
                entry["name"],
                Nuclearity(entry["nuclearity"]),
                entry.get("nucleusGloss", ""),
                entry.get("satelliteGloss"),
            )
            for entry in raw.get("rst", [])
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedDocument(f"bad registry entry: {exc}") from exc
    try:
        return RelationRegistry(ai2d=ai2d, rst=rst)
    except ModelError as exc:
        raise MalformedDocument(str(exc)) from exc


def save_registry(registry: RelationRegistry, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(registry.to_json_obj(), indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
