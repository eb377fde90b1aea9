"""Core data model: the element inventory and the four graph structures.

A diagram is described by an inventory of segmented layout elements plus
graphs over them:

* ``DiagramParseGraph`` -- element nodes with typed semantic edges, as found
  in the source corpus annotations;
* ``GroupingForest`` -- hierarchical visual-perceptual groups;
* ``ConnectivityGraph`` -- visually explicit arrow/line connections;
* ``DiscourseForest`` -- rhetorical relations with nucleus/satellite roles.

The three latter graphs together with the inventory and an edit log form a
``LayeredAnnotation``; a ``DiagramDocument`` bundles one annotation with its
optional parse graph and image reference, and is the unit of persistence.

Values are treated as immutable once built: edit operations (see
:mod:`diaganno.edit`) deep-copy and return new versions instead of mutating
shared state.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Optional, Union

from .errors import DuplicateElementId, ModelError, ShapeError

ID_NUMBER_RE = re.compile(r"^([A-Za-z]+)([0-9]+)$")

GROUP_PREFIX = "G"
DIAGRAM_ROOT_PREFIX = "I"
RELATION_PREFIX = "R"
OCCURRENCE_PREFIX = "O"
DEFAULT_ROOT_ID = "I0"


def natural_key(node_id: str) -> tuple:
    """Sort key that orders T2 before T10; non-conforming ids sort after."""
    m = ID_NUMBER_RE.match(node_id)
    if m:
        return (0, m.group(1), int(m.group(2)))
    return (1, node_id, 0)


def next_numbered_id(prefix: str, existing: Iterable[str]) -> str:
    """Smallest ``prefix<n>`` with n greater than any numbered id in use."""
    top = 0
    for node_id in existing:
        m = ID_NUMBER_RE.match(node_id)
        if m and m.group(1) == prefix:
            top = max(top, int(m.group(2)))
    return f"{prefix}{top + 1}"


class ElementKind(str, Enum):
    TEXT = "text"
    BLOB = "blob"
    ARROW = "arrow"
    ARROWHEAD = "arrowhead"


KIND_ID_PREFIX = {
    ElementKind.TEXT: "T",
    ElementKind.BLOB: "B",
    ElementKind.ARROW: "A",
    ElementKind.ARROWHEAD: "H",
}


class ShapeKind(str, Enum):
    RECT = "rect"
    POLYGON = "polygon"


@dataclass(frozen=True)
class Shape:
    """Layout segmentation shape: axis-aligned rect or pixel polygon."""

    kind: ShapeKind
    rect: Optional[tuple[float, float, float, float]] = None
    polygon: Optional[tuple[tuple[float, float], ...]] = None

    def __post_init__(self):
        if self.kind is ShapeKind.RECT:
            if self.rect is None or self.polygon is not None:
                raise ShapeError("rect shape requires rect coordinates only")
            x0, y0, x1, y1 = self.rect
            if not (x0 < x1 and y0 < y1):
                raise ShapeError(f"degenerate rect {self.rect}")
        else:
            if self.polygon is None or self.rect is not None:
                raise ShapeError("polygon shape requires a vertex list only")
            if len(self.polygon) < 3:
                raise ShapeError("polygon needs at least 3 vertices")
            for x, y in self.polygon:
                if x < 0 or y < 0:
                    raise ShapeError(f"negative polygon coordinate ({x}, {y})")

    @staticmethod
    def _num(value: float) -> float:
        # canonical numeric form so serialization is byte-stable
        try:
            value = float(value)
        except (TypeError, ValueError) as exc:
            raise ShapeError(f"non-numeric coordinate {value!r}") from exc
        return int(value) if value.is_integer() else value

    @staticmethod
    def make_rect(x0: float, y0: float, x1: float, y1: float) -> "Shape":
        n = Shape._num
        return Shape(ShapeKind.RECT, rect=(n(x0), n(y0), n(x1), n(y1)))

    @staticmethod
    def make_polygon(vertices: Iterable[tuple[float, float]]) -> "Shape":
        n = Shape._num
        return Shape(ShapeKind.POLYGON, polygon=tuple((n(x), n(y)) for x, y in vertices))

    def to_json_obj(self) -> dict:
        if self.kind is ShapeKind.RECT:
            return {"rect": list(self.rect)}
        return {"polygon": [list(v) for v in self.polygon]}

    @staticmethod
    def from_json_obj(obj: dict) -> "Shape":
        if not isinstance(obj, dict):
            raise ShapeError(f"shape must be an object, got {type(obj).__name__}")
        if "rect" in obj:
            rect = obj["rect"]
            if not isinstance(rect, (list, tuple)) or len(rect) != 4:
                raise ShapeError(f"rect must hold 4 coordinates: {rect!r}")
            return Shape.make_rect(*rect)
        if "polygon" in obj:
            poly = obj["polygon"]
            if not isinstance(poly, (list, tuple)):
                raise ShapeError(f"polygon must hold vertex pairs: {poly!r}")
            try:
                return Shape.make_polygon((float(x), float(y)) for x, y in poly)
            except (TypeError, ValueError) as exc:
                raise ShapeError(f"bad polygon vertex list: {poly!r}") from exc
        raise ShapeError(f"shape needs 'rect' or 'polygon': {obj!r}")


@dataclass(frozen=True)
class ElementProvenance:
    """Decomposition ancestry: which element this one was split out of."""

    parent: str
    ordinal: int


@dataclass(frozen=True)
class Element:
    """One segmented layout unit."""

    id: str
    kind: ElementKind
    shape: Shape
    text: Optional[str] = None
    provenance: Optional[ElementProvenance] = None

    def __post_init__(self):
        if (self.text is not None) != (self.kind is ElementKind.TEXT):
            raise ModelError(
                f"element {self.id}: text content is set exactly on text elements"
            )


@dataclass
class DpgEdge:
    """Typed semantic edge of a diagram parse graph."""

    id: str
    label: str
    source: str
    target: str
    connector: Optional[str] = None


@dataclass
class DiagramParseGraph:
    nodes: list[str] = field(default_factory=list)
    edges: list[DpgEdge] = field(default_factory=list)


class GroupingKind(str, Enum):
    DIAGRAM_ROOT = "diagramRoot"
    GROUP = "group"
    LEAF = "leaf"


@dataclass
class GroupingNode:
    id: str
    kind: GroupingKind
    element_ref: Optional[str] = None
    macro_group: Optional[str] = None

    def __post_init__(self):
        if (self.element_ref is not None) != (self.kind is GroupingKind.LEAF):
            raise ModelError(
                f"grouping node {self.id}: element_ref is set exactly on leaves"
            )
        if self.macro_group is not None and self.kind is GroupingKind.LEAF:
            raise ModelError(f"grouping leaf {self.id} cannot carry a macro-group tag")


@dataclass
class GroupingForest:
    """Forest of grouping nodes; ``edges`` holds (parent, child) in child order."""

    nodes: list[GroupingNode] = field(default_factory=list)
    edges: list[tuple[str, str]] = field(default_factory=list)

    def node(self, node_id: str) -> Optional[GroupingNode]:
        for n in self.nodes:
            if n.id == node_id:
                return n
        return None

    def parents_of(self, node_id: str) -> list[str]:
        return [p for p, c in self.edges if c == node_id]

    def parent_of(self, node_id: str) -> Optional[str]:
        parents = self.parents_of(node_id)
        return parents[0] if parents else None

    def children_of(self, node_id: str) -> list[str]:
        return [c for p, c in self.edges if p == node_id]

    def roots(self) -> list[str]:
        having_parent = {c for _, c in self.edges}
        return [n.id for n in self.nodes if n.id not in having_parent]

    def subtree_ids(self, node_id: str) -> list[str]:
        """DFS preorder under ``node_id``; guarded against malformed cycles."""
        seen: list[str] = []
        seen_set: set[str] = set()
        stack = [node_id]
        while stack:
            cur = stack.pop()
            if cur in seen_set:
                continue
            seen.append(cur)
            seen_set.add(cur)
            stack.extend(reversed(self.children_of(cur)))
        return seen

    def subtree_elements(self, node_id: str) -> list[str]:
        refs = []
        for nid in self.subtree_ids(node_id):
            node = self.node(nid)
            if node is not None and node.kind is GroupingKind.LEAF:
                refs.append(node.element_ref)
        return refs

    def leaf_for_element(self, element_id: str) -> Optional[GroupingNode]:
        for n in self.nodes:
            if n.kind is GroupingKind.LEAF and n.element_ref == element_id:
                return n
        return None


@dataclass
class ConnectivityEdge:
    """One visually explicit connection, realized by an arrow (or line)."""

    id: str
    source: str
    target: Optional[str]
    connector: str
    directed: bool = True
    open_ended: bool = False


@dataclass
class ConnectivityGraph:
    edges: list[ConnectivityEdge] = field(default_factory=list)

    def node_refs(self) -> list[str]:
        refs: list[str] = []
        for e in self.edges:
            for r in (e.source, e.target):
                if r is not None and r not in refs:
                    refs.append(r)
        return refs


class Role(str, Enum):
    NUCLEUS = "n"
    SATELLITE = "s"


@dataclass
class RelationNode:
    id: str
    relation_type: str


@dataclass
class LeafOccurrence:
    """One use of an element or grouping node as a discourse leaf.

    Re-using the same target in another relation gets a fresh occurrence id,
    which keeps the discourse graph literally a forest.
    """

    id: str
    target: str


@dataclass
class DiscourseEdge:
    parent: str
    child: str
    role: Role


@dataclass
class DiscourseForest:
    relations: list[RelationNode] = field(default_factory=list)
    occurrences: list[LeafOccurrence] = field(default_factory=list)
    edges: list[DiscourseEdge] = field(default_factory=list)

    def relation(self, node_id: str) -> Optional[RelationNode]:
        for r in self.relations:
            if r.id == node_id:
                return r
        return None

    def occurrence(self, node_id: str) -> Optional[LeafOccurrence]:
        for o in self.occurrences:
            if o.id == node_id:
                return o
        return None

    def node_ids(self) -> list[str]:
        return [r.id for r in self.relations] + [o.id for o in self.occurrences]

    def children_of(self, node_id: str) -> list[tuple[str, Role]]:
        return [(e.child, e.role) for e in self.edges if e.parent == node_id]

    def parents_of(self, node_id: str) -> list[str]:
        return [e.parent for e in self.edges if e.child == node_id]

    def roots(self) -> list[str]:
        having_parent = {e.child for e in self.edges}
        return [nid for nid in self.node_ids() if nid not in having_parent]


@dataclass
class EditOp:
    """One recorded edit. ``params`` is a JSON-ready mapping per op kind.

    Generated identifiers are recorded in the params at apply time, so
    replaying a log reproduces the exact same annotation.
    """

    op_id: str
    kind: str
    params: dict
    timestamp: str = ""


@dataclass
class LayeredAnnotation:
    """Element inventory plus the three annotation layers and the edit log."""

    inventory: list[Element] = field(default_factory=list)
    retired: list[Element] = field(default_factory=list)
    grouping: GroupingForest = field(default_factory=GroupingForest)
    connectivity: ConnectivityGraph = field(default_factory=ConnectivityGraph)
    discourse: DiscourseForest = field(default_factory=DiscourseForest)
    edit_log: list[EditOp] = field(default_factory=list)

    def element(self, element_id: str) -> Optional[Element]:
        for e in self.inventory:
            if e.id == element_id:
                return e
        return None

    def element_ids(self) -> set[str]:
        return {e.id for e in self.inventory}

    def historical_element(self, element_id: str) -> Optional[Element]:
        found = self.element(element_id)
        if found is not None:
            return found
        for e in self.retired:
            if e.id == element_id:
                return e
        return None

    def all_known_ids(self) -> set[str]:
        """Ids in use anywhere: elements (active and retired) and graph nodes."""
        ids = {e.id for e in self.inventory}
        ids.update(e.id for e in self.retired)
        ids.update(n.id for n in self.grouping.nodes)
        ids.update(e.id for e in self.connectivity.edges)
        ids.update(self.discourse.node_ids())
        return ids


@dataclass
class DiagramDocument:
    """Persistence unit: one diagram's annotation, parse graph and image ref.

    ``base`` snapshots the pre-edit state once the edit log is non-empty;
    replaying the log over it must reproduce the current layers exactly.
    """

    diagram_id: str
    annotation: LayeredAnnotation
    dpg: Optional[DiagramParseGraph] = None
    image_ref: Optional[str] = None
    base: Optional["DiagramDocument"] = None


ResolvedRef = Union[Element, GroupingNode]


def new_annotation(inventory: Iterable[Element]) -> LayeredAnnotation:
    """Fresh annotation: a lone diagram root with one leaf per element.

    Arrowheads stay in the inventory but get no grouping leaf; the layered
    schema does not model them.
    """
    elements = list(inventory)
    seen: set[str] = set()
    for e in elements:
        if e.id in seen:
            raise DuplicateElementId(f"duplicate element id {e.id}")
        seen.add(e.id)
    nodes = [GroupingNode(DEFAULT_ROOT_ID, GroupingKind.DIAGRAM_ROOT)]
    edges = []
    for e in elements:
        if e.kind is ElementKind.ARROWHEAD:
            continue
        nodes.append(GroupingNode(e.id, GroupingKind.LEAF, element_ref=e.id))
        edges.append((DEFAULT_ROOT_ID, e.id))
    return LayeredAnnotation(
        inventory=elements,
        grouping=GroupingForest(nodes=nodes, edges=edges),
    )


def new_document(
    diagram_id: str,
    inventory: Iterable[Element],
    dpg: Optional[DiagramParseGraph] = None,
    image_ref: Optional[str] = None,
) -> DiagramDocument:
    return DiagramDocument(
        diagram_id=diagram_id,
        annotation=new_annotation(inventory),
        dpg=dpg,
        image_ref=image_ref,
    )


def resolve_ref(annotation: LayeredAnnotation, ref: str) -> Optional[ResolvedRef]:
    """Total lookup of a cross-layer reference.

    Returns the element, the grouping node (for groups and diagram roots), or
    None when nothing matches. Grouping leaf ids alias their element.
    """
    element = annotation.element(ref)
    if element is not None:
        return element
    node = annotation.grouping.node(ref)
    if node is None:
        return None
    if node.kind is GroupingKind.LEAF:
        return annotation.element(node.element_ref)
    return node


def make_occurrence(
    annotation: LayeredAnnotation, target: str, occurrence_id: str
) -> LeafOccurrence:
    """Construct a discourse leaf, rejecting arrowhead targets outright."""
    resolved = resolve_ref(annotation, target)
    if isinstance(resolved, Element) and resolved.kind is ElementKind.ARROWHEAD:
        raise ModelError(f"arrowhead {target} cannot be a discourse leaf target")
    return LeafOccurrence(id=occurrence_id, target=target)


def snapshot_document(doc: DiagramDocument) -> DiagramDocument:
    """Deep copy of the current state with an empty edit log and no base."""
    import copy

    return DiagramDocument(
        diagram_id=doc.diagram_id,
        annotation=LayeredAnnotation(
            inventory=list(doc.annotation.inventory),
            retired=list(doc.annotation.retired),
            grouping=copy.deepcopy(doc.annotation.grouping),
            connectivity=copy.deepcopy(doc.annotation.connectivity),
            discourse=copy.deepcopy(doc.annotation.discourse),
            edit_log=[],
        ),
        dpg=copy.deepcopy(doc.dpg),
        image_ref=doc.image_ref,
        base=None,
    )
