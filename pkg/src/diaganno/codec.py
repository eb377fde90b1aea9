"""Parsing and serialization.

Three document families are handled here:

* the **native format** -- a versioned UTF-8 JSON node-link document holding
  one diagram's inventory, parse graph, annotation layers and edit log, with
  stable field order so files diff cleanly;
* the **ingestion schema** -- per-diagram corpus annotation files (element
  sections keyed by id, plus an ordered relationship list) together with a
  ``categories.json`` map, documented in the repo README;
* the **layers schema** -- grouping/connectivity/discourse sections parsed
  against a previously ingested element inventory.

Graphs also export to DOT for visualization. All parsers are total: any
failure surfaces as a typed error, never a crash.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Union

from .errors import (
    CrossLayerDangling,
    DanglingReference,
    MalformedDocument,
    ModelError,
    RootNotFound,
    ShapeError,
    UnknownRelationType,
)
from .model import (
    ConnectivityEdge,
    ConnectivityGraph,
    DiagramDocument,
    DiagramParseGraph,
    DiscourseEdge,
    DiscourseForest,
    DpgEdge,
    EditOp,
    Element,
    ElementKind,
    ElementProvenance,
    GroupingForest,
    GroupingKind,
    GroupingNode,
    LayeredAnnotation,
    LeafOccurrence,
    KIND_ID_PREFIX,
    RelationNode,
    Role,
    Shape,
    natural_key,
    resolve_ref,
)
from .registry import RelationRegistry, default_registry

log = logging.getLogger(__name__)

FORMAT_NAME = "diagram-annotation"
LAYERS_FORMAT_NAME = "diagram-annotation-layers"
FORMAT_VERSION = 1

Pathish = Union[str, Path]


# ---------------------------------------------------------------------------
# native format


def _element_to_obj(e: Element) -> dict:
    obj = {"id": e.id, "kind": e.kind.value, "shape": e.shape.to_json_obj()}
    if e.text is not None:
        obj["text"] = e.text
    if e.provenance is not None:
        obj["provenance"] = {"parent": e.provenance.parent, "ordinal": e.provenance.ordinal}
    return obj


def _element_from_obj(obj: dict) -> Element:
    prov = None
    if obj.get("provenance") is not None:
        p = obj["provenance"]
        prov = ElementProvenance(parent=p["parent"], ordinal=int(p["ordinal"]))
    return Element(
        id=obj["id"],
        kind=ElementKind(obj["kind"]),
        shape=Shape.from_json_obj(obj["shape"]),
        text=obj.get("text"),
        provenance=prov,
    )


def _dpg_to_obj(dpg: DiagramParseGraph) -> dict:
    return {
        "nodes": list(dpg.nodes),
        "edges": [
            {
                "id": e.id,
                "label": e.label,
                "source": e.source,
                "target": e.target,
                "connector": e.connector,
            }
            for e in dpg.edges
        ],
    }


def _dpg_from_obj(obj: dict) -> DiagramParseGraph:
    return DiagramParseGraph(
        nodes=[str(n) for n in obj.get("nodes", [])],
        edges=[
            DpgEdge(
                id=e["id"],
                label=e["label"],
                source=e["source"],
                target=e["target"],
                connector=e.get("connector"),
            )
            for e in obj.get("edges", [])
        ],
    )


def _grouping_to_obj(g: GroupingForest) -> dict:
    nodes = []
    for n in g.nodes:
        obj = {"id": n.id, "kind": n.kind.value}
        if n.element_ref is not None:
            obj["element"] = n.element_ref
        if n.macro_group is not None:
            obj["macroGroup"] = n.macro_group
        nodes.append(obj)
    return {"nodes": nodes, "edges": [[p, c] for p, c in g.edges]}


def _grouping_from_obj(obj: dict) -> GroupingForest:
    nodes = [
        GroupingNode(
            id=n["id"],
            kind=GroupingKind(n["kind"]),
            element_ref=n.get("element"),
            macro_group=n.get("macroGroup"),
        )
        for n in obj.get("nodes", [])
    ]
    edges = [(str(p), str(c)) for p, c in obj.get("edges", [])]
    return GroupingForest(nodes=nodes, edges=edges)


def _connectivity_to_obj(c: ConnectivityGraph) -> dict:
    return {
        "edges": [
            {
                "id": e.id,
                "source": e.source,
                "target": e.target,
                "connector": e.connector,
                "directed": e.directed,
                "openEnded": e.open_ended,
            }
            for e in c.edges
        ]
    }


def _connectivity_from_obj(obj: dict) -> ConnectivityGraph:
    return ConnectivityGraph(
        edges=[
            ConnectivityEdge(
                id=e["id"],
                source=e["source"],
                target=e.get("target"),
                connector=e["connector"],
                directed=bool(e.get("directed", True)),
                open_ended=bool(e.get("openEnded", False)),
            )
            for e in obj.get("edges", [])
        ]
    )


def _discourse_to_obj(d: DiscourseForest) -> dict:
    return {
        "relations": [{"id": r.id, "type": r.relation_type} for r in d.relations],
        "occurrences": [{"id": o.id, "target": o.target} for o in d.occurrences],
        "edges": [
            {"parent": e.parent, "child": e.child, "role": e.role.value} for e in d.edges
        ],
    }


def _discourse_from_obj(obj: dict) -> DiscourseForest:
    return DiscourseForest(
        relations=[
            RelationNode(id=r["id"], relation_type=r["type"])
            for r in obj.get("relations", [])
        ],
        occurrences=[
            LeafOccurrence(id=o["id"], target=o["target"])
            for o in obj.get("occurrences", [])
        ],
        edges=[
            DiscourseEdge(parent=e["parent"], child=e["child"], role=Role(e["role"]))
            for e in obj.get("edges", [])
        ],
    )


def _edit_op_to_obj(op: EditOp) -> dict:
    return {"opId": op.op_id, "kind": op.kind, "timestamp": op.timestamp, "params": op.params}


def _edit_op_from_obj(obj: dict) -> EditOp:
    return EditOp(
        op_id=obj["opId"],
        kind=obj["kind"],
        params=dict(obj.get("params", {})),
        timestamp=obj.get("timestamp", ""),
    )


def _layers_to_obj(annotation: LayeredAnnotation) -> dict:
    return {
        "inventory": {
            "elements": [_element_to_obj(e) for e in annotation.inventory],
            "retired": [_element_to_obj(e) for e in annotation.retired],
        },
        "grouping": _grouping_to_obj(annotation.grouping),
        "connectivity": _connectivity_to_obj(annotation.connectivity),
        "discourse": _discourse_to_obj(annotation.discourse),
    }


def document_to_obj(doc: DiagramDocument) -> dict:
    obj = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "diagramId": doc.diagram_id,
        "imageRef": doc.image_ref,
    }
    obj.update(_layers_to_obj(doc.annotation))
    obj["dpg"] = _dpg_to_obj(doc.dpg) if doc.dpg is not None else None
    obj["editLog"] = [_edit_op_to_obj(op) for op in doc.annotation.edit_log]
    if doc.base is not None:
        base_obj = _layers_to_obj(doc.base.annotation)
        base_obj["dpg"] = _dpg_to_obj(doc.base.dpg) if doc.base.dpg is not None else None
        obj["base"] = base_obj
    else:
        obj["base"] = None
    return obj


def serialize_document(doc: DiagramDocument) -> bytes:
    return (json.dumps(document_to_obj(doc), indent=2, ensure_ascii=False) + "\n").encode(
        "utf-8"
    )


def serialize(annotation: LayeredAnnotation) -> bytes:
    """Native serialization of a bare annotation (no id, image or parse graph)."""
    return serialize_document(
        DiagramDocument(diagram_id="", annotation=annotation)
    )


def _annotation_from_layers_obj(obj: dict) -> LayeredAnnotation:
    inv = obj.get("inventory", {})
    annotation = LayeredAnnotation(
        inventory=[_element_from_obj(e) for e in inv.get("elements", [])],
        retired=[_element_from_obj(e) for e in inv.get("retired", [])],
        grouping=_grouping_from_obj(obj.get("grouping", {})),
        connectivity=_connectivity_from_obj(obj.get("connectivity", {})),
        discourse=_discourse_from_obj(obj.get("discourse", {})),
    )
    ids = [e.id for e in annotation.inventory]
    if len(ids) != len(set(ids)):
        raise MalformedDocument("duplicate element ids in inventory")
    return annotation


def _decode_json(data: bytes) -> dict:
    try:
        text = data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data
        raw = json.loads(text)
    except (UnicodeDecodeError, ValueError) as exc:
        raise MalformedDocument(f"not valid UTF-8 JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise MalformedDocument("top-level value must be an object")
    return raw


def parse_document(data: bytes) -> DiagramDocument:
    """Parse a native document. Structural errors raise MalformedDocument;
    semantic problems (dangling refs, arity violations) are left for the
    validator to report."""
    raw = _decode_json(data)
    if raw.get("format") != FORMAT_NAME:
        raise MalformedDocument(f"unexpected format marker {raw.get('format')!r}")
    if raw.get("version") != FORMAT_VERSION:
        raise MalformedDocument(f"unsupported format version {raw.get('version')!r}")
    try:
        annotation = _annotation_from_layers_obj(raw)
        annotation.edit_log = [_edit_op_from_obj(o) for o in raw.get("editLog", [])]
        dpg = _dpg_from_obj(raw["dpg"]) if raw.get("dpg") is not None else None
        base = None
        if raw.get("base") is not None:
            base_annotation = _annotation_from_layers_obj(raw["base"])
            base_dpg = (
                _dpg_from_obj(raw["base"]["dpg"])
                if raw["base"].get("dpg") is not None
                else None
            )
            base = DiagramDocument(
                diagram_id=str(raw.get("diagramId", "")),
                annotation=base_annotation,
                dpg=base_dpg,
                image_ref=raw.get("imageRef"),
            )
    except (KeyError, TypeError, ValueError, AttributeError, ModelError) as exc:
        if isinstance(exc, MalformedDocument):
            raise
        raise MalformedDocument(f"bad document structure: {exc}") from exc
    # a log without a base snapshot is semantic corruption, not a syntax
    # problem; the validator reports it as REPLAY_MISMATCH
    return DiagramDocument(
        diagram_id=str(raw.get("diagramId", "")),
        annotation=annotation,
        dpg=dpg,
        image_ref=raw.get("imageRef"),
        base=base,
    )


def parse(data: bytes) -> LayeredAnnotation:
    return parse_document(data).annotation


def load_document(path: Pathish) -> DiagramDocument:
    return parse_document(Path(path).read_bytes())


def save_document(doc: DiagramDocument, path: Pathish) -> None:
    Path(path).write_bytes(serialize_document(doc))


# ---------------------------------------------------------------------------
# ingestion schema


@dataclass
class Relationship:
    id: str
    category: str
    members: list[str]


@dataclass
class Ai2dDocument:
    """Raw view of one ingested corpus annotation file."""

    diagram_id: str
    image_ref: Optional[str]
    elements: list[Element]
    relationships: list[Relationship]


@dataclass
class Ai2dParse:
    document: Ai2dDocument
    inventory: list[Element]
    dpg: DiagramParseGraph
    warnings: list[str] = field(default_factory=list)


_SECTION_ORDER = [
    ("text", ElementKind.TEXT),
    ("blobs", ElementKind.BLOB),
    ("arrows", ElementKind.ARROW),
    ("arrowHeads", ElementKind.ARROWHEAD),
]


def _shape_from_section_entry(element_id: str, entry: dict) -> Shape:
    if not isinstance(entry, dict):
        raise MalformedDocument(f"element {element_id}: entry must be an object")
    if "rectangle" in entry:
        rect = entry["rectangle"]
        try:
            (x0, y0), (x1, y1) = rect
        except (TypeError, ValueError) as exc:
            raise ShapeError(f"element {element_id}: bad rectangle {rect!r}") from exc
        return Shape.make_rect(float(x0), float(y0), float(x1), float(y1))
    if "polygon" in entry:
        try:
            return Shape.make_polygon(
                (float(x), float(y)) for x, y in entry["polygon"]
            )
        except (TypeError, ValueError) as exc:
            raise ShapeError(
                f"element {element_id}: bad polygon {entry['polygon']!r}"
            ) from exc
    raise ShapeError(f"element {element_id}: needs 'rectangle' or 'polygon'")


def parse_ai2d(data: bytes, registry: Optional[RelationRegistry] = None) -> Ai2dParse:
    """Ingest one corpus annotation file into an inventory and parse graph.

    Unknown relationship categories are preserved with a warning; unknown
    member ids raise DanglingReference. Relationships with more than two
    members become a chain of binary edges; for three-member relationships
    whose middle element is an arrow, the chain edges carry it as connector.
    """
    registry = registry or default_registry()
    raw = _decode_json(data)
    warnings: list[str] = []
    if "id" not in raw:
        raise MalformedDocument("ingestion document needs an 'id'")
    diagram_id = str(raw["id"])
    image_ref = raw.get("image")

    elements: list[Element] = []
    seen: set[str] = set()
    for section, kind in _SECTION_ORDER:
        entries = raw.get(section, {})
        if not isinstance(entries, dict):
            raise MalformedDocument(f"section {section!r} must map ids to entries")
        for element_id in sorted(entries, key=natural_key):
            if element_id in seen:
                raise MalformedDocument(f"element id {element_id} declared twice")
            seen.add(element_id)
            entry = entries[element_id]
            shape = _shape_from_section_entry(element_id, entry)
            text = None
            if kind is ElementKind.TEXT:
                text = str(entry.get("value", ""))
            if not element_id.startswith(KIND_ID_PREFIX[kind]):
                warnings.append(
                    f"element {element_id}: id does not carry the conventional "
                    f"{KIND_ID_PREFIX[kind]!r} prefix for {kind.value} elements"
                )
            try:
                elements.append(Element(id=element_id, kind=kind, shape=shape, text=text))
            except ModelError as exc:
                raise MalformedDocument(str(exc)) from exc

    relationships: list[Relationship] = []
    edges: list[DpgEdge] = []
    known_labels = registry.ai2d_names()
    raw_rels = raw.get("relationships", [])
    if not isinstance(raw_rels, list):
        raise MalformedDocument("'relationships' must be a list")
    for index, rel in enumerate(raw_rels):
        if not isinstance(rel, dict) or "category" not in rel or "members" not in rel:
            raise MalformedDocument(
                f"relationship #{index}: needs 'category' and 'members'"
            )
        rel_id = str(rel.get("id", f"REL{index}"))
        category = str(rel["category"])
        members = [str(m) for m in rel["members"]]
        for m in members:
            if m not in seen:
                raise DanglingReference(
                    f"relationship {rel_id} names unknown element {m}"
                )
        if category not in known_labels:
            warnings.append(
                f"relationship {rel_id}: unknown relation label {category!r} preserved"
            )
        if len(members) < 2:
            warnings.append(
                f"relationship {rel_id}: arity {len(members)} not expandable, skipped"
            )
            relationships.append(Relationship(rel_id, category, members))
            continue
        connector = None
        if len(members) == 3:
            middle = next((e for e in elements if e.id == members[1]), None)
            if middle is not None and middle.kind is ElementKind.ARROW:
                connector = middle.id
        for i in range(len(members) - 1):
            edges.append(
                DpgEdge(
                    id=f"{rel_id}.{i}" if len(members) > 2 else rel_id,
                    label=category,
                    source=members[i],
                    target=members[i + 1],
                    connector=connector,
                )
            )
        relationships.append(Relationship(rel_id, category, members))

    for w in warnings:
        log.warning("%s: %s", diagram_id, w)
    document = Ai2dDocument(
        diagram_id=diagram_id,
        image_ref=image_ref,
        elements=elements,
        relationships=relationships,
    )
    dpg = DiagramParseGraph(nodes=[e.id for e in elements], edges=edges)
    return Ai2dParse(document=document, inventory=elements, dpg=dpg, warnings=warnings)


# ---------------------------------------------------------------------------
# layers schema


def parse_ai2d_rst(
    data: bytes,
    inventory: Iterable[Element],
    registry: Optional[RelationRegistry] = None,
) -> LayeredAnnotation:
    """Parse a grouping/connectivity/discourse layers document against an
    already ingested inventory. Unlike native parsing this path is strict:
    unknown relation types and unresolvable references are rejected."""
    registry = registry or default_registry()
    raw = _decode_json(data)
    if raw.get("format") != LAYERS_FORMAT_NAME:
        raise MalformedDocument(f"unexpected format marker {raw.get('format')!r}")
    if raw.get("version") != FORMAT_VERSION:
        raise MalformedDocument(f"unsupported format version {raw.get('version')!r}")
    try:
        grouping = _grouping_from_obj(raw.get("grouping", {}))
        connectivity = _connectivity_from_obj(raw.get("connectivity", {}))
        discourse = _discourse_from_obj(raw.get("discourse", {}))
    except (KeyError, TypeError, ValueError, AttributeError, ModelError) as exc:
        raise MalformedDocument(f"bad layers structure: {exc}") from exc

    annotation = LayeredAnnotation(
        inventory=list(inventory),
        grouping=grouping,
        connectivity=connectivity,
        discourse=discourse,
    )
    known = annotation.element_ids()
    for node in grouping.nodes:
        if node.kind is GroupingKind.LEAF and node.element_ref not in known:
            raise CrossLayerDangling(
                f"grouping leaf {node.id} references unknown element {node.element_ref}"
            )
    for rel in discourse.relations:
        if rel.relation_type not in registry.rst_names():
            raise UnknownRelationType(
                f"relation {rel.id}: unknown type {rel.relation_type!r}"
            )
    for occ in discourse.occurrences:
        if resolve_ref(annotation, occ.target) is None:
            raise CrossLayerDangling(
                f"discourse occurrence {occ.id} targets unknown ref {occ.target}"
            )
    for edge in connectivity.edges:
        if resolve_ref(annotation, edge.source) is None:
            raise CrossLayerDangling(
                f"connectivity edge {edge.id} source {edge.source} unknown"
            )
        if edge.target is not None and resolve_ref(annotation, edge.target) is None:
            raise CrossLayerDangling(
                f"connectivity edge {edge.id} target {edge.target} unknown"
            )
    return annotation


def serialize_layers(annotation: LayeredAnnotation) -> bytes:
    """Layers-only serialization (the inverse input of parse_ai2d_rst)."""
    obj = {
        "format": LAYERS_FORMAT_NAME,
        "version": FORMAT_VERSION,
        "grouping": _grouping_to_obj(annotation.grouping),
        "connectivity": _connectivity_to_obj(annotation.connectivity),
        "discourse": _discourse_to_obj(annotation.discourse),
    }
    return (json.dumps(obj, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# DOT export


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _dot_lines(name: str, nodes: list[str], edges: list[str]) -> str:
    lines = [f"digraph {name} {{"]
    lines.extend(f"  {line}" for line in nodes)
    lines.extend(f"  {line}" for line in edges)
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(
    graph: Union[DiagramParseGraph, GroupingForest, ConnectivityGraph, DiscourseForest]
) -> str:
    """Deterministic DOT text for any of the four graph structures."""
    if isinstance(graph, DiagramParseGraph):
        nodes = [f"{_q(n)};" for n in sorted(graph.nodes, key=natural_key)]
        edge_keys = sorted(
            graph.edges, key=lambda e: (natural_key(e.source), natural_key(e.target), e.label)
        )
        edges = []
        for e in edge_keys:
            label = e.label if e.connector is None else f"{e.label} via {e.connector}"
            edges.append(f"{_q(e.source)} -> {_q(e.target)} [label={_q(label)}];")
        return _dot_lines("dpg", nodes, edges)

    if isinstance(graph, GroupingForest):
        nodes = []
        for n in sorted(graph.nodes, key=lambda n: natural_key(n.id)):
            if n.kind is GroupingKind.LEAF:
                nodes.append(f"{_q(n.id)} [shape=plaintext];")
            else:
                label = n.id if n.macro_group is None else f"{n.id}\\n{n.macro_group}"
                nodes.append(f'{_q(n.id)} [shape=box label="{label}"];')
        edges = [
            f"{_q(p)} -> {_q(c)};"
            for p, c in sorted(graph.edges, key=lambda pc: (natural_key(pc[0]), natural_key(pc[1])))
        ]
        return _dot_lines("grouping", nodes, edges)

    if isinstance(graph, ConnectivityGraph):
        refs = sorted(graph.node_refs(), key=natural_key)
        nodes = [f"{_q(r)};" for r in refs]
        edges = []
        for e in sorted(graph.edges, key=lambda e: natural_key(e.id)):
            attrs = [f"label={_q(e.connector)}"]
            if not e.directed:
                attrs.append("dir=none")
            target = e.target
            if target is None:
                phantom = f"open:{e.id}"
                nodes.append(f"{_q(phantom)} [shape=point];")
                target = phantom
            edges.append(f"{_q(e.source)} -> {_q(target)} [{' '.join(attrs)}];")
        return _dot_lines("connectivity", nodes, edges)

    if isinstance(graph, DiscourseForest):
        nodes = []
        for r in sorted(graph.relations, key=lambda r: natural_key(r.id)):
            nodes.append(f'{_q(r.id)} [shape=box label="{r.id}\\n{r.relation_type}"];')
        for o in sorted(graph.occurrences, key=lambda o: natural_key(o.id)):
            nodes.append(f"{_q(o.id)} [shape=plaintext label={_q(o.target)}];")
        edges = [
            f"{_q(e.parent)} -> {_q(e.child)} [label={_q(e.role.value)}];"
            for e in sorted(
                graph.edges,
                key=lambda e: (natural_key(e.parent), natural_key(e.child), e.role.value),
            )
        ]
        return _dot_lines("discourse", nodes, edges)

    raise TypeError(f"cannot export {type(graph).__name__} to DOT")


# ---------------------------------------------------------------------------
# corpus loading


@dataclass
class CorpusEntry:
    diagram_id: str
    category: str
    annotation_path: Path
    image_path: Optional[Path] = None
    layers_path: Optional[Path] = None


@dataclass
class CorpusIndex:
    entries: list[CorpusEntry] = field(default_factory=list)
    categories: set[str] = field(default_factory=set)
    failures: list[tuple[Path, str]] = field(default_factory=list)


def load_corpus(
    root: Pathish,
    categories_path: Optional[Pathish] = None,
    jobs: int = 1,
    registry: Optional[RelationRegistry] = None,
) -> CorpusIndex:
    """Index every parseable diagram under ``root``.

    Layout: ``root/annotations/*.json`` ingestion files, optional
    ``root/images/`` and ``root/layers/``, and ``root/categories.json``
    mapping diagram id to category. Per-file failures are collected, not
    fatal; only a missing root aborts.
    """
    root = Path(root)
    annotations_dir = root / "annotations"
    if not root.is_dir() or not annotations_dir.is_dir():
        raise RootNotFound(f"no corpus at {root} (need an annotations/ directory)")

    categories: dict[str, str] = {}
    cat_file = Path(categories_path) if categories_path else root / "categories.json"
    if cat_file.exists():
        try:
            categories = {
                str(k): str(v)
                for k, v in json.loads(cat_file.read_text(encoding="utf-8")).items()
            }
        except (ValueError, AttributeError):
            log.warning("unreadable categories file %s; ignoring", cat_file)

    files = sorted(annotations_dir.glob("*.json"))

    def index_one(path: Path):
        try:
            parsed = parse_ai2d(path.read_bytes(), registry=registry)
        except Exception as exc:  # typed codec errors and IO errors alike
            return None, (path, f"{type(exc).__name__}: {exc}")
        entry = CorpusEntry(
            diagram_id=parsed.document.diagram_id,
            category=categories.get(parsed.document.diagram_id, "uncategorized"),
            annotation_path=path,
        )
        if parsed.document.image_ref:
            candidate = root / "images" / parsed.document.image_ref
            if candidate.exists():
                entry.image_path = candidate
        layers_candidate = root / "layers" / f"{entry.diagram_id}.json"
        if layers_candidate.exists():
            entry.layers_path = layers_candidate
        return entry, None

    if jobs > 1 and len(files) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(index_one, files))
    else:
        results = [index_one(p) for p in files]

    index = CorpusIndex()
    seen_ids: set[str] = set()
    for (entry, failure), path in zip(results, files):
        if failure is not None:
            index.failures.append(failure)
            continue
        if entry.diagram_id in seen_ids:
            index.failures.append((path, f"duplicate diagram id {entry.diagram_id}"))
            continue
        seen_ids.add(entry.diagram_id)
        index.entries.append(entry)
        index.categories.add(entry.category)
    index.entries.sort(key=lambda e: natural_key(e.diagram_id))
    index.failures.sort(key=lambda f: str(f[0]))
    return index
