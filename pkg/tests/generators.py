"""Seeded random builders for property tests.

Documents and edit sequences are valid by construction, so everything
produced here must round-trip, replay and validate cleanly.
"""

from __future__ import annotations

import random
import string

from diaganno import edit
from diaganno.errors import EditError
from diaganno.model import (
    DiagramDocument,
    DiagramParseGraph,
    ConnectivityEdge,
    ConnectivityGraph,
    DpgEdge,
    Element,
    ElementKind,
    GroupingKind,
    Role,
    Shape,
    new_document,
)
from diaganno.registry import Nuclearity, default_registry

REGISTRY = default_registry()
KINDS = [ElementKind.TEXT, ElementKind.BLOB, ElementKind.ARROW, ElementKind.ARROWHEAD]
DPG_LABELS = sorted(REGISTRY.ai2d_names())


def gen_shape(rng: random.Random) -> Shape:
    if rng.random() < 0.5:
        x0, y0 = rng.randint(0, 500), rng.randint(0, 500)
        return Shape.make_rect(x0, y0, x0 + rng.randint(1, 80), y0 + rng.randint(1, 80))
    cx, cy = rng.randint(40, 500), rng.randint(40, 500)
    return Shape.make_polygon(
        (cx + rng.randint(-30, 30), cy + rng.randint(-30, 30))
        for _ in range(rng.randint(3, 6))
    )


def gen_text(rng: random.Random) -> str:
    words = ["".join(rng.choices(string.ascii_lowercase, k=rng.randint(2, 8)))
             for _ in range(rng.randint(1, 4))]
    return " ".join(words)


def gen_elements(rng: random.Random, max_per_kind: int = 4) -> list[Element]:
    elements = []
    for kind in KINDS:
        prefix = {"text": "T", "blob": "B", "arrow": "A", "arrowhead": "H"}[kind.value]
        for i in range(rng.randint(0, max_per_kind)):
            elements.append(
                Element(
                    id=f"{prefix}{i}",
                    kind=kind,
                    shape=gen_shape(rng),
                    text=gen_text(rng) if kind is ElementKind.TEXT else None,
                )
            )
    return elements


def gen_dpg(rng: random.Random, elements: list[Element]) -> DiagramParseGraph:
    nodes = [e.id for e in elements]
    edges = []
    if len(nodes) >= 2:
        for i in range(rng.randint(0, len(nodes))):
            a, b = rng.sample(nodes, 2)
            edges.append(DpgEdge(id=f"E{i}", label=rng.choice(DPG_LABELS), source=a, target=b))
    return DiagramParseGraph(nodes=nodes, edges=edges)


def gen_document(rng: random.Random) -> DiagramDocument:
    elements = gen_elements(rng)
    doc = new_document(
        f"d{rng.randint(0, 99999)}",
        elements,
        dpg=gen_dpg(rng, elements) if rng.random() < 0.7 else None,
    )
    return doc


# ---------------------------------------------------------------------------
# random but valid edit sequences


def _grouping_containers(doc):
    g = doc.annotation.grouping
    return [n for n in g.nodes if n.kind is not GroupingKind.LEAF]


def _non_arrowhead_refs(doc):
    refs = [e.id for e in doc.annotation.inventory if e.kind is not ElementKind.ARROWHEAD]
    refs += [n.id for n in doc.annotation.grouping.nodes if n.kind is GroupingKind.GROUP]
    return refs


def _try_add_group(rng, doc):
    g = doc.annotation.grouping
    candidates = []
    for parent in _grouping_containers(doc):
        children = g.children_of(parent.id)
        # grouping all children of a group would leave it a singleton
        limit = len(children) if parent.kind is GroupingKind.DIAGRAM_ROOT else len(children) - 1
        if len(children) >= 2 and limit >= 2:
            candidates.append((parent.id, children, limit))
    if not candidates:
        return None
    parent_id, children, limit = rng.choice(candidates)
    k = rng.randint(2, min(limit, len(children)))
    members = rng.sample(children, k)
    return edit.add_group(doc, parent_id, members)


def _try_move_node(rng, doc):
    g = doc.annotation.grouping
    movable = []
    for node in g.nodes:
        parent = g.parent_of(node.id)
        if parent is None:
            continue
        parent_node = g.node(parent)
        # moving out of a two-child group would leave a singleton
        if parent_node.kind is GroupingKind.GROUP and len(g.children_of(parent)) <= 2:
            continue
        movable.append(node.id)
    if not movable:
        return None
    node_id = rng.choice(movable)
    subtree = set(g.subtree_ids(node_id))
    targets = [n.id for n in _grouping_containers(doc) if n.id not in subtree]
    if not targets:
        return None
    return edit.move_node(doc, node_id, rng.choice(targets))


def _try_split(rng, doc):
    splittable = [
        e for e in doc.annotation.inventory
        if e.kind in (ElementKind.BLOB, ElementKind.TEXT)
    ]
    if not splittable:
        return None
    element = rng.choice(splittable)
    parts = rng.randint(2, 4)
    shapes = [gen_shape(rng) for _ in range(parts)]
    texts = None
    if element.kind is ElementKind.TEXT:
        texts = [gen_text(rng) for _ in range(parts)]
    return edit.split_element(doc, element.id, shapes, texts)


def _try_add_connectivity(rng, doc):
    arrows = [e for e in doc.annotation.inventory if e.kind is ElementKind.ARROW]
    refs = _non_arrowhead_refs(doc)
    if not arrows or not refs:
        return None
    source = rng.choice(refs)
    if rng.random() < 0.3:
        return edit.add_connectivity_edge(
            doc, source, None, rng.choice(arrows).id, open_ended=True,
            directed=rng.random() < 0.8,
        )
    return edit.add_connectivity_edge(
        doc, source, rng.choice(refs), rng.choice(arrows).id,
        directed=rng.random() < 0.8,
    )


def _try_add_relation(rng, doc):
    refs = _non_arrowhead_refs(doc)
    discourse = doc.annotation.discourse
    root_relations = [
        r.id for r in discourse.relations if not discourse.parents_of(r.id)
    ]
    pool = refs + root_relations
    if not pool:
        return None
    relation = rng.choice(REGISTRY.rst)

    def pick(k):
        return [rng.choice(pool) for _ in range(k)]

    if relation.nuclearity is Nuclearity.MONONUCLEAR:
        a, b = pick(2)
        children = [(a, Role.NUCLEUS), (b, Role.SATELLITE)]
    elif relation.nuclearity is Nuclearity.MULTINUCLEAR:
        children = [(ref, Role.NUCLEUS) for ref in pick(rng.randint(2, 4))]
    else:
        children = [
            (ref, rng.choice([Role.NUCLEUS, Role.SATELLITE]))
            for ref in pick(rng.randint(2, 3))
        ]
    used = set()
    deduped = []
    for ref, role in children:
        # the same relation node cannot be attached twice
        if ref in root_relations:
            if ref in used:
                return None
            used.add(ref)
        deduped.append((ref, role))
    return edit.add_relation(doc, relation.name, deduped)


def _try_attach_child(rng, doc):
    discourse = doc.annotation.discourse
    joints = [r.id for r in discourse.relations if r.relation_type == "joint"]
    refs = _non_arrowhead_refs(doc)
    if not joints or not refs:
        return None
    return edit.attach_child(doc, rng.choice(joints), rng.choice(refs), Role.NUCLEUS)


def _try_tag(rng, doc):
    groups = [
        n.id for n in doc.annotation.grouping.nodes if n.kind is GroupingKind.GROUP
    ]
    if not groups:
        return None
    return edit.tag_macro_group(doc, rng.choice(groups), gen_text(rng))


def _try_remove(rng, doc):
    discourse = doc.annotation.discourse
    roots = [r.id for r in discourse.relations if not discourse.parents_of(r.id)]
    edges = [e.id for e in doc.annotation.connectivity.edges]
    # only targets whose removal cannot dangle or starve another node
    candidates = roots + edges
    if not candidates:
        return None
    return edit.remove_node(doc, rng.choice(candidates))


OP_MAKERS = [
    _try_add_group,
    _try_move_node,
    _try_split,
    _try_add_connectivity,
    _try_add_relation,
    _try_add_relation,
    _try_attach_child,
    _try_tag,
    _try_remove,
]


def gen_edited_document(rng: random.Random, max_ops: int = 8) -> DiagramDocument:
    doc = gen_document(rng)
    for _ in range(rng.randint(0, max_ops)):
        maker = rng.choice(OP_MAKERS)
        try:
            result = maker(rng, doc)
        except EditError:
            continue
        if result is not None:
            doc = result
    return doc


# ---------------------------------------------------------------------------
# bare random graphs for the component/cycle oracles


def gen_random_dpg(rng: random.Random, max_nodes: int = 50) -> DiagramParseGraph:
    n = rng.randint(0, max_nodes)
    nodes = [f"N{i}" for i in range(n)]
    edges = []
    if n >= 2:
        for i in range(rng.randint(0, min(70, 2 * n))):
            a, b = rng.choice(nodes), rng.choice(nodes)
            edges.append(DpgEdge(id=f"E{i}", label="link", source=a, target=b))
    return DiagramParseGraph(nodes=nodes, edges=edges)


def gen_random_connectivity(rng: random.Random, max_nodes: int = 50) -> ConnectivityGraph:
    n = rng.randint(1, max_nodes)
    nodes = [f"N{i}" for i in range(n)]
    edges = []
    for i in range(rng.randint(0, min(70, 2 * n))):
        source = rng.choice(nodes)
        if rng.random() < 0.15:
            edges.append(
                ConnectivityEdge(
                    id=f"C{i}", source=source, target=None, connector=f"A{i}",
                    directed=True, open_ended=True,
                )
            )
        else:
            edges.append(
                ConnectivityEdge(
                    id=f"C{i}", source=source, target=rng.choice(nodes),
                    connector=f"A{i}", directed=rng.random() < 0.7,
                )
            )
    return ConnectivityGraph(edges=edges)
