"""Provenance-tracked edit operations over diagram documents.

Every public helper records an :class:`~diaganno.model.EditOp` with all
generated identifiers frozen into its params, applies it to a deep copy of
the document and returns the new version; the original is never touched.
Replaying a recorded log over the base snapshot therefore reproduces the
current state byte for byte.

Deletion is tombstoning: split parents and removed elements move to the
retired list so provenance chains and replay stay total.
"""

from __future__ import annotations

import copy
from typing import Iterable, Optional, Sequence, Union

from .errors import (
    ArrowheadNotAllowed,
    BadConnector,
    DanglingRef,
    EditError,
    NuclearityViolation,
    ReplayDivergence,
    SplitArrowheadForbidden,
    TooFewParts,
    UnknownElement,
    UnknownRelationType,
    UnsplittableElement,
)
from .model import (
    ConnectivityEdge,
    DiagramDocument,
    DiscourseEdge,
    EditOp,
    Element,
    ElementKind,
    ElementProvenance,
    GroupingKind,
    GroupingNode,
    KIND_ID_PREFIX,
    LeafOccurrence,
    RelationNode,
    Role,
    Shape,
    make_occurrence,
    next_numbered_id,
    resolve_ref,
    snapshot_document,
)
from .errors import ModelError
from .registry import RelationRegistry, default_registry

SPLIT_ELEMENT = "splitElement"
ADD_GROUP = "addGroup"
MOVE_NODE = "moveNode"
ADD_CONNECTIVITY_EDGE = "addConnectivityEdge"
ADD_RELATION = "addRelation"
ATTACH_CHILD = "attachChild"
REMOVE_NODE = "removeNode"
TAG_MACRO_GROUP = "tagMacroGroup"

OP_KINDS = {
    SPLIT_ELEMENT,
    ADD_GROUP,
    MOVE_NODE,
    ADD_CONNECTIVITY_EDGE,
    ADD_RELATION,
    ATTACH_CHILD,
    REMOVE_NODE,
    TAG_MACRO_GROUP,
}


def _used_ids(doc: DiagramDocument) -> set[str]:
    used = doc.annotation.all_known_ids()
    used.update(op.op_id for op in doc.annotation.edit_log)
    if doc.dpg is not None:
        used.update(doc.dpg.nodes)
        used.update(e.id for e in doc.dpg.edges)
    return used


def _fresh(prefix: str, used: set[str]) -> str:
    new_id = next_numbered_id(prefix, used)
    used.add(new_id)
    return new_id


# ---------------------------------------------------------------------------
# applying ops


def apply_op(
    doc: DiagramDocument,
    op: EditOp,
    eager_nuclearity: bool = True,
    registry: Optional[RelationRegistry] = None,
) -> DiagramDocument:
    """Apply one op, returning a new document version with the op appended."""
    if op.kind not in OP_KINDS:
        raise EditError(f"unknown edit op kind {op.kind!r}")
    new_doc = copy.deepcopy(doc)
    if new_doc.base is None:
        new_doc.base = snapshot_document(doc)
    _APPLIERS[op.kind](new_doc, op.params, eager_nuclearity, registry or default_registry())
    new_doc.annotation.edit_log.append(copy.deepcopy(op))
    return new_doc


def replay(initial: DiagramDocument, ops: Iterable[EditOp]) -> DiagramDocument:
    """Deterministically re-apply a recorded log over its base annotation.

    Nuclearity is not re-enforced: the log was accepted once already. Any
    structural failure means the log and the document diverged.
    """
    if initial.annotation.edit_log:
        raise ReplayDivergence("replay must start from a log-free annotation")
    doc = initial
    for op in ops:
        try:
            doc = apply_op(doc, op, eager_nuclearity=False)
        except ReplayDivergence:
            raise
        except EditError as exc:
            raise ReplayDivergence(f"op {op.op_id} ({op.kind}) failed: {exc}") from exc
    return doc


def same_state(a: DiagramDocument, b: DiagramDocument) -> bool:
    """Equality of current state, ignoring edit log and base snapshot."""
    return (
        a.annotation.inventory == b.annotation.inventory
        and a.annotation.retired == b.annotation.retired
        and a.annotation.grouping == b.annotation.grouping
        and a.annotation.connectivity == b.annotation.connectivity
        and a.annotation.discourse == b.annotation.discourse
        and a.dpg == b.dpg
    )


# ---------------------------------------------------------------------------
# split


def split_element(
    doc: DiagramDocument,
    element_id: str,
    sub_shapes: Sequence[Shape],
    sub_texts: Optional[Sequence[str]] = None,
    group_id: Optional[str] = None,
    child_ids: Optional[Sequence[str]] = None,
    op_id: Optional[str] = None,
    timestamp: str = "",
) -> DiagramDocument:
    """Decompose a blob or text element into parts.

    The parent is retired, the children carry provenance back to it, its
    grouping leaf becomes a group over the child leaves, and references to it
    in the other layers are rewritten to that group node.
    """
    element = doc.annotation.element(element_id)
    if element is None:
        raise UnknownElement(f"no element {element_id}")
    if element.kind is ElementKind.ARROWHEAD:
        raise SplitArrowheadForbidden(f"{element_id} is an arrowhead")
    if element.kind is ElementKind.ARROW:
        raise UnsplittableElement(f"{element_id} is an arrow; only blobs and text split")
    if len(sub_shapes) < 2:
        raise TooFewParts(f"split needs at least 2 parts, got {len(sub_shapes)}")
    if sub_texts is not None and len(sub_texts) != len(sub_shapes):
        raise TooFewParts("sub_texts must match sub_shapes in length")

    used = _used_ids(doc)
    if group_id is None:
        group_id = _fresh("G", used)
    children = list(child_ids) if child_ids else []
    while len(children) < len(sub_shapes):
        children.append(_fresh(KIND_ID_PREFIX[element.kind], used))

    parts = []
    for i, shape in enumerate(sub_shapes):
        part = {"shape": shape.to_json_obj()}
        if element.kind is ElementKind.TEXT:
            part["text"] = sub_texts[i] if sub_texts else ""
        parts.append(part)

    op = EditOp(
        op_id=op_id or _fresh("op", used),
        kind=SPLIT_ELEMENT,
        params={
            "element": element_id,
            "parts": parts,
            "children": children,
            "group": group_id,
        },
        timestamp=timestamp,
    )
    return apply_op(doc, op)


def _apply_split(doc, params, eager, registry):
    annotation = doc.annotation
    element_id = params["element"]
    element = annotation.element(element_id)
    if element is None:
        raise UnknownElement(f"no element {element_id}")
    if element.kind is ElementKind.ARROWHEAD:
        raise SplitArrowheadForbidden(f"{element_id} is an arrowhead")
    if element.kind is ElementKind.ARROW:
        raise UnsplittableElement(f"{element_id} is an arrow; only blobs and text split")
    parts = params["parts"]
    children = params["children"]
    group_id = params["group"]
    if len(parts) < 2:
        raise TooFewParts(f"split needs at least 2 parts, got {len(parts)}")
    if len(children) != len(parts):
        raise EditError("recorded child ids do not match part count")
    used = _used_ids(doc)
    for new_id in [group_id, *children]:
        if new_id in used:
            raise EditError(f"generated id {new_id} collides with an existing id")

    new_elements = []
    for ordinal, (part, child_id) in enumerate(zip(parts, children)):
        try:
            shape = Shape.from_json_obj(part["shape"])
        except ModelError as exc:
            raise EditError(f"bad part shape: {exc}") from exc
        text = part.get("text") if element.kind is ElementKind.TEXT else None
        if element.kind is ElementKind.TEXT and text is None:
            text = ""
        new_elements.append(
            Element(
                id=child_id,
                kind=element.kind,
                shape=shape,
                text=text,
                provenance=ElementProvenance(parent=element_id, ordinal=ordinal),
            )
        )

    index = annotation.inventory.index(element)
    annotation.inventory[index:index + 1] = new_elements
    annotation.retired.append(element)

    grouping = annotation.grouping
    group_node = GroupingNode(group_id, GroupingKind.GROUP)
    leaf = grouping.leaf_for_element(element_id)
    if leaf is not None:
        node_index = grouping.nodes.index(leaf)
        grouping.nodes[node_index] = group_node
        for i, (p, c) in enumerate(grouping.edges):
            if c == leaf.id:
                grouping.edges[i] = (p, group_id)
            elif p == leaf.id:
                grouping.edges[i] = (group_id, c)
    else:
        grouping.nodes.append(group_node)
    for child in new_elements:
        grouping.nodes.append(GroupingNode(child.id, GroupingKind.LEAF, element_ref=child.id))
        grouping.edges.append((group_id, child.id))

    for edge in annotation.connectivity.edges:
        if edge.source == element_id:
            edge.source = group_id
        if edge.target == element_id:
            edge.target = group_id
    for occ in annotation.discourse.occurrences:
        if occ.target == element_id:
            occ.target = group_id
    if doc.dpg is not None:
        doc.dpg.nodes = [group_id if n == element_id else n for n in doc.dpg.nodes]
        for dedge in doc.dpg.edges:
            if dedge.source == element_id:
                dedge.source = group_id
            if dedge.target == element_id:
                dedge.target = group_id


# ---------------------------------------------------------------------------
# grouping edits


def add_group(
    doc: DiagramDocument,
    parent_id: Optional[str],
    member_ids: Sequence[str],
    group_id: Optional[str] = None,
    op_id: Optional[str] = None,
    timestamp: str = "",
) -> DiagramDocument:
    """Group at least two existing grouping nodes under a new group node."""
    used = _used_ids(doc)
    op = EditOp(
        op_id=op_id or _fresh("op", used),
        kind=ADD_GROUP,
        params={
            "parent": parent_id,
            "members": list(member_ids),
            "group": group_id or _fresh("G", used),
        },
        timestamp=timestamp,
    )
    return apply_op(doc, op)


def _apply_add_group(doc, params, eager, registry):
    grouping = doc.annotation.grouping
    parent_id = params["parent"]
    members = params["members"]
    group_id = params["group"]
    if len(members) < 2:
        raise TooFewParts(f"a group needs at least 2 members, got {len(members)}")
    if group_id in _used_ids(doc):
        raise EditError(f"generated id {group_id} collides with an existing id")
    if parent_id is not None:
        parent = grouping.node(parent_id)
        if parent is None:
            raise DanglingRef(f"no grouping node {parent_id}")
        if parent.kind is GroupingKind.LEAF:
            raise EditError(f"cannot attach a group under leaf {parent_id}")
    for member in members:
        if grouping.node(member) is None:
            raise DanglingRef(f"no grouping node {member}")
        if parent_id is not None and parent_id in grouping.subtree_ids(member):
            raise EditError(f"grouping {member} under {parent_id} would create a cycle")

    grouping.nodes.append(GroupingNode(group_id, GroupingKind.GROUP))
    member_set = set(members)
    insert_at = len(grouping.edges)
    for i, (_, c) in enumerate(grouping.edges):
        if c in member_set:
            insert_at = i
            break
    grouping.edges = [(p, c) for p, c in grouping.edges if c not in member_set]
    if parent_id is not None:
        grouping.edges.insert(min(insert_at, len(grouping.edges)), (parent_id, group_id))
    for member in members:
        grouping.edges.append((group_id, member))


def move_node(
    doc: DiagramDocument,
    node_id: str,
    new_parent_id: Optional[str],
    op_id: Optional[str] = None,
    timestamp: str = "",
) -> DiagramDocument:
    """Re-parent a grouping node; a None parent detaches it as a new root."""
    used = _used_ids(doc)
    op = EditOp(
        op_id=op_id or _fresh("op", used),
        kind=MOVE_NODE,
        params={"node": node_id, "parent": new_parent_id},
        timestamp=timestamp,
    )
    return apply_op(doc, op)


def _apply_move_node(doc, params, eager, registry):
    grouping = doc.annotation.grouping
    node_id = params["node"]
    parent_id = params["parent"]
    if grouping.node(node_id) is None:
        raise DanglingRef(f"no grouping node {node_id}")
    if parent_id is not None:
        parent = grouping.node(parent_id)
        if parent is None:
            raise DanglingRef(f"no grouping node {parent_id}")
        if parent.kind is GroupingKind.LEAF:
            raise EditError(f"cannot attach under leaf {parent_id}")
        if parent_id == node_id or parent_id in grouping.subtree_ids(node_id):
            raise EditError(f"moving {node_id} under {parent_id} would create a cycle")
    grouping.edges = [(p, c) for p, c in grouping.edges if c != node_id]
    if parent_id is not None:
        grouping.edges.append((parent_id, node_id))


def tag_macro_group(
    doc: DiagramDocument,
    node_id: str,
    tag: Optional[str],
    op_id: Optional[str] = None,
    timestamp: str = "",
) -> DiagramDocument:
    """Set or clear the macro-group tag on a group or diagram-root node."""
    used = _used_ids(doc)
    op = EditOp(
        op_id=op_id or _fresh("op", used),
        kind=TAG_MACRO_GROUP,
        params={"node": node_id, "tag": tag},
        timestamp=timestamp,
    )
    return apply_op(doc, op)


def _apply_tag_macro_group(doc, params, eager, registry):
    node = doc.annotation.grouping.node(params["node"])
    if node is None:
        raise DanglingRef(f"no grouping node {params['node']}")
    if node.kind is GroupingKind.LEAF:
        raise EditError(f"leaf {node.id} cannot carry a macro-group tag")
    node.macro_group = params["tag"]


# ---------------------------------------------------------------------------
# connectivity edits


def add_connectivity_edge(
    doc: DiagramDocument,
    source: str,
    target: Optional[str],
    connector: str,
    directed: bool = True,
    open_ended: bool = False,
    edge_id: Optional[str] = None,
    op_id: Optional[str] = None,
    timestamp: str = "",
) -> DiagramDocument:
    used = _used_ids(doc)
    op = EditOp(
        op_id=op_id or _fresh("op", used),
        kind=ADD_CONNECTIVITY_EDGE,
        params={
            "edge": edge_id or _fresh("C", used),
            "source": source,
            "target": target,
            "connector": connector,
            "directed": directed,
            "openEnded": open_ended,
        },
        timestamp=timestamp,
    )
    return apply_op(doc, op)


def _apply_add_connectivity_edge(doc, params, eager, registry):
    annotation = doc.annotation
    edge_id = params["edge"]
    if edge_id in _used_ids(doc):
        raise EditError(f"generated id {edge_id} collides with an existing id")
    source = params["source"]
    target = params["target"]
    open_ended = bool(params["openEnded"])
    if resolve_ref(annotation, source) is None:
        raise DanglingRef(f"source {source} does not resolve")
    if target is None and not open_ended:
        raise DanglingRef("edge without a target must be flagged open-ended")
    if target is not None and resolve_ref(annotation, target) is None:
        raise DanglingRef(f"target {target} does not resolve")
    connector = annotation.element(params["connector"])
    if connector is None or connector.kind is not ElementKind.ARROW:
        raise BadConnector(f"connector {params['connector']} is not an arrow element")
    annotation.connectivity.edges.append(
        ConnectivityEdge(
            id=edge_id,
            source=source,
            target=target,
            connector=connector.id,
            directed=bool(params["directed"]),
            open_ended=open_ended,
        )
    )


# ---------------------------------------------------------------------------
# discourse edits


def _normalize_children(
    children: Sequence[tuple[str, Union[str, Role]]]
) -> list[tuple[str, Role]]:
    out = []
    for ref, role in children:
        out.append((ref, Role(role)))
    return out


def add_relation(
    doc: DiagramDocument,
    relation_type: str,
    children: Sequence[tuple[str, Union[str, Role]]],
    relation_id: Optional[str] = None,
    eager_nuclearity: bool = True,
    registry: Optional[RelationRegistry] = None,
    op_id: Optional[str] = None,
    timestamp: str = "",
) -> DiagramDocument:
    """Add a relation node over element/group refs or existing root relations.

    Element and group refs always materialize a fresh leaf occurrence, so a
    target already used elsewhere simply gains a duplicate occurrence and the
    forest property is preserved.
    """
    used = _used_ids(doc)
    normalized = _normalize_children(children)
    recorded = []
    for ref, role in normalized:
        if doc.annotation.discourse.relation(ref) is not None:
            recorded.append({"ref": ref, "role": role.value, "occurrence": None})
        else:
            recorded.append({"ref": ref, "role": role.value, "occurrence": _fresh("O", used)})
    op = EditOp(
        op_id=op_id or _fresh("op", used),
        kind=ADD_RELATION,
        params={
            "relation": relation_id or _fresh("R", used),
            "type": relation_type,
            "children": recorded,
        },
        timestamp=timestamp,
    )
    return apply_op(doc, op, eager_nuclearity=eager_nuclearity, registry=registry)


def _attach_one_child(doc, relation_id, child, registry):
    """Wire one recorded child under a relation node; returns its role."""
    annotation = doc.annotation
    discourse = annotation.discourse
    ref = child["ref"]
    role = Role(child["role"])
    occurrence_id = child.get("occurrence")
    if occurrence_id is None:
        target_relation = discourse.relation(ref)
        if target_relation is None:
            raise DanglingRef(f"no relation node {ref} to attach")
        if discourse.parents_of(ref):
            raise EditError(f"relation {ref} already has a parent")
        discourse.edges.append(DiscourseEdge(parent=relation_id, child=ref, role=role))
        return role
    if occurrence_id in {o.id for o in discourse.occurrences} or discourse.relation(
        occurrence_id
    ):
        raise EditError(f"occurrence id {occurrence_id} collides with an existing id")
    if resolve_ref(annotation, ref) is None:
        raise DanglingRef(f"child ref {ref} does not resolve")
    try:
        occurrence = make_occurrence(annotation, ref, occurrence_id)
    except ModelError as exc:
        raise ArrowheadNotAllowed(str(exc)) from exc
    discourse.occurrences.append(occurrence)
    discourse.edges.append(DiscourseEdge(parent=relation_id, child=occurrence_id, role=role))
    return role


def _apply_add_relation(doc, params, eager, registry):
    discourse = doc.annotation.discourse
    relation_id = params["relation"]
    relation_type = params["type"]
    if registry.rst_relation(relation_type) is None:
        raise UnknownRelationType(f"unknown relation type {relation_type!r}")
    if relation_id in _used_ids(doc):
        raise EditError(f"generated id {relation_id} collides with an existing id")
    discourse.relations.append(RelationNode(id=relation_id, relation_type=relation_type))
    roles = []
    for child in params["children"]:
        roles.append(_attach_one_child(doc, relation_id, child, registry))
    if eager and not registry.nuclearity_ok(relation_type, roles):
        raise NuclearityViolation(
            f"{relation_type} cannot take roles {[r.value for r in roles]}"
        )


def attach_child(
    doc: DiagramDocument,
    relation_id: str,
    ref: str,
    role: Union[str, Role],
    eager_nuclearity: bool = True,
    registry: Optional[RelationRegistry] = None,
    op_id: Optional[str] = None,
    timestamp: str = "",
) -> DiagramDocument:
    used = _used_ids(doc)
    occurrence = None
    if doc.annotation.discourse.relation(ref) is None:
        occurrence = _fresh("O", used)
    op = EditOp(
        op_id=op_id or _fresh("op", used),
        kind=ATTACH_CHILD,
        params={
            "relation": relation_id,
            "child": {"ref": ref, "role": Role(role).value, "occurrence": occurrence},
        },
        timestamp=timestamp,
    )
    return apply_op(doc, op, eager_nuclearity=eager_nuclearity, registry=registry)


def _apply_attach_child(doc, params, eager, registry):
    discourse = doc.annotation.discourse
    relation_id = params["relation"]
    relation = discourse.relation(relation_id)
    if relation is None:
        raise DanglingRef(f"no relation node {relation_id}")
    _attach_one_child(doc, relation_id, params["child"], registry)
    if eager:
        roles = [role for _, role in discourse.children_of(relation_id)]
        if registry.rst_relation(relation.relation_type) and not registry.nuclearity_ok(
            relation.relation_type, roles
        ):
            raise NuclearityViolation(
                f"{relation.relation_type} cannot take roles {[r.value for r in roles]}"
            )


# ---------------------------------------------------------------------------
# removal


def remove_node(
    doc: DiagramDocument,
    node_id: str,
    op_id: Optional[str] = None,
    timestamp: str = "",
) -> DiagramDocument:
    """Remove a discourse node, grouping node, connectivity edge or element.

    Children of removed containers are promoted in place; removed elements
    must be unreferenced and are retired, not erased.
    """
    used = _used_ids(doc)
    op = EditOp(
        op_id=op_id or _fresh("op", used),
        kind=REMOVE_NODE,
        params={"node": node_id},
        timestamp=timestamp,
    )
    return apply_op(doc, op)


def _apply_remove_node(doc, params, eager, registry):
    annotation = doc.annotation
    node_id = params["node"]
    discourse = annotation.discourse

    relation = discourse.relation(node_id)
    if relation is not None:
        child_occurrences = {
            child for child, _ in discourse.children_of(node_id)
            if discourse.occurrence(child) is not None
        }
        discourse.relations.remove(relation)
        discourse.occurrences = [
            o for o in discourse.occurrences if o.id not in child_occurrences
        ]
        discourse.edges = [
            e for e in discourse.edges if e.parent != node_id and e.child != node_id
        ]
        return

    occurrence = discourse.occurrence(node_id)
    if occurrence is not None:
        discourse.occurrences.remove(occurrence)
        discourse.edges = [e for e in discourse.edges if e.child != node_id]
        return

    grouping = annotation.grouping
    gnode = grouping.node(node_id)
    if gnode is not None:
        if gnode.kind is GroupingKind.DIAGRAM_ROOT:
            raise EditError(f"diagram root {node_id} cannot be removed")
        parent = grouping.parent_of(node_id)
        children = grouping.children_of(node_id)
        grouping.nodes.remove(gnode)
        new_edges = []
        for p, c in grouping.edges:
            if c == node_id:
                # promote the removed node's children in place
                if parent is not None:
                    new_edges.extend((parent, child) for child in children)
            elif p == node_id:
                if parent is None:
                    continue  # children already promoted to roots
            else:
                new_edges.append((p, c))
        grouping.edges = new_edges
        return

    for edge in annotation.connectivity.edges:
        if edge.id == node_id:
            annotation.connectivity.edges.remove(edge)
            return

    element = annotation.element(node_id)
    if element is not None:
        refs = []
        if grouping.leaf_for_element(node_id) is not None:
            refs.append("grouping leaf")
        for edge in annotation.connectivity.edges:
            if node_id in (edge.source, edge.target, edge.connector):
                refs.append(f"connectivity edge {edge.id}")
        for occ in discourse.occurrences:
            if occ.target == node_id:
                refs.append(f"discourse occurrence {occ.id}")
        if doc.dpg is not None:
            for dedge in doc.dpg.edges:
                if node_id in (dedge.source, dedge.target):
                    refs.append(f"dpg edge {dedge.id}")
        if refs:
            raise EditError(
                f"element {node_id} is still referenced by: " + ", ".join(refs)
            )
        annotation.inventory.remove(element)
        annotation.retired.append(element)
        if doc.dpg is not None:
            doc.dpg.nodes = [n for n in doc.dpg.nodes if n != node_id]
        return

    raise DanglingRef(f"nothing named {node_id} to remove")


_APPLIERS = {
    SPLIT_ELEMENT: _apply_split,
    ADD_GROUP: _apply_add_group,
    MOVE_NODE: _apply_move_node,
    ADD_CONNECTIVITY_EDGE: _apply_add_connectivity_edge,
    ADD_RELATION: _apply_add_relation,
    ATTACH_CHILD: _apply_attach_child,
    REMOVE_NODE: _apply_remove_node,
    TAG_MACRO_GROUP: _apply_tag_macro_group,
}
