"""Schema validation producing machine-readable findings.

Every check emits a finding instead of aborting, so one pass reports all
problems in a document. Error-severity codes:

====================== ======================================================
GROUPING_CYCLE         grouping edges form a cycle
MULTIPLE_PARENTS       grouping node with more than one parent
LEAF_DANGLING          grouping leaf references an unknown element
SINGLETON_GROUP        group node with fewer than two children
ENDPOINT_DANGLING      connectivity endpoint does not resolve
CONNECTOR_NOT_ARROW    connectivity connector is not an arrow element
OPEN_END_UNFLAGGED     connectivity edge without target not flagged open
NUCLEARITY_VIOLATION   relation node child roles break its nuclearity class
UNKNOWN_RELATION       discourse relation type missing from the registry
DISCOURSE_NOT_FOREST   discourse node with several parents, a cycle, or a
                       dangling intra-layer edge
ARROWHEAD_IN_DISCOURSE discourse leaf targets an arrowhead
EDGE_DANGLING          parse-graph edge endpoint outside the node set
UNKNOWN_AI2D_RELATION  parse-graph edge label missing from the registry
                       (warning unless strict)
CROSS_LAYER_DANGLING   discourse leaf target resolves nowhere
REPLAY_MISMATCH        edit log replay does not reproduce the current state
====================== ======================================================

Warnings: UNATTACHED_ELEMENT, UNCOVERED_ELEMENT, ISOLATED_NODE,
OPEN_FLAG_WITH_TARGET.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional

from . import analyze, edit
from .errors import EditError
from .model import (
    DiagramDocument,
    DiagramParseGraph,
    Element,
    ElementKind,
    GroupingKind,
    LayeredAnnotation,
    Role,
    natural_key,
    resolve_ref,
)
from .registry import RelationRegistry, default_registry


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass
class Finding:
    code: str
    severity: Severity
    refs: list[str]
    message: str

    def to_json_obj(self) -> dict:
        return {
            "code": self.code,
            "severity": self.severity.value,
            "refs": self.refs,
            "message": self.message,
        }


@dataclass
class ValidationReport:
    findings: list[Finding] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not any(f.severity is Severity.ERROR for f in self.findings)

    def errors(self) -> list[Finding]:
        return [f for f in self.findings if f.severity is Severity.ERROR]

    def warnings(self) -> list[Finding]:
        return [f for f in self.findings if f.severity is Severity.WARNING]

    def error_codes(self) -> set[str]:
        return {f.code for f in self.errors()}

    def extend(self, other: "ValidationReport") -> None:
        self.findings.extend(other.findings)

    def to_json_obj(self) -> dict:
        return {
            "passed": self.passed,
            "findings": [f.to_json_obj() for f in self.findings],
        }

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} ({len(self.errors())} errors, {len(self.warnings())} warnings)"


def _err(report: ValidationReport, code: str, refs: Iterable[str], message: str) -> None:
    report.findings.append(Finding(code, Severity.ERROR, sorted(refs, key=natural_key), message))


def _warn(report: ValidationReport, code: str, refs: Iterable[str], message: str) -> None:
    report.findings.append(
        Finding(code, Severity.WARNING, sorted(refs, key=natural_key), message)
    )


# ---------------------------------------------------------------------------
# grouping


def validate_grouping(annotation: LayeredAnnotation) -> ValidationReport:
    report = ValidationReport()
    grouping = annotation.grouping
    known_elements = annotation.element_ids()

    parent_count: dict[str, int] = {}
    for _, child in grouping.edges:
        parent_count[child] = parent_count.get(child, 0) + 1
    for node_id, count in sorted(parent_count.items(), key=lambda kv: natural_key(kv[0])):
        if count > 1:
            _err(
                report,
                "MULTIPLE_PARENTS",
                [node_id],
                f"grouping node {node_id} has {count} parents",
            )

    # Three-colour DFS over parent->child edges; a grey revisit is a cycle.
    WHITE, GREY, BLACK = 0, 1, 2
    colour = {n.id: WHITE for n in grouping.nodes}
    cycle_nodes: set[str] = set()

    def visit(node_id: str, stack: list[str]) -> None:
        colour[node_id] = GREY
        stack.append(node_id)
        for child in grouping.children_of(node_id):
            if child not in colour:
                continue  # dangling edge endpoint; leaf checks cover elements
            if colour[child] == GREY:
                cycle_nodes.update(stack[stack.index(child):])
            elif colour[child] == WHITE:
                visit(child, stack)
        stack.pop()
        colour[node_id] = BLACK

    for node in grouping.nodes:
        if colour[node.id] == WHITE:
            visit(node.id, [])
    if cycle_nodes:
        _err(
            report,
            "GROUPING_CYCLE",
            cycle_nodes,
            "grouping edges form a cycle through "
            + ", ".join(sorted(cycle_nodes, key=natural_key)),
        )

    leafed_elements: set[str] = set()
    for node in grouping.nodes:
        if node.kind is GroupingKind.LEAF:
            if node.element_ref not in known_elements:
                _err(
                    report,
                    "LEAF_DANGLING",
                    [node.id],
                    f"leaf {node.id} references unknown element {node.element_ref}",
                )
            else:
                leafed_elements.add(node.element_ref)
        elif node.kind is GroupingKind.GROUP:
            arity = len(grouping.children_of(node.id))
            if arity < 2:
                _err(
                    report,
                    "SINGLETON_GROUP",
                    [node.id],
                    f"group {node.id} has {arity} children (minimum is 2)",
                )

    for element in annotation.inventory:
        if element.kind is ElementKind.ARROWHEAD:
            continue
        if element.id not in leafed_elements:
            _warn(
                report,
                "UNATTACHED_ELEMENT",
                [element.id],
                f"element {element.id} has no grouping leaf",
            )
    return report


# ---------------------------------------------------------------------------
# connectivity


def validate_connectivity(annotation: LayeredAnnotation) -> ValidationReport:
    report = ValidationReport()
    for edge in annotation.connectivity.edges:
        for endpoint in (edge.source, edge.target):
            if endpoint is None:
                continue
            if resolve_ref(annotation, endpoint) is None:
                _err(
                    report,
                    "ENDPOINT_DANGLING",
                    [edge.id, endpoint],
                    f"edge {edge.id} endpoint {endpoint} does not resolve",
                )
        connector = annotation.element(edge.connector)
        if connector is None or connector.kind is not ElementKind.ARROW:
            _err(
                report,
                "CONNECTOR_NOT_ARROW",
                [edge.id, edge.connector],
                f"edge {edge.id} connector {edge.connector} is not an arrow element",
            )
        if edge.target is None and not edge.open_ended:
            _err(
                report,
                "OPEN_END_UNFLAGGED",
                [edge.id],
                f"edge {edge.id} has no target but is not flagged open-ended",
            )
        if edge.target is not None and edge.open_ended:
            _warn(
                report,
                "OPEN_FLAG_WITH_TARGET",
                [edge.id],
                f"edge {edge.id} is flagged open-ended yet has a target",
            )
    return report


# ---------------------------------------------------------------------------
# discourse


def validate_discourse(
    annotation: LayeredAnnotation, registry: Optional[RelationRegistry] = None
) -> ValidationReport:
    registry = registry or default_registry()
    report = ValidationReport()
    discourse = annotation.discourse
    node_ids = set(discourse.node_ids())

    known_types: set[str] = set()
    for rel in discourse.relations:
        if registry.rst_relation(rel.relation_type) is None:
            _err(
                report,
                "UNKNOWN_RELATION",
                [rel.id],
                f"relation {rel.id} has unknown type {rel.relation_type!r}",
            )
        else:
            known_types.add(rel.id)

    parent_count: dict[str, int] = {}
    for e in discourse.edges:
        parent_count[e.child] = parent_count.get(e.child, 0) + 1
        if e.child not in node_ids:
            _err(
                report,
                "DISCOURSE_NOT_FOREST",
                [e.parent, e.child],
                f"edge from {e.parent} references unknown discourse node {e.child}",
            )
        if e.parent not in node_ids:
            _err(
                report,
                "DISCOURSE_NOT_FOREST",
                [e.parent],
                f"edge parent {e.parent} is not a discourse node",
            )
    for child, count in sorted(parent_count.items(), key=lambda kv: natural_key(kv[0])):
        if count > 1:
            _err(
                report,
                "DISCOURSE_NOT_FOREST",
                [child],
                f"discourse node {child} has {count} parents",
            )

    WHITE, GREY, BLACK = 0, 1, 2
    colour = {nid: WHITE for nid in node_ids}
    cycle_nodes: set[str] = set()

    def visit(node_id: str, stack: list[str]) -> None:
        colour[node_id] = GREY
        stack.append(node_id)
        for child, _role in discourse.children_of(node_id):
            if child not in colour:
                continue
            if colour[child] == GREY:
                cycle_nodes.update(stack[stack.index(child):])
            elif colour[child] == WHITE:
                visit(child, stack)
        stack.pop()
        colour[node_id] = BLACK

    for nid in discourse.node_ids():
        if colour[nid] == WHITE:
            visit(nid, [])
    if cycle_nodes:
        _err(
            report,
            "DISCOURSE_NOT_FOREST",
            cycle_nodes,
            "discourse edges form a cycle through "
            + ", ".join(sorted(cycle_nodes, key=natural_key)),
        )

    for occ in discourse.occurrences:
        resolved = resolve_ref(annotation, occ.target)
        if isinstance(resolved, Element) and resolved.kind is ElementKind.ARROWHEAD:
            _err(
                report,
                "ARROWHEAD_IN_DISCOURSE",
                [occ.id, occ.target],
                f"occurrence {occ.id} targets arrowhead {occ.target}",
            )

    # Nuclearity is only judged for known relation types; an unknown type has
    # already been reported and has no arity rule to apply.
    for rel in discourse.relations:
        if rel.id not in known_types:
            continue
        roles = [role for _, role in discourse.children_of(rel.id)]
        if not registry.nuclearity_ok(rel.relation_type, roles):
            spec = registry.rst_relation(rel.relation_type)
            n = sum(1 for r in roles if r is Role.NUCLEUS)
            s = sum(1 for r in roles if r is Role.SATELLITE)
            _err(
                report,
                "NUCLEARITY_VIOLATION",
                [rel.id],
                f"{spec.nuclearity.value} relation {rel.id} ({rel.relation_type}) "
                f"has {n} nucleus and {s} satellite children",
            )

    for element_id in sorted(analyze.discourse_coverage(annotation), key=natural_key):
        _warn(
            report,
            "UNCOVERED_ELEMENT",
            [element_id],
            f"element {element_id} is not covered by any discourse leaf",
        )
    return report


# ---------------------------------------------------------------------------
# diagram parse graph


def validate_dpg(
    inventory: list[Element],
    dpg: DiagramParseGraph,
    registry: Optional[RelationRegistry] = None,
    strict: bool = False,
) -> ValidationReport:
    registry = registry or default_registry()
    report = ValidationReport()
    nodes = set(dpg.nodes)
    known_labels = registry.ai2d_names()
    for edge in dpg.edges:
        for endpoint in (edge.source, edge.target):
            if endpoint not in nodes:
                _err(
                    report,
                    "EDGE_DANGLING",
                    [edge.id, endpoint],
                    f"edge {edge.id} endpoint {endpoint} is not a graph node",
                )
        if edge.label not in known_labels:
            message = f"edge {edge.id} carries unknown relation label {edge.label!r}"
            if strict:
                _err(report, "UNKNOWN_AI2D_RELATION", [edge.id], message)
            else:
                _warn(report, "UNKNOWN_AI2D_RELATION", [edge.id], message)
    for node in sorted(analyze.isolated_dpg_nodes(dpg), key=natural_key):
        _warn(report, "ISOLATED_NODE", [node], f"node {node} has no incident edges")
    return report


# ---------------------------------------------------------------------------
# whole document


def validate_all(
    doc: DiagramDocument,
    registry: Optional[RelationRegistry] = None,
    strict: bool = False,
) -> ValidationReport:
    """Concatenated layer reports plus cross-layer checks.

    Beyond the per-layer validators this resolves every discourse leaf target
    and, when the document carries an edit log, replays it over the base
    snapshot and compares the outcome with the current state.
    """
    registry = registry or default_registry()
    annotation = doc.annotation
    report = ValidationReport()
    report.extend(validate_grouping(annotation))
    report.extend(validate_connectivity(annotation))
    report.extend(validate_discourse(annotation, registry))
    if doc.dpg is not None:
        report.extend(validate_dpg(annotation.inventory, doc.dpg, registry, strict=strict))

    for occ in annotation.discourse.occurrences:
        if resolve_ref(annotation, occ.target) is None:
            _err(
                report,
                "CROSS_LAYER_DANGLING",
                [occ.id, occ.target],
                f"discourse occurrence {occ.id} targets unresolved ref {occ.target}",
            )

    if annotation.edit_log:
        if doc.base is None:
            _err(
                report,
                "REPLAY_MISMATCH",
                [],
                "document has an edit log but no base snapshot to replay",
            )
        else:
            try:
                replayed = edit.replay(doc.base, annotation.edit_log)
            except EditError as exc:
                _err(report, "REPLAY_MISMATCH", [], f"edit log does not replay: {exc}")
            else:
                if not edit.same_state(replayed, doc):
                    _err(
                        report,
                        "REPLAY_MISMATCH",
                        [],
                        "replaying the edit log over the base snapshot does not "
                        "reproduce the current state",
                    )
    return report
