"""Graph diagnostics: components, cyclicity, coverage, macro-groups, stats.

Connected components are computed over the undirected skeleton of a graph.
Cycle detection considers directed, closed connectivity edges only: an
open-ended arrow indicates a direction of travel, not a connection between
two stages, so it can never witness a cycle.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from .codec import Ai2dParse, CorpusIndex
from .model import (
    ConnectivityEdge,
    ConnectivityGraph,
    DiagramDocument,
    DiagramParseGraph,
    Element,
    ElementKind,
    GroupingKind,
    LayeredAnnotation,
    natural_key,
    resolve_ref,
)


# ---------------------------------------------------------------------------
# connected components


def _undirected_adjacency(
    graph: Union[DiagramParseGraph, ConnectivityGraph]
) -> tuple[list[str], dict[str, set[str]]]:
    if isinstance(graph, DiagramParseGraph):
        nodes = list(dict.fromkeys(graph.nodes))
        pairs = [(e.source, e.target) for e in graph.edges]
    else:
        nodes = graph.node_refs()
        pairs = [
            (e.source, e.target) for e in graph.edges if e.target is not None
        ]
    adjacency: dict[str, set[str]] = {n: set() for n in nodes}
    for a, b in pairs:
        adjacency.setdefault(a, set()).add(b)
        adjacency.setdefault(b, set()).add(a)
    for n in adjacency:
        if n not in nodes:
            nodes.append(n)
    return nodes, adjacency


def connected_components(
    graph: Union[DiagramParseGraph, ConnectivityGraph]
) -> list[set[str]]:
    """Partition of the node set by undirected reachability, ordered by each
    component's smallest id."""
    nodes, adjacency = _undirected_adjacency(graph)
    seen: set[str] = set()
    components: list[set[str]] = []
    for start in nodes:
        if start in seen:
            continue
        component = {start}
        stack = [start]
        seen.add(start)
        while stack:
            cur = stack.pop()
            for nxt in adjacency.get(cur, ()):
                if nxt not in seen:
                    seen.add(nxt)
                    component.add(nxt)
                    stack.append(nxt)
        components.append(component)
    components.sort(key=lambda c: natural_key(min(c, key=natural_key)))
    return components


# ---------------------------------------------------------------------------
# cycle detection


def detect_cycle(connectivity: ConnectivityGraph) -> Optional[list[ConnectivityEdge]]:
    """A directed cycle as an edge sequence, or None.

    Implemented by Kahn-style peeling: repeatedly drop nodes without incoming
    edges; any remainder contains a cycle, which a forward walk then extracts.
    """
    edges = [e for e in connectivity.edges if e.directed and e.target is not None]
    if not edges:
        return None
    nodes = {e.source for e in edges} | {e.target for e in edges}
    indegree = {n: 0 for n in nodes}
    outgoing: dict[str, list[ConnectivityEdge]] = {n: [] for n in nodes}
    incoming: dict[str, list[ConnectivityEdge]] = {n: [] for n in nodes}
    for e in edges:
        indegree[e.target] += 1
        outgoing[e.source].append(e)
        incoming[e.target].append(e)

    queue = sorted((n for n in nodes if indegree[n] == 0), key=natural_key)
    remaining = set(nodes)
    while queue:
        cur = queue.pop()
        remaining.discard(cur)
        for e in outgoing[cur]:
            indegree[e.target] -= 1
            if indegree[e.target] == 0:
                queue.append(e.target)
    if not remaining:
        return None

    # Every remaining node kept an incoming edge whose source was never
    # peeled, so a backward walk inside the remainder must revisit a node.
    start = min(remaining, key=natural_key)
    backward: list[ConnectivityEdge] = []
    position: dict[str, int] = {start: 0}
    cur = start
    while True:
        step = next(e for e in incoming[cur] if e.source in remaining)
        backward.append(step)
        cur = step.source
        if cur in position:
            return list(reversed(backward[position[cur]:]))
        position[cur] = len(backward)


def has_connectivity_cycle(connectivity: ConnectivityGraph) -> bool:
    return detect_cycle(connectivity) is not None


# ---------------------------------------------------------------------------
# discourse coverage


def discourse_coverage(annotation: LayeredAnnotation) -> set[str]:
    """Ids of inventory elements (arrowheads aside) that no discourse leaf
    reaches, either directly or through a grouping node used as a target."""
    covered: set[str] = set()
    for occ in annotation.discourse.occurrences:
        resolved = resolve_ref(annotation, occ.target)
        if isinstance(resolved, Element):
            covered.add(resolved.id)
        elif resolved is not None:
            covered.update(annotation.grouping.subtree_elements(resolved.id))
    return {
        e.id
        for e in annotation.inventory
        if e.kind is not ElementKind.ARROWHEAD and e.id not in covered
    }


# ---------------------------------------------------------------------------
# macro-groups


@dataclass
class MacroGroup:
    node_id: str
    tag: str
    element_count: int
    node_count: int


def macro_groups(annotation: LayeredAnnotation) -> list[MacroGroup]:
    """All tagged grouping nodes with their subtree sizes."""
    found = []
    for node in annotation.grouping.nodes:
        if node.macro_group is None:
            continue
        subtree = annotation.grouping.subtree_ids(node.id)
        elements = annotation.grouping.subtree_elements(node.id)
        found.append(
            MacroGroup(
                node_id=node.id,
                tag=node.macro_group,
                element_count=len(elements),
                node_count=len(subtree),
            )
        )
    found.sort(key=lambda m: natural_key(m.node_id))
    return found


# ---------------------------------------------------------------------------
# per-diagram summary


@dataclass
class DiagnosticsSummary:
    diagram_id: str
    component_count: int
    isolated_nodes: set[str]
    has_connectivity_cycle: bool
    cycle_witness: Optional[list[str]]
    uncovered_elements: set[str]
    macro_groups: list[MacroGroup]
    grouping_roots: list[str]

    def to_json_obj(self) -> dict:
        return {
            "diagramId": self.diagram_id,
            "connectivityComponents": self.component_count,
            "isolatedDpgNodes": sorted(self.isolated_nodes, key=natural_key),
            "hasConnectivityCycle": self.has_connectivity_cycle,
            "cycleWitness": self.cycle_witness,
            "uncoveredElements": sorted(self.uncovered_elements, key=natural_key),
            "macroGroups": [
                {"nodeId": m.node_id, "tag": m.tag, "elements": m.element_count}
                for m in self.macro_groups
            ],
            "groupingRoots": sorted(self.grouping_roots, key=natural_key),
        }

    def to_text(self) -> str:
        lines = [f"diagram {self.diagram_id or '(unnamed)'}"]
        witness = (
            "none"
            if not self.has_connectivity_cycle
            else " -> ".join(self.cycle_witness)
        )
        lines.append(f"  connectivity cycle: {witness}")
        lines.append(f"  connectivity components: {self.component_count}")
        roots = ", ".join(sorted(self.grouping_roots, key=natural_key)) or "none"
        lines.append(f"  grouping roots: {roots}")
        isolated = ", ".join(sorted(self.isolated_nodes, key=natural_key)) or "none"
        lines.append(f"  dpg isolated nodes: {isolated}")
        macros = (
            ", ".join(
                f'{m.node_id} "{m.tag}" ({m.element_count} elements)'
                for m in self.macro_groups
            )
            or "none"
        )
        lines.append(f"  macro groups: {macros}")
        uncovered = ", ".join(sorted(self.uncovered_elements, key=natural_key)) or "none"
        lines.append(f"  uncovered elements: {uncovered}")
        return "\n".join(lines)


def isolated_dpg_nodes(dpg: DiagramParseGraph) -> set[str]:
    touched = {e.source for e in dpg.edges} | {e.target for e in dpg.edges}
    return {n for n in dpg.nodes if n not in touched}


def diagnostics(doc: DiagramDocument) -> DiagnosticsSummary:
    annotation = doc.annotation
    witness_edges = detect_cycle(annotation.connectivity)
    witness = None
    if witness_edges is not None:
        witness = [e.source for e in witness_edges] + [witness_edges[-1].target]
    return DiagnosticsSummary(
        diagram_id=doc.diagram_id,
        component_count=len(connected_components(annotation.connectivity)),
        isolated_nodes=isolated_dpg_nodes(doc.dpg) if doc.dpg is not None else set(),
        has_connectivity_cycle=witness_edges is not None,
        cycle_witness=witness,
        uncovered_elements=discourse_coverage(annotation),
        macro_groups=macro_groups(annotation),
        grouping_roots=annotation.grouping.roots(),
    )


# ---------------------------------------------------------------------------
# corpus statistics


@dataclass
class CorpusStats:
    diagram_count: int = 0
    category_counts: dict[str, int] = field(default_factory=dict)
    element_kinds: dict[str, int] = field(default_factory=dict)
    dpg_labels: dict[str, int] = field(default_factory=dict)
    rst_types: dict[str, int] = field(default_factory=dict)
    component_distribution: dict[int, int] = field(default_factory=dict)

    def to_json_obj(self) -> dict:
        return {
            "diagrams": self.diagram_count,
            "categories": dict(sorted(self.category_counts.items())),
            "elementKinds": dict(sorted(self.element_kinds.items())),
            "dpgLabels": dict(sorted(self.dpg_labels.items())),
            "rstTypes": dict(sorted(self.rst_types.items())),
            "dpgComponentCounts": {
                str(k): v for k, v in sorted(self.component_distribution.items())
            },
        }

    def to_text(self) -> str:
        def block(title: str, counts: dict) -> list[str]:
            lines = [f"{title}:"]
            if not counts:
                lines.append("  (none)")
            width = max((len(str(k)) for k in counts), default=0)
            for key in sorted(counts, key=str):
                lines.append(f"  {str(key).ljust(width)}  {counts[key]}")
            return lines

        lines = [f"diagrams: {self.diagram_count}"]
        lines += block("categories", self.category_counts)
        lines += block("element kinds", self.element_kinds)
        lines += block("dpg relation labels", self.dpg_labels)
        lines += block("rst relation types", self.rst_types)
        lines += block(
            "dpg component counts", {str(k): v for k, v in self.component_distribution.items()}
        )
        return "\n".join(lines)


def corpus_stats(
    index: CorpusIndex,
    parses: dict[str, Ai2dParse],
    annotations: Optional[dict[str, LayeredAnnotation]] = None,
) -> CorpusStats:
    """Aggregate counts over parsed corpus diagrams.

    ``parses`` maps diagram id to its ingestion result; ``annotations`` maps
    diagram id to a layered annotation where one exists.
    """
    stats = CorpusStats()
    categories: Counter = Counter()
    kinds: Counter = Counter()
    labels: Counter = Counter()
    rst: Counter = Counter()
    components: Counter = Counter()
    for entry in index.entries:
        parsed = parses.get(entry.diagram_id)
        if parsed is None:
            continue
        stats.diagram_count += 1
        categories[entry.category] += 1
        for e in parsed.inventory:
            kinds[e.kind.value] += 1
        for edge in parsed.dpg.edges:
            labels[edge.label] += 1
        components[len(connected_components(parsed.dpg))] += 1
        if annotations and entry.diagram_id in annotations:
            for rel in annotations[entry.diagram_id].discourse.relations:
                rst[rel.relation_type] += 1
    stats.category_counts = dict(categories)
    stats.element_kinds = dict(kinds)
    stats.dpg_labels = dict(labels)
    stats.rst_types = dict(rst)
    stats.component_distribution = dict(components)
    return stats
