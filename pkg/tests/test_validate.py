import itertools
import random
from collections import Counter

import pytest

from diaganno import edit, validate
from diaganno.model import (
    DiscourseEdge,
    DpgEdge,
    Element,
    ElementKind,
    LeafOccurrence,
    RelationNode,
    Role,
    Shape,
    new_annotation,
    new_document,
    snapshot_document,
)
from diaganno.registry import default_registry

from generators import gen_edited_document
from oracles import brute_nuclearity_ok

REGISTRY = default_registry()


def text_el(eid, value="x"):
    return Element(eid, ElementKind.TEXT, Shape.make_rect(0, 0, 10, 10), text=value)


# ---------------------------------------------------------------------------
# direct nuclearity examples


class TestNuclearityExamples:
    def build(self, relation_type, roles):
        annotation = new_annotation([text_el("T0")])
        annotation.discourse.relations.append(RelationNode("R1", relation_type))
        for i, role in enumerate(roles, start=1):
            oid = f"O{i}"
            annotation.discourse.occurrences.append(LeafOccurrence(oid, "T0"))
            annotation.discourse.edges.append(DiscourseEdge("R1", oid, Role(role)))
        return annotation

    def test_identification_one_n_one_s_passes(self):
        report = validate.validate_discourse(self.build("identification", ["n", "s"]), REGISTRY)
        assert report.passed

    def test_disjunction_single_child_violates(self):
        report = validate.validate_discourse(self.build("disjunction", ["n"]), REGISTRY)
        assert report.error_codes() == {"NUCLEARITY_VIOLATION"}

    def test_cyclic_sequence_five_nuclei_passes(self):
        report = validate.validate_discourse(
            self.build("cyclic sequence", ["n"] * 5), REGISTRY
        )
        assert report.passed

    def test_joint_accepts_anything(self):
        for roles in ([], ["n"], ["s", "s"], ["n", "s", "n"]):
            report = validate.validate_discourse(self.build("joint", roles), REGISTRY)
            assert report.passed, roles


# ---------------------------------------------------------------------------
# fixture-level checks


class TestFixtures:
    def test_decomposed_passes_with_two_roots(self, decomposed_doc, registry):
        report = validate.validate_all(decomposed_doc, registry)
        assert report.passed
        assert set(decomposed_doc.annotation.grouping.roots()) == {"G10", "I0"}

    def test_decomposed_connectivity_a2(self, decomposed_doc):
        edge = next(
            e for e in decomposed_doc.annotation.connectivity.edges if e.connector == "A2"
        )
        assert (edge.source, edge.target) == ("T1", "T2")

    def test_original_dpg_isolated_warnings(self, original_doc, registry):
        report = validate.validate_dpg(
            original_doc.annotation.inventory, original_doc.dpg, registry
        )
        assert report.passed
        isolated = {f.refs[0] for f in report.warnings() if f.code == "ISOLATED_NODE"}
        assert isolated == {"B0", "T0", "T5", "T6", "T7", "T8"}

    def test_empty_dpg_no_findings(self, registry):
        from diaganno.model import DiagramParseGraph

        report = validate.validate_dpg([], DiagramParseGraph(), registry)
        assert report.findings == []

    def test_strict_vs_tolerant_unknown_label(self, original_doc, registry):
        doc = snapshot_document(original_doc)
        doc.dpg.edges[0].label = "mysteryRel"
        tolerant = validate.validate_dpg(doc.annotation.inventory, doc.dpg, registry)
        assert tolerant.passed
        assert any(f.code == "UNKNOWN_AI2D_RELATION" for f in tolerant.warnings())
        strict = validate.validate_dpg(
            doc.annotation.inventory, doc.dpg, registry, strict=True
        )
        assert strict.error_codes() == {"UNKNOWN_AI2D_RELATION"}


# ---------------------------------------------------------------------------
# seeded-fault soundness: each error code injected alone is reported alone


def _occurrence_of(doc, target):
    return next(o for o in doc.annotation.discourse.occurrences if o.target == target)


def mutate_grouping_cycle(doc):
    g = doc.annotation.grouping
    g.edges = [(p, c) for p, c in g.edges if (p, c) != ("I0", "G11")]
    g.edges.append(("G12", "G11"))


def mutate_multiple_parents(doc):
    doc.annotation.grouping.edges.append(("G11", "T0"))


def mutate_leaf_dangling(doc):
    doc.annotation.grouping.node("T0").element_ref = "ZZ"


def mutate_singleton_group(doc):
    g = doc.annotation.grouping
    g.edges = [(p, c) for p, c in g.edges if (p, c) != ("G12", "A4")]


def mutate_endpoint_dangling(doc):
    doc.annotation.connectivity.edges[0].target = "ZZ"


def mutate_connector_not_arrow(doc):
    doc.annotation.connectivity.edges[0].connector = "T3"


def mutate_open_end_unflagged(doc):
    edge = next(e for e in doc.annotation.connectivity.edges if e.target is None)
    edge.open_ended = False


def mutate_nuclearity(doc):
    edge = next(
        e for e in doc.annotation.discourse.edges
        if e.parent == "R1" and e.role is Role.SATELLITE
    )
    edge.role = Role.NUCLEUS


def mutate_unknown_relation(doc):
    doc.annotation.discourse.relation("R2").relation_type = "mystery"


def mutate_not_forest(doc):
    occ = _occurrence_of(doc, "T3")
    doc.annotation.discourse.edges.append(DiscourseEdge("R2", occ.id, Role.NUCLEUS))


def mutate_arrowhead_in_discourse(doc):
    _occurrence_of(doc, "T3").target = "H0"


def mutate_edge_dangling(doc):
    doc.dpg.edges[0].source = "ZZ"


def mutate_unknown_ai2d(doc):
    doc.dpg.edges[0].label = "mysteryRel"


def mutate_cross_layer_dangling(doc):
    _occurrence_of(doc, "T3").target = "ZZ"


MUTATIONS = {
    "GROUPING_CYCLE": (mutate_grouping_cycle, False),
    "MULTIPLE_PARENTS": (mutate_multiple_parents, False),
    "LEAF_DANGLING": (mutate_leaf_dangling, False),
    "SINGLETON_GROUP": (mutate_singleton_group, False),
    "ENDPOINT_DANGLING": (mutate_endpoint_dangling, False),
    "CONNECTOR_NOT_ARROW": (mutate_connector_not_arrow, False),
    "OPEN_END_UNFLAGGED": (mutate_open_end_unflagged, False),
    "NUCLEARITY_VIOLATION": (mutate_nuclearity, False),
    "UNKNOWN_RELATION": (mutate_unknown_relation, False),
    "DISCOURSE_NOT_FOREST": (mutate_not_forest, False),
    "ARROWHEAD_IN_DISCOURSE": (mutate_arrowhead_in_discourse, False),
    "EDGE_DANGLING": (mutate_edge_dangling, False),
    "UNKNOWN_AI2D_RELATION": (mutate_unknown_ai2d, True),
    "CROSS_LAYER_DANGLING": (mutate_cross_layer_dangling, False),
}


class TestSeededFaults:
    def test_at_least_twelve_error_codes(self):
        assert len(MUTATIONS) + 1 >= 12  # +1 for REPLAY_MISMATCH below

    @pytest.mark.parametrize("code", sorted(MUTATIONS))
    def test_single_fault_single_code(self, code, decomposed_doc, registry):
        mutator, strict = MUTATIONS[code]
        doc = snapshot_document(decomposed_doc)  # log-free copy
        clean = validate.validate_all(doc, registry, strict=strict)
        assert clean.passed
        mutator(doc)
        report = validate.validate_all(doc, registry, strict=strict)
        assert report.error_codes() == {code}

    def test_replay_mismatch(self, decomposed_doc, registry):
        assert validate.validate_all(decomposed_doc, registry).passed
        decomposed_doc.annotation.connectivity.edges.pop()
        report = validate.validate_all(decomposed_doc, registry)
        assert report.error_codes() == {"REPLAY_MISMATCH"}

    def test_log_present_base_missing(self, decomposed_doc, registry):
        decomposed_doc.base = None
        report = validate.validate_all(decomposed_doc, registry)
        assert report.error_codes() == {"REPLAY_MISMATCH"}


# ---------------------------------------------------------------------------
# exhaustive small-instance equivalence with a brute-force checker

TYPES = sorted(REGISTRY.rst_names())
LEAF = ("leaf",)


def _partitions(total, max_part=None):
    max_part = max_part if max_part is not None else total
    if total == 0:
        yield ()
        return
    for first in range(min(total, max_part), 0, -1):
        for rest in _partitions(total - first, first):
            yield (first,) + rest


_TREES: dict[int, list] = {}


def trees(size):
    if size in _TREES:
        return _TREES[size]
    if size == 1:
        out = [LEAF] + [("rel", t, ()) for t in TYPES]
    else:
        out = []
        for t in TYPES:
            for children in child_lists(size - 1):
                out.append(("rel", t, children))
    _TREES[size] = out
    return out


def child_lists(total):
    results = []
    for partition in _partitions(total):
        counts = Counter(partition)
        per_size = []
        for size in sorted(counts):
            options = [(role, tree) for role in ("n", "s") for tree in trees(size)]
            per_size.append(
                list(itertools.combinations_with_replacement(options, counts[size]))
            )
        for combo in itertools.product(*per_size):
            results.append(tuple(itertools.chain.from_iterable(combo)))
    return results


def forests(max_nodes):
    for total in range(1, max_nodes + 1):
        for partition in _partitions(total):
            counts = Counter(partition)
            per_size = []
            for size in sorted(counts):
                per_size.append(
                    list(itertools.combinations_with_replacement(trees(size), counts[size]))
                )
            for combo in itertools.product(*per_size):
                yield tuple(itertools.chain.from_iterable(combo))


def build_annotation(forest):
    annotation = new_annotation([text_el("T0")])
    discourse = annotation.discourse
    rel_counter = itertools.count(1)
    occ_counter = itertools.count(1)
    expect_flagged = set()

    def materialize(spec, parent, role):
        if spec == LEAF:
            oid = f"O{next(occ_counter)}"
            discourse.occurrences.append(LeafOccurrence(oid, "T0"))
            if parent is not None:
                discourse.edges.append(DiscourseEdge(parent, oid, Role(role)))
            return
        _, rtype, children = spec
        rid = f"R{next(rel_counter)}"
        discourse.relations.append(RelationNode(rid, rtype))
        if parent is not None:
            discourse.edges.append(DiscourseEdge(parent, rid, Role(role)))
        if not brute_nuclearity_ok(rtype, [r for r, _ in children]):
            expect_flagged.add(rid)
        for r, sub in children:
            materialize(sub, rid, r)

    for tree in forest:
        materialize(tree, None, None)
    return annotation, expect_flagged


class TestExhaustiveSmallInstances:
    def test_validator_equals_brute_force(self):
        checked = 0
        for forest in forests(4):
            annotation, expected = build_annotation(forest)
            report = validate.validate_discourse(annotation, REGISTRY)
            flagged = {
                f.refs[0]
                for f in report.errors()
                if f.code == "NUCLEARITY_VIOLATION"
            }
            assert flagged == expected, forest
            other = {f.code for f in report.errors()} - {"NUCLEARITY_VIOLATION"}
            assert not other, forest
            checked += 1
        assert checked > 10000


# ---------------------------------------------------------------------------
# generated annotations all validate; monotone under finding-free additions


class TestGeneratedAnnotations:
    def test_500_generated_documents_pass(self, registry):
        rng = random.Random(31415)
        for _ in range(500):
            doc = gen_edited_document(rng)
            report = validate.validate_all(doc, registry)
            assert report.passed, [f.to_json_obj() for f in report.errors()]

    def test_monotone_under_finding_free_additions(self, decomposed_doc, registry):
        doc = snapshot_document(decomposed_doc)
        assert validate.validate_all(doc, registry).passed
        doc = edit.add_relation(doc, "joint", [("T1", Role.NUCLEUS), ("T2", Role.NUCLEUS)])
        assert validate.validate_all(doc, registry).passed
        doc = edit.add_group(doc, "G11", ["T6", "T7"])
        assert validate.validate_all(doc, registry).passed
        doc = edit.add_connectivity_edge(doc, "T6", "T7", "A3")
        assert validate.validate_all(doc, registry).passed
