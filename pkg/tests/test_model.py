import random

import pytest

from diaganno.errors import DuplicateElementId, ModelError, ShapeError
from diaganno.model import (
    Element,
    ElementKind,
    GroupingKind,
    GroupingNode,
    Shape,
    make_occurrence,
    natural_key,
    new_annotation,
    next_numbered_id,
    resolve_ref,
)

from generators import gen_elements


def text_el(eid, value="x"):
    return Element(eid, ElementKind.TEXT, Shape.make_rect(0, 0, 10, 10), text=value)


class TestShape:
    def test_rect_orientation(self):
        with pytest.raises(ShapeError):
            Shape.make_rect(10, 0, 5, 10)
        with pytest.raises(ShapeError):
            Shape.make_rect(0, 10, 5, 10)

    def test_polygon_minimum_vertices(self):
        with pytest.raises(ShapeError):
            Shape.make_polygon([(0, 0), (1, 1)])

    def test_polygon_negative_coordinates(self):
        with pytest.raises(ShapeError):
            Shape.make_polygon([(0, 0), (1, 1), (-1, 2)])

    def test_json_round_trip(self):
        rect = Shape.make_rect(1, 2, 3, 4)
        poly = Shape.make_polygon([(0, 0), (5, 0), (5, 5)])
        assert Shape.from_json_obj(rect.to_json_obj()) == rect
        assert Shape.from_json_obj(poly.to_json_obj()) == poly

    def test_bad_json(self):
        with pytest.raises(ShapeError):
            Shape.from_json_obj({"circle": [1, 2, 3]})


class TestElement:
    def test_text_exactly_on_text_kind(self):
        with pytest.raises(ModelError):
            Element("B0", ElementKind.BLOB, Shape.make_rect(0, 0, 1, 1), text="no")
        with pytest.raises(ModelError):
            Element("T0", ElementKind.TEXT, Shape.make_rect(0, 0, 1, 1))


class TestNewAnnotation:
    def test_empty_inventory(self):
        annotation = new_annotation([])
        assert [n.id for n in annotation.grouping.nodes] == ["I0"]
        assert annotation.grouping.edges == []
        assert annotation.connectivity.edges == []
        assert annotation.discourse.node_ids() == []
        assert annotation.edit_log == []

    def test_singleton(self):
        annotation = new_annotation([text_el("T0")])
        leaf = annotation.grouping.node("T0")
        assert leaf.kind is GroupingKind.LEAF
        assert leaf.element_ref == "T0"
        assert annotation.grouping.parent_of("T0") == "I0"

    def test_arrowheads_get_no_leaves(self, original_doc):
        grouping = original_doc.annotation.grouping
        leafed = {n.element_ref for n in grouping.nodes if n.kind is GroupingKind.LEAF}
        assert leafed == {
            "T0", "T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8",
            "B0", "A0", "A1", "A2", "A3", "A4",
        }

    def test_duplicate_ids_rejected(self):
        with pytest.raises(DuplicateElementId):
            new_annotation([text_el("T0"), text_el("T0")])


class TestResolveRef:
    def test_element(self, original_doc):
        resolved = resolve_ref(original_doc.annotation, "B0")
        assert isinstance(resolved, Element)
        assert resolved.kind is ElementKind.BLOB

    def test_group_node(self, decomposed_doc):
        resolved = resolve_ref(decomposed_doc.annotation, "G10")
        assert isinstance(resolved, GroupingNode)
        assert resolved.kind is GroupingKind.GROUP

    def test_absent_id(self, decomposed_doc):
        assert resolve_ref(decomposed_doc.annotation, "ZZ") is None


class TestIds:
    def test_natural_order(self):
        ids = ["R10", "R2", "R1", "T3"]
        assert sorted(ids, key=natural_key) == ["R1", "R2", "R10", "T3"]

    def test_fresh_ids_never_collide(self):
        rng = random.Random(7)
        for _ in range(50):
            existing = {f"G{rng.randint(0, 30)}" for _ in range(rng.randint(0, 12))}
            fresh = next_numbered_id("G", existing)
            assert fresh not in existing
            assert fresh.startswith("G")
            assert fresh[1:].isdigit()


class TestGroupingForest:
    def test_traversal_visits_each_node_once(self, decomposed_doc):
        grouping = decomposed_doc.annotation.grouping
        visited = []
        for root in grouping.roots():
            visited.extend(grouping.subtree_ids(root))
        assert sorted(visited) == sorted(n.id for n in grouping.nodes)
        assert len(visited) == len(set(visited))

    def test_macro_tag_rejected_on_leaf(self):
        with pytest.raises(ModelError):
            GroupingNode("T0", GroupingKind.LEAF, element_ref="T0", macro_group="x")


class TestArrowheadExclusion:
    def test_rejected_for_random_inventories(self):
        rng = random.Random(11)
        for _ in range(30):
            elements = gen_elements(rng)
            arrowheads = [e for e in elements if e.kind is ElementKind.ARROWHEAD]
            if not arrowheads:
                continue
            annotation = new_annotation(elements)
            with pytest.raises(ModelError):
                make_occurrence(annotation, rng.choice(arrowheads).id, "O1")

    def test_allowed_for_others(self, decomposed_doc):
        occ = make_occurrence(decomposed_doc.annotation, "T1", "O99")
        assert occ.target == "T1"
