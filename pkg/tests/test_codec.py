import json
import random

import pytest

from diaganno import codec
from diaganno.errors import CodecError
from diaganno.model import (
    ConnectivityGraph,
    DiagramParseGraph,
    DiscourseForest,
    GroupingForest,
    LayeredAnnotation,
)

from generators import gen_document, gen_edited_document


class TestNativeRoundTrip:
    def test_fixture_documents(self, original_doc, decomposed_doc):
        for doc in (original_doc, decomposed_doc):
            data = codec.serialize_document(doc)
            again = codec.parse_document(data)
            assert again.annotation == doc.annotation
            assert again.dpg == doc.dpg
            assert codec.serialize_document(again) == data

    def test_empty_annotation(self):
        annotation = LayeredAnnotation()
        data = codec.serialize(annotation)
        assert codec.parse(data) == annotation
        assert codec.serialize(codec.parse(data)) == data

    def test_generated_documents(self):
        rng = random.Random(2024)
        for _ in range(200):
            doc = gen_edited_document(rng)
            data = codec.serialize_document(doc)
            again = codec.parse_document(data)
            assert again.annotation == doc.annotation
            assert again.dpg == doc.dpg
            assert (again.base is None) == (doc.base is None)
            if doc.base is not None:
                assert again.base.annotation == doc.base.annotation
            assert codec.serialize_document(again) == data


class TestParseTotality:
    @pytest.mark.parametrize(
        "payload",
        [
            b"",
            b"not json",
            b"\xff\xfe\x00garbage",
            b"[1, 2, 3]",
            b"{}",
            b'{"format": "something-else", "version": 1}',
            b'{"format": "diagram-annotation", "version": 99}',
            b'{"format": "diagram-annotation", "version": 1, "grouping": 5}',
            b'{"format": "diagram-annotation", "version": 1, "inventory":'
            b' {"elements": [{"id": "T0"}]}}',
        ],
    )
    def test_bad_documents_raise_typed_errors(self, payload):
        with pytest.raises(CodecError):
            codec.parse_document(payload)

    def test_fuzzed_json_objects(self):
        rng = random.Random(5)
        pool = ["format", "version", "inventory", "grouping", "editLog", "base", "dpg"]
        for _ in range(200):
            obj = {
                key: rng.choice([None, 1, "x", [], {}, [{}], {"a": 1}])
                for key in rng.sample(pool, rng.randint(0, len(pool)))
            }
            try:
                codec.parse_document(json.dumps(obj).encode())
            except CodecError:
                pass

    def test_log_without_base_parses_but_fails_validation(self, decomposed_doc):
        from diaganno import validate

        obj = codec.document_to_obj(decomposed_doc)
        obj["base"] = None
        doc = codec.parse_document(json.dumps(obj).encode())
        assert doc.base is None
        assert validate.validate_all(doc).error_codes() == {"REPLAY_MISMATCH"}


class TestDotExport:
    def test_discourse_roles_on_edges(self, decomposed_doc):
        dot = codec.export_dot(decomposed_doc.annotation.discourse)
        step_lines = [line for line in dot.splitlines() if '"R11" ->' in line]
        assert len(step_lines) == 6
        assert all('[label="n"]' in line for line in step_lines)

    def test_empty_graphs_header_only(self):
        assert codec.export_dot(DiagramParseGraph()) == "digraph dpg {\n}\n"
        assert codec.export_dot(GroupingForest()) == "digraph grouping {\n}\n"
        assert codec.export_dot(ConnectivityGraph()) == "digraph connectivity {\n}\n"
        assert codec.export_dot(DiscourseForest()) == "digraph discourse {\n}\n"

    def test_byte_identical_across_runs(self, decomposed_doc, original_doc):
        for graph in (
            decomposed_doc.annotation.grouping,
            decomposed_doc.annotation.connectivity,
            decomposed_doc.annotation.discourse,
            original_doc.dpg,
        ):
            assert codec.export_dot(graph) == codec.export_dot(graph)

    def test_connectivity_connector_labels_and_open_ends(self, decomposed_doc):
        dot = codec.export_dot(decomposed_doc.annotation.connectivity)
        assert '"T1" -> "T2" [label="A2"];' in dot
        assert '"open:C3" [shape=point];' in dot

    def test_serialization_deterministic(self):
        rng1, rng2 = random.Random(99), random.Random(99)
        a = codec.serialize_document(gen_document(rng1))
        b = codec.serialize_document(gen_document(rng2))
        assert a == b
