#!/usr/bin/env python3
"""Regenerate the bundled #4210 rock-cycle fixtures.

Writes the corpus ingestion files, the original layered annotation, the
recorded decomposition log and the decomposed document, plus a rendered
placeholder image. Everything is produced through the public library API so
the decomposed fixture is exactly what replaying the log yields.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from diaganno import codec, edit  # noqa: E402
from diaganno.model import (  # noqa: E402
    ConnectivityEdge,
    ConnectivityGraph,
    DiagramDocument,
    DiscourseEdge,
    DiscourseForest,
    GroupingForest,
    GroupingKind,
    GroupingNode,
    LayeredAnnotation,
    LeafOccurrence,
    RelationNode,
    Role,
    Shape,
)

FIXTURES = REPO / "src" / "diaganno" / "fixtures"
STAMP = "2026-08-01T12:00:00Z"

ROCK_CYCLE_AI2D = {
    "id": "4210",
    "image": "4210.png",
    "text": {
        "T0": {"rectangle": [[300, 10], [500, 40]], "value": "The rock cycle"},
        "T1": {
            "rectangle": [[30, 120], [230, 170]],
            "value": "Magma flows to surface and cools quickly",
        },
        "T2": {"rectangle": [[300, 90], [460, 120]], "value": "Weathering and erosion"},
        "T3": {"rectangle": [[530, 120], [620, 150]], "value": "Transport"},
        "T4": {
            "rectangle": [[640, 170], [780, 220]],
            "value": "Deposition by water, wind and ice",
        },
        "T5": {"rectangle": [[300, 540], [380, 570]], "value": "Magma"},
        "T6": {
            "rectangle": [[560, 230], [780, 290]],
            "value": "Sedimentary rock forms by compaction and cementing",
        },
        "T7": {
            "rectangle": [[40, 430], [220, 480]],
            "value": "Magma cools beneath surface slowly",
        },
        "T8": {
            "rectangle": [[430, 410], [680, 450]],
            "value": "Metamorphic rock forms from heat and pressure",
        },
    },
    "blobs": {
        "B0": {"polygon": [[10, 300], [790, 300], [790, 590], [10, 590]]},
    },
    "arrows": {
        "A0": {"polygon": [[20, 200], [40, 190], [50, 280], [30, 290]]},
        "A1": {"polygon": [[760, 240], [780, 250], [770, 330], [750, 320]]},
        "A2": {"polygon": [[240, 130], [295, 105], [297, 115], [242, 140]]},
        "A3": {"polygon": [[625, 135], [665, 165], [660, 172], [620, 142]]},
        "A4": {"polygon": [[470, 100], [520, 100], [520, 108], [470, 108]]},
    },
    "arrowHeads": {
        "H0": {"rectangle": [[45, 275], [60, 290]]},
        "H1": {"rectangle": [[745, 315], [760, 330]]},
        "H2": {"rectangle": [[290, 100], [305, 115]]},
        "H3": {"rectangle": [[655, 160], [670, 175]]},
        "H4": {"rectangle": [[515, 96], [530, 112]]},
    },
    "relationships": [
        {"id": "REL0", "category": "arrowHeadTail", "members": ["A0", "H0"]},
        {"id": "REL1", "category": "arrowHeadTail", "members": ["A1", "H1"]},
        {"id": "REL2", "category": "arrowHeadTail", "members": ["A2", "H2"]},
        {"id": "REL3", "category": "arrowHeadTail", "members": ["A3", "H3"]},
        {"id": "REL4", "category": "arrowHeadTail", "members": ["A4", "H4"]},
        {"id": "REL5", "category": "interObjectLinkage", "members": ["T1", "A2", "T2"]},
        {"id": "REL6", "category": "interObjectLinkage", "members": ["T3", "A3", "T4"]},
    ],
}

MINI_0001 = {
    "id": "0001",
    "text": {"T0": {"rectangle": [[10, 10], [120, 40]], "value": "Evaporation"}},
    "blobs": {"B0": {"polygon": [[10, 60], [200, 60], [200, 200], [10, 200]]}},
    "arrows": {"A0": {"polygon": [[60, 50], [80, 45], [85, 55], [65, 60]]}},
    "arrowHeads": {"H0": {"rectangle": [[80, 40], [95, 55]]}},
    "relationships": [
        {"id": "REL0", "category": "arrowHeadTail", "members": ["A0", "H0"]}
    ],
}

MINI_0002 = {
    "id": "0002",
    "text": {
        "T0": {"rectangle": [[10, 10], [80, 40]], "value": "Cloud"},
        "T1": {"rectangle": [[150, 10], [210, 40]], "value": "Rain"},
    },
    "blobs": {},
    "arrows": {"A0": {"polygon": [[85, 20], [140, 20], [140, 30], [85, 30]]}},
    "arrowHeads": {"H0": {"rectangle": [[138, 15], [150, 32]]}},
    "relationships": [
        {"id": "REL0", "category": "arrowHeadTail", "members": ["A0", "H0"]},
        {"id": "REL1", "category": "interObjectLinkage", "members": ["T0", "A0", "T1"]},
    ],
}

CATEGORIES = {"0001": "waterCycle", "0002": "waterCycle", "4210": "rockCycle"}


def original_layers(inventory) -> LayeredAnnotation:
    """Original annotation: grouped texts and arrows, two connectivity
    subgraphs, and an identification-heavy discourse tree (R1-R8)."""
    nodes = [
        GroupingNode("I0", GroupingKind.DIAGRAM_ROOT),
        GroupingNode("G1", GroupingKind.GROUP),
        GroupingNode("G2", GroupingKind.GROUP),
    ]
    leaf_ids = ["T0", "T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8", "B0",
                "A0", "A1", "A2", "A3", "A4"]
    nodes += [GroupingNode(i, GroupingKind.LEAF, element_ref=i) for i in leaf_ids]
    edges = [
        ("I0", "T0"), ("I0", "B0"), ("I0", "T5"), ("I0", "T6"), ("I0", "T8"),
        ("I0", "G1"), ("I0", "G2"),
        ("G1", "A0"), ("G1", "A1"), ("G1", "A2"), ("G1", "A3"), ("G1", "A4"),
        ("G2", "T1"), ("G2", "T2"), ("G2", "T3"), ("G2", "T4"), ("G2", "T7"),
    ]
    connectivity = ConnectivityGraph(edges=[
        ConnectivityEdge("C0", "T1", "T2", "A2", directed=True),
        ConnectivityEdge("C1", "T2", None, "A4", directed=True, open_ended=True),
        ConnectivityEdge("C2", "T3", "T4", "A3", directed=True),
    ])
    relations = [
        RelationNode("R1", "identification"),
        RelationNode("R2", "identification"),
        RelationNode("R3", "identification"),
        RelationNode("R4", "identification"),
        RelationNode("R5", "identification"),
        RelationNode("R6", "identification"),
        RelationNode("R7", "cyclic sequence"),
        RelationNode("R8", "background"),
    ]
    occurrences = [
        LeafOccurrence("O1", "A0"), LeafOccurrence("O2", "T1"),
        LeafOccurrence("O3", "A1"), LeafOccurrence("O4", "T7"),
        LeafOccurrence("O5", "A2"), LeafOccurrence("O6", "T2"),
        LeafOccurrence("O7", "A3"), LeafOccurrence("O8", "T3"),
        LeafOccurrence("O9", "A4"), LeafOccurrence("O10", "T4"),
        LeafOccurrence("O11", "B0"), LeafOccurrence("O12", "T5"),
        # the cross-section is picked up twice; the duplicate keeps the forest
        LeafOccurrence("O13", "B0"),
    ]
    dedges = []
    for i in range(1, 7):
        dedges.append(DiscourseEdge(f"R{i}", f"O{2 * i - 1}", Role.NUCLEUS))
        dedges.append(DiscourseEdge(f"R{i}", f"O{2 * i}", Role.SATELLITE))
    for i in range(1, 6):
        dedges.append(DiscourseEdge("R7", f"R{i}", Role.NUCLEUS))
    dedges.append(DiscourseEdge("R8", "R7", Role.NUCLEUS))
    dedges.append(DiscourseEdge("R8", "O13", Role.SATELLITE))
    return LayeredAnnotation(
        inventory=list(inventory),
        grouping=GroupingForest(nodes=nodes, edges=edges),
        connectivity=connectivity,
        discourse=DiscourseForest(relations=relations, occurrences=occurrences, edges=dedges),
    )


def region(x0, y0, x1, y1) -> Shape:
    return Shape.make_polygon([(x0, y0), (x1, y0), (x1, y1), (x0, y1)])


def decompose(doc: DiagramDocument) -> DiagramDocument:
    """The recorded decomposition: clear the old discourse tree, split the
    cross-section into its regions, regroup around the two macro-groups and
    rebuild the discourse structure (R1-R11)."""
    t = STAMP
    for rid in ["R8", "R7", "R1", "R2", "R3", "R4", "R5", "R6"]:
        doc = edit.remove_node(doc, rid, timestamp=t)
    doc = edit.split_element(
        doc,
        "B0",
        sub_shapes=[
            region(60, 300, 240, 380),     # lava field cooled at the surface
            region(80, 480, 260, 560),     # igneous rock formed below ground
            region(520, 300, 780, 400),    # sedimentary layers
            region(420, 460, 700, 570),    # metamorphic zone
            region(260, 500, 420, 585),    # magma chamber
        ],
        group_id="G10",
        child_ids=["B1", "B2", "B3", "B4", "B5"],
        timestamp=t,
    )
    doc = edit.move_node(doc, "G10", None, timestamp=t)
    doc = edit.move_node(doc, "T5", "G10", timestamp=t)
    doc = edit.remove_node(doc, "G2", timestamp=t)
    doc = edit.remove_node(doc, "G1", timestamp=t)
    doc = edit.add_group(doc, "I0", ["A3", "A4"], group_id="G12", timestamp=t)
    doc = edit.add_group(
        doc,
        "I0",
        ["T1", "T2", "T3", "T4", "T6", "T7", "T8", "A0", "A1", "A2", "G12"],
        group_id="G11",
        timestamp=t,
    )
    doc = edit.tag_macro_group(doc, "G10", "cross-section", timestamp=t)
    doc = edit.tag_macro_group(doc, "G11", "cycle", timestamp=t)
    doc = edit.add_connectivity_edge(
        doc, "G11", None, "A0", open_ended=True, edge_id="C3", timestamp=t
    )
    doc = edit.add_connectivity_edge(
        doc, "G10", None, "A1", open_ended=True, edge_id="C4", timestamp=t
    )
    n, s = Role.NUCLEUS, Role.SATELLITE
    doc = edit.add_relation(doc, "identification", [("B5", n), ("T5", s)], "R1", timestamp=t)
    doc = edit.add_relation(doc, "joint", [("A0", n), ("A1", n)], "R2", timestamp=t)
    doc = edit.add_relation(doc, "identification", [("R2", n), ("T0", s)], "R3", timestamp=t)
    doc = edit.add_relation(doc, "elaboration", [("B1", n), ("T1", s)], "R4", timestamp=t)
    doc = edit.add_relation(doc, "elaboration", [("B2", n), ("T7", s)], "R5", timestamp=t)
    doc = edit.add_relation(doc, "identification", [("A2", n), ("T2", s)], "R6", timestamp=t)
    doc = edit.add_relation(doc, "elaboration", [("B3", n), ("T6", s)], "R7", timestamp=t)
    doc = edit.add_relation(doc, "elaboration", [("B4", n), ("T8", s)], "R8", timestamp=t)
    doc = edit.add_relation(doc, "elaboration", [("G12", n), ("T4", s)], "R9", timestamp=t)
    doc = edit.add_relation(doc, "disjunction", [("R4", n), ("R5", n)], "R10", timestamp=t)
    doc = edit.add_relation(
        doc,
        "cyclic sequence",
        [("R10", n), ("R6", n), ("T3", n), ("R9", n), ("R7", n), ("R8", n)],
        "R11",
        timestamp=t,
    )
    return doc


KIND_COLOURS = {
    "text": (64, 96, 232),
    "blob": (214, 48, 48),
    "arrow": (32, 160, 64),
    "arrowhead": (240, 150, 24),
}


def render_image(parse, path: Path) -> None:
    from PIL import Image, ImageDraw

    img = Image.new("RGB", (800, 600), (250, 250, 245))
    draw = ImageDraw.Draw(img)
    for element in parse.inventory:
        colour = KIND_COLOURS[element.kind.value]
        shape = element.shape
        if shape.rect is not None:
            draw.rectangle(shape.rect, outline=colour, width=3)
        else:
            draw.polygon([tuple(v) for v in shape.polygon], outline=colour, width=3)
        if shape.rect is not None:
            x, y = shape.rect[0] + 3, shape.rect[1] + 3
        else:
            x, y = shape.polygon[0][0] + 3, shape.polygon[0][1] + 3
        draw.text((x, y), element.id, fill=colour)
        if element.text:
            draw.text((x, y + 12), element.text[:40], fill=(90, 90, 90))
    img.save(path)


def main() -> None:
    corpus = FIXTURES / "corpus"
    (corpus / "annotations").mkdir(parents=True, exist_ok=True)
    (corpus / "layers").mkdir(parents=True, exist_ok=True)
    (corpus / "images").mkdir(parents=True, exist_ok=True)

    for name, payload in [
        ("4210", ROCK_CYCLE_AI2D),
        ("0001", MINI_0001),
        ("0002", MINI_0002),
    ]:
        (corpus / "annotations" / f"{name}.json").write_text(
            json.dumps(payload, indent=2) + "\n", encoding="utf-8"
        )
    (corpus / "categories.json").write_text(
        json.dumps(CATEGORIES, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )

    parse = codec.parse_ai2d((corpus / "annotations" / "4210.json").read_bytes())
    assert not parse.warnings, parse.warnings

    annotation = original_layers(parse.inventory)
    layers_bytes = codec.serialize_layers(annotation)
    (corpus / "layers" / "4210.json").write_bytes(layers_bytes)

    # round through the layers parser so the shipped document is exactly what
    # ingestion produces
    annotation = codec.parse_ai2d_rst(layers_bytes, parse.inventory)
    original = DiagramDocument(
        diagram_id="4210",
        annotation=annotation,
        dpg=parse.dpg,
        image_ref="corpus/images/4210.png",
    )
    codec.save_document(original, FIXTURES / "4210_original.json")

    decomposed = decompose(original)
    codec.save_document(decomposed, FIXTURES / "4210_decomposed.json")
    log_obj = {"editLog": [codec._edit_op_to_obj(op) for op in decomposed.annotation.edit_log]}
    (FIXTURES / "4210_decomposition_log.json").write_text(
        json.dumps(log_obj, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )

    render_image(parse, corpus / "images" / "4210.png")

    replayed = edit.replay(original, decomposed.annotation.edit_log)
    assert codec.serialize_document(replayed) == codec.serialize_document(decomposed)
    print("fixtures written to", FIXTURES)


if __name__ == "__main__":
    main()
