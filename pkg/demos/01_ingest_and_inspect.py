#!/usr/bin/env python3
"""Ingest a corpus annotation file and look around.

The bundled rock-cycle diagram (#4210) arrives as element sections keyed by
id plus a relationship list. Ingestion yields a typed inventory and the
diagram parse graph; parse graphs in the wild are patchy, so we also count
isolated nodes and components.
"""

from diaganno import analyze, codec, fixtures

parse = codec.parse_ai2d(fixtures.rock_cycle_ai2d())

print(f"diagram {parse.document.diagram_id}: {len(parse.inventory)} elements")
for element in parse.inventory:
    text = f"  {element.text!r}" if element.text else ""
    print(f"  {element.id:<4} {element.kind.value:<10} {element.shape.kind.value}{text}")

print(f"\nparse graph: {len(parse.dpg.nodes)} nodes, {len(parse.dpg.edges)} edges")
for edge in parse.dpg.edges:
    via = f" (connector {edge.connector})" if edge.connector else ""
    print(f"  {edge.label}: {edge.source} -> {edge.target}{via}")

isolated = sorted(analyze.isolated_dpg_nodes(parse.dpg))
components = analyze.connected_components(parse.dpg)
print(f"\nisolated nodes: {', '.join(isolated)}")
print(f"connected components: {len(components)}")
print("the cycle this diagram depicts is nowhere in its parse graph structure")

print("\nDOT export (feed to graphviz):\n")
print(codec.export_dot(parse.dpg))
