#!/usr/bin/env python3
"""Structural diagnostics: where does the cycle reading come from?

The rock-cycle diagram depicts a cycle, yet its connectivity graph has no
directed cycle: some arrows connect stages, others merely point the way
round. Diagnostics make that inspection reproducible: components, cyclicity
with a witness, discourse coverage and macro-groups.
"""

from diaganno import analyze, fixtures
from diaganno.model import ConnectivityEdge, ConnectivityGraph

original = fixtures.rock_cycle_original()
decomposed = fixtures.rock_cycle_decomposed()

for label, doc in [("original", original), ("decomposed", decomposed)]:
    print(f"--- {label} ---")
    print(analyze.diagnostics(doc).to_text())
    print()

print("a graph that *does* signal its cycle, for contrast:")
looped = ConnectivityGraph(edges=[
    ConnectivityEdge("K0", "igneous", "sediment", "A0"),
    ConnectivityEdge("K1", "sediment", "metamorphic", "A1"),
    ConnectivityEdge("K2", "metamorphic", "igneous", "A2"),
])
witness = analyze.detect_cycle(looped)
print("  witness:", " -> ".join(e.source for e in witness) + " -> " + witness[-1].target)
