#!/usr/bin/env python3
"""Discourse-driven decomposition, op by op.

The original segmentation lumps the whole cross-section into one blob, so
the discourse layer can only say "background". The recorded edit log splits
it into regions, regroups the diagram around its two macro-groups and
rebuilds the discourse tree; replaying the log is deterministic down to the
serialized bytes.
"""

from diaganno import analyze, codec, edit, fixtures

initial = fixtures.rock_cycle_original()
ops = fixtures.rock_cycle_decomposition_log()

print(f"initial uncovered elements: {sorted(analyze.discourse_coverage(initial.annotation))}")
print(f"replaying {len(ops)} recorded ops:\n")

doc = initial
for op in ops:
    doc = edit.apply_op(doc, op, eager_nuclearity=False)
    uncovered = len(analyze.discourse_coverage(doc.annotation))
    print(f"  {op.op_id:<6} {op.kind:<22} uncovered={uncovered:>2}")

print("\nfinal state:")
print(analyze.diagnostics(doc).to_text())

expected = fixtures.fixture_path("4210_decomposed.json").read_bytes()
assert codec.serialize_document(doc) == expected
print("\nreplay output is byte-identical to the shipped decomposed document")

provenance = [e for e in doc.annotation.inventory if e.provenance is not None]
print("\nsplit products and their ancestry:")
for element in provenance:
    print(f"  {element.id}: part {element.provenance.ordinal} of {element.provenance.parent}")
