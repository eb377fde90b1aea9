#!/usr/bin/env python3
"""A tour of the annotation service, in process (no sockets needed).

The workbench UI consumes exactly this API: versioned reads, one edit op per
POST with optimistic concurrency, live validation in every edit response.
"""

import shutil
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from diaganno import fixtures, service

workdir = Path(tempfile.mkdtemp(prefix="diaganno-demo-"))
shutil.copy(fixtures.fixture_path("4210_decomposed.json"), workdir / "4210.json")
shutil.copytree(fixtures.corpus_root(), workdir / "corpus")

store = service.DiagramStore.from_dir(workdir)
client = TestClient(service.create_app(store))

print("GET /diagrams ->", client.get("/diagrams").json())

doc = client.get("/diagrams/4210").json()
print(f"version {doc['version']}, "
      f"{len(doc['document']['discourse']['relations'])} discourse relations")

print("\nPOST an edit based on the version we just read:")
ok = client.post("/diagrams/4210/edit", json={
    "baseVersion": doc["version"],
    "op": {"opId": "demo1", "kind": "tagMacroGroup", "timestamp": "",
           "params": {"node": "G12", "tag": "transport arrows"}},
})
print("  ->", ok.status_code, "new version", ok.json()["version"],
      "validation passed:", ok.json()["report"]["passed"])

print("\nthe same baseVersion again is stale now:")
stale = client.post("/diagrams/4210/edit", json={
    "baseVersion": doc["version"],
    "op": {"opId": "demo2", "kind": "tagMacroGroup", "timestamp": "",
           "params": {"node": "G12", "tag": "x"}},
})
print("  ->", stale.status_code, stale.json())

print("\nan edit the schema forbids (one-child disjunction):")
bad = client.post("/diagrams/4210/edit", json={
    "baseVersion": ok.json()["version"],
    "op": {"opId": "demo3", "kind": "addRelation", "timestamp": "",
           "params": {"relation": "R90", "type": "disjunction",
                      "children": [{"ref": "T1", "role": "n", "occurrence": "O90"}]}},
})
print("  ->", bad.status_code, bad.json())

saved = client.post("/diagrams/4210/save")
print("\nPOST /save ->", saved.json())
print(f"\n(workdir {workdir} can be deleted)")
