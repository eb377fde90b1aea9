"""diaganno: layered diagram-annotation graphs.

Ingests diagram corpus annotations into typed element inventories and parse
graphs, models the grouping/connectivity/discourse annotation layers,
validates their invariants, runs structural diagnostics, and applies
provenance-tracked decomposition edits, with a batch CLI and a local
annotation service on top.
"""

from . import analyze, codec, edit, errors, model, registry, validate

__version__ = "0.1.0"

__all__ = [
    "analyze",
    "codec",
    "edit",
    "errors",
    "model",
    "registry",
    "validate",
    "__version__",
]
