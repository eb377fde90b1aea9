"""Batch command-line interface.

Subcommands: ingest, validate, diagnose, stats, export-dot, replay, serve.
Exit status: 0 clean, 1 validation errors found, 2 usage or IO failure.
Output is deterministic for identical inputs and flags; log messages go to
stderr only.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional

from . import analyze, codec, edit, validate
from .errors import CodecError, DiagannoError
from .model import DiagramDocument, natural_key, new_annotation
from .registry import RelationRegistry, default_registry, load_registry

log = logging.getLogger(__name__)

REGISTRY_ENV_VAR = "DIAGANNO_REGISTRY"

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_USAGE = 2


def _resolve_registry(args) -> RelationRegistry:
    path = args.registry or os.environ.get(REGISTRY_ENV_VAR)
    if path:
        return load_registry(path)
    return default_registry()


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _map_files(paths, fn, jobs: int):
    """Apply fn to each path, in parallel if asked, preserving input order."""
    if jobs > 1 and len(paths) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, paths))
    return [fn(p) for p in paths]


# ---------------------------------------------------------------------------
# subcommands


def cmd_ingest(args) -> int:
    registry = _resolve_registry(args)
    out_dir: Optional[Path] = None
    if args.out and (Path(args.out).is_dir() or len(args.inputs) > 1):
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)

    def ingest_one(path: str):
        p = Path(path)
        parsed = codec.parse_ai2d(p.read_bytes(), registry=registry)
        doc = DiagramDocument(
            diagram_id=parsed.document.diagram_id,
            annotation=new_annotation(parsed.inventory),
            dpg=parsed.dpg,
            image_ref=parsed.document.image_ref,
        )
        return doc, parsed.warnings

    failures = []
    lines = []
    for path in args.inputs:
        try:
            doc, warnings = ingest_one(path)
        except (DiagannoError, OSError) as exc:
            failures.append((path, f"{type(exc).__name__}: {exc}"))
            continue
        data = codec.serialize_document(doc)
        if out_dir is not None:
            target = out_dir / f"{doc.diagram_id}.json"
            target.write_bytes(data)
            lines.append(f"{path} -> {target}")
        elif args.out:
            Path(args.out).write_bytes(data)
            lines.append(f"{path} -> {args.out}")
        else:
            sys.stdout.write(data.decode("utf-8"))
        for w in warnings:
            lines.append(f"  warning: {w}")
    for line in lines:
        print(line)
    for path, message in failures:
        print(f"{path}: FAILED {message}", file=sys.stderr)
    return EXIT_USAGE if failures else EXIT_OK


def _load_documents(paths, jobs):
    def load(path):
        try:
            return codec.load_document(path), None
        except (DiagannoError, OSError) as exc:
            return None, f"{type(exc).__name__}: {exc}"

    return _map_files(paths, load, jobs)


def cmd_validate(args) -> int:
    registry = _resolve_registry(args)
    results = []
    any_error = False
    any_failure = False
    for path, (doc, failure) in zip(args.inputs, _load_documents(args.inputs, args.jobs)):
        if failure:
            any_failure = True
            results.append({"path": path, "error": failure})
            continue
        report = validate.validate_all(doc, registry, strict=args.strict)
        any_error = any_error or not report.passed
        results.append(
            {
                "path": path,
                "diagramId": doc.diagram_id,
                "passed": report.passed,
                "findings": [f.to_json_obj() for f in report.findings],
            }
        )

    if args.format == "structured":
        _emit(json.dumps({"results": results}, indent=2) + "\n", args.out)
    else:
        lines = []
        for r in results:
            if "error" in r:
                lines.append(f"{r['path']}: ERROR {r['error']}")
                continue
            n_err = sum(1 for f in r["findings"] if f["severity"] == "error")
            n_warn = len(r["findings"]) - n_err
            status = "PASS" if r["passed"] else "FAIL"
            lines.append(f"{r['path']}: {status} ({n_err} errors, {n_warn} warnings)")
            for f in r["findings"]:
                refs = ",".join(f["refs"])
                lines.append(f"  {f['severity'].upper()} {f['code']} [{refs}]: {f['message']}")
        _emit("\n".join(lines) + "\n", args.out)
    if any_failure:
        return EXIT_USAGE
    return EXIT_FINDINGS if any_error else EXIT_OK


def cmd_diagnose(args) -> int:
    summaries = []
    for path, (doc, failure) in zip(args.inputs, _load_documents(args.inputs, args.jobs)):
        if failure:
            print(f"{path}: ERROR {failure}", file=sys.stderr)
            return EXIT_USAGE
        summaries.append(analyze.diagnostics(doc))
    if args.format == "structured":
        _emit(
            json.dumps({"diagrams": [s.to_json_obj() for s in summaries]}, indent=2) + "\n",
            args.out,
        )
    else:
        _emit("\n".join(s.to_text() for s in summaries) + "\n", args.out)
    return EXIT_OK


def cmd_stats(args) -> int:
    registry = _resolve_registry(args)
    try:
        index = codec.load_corpus(args.root, jobs=args.jobs, registry=registry)
    except CodecError as exc:
        print(f"{args.root}: {exc}", file=sys.stderr)
        return EXIT_USAGE

    def parse_entry(entry):
        parsed = codec.parse_ai2d(entry.annotation_path.read_bytes(), registry=registry)
        layered = None
        if entry.layers_path is not None:
            try:
                layered = codec.parse_ai2d_rst(
                    entry.layers_path.read_bytes(), parsed.inventory, registry=registry
                )
            except DiagannoError as exc:
                log.warning("layers for %s unusable: %s", entry.diagram_id, exc)
        return entry.diagram_id, parsed, layered

    rows = _map_files(index.entries, parse_entry, args.jobs)
    parses = {diagram_id: parsed for diagram_id, parsed, _ in rows}
    annotations = {
        diagram_id: layered for diagram_id, _, layered in rows if layered is not None
    }
    stats = analyze.corpus_stats(index, parses, annotations)
    if args.format == "structured":
        obj = stats.to_json_obj()
        obj["failures"] = [{"path": str(p), "error": e} for p, e in index.failures]
        _emit(json.dumps(obj, indent=2) + "\n", args.out)
    else:
        text = stats.to_text()
        if index.failures:
            text += "\nfailures:\n" + "\n".join(
                f"  {p}: {e}" for p, e in index.failures
            )
        _emit(text + "\n", args.out)
    return EXIT_OK


def cmd_export_dot(args) -> int:
    docs = _load_documents([args.input], 1)
    doc, failure = docs[0]
    if failure:
        print(f"{args.input}: ERROR {failure}", file=sys.stderr)
        return EXIT_USAGE
    annotation = doc.annotation
    if args.layer == "dpg":
        if doc.dpg is None:
            print(f"{args.input}: document has no parse graph", file=sys.stderr)
            return EXIT_USAGE
        graph = doc.dpg
    else:
        graph = getattr(annotation, args.layer)
    _emit(codec.export_dot(graph), args.out)
    return EXIT_OK


def cmd_replay(args) -> int:
    try:
        initial = codec.load_document(args.initial)
    except (DiagannoError, OSError) as exc:
        print(f"{args.initial}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        raw = json.loads(Path(args.log).read_text(encoding="utf-8"))
        ops = [codec._edit_op_from_obj(o) for o in raw.get("editLog", [])]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"{args.log}: cannot read edit log: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        result = edit.replay(initial, ops)
    except DiagannoError as exc:
        print(f"replay failed: {exc}", file=sys.stderr)
        return EXIT_FINDINGS
    data = codec.serialize_document(result)
    if args.out:
        Path(args.out).write_bytes(data)
        print(f"replayed {len(ops)} ops -> {args.out}")
    else:
        sys.stdout.write(data.decode("utf-8"))
    return EXIT_OK


def cmd_serve(args) -> int:
    from . import service

    registry = _resolve_registry(args)
    frontend = args.frontend
    service.run(
        args.root,
        host=args.host,
        port=args.port,
        registry=registry,
        frontend_dir=frontend,
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--registry",
        help=f"relation registry JSON (default: ${REGISTRY_ENV_VAR} or built-in)",
    )
    common.add_argument(
        "--format", choices=["text", "structured"], default="text",
        help="output style (default text)",
    )
    common.add_argument("--strict", action="store_true", help="strict registry mode")
    common.add_argument("--jobs", type=int, default=1, help="parallel file workers")
    common.add_argument("--out", help="write output to this path instead of stdout")

    parser = argparse.ArgumentParser(
        prog="diaganno",
        description="Diagram annotation graphs: ingest, validate, diagnose, edit-replay, serve.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "ingest", parents=[common],
        help="convert corpus annotation files to native documents",
    )
    p.add_argument("inputs", nargs="+")
    p.set_defaults(fn=cmd_ingest)

    p = sub.add_parser(
        "validate", parents=[common], help="check native documents, exit 1 on errors"
    )
    p.add_argument("inputs", nargs="+")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser(
        "diagnose", parents=[common], help="structural diagnostics per diagram"
    )
    p.add_argument("inputs", nargs="+")
    p.set_defaults(fn=cmd_diagnose)

    p = sub.add_parser("stats", parents=[common], help="corpus-level statistics")
    p.add_argument("root")
    p.set_defaults(fn=cmd_stats)

    p = sub.add_parser(
        "export-dot", parents=[common], help="DOT text for one layer of a document"
    )
    p.add_argument("input")
    p.add_argument(
        "--layer",
        choices=["dpg", "grouping", "connectivity", "discourse"],
        required=True,
    )
    p.set_defaults(fn=cmd_export_dot)

    p = sub.add_parser(
        "replay", parents=[common], help="re-apply an edit log over an initial document"
    )
    p.add_argument("initial")
    p.add_argument("log", help="native document or bare {\"editLog\": [...]} file")
    p.set_defaults(fn=cmd_replay)

    p = sub.add_parser("serve", parents=[common], help="run the local annotation service")
    p.add_argument("--root", required=True, help="directory of native documents")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8400)
    p.add_argument("--frontend", help="static workbench directory to serve at /")
    p.set_defaults(fn=cmd_serve)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.WARNING)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.fn(args)
    except (DiagannoError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
