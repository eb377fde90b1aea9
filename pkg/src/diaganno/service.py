"""Local annotation backend for the browser workbench.

Serves diagram inventories, layer graphs, images and validation reports,
and accepts individual edit ops under optimistic concurrency: each response
carries the diagram's version, edits must quote the version they were based
on, and a stale version yields 409 so the client can reload and retry.

Endpoints (JSON bodies):

========  =============================  =====================================
GET       /diagrams                      list open diagrams with versions
GET       /diagrams/{id}                 full document plus version
GET       /diagrams/{id}/image           the referenced image file
GET       /diagrams/{id}/validation      current validation report
POST      /diagrams/{id}/edit            {"baseVersion": int, "op": {...}}
POST      /diagrams/{id}/save            persist the native document
GET       /registry                      the active relation registry
========  =============================  =====================================
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.responses import FileResponse, JSONResponse
from pydantic import BaseModel

from . import codec, edit, validate
from .errors import CodecError, DiagannoError, EditError
from .model import DiagramDocument
from .registry import RelationRegistry, default_registry

log = logging.getLogger(__name__)


class VersionConflict(DiagannoError):
    def __init__(self, current_version: int):
        super().__init__(f"stale version; current is {current_version}")
        self.current_version = current_version


@dataclass
class Session:
    key: str
    doc: DiagramDocument
    version: int = 1
    path: Optional[Path] = None
    dirty: bool = False
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


class DiagramStore:
    """Open diagrams keyed by session id; one serialized writer per diagram."""

    def __init__(self, registry: Optional[RelationRegistry] = None):
        self.registry = registry or default_registry()
        self.sessions: dict[str, Session] = {}
        self.root: Optional[Path] = None

    @classmethod
    def from_dir(
        cls, root: Path | str, registry: Optional[RelationRegistry] = None
    ) -> "DiagramStore":
        """Open every native document directly under ``root``; other JSON
        files are skipped."""
        store = cls(registry)
        store.root = Path(root)
        for path in sorted(store.root.glob("*.json")):
            try:
                doc = codec.load_document(path)
            except (CodecError, OSError) as exc:
                log.info("skipping %s: %s", path, exc)
                continue
            store.add(path.stem, doc, path=path)
        return store

    def add(self, key: str, doc: DiagramDocument, path: Optional[Path] = None) -> Session:
        session = Session(key=key, doc=doc, path=path)
        self.sessions[key] = session
        return session

    def get(self, key: str) -> Session:
        return self.sessions[key]

    def apply_edit(self, key: str, base_version: int, op_obj: dict):
        session = self.get(key)
        with session.lock:
            if base_version != session.version:
                raise VersionConflict(session.version)
            try:
                op = codec._edit_op_from_obj(op_obj)
            except (KeyError, TypeError, ValueError) as exc:
                raise EditError(f"malformed edit op: {exc}") from exc
            new_doc = edit.apply_op(session.doc, op, registry=self.registry)
            report = validate.validate_all(new_doc, self.registry)
            session.doc = new_doc
            session.version += 1
            session.dirty = True
            return session, report

    def save(self, key: str) -> Path:
        session = self.get(key)
        with session.lock:
            path = session.path
            if path is None:
                if self.root is None:
                    raise EditError(f"no save path known for {key}")
                path = self.root / f"{key}.json"
                session.path = path
            codec.save_document(session.doc, path)
            session.dirty = False
            return path


class EditRequest(BaseModel):
    baseVersion: int
    op: dict


def create_app(
    store: DiagramStore, frontend_dir: Optional[Path | str] = None
) -> FastAPI:
    app = FastAPI(title="diaganno annotation service")

    def session_or_404(key: str) -> Session:
        try:
            return store.get(key)
        except KeyError:
            raise HTTPException(status_code=404, detail={"error": "UnknownDiagram", "id": key})

    @app.get("/diagrams")
    def list_diagrams():
        return {
            "diagrams": [
                {
                    "id": s.key,
                    "diagramId": s.doc.diagram_id,
                    "version": s.version,
                    "dirty": s.dirty,
                }
                for s in sorted(store.sessions.values(), key=lambda s: s.key)
            ]
        }

    @app.get("/diagrams/{key}")
    def get_diagram(key: str):
        session = session_or_404(key)
        with session.lock:
            return {
                "id": session.key,
                "version": session.version,
                "document": codec.document_to_obj(session.doc),
            }

    @app.get("/diagrams/{key}/image")
    def get_image(key: str):
        session = session_or_404(key)
        ref = session.doc.image_ref
        candidates = []
        if ref:
            refpath = Path(ref)
            if refpath.is_absolute():
                candidates.append(refpath)
            elif session.path is not None:
                candidates.append(session.path.parent / refpath)
            if store.root is not None:
                candidates.append(store.root / refpath)
        for candidate in candidates:
            if candidate.is_file():
                return FileResponse(candidate)
        raise HTTPException(status_code=404, detail={"error": "NoImage", "id": key})

    @app.get("/diagrams/{key}/validation")
    def get_validation(key: str):
        session = session_or_404(key)
        with session.lock:
            report = validate.validate_all(session.doc, store.registry)
            return {
                "id": session.key,
                "version": session.version,
                "report": report.to_json_obj(),
            }

    @app.post("/diagrams/{key}/edit")
    def post_edit(key: str, request: EditRequest):
        session_or_404(key)
        try:
            session, report = store.apply_edit(key, request.baseVersion, request.op)
        except VersionConflict as exc:
            return JSONResponse(
                status_code=409,
                content={
                    "error": "VersionConflict",
                    "message": str(exc),
                    "currentVersion": exc.current_version,
                },
            )
        except DiagannoError as exc:
            return JSONResponse(
                status_code=422,
                content={"error": type(exc).__name__, "message": str(exc)},
            )
        return {
            "id": session.key,
            "version": session.version,
            "report": report.to_json_obj(),
            "document": codec.document_to_obj(session.doc),
        }

    @app.post("/diagrams/{key}/save")
    def post_save(key: str):
        session = session_or_404(key)
        try:
            path = store.save(key)
        except (DiagannoError, OSError) as exc:
            return JSONResponse(
                status_code=422,
                content={"error": type(exc).__name__, "message": str(exc)},
            )
        return {"id": key, "version": session.version, "path": str(path)}

    @app.get("/registry")
    def get_registry():
        return store.registry.to_json_obj()

    if frontend_dir is not None and Path(frontend_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(frontend_dir), html=True), name="ui")

    return app


def run(
    root: Path | str,
    host: str = "127.0.0.1",
    port: int = 8400,
    registry: Optional[RelationRegistry] = None,
    frontend_dir: Optional[Path | str] = None,
) -> None:
    import uvicorn

    store = DiagramStore.from_dir(root, registry)
    app = create_app(store, frontend_dir=frontend_dir)
    uvicorn.run(app, host=host, port=port)
