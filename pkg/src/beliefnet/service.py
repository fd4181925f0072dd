"""HTTP+JSON facade over network storage, compilation, and inference sessions.

In-memory, single-process store. Compiled templates are cached per document
hash and shared read-only across sessions; each session's mutations are
serialized by its own lock. Replacing a network invalidates its sessions:
they answer 409 ``network_changed`` until reopened.
"""
from __future__ import annotations

import hashlib
import json
import threading
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse, PlainTextResponse

from .compiler import CliqueForest, compile_network, forest_stats
from .engine import InferenceSession
from .errors import (
    EvidenceError,
    ImpossibleEvidenceError,
    NetworkFormatError,
    NetworkValidationError,
)
from .network import BeliefNetwork, EvidenceSet, network_from_obj, to_dot


@dataclass
class NetworkRecord:
    id: str
    doc: dict
    net: BeliefNetwork
    content_hash: str
    template: CliqueForest | None = None


@dataclass
class SessionRecord:
    id: str
    network_id: str
    network_hash: str
    session: InferenceSession
    lock: threading.Lock = field(default_factory=threading.Lock)


class Store:
    def __init__(self):
        self.networks: dict[str, NetworkRecord] = {}
        self.sessions: dict[str, SessionRecord] = {}
        self.lock = threading.Lock()

    @staticmethod
    def _hash(doc: dict) -> str:
        return hashlib.sha256(json.dumps(doc, sort_keys=True).encode()).hexdigest()

    def put_network(self, doc: dict, record_id: str | None = None) -> NetworkRecord:
        net = network_from_obj(doc)
        rec = NetworkRecord(record_id or uuid.uuid4().hex[:12], doc, net, self._hash(doc))
        with self.lock:
            self.networks[rec.id] = rec
        return rec

    def template_for(self, rec: NetworkRecord) -> CliqueForest:
        with self.lock:
            if rec.template is None:
                rec.template = compile_network(rec.net)
            return rec.template

    # Networks (not sessions) survive restarts when a snapshot path is given.
    def save_snapshot(self, path: str) -> None:
        with self.lock:
            docs = {rec_id: rec.doc for rec_id, rec in self.networks.items()}
        with open(path, "w", encoding="utf-8") as fh:
            json.dump({"networks": docs}, fh)

    def load_snapshot(self, path: str) -> None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except FileNotFoundError:
            return
        for rec_id, doc in data.get("networks", {}).items():
            self.put_network(doc, record_id=rec_id)


def _error(status: int, code: str, **extra) -> JSONResponse:
    return JSONResponse({"error": code, **extra}, status_code=status)


def create_app(snapshot_path: str | None = None) -> FastAPI:
    import contextlib

    @contextlib.asynccontextmanager
    async def lifespan(_app):
        if snapshot_path:
            store.load_snapshot(snapshot_path)
        yield
        if snapshot_path:
            store.save_snapshot(snapshot_path)

    app = FastAPI(title="beliefnet service", lifespan=lifespan)
    store = Store()
    app.state.store = store

    def _network_or_none(network_id: str) -> NetworkRecord | None:
        return store.networks.get(network_id)

    @app.post("/networks", status_code=201)
    async def create_network(request: Request, compile: bool = False):
        try:
            doc = await request.json()
        except json.JSONDecodeError as e:
            return _error(422, "bad_json", detail=str(e))
        try:
            rec = store.put_network(doc)
        except NetworkFormatError as e:
            return _error(422, "bad_document", detail=str(e))
        except NetworkValidationError as e:
            return _error(422, "validation_failed",
                          violations=[str(v) for v in e.violations])
        body = {"id": rec.id}
        if compile:
            body["stats"] = forest_stats(store.template_for(rec)).to_obj()
        return JSONResponse(body, status_code=201)

    @app.get("/networks/{network_id}")
    def get_network(network_id: str):
        rec = _network_or_none(network_id)
        if rec is None:
            return _error(404, "unknown_network")
        return JSONResponse(rec.doc)

    @app.put("/networks/{network_id}")
    async def replace_network(network_id: str, request: Request):
        if _network_or_none(network_id) is None:
            return _error(404, "unknown_network")
        try:
            doc = await request.json()
        except json.JSONDecodeError as e:
            return _error(422, "bad_json", detail=str(e))
        try:
            rec = store.put_network(doc, record_id=network_id)
        except NetworkFormatError as e:
            return _error(422, "bad_document", detail=str(e))
        except NetworkValidationError as e:
            return _error(422, "validation_failed",
                          violations=[str(v) for v in e.violations])
        return JSONResponse({"id": rec.id})

    @app.post("/networks/{network_id}/compile")
    def compile_endpoint(network_id: str):
        rec = _network_or_none(network_id)
        if rec is None:
            return _error(404, "unknown_network")
        return JSONResponse(forest_stats(store.template_for(rec)).to_obj())

    @app.get("/networks/{network_id}/dot")
    def dot_endpoint(network_id: str):
        rec = _network_or_none(network_id)
        if rec is None:
            return _error(404, "unknown_network")
        return PlainTextResponse(to_dot(rec.net))

    @app.post("/networks/{network_id}/sessions")
    def open_session(network_id: str):
        rec = _network_or_none(network_id)
        if rec is None:
            return _error(404, "unknown_network")
        srec = SessionRecord(
            id=uuid.uuid4().hex[:12],
            network_id=network_id,
            network_hash=rec.content_hash,
            session=InferenceSession(store.template_for(rec)),
        )
        with store.lock:
            store.sessions[srec.id] = srec
        return JSONResponse({"session_id": srec.id}, status_code=201)

    def _live_session(session_id: str):
        srec = store.sessions.get(session_id)
        if srec is None:
            return None, _error(404, "unknown_session")
        rec = _network_or_none(srec.network_id)
        if rec is None:
            return None, _error(404, "unknown_network")
        if rec.content_hash != srec.network_hash:
            return None, _error(409, "network_changed")
        return srec, None

    @app.post("/sessions/{session_id}/evidence")
    async def post_evidence(session_id: str, request: Request):
        srec, err = _live_session(session_id)
        if err is not None:
            return err
        try:
            body = await request.json()
        except json.JSONDecodeError as e:
            return _error(422, "bad_json", detail=str(e))
        bindings = body.get("set", {})
        do_propagate = bool(body.get("propagate", True))
        with srec.lock:
            try:
                ev = EvidenceSet.from_labels(srec.session.net, bindings)
            except NetworkFormatError as e:
                return _error(422, "bad_evidence", detail=str(e))
            try:
                srec.session.absorb(ev)
            except EvidenceError as e:
                return _error(409, "contradictory_evidence", detail=str(e))
            if not do_propagate:
                return JSONResponse({"status": "accepted",
                                     "evidence": srec.session.evidence}, status_code=202)
            return _propagated_report(srec)

    @app.post("/sessions/{session_id}/propagate")
    def propagate_endpoint(session_id: str):
        srec, err = _live_session(session_id)
        if err is not None:
            return err
        with srec.lock:
            return _propagated_report(srec)

    @app.delete("/sessions/{session_id}/evidence")
    def retract_endpoint(session_id: str):
        srec, err = _live_session(session_id)
        if err is not None:
            return err
        with srec.lock:
            srec.session.retract_all()
            return _propagated_report(srec)

    def _propagated_report(srec: SessionRecord) -> Response:
        try:
            srec.session.propagate()
        except ImpossibleEvidenceError:
            return _error(422, "impossible_evidence")
        return JSONResponse(srec.session.report().to_obj())

    return app
