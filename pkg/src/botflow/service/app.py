"""FastAPI application wrapping the detection engines.

Per-process state is deliberately small: a trigger inbox that stand-alone
hosts push into, and the document from the most recent network analysis,
which backs the signature and blacklist feeds. Everything else is a pure
function of the request body.
"""

from __future__ import annotations

import json
import tempfile
from pathlib import Path
from typing import Callable, Sequence

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse

from .. import __version__
from ..analytics import dtw_distance
from ..config import EngineConfig
from ..flow_model import ingest_captures, read_conversations
from ..network import network_document, run_network
from ..standalone import (
    Category,
    TriggerEvent,
    read_event_log,
    run_standalone,
    write_reports,
    write_triggers,
)
from ..synth import generate, write_corpus
from .schemas import (
    DtwRequest,
    NetworkRequest,
    StandaloneRequest,
    SynthRequest,
    TriggerBatch,
    TriggerIn,
)


def _from_text(text: str, name: str, reader: Callable):
    # Wire payloads go through the file parsers so errors carry line numbers.
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / name
        path.write_text(text, encoding="utf-8")
        return reader(path)


def _rows(writer: Callable, items: Sequence) -> list[dict]:
    # Serialize through the canonical writers so wire rows match file rows.
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "rows.jsonl"
        writer(items, path)
        text = path.read_text(encoding="utf-8")
    return [json.loads(line) for line in text.splitlines()]


def _to_trigger(row: TriggerIn) -> TriggerEvent:
    return TriggerEvent(
        originator_ip=row.originator_ip,
        process_id=row.process_id,
        inbound_ports=tuple(row.inbound_ports),
        outbound_ports=tuple(row.outbound_ports),
        peer_ips=tuple(row.peer_ips),
        category=Category(row.category),
        suspicion_value=row.suspicion_value,
        api_profile=tuple(row.api_profile) if row.api_profile is not None else None,
    )


def create_app(config: EngineConfig | None = None) -> FastAPI:
    app = FastAPI(title="botflow", version=__version__)
    app.state.config = config or EngineConfig()
    app.state.inbox = []
    app.state.last_doc = None

    @app.exception_handler(ValueError)
    async def reject_bad_input(request, exc):
        # Malformed records, unknown scenarios, bad categories, empty series.
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.post("/dtw")
    def dtw(req: DtwRequest):
        result = dtw_distance(req.series_a, req.series_b)
        body = {"accumulated": result.accumulated, "normalized": result.distance}
        if req.include_path:
            body["path"] = [list(step) for step in result.path]
        return body

    @app.post("/synth")
    def synth(req: SynthRequest):
        options = {} if req.n_agents is None else {"n_agents": req.n_agents}
        try:
            corpus = generate(req.scenario, seed=req.seed, **options)
        except TypeError as err:
            # Option not supported by this scenario.
            raise HTTPException(status_code=400, detail=str(err)) from err
        with tempfile.TemporaryDirectory() as tmp:
            paths = write_corpus(corpus, tmp)
            files = {p.name: p.read_text(encoding="utf-8") for p in paths.values()}
        return {
            "scenario": corpus.name,
            "seed": corpus.seed,
            "labels": corpus.labels,
            "files": files,
        }

    @app.post("/standalone/run")
    def standalone_run(req: StandaloneRequest):
        captures = _from_text(req.captures_jsonl, "captures.jsonl", ingest_captures)
        conversations = _from_text(
            req.conversations_jsonl, "conversations.jsonl", read_conversations
        )
        events = {}
        if req.events_jsonl is not None:
            events = _from_text(req.events_jsonl, "events.jsonl", read_event_log)
        reports, triggers = run_standalone(
            captures, conversations, events, app.state.config
        )
        return {
            "reports": _rows(write_reports, reports),
            "triggers": _rows(write_triggers, triggers),
        }

    @app.post("/triggers")
    def push_triggers(batch: TriggerBatch):
        # Convert every row before touching the inbox: a bad row rejects the
        # whole batch instead of leaving it half-stored.
        accepted = [_to_trigger(row) for row in batch.triggers]
        app.state.inbox.extend(accepted)
        return {"accepted": len(accepted), "total": len(app.state.inbox)}

    @app.get("/triggers")
    def list_triggers():
        return {"triggers": _rows(write_triggers, app.state.inbox)}

    @app.post("/network/analyze")
    def network_analyze(req: NetworkRequest):
        captures = _from_text(req.captures_jsonl, "captures.jsonl", ingest_captures)
        conversations = _from_text(
            req.conversations_jsonl, "conversations.jsonl", read_conversations
        )
        if req.triggers is None:
            triggers = tuple(app.state.inbox)
        else:
            triggers = tuple(_to_trigger(row) for row in req.triggers)
        result = run_network(
            captures, conversations, triggers, app.state.config, interval=req.interval
        )
        doc = network_document(result)
        app.state.last_doc = doc
        return doc

    @app.get("/signatures")
    def signatures():
        doc = app.state.last_doc
        return {"signatures": doc["signatures"] if doc else []}

    @app.get("/blacklist")
    def blacklist():
        doc = app.state.last_doc
        if doc is None:
            return {"ips": [], "soft": True}
        return doc["blacklist"]

    return app
