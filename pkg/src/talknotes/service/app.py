"""HTTP + WebSocket session service."""

from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from fastapi import Depends, FastAPI, Header, HTTPException, Query, WebSocket, WebSocketDisconnect
from fastapi.responses import PlainTextResponse, Response
from pydantic import TypeAdapter, ValidationError

from talknotes.config import ConfigError, EngineParams, SessionConfig
from talknotes.engine import EngineInputError, note_wire_payload, thread_wire_payload
from talknotes.threader import filter_notes
from talknotes.model import (
    Bounds,
    ModelError,
    PointerSample,
    ProcessLabel,
    SceneElement,
    TranscriptFragment,
    View,
)
from talknotes.oracle import (
    DEFAULT_RULES,
    DeterministicOracle,
    RemoteOracle,
    RemoteOracleConfig,
    RuleConfig,
)
from talknotes.oracle.base import SemanticOracle
from talknotes.service.schemas import (
    ClientMessage,
    FilterMessage,
    FragmentMessage,
    NoteCheckedMessage,
    NotesResponse,
    PointerMessage,
    SessionCreateRequest,
    SessionCreateResponse,
    SessionStatusResponse,
    ThreadsResponse,
    TipAckMessage,
    ViewChangeMessage,
)
from talknotes.service.sessions import SessionHandle, SessionManager, SessionNotFound

logger = logging.getLogger(__name__)

_CLIENT_MESSAGE = TypeAdapter(ClientMessage)

_INT_PARAM_FIELDS = {
    f.name for f in dataclasses.fields(EngineParams) if f.type in ("int", int)
}


def _coerce_params(raw: dict[str, Any]) -> dict[str, Any]:
    """Match JSON numbers to the engine's int/float parameter fields."""
    out: dict[str, Any] = {}
    for key, value in raw.items():
        out[key] = int(value) if key in _INT_PARAM_FIELDS else float(value)
    return out


@dataclass
class ServiceSettings:
    log_dir: Path = Path("./session-logs")
    oracle: str = "deterministic"  # or "remote"
    rules_path: Path | None = None
    token: str | None = None
    remote_config: RemoteOracleConfig | None = None
    params_defaults: dict[str, Any] = field(default_factory=dict)


def build_oracle_factory(settings: ServiceSettings) -> Callable[[], SemanticOracle]:
    rules = (
        RuleConfig.from_json_file(settings.rules_path)
        if settings.rules_path is not None
        else DEFAULT_RULES
    )
    if settings.oracle == "remote":
        remote_config = settings.remote_config or RemoteOracleConfig.from_env()
        shared = RemoteOracle(remote_config)
        return lambda: shared
    deterministic = DeterministicOracle(rules)
    return lambda: deterministic


def create_app(settings: ServiceSettings | None = None) -> FastAPI:
    settings = settings or ServiceSettings()
    settings.log_dir.mkdir(parents=True, exist_ok=True)
    app = FastAPI(title="talknotes session service")
    manager = SessionManager(build_oracle_factory(settings), settings.log_dir)
    app.state.manager = manager
    app.state.settings = settings

    def auth(
        token: str | None = Query(default=None),
        authorization: str | None = Header(default=None),
    ) -> None:
        if settings.token is None:
            return
        if token == settings.token or authorization == f"Bearer {settings.token}":
            return
        raise HTTPException(status_code=401, detail="invalid or missing token")

    def get_session(session_id: str) -> SessionHandle:
        try:
            return manager.get(session_id)
        except SessionNotFound:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")

    @app.get("/healthz")
    async def healthz() -> dict[str, str]:
        return {"status": "ok"}

    @app.post("/session", response_model=SessionCreateResponse, dependencies=[Depends(auth)])
    async def open_session(request: SessionCreateRequest) -> SessionCreateResponse:
        try:
            params_kwargs = {**settings.params_defaults, **request.params}
            numeric = _coerce_params(params_kwargs)
            config = SessionConfig(
                mode=request.mode,
                brief=request.brief,
                canvas_width=request.canvas.width,
                canvas_height=request.canvas.height,
                initial_view=View(request.initial_view),
                scene=tuple(
                    SceneElement(
                        id=el.id,
                        name=el.name,
                        bounds=Bounds(**el.bounds.model_dump(exclude_none=True)),
                    )
                    for el in request.scene
                ),
                params=EngineParams(**numeric),
            )
        except (ConfigError, ModelError, TypeError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        handle = manager.create(config)
        logger.info("session %s opened (mode=%s)", handle.id, config.mode)
        return SessionCreateResponse(session_id=handle.id, mode=config.mode)

    @app.get("/session/{session_id}", response_model=SessionStatusResponse, dependencies=[Depends(auth)])
    async def session_status(session_id: str) -> SessionStatusResponse:
        handle = get_session(session_id)
        return SessionStatusResponse(
            session_id=handle.id,
            mode=handle.config.mode,
            closed=handle.engine.closed,
            now=handle.engine.now,
            notes=len(handle.engine.notes),
            threads=len(handle.engine.threads.threads),
        )

    @app.get("/session/{session_id}/notes", response_model=NotesResponse, dependencies=[Depends(auth)])
    async def query_notes(
        session_id: str,
        labels: str | None = Query(default=None, description="comma-separated label filter"),
        grouped: bool = Query(default=True, description="group by thread (else creation order)"),
    ) -> NotesResponse:
        handle = get_session(session_id)
        if handle.engine.baseline:
            return NotesResponse(session_id=handle.id, notes=[])
        label_set: set[ProcessLabel] = set()
        if labels:
            try:
                label_set = {ProcessLabel(value) for value in labels.split(",") if value}
            except ValueError as exc:
                raise HTTPException(status_code=422, detail=f"labels: {exc}")
        if label_set and not handle.engine.closed:
            now = handle.now_ms()
            notes, messages = await handle.run(
                lambda: handle.engine.handle_filter(label_set, now)
            )
            await handle.broadcast(messages)
            if not grouped:
                order = {nid: i for i, nid in enumerate(handle.engine.note_order)}
                notes = sorted(notes, key=lambda n: order.get(n.id, len(order)))
        else:
            # closed sessions stay queryable, but their log is sealed: filter
            # without recording a filter_applied event
            base = (
                handle.engine.notes_grouped() if grouped else handle.engine.live_notes()
            )
            notes = filter_notes(base, label_set)
        return NotesResponse(
            session_id=handle.id,
            notes=[note_wire_payload(note) for note in notes],
        )

    @app.get("/session/{session_id}/threads", response_model=ThreadsResponse, dependencies=[Depends(auth)])
    async def query_threads(session_id: str) -> ThreadsResponse:
        handle = get_session(session_id)
        threads, _ = await handle.run(
            lambda: [thread_wire_payload(t) for t in handle.engine.threads.threads]
        )
        return ThreadsResponse(session_id=handle.id, threads=threads)

    @app.get("/session/{session_id}/log", dependencies=[Depends(auth)])
    async def export_log(session_id: str) -> Response:
        handle = get_session(session_id)
        async with handle.lock:
            data = handle.log_path.read_bytes()
        return PlainTextResponse(content=data, media_type="application/x-ndjson")

    @app.post("/session/{session_id}/close", dependencies=[Depends(auth)])
    async def close_session(session_id: str) -> dict[str, Any]:
        handle = get_session(session_id)
        if not handle.engine.closed:
            await handle.close()
        return {"session_id": handle.id, "closed": True, "events": len(handle.engine.events)}

    @app.websocket("/session/{session_id}/stream")
    async def stream(websocket: WebSocket, session_id: str, token: str | None = None) -> None:
        if settings.token is not None and token != settings.token:
            await websocket.close(code=4401)
            return
        try:
            handle = manager.get(session_id)
        except SessionNotFound:
            await websocket.close(code=4404)
            return
        await websocket.accept()
        handle.connections.add(websocket)
        try:
            while True:
                raw = await websocket.receive_json()
                await _dispatch_client_message(handle, websocket, raw)
        except WebSocketDisconnect:
            pass
        finally:
            handle.connections.discard(websocket)

    return app


async def _dispatch_client_message(
    handle: SessionHandle, websocket: WebSocket, raw: Any
) -> None:
    try:
        message = _CLIENT_MESSAGE.validate_python(raw)
    except ValidationError as exc:
        await websocket.send_json(
            {"kind": "error", "detail": f"invalid message: {exc.errors()[0].get('msg', 'bad payload')}"}
        )
        return
    engine = handle.engine
    now = handle.now_ms()
    try:
        if isinstance(message, FragmentMessage):
            fragment = TranscriptFragment(
                text=message.text,
                t_start=message.t_start,
                t_end=message.t_end,
                is_final=message.is_final,
            )
            _, messages = await handle.run(lambda: engine.handle_fragment(fragment))
        elif isinstance(message, PointerMessage):
            sample = PointerSample(
                x=message.x,
                y=message.y,
                t=message.t,
                view=View(message.view),
                z=message.z,
            )
            _, messages = await handle.run(lambda: engine.handle_pointer(sample))
        elif isinstance(message, NoteCheckedMessage):
            t = message.t if message.t is not None else now
            _, messages = await handle.run(lambda: engine.handle_note_checked(message.id, t))
        elif isinstance(message, TipAckMessage):
            t = message.t if message.t is not None else now
            _, messages = await handle.run(lambda: engine.handle_tip_ack(message.id, t))
        elif isinstance(message, FilterMessage):
            labels = {ProcessLabel(value) for value in message.labels}
            t = message.t if message.t is not None else now
            _, messages = await handle.run(lambda: engine.handle_filter(labels, t))
        elif isinstance(message, ViewChangeMessage):
            t = message.t if message.t is not None else now
            _, messages = await handle.run(
                lambda: engine.handle_view_change(View(message.view), t)
            )
        else:  # pragma: no cover - discriminator is exhaustive
            raise EngineInputError(f"unsupported kind {raw.get('kind')}")
    except (EngineInputError, ModelError, ValueError) as exc:
        await websocket.send_json({"kind": "error", "detail": str(exc)})
        return
    await handle.broadcast(messages)
