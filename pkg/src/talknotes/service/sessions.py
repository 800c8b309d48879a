"""Session lifecycle for the service: per-session engine, clock, log file,
and websocket fan-out. All engine access is serialized per session."""

from __future__ import annotations

import asyncio
import logging
import time
import uuid
from pathlib import Path
from typing import Any, Callable

from talknotes.config import SessionConfig
from talknotes.engine import SessionEngine
from talknotes.events import EventLogWriter
from talknotes.oracle.base import SemanticOracle

logger = logging.getLogger(__name__)

TICKER_PERIOD_S = 0.25


class SessionNotFound(KeyError):
    pass


class SessionHandle:
    """One live session: engine + wall clock + persistence + subscribers."""

    def __init__(self, session_id: str, config: SessionConfig, oracle: SemanticOracle, log_dir: Path):
        self.id = session_id
        self.config = config
        self._t0 = time.monotonic()
        self._wire_buffer: list[dict[str, Any]] = []
        self.engine = SessionEngine(config, oracle, sink=self._wire_buffer.append)
        self.lock = asyncio.Lock()
        self.log_path = log_dir / f"{session_id}.events.jsonl"
        self.writer = EventLogWriter(self.log_path)
        self._written = 0
        self.connections: set[Any] = set()
        self.ticker: asyncio.Task | None = None
        self._flush_events()

    # -- clock ---------------------------------------------------------------

    def now_ms(self) -> int:
        return int((time.monotonic() - self._t0) * 1000)

    # -- engine access ---------------------------------------------------------

    async def run(self, fn: Callable[[], Any]) -> tuple[Any, list[dict[str, Any]]]:
        """Run one engine operation serialized on this session; returns the
        result and the wire messages it produced."""
        async with self.lock:
            result = await asyncio.to_thread(fn)
            messages = self._drain_wire()
            self._flush_events()
        return result, messages

    def _drain_wire(self) -> list[dict[str, Any]]:
        messages, self._wire_buffer[:] = list(self._wire_buffer), []
        return messages

    def _flush_events(self) -> None:
        events = self.engine.events
        while self._written < len(events):
            self.writer.append(events[self._written])
            self._written += 1

    # -- fan-out -----------------------------------------------------------------

    async def broadcast(self, messages: list[dict[str, Any]]) -> None:
        if not messages:
            return
        dead = []
        for connection in list(self.connections):
            try:
                for message in messages:
                    await connection.send_json(message)
            except Exception:
                dead.append(connection)
        for connection in dead:
            self.connections.discard(connection)

    # -- lifecycle ------------------------------------------------------------------

    async def tick_forever(self) -> None:
        try:
            while not self.engine.closed:
                await asyncio.sleep(TICKER_PERIOD_S)
                now = self.now_ms()
                _, messages = await self.run(lambda: self.engine.advance(now))
                await self.broadcast(messages)
        except asyncio.CancelledError:
            pass

    async def close(self) -> None:
        if self.ticker is not None:
            self.ticker.cancel()
        now = self.now_ms()
        _, messages = await self.run(lambda: self.engine.close(now))
        await self.broadcast(messages)
        self.writer.close()


class SessionManager:
    def __init__(self, oracle_factory: Callable[[], SemanticOracle], log_dir: Path):
        self.oracle_factory = oracle_factory
        self.log_dir = log_dir
        self.sessions: dict[str, SessionHandle] = {}

    def create(self, config: SessionConfig) -> SessionHandle:
        session_id = uuid.uuid4().hex[:12]
        handle = SessionHandle(session_id, config, self.oracle_factory(), self.log_dir)
        self.sessions[session_id] = handle
        handle.ticker = asyncio.get_running_loop().create_task(handle.tick_forever())
        return handle

    def get(self, session_id: str) -> SessionHandle:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise SessionNotFound(session_id) from None

    async def close_all(self) -> None:
        for handle in list(self.sessions.values()):
            if not handle.engine.closed:
                await handle.close()
