"""Deterministic replay: recorded inputs in, regenerated event log out."""

from __future__ import annotations

from pathlib import Path

from talknotes.config import SessionConfig
from talknotes.engine import SessionEngine
from talknotes.events import EventKind, SessionEvent, read_log, serialize_log
from talknotes.oracle import DEFAULT_RULES, DeterministicOracle, RuleConfig
from talknotes.oracle.base import SemanticOracle


class ReplayError(ValueError):
    pass


def replay_events(
    events: list[SessionEvent], oracle: SemanticOracle | None = None
) -> SessionEngine:
    """Feed the input events of a recorded log through a fresh engine.

    The first event must be the session config. Derived events in the input
    are ignored; the engine regenerates them. With the deterministic oracle
    the regenerated log is byte-identical to the recorded one.
    """
    if not events:
        raise ReplayError("empty log")
    first = events[0]
    if first.kind is not EventKind.CONFIG:
        raise ReplayError("log must start with a config event")
    config = SessionConfig.from_payload(first.payload)
    engine = SessionEngine(config, oracle or DeterministicOracle(DEFAULT_RULES))
    last_t = events[-1].t
    for event in events[1:]:
        if event.is_input():
            engine.apply_input(event)
    engine.advance(last_t)
    return engine


def replay_file(
    path: str | Path,
    oracle: SemanticOracle | None = None,
    rules: RuleConfig | None = None,
) -> tuple[SessionEngine, bytes]:
    """Replay a JSONL log file; returns the final engine state and the
    regenerated log bytes."""
    events = read_log(path)
    if oracle is None:
        oracle = DeterministicOracle(rules or DEFAULT_RULES)
    engine = replay_events(events, oracle)
    return engine, serialize_log(engine.events)


def verify_replay(path: str | Path, oracle: SemanticOracle | None = None) -> bool:
    """True when replaying the log regenerates it byte-for-byte."""
    original = Path(path).read_bytes()
    _, regenerated = replay_file(path, oracle=oracle)
    return regenerated == original
