"""Append-only session event log: canonical JSONL encoding and decoding.

The log is the single source of truth: every server-side event appears here
with its seq, and replaying the recorded inputs through the engine with the
deterministic oracle must regenerate these bytes exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, TextIO


class EventKind(str, Enum):
    CONFIG = "config"
    FRAGMENT_IN = "fragment_in"
    POINTER_IN = "pointer_in"
    VIEW_CHANGE = "view_change"
    NOTE_CREATED = "note_created"
    NOTE_ENRICHED = "note_enriched"
    NOTE_MERGED = "note_merged"
    THREAD_ASSIGNED = "thread_assigned"
    TIP_CANDIDATES = "tip_candidates"
    TIP_SHOWN = "tip_shown"
    TIP_RESPONSE = "tip_response"
    REMINDER_SHOWN = "reminder_shown"
    NOTE_CHECKED = "note_checked"
    FILTER_APPLIED = "filter_applied"
    SESSION_CLOSED = "session_closed"


# Events fed back into the engine during replay; everything else is derived
# and must be regenerated bit-for-bit.
INPUT_KINDS: frozenset[EventKind] = frozenset(
    {
        EventKind.CONFIG,
        EventKind.FRAGMENT_IN,
        EventKind.POINTER_IN,
        EventKind.VIEW_CHANGE,
        EventKind.NOTE_CHECKED,
        EventKind.FILTER_APPLIED,
        EventKind.SESSION_CLOSED,
    }
)


class LogDecodeError(ValueError):
    """A log line could not be decoded; carries its 1-based line number."""

    def __init__(self, line_number: int, reason: str):
        super().__init__(f"line {line_number}: {reason}")
        self.line_number = line_number


@dataclass(frozen=True)
class SessionEvent:
    seq: int
    t: int
    kind: EventKind
    payload: dict[str, Any]

    def is_input(self) -> bool:
        if self.kind is EventKind.TIP_RESPONSE:
            return self.payload.get("source") == "client"
        return self.kind in INPUT_KINDS


def encode_event(event: SessionEvent) -> str:
    """One canonical JSONL line, newline included."""
    record = {
        "seq": event.seq,
        "t": event.t,
        "kind": event.kind.value,
        "payload": event.payload,
    }
    return json.dumps(record, sort_keys=True, separators=(",", ":"), ensure_ascii=True) + "\n"


def decode_line(line: str, line_number: int) -> SessionEvent:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise LogDecodeError(line_number, f"invalid JSON ({exc.msg})") from exc
    if not isinstance(record, dict):
        raise LogDecodeError(line_number, "event must be a JSON object")
    try:
        kind = EventKind(record["kind"])
        return SessionEvent(
            seq=int(record["seq"]),
            t=int(record["t"]),
            kind=kind,
            payload=record["payload"],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise LogDecodeError(line_number, f"malformed event: {exc}") from exc


def read_log(path: str | Path) -> list[SessionEvent]:
    """Decode a JSONL log file; aborts with the offending line number."""
    events: list[SessionEvent] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, start=1):
            if not line.endswith("\n"):
                raise LogDecodeError(line_number, "truncated line (missing newline)")
            stripped = line.strip()
            if not stripped:
                raise LogDecodeError(line_number, "blank line")
            events.append(decode_line(stripped, line_number))
    for prev, cur in zip(events, events[1:]):
        if cur.seq <= prev.seq:
            raise LogDecodeError(0, f"seq not strictly increasing at seq {cur.seq}")
    return events


def serialize_log(events: Iterable[SessionEvent]) -> bytes:
    return "".join(encode_event(e) for e in events).encode("utf-8")


class EventLogWriter:
    """Appends canonical lines to a per-session JSONL file as they happen."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh: TextIO | None = open(self.path, "a", encoding="utf-8")

    def append(self, event: SessionEvent) -> None:
        if self._fh is None:
            raise ValueError("log writer already closed")
        self._fh.write(encode_event(event))
        self._fh.flush()

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None
