"""Offline analysis over session logs: speech rate, per-session process
statistics, engagement/recap pattern classification, timeline export."""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass
from enum import Enum

from talknotes.events import EventKind, SessionEvent

# Contractions counted as single words (fixed 30-entry table).
CONTRACTIONS: frozenset[str] = frozenset(
    {
        "don't", "doesn't", "didn't", "isn't", "aren't", "wasn't", "weren't",
        "can't", "couldn't", "won't", "wouldn't", "shouldn't", "hasn't",
        "haven't", "hadn't", "it's", "that's", "there's", "what's", "let's",
        "i'm", "i've", "i'll", "i'd", "you're", "you've", "we're", "we'll",
        "they're", "they've",
    }
)

# Clitic suffixes split off apostrophe forms that are not table contractions;
# each split part then counts on its own ("john's" -> john + 's = 2 words).
CLITIC_SUFFIXES: tuple[str, ...] = ("n't", "'re", "'ve", "'ll", "'s", "'d", "'m")

_ALPHA_RE = re.compile(r"[a-z]")
_EDGE_TRIM_RE = re.compile(r"^[^a-z0-9']+|[^a-z0-9']+$")


class EngagementPattern(str, Enum):
    NOTE_EXPLORER = "note_explorer"
    TIP_DRIVEN_ELABORATOR = "tip_driven_elaborator"
    HEAVY_INTEGRATOR = "heavy_integrator"
    DOCUMENTATION_ONLY = "documentation_only"


class RecapPattern(str, Enum):
    LIGHT = "light_recap_user"
    ITERATIVE = "iterative_recap_user"
    POWER = "power_recap_user"


# Loosest integer cuts that separate the observed per-session statistics.
EXPLORER_CHECKED_MIN = 4
TIP_RESPONSES_MIN = 7

# Recap bands over notes_checked; heavy filter use shifts one band up.
RECAP_ITERATIVE_CHECKED_MIN = 2
RECAP_POWER_CHECKED_MIN = 6
RECAP_FILTER_SHIFT_MIN = 3


def count_words(transcript: str) -> int:
    """Words = whitespace tokens with at least one letter, punctuation
    stripped; table contractions count once, other apostrophe clitics are
    split and counted per alphabetic part."""
    count = 0
    for raw in transcript.lower().replace("’", "'").split():
        token = _EDGE_TRIM_RE.sub("", raw)
        if not token:
            continue
        if token in CONTRACTIONS:
            count += 1
            continue
        for part in _split_clitic(token):
            if _ALPHA_RE.search(part):
                count += 1
    return count


def _split_clitic(token: str) -> tuple[str, ...]:
    if "'" in token:
        for suffix in CLITIC_SUFFIXES:
            if token.endswith(suffix) and len(token) > len(suffix):
                return token[: -len(suffix)], suffix
    return (token,)


def wpm(transcript: str, duration_minutes: float) -> float:
    """Words per minute over the given duration."""
    if duration_minutes <= 0:
        raise ValueError("duration must be positive")
    return count_words(transcript) / duration_minutes


@dataclass(frozen=True)
class SessionStats:
    duration_ms: int
    notes_created: int
    notes_merged: int
    notes_checked: int
    tips_shown: int
    tip_responses: int
    reminders_shown: int
    filter_applications: int

    @property
    def duration_minutes(self) -> float:
        return self.duration_ms / 60_000.0


def session_stats(events: list[SessionEvent]) -> SessionStats:
    """Counts derived purely from event kinds; duration is the last event t."""
    counts: dict[EventKind, int] = {}
    for event in events:
        counts[event.kind] = counts.get(event.kind, 0) + 1
    return SessionStats(
        duration_ms=events[-1].t if events else 0,
        notes_created=counts.get(EventKind.NOTE_CREATED, 0),
        notes_merged=counts.get(EventKind.NOTE_MERGED, 0),
        notes_checked=counts.get(EventKind.NOTE_CHECKED, 0),
        tips_shown=counts.get(EventKind.TIP_SHOWN, 0),
        tip_responses=counts.get(EventKind.TIP_RESPONSE, 0),
        reminders_shown=counts.get(EventKind.REMINDER_SHOWN, 0),
        filter_applications=counts.get(EventKind.FILTER_APPLIED, 0),
    )


def transcript_of(events: list[SessionEvent]) -> str:
    """Full final transcript recorded in a log."""
    return " ".join(
        event.payload["text"]
        for event in events
        if event.kind is EventKind.FRAGMENT_IN and event.payload.get("is_final")
    )


def log_wpm(events: list[SessionEvent]) -> float:
    return wpm(transcript_of(events), session_stats(events).duration_minutes)


def classify_engagement(
    stats: SessionStats,
    checked_min: int = EXPLORER_CHECKED_MIN,
    responses_min: int = TIP_RESPONSES_MIN,
) -> EngagementPattern:
    """Think-aloud engagement archetype from per-session counts."""
    explorer = stats.notes_checked >= checked_min
    elaborator = stats.tip_responses >= responses_min
    if explorer and elaborator:
        return EngagementPattern.HEAVY_INTEGRATOR
    if explorer:
        return EngagementPattern.NOTE_EXPLORER
    if elaborator:
        return EngagementPattern.TIP_DRIVEN_ELABORATOR
    return EngagementPattern.DOCUMENTATION_ONLY


def classify_recap(
    stats: SessionStats,
    iterative_min: int = RECAP_ITERATIVE_CHECKED_MIN,
    power_min: int = RECAP_POWER_CHECKED_MIN,
    filter_shift_min: int = RECAP_FILTER_SHIFT_MIN,
) -> RecapPattern:
    """Recap engagement band from note inspections and filter use."""
    if stats.notes_checked >= power_min:
        band = 2
    elif stats.notes_checked >= iterative_min:
        band = 1
    else:
        band = 0
    if stats.filter_applications >= filter_shift_min:
        band = min(2, band + 1)
    return (RecapPattern.LIGHT, RecapPattern.ITERATIVE, RecapPattern.POWER)[band]


_TIMELINE_KINDS = (
    EventKind.NOTE_CREATED,
    EventKind.NOTE_MERGED,
    EventKind.NOTE_CHECKED,
    EventKind.TIP_SHOWN,
    EventKind.TIP_RESPONSE,
    EventKind.REMINDER_SHOWN,
)


def _timeline_detail(event: SessionEvent) -> str:
    payload = event.payload
    if event.kind is EventKind.NOTE_CREATED or event.kind is EventKind.NOTE_CHECKED:
        return payload.get("id", "")
    if event.kind is EventKind.NOTE_MERGED:
        return f"{payload.get('merged_id', '')} -> {payload.get('id', '')}"
    if event.kind is EventKind.TIP_SHOWN:
        return f"{payload.get('id', '')} {payload.get('text', '')}".strip()
    if event.kind is EventKind.TIP_RESPONSE:
        return f"{payload.get('tip_id', '')} ({payload.get('source', '')})"
    if event.kind is EventKind.REMINDER_SHOWN:
        return payload.get("note_id", "")
    return ""


def timeline_export(events: list[SessionEvent]) -> str:
    """CSV of plot-relevant events sorted by time (header always present)."""
    rows = sorted(
        (e for e in events if e.kind in _TIMELINE_KINDS),
        key=lambda e: (e.t, e.seq),
    )
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["t", "event_kind", "detail"])
    for event in rows:
        writer.writerow([event.t, event.kind.value, _timeline_detail(event)])
    return out.getvalue()
