"""Deterministic per-session engine.

All state mutation happens through the serialized methods below. Time only
moves via ``advance``; scheduled work fires at canonical due times computed
from the session clock, never from wall-clock arrival, so feeding the same
inputs (fragments, pointer samples, client actions, close) always yields a
byte-identical event log under the deterministic oracle.
"""

from __future__ import annotations

import logging
import time
from typing import Any, Callable

from talknotes.chunker import Chunker, FragmentOrderError
from talknotes.config import MODE_BASELINE, SessionConfig
from talknotes.events import EventKind, SessionEvent
from talknotes.model import (
    AnchorPoint,
    EnrichmentState,
    PointerSample,
    ProcessLabel,
    PromotedSegment,
    TalkNote,
    TalkThread,
    TalkTip,
    TranscriptFragment,
    View,
)
from talknotes.oracle.base import SemanticOracle
from talknotes.pipeline import (
    create_note,
    enrich,
    link_elements,
    merge_into,
    should_merge,
)
from talknotes.reminders import ReminderScheduler
from talknotes.threader import ThreadRegistry, filter_notes
from talknotes.tips import TipPool
from talknotes.trace import TraceStore

logger = logging.getLogger(__name__)

WireSink = Callable[[dict[str, Any]], None]


class EngineInputError(ValueError):
    """An input message was rejected; nothing was logged or mutated."""


def _anchor_payload(anchor: AnchorPoint) -> dict[str, Any]:
    payload: dict[str, Any] = {
        "confidence": anchor.confidence.value,
        "view": anchor.view.value,
        "x": anchor.x,
        "y": anchor.y,
    }
    if anchor.z is not None:
        payload["z"] = anchor.z
    return payload


def note_wire_payload(note: TalkNote) -> dict[str, Any]:
    return {
        "id": note.id,
        "transcript": note.transcript,
        "t_start": note.t_start,
        "t_end": note.t_end,
        "summary": note.summary,
        "labels": sorted(label.value for label in note.labels),
        "actions": [action.title for action in note.actions],
        "anchor": _anchor_payload(note.anchor),
        "linked_elements": sorted(note.linked_elements),
        "thread_id": note.thread_id,
        "merged_from": list(note.merged_from),
        "state": note.enrichment_state.value,
        "trace": [
            {"x": s.x, "y": s.y, "t": s.t, "view": s.view.value}
            | ({"z": s.z} if s.z is not None else {})
            for s in note.trace.samples
        ],
    }


def thread_wire_payload(thread: TalkThread) -> dict[str, Any]:
    return {
        "id": thread.id,
        "title": thread.title,
        "note_ids": list(thread.note_ids),
        "t_last": thread.t_last,
    }


class SessionEngine:
    """One live or replayed session; single-writer, no internal threads."""

    def __init__(
        self,
        config: SessionConfig,
        oracle: SemanticOracle,
        sink: WireSink | None = None,
        enrich_sleep: Callable[[float], None] = time.sleep,
    ):
        self.config = config
        self.oracle = oracle
        self.sink = sink
        self.enrich_sleep = enrich_sleep
        self.events: list[SessionEvent] = []
        self.now = 0
        self.closed = False
        self._seq = 0

        params = config.params
        self.baseline = config.mode == MODE_BASELINE
        self.chunker = Chunker(
            pause_promote_ms=params.pause_promote_ms,
            min_buffer_content_words=params.min_buffer_content_words,
        )
        self.trace_store = TraceStore(bucket_ms=params.trace_bucket_ms)
        self.notes: dict[str, TalkNote] = {}
        self.note_order: list[str] = []
        self.note_fragments: dict[str, list[TranscriptFragment]] = {}
        self.threads = ThreadRegistry()
        self.tips = TipPool(min_gap_ms=params.tip_min_gap_ms, display_ms=params.tip_display_ms)
        self.reminders = ReminderScheduler(
            cooldown_ms=params.reminder_cooldown_ms,
            max_simultaneous=params.reminder_max,
            min_note_age_ms=params.reminder_min_age_ms,
        )
        self.view = config.initial_view
        self.t_last_speech: int | None = None
        self._recent_finals: list[TranscriptFragment] = []
        self._note_seq = 1

        # (name, priority, interval, next_due); nothing periodic in baseline.
        self._periodic: list[list] = []
        if not self.baseline:
            self._periodic = [
                ["tick", 1, params.tick_ms, params.tick_ms],
                ["tip_generate", 2, params.tip_generate_interval_ms, params.tip_generate_interval_ms],
                ["tip_gate", 3, params.tip_gate_interval_ms, params.tip_gate_interval_ms],
                ["reminders", 4, params.reminder_interval_ms, params.reminder_interval_ms],
            ]
        self._oneshots: list[tuple[int, int, str, dict[str, Any]]] = []
        self._oneshot_seq = 0

        self._emit(EventKind.CONFIG, 0, config.to_payload())

    # -- event plumbing ------------------------------------------------------

    def _emit(self, kind: EventKind, t: int, payload: dict[str, Any]) -> SessionEvent:
        event = SessionEvent(seq=self._seq, t=t, kind=kind, payload=payload)
        self._seq += 1
        self.events.append(event)
        return event

    def _wire(self, message: dict[str, Any]) -> None:
        if self.sink is not None:
            self.sink(message)

    # -- clock ----------------------------------------------------------------

    def advance(self, t: int) -> None:
        """Move session time forward, firing every scheduled action whose
        canonical due time has been reached, in (due, priority) order."""
        target = max(t, self.now)
        while True:
            best: tuple[int, int] | None = None
            best_periodic: list | None = None
            best_oneshot: int | None = None
            for entry in self._periodic:
                due, priority = entry[3], entry[1]
                if due <= target and (best is None or (due, priority) < best):
                    best = (due, priority)
                    best_periodic, best_oneshot = entry, None
            for index, (due, priority, _, _) in enumerate(self._oneshots):
                if due <= target and (best is None or (due, priority) < best):
                    best = (due, priority)
                    best_periodic, best_oneshot = None, index
            if best is None:
                break
            self.now = max(self.now, best[0])
            if best_periodic is not None:
                best_periodic[3] += best_periodic[2]
                self._run_periodic(best_periodic[0], best[0])
            elif best_oneshot is not None:
                _, _, action, payload = self._oneshots.pop(best_oneshot)
                self._run_oneshot(action, best[0], payload)
        self.now = max(self.now, target)

    def _schedule_oneshot(self, due: int, action: str, payload: dict[str, Any]) -> None:
        # Priority 0: display dismissals come before same-time periodic work.
        self._oneshots.append((due, 0, action, payload))

    def _run_periodic(self, name: str, due: int) -> None:
        if name == "tick":
            segment = self.chunker.tick(due)
            if segment is not None:
                self._promote(segment)
            self._maybe_pause_nudge(due)
        elif name == "tip_generate":
            self._generate_tips(due)
        elif name == "tip_gate":
            self._gate_tip(due)
        elif name == "reminders":
            self._find_reminders(due)

    def _run_oneshot(self, action: str, due: int, payload: dict[str, Any]) -> None:
        if action == "tip_dismiss":
            if self.tips.current is not None and self.tips.current.id == payload["id"]:
                self.tips.current = None
            self._wire({"kind": "tip_dismissed", "id": payload["id"], "t": due})
        elif action == "reminder_hide":
            self._wire({"kind": "reminder_hidden", "note_id": payload["note_id"], "t": due})

    # -- inputs -----------------------------------------------------------------

    def _reject_if_closed(self) -> None:
        if self.closed:
            raise EngineInputError("session is closed")

    def handle_fragment(self, frag: TranscriptFragment) -> None:
        """Route one transcription fragment; partials feed the live display
        only, finals feed the chunker."""
        self._reject_if_closed()
        self.advance(frag.t_start)
        if frag.is_final and not self.baseline:
            # Silence since the previous fragment may promote between grid
            # ticks; run the pause check before validating ordering so a
            # cleanly promoted buffer cannot reject the new fragment.
            segment = self.chunker.tick(frag.t_start)
            if segment is not None:
                self._promote(segment)
            last_end = self.chunker.buffer.t_last_end
            if last_end is not None and frag.t_start < last_end:
                raise EngineInputError(
                    f"fragment out of order: t_start {frag.t_start} < buffered end {last_end}"
                )
        self._emit(
            EventKind.FRAGMENT_IN,
            frag.t_start,
            {
                "is_final": frag.is_final,
                "t_end": frag.t_end,
                "t_start": frag.t_start,
                "text": frag.text,
            },
        )
        self._wire(
            {"kind": "talktext", "text": frag.text, "is_final": frag.is_final, "t": frag.t_start}
        )
        self.t_last_speech = max(self.t_last_speech or 0, frag.t_end)
        if self.baseline or not frag.is_final:
            return
        self._recent_finals.append(frag)
        self._prune_recent(frag.t_end)
        self._wire({"kind": "talkviz", "variant": "boundary", "t": frag.t_start})
        try:
            segment = self.chunker.ingest(frag, self.oracle)
        except FragmentOrderError as exc:  # unreachable after the pre-check
            raise EngineInputError(str(exc)) from exc
        if segment is not None:
            self._promote(segment)

    def handle_pointer(self, sample: PointerSample) -> bool:
        """Record a pointer sample; late samples are dropped, not errors."""
        self._reject_if_closed()
        self.advance(sample.t)
        if not self.trace_store.record(sample):
            return False
        payload: dict[str, Any] = {
            "t": sample.t,
            "view": sample.view.value,
            "x": sample.x,
            "y": sample.y,
        }
        if sample.z is not None:
            payload["z"] = sample.z
        self._emit(EventKind.POINTER_IN, sample.t, payload)
        return True

    def handle_view_change(self, view: View, t: int) -> None:
        self._reject_if_closed()
        self.advance(t)
        self.view = view
        self._emit(EventKind.VIEW_CHANGE, t, {"view": view.value})

    def handle_note_checked(self, note_id: str, t: int) -> None:
        self._reject_if_closed()
        if self.baseline:
            raise EngineInputError("notes are disabled in baseline mode")
        # Advance before validating: the note may be created by scheduled
        # work (pause promotion) due at or before t.
        self.advance(t)
        if note_id not in self.notes:
            raise EngineInputError(f"unknown note id: {note_id}")
        self._emit(EventKind.NOTE_CHECKED, t, {"id": note_id})

    def handle_tip_ack(self, tip_id: str, t: int) -> None:
        """Explicit client acknowledgment of a shown tip."""
        self._reject_if_closed()
        if self.baseline:
            raise EngineInputError("tips are disabled in baseline mode")
        self.advance(t)
        if tip_id not in self.tips.shown:
            raise EngineInputError(f"unknown tip id: {tip_id}")
        tip = self.tips.shown[tip_id]
        if tip.responded:
            return
        self.tips.record_response(tip_id)
        self._emit(EventKind.TIP_RESPONSE, t, {"source": "client", "tip_id": tip_id})

    def handle_filter(self, labels: set[ProcessLabel], t: int) -> list[TalkNote]:
        self._reject_if_closed()
        if self.baseline:
            raise EngineInputError("filters are disabled in baseline mode")
        self.advance(t)
        self._emit(
            EventKind.FILTER_APPLIED, t, {"labels": sorted(label.value for label in labels)}
        )
        return filter_notes(self.threads.grouped_notes(self.notes), labels)

    def close(self, t: int) -> None:
        """Stop the session; buffered speech is promoted, never lost."""
        if self.closed:
            return
        self.advance(t)
        self._emit(EventKind.SESSION_CLOSED, self.now, {})
        if not self.baseline:
            segment = self.chunker.flush()
            if segment is not None:
                self._promote(segment)
        self.closed = True

    def apply_input(self, event: SessionEvent) -> None:
        """Feed one recorded input event back through the engine (replay)."""
        payload = event.payload
        if event.kind is EventKind.FRAGMENT_IN:
            self.handle_fragment(
                TranscriptFragment(
                    text=payload["text"],
                    t_start=payload["t_start"],
                    t_end=payload["t_end"],
                    is_final=payload["is_final"],
                )
            )
        elif event.kind is EventKind.POINTER_IN:
            self.handle_pointer(
                PointerSample(
                    x=payload["x"],
                    y=payload["y"],
                    t=payload["t"],
                    view=View(payload["view"]),
                    z=payload.get("z"),
                )
            )
        elif event.kind is EventKind.VIEW_CHANGE:
            self.handle_view_change(View(payload["view"]), event.t)
        elif event.kind is EventKind.NOTE_CHECKED:
            self.handle_note_checked(payload["id"], event.t)
        elif event.kind is EventKind.TIP_RESPONSE:
            self.handle_tip_ack(payload["tip_id"], event.t)
        elif event.kind is EventKind.FILTER_APPLIED:
            self.handle_filter(
                {ProcessLabel(value) for value in payload["labels"]}, event.t
            )
        elif event.kind is EventKind.SESSION_CLOSED:
            self.close(event.t)
        else:
            raise EngineInputError(f"not an input event: {event.kind.value}")

    # -- note pipeline -------------------------------------------------------------

    def _promote(self, segment: PromotedSegment) -> TalkNote:
        note_id = f"note-{self._note_seq:04d}"
        self._note_seq += 1
        note = create_note(
            note_id, segment, self.trace_store, self.view, self.config.canvas_center
        )
        self.notes[note.id] = note
        self.note_order.append(note.id)
        self.note_fragments[note.id] = list(segment.fragments)
        self._wire({"kind": "talkviz", "variant": "chunking", "t": self.now})
        self._emit(
            EventKind.NOTE_CREATED,
            self.now,
            {
                "anchor": _anchor_payload(note.anchor),
                "id": note.id,
                "t_end": note.t_end,
                "t_start": note.t_start,
                "trace_samples": len(note.trace),
                "transcript": note.transcript,
            },
        )
        self._wire({"kind": "note_created", "note": note_wire_payload(note), "t": self.now})

        merged_into_prev = self._try_merge(note)
        surviving = merged_into_prev if merged_into_prev is not None else note
        self._enrich_and_thread(surviving, newly_created=merged_into_prev is None)
        self._attribute_tip_responses(surviving, segment.t_start)
        return surviving

    def _try_merge(self, note: TalkNote) -> TalkNote | None:
        if len(self.note_order) < 2:
            return None
        prev = self.notes[self.note_order[-2]]
        if not should_merge(prev, note, self.oracle):
            return None
        del self.notes[note.id]
        self.note_order.remove(note.id)
        fragments = self.note_fragments.pop(note.id, [])
        merge_into(prev, note, self.trace_store, self.config.canvas_center)
        self.note_fragments.setdefault(prev.id, []).extend(fragments)
        self._emit(
            EventKind.NOTE_MERGED,
            self.now,
            {
                "anchor": _anchor_payload(prev.anchor),
                "id": prev.id,
                "merged_id": note.id,
                "t_end": prev.t_end,
                "t_start": prev.t_start,
                "transcript": prev.transcript,
            },
        )
        self._wire(
            {
                "kind": "note_merged",
                "note": note_wire_payload(prev),
                "merged_id": note.id,
                "t": self.now,
            }
        )
        thread = self.threads.touch(prev)
        if thread is not None:
            self._wire(
                {"kind": "thread_updated", "thread": thread_wire_payload(thread), "t": self.now}
            )
        return prev

    def _enrich_and_thread(self, note: TalkNote, newly_created: bool) -> None:
        enrich(note, self.oracle, brief=self.config.brief, sleep=self.enrich_sleep)
        note.linked_elements = link_elements(
            note,
            self.config.scene,
            self.oracle,
            self.config.canvas_size,
            utterances=self.note_fragments.get(note.id, ()),
        )
        self._emit(
            EventKind.NOTE_ENRICHED,
            self.now,
            {
                "actions": [action.title for action in note.actions],
                "id": note.id,
                "labels": sorted(label.value for label in note.labels),
                "linked_elements": sorted(note.linked_elements),
                "state": note.enrichment_state.value,
                "summary": note.summary,
            },
        )
        self._wire({"kind": "note_enriched", "note": note_wire_payload(note), "t": self.now})
        if newly_created:
            thread, created = self.threads.assign(
                note,
                self.notes,
                self.oracle,
                window_ms=self.config.params.thread_window_ms,
                threshold=self.config.params.thread_affinity_threshold,
            )
            self._emit(
                EventKind.THREAD_ASSIGNED,
                self.now,
                {
                    "created": created,
                    "note_id": note.id,
                    "thread_id": thread.id,
                    "title": thread.title,
                },
            )
            self._wire(
                {"kind": "thread_updated", "thread": thread_wire_payload(thread), "t": self.now}
            )

    def _attribute_tip_responses(self, note: TalkNote, verbalization_start: int) -> None:
        for tip in self.tips.attribute_note(note, verbalization_start):
            self._emit(
                EventKind.TIP_RESPONSE,
                self.now,
                {"note_id": note.id, "source": "auto", "tip_id": tip.id},
            )

    # -- proactive mechanisms ---------------------------------------------------------

    def _window_text(self, window_ms: int) -> str:
        cutoff = self.now - window_ms
        return " ".join(f.text for f in self._recent_finals if f.t_end >= cutoff)

    def _prune_recent(self, now: int) -> None:
        horizon = now - 120_000
        if self._recent_finals and self._recent_finals[0].t_end < horizon:
            self._recent_finals = [f for f in self._recent_finals if f.t_end >= horizon]

    def _generate_tips(self, due: int) -> None:
        recent = self._window_text(self.config.params.tip_recent_window_ms)
        added = self.tips.generate(recent, self.config.brief, self.oracle, due)
        if added:
            self._emit(
                EventKind.TIP_CANDIDATES,
                due,
                {
                    "tips": [
                        {"category": tip.category.value, "id": tip.id, "text": tip.text}
                        for tip in added
                    ]
                },
            )

    def _show_tip(self, tip: TalkTip, due: int) -> None:
        self._emit(
            EventKind.TIP_SHOWN,
            due,
            {"category": tip.category.value, "id": tip.id, "text": tip.text},
        )
        self._wire(
            {
                "kind": "tip_shown",
                "tip": {"id": tip.id, "category": tip.category.value, "text": tip.text},
                "t": due,
            }
        )
        self._schedule_oneshot(due + self.config.params.tip_display_ms, "tip_dismiss", {"id": tip.id})

    def _gate_tip(self, due: int) -> None:
        window = self._window_text(self.config.params.tip_current_window_ms)
        tip = self.tips.gate(window, self.oracle, due)
        if tip is not None:
            self._show_tip(tip, due)

    def _maybe_pause_nudge(self, due: int) -> None:
        tip = self.tips.pause_nudge(
            due,
            self.t_last_speech,
            self.oracle,
            silence_ms=self.config.params.pause_nudge_silence_ms,
        )
        if tip is not None:
            self._show_tip(tip, due)

    def _find_reminders(self, due: int) -> None:
        window = self._window_text(self.config.params.reminder_window_ms)
        live_notes = [self.notes[nid] for nid in self.note_order]
        for reminder in self.reminders.find_related(window, live_notes, self.oracle, due):
            self._emit(
                EventKind.REMINDER_SHOWN,
                due,
                {"cooldown_until": reminder.cooldown_until, "note_id": reminder.note_id},
            )
            note = self.notes.get(reminder.note_id)
            self._wire(
                {
                    "kind": "reminder_shown",
                    "note_id": reminder.note_id,
                    "summary": note.summary if note else None,
                    "t": due,
                }
            )
            self._schedule_oneshot(
                due + self.config.params.reminder_display_ms,
                "reminder_hide",
                {"note_id": reminder.note_id},
            )

    # -- queries -------------------------------------------------------------------------

    def live_notes(self) -> list[TalkNote]:
        return [self.notes[nid] for nid in self.note_order]

    def notes_grouped(self, labels: set[ProcessLabel] | None = None) -> list[TalkNote]:
        grouped = self.threads.grouped_notes(self.notes)
        return filter_notes(grouped, labels or set())
