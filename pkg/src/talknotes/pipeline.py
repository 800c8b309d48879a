"""Turns promoted segments into notes and enriches them: summary, labels,
action suggestions, anchor, trace slice, element links, merge handling."""

from __future__ import annotations

import logging
import time
from typing import Callable, Sequence

from talknotes.model import (
    ActionSuggestion,
    AnchorConfidence,
    AnchorPoint,
    EnrichmentState,
    PointerTrace,
    ProcessLabel,
    PromotedSegment,
    SceneElement,
    TalkNote,
    TranscriptFragment,
    View,
)
from talknotes.oracle.base import OverlayContext, SemanticOracle
from talknotes.text import truncate
from talknotes.trace import TraceStore, dwell_centroid, render_overlay

logger = logging.getLogger(__name__)

# A new note may merge into its immediate predecessor only within this gap.
MERGE_WINDOW_MS = 60_000

ENRICH_MAX_ATTEMPTS = 3  # initial try + 2 retries
ENRICH_BACKOFF_S = (1.0, 2.0)
FAILED_SUMMARY_CHARS = 80


def compute_anchor(
    trace_slice: PointerTrace,
    window: tuple[int, int],
    view: View,
    last_known: tuple[float, float, float | None] | None = None,
    canvas_center: tuple[float, float] = (0.0, 0.0),
) -> AnchorPoint:
    """Anchor a note where the user was pointing while speaking.

    Dwell-weighted centroid of the slice when it has samples; otherwise the
    last known pointer position; otherwise the canvas center.
    """
    centroid = dwell_centroid(trace_slice, window[0], window[1], view=view)
    if centroid is not None:
        x, y, z = centroid
        return AnchorPoint(
            x=x, y=y, z=z if view is View.THREE_D else None,
            view=view, confidence=AnchorConfidence.FROM_TRACE,
        )
    if last_known is not None:
        x, y, z = last_known
        return AnchorPoint(
            x=x, y=y, z=z if view is View.THREE_D else None,
            view=view, confidence=AnchorConfidence.LAST_KNOWN,
        )
    return AnchorPoint(
        x=canvas_center[0], y=canvas_center[1],
        z=0.0 if view is View.THREE_D else None,
        view=view, confidence=AnchorConfidence.FALLBACK,
    )


def create_note(
    note_id: str,
    segment: PromotedSegment,
    trace_store: TraceStore,
    view: View,
    canvas_center: tuple[float, float],
) -> TalkNote:
    """Build a pending note with its anchor and trace slice attached."""
    trace_slice = trace_store.slice(segment.t_start, segment.t_end)
    last = trace_store.last_before(segment.t_end, view=view)
    last_known = (last.x, last.y, last.z) if last is not None else None
    anchor = compute_anchor(
        trace_slice,
        (segment.t_start, segment.t_end),
        view,
        last_known=last_known,
        canvas_center=canvas_center,
    )
    return TalkNote(
        id=note_id,
        transcript=segment.text,
        t_start=segment.t_start,
        t_end=segment.t_end,
        anchor=anchor,
        trace=trace_slice,
    )


def enrich(
    note: TalkNote,
    oracle: SemanticOracle,
    brief: str = "",
    sleep: Callable[[float], None] = time.sleep,
) -> TalkNote:
    """Fill summary, labels and actions; degrade to Failed after retries.

    Failed is a terminal, queryable state, not an exception: the note keeps
    a truncated-transcript summary and a lone Process label.
    """
    if note.enrichment_state is not EnrichmentState.PENDING:
        raise ValueError(f"note {note.id} is not pending enrichment")
    for attempt in range(ENRICH_MAX_ATTEMPTS):
        try:
            summary = oracle.summarize(note.transcript)
            labels = set(oracle.classify_labels(note.transcript))
            titles = oracle.suggest_actions(note.transcript, brief)
            break
        except Exception as exc:  # provider already logged specifics
            if attempt + 1 == ENRICH_MAX_ATTEMPTS:
                logger.warning("enrichment failed for %s: %s", note.id, exc)
                note.summary = truncate(note.transcript, FAILED_SUMMARY_CHARS)
                note.labels = {ProcessLabel.PROCESS}
                note.actions = []
                note.enrichment_state = EnrichmentState.FAILED
                return note
            sleep(ENRICH_BACKOFF_S[attempt])
    else:  # pragma: no cover - loop always breaks or returns
        raise AssertionError
    note.summary = summary
    note.labels = labels if labels else {ProcessLabel.PROCESS}
    note.actions = [ActionSuggestion(title=t) for t in titles[:3]]
    note.enrichment_state = EnrichmentState.ENRICHED
    note.validate()
    return note


def should_merge(prev: TalkNote, new: TalkNote, oracle: SemanticOracle) -> bool:
    """Ask for a merge verdict only within the time window; never deeper
    than the immediately preceding note."""
    if new.t_start - prev.t_end > MERGE_WINDOW_MS:
        return False
    return oracle.merge_check(prev.transcript, new.transcript)


def merge_into(
    prev: TalkNote,
    new: TalkNote,
    trace_store: TraceStore,
    canvas_center: tuple[float, float],
) -> TalkNote:
    """Fold ``new`` into ``prev``: transcripts joined, spans unioned, traces
    concatenated, anchor recomputed over the union window."""
    prev.transcript = f"{prev.transcript} {new.transcript}"
    prev.t_start = min(prev.t_start, new.t_start)
    prev.t_end = max(prev.t_end, new.t_end)
    prev.trace = trace_store.slice(prev.t_start, prev.t_end)
    last = trace_store.last_before(prev.t_end, view=prev.anchor.view)
    last_known = (last.x, last.y, last.z) if last is not None else None
    prev.anchor = compute_anchor(
        prev.trace,
        (prev.t_start, prev.t_end),
        prev.anchor.view,
        last_known=last_known,
        canvas_center=canvas_center,
    )
    prev.merged_from.append(new.id)
    prev.merged_from.extend(mid for mid in new.merged_from if mid not in prev.merged_from)
    # Labels are recomputed from scratch by a follow-up enrichment pass.
    prev.summary = None
    prev.labels = set()
    prev.actions = []
    prev.linked_elements = set()
    prev.enrichment_state = EnrichmentState.PENDING
    return prev


def link_elements(
    note: TalkNote,
    scene: Sequence[SceneElement],
    oracle: SemanticOracle,
    canvas_size: tuple[int, int],
    utterances: Sequence[TranscriptFragment] = (),
) -> set[str]:
    """Identify scene elements the note refers to, by speech or by pointing."""
    if not scene:
        return set()
    rows = list(utterances) or [
        TranscriptFragment(
            text=note.transcript, t_start=note.t_start, t_end=note.t_end, is_final=True
        )
    ]
    overlay = render_overlay(canvas_size, note.trace, rows)
    png: bytes | None = None
    if getattr(oracle, "wants_overlay_png", False):
        from talknotes.trace import rasterize_overlay

        png = rasterize_overlay(overlay)
    context = OverlayContext(
        timeline=overlay.timeline,
        samples=tuple((s.x, s.y) for s in note.trace.samples),
        markers=tuple((m.x, m.y) for m in overlay.markers),
        png=png,
    )
    return set(oracle.element_link(note.transcript, scene, context))
