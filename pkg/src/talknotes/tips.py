"""Tip candidate pool, display gating, pause nudges, response attribution."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from talknotes.model import TalkNote, TalkTip, TipCategory
from talknotes.oracle.base import SemanticOracle
from talknotes.text import STOPWORDS, content_words

logger = logging.getLogger(__name__)

GENERATE_INTERVAL_MS = 20_000
GATE_INTERVAL_MS = 10_000
MIN_GAP_MS = 30_000          # between consecutive shown tips
DISPLAY_MS = 8_000           # auto-dismiss after this long on screen
PAUSE_NUDGE_SILENCE_MS = 12_000
RESPONSE_WINDOW_MS = 30_000  # a note starting this soon after a tip may answer it


@dataclass
class TipPool:
    """Candidate and shown-tip state for one session; engine-serialized."""

    min_gap_ms: int = MIN_GAP_MS
    display_ms: int = DISPLAY_MS
    candidates: list[TalkTip] = field(default_factory=list)
    shown: dict[str, TalkTip] = field(default_factory=dict)
    last_shown_t: int | None = None
    current: TalkTip | None = None
    _next_id: int = 1
    _nudge_cycle: int = 0

    # -- candidate generation -------------------------------------------------

    def generate(
        self, recent_transcript: str, brief: str, oracle: SemanticOracle, now: int
    ) -> list[TalkTip]:
        """Add up to three fresh candidates (one per category); never raises."""
        if not recent_transcript.strip():
            return []
        try:
            drafts = oracle.tip_candidates(recent_transcript, brief)
        except Exception as exc:
            logger.warning("tip generation degraded: %s", exc)
            return []
        added: list[TalkTip] = []
        pending_texts = {tip.text for tip in self.candidates}
        per_category: set[TipCategory] = set()
        for draft in drafts[:3]:
            if draft.category in per_category or draft.text in pending_texts:
                continue
            tip = TalkTip(
                id=f"tip-{self._next_id:04d}",
                category=draft.category,
                text=draft.text,
                created_t=now,
            )
            self._next_id += 1
            self.candidates.append(tip)
            added.append(tip)
            pending_texts.add(tip.text)
            per_category.add(draft.category)
        return added

    # -- display gating ---------------------------------------------------------

    def _rate_limited(self, now: int) -> bool:
        return self.last_shown_t is not None and now - self.last_shown_t < self.min_gap_ms

    def displayed(self, now: int) -> TalkTip | None:
        """The tip currently on screen, if its display window is still open."""
        if self.current is None or self.current.shown_t is None:
            return None
        if now - self.current.shown_t >= self.display_ms:
            return None
        return self.current

    def gate(self, current_window: str, oracle: SemanticOracle, now: int) -> TalkTip | None:
        """Show at most one sufficiently relevant candidate."""
        if not self.candidates or self._rate_limited(now) or self.displayed(now):
            return None
        pairs = [(tip.id, tip.text) for tip in self.candidates]
        try:
            chosen_id = oracle.tip_gate(pairs, current_window)
        except Exception as exc:
            logger.warning("tip gate degraded: %s", exc)
            return None
        if chosen_id is None:
            return None
        for index, tip in enumerate(self.candidates):
            if tip.id == chosen_id:
                del self.candidates[index]
                tip.shown_t = now
                self.shown[tip.id] = tip
                self.last_shown_t = now
                self.current = tip
                return tip
        return None

    def pause_nudge(
        self, now: int, t_last_speech: int | None, oracle: SemanticOracle,
        silence_ms: int = PAUSE_NUDGE_SILENCE_MS,
    ) -> TalkTip | None:
        """Probing question during a long silence; same global rate limit."""
        if t_last_speech is None or now - t_last_speech <= silence_ms:
            return None
        if self._rate_limited(now) or self.displayed(now):
            return None
        text = oracle.pause_prompt(self._nudge_cycle)
        self._nudge_cycle += 1
        tip = TalkTip(
            id=f"tip-{self._next_id:04d}",
            category=TipCategory.PROBING_QUESTION,
            text=text,
            created_t=now,
            shown_t=now,
        )
        self._next_id += 1
        self.shown[tip.id] = tip
        self.last_shown_t = now
        self.current = tip
        return tip

    # -- responses -----------------------------------------------------------------

    def record_response(self, tip_id: str) -> TalkTip:
        """Mark a shown tip as responded; raises KeyError for unknown ids."""
        tip = self.shown[tip_id]
        tip.responded = True
        return tip

    def attribute_note(self, note: TalkNote, note_t_start: int) -> list[TalkTip]:
        """Tips this new verbalization answers: shown within the response
        window and sharing at least one content word with the note."""
        note_words = content_words(note.transcript, STOPWORDS)
        matched: list[TalkTip] = []
        for tip in self.shown.values():
            if tip.responded or tip.shown_t is None:
                continue
            if not (0 <= note_t_start - tip.shown_t <= RESPONSE_WINDOW_MS):
                continue
            if content_words(tip.text, STOPWORDS) & note_words:
                tip.responded = True
                matched.append(tip)
        return matched
