"""Semantic-judgment interface shared by all oracle providers.

Every operation must return within a bounded time and has a defined degraded
result, so no judgment can stall ingestion or pause-based promotion.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Protocol, Sequence, runtime_checkable

from talknotes.model import ProcessLabel, SceneElement, TipCategory


class SplitVerdict(str, Enum):
    CONTINUE = "continue"
    NEW_TOPIC = "new_topic"


@dataclass(frozen=True)
class TipDraft:
    """A tip candidate before it is registered in the pool."""

    category: TipCategory
    text: str


@dataclass(frozen=True)
class OverlayContext:
    """Serialized multimodal context handed to element-linking judgments.

    ``samples`` are the (x, y) positions of the note's trace slice;
    ``markers`` are the per-fragment dwell centroids from the overlay.
    """

    timeline: str
    samples: tuple[tuple[float, float], ...] = ()
    markers: tuple[tuple[float, float], ...] = ()
    png: bytes | None = None


@runtime_checkable
class SemanticOracle(Protocol):
    """All semantic judgments the engine delegates.

    Implementations must be safe for concurrent calls and must degrade
    (documented per-op defaults) instead of raising on transport trouble;
    only ``summarize``/``classify_labels``/``suggest_actions`` may raise to
    signal a failed enrichment attempt.
    """

    def judge_split(self, buffer_text: str, fragment_text: str) -> SplitVerdict:
        """Degraded result: CONTINUE."""
        ...

    def summarize(self, transcript: str) -> str:
        ...

    def classify_labels(self, transcript: str) -> set[ProcessLabel]:
        ...

    def suggest_actions(self, transcript: str, brief: str) -> list[str]:
        ...

    def merge_check(self, prev_transcript: str, new_transcript: str) -> bool:
        """Degraded result: False (keep notes separate)."""
        ...

    def thread_affinity(self, note_transcript: str, thread_text: str) -> float:
        """Degraded result: 0.0 (forces a fresh thread)."""
        ...

    def tip_candidates(self, recent_transcript: str, brief: str) -> list[TipDraft]:
        """Degraded result: empty list."""
        ...

    def tip_gate(self, candidates: Sequence[tuple[str, str]], current_window: str) -> str | None:
        """Pick the id of the one candidate worth interrupting for, if any.

        ``candidates`` are (id, text) pairs. Degraded result: None.
        """
        ...

    def pause_prompt(self, cycle_index: int) -> str:
        """Nudge text encouraging continued verbalization."""
        ...

    def related_notes(
        self, current_window: str, notes: Sequence[tuple[str, str]]
    ) -> list[tuple[str, float]]:
        """Score prior notes (id, transcript) against the current window.

        Returns (id, score) pairs for qualifying notes only, best first.
        Degraded result: [].
        """
        ...

    def element_link(
        self, transcript: str, scene: Sequence[SceneElement], context: OverlayContext
    ) -> set[str]:
        """Degraded result: empty set."""
        ...
