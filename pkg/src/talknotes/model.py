"""Domain types shared across the engine. Plain values; validation only."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class ModelError(ValueError):
    """A domain value violates one of its invariants."""


class View(str, Enum):
    TWO_D = "2D"
    THREE_D = "3D"


class ProcessLabel(str, Enum):
    DESIGN_INTENT = "design_intent"
    PROCESS = "process"
    TODO = "todo"
    IMPORTANT = "important"
    PROBLEM = "problem"
    QUESTION = "question"


class AnchorConfidence(str, Enum):
    FROM_TRACE = "from_trace"
    LAST_KNOWN = "last_known"
    FALLBACK = "fallback"


class TipCategory(str, Enum):
    POTENTIAL_ISSUE = "potential_issue"
    NEW_IDEA = "new_idea"
    PROBING_QUESTION = "probing_question"


class EnrichmentState(str, Enum):
    PENDING = "pending"
    ENRICHED = "enriched"
    FAILED = "failed"


# Trace samples attached to a note may extend this far beyond the utterance
# window on both sides; speakers tend to point slightly before naming.
TRACE_MARGIN_MS = 500

MAX_ACTION_TITLE_CHARS = 40
MAX_TIP_TEXT_CHARS = 80
MAX_ACTIONS_PER_NOTE = 3


@dataclass(frozen=True)
class TranscriptFragment:
    """A timestamped piece of recognized speech, partial or final."""

    text: str
    t_start: int
    t_end: int
    is_final: bool

    def __post_init__(self) -> None:
        if self.t_start > self.t_end:
            raise ModelError(f"fragment t_start {self.t_start} > t_end {self.t_end}")
        if self.is_final and not self.text.strip():
            raise ModelError("final fragment must carry non-empty text")


@dataclass(frozen=True)
class PointerSample:
    x: float
    y: float
    t: int
    view: View = View.TWO_D
    z: float | None = None

    def __post_init__(self) -> None:
        if (self.view is View.THREE_D) != (self.z is not None):
            raise ModelError("z coordinate present iff view is 3D")


@dataclass(frozen=True)
class PointerTrace:
    """Time-ordered sequence of pointer samples."""

    samples: tuple[PointerSample, ...] = ()

    def __post_init__(self) -> None:
        ts = [s.t for s in self.samples]
        if any(a > b for a, b in zip(ts, ts[1:])):
            raise ModelError("trace samples must be nondecreasing in t")

    def __len__(self) -> int:
        return len(self.samples)

    def __bool__(self) -> bool:
        return bool(self.samples)


@dataclass(frozen=True)
class AnchorPoint:
    x: float
    y: float
    view: View
    confidence: AnchorConfidence
    z: float | None = None


@dataclass(frozen=True)
class ActionSuggestion:
    """A suggested follow-up shown as an inert button; never executed."""

    title: str

    def __post_init__(self) -> None:
        if not self.title.strip():
            raise ModelError("action title must be non-empty")
        if len(self.title) > MAX_ACTION_TITLE_CHARS:
            raise ModelError(f"action title exceeds {MAX_ACTION_TITLE_CHARS} chars")


@dataclass(frozen=True)
class Bounds:
    """Axis-aligned rectangle (2D) or box (3D) in canvas units."""

    x0: float
    y0: float
    x1: float
    y1: float
    z0: float | None = None
    z1: float | None = None

    def __post_init__(self) -> None:
        if self.x1 <= self.x0 or self.y1 <= self.y0:
            raise ModelError("bounds must be non-degenerate")
        if (self.z0 is None) != (self.z1 is None):
            raise ModelError("z bounds must be given as a pair")
        if self.z0 is not None and self.z1 is not None and self.z1 <= self.z0:
            raise ModelError("bounds must be non-degenerate")

    def contains(self, sample: PointerSample) -> bool:
        if not (self.x0 <= sample.x <= self.x1 and self.y0 <= sample.y <= self.y1):
            return False
        if self.z0 is not None and self.z1 is not None and sample.z is not None:
            return self.z0 <= sample.z <= self.z1
        return True


@dataclass(frozen=True)
class SceneElement:
    id: str
    name: str
    bounds: Bounds


@dataclass
class TalkNote:
    """A promoted speech segment with its contextual metadata.

    Mutable only inside the session engine's serialized event loop; once
    enriched, a note changes again only through a merge.
    """

    id: str
    transcript: str
    t_start: int
    t_end: int
    anchor: AnchorPoint
    trace: PointerTrace = PointerTrace()
    summary: str | None = None
    labels: set[ProcessLabel] = field(default_factory=set)
    actions: list[ActionSuggestion] = field(default_factory=list)
    linked_elements: set[str] = field(default_factory=set)
    thread_id: str | None = None
    merged_from: list[str] = field(default_factory=list)
    enrichment_state: EnrichmentState = EnrichmentState.PENDING

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        if self.t_start >= self.t_end:
            raise ModelError(f"note {self.id}: t_start must precede t_end")
        lo = self.t_start - TRACE_MARGIN_MS
        hi = self.t_end + TRACE_MARGIN_MS
        if any(not (lo <= s.t <= hi) for s in self.trace.samples):
            raise ModelError(f"note {self.id}: trace sample outside window margin")
        if len(self.actions) > MAX_ACTIONS_PER_NOTE:
            raise ModelError(f"note {self.id}: more than {MAX_ACTIONS_PER_NOTE} actions")
        if self.enrichment_state is EnrichmentState.ENRICHED and not self.labels:
            raise ModelError(f"note {self.id}: enriched note must carry labels")


@dataclass
class TalkThread:
    """An ordered cluster of related notes."""

    id: str
    title: str
    note_ids: list[str]
    t_last: int

    def validate(self) -> None:
        if not self.note_ids:
            raise ModelError(f"thread {self.id}: must hold at least one note")


@dataclass
class TalkTip:
    id: str
    category: TipCategory
    text: str
    created_t: int
    shown_t: int | None = None
    responded: bool = False

    def __post_init__(self) -> None:
        if not self.text.strip():
            raise ModelError("tip text must be non-empty")
        if len(self.text) > MAX_TIP_TEXT_CHARS:
            raise ModelError(f"tip text exceeds {MAX_TIP_TEXT_CHARS} chars")
        if self.responded and self.shown_t is None:
            raise ModelError("a tip cannot be responded to before being shown")


@dataclass(frozen=True)
class TalkReminder:
    note_id: str
    triggered_t: int
    cooldown_until: int


@dataclass(frozen=True)
class PromotedSegment:
    """Buffered speech promoted out of the chunker, ready to become a note."""

    text: str
    t_start: int
    t_end: int
    fragments: tuple[TranscriptFragment, ...] = ()

    def __post_init__(self) -> None:
        if not self.text.strip():
            raise ModelError("promoted segment must carry text")
        if self.t_start >= self.t_end:
            raise ModelError("promoted segment t_start must precede t_end")
