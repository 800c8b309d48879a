"""Streaming state machine that buffers final fragments and promotes them
to note-sized segments on topic shift or sustained silence."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from talknotes.model import PromotedSegment, TranscriptFragment
from talknotes.oracle.base import SemanticOracle, SplitVerdict
from talknotes.text import STOPWORDS, content_words

logger = logging.getLogger(__name__)

# Silence longer than this promotes the buffer (strictly greater-than).
PAUSE_PROMOTE_MS = 8000

# Below this many buffered content words a split is never requested from the
# oracle; guards against splitting away fillers and short clarifications.
MIN_BUFFER_CONTENT_WORDS = 4


class ChunkError(ValueError):
    """Fragment rejected by the chunker."""


class NonFinalFragmentError(ChunkError):
    pass


class FragmentOrderError(ChunkError):
    pass


@dataclass
class ChunkBuffer:
    """Final fragments awaiting promotion; t_last_end is undefined when empty."""

    fragments: list[TranscriptFragment] = field(default_factory=list)

    @property
    def t_last_end(self) -> int | None:
        return self.fragments[-1].t_end if self.fragments else None

    @property
    def text(self) -> str:
        return " ".join(frag.text for frag in self.fragments)

    def __bool__(self) -> bool:
        return bool(self.fragments)


def _promote(buffer: ChunkBuffer) -> PromotedSegment:
    fragments = tuple(buffer.fragments)
    t_start = fragments[0].t_start
    t_end = fragments[-1].t_end
    segment = PromotedSegment(
        text=buffer.text,
        t_start=t_start,
        # Zero-length utterances are degenerate; widen by one tick so the
        # resulting note keeps a strict time span.
        t_end=t_end if t_end > t_start else t_start + 1,
        fragments=fragments,
    )
    buffer.fragments.clear()
    return segment


class Chunker:
    """Single-writer per session; all calls are serialized by the engine."""

    def __init__(
        self,
        stopwords: frozenset[str] = STOPWORDS,
        pause_promote_ms: int = PAUSE_PROMOTE_MS,
        min_buffer_content_words: int = MIN_BUFFER_CONTENT_WORDS,
    ):
        self.buffer = ChunkBuffer()
        self.stopwords = stopwords
        self.pause_promote_ms = pause_promote_ms
        self.min_buffer_content_words = min_buffer_content_words

    def ingest(
        self, frag: TranscriptFragment, oracle: SemanticOracle
    ) -> PromotedSegment | None:
        """Buffer a final fragment; promote the buffer first on a topic shift."""
        if not frag.is_final:
            raise NonFinalFragmentError("only final fragments reach the chunker")
        last_end = self.buffer.t_last_end
        if last_end is not None and frag.t_start < last_end:
            raise FragmentOrderError(
                f"fragment t_start {frag.t_start} precedes buffered t_end {last_end}"
            )
        promoted: PromotedSegment | None = None
        if self.buffer and self._buffer_ready_for_split():
            if oracle.judge_split(self.buffer.text, frag.text) is SplitVerdict.NEW_TOPIC:
                promoted = _promote(self.buffer)
        self.buffer.fragments.append(frag)
        return promoted

    def tick(self, now: int) -> PromotedSegment | None:
        """Promote the buffer after a sustained pause; no oracle involved."""
        last_end = self.buffer.t_last_end
        if last_end is None:
            return None
        if now < last_end:
            return None
        if now - last_end > self.pause_promote_ms:
            return _promote(self.buffer)
        return None

    def flush(self) -> PromotedSegment | None:
        """Promote whatever is buffered; session end must not lose speech."""
        if not self.buffer:
            return None
        return _promote(self.buffer)

    def _buffer_ready_for_split(self) -> bool:
        count = len(content_words(self.buffer.text, self.stopwords))
        return count >= self.min_buffer_content_words
