"""Incremental note-to-thread assignment by affinity and temporal proximity."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from talknotes.model import ProcessLabel, TalkNote, TalkThread
from talknotes.oracle.base import SemanticOracle
from talknotes.text import truncate

# A thread is a candidate only while its latest note is this recent.
THREAD_WINDOW_MS = 300_000

# Minimum affinity for joining an existing thread.
AFFINITY_THRESHOLD = 0.2

# Affinity compares the note against this many trailing thread members.
THREAD_TAIL_NOTES = 3

THREAD_TITLE_CHARS = 60


def filter_notes(notes: Iterable[TalkNote], labels: set[ProcessLabel]) -> list[TalkNote]:
    """Notes whose label set intersects the filter; empty filter means all.

    Input order is preserved, so callers passing thread-grouped notes get
    thread-grouped output.
    """
    if not labels:
        return list(notes)
    return [note for note in notes if note.labels & labels]


@dataclass
class ThreadRegistry:
    """Threads of one session, in creation order. Strictly incremental:
    existing threads never split or re-cluster."""

    threads: list[TalkThread] = field(default_factory=list)
    _next_id: int = 1

    def get(self, thread_id: str) -> TalkThread | None:
        for thread in self.threads:
            if thread.id == thread_id:
                return thread
        return None

    def assign(
        self,
        note: TalkNote,
        notes_by_id: dict[str, TalkNote],
        oracle: SemanticOracle,
        window_ms: int = THREAD_WINDOW_MS,
        threshold: float = AFFINITY_THRESHOLD,
    ) -> tuple[TalkThread, bool]:
        """Attach ``note`` to its most-affine recent thread or start a new one.

        Returns (thread, created). Ties prefer the thread spoken to most
        recently; a still-standing tie falls to the newest thread.
        """
        best: tuple[float, int, int] | None = None  # (affinity, t_last, index)
        for index, thread in enumerate(self.threads):
            if note.t_start - thread.t_last > window_ms:
                continue
            tail = [
                notes_by_id[nid].transcript
                for nid in thread.note_ids[-THREAD_TAIL_NOTES:]
                if nid in notes_by_id
            ]
            affinity = oracle.thread_affinity(note.transcript, " ".join(tail))
            if affinity < threshold:
                continue
            key = (affinity, thread.t_last, index)
            if best is None or key > best:
                best = key
        if best is not None:
            thread = self.threads[best[2]]
            thread.note_ids.append(note.id)
            thread.t_last = max(thread.t_last, note.t_end)
            note.thread_id = thread.id
            return thread, False
        thread = TalkThread(
            id=f"thread-{self._next_id:04d}",
            title=note.summary or truncate(note.transcript, THREAD_TITLE_CHARS),
            note_ids=[note.id],
            t_last=note.t_end,
        )
        self._next_id += 1
        self.threads.append(thread)
        note.thread_id = thread.id
        return thread, True

    def touch(self, note: TalkNote) -> TalkThread | None:
        """Refresh a thread's recency after its member note grew by a merge."""
        if note.thread_id is None:
            return None
        thread = self.get(note.thread_id)
        if thread is not None and note.t_end > thread.t_last:
            thread.t_last = note.t_end
        return thread

    def grouped_notes(self, notes_by_id: dict[str, TalkNote]) -> list[TalkNote]:
        """All live notes, grouped by thread in creation order."""
        out: list[TalkNote] = []
        for thread in self.threads:
            out.extend(notes_by_id[nid] for nid in thread.note_ids if nid in notes_by_id)
        return out
