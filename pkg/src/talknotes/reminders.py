"""Resurfacing of previously created notes related to current speech."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from talknotes.model import TalkNote, TalkReminder
from talknotes.oracle.base import SemanticOracle

logger = logging.getLogger(__name__)

FIND_INTERVAL_MS = 15_000
COOLDOWN_MS = 120_000
MAX_SIMULTANEOUS = 2
DISPLAY_MS = 6_000

# A note only becomes a reminder candidate once it is at least this old;
# resurfacing what the user is still verbalizing would be noise.
MIN_NOTE_AGE_MS = 20_000


@dataclass
class ReminderScheduler:
    """Per-session reminder state: cooldowns keyed by note id."""

    cooldown_ms: int = COOLDOWN_MS
    max_simultaneous: int = MAX_SIMULTANEOUS
    min_note_age_ms: int = MIN_NOTE_AGE_MS
    cooldown_until: dict[str, int] = field(default_factory=dict)

    def find_related(
        self,
        current_window: str,
        notes: list[TalkNote],
        oracle: SemanticOracle,
        now: int,
    ) -> list[TalkReminder]:
        """Up to two related prior notes not under cooldown; each returned
        note enters a fresh cooldown."""
        candidates = [n for n in notes if n.t_end + self.min_note_age_ms <= now]
        if not candidates or not current_window.strip():
            return []
        try:
            scored = oracle.related_notes(
                current_window, [(n.id, n.transcript) for n in candidates]
            )
        except Exception as exc:
            logger.warning("reminder lookup degraded: %s", exc)
            return []
        reminders: list[TalkReminder] = []
        for note_id, _score in scored:
            until = self.cooldown_until.get(note_id)
            if until is not None and now < until:
                continue
            self.cooldown_until[note_id] = now + self.cooldown_ms
            reminders.append(
                TalkReminder(
                    note_id=note_id,
                    triggered_t=now,
                    cooldown_until=now + self.cooldown_ms,
                )
            )
            if len(reminders) == self.max_simultaneous:
                break
        return reminders
