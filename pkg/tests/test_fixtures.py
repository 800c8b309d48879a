"""The committed fixture logs must match what the scripted builder produces
today; regenerate with `python tests/fixtures/make_fixtures.py` after any
deterministic-rule change."""

from pathlib import Path

import pytest

from talknotes.events import serialize_log

from fixtures import make_fixtures

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.mark.parametrize(
    "name,builder",
    [
        ("session_short.events.jsonl", make_fixtures.build_short),
        ("session_interactions.events.jsonl", make_fixtures.build_interactions),
        ("session_long.events.jsonl", make_fixtures.build_long),
    ],
)
def test_fixture_files_are_current(name, builder):
    committed = (FIXTURES / name).read_bytes()
    assert serialize_log(builder().engine.events) == committed, (
        f"{name} is stale; rerun tests/fixtures/make_fixtures.py"
    )


def test_interactions_fixture_covers_client_inputs():
    from talknotes.events import EventKind, read_log

    kinds = {e.kind for e in read_log(FIXTURES / "session_interactions.events.jsonl")}
    assert {
        EventKind.NOTE_CHECKED,
        EventKind.TIP_RESPONSE,
        EventKind.FILTER_APPLIED,
        EventKind.VIEW_CHANGE,
        EventKind.NOTE_MERGED,
    } <= kinds


def test_long_fixture_reminder_density_and_cooldowns():
    """Steady 15-minute speech resurfaces reminders at the observed density,
    and no note id repeats inside its cooldown window."""
    from talknotes.events import EventKind, read_log

    events = read_log(FIXTURES / "session_long.events.jsonl")
    shown = [e for e in events if e.kind is EventKind.REMINDER_SHOWN]
    assert 26 <= len(shown) <= 48, len(shown)
    last_by_note: dict[str, int] = {}
    for event in shown:
        note_id = event.payload["note_id"]
        if note_id in last_by_note:
            assert event.t - last_by_note[note_id] >= 120_000, note_id
        last_by_note[note_id] = event.t


def test_stats_invariant_under_replay():
    from talknotes.analyzer import session_stats
    from talknotes.events import read_log
    from talknotes.replay import replay_events

    events = read_log(FIXTURES / "session_long.events.jsonl")
    replayed = replay_events(events)
    assert session_stats(events) == session_stats(replayed.events)
