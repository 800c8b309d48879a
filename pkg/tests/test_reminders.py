from talknotes.model import AnchorConfidence, AnchorPoint, TalkNote, View
from talknotes.reminders import ReminderScheduler


def note(note_id: str, text: str) -> TalkNote:
    return TalkNote(
        id=note_id,
        transcript=text,
        t_start=0,
        t_end=1000,
        anchor=AnchorPoint(x=0, y=0, view=View.TWO_D, confidence=AnchorConfidence.FALLBACK),
    )


def test_related_note_resurfaces(oracle):
    scheduler = ReminderScheduler()
    notes = [note("n-1", "bedroom wall and door"), note("n-2", "kitchen sink fittings")]
    out = scheduler.find_related("the bedroom wall", notes, oracle, now=30_000)
    assert [r.note_id for r in out] == ["n-1"]
    assert out[0].cooldown_until == 150_000


def test_cooldown_suppresses_repeat(oracle):
    scheduler = ReminderScheduler()
    notes = [note("n-1", "bedroom wall and door")]
    assert scheduler.find_related("the bedroom wall", notes, oracle, now=30_000)
    assert scheduler.find_related("the bedroom wall", notes, oracle, now=90_000) == []
    assert scheduler.find_related("the bedroom wall", notes, oracle, now=150_000)


def test_cap_of_two(oracle):
    scheduler = ReminderScheduler()
    notes = [note(f"n-{i}", "bedroom wall and door") for i in range(5)]
    out = scheduler.find_related("the bedroom wall and door", notes, oracle, now=40_000)
    assert len(out) == 2


def test_fresh_notes_are_not_resurfaced(oracle):
    scheduler = ReminderScheduler()
    notes = [note("n-1", "bedroom wall and door")]  # ends at t=1000
    assert scheduler.find_related("the bedroom wall", notes, oracle, now=15_000) == []
    assert scheduler.find_related("the bedroom wall", notes, oracle, now=21_000)


def test_no_prior_notes(oracle):
    assert ReminderScheduler().find_related("anything", [], oracle, now=0) == []


def test_unrelated_window_no_reminders(oracle):
    scheduler = ReminderScheduler()
    notes = [note("n-1", "bedroom wall and door")]
    assert scheduler.find_related("completely different topic", notes, oracle, now=40_000) == []


def test_oracle_failure_degrades_to_empty():
    class Exploding:
        def related_notes(self, window, notes):
            raise TimeoutError("slow")

    scheduler = ReminderScheduler()
    assert scheduler.find_related("x", [note("n-1", "y")], Exploding(), now=0) == []
