import pytest
from hypothesis import given, settings, strategies as st

from talknotes.engine import EngineInputError
from talknotes.events import EventKind
from talknotes.model import ProcessLabel, View

from conftest import frag, make_engine, sample


class TestFragmentFlow:
    def test_config_event_is_always_first(self):
        engine = make_engine()
        assert engine.events[0].kind is EventKind.CONFIG
        assert engine.events[0].seq == 0

    def test_partial_fragments_bypass_pipeline(self):
        messages = []
        engine = make_engine(sink=messages.append)
        engine.handle_fragment(frag("I want", 0, 400, final=False))
        engine.handle_fragment(frag("I want to move", 0, 900, final=False))
        kinds = [e.kind for e in engine.events]
        assert kinds.count(EventKind.FRAGMENT_IN) == 2
        assert EventKind.NOTE_CREATED not in kinds
        assert [m["kind"] for m in messages] == ["talktext", "talktext"]
        assert engine.chunker.buffer.text == ""

    def test_topic_shift_creates_note(self):
        engine = make_engine()
        engine.handle_fragment(frag("the kitchen needs light", 0, 2000))
        engine.handle_fragment(frag("okay now the bathroom layout", 3000, 5000))
        created = [e for e in engine.events if e.kind is EventKind.NOTE_CREATED]
        assert len(created) == 1
        assert created[0].payload["transcript"] == "the kitchen needs light"

    def test_out_of_order_final_rejected_and_unlogged(self):
        engine = make_engine()
        engine.handle_fragment(frag("some words here", 0, 2000))
        before = len(engine.events)
        with pytest.raises(EngineInputError):
            engine.handle_fragment(frag("too early", 1000, 2500))
        assert len(engine.events) == before

    def test_merge_chain_on_same_topic(self):
        engine = make_engine()
        engine.handle_fragment(frag("the bedroom wall and door", 0, 2000))
        engine.advance(11_000)  # pause promotes the first note
        engine.handle_fragment(frag("the bedroom wall and door again", 12_000, 14_000))
        engine.close(25_000)
        kinds = [e.kind for e in engine.events]
        assert kinds.count(EventKind.NOTE_CREATED) == 2
        assert kinds.count(EventKind.NOTE_MERGED) == 1
        merged = next(e for e in engine.events if e.kind is EventKind.NOTE_MERGED)
        assert merged.payload["transcript"] == (
            "the bedroom wall and door the bedroom wall and door again"
        )
        assert len(engine.live_notes()) == 1
        # the surviving note was re-enriched after the merge
        enriched = [e for e in engine.events if e.kind is EventKind.NOTE_ENRICHED]
        assert enriched[-1].payload["id"] == merged.payload["id"]

    def test_merge_does_not_cross_sixty_second_gap(self):
        engine = make_engine()
        engine.handle_fragment(frag("the bedroom wall and door", 0, 2000))
        engine.advance(11_000)
        engine.handle_fragment(frag("the bedroom wall and door again", 70_000, 72_000))
        engine.close(85_000)
        kinds = [e.kind for e in engine.events]
        assert kinds.count(EventKind.NOTE_MERGED) == 0
        assert len(engine.live_notes()) == 2


class TestEventOrdering:
    def test_seq_strictly_increasing(self):
        engine = make_engine()
        engine.handle_fragment(frag("the kitchen needs light", 0, 2000))
        engine.handle_fragment(frag("okay now the bathroom", 3000, 5000))
        engine.close(20_000)
        seqs = [e.seq for e in engine.events]
        assert seqs == sorted(seqs) and len(set(seqs)) == len(seqs)

    def test_note_events_reference_existing_ids(self):
        engine = make_engine()
        for i, text in enumerate(
            ["the kitchen needs light", "okay now the bathroom", "okay next the hallway"]
        ):
            engine.handle_fragment(frag(text, i * 12_000, i * 12_000 + 2000))
        engine.close(60_000)
        created = set()
        for event in engine.events:
            if event.kind is EventKind.NOTE_CREATED:
                created.add(event.payload["id"])
            elif event.kind in (EventKind.NOTE_ENRICHED, EventKind.THREAD_ASSIGNED):
                key = "id" if event.kind is EventKind.NOTE_ENRICHED else "note_id"
                assert event.payload[key] in created


class TestPointer:
    def test_accepted_sample_logged(self):
        engine = make_engine()
        assert engine.handle_pointer(sample(1, 2, 100))
        assert engine.events[-1].kind is EventKind.POINTER_IN

    def test_late_sample_dropped_not_logged(self):
        engine = make_engine()
        engine.handle_pointer(sample(1, 2, 1000))
        before = len(engine.events)
        assert engine.handle_pointer(sample(3, 4, 200)) is False
        assert len(engine.events) == before
        assert engine.trace_store.late_count == 1

    def test_anchor_uses_view_at_promotion(self):
        engine = make_engine()
        engine.handle_pointer(sample(10, 20, 500))
        engine.handle_fragment(frag("the kitchen needs light", 0, 2000))
        engine.handle_view_change(View.THREE_D, 2500)
        engine.handle_fragment(frag("okay now the bathroom", 3000, 5000))
        created = next(e for e in engine.events if e.kind is EventKind.NOTE_CREATED)
        # promotion happened after the switch: the anchor reflects the 3D view
        assert created.payload["anchor"]["view"] == "3D"


class TestClientActions:
    def _with_note(self):
        engine = make_engine()
        engine.handle_fragment(frag("the kitchen needs light", 0, 2000))
        engine.handle_fragment(frag("okay now the bathroom", 12_000, 14_000))
        note_id = engine.live_notes()[0].id
        return engine, note_id

    def test_note_checked_logged(self):
        engine, note_id = self._with_note()
        engine.handle_note_checked(note_id, 15_000)
        assert engine.events[-1].kind is EventKind.NOTE_CHECKED
        assert engine.events[-1].payload == {"id": note_id}

    def test_unknown_note_checked_rejected(self):
        engine, _ = self._with_note()
        with pytest.raises(EngineInputError):
            engine.handle_note_checked("note-9999", 15_000)

    def test_filter_logged_and_applied(self):
        engine, _ = self._with_note()
        notes = engine.handle_filter({ProcessLabel.PROCESS}, 16_000)
        assert engine.events[-1].kind is EventKind.FILTER_APPLIED
        assert engine.events[-1].payload == {"labels": ["process"]}
        assert all(ProcessLabel.PROCESS in n.labels for n in notes)

    def test_tip_ack_unknown_rejected(self):
        engine, _ = self._with_note()
        with pytest.raises(EngineInputError):
            engine.handle_tip_ack("tip-0001", 15_000)

    def test_closed_session_rejects_input(self):
        engine, _ = self._with_note()
        engine.close(20_000)
        with pytest.raises(EngineInputError):
            engine.handle_fragment(frag("more words", 21_000, 22_000))


class TestThreadPartition:
    def test_every_live_note_in_exactly_one_thread(self):
        engine = make_engine()
        texts = [
            "the kitchen needs light",
            "okay now the bathroom tiles",
            "the bathroom tiles look nice",
            "okay next the storage room",
            "okay the kitchen again with light",
        ]
        for i, text in enumerate(texts):
            engine.handle_fragment(frag(text, i * 15_000, i * 15_000 + 3000))
        engine.close(5 * 15_000 + 10_000)
        live = {n.id for n in engine.live_notes()}
        in_threads = [nid for t in engine.threads.threads for nid in t.note_ids]
        assert set(in_threads) == live
        assert len(in_threads) == len(set(in_threads))
        assert all(t.note_ids for t in engine.threads.threads)


class TestBaselineMode:
    def test_fragments_stream_talktext_only(self):
        messages = []
        engine = make_engine(mode="baseline", sink=messages.append)
        engine.handle_fragment(frag("the kitchen needs light", 0, 2000))
        engine.handle_fragment(frag("okay now the bathroom", 12_000, 14_000))
        engine.handle_pointer(sample(5, 5, 15_000))
        engine.advance(120_000)
        engine.close(130_000)
        forbidden = {
            EventKind.NOTE_CREATED,
            EventKind.NOTE_ENRICHED,
            EventKind.NOTE_MERGED,
            EventKind.THREAD_ASSIGNED,
            EventKind.TIP_CANDIDATES,
            EventKind.TIP_SHOWN,
            EventKind.TIP_RESPONSE,
            EventKind.REMINDER_SHOWN,
        }
        assert not [e for e in engine.events if e.kind in forbidden]
        assert {m["kind"] for m in messages} == {"talktext"}

    def test_note_actions_rejected_in_baseline(self):
        engine = make_engine(mode="baseline")
        with pytest.raises(EngineInputError):
            engine.handle_note_checked("note-0001", 100)
        with pytest.raises(EngineInputError):
            engine.handle_filter({ProcessLabel.PROCESS}, 100)


WORDS = st.sampled_from(
    "kitchen bathroom wall door window light storage bedroom okay now the "
    "plan issue want need check later um so counter".split()
)


@st.composite
def engine_scripts(draw):
    count = draw(st.integers(min_value=1, max_value=6))
    script = []
    t = 0
    for _ in range(count):
        t += draw(st.integers(min_value=500, max_value=15_000))
        words = draw(st.lists(WORDS, min_size=2, max_size=8))
        duration = draw(st.integers(min_value=500, max_value=4_000))
        script.append((" ".join(words), t, t + duration))
        t += duration
    return script


@settings(max_examples=150, deadline=None)
@given(script=engine_scripts())
def test_randomized_sessions_partition_and_tip_invariants(script):
    engine = make_engine()
    for text, t0, t1 in script:
        engine.handle_fragment(frag(text, t0, t1))
    engine.close(script[-1][2] + 20_000)

    live = {n.id for n in engine.live_notes()}
    in_threads = [nid for t in engine.threads.threads for nid in t.note_ids]
    assert set(in_threads) == live and len(in_threads) == len(set(in_threads))
    assert all(t.note_ids for t in engine.threads.threads)

    # merging never loses or duplicates words: live transcripts in creation
    # order reproduce every promoted transcript in order
    promoted = " ".join(
        e.payload["transcript"] for e in engine.events if e.kind is EventKind.NOTE_CREATED
    )
    assert " ".join(n.transcript for n in engine.live_notes()) == promoted

    shown_ts = [e.t for e in engine.events if e.kind is EventKind.TIP_SHOWN]
    assert all(b - a >= 30_000 for a, b in zip(shown_ts, shown_ts[1:]))

    shown_ids = {
        e.payload["id"] for e in engine.events if e.kind is EventKind.TIP_SHOWN
    }
    for event in engine.events:
        if event.kind is EventKind.TIP_RESPONSE:
            assert event.payload["tip_id"] in shown_ids
