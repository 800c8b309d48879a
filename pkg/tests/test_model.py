import pytest

from talknotes.model import (
    ActionSuggestion,
    AnchorConfidence,
    AnchorPoint,
    Bounds,
    EnrichmentState,
    ModelError,
    PointerSample,
    PointerTrace,
    TalkNote,
    TalkTip,
    TipCategory,
    TranscriptFragment,
    View,
)


def test_fragment_rejects_reversed_times():
    with pytest.raises(ModelError):
        TranscriptFragment(text="hi", t_start=100, t_end=50, is_final=True)


def test_final_fragment_requires_text():
    with pytest.raises(ModelError):
        TranscriptFragment(text="  ", t_start=0, t_end=10, is_final=True)
    TranscriptFragment(text="", t_start=0, t_end=10, is_final=False)  # partials may be empty


def test_pointer_sample_z_iff_3d():
    PointerSample(x=1, y=2, t=0)
    PointerSample(x=1, y=2, t=0, view=View.THREE_D, z=3.0)
    with pytest.raises(ModelError):
        PointerSample(x=1, y=2, t=0, z=3.0)
    with pytest.raises(ModelError):
        PointerSample(x=1, y=2, t=0, view=View.THREE_D)


def test_trace_requires_nondecreasing_times():
    a = PointerSample(x=0, y=0, t=10)
    b = PointerSample(x=1, y=1, t=5)
    with pytest.raises(ModelError):
        PointerTrace(samples=(a, b))
    PointerTrace(samples=(b, a))


def test_action_title_bounds():
    with pytest.raises(ModelError):
        ActionSuggestion(title="")
    with pytest.raises(ModelError):
        ActionSuggestion(title="x" * 41)
    ActionSuggestion(title="x" * 40)


def test_bounds_non_degenerate():
    with pytest.raises(ModelError):
        Bounds(0, 0, 0, 10)
    with pytest.raises(ModelError):
        Bounds(0, 0, 10, 10, z0=5.0, z1=5.0)
    box = Bounds(0, 0, 10, 10, z0=0.0, z1=5.0)
    assert box.contains(PointerSample(x=5, y=5, t=0, view=View.THREE_D, z=1.0))
    assert not box.contains(PointerSample(x=5, y=5, t=0, view=View.THREE_D, z=9.0))


def _anchor() -> AnchorPoint:
    return AnchorPoint(x=0, y=0, view=View.TWO_D, confidence=AnchorConfidence.FALLBACK)


def test_note_time_span_strict():
    with pytest.raises(ModelError):
        TalkNote(id="n", transcript="t", t_start=5, t_end=5, anchor=_anchor())


def test_note_trace_must_stay_within_margin():
    trace = PointerTrace(samples=(PointerSample(x=0, y=0, t=2000),))
    with pytest.raises(ModelError):
        TalkNote(id="n", transcript="t", t_start=0, t_end=1000, anchor=_anchor(), trace=trace)
    # 1500 is exactly t_end + 500: allowed
    ok = PointerTrace(samples=(PointerSample(x=0, y=0, t=1500),))
    TalkNote(id="n", transcript="t", t_start=0, t_end=1000, anchor=_anchor(), trace=ok)


def test_enriched_note_requires_labels():
    note = TalkNote(id="n", transcript="t", t_start=0, t_end=1, anchor=_anchor())
    note.enrichment_state = EnrichmentState.ENRICHED
    with pytest.raises(ModelError):
        note.validate()


def test_tip_invariants():
    with pytest.raises(ModelError):
        TalkTip(id="t", category=TipCategory.NEW_IDEA, text="x" * 81, created_t=0)
    with pytest.raises(ModelError):
        TalkTip(id="t", category=TipCategory.NEW_IDEA, text="hello", created_t=0, responded=True)
    tip = TalkTip(id="t", category=TipCategory.NEW_IDEA, text="hello", created_t=0, shown_t=5, responded=True)
    assert tip.shown_t == 5
