import pytest
from hypothesis import given, settings, strategies as st

from talknotes.chunker import Chunker, FragmentOrderError, NonFinalFragmentError
from talknotes.oracle import DeterministicOracle

from conftest import frag


@pytest.fixture
def chunker():
    return Chunker()


class TestIngest:
    def test_single_fragment_buffers_without_promotion(self, chunker, oracle):
        assert chunker.ingest(frag("I want to move this wall", 0, 2000), oracle) is None
        assert chunker.buffer.text == "I want to move this wall"

    def test_topic_shift_promotes_buffer(self, chunker, oracle):
        chunker.ingest(frag("the kitchen needs light", 0, 2000), oracle)
        segment = chunker.ingest(frag("okay now the bathroom layout", 3000, 5000), oracle)
        assert segment is not None
        assert segment.text == "the kitchen needs light"
        assert (segment.t_start, segment.t_end) == (0, 2000)
        assert chunker.buffer.text == "okay now the bathroom layout"

    def test_small_buffer_never_consults_oracle(self, oracle):
        class ExplodingOracle:
            def judge_split(self, buffer_text, fragment_text):
                raise AssertionError("split requested for a tiny buffer")

        chunker = Chunker()
        # 3 content words buffered ("kitchen needs light"): below the guard of 4
        chunker.ingest(frag("kitchen needs light", 0, 2000), ExplodingOracle())
        out = chunker.ingest(frag("okay now the bathroom", 3000, 5000), ExplodingOracle())
        assert out is None
        assert "bathroom" in chunker.buffer.text

    def test_non_final_rejected(self, chunker, oracle):
        with pytest.raises(NonFinalFragmentError):
            chunker.ingest(frag("partial words", 0, 100, final=False), oracle)

    def test_out_of_order_rejected(self, chunker, oracle):
        chunker.ingest(frag("first bit of speech", 0, 2000), oracle)
        with pytest.raises(FragmentOrderError):
            chunker.ingest(frag("late arrival", 1500, 2500), oracle)


class TestTick:
    def test_pause_above_threshold_promotes(self, chunker, oracle):
        chunker.ingest(frag("a passing remark", 0, 1000), oracle)
        buffer_text = chunker.buffer.text
        segment = chunker.tick(now=1000 + 8100)
        assert segment is not None and segment.text == buffer_text
        assert not chunker.buffer

    def test_pause_below_threshold_keeps_buffer(self, chunker, oracle):
        chunker.ingest(frag("a passing remark", 0, 1000), oracle)
        assert chunker.tick(now=1000 + 7900) is None
        assert chunker.buffer

    def test_exact_threshold_keeps_buffer(self, chunker, oracle):
        chunker.ingest(frag("a passing remark", 0, 1000), oracle)
        assert chunker.tick(now=1000 + 8000) is None

    def test_empty_buffer_ticks_are_noops(self, chunker):
        assert chunker.tick(now=99_000) is None


class TestFlush:
    def test_empty_flush_yields_nothing(self, chunker):
        assert chunker.flush() is None

    def test_flush_promotes_unconditionally(self, chunker, oracle):
        chunker.ingest(frag("final remark", 0, 900), oracle)
        segment = chunker.flush()
        assert segment is not None and segment.text == "final remark"

    def test_second_flush_yields_nothing(self, chunker, oracle):
        chunker.ingest(frag("final remark", 0, 900), oracle)
        chunker.flush()
        assert chunker.flush() is None


WORDS = st.sampled_from(
    "kitchen bathroom wall door window light storage bedroom corridor "
    "plan issue want need the okay now so um check later".split()
)
TEXTS = st.lists(WORDS, min_size=1, max_size=8).map(" ".join)


@st.composite
def fragment_streams(draw):
    count = draw(st.integers(min_value=1, max_value=8))
    fragments = []
    t = 0
    for _ in range(count):
        gap = draw(st.integers(min_value=0, max_value=12_000))
        duration = draw(st.integers(min_value=200, max_value=5_000))
        t += gap
        fragments.append(frag(draw(TEXTS), t, t + duration))
        t += duration
    return fragments


@settings(max_examples=1000, deadline=None)
@given(stream=fragment_streams(), tick_between=st.booleans())
def test_transcript_conservation(stream, tick_between):
    """No final fragment is ever dropped or duplicated: the promoted
    segments, in order, reproduce the full final transcript."""
    chunker = Chunker()
    oracle = DeterministicOracle()
    promoted = []
    for fragment in stream:
        if tick_between:
            segment = chunker.tick(fragment.t_start)
            if segment:
                promoted.append(segment)
        segment = chunker.ingest(fragment, oracle)
        if segment:
            promoted.append(segment)
    tail = chunker.flush()
    if tail:
        promoted.append(tail)
    rebuilt = " ".join(segment.text for segment in promoted)
    original = " ".join(fragment.text for fragment in stream)
    assert rebuilt == original
    # promotion boundaries are fragment boundaries
    fragment_texts = [f.text for f in stream]
    index = 0
    for segment in promoted:
        for fragment in segment.fragments:
            assert fragment.text == fragment_texts[index]
            index += 1
    assert index == len(fragment_texts)
