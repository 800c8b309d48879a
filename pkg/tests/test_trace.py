import io

import pytest
from PIL import Image

from talknotes.model import PointerTrace
from talknotes.trace import TraceStore, dwell_centroid, render_overlay, rasterize_overlay

from conftest import frag, sample


class TestRecord:
    def test_same_bucket_keeps_last(self):
        store = TraceStore()
        store.record(sample(0, 0, 100))
        store.record(sample(5, 5, 110))
        assert len(store.samples) == 1
        assert (store.samples[0].x, store.samples[0].t) == (5, 110)

    def test_different_buckets_keep_both(self):
        store = TraceStore()
        store.record(sample(0, 0, 100))
        store.record(sample(5, 5, 200))
        assert len(store.samples) == 2

    def test_late_sample_dropped_and_counted(self):
        store = TraceStore()
        store.record(sample(0, 0, 1000))
        assert store.record(sample(1, 1, 400)) is False
        assert store.late_count == 1
        assert len(store.samples) == 1

    def test_downsampling_never_alters_samples(self):
        store = TraceStore()
        inputs = [sample(i, i * 2, i * 17) for i in range(100)]
        for s in inputs:
            store.record(s)
        pool = {(s.x, s.y, s.t) for s in inputs}
        assert all((s.x, s.y, s.t) in pool for s in store.samples)
        # the newest sample always survives
        assert store.samples[-1] == inputs[-1]

    def test_rate_capped_at_twenty_per_second(self):
        store = TraceStore()
        for t in range(0, 1000, 10):  # 100 samples in one second
            store.record(sample(t, t, t))
        assert len(store.samples) <= 20


class TestSlice:
    def test_window_includes_margin(self):
        store = TraceStore()
        for t in (0, 400, 900, 1500, 2600):
            store.record(sample(t, 0, t))
        trace = store.slice(900, 2100)
        assert [s.t for s in trace.samples] == [400, 900, 1500, 2600]

    def test_boundary_sample_at_margin_included(self):
        store = TraceStore()
        store.record(sample(1, 1, 2500))
        assert len(store.slice(1000, 2000)) == 1  # exactly t1 + 500

    def test_window_before_first_sample_empty(self):
        store = TraceStore()
        store.record(sample(1, 1, 9000))
        assert len(store.slice(0, 1000)) == 0

    def test_slice_is_pure(self):
        store = TraceStore()
        for t in (0, 100, 200, 900):
            store.record(sample(t, t, t))
        assert store.slice(0, 500) == store.slice(0, 500)

    def test_reversed_window_rejected(self):
        with pytest.raises(ValueError):
            TraceStore().slice(10, 0)


class TestDwellCentroid:
    def test_single_sample(self):
        trace = PointerTrace(samples=(sample(10, 20, 1200),))
        assert dwell_centroid(trace, 1000, 5000) == (10, 20, None)

    def test_equal_dwell_two_samples(self):
        trace = PointerTrace(samples=(sample(0, 0, 0), sample(10, 0, 1000)))
        x, y, _ = dwell_centroid(trace, 0, 2000)
        assert (x, y) == (5.0, 0.0)

    def test_empty_trace(self):
        assert dwell_centroid(PointerTrace(), 0, 100) is None


class TestOverlay:
    def test_marker_per_fragment(self):
        store = TraceStore()
        for t in (100, 1100, 2100):
            store.record(sample(t / 10, 0, t))
        fragments = [
            frag("first", 0, 1000),
            frag("second", 1000, 2000),
            frag("third", 2000, 3000),
        ]
        overlay = render_overlay((800, 600), store.slice(0, 3000), fragments)
        assert len(overlay.markers) == 3
        assert all(m.radius == 6.0 for m in overlay.markers)
        assert [m.label for m in overlay.markers] == [0, 1, 2]
        assert "first" in overlay.timeline and "third" in overlay.timeline

    def test_empty_trace_yields_empty_markers(self):
        overlay = render_overlay((800, 600), PointerTrace(), [frag("talk", 0, 500)])
        assert overlay.markers == ()
        assert "talk" in overlay.timeline

    def test_rasterized_dimensions_match_snapshot(self):
        overlay = render_overlay(
            (320, 240),
            PointerTrace(samples=(sample(10, 10, 100),)),
            [frag("hello", 0, 400)],
        )
        png = rasterize_overlay(overlay)
        image = Image.open(io.BytesIO(png))
        assert image.size == (320, 240)
        snapshot = Image.new("RGB", (111, 222), "gray")
        png2 = rasterize_overlay(overlay, snapshot=snapshot)
        assert Image.open(io.BytesIO(png2)).size == (111, 222)
