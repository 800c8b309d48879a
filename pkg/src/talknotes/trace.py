"""Pointer trace capture: recording, per-note slicing, overlay reconstruction."""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field

from talknotes.model import (
    TRACE_MARGIN_MS,
    PointerSample,
    PointerTrace,
    TranscriptFragment,
    View,
)

MARKER_RADIUS = 6.0

# Keep at most one sample per bucket (last wins) => <= 20 samples/second.
BUCKET_MS = 50


@dataclass
class TraceStore:
    """Append-only pointer history for one session, downsampled on record."""

    bucket_ms: int = BUCKET_MS
    samples: list[PointerSample] = field(default_factory=list)
    late_count: int = 0

    def record(self, sample: PointerSample) -> bool:
        """Append a sample; late samples are dropped and counted, not raised."""
        if self.samples:
            last = self.samples[-1]
            if sample.t < last.t:
                self.late_count += 1
                return False
            if sample.t // self.bucket_ms == last.t // self.bucket_ms:
                self.samples[-1] = sample
                return True
        self.samples.append(sample)
        return True

    def slice(self, t0: int, t1: int) -> PointerTrace:
        """Samples within [t0 - margin, t1 + margin], both bounds inclusive."""
        if t0 > t1:
            raise ValueError("slice requires t0 <= t1")
        lo = t0 - TRACE_MARGIN_MS
        hi = t1 + TRACE_MARGIN_MS
        ts = [s.t for s in self.samples]
        return PointerTrace(
            samples=tuple(self.samples[bisect_left(ts, lo) : bisect_right(ts, hi)])
        )

    def last_before(self, t: int, view: View | None = None) -> PointerSample | None:
        """Most recent sample at or before ``t``, optionally of one view."""
        for sample in reversed(self.samples):
            if sample.t <= t and (view is None or sample.view is view):
                return sample
        return None


def dwell_centroid(
    trace: PointerTrace, t0: int, t1: int, view: View | None = None
) -> tuple[float, float, float | None] | None:
    """Time-weighted centroid of a trace over the window [t0, t1].

    Each sample is weighted by the time the pointer dwelt at it: from its own
    timestamp until the next sample (the last sample dwells until t1), clipped
    to the window. Falls back to an unweighted mean when no dwell time lands
    inside the window (e.g. all samples sit in the margin).
    """
    samples = [s for s in trace.samples if view is None or s.view is view]
    if not samples:
        return None
    weights: list[float] = []
    for i, sample in enumerate(samples):
        until = samples[i + 1].t if i + 1 < len(samples) else t1
        weights.append(max(0.0, float(min(until, t1) - max(sample.t, t0))))
    total = sum(weights)
    if total <= 0.0:
        weights = [1.0] * len(samples)
        total = float(len(samples))
    x = sum(s.x * w for s, w in zip(samples, weights)) / total
    y = sum(s.y * w for s, w in zip(samples, weights)) / total
    zs = [s.z for s in samples]
    z = (
        sum(zv * w for zv, w in zip(zs, weights) if zv is not None) / total
        if all(zv is not None for zv in zs)
        else None
    )
    return x, y, z


@dataclass(frozen=True)
class OverlayMarker:
    x: float
    y: float
    radius: float
    label: int


@dataclass(frozen=True)
class OverlayDescriptor:
    """Circular markers (one per spoken fragment's dwell point) plus a
    textual timeline of utterances and pointer coordinates."""

    markers: tuple[OverlayMarker, ...]
    timeline: str
    width: int
    height: int


def render_overlay(
    canvas_size: tuple[int, int],
    trace: PointerTrace,
    utterances: list[TranscriptFragment],
) -> OverlayDescriptor:
    """Reconstruct the visual/textual context for one note."""
    markers: list[OverlayMarker] = []
    lines: list[str] = []
    for index, frag in enumerate(utterances):
        centroid = dwell_centroid(trace, frag.t_start, frag.t_end)
        if centroid is not None:
            x, y, _ = centroid
            markers.append(OverlayMarker(x=x, y=y, radius=MARKER_RADIUS, label=index))
            lines.append(f"[{frag.t_start}ms] ({x:.1f}, {y:.1f}) {frag.text}")
        else:
            lines.append(f"[{frag.t_start}ms] (no pointer) {frag.text}")
    return OverlayDescriptor(
        markers=tuple(markers),
        timeline="\n".join(lines),
        width=canvas_size[0],
        height=canvas_size[1],
    )


def rasterize_overlay(descriptor: OverlayDescriptor, snapshot=None) -> bytes:
    """Composite the markers onto the snapshot (or a blank canvas) as PNG.

    ``snapshot`` may be a PIL image; output dimensions always equal the
    snapshot's (or the descriptor's canvas size when none is given).
    """
    import io

    from PIL import Image, ImageDraw

    if snapshot is not None:
        image = snapshot.convert("RGBA")
    else:
        image = Image.new("RGBA", (descriptor.width, descriptor.height), "white")
    draw = ImageDraw.Draw(image)
    for marker in descriptor.markers:
        box = (
            marker.x - marker.radius,
            marker.y - marker.radius,
            marker.x + marker.radius,
            marker.y + marker.radius,
        )
        draw.ellipse(box, outline=(16, 128, 16, 255), fill=(80, 200, 80, 180))
        draw.text((marker.x + marker.radius + 2, marker.y - marker.radius), str(marker.label), fill=(16, 96, 16, 255))
    out = io.BytesIO()
    image.save(out, format="PNG")
    return out.getvalue()
