"""Session configuration: mode, brief, scene, canvas, and engine tunables."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields
from typing import Any

from talknotes import chunker, reminders, threader, tips
from talknotes.model import Bounds, ModelError, SceneElement, View
from talknotes.pipeline import MERGE_WINDOW_MS
from talknotes.trace import BUCKET_MS

MODE_FULL = "pointaloud"
MODE_BASELINE = "baseline"
MODES = (MODE_FULL, MODE_BASELINE)


class ConfigError(ValueError):
    """Invalid session configuration; message names the offending field."""


@dataclass(frozen=True)
class EngineParams:
    """Every engine tunable, fixed per session and recorded in the log."""

    tick_ms: int = 1000
    pause_promote_ms: int = chunker.PAUSE_PROMOTE_MS
    min_buffer_content_words: int = chunker.MIN_BUFFER_CONTENT_WORDS
    merge_window_ms: int = MERGE_WINDOW_MS
    thread_window_ms: int = threader.THREAD_WINDOW_MS
    thread_affinity_threshold: float = threader.AFFINITY_THRESHOLD
    tip_generate_interval_ms: int = tips.GENERATE_INTERVAL_MS
    tip_gate_interval_ms: int = tips.GATE_INTERVAL_MS
    tip_min_gap_ms: int = tips.MIN_GAP_MS
    tip_display_ms: int = tips.DISPLAY_MS
    tip_recent_window_ms: int = 30_000
    tip_current_window_ms: int = 15_000
    pause_nudge_silence_ms: int = tips.PAUSE_NUDGE_SILENCE_MS
    reminder_interval_ms: int = reminders.FIND_INTERVAL_MS
    reminder_cooldown_ms: int = reminders.COOLDOWN_MS
    reminder_max: int = reminders.MAX_SIMULTANEOUS
    reminder_min_age_ms: int = reminders.MIN_NOTE_AGE_MS
    reminder_display_ms: int = reminders.DISPLAY_MS
    reminder_window_ms: int = 15_000
    trace_bucket_ms: int = BUCKET_MS

    def __post_init__(self) -> None:
        for f in fields(self):
            value = getattr(self, f.name)
            if not isinstance(value, (int, float)) or value <= 0:
                raise ConfigError(f"params.{f.name}: must be a positive number")


@dataclass(frozen=True)
class SessionConfig:
    mode: str
    brief: str
    canvas_width: int
    canvas_height: int
    scene: tuple[SceneElement, ...] = ()
    initial_view: View = View.TWO_D
    params: EngineParams = EngineParams()

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"mode: must be one of {MODES}")
        if self.canvas_width <= 0:
            raise ConfigError("canvas_width: must be positive")
        if self.canvas_height <= 0:
            raise ConfigError("canvas_height: must be positive")
        ids = [el.id for el in self.scene]
        if len(ids) != len(set(ids)):
            raise ConfigError("scene: element ids must be unique")

    @property
    def canvas_center(self) -> tuple[float, float]:
        return self.canvas_width / 2.0, self.canvas_height / 2.0

    @property
    def canvas_size(self) -> tuple[int, int]:
        return self.canvas_width, self.canvas_height

    # -- log round-trip -----------------------------------------------------

    def to_payload(self) -> dict[str, Any]:
        return {
            "mode": self.mode,
            "brief": self.brief,
            "canvas_width": self.canvas_width,
            "canvas_height": self.canvas_height,
            "initial_view": self.initial_view.value,
            "scene": [
                {
                    "id": el.id,
                    "name": el.name,
                    "bounds": {
                        k: v
                        for k, v in asdict(el.bounds).items()
                        if v is not None
                    },
                }
                for el in self.scene
            ],
            "params": asdict(self.params),
        }

    @classmethod
    def from_payload(cls, payload: dict[str, Any]) -> "SessionConfig":
        try:
            scene = tuple(
                SceneElement(
                    id=str(el["id"]),
                    name=str(el["name"]),
                    bounds=Bounds(**el["bounds"]),
                )
                for el in payload.get("scene", [])
            )
            return cls(
                mode=payload["mode"],
                brief=str(payload.get("brief", "")),
                canvas_width=int(payload["canvas_width"]),
                canvas_height=int(payload["canvas_height"]),
                initial_view=View(payload.get("initial_view", View.TWO_D.value)),
                scene=scene,
                params=EngineParams(**payload.get("params", {})),
            )
        except (KeyError, TypeError, ValueError, ModelError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"invalid session config: {exc}") from exc
