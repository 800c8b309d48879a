"""Rule tables backing the deterministic oracle provider."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from talknotes.model import (
    MAX_ACTION_TITLE_CHARS,
    MAX_TIP_TEXT_CHARS,
    ProcessLabel,
    TipCategory,
)
from talknotes.text import STOPWORDS


class RuleConfigError(ValueError):
    """Malformed rule configuration; raised at startup, never mid-session."""


# Fragment openers that signal a deliberate topic change.
DEFAULT_SPLIT_MARKERS: tuple[str, ...] = (
    "okay",
    "now",
    "next",
    "also",
    "another",
    "moving on",
    "let's",
)

# label -> keyword/phrase patterns (matched on word boundaries, lowercased).
DEFAULT_LABEL_KEYWORDS: dict[ProcessLabel, tuple[str, ...]] = {
    ProcessLabel.QUESTION: (),  # handled structurally: "?" or interrogative opener
    ProcessLabel.TODO: ("need to", "later", "remember"),
    ProcessLabel.PROBLEM: ("problem", "issue", "concern", "worried"),
    ProcessLabel.IMPORTANT: ("important", "critical", "must"),
    ProcessLabel.DESIGN_INTENT: ("want", "goal", "so that"),
}

INTERROGATIVE_OPENERS: frozenset[str] = frozenset(
    {"what", "why", "where", "when", "which", "who", "whose", "whom", "how"}
)

# keyword -> (category, tip text). First matching row per category wins.
DEFAULT_TIP_TEMPLATES: tuple[tuple[str, TipCategory, str], ...] = (
    ("window", TipCategory.PROBING_QUESTION, "How to handle window glare issues?"),
    ("caregiver", TipCategory.PROBING_QUESTION, "How will you ensure clear caregiver sightlines?"),
    ("door", TipCategory.PROBING_QUESTION, "Should this door swing inward or outward?"),
    ("bathroom", TipCategory.PROBING_QUESTION, "Check for accessibility?"),
    ("stroller", TipCategory.POTENTIAL_ISSUE, "Avoid storing strollers in pathways"),
    ("wall", TipCategory.POTENTIAL_ISSUE, "Think about the structure. Load bearing."),
    ("kitchen", TipCategory.POTENTIAL_ISSUE, "Check clearance around kitchen work zones"),
    ("noise", TipCategory.POTENTIAL_ISSUE, "Consider sound insulation between rooms"),
    ("light", TipCategory.NEW_IDEA, "Consider adding more natural light here"),
    ("storage", TipCategory.NEW_IDEA, "Consider built-in storage along unused walls"),
    ("corridor", TipCategory.NEW_IDEA, "Widen the corridor for two-way circulation"),
)

DEFAULT_PAUSE_PROMPTS: tuple[str, ...] = (
    "What are you working on right now?",
    "What is your current goal here?",
    "Any concerns with this area?",
    "What will you tackle next?",
)

# keyword -> suggested follow-up action title (<= 40 chars).
DEFAULT_ACTION_TEMPLATES: tuple[tuple[str, str], ...] = (
    ("wall", "Define wall material"),
    ("bathroom", "Plan sanitation layout"),
    ("install", "Draft installation guide"),
    ("zoning", "Check zoning requirements"),
    ("code", "Check building code"),
    ("window", "Review daylight exposure"),
    ("light", "Review daylight exposure"),
    ("storage", "Sketch storage options"),
    ("door", "Verify door clearances"),
    ("kitchen", "Lay out kitchen work zones"),
)


@dataclass(frozen=True)
class RuleConfig:
    """Deterministic judgment rules; a pure function of these tables."""

    stopwords: frozenset[str] = STOPWORDS
    split_markers: tuple[str, ...] = DEFAULT_SPLIT_MARKERS
    split_min_buffer_words: int = 8
    split_jaccard_below: float = 0.1
    label_keywords: dict[ProcessLabel, tuple[str, ...]] = field(
        default_factory=lambda: dict(DEFAULT_LABEL_KEYWORDS)
    )
    summary_max_chars: int = 80
    merge_jaccard: float = 0.5
    relatedness_jaccard: float = 0.3
    tip_templates: tuple[tuple[str, TipCategory, str], ...] = DEFAULT_TIP_TEMPLATES
    pause_prompts: tuple[str, ...] = DEFAULT_PAUSE_PROMPTS
    action_templates: tuple[tuple[str, str], ...] = DEFAULT_ACTION_TEMPLATES
    element_min_containment: float = 0.2

    def __post_init__(self) -> None:
        if not (0.0 <= self.split_jaccard_below <= 1.0):
            raise RuleConfigError("split_jaccard_below must be in [0, 1]")
        if not (0.0 <= self.merge_jaccard <= 1.0):
            raise RuleConfigError("merge_jaccard must be in [0, 1]")
        if not (0.0 <= self.relatedness_jaccard <= 1.0):
            raise RuleConfigError("relatedness_jaccard must be in [0, 1]")
        if not (0.0 <= self.element_min_containment <= 1.0):
            raise RuleConfigError("element_min_containment must be in [0, 1]")
        if self.split_min_buffer_words < 1:
            raise RuleConfigError("split_min_buffer_words must be positive")
        if self.summary_max_chars < 1:
            raise RuleConfigError("summary_max_chars must be positive")
        if not self.pause_prompts:
            raise RuleConfigError("pause_prompts must not be empty")
        for _, _, text in self.tip_templates:
            if not text or len(text) > MAX_TIP_TEXT_CHARS:
                raise RuleConfigError(f"tip template text invalid: {text!r}")
        for _, title in self.action_templates:
            if not title or len(title) > MAX_ACTION_TITLE_CHARS:
                raise RuleConfigError(f"action template title invalid: {title!r}")
        for marker in self.split_markers:
            if not re.fullmatch(r"[a-z0-9' ]+", marker):
                raise RuleConfigError(f"split marker must be lowercase words: {marker!r}")

    @classmethod
    def from_json_file(cls, path: str | Path) -> "RuleConfig":
        """Load overrides from a JSON file; unknown keys are a startup error."""
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise RuleConfigError(f"cannot read rule config {path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise RuleConfigError("rule config must be a JSON object")
        kwargs: dict = {}
        try:
            for key, value in raw.items():
                if key == "stopwords":
                    kwargs[key] = frozenset(str(w).lower() for w in value)
                elif key == "split_markers":
                    kwargs[key] = tuple(str(m).lower() for m in value)
                elif key == "label_keywords":
                    kwargs[key] = {
                        ProcessLabel(label): tuple(str(k).lower() for k in keywords)
                        for label, keywords in value.items()
                    }
                elif key == "tip_templates":
                    kwargs[key] = tuple(
                        (str(k).lower(), TipCategory(c), str(t)) for k, c, t in value
                    )
                elif key == "pause_prompts":
                    kwargs[key] = tuple(str(p) for p in value)
                elif key == "action_templates":
                    kwargs[key] = tuple((str(k).lower(), str(t)) for k, t in value)
                elif key in (
                    "split_min_buffer_words",
                    "summary_max_chars",
                ):
                    kwargs[key] = int(value)
                elif key in (
                    "split_jaccard_below",
                    "merge_jaccard",
                    "relatedness_jaccard",
                    "element_min_containment",
                ):
                    kwargs[key] = float(value)
                else:
                    raise RuleConfigError(f"unknown rule config key: {key}")
        except (TypeError, ValueError) as exc:
            if isinstance(exc, RuleConfigError):
                raise
            raise RuleConfigError(f"malformed rule config: {exc}") from exc
        return cls(**kwargs)


DEFAULT_RULES = RuleConfig()
