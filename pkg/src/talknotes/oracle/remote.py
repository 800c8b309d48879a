"""Chat-completion-backed oracle provider.

Each judgment maps to one HTTP request with a structured-output schema.
Responses that fail validation, time out, or error degrade to the op's
defined fallback instead of raising, except the enrichment ops
(summarize / classify_labels / suggest_actions) whose failures the note
pipeline handles with its own retry policy.
"""

from __future__ import annotations

import base64
import json
import logging
import os
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Sequence

import httpx

from talknotes.model import ProcessLabel, SceneElement, TipCategory
from talknotes.oracle.base import OverlayContext, SplitVerdict, TipDraft

logger = logging.getLogger(__name__)

ENDPOINT_ENV = "TALKNOTES_ORACLE_URL"
API_KEY_ENV = "TALKNOTES_ORACLE_API_KEY"

_PROMPTS = resources.files("talknotes.oracle") / "prompts"


class OracleRequestError(RuntimeError):
    """Transport or validation failure for one oracle request."""


@dataclass
class RemoteOracleConfig:
    base_url: str
    api_key: str = ""
    model: str = "gpt-4o"
    timeout_s: float = 2.0
    send_overlay_png: bool = False
    extra_headers: dict[str, str] = field(default_factory=dict)

    @classmethod
    def from_env(cls) -> "RemoteOracleConfig":
        url = os.environ.get(ENDPOINT_ENV, "")
        if not url:
            raise OracleRequestError(f"{ENDPOINT_ENV} is not set")
        return cls(base_url=url, api_key=os.environ.get(API_KEY_ENV, ""))


def _load_prompt(name: str) -> str:
    return (_PROMPTS / f"{name}.txt").read_text(encoding="utf-8")


class RemoteOracle:
    """Maps each judgment to one chat-completion request."""

    def __init__(self, config: RemoteOracleConfig, transport: httpx.BaseTransport | None = None):
        self.config = config
        # the note pipeline rasterizes overlays only when a provider asks
        self.wants_overlay_png = config.send_overlay_png
        headers = {"Content-Type": "application/json", **config.extra_headers}
        if config.api_key:
            headers["Authorization"] = f"Bearer {config.api_key}"
        self._client = httpx.Client(
            base_url=config.base_url,
            headers=headers,
            timeout=config.timeout_s,
            transport=transport,
        )
        self._prompts = {
            name: _load_prompt(name)
            for name in (
                "judge_split",
                "summarize",
                "classify_labels",
                "suggest_actions",
                "merge_check",
                "thread_affinity",
                "tip_candidates",
                "tip_gate",
                "related_notes",
                "element_link",
            )
        }

    def close(self) -> None:
        self._client.close()

    # -- transport ----------------------------------------------------------

    def _complete(self, op: str, prompt: str, schema: dict, image_png: bytes | None = None) -> dict:
        """One structured-output request; raises OracleRequestError on any failure."""
        content: Any = prompt
        if image_png is not None:
            encoded = base64.b64encode(image_png).decode("ascii")
            content = [
                {"type": "text", "text": prompt},
                {
                    "type": "image_url",
                    "image_url": {"url": f"data:image/png;base64,{encoded}"},
                },
            ]
        body = {
            "model": self.config.model,
            "messages": [{"role": "user", "content": content}],
            "response_format": {
                "type": "json_schema",
                "json_schema": {"name": op, "schema": schema, "strict": True},
            },
        }
        try:
            response = self._client.post("/chat/completions", json=body)
        except httpx.HTTPError as exc:
            raise OracleRequestError(f"{op}: transport failure: {exc}") from exc
        if response.status_code != 200:
            raise OracleRequestError(f"{op}: HTTP {response.status_code}")
        try:
            payload = response.json()
            text = payload["choices"][0]["message"]["content"]
            parsed = json.loads(text)
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise OracleRequestError(f"{op}: malformed response body") from exc
        if not isinstance(parsed, dict):
            raise OracleRequestError(f"{op}: response is not an object")
        return parsed

    def _try(self, op: str, prompt: str, schema: dict, image_png: bytes | None = None) -> dict | None:
        try:
            return self._complete(op, prompt, schema, image_png)
        except OracleRequestError as exc:
            logger.warning("oracle %s degraded: %s", op, exc)
            return None

    # -- chunking -----------------------------------------------------------

    def judge_split(self, buffer_text: str, fragment_text: str) -> SplitVerdict:
        prompt = self._prompts["judge_split"].format(buffer=buffer_text, fragment=fragment_text)
        schema = {
            "type": "object",
            "properties": {"verdict": {"type": "string", "enum": ["continue", "new_topic"]}},
            "required": ["verdict"],
            "additionalProperties": False,
        }
        result = self._try("judge_split", prompt, schema)
        if result is None or result.get("verdict") not in ("continue", "new_topic"):
            return SplitVerdict.CONTINUE
        return SplitVerdict(result["verdict"])

    # -- enrichment (raises on failure; pipeline retries) ---------------------

    def summarize(self, transcript: str) -> str:
        prompt = self._prompts["summarize"].format(transcript=transcript)
        schema = {
            "type": "object",
            "properties": {"summary": {"type": "string", "maxLength": 80}},
            "required": ["summary"],
            "additionalProperties": False,
        }
        result = self._complete("summarize", prompt, schema)
        summary = result.get("summary")
        if not isinstance(summary, str) or not summary.strip():
            raise OracleRequestError("summarize: invalid summary")
        return summary.strip()[:80]

    def classify_labels(self, transcript: str) -> set[ProcessLabel]:
        prompt = self._prompts["classify_labels"].format(transcript=transcript)
        schema = {
            "type": "object",
            "properties": {
                "labels": {
                    "type": "array",
                    "items": {"type": "string", "enum": [l.value for l in ProcessLabel]},
                    "minItems": 1,
                }
            },
            "required": ["labels"],
            "additionalProperties": False,
        }
        result = self._complete("classify_labels", prompt, schema)
        try:
            labels = {ProcessLabel(value) for value in result["labels"]}
        except (KeyError, TypeError, ValueError) as exc:
            raise OracleRequestError("classify_labels: invalid labels") from exc
        if not labels:
            raise OracleRequestError("classify_labels: empty label set")
        return labels

    def suggest_actions(self, transcript: str, brief: str) -> list[str]:
        prompt = self._prompts["suggest_actions"].format(transcript=transcript, brief=brief)
        schema = {
            "type": "object",
            "properties": {
                "actions": {
                    "type": "array",
                    "items": {"type": "string", "maxLength": 40},
                    "maxItems": 3,
                }
            },
            "required": ["actions"],
            "additionalProperties": False,
        }
        result = self._complete("suggest_actions", prompt, schema)
        actions = result.get("actions")
        if not isinstance(actions, list) or any(not isinstance(a, str) for a in actions):
            raise OracleRequestError("suggest_actions: invalid actions")
        return [a.strip()[:40] for a in actions if a.strip()][:3]

    # -- merging and threading ------------------------------------------------

    def merge_check(self, prev_transcript: str, new_transcript: str) -> bool:
        prompt = self._prompts["merge_check"].format(prev=prev_transcript, new=new_transcript)
        schema = {
            "type": "object",
            "properties": {"merge": {"type": "boolean"}},
            "required": ["merge"],
            "additionalProperties": False,
        }
        result = self._try("merge_check", prompt, schema)
        return bool(result.get("merge")) if result else False

    def thread_affinity(self, note_transcript: str, thread_text: str) -> float:
        prompt = self._prompts["thread_affinity"].format(
            transcript=note_transcript, thread_text=thread_text
        )
        schema = {
            "type": "object",
            "properties": {"affinity": {"type": "number", "minimum": 0, "maximum": 1}},
            "required": ["affinity"],
            "additionalProperties": False,
        }
        result = self._try("thread_affinity", prompt, schema)
        if result is None or not isinstance(result.get("affinity"), (int, float)):
            return 0.0
        return min(1.0, max(0.0, float(result["affinity"])))

    # -- tips ------------------------------------------------------------------

    def tip_candidates(self, recent_transcript: str, brief: str) -> list[TipDraft]:
        prompt = self._prompts["tip_candidates"].format(recent=recent_transcript, brief=brief)
        schema = {
            "type": "object",
            "properties": {
                "tips": {
                    "type": "array",
                    "maxItems": 3,
                    "items": {
                        "type": "object",
                        "properties": {
                            "category": {
                                "type": "string",
                                "enum": [c.value for c in TipCategory],
                            },
                            "text": {"type": "string", "maxLength": 80},
                        },
                        "required": ["category", "text"],
                        "additionalProperties": False,
                    },
                }
            },
            "required": ["tips"],
            "additionalProperties": False,
        }
        result = self._try("tip_candidates", prompt, schema)
        if result is None:
            return []
        drafts: list[TipDraft] = []
        taken: set[TipCategory] = set()
        try:
            for item in result["tips"][:3]:
                category = TipCategory(item["category"])
                text = str(item["text"]).strip()[:80]
                if text and category not in taken:
                    drafts.append(TipDraft(category=category, text=text))
                    taken.add(category)
        except (KeyError, TypeError, ValueError):
            return []
        return drafts

    def tip_gate(
        self, candidates: Sequence[tuple[str, str]], current_window: str
    ) -> str | None:
        listing = "\n".join(f"- {tip_id}: {text}" for tip_id, text in candidates)
        prompt = self._prompts["tip_gate"].format(window=current_window, candidates=listing)
        schema = {
            "type": "object",
            "properties": {"tip_id": {"type": ["string", "null"]}},
            "required": ["tip_id"],
            "additionalProperties": False,
        }
        result = self._try("tip_gate", prompt, schema)
        if result is None:
            return None
        tip_id = result.get("tip_id")
        known = {candidate_id for candidate_id, _ in candidates}
        return tip_id if isinstance(tip_id, str) and tip_id in known else None

    def pause_prompt(self, cycle_index: int) -> str:
        # Static nudges; not worth a model round-trip.
        prompts = (
            "What are you working on right now?",
            "What is your current goal here?",
            "Any concerns with this area?",
            "What will you tackle next?",
        )
        return prompts[cycle_index % len(prompts)]

    # -- reminders ---------------------------------------------------------------

    def related_notes(
        self, current_window: str, notes: Sequence[tuple[str, str]]
    ) -> list[tuple[str, float]]:
        listing = "\n".join(f"- {note_id}: {transcript}" for note_id, transcript in notes)
        prompt = self._prompts["related_notes"].format(window=current_window, notes=listing)
        schema = {
            "type": "object",
            "properties": {
                "related": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "properties": {
                            "id": {"type": "string"},
                            "score": {"type": "number"},
                        },
                        "required": ["id", "score"],
                        "additionalProperties": False,
                    },
                }
            },
            "required": ["related"],
            "additionalProperties": False,
        }
        result = self._try("related_notes", prompt, schema)
        if result is None:
            return []
        known = {note_id for note_id, _ in notes}
        scored: list[tuple[str, float]] = []
        try:
            for item in result["related"]:
                if item["id"] in known:
                    scored.append((str(item["id"]), float(item["score"])))
        except (KeyError, TypeError, ValueError):
            return []
        return scored

    # -- element linking -----------------------------------------------------------

    def element_link(
        self, transcript: str, scene: Sequence[SceneElement], context: OverlayContext
    ) -> set[str]:
        scene_listing = "\n".join(
            f"- {el.id} ({el.name}): x [{el.bounds.x0}, {el.bounds.x1}], "
            f"y [{el.bounds.y0}, {el.bounds.y1}]"
            for el in scene
        )
        prompt = self._prompts["element_link"].format(
            transcript=transcript, timeline=context.timeline, scene=scene_listing
        )
        schema = {
            "type": "object",
            "properties": {"elements": {"type": "array", "items": {"type": "string"}}},
            "required": ["elements"],
            "additionalProperties": False,
        }
        png = context.png if self.config.send_overlay_png else None
        result = self._try("element_link", prompt, schema, image_png=png)
        if result is None:
            return set()
        known = {el.id for el in scene}
        try:
            return {str(el) for el in result["elements"] if el in known}
        except TypeError:
            return set()
