"""Rule-based oracle provider: byte-identical outputs for identical inputs."""

from __future__ import annotations

import re
from typing import Sequence

from talknotes.model import ProcessLabel, SceneElement
from talknotes.oracle.base import OverlayContext, SplitVerdict, TipDraft
from talknotes.oracle.rules import INTERROGATIVE_OPENERS, DEFAULT_RULES, RuleConfig
from talknotes.text import content_words, first_sentence, jaccard, tokens


def _keyword_pattern(keywords: tuple[str, ...]) -> re.Pattern[str] | None:
    if not keywords:
        return None
    # Prefix match on word boundaries so "problem" also hits "problems".
    alternatives = "|".join(re.escape(k) for k in keywords)
    return re.compile(rf"\b(?:{alternatives})", re.IGNORECASE)


class DeterministicOracle:
    """Stateless provider driven entirely by :class:`RuleConfig` tables."""

    def __init__(self, rules: RuleConfig = DEFAULT_RULES):
        self.rules = rules
        self._label_patterns = {
            label: _keyword_pattern(keywords)
            for label, keywords in rules.label_keywords.items()
        }

    # -- chunking ---------------------------------------------------------

    def judge_split(self, buffer_text: str, fragment_text: str) -> SplitVerdict:
        frag_tokens = tokens(fragment_text)
        if not frag_tokens:
            return SplitVerdict.CONTINUE
        openers = {frag_tokens[0]}
        if len(frag_tokens) >= 2:
            openers.add(f"{frag_tokens[0]} {frag_tokens[1]}")
        if openers & set(self.rules.split_markers):
            return SplitVerdict.NEW_TOPIC
        buffer_words = content_words(buffer_text, self.rules.stopwords)
        if len(buffer_words) >= self.rules.split_min_buffer_words:
            frag_words = content_words(fragment_text, self.rules.stopwords)
            if jaccard(frag_words, buffer_words) < self.rules.split_jaccard_below:
                return SplitVerdict.NEW_TOPIC
        return SplitVerdict.CONTINUE

    # -- note enrichment --------------------------------------------------

    def summarize(self, transcript: str) -> str:
        return first_sentence(transcript, self.rules.summary_max_chars)

    def classify_labels(self, transcript: str) -> set[ProcessLabel]:
        labels: set[ProcessLabel] = set()
        toks = tokens(transcript)
        if "?" in transcript or (toks and toks[0] in INTERROGATIVE_OPENERS):
            labels.add(ProcessLabel.QUESTION)
        for label, pattern in self._label_patterns.items():
            if pattern is not None and pattern.search(transcript):
                labels.add(label)
        if not labels:
            labels.add(ProcessLabel.PROCESS)
        return labels

    def suggest_actions(self, transcript: str, brief: str) -> list[str]:
        words = content_words(transcript, self.rules.stopwords)
        titles: list[str] = []
        for keyword, title in self.rules.action_templates:
            if keyword in words and title not in titles:
                titles.append(title)
            if len(titles) == 3:
                break
        return titles

    # -- merging and threading --------------------------------------------

    def merge_check(self, prev_transcript: str, new_transcript: str) -> bool:
        return (
            jaccard(
                content_words(prev_transcript, self.rules.stopwords),
                content_words(new_transcript, self.rules.stopwords),
            )
            >= self.rules.merge_jaccard
        )

    def thread_affinity(self, note_transcript: str, thread_text: str) -> float:
        return jaccard(
            content_words(note_transcript, self.rules.stopwords),
            content_words(thread_text, self.rules.stopwords),
        )

    # -- tips ---------------------------------------------------------------

    def tip_candidates(self, recent_transcript: str, brief: str) -> list[TipDraft]:
        words = content_words(recent_transcript, self.rules.stopwords)
        drafts: list[TipDraft] = []
        taken_categories = set()
        for keyword, category, text in self.rules.tip_templates:
            if category in taken_categories:
                continue
            if keyword in words:
                drafts.append(TipDraft(category=category, text=text))
                taken_categories.add(category)
        return drafts

    def tip_gate(
        self, candidates: Sequence[tuple[str, str]], current_window: str
    ) -> str | None:
        window_words = content_words(current_window, self.rules.stopwords)
        if not window_words:
            return None
        best_id: str | None = None
        best_overlap = 0
        for tip_id, text in candidates:
            overlap = len(content_words(text, self.rules.stopwords) & window_words)
            if overlap > best_overlap:
                best_id, best_overlap = tip_id, overlap
        return best_id if best_overlap >= 1 else None

    def pause_prompt(self, cycle_index: int) -> str:
        prompts = self.rules.pause_prompts
        return prompts[cycle_index % len(prompts)]

    # -- reminders ----------------------------------------------------------

    def related_notes(
        self, current_window: str, notes: Sequence[tuple[str, str]]
    ) -> list[tuple[str, float]]:
        window_words = content_words(current_window, self.rules.stopwords)
        scored = []
        for note_id, transcript in notes:
            score = jaccard(content_words(transcript, self.rules.stopwords), window_words)
            if score >= self.rules.relatedness_jaccard:
                scored.append((note_id, score))
        scored.sort(key=lambda item: -item[1])
        return scored

    # -- element linking ----------------------------------------------------

    def element_link(
        self, transcript: str, scene: Sequence[SceneElement], context: OverlayContext
    ) -> set[str]:
        linked: set[str] = set()
        lowered = transcript.lower()
        total = len(context.samples)
        for element in scene:
            if element.name.lower() in lowered:
                linked.add(element.id)
                continue
            if total:
                inside = sum(
                    1
                    for x, y in context.samples
                    if element.bounds.x0 <= x <= element.bounds.x1
                    and element.bounds.y0 <= y <= element.bounds.y1
                )
                if inside / total >= self.rules.element_min_containment:
                    linked.add(element.id)
        return linked
