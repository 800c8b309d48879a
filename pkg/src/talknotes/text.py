"""Shared text utilities: tokenization, content words, Jaccard similarity."""

from __future__ import annotations

import re

# Spoken-language fillers and discourse glue. Tokens on this list carry no
# topical signal, so they are excluded from content-word sets. Fixed at 40
# entries; treated as part of the deterministic rule set.
STOPWORDS: frozenset[str] = frozenset(
    {
        "um", "uh", "uhm", "umm", "er", "ah", "hmm", "mm", "mhm", "huh",
        "like", "okay", "ok", "so", "well", "now", "then", "just", "yeah", "yep",
        "yes", "no", "right", "sure", "actually", "basically", "literally",
        "really", "kinda", "sorta", "maybe", "anyway", "alright", "also",
        "next", "another", "gonna", "wanna", "lets", "let's",
    }
)

# Word = run of alphanumerics, optionally apostrophe-joined ("let's", "don't").
_WORD_RE = re.compile(r"[a-z0-9]+(?:'[a-z0-9]+)*")
_ALPHA_RE = re.compile(r"[a-z]")
_SENTENCE_END_RE = re.compile(r"[.!?]")


def tokens(text: str) -> list[str]:
    """Lowercase word tokens in order, punctuation stripped."""
    return _WORD_RE.findall(text.lower())


def content_words(text: str, stopwords: frozenset[str] = STOPWORDS) -> set[str]:
    """Tokens that carry topical signal: at least one letter, not a filler."""
    return {
        tok
        for tok in tokens(text)
        if tok not in stopwords and _ALPHA_RE.search(tok)
    }


def jaccard(a: set[str], b: set[str]) -> float:
    """Set similarity in [0, 1]; empty-vs-anything is 0."""
    if not a or not b:
        return 0.0
    return len(a & b) / len(a | b)


def first_sentence(text: str, max_chars: int = 80) -> str:
    """First sentence of ``text``, hard-capped at ``max_chars``."""
    stripped = text.strip()
    match = _SENTENCE_END_RE.search(stripped)
    if match is not None:
        stripped = stripped[: match.end()]
    return stripped[:max_chars]


def truncate(text: str, max_chars: int) -> str:
    return text.strip()[:max_chars]
