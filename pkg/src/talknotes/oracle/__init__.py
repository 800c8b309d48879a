"""Pluggable semantic-judgment oracles: a deterministic rule-based provider
and a remote chat-completion provider."""

from talknotes.oracle.base import (
    OverlayContext,
    SemanticOracle,
    SplitVerdict,
    TipDraft,
)
from talknotes.oracle.deterministic import DeterministicOracle
from talknotes.oracle.remote import RemoteOracle, RemoteOracleConfig
from talknotes.oracle.rules import DEFAULT_RULES, RuleConfig, RuleConfigError

__all__ = [
    "DEFAULT_RULES",
    "DeterministicOracle",
    "OverlayContext",
    "RemoteOracle",
    "RemoteOracleConfig",
    "RuleConfig",
    "RuleConfigError",
    "SemanticOracle",
    "SplitVerdict",
    "TipDraft",
]
