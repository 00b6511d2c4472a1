"""Shared failure types for the separator strategies."""

from __future__ import annotations


class StrategyFailure(RuntimeError):
    """A strategy gave up within budget; carries the stage that failed.

    Strategies never emit unverified output: they either return a verified
    system or raise this.
    """

    def __init__(self, strategy: str, message: str, details: dict | None = None):
        super().__init__(f"{strategy}: {message}")
        self.strategy = strategy
        self.stage = message
        self.details = details or {}


class PreconditionError(ValueError):
    """An operation's structural precondition failed; names the property."""

    def __init__(self, prop: str, message: str, witness=None):
        super().__init__(f"{prop}: {message}")
        self.prop = prop
        self.witness = witness
