"""Exception types shared across the package.

Two failure regimes are kept strictly apart: bad input (the caller's
problem, CLI exit code 1) and violated structural guarantees (our bug,
CLI exit code 3).  A falsified open conjecture is *neither*: checks report
it as a normal verdict with ``holds=False``.
"""

from __future__ import annotations


class InputError(ValueError):
    """An argument violates an operation's contract (validation, domain,
    capacity or size errors, malformed files)."""


class InternalConsistencyError(RuntimeError):
    """A property that is guaranteed to hold failed at runtime.

    Raised only for facts backed by proof (e.g. constructed witness sets
    must be family members).  Carries a ``trace`` payload with the state
    that produced the contradiction so the failure can be replayed.
    """

    def __init__(self, message: str, trace: dict | None = None):
        super().__init__(message)
        self.trace = trace or {}
