"""Exceptions raised by the engine."""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Sequence


class EngineError(Exception):
    """Base class for every error raised by realwdvv."""


class ConfigurationError(EngineError):
    pass


class InconsistentSystemError(EngineError):
    """A linear system has no solution; carries a witness equation."""

    def __init__(self, equation_index: int, residual: Fraction, context: str = ""):
        self.equation_index = equation_index
        self.residual = residual
        self.context = context
        where = f" ({context})" if context else ""
        super().__init__(
            f"inconsistent system{where}: equation #{equation_index} reduces to "
            f"0 = {residual}"
        )


class UnderdeterminedSystemError(EngineError):
    def __init__(self, degree: int, free: Sequence[Any]):
        self.degree = degree
        self.free = tuple(free)
        listed = ", ".join(str(key) for key in self.free[:8])
        more = "" if len(self.free) <= 8 else f" (+{len(self.free) - 8} more)"
        super().__init__(
            f"degree {degree} tier is underdetermined; free unknowns: {listed}{more}"
        )


class NotSolvedError(EngineError):
    def __init__(self, degree: int, solved_up_to: int):
        self.degree = degree
        self.solved_up_to = solved_up_to
        super().__init__(
            f"degree {degree} requested but the store is solved only up to "
            f"degree {solved_up_to}"
        )


class SeriesMismatchError(EngineError, ValueError):
    pass


class ReferenceDataError(EngineError):
    pass


class ArchiveError(EngineError):
    pass


class NonlinearTermError(EngineError):
    """A relation instance multiplies two unknowns together."""
