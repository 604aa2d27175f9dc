"""
Shared types for searches and attack stages.

Core data structures returned by the randomized and exhaustive searches in the
lab (invertible elements, permutation factorizations, frontier searches).

    from aelab.types import Result, Status

    result = random_invertible_in(span, rng)
    if result.ok:
        print(f"Found after {result.iterations} trials: {result.solution}")
"""

from dataclasses import dataclass
from enum import IntEnum, auto
from os import environ

__all__ = ["Status", "Result"]

_DEBUG = bool(environ.get("DEBUG"))


class Status(IntEnum):
    """Search outcome status."""

    FOUND = auto()  # A witness was produced
    INFEASIBLE = auto()  # Proven that no witness exists
    MAX_ITER = auto()  # Budget exhausted before a witness appeared


@dataclass(frozen=True, slots=True)
class Result[T]:
    """Search result containing the witness and bookkeeping.

    Attributes:
        solution: The witness found (type varies by search), None on failure
        iterations: Trials, samples or expansions performed
        evaluations: States or candidates examined
        status: Outcome status (FOUND, INFEASIBLE, MAX_ITER)
        error: Reason string when status indicates failure
    """

    solution: T
    iterations: int = 0
    evaluations: int = 0
    status: Status = Status.FOUND
    error: str | None = None

    @property
    def ok(self) -> bool:
        """True if a witness was found."""
        return self.status == Status.FOUND

    def log(self, prefix: str = "") -> "Result":
        """Print debug info if DEBUG=1. Returns self for chaining."""
        if _DEBUG:
            msg = f"{prefix}{self.status.name}: iter={self.iterations}, evals={self.evaluations}"
            if self.error:
                msg += f" - {self.error}"
            print(msg)
        return self

    def __repr__(self) -> str:
        """Concise representation for debugging."""
        return f"Result({self.status.name}, iter={self.iterations}, evals={self.evaluations})"
