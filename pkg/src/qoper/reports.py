"""Small result records shared by the verification routines."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class ResidualReport:
    """Per-equation complex residuals with an aggregate max magnitude."""

    entries: tuple[complex, ...]
    labels: tuple[Any, ...] = ()
    converged: bool = False

    @property
    def max_abs(self) -> float:
        return max((abs(e) for e in self.entries), default=0.0)

    @staticmethod
    def from_entries(entries, labels=(), tol: float | None = None) -> "ResidualReport":
        entries = tuple(complex(e) for e in entries)
        max_abs = max((abs(e) for e in entries), default=0.0)
        converged = tol is not None and max_abs <= tol
        return ResidualReport(entries=entries, labels=tuple(labels), converged=converged)


@dataclass(frozen=True)
class IdentityReport:
    """Relative-error summary of a polynomial or pointwise identity check."""

    max_rel_error: float
    details: tuple = ()
    passed: bool = True


@dataclass
class StageRecord:
    """One named stage of a multi-step certificate."""

    name: str
    residual: float
    passed: bool
    extra: dict = field(default_factory=dict)
