"""Deformation-parameter frame: the chosen square root of q plus tolerances.

Half-integer q-shifts appear throughout the difference relations, so the
primitive datum is sqrt_q; q itself is always the derived square.  The frame
also fixes every tolerance and the finite window used for q-lattice searches,
so that two computations sharing a frame are bitwise comparable.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class ToleranceConfig:
    """Relative tolerances used by identity checks, solvers, and trimming."""

    rel_identity: float = 1e-9
    newton_conv: float = 1e-10
    root_find: float = 1e-12
    trim: float = 1e-13

    def __post_init__(self):
        for name in ("rel_identity", "newton_conv", "root_find", "trim"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"tolerance {name} must be strictly positive")
        if not (self.rel_identity >= self.newton_conv >= self.root_find):
            raise ValueError("tolerances must satisfy rel_identity >= newton_conv >= root_find")


@dataclass(frozen=True)
class QFrame:
    """Fixed branch of q^(1/2), tolerances, and the q-lattice search window.

    q must not be a root of unity; this is enforced up to ``lattice_window``:
    |q^n - 1| must stay above tolerance for 1 <= n <= lattice_window.
    """

    sqrt_q: complex
    tol: ToleranceConfig = field(default_factory=ToleranceConfig)
    lattice_window: int = 24

    def __post_init__(self):
        object.__setattr__(self, "sqrt_q", complex(self.sqrt_q))
        if self.lattice_window < 1:
            raise ValueError("lattice_window must be a positive integer")
        q = self.q
        if q == 0:
            raise ValueError("q must be nonzero")
        # |q| != 1 already rules out roots of unity; otherwise scan the window.
        if abs(abs(q) - 1.0) > self.tol.rel_identity:
            return
        power = 1.0 + 0.0j
        for n in range(1, self.lattice_window + 1):
            power *= q
            if abs(power - 1.0) <= self.tol.rel_identity:
                raise ValueError(f"q is a root of unity within the window (q^{n} = 1)")

    @property
    def q(self) -> complex:
        return self.sqrt_q * self.sqrt_q

    def q_power(self, halfsteps: int) -> complex:
        """sqrt_q raised to an integer number of half-steps."""
        return self.sqrt_q ** halfsteps


def default_lattice_window(total_weight: int, total_roots: int) -> int:
    """Window large enough for every lattice coincidence the identities can see."""
    return int(total_weight) + int(total_roots) + 4
