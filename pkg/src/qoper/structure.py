"""Structure polynomials attached to the regular singularities.

A puncture carries a dominant integral weight given by nonnegative integers
(l^1, ..., l^{N-1}).  The polynomials built here encode where the induced
flag maps degenerate: Lambda_i collects the level-i zeros, P_i and W_k are
their running products, Pi_k is the recentered Baxter variant, and F_k is
the half-shifted form entering the dressed functional relations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import BadIndices
from .frame import QFrame
from .poly import Poly, lattice_related, qshift, rel_error
from .reports import IdentityReport


@dataclass(frozen=True)
class Puncture:
    z: complex
    weights: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if any(w < 0 for w in self.weights):
            raise ValueError("puncture weights must be nonnegative integers")

    def cumulative(self, i: int) -> int:
        """Partial weight sum l^1 + ... + l^i; zero for i <= 0."""
        if i <= 0:
            return 0
        return sum(self.weights[:i])


@dataclass(frozen=True)
class PunctureData:
    """Positions and weights of the regular singularities for rank N."""

    n_rank: int
    punctures: tuple[Puncture, ...]

    def __post_init__(self):
        object.__setattr__(self, "punctures", tuple(self.punctures))
        if self.n_rank < 2:
            raise ValueError("rank N must be at least 2")
        for p in self.punctures:
            if len(p.weights) != self.n_rank - 1:
                raise ValueError("each puncture needs N-1 weight entries")
            if p.z == 0:
                raise ValueError("punctures must avoid the origin")

    def validate(self, frame: QFrame) -> None:
        """Fail fast on q-lattice collisions between puncture positions."""
        pts = [p.z for p in self.punctures]
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                n = lattice_related(pts[i], pts[j], frame)
                if n is not None:
                    raise ValueError(
                        f"punctures {i} and {j} lie on a common q-lattice (shift {n})")

    @property
    def total_weight(self) -> int:
        return sum(sum(p.weights) for p in self.punctures)

    def level_degree(self, i: int) -> int:
        """Total weight at level i, i.e. the degree of Lambda_i."""
        return sum(p.weights[i - 1] for p in self.punctures)


def lambda_poly(i: int, data: PunctureData, frame: QFrame) -> Poly:
    """Monic polynomial with the level-i singular points q^{-j} z_m as roots."""
    if not 1 <= i <= data.n_rank - 1:
        raise BadIndices(f"lambda index {i} outside 1..{data.n_rank - 1}")
    q = frame.q
    result = Poly.one()
    for p in data.punctures:
        lo = p.cumulative(i - 1)
        hi = p.cumulative(i)
        for j in range(lo, hi):
            result = result * Poly([-(q ** (-j)) * p.z, 1.0])
    return result


def p_poly(i: int, data: PunctureData, frame: QFrame) -> Poly:
    """Running product Lambda_1 ... Lambda_i; P_0 = 1."""
    if not 0 <= i <= data.n_rank - 1:
        raise BadIndices(f"P index {i} outside 0..{data.n_rank - 1}")
    result = Poly.one()
    for j in range(1, i + 1):
        result = result * lambda_poly(j, data, frame)
    return result


def w_poly(k: int, data: PunctureData, frame: QFrame) -> Poly:
    """W_k = P_1 * P_2 shifted by q * ... * P_{k-1} shifted by q^{k-2}; W_0 = W_1 = 1."""
    if not 0 <= k <= data.n_rank:
        raise BadIndices(f"W index {k} outside 0..{data.n_rank}")
    result = Poly.one()
    for j in range(1, k):
        result = result * qshift(p_poly(j, data, frame), 2 * (j - 1), frame)
    return result


def w_roots(k: int, data: PunctureData, frame: QFrame) -> list[complex]:
    """The root multiset of W_k, known exactly from the puncture data."""
    if not 0 <= k <= data.n_rank:
        raise BadIndices(f"W index {k} outside 0..{data.n_rank}")
    q = frame.q
    out: list[complex] = []
    for j in range(1, k):
        # roots of P_j shifted by q^(j-1): q^(1-j-m) z for m in 0..(cumulative level-j)-1
        for p in data.punctures:
            for m in range(p.cumulative(j)):
                out.append(q ** (1 - j - m) * p.z)
    return out


def pi_poly(k: int, data: PunctureData, frame: QFrame) -> Poly:
    """Baxter singularity polynomial: Lambda_k recentered by the half-shift k/2 - 1.

    The stated normalization is kept literally, so the leading coefficient is
    sqrt_q^((k-2) deg Lambda_k) rather than 1 when k is odd.
    """
    if not 1 <= k <= data.n_rank - 1:
        raise BadIndices(f"Pi index {k} outside 1..{data.n_rank - 1}")
    return qshift(lambda_poly(k, data, frame), k - 2, frame)


def f_poly(k: int, data: PunctureData, frame: QFrame) -> Poly:
    """Half-shifted product F_k = W_k(q^((1-k)/2) z); F_0 = F_1 = 1."""
    if not 0 <= k <= data.n_rank:
        raise BadIndices(f"F index {k} outside 0..{data.n_rank}")
    return qshift(w_poly(k, data, frame), 1 - k, frame)


def check_ffunc(data: PunctureData, frame: QFrame) -> IdentityReport:
    """Verify F_{k-1} F_{k+1} = Pi_k F_k^(1/2) F_k^(-1/2) coefficient-wise for all levels."""
    worst = 0.0
    details = []
    fs = [f_poly(k, data, frame) for k in range(0, data.n_rank + 1)]
    for k in range(1, data.n_rank):
        lhs = fs[k - 1] * fs[k + 1]
        rhs = pi_poly(k, data, frame) * qshift(fs[k], 1, frame) * qshift(fs[k], -1, frame)
        err = rel_error(lhs, rhs)
        details.append((k, err))
        worst = max(worst, err)
    return IdentityReport(max_rel_error=worst, details=tuple(details),
                          passed=worst <= frame.tol.rel_identity)
