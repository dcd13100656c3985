"""Quantum Wronskian determinants of twisted section components.

The central objects are determinants of matrices whose rows are q-shifted
section polynomials scaled by powers of the twist eigenvalue attached to the
row.  Two shift conventions coexist: one-sided (shifts 0 .. j-1) and
symmetric (shifts (1-j)/2 .. (j-1)/2); they differ by a global q-shift of
the whole determinant and every call site states which one it wants.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import (BadIndices, BadShape, NotDivisible, ZeroDeterminant,
                     ZeroPolynomial)
from .frame import QFrame
from .poly import (Poly, divide_out_roots, monicize, qshift, rel_error, roots)
from .reports import IdentityReport
from .structure import PunctureData, w_poly, w_roots

ONE_SIDED = "onesided"
SYMMETRIC = "symmetric"


@dataclass(frozen=True)
class TwistData:
    """Diagonal twist eigenvalues (zeta_1, ..., zeta_N), det = 1."""

    zeta: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "zeta", tuple(complex(z) for z in self.zeta))
        if len(self.zeta) < 2:
            raise ValueError("need at least two twist eigenvalues")

    @property
    def n_rank(self) -> int:
        return len(self.zeta)

    @property
    def kappa(self) -> tuple[complex, ...]:
        """Spin-chain twist labels: kappa_i = zeta_{N+1-i}."""
        return tuple(reversed(self.zeta))

    @classmethod
    def from_kappa(cls, kappa: Sequence[complex]) -> "TwistData":
        """The single conversion point between the two twist labelings."""
        return cls(zeta=tuple(reversed([complex(k) for k in kappa])))

    def validate(self, frame: QFrame, require_disjoint: bool = False) -> None:
        prod = 1.0 + 0.0j
        for z in self.zeta:
            prod *= z
        if abs(prod - 1.0) > 1e-6:
            raise ValueError("twist eigenvalues must multiply to one")
        n = len(self.zeta)
        for i in range(n):
            for j in range(i + 1, n):
                if abs(self.zeta[i] - self.zeta[j]) <= frame.tol.rel_identity * (
                        abs(self.zeta[i]) + abs(self.zeta[j])):
                    raise ValueError("twist eigenvalues must be pairwise distinct")
        if require_disjoint:
            from .poly import lattice_related
            for i in range(n):
                for j in range(n):
                    if i != j and lattice_related(self.zeta[i], self.zeta[j], frame) is not None:
                        raise ValueError("twist eigenvalues must generate disjoint q-lattices")


@dataclass(frozen=True)
class SectionData:
    """Section components (s_1, ..., s_N) and, when known, their normalizations."""

    s: tuple[Poly, ...]
    alpha: Optional[tuple[complex, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "s", tuple(self.s))
        if all(p.is_zero for p in self.s):
            raise ZeroPolynomial("section must have a nonzero component")
        if self.alpha is not None:
            object.__setattr__(self, "alpha", tuple(complex(a) for a in self.alpha))


@dataclass(frozen=True)
class DFactorization:
    """Determinant factorization d_poly = alpha * W_k * v_poly."""

    level: int
    d_poly: Poly
    v_poly: Poly
    alpha: complex
    bethe_zeros: tuple[complex, ...]
    remainder: float


def _halfsteps(column: int, size: int, convention: str) -> int:
    if convention == ONE_SIDED:
        return 2 * column
    if convention == SYMMETRIC:
        return 2 * column + 1 - size
    raise ValueError(f"unknown shift convention {convention!r}")


def _cofactor_det(matrix: list[list[Poly]]) -> Poly:
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    if n == 2:
        return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    total = Poly()
    for i in range(n):
        minor = [row[1:] for r, row in enumerate(matrix) if r != i]
        term = matrix[i][0] * _cofactor_det(minor)
        total = total + (term if i % 2 == 0 else -term)
    return total


def _bareiss_det(matrix: list[list[Poly]]) -> Optional[Poly]:
    """Fraction-free elimination over the polynomial ring; None when the exact
    divisions pick up too much floating-point noise."""
    from .poly import long_divide
    n = len(matrix)
    m = [row[:] for row in matrix]
    sign = 1
    prev = Poly.one()
    for k in range(n - 1):
        if m[k][k].is_zero:
            pivot_row = next((i for i in range(k + 1, n) if not m[i][k].is_zero), None)
            if pivot_row is None:
                return Poly()
            m[k], m[pivot_row] = m[pivot_row], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                quot, rem = long_divide(num, prev)
                if not num.is_zero and rel_error(rem + quot * prev, num) > 1e-8:
                    return None
                m[i][j] = quot
        prev = m[k][k]
    result = m[n - 1][n - 1]
    return result if sign == 1 else -result


def poly_det(matrix: Sequence[Sequence[Poly]]) -> Poly:
    """Determinant of a square polynomial matrix.

    Cofactor expansion up to size 4; fraction-free Bareiss elimination above
    that, with a cofactor fallback if the exact divisions degrade.  Summation
    order is fixed, so results are reproducible.
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise BadShape("polynomial matrix must be square")
    rows = [list(row) for row in matrix]
    if n <= 4:
        return _cofactor_det(rows)
    det = _bareiss_det(rows)
    return det if det is not None else _cofactor_det(rows)


def m_det(indices: Sequence[int], sections: SectionData, twists: TwistData,
          frame: QFrame, convention: str = ONE_SIDED) -> Poly:
    """Determinant over the chosen rows i_1 < ... < i_j of the twisted shift matrix.

    Row for index i holds zeta_i^m * s_i(q^(shift_m) z) across columns m; the
    shift schedule is set by the convention flag.
    """
    idx = list(indices)
    j = len(idx)
    n = twists.n_rank
    if j < 1 or j > n or sorted(set(idx)) != idx or idx[0] < 1 or idx[-1] > n:
        raise BadIndices(f"row indices {indices!r} invalid for rank {n}")
    if len(sections.s) != n:
        raise BadShape("section component count must match the twist rank")
    rows = []
    for i in idx:
        zeta = twists.zeta[i - 1]
        s_i = sections.s[i - 1]
        rows.append([(zeta ** m) * qshift(s_i, _halfsteps(m, j, convention), frame)
                     for m in range(j)])
    return poly_det(rows)


def vandermonde_det(gammas: Sequence[complex]) -> complex:
    """Product formula over the ordered nodes: prod_{i<j} (g_j - g_i)."""
    gs = [complex(g) for g in gammas]
    out = 1.0 + 0.0j
    for i in range(len(gs)):
        for j in range(i + 1, len(gs)):
            out *= gs[j] - gs[i]
    return out


def d_factorize(k: int, sections: SectionData, twists: TwistData,
                structure: PunctureData, frame: QFrame,
                accept_remainder: float = 1e-7) -> DFactorization:
    """Factor the level-k Wronskian determinant as alpha * W_k * V_k.

    The determinant is taken over the bottom k rows with one-sided shifts,
    divided synthetically by the known linear factors of W_k (including its
    leading coefficient), and the monic quotient carries the Bethe zeros.
    """
    n = twists.n_rank
    if not 0 <= k <= n:
        raise BadIndices(f"factorization level {k} outside 0..{n}")
    if k == 0:
        return DFactorization(level=0, d_poly=Poly.one(), v_poly=Poly.one(),
                              alpha=1.0 + 0.0j, bethe_zeros=(), remainder=0.0)
    det = m_det(list(range(n - k + 1, n + 1)), sections, twists, frame, ONE_SIDED)
    if det.is_zero:
        raise ZeroDeterminant(f"level-{k} determinant vanished identically")
    wk = w_poly(k, structure, frame)
    quotient, worst = divide_out_roots(det, w_roots(k, structure, frame))
    if worst > accept_remainder:
        raise NotDivisible(
            f"W_{k} does not divide the level-{k} determinant (remainder {worst:.3e})")
    quotient = quotient * (1.0 / wk.lead)
    if quotient.is_zero:
        raise ZeroDeterminant(f"level-{k} quotient vanished")
    v_poly, alpha = monicize(quotient)
    zeros = tuple(roots(v_poly, frame)) if v_poly.degree >= 1 else ()
    recon = alpha * wk * v_poly
    resid = rel_error(recon, det)
    return DFactorization(level=k, d_poly=det, v_poly=v_poly, alpha=alpha,
                          bethe_zeros=zeros, remainder=max(worst, resid))


def desnanot_jacobi_check(matrix: Sequence[Sequence[Poly]], frame: QFrame,
                          n_points: int = 10) -> IdentityReport:
    """Check the condensation identity on a square polynomial matrix of size >= 3.

    Both sides are compared at sample points on a circle:
    det M^1_1 det M^2_n - det M^1_n det M^2_1 = det M^{1,2}_{1,n} det M.
    """
    n = len(matrix)
    if n < 3 or any(len(row) != n for row in matrix):
        raise BadShape("need a square polynomial matrix of size >= 3")
    rng = np.random.default_rng(12345)
    points = 1.5 * np.exp(2j * np.pi * rng.random(n_points)) + 0.1
    worst = 0.0
    for z in points:
        vals = np.array([[p(z) for p in row] for row in matrix], dtype=complex)

        def minor(rows, cols):
            keep_r = [i for i in range(n) if i not in rows]
            keep_c = [j for j in range(n) if j not in cols]
            return np.linalg.det(vals[np.ix_(keep_r, keep_c)])

        lhs = minor({0}, {0}) * minor({1}, {n - 1}) - minor({0}, {n - 1}) * minor({1}, {0})
        rhs = minor({0, 1}, {0, n - 1}) * np.linalg.det(vals)
        scale = max(abs(lhs), abs(rhs), 1.0)
        worst = max(worst, abs(lhs - rhs) / scale)
    return IdentityReport(max_rel_error=worst, passed=worst <= 1e-10)
