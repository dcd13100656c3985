"""Univariate complex polynomials with q-shift operators and root finding.

Coefficients are stored ascending; the zero polynomial is the empty
coefficient list and reports degree -inf.  Trailing coefficients below a
relative threshold are trimmed after every operation so that degrees stay
stable under floating-point noise in determinant expansions.
"""

from __future__ import annotations

import math
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import NonConvergence, ZeroInput, ZeroPolynomial
from .frame import QFrame

DEFAULT_TRIM = 1e-13
NEG_INF = float("-inf")


def _trimmed(coeffs: Sequence[complex], trim: float) -> tuple[complex, ...]:
    vals = [complex(c) for c in coeffs]
    if not vals:
        return ()
    scale = max(abs(c) for c in vals)
    if scale == 0.0:
        return ()
    cut = trim * scale
    end = len(vals)
    while end > 0 and abs(vals[end - 1]) <= cut:
        end -= 1
    return tuple(vals[:end])


class Poly:
    """Immutable dense polynomial over complex doubles, ascending coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[complex] = (), trim: float = DEFAULT_TRIM):
        object.__setattr__(self, "coeffs", _trimmed(tuple(coeffs), trim))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @property
    def degree(self):
        """Degree as an int; -inf for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> complex:
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __call__(self, z: complex) -> complex:
        acc = 0.0 + 0.0j
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0.0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0.0] * (n - len(other.coeffs))
        return Poly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return Poly([c * other for c in self.coeffs])
        other = _as_poly(other)
        if self.is_zero or other.is_zero:
            return Poly()
        prod = np.convolve(np.asarray(self.coeffs, dtype=complex),
                           np.asarray(other.coeffs, dtype=complex))
        return Poly(prod.tolist())

    __rmul__ = __mul__

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def __repr__(self):
        return f"Poly({list(self.coeffs)!r})"

    @staticmethod
    def one() -> "Poly":
        return Poly([1.0])

    @staticmethod
    def x() -> "Poly":
        return Poly([0.0, 1.0])

    @staticmethod
    def from_roots(roots: Iterable[complex], lead: complex = 1.0) -> "Poly":
        coeffs = np.array([complex(lead)], dtype=complex)
        for r in roots:
            coeffs = np.convolve(coeffs, np.array([-complex(r), 1.0], dtype=complex))
        return Poly(coeffs.tolist())


def _as_poly(value) -> Poly:
    if isinstance(value, Poly):
        return value
    if isinstance(value, (int, float, complex)):
        return Poly([complex(value)])
    raise TypeError(f"cannot coerce {type(value).__name__} to Poly")


def rel_error(a: Poly, b: Poly) -> float:
    """Max coefficient deviation normalized by the larger coefficient scale."""
    n = max(len(a.coeffs), len(b.coeffs))
    ca = list(a.coeffs) + [0.0] * (n - len(a.coeffs))
    cb = list(b.coeffs) + [0.0] * (n - len(b.coeffs))
    diff = max((abs(x - y) for x, y in zip(ca, cb)), default=0.0)
    scale = max([abs(c) for c in ca + cb], default=0.0)
    if scale == 0.0:
        return 0.0
    return diff / scale


def qshift(p: Poly, halfsteps: int, frame: QFrame) -> Poly:
    """Substitute z -> q^(halfsteps/2) z, i.e. scale coefficient i by sqrt_q^(halfsteps*i)."""
    if halfsteps == 0:
        return p
    s = frame.sqrt_q
    return Poly([c * s ** (halfsteps * i) for i, c in enumerate(p.coeffs)],
                trim=frame.tol.trim)


def monicize(p: Poly) -> tuple[Poly, complex]:
    """Split p into (monic polynomial, leading coefficient)."""
    if p.is_zero:
        raise ZeroPolynomial("cannot monicize the zero polynomial")
    lead = p.lead
    return Poly([c / lead for c in p.coeffs]), lead


def long_divide(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    """Euclidean division num = q*den + r with deg r < deg den."""
    if den.is_zero:
        raise ZeroPolynomial("division by the zero polynomial")
    rem = list(num.coeffs)
    d = len(den.coeffs) - 1
    lead = den.coeffs[-1]
    if len(rem) - 1 < d:
        return Poly(), num
    quot = [0.0 + 0.0j] * (len(rem) - d)
    for k in range(len(rem) - d - 1, -1, -1):
        c = rem[k + d] / lead
        quot[k] = c
        if c != 0.0:
            for j in range(d + 1):
                rem[k + j] -= c * den.coeffs[j]
        rem[k + d] = 0.0
    return Poly(quot), Poly(rem)


def divide_by_root(p: Poly, root: complex) -> tuple[Poly, complex]:
    """Synthetic division by (z - root); returns (quotient, remainder value)."""
    if p.is_zero:
        return Poly(), 0.0 + 0.0j
    coeffs = p.coeffs
    out = [0.0 + 0.0j] * (len(coeffs) - 1)
    acc = 0.0 + 0.0j
    for i in range(len(coeffs) - 1, 0, -1):
        acc = coeffs[i] + acc * root
        out[i - 1] = acc
    rem = coeffs[0] + acc * root
    return Poly(out), rem


def divide_out_roots(p: Poly, roots: Sequence[complex]) -> tuple[Poly, float]:
    """Deflate p by each linear factor in turn; returns (quotient, max |remainder|).

    Remainders are reported relative to the max coefficient magnitude of p.
    """
    scale = max((abs(c) for c in p.coeffs), default=0.0)
    if scale == 0.0:
        return Poly(), 0.0
    quotient = p
    worst = 0.0
    for r in sorted(roots, key=lambda x: (abs(x), x.real, x.imag)):
        quotient, rem = divide_by_root(quotient, r)
        worst = max(worst, abs(rem) / scale)
    return quotient, worst


def poly_eval_many(p: Poly, points: np.ndarray) -> np.ndarray:
    acc = np.zeros(len(points), dtype=complex)
    for c in reversed(p.coeffs):
        acc = acc * points + c
    return acc


def roots(p: Poly, frame: QFrame, rng: Optional[np.random.Generator] = None) -> list[complex]:
    """All roots with multiplicity via Aberth-Ehrlich simultaneous iteration.

    Initial guesses sit on a circle at the Cauchy bound; stagnating runs are
    restarted from randomly perturbed initials.  The result is accepted only
    when the monic product over the roots reproduces the monic input
    coefficient-wise within tol.rel_identity.
    """
    if p.is_zero:
        raise ZeroPolynomial("root finding requires a nonzero polynomial")
    if p.degree < 1:
        raise ValueError("root finding requires degree >= 1")
    monic, _ = monicize(p)
    c = np.asarray(monic.coeffs, dtype=complex)
    n = len(c) - 1
    if n == 1:
        return [complex(-c[0])]
    if rng is None:
        rng = np.random.default_rng(0)
    radius = 1.0 + max(abs(c[i]) for i in range(n))
    base_angles = 2.0 * math.pi * (np.arange(n) + 0.35) / n
    deriv = np.arange(1, n + 1, dtype=complex) * c[1:]
    dcoeffs = np.concatenate([deriv, [0.0]])[:n]

    def run(x: np.ndarray) -> Optional[np.ndarray]:
        for _ in range(500):
            pv = np.full(n, c[n], dtype=complex)
            for k in range(n - 1, -1, -1):
                pv = pv * x + c[k]
            dv = np.full(n, dcoeffs[n - 1], dtype=complex)
            for k in range(n - 2, -1, -1):
                dv = dv * x + dcoeffs[k]
            diff = x[:, None] - x[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            sums = inv.sum(axis=1)
            with np.errstate(divide="ignore", invalid="ignore"):
                w = np.where(dv != 0, pv / np.where(dv == 0, 1.0, dv), pv)
                corr = w / (1.0 - w * sums)
            corr = np.where(np.isfinite(corr), corr, 0.5 * (1.0 + 0.3j))
            x = x - corr
            if np.max(np.abs(corr) / (1.0 + np.abs(x))) < frame.tol.root_find:
                return x
        return None

    attempts = 8
    for attempt in range(attempts):
        if attempt == 0:
            x0 = radius * np.exp(1j * base_angles)
        else:
            jitter = rng.normal(scale=0.25, size=n) + 1j * rng.normal(scale=0.25, size=n)
            x0 = radius * np.exp(1j * base_angles) * (1.0 + jitter)
        x = run(x0)
        if x is None:
            continue
        rebuilt = Poly.from_roots(x.tolist())
        if rel_error(rebuilt, monic) <= frame.tol.rel_identity:
            return sorted(x.tolist(), key=lambda z: (z.real, z.imag))
    raise NonConvergence(f"Aberth iteration failed for degree {n} after {attempts} restarts")


def coprime_test(a: Poly, b: Poly, frame: QFrame) -> bool:
    """True when the root sets are separated: min |r_a - r_b|/(1+|r_a|) above tolerance."""
    if a.is_zero or b.is_zero:
        raise ZeroPolynomial("coprimality test requires nonzero polynomials")
    if a.degree < 1 or b.degree < 1:
        return True
    ra = roots(a, frame)
    rb = roots(b, frame)
    sep = min(abs(x - y) / (1.0 + abs(x)) for x in ra for y in rb)
    return sep > frame.tol.rel_identity


def lattice_related(a: complex, b: complex, frame: QFrame) -> Optional[int]:
    """Return n with a = q^n b within tolerance and |n| <= lattice_window, else None.

    The match test |a - q^n b| <= tol * max(|a|, |q^n b|) is symmetric under
    (a, b, n) -> (b, a, -n), so the sign-flip property holds exactly.
    """
    a = complex(a)
    b = complex(b)
    if a == 0 or b == 0:
        raise ZeroInput("lattice relation requires nonzero inputs")
    q = frame.q
    tol = frame.tol.rel_identity
    for n in range(0, frame.lattice_window + 1):
        for sign in ((0,) if n == 0 else (1, -1)):
            m = n * sign if n else 0
            cand = b * q ** m
            if abs(a - cand) <= tol * max(abs(a), abs(cand)):
                return m
    return None
