"""Residual evaluation and Newton solving for the Bethe systems.

The anisotropic (XXZ-type) system is primary: for level k and root u_{k,a},
the product of puncture, adjacent-level, and same-level factors equals -1
at a solution when the same-level product runs over all b including b = a.
The residual reported here is therefore (product + 1) per equation; the
Baxter-ratio form evaluates the identical quantity through shifted
polynomials and the two agree up to roundoff.

Additive (sum-form) residuals for the isotropic and Gaudin-type endpoints
of the scaling hierarchy live here too, in the arrangement that makes the
rank-2 forms literal specializations of the rank-N ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import NoConvergence, PoleHit
from .frame import QFrame, default_lattice_window
from .poly import Poly, lattice_related, qshift
from .reports import ResidualReport
from .structure import PunctureData, pi_poly
from .wronskian import TwistData

POLE_GUARD = 1e-12


@dataclass(frozen=True)
class BetheProblem:
    """Puncture data, twist labels kappa (product 1), and root counts per level."""

    n_rank: int
    punctures: PunctureData
    kappa: tuple[complex, ...]
    counts: tuple[int, ...]
    frame: QFrame

    def __post_init__(self):
        object.__setattr__(self, "kappa", tuple(complex(k) for k in self.kappa))
        object.__setattr__(self, "counts", tuple(int(r) for r in self.counts))
        if self.punctures.n_rank != self.n_rank:
            raise ValueError("puncture rank does not match problem rank")
        if len(self.kappa) != self.n_rank:
            raise ValueError("need N twist labels")
        if len(self.counts) != self.n_rank - 1:
            raise ValueError("need N-1 root counts")
        if any(r < 0 for r in self.counts):
            raise ValueError("root counts must be nonnegative")
        prod = 1.0 + 0.0j
        for k in self.kappa:
            prod *= k
        if abs(prod - 1.0) > 1e-6:
            raise ValueError("twist labels must multiply to one")

    @property
    def twists(self) -> TwistData:
        return TwistData.from_kappa(self.kappa)

    def count(self, k: int) -> int:
        """Root count r_k with the convention r_0 = r_N = 0."""
        if k <= 0 or k >= self.n_rank:
            return 0
        return self.counts[k - 1]

    def site_exponent(self, k: int, level: int, s: int) -> complex:
        """q-power multiplying u in the puncture factor: cumulative weight shifted by k/2 - 3/2."""
        ell = self.punctures.punctures[s].cumulative(level)
        return self.frame.sqrt_q ** (2 * ell + k - 3)


@dataclass(frozen=True)
class BetheRoots:
    """Candidate roots u_{k,a}, one tuple per level."""

    levels: tuple[tuple[complex, ...], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "levels",
            tuple(tuple(complex(u) for u in lv) for lv in self.levels))

    def level(self, k: int) -> tuple[complex, ...]:
        """Roots at level k; empty for the boundary levels."""
        if k <= 0 or k > len(self.levels):
            return ()
        return self.levels[k - 1]

    @property
    def total(self) -> int:
        return sum(len(lv) for lv in self.levels)

    def flat(self) -> np.ndarray:
        return np.array([u for lv in self.levels for u in lv], dtype=complex)

    @staticmethod
    def from_flat(values: Sequence[complex], counts: Sequence[int]) -> "BetheRoots":
        levels = []
        pos = 0
        for r in counts:
            levels.append(tuple(values[pos:pos + r]))
            pos += r
        return BetheRoots(levels=tuple(levels))


def problem_frame(n_rank: int, punctures: PunctureData, kappa, counts,
                  sqrt_q: complex, tol=None, window: Optional[int] = None) -> BetheProblem:
    """Build a problem with the default lattice window sized to the instance."""
    from .frame import ToleranceConfig
    if window is None:
        window = default_lattice_window(punctures.total_weight, sum(counts))
    frame = QFrame(sqrt_q=sqrt_q, tol=tol or ToleranceConfig(), lattice_window=window)
    return BetheProblem(n_rank=n_rank, punctures=punctures, kappa=tuple(kappa),
                        counts=tuple(counts), frame=frame)


def _product_factors(prob: BetheProblem, roots: BetheRoots, k: int, a: int):
    """Numerator/denominator factor lists of the level-k product equation.

    Returns (num_factors, den_factors); each factor is (value, {flat_index: d/du}).
    Flat indices refer to the stacked root vector; entries without derivatives
    (puncture terms in z, twists) carry only the u_{k,a} derivative.
    """
    sq = prob.frame.sqrt_q
    offsets = [0]
    for r in prob.counts:
        offsets.append(offsets[-1] + r)
    me = offsets[k - 1] + a
    u = roots.level(k)[a]
    num, den = [], []
    for s, p in enumerate(prob.punctures.punctures):
        cn = prob.site_exponent(k, k, s)
        cd = prob.site_exponent(k, k - 1, s)
        num.append((cn * u - p.z, {me: cn}))
        den.append((cd * u - p.z, {me: cd}))
    for lv, shift_n, shift_d in ((k - 1, 1, -1), (k + 1, 1, -1)):
        others = roots.level(lv)
        base = offsets[lv - 1] if 1 <= lv <= prob.n_rank - 1 else None
        for c, v in enumerate(others):
            cn = sq ** shift_n
            cd = sq ** shift_d
            num.append((cn * u - v, {me: cn, base + c: -1.0}))
            den.append((cd * u - v, {me: cd, base + c: -1.0}))
    q = prob.frame.q
    for b, v in enumerate(roots.level(k)):
        other = offsets[k - 1] + b
        if b == a:
            num.append(((1.0 / q - 1.0) * u, {me: 1.0 / q - 1.0}))
            den.append(((q - 1.0) * u, {me: q - 1.0}))
        else:
            num.append((u / q - v, {me: 1.0 / q, other: -1.0}))
            den.append((q * u - v, {me: q, other: -1.0}))
    return num, den


def xxz_residual(prob: BetheProblem, roots: BetheRoots, form: str = "product") -> ResidualReport:
    """Residual (value + 1) of every product equation, or its Baxter-ratio twin."""
    if form not in ("product", "tq"):
        raise ValueError("form must be 'product' or 'tq'")
    if form == "tq":
        return _tq_residual(prob, roots)
    entries, labels = [], []
    for k in range(1, prob.n_rank):
        for a in range(len(roots.level(k))):
            num, den = _product_factors(prob, roots, k, a)
            val = prob.kappa[k] / prob.kappa[k - 1]
            for (nv, _), (dv, _) in zip(num, den):
                if abs(dv) <= POLE_GUARD * max(abs(nv) + abs(dv), 1.0):
                    raise PoleHit(f"denominator factor vanished at level {k}, root {a}")
                val *= nv / dv
            entries.append(val + 1.0)
            labels.append((k, a))
    return ResidualReport.from_entries(entries, labels, tol=prob.frame.tol.newton_conv)


def _tq_residual(prob: BetheProblem, roots: BetheRoots) -> ResidualReport:
    frame = prob.frame
    qs = [Poly.from_roots(roots.level(k)) for k in range(0, prob.n_rank + 1)]
    pis = [pi_poly(k, prob.punctures, frame) for k in range(1, prob.n_rank)]
    entries, labels = [], []
    for k in range(1, prob.n_rank):
        pi_p = qshift(pis[k - 1], 1, frame)
        pi_m = qshift(pis[k - 1], -1, frame)
        qkm1_p = qshift(qs[k - 1], 1, frame)
        qkm1_m = qshift(qs[k - 1], -1, frame)
        qk_pp = qshift(qs[k], 2, frame)
        qk_mm = qshift(qs[k], -2, frame)
        qkp1_p = qshift(qs[k + 1], 1, frame)
        qkp1_m = qshift(qs[k + 1], -1, frame)
        for a, u in enumerate(roots.level(k)):
            num = pi_p(u) * qkm1_p(u) * qk_mm(u) * qkp1_p(u)
            den = pi_m(u) * qkm1_m(u) * qk_pp(u) * qkp1_m(u)
            if abs(den) <= POLE_GUARD * max(abs(num) + abs(den), 1.0):
                raise PoleHit(f"Baxter denominator vanished at level {k}, root {a}")
            entries.append(prob.kappa[k] / prob.kappa[k - 1] * num / den + 1.0)
            labels.append((k, a))
    return ResidualReport.from_entries(entries, labels, tol=prob.frame.tol.newton_conv)


def sl2_q_residual(z_m: Sequence[complex], k_m: Sequence[int], zeta: complex,
                   q: complex, w: Sequence[complex]) -> ResidualReport:
    """Rank-2 anisotropic system in its explicit form with the -zeta^(-2) q^(l-k) factor."""
    z_m = [complex(z) for z in z_m]
    w = [complex(x) for x in w]
    k_total = sum(k_m)
    l_minus = len(w)
    entries = []
    for i, wi in enumerate(w):
        lhs = 1.0 + 0.0j
        for z, km in zip(z_m, k_m):
            den = wi - q * z
            if abs(den) <= POLE_GUARD * (abs(wi) + abs(q * z)):
                raise PoleHit(f"root {i} hit a shifted puncture")
            lhs *= (wi - q ** (1 - km) * z) / den
        ratio = 1.0 + 0.0j
        for j, wj in enumerate(w):
            den = wi - q * wj
            if j != i and abs(den) <= POLE_GUARD * (abs(wi) + abs(q * wj)):
                raise PoleHit(f"roots {i}, {j} are q-shift related")
            ratio *= (q * wi - wj) / den
        rhs = -zeta ** (-2) * q ** (l_minus - k_total) * ratio
        entries.append(lhs - rhs)
    return ResidualReport.from_entries(entries, labels=list(range(l_minus)), tol=1e-12)


def nondegenerate_check(prob: BetheProblem, roots: BetheRoots):
    """Finite-window scan of every forbidden q-lattice coincidence.

    Checks punctures against q^((1-k)/2)-scaled roots and every pair of roots
    across (and within) levels; returns (ok, list of violating pairs).
    """
    frame = prob.frame
    sq = frame.sqrt_q
    violations = []
    for k in range(1, prob.n_rank):
        for a, u in enumerate(roots.level(k)):
            if u == 0:
                violations.append(("zero-root", (k, a)))
                continue
            scaled = sq ** (1 - k) * u
            for s, p in enumerate(prob.punctures.punctures):
                n = lattice_related(p.z, scaled, frame)
                if n is not None:
                    violations.append(("puncture-root", (s, (k, a), n)))
    for k in range(1, prob.n_rank):
        for a, u in enumerate(roots.level(k)):
            if u == 0:
                continue
            for kp in range(1, prob.n_rank):
                for ap, up in enumerate(roots.level(kp)):
                    if (kp, ap) <= (k, a) or up == 0:
                        continue
                    n = lattice_related(u, sq ** (k - kp) * up, frame)
                    if n is not None:
                        violations.append(("root-root", ((k, a), (kp, ap), n)))
    return len(violations) == 0, violations


def _cleared_system(prob: BetheProblem, roots: BetheRoots):
    """Pole-cleared residuals F = kappa_{k+1} A + kappa_k B and the analytic Jacobian."""
    m = roots.total
    fvec = np.zeros(m, dtype=complex)
    jac = np.zeros((m, m), dtype=complex)
    row = 0
    for k in range(1, prob.n_rank):
        for a in range(len(roots.level(k))):
            num, den = _product_factors(prob, roots, k, a)
            for coeff, factors in ((prob.kappa[k], num), (prob.kappa[k - 1], den)):
                vals = [f[0] for f in factors]
                prefix = [1.0 + 0.0j]
                for v in vals:
                    prefix.append(prefix[-1] * v)
                suffix = [1.0 + 0.0j]
                for v in reversed(vals):
                    suffix.append(suffix[-1] * v)
                suffix.reverse()
                fvec[row] += coeff * prefix[-1]
                for idx, (v, derivs) in enumerate(factors):
                    outer = prefix[idx] * suffix[idx + 1]
                    for var, dv in derivs.items():
                        jac[row, var] += coeff * outer * dv
            row += 1
    return fvec, jac


def _fd_system(prob: BetheProblem, roots: BetheRoots):
    """Central finite-difference Jacobian of the cleared system (cross-check path)."""
    m = roots.total
    f0, _ = _cleared_system(prob, roots)
    jac = np.zeros((m, m), dtype=complex)
    flat = roots.flat()
    for i in range(m):
        h = 1e-7 * (1.0 + abs(flat[i]))
        for sign in (1.0, -1.0):
            bumped = flat.copy()
            bumped[i] += sign * h
            fb, _ = _cleared_system(prob, BetheRoots.from_flat(bumped, prob.counts))
            jac[:, i] += sign * fb / (2.0 * h)
    return f0, jac


def _sample_annulus(prob: BetheProblem, rng: np.random.Generator, count: int) -> np.ndarray:
    radii = []
    absq = abs(prob.frame.q)
    for s, p in enumerate(prob.punctures.punctures):
        for k in range(1, prob.n_rank):
            for level in (k - 1, k):
                ell = p.cumulative(level)
                radii.append(abs(p.z) * absq ** (-(2 * ell + k - 3) / 2.0))
    if not radii:
        radii = [1.0]
    lo, hi = min(radii) / 4.0, max(radii) * 4.0
    logs = rng.uniform(np.log(lo), np.log(hi), size=count)
    angles = rng.uniform(0.0, 2.0 * np.pi, size=count)
    return np.exp(logs) * np.exp(1j * angles)


def solve_newton(prob: BetheProblem, seed_roots: Optional[BetheRoots] = None,
                 rng_seed: int = 0, starts: int = 32, max_iter: int = 60,
                 use_fd_jacobian: bool = False):
    """Multi-start Newton iteration on the pole-cleared product equations.

    Deterministic under a fixed (prob, rng_seed): starts run in order and the
    first converged, nondegenerate solution is returned.  Raises NoConvergence
    with the best candidate attached when every start fails.
    """
    m = roots_needed = sum(prob.counts)
    if roots_needed == 0:
        empty = BetheRoots(levels=tuple(() for _ in prob.counts))
        return empty, ResidualReport(entries=(), labels=(), converged=True)
    tol = prob.frame.tol
    best: tuple[float, BetheRoots, ResidualReport] | None = None
    system = _fd_system if use_fd_jacobian else _cleared_system

    def try_start(x0: np.ndarray):
        """Run one Newton start; returns (roots, report) on full success."""
        nonlocal best
        x = x0.copy()
        for it in range(max_iter):
            # distinctness guard: nudge colliding same-level iterates apart
            pos = 0
            for r in prob.counts:
                for i in range(pos, pos + r):
                    for j in range(i + 1, pos + r):
                        sc = 1.0 + max(abs(x[i]), abs(x[j]))
                        if abs(x[i] - x[j]) < 1e-8 * sc:
                            x[j] *= 1.0 + 1e-4 * (it + 1) * (1.0 + 0.7j)
                pos += r
            cand = BetheRoots.from_flat(x, prob.counts)
            fvec, jac = system(prob, cand)
            row_scale = np.maximum(np.max(np.abs(jac), axis=1), 1e-300)
            try:
                step = np.linalg.solve(jac / row_scale[:, None], fvec / row_scale)
            except np.linalg.LinAlgError:
                return None
            if not np.all(np.isfinite(step)):
                return None
            x = x - step
            if np.max(np.abs(step) / (1.0 + np.abs(x))) < tol.root_find:
                break
        cand = BetheRoots.from_flat(x, prob.counts)
        try:
            report = xxz_residual(prob, cand)
        except PoleHit:
            return None
        ok_roots = report.max_abs <= tol.newton_conv
        nondeg, _ = nondegenerate_check(prob, cand)
        converged = ok_roots and nondeg
        graded = ResidualReport(entries=report.entries, labels=report.labels,
                                converged=converged)
        if best is None or report.max_abs < best[0]:
            best = (report.max_abs, cand, graded)
        return (cand, graded) if converged else None

    if seed_roots is not None:
        result = try_start(seed_roots.flat())
        if result is not None:
            return result
    rng = np.random.default_rng(rng_seed)
    for _ in range(starts):
        x0 = _sample_annulus(prob, rng, m)
        result = try_start(x0)
        if result is not None:
            return result
    if best is None:
        raise NoConvergence("no Newton start produced a usable iterate", best=None)
    raise NoConvergence(
        f"all {starts} starts failed (best residual {best[0]:.3e})",
        best=(best[1], best[2]))


def xxx_residual(kappa_exp: Sequence[complex], sigma: Sequence[complex],
                 weights: Sequence[Sequence[int]], upsilon: Sequence[Sequence[complex]],
                 epsilon: complex) -> ResidualReport:
    """Isotropic limit: additive-coordinate product equations, residual (value + 1).

    Puncture exponents carry the level recentering (cumulative weight plus
    k/2 - 3/2); the multiplicative twist ratio is exp(eps * (vk_{k+1} - vk_k)).
    """
    kx = [complex(v) for v in kappa_exp]
    sig = [complex(v) for v in sigma]
    ups = [tuple(complex(u) for u in lv) for lv in upsilon]
    n_rank = len(kx)
    eps = complex(epsilon)
    entries, labels = [], []
    for k in range(1, n_rank):
        level = ups[k - 1] if k - 1 < len(ups) else ()
        below = ups[k - 2] if k - 2 >= 0 and k - 2 < len(ups) else ()
        above = ups[k] if k < len(ups) else ()
        for a, u in enumerate(level):
            val = np.exp(eps * (kx[k] - kx[k - 1]))
            for s, z in enumerate(sig):
                ell_hi = sum(weights[s][:k]) + k / 2.0 - 1.5
                ell_lo = sum(weights[s][:k - 1]) + k / 2.0 - 1.5
                den = u + ell_lo * eps - z
                if abs(den) <= POLE_GUARD * (abs(u) + abs(z) + abs(eps) + 1.0):
                    raise PoleHit(f"puncture factor vanished at level {k}")
                val *= (u + ell_hi * eps - z) / den
            for grp, sgn in ((below, 0.5), (above, 0.5)):
                for v in grp:
                    den = u - v - sgn * eps
                    if abs(den) <= POLE_GUARD * (abs(u) + abs(v) + abs(eps) + 1.0):
                        raise PoleHit(f"adjacent-level factor vanished at level {k}")
                    val *= (u - v + sgn * eps) / den
            for b, v in enumerate(level):
                den = u - v + eps
                if abs(den) <= POLE_GUARD * (abs(u) + abs(v) + abs(eps) + 1.0):
                    raise PoleHit(f"same-level factor vanished at level {k}")
                val *= (u - v - eps) / den
            entries.append(val + 1.0)
            labels.append((k, a))
    return ResidualReport.from_entries(entries, labels, tol=1e-10)


def gaudin_residual(kappa_exp: Sequence[complex], sigma: Sequence[complex],
                    weights: Sequence[Sequence[int]],
                    upsilon: Sequence[Sequence[complex]]) -> ResidualReport:
    """Inhomogeneous Gaudin-type system: additive residual per root."""
    kx = [complex(v) for v in kappa_exp]
    sig = [complex(v) for v in sigma]
    ups = [tuple(complex(u) for u in lv) for lv in upsilon]
    n_rank = len(kx)
    entries, labels = [], []
    for k in range(1, n_rank):
        level = ups[k - 1] if k - 1 < len(ups) else ()
        below = ups[k - 2] if 1 <= k - 1 and k - 2 < len(ups) else ()
        above = ups[k] if k < len(ups) else ()
        for a, u in enumerate(level):
            val = kx[k] - kx[k - 1]
            for s, z in enumerate(sig):
                l_here = weights[s][k - 1]
                if l_here:
                    val += l_here / (u - z)
            for v in below:
                val += 1.0 / (u - v)
            for b, v in enumerate(level):
                if b != a:
                    val -= 2.0 / (u - v)
            for v in above:
                val += 1.0 / (u - v)
            entries.append(val)
            labels.append((k, a))
    return ResidualReport.from_entries(entries, labels, tol=1e-10)


def classical_sl2_residual(z_m: Sequence[complex], k_m: Sequence[int],
                           w: Sequence[complex]) -> ResidualReport:
    """Rank-2 Gaudin system: sum_m k_m/(z_m - w_i) - sum_{j != i} 2/(w_j - w_i)."""
    return inhomogeneous_sl2_residual(z_m, k_m, 0.0, w)


def inhomogeneous_sl2_residual(z_m: Sequence[complex], k_m: Sequence[int],
                               a: complex, w: Sequence[complex]) -> ResidualReport:
    """Rank-2 system with the irregular term: 2a + sum_m k_m/(z_m-w_i) - sum 2/(w_j-w_i).

    The sign of the 2a term is fixed by residue cancellation in the twisted
    Wronskian relation (solution w = z + 1/(2a/k) style fixtures).
    """
    entries = []
    ws = [complex(x) for x in w]
    for i, wi in enumerate(ws):
        val = 2.0 * complex(a)
        for z, km in zip(z_m, k_m):
            val += km / (complex(z) - wi)
        for j, wj in enumerate(ws):
            if j != i:
                val -= 2.0 / (wj - wi)
        entries.append(val)
    return ResidualReport.from_entries(entries, labels=list(range(len(ws))), tol=1e-10)


def classical_sln_residual(z_m: Sequence[complex], weight_vectors: Sequence[Sequence[int]],
                           root_levels: Sequence[int], w: Sequence[complex]) -> ResidualReport:
    """Rank-N Gaudin system with type-A pairings, arranged to specialize to rank 2.

    Root j sits on simple-root level root_levels[j]; pairings are
    <alpha_k, alpha_k'> = 2 delta - delta_{|k-k'|,1} and <lambda_i, alpha_k> = l_i^k.
    """
    entries = []
    ws = [complex(x) for x in w]
    for j, wj in enumerate(ws):
        cj = root_levels[j]
        val = 0.0 + 0.0j
        for z, lv in zip(z_m, weight_vectors):
            pairing = lv[cj - 1]
            if pairing:
                val += pairing / (complex(z) - wj)
        for s, wsv in enumerate(ws):
            if s == j:
                continue
            cs = root_levels[s]
            cartan = 2 if cs == cj else (-1 if abs(cs - cj) == 1 else 0)
            if cartan:
                val -= cartan / (wsv - wj)
        entries.append(val)
    return ResidualReport.from_entries(entries, labels=list(range(len(ws))), tol=1e-10)
