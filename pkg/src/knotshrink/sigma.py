"""Spectral gaps of the cyclic covers.

sigma_n is the smallest positive singular value of the presentation matrix with
z replaced by the n x n cyclic shift. Fourier diagonalization turns this into the
singular values of the blocks A(zeta) over the n-th roots of unity zeta, and
after Smith reduction into the values |Lambda_i(zeta)| (the quantity
``sigma_hat``). Exact zeros are always counted symbolically from cyclotomic
divisibility, never decided by a numerical threshold.

For one polynomial, |Lambda(e^{i theta})|^2 is a polynomial G in w = 2 cos theta.
Between consecutive critical points of G on [-2, 2] it is monotone, so the
minimum over the grid w_k = 2 cos(2 pi k/n) is attained next to a critical
point (or an end of the range). Only those O(1) grid points per n are evaluated,
first in floating point and then, for the near-minimal ones, in ball arithmetic.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np
from flint import arb, ctx, fmpq

from .errors import DomainError, KnotShrinkError, ResourceError
from .polyring import (
    IsolatingInterval,
    LaurentPoly,
    SturmChain,
    eval_on_circle,
    isolate_real_roots,
    refine_root,
    totient,
)
from .smith import LaurentMatrix, SmithResult, smith_normal_form, unimodular_inverse
from .unitcircle import RootCluster, cyclotomic_orders, symmetric_to_w

__all__ = [
    "SigmaPoint",
    "PresentationMatrix",
    "ScanResult",
    "DilatationResult",
    "sigma_hat",
    "sigma_matrix",
    "exponent_scan",
    "spike_probe",
    "spike_contrast",
    "dilatation_compare",
    "dilatation_constant",
    "circulant_substitution",
    "fourier_singular_values",
    "circle_minimum",
    "MAX_DIMENSION",
]

MAX_DIMENSION = 4096
DEFAULT_BITS = 192
_EPS = np.finfo(float).eps
_WINDOW = 3


@dataclass(frozen=True)
class SigmaPoint:
    """Certified enclosure of sigma_n (or sigma_hat_n) at one n."""

    n: int
    sigma: arb = field(compare=False)
    zero_count: int

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError(f"sigma enclosure {self.sigma} at n = {self.n} is not positive")

    @property
    def lo(self) -> float:
        return math.nextafter(float(self.sigma.lower()), -math.inf)

    @property
    def hi(self) -> float:
        return math.nextafter(float(self.sigma.upper()), math.inf)

    @property
    def mid(self) -> float:
        return float(self.sigma.mid())

    @property
    def exponent(self) -> float | None:
        """-log(sigma)/log(n); undefined for n = 1."""
        if self.n < 2:
            return None
        return -math.log(self.mid) / math.log(self.n)

    def to_row(self) -> tuple:
        return (self.n, self.lo, self.hi, self.exponent, self.zero_count)

    def to_dict(self) -> dict:
        return {"n": self.n, "sigma_lo": self.lo, "sigma_hi": self.hi,
                "exponent": self.exponent, "zero_count": self.zero_count}


@dataclass(frozen=True)
class PresentationMatrix:
    """A Laurent matrix representing d_2 of the infinite cyclic cover."""

    matrix: LaurentMatrix

    def __post_init__(self):
        if self.matrix.is_zero():
            raise DomainError("the presentation matrix must be nonzero")

    @cached_property
    def smith(self) -> SmithResult:
        return smith_normal_form(self.matrix)

    @property
    def shape(self) -> tuple:
        return self.matrix.shape


def _as_presentation(A) -> PresentationMatrix:
    return A if isinstance(A, PresentationMatrix) else PresentationMatrix(A)


# ---------------------------------------------------------------------------
# single-polynomial profile

@dataclass(frozen=True)
class _Profile:
    lam: LaurentPoly
    coeffs: np.ndarray          # descending, for np.polyval
    err_scale: float            # float evaluation error bound
    orders: frozenset
    G: LaurentPoly              # |lam|^2 on the circle as a polynomial in w
    critical: tuple             # isolating intervals in w of critical points of G
    critical_fracs: tuple       # (lo, hi) of acos(w/2) / (2 pi) per critical point


def _isolate_anywhere(p: LaurentPoly, lo: Fraction, hi: Fraction) -> tuple:
    chain = SturmChain(p)
    step = Fraction(1, 64)
    while chain.value(lo) == 0:
        lo -= step
    while chain.value(hi) == 0:
        hi += step
    return chain, isolate_real_roots(p, lo, hi, chain)


def _frac_of_w(w: float) -> float:
    return math.acos(max(-1.0, min(1.0, w / 2))) / (2 * math.pi)


@lru_cache(maxsize=256)
def _profile(lam: LaurentPoly) -> _Profile:
    if lam.is_zero():
        raise DomainError("sigma of the zero polynomial")
    coeffs = np.array([float(c) for c in reversed(lam.coeffs)])
    deg = lam.span
    err = 4 * (2 * deg + 4) * _EPS * float(np.abs(coeffs).sum())
    G = symmetric_to_w(lam * lam.mirror())
    critical, fracs = [], []
    dG = G.derivative()
    if not dG.is_zero():
        chain, ivs = _isolate_anywhere(dG, Fraction(-2), Fraction(2))
        for iv in ivs:
            if iv.hi <= -2 or iv.lo >= 2:
                continue
            lo, hi = refine_root(chain, iv, Fraction(1, 2 ** 60))
            if lo == hi:
                lo, hi = lo - Fraction(1, 2 ** 61), hi + Fraction(1, 2 ** 61)
            critical.append(IsolatingInterval(lo, hi))
            fracs.append((_frac_of_w(float(hi)), _frac_of_w(float(lo))))
    return _Profile(lam, coeffs, err, cyclotomic_orders(lam), G, tuple(critical), tuple(fracs))


def _zero_count(orders: Iterable[int], n: int) -> int:
    return sum(totient(N) for N in orders if n % N == 0)


def _candidates(prof: _Profile, n: int) -> list:
    half = n // 2
    ks = set(range(0, min(_WINDOW, half) + 1))
    ks.update(range(max(0, half - _WINDOW), half + 1))
    for f_lo, f_hi in prof.critical_fracs:
        a = math.floor(n * f_lo) - _WINDOW
        b = math.ceil(n * f_hi) + _WINDOW
        ks.update(range(max(a, 0), min(b, half) + 1))
    # zeta_k is an exact zero iff its order n/gcd(n, k) is a cyclotomic order of lam
    return sorted(k for k in ks if n // math.gcd(n, k) not in prof.orders)


def _min_balls(prof: _Profile, n: int, precision_bits: int) -> list:
    ks = _candidates(prof, n)
    if not ks:
        return []
    karr = np.array(ks, dtype=float)
    vals = np.abs(np.polyval(prof.coeffs, np.exp(2j * np.pi * karr / n)))
    cutoff = vals.min() + 2 * prof.err_scale
    near = [k for k, v in zip(ks, vals) if v - prof.err_scale <= cutoff]
    balls = []
    for k in near:
        b = eval_on_circle(prof.lam, k, n, precision_bits)
        if not b > 0:
            raise AssertionError(f"|{prof.lam}| at exp(2 pi i {k}/{n}) not separated from 0")
        balls.append(b)
    return balls


def _min_enclosure(balls: Sequence[arb], precision_bits: int) -> arb:
    # [min of lower ends, min of upper ends] contains the minimum of the true values;
    # lower() and upper() round to the ambient precision, so raise it first
    with ctx.workprec(precision_bits + 32):
        lo = min(b.lower() for b in balls)
        hi = min(b.upper() for b in balls)
        return lo.union(hi)


def _as_list(lams) -> list:
    if isinstance(lams, LaurentPoly):
        return [lams]
    return list(lams)


def sigma_hat(lams, n: int, precision_bits: int = DEFAULT_BITS) -> SigmaPoint:
    """Smallest positive value of |Lambda_i(zeta)| over all i and all n-th roots zeta."""
    if n < 1:
        raise DomainError("n must be positive")
    balls, zeros = [], 0
    for lam in _as_list(lams):
        # a shift by z^m leaves |lam| on the circle unchanged; scaling does not
        prof = _profile(lam.shifted(-lam.min_exp))
        zeros += _zero_count(prof.orders, n)
        balls.extend(_min_balls(prof, n, precision_bits))
    if not balls:
        raise DomainError(f"every value vanishes at n = {n}")
    return SigmaPoint(n, _min_enclosure(balls, precision_bits), zeros)


def circle_minimum(lam: LaurentPoly, precision_bits: int = 128) -> arb:
    """Certified enclosure of min |lam(z)| over |z| = 1."""
    prof = _profile(lam.shifted(-lam.min_exp))
    G = prof.G.fmpq_coeffs()
    with ctx.workprec(precision_bits + 32):
        def g_at(x):
            acc = arb(0)
            for c in reversed(G):
                acc = acc * x + c
            return acc.nonnegative_part()

        vals = [g_at(arb(-2)), g_at(arb(2))]
        for iv in prof.critical:
            lo = max(iv.lo, Fraction(-2))
            hi = min(iv.hi, Fraction(2))
            a = arb(fmpq(lo.numerator, lo.denominator))
            b = arb(fmpq(hi.numerator, hi.denominator))
            vals.append(g_at(a.union(b)))
        return _min_enclosure(vals, precision_bits).nonnegative_part().sqrt()


# ---------------------------------------------------------------------------
# matrix route

def fourier_singular_values(A: LaurentMatrix, n: int) -> np.ndarray:
    """Singular values of every Fourier block A(exp(2 pi i k/n)), shape (n, min(r, s))."""
    zs = np.exp(2j * np.pi * np.arange(n) / n)
    return np.linalg.svd(A.evaluate(zs), compute_uv=False)


def circulant_substitution(A: LaurentMatrix, n: int) -> np.ndarray:
    """The real (n r) x (n s) matrix with z replaced by the cyclic shift P (z^-1 by P^T)."""
    r, s = A.shape
    _check_cap(A, n)
    P = np.roll(np.eye(n), 1, axis=0)
    powers = [np.linalg.matrix_power(P, e) for e in range(n)]
    out = np.zeros((n * r, n * s))
    for i in range(r):
        for j in range(s):
            block = np.zeros((n, n))
            for e, c in A[i, j].terms().items():
                block += float(c) * powers[e % n]
            out[i * n:(i + 1) * n, j * n:(j + 1) * n] = block
    return out


def _check_cap(A: LaurentMatrix, n: int, cap: int = MAX_DIMENSION):
    r, s = A.shape
    if n * max(r, s) > cap:
        raise ResourceError(f"n * max(rows, cols) = {n * max(r, s)} exceeds the cap {cap}")


def _matrix_zero_count(smith: SmithResult, shape: tuple, n: int) -> int:
    r, s = shape
    count = n * (min(r, s) - smith.rank)
    for a in smith.invariant_factors:
        count += _zero_count(cyclotomic_orders(a), n)
    return count


def sigma_matrix(A, n: int, numeric_tolerance: float = 1e-9, zero_count: int | None = None,
                 cap: int = MAX_DIMENSION) -> SigmaPoint:
    """Smallest positive singular value of A with z replaced by the n x n cyclic shift.

    The zero count comes from the Smith factors of A (or the caller). The
    enclosure radius is a backward-error bound for the SVD plus
    ``numeric_tolerance`` relative to the value; it never decides which values
    are zero.
    """
    P = _as_presentation(A)
    M = P.matrix
    if n < 1:
        raise DomainError("n must be positive")
    _check_cap(M, n, cap)
    if zero_count is None:
        try:
            zero_count = _matrix_zero_count(P.smith, M.shape, n)
        except KnotShrinkError as exc:
            raise DomainError("Smith factors unavailable; pass zero_count explicitly") from exc
    svals = np.sort(fourier_singular_values(M, n).ravel())
    if zero_count >= svals.size:
        raise DomainError(f"all {svals.size} singular values are zero at n = {n}")
    value = float(svals[zero_count])
    norm_bound = float(np.sqrt((M.max_abs_coefficient_sum() ** 2).sum()))
    rad = 8 * max(M.shape) * _EPS * norm_bound + numeric_tolerance * value
    return SigmaPoint(n, arb(value, rad), zero_count)


# ---------------------------------------------------------------------------
# scans

@dataclass(frozen=True)
class ScanResult:
    points: tuple
    running_min: tuple
    running_max: tuple

    def exponents(self) -> list:
        return [p.exponent for p in self.points]

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)


def exponent_scan(lams, n_range: Iterable[int], precision_bits: int = DEFAULT_BITS) -> ScanResult:
    """sigma_hat for every n in ``n_range`` with running min/max of the exponent.

    Each n is independent; the result is assembled in input order.
    """
    lams = _as_list(lams)
    ns = list(n_range)
    if not ns:
        raise DomainError("empty n range")
    points, rmin, rmax = [], [], []
    lo, hi = math.inf, -math.inf
    for n in ns:
        pt = sigma_hat(lams, n, precision_bits)
        e = pt.exponent
        if e is not None:
            lo, hi = min(lo, e), max(hi, e)
        points.append(pt)
        rmin.append(lo)
        rmax.append(hi)
    return ScanResult(tuple(points), tuple(rmin), tuple(rmax))


def spike_probe(lam: LaurentPoly, cluster: RootCluster, convergents,
                precision_bits: int = DEFAULT_BITS) -> list:
    """sigma_hat at n = 2q for each convergent denominator q of the cluster's angle.

    Near t ~ p/q the root of unity exp(pi i p/q) is a 2q-th root of unity close to
    the root xi, which is where sigma_hat dips.
    """
    if cluster.is_cyclotomic:
        raise DomainError("spike probing needs a cluster that is not a root of unity")
    return [sigma_hat([lam], 2 * c.q, precision_bits) for c in convergents]


def spike_contrast(lams, spikes: Sequence[SigmaPoint], neighbors: int = 10,
                   precision_bits: int = DEFAULT_BITS) -> list:
    """For each spike, (spike exponent, median exponent of the nearest generic n).

    Generic means n >= 2 and not itself one of the spike locations.
    """
    lams = _as_list(lams)
    spike_ns = {p.n for p in spikes}
    out = []
    for p in spikes:
        chosen, d = [], 1
        while len(chosen) < neighbors:
            for m in (p.n - d, p.n + d):
                if m >= 2 and m not in spike_ns and len(chosen) < neighbors:
                    chosen.append(m)
            d += 1
        med = statistics.median(sigma_hat(lams, m, precision_bits).exponent for m in chosen)
        out.append((p.exponent, med))
    return out


# ---------------------------------------------------------------------------
# dilatational equivalence

@dataclass(frozen=True)
class DilatationResult:
    ns: tuple
    ratios: tuple

    @property
    def max_ratio(self) -> float:
        return max(self.ratios)

    @property
    def min_ratio(self) -> float:
        return min(self.ratios)

    @property
    def spread(self) -> float:
        return self.max_ratio / self.min_ratio


def dilatation_compare(A, n_range: Iterable[int], precision_bits: int = DEFAULT_BITS) -> DilatationResult:
    """Ratios sigma_n(A) / sigma_hat_n(invariant factors of A) over ``n_range``."""
    P = _as_presentation(A)
    factors = list(P.smith.invariant_factors)
    ns, ratios = [], []
    for n in n_range:
        s = sigma_matrix(P, n)
        h = sigma_hat(factors, n, precision_bits)
        ns.append(n)
        ratios.append(s.mid / h.mid)
    return DilatationResult(tuple(ns), tuple(ratios))


def _coefficient_norm(M: LaurentMatrix) -> float:
    return float(np.sqrt((M.max_abs_coefficient_sum() ** 2).sum()))


def dilatation_constant(U: LaurentMatrix, V: LaurentMatrix) -> float:
    """C with C^-1 sigma_n(D) <= sigma_n(U D V) <= C sigma_n(D) for every D and n.

    Operator norms on the circle are bounded by the Frobenius norm of the
    entrywise absolute coefficient sums.
    """
    Ui, Vi = unimodular_inverse(U), unimodular_inverse(V)
    return max(_coefficient_norm(U) * _coefficient_norm(V),
               _coefficient_norm(Ui) * _coefficient_norm(Vi))
