"""Mahler measures, explicit Baker constants and rational approximation of root angles."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np
from flint import arb, ctx, fmpq, fmpz_poly

from .errors import DomainError, PrecisionError
from .polyring import LaurentPoly, gcd, normalize_primitive, squarefree_decompose

__all__ = [
    "BakerBound",
    "Convergent",
    "mahler_measure",
    "mahler_measure_quadrature",
    "torsion_growth_rate",
    "torsion_order",
    "gouillon_constant",
    "baker_wustholz_constant",
    "convergents_of",
    "continued_fraction",
    "empirical_irrationality",
    "arb_to_fractions",
]

GOUILLON = "gouillon"
BAKER_WUSTHOLZ = "baker-wustholz"


@dataclass(frozen=True)
class BakerBound:
    """A Baker constant C for the pair (xi, -1) and the resulting bound nu(t) <= C + 1.

    ``C`` is the formula value rounded up to an integer, ``C_exact`` the unrounded
    real. Gouillon's constant is stated for large n, so its bound is tagged
    asymptotic.
    """

    method: str
    C: int
    C_exact: float
    degree: int
    height: int
    log_mahler: float
    asymptotic: bool

    @property
    def nu_upper(self) -> int:
        return self.C + 1

    def to_dict(self) -> dict:
        return {
            "method": self.method, "C": self.C, "C_exact": self.C_exact,
            "degree": self.degree, "height": self.height,
            "log_mahler": self.log_mahler, "nu_upper": self.nu_upper,
            "asymptotic": self.asymptotic,
        }


@dataclass(frozen=True)
class Convergent:
    """Continued-fraction convergent p/q of t with a certified bound on |t - p/q|."""

    p: int
    q: int
    error_bound: Fraction

    def __post_init__(self):
        if self.q < 1 or math.gcd(self.p, self.q) != 1:
            raise DomainError(f"convergent {self.p}/{self.q} is not in lowest terms")

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)

    def __str__(self):
        return f"{self.p}/{self.q}"


# ---------------------------------------------------------------------------
# Mahler measure

def _integral_dense(p: LaurentPoly):
    """(integer fmpz_poly, positive rational scale) with p = scale * poly * z^min_exp."""
    den = math.lcm(*(c.denominator for c in p.coeffs))
    ints = [int(c * den) for c in p.coeffs]
    return fmpz_poly(ints), Fraction(1, den)


def mahler_measure(p: LaurentPoly, precision_bits: int = 128) -> arb:
    """M(p) = |lead| * prod max(1, |alpha|) over the roots, as a certified ball."""
    if p.is_zero():
        raise DomainError("the Mahler measure of 0 is undefined")
    poly, scale = _integral_dense(p)
    with ctx.workprec(precision_bits + 32):
        m = abs(arb(int(poly[poly.degree()])))
        if poly.degree() > 0:
            for root, mult in poly.complex_roots():
                m *= abs(root).max(arb(1)) ** mult
        m *= arb(fmpq(scale.numerator, scale.denominator))
    return m


def mahler_measure_quadrature(p: LaurentPoly, dps: int = 30) -> float:
    """M(p) from exp of the mean of log|p| over the circle, by numerical quadrature.

    Used as an independent cross-check of the root product. The interval is split
    at the (approximate) unit-circle roots so that each logarithmic singularity
    sits at an endpoint.
    """
    import mpmath

    if p.is_zero():
        raise DomainError("the Mahler measure of 0 is undefined")
    fac = squarefree_decompose(p)
    cuts = {0.0, 2 * math.pi}
    # repeated roots are located only to ~eps^(1/m); the square-free factors have simple ones
    for f, _ in fac.factors:
        for r in np.roots([float(c) for c in reversed(f.coeffs)]):
            if abs(abs(r) - 1) < 1e-6:
                cuts.add(float(np.angle(r)) % (2 * math.pi))
    cuts = sorted(cuts)
    with mpmath.workdps(dps):
        parts = [([mpmath.mpf(c.numerator) / c.denominator for c in f.coeffs], e) for f, e in fac.factors]
        log_content = mpmath.log(abs(mpmath.mpf(fac.content.numerator) / fac.content.denominator))

        def log_abs(theta):
            # sum of e * log|f| keeps each factor's zero simple, so no underflow to log 0
            z = mpmath.expj(theta)
            out = log_content
            for cs, e in parts:
                acc = mpmath.mpc(0)
                for c in reversed(cs):
                    acc = acc * z + c
                out += e * mpmath.log(abs(acc))
            return out

        total = mpmath.quad(log_abs, cuts)
        return float(mpmath.exp(total / (2 * mpmath.pi)))


def torsion_growth_rate(delta: LaurentPoly, precision_bits: int = 128) -> arb:
    """Logarithmic Mahler measure m(Delta), the exponential growth rate of |tors H_1(X_n)|."""
    return mahler_measure(delta, precision_bits).log()


def torsion_order(delta: LaurentPoly, n: int) -> int:
    """|prod_{k=1}^{n-1} Delta(exp(2 pi i k/n))| as an exact integer (0 on a Betti jump)."""
    if n < 1:
        raise DomainError("n must be positive")
    if delta.is_zero():
        raise DomainError("torsion order of the zero polynomial")
    if not delta.is_integral():
        raise DomainError(f"{delta} does not have integer coefficients")
    if n == 1:
        return 1
    poly = fmpz_poly([int(c) for c in delta.coeffs])
    # Phi monic, so Res(Phi, Delta) is the product of Delta over the roots of Phi
    phi = fmpz_poly([1] * n)
    return abs(int(phi.resultant(poly)))


# ---------------------------------------------------------------------------
# Baker constants

def _prepare_root_poly(p: LaurentPoly) -> LaurentPoly:
    if p.is_zero():
        raise DomainError("Baker constant of the zero polynomial")
    q = normalize_primitive(p)
    if gcd(q, q.derivative()).span > 0:
        raise DomainError(f"{p} is not square-free")
    if q.span < 2:
        raise DomainError(f"{p} has degree {q.span} < 2; its roots are rational")
    return q


def gouillon_constant(p_xi: LaurentPoly) -> BakerBound:
    """550 pi d^2 (3.776 + 2.662 d + 0.946 d log d) max(2 pi, log M(p_xi)).

    >>> from knotshrink.polyring import parse_poly
    >>> gouillon_constant(parse_poly("2z^2-3z+2")).C
    452130
    """
    q = _prepare_root_poly(p_xi)
    d = q.span
    log_m = float(mahler_measure(q).log().mid())
    C = 550 * math.pi * d * d * (3.776 + 2.662 * d + 0.946 * d * math.log(d)) * max(2 * math.pi, log_m)
    return BakerBound(GOUILLON, math.ceil(C), C, d, q.height(), log_m, asymptotic=True)


def baker_wustholz_constant(p_xi: LaurentPoly) -> BakerBound:
    """2^40 d^8 log H, H the largest absolute coefficient of the primitive polynomial."""
    q = _prepare_root_poly(p_xi)
    d, H = q.span, q.height()
    if H < 2:
        raise DomainError(f"{p_xi} has height 1, so log H = 0 gives no bound")
    C = 2.0 ** 40 * d ** 8 * math.log(H)
    log_m = float(mahler_measure(q).log().mid())
    return BakerBound(BAKER_WUSTHOLZ, math.ceil(C), C, d, H, log_m, asymptotic=False)


# ---------------------------------------------------------------------------
# continued fractions

def continued_fraction(x: Fraction) -> list:
    """Partial quotients of a rational number."""
    x = Fraction(x)
    out = []
    while True:
        a = math.floor(x)
        out.append(a)
        x -= a
        if x == 0:
            return out
        x = 1 / x


def _arb_fraction(x: arb) -> Fraction:
    man, exp = x.man_exp()
    man, exp = int(man), int(exp)
    return Fraction(man * 2 ** exp) if exp >= 0 else Fraction(man, 2 ** -exp)


def arb_to_fractions(x: arb) -> tuple:
    """Exact rational endpoints (lo, hi) of a ball."""
    if not x.is_finite():
        raise PrecisionError("non-finite enclosure")
    # lower() and upper() round to the ambient precision; mid and rad are exact
    mid, rad = _arb_fraction(x.mid()), _arb_fraction(x.rad())
    return mid - rad, mid + rad


def _convergents_from(quotients):
    p0, q0, p1, q1 = 0, 1, 1, 0
    for a in quotients:
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        yield p1, q1


def _certified_convergents(lo: Fraction, hi: Fraction, max_q: int):
    """Convergents shared by every real in [lo, hi]; ``complete`` when max_q is reached."""
    if lo == hi:
        out = [(p, q) for p, q in _convergents_from(continued_fraction(lo)) if q <= max_q]
        return out, True
    # the last quotient of a rational expansion is ambiguous ([..., a] = [..., a-1, 1])
    a, b = continued_fraction(lo)[:-1], continued_fraction(hi)[:-1]
    prefix = []
    for x, y in zip(a, b):
        if x != y:
            break
        prefix.append(x)
    out = []
    for p, q in _convergents_from(prefix):
        if q > max_q:
            return out, True
        out.append((p, q))
    return out, False


def convergents_of(t, max_q: int, refine: Callable[[int], arb] | None = None,
                   precision_bits: int = 64) -> list:
    """Continued-fraction convergents p/q of t with q <= max_q.

    ``t`` may be a Fraction (exact), an arb ball, or a RootCluster (refined on
    demand). An arb that is too wide is re-refined through ``refine(bits)``;
    without a refinement route a PrecisionError is raised. Only quotients shared
    by both ends of the enclosure are used, so the output does not depend on the
    working precision. The trivial convergent with q = 1 below t (floor t) is
    omitted when t lies in (0, 1).
    """
    from .unitcircle import RootCluster

    if max_q < 1:
        raise DomainError("max_q must be positive")
    if isinstance(t, RootCluster):
        cluster = t
        if cluster.t_exact is not None:
            t = cluster.t_exact
        else:
            refine = cluster.refine
            t = cluster.refine(precision_bits)
    if isinstance(t, (int, Fraction)):
        lo = hi = Fraction(t)
        arb_t = None
    else:
        arb_t = t
        lo, hi = arb_to_fractions(t)
    bits = precision_bits
    while True:
        pairs, complete = _certified_convergents(lo, hi, max_q)
        if complete:
            break
        if refine is None:
            raise PrecisionError(
                f"enclosure of width {float(hi - lo):.3g} cannot certify convergents up to q = {max_q}"
            )
        bits *= 2
        if bits > 1 << 16:
            raise PrecisionError("refinement did not converge")
        arb_t = refine(bits)
        lo, hi = arb_to_fractions(arb_t)
    out = []
    for p, q in pairs:
        if q == 1 and 0 < lo and hi < 1:
            continue
        v = Fraction(p, q)
        out.append(Convergent(p, q, max(abs(lo - v), abs(hi - v))))
    return out


def empirical_irrationality(convergents, statistic: str = "max") -> float:
    """Empirical proxy 1 + log q_{k+1} / log q_k over the later half of the sequence.

    ``statistic`` chooses how the tail ratios are combined: "max" (default, the
    finite stand-in for a limsup) or "mean". The max reacts to a single large
    partial quotient, so at desk-scale q it can overshoot for numbers with
    ordinary quotients; the mean smooths that out but also hides the isolated
    huge quotients of Liouville-type numbers. Either way the result
    is a heuristic indicator for the irrationality exponent nu, never a value of
    nu: badly approximable numbers give about 2, Liouville-type numbers give large
    values.
    """
    qs = [c.q if isinstance(c, Convergent) else int(c) for c in convergents]
    qs = [q for q in qs if q >= 2]
    if len(qs) < 3:
        raise DomainError("need at least three convergents with q >= 2")
    ratios = [math.log(b) / math.log(a) for a, b in zip(qs, qs[1:])]
    tail = ratios[len(ratios) // 2:]
    if statistic == "mean":
        return 1 + sum(tail) / len(tail)
    if statistic == "max":
        return 1 + max(tail)
    raise DomainError(f"unknown statistic {statistic!r}")
