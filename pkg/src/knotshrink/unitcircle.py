"""Roots of a Laurent polynomial on the unit circle.

Every root xi = exp(pi i t) with t in (0, 1) is tracked through the real number
w = xi + 1/xi = 2 cos(pi t) in (-2, 2). For a palindromic g of degree 2m the
substitution g(z) = z^m * h(z + 1/z) turns unit-circle root pairs of g into real
roots of h in (-2, 2), which Sturm chains count and isolate exactly.

Roots of unity are split off by trial division with cyclotomic polynomials;
whatever remains has no root of unity among its unit-circle roots, so those t are
transcendental.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from flint import arb, ctx, fmpq

from .errors import DomainError
from .polyring import (
    IsolatingInterval,
    LaurentPoly,
    SturmChain,
    cyclotomic,
    divides,
    exact_divide,
    gcd,
    isolate_real_roots,
    normalize_primitive,
    refine_root,
    squarefree_decompose,
    totient,
)

__all__ = [
    "RootCluster",
    "chebyshev_transform",
    "unit_circle_roots",
    "cyclotomic_split",
    "cyclotomic_orders",
    "refine_t",
    "symmetric_to_w",
]

DEFAULT_T_BITS = 64


@dataclass(frozen=True)
class RootCluster:
    """One root xi = exp(pi i t), 0 < t < 1, of Lambda on the upper half circle.

    ``factor`` is the square-free factor of Lambda owning the root and
    ``multiplicity`` its exponent in Lambda. ``root_poly`` is the palindromic
    divisor of ``factor`` actually used to locate the root: the cyclotomic
    polynomial Phi_N for roots of unity, otherwise the non-cyclotomic palindromic
    part of the factor. ``w_interval`` isolates w = 2 cos(pi t) among the roots of
    ``chebyshev_transform(root_poly)``.
    """

    factor: LaurentPoly
    multiplicity: int
    root_poly: LaurentPoly
    w_interval: IsolatingInterval
    t_numeric: arb = field(compare=False)
    cyclotomic_order: int | None = None
    t_exact: Fraction | None = None

    @property
    def is_cyclotomic(self) -> bool:
        return self.cyclotomic_order is not None

    @property
    def t(self) -> float:
        return float(self.t_exact) if self.t_exact is not None else float(self.t_numeric.mid())

    @property
    def t_error(self) -> float:
        return 0.0 if self.t_exact is not None else float(self.t_numeric.rad())

    def refine(self, precision_bits: int) -> arb:
        return refine_t(self, precision_bits)

    def __repr__(self):
        tag = f"Phi_{self.cyclotomic_order}" if self.is_cyclotomic else "transcendental"
        return (f"RootCluster(t={self.t:.12g}, mult={self.multiplicity}, {tag}, "
                f"factor={self.factor})")


def chebyshev_transform(g: LaurentPoly) -> LaurentPoly:
    """Polynomial h with g(z) = z^c * h(z + 1/z), c the central exponent of g.

    For g with min_exp 0 and degree 2m this is the familiar g(z) = z^m h(z + 1/z).

    >>> from knotshrink.polyring import parse_poly
    >>> str(chebyshev_transform(parse_poly("z^4-3z^3+3z^2-3z+1")))
    'z^2-3z+1'
    """
    if g.is_zero():
        raise DomainError("Chebyshev transform of the zero polynomial")
    if g(1) == 0 or g(-1) == 0:
        raise DomainError(f"{g} has a root at z = 1 or z = -1")
    if g.coeffs != g.coeffs[::-1]:
        raise DomainError(f"{g} is not palindromic")
    return symmetric_to_w(g)


def symmetric_to_w(g: LaurentPoly) -> LaurentPoly:
    """h with g(z) = z^c h(z + 1/z) for any palindromic g of even span, no root checks."""
    cs = g.coeffs
    if cs != cs[::-1] or g.span % 2:
        raise DomainError(f"{g} is not palindromic of even span")
    m = g.span // 2
    # z^j + z^-j as a polynomial in w: T_0 = 2, T_1 = w, T_{j+1} = w T_j - T_{j-1}
    w = LaurentPoly([0, 1])
    prev, cur = LaurentPoly.constant(2), w
    h = LaurentPoly.constant(cs[m])
    for j in range(1, m + 1):
        h = h + cur.scaled(cs[m + j])
        prev, cur = cur, w * cur - prev
    return h


def cyclotomic_split(g: LaurentPoly):
    """Split off every cyclotomic divisor of a square-free ``g``.

    Returns ``(orders, remainder)`` where ``remainder`` is ``g`` divided by the
    product of Phi_N over the returned orders, in normalized primitive form.
    Candidates cover every N with phi(N) <= deg g, using phi(N) >= sqrt(N/2).
    """
    if g.is_zero():
        raise DomainError("cyclotomic split of the zero polynomial")
    rest = normalize_primitive(g)
    orders = set()
    limit = 2 * rest.span * rest.span + 2
    for N in range(1, limit + 1):
        if rest.span < 1:
            break
        if totient(N) > rest.span:
            continue
        phi = cyclotomic(N)
        while rest.span >= phi.span and divides(phi, rest):
            orders.add(N)
            rest = normalize_primitive(exact_divide(rest, phi))
    return frozenset(orders), rest


def cyclotomic_orders(p: LaurentPoly) -> frozenset:
    """All N with Phi_N dividing ``p``."""
    out = set()
    for f, _ in squarefree_decompose(p).factors:
        out |= cyclotomic_split(f)[0]
    return frozenset(out)


@lru_cache(maxsize=512)
def _chain_for(root_poly: LaurentPoly) -> SturmChain:
    return SturmChain(chebyshev_transform(root_poly))


def _t_ball(chain: SturmChain, iv: IsolatingInterval, precision_bits: int) -> arb:
    bits = precision_bits
    for _ in range(12):
        lo, hi = refine_root(chain, iv, Fraction(1, 2 ** (bits + 8)))
        with ctx.workprec(bits + 32):
            pi = arb.pi()
            if lo == hi:
                t = (arb(fmpq(lo.numerator, 2 * lo.denominator))).acos() / pi
            else:
                t_lo = arb(fmpq(hi.numerator, 2 * hi.denominator)).acos() / pi
                t_hi = arb(fmpq(lo.numerator, 2 * lo.denominator)).acos() / pi
                t = t_lo.union(t_hi)
        if t.rad() <= arb(2) ** (-precision_bits):
            return t
        bits *= 2
    return t


def refine_t(cluster: RootCluster, precision_bits: int) -> arb:
    """Ball for t = arccos(w/2)/pi with radius at most 2**-precision_bits.

    The w interval is bisected at midpoints, so a higher precision yields an
    enclosure nested in a lower-precision one.
    """
    if cluster.t_exact is not None:
        with ctx.workprec(precision_bits + 16):
            return arb(fmpq(cluster.t_exact.numerator, cluster.t_exact.denominator))
    return _t_ball(_chain_for(cluster.root_poly), cluster.w_interval, precision_bits)


def unit_circle_roots(lam: LaurentPoly, precision_bits: int = DEFAULT_T_BITS) -> list:
    """Distinct roots of ``lam`` on the upper half of the unit circle, sorted by t.

    Requires lam(1) != 0 and lam(-1) != 0, which holds for every reduced Alexander
    polynomial (lam(1) = +-1 and lam(-1) divides the odd knot determinant).
    """
    if lam.is_zero():
        raise DomainError("the zero polynomial has no isolated roots")
    if lam(1) == 0 or lam(-1) == 0:
        raise DomainError(
            f"{lam} vanishes at z = 1 or z = -1; reduced Alexander polynomials satisfy "
            "Lambda(1) = +-1 != 0 and Lambda(-1) != 0"
        )
    lam = normalize_primitive(lam)
    clusters = []
    for f, mult in squarefree_decompose(lam).factors:
        # unit-circle roots of f are exactly the common roots of f and its reciprocal
        g = gcd(f, f.mirror())
        if g.span < 1:
            continue
        orders, rest = cyclotomic_split(g)
        for N in sorted(orders):
            clusters.extend(_cyclotomic_clusters(f, mult, N))
        if rest.span >= 1:
            chain = _chain_for(rest)
            for iv in isolate_real_roots(chain.poly, -2, 2, chain):
                clusters.append(RootCluster(
                    factor=f, multiplicity=mult, root_poly=rest, w_interval=iv,
                    t_numeric=_t_ball(chain, iv, precision_bits),
                ))
    clusters.sort(key=lambda c: c.t)
    return clusters


def _cyclotomic_clusters(f: LaurentPoly, mult: int, N: int) -> list:
    phi = cyclotomic(N)
    chain = _chain_for(phi)
    intervals = isolate_real_roots(chain.poly, -2, 2, chain)
    # t = 2j/N with gcd(j, N) = 1 and 0 < 2j < N; w = 2cos(pi t) decreases in t
    ts = [Fraction(2 * j, N) for j in range(1, N) if 2 * j < N and math.gcd(j, N) == 1]
    if len(ts) != len(intervals):
        raise AssertionError(f"Phi_{N}: {len(intervals)} Chebyshev roots for {len(ts)} angles")
    out = []
    for t, iv in zip(ts, reversed(intervals)):
        out.append(RootCluster(
            factor=f, multiplicity=mult, root_poly=phi, w_interval=iv,
            t_numeric=arb(fmpq(t.numerator, t.denominator)),
            cyclotomic_order=N, t_exact=t,
        ))
    return out
