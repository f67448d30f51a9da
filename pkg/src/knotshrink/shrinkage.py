"""Shrinkage rates and types from the unit-circle roots of the reduced Alexander polynomial.

With clusters xi_j of multiplicity mu_j and irrationality exponents nu_j of the
angles t_j, the lower rate is max mu_j and the upper rate is max nu_j mu_j.
Roots of unity have nu = 1; any other unit-circle root has 2 <= nu <= C + 1 for a
Baker constant C. The true nu_j are unknown in general, so a verdict that would
need them is reported as undecided rather than guessed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .diophantine import BakerBound, baker_wustholz_constant, gouillon_constant
from .errors import DomainError, KnotShrinkError
from .polyring import LaurentPoly, normalize_primitive
from .unitcircle import DEFAULT_T_BITS, RootCluster, unit_circle_roots

__all__ = [
    "INFINITY_PLUS",
    "ClusterBounds",
    "Verdict",
    "ShrinkageReport",
    "lower_rate",
    "upper_rate_bounds",
    "baker_bound_for",
    "classify",
    "novikov_shubin",
    "parse_verdict_label",
]


class _InfinityPlus:
    """The Novikov-Shubin value of type I knots: infinity with positive spectral gap."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY_PLUS"

    def __str__(self):
        return "∞⁺"

    def to_json(self):
        return "inf+"


INFINITY_PLUS = _InfinityPlus()

TYPE_I, TYPE_II, TYPE_III, UNDECIDED = "I", "II", "III", "Undecided"


@dataclass(frozen=True)
class Verdict:
    """Shrinkage type. ``mu`` is the lower rate (absent for type I)."""

    kind: str
    mu: int = 0
    reason: str = field(default="", compare=False)

    @property
    def label(self) -> str:
        return self.kind if self.kind == TYPE_I else f"{self.kind}_{self.mu}"

    def __str__(self):
        return self.label


_SUBSCRIPTS = str.maketrans("₀₁₂₃₄₅₆₇₈₉", "0123456789")


def parse_verdict_label(text: str) -> Verdict:
    """Read "I", "II_3", "II3", "III₁" or "Undecided_2"."""
    s = text.strip().translate(_SUBSCRIPTS).replace("_", "")
    for kind in (UNDECIDED, TYPE_III, TYPE_II, TYPE_I):
        if s.startswith(kind):
            rest = s[len(kind):]
            if kind == TYPE_I and not rest:
                return Verdict(TYPE_I)
            if rest.isdigit() and kind != TYPE_I:
                return Verdict(kind, int(rest))
    raise DomainError(f"unrecognized shrinkage type {text!r}")


@dataclass(frozen=True)
class ClusterBounds:
    """A cluster with the bounds nu_lower <= nu <= nu_upper on its angle's exponent."""

    cluster: RootCluster
    baker: BakerBound | None
    nu_lower: int
    nu_upper: int

    @property
    def total_lower(self) -> int:
        return self.nu_lower * self.cluster.multiplicity

    @property
    def total_upper(self) -> int:
        return self.nu_upper * self.cluster.multiplicity

    def to_dict(self) -> dict:
        c = self.cluster
        out = {
            "factor": str(c.factor),
            "multiplicity": c.multiplicity,
            "t": c.t,
            "t_error": c.t_error,
            "nu_lower": self.nu_lower,
            "nu_upper": self.nu_upper,
        }
        if c.cyclotomic_order is not None:
            out["cyclotomic_order"] = c.cyclotomic_order
            out["t_exact"] = str(c.t_exact)
        if self.baker is not None:
            out["baker"] = self.baker.to_dict()
        return out


@dataclass(frozen=True)
class ShrinkageReport:
    lam: LaurentPoly
    mu_lower: int
    mu_upper_lower_bound: int
    mu_upper_upper_bound: int
    verdict: Verdict
    clusters: tuple = ()
    witness: ClusterBounds | None = field(default=None, compare=False)

    @property
    def novikov_shubin(self):
        return novikov_shubin(self)

    @property
    def flip_condition(self) -> str | None:
        """For undecided reports: the exponent threshold that would force type III."""
        if self.witness is None:
            return None
        bound = Fraction(self.mu_lower, self.witness.cluster.multiplicity)
        return f"nu(t={self.witness.cluster.t:.12g}) > {bound}"

    def to_dict(self) -> dict:
        ns = self.novikov_shubin
        out = {
            "lambda": str(self.lam),
            "verdict": self.verdict.label,
            "kind": self.verdict.kind,
            "mu_lower": self.mu_lower,
            "mu_upper_lower_bound": self.mu_upper_lower_bound,
            "mu_upper_upper_bound": self.mu_upper_upper_bound,
            "novikov_shubin": ns.to_json() if ns is INFINITY_PLUS else str(ns),
            "clusters": [cb.to_dict() for cb in self.clusters],
        }
        if self.verdict.reason:
            out["reason"] = self.verdict.reason
        if self.witness is not None:
            out["flip_condition"] = self.flip_condition
        return out


def lower_rate(clusters: Sequence[RootCluster]) -> int:
    return max((c.multiplicity for c in clusters), default=0)


def _baker_lookup(baker, i, cluster):
    if baker is None:
        return None
    if isinstance(baker, Mapping):
        return baker.get(i, baker.get(cluster))
    return baker[i]


def upper_rate_bounds(clusters: Sequence[RootCluster], baker=None) -> tuple:
    """(lower, upper) bounds on the upper shrinkage rate.

    ``baker`` gives a BakerBound per non-cyclotomic cluster, as a sequence
    aligned with ``clusters`` or a mapping keyed by index or cluster.
    """
    lo, hi = 0, 0
    for i, c in enumerate(clusters):
        if c.is_cyclotomic:
            lo, hi = max(lo, c.multiplicity), max(hi, c.multiplicity)
            continue
        b = _baker_lookup(baker, i, c)
        if b is None:
            raise DomainError(f"no Baker bound supplied for the cluster at t = {c.t:.12g}")
        lo = max(lo, 2 * c.multiplicity)
        hi = max(hi, b.nu_upper * c.multiplicity)
    return lo, hi


def baker_bound_for(root_poly: LaurentPoly, method: str = "gouillon") -> BakerBound:
    """Gouillon's constant when it applies, otherwise Baker-Wustholz."""
    if method in ("bw", "baker-wustholz"):
        return baker_wustholz_constant(root_poly)
    try:
        return gouillon_constant(root_poly)
    except KnotShrinkError:
        return baker_wustholz_constant(root_poly)


def classify(lam: LaurentPoly, baker_method: str = "gouillon",
             precision_bits: int = DEFAULT_T_BITS) -> ShrinkageReport:
    """Shrinkage type of a knot with reduced Alexander polynomial ``lam``.

    >>> from knotshrink.polyring import parse_poly
    >>> classify(parse_poly("(z^2-z+1)^3")).verdict.label
    'II_3'
    """
    if lam.is_zero():
        raise DomainError("Lambda must be nonzero")
    lam = normalize_primitive(lam)
    clusters = unit_circle_roots(lam, precision_bits)
    cache = {}
    bounded = []
    for c in clusters:
        if c.is_cyclotomic:
            bounded.append(ClusterBounds(c, None, 1, 1))
            continue
        if c.root_poly not in cache:
            cache[c.root_poly] = baker_bound_for(c.root_poly, baker_method)
        b = cache[c.root_poly]
        bounded.append(ClusterBounds(c, b, 2, b.nu_upper))

    mu = lower_rate(clusters)
    up_lo, up_hi = upper_rate_bounds(clusters, [cb.baker for cb in bounded])
    witness = None
    if not clusters:
        verdict = Verdict(TYPE_I)
    elif all(c.is_cyclotomic for c in clusters):
        verdict = Verdict(TYPE_II, mu)
    elif any(2 * cb.cluster.multiplicity > mu for cb in bounded if not cb.cluster.is_cyclotomic):
        verdict = Verdict(TYPE_III, mu)
    else:
        witness = max((cb for cb in bounded if not cb.cluster.is_cyclotomic),
                      key=lambda cb: cb.cluster.multiplicity)
        verdict = Verdict(UNDECIDED, mu, reason=(
            f"the root at t = {witness.cluster.t:.12g} is not a root of unity, but with only "
            f"nu >= 2 known its total multiplicity {2 * witness.cluster.multiplicity} does not "
            f"exceed the lower rate {mu}; the type is III iff nu > "
            f"{Fraction(mu, witness.cluster.multiplicity)} for some such root"
        ))
    return ShrinkageReport(lam, mu, up_lo, up_hi, verdict, tuple(bounded), witness)


def novikov_shubin(report: ShrinkageReport):
    """Reciprocal of the lower rate, or INFINITY_PLUS for type I."""
    if report.verdict.kind == TYPE_I:
        return INFINITY_PLUS
    return Fraction(1, report.mu_lower)
