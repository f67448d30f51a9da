import math
from fractions import Fraction

import mpmath
import pytest
import sympy
from flint import arb, ctx

from knotshrink.errors import DomainError, PrecisionError
from knotshrink.diophantine import (
    Convergent, arb_to_fractions, baker_wustholz_constant, continued_fraction, convergents_of,
    empirical_irrationality, gouillon_constant, mahler_measure, mahler_measure_quadrature,
    torsion_growth_rate, torsion_order,
)
from knotshrink.polyring import parse_poly
from knotshrink.unitcircle import unit_circle_roots

from oracles import Z, to_sympy

P = parse_poly


def mahler_reference(p, dps=40):
    with mpmath.workdps(dps):
        cs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(p.coeffs)]
        roots = mpmath.polyroots(cs, maxsteps=200, extraprec=200) if len(cs) > 1 else []
        out = abs(cs[0])
        for r in roots:
            out *= max(1, abs(r))
        return out


def best_approximation_records(t, max_q):
    """Denominators q where min_p |q t - p| sets a new record (best approximations of the second kind)."""
    out, best = [], None
    with mpmath.workdps(40):
        for q in range(1, max_q + 1):
            d = abs(q * t - mpmath.nint(q * t))
            if best is None or d < best:
                best = d
                out.append(q)
    return out


class TestMahler:
    @pytest.mark.parametrize("text, value", [("z^2-z+1", 1), ("2z^2-3z+2", 2), ("3z-1", 3),
                                             ("z^-2+4", 4), ("7", 7)])
    def test_exact_values(self, text, value):
        m = mahler_measure(P(text))
        assert m.contains(value)
        assert float(m.rad()) < 1e-30

    def test_golden(self):
        m = mahler_measure(P("z^2-3z+1"))
        assert abs(float(m.mid()) - (3 + 5 ** 0.5) / 2) < 1e-15

    def test_lehmer(self):
        lehmer = P("z^10+z^9-z^7-z^6-z^5-z^4-z^3+z+1")
        assert abs(float(mahler_measure(lehmer).mid()) - 1.17628081825991750654) < 1e-15

    @pytest.mark.parametrize("text", ["z^4-5z^3+7z^2-5z+1", "5z^4-3z^2+1/2", "(z^2-z+1)(z-3)^2"])
    def test_against_mpmath_roots(self, text):
        p = P(text)
        assert abs(float(mahler_measure(p).mid()) - float(mahler_reference(p))) < 1e-12

    def test_quadrature_agrees(self):
        for text in ["(z^2-z+1)^3", "2z^2-3z+2", "z^6-3z^5+6z^4-7z^3+6z^2-3z+1", "z^2-3z+1"]:
            p = P(text)
            assert abs(float(mahler_measure(p).mid()) - mahler_measure_quadrature(p)) < 1e-8

    def test_zero(self):
        with pytest.raises(DomainError):
            mahler_measure(P("0"))
        with pytest.raises(DomainError):
            mahler_measure_quadrature(P("0"))


class TestTorsion:
    @pytest.mark.parametrize("n", [1, 2, 3, 5, 7, 12, 25])
    def test_resultant_matches_sympy(self, n):
        delta = P("z^2-3z+1")
        phi = sum(Z**i for i in range(n))
        ref = abs(int(sympy.resultant(to_sympy(delta).as_expr(), phi, Z))) if n > 1 else 1
        assert torsion_order(delta, n) == ref

    def test_trefoil(self):
        delta = P("z^2-z+1")
        assert [torsion_order(delta, n) for n in (2, 3, 4, 5, 6)] == [3, 4, 3, 1, 0]

    def test_growth(self):
        delta = P("z^2-3z+1")
        rate = math.log(torsion_order(delta, 500)) / 500
        target = float(torsion_growth_rate(delta).mid())
        assert abs(rate - target) / target < 0.01

    def test_domain(self):
        with pytest.raises(DomainError):
            torsion_order(P("1/2z+1"), 3)
        with pytest.raises(DomainError):
            torsion_order(P("z+1"), 0)


class TestBaker:
    def test_gouillon_value(self):
        b = gouillon_constant(P("2z^2-3z+2"))
        assert b.C == 452130
        assert b.nu_upper == 452131
        assert abs(b.C_exact - 452129.653) < 1e-3
        assert b.asymptotic and b.degree == 2 and b.height == 3

    def test_gouillon_formula(self):
        # log M = log 2 < 2 pi, so the max picks 2 pi
        d = 2
        expected = 550 * math.pi * d * d * (3.776 + 2.662 * d + 0.946 * d * math.log(d)) * 2 * math.pi
        assert gouillon_constant(P("2z^2-3z+2")).C_exact == pytest.approx(expected, rel=1e-12)

    def test_bw_value(self):
        b = baker_wustholz_constant(P("2z^2-3z+2"))
        assert b.C == math.ceil(2.0 ** 40 * 2 ** 8 * math.log(3)) == 309231868366897
        assert not b.asymptotic

    @pytest.mark.parametrize("text", ["z-3", "(2z^2-3z+2)^2", "0"])
    def test_rejects(self, text):
        with pytest.raises(DomainError):
            gouillon_constant(P(text))

    def test_bw_height_one(self):
        with pytest.raises(DomainError):
            baker_wustholz_constant(P("z^2-z+1"))

    def test_to_dict(self):
        d = gouillon_constant(P("2z^2-3z+2")).to_dict()
        assert d["nu_upper"] == d["C"] + 1 and d["method"] == "gouillon"


class TestContinuedFractions:
    def test_rational(self):
        assert continued_fraction(Fraction(415, 93)) == [4, 2, 6, 7]
        convs = convergents_of(Fraction(415, 93), 100)
        assert [str(c) for c in convs][-1] == "415/93"
        assert convs[-1].error_bound == 0

    def test_quadratic_irrational(self):
        with ctx.workprec(200):
            phi = (1 + arb(5).sqrt()) / 2
        convs = convergents_of(phi, 1000)
        assert [c.q for c in convs][:6] == [1, 1, 2, 3, 5, 8]
        assert [c.q for c in convs][-1] == 987
        assert all(c.p == d.q for c, d in zip(convs[1:], convs[2:]))

    def test_known_angle(self):
        (c,) = unit_circle_roots(P("2z^2-3z+2"))
        convs = convergents_of(c, 150000)
        assert [str(x) for x in convs] == [
            "1/4", "2/9", "3/13", "23/100", "26/113", "49/213", "124/539", "173/752",
            "989/4299", "1162/5051", "32363/140676",
        ]

    def test_best_approximation_oracle(self):
        (c,) = unit_circle_roots(P("2z^2-3z+2"))
        with mpmath.workdps(40):
            t = mpmath.acos(mpmath.mpf(3) / 4) / mpmath.pi
        records = best_approximation_records(t, 3000)
        qs = [x.q for x in convergents_of(c, 3000)]
        assert qs == [q for q in records if q > 1]

    def test_error_bounds_certified(self):
        (c,) = unit_circle_roots(P("2z^2-3z+2"))
        with mpmath.workdps(60):
            t = mpmath.acos(mpmath.mpf(3) / 4) / mpmath.pi
            for x in convergents_of(c, 10**6):
                gap = abs(t - mpmath.mpf(x.p) / x.q)
                assert gap <= mpmath.mpf(x.error_bound.numerator) / x.error_bound.denominator * (1 + 1e-30)
                assert gap < 1 / mpmath.mpf(x.q) ** 2

    def test_precision_error_without_refinement(self):
        with ctx.workprec(30):
            rough = arb(2).sqrt()
        with pytest.raises(PrecisionError):
            convergents_of(rough, 10**12)

    def test_refinement_route(self):
        def sqrt2(bits):
            with ctx.workprec(bits):
                return arb(2).sqrt()

        with ctx.workprec(30):
            rough = arb(2).sqrt()
        convs = convergents_of(rough, 10**12, refine=sqrt2)
        assert convs[-1].q > 10**11

    def test_arb_to_fractions(self):
        assert arb_to_fractions(arb(1) / 2) == (Fraction(1, 2), Fraction(1, 2))
        with ctx.workprec(300):
            x = arb(2).sqrt()
        lo, hi = arb_to_fractions(x)
        assert lo * lo < 2 < hi * hi
        assert hi - lo < Fraction(1, 2**290)

    def test_convergent_validation(self):
        with pytest.raises(DomainError):
            Convergent(2, 4, Fraction(0))
        with pytest.raises(DomainError):
            convergents_of(Fraction(1, 3), 0)


class TestEmpiricalIrrationality:
    def test_golden_ratio_near_two(self):
        with ctx.workprec(400):
            phi = (1 + arb(5).sqrt()) / 2
        est = empirical_irrationality(convergents_of(phi, 10**20))
        assert 1.9 < est < 2.2

    def test_liouville_type_large(self):
        # partial quotients a_{k+1} = q_k^3 force q_{k+1} ~ q_k^4
        quotients, q0, q1 = [0, 2], 1, 2
        for _ in range(5):
            a = q1 ** 3
            quotients.append(a)
            q0, q1 = q1, a * q1 + q0
        x = Fraction(0)
        for a in reversed(quotients[1:]):
            x = 1 / (a + x)
        est = empirical_irrationality(convergents_of(x, q1))
        assert 4.9 < est < 5.1

    def test_five_two_mean_near_two(self):
        (c,) = unit_circle_roots(P("2z^2-3z+2"))
        convs = convergents_of(c, 10**6)
        assert abs(empirical_irrationality(convs, "mean") - 2) <= 0.3

    def test_statistics(self):
        qs = [2, 5, 13, 34, 89, 233]
        assert empirical_irrationality(qs, "mean") <= empirical_irrationality(qs, "max")
        with pytest.raises(DomainError):
            empirical_irrationality(qs, "median")
        with pytest.raises(DomainError):
            empirical_irrationality([2, 3])
