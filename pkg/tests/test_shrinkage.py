from fractions import Fraction

import pytest

from knotshrink.diophantine import gouillon_constant
from knotshrink.errors import DomainError
from knotshrink.polyring import parse_poly
from knotshrink.shrinkage import (
    INFINITY_PLUS, Verdict, classify, lower_rate, novikov_shubin, parse_verdict_label, upper_rate_bounds,
)
from knotshrink.unitcircle import unit_circle_roots

P = parse_poly


class TestVerdicts:
    @pytest.mark.parametrize("text, kind, mu", [
        ("I", "I", 0), ("II_3", "II", 3), ("II3", "II", 3), ("III₁", "III", 1),
        ("Undecided_2", "Undecided", 2), (" II₂ ", "II", 2),
    ])
    def test_parse(self, text, kind, mu):
        v = parse_verdict_label(text)
        assert (v.kind, v.mu) == (kind, mu)

    @pytest.mark.parametrize("text", ["IV", "II", "I_2", "type I", ""])
    def test_parse_rejects(self, text):
        with pytest.raises(DomainError):
            parse_verdict_label(text)

    def test_labels_and_equality(self):
        assert Verdict("I").label == "I"
        assert str(Verdict("III", 2)) == "III_2"
        assert Verdict("II", 1, reason="x") == Verdict("II", 1)

    def test_infinity_plus(self):
        assert str(INFINITY_PLUS) == "∞⁺"
        assert INFINITY_PLUS.to_json() == "inf+"
        assert type(INFINITY_PLUS)() is INFINITY_PLUS


class TestClassify:
    @pytest.mark.parametrize("text, label", [
        ("z^2-3z+1", "I"),
        ("z^2-z+1", "II_1"),
        ("(z^2-z+1)^3", "II_3"),
        ("2z^2-3z+2", "III_1"),
        ("(2z^2-3z+2)^2", "III_2"),
        ("(z^2-z+1)^2(2z^2-3z+2)", "Undecided_2"),
        ("(z^2-z+1)(2z^2-3z+2)", "III_1"),
        ("(z^2-z+1)^3(2z^2-3z+2)^2", "III_3"),
        ("z^4-5z^3+7z^2-5z+1", "III_1"),
        ("1", "I"),
    ])
    def test_labels(self, text, label):
        assert classify(P(text)).verdict.label == label

    def test_type_iii_bounds(self):
        r = classify(P("2z^2-3z+2"))
        assert (r.mu_lower, r.mu_upper_lower_bound, r.mu_upper_upper_bound) == (1, 2, 452131)
        assert r.novikov_shubin == Fraction(1)
        assert r.flip_condition is None

    def test_squared_type_iii(self):
        r = classify(P("(2z^2-3z+2)^2"))
        assert r.mu_lower == 2
        assert r.mu_upper_upper_bound == 2 * 452131

    def test_type_ii_exact(self):
        r = classify(P("(z^2-z+1)^3"))
        assert r.mu_lower == r.mu_upper_lower_bound == r.mu_upper_upper_bound == 3
        assert novikov_shubin(r) == Fraction(1, 3)

    def test_type_i(self):
        r = classify(P("z^2-3z+1"))
        assert r.novikov_shubin is INFINITY_PLUS
        assert r.clusters == ()
        assert r.to_dict()["novikov_shubin"] == "inf+"

    def test_undecided_reports_flip_condition(self):
        r = classify(P("(z^2-z+1)^2(2z^2-3z+2)"))
        assert r.verdict.kind == "Undecided"
        assert r.flip_condition.endswith("> 2")
        assert "reason" in r.to_dict() and "flip_condition" in r.to_dict()
        assert (r.mu_upper_lower_bound, r.mu_upper_upper_bound) == (2, 452131)

    def test_bw_method(self):
        r = classify(P("2z^2-3z+2"), baker_method="bw")
        assert r.mu_upper_upper_bound == 309231868366898

    def test_height_one_root_polynomial(self):
        # w^2 - w - 3 has a root in (-2, 2); Baker-Wustholz would need height >= 2
        r = classify(P("z^4-z^3-z^2-z+1"))
        assert r.verdict.label == "III_1"
        assert r.clusters[0].baker.method == "gouillon"

    def test_invariance_examples(self):
        lam = P("(z^2-z+1)^2(2z^2-3z+2)")
        base = classify(lam)
        for v in (lam.scaled(-5).shifted(3), lam.mirror()):
            assert classify(v).verdict == base.verdict

    def test_rejects(self):
        with pytest.raises(DomainError):
            classify(P("0"))
        with pytest.raises(DomainError):
            classify(P("z^2-1"))

    def test_to_dict_clusters(self):
        d = classify(P("(z^2-z+1)(2z^2-3z+2)")).to_dict()
        cyc = [c for c in d["clusters"] if "cyclotomic_order" in c]
        other = [c for c in d["clusters"] if "baker" in c]
        assert cyc[0]["t_exact"] == "1/3" and cyc[0]["nu_upper"] == 1
        assert other[0]["baker"]["C"] == 452130


class TestRates:
    def test_lower_rate(self):
        assert lower_rate(unit_circle_roots(P("(z^2-z+1)^2(2z^2-3z+2)"))) == 2
        assert lower_rate([]) == 0

    def test_upper_rate_needs_baker(self):
        clusters = unit_circle_roots(P("2z^2-3z+2"))
        with pytest.raises(DomainError):
            upper_rate_bounds(clusters)
        b = gouillon_constant(P("2z^2-3z+2"))
        assert upper_rate_bounds(clusters, [b]) == (2, 452131)
        assert upper_rate_bounds(clusters, {0: b}) == (2, 452131)
        assert upper_rate_bounds(clusters, {clusters[0]: b}) == (2, 452131)
