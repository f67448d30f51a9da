import io

import pytest
import sympy

from knotshrink.errors import DomainError, InputError
from knotshrink.knotdb import (
    KnotRecord, builtin_table, get_record, ingest_csv, levine_check, normalize_name, torus_knot_lambda,
    twist_knot_lambda,
)
from knotshrink.polyring import LaurentPoly, normalize_primitive, parse_poly
from knotshrink.shrinkage import Verdict, classify

from oracles import Z, from_sympy

P = parse_poly


class TestBuiltin:
    def test_size_and_order(self):
        table = builtin_table()
        names = [r.name for r in table]
        assert len(table) == 39
        assert names[0] == "3_1" and names[34] == "8_21"
        assert names[35:] == ["10_65", "10_77", "10_82", "12a_169"]
        assert len(set(names)) == len(names)

    def test_every_row_is_realizable(self):
        for rec in builtin_table():
            assert levine_check([rec.lam]).ok, rec.name
            assert rec.lam == normalize_primitive(rec.lam)

    def test_verified_types(self):
        for rec in builtin_table():
            assert classify(rec.lam).verdict == rec.expected_type, rec.name

    def test_published_column(self):
        deviations = [r.name for r in builtin_table() if r.published_type != r.expected_type]
        assert deviations == ["7_6"]
        assert get_record("7_6").published_type == Verdict("I")

    def test_lookup(self):
        rec = get_record("5₂")
        assert rec.lam == P("2z^2-3z+2") and rec.crossings == 5 and rec.common_name == "three-twist"
        assert get_record("12a_{169}").lam == normalize_primitive(P("(2z^2-3z+2)^2"))
        with pytest.raises(KeyError):
            get_record("9_1")

    def test_six_two_corrected(self):
        assert get_record("6_2").lam == P("z^4-3z^3+3z^2-3z+1")

    def test_record_validation(self):
        with pytest.raises(DomainError):
            KnotRecord("x", 3, P("z^2-3z+4"))
        with pytest.raises(DomainError):
            KnotRecord("x", 3, LaurentPoly())


class TestNames:
    @pytest.mark.parametrize("raw, canon", [
        ("8₁₈", "8_18"), ("8_{18}", "8_18"), ("8_18", "8_18"), (" $3_1$ ", "3_1"),
        ("12a_169", "12a_169"), ("12A169", "12a_169"), ("10₆₅", "10_65"), ("818", "818"),
    ])
    def test_normalize(self, raw, canon):
        assert normalize_name(raw) == canon


class TestFamilies:
    @pytest.mark.parametrize("p, q", [(2, 3), (2, 5), (2, 11), (3, 4), (3, 5), (4, 7)])
    def test_torus_matches_sympy(self, p, q):
        expr = sympy.cancel((Z**(p * q) - 1) * (Z - 1) / ((Z**p - 1) * (Z**q - 1)))
        assert torus_knot_lambda(p, q) == normalize_primitive(from_sympy(expr))

    def test_torus_known(self):
        assert torus_knot_lambda(3, 4) == P("z^6-z^5+z^3-z+1")
        assert torus_knot_lambda(2, 3) == get_record("3_1").lam

    def test_torus_rejects(self):
        with pytest.raises(DomainError):
            torus_knot_lambda(2, 4)
        with pytest.raises(DomainError):
            torus_knot_lambda(1, 5)

    def test_twist_matches_table(self):
        assert twist_knot_lambda(1) == get_record("3_1").lam
        assert twist_knot_lambda(2) == get_record("4_1").lam
        assert twist_knot_lambda(3) == get_record("5_2").lam
        assert normalize_primitive(twist_knot_lambda(4)) == get_record("6_1").lam
        assert twist_knot_lambda(5) == get_record("7_2").lam
        assert twist_knot_lambda(0) == P("1")
        with pytest.raises(DomainError):
            twist_knot_lambda(-1)

    def test_twist_determinant(self):
        for m in range(1, 12):
            assert abs(twist_knot_lambda(m)(-1)) == 2 * m + 1
            assert twist_knot_lambda(m)(1) in (1, -1)


class TestLevine:
    def test_good_chain(self):
        rep = levine_check([P("(z^2-z+1)^2"), P("z^2-z+1")])
        assert rep.ok and rep.failures() == []

    def test_failures_are_indexed(self):
        rep = levine_check([P("z^2-z+1"), P("2z^2-3z+2"), P("z-3")])
        assert not rep.ok
        assert rep.failures() == [(2, "iii"), (3, "i"), (3, "ii"), (3, "iii")]
        d = rep.to_dict()
        assert d["conditions"][2] == {"index": 3, "i": False, "ii": False, "iii": False}

    def test_domain(self):
        with pytest.raises(DomainError):
            levine_check([])
        with pytest.raises(DomainError):
            levine_check([LaurentPoly()])


class TestIngest:
    def test_lambda_and_pairs(self):
        text = """# comment line
name,lambda,delta1,delta2,type
3_1,z^2-z+1,,,II_1
8₁₈,,(z^2-z+1)^2 (z^2-3z+1),z^2-z+1,
x_1,z^2-3z+4,,,
y_2,,z^2-z+1,z^2-3z+1,
"""
        res = ingest_csv(io.StringIO(text))
        assert [r.name for r in res] == ["3_1", "8_18"]
        assert res.records[1].lam == normalize_primitive(P("(z^2-z+1)(z^2-3z+1)"))
        assert res.records[0].expected_type == Verdict("II", 1)
        assert [(r.line, r.name) for r in res.rejections] == [(5, "x_1"), (6, "y_2")]

    def test_file_path(self, tmp_path):
        path = tmp_path / "k.csv"
        path.write_text("name,lambda\n4_1,z^2-3z+1\n", encoding="utf-8")
        assert len(ingest_csv(path)) == 1

    def test_bad_header(self):
        with pytest.raises(InputError):
            ingest_csv(io.StringIO("knot,poly\n3_1,z^2-z+1\n"))

    def test_missing_file(self, tmp_path):
        with pytest.raises(InputError):
            ingest_csv(tmp_path / "nope.csv")

    def test_empty_warns(self):
        with pytest.warns(UserWarning):
            res = ingest_csv(io.StringIO("# nothing here\n"))
        assert len(res) == 0

    def test_bad_type_label_rejected(self):
        res = ingest_csv(io.StringIO("name,lambda,type\n3_1,z^2-z+1,IV\n4_1,z^2-3z+1,I\n"))
        assert [r.name for r in res] == ["4_1"]
        assert "IV" in res.rejections[0].reason
