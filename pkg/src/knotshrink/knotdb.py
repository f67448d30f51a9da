"""Reference knots, parametric families, Levine's realizability conditions and CSV ingestion."""

from __future__ import annotations

import csv
import io
import math
import os
import re
import warnings
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .errors import DomainError, InputError, KnotShrinkError
from .polyring import LaurentPoly, divides, exact_divide, normalize_primitive, parse_poly
from .shrinkage import Verdict, parse_verdict_label
from .smith import reduced_from_pair

__all__ = [
    "DATASET_VERSION",
    "KnotRecord",
    "Rejection",
    "IngestResult",
    "LevineReport",
    "normalize_name",
    "builtin_table",
    "get_record",
    "torus_knot_lambda",
    "twist_knot_lambda",
    "levine_check",
    "ingest_csv",
]

DATASET_VERSION = "1"
_DATA_FILE = "table1.csv"


@dataclass(frozen=True)
class KnotRecord:
    name: str
    crossings: int
    lam: LaurentPoly
    expected_type: Verdict | None = None
    remark: str = ""
    common_name: str = ""
    published_type: Verdict | None = None

    def __post_init__(self):
        if self.lam.is_zero():
            raise DomainError(f"{self.name}: Lambda is zero")
        if abs(self.lam(1)) != 1:
            raise DomainError(f"{self.name}: Lambda(1) = {self.lam(1)} is not +-1")


@dataclass(frozen=True)
class Rejection:
    line: int
    name: str
    reason: str


@dataclass(frozen=True)
class IngestResult:
    records: tuple
    rejections: tuple = ()

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)


_SUB = str.maketrans("₀₁₂₃₄₅₆₇₈₉", "0123456789")
_NAME = re.compile(r"^(\d+)\s*([anAN]?)\s*(?:_?\{?(\d+)\}?|([₀-₉]+))$")


def normalize_name(name: str) -> str:
    """Canonical ASCII knot name: "8₁₈", "8_{18}" and "8_18" all become "8_18"."""
    s = name.strip().replace("$", "").replace("\\textup", "").replace("{", "").replace("}", "")
    m = _NAME.match(s)
    if m is None:
        return s
    crossings, family, index, sub = m.groups()
    if index is None:
        index = sub.translate(_SUB)
    elif "_" not in s and not family:
        # "818" is ambiguous without a separator
        return s
    return f"{crossings}{family.lower()}_{index}"


def _crossings_of(name: str) -> int:
    m = re.match(r"\d+", name)
    if m is None:
        raise DomainError(f"cannot read a crossing number from {name!r}")
    return int(m.group())


@lru_cache(maxsize=1)
def builtin_table() -> tuple:
    """All shipped records, in table order."""
    text = resources.files(__package__).joinpath("data", _DATA_FILE).read_text(encoding="utf-8")
    result = _ingest_text(text)
    if result.rejections:
        raise AssertionError(f"builtin dataset has bad rows: {result.rejections}")
    return result.records


def get_record(name: str) -> KnotRecord:
    key = normalize_name(name)
    for rec in builtin_table():
        if rec.name == key:
            return rec
    raise KeyError(name)


def torus_knot_lambda(p: int, q: int) -> LaurentPoly:
    """(z^{pq} - 1)(z - 1) / ((z^p - 1)(z^q - 1)) by exact division."""
    if p < 2 or q < 2:
        raise DomainError("torus knot parameters must be at least 2")
    if math.gcd(p, q) != 1:
        raise DomainError(f"gcd({p}, {q}) != 1, so T({p},{q}) is a link")
    z = LaurentPoly.monomial(1, 1)
    num = (LaurentPoly.monomial(1, p * q) - 1) * (z - 1)
    den = (LaurentPoly.monomial(1, p) - 1) * (LaurentPoly.monomial(1, q) - 1)
    return normalize_primitive(exact_divide(num, den))


def twist_knot_lambda(m: int) -> LaurentPoly:
    """Twist knot with m half-twists: nz^2 - (2n+1)z + n for m = 2n, nz^2 - (2n-1)z + n for m = 2n-1."""
    if m < 0:
        raise DomainError("the number of half-twists must be nonnegative")
    if m == 0:
        return LaurentPoly.constant(1)
    n = (m + 1) // 2
    middle = 2 * n + 1 if m % 2 == 0 else 2 * n - 1
    return LaurentPoly([n, -middle, n])


# ---------------------------------------------------------------------------
# Levine's conditions

@dataclass(frozen=True)
class LevineReport:
    chain: tuple
    value_at_one: tuple      # (i) Lambda_i(1) = +-1
    symmetric: tuple         # (ii) Lambda_i(z) = Lambda_i(1/z) up to +-z^m
    divides_previous: tuple  # (iii) Lambda_i | Lambda_{i-1}, vacuous for i = 1

    @property
    def ok(self) -> bool:
        return all(self.value_at_one) and all(self.symmetric) and all(self.divides_previous)

    def failures(self) -> list:
        out = []
        for i in range(len(self.chain)):
            for tag, flags in (("i", self.value_at_one), ("ii", self.symmetric),
                               ("iii", self.divides_previous)):
                if not flags[i]:
                    out.append((i + 1, tag))
        return out

    def to_dict(self) -> dict:
        return {
            "chain": [str(p) for p in self.chain],
            "ok": self.ok,
            "conditions": [
                {"index": i + 1, "i": self.value_at_one[i], "ii": self.symmetric[i],
                 "iii": self.divides_previous[i]}
                for i in range(len(self.chain))
            ],
        }


def levine_check(chain) -> LevineReport:
    """Check whether a chain Lambda_1, ..., Lambda_k can be the reduced Alexander polynomials of a knot."""
    chain = tuple(chain)
    if not chain:
        raise DomainError("empty chain")
    if any(p.is_zero() for p in chain):
        raise DomainError("chain entries must be nonzero")
    one = tuple(abs(p(1)) == 1 for p in chain)
    sym = tuple(normalize_primitive(p) == normalize_primitive(p.mirror()) for p in chain)
    div = tuple(i == 0 or divides(chain[i], chain[i - 1]) for i in range(len(chain)))
    return LevineReport(chain, one, sym, div)


# ---------------------------------------------------------------------------
# CSV ingestion

def _read(source) -> str:
    if hasattr(source, "read"):
        return source.read()
    try:
        with open(os.fspath(source), encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc}") from exc


def ingest_csv(source) -> IngestResult:
    """Records from a CSV file with a ``name`` column and either ``lambda`` or
    ``delta1`` and ``delta2``; optional ``type``, ``published_type``, ``remark``
    and ``common_name``.

    Lines starting with '#' are comments. Bad rows are collected as rejections.
    """
    result = _ingest_text(_read(source))
    if not result.records:
        warnings.warn("no valid knot records in the input", stacklevel=2)
    return result


def _ingest_text(text: str) -> IngestResult:
    lines = [(i + 1, ln) for i, ln in enumerate(text.splitlines()) if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        return IngestResult(())
    reader = csv.DictReader(io.StringIO("\n".join(ln for _, ln in lines)))
    fields = {f.strip() for f in (reader.fieldnames or [])}
    if "name" not in fields or not ("lambda" in fields or {"delta1", "delta2"} <= fields):
        raise InputError("header must name 'name' and 'lambda' or 'delta1' and 'delta2'")
    records, rejections = [], []
    for (lineno, _), row in zip(lines[1:], reader):
        row = {(k or "").strip(): (v or "").strip() for k, v in row.items()}
        name = normalize_name(row.get("name", ""))
        try:
            records.append(_record_from_row(name, row))
        except (KnotShrinkError, ValueError) as exc:
            rejections.append(Rejection(lineno, name, str(exc)))
    return IngestResult(tuple(records), tuple(rejections))


def _record_from_row(name: str, row: dict) -> KnotRecord:
    if not name:
        raise DomainError("missing name")
    if row.get("lambda"):
        lam = parse_poly(row["lambda"])
    elif row.get("delta1") and row.get("delta2"):
        lam = reduced_from_pair(parse_poly(row["delta1"]), parse_poly(row["delta2"]))
    else:
        raise DomainError("no polynomial given")
    expected = parse_verdict_label(row["type"]) if row.get("type") else None
    published = parse_verdict_label(row["published_type"]) if row.get("published_type") else expected
    return KnotRecord(name, _crossings_of(name), normalize_primitive(lam), expected,
                      row.get("remark", ""), row.get("common_name", ""), published)
