"""Smith normal form over Q[z, 1/z] and the Alexander polynomials of a presentation matrix.

Matrices act on row vectors from the right: an r x s matrix represents a map
from a free module of rank r to one of rank s. A chain complex
``C2 --d2--> C1 --d1--> C0`` therefore composes as ``d2 @ d1``.

Invariant factors are listed in the order ``a[i+1] | a[i]``, so the first factor
is the most divisible one and equals the reduced Alexander polynomial Lambda = Delta_1 / Delta_2.
"""

from __future__ import annotations

import io
import json
import os
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DomainError, InputError, ParseError
from .polyring import (
    LaurentPoly,
    divides,
    exact_divide,
    gcd,
    normalize_primitive,
    parse_poly,
    poly_divmod,
)

__all__ = [
    "LaurentMatrix",
    "SmithResult",
    "HomologyDecomposition",
    "smith_normal_form",
    "alexander_polynomials",
    "minors_gcd",
    "determinant",
    "reduced_from_pair",
    "homology_decomposition",
    "unimodular_inverse",
    "load_matrix",
    "dump_matrix",
]

_ONE = LaurentPoly.constant(1)
_ZERO = LaurentPoly()


def _entry(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, str):
        return parse_poly(x)
    return LaurentPoly.constant(x)


@dataclass(frozen=True)
class LaurentMatrix:
    entries: tuple

    def __init__(self, entries):
        rows = tuple(tuple(_entry(x) for x in row) for row in entries)
        if not rows or not rows[0]:
            raise DomainError("a matrix needs at least one row and one column")
        if any(len(row) != len(rows[0]) for row in rows):
            raise DomainError("matrix rows have different lengths")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def diagonal(cls, diag, rows=None, cols=None) -> "LaurentMatrix":
        diag = [_entry(d) for d in diag]
        rows = rows or len(diag)
        cols = cols or len(diag)
        return cls([[diag[i] if i == j and i < len(diag) else _ZERO for j in range(cols)]
                    for i in range(rows)])

    @classmethod
    def identity(cls, n: int) -> "LaurentMatrix":
        return cls.diagonal([_ONE] * n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "LaurentMatrix":
        return cls([[_ZERO] * cols for _ in range(rows)])

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @property
    def shape(self) -> tuple:
        return self.rows, self.cols

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def transpose(self) -> "LaurentMatrix":
        return LaurentMatrix(list(zip(*self.entries)))

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        if self.cols != other.rows:
            raise DomainError(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = _ZERO
                for k in range(self.cols):
                    a, b = self.entries[i][k], other.entries[k][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return LaurentMatrix(out)

    def __eq__(self, other):
        if not isinstance(other, LaurentMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def to_strings(self) -> list:
        return [[str(e) for e in row] for row in self.entries]

    def evaluate(self, zs: np.ndarray) -> np.ndarray:
        """Complex values ``A(z)`` for every z in ``zs``; shape ``(len(zs), rows, cols)``."""
        zs = np.asarray(zs, dtype=complex)
        out = np.zeros((zs.size, self.rows, self.cols), dtype=complex)
        for i, row in enumerate(self.entries):
            for j, e in enumerate(row):
                if e:
                    out[:, i, j] = e(zs)
        return out

    def max_abs_coefficient_sum(self) -> np.ndarray:
        """Entrywise sum of absolute coefficients: a bound for |A_ij(z)| on the unit circle."""
        return np.array([[float(sum(abs(c) for c in e.coeffs)) for e in row]
                         for row in self.entries])

    def __str__(self):
        return "[" + "; ".join(", ".join(str(e) for e in row) for row in self.entries) + "]"


@dataclass(frozen=True)
class SmithResult:
    """Invariant factors a_1, ..., a_k (with a_{i+1} | a_i), each normalized primitive."""

    invariant_factors: tuple
    rank: int

    @property
    def reduced_alexander(self) -> tuple:
        return self.invariant_factors

    @property
    def nonunit_factors(self) -> tuple:
        return tuple(a for a in self.invariant_factors if not a.is_unit())


@dataclass(frozen=True)
class HomologyDecomposition:
    free_rank: int
    torsion_factors: tuple


# ---------------------------------------------------------------------------


def smith_normal_form(A: LaurentMatrix) -> SmithResult:
    """Invariant factors of ``A`` over the principal ideal domain Q[z, 1/z].

    Euclidean elimination with the span (max_exp - min_exp) as size function;
    the pivot is always an entry of minimal span.
    """
    M = [list(row) for row in A.entries]
    r, s = A.rows, A.cols
    diag = []
    for t in range(min(r, s)):
        best = _min_span_entry(M, t, range(t, r), range(t, s))
        if best is None:
            break
        _move_to_pivot(M, t, *best)
        while True:
            _normalize_pivot_row(M, t)
            pivot = M[t][t]
            clean = True
            for i in range(t + 1, r):
                if M[i][t]:
                    q, rem = poly_divmod(M[i][t], pivot)
                    M[i] = [a - q * b if b else a for a, b in zip(M[i], M[t])]
                    clean = clean and rem.is_zero()
            for j in range(t + 1, s):
                if M[t][j]:
                    q, rem = poly_divmod(M[t][j], pivot)
                    for i in range(r):
                        if M[i][t]:
                            M[i][j] = M[i][j] - q * M[i][t]
                    clean = clean and rem.is_zero()
            if not clean:
                cand = [(i, t) for i in range(t, r) if M[i][t]] + [(t, j) for j in range(t + 1, s) if M[t][j]]
                i, j = min(cand, key=lambda ij: M[ij[0]][ij[1]].span)
                _move_to_pivot(M, t, i, j)
                continue
            bad = next(((i, j) for i in range(t + 1, r) for j in range(t + 1, s)
                        if M[i][j] and not divides(pivot, M[i][j])), None)
            if bad is None:
                break
            M[t] = [a + b for a, b in zip(M[t], M[bad[0]])]
        diag.append(normalize_primitive(M[t][t]))
    factors = tuple(reversed(diag))
    return SmithResult(factors, len(factors))


def _min_span_entry(M, t, rows, cols):
    best = None
    for i in rows:
        for j in cols:
            e = M[i][j]
            if e and (best is None or e.span < M[best[0]][best[1]].span):
                best = (i, j)
    return best


def _move_to_pivot(M, t, i, j):
    if i != t:
        M[t], M[i] = M[i], M[t]
    if j != t:
        for row in M:
            row[t], row[j] = row[j], row[t]


def _normalize_pivot_row(M, t):
    # scaling a row by a unit c*z^m is unimodular and keeps coefficients small
    p = M[t][t]
    prim = normalize_primitive(p)
    unit = p.leading / prim.leading
    shift = p.min_exp
    if unit != 1 or shift != 0:
        M[t] = [e.scaled(1 / unit).shifted(-shift) if e else e for e in M[t]]


def determinant(A: LaurentMatrix) -> LaurentPoly:
    """Fraction-free (Bareiss) determinant of a square Laurent matrix."""
    if A.rows != A.cols:
        raise DomainError("determinant needs a square matrix")
    M = [list(row) for row in A.entries]
    n = A.rows
    sign = 1
    prev = _ONE
    for k in range(n - 1):
        if M[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return _ZERO
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = exact_divide(M[i][j] * M[k][k] - M[i][k] * M[k][j], prev)
        prev = M[k][k]
    return M[n - 1][n - 1].scaled(sign)


def minors_gcd(A: LaurentMatrix, j: int) -> LaurentPoly:
    """gcd of all j x j minors (zero polynomial if they all vanish)."""
    if not 1 <= j <= min(A.shape):
        raise DomainError(f"minor size {j} out of range for shape {A.shape}")
    g = _ZERO
    for rows in combinations(range(A.rows), j):
        for cols in combinations(range(A.cols), j):
            sub = LaurentMatrix([[A.entries[i][c] for c in cols] for i in rows])
            d = determinant(sub)
            if d:
                g = gcd(g, d)
                if g.is_unit():
                    return g
    return g


def alexander_polynomials(A: LaurentMatrix) -> list:
    """Delta_1, ..., Delta_k where Delta_i is the gcd of the (k+1-i)-minors and k = rank A.

    Computed from minors directly, independently of :func:`smith_normal_form`.
    """
    gs = []
    for j in range(1, min(A.shape) + 1):
        g = minors_gcd(A, j)
        if g.is_zero():
            break
        gs.append(g)
    return list(reversed(gs))


def reduced_from_pair(delta1: LaurentPoly, delta2: LaurentPoly) -> LaurentPoly:
    """Lambda = Delta_1 / Delta_2 in normalized primitive form."""
    if delta2.is_zero():
        raise DomainError("Delta_2 must be nonzero")
    q, rem = poly_divmod(delta1, delta2)
    if not rem.is_zero():
        raise DomainError(f"Delta_2 = {delta2} does not divide Delta_1 = {delta1}; remainder {rem}")
    return normalize_primitive(q)


def homology_decomposition(d2: LaurentMatrix, d1: LaurentMatrix) -> HomologyDecomposition:
    """H_1 of ``C2 -> C1 -> C0`` as free rank plus torsion invariant factors.

    Row-vector convention: ``d2`` is rank(C2) x rank(C1), ``d1`` is rank(C1) x rank(C0),
    and the composite map is ``d2 @ d1``.
    """
    if d2.cols != d1.rows:
        raise DomainError(f"d2 is {d2.shape} but d1 is {d1.shape}; inner dimensions differ")
    if not (d2 @ d1).is_zero():
        raise DomainError("d1 o d2 is not zero; not a chain complex")
    snf2 = smith_normal_form(d2)
    rank1 = smith_normal_form(d1).rank if not d1.is_zero() else 0
    # rank ker d1 + rank ker d2 - rank C2
    free = (d1.rows - rank1) + (d2.rows - snf2.rank) - d2.rows
    return HomologyDecomposition(free, snf2.nonunit_factors)


def unimodular_inverse(U: LaurentMatrix) -> LaurentMatrix:
    """Inverse of a square matrix whose determinant is a unit c*z^m."""
    det = determinant(U)
    if not det.is_unit():
        raise DomainError(f"determinant {det} is not a unit; matrix is not invertible over Q[z, 1/z]")
    n = U.rows
    if n == 1:
        return LaurentMatrix([[det**-1]])
    inv_det = det**-1
    out = [[_ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            sub = LaurentMatrix([[U.entries[a][b] for b in range(n) if b != j]
                                 for a in range(n) if a != i])
            cof = determinant(sub)
            if (i + j) % 2:
                cof = -cof
            out[j][i] = cof * inv_det
    return LaurentMatrix(out)


# ---------------------------------------------------------------------------
# matrix file format


def _read_source(source):
    if hasattr(source, "read"):
        return source.read()
    if isinstance(source, (str, os.PathLike)):
        try:
            with open(source, encoding="utf-8") as fh:
                return fh.read()
        except OSError as exc:
            raise InputError(f"cannot read matrix file {source}: {exc}") from exc
    raise TypeError("expected a path or a readable file object")


def load_matrix(source) -> LaurentMatrix:
    """Read the JSON matrix format ``{"rows": r, "cols": s, "entries": [[poly, ...], ...]}``."""
    text = _read_source(source)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"matrix file is not valid JSON: {exc.msg}", text, exc.pos) from exc
    return matrix_from_document(doc)


def matrix_from_document(doc: dict) -> LaurentMatrix:
    for key in ("rows", "cols", "entries"):
        if key not in doc:
            raise ParseError(f"matrix document lacks the field {key!r}")
    rows, cols, entries = doc["rows"], doc["cols"], doc["entries"]
    if len(entries) != rows or any(len(row) != cols for row in entries):
        raise ParseError(f"entries do not form a {rows} x {cols} grid")
    parsed = []
    for i, row in enumerate(entries):
        out = []
        for j, cell in enumerate(row):
            try:
                out.append(parse_poly(str(cell)))
            except ParseError as exc:
                raise ParseError(f"entry ({i}, {j}): {exc}") from exc
        parsed.append(out)
    return LaurentMatrix(parsed)


def matrix_to_document(A: LaurentMatrix) -> dict:
    return {"rows": A.rows, "cols": A.cols, "entries": A.to_strings()}


def dump_matrix(A: LaurentMatrix, target=None, **extra) -> str:
    """Serialize to the JSON matrix format; extra keyword fields are stored alongside."""
    doc = matrix_to_document(A)
    doc.update(extra)
    text = json.dumps(doc, indent=2) + "\n"
    if target is None:
        return text
    if isinstance(target, io.TextIOBase) or hasattr(target, "write"):
        target.write(text)
    else:
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
