"""Exact Laurent polynomials over the rationals.

Values are immutable. Coefficients are stored densely as :class:`fractions.Fraction`
from ``min_exp`` upwards; the highest stored coefficient is nonzero unless the
polynomial is zero, in which case ``coeffs == ()`` and ``min_exp == 0``.

Besides ring arithmetic the module provides the canonical normalization used for
all equality and golden tests, square-free decomposition, gcd and exact division,
cyclotomic polynomials, Sturm chains for exact real-root counting and a certified
ball-arithmetic evaluator on the unit circle.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from flint import acb, arb, ctx, fmpq

from .errors import DomainError, EndpointRootError, ParseError

__all__ = [
    "LaurentPoly",
    "PolyFactorization",
    "IsolatingInterval",
    "SturmChain",
    "Z",
    "parse_poly",
    "normalize_primitive",
    "is_palindromic",
    "squarefree_decompose",
    "gcd",
    "divides",
    "exact_divide",
    "cyclotomic",
    "sturm_count",
    "isolate_real_roots",
    "eval_on_circle",
]


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    if isinstance(c, fmpq):
        return Fraction(int(c.p), int(c.q))
    raise TypeError(f"coefficient must be exact (int or Fraction), got {type(c).__name__}")


class LaurentPoly:
    """Element of Q[z, 1/z].

    >>> p = LaurentPoly([2, -3, 2])
    >>> str(p)
    '2z^2-3z+2'
    >>> str(p * LaurentPoly.monomial(1, -1))
    '2z-3+2z^-1'
    """

    __slots__ = ("min_exp", "coeffs", "_hash", "_fmpq", "_float")

    def __init__(self, coeffs: Iterable = (), min_exp: int = 0):
        cs = [_frac(c) for c in coeffs]
        lo = 0
        while lo < len(cs) and cs[lo] == 0:
            lo += 1
        hi = len(cs)
        while hi > lo and cs[hi - 1] == 0:
            hi -= 1
        if lo == hi:
            self.coeffs: tuple[Fraction, ...] = ()
            self.min_exp = 0
        else:
            self.coeffs = tuple(cs[lo:hi])
            self.min_exp = int(min_exp) + lo
        self._hash = None
        self._fmpq = None
        self._float = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def monomial(cls, c, e: int = 0) -> "LaurentPoly":
        return cls([c], e)

    @classmethod
    def constant(cls, c) -> "LaurentPoly":
        return cls([c], 0)

    @classmethod
    def from_dict(cls, terms: dict) -> "LaurentPoly":
        terms = {int(e): _frac(c) for e, c in terms.items() if c != 0}
        if not terms:
            return cls()
        lo, hi = min(terms), max(terms)
        return cls([terms.get(e, 0) for e in range(lo, hi + 1)], lo)

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        return parse_poly(text)

    # -- basic properties -------------------------------------------------
    @property
    def max_exp(self) -> int:
        return self.min_exp + len(self.coeffs) - 1 if self.coeffs else 0

    @property
    def span(self) -> int:
        """Width ``max_exp - min_exp``: the degree once z-powers are factored out."""
        return len(self.coeffs) - 1 if self.coeffs else -1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_unit(self) -> bool:
        """True for nonzero monomials c*z^m, the units of Q[z, 1/z]."""
        return len(self.coeffs) == 1

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    @property
    def trailing(self) -> Fraction:
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def coefficient(self, e: int) -> Fraction:
        i = e - self.min_exp
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def terms(self) -> dict:
        return {self.min_exp + i: c for i, c in enumerate(self.coeffs) if c != 0}

    def height(self) -> int:
        """Max absolute coefficient (meaningful on integer polynomials)."""
        h = max((abs(c) for c in self.coeffs), default=Fraction(0))
        return int(h) if h.denominator == 1 else h

    # -- structural operations -------------------------------------------
    def shifted(self, m: int) -> "LaurentPoly":
        """Multiply by z^m."""
        if self.is_zero():
            return self
        return LaurentPoly(self.coeffs, self.min_exp + m)

    def mirror(self) -> "LaurentPoly":
        """p(1/z)."""
        if self.is_zero():
            return self
        return LaurentPoly(reversed(self.coeffs), -self.max_exp)

    def derivative(self) -> "LaurentPoly":
        return LaurentPoly.from_dict({e - 1: e * c for e, c in self.terms().items() if e != 0})

    def scaled(self, c) -> "LaurentPoly":
        c = _frac(c)
        return LaurentPoly([c * a for a in self.coeffs], self.min_exp)

    def monic(self) -> "LaurentPoly":
        if self.is_zero():
            raise DomainError("zero polynomial has no monic associate")
        return self.scaled(1 / self.leading)

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self.min_exp, other.min_exp)
        hi = max(self.max_exp, other.max_exp)
        out = [Fraction(0)] * (hi - lo + 1)
        for i, c in enumerate(self.coeffs):
            out[self.min_exp - lo + i] += c
        for i, c in enumerate(other.coeffs):
            out[other.min_exp - lo + i] += c
        return LaurentPoly(out, lo)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly([-c for c in self.coeffs], self.min_exp)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return LaurentPoly()
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return LaurentPoly(out, self.min_exp + other.min_exp)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            if not self.is_unit():
                raise DomainError("negative powers exist only for monomials")
            return LaurentPoly([1 / self.coeffs[0] ** (-k)], self.min_exp * k)
        result = LaurentPoly.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.min_exp == other.min_exp and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.min_exp, self.coeffs))
        return self._hash

    def __bool__(self):
        return bool(self.coeffs)

    # -- evaluation -------------------------------------------------------
    def __call__(self, x):
        """Evaluate at ``x``.

        Exact for int/Fraction, ball arithmetic for flint ``arb``/``acb`` values,
        floating point for anything else (floats, complex, numpy arrays).
        """
        if self.is_zero():
            return 0 * x
        if isinstance(x, (int, Fraction)):
            x = Fraction(x)
            if x == 0 and self.min_exp < 0:
                raise ZeroDivisionError("Laurent polynomial with negative powers at 0")
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc * x**self.min_exp
        if isinstance(x, (arb, acb)):
            acc = 0 * x
            for c in reversed(self.fmpq_coeffs()):
                acc = acc * x + c
            return acc * x**self.min_exp
        acc = 0 * x
        for c in reversed(self.float_coeffs()):
            acc = acc * x + c
        return acc * x**self.min_exp

    def fmpq_coeffs(self) -> tuple:
        if self._fmpq is None:
            self._fmpq = tuple(fmpq(c.numerator, c.denominator) for c in self.coeffs)
        return self._fmpq

    def float_coeffs(self) -> tuple:
        if self._float is None:
            self._float = tuple(float(c) for c in self.coeffs)
        return self._float

    # -- printing ---------------------------------------------------------
    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for e in range(self.max_exp, self.min_exp - 1, -1):
            c = self.coefficient(e)
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if e == 0:
                body = str(a)
            else:
                mono = "z" if e == 1 else f"z^{e}"
                body = mono if a == 1 else f"{a}{mono}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += sign + body
        return out

    def __repr__(self):
        return f"LaurentPoly('{self}')"


Z = LaurentPoly([1], 1)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>[zZ])|(?P<op>[-+*/^()·;,])|(?P<word>poly))")
_SUPERSCRIPTS = str.maketrans("⁰¹²³⁴⁵⁶⁷⁸⁹⁻", "0123456789-")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        start = m.start(m.lastgroup)
        tokens.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None, value=None):
        tok = self.tokens[self.i]
        if (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of input"
            raise ParseError(f"expected {want!r}, found {got!r}", self.text, tok[2])
        self.i += 1
        return tok

    def at(self, kind, value=None):
        tok = self.tokens[self.i]
        return tok[0] == kind and (value is None or tok[1] == value)

    def signed_int(self):
        sign = 1
        while self.at("op", "-") or self.at("op", "+"):
            if self.take()[1] == "-":
                sign = -sign
        return sign * int(self.take("num")[1])

    def parse(self):
        if self.at("word"):
            result = self.list_form()
        else:
            result = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", self.text, tok[2])
        return result

    def list_form(self):
        self.take("word")
        self.take("op", "(")
        min_exp = self.signed_int()
        self.take("op", ";")
        coeffs = [self.rational()]
        while self.at("op", ","):
            self.take()
            coeffs.append(self.rational())
        self.take("op", ")")
        return LaurentPoly(coeffs, min_exp)

    def rational(self):
        sign = 1
        while self.at("op", "-") or self.at("op", "+"):
            if self.take()[1] == "-":
                sign = -sign
        num = int(self.take("num")[1])
        den = 1
        if self.at("op", "/"):
            self.take()
            tok = self.take("num")
            den = int(tok[1])
            if den == 0:
                raise ParseError("zero denominator", self.text, tok[2])
        return sign * Fraction(num, den)

    def expr(self):
        sign = 1
        while self.at("op", "-") or self.at("op", "+"):
            if self.take()[1] == "-":
                sign = -sign
        acc = self.term().scaled(sign)
        while self.at("op", "+") or self.at("op", "-"):
            op = self.take()[1]
            sign = 1 if op == "+" else -1
            while self.at("op", "-") or self.at("op", "+"):
                if self.take()[1] == "-":
                    sign = -sign
            acc = acc + self.term().scaled(sign)
        return acc

    def _starts_factor(self):
        return self.at("num") or self.at("var") or self.at("op", "(")

    def term(self):
        if not self._starts_factor():
            tok = self.peek()
            raise ParseError(f"expected a term, found {tok[1] or 'end of input'!r}", self.text, tok[2])
        acc = self.factor()
        while True:
            if self.at("op", "*") or self.at("op", "·"):
                self.take()
                acc = acc * self.factor()
            elif self._starts_factor():
                acc = acc * self.factor()
            else:
                return acc

    def factor(self):
        tok = self.peek()
        if tok[0] == "num":
            base = LaurentPoly.constant(self.rational())
        elif tok[0] == "var":
            self.take()
            base = Z
        elif self.at("op", "("):
            self.take()
            base = self.expr()
            self.take("op", ")")
        else:
            raise ParseError(f"unexpected {tok[1]!r}", self.text, tok[2])
        if self.at("op", "^"):
            self.take()
            etok = self.peek()
            e = self.signed_int()
            if e < 0 and not base.is_unit():
                raise ParseError("negative exponent on a non-monomial", self.text, etok[2])
            base = base**e
        return base


def parse_poly(text: str) -> LaurentPoly:
    """Parse the polynomial text grammar.

    Accepts ``[sign] [coeff] ['z' ['^' int]]`` terms with integer or ``p/q``
    coefficients, the list form ``poly(min_exp; c0, c1, ...)`` and, as an
    extension, parenthesized factors with powers such as ``(z^2-z+1)^2(2z^2-3z+2)``.
    Unicode minus signs and superscript digits are accepted.
    """
    if not isinstance(text, str):
        raise TypeError("polynomial text must be a string")
    clean = text.replace("−", "-").replace("–", "-").translate(_SUPERSCRIPTS)
    # superscript exponents written without caret, e.g. z² -> z^2
    clean = re.sub(r"([zZ)])(?=[0-9])", r"\1^", clean) if clean != text else clean
    if not clean.strip():
        raise ParseError("empty polynomial", text, 0)
    return _Parser(clean).parse()


# ---------------------------------------------------------------------------
# dense polynomial helpers (ascending Fraction lists, no z-shift)


def _trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pdivmod(a: Sequence[Fraction], b: Sequence[Fraction]):
    a = list(a)
    b = list(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    db = len(b) - 1
    lb = b[-1]
    q = [Fraction(0)] * max(len(a) - db, 1)
    while len(a) - 1 >= db and a:
        shift = len(a) - 1 - db
        f = a[-1] / lb
        q[shift] = f
        for i in range(db + 1):
            a[shift + i] -= f * b[i]
        a.pop()
        _trim(a)
    return _trim(q), a


def _pmonic(a: list) -> list:
    lc = a[-1]
    return [c / lc for c in a]


def _pgcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list:
    a = _trim(list(a))
    b = _trim(list(b))
    while b:
        _, r = _pdivmod(a, b)
        a, b = b, (_pmonic(r) if r else r)
    return _pmonic(a) if a else a


def _as_dense(p: LaurentPoly) -> list:
    return list(p.coeffs)


def _dense_derivative(a: Sequence[Fraction]) -> list:
    return _trim([i * c for i, c in enumerate(a)][1:])


def _from_dense(a: Sequence[Fraction], shift: int = 0) -> LaurentPoly:
    return LaurentPoly(a, shift)


# ---------------------------------------------------------------------------
# normalization, gcd, division


def normalize_primitive(p: LaurentPoly) -> LaurentPoly:
    """Unique associate of ``p`` with coprime integer coefficients, min_exp 0, positive leading coefficient.

    >>> str(normalize_primitive(parse_poly("1/2z^-1 - 3/4")))
    '3z-2'
    """
    if p.is_zero():
        raise DomainError("cannot normalize the zero polynomial")
    den = 1
    for c in p.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in p.coeffs]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if ints[-1] < 0:
        g = -g
    return LaurentPoly([v // g for v in ints], 0)


def is_palindromic(p: LaurentPoly) -> bool:
    """True iff p(z) and p(1/z) agree up to a unit ±c z^m."""
    if p.is_zero():
        raise DomainError("palindromy is undefined for the zero polynomial")
    return normalize_primitive(p) == normalize_primitive(p.mirror())


def gcd(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Greatest common divisor in Q[z, 1/z], returned in normalized primitive form.

    gcd(0, 0) is the zero polynomial.
    """
    if p.is_zero() and q.is_zero():
        return LaurentPoly()
    if p.is_zero():
        return normalize_primitive(q)
    if q.is_zero():
        return normalize_primitive(p)
    return normalize_primitive(_from_dense(_pgcd(_as_dense(p), _as_dense(q))))


def _divmod_laurent(p: LaurentPoly, q: LaurentPoly):
    if q.is_zero():
        raise DomainError("division by the zero polynomial")
    if p.is_zero():
        return LaurentPoly(), LaurentPoly()
    quo, rem = _pdivmod(_as_dense(p), _as_dense(q))
    return _from_dense(quo, p.min_exp - q.min_exp), _from_dense(rem, p.min_exp)


def divides(p: LaurentPoly, q: LaurentPoly) -> bool:
    """True iff ``p`` divides ``q`` in Q[z, 1/z]."""
    if p.is_zero():
        return q.is_zero()
    return _divmod_laurent(q, p)[1].is_zero()


def exact_divide(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Return p / q, raising :class:`DomainError` if q does not divide p."""
    quo, rem = _divmod_laurent(p, q)
    if not rem.is_zero():
        raise DomainError(f"{q} does not divide {p} (remainder {rem})")
    return quo


def poly_divmod(p: LaurentPoly, q: LaurentPoly):
    """Division with remainder after factoring out the z-powers of both arguments."""
    return _divmod_laurent(p, q)


# ---------------------------------------------------------------------------
# square-free decomposition


@dataclass(frozen=True)
class PolyFactorization:
    """``content * z**unit_shift * prod(f**e for f, e in factors)``."""

    content: Fraction
    unit_shift: int
    factors: tuple

    def expand(self) -> LaurentPoly:
        out = LaurentPoly.monomial(self.content, self.unit_shift)
        for f, e in self.factors:
            out = out * f**e
        return out

    def multiplicity_of(self, f: LaurentPoly) -> int:
        for g, e in self.factors:
            if divides(f, g):
                return e
        return 0


def squarefree_decompose(p: LaurentPoly) -> PolyFactorization:
    """Yun's square-free decomposition.

    Factors are pairwise coprime, square-free and in normalized primitive form,
    ordered by exponent.
    """
    if p.is_zero():
        raise DomainError("cannot decompose the zero polynomial")
    shift = p.min_exp
    prim = normalize_primitive(p)
    content = p.leading / prim.leading
    factors = []
    f = _as_dense(prim)
    if len(f) > 1:
        df = _dense_derivative(f)
        a0 = _pgcd(f, df)
        b, _ = _pdivmod(f, a0)
        c, _ = _pdivmod(df, a0)
        i = 1
        while len(b) > 1:
            db = _dense_derivative(b)
            d = _trim([x - y for x, y in _zip_pad(c, db)])
            a = _pgcd(b, d) if d else _pmonic(b)
            if len(a) > 1:
                factors.append((normalize_primitive(_from_dense(a)), i))
            b, _ = _pdivmod(b, a)
            c, _ = _pdivmod(d, a) if d else ([], [])
            i += 1
    return PolyFactorization(content, shift, tuple(factors))


def _zip_pad(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return zip(a, b)


# ---------------------------------------------------------------------------
# cyclotomic polynomials


@lru_cache(maxsize=None)
def cyclotomic(N: int) -> LaurentPoly:
    """The N-th cyclotomic polynomial."""
    if not isinstance(N, int) or N <= 0:
        raise DomainError(f"cyclotomic polynomial needs a positive index, got {N!r}")
    num = LaurentPoly.monomial(1, N) - 1
    for d in range(1, N):
        if N % d == 0:
            num = exact_divide(num, cyclotomic(d))
    return num


@lru_cache(maxsize=None)
def totient(N: int) -> int:
    result = N
    m = N
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


# ---------------------------------------------------------------------------
# Sturm sequences


@dataclass(frozen=True)
class IsolatingInterval:
    """Open interval (lo, hi) holding exactly one real root of the owning polynomial."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"isolating interval needs lo < hi, got ({self.lo}, {self.hi})")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2


class SturmChain:
    """Sturm chain of a real polynomial (``min_exp >= 0`` required)."""

    def __init__(self, p: LaurentPoly):
        if p.is_zero():
            raise DomainError("Sturm chain of the zero polynomial")
        if p.min_exp < 0:
            raise DomainError("Sturm chains need an ordinary polynomial (no negative powers)")
        self.poly = p
        dense = [Fraction(0)] * p.min_exp + list(p.coeffs)
        chain = [dense]
        if len(dense) > 1:
            chain.append([i * c for i, c in enumerate(dense)][1:])
            while len(chain[-1]) > 1:
                _, r = _pdivmod(chain[-2], chain[-1])
                if not r:
                    break
                # positive rescaling keeps signs intact and tames coefficient growth
                scale = max(abs(c) for c in r)
                chain.append([-c / scale for c in r])
        self.chain = chain

    @staticmethod
    def _eval(a, x):
        acc = Fraction(0)
        for c in reversed(a):
            acc = acc * x + c
        return acc

    def variations(self, x) -> int:
        x = _frac(x)
        signs = []
        for a in self.chain:
            v = self._eval(a, x)
            if v != 0:
                signs.append(v > 0)
        return sum(1 for s, t in zip(signs, signs[1:]) if s != t)

    def value(self, x) -> Fraction:
        return self._eval(self.chain[0], _frac(x))

    def count(self, lo, hi) -> int:
        lo, hi = _frac(lo), _frac(hi)
        if not lo < hi:
            raise DomainError("Sturm count needs lo < hi")
        for x in (lo, hi):
            if self.value(x) == 0:
                raise EndpointRootError(f"polynomial vanishes at the endpoint {x}", x)
        return self.variations(lo) - self.variations(hi)


def sturm_count(p: LaurentPoly, lo, hi) -> int:
    """Number of distinct real roots of ``p`` in the open interval (lo, hi)."""
    return SturmChain(p).count(lo, hi)


def isolate_real_roots(p: LaurentPoly, lo, hi, chain: SturmChain | None = None) -> list:
    """Disjoint isolating intervals, in increasing order, for the roots of ``p`` in (lo, hi)."""
    chain = chain or SturmChain(p)
    lo, hi = _frac(lo), _frac(hi)
    out = []
    stack = [(lo, hi, chain.count(lo, hi))]
    while stack:
        a, b, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            out.append(IsolatingInterval(a, b))
            continue
        m = _split_point(chain, a, b)
        stack.append((m, b, chain.count(m, b)))
        stack.append((a, m, chain.count(a, m)))
    out.sort(key=lambda iv: iv.lo)
    return out


def _split_point(chain: SturmChain, a: Fraction, b: Fraction) -> Fraction:
    # midpoint unless it is a root; then nearby dyadic offsets
    width = b - a
    for num, den in ((1, 2), (7, 16), (9, 16), (3, 8), (5, 8), (1, 3), (2, 3)):
        m = a + width * Fraction(num, den)
        if chain.value(m) != 0:
            return m
    raise DomainError("could not find a non-root split point")  # pragma: no cover


def refine_root(chain: SturmChain, iv: IsolatingInterval, width) -> tuple:
    """Bisect ``iv`` until narrower than ``width``.

    Returns ``(lo, hi)`` with ``lo <= hi``; ``lo == hi`` when an exact rational root
    was hit. Bisection always splits at the midpoint, so refinements of the same
    interval are nested.
    """
    width = _frac(width)
    a, b = iv.lo, iv.hi
    va = chain.value(a)
    while b - a > width:
        m = (a + b) / 2
        vm = chain.value(m)
        if vm == 0:
            return m, m
        if (vm > 0) == (va > 0):
            a, va = m, vm
        else:
            b = m
    return a, b


# ---------------------------------------------------------------------------
# certified evaluation on the unit circle

_MAX_DOUBLINGS = 4


def eval_on_circle(p: LaurentPoly, k: int, n: int, precision_bits: int = 192) -> arb:
    """Ball enclosure of ``|p(exp(2 pi i k / n))|``.

    The working precision is raised until the relative radius is at most
    ``2**-precision_bits`` (so the relative width is at most ``2**(1-precision_bits)``)
    or a fixed number of doublings is exhausted, which only happens at exact zeros.
    """
    if n <= 0:
        raise DomainError("root of unity order must be positive")
    if precision_bits < 16:
        raise DomainError("precision_bits must be at least 16")
    if p.is_zero():
        return arb(0)
    coeffs = p.fmpq_coeffs()
    angle = fmpq(2 * k, n)
    prec = precision_bits + 32
    for _ in range(_MAX_DOUBLINGS + 1):
        with ctx.workprec(prec):
            z = acb(arb(angle)).exp_pi_i()
            acc = acb(0)
            for c in reversed(coeffs):
                acc = acc * z + c
            m = abs(acc)
        if m.rad() == 0 or m.rel_accuracy_bits() >= precision_bits:
            return m
        prec *= 2
    return m
