"""Exact scalars in Q[sqrt(d1), ..., sqrt(dm)].

A value is stored as a finite sum ``sum_d c_d * sqrt(d)`` over distinct
squarefree radicands ``d >= 1`` with rational coefficients.  Distinct
squarefree square roots are linearly independent over Q, so the
representation is canonical and zero-testing is exact.

Purely rational results collapse to :class:`fractions.Fraction`, which keeps
the common case (integer structure constants) fast.  ``Surd`` arithmetic
accepts ints and Fractions on either side.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Union

Exact = Union[Fraction, "Surd"]


@lru_cache(maxsize=4096)
def _prime_factors(n: int) -> tuple[int, ...]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return tuple(out)


@lru_cache(maxsize=4096)
def _split_square(n: int) -> tuple[int, int]:
    """Return (s, d) with n = s*s*d and d squarefree."""
    if n <= 0:
        raise ValueError("expected a positive integer")
    s, d = 1, 1
    for p in _prime_factors(n):
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            d *= p
    return s, d


def _normalize(terms: dict[int, Fraction]) -> Exact:
    terms = {d: c for d, c in terms.items() if c != 0}
    if not terms:
        return Fraction(0)
    if len(terms) == 1 and 1 in terms:
        return terms[1]
    s = Surd.__new__(Surd)
    s.terms = terms
    return s


def _terms(x) -> dict[int, Fraction]:
    if isinstance(x, Surd):
        return x.terms
    if isinstance(x, (int, Fraction)):
        return {1: Fraction(x)} if x != 0 else {}
    raise TypeError(f"not an exact scalar: {x!r}")


class Surd:
    """An element of Q extended by finitely many square roots."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[int, Fraction | int]):
        clean: dict[int, Fraction] = {}
        for d, c in terms.items():
            if d < 1:
                raise ValueError("radicands must be positive")
            s, sq = _split_square(d)
            clean[sq] = clean.get(sq, Fraction(0)) + Fraction(c) * s
        self.terms = {d: c for d, c in clean.items() if c != 0}

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        try:
            b = _terms(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for d, c in b.items():
            out[d] = out.get(d, Fraction(0)) + c
        return _normalize(out)

    __radd__ = __add__

    def __neg__(self):
        return _normalize({d: -c for d, c in self.terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            b = _terms(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for d, c in b.items():
            out[d] = out.get(d, Fraction(0)) - c
        return _normalize(out)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            b = _terms(other)
        except TypeError:
            return NotImplemented
        return _normalize(_mul_terms(self.terms, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            b = _terms(other)
        except TypeError:
            return NotImplemented
        if not b:
            raise ZeroDivisionError("division by zero surd")
        return _normalize(_mul_terms(self.terms, _inverse_terms(b)))

    def __rtruediv__(self, other):
        try:
            a = _terms(other)
        except TypeError:
            return NotImplemented
        return _normalize(_mul_terms(a, _inverse_terms(self.terms)))

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return 1 / (self ** -k)
        out: Exact = Fraction(1)
        base: Exact = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- comparison -------------------------------------------------------
    def sign(self) -> int:
        return _sign_terms(self.terms)

    def __eq__(self, other):
        try:
            return _terms(other) == self.terms
        except TypeError:
            if isinstance(other, float):
                return False
            return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def _cmp(self, other) -> int:
        return sign(self - other)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __bool__(self):
        return bool(self.terms)

    def __float__(self):
        return math.fsum(float(c) * math.sqrt(d) for d, c in self.terms.items())

    def __repr__(self):
        return f"Surd({render_scalar(self)!r})"

    __str__ = lambda self: render_scalar(self)  # noqa: E731


def _mul_terms(a: dict[int, Fraction], b: dict[int, Fraction]) -> dict[int, Fraction]:
    out: dict[int, Fraction] = {}
    for d1, c1 in a.items():
        for d2, c2 in b.items():
            g = math.gcd(d1, d2)
            d = (d1 // g) * (d2 // g)
            out[d] = out.get(d, Fraction(0)) + c1 * c2 * g
    return out


def _split_on_prime(t: dict[int, Fraction], p: int):
    """Write t = a + b*sqrt(p) with a, b free of p in their radicands."""
    a: dict[int, Fraction] = {}
    b: dict[int, Fraction] = {}
    for d, c in t.items():
        if d % p == 0:
            b[d // p] = c
        else:
            a[d] = c
    return a, b


def _pick_prime(t: dict[int, Fraction]) -> int | None:
    for d in sorted(t):
        if d > 1:
            return _prime_factors(d)[0]
    return None


def _inverse_terms(t: dict[int, Fraction]) -> dict[int, Fraction]:
    p = _pick_prime(t)
    if p is None:
        return {1: 1 / t[1]}
    a, b = _split_on_prime(t, p)
    # (a + b sqrt p)^-1 = (a - b sqrt p) / (a^2 - p b^2)
    conj = dict(a)
    for d, c in b.items():
        conj[d * p] = conj.get(d * p, Fraction(0)) - c
    norm = _mul_terms(a, a)
    for d, c in _mul_terms(b, b).items():
        norm[d] = norm.get(d, Fraction(0)) - p * c
    norm = {d: c for d, c in norm.items() if c != 0}
    return {d: c for d, c in _mul_terms(conj, _inverse_terms(norm)).items() if c != 0}


def _sign_terms(t: dict[int, Fraction]) -> int:
    t = {d: c for d, c in t.items() if c != 0}
    if not t:
        return 0
    p = _pick_prime(t)
    if p is None:
        return 1 if t[1] > 0 else -1
    a, b = _split_on_prime(t, p)
    sa, sb = _sign_terms(a), _sign_terms(b)
    if sa == 0:
        return sb
    if sb == 0 or sa == sb:
        return sa
    # opposite signs: compare a^2 with p b^2
    diff = _mul_terms(a, a)
    for d, c in _mul_terms(b, b).items():
        diff[d] = diff.get(d, Fraction(0)) - p * c
    return sa * _sign_terms(diff)


# -- module-level helpers ------------------------------------------------


def sign(x) -> int:
    if isinstance(x, Surd):
        return x.sign()
    return (x > 0) - (x < 0)


def sqrt_rational(q) -> Exact:
    """Exact square root of a nonnegative rational."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("square root of a negative rational")
    if q == 0:
        return Fraction(0)
    num, den = q.numerator, q.denominator
    s, d = _split_square(num * den)
    return _normalize({d: Fraction(s, den)})


def exact_sqrt(x) -> Exact:
    """Square root of an exact scalar when it stays in the field.

    Only rational inputs are supported; anything else raises ValueError so
    the caller can drop to float mode.
    """
    if isinstance(x, Surd):
        raise ValueError("square root of an irrational surd is not supported")
    return sqrt_rational(x)


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, Surd)) and not isinstance(x, bool)


def to_exact(x) -> Exact:
    if isinstance(x, Surd):
        return x
    if isinstance(x, (int, Fraction)) or isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"cannot convert {x!r} to an exact scalar")


# -- text form -----------------------------------------------------------

_TERM = re.compile(
    r"(?:(?P<rat>-?\d+(?:/[1-9]\d*)?)(?:\*sqrt\((?P<r1>\d+)\))?)|(?:sqrt\((?P<r2>\d+)\))"
)


class ScalarSyntaxError(ValueError):
    def __init__(self, text: str, pos: int, msg: str):
        super().__init__(f"{msg} at column {pos + 1} in {text!r}")
        self.text = text
        self.column = pos + 1


def parse_scalar(text: str) -> Exact:
    """Parse ``term (('+'|'-') term)*`` into an exact scalar."""
    pos = 0
    total: dict[int, Fraction] = {}
    sgn = 1
    n = len(text)
    if n == 0:
        raise ScalarSyntaxError(text, 0, "empty scalar")
    while True:
        m = _TERM.match(text, pos)
        if m is None or m.end() == pos:
            raise ScalarSyntaxError(text, pos, "expected a term")
        if m.group("r2") is not None:
            coef, rad = Fraction(1), int(m.group("r2"))
        else:
            coef = Fraction(m.group("rat"))
            rad = int(m.group("r1")) if m.group("r1") is not None else 1
        if rad == 0:
            coef, rad = Fraction(0), 1
        s, d = _split_square(rad)
        total[d] = total.get(d, Fraction(0)) + sgn * coef * s
        pos = m.end()
        if pos == n:
            break
        if text[pos] == "+":
            sgn = 1
        elif text[pos] == "-":
            sgn = -1
        else:
            raise ScalarSyntaxError(text, pos, "expected '+' or '-'")
        pos += 1
        if pos == n:
            raise ScalarSyntaxError(text, pos, "dangling operator")
    return _normalize(total)


def _render_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render_scalar(x) -> str:
    """Canonical text form; ``parse_scalar(render_scalar(x)) == x``."""
    t = _terms(to_exact(x) if not isinstance(x, Surd) else x)
    if not t:
        return "0"
    parts = []
    for idx, d in enumerate(sorted(t)):
        c = t[d]
        first = idx == 0
        if d == 1:
            body = _render_rational(abs(c)) if not first else _render_rational(c)
        elif abs(c) == 1:
            body = f"sqrt({d})" if (not first or c > 0) else f"-1*sqrt({d})"
        else:
            body = f"{_render_rational(abs(c) if not first else c)}*sqrt({d})"
        if first:
            parts.append(body)
        else:
            parts.append(("-" if c < 0 else "+") + body)
    return "".join(parts)
