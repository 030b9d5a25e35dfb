"""Exact integer polynomials.

Coefficients are stored in ascending degree order, so ``IntPolynomial((1, 1, 0, -1))``
is ``1 + X - X^3``.  The zero polynomial has an empty coefficient tuple.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

from flint import fmpz_poly

from .errors import DomainError, ParseError


def _strip(coeffs: Iterable[int]) -> tuple[int, ...]:
    out = [int(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class IntPolynomial:
    coefficients: tuple[int, ...]

    def __init__(self, coefficients: Iterable[int] = ()):
        object.__setattr__(self, "coefficients", _strip(coefficients))

    # construction helpers

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> IntPolynomial:
        return cls([0] * k + [c])

    @classmethod
    def constant(cls, c: int) -> IntPolynomial:
        return cls([c])

    @classmethod
    def from_flint(cls, p: fmpz_poly) -> IntPolynomial:
        return cls(int(c) for c in p.coeffs())

    @classmethod
    def from_roots_pattern(cls, exponents: Iterable[int], constant: int = -1) -> IntPolynomial:
        """Sparse polynomial ``constant + sum X^e`` (exponents may repeat)."""
        exps = list(exponents)
        coeffs = [0] * (max(exps, default=0) + 1)
        coeffs[0] += constant
        for e in exps:
            coeffs[e] += 1
        return cls(coeffs)

    def to_flint(self) -> fmpz_poly:
        return fmpz_poly(list(self.coefficients))

    # basic properties

    @property
    def degree(self) -> int:
        return max(len(self.coefficients) - 1, 0)

    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def leading(self) -> int:
        return self.coefficients[-1] if self.coefficients else 0

    def __getitem__(self, k: int) -> int:
        if 0 <= k < len(self.coefficients):
            return self.coefficients[k]
        return 0

    def __len__(self) -> int:
        return len(self.coefficients)

    def __iter__(self):
        return iter(self.coefficients)

    def height(self) -> int:
        """Max absolute value of the interior coefficients ``a_1 .. a_{d-1}``."""
        interior = self.coefficients[1:-1]
        return max((abs(c) for c in interior), default=0)

    def naive_height(self) -> int:
        return max((abs(c) for c in self.coefficients), default=0)

    def content(self) -> int:
        g = 0
        for c in self.coefficients:
            g = gcd(g, c)
        return g

    def primitive(self) -> IntPolynomial:
        """Primitive part with positive leading coefficient."""
        if self.is_zero():
            return self
        g = self.content()
        if self.leading < 0:
            g = -g
        return IntPolynomial(c // g for c in self.coefficients)

    def derivative(self) -> IntPolynomial:
        return IntPolynomial(k * c for k, c in enumerate(self.coefficients) if k)

    # arithmetic

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial(-c for c in self.coefficients)

    def __add__(self, other) -> IntPolynomial:
        other = _coerce(other)
        n = max(len(self), len(other))
        return IntPolynomial(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __sub__(self, other) -> IntPolynomial:
        return self + (-_coerce(other))

    def __rsub__(self, other) -> IntPolynomial:
        return _coerce(other) - self

    def __mul__(self, other) -> IntPolynomial:
        other = _coerce(other)
        if self.is_zero() or other.is_zero():
            return IntPolynomial()
        if len(self) * len(other) > 4000:
            return IntPolynomial.from_flint(self.to_flint() * other.to_flint())
        out = [0] * (len(self) + len(other) - 1)
        for i, a in enumerate(self.coefficients):
            if a:
                for j, b in enumerate(other.coefficients):
                    out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> IntPolynomial:
        result = IntPolynomial([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k: int) -> IntPolynomial:
        """Multiply by ``X^k``."""
        if self.is_zero():
            return self
        return IntPolynomial((0,) * k + self.coefficients)

    def truncate(self, k: int) -> IntPolynomial:
        """Terms of degree ``< k``."""
        return IntPolynomial(self.coefficients[:k])

    def divmod(self, divisor: IntPolynomial) -> tuple[IntPolynomial, IntPolynomial]:
        """Division with remainder when the divisor's leading coefficient is a unit,
        or when the division happens to be exact over Z."""
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        lead = divisor.leading
        rem = list(self.coefficients)
        dd = divisor.degree
        if len(rem) - 1 < dd:
            return IntPolynomial(), self
        quot = [0] * (len(rem) - dd)
        dcoeffs = divisor.coefficients
        for k in range(len(rem) - 1, dd - 1, -1):
            c = rem[k]
            if c == 0:
                continue
            q, r = divmod(c, lead)
            if r:
                raise DomainError("division not exact over the integers")
            quot[k - dd] = q
            off = k - dd
            for j, b in enumerate(dcoeffs):
                rem[off + j] -= q * b
        return IntPolynomial(quot), IntPolynomial(rem)

    def __floordiv__(self, divisor: IntPolynomial) -> IntPolynomial:
        return self.divmod(divisor)[0]

    def __mod__(self, divisor: IntPolynomial) -> IntPolynomial:
        return self.divmod(divisor)[1]

    def exact_div(self, divisor: IntPolynomial) -> IntPolynomial:
        q, r = self.divmod(divisor)
        if not r.is_zero():
            raise DomainError("polynomial division leaves a remainder")
        return q

    def divides(self, other: IntPolynomial) -> bool:
        """True if ``self`` divides ``other`` over Z."""
        try:
            _, r = other.divmod(self)
        except DomainError:
            return False
        return r.is_zero()

    # evaluation

    def __call__(self, x):
        """Horner evaluation at ints, Fractions, flint balls or other polynomials."""
        acc = 0 * x if not isinstance(x, IntPolynomial) else IntPolynomial()
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def eval_fraction(self, x: Fraction) -> Fraction:
        num, den = x.numerator, x.denominator
        d = self.degree
        total = 0
        for k, c in enumerate(self.coefficients):
            total += c * num**k * den ** (d - k)
        return Fraction(total, den**d)

    def sign_at(self, x: Fraction) -> int:
        """Exact sign of the value at a rational point."""
        num, den = x.numerator, x.denominator
        d = self.degree
        total = 0
        for k, c in enumerate(self.coefficients):
            total += c * num**k * den ** (d - k)
        return (total > 0) - (total < 0)

    def compose(self, other: IntPolynomial) -> IntPolynomial:
        return self(other)

    # text form

    def __str__(self) -> str:
        return format_polynomial(self)

    def pretty(self, var: str = "X") -> str:
        terms = []
        for k in range(len(self.coefficients) - 1, -1, -1):
            c = self.coefficients[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if mag == 1 else f"{mag}{mono}"
            terms.append((sign, body))
        if not terms:
            return "0"
        first_sign, first = terms[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text


def _coerce(x) -> IntPolynomial:
    if isinstance(x, IntPolynomial):
        return x
    if isinstance(x, int):
        return IntPolynomial([x])
    return NotImplemented


X = IntPolynomial([0, 1])


# reciprocity


def reciprocal(p: IntPolynomial) -> IntPolynomial:
    """``X^deg p * p(1/X)``."""
    if p.is_zero():
        raise DomainError("reciprocal of the zero polynomial")
    return IntPolynomial(reversed(p.coefficients))


def is_reciprocal(p: IntPolynomial) -> bool:
    if p.is_zero():
        raise DomainError("reciprocity of the zero polynomial")
    return p == reciprocal(p)


def descartes_sign_changes(coefficients: Sequence[int]) -> int:
    signs = [c > 0 for c in coefficients if c != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


# gcd and squarefree part


def poly_gcd(p: IntPolynomial, q: IntPolynomial) -> IntPolynomial:
    """Primitive gcd with positive leading coefficient."""
    if p.is_zero() and q.is_zero():
        raise DomainError("gcd of two zero polynomials")
    if p.is_zero():
        return q.primitive()
    if q.is_zero():
        return p.primitive()
    g = IntPolynomial.from_flint(p.to_flint().gcd(q.to_flint()))
    return g.primitive()


def squarefree_part(p: IntPolynomial) -> IntPolynomial:
    if p.degree < 1:
        return p.primitive()
    g = poly_gcd(p, p.derivative())
    return p.primitive().exact_div(g) if g.degree else p.primitive()


# cyclotomic polynomials


@lru_cache(maxsize=None)
def euler_phi(k: int) -> int:
    if k < 1:
        raise DomainError("euler_phi needs k >= 1")
    result, m, p = k, k, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def cyclotomic(k: int) -> IntPolynomial:
    """k-th cyclotomic polynomial, via X^k - 1 divided by the lower ones."""
    if k < 1:
        raise DomainError("cyclotomic index must be >= 1")
    poly = IntPolynomial.monomial(k) - 1
    for d in range(1, k):
        if k % d == 0:
            poly = poly.exact_div(cyclotomic(d))
    return poly


def cyclotomic_indices_up_to_degree(deg: int) -> list[int]:
    """All k with phi(k) <= deg; phi(k) >= sqrt(k/2) bounds the search."""
    return [k for k in range(1, 2 * deg * deg + 3) if euler_phi(k) <= deg]


def cyclotomic_part(p: IntPolynomial) -> tuple[IntPolynomial, list[tuple[int, int]]]:
    """Product of cyclotomic factors of ``p`` with multiplicity, by trial division."""
    rest = p
    found: list[tuple[int, int]] = []
    part = IntPolynomial([1])
    for k in cyclotomic_indices_up_to_degree(p.degree):
        phi_k = cyclotomic(k)
        mult = 0
        while rest.degree >= phi_k.degree:
            q, r = rest.divmod(phi_k)
            if not r.is_zero():
                break
            rest = q
            mult += 1
            part = part * phi_k
        if mult:
            found.append((k, mult))
    return part, found


def factor_ABC(p: IntPolynomial) -> tuple[IntPolynomial, IntPolynomial, IntPolynomial]:
    """Split ``p = A * B * C``: cyclotomic part, other reciprocal part, remainder.

    ``A * B`` is ``gcd(p, p*)``.  A is found by trial division of that gcd by the
    cyclotomic polynomials of degree at most ``deg p``.
    """
    if p.is_zero():
        raise DomainError("factor_ABC of the zero polynomial")
    ab = poly_gcd(p, reciprocal(p))
    a, _ = cyclotomic_part(ab)
    b = ab.exact_div(a)
    c = p.exact_div(ab)
    assert a * b * c == p, "factor_ABC reconstruction failed"
    return a, b, c


# text format


def parse_polynomial_line(line: str, lineno: int | None = None) -> IntPolynomial:
    text = line.split("#", 1)[0].strip()
    if not text:
        raise ParseError("empty polynomial line", lineno)
    try:
        coeffs = [int(tok) for tok in text.split()]
    except ValueError as exc:
        raise ParseError(f"bad coefficient in {text!r}", lineno) from exc
    poly = IntPolynomial(coeffs)
    if poly.is_zero():
        raise ParseError("zero polynomial", lineno)
    return poly


def format_polynomial(p: IntPolynomial) -> str:
    return " ".join(str(c) for c in p.coefficients) if p.coefficients else "0"


def read_polynomials(text: str) -> list[IntPolynomial]:
    polys = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        polys.append(parse_polynomial_line(stripped, lineno))
    return polys


LEHMER = IntPolynomial([1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])


def trinomial(n: int) -> IntPolynomial:
    """``-1 + X + X^n``."""
    if n < 2:
        raise DomainError("trinomial needs n >= 2")
    return IntPolynomial.from_roots_pattern([1, n])


def trinomial_reciprocal(n: int) -> IntPolynomial:
    """``X^n - X^(n-1) - 1``, whose root > 1 is the inverse of the trinomial root."""
    return -reciprocal(trinomial(n))
