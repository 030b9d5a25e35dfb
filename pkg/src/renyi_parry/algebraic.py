"""Real algebraic numbers, exact arithmetic in Z[beta] and certified signs."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from flint import arb, arb_poly, fmpq, fmpq_poly, fmpz_poly

from .balls import arb_to_fractions, interval_ball, precisions, sign, to_arb, workprec
from .errors import DomainError, Inconclusive, PrecisionExceeded
from .polynomial import IntPolynomial, descartes_sign_changes, poly_gcd, squarefree_part

# root isolation


def root_bound(p: IntPolynomial) -> Fraction:
    """Cauchy bound: every root has modulus below the returned value."""
    lead = abs(p.leading)
    return 1 + Fraction(max(abs(c) for c in p.coefficients[:-1]), lead) if p.degree else Fraction(1)


def _descartes_count(p: IntPolynomial, lo: Fraction, hi: Fraction) -> int:
    """Descartes bound on the number of roots in the open interval (lo, hi).

    Maps (lo, hi) onto (0, 1), then (0, 1) onto (0, infinity) via x -> 1/(1+x).
    The count is exact when it is 0 or 1.
    """
    n = p.degree
    affine = fmpq_poly([fmpq(lo.numerator, lo.denominator), fmpq((hi - lo).numerator, (hi - lo).denominator)])
    q = fmpq_poly(list(p.coefficients))(affine)
    num = q.numer()
    coeffs = [int(c) for c in num.coeffs()]
    coeffs += [0] * (n + 1 - len(coeffs))
    rev = fmpz_poly(coeffs[::-1])
    shifted = rev(fmpz_poly([1, 1]))
    return descartes_sign_changes([int(c) for c in shifted.coeffs()])


def isolate_real_roots(
    p: IntPolynomial, interval: tuple[Fraction, Fraction] | None = None
) -> list[tuple[Fraction, Fraction]]:
    """Disjoint rational intervals, each holding exactly one real root of ``p``.

    Roots are searched in the open interval; a root found exactly at a bisection
    point is returned as the degenerate interval ``(r, r)``.  Endpoints of
    nondegenerate intervals are never roots.
    """
    if p.is_zero():
        raise DomainError("cannot isolate roots of the zero polynomial")
    sqf = squarefree_part(p)
    assert sqf.degree == 0 or poly_gcd(sqf, sqf.derivative()).degree == 0
    if sqf.degree == 0:
        return []
    if interval is None:
        b = root_bound(sqf)
        interval = (-b, b)
    lo, hi = Fraction(interval[0]), Fraction(interval[1])
    if lo >= hi:
        raise DomainError("root isolation needs lo < hi")
    found: list[tuple[Fraction, Fraction]] = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        count = _descartes_count(sqf, a, b)
        if count == 0:
            continue
        if count == 1:
            found.append(_clean_endpoints(sqf, a, b))
            continue
        m = (a + b) / 2
        if sqf.sign_at(m) == 0:
            found.append((m, m))
        stack.append((m, b))
        stack.append((a, m))
    # endpoint cleaning can turn an interval degenerate; keep order and uniqueness
    found.sort()
    return found


def _clean_endpoints(p: IntPolynomial, a: Fraction, b: Fraction) -> tuple[Fraction, Fraction]:
    """Shrink (a, b) so that neither endpoint is a root, keeping its single root inside."""
    while p.sign_at(a) == 0 or p.sign_at(b) == 0:
        m = (a + b) / 2
        if p.sign_at(m) == 0:
            return (m, m)
        if _descartes_count(p, a, m) == 1:
            b = m
        else:
            a = m
    return (a, b)


# algebraic numbers


class AlgebraicNumber:
    """Real root of an integer polynomial, pinned by a rational isolating interval.

    The defining polynomial is stored squarefree, primitive, with positive
    leading coefficient.  The interval is fixed at construction; refinement only
    tightens a cached enclosure inside it.
    """

    __slots__ = ("defining_poly", "lo", "hi", "_lock", "_lo_ref", "_hi_ref", "_balls")

    def __init__(self, defining_poly: IntPolynomial, lo, hi, *, check: bool = True):
        poly = squarefree_part(defining_poly)
        lo, hi = Fraction(lo), Fraction(hi)
        if poly.degree < 1:
            raise DomainError("defining polynomial must be nonconstant")
        if check:
            if lo > hi:
                raise DomainError("isolating interval must satisfy lo <= hi")
            if lo == hi:
                if poly.sign_at(lo) != 0:
                    raise DomainError("degenerate interval is not a root")
            else:
                if poly.sign_at(lo) == 0 or poly.sign_at(hi) == 0:
                    lo, hi = _clean_endpoints(poly, lo, hi)
                if lo != hi and _descartes_count(poly, lo, hi) != 1:
                    raise DomainError("interval does not isolate a single root")
        if poly.degree == 1 and lo != hi:
            r = Fraction(-poly[0], poly[1])
            lo = hi = r
        self.defining_poly = poly
        self.lo = lo
        self.hi = hi
        self._lock = threading.Lock()
        self._lo_ref = lo
        self._hi_ref = hi
        self._balls: dict[int, arb] = {}

    # constructors

    @classmethod
    def real_roots(cls, p: IntPolynomial, interval=None) -> list[AlgebraicNumber]:
        return [cls(p, a, b, check=False) for a, b in isolate_real_roots(p, interval)]

    @classmethod
    def unique_root_in(cls, p: IntPolynomial, lo, hi) -> AlgebraicNumber:
        roots = isolate_real_roots(p, (Fraction(lo), Fraction(hi)))
        if len(roots) != 1:
            raise DomainError(f"expected one root in ({lo}, {hi}), found {len(roots)}")
        return cls(p, *roots[0], check=False)

    @classmethod
    def largest_real_root(cls, p: IntPolynomial) -> AlgebraicNumber:
        roots = isolate_real_roots(p)
        if not roots:
            raise DomainError("polynomial has no real root")
        return cls(p, *roots[-1], check=False)

    @classmethod
    def rational(cls, r) -> AlgebraicNumber:
        r = Fraction(r)
        return cls(IntPolynomial([-r.numerator, r.denominator]), r, r)

    # identity

    def _key(self):
        return (self.defining_poly, self.lo, self.hi)

    def __eq__(self, other) -> bool:
        return isinstance(other, AlgebraicNumber) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"AlgebraicNumber({list(self.defining_poly.coefficients)}, ~{self.approx():.12g})"

    @property
    def degree(self) -> int:
        return self.defining_poly.degree

    def is_exact_rational(self) -> bool:
        return self.lo == self.hi

    # refinement

    def enclosure(self, bits: int) -> arb:
        """Ball around the root with radius at most ``2^-bits`` (absolute)."""
        with self._lock:
            for b, ball in self._balls.items():
                if b >= bits:
                    return ball
            ball = self._refine_locked(bits)
            self._balls[bits] = ball
            return ball

    def refine(self, target_radius: float) -> arb:
        if not target_radius > 0:
            raise DomainError("target radius must be positive")
        bits = 1
        while 2.0**-bits > target_radius:
            bits += 1
        return self.enclosure(bits)

    def approx(self) -> float:
        return float(self.enclosure(60).mid())

    def _refine_locked(self, bits: int) -> arb:
        if self.lo == self.hi:
            with workprec(max(bits + 32, 64)):
                return to_arb(self.lo)
        target = Fraction(1, 2**bits)
        p = self.defining_poly
        lo, hi = self._lo_ref, self._hi_ref
        s_lo = p.sign_at(lo)
        cap = max(p_ for p_ in precisions()) + 64
        wp = max(bits + 32, 64)
        # exact bisection until the derivative is bounded away from zero
        while True:
            with workprec(wp):
                dpoly = arb_poly(list(p.derivative().coefficients))
                if not dpoly(interval_ball(lo, hi)).contains(0):
                    break
            m = (lo + hi) / 2
            s = p.sign_at(m)
            if s == 0:
                self._balls.clear()
                with workprec(wp):
                    return to_arb(m)
            if s == s_lo:
                lo = m
            else:
                hi = m
            if hi - lo <= target:
                break
        while hi - lo > target:
            if wp > cap:
                raise PrecisionExceeded(f"refinement in ({float(lo)}, {float(hi)}) exceeded the precision cap")
            improved = False
            with workprec(wp):
                P = arb_poly(list(p.coefficients))
                D = P.derivative()
                for _ in range(64):
                    X = interval_ball(lo, hi)
                    dX = D(X)
                    if dX.contains(0):
                        break
                    m = arb(X.mid())
                    N = m - P(m) / dX
                    if not N.overlaps(X):
                        raise AssertionError("interval Newton lost the root")
                    nlo, nhi = arb_to_fractions(N)
                    nlo, nhi = max(nlo, lo), min(nhi, hi)
                    if nhi - nlo >= (hi - lo) * Fraction(3, 4):
                        break
                    lo, hi = nlo, nhi
                    improved = True
                    if hi - lo <= target:
                        break
            if hi - lo <= target:
                break
            if not improved:
                wp *= 2
                # fall back on one exact bisection step to guarantee progress
                m = (lo + hi) / 2
                s = p.sign_at(m)
                if s == 0:
                    lo = hi = m
                    break
                if s == s_lo:
                    lo = m
                else:
                    hi = m
        self._lo_ref, self._hi_ref = lo, hi
        with workprec(max(bits + 32, 64)):
            return interval_ball(lo, hi)


def compare(a: AlgebraicNumber, b: AlgebraicNumber) -> int:
    """Exact comparison of two real algebraic numbers."""
    if a is b:
        return 0
    lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
    if lo <= hi:
        # a common root inside both intervals means a == b, because each
        # interval holds exactly one root of its own polynomial
        g = poly_gcd(a.defining_poly, b.defining_poly)
        if g.degree >= 1:
            if lo == hi:
                if g.sign_at(lo) == 0:
                    return 0
            elif isolate_real_roots(g, (lo, hi)):
                return 0
    for prec in precisions():
        x = a.enclosure(prec)
        y = b.enclosure(prec)
        with workprec(prec + 16):
            s = sign(x - y)
        if s:
            return s
    raise PrecisionExceeded("comparison undecided at the precision cap")


# Z[beta]


@dataclass(frozen=True)
class ZBetaElement:
    """Element of Z[beta] in the power basis, reduced modulo the monic defining polynomial."""

    base: AlgebraicNumber
    coords: tuple[int, ...]

    def __post_init__(self):
        d = self.base.degree
        if len(self.coords) != d:
            raise DomainError(f"expected {d} coordinates, got {len(self.coords)}")

    @staticmethod
    def _check_base(base: AlgebraicNumber):
        if base.defining_poly.leading != 1:
            raise DomainError("Z[beta] arithmetic needs a monic defining polynomial")

    @classmethod
    def from_poly(cls, base: AlgebraicNumber, poly: IntPolynomial | Sequence[int]) -> ZBetaElement:
        cls._check_base(base)
        if not isinstance(poly, IntPolynomial):
            poly = IntPolynomial(poly)
        rem = poly % base.defining_poly
        d = base.degree
        coeffs = list(rem.coefficients) + [0] * (d - len(rem))
        return cls(base, tuple(coeffs))

    @classmethod
    def from_int(cls, base: AlgebraicNumber, n: int) -> ZBetaElement:
        cls._check_base(base)
        return cls(base, (n,) + (0,) * (base.degree - 1))

    @classmethod
    def generator(cls, base: AlgebraicNumber) -> ZBetaElement:
        return cls.from_poly(base, IntPolynomial([0, 1]))

    @classmethod
    def generator_inverse(cls, base: AlgebraicNumber) -> ZBetaElement:
        """beta^-1 in Z[beta]; needs a unit constant term."""
        p = base.defining_poly
        c0 = p[0]
        if abs(c0) != 1:
            raise DomainError("beta^-1 lies in Z[beta] only for a unit constant term")
        tail = IntPolynomial(p.coefficients[1:])
        return cls.from_poly(base, -c0 * tail)

    def as_poly(self) -> IntPolynomial:
        return IntPolynomial(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def _same(self, other: ZBetaElement):
        if self.base != other.base:
            raise DomainError("elements over different bases")

    def __add__(self, other) -> ZBetaElement:
        if isinstance(other, int):
            return ZBetaElement(self.base, (self.coords[0] + other,) + self.coords[1:])
        self._same(other)
        return ZBetaElement(self.base, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self) -> ZBetaElement:
        return ZBetaElement(self.base, tuple(-a for a in self.coords))

    def __sub__(self, other) -> ZBetaElement:
        return self + (-other)

    def __rsub__(self, other) -> ZBetaElement:
        return (-self) + other

    def __mul__(self, other) -> ZBetaElement:
        if isinstance(other, int):
            return ZBetaElement(self.base, tuple(other * a for a in self.coords))
        self._same(other)
        return ZBetaElement.from_poly(self.base, self.as_poly() * other.as_poly())

    __rmul__ = __mul__

    def __pow__(self, k: int) -> ZBetaElement:
        if k < 0:
            raise DomainError("negative powers are not in Z[beta] in general")
        result = ZBetaElement.from_int(self.base, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def times_generator(self) -> ZBetaElement:
        """Multiply by beta: shift, then fold the top coordinate back with the monic relation."""
        p = self.base.defining_poly.coefficients
        top = self.coords[-1]
        shifted = (0,) + self.coords[:-1]
        if top:
            shifted = tuple(c - top * p[i] for i, c in enumerate(shifted))
        return ZBetaElement(self.base, shifted)

    def ball(self, bits: int) -> arb:
        b = self.base.enclosure(bits)
        with workprec(bits + 16):
            return arb_poly(list(self.coords))(b)

    def approx(self) -> float:
        return float(self.ball(80).mid())

    def sign(self) -> int:
        return sign_exact(self)


def _is_root_at(poly: IntPolynomial, alpha: AlgebraicNumber) -> bool:
    """Exact test whether alpha is a root of poly."""
    if alpha.lo == alpha.hi:
        return poly.sign_at(alpha.lo) == 0
    g = poly_gcd(poly, alpha.defining_poly)
    if g.degree < 1:
        return False
    # g divides the squarefree defining polynomial, so it has at most one root in
    # the isolating interval, where the endpoints are not roots
    return g.sign_at(alpha.lo) * g.sign_at(alpha.hi) < 0


def sign_exact(x: ZBetaElement) -> int:
    """Sign of the real value of ``x``; 0 exactly when the value vanishes."""
    if x.is_zero():
        return 0
    tested_zero = False
    for prec in precisions():
        s = sign(x.ball(prec))
        if s is not None:
            return s
        if not tested_zero:
            tested_zero = True
            if _is_root_at(x.as_poly(), x.base):
                return 0
    raise PrecisionExceeded("sign undecided at the precision cap")


def sign_of_polynomial_at(poly: IntPolynomial, alpha: AlgebraicNumber) -> int:
    """Exact sign of ``poly(alpha)`` for any AlgebraicNumber (no monic requirement)."""
    if poly.is_zero():
        return 0
    if alpha.lo == alpha.hi:
        return poly.sign_at(alpha.lo)
    tested = False
    for prec in precisions():
        b = alpha.enclosure(prec)
        with workprec(prec + 16):
            s = sign(arb_poly(list(poly.coefficients))(b))
        if s is not None:
            return s
        if not tested:
            tested = True
            if _is_root_at(poly, alpha):
                return 0
    raise PrecisionExceeded("sign undecided at the precision cap")
