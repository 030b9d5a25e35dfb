"""Certified winding numbers along closed contours.

A contour is parametrized by ``t`` in [0, 1] (rational turns).  Each piece of a
subdivision gets a ball enclosing it; when the image ball of a piece excludes
0 the argument increment along that piece is below pi in absolute value and is
read off exactly from the endpoint values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from flint import acb, acb_poly, arb, arb_poly, ctx, fmpq

from .balls import workprec
from .errors import Inconclusive

Evaluator = Callable[[acb], acb]


class TaylorEnclosure:
    """Polynomial (or truncated power series) evaluator with disk enclosures.

    Complex Horner on rectangular balls inflates radii by up to a factor
    sqrt(2) per step, so values are taken at exact midpoints with extra
    precision, and ``on_disk`` uses the second-order Taylor form around the
    center.  ``tail(R)`` bounds the neglected part of a series on ``|z| <= R``.
    """

    def __init__(self, coefficients, tail: Callable[[arb], arb] | None = None):
        self.coefficients = list(coefficients)
        self.tail = tail
        self.extra_bits = len(self.coefficients) // 2 + 16
        self._cache: dict[int, tuple] = {}

    def _polys(self):
        prec = ctx.prec + self.extra_bits
        if prec not in self._cache:
            with workprec(prec):
                coeffs = [acb(c) for c in self.coefficients]
                poly = acb_poly(coeffs)
                majorant = arb_poly([abs(c).upper() for c in coeffs])
                self._cache[prec] = (poly, poly.derivative(), majorant.derivative().derivative())
        return prec, self._cache[prec]

    def _tail(self, r: arb) -> arb:
        return self.tail(r).abs_upper() if self.tail is not None else arb(0)

    def __call__(self, z: acb) -> acb:
        z = acb(z)
        return self.on_disk(z, arb(0))

    def on_disk(self, center: acb, radius: arb) -> acb:
        prec, (poly, deriv, second) = self._polys()
        radius = arb(radius).abs_upper() + center.real.rad() + center.imag.rad()
        mid = acb(center.real.mid(), center.imag.mid())
        with workprec(prec):
            big_r = mid.abs_upper() + radius
            value = poly(mid)
            if radius == 0:
                spread = self._tail(big_r)
            else:
                spread = deriv(mid).abs_upper() * radius + second(big_r) * radius * radius / 2
                spread += self._tail(big_r)
            return disk(value, spread)


def image_of_disk(f, center: acb, radius: arb) -> acb:
    if hasattr(f, "on_disk"):
        return f.on_disk(center, radius)
    return f(disk(center, radius))


def unit_phase(t: Fraction) -> acb:
    """``exp(2 pi i t)`` for rational t."""
    s, c = arb.sin_cos_pi_fmpq(fmpq(2 * t.numerator, t.denominator))
    return acb(c, s)


def disk(center: acb, radius) -> acb:
    """Box containing the closed disk of the given radius around ``center``."""
    r = arb(radius).abs_upper()
    return center + acb(arb(0, r), arb(0, r))


@dataclass(frozen=True)
class CirclePath:
    center: acb
    radius: arb

    def point(self, t: Fraction) -> acb:
        return self.center + self.radius * unit_phase(t)

    def enclosure(self, t0: Fraction, t1: Fraction) -> tuple[acb, arb]:
        """Disk (center, radius) containing the arc."""
        mid = self.point((t0 + t1) / 2)
        # every point of the arc lies within half the arc length of its midpoint
        half_len = self.radius * arb.pi() * _rat(t1 - t0)
        return mid, half_len

    def breakpoints(self) -> tuple[Fraction, ...]:
        return (Fraction(0), Fraction(1))


@dataclass(frozen=True)
class PolarRectangle:
    """Boundary of ``{r e^(2 pi i a): r0 <= r <= r1, a0 <= a <= a1}`` (angles in turns)."""

    r0: Fraction
    r1: Fraction
    a0: Fraction
    a1: Fraction

    def _side(self, t: Fraction) -> tuple[int, Fraction]:
        side = min(int(t * 4), 3)
        return side, t * 4 - side

    def _radius(self, s: Fraction, rising: bool) -> Fraction:
        return self.r0 + (self.r1 - self.r0) * s if rising else self.r1 - (self.r1 - self.r0) * s

    def _angle(self, s: Fraction, rising: bool) -> Fraction:
        return self.a0 + (self.a1 - self.a0) * s if rising else self.a1 - (self.a1 - self.a0) * s

    def _coords(self, side: int, s: Fraction) -> tuple[Fraction, Fraction]:
        if side == 0:
            return self._radius(s, True), self.a0
        if side == 1:
            return self.r1, self._angle(s, True)
        if side == 2:
            return self._radius(s, False), self.a1
        return self.r0, self._angle(s, False)

    def point(self, t: Fraction) -> acb:
        if t >= 1:
            t = Fraction(0)
        side, s = self._side(t)
        r, a = self._coords(side, s)
        return _rat(r) * unit_phase(a)

    def enclosure(self, t0: Fraction, t1: Fraction) -> tuple[acb, arb]:
        side, s0 = self._side(t0)
        s1 = t1 * 4 - side
        r0, a0 = self._coords(side, s0)
        r1, a1 = self._coords(side, s1)
        if side in (0, 2):
            mid_r = (r0 + r1) / 2
            c = _rat(mid_r) * unit_phase(a0)
            return c, _rat(abs(r1 - r0) / 2)
        mid_a = (a0 + a1) / 2
        half_len = _rat(r0) * arb.pi() * _rat(abs(a1 - a0))
        c = _rat(r0) * unit_phase(mid_a)
        return c, half_len

    def breakpoints(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(k, 4) for k in range(5))

    def contains(self, z: acb) -> bool:
        """Certified: the ball z lies strictly inside the region."""
        r_lo, r_hi = z.abs_lower(), z.abs_upper()
        if not (r_lo > _rat(self.r0) and r_hi < _rat(self.r1)):
            return False
        arg = z.arg() / (2 * arb.pi())
        return bool(arg > _rat(self.a0) and arg < _rat(self.a1))


def _rat(x: Fraction) -> arb:
    return arb(fmpq(x.numerator, x.denominator))


@dataclass(frozen=True)
class WindingResult:
    winding: int
    pieces: int
    min_abs_lower: float


def winding_number(
    f: Evaluator,
    contour,
    initial_pieces: int = 64,
    max_depth: int = 20,
    prec: int = 128,
) -> int:
    return winding_details(f, contour, initial_pieces, max_depth, prec).winding


def winding_details(
    f: Evaluator,
    contour,
    initial_pieces: int = 64,
    max_depth: int = 20,
    prec: int = 128,
) -> WindingResult:
    """Winding number of ``f`` around 0 along ``contour``, with the piece count used."""
    with workprec(prec):
        bps = contour.breakpoints()
        per_side = max(1, initial_pieces // (len(bps) - 1))
        queue = []
        for a, b in zip(bps, bps[1:]):
            step = (b - a) / per_side
            queue.extend((a + k * step, a + (k + 1) * step, 0) for k in range(per_side))
        accepted: list[tuple[Fraction, Fraction]] = []
        undecided: list[tuple[Fraction, Fraction]] = []
        values: dict[Fraction, acb] = {}
        min_low = None

        def value(t: Fraction) -> acb:
            key = t % 1
            if key not in values:
                values[key] = f(contour.point(key))
            return values[key]

        total = arb(0)
        while queue:
            t0, t1, depth = queue.pop()
            image = image_of_disk(f, *contour.enclosure(t0, t1))
            ok = not image.contains(0)
            if ok:
                v0, v1 = value(t0), value(t1)
                if v0.contains(0) or v1.contains(0):
                    ok = False
                else:
                    inc = (v1 / v0).arg()
                    if inc.rad() > 0.5:
                        ok = False
            if ok:
                accepted.append((t0, t1))
                total += inc
                low = float(image.abs_lower())
                min_low = low if min_low is None else min(min_low, low)
            elif depth < max_depth:
                m = (t0 + t1) / 2
                queue.append((t0, m, depth + 1))
                queue.append((m, t1, depth + 1))
            else:
                undecided.append((t0, t1))
        if undecided:
            raise Inconclusive(f"{len(undecided)} contour pieces undecided", details=undecided)
        w = total / (2 * arb.pi())
        k = w.unique_fmpz()
        if k is None:
            raise Inconclusive("winding number not isolated to one integer", details=[w])
        return WindingResult(int(k), len(accepted), min_low if min_low is not None else 0.0)
