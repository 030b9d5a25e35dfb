"""Certified simple roots of complex polynomials.

Polishing is plain Newton on exact midpoints.  Certification is the disk form
of the Krawczyk test: with ``N(c) = c - p(c)/p'(c)`` and ``M`` bounding
``|p''|`` on the disk ``D(c, r)``, the inclusion
``|N(c) - c| + r^2 M / |p'(c)| < r`` shows that ``D(c, r)`` holds exactly one
root, and that root lies within ``r^2 M / |p'(c)|`` of ``N(c)``.
"""

from __future__ import annotations

from flint import acb, acb_poly, arb, arb_poly, ctx

from .balls import workprec
from .contour import disk
from .errors import Inconclusive


class CertifiedPolynomial:
    """A polynomial with ball coefficients, prepared for root certification."""

    def __init__(self, coefficients):
        self.coefficients = list(coefficients)
        self.degree = len(self.coefficients) - 1
        self.extra_bits = self.degree // 2 + 32
        self._cache: dict[int, tuple] = {}

    def prepared(self, prec: int):
        if prec not in self._cache:
            with workprec(prec):
                coeffs = [acb(c) for c in self.coefficients]
                p = acb_poly(coeffs)
                majorant = arb_poly([abs(c).upper() for c in coeffs])
                self._cache[prec] = (p, p.derivative(), majorant.derivative().derivative())
        return self._cache[prec]

    def value(self, z: acb, prec: int | None = None) -> acb:
        """``p(z)`` for a point ball, robust against the box-wrapping effect."""
        prec = (prec or ctx.prec) + self.extra_bits
        p, _, second = self.prepared(prec)
        z = acb(z)
        mid = acb(z.real.mid(), z.imag.mid())
        r = z.real.rad() + z.imag.rad()
        with workprec(prec):
            if r == 0:
                return p(mid)
            _, d, _ = self.prepared(prec)
            big = mid.abs_upper() + r
            return disk(p(mid), d(mid).abs_upper() * r + second(big) * r * r / 2)

    def newton_polish(self, start, prec: int, steps: int = 200) -> acb:
        """Midpoint Newton iteration; returns the last (exact) iterate."""
        wp = prec + self.extra_bits
        p, d, _ = self.prepared(wp)
        c = acb(start)
        with workprec(wp):
            c = acb(c.real.mid(), c.imag.mid())
            tol = arb(2) ** (-prec)
            for _ in range(steps):
                step = p(c) / d(c)
                c = c - step
                c = acb(c.real.mid(), c.imag.mid())
                if step.abs_upper() < tol:
                    break
        return c

    def certify(self, approx, prec: int = 128, target_radius: float | None = None) -> acb:
        """Ball containing the unique root near ``approx``; Inconclusive if the
        contraction test fails."""
        c = self.newton_polish(approx, prec)
        wp = prec + self.extra_bits
        p, d, second = self.prepared(wp)
        with workprec(wp):
            pc, dc = p(c), d(c)
            step = pc / dc
            nc = c - step
            dlow = dc.abs_lower()
            if not dlow > 0:
                raise Inconclusive("derivative not separated from 0 at the root estimate")
            r = step.abs_upper() * 4 + arb(2) ** (-prec - 8)
            for _ in range(12):
                m = second(c.abs_upper() + r)
                spread = r * r * m / dlow
                if (step.abs_upper() + spread) < r:
                    root = disk(nc, spread)
                    if target_radius is not None and not root.rad() < target_radius:
                        raise Inconclusive("certified ball wider than the requested radius")
                    return root
                r = r * 2
            raise Inconclusive("Krawczyk contraction test failed")


def certify_root(coefficients, approx, prec: int = 128) -> acb:
    return CertifiedPolynomial(coefficients).certify(approx, prec)


def balls_disjoint(balls) -> bool:
    for i, a in enumerate(balls):
        for b in balls[i + 1:]:
            if a.overlaps(b):
                return False
    return True
