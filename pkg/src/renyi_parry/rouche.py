"""Rouché certification on small circles around the first trinomial root,
and certified zeros of lenticular perturbations ``G_n + z^m1 + z^m2 + ...``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

from flint import acb, arb

from .balls import workprec
from .contour import (
    CirclePath,
    PolarRectangle,
    TaylorEnclosure,
    disk,
    unit_phase,
    winding_details,
    winding_number,
)
from .errors import DomainError, Inconclusive, NotUnique
from .newton import CertifiedPolynomial
from .polynomial import IntPolynomial, trinomial
from .trinomial import all_roots, modulus_bounds

__all__ = [
    "h1",
    "kappa",
    "find_a_max",
    "a_max_ball",
    "RoucheParameters",
    "asymptotic_criterion",
    "certify_rouche",
    "RoucheCertificate",
    "winding_number",
    "find_lenticular_zero",
    "lenticulus_scan",
]

PREC = 128


# criterion functions


def _check_a(a: float):
    if not a >= 1:
        raise DomainError("a must be at least 1")


def h1(a: float) -> float:
    """``|1 - e^(pi/a)| e^(-pi/a) / (e^(pi/a) + |1 - e^(pi/a)|)``."""
    _check_a(a)
    u = math.exp(math.pi / a)
    d = abs(1 - u)
    return d / u / (u + d)


def kappa(x: float, a: float) -> float:
    """Criterion function at ``X`` in [-1, 1]; equals ``h1(a)`` at ``X = 1``."""
    if not -1 <= x <= 1:
        raise DomainError("X must lie in [-1, 1]")
    _check_a(a)
    w = complex(math.exp(math.pi * x / a)) * complex(
        math.cos(math.pi * math.sqrt(1 - x * x) / a), math.sin(math.pi * math.sqrt(1 - x * x) / a)
    )
    d = abs(1 - w)
    e = math.exp(math.pi * x / a)
    return d / e / (e + d)


def a_max_ball() -> arb:
    """Exact maximizer of ``h1``: ``e^(pi/a) = 1 + 1/sqrt 2``."""
    return arb.pi() / (1 + 1 / arb(2).sqrt()).log()


def golden_section_max(f, lo: float, hi: float, tolerance: float) -> float:
    inv_phi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tolerance:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    return (a + b) / 2


@dataclass(frozen=True)
class RoucheParameters:
    a_max: float
    h_max: float
    threshold: float
    a_max_closed_form: float

    def c_lent(self, z1_modulus: float) -> float:
        return math.pi * z1_modulus / self.a_max


def find_a_max(tolerance: float = 1e-10) -> RoucheParameters:
    """Golden-section maximization of ``h1`` on [1, 100], cross-checked against the closed form."""
    if not tolerance > 0:
        raise DomainError("tolerance must be positive")
    a = golden_section_max(h1, 1.0, 100.0, tolerance)
    with workprec(PREC):
        exact = float(a_max_ball().mid())
    if abs(a - exact) > max(tolerance, 1e-7):
        raise AssertionError("golden-section maximizer disagrees with the closed form")
    h = h1(a)
    return RoucheParameters(a, h, h / (1 + h), exact)


@dataclass(frozen=True)
class CriterionResult:
    n: int
    holds: bool
    lhs: float
    threshold: float
    caveat: str | None = None

    @property
    def margin(self) -> float:
        return self.threshold - self.lhs


def asymptotic_criterion(n: int, params: RoucheParameters | None = None) -> CriterionResult:
    """``(Log n - LogLog n)/n < kappa/(1 + kappa)`` at ``X = 1``, ``a = a_max``."""
    if n < 2:
        raise DomainError("n must be at least 2")
    params = params or find_a_max()
    lhs = (math.log(n) - math.log(math.log(n))) / n
    caveat = "LogLog n < 0" if math.log(math.log(n)) < 0 else None
    return CriterionResult(n, lhs < params.threshold, lhs, params.threshold, caveat)


# Rouché on the circle around z_{1,n}


@dataclass(frozen=True)
class RoucheCertificate:
    n: int
    center: acb
    radius: arb
    arcs: int
    min_margin: float
    verdict: str
    arc_margins: tuple[tuple[Fraction, Fraction, float], ...] = field(repr=False, default=())
    witness: acb | None = None

    @property
    def certified(self) -> bool:
        return self.verdict == "Certified"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "center": [float(self.center.real.mid()), float(self.center.imag.mid())],
            "radius": float(self.radius.mid()),
            "arcs": self.arcs,
            "min_margin": self.min_margin,
            "verdict": self.verdict,
            "arc_margins": [[str(a), str(b), m] for a, b, m in self.arc_margins],
        }


def rouche_circle(n: int) -> tuple[acb, arb]:
    """Center ``z_{1,n}`` and radius ``pi |z_{1,n}| / (n a_max)``."""
    z1 = all_roots(n).root(1)
    with workprec(PREC):
        return z1, arb.pi() * abs(z1) / (n * a_max_ball())


def _rhs(r: arb, n: int) -> arb:
    if not r < 1:
        return arb("inf")
    return r ** (2 * n - 1) / (1 - r ** (n - 1))


def certify_rouche(n: int, initial_arcs: int = 64, max_depth: int = 20) -> RoucheCertificate:
    """Certify ``|z|^(2n-1)/(1 - |z|^(n-1)) < |G_n(z)|`` on every arc of the circle.

    Arcs with an undecided margin are bisected; an exact point with a certified
    negative margin gives the verdict Failed.
    """
    if n < 18:
        raise DomainError("the Rouché circle is set up for n >= 18")
    center, radius = rouche_circle(n)
    g = TaylorEnclosure(trinomial(n).coefficients)
    path = CirclePath(center, radius)
    margins: list[tuple[Fraction, Fraction, float]] = []
    undecided: list[tuple[Fraction, Fraction]] = []
    with workprec(PREC):
        queue = [(Fraction(k, initial_arcs), Fraction(k + 1, initial_arcs), 0) for k in range(initial_arcs)]
        while queue:
            t0, t1, depth = queue.pop()
            c, r = path.enclosure(t0, t1)
            low = g.on_disk(c, r).abs_lower() - _rhs(c.abs_upper() + r, n)
            if low > 0:
                margins.append((t0, t1, float(low.lower())))
                continue
            p = path.point((t0 + t1) / 2)
            point_margin = g(p).abs_upper() - _rhs(p.abs_lower(), n)
            if point_margin < 0:
                return RoucheCertificate(n, center, radius, len(margins), float(point_margin.mid()),
                                         "Failed", tuple(sorted(margins)), p)
            if depth < max_depth:
                m = (t0 + t1) / 2
                queue.extend([(t0, m, depth + 1), (m, t1, depth + 1)])
            else:
                undecided.append((t0, t1))
    if undecided:
        raise Inconclusive(f"{len(undecided)} arcs undecided for n = {n}", details=undecided)
    margins.sort()
    return RoucheCertificate(n, center, radius, len(margins), min(m for _, _, m in margins),
                             "Certified", tuple(margins))


# lenticular zeros


def _section_coefficients(section, digits: int = 600) -> list[int]:
    if isinstance(section, IntPolynomial):
        return list(section.coefficients)
    if isinstance(section, (list, tuple)):
        return list(section)
    # a Parry Upper series: its prefix polynomial
    return section.coefficients(digits)


@dataclass(frozen=True)
class LenticularZero:
    zero: acb
    center: acb
    radius: arb
    winding: int
    inside_disk: bool
    inside_modulus_limit: bool


def find_lenticular_zero(section, n: int, digits: int = 600) -> acb:
    """The zero of ``section`` inside the circle around ``z_{1,n}``, as a certified ball."""
    return lenticular_zero_details(section, n, digits).zero


def lenticular_zero_details(section, n: int, digits: int = 600) -> LenticularZero:
    coeffs = _section_coefficients(section, digits)
    center, radius = rouche_circle(n)
    f = TaylorEnclosure(coeffs)
    w = winding_number(f, CirclePath(center, radius))
    if w != 1:
        raise NotUnique(f"winding number {w} around z_1,{n}", count=w)
    poly = CertifiedPolynomial(coeffs)
    with workprec(PREC):
        omega = poly.certify(center, PREC)
        dist = abs(omega - center)
        inside = bool(dist < radius)
        if not inside:
            raise Inconclusive("Newton from z_1,n left the Rouché disk")
        if not abs(omega) < 1:
            raise Inconclusive("|omega| < 1 not certified")
        if not omega.imag > 0:
            raise Inconclusive("Im omega != 0 not certified")
        c_lent = arb.pi() * abs(center) / a_max_ball()
        below_limit = bool(abs(omega) < 1 - c_lent / n)
    return LenticularZero(omega, center, radius, w, inside, below_limit)


@dataclass(frozen=True)
class ScanResult:
    zeros: tuple[acb, ...]
    undecided: tuple[PolarRectangle, ...]
    trinomial_roots: tuple[acb, ...] = ()

    def csv(self) -> str:
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["re", "im", "kind"])
        for z in self.trinomial_roots:
            w.writerow([_f(z.real), _f(z.imag), "Gn_root"])
        for z in self.zeros:
            w.writerow([_f(z.real), _f(z.imag), "f_zero"])
        for cell in self.undecided:
            c = _rect_center(cell)
            w.writerow([_f(c.real), _f(c.imag), "undecided"])
        return out.getvalue()


def _f(x: arb) -> str:
    return repr(float(x.mid()))


def _rect_center(cell: PolarRectangle) -> acb:
    r = (cell.r0 + cell.r1) / 2
    return arb(r.numerator) / r.denominator * unit_phase((cell.a0 + cell.a1) / 2)


def _trisect(cell: PolarRectangle) -> list[PolarRectangle]:
    rs = [cell.r0 + (cell.r1 - cell.r0) * k / 3 for k in range(4)]
    as_ = [cell.a0 + (cell.a1 - cell.a0) * k / 3 for k in range(4)]
    return [PolarRectangle(rs[i], rs[i + 1], as_[j], as_[j + 1]) for i in range(3) for j in range(3)]


def lenticulus_scan(
    series,
    half_angle_degrees: Fraction,
    band: tuple[Fraction, Fraction],
    max_depth: int = 5,
    n: int | None = None,
    digits: int = 600,
) -> ScanResult:
    """Certified zeros in ``{lo < |z| < hi, |arg z| < half angle}`` by cell subdivision.

    Cells are polar rectangles split in three both ways, so the real axis stays
    inside a cell rather than on a boundary.  ``series`` is an IntPolynomial, a
    coefficient list, or a Parry Upper series (evaluated with its tail bound).
    ``n`` adds the roots of ``G_n`` in the region as plot data.
    """
    lo, hi = Fraction(band[0]), Fraction(band[1])
    if not 0 <= lo < hi:
        raise DomainError("band must satisfy 0 <= lo < hi")
    h = Fraction(half_angle_degrees) / 360
    if not 0 < h <= Fraction(1, 2):
        raise DomainError("half angle must lie in (0, 180] degrees")
    if isinstance(series, (IntPolynomial, list, tuple)):
        coeffs = _section_coefficients(series)
        f = TaylorEnclosure(coeffs)
        poly = CertifiedPolynomial(coeffs)
        exact_poly = True
    else:
        from .zeta import f_enclosure

        if not hi < 1:
            raise DomainError("series scans need the band inside the unit disk")
        f = f_enclosure(series, float(hi), tail=1e-20)
        poly = CertifiedPolynomial(series.coefficients(len(f.coefficients) - 1))
        exact_poly = False
    zeros: list[acb] = []
    undecided: list[PolarRectangle] = []
    queue = [(PolarRectangle(lo, hi, -h, h), 0)]
    with workprec(PREC):
        while queue:
            cell, depth = queue.pop()
            try:
                w = winding_number(f, cell)
            except Inconclusive:
                w = None
            if w == 0:
                continue
            if w == 1:
                z = _zero_in_cell(f, poly, cell, exact_poly)
                if z is not None:
                    zeros.append(z)
                    continue
            if depth < max_depth:
                queue.extend((c, depth + 1) for c in _trisect(cell))
            else:
                undecided.append(cell)
    zeros.sort(key=lambda z: (float(z.imag.mid()), float(z.real.mid())))
    roots: tuple[acb, ...] = ()
    if n is not None:
        roots = tuple(_trinomial_roots_in(n, lo, hi, h))
    return ScanResult(tuple(zeros), tuple(undecided), roots)


def _zero_in_cell(f, poly: CertifiedPolynomial, cell: PolarRectangle, exact_poly: bool) -> acb | None:
    center = _rect_center(cell)
    try:
        z = poly.certify(center, PREC)
    except Inconclusive:
        return None
    if not cell.contains(z):
        return None
    if exact_poly:
        return z
    # the truncated root is only a guess for the full series: confirm with a
    # winding number on a small circle around it
    r = max(float(z.rad()) * 16, 1e-25)
    while r < 1e-3:
        ball = disk(acb(z.real.mid(), z.imag.mid()), arb(r))
        if cell.contains(ball):
            try:
                if winding_number(f, CirclePath(acb(z.real.mid(), z.imag.mid()), arb(r)), 16, 8) == 1:
                    return ball
            except Inconclusive:
                pass
        r *= 16
    return None


def _trinomial_roots_in(n: int, lo: Fraction, hi: Fraction, h: Fraction) -> list[acb]:
    rs = all_roots(n)
    out = []
    with workprec(PREC):
        limit = 2 * arb.pi() * arb(h.numerator) / h.denominator
        for z in rs.all_balls():
            m = abs(z)
            if m > arb(lo.numerator) / lo.denominator and m < arb(hi.numerator) / hi.denominator and abs(z.arg()) < limit:
                out.append(z)
    return out


def empty_band(n: int) -> tuple[Fraction, Fraction]:
    """A band entirely beyond the root modulus bound of ``G_n``."""
    with workprec(PREC):
        hi_bound = modulus_bounds(n)[1]
    lo = Fraction(math.ceil(float(hi_bound.upper()) * 1000) + 1, 1000)
    return lo, lo + Fraction(1, 10)
