"""Roots of the trinomials ``G_n(x) = -1 + x + x^n``.

The upper roots ``z_{j,n}`` are indexed by increasing argument; they start
from Newton at ``exp(2 pi i j / n)`` and are then certified one by one.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

from flint import acb, arb

from .algebraic import AlgebraicNumber
from .balls import precisions, workprec
from .errors import DomainError, Inconclusive
from .newton import CertifiedPolynomial, balls_disjoint
from .polynomial import IntPolynomial, trinomial

X2_X_1 = IntPolynomial([1, -1, 1])
DEFAULT_RADIUS = 1e-30


def _check_n(n: int, low: int = 2):
    if not isinstance(n, int) or n < low:
        raise DomainError(f"n must be an integer >= {low}")


def _bits_for(radius: float) -> int:
    return max(64, int(-math.log2(radius)) + 32)


def theta_n(n: int, target_radius: float = DEFAULT_RADIUS) -> tuple[AlgebraicNumber, arb]:
    """The root of ``G_n`` in (0, 1), exact, and a ball of the requested radius."""
    _check_n(n)
    theta = AlgebraicNumber.unique_root_in(trinomial(n), 0, 1)
    return theta, theta.refine(target_radius)


def unit_root_index(n: int) -> int | None:
    """1-based index of ``exp(i pi / 3)`` among the upper roots, when it is a root."""
    return n // 6 + 1 if n % 6 == 5 else None


@dataclass(frozen=True)
class TrinomialRootSet:
    n: int
    theta: AlgebraicNumber
    theta_ball: arb
    upper_roots: tuple[acb, ...]
    negative_root: AlgebraicNumber | None = None
    unit_index: int | None = None
    prec: int = field(default=128, compare=False)

    @property
    def nonreal_upper(self) -> tuple[acb, ...]:
        return self.upper_roots[:-1] if self.negative_root is not None else self.upper_roots

    def all_balls(self) -> list[acb]:
        up = self.nonreal_upper
        balls = [acb(self.theta_ball)] + list(up) + [z.conjugate() for z in up]
        if self.negative_root is not None:
            balls.append(self.upper_roots[-1])
        return balls

    def root(self, j: int) -> acb:
        """``z_{j,n}`` for 1 <= j <= n // 2."""
        return self.upper_roots[j - 1]

    def is_exact_unit(self, j: int) -> bool:
        return self.unit_index == j


def all_roots(n: int, target_radius: float = DEFAULT_RADIUS) -> TrinomialRootSet:
    """Every root of ``G_n`` as a certified, pairwise disjoint ball."""
    _check_n(n)
    coeffs = list(trinomial(n).coefficients)
    poly = CertifiedPolynomial(coeffs)
    start = _bits_for(target_radius)
    last: Exception | None = None
    for prec in precisions():
        if prec < start:
            continue
        try:
            return _root_set(n, poly, prec, target_radius)
        except Inconclusive as exc:
            last = exc
    raise Inconclusive(f"roots of G_{n} not certified at the precision cap: {last}")


def _root_set(n: int, poly: CertifiedPolynomial, prec: int, target_radius: float) -> TrinomialRootSet:
    theta, theta_ball = theta_n(n, target_radius)
    half = n // 2
    nonreal = half - 1 if n % 2 == 0 else half
    upper = []
    with workprec(prec):
        for j in range(1, nonreal + 1):
            guess = _newton_float(n, cmath.exp(2j * math.pi * j / n))
            z = poly.certify(guess, prec, target_radius)
            if not z.imag > 0:
                raise Inconclusive(f"root {j} of G_{n} not certified in the upper half-plane")
            upper.append(z)
        negative = None
        if n % 2 == 0:
            negative = AlgebraicNumber.unique_root_in(trinomial(n), -2, -1)
            upper.append(acb(negative.refine(target_radius)))
        args = [z.arg() for z in upper]
    for a, b in zip(args, args[1:]):
        if not a < b:
            raise Inconclusive(f"arguments of the roots of G_{n} not strictly ordered")
    rs = TrinomialRootSet(n, theta, theta_ball, tuple(upper), negative, None, prec)
    balls = rs.all_balls()
    if len(balls) != n or not balls_disjoint(balls):
        raise Inconclusive(f"root balls of G_{n} overlap or miss roots")
    idx = unit_root_index(n)
    if idx is not None:
        with workprec(prec):
            w = acb.exp_pi_i(acb(1) / 3)
        if not upper[idx - 1].overlaps(w):
            raise AssertionError("exp(i pi/3) is not in the expected root ball")
        rs = TrinomialRootSet(n, theta, theta_ball, tuple(upper), negative, idx, prec)
    return rs


def _newton_float(n: int, z: complex) -> complex:
    for _ in range(200):
        step = (-1 + z + z**n) / (1 + n * z ** (n - 1))
        z -= step
        if abs(step) < 1e-15 * max(1.0, abs(z)):
            break
    return z


# geometry


def sector_count(n: int, roots: TrinomialRootSet | None = None) -> int:
    """Certified number of roots with ``|arg z| < pi/3``."""
    rs = roots or all_roots(n)
    with workprec(rs.prec):
        limit = arb.pi() / 3
        count = 1  # theta_n
        for j, z in enumerate(rs.nonreal_upper, 1):
            if rs.is_exact_unit(j):
                continue
            a = z.arg()
            if a < limit:
                count += 2
            elif not a > limit:
                raise Inconclusive(f"root {j} of G_{n} straddles the sector boundary")
    return count


def expected_sector_count(n: int) -> int:
    return 1 + 2 * (n // 6)


@dataclass(frozen=True)
class CorrelationRow:
    j: int
    index_small: bool
    real_above_half: bool
    inside_disk: bool

    @property
    def consistent(self) -> bool:
        return self.index_small == self.real_above_half == self.inside_disk


@dataclass(frozen=True)
class CorrelationReport:
    n: int
    rows: tuple[CorrelationRow, ...]
    theta_below_first: bool
    moduli_increasing: bool

    @property
    def ok(self) -> bool:
        return all(r.consistent for r in self.rows) and self.theta_below_first and self.moduli_increasing


def _decide(x: arb, threshold, what: str) -> bool:
    if x > threshold:
        return True
    if x < threshold:
        return False
    raise Inconclusive(f"{what} not decided")


def index_modulus_correlation(n: int, roots: TrinomialRootSet | None = None) -> CorrelationReport:
    """Check ``j <= n//6  <=>  Re z_j > 1/2  <=>  |z_j| < 1`` and the modulus ordering."""
    _check_n(n, 6)
    rs = roots or all_roots(n)
    rows = []
    with workprec(rs.prec):
        for j, z in enumerate(rs.nonreal_upper, 1):
            if rs.is_exact_unit(j):
                # exp(i pi/3): real part exactly 1/2, modulus exactly 1
                rows.append(CorrelationRow(j, j <= n // 6, False, False))
                continue
            re_big = _decide(z.real, arb(0.5), f"Re z_{j},{n} vs 1/2")
            inside = not _decide(abs(z), arb(1), f"|z_{j},{n}| vs 1")
            rows.append(CorrelationRow(j, j <= n // 6, re_big, inside))
        mods = [abs(z) for z in rs.nonreal_upper]
        theta_first = bool(rs.theta_ball < mods[0]) if mods else True
        k = n // 6
        increasing = all(bool(mods[j] < mods[j + 1]) for j in range(k - 1)) if k >= 2 else True
    return CorrelationReport(n, tuple(rows), theta_first, increasing)


def modulus_bounds(n: int) -> tuple[arb, arb]:
    """Annulus ``1 - 2 Log n / n <= |z| <= 1 + 2 Log 2 / n`` holding every root."""
    return 1 - 2 * arb(n).log() / n, 1 + 2 * arb(2).log() / n


def moduli_within_bounds(rs: TrinomialRootSet) -> bool:
    with workprec(rs.prec):
        lo, hi = modulus_bounds(rs.n)
        return all(bool(abs(z) >= lo) and bool(abs(z) <= hi) for z in rs.all_balls())


# asymptotic expansions


@dataclass(frozen=True)
class Deviation:
    name: str
    measured: arb
    bound: arb | None
    scale: arb | None = None

    @property
    def within(self) -> bool | None:
        """True/False against a bound with a stated constant, None when report-only."""
        if self.bound is None:
            return None
        return bool(self.measured <= self.bound)

    @property
    def implied_constant(self) -> float | None:
        if self.scale is None:
            return None
        return float((self.measured / self.scale).upper())


@dataclass(frozen=True)
class AsymptoticReport:
    n: int
    D_theta: arb
    tl_theta_bound: arb
    lambda_n: arb
    D_lambda: arb
    tl_lambda_bound: arb
    D_Re_z1: arb | None
    D_Im_z1: arb | None
    deviations: tuple[Deviation, ...]

    @property
    def violations(self) -> list[str]:
        return [d.name for d in self.deviations if d.within is False]

    @property
    def max_deviation(self) -> float:
        return max(float(d.measured.upper()) for d in self.deviations)


def limited_expansion_theta(n: int) -> arb:
    L = arb(n).log()
    LL = L.log()
    inner = LL - n * (1 - L / n).log() - L
    return 1 - (L / n) * (1 - ((n - L) / (n * L + n - L)) * inner)


def asymptotic_report(n: int, prec: int = 128) -> AsymptoticReport:
    """Limited expansions of ``theta_n`` and ``z_{1,n}`` against certified roots.

    Bounds with a stated constant (1/2 for theta, 1 for lambda) are checked;
    the remaining terminants are reported as implied constants.
    """
    _check_n(n)
    theta, _ = theta_n(n)
    with workprec(prec):
        L = arb(n).log()
        LL = L.log()
        ratio = LL / L
        t = theta.enclosure(prec)
        d_theta = limited_expansion_theta(n)
        tl_theta = ratio**2 / (2 * n)
        lam = 1 - (1 - d_theta) * n / L
        d_lam = ratio / (1 + 1 / L)
        tl_lam = LL / n
        devs = [
            Deviation("theta", abs(t - d_theta), tl_theta),
            Deviation("lambda", abs(lam - d_lam), tl_lam),
        ]
        d_re = d_im = None
        if n >= 18:
            z1 = all_roots(n).root(1)
            pi = arb.pi()
            d_re = t + (2 * pi**2 / n) / L**2 * (1 + 2 * lam)
            d_im = (2 * pi / n) * (1 - (1 + lam) / L)
            devs.append(Deviation("Re z1", abs(z1.real - d_re), None, ratio**2 / (n * L**3)))
            devs.append(Deviation("Im z1", abs(z1.imag - d_im), None, ratio**2 / (n * L**2)))
            main = 1 - (L - LL) / n
            devs.append(Deviation("|z1|", abs(abs(z1) - main), None, ratio / n))
    return AsymptoticReport(n, d_theta, tl_theta, lam, d_lam, tl_lam, d_re, d_im, tuple(devs))


# irreducibility


class Factorization(enum.Enum):
    IRREDUCIBLE = "irreducible"
    CYCLOTOMIC_FACTOR_X2_X_1 = "x^2-x+1 factor"


def irreducibility_class(n: int) -> Factorization:
    """Classification by ``n mod 6``, cross-checked by exact division."""
    _check_n(n)
    by_residue = Factorization.CYCLOTOMIC_FACTOR_X2_X_1 if n % 6 == 5 else Factorization.IRREDUCIBLE
    divides = X2_X_1.divides(trinomial(n))
    if divides != (by_residue is Factorization.CYCLOTOMIC_FACTOR_X2_X_1):
        raise AssertionError(f"x^2-x+1 division test disagrees with n mod 6 for n = {n}")
    return by_residue


def trinomial_row(n: int) -> dict:
    """Summary row for tables: n, 1/theta_n, sector count, largest deviation."""
    theta, ball = theta_n(n)
    with workprec(128):
        inv = 1 / ball
    rep = asymptotic_report(n)
    return {
        "n": n,
        "theta_inv": float(inv.mid()),
        "p_n": sector_count(n),
        "max_deviation": rep.max_deviation,
        "violations": rep.violations,
    }
