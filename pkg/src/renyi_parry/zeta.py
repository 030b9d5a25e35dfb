"""Parry Upper function and the dynamical zeta function of a beta-shift.

``f(z) = -1 + sum t_i z^i`` is built on the greedy digits of 1.  For Parry
bases it is rational and the zeta function ``zeta(z)`` follows from
``f * zeta = -1`` (or ``-(1 - z^N)`` when the expansion is finite).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from flint import acb, acb_poly, arb

from .algebraic import compare
from .balls import arb_to_fractions, to_arb, workprec
from .contour import CirclePath, TaylorEnclosure, winding_number
from .errors import DomainError, Inconclusive, InsufficientDigits, NotClassified
from .expansion import (
    GOLDEN,
    BetaExpansion,
    EventuallyPeriodic,
    Finite,
    TruncatedUnknown,
    dynamical_degree,
    parry_upper_rational_numerator,
)
from .polynomial import IntPolynomial

DEFAULT_TAIL = 1e-30
MAX_TERMS = 1 << 20


class ParryUpperSeries:
    """Read-only coefficient view of ``-1 + sum t_i z^i``."""

    def __init__(self, source: BetaExpansion):
        self.source = source
        self._gap = None
        self._coeffs: list[int] = [-1]

    def coefficient(self, i: int) -> int:
        if i < 0:
            raise DomainError("negative index")
        return -1 if i == 0 else self.source.digit(i)

    def coefficients(self, k: int) -> list[int]:
        """Coefficients of indices 0..k."""
        if len(self._coeffs) <= k:
            start = len(self._coeffs)
            self._coeffs.extend(self.source.digit(i) for i in range(start, k + 1))
        return self._coeffs[: k + 1]

    @property
    def finite_degree(self) -> int | None:
        s = self.source.status
        return s.length if isinstance(s, Finite) else None

    def support_gap(self) -> int:
        """A lower bound for the distance between consecutive nonzero digits.

        Exact over the whole word for classified expansions; for truncated ones
        the dynamical-degree bound is combined with the computed window.
        """
        if self._gap is None:
            e = self.source
            if isinstance(e.status, EventuallyPeriodic):
                w = e.word()
                n = len(w.prefix) + 2 * len(w.period) + 1
                ones = [i for i in range(1, n + 1) if w[i - 1]]
            else:
                ones = [i for i, t in enumerate(e.digits, 1) if t]
            observed = min((b - a for a, b in zip(ones, ones[1:])), default=None)
            if isinstance(e.status, TruncatedUnknown):
                structural = dynamical_degree(e.base) - 1 if compare(e.base, GOLDEN) <= 0 else 1
                gap = structural if observed is None else min(structural, observed)
            else:
                gap = observed if observed is not None else 1
            self._gap = max(1, gap)
        return self._gap


def _tail_bound(r: arb, start: int, gap: int) -> arb:
    """Bound for ``sum |z|^(i)`` over indices ``i >= start`` spaced at least ``gap`` apart."""
    return r**start / (1 - r**gap)


def f_eval(
    s: ParryUpperSeries,
    z: acb,
    tail: float = DEFAULT_TAIL,
    terms: int | None = None,
) -> acb:
    """Enclosure of ``f(z)``: a partial sum plus a gappiness-aware tail enclosure.

    ``terms`` fixes the truncation index K; otherwise K doubles until the tail
    radius is below ``tail``.
    """
    z = acb(z)
    r = z.abs_upper()
    if not r < 1:
        raise DomainError("|z| must be certified below 1")
    fin = s.finite_degree
    if fin is not None:
        return TaylorEnclosure(s.coefficients(fin))(z)
    gap = s.support_gap()
    avail = s.source.available_digits()
    if terms is None:
        k = 16
        while _tail_bound(r, k + 1, gap).upper() >= tail:
            if k >= MAX_TERMS:
                raise DomainError("tail does not reach the requested radius")
            if avail is not None and k >= avail:
                raise InsufficientDigits(f"tail needs more than the {avail} computed digits")
            k *= 2
        if avail is not None and _tail_bound(r, avail + 1, gap).upper() < tail:
            k = min(k, avail)
    else:
        k = terms
    if avail is not None and k > avail:
        raise InsufficientDigits(f"digit {k} beyond the {avail} computed")
    return TaylorEnclosure(s.coefficients(k), _series_tail(k, gap))(z)


def _series_tail(k: int, gap: int):
    def bound(radius: arb) -> arb:
        if not radius < 1:
            return arb("inf")
        return _tail_bound(radius, k + 1, gap)

    return bound


def f_enclosure(s: ParryUpperSeries, reach: float, tail: float = 1e-15) -> TaylorEnclosure:
    """Evaluator of ``f`` with disk enclosures, truncated so its tail is below
    ``tail`` on ``|z| <= reach``; the tail term is rigorous for every radius."""
    fin = s.finite_degree
    if fin is not None:
        return TaylorEnclosure(s.coefficients(fin))
    gap = s.support_gap()
    k = 16
    r = arb(reach)
    while _tail_bound(r, k + 1, gap).upper() > tail and k < MAX_TERMS:
        k *= 2
    avail = s.source.available_digits()
    if avail is not None:
        k = min(k, avail)
    return TaylorEnclosure(s.coefficients(k), _series_tail(k, gap))


def f_rational(e: BetaExpansion) -> tuple[IntPolynomial, IntPolynomial]:
    """``f`` as numerator / denominator integer polynomials."""
    num = parry_upper_rational_numerator(e)
    s = e.status
    if isinstance(s, Finite):
        return num, IntPolynomial([1])
    return num, IntPolynomial([1]) - IntPolynomial.monomial(s.period)


@dataclass(frozen=True)
class RationalForm:
    numerator: IntPolynomial
    denominator: IntPolynomial

    def __call__(self, z):
        return self.numerator(z) / self.denominator(z)

    def to_json(self) -> dict:
        return {
            "numerator": list(self.numerator.coefficients),
            "denominator": list(self.denominator.coefficients),
        }


@dataclass(frozen=True)
class SeriesOnly:
    series: ParryUpperSeries


@dataclass(frozen=True)
class DynamicalZeta:
    form: RationalForm | SeriesOnly
    terminal_index: int | None = None

    @property
    def is_rational(self) -> bool:
        return isinstance(self.form, RationalForm)


def zeta_closed_form(e: BetaExpansion) -> DynamicalZeta:
    """Rational zeta function: ``(1 - z^L) / P*(z)``, or ``(1 - z^N) / P*(z)`` for finite expansions.

    ``P*`` is minus the numerator of ``f``'s rational form.
    """
    s = e.status
    if isinstance(s, TruncatedUnknown):
        raise NotClassified("zeta has no known closed form for an unclassified expansion")
    star = -parry_upper_rational_numerator(e)
    if isinstance(s, Finite):
        return DynamicalZeta(RationalForm(1 - IntPolynomial.monomial(s.length), star), s.length)
    return DynamicalZeta(RationalForm(1 - IntPolynomial.monomial(s.period), star))


def series_zeta(e: BetaExpansion) -> DynamicalZeta:
    """Zeta function data for any expansion: rational when classified, series otherwise."""
    if e.is_classified:
        return zeta_closed_form(e)
    return DynamicalZeta(SeriesOnly(ParryUpperSeries(e)))


def identity_holds(e: BetaExpansion) -> bool:
    """Exact check of ``f * zeta = -1`` (or ``-(1 - z^N)``) as rational functions."""
    z = zeta_closed_form(e)
    fn, fd = f_rational(e)
    lhs = fn * z.form.numerator
    target = IntPolynomial([-1])
    if z.terminal_index is not None:
        target = IntPolynomial.monomial(z.terminal_index) - 1
    return lhs == target * fd * z.form.denominator


def _beta_ball(e: BetaExpansion, bits: int) -> arb:
    return e.base.enclosure(bits)


def takahashi_identity_check(e: BetaExpansion, z: acb, K: int, prec: int = 128) -> acb:
    """Ball for ``f(z) + (1 - beta z) sum_{k<=K} T^k(1) z^k``; it must contain 0."""
    with workprec(prec):
        z = acb(z)
        beta = _beta_ball(e, prec)
        r = z.abs_upper()
        if not r * beta.upper() < 1:
            raise DomainError("|z| must be certified below 1/beta")
        series = ParryUpperSeries(e)
        fz = f_eval(series, z, terms=K if e.available_digits() is None else min(K, e.available_digits()))
        cache: dict[tuple, arb] = {}
        coeffs = []
        for k in range(K + 1):
            x = e.orbit_element(k)
            if x.coords not in cache:
                cache[x.coords] = x.ball(prec)
            coeffs.append(acb(cache[x.coords]))
        orbit_sum = acb_poly(coeffs)(z)
        factor = 1 - acb(beta) * z
        # 0 <= T^k(1) < 1 for k >= 1
        tail = (factor.abs_upper() * r ** (K + 1) / (1 - r)).abs_upper()
        total = fz + factor * orbit_sum
        return total + acb(arb(0, tail), arb(0, tail))


@dataclass(frozen=True)
class FirstZeroReport:
    count: int
    radius: Fraction
    epsilon: Fraction
    zero: arb
    real: bool


def first_zero_check(e: BetaExpansion, min_epsilon: Fraction = Fraction(1, 1 << 40)) -> FirstZeroReport:
    """Winding-number certificate that ``f`` has exactly one zero in ``|z| <= 1/beta + eps``.

    ``f(1/beta) = 0`` holds exactly, so a count of one makes that zero simple and real.
    """
    if not e.is_classified:
        raise NotClassified("first zero check needs a classified base")
    beta = _beta_ball(e, 128)
    with workprec(128):
        inv = 1 / beta
    inv_hi = arb_to_fractions(inv)[1]
    if not inv_hi < 1:
        raise DomainError("base too close to 1")
    series = ParryUpperSeries(e)
    eps = (1 - inv_hi) / 4
    eps = Fraction(1, 1 << max(0, (eps.denominator // max(eps.numerator, 1)).bit_length()))
    last: Exception | None = None
    while eps >= min_epsilon:
        radius = inv_hi + eps
        path = CirclePath(acb(0), to_arb(radius))
        f = f_enclosure(series, float((1 + radius) / 2))
        try:
            w = winding_number(f, path)
        except (Inconclusive, DomainError, InsufficientDigits) as exc:
            last = exc
            w = None
        if w == 1:
            return FirstZeroReport(1, radius, eps, inv, True)
        if w == 0:
            raise Inconclusive("f has no zero inside the test circle")
        eps /= 2
    raise Inconclusive(f"no certified count of one down to epsilon {min_epsilon}", details=[last])
