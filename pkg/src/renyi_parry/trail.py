"""Polynomial sections, rewriting trails and the greedy expansion of the
remainder ``-P(gamma_s^-1)`` in base ``gamma_s``.

A section is ``S_s = -1 + sum_{j<=s} t_j X^j``; ``gamma_s^-1`` is its root in
(0, 1).  The trail rewrites ``1 = 1 + S_s`` step by step, adding multiples of
``X^q S_s`` until the coefficients of ``X^1..X^d`` read those of ``1 - P``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from flint import acb, arb

from .algebraic import AlgebraicNumber, ZBetaElement, compare, sign_exact, sign_of_polynomial_at
from .balls import certified_truncation, workprec
from .contour import CirclePath, TaylorEnclosure, winding_number
from .errors import DomainError, Inconclusive, InsufficientDigits, StructureError
from .expansion import (
    GOLDEN,
    BetaExpansion,
    EventuallyPeriodic,
    Finite,
    TruncatedUnknown,
    dynamical_degree,
    greedy_orbit,
)
from .newton import CertifiedPolynomial
from .polynomial import IntPolynomial, factor_ABC, is_reciprocal, poly_gcd, reciprocal
from .rouche import a_max_ball, rouche_circle

PREC = 128


@dataclass(frozen=True)
class SectionData:
    s: int
    section: IntPolynomial
    gamma: AlgebraicNumber
    gamma_inverse: AlgebraicNumber
    nonreciprocal: IntPolynomial
    n: int | None
    r_s: acb | None
    source: BetaExpansion = field(repr=False, compare=False, default=None)

    @property
    def s_c(self) -> int:
        return self.nonreciprocal.degree

    def gamma_decimal(self, places: int = 6) -> str:
        return certified_truncation(lambda: self.gamma.enclosure(PREC), places)


def build_section(e, s: int) -> SectionData:
    """Section ``S_s`` of the Parry Upper function and its distinguished roots.

    ``e`` is a BetaExpansion, or an integer polynomial ``-1 + X + ...`` standing
    for a synthetic series (then ``n`` is the index of its second nonzero digit).
    """
    if isinstance(e, BetaExpansion):
        avail = e.available_digits()
        if avail is not None and s > avail:
            raise InsufficientDigits(f"section {s} needs more than the {avail} computed digits")
        n = dynamical_degree(e.base) if compare(e.base, GOLDEN) <= 0 else None
        digits = e.prefix(s)
        beta = e.base
    else:
        coeffs = list(IntPolynomial(e).coefficients)
        if coeffs[:2] != [-1, 1] or any(c not in (0, 1) for c in coeffs[1:]):
            raise DomainError("synthetic series must read -1 + z + (0/1 digits)")
        if s > len(coeffs) - 1:
            raise InsufficientDigits(f"section {s} exceeds the series degree")
        ones = [i for i, c in enumerate(coeffs) if c and i >= 2]
        n = ones[0] if ones else None
        digits = coeffs[1 : s + 1]
        beta = None
    if s < (n or 1):
        raise DomainError("the section must reach the first nonzero digit after t_1")
    section = IntPolynomial([-1, *digits])
    inv = AlgebraicNumber.unique_root_in(section, 0, 1)
    _, _, c = factor_ABC(section)
    if sign_of_polynomial_at(c, inv) != 0:
        raise AssertionError("the root in (0, 1) is not a root of the nonreciprocal part")
    c_star = reciprocal(c)
    if c_star.leading < 0:
        c_star = -c_star
    gamma = AlgebraicNumber.largest_real_root(c_star)
    if beta is not None and not compare(gamma, beta) < 0:
        raise AssertionError("gamma_s must lie below beta")
    r_s = _conjugate_in_circle(c, n)
    return SectionData(s, section, gamma, inv, c, n, r_s, e if beta is not None else None)


def _conjugate_in_circle(c: IntPolynomial, n: int | None) -> acb | None:
    """The zero of ``C`` inside the circle around ``z_{1,n}``, when it is unique."""
    if n is None or n < 2:
        return None
    center, radius = rouche_circle(n)
    try:
        w = winding_number(TaylorEnclosure(c.coefficients), CirclePath(center, radius))
    except Inconclusive:
        return None
    if w != 1:
        return None
    with workprec(PREC):
        z = CertifiedPolynomial(c.coefficients).certify(center, PREC)
        if not abs(z - center) < radius:
            return None
    return z


def section_sizes(e: BetaExpansion, count: int = 2) -> list[int]:
    """Section lengths ``n + k L``: the trinomial prefix followed by ``k`` whole
    blocks of preperiod plus period (``L``)."""
    s = e.status
    n = dynamical_degree(e.base) if compare(e.base, GOLDEN) <= 0 else None
    if isinstance(s, EventuallyPeriodic):
        block = s.preperiod + s.period
        return [(n or block) + k * block for k in range(1, count + 1)]
    if isinstance(s, Finite):
        return [s.length] * count
    return [len(e.digits) * k // count for k in range(1, count + 1)]


# rewriting trail


def alphabet_bound(d: int, H: int) -> int:
    """``ceil(2((2^d - 1) H + 2^d) / 3)``."""
    if d < 1 or H < 1:
        raise DomainError("need d >= 1 and H >= 1")
    return -(-2 * height_bound(d, H) // 3)


def height_bound(q: int, H: int) -> int:
    return (2**q - 1) * H + 2**q


@dataclass(frozen=True)
class TrailRecord:
    P_beta: IntPolynomial
    d: int
    H: int
    Aq: tuple[IntPolynomial, ...]
    W: IntPolynomial
    step_heights: tuple[int, ...]
    height_bound: int
    m: int
    residual: IntPolynomial
    u_s: int | None = None
    digits: tuple[int, ...] = ()
    case: str | None = None
    nu: float | None = None
    beyond_W_nu: bool | None = None

    @property
    def identity_holds(self) -> bool:
        return self.residual.is_zero()

    @property
    def heights_ok(self) -> bool:
        per_step = all(h <= height_bound(q, self.H) for q, h in enumerate(self.step_heights, 1))
        return per_step and self.W.naive_height() <= self.height_bound


def build_trail(sec: SectionData, P_beta: IntPolynomial) -> TrailRecord:
    """Restore the coefficients of ``1 - P`` one at a time.

    With ``R_0 = 1 + S_s`` and ``R_q = R_(q-1) + c_q X^q S_s``, the rewriting
    polynomials are ``A'_q = 1 + sum_{k<=q} c_k X^k`` and
    ``A'_q S_s = -P_(<=q) + X^(q+1) V_q``; at ``q = d`` this is
    ``A'_d S_s = -P + X^(d+1) V_d`` and ``W = X V_d``.
    """
    d = P_beta.degree
    if d < 1 or P_beta[0] != 1 or P_beta.leading != 1:
        raise DomainError("P_beta must have constant and leading coefficient 1")
    if not is_reciprocal(P_beta):
        raise DomainError("P_beta must be reciprocal")
    if poly_gcd(P_beta, sec.nonreciprocal).degree > 0:
        raise StructureError("P_beta and the nonreciprocal part share a factor")
    H = max(1, P_beta.height())
    S = sec.section
    R = 1 + S
    c_list = [0] * (d + 1)
    Aq = []
    heights = []
    for q in range(1, d + 1):
        cq = R[q] + P_beta[q]
        c_list[q] = cq
        R = R + cq * S.shift(q)
        assert all(R[j] == -P_beta[j] for j in range(1, q + 1))
        Aq.append(IntPolynomial([1, *c_list[1 : q + 1]]))
        V = IntPolynomial(R.coefficients[q + 1 :])
        heights.append(V.naive_height())
    V = IntPolynomial(R.coefficients[d + 1 :])
    residual = Aq[-1] * S + P_beta - V.shift(d + 1)
    hb = height_bound(d, H)
    return TrailRecord(P_beta, d, H, tuple(Aq), V.shift(1), tuple(heights), hb,
                       alphabet_bound(d, H), residual)


# greedy gamma_s-expansion


@dataclass(frozen=True)
class GammaExpansion:
    digits: tuple[int, ...]
    status: object
    u_s: int
    case: str
    lower_ok: bool
    upper_ok: bool
    empirical_kappa: float

    @property
    def bounds_ok(self) -> bool:
        return self.lower_ok and self.upper_ok


def _poly_in(x: ZBetaElement, p: IntPolynomial) -> ZBetaElement:
    acc = ZBetaElement.from_int(x.base, 0)
    for c in reversed(p.coefficients):
        acc = acc * x + c
    return acc


def remainder_value(sec: SectionData, P_beta: IntPolynomial) -> ZBetaElement:
    """``-P(gamma_s^-1)`` as an exact element of Z[gamma_s]."""
    g_inv = ZBetaElement.generator_inverse(sec.gamma)
    return -_poly_in(g_inv, P_beta)


def greedy_gamma_expansion(sec: SectionData, P_beta: IntPolynomial, budget: int = 2000,
                           window: int = 64) -> GammaExpansion:
    """Greedy digits of ``-P(gamma_s^-1)`` in base ``gamma_s`` up to ``u_s + window``."""
    x = remainder_value(sec, P_beta)
    if sign_exact(x) <= 0:
        raise StructureError("P_beta(gamma_s^-1) is not negative")
    if sign_exact(x - 1) >= 0:
        raise StructureError("-P_beta(gamma_s^-1) is not below 1")
    u = None
    y = x
    digits: list[int] = []
    for k in range(1, budget + 1):
        y = y.times_generator()
        if sign_exact(y - 1) >= 0:
            u = k
            break
    if u is None:
        raise InsufficientDigits(f"no nonzero digit within {budget} steps")
    # full greedy run from the start, with cycle detection
    digits, status, _ = greedy_orbit(x, max(budget, u + window))
    assert digits[u - 1] == 1 and not any(digits[: u - 1])
    case = {Finite: "i", EventuallyPeriodic: "ii-1", TruncatedUnknown: "ii-2"}[type(status)]
    gamma = ZBetaElement.generator(sec.gamma)
    scaled = (gamma**u) * x
    lower_ok = sign_exact(scaled - 1) >= 0
    upper_ok = sign_exact(gamma - scaled * (gamma - 1)) >= 0
    with workprec(PREC):
        kappa = float((scaled * ZBetaElement.generator_inverse(sec.gamma)).ball(PREC).mid())
    return GammaExpansion(tuple(digits), status, u, case, lower_ok, upper_ok, kappa)


def greedy_residuals_ok(sec: SectionData, P_beta: IntPolynomial, digits) -> bool:
    """Exact check: partial sums never exceed the value, and the residual after
    k digits is below ``gamma^-k``."""
    y = remainder_value(sec, P_beta)
    for t in digits:
        y = y.times_generator() - t
        if sign_exact(y) < 0 or sign_exact(y - 1) >= 0:
            return False
    return True


# conjugate estimates


@dataclass(frozen=True)
class ConjugateEstimate:
    case: str
    bound: float
    measured: arb
    P_at_r: arb
    modulus_limit: float

    @property
    def within(self) -> bool:
        return bool(self.measured < arb(self.bound))

    def to_json(self) -> dict:
        return {"bound_value": self.bound, "measured_value": float(self.measured.upper())}


def conjugate_estimate(sec: SectionData, P_beta: IntPolynomial, rec: TrailRecord | GammaExpansion,
                       case: str = "minimal_alphabet") -> ConjugateEstimate:
    """``(n/c)(1 - c/n)^u_s`` (times m for a bounded alphabet) against the measured
    ``|sum t_i r_s^i|`` and ``|P(r_s)|``."""
    if case not in ("minimal_alphabet", "bounded_alphabet"):
        raise DomainError("case must be minimal_alphabet or bounded_alphabet")
    if sec.r_s is None or sec.n is None:
        raise Inconclusive("no certified conjugate r_s for this section")
    g = rec if isinstance(rec, GammaExpansion) else None
    u = g.u_s if g is not None else rec.u_s
    digits = g.digits if g is not None else rec.digits
    status = g.status if g is not None else None
    if u is None:
        raise DomainError("u_s is not available")
    n = sec.n
    with workprec(PREC):
        center, _ = rouche_circle(n)
        c_lent = arb.pi() * abs(center) / a_max_ball()
        limit = 1 - c_lent / n
        r = sec.r_s
        if not abs(r) < limit:
            raise Inconclusive("|r_s| < 1 - c_lent/n is not certified")
        bound = lenticular_bound(n, float(c_lent.mid()), u)
        if case == "bounded_alphabet":
            m = rec.m if isinstance(rec, TrailRecord) else alphabet_bound(P_beta.degree, max(1, P_beta.height()))
            bound *= m
        measured = abs(TaylorEnclosure([0, *digits])(r))
        if not isinstance(status, Finite):
            mod = abs(r).upper()
            tail = mod ** (len(digits) + 1) / (1 - mod)
            measured = measured + arb(0, tail.upper())
        p_r = abs(P_beta(r))
    return ConjugateEstimate(case, bound, measured, p_r, float(limit.mid()))


def lenticular_bound(n: int, c_lent: float, u: int) -> float:
    return (n / c_lent) * (1 - c_lent / n) ** u


def trail_report(sec: SectionData, P_beta: IntPolynomial, budget: int = 2000) -> dict:
    """Machine-readable record of one section and its trail."""
    rec = build_trail(sec, P_beta)
    out = {
        "s": sec.s,
        "gamma_s_decimal": sec.gamma_decimal(),
        "Aq_polys": [list(a.coefficients) for a in rec.Aq],
        "W": list(rec.W.coefficients),
        "height_bound": rec.height_bound,
        "m": rec.m,
        "identity_holds": rec.identity_holds,
        "u_s": None,
        "bound_value": None,
        "measured_value": None,
    }
    try:
        g = greedy_gamma_expansion(sec, P_beta, budget)
    except (StructureError, InsufficientDigits) as exc:
        out["note"] = str(exc)
        return out
    out["u_s"] = g.u_s
    out["case"] = g.case
    out["u_s_bounds_ok"] = g.bounds_ok
    out["empirical_kappa"] = g.empirical_kappa
    try:
        est = conjugate_estimate(sec, P_beta, g)
        out.update(est.to_json())
    except Inconclusive as exc:
        out["note"] = str(exc)
    return out


@dataclass(frozen=True)
class NuThreshold:
    """Lower bound ``nu`` of ``|P(omega)|`` and the first ``u`` where the bound drops below it.

    ``nu`` is None when ``|P(omega)|`` cannot be separated from 0: the run then
    lands in the conclusion branch and no threshold index exists.
    """

    nu: float | None
    W_nu: int | None

    @property
    def conclusion_branch(self) -> bool:
        return self.nu is None


def nu_threshold(P_beta: IntPolynomial, omega: acb, n: int, m: int = 1, limit: int = 1 << 20) -> NuThreshold:
    with workprec(PREC):
        value = abs(TaylorEnclosure(P_beta.coefficients)(acb(omega)))
        low = value.lower()
        if not low > 0:
            return NuThreshold(None, None)
        center, _ = rouche_circle(n)
        c_lent = float((arb.pi() * abs(center) / a_max_ball()).mid())
    nu = float(low)
    # smallest u with (n m / c)(1 - c/n)^u < nu
    ratio = math.log(nu * c_lent / (n * m)) / math.log(1 - c_lent / n)
    u = max(0, math.floor(ratio) + 1)
    while u > 0 and lenticular_bound(n, c_lent, u - 1) * m < nu:
        u -= 1
    while lenticular_bound(n, c_lent, u) * m >= nu and u < limit:
        u += 1
    return NuThreshold(nu, u)
