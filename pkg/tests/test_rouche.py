import cmath
import math
import random
from fractions import Fraction

import pytest
from flint import acb, arb
from hypothesis import given, settings, strategies as st

from renyi_parry.balls import workprec
from renyi_parry.contour import CirclePath, TaylorEnclosure
from renyi_parry.errors import DomainError, NotUnique
from renyi_parry.expansion import greedy_expansion_of_one
from renyi_parry.polynomial import LEHMER, IntPolynomial, trinomial
from renyi_parry.rouche import (
    a_max_ball,
    asymptotic_criterion,
    certify_rouche,
    empty_band,
    find_a_max,
    find_lenticular_zero,
    h1,
    kappa,
    lenticular_zero_details,
    lenticulus_scan,
    rouche_circle,
    winding_number,
)
from renyi_parry.trinomial import all_roots
from renyi_parry.zeta import ParryUpperSeries

from conftest import base_of


def spiked(n, exps):
    c = [0] * (max(exps) + 1)
    c[0], c[1] = -1, 1
    c[n] += 1
    for k in exps:
        c[k] += 1
    return IntPolynomial(c)


@pytest.fixture(scope="module")
def params():
    return find_a_max()


def test_a_max(params):
    assert abs(find_a_max(1e-4).a_max - 5.8743) < 1e-4
    assert abs(params.a_max - params.a_max_closed_form) < 1e-7
    assert abs(params.threshold - 0.146447) < 1e-6


def test_a_max_is_local_max(params):
    assert h1(params.a_max - 0.1) < params.h_max
    assert h1(params.a_max + 0.1) < params.h_max


def test_h_max_closed_form(params):
    assert abs(params.h_max - (3 - 2 * math.sqrt(2))) < 1e-12


def test_domain_errors():
    with pytest.raises(DomainError):
        h1(0.5)
    with pytest.raises(DomainError):
        kappa(1.5, 6)
    with pytest.raises(DomainError):
        find_a_max(0)
    with pytest.raises(DomainError):
        asymptotic_criterion(1)


def test_kappa_specializes(params):
    k = kappa(1, params.a_max)
    assert abs(k / (1 + k) - 0.146447) < 1e-6
    for a in (1.5, 3, 5.8, 20):
        assert math.isclose(kappa(1, a), h1(a))


def test_kappa_decreasing(params):
    xs = [-1 + 2 * k / 999 for k in range(1000)]
    vals = [kappa(x, params.a_max) for x in xs]
    assert all(v > 0 for v in vals)
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_criterion_examples(params):
    c = asymptotic_criterion(32, params)
    assert c.holds and abs(c.lhs - 0.0694628) < 1e-7
    c2 = asymptotic_criterion(2, params)
    assert c2.lhs > 0 and c2.caveat == "LogLog n < 0"
    hold = {n for n in range(18, 41) if asymptotic_criterion(n, params).holds}
    assert set(range(32, 41)) <= hold


def test_certify_32_37():
    for n in (32, 37):
        cert = certify_rouche(n)
        assert cert.certified and cert.min_margin > 0
        js = cert.to_json()
        assert js["verdict"] == "Certified" and len(js["arc_margins"]) == cert.arcs


def test_certify_fails_below_32():
    for n in (18, 24, 31):
        cert = certify_rouche(n)
        assert cert.verdict == "Failed" and cert.min_margin < 0
        assert cert.witness is not None


def test_certify_domain():
    with pytest.raises(DomainError):
        certify_rouche(12)


def test_exact_and_asymptotic_diverge_below_32(params):
    # the first-order criterion already holds where the exact inequality fails
    assert asymptotic_criterion(31, params).holds
    assert not certify_rouche(31).certified


def test_winding_trivial():
    with workprec(128):
        unit = CirclePath(acb(0), arb(1))
        assert winding_number(lambda z: z, unit) == 1
        c = acb(0.3, 0.2)
        assert winding_number(lambda z: (z - c) ** 2, CirclePath(c, arb(0.01))) == 2
        assert winding_number(TaylorEnclosure([1, 0, 0, 1]), CirclePath(acb(0), arb(0.5))) == 0


def test_winding_trinomial_37():
    center, radius = rouche_circle(37)
    assert winding_number(TaylorEnclosure(trinomial(37).coefficients), CirclePath(center, radius)) == 1


def test_lenticular_zero_synthetic():
    f = spiked(37, [73, 146])
    d = lenticular_zero_details(f, 37)
    assert d.winding == 1 and d.inside_disk and d.inside_modulus_limit
    with workprec(128):
        assert abs(d.zero - d.center) < d.radius
        assert abs(d.zero) < 1 and d.zero.imag > 0


def test_lenticular_zero_of_trinomial_is_first_root():
    z = find_lenticular_zero(trinomial(40), 40)
    assert z.overlaps(all_roots(40).root(1))


def test_lenticular_zero_lehmer_n12():
    # outside the certified range: the winding count decides, whatever it is
    series = ParryUpperSeries(greedy_expansion_of_one(base_of(LEHMER)))
    try:
        d = lenticular_zero_details(series, 12)
    except NotUnique as exc:
        assert exc.count != 1
    else:
        assert d.winding == 1


def test_scan_trinomial_sector():
    n = 37
    res = lenticulus_scan(trinomial(n), Fraction(10), (Fraction(8, 10), Fraction(1)), 5, n)
    assert not res.undecided
    assert len(res.zeros) == len(res.trinomial_roots) == 3
    for z in res.zeros:
        assert sum(1 for r in res.trinomial_roots if z.overlaps(r)) == 1


def test_scan_empty_band():
    assert lenticulus_scan(trinomial(37), Fraction(10), empty_band(37), 3).zeros == ()


def test_scan_synthetic_conjugate_closed():
    f = spiked(37, [73, 146])
    res = lenticulus_scan(f, Fraction(10), (Fraction(8, 10), Fraction(1)), 5, 37)
    assert not res.undecided
    omega = find_lenticular_zero(f, 37)
    assert any(z.overlaps(omega) for z in res.zeros)
    for z in res.zeros:
        assert any(w.overlaps(z.conjugate()) for w in res.zeros)
    rows = res.csv().splitlines()
    assert rows[0] == "re,im,kind"
    assert sum(1 for r in rows if r.endswith(",f_zero")) == len(res.zeros)


def test_scan_domain():
    with pytest.raises(DomainError):
        lenticulus_scan(trinomial(10), Fraction(10), (Fraction(1), Fraction(1, 2)))
    with pytest.raises(DomainError):
        lenticulus_scan(trinomial(10), Fraction(0), (Fraction(0), Fraction(1)))


def dense_winding(coeffs, center, radius, samples=20000):
    total = 0.0
    prev = None
    for k in range(samples + 1):
        z = center + radius * cmath.exp(2j * math.pi * k / samples)
        v = sum(c * z**i for i, c in enumerate(coeffs))
        if prev is not None:
            total += cmath.phase(v / prev)
        prev = v
    return round(total / (2 * math.pi))


def _root_distance(coeffs, center, radius):
    import mpmath

    roots = mpmath.polyroots(list(reversed(coeffs)), maxsteps=200, extraprec=100)
    return min(abs(abs(complex(r) - center) - radius) for r in roots)


@given(st.integers(0, 10**6))
@settings(max_examples=50)
def test_winding_matches_dense_sampling(seed):
    rng = random.Random(seed)
    deg = rng.randint(1, 8)
    coeffs = [rng.randint(-5, 5) for _ in range(deg)] + [rng.choice([-3, -2, -1, 1, 2, 3])]
    center = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
    radius = rng.uniform(0.2, 1.5)
    if _root_distance(coeffs, center, radius) < 1e-3:
        return
    with workprec(128):
        w = winding_number(TaylorEnclosure(coeffs), CirclePath(acb(center.real, center.imag), arb(radius)))
    assert w == dense_winding(coeffs, center, radius)
