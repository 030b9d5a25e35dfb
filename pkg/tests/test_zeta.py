import random
from fractions import Fraction

import pytest
from flint import acb, arb
from hypothesis import given, settings, strategies as st

from renyi_parry.balls import workprec
from renyi_parry.catalog import ingest
from renyi_parry.errors import DomainError, InsufficientDigits, NotClassified
from renyi_parry.expansion import greedy_expansion_of_one, parry_polynomial
from renyi_parry.polynomial import LEHMER, IntPolynomial, reciprocal, trinomial, trinomial_reciprocal
from renyi_parry.zeta import (
    ParryUpperSeries,
    f_eval,
    f_rational,
    first_zero_check,
    identity_holds,
    series_zeta,
    takahashi_identity_check,
    zeta_closed_form,
)

from conftest import GOLDEN_POLY, SALEM6, base_of


@pytest.fixture(scope="module")
def theta5():
    return greedy_expansion_of_one(base_of(trinomial_reciprocal(5)))


def test_f_at_inverse_base(lehmer_expansion, lehmer_base):
    s = ParryUpperSeries(lehmer_expansion)
    with workprec(128):
        z = acb(1 / lehmer_base.enclosure(128))
        v = f_eval(s, z)
    assert v.contains(0) and v.rad() < 1e-25


def test_f_at_zero(lehmer_expansion):
    v = f_eval(ParryUpperSeries(lehmer_expansion), acb(0))
    assert v == acb(-1)


def test_f_finite(theta5):
    with workprec(128):
        v = f_eval(ParryUpperSeries(theta5), acb(0.5))
    assert v == acb(arb(-15) / 32)


def test_f_domain(lehmer_expansion):
    with pytest.raises(DomainError):
        f_eval(ParryUpperSeries(lehmer_expansion), acb(1))


def test_f_insufficient_digits():
    e = greedy_expansion_of_one(base_of(LEHMER), 30)
    with pytest.raises(InsufficientDigits):
        f_eval(ParryUpperSeries(e), acb(0.9))


def test_series_coefficients(lehmer_expansion):
    s = ParryUpperSeries(lehmer_expansion)
    c = s.coefficients(200)
    assert c[0] == -1 and set(c[1:]) <= {0, 1}
    ones = [i for i, t in enumerate(c) if t == 1]
    assert all(b - a >= 11 for a, b in zip(ones[1:], ones[2:]))
    assert s.support_gap() >= 12 - 1 or ones[1] - ones[0] == 11


def test_zeta_theta5(theta5):
    z = zeta_closed_form(theta5)
    assert z.terminal_index == 5
    assert z.form.numerator == IntPolynomial([1, 0, 0, 0, 0, -1])
    assert z.form.denominator == IntPolynomial([1, -1, 0, 0, 0, -1])


def test_zeta_lehmer(lehmer_expansion):
    z = zeta_closed_form(lehmer_expansion)
    assert z.terminal_index is None
    assert z.form.numerator == 1 - IntPolynomial.monomial(74)
    assert z.form.denominator == reciprocal(parry_polynomial(lehmer_expansion))
    assert z.form.denominator.degree == 75
    assert identity_holds(lehmer_expansion)


def test_zeta_unclassified():
    e = greedy_expansion_of_one(base_of(LEHMER), 10)
    with pytest.raises(NotClassified):
        zeta_closed_form(e)
    assert not series_zeta(e).is_rational


def test_identity_and_carlson_polya_on_catalog():
    for entry in ingest("table1") + ingest("table2"):
        e = greedy_expansion_of_one(base_of(entry.minimal_poly))
        assert identity_holds(e)
        z = series_zeta(e)
        assert z.is_rational == e.is_classified
        assert z.form.denominator[0] != 0


def test_denominator_vanishes_at_inverse_base(lehmer_expansion, lehmer_base):
    den = zeta_closed_form(lehmer_expansion).form.denominator
    with workprec(256):
        assert den(1 / lehmer_base.enclosure(256)).contains(0)


def test_takahashi_golden():
    e = greedy_expansion_of_one(base_of(GOLDEN_POLY))
    r = takahashi_identity_check(e, acb(0.25), 40)
    assert r.contains(0)
    r0 = takahashi_identity_check(e, acb(0), 10)
    assert r0 == acb(0)


def test_takahashi_lehmer(lehmer_expansion, lehmer_base):
    with workprec(128):
        z = acb(1 / (2 * lehmer_base.enclosure(128)))
        r = takahashi_identity_check(lehmer_expansion, z, 300)
    assert r.contains(0)
    assert r.rad() < 1e-20


def test_takahashi_domain(lehmer_expansion):
    with pytest.raises(DomainError):
        takahashi_identity_check(lehmer_expansion, acb(0.9), 50)


def test_first_zero_lehmer(lehmer_expansion):
    rep = first_zero_check(lehmer_expansion)
    assert rep.count == 1 and rep.real


def test_first_zero_theta6():
    e = greedy_expansion_of_one(base_of(trinomial_reciprocal(6)))
    assert first_zero_check(e).count == 1


def test_first_zero_random_catalog_base():
    entries = ingest("table1")
    entry = random.Random(3).choice([e for e in entries if e.expected.get("kind") == "salem"])
    e = greedy_expansion_of_one(base_of(entry.minimal_poly))
    assert first_zero_check(e).count == 1


@pytest.fixture(scope="module")
def salem6():
    return greedy_expansion_of_one(base_of(SALEM6))


@given(st.floats(0, 0.95), st.floats(0, 1))
@settings(max_examples=60)
def test_closed_form_agrees_with_series(salem6, r, t):
    import cmath

    w = r * cmath.exp(2j * cmath.pi * t)
    num, den = f_rational(salem6)
    with workprec(128):
        z = acb(w.real, w.imag)
        series = f_eval(ParryUpperSeries(salem6), z, tail=1e-25)
        closed = num(z) / den(z)
    assert series.overlaps(closed)


@given(st.floats(0, 0.9), st.floats(0, 1))
@settings(max_examples=40)
def test_tail_doubling_is_nested(lehmer_expansion, r, t):
    import cmath

    w = r * cmath.exp(2j * cmath.pi * t)
    s = ParryUpperSeries(lehmer_expansion)
    with workprec(128):
        z = acb(w.real, w.imag)
        coarse = f_eval(s, z, terms=64)
        fine = f_eval(s, z, terms=128)
    assert coarse.overlaps(fine)
    assert fine.rad() <= coarse.rad()
