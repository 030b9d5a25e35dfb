import math

import mpmath
import pytest
from flint import acb, acb_poly, arb, fmpz_poly
from hypothesis import given, settings, strategies as st

from renyi_parry.algebraic import compare
from renyi_parry.balls import truncated_decimal, workprec
from renyi_parry.errors import DomainError
from renyi_parry.polynomial import trinomial
from renyi_parry.trinomial import (
    Factorization,
    all_roots,
    asymptotic_report,
    expected_sector_count,
    index_modulus_correlation,
    irreducibility_class,
    modulus_bounds,
    moduli_within_bounds,
    sector_count,
    theta_n,
    trinomial_row,
)


def test_theta_values():
    _, b2 = theta_n(2)
    assert b2.overlaps(2 / (1 + arb(5).sqrt()))
    t12, _ = theta_n(12)
    t31, _ = theta_n(31)
    with workprec(128):
        assert truncated_decimal(1 / t12.enclosure(128), 6) == "1.172950"
        assert truncated_decimal(1 / t31.enclosure(128), 5) == "1.08544"


def test_theta_increasing():
    thetas = [theta_n(n)[0] for n in range(2, 40)]
    assert all(compare(a, b) < 0 for a, b in zip(thetas, thetas[1:]))


def test_theta_domain():
    with pytest.raises(DomainError):
        theta_n(1)


def test_real_negative_root_when_even():
    rs = all_roots(6)
    assert rs.negative_root is not None
    assert rs.upper_roots[-1].real < -1
    assert all_roots(7).negative_root is None


def test_unit_root_for_residue_five():
    rs = all_roots(5)
    assert rs.unit_index == 1
    with workprec(128):
        assert rs.root(1).overlaps(acb.exp_pi_i(acb(1) / 3))


def test_reconstruction_n37():
    rs = all_roots(37)
    with workprec(rs.prec):
        prod = acb_poly([1])
        for z in rs.all_balls():
            prod *= acb_poly([-z, 1])
        target = trinomial(37).coefficients
        for k in range(38):
            assert prod[k].overlaps(acb(target[k]))


@pytest.mark.parametrize("n", [2, 3, 8, 11, 24, 37, 60])
def test_roots_against_flint(n):
    rs = all_roots(n)
    ref = [r for r, _ in fmpz_poly(list(trinomial(n).coefficients)).complex_roots()]
    ours = rs.all_balls()
    assert len(ours) == n
    for z in ours:
        assert sum(1 for r in ref if z.overlaps(r)) == 1


def test_argument_order_and_count():
    for n in (9, 20, 41):
        rs = all_roots(n)
        args = [float(z.arg().mid()) for z in rs.upper_roots]
        assert args == sorted(args) and len(set(args)) == len(args)
        assert len(rs.upper_roots) == n // 2


def test_sector_count_examples():
    assert sector_count(37) == 13
    assert sector_count(2) == 1
    assert sector_count(12) == 5


def test_sector_count_range():
    for n in range(2, 121):
        assert sector_count(n) == expected_sector_count(n) == 1 + 2 * (n // 6)


def test_sector_count_numeric_oracle():
    # independent float roots from mpmath
    for n in (13, 29, 47):
        roots = mpmath.polyroots([1] + [0] * (n - 2) + [1, -1], maxsteps=200, extraprec=200)
        numeric = sum(1 for r in roots if abs(mpmath.arg(r)) < mpmath.pi / 3)
        assert numeric == sector_count(n)


def test_moduli_bounds():
    for n in range(2, 121):
        assert moduli_within_bounds(all_roots(n)), n


def test_moduli_bounds_shape():
    lo, hi = modulus_bounds(10)
    assert lo < 1 < hi


def test_correlation_examples():
    rep = index_modulus_correlation(18)
    rows = {r.j: r for r in rep.rows}
    assert rows[3].inside_disk and rows[3].real_above_half
    assert not rows[4].inside_disk and not rows[4].real_above_half
    assert index_modulus_correlation(31).ok


def test_correlation_range():
    for n in range(6, 80):
        rep = index_modulus_correlation(n)
        assert rep.ok, n


def test_correlation_domain():
    with pytest.raises(DomainError):
        index_modulus_correlation(5)


def test_asymptotic_theta_31():
    rep = asymptotic_report(31)
    L = math.log(31)
    bound = (math.log(L) / L) ** 2 / (2 * 31)
    dev = next(d for d in rep.deviations if d.name == "theta")
    assert dev.within and float(dev.measured.upper()) <= bound


def test_asymptotic_modulus_100():
    rep = asymptotic_report(100)
    dev = next(d for d in rep.deviations if d.name == "|z1|")
    assert dev.implied_constant < 2


def test_asymptotic_boundary_18():
    rep = asymptotic_report(18)
    assert rep.D_Re_z1 is not None and not rep.violations


def test_asymptotic_short_range_has_no_z1_part():
    rep = asymptotic_report(10)
    assert rep.D_Re_z1 is None
    assert [d.name for d in rep.deviations] == ["theta", "lambda"]


def test_lambda_bound_fails_for_tiny_n():
    assert asymptotic_report(2).violations == ["lambda"]
    assert asymptotic_report(3).violations == ["lambda"]
    assert not asymptotic_report(4).violations


@pytest.mark.parametrize("n,expected", [
    (5, Factorization.CYCLOTOMIC_FACTOR_X2_X_1),
    (12, Factorization.IRREDUCIBLE),
    (11, Factorization.CYCLOTOMIC_FACTOR_X2_X_1),
])
def test_irreducibility_examples(n, expected):
    assert irreducibility_class(n) is expected


def test_irreducibility_against_flint_factor():
    for n in range(2, 60):
        _, factors = fmpz_poly(list(trinomial(n).coefficients)).factor()
        irreducible = len(factors) == 1 and factors[0][1] == 1
        assert (irreducibility_class(n) is Factorization.IRREDUCIBLE) == irreducible


@given(st.integers(2, 150))
@settings(max_examples=30)
def test_theta_is_root(n):
    _, ball = theta_n(n)
    with workprec(128):
        assert (-1 + ball + ball**n).contains(0)
    assert 0 < ball < 1


def test_row_summary():
    row = trinomial_row(12)
    assert row["n"] == 12 and row["p_n"] == 5
    assert abs(row["theta_inv"] - 1.17295) < 1e-5
