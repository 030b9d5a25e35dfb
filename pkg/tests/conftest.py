import pytest
from hypothesis import settings

from renyi_parry.algebraic import AlgebraicNumber
from renyi_parry.expansion import greedy_expansion_of_one
from renyi_parry.polynomial import LEHMER, IntPolynomial

settings.register_profile("default", deadline=None)
settings.load_profile("default")

SALEM4 = IntPolynomial([1, -1, -1, -1, 1])
SALEM6 = IntPolynomial([1, 0, -1, -1, -1, 0, 1])
SALEM8 = IntPolynomial([1, 0, 0, -1, -1, -1, 0, 0, 1])
GOLDEN_POLY = IntPolynomial([-1, -1, 1])


def base_of(p):
    return AlgebraicNumber.largest_real_root(p)


@pytest.fixture(scope="session")
def lehmer_base():
    return base_of(LEHMER)


@pytest.fixture(scope="session")
def lehmer_expansion(lehmer_base):
    return greedy_expansion_of_one(lehmer_base)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
