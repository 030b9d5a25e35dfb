"""Greedy expansions of 1 in an algebraic base, and what can be read off them.

The orbit ``T^k(1)`` of the beta-transformation is computed exactly in Z[beta];
only the digit decisions ``beta * x >= 1`` touch ball arithmetic, through
:func:`sign_exact`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence, Union

from .algebraic import AlgebraicNumber, ZBetaElement, compare, sign_exact, sign_of_polynomial_at
from .errors import DomainError, Inconclusive, InsufficientDigits, NotClassified, ParseError
from .polynomial import IntPolynomial, reciprocal, trinomial_reciprocal

DEFAULT_BUDGET = 100_000

GOLDEN = AlgebraicNumber(IntPolynomial([-1, -1, 1]), 1, 2)
ONE = AlgebraicNumber.rational(1)
TWO = AlgebraicNumber.rational(2)


# statuses


@dataclass(frozen=True)
class Finite:
    length: int


@dataclass(frozen=True)
class EventuallyPeriodic:
    preperiod: int
    period: int


@dataclass(frozen=True)
class TruncatedUnknown:
    budget: int


ExpansionStatus = Union[Finite, EventuallyPeriodic, TruncatedUnknown]


# ultimately periodic words


@dataclass(frozen=True)
class UltimatelyPeriodicWord:
    """``prefix (period)^omega`` over {0, 1}; an empty period means trailing zeros."""

    prefix: tuple[int, ...]
    period: tuple[int, ...] = ()

    def __getitem__(self, i: int) -> int:
        if i < len(self.prefix):
            return self.prefix[i]
        if not self.period:
            return 0
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def take(self, n: int) -> tuple[int, ...]:
        return tuple(self[i] for i in range(n))

    def shift(self, j: int) -> UltimatelyPeriodicWord:
        if j <= len(self.prefix):
            return UltimatelyPeriodicWord(self.prefix[j:], self.period)
        if not self.period:
            return UltimatelyPeriodicWord((), ())
        k = (j - len(self.prefix)) % len(self.period)
        return UltimatelyPeriodicWord((), self.period[k:] + self.period[:k])

    def decisive_length(self, other: UltimatelyPeriodicWord) -> int:
        """Two such words are equal iff they agree on this many letters."""
        return max(len(self.prefix), len(other.prefix)) + lcm(max(len(self.period), 1), max(len(other.period), 1))

    def compare(self, other: UltimatelyPeriodicWord) -> int:
        for i in range(self.decisive_length(other)):
            a, b = self[i], other[i]
            if a != b:
                return -1 if a < b else 1
        return 0

    def distinct_shifts(self) -> int:
        return len(self.prefix) + max(len(self.period), 1)


# expansions


@dataclass(frozen=True)
class BetaExpansion:
    base: AlgebraicNumber
    digits: tuple[int, ...]
    status: ExpansionStatus
    orbit: tuple[tuple[int, ...], ...] = field(repr=False, compare=False, default=())

    def __post_init__(self):
        if isinstance(self.status, EventuallyPeriodic) and self.status.period < 1:
            raise DomainError("eventually periodic expansion needs a nonzero period")

    @property
    def is_classified(self) -> bool:
        return not isinstance(self.status, TruncatedUnknown)

    @property
    def preperiod_digits(self) -> tuple[int, ...]:
        if isinstance(self.status, EventuallyPeriodic):
            return self.digits[: self.status.preperiod]
        return self.digits

    @property
    def period_digits(self) -> tuple[int, ...]:
        if isinstance(self.status, EventuallyPeriodic):
            return self.digits[self.status.preperiod :]
        return ()

    def word(self) -> UltimatelyPeriodicWord:
        """The full digit word; only valid for classified expansions."""
        if not self.is_classified:
            raise NotClassified("digit word of an unclassified expansion is not known")
        return UltimatelyPeriodicWord(self.preperiod_digits, self.period_digits)

    def digit(self, i: int) -> int:
        """Digit ``t_i`` (1-based)."""
        if i < 1:
            raise DomainError("digits are indexed from 1")
        if isinstance(self.status, TruncatedUnknown):
            if i > len(self.digits):
                raise InsufficientDigits(f"digit {i} beyond the {len(self.digits)} computed")
            return self.digits[i - 1]
        return self.word()[i - 1]

    def prefix(self, n: int) -> tuple[int, ...]:
        return tuple(self.digit(i) for i in range(1, n + 1))

    def available_digits(self) -> int | None:
        """Number of known digits, or None when every digit is known."""
        return len(self.digits) if isinstance(self.status, TruncatedUnknown) else None

    def orbit_element(self, k: int) -> ZBetaElement:
        """``T^k(1)`` as an exact element of Z[beta]."""
        if k < len(self.orbit):
            return ZBetaElement(self.base, self.orbit[k])
        if isinstance(self.status, Finite):
            return ZBetaElement.from_int(self.base, 0)
        if isinstance(self.status, EventuallyPeriodic):
            m, p = self.status.preperiod, self.status.period
            return ZBetaElement(self.base, self.orbit[m + (k - m) % p])
        raise InsufficientDigits(f"orbit point {k} beyond the computed window")

    def pattern(self, spaced: bool = True) -> str:
        return format_pattern(self, spaced=spaced)


def _check_base(beta: AlgebraicNumber):
    if beta.defining_poly.leading != 1:
        raise DomainError("base must be an algebraic integer (monic defining polynomial)")
    if compare(beta, ONE) <= 0 or compare(beta, TWO) >= 0:
        raise DomainError("base must lie strictly between 1 and 2")


def greedy_orbit(x: ZBetaElement, budget: int):
    """Greedy digits of ``x`` in [0, 1): ``t_k = 1`` iff ``beta * T^(k-1)(x) >= 1``.

    Returns ``(digits, status, orbit)`` with exact cycle detection on the
    Z[beta] coordinates of the orbit points.
    """
    seen: dict[tuple[int, ...], int] = {x.coords: 0}
    orbit = [x.coords]
    digits: list[int] = []
    if x.is_zero():
        return (), Finite(0), tuple(orbit)
    for k in range(1, budget + 1):
        y = x.times_generator()
        if sign_exact(y - 1) >= 0:
            digits.append(1)
            y = y - 1
        else:
            digits.append(0)
        x = y
        orbit.append(x.coords)
        if x.is_zero():
            return tuple(digits), Finite(k), tuple(orbit)
        first = seen.get(x.coords)
        if first is not None:
            # the first repeat gives the minimal preperiod and period
            orbit.pop()
            return tuple(digits), EventuallyPeriodic(first, k - first), tuple(orbit)
        seen[x.coords] = k
    return tuple(digits), TruncatedUnknown(budget), tuple(orbit)


def greedy_expansion_of_one(beta: AlgebraicNumber, budget: int = DEFAULT_BUDGET) -> BetaExpansion:
    """Greedy digits of 1 in base beta, with exact cycle detection."""
    if budget < 1:
        raise DomainError("budget must be at least 1")
    _check_base(beta)
    digits, status, orbit = greedy_orbit(ZBetaElement.from_int(beta, 1), budget)
    return BetaExpansion(beta, digits, status, orbit)


def verify_remainder_identity(e: BetaExpansion) -> bool:
    """Check ``beta^k - sum_{i<=k} t_i beta^(k-i) == T^k(1)`` for every stored step.

    Uses plain polynomial reduction, independent of the orbit's shift-and-fold.
    """
    p = e.base.defining_poly
    power = IntPolynomial([1])
    acc = IntPolynomial()
    x = IntPolynomial([0, 1])
    for k, coords in enumerate(e.orbit):
        if k:
            power = (power * x) % p
            acc = (acc * x + e.digits[k - 1]) % p
        if (power - acc) % p != IntPolynomial(coords):
            return False
    return True


# classification


@dataclass(frozen=True)
class SimpleParry:
    length: int
    expansion: BetaExpansion = field(repr=False, compare=False, default=None)


@dataclass(frozen=True)
class Parry:
    preperiod: int
    period: int
    expansion: BetaExpansion = field(repr=False, compare=False, default=None)


@dataclass(frozen=True)
class UnknownWithinBudget:
    budget: int
    expansion: BetaExpansion = field(repr=False, compare=False, default=None)


def classify_parry(beta: AlgebraicNumber, budget: int = DEFAULT_BUDGET):
    e = greedy_expansion_of_one(beta, budget)
    return classify_expansion(e)


def classify_expansion(e: BetaExpansion):
    s = e.status
    if isinstance(s, Finite):
        return SimpleParry(s.length, e)
    if isinstance(s, EventuallyPeriodic):
        return Parry(s.preperiod, s.period, e)
    return UnknownWithinBudget(s.budget, e)


def parry_upper_rational_numerator(e: BetaExpansion) -> IntPolynomial:
    """Polynomial ``(1 - z^L) f(z)`` for period length L (or ``f`` itself when finite)."""
    s = e.status
    if isinstance(s, Finite):
        return IntPolynomial([-1, *e.digits])
    if isinstance(s, EventuallyPeriodic):
        m, L = s.preperiod, s.period
        head = IntPolynomial([-1, *e.digits[:m]])
        body = IntPolynomial([0] * (m + 1) + list(e.digits[m:]))
        return head - head.shift(L) + body
    raise NotClassified("expansion is not classified within its budget")


def parry_polynomial(e: BetaExpansion) -> IntPolynomial:
    """Monic Parry polynomial; its reciprocal is ``-(1 - z^L) f(z)``."""
    star = -parry_upper_rational_numerator(e)
    s = e.status
    formal = s.length if isinstance(s, Finite) else s.preperiod + s.period
    assert star.degree == formal, "minimal preperiod forces a nonzero top coefficient"
    p = reciprocal(star)
    assert p.leading == 1
    return p


# dynamical degree


def dynamical_degree(beta: AlgebraicNumber) -> int:
    """Smallest n >= 2 with ``beta >= theta_n^-1``, i.e. ``X^n - X^(n-1) - 1 >= 0`` at beta."""
    if compare(beta, ONE) <= 0 or compare(beta, GOLDEN) > 0:
        raise DomainError("dynamical degree needs 1 < beta <= golden ratio")

    def above(n: int) -> bool:
        return sign_of_polynomial_at(trinomial_reciprocal(n), beta) >= 0

    lo, hi = 1, 2
    while not above(hi):
        lo, hi = hi, hi * 2
    # above(lo) is false (or lo = 1), above(hi) is true
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if above(mid):
            hi = mid
        else:
            lo = mid
    return hi


# word predicates


def _as_word(word) -> UltimatelyPeriodicWord:
    if isinstance(word, UltimatelyPeriodicWord):
        return word
    return UltimatelyPeriodicWord(tuple(word), ())


def is_lyndon(word: Sequence[int] | UltimatelyPeriodicWord) -> bool:
    """Every proper shift is lexicographically smaller than the word.

    A finite word is compared as is (a proper prefix counts as smaller); an
    ultimately periodic word is decided exactly.
    """
    if isinstance(word, UltimatelyPeriodicWord):
        return all(word.shift(j).compare(word) < 0 for j in range(1, word.distinct_shifts() + 1))
    w = tuple(word)
    if not w:
        raise DomainError("is_lyndon needs a nonempty word")
    return all(w[j:] < w for j in range(1, len(w)))


def admissibility_sequence(e: BetaExpansion) -> UltimatelyPeriodicWord:
    """The sequence (c_i): the digits when infinite, else ``(t_1 .. t_{q-1} (t_q - 1))^omega``."""
    if isinstance(e.status, EventuallyPeriodic):
        return e.word()
    if isinstance(e.status, Finite):
        d = list(e.digits)
        d[-1] -= 1
        return UltimatelyPeriodicWord((), tuple(d))
    raise NotClassified("admissibility needs a classified expansion")


def is_admissible(word, e: BetaExpansion, periodic_tail: Sequence[int] | None = None) -> bool:
    """Every shift of the word (including the word itself) is strictly below (c_i).

    A plain sequence is read as followed by zeros; ``periodic_tail`` makes it
    ultimately periodic instead.
    """
    c = admissibility_sequence(e)
    if periodic_tail is not None:
        w = UltimatelyPeriodicWord(tuple(word), tuple(periodic_tail))
    else:
        w = _as_word(word)
    return all(w.shift(j).compare(c) < 0 for j in range(w.distinct_shifts() + 1))


# structure


@dataclass(frozen=True)
class StructureReport:
    dynamical_degree: int
    prefix_zeros: int
    prefix_ok: bool
    gaps: tuple[int, ...]
    minimal_gap: int
    violations: tuple[tuple[int, int], ...]
    window: int

    @property
    def ok(self) -> bool:
        return self.prefix_ok and not self.violations


def _one_positions(digits: Sequence[int]) -> list[int]:
    return [i + 1 for i, t in enumerate(digits) if t]


def structure_check(e: BetaExpansion) -> StructureReport:
    """Prefix ``1 0^(n-2) 1`` with n = dyg(beta), then zero runs of length >= n-2."""
    n = dynamical_degree(e.base)
    if isinstance(e.status, EventuallyPeriodic):
        window = 2 * (e.status.preperiod + e.status.period)
        digits = e.prefix(window)
    else:
        digits = e.digits
        window = len(digits)
    ones = _one_positions(digits)
    prefix_zeros = ones[1] - ones[0] - 1 if len(ones) >= 2 else len(digits) - 1
    prefix_ok = len(ones) >= 2 and ones[0] == 1 and prefix_zeros == n - 2
    gaps = tuple(b - a - 1 for a, b in zip(ones[1:], ones[2:]))
    need = n - 2
    violations = tuple((ones[k + 1], g) for k, g in enumerate(gaps) if g < need)
    return StructureReport(n, prefix_zeros, prefix_ok, gaps, need, violations, window)


def lex_order_consistency(a: BetaExpansion, b: BetaExpansion) -> int:
    """Lexicographic order of the digit words, checked against the order of the bases."""
    if a.is_classified and b.is_classified:
        lex = a.word().compare(b.word())
    else:
        n = min(x for x in (a.available_digits(), b.available_digits()) if x is not None)
        pa, pb = a.prefix(n), b.prefix(n)
        if pa == pb:
            raise Inconclusive("digit words agree on the whole common window")
        lex = -1 if pa < pb else 1
    numeric = compare(a.base, b.base)
    if lex != numeric:
        raise AssertionError(f"lexicographic order {lex} disagrees with numeric order {numeric}")
    return lex


# gappiness


@dataclass(frozen=True)
class GappinessProfile:
    blocks: tuple[tuple[int, int, Fraction], ...]
    tail_max_ratio: Fraction | None
    window: int


def gappiness_profile(e: BetaExpansion, window: int) -> GappinessProfile:
    """Zero blocks ``t_m != 0, t_i = 0 for m < i < s, t_s != 0`` with ``s - m >= 2``."""
    if isinstance(e.status, Finite):
        return GappinessProfile((), None, window)
    avail = e.available_digits()
    if avail is not None and window > avail:
        raise InsufficientDigits(f"window {window} exceeds the {avail} computed digits")
    ones = _one_positions(e.prefix(window))
    blocks = tuple((m, s, Fraction(s, m)) for m, s in zip(ones, ones[1:]) if s - m >= 2)
    tail = [r for m, _, r in blocks if m > window // 2]
    return GappinessProfile(blocks, max(tail) if tail else None, window)


# patterns


def run_length(digits: Sequence[int], spaced: bool = True) -> str:
    """Run-length text: zero runs of length >= 2 become ``0^{k}``."""
    tokens: list[str] = []
    i = 0
    while i < len(digits):
        if digits[i] == 0:
            j = i
            while j < len(digits) and digits[j] == 0:
                j += 1
            tokens.append("0" if j - i == 1 else f"0^{{{j - i}}}")
            i = j
        else:
            tokens.append(str(digits[i]))
            i += 1
    if spaced:
        return " ".join(tokens)
    return "".join(tokens)


def format_pattern(e: BetaExpansion, spaced: bool = True) -> str:
    pre = run_length(e.preperiod_digits, spaced)
    if isinstance(e.status, EventuallyPeriodic):
        return f"0.{pre}({run_length(e.period_digits, spaced)})^w"
    if isinstance(e.status, TruncatedUnknown):
        return f"0.{pre}..."
    return f"0.{pre}"


def _parse_digits(text: str) -> list:
    """Digits with nested groups; returns a flat list, applying group powers."""
    stack: list[list] = [[]]
    pos = 0
    group_power = re.compile(r"\)\s*\^\s*\{?(\d+)\}?")
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = re.match(r"([01])\^\{?(\d+)\}?", text[pos:])
        if m:
            stack[-1].extend([int(m.group(1))] * int(m.group(2)))
            pos += m.end()
            continue
        if text[pos] in "01":
            stack[-1].append(int(text[pos]))
            pos += 1
            continue
        if text[pos] == "(":
            stack.append([])
            pos += 1
            continue
        m = group_power.match(text[pos:])
        if m and len(stack) > 1:
            inner = stack.pop()
            stack[-1].extend(inner * int(m.group(1)))
            pos += m.end()
            continue
        if text[pos] == ")" and len(stack) > 1:
            inner = stack.pop()
            stack[-1].extend(inner)
            pos += 1
            continue
        raise ParseError(f"unexpected {text[pos]!r} in digit pattern")
    if len(stack) != 1:
        raise ParseError("unbalanced parentheses in digit pattern")
    return stack[0]


def parse_pattern(text: str) -> UltimatelyPeriodicWord:
    """Read ``0.1(0^{10} 1 0^{18})^w`` style text (``^\\omega``, ``^ω`` also accepted)."""
    s = text.strip().replace("\\omega", "w").replace("ω", "w").replace("$", "")
    s = re.sub(r"^0\s*\.\s*", "0.", s.replace("{w}", "w"))
    if not s.startswith("0."):
        raise ParseError(f"pattern must start with '0.': {text!r}")
    body = s[2:].strip()
    m = re.search(r"\(([^()]*(?:\([^()]*\)[^()]*)*)\)\s*\^\s*w\s*$", body)
    if m:
        prefix = _parse_digits(body[: m.start()])
        period = _parse_digits(m.group(1))
        if not period:
            raise ParseError("empty period")
        return UltimatelyPeriodicWord(tuple(prefix), tuple(period))
    return UltimatelyPeriodicWord(tuple(_parse_digits(body)), ())


def expansion_word_matches(e: BetaExpansion, pattern: str) -> bool:
    """True when the expansion's digit word equals the parsed pattern as an infinite word."""
    return e.word().compare(parse_pattern(pattern)) == 0


# serialization


def expansion_to_json(e: BetaExpansion) -> dict:
    s = e.status
    status = {Finite: "simple", EventuallyPeriodic: "parry", TruncatedUnknown: "unknown"}[type(s)]
    parry_poly = list(parry_polynomial(e).coefficients) if e.is_classified else None
    return {
        "base_poly": list(e.base.defining_poly.coefficients),
        "digits_preperiod": run_length(e.preperiod_digits, spaced=False),
        "digits_period": run_length(e.period_digits, spaced=False),
        "status": status,
        "parry_poly": parry_poly,
    }
