"""Ball arithmetic helpers and the precision policy.

Real and complex balls are flint ``arb`` / ``acb`` values (midpoint-radius with
outward rounding).  Every certified decision in the package escalates
precision through :func:`precisions`, starting at 64 bits and doubling up to
the active cap.
"""

from __future__ import annotations

import contextvars
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from flint import acb, arb, ctx, fmpq

from .errors import DomainError

RealBall = arb
ComplexBall = acb

START_BITS = 64
DEFAULT_CAP_BITS = 1 << 16


@dataclass(frozen=True)
class PrecisionPolicy:
    start: int = START_BITS
    cap: int = DEFAULT_CAP_BITS

    def levels(self) -> Iterator[int]:
        p = self.start
        while p < self.cap:
            yield p
            p *= 2
        yield self.cap


_policy: contextvars.ContextVar[PrecisionPolicy] = contextvars.ContextVar(
    "precision_policy", default=PrecisionPolicy()
)


def current_policy() -> PrecisionPolicy:
    return _policy.get()


@contextmanager
def precision_cap(bits: int):
    """Temporarily change the precision cap for the current context."""
    if bits < START_BITS:
        raise DomainError(f"precision cap must be at least {START_BITS} bits")
    token = _policy.set(PrecisionPolicy(START_BITS, bits))
    try:
        yield
    finally:
        _policy.reset(token)


def precisions() -> Iterator[int]:
    return current_policy().levels()


workprec = ctx.workprec


def to_arb(x) -> arb:
    """Ball enclosing an int or Fraction at the current working precision."""
    if isinstance(x, Fraction):
        return arb(fmpq(x.numerator, x.denominator))
    return arb(x)


def interval_ball(lo: Fraction, hi: Fraction) -> arb:
    """Ball enclosing the closed rational interval ``[lo, hi]``."""
    return to_arb(lo).union(to_arb(hi))


def arb_to_fractions(x: arb) -> tuple[Fraction, Fraction]:
    """Exact rational bounds of a real ball."""
    return _arf_fraction(x.lower()), _arf_fraction(x.upper())


def _arf_fraction(x: arb) -> Fraction:
    m, e = x.mid().man_exp()
    m, e = int(m), int(e)
    return Fraction(m * 2**e) if e >= 0 else Fraction(m, 2**-e)


def sign(x: arb) -> int | None:
    """Certified sign of a real ball, or None when the ball contains 0 and is not exactly 0."""
    if x > 0:
        return 1
    if x < 0:
        return -1
    if x.is_exact() and x.is_zero():
        return 0
    return None


def truncated_decimal(x: arb, places: int) -> str | None:
    """Decimal truncation of a ball to ``places`` digits, or None if the ball
    straddles a truncation boundary."""
    scale = 10**places
    lo, hi = arb_to_fractions(x)
    a = _trunc(lo * scale)
    b = _trunc(hi * scale)
    if a != b:
        return None
    q = abs(a)
    s = f"{q // scale}.{q % scale:0{places}d}" if places else str(q)
    return ("-" if hi < 0 else "") + s


def _trunc(x: Fraction) -> int:
    return x.numerator // x.denominator if x >= 0 else -((-x.numerator) // x.denominator)


def certified_truncation(evaluate, places: int) -> str:
    """Escalate precision until ``evaluate()`` (a ball) has a stable truncation."""
    from .errors import PrecisionExceeded

    for prec in precisions():
        with workprec(prec):
            s = truncated_decimal(evaluate(), places)
        if s is not None:
            return s
    raise PrecisionExceeded("truncation undecided at the precision cap")


def ball_text(x, digits: int = 15) -> str:
    """``midpoint +/- radius`` in decimal."""
    if isinstance(x, acb):
        return f"({ball_text(x.real, digits)}) + i({ball_text(x.imag, digits)})"
    return f"{x.mid().str(digits, radius=False)} +/- {float(x.rad()):.3e}"
