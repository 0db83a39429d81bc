"""Digit extraction and evaluation for semi-regular continued fractions.

For a point x in (0,1) and a sign sequence sigma, digits follow the branch
rule of the generating interval maps: with remainder r at step k,

    sigma_k = +1:  a_k = floor(1/r),      next r = 1/r - a_k
    sigma_k = -1:  a_k = floor(1/r) + 1,  next r = a_k - 1/r

so that r = phi_{sigma_k, a_k}^{-1}(previous r).  The -1 branch always emits
a_k >= 2, which is exactly the admissibility constraint sign + digit >= 1.

Rational inputs may terminate (remainder 0) or, under -1 signs, enter the
infinite all-2 tail; both are reported as statuses, never as failures.
Decimal-ball inputs proceed only while the enclosing interval certifies each
branch decision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .mobius import (
    IDENTITY,
    AdmissibilityError,
    RationalInterval,
    check_word,
    fundamental_interval,
    generator,
)
from .numbers import DecimalBall, NumberInput, QuadraticSurd, in_unit_interval
from .signs import SignSequence

STATUS_OK = "ok"
STATUS_RATIONAL_TERMINATED = "rational-terminated"
STATUS_UNCERTIFIED = "uncertified"


class EnclosureTooWideError(ValueError):
    """Interval input cannot certify the next digit; supply more input digits."""

    def __init__(self, certified: tuple[int, ...], requested: int):
        self.certified = certified
        self.requested = requested
        super().__init__(
            f"enclosure certifies only {len(certified)} of {requested} requested digits"
        )


@dataclass(frozen=True)
class DigitStream:
    """Finite prefix of an expansion, with provenance flags.

    status "ok" means the requested depth was reached; "rational-terminated"
    means the expansion ended exactly (rational input); "uncertified" means a
    decimal ball ran out of precision at index uncertified_at.
    """

    signs: tuple[int, ...]
    digits: tuple[int, ...]
    status: str
    requested_depth: int
    rational_input: bool = False
    uncertified_at: int | None = None

    def __len__(self) -> int:
        return len(self.digits)

    def interval(self, depth: int | None = None) -> RationalInterval:
        n = len(self.digits) if depth is None else depth
        if n > len(self.digits):
            raise IndexError(f"stream holds {len(self.digits)} digits, asked for {n}")
        return fundamental_interval(self.signs[:n], self.digits[:n])


class _RationalState:
    def __init__(self, x: Fraction):
        self.v = x
        self.done = False

    def step(self, sign: int) -> int | None:
        if self.done or self.v == 0:
            self.done = True
            return None
        inv = 1 / self.v
        if sign == 1:
            a = inv.numerator // inv.denominator
            self.v = inv - a
        else:
            a = inv.numerator // inv.denominator + 1
            self.v = a - inv
        return a


class _SurdState:
    def __init__(self, x: QuadraticSurd):
        self.v = x

    def step(self, sign: int) -> int:
        inv = self.v.reciprocal()
        f = inv.floor()
        if sign == 1:
            a = f
            self.v = inv.sub_int(a)
        else:
            a = f + 1
            self.v = inv.rsub_int(a)
        return a


class _IntervalState:
    """Expansion of every point of [lo, hi] simultaneously; emits a digit only
    when the whole interval selects the same branch."""

    def __init__(self, lo: Fraction, hi: Fraction):
        self.lo = lo
        self.hi = hi

    def step(self, sign: int) -> int | None:
        lo, hi = self.lo, self.hi
        if lo <= 0 or hi >= 1:
            return None
        inv_lo, inv_hi = 1 / hi, 1 / lo  # 1/x decreasing
        a = inv_lo.numerator // inv_lo.denominator
        # certified iff floor(1/x) == a on the whole interval, i.e. 1/lo < a+1
        if inv_hi >= a + 1:
            return None
        if sign == 1:
            self.lo, self.hi = inv_lo - a, inv_hi - a
            return a
        self.lo, self.hi = (a + 1) - inv_hi, (a + 1) - inv_lo
        return a + 1


def expand(x: NumberInput, sigma: SignSequence, depth: int) -> DigitStream:
    """First `depth` digits of x under sigma, with certified branch decisions.

    Rational x is accepted as an extension of the irrational theory; its
    termination/tail behaviour is reported in the stream status and the
    rational_input flag.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if not in_unit_interval(x):
        raise ValueError(f"input must lie strictly inside (0,1): {x!r}")

    rational = isinstance(x, Fraction) or (isinstance(x, DecimalBall) and x.radius == 0)
    if isinstance(x, Fraction):
        state: object = _RationalState(x)
    elif isinstance(x, QuadraticSurd):
        state = _SurdState(x)
    elif isinstance(x, DecimalBall):
        state = _RationalState(x.center) if x.radius == 0 else _IntervalState(x.lo, x.hi)
    else:
        raise TypeError(f"unsupported number input {type(x).__name__}")

    signs: list[int] = []
    digits: list[int] = []
    status = STATUS_OK
    uncertified_at = None
    for k in range(1, depth + 1):
        s = sigma(k)
        a = state.step(s)
        if a is None:
            if isinstance(state, _IntervalState):
                status = STATUS_UNCERTIFIED
                uncertified_at = k
            else:
                status = STATUS_RATIONAL_TERMINATED
            break
        signs.append(s)
        digits.append(a)
    return DigitStream(
        signs=tuple(signs),
        digits=tuple(digits),
        status=status,
        requested_depth=depth,
        rational_input=rational,
        uncertified_at=uncertified_at,
    )


def evaluate(signs: Sequence[int], digits: Sequence[int], point: Fraction = Fraction(0)) -> Fraction:
    """Exact value of the finite expansion with terminal perturbation `point`.

    evaluate(signs, digits, 0) is the plain truncation; evaluating at both 0
    and 1 gives the fundamental-interval endpoints.
    """
    check_word(signs, digits)
    point = Fraction(point)
    if not (0 <= point <= 1):
        raise ValueError("terminal point must lie in [0,1]")
    v = point
    for s, a in zip(reversed(signs), reversed(digits)):
        v = 1 / (a + s * v)
    return v


def singleton_check(signs: Sequence[int], digits: Sequence[int],
                    depth: int | None = None) -> RationalInterval:
    """Fundamental interval of the depth-n prefix (the nested-intersection
    witness: lengths must decrease to zero along any admissible word)."""
    n = len(digits) if depth is None else depth
    return fundamental_interval(signs[:n], digits[:n])


def reconvert(signs: Sequence[int], digits: Sequence[int], target_sigma: SignSequence,
              depth: int) -> DigitStream:
    """Re-expand the point enclosed by a finite word under another sign sequence.

    Every output digit is certified by exact interval arithmetic on the
    enclosure; raises EnclosureTooWideError when the input word is too short
    to decide the next branch.
    """
    check_word(signs, digits)
    enclosure = fundamental_interval(signs, digits)
    ball = DecimalBall(enclosure.midpoint, enclosure.length / 2)
    out = expand(ball, target_sigma, depth)
    if out.status == STATUS_UNCERTIFIED:
        raise EnclosureTooWideError(out.digits, depth)
    return out


def contains_point(interval: RationalInterval, x: NumberInput) -> bool:
    """Exact membership of an expansion input in a rational interval."""
    if isinstance(x, Fraction):
        return interval.contains(x)
    if isinstance(x, QuadraticSurd):
        return x.cmp_fraction(interval.lo) >= 0 and x.cmp_fraction(interval.hi) <= 0
    if isinstance(x, DecimalBall):
        return interval.lo <= x.lo and x.hi <= interval.hi
    raise TypeError(f"unsupported number input {type(x).__name__}")
