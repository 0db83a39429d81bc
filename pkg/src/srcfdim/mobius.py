"""Exact integer Mobius-map algebra for semi-regular continued fractions.

A map x -> (a*x + b)/(c*x + d) with integer coefficients and determinant +-1
is the basic object: the generator branches

    phi_{+1,i}(x) = 1/(i + x)   (matrix (0,1; 1,i),  det -1,  i >= 1)
    phi_{-1,i}(x) = 1/(i - x)   (matrix (0,1;-1,i),  det +1,  i >= 2)

and all their compositions.  Everything here is exact rational arithmetic:
interval endpoints, derivative bounds and distortion ratios are Fractions.
Floating point enters only downstream, in the pressure numerics.

Domains: X = [0,1] is the base interval; XTILDE = [-1/5, 5/4] is the (closure
of the) extension domain on which branches with digit >= 3 stay conformal and
uniformly contracting with norm <= 1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class AdmissibilityError(ValueError):
    """A (sign, digit) pair with sign + digit < 1, or a malformed word."""


class ConformalityError(ValueError):
    """The map has a pole inside the requested domain."""


@dataclass(frozen=True)
class RationalInterval:
    """Closed interval with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"interval endpoints out of order: {self.lo} > {self.hi}")

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "RationalInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def interior_disjoint(self, other: "RationalInterval") -> bool:
        return self.hi <= other.lo or other.hi <= self.lo


def _fr(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


X = RationalInterval(Fraction(0), Fraction(1))
#: Closure of the extension domain (-1/5, 5/4); bounds over the open interval
#: coincide with bounds over the closure for the monotone quantities used here.
XTILDE = RationalInterval(Fraction(-1, 5), Fraction(5, 4))
XTILDE_LENGTH = XTILDE.length  # 29/20


@dataclass(frozen=True)
class MobiusMap:
    """x -> (a*x + b)/(c*x + d) with arbitrary-precision integer coefficients."""

    a: int
    b: int
    c: int
    d: int

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def __call__(self, x: Fraction) -> Fraction:
        x = _fr(x)
        den = self.c * x + self.d
        if den == 0:
            raise ZeroDivisionError(f"pole of {self} at {x}")
        return (self.a * x + self.b) / den

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """self after other: (self.compose(other))(x) == self(other(x))."""
        return MobiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __matmul__(self, other: "MobiusMap") -> "MobiusMap":
        return self.compose(other)

    def denominator_at(self, x: Fraction) -> Fraction:
        return self.c * _fr(x) + self.d

    def pole(self) -> Fraction | None:
        if self.c == 0:
            return None
        return Fraction(-self.d, self.c)

    def image(self, domain: RationalInterval = X) -> RationalInterval:
        """Exact image of a pole-free interval (Mobius maps are monotone there)."""
        if not _pole_free(self, domain):
            raise ConformalityError(f"{self} has a pole inside {domain}")
        u, v = self(domain.lo), self(domain.hi)
        return RationalInterval(min(u, v), max(u, v))


IDENTITY = MobiusMap(1, 0, 0, 1)


def compose(left: MobiusMap, right: MobiusMap) -> MobiusMap:
    """left after right, as the integer matrix product."""
    return left.compose(right)


def generator(sign: int, digit: int) -> MobiusMap:
    """Branch map for one expansion step.

    sign=+1 gives 1/(digit + x); sign=-1 gives 1/(digit - x).  Admissibility
    demands sign + digit >= 1, i.e. digit >= 2 on the -1 branch.
    """
    if sign not in (1, -1):
        raise AdmissibilityError(f"sign must be +1 or -1, got {sign!r}")
    if not isinstance(digit, int) or digit < 1:
        raise AdmissibilityError(f"digit must be a positive integer, got {digit!r}")
    if sign + digit < 1:
        raise AdmissibilityError(
            f"inadmissible pair (sign={sign}, digit={digit}): sign + digit < 1"
        )
    return MobiusMap(0, 1, sign, digit)


def check_word(signs: Sequence[int], digits: Sequence[int]) -> None:
    if len(signs) != len(digits):
        raise AdmissibilityError(
            f"signs and digits must have equal length ({len(signs)} != {len(digits)})"
        )
    for k, (s, a) in enumerate(zip(signs, digits), start=1):
        if s not in (1, -1) or not isinstance(a, int) or a < 1 or s + a < 1:
            raise AdmissibilityError(f"inadmissible (sign, digit) at position {k}: ({s}, {a})")


def word_map(signs: Sequence[int], digits: Sequence[int]) -> MobiusMap:
    """Composition phi_{s1,a1} o ... o phi_{sn,an} as one exact matrix."""
    check_word(signs, digits)
    m = IDENTITY
    for s, a in zip(signs, digits):
        m = m @ generator(s, a)
    return m


def fundamental_interval(signs: Sequence[int], digits: Sequence[int]) -> RationalInterval:
    """Image of [0,1] under the composed word map, with exact endpoints.

    Its length equals |det| / |d*(c+d)| for the composed coefficients.
    """
    return word_map(signs, digits).image(X)


def interval_length_from_coefficients(m: MobiusMap) -> Fraction:
    den = m.d * (m.c + m.d)
    if den == 0:
        raise ConformalityError(f"{m} degenerate on [0,1]")
    return Fraction(abs(m.det), abs(den))


def _pole_free(m: MobiusMap, domain: RationalInterval) -> bool:
    lo = m.denominator_at(domain.lo)
    hi = m.denominator_at(domain.hi)
    return lo != 0 and hi != 0 and (lo > 0) == (hi > 0)


@dataclass(frozen=True)
class ScalingBounds:
    """Exact sup / inf of |D phi| = |det| / (c*x + d)^2 over one interval."""

    sup: Fraction
    inf: Fraction

    @property
    def ratio(self) -> Fraction:
        return self.sup / self.inf


def derivative_bounds(m: MobiusMap, domain: RationalInterval = X) -> ScalingBounds:
    """Sup and inf of the scaling factor over a pole-free interval.

    (c*x + d)^2 is monotone on any interval avoiding the pole, so both bounds
    are attained at endpoints and are exact rationals.
    """
    if not _pole_free(m, domain):
        raise ConformalityError(f"{m} has a pole inside {domain}; not conformal there")
    dlo = abs(m.denominator_at(domain.lo))
    dhi = abs(m.denominator_at(domain.hi))
    lo, hi = min(dlo, dhi), max(dlo, dhi)
    a = abs(m.det)
    return ScalingBounds(sup=Fraction(a) / lo**2, inf=Fraction(a) / hi**2)


@dataclass(frozen=True)
class DerivativeBounds:
    """Scaling-factor bounds of one map over X, plus the X-tilde sup if defined."""

    sup_X: Fraction
    inf_X: Fraction
    sup_Xtilde: Fraction | None


def derivative_profile(m: MobiusMap) -> DerivativeBounds:
    """Bounds over X, plus the X-tilde sup when the map is conformal there
    AND keeps the extension domain inside itself (the digit-2 backward branch
    fails the containment: its explicit formula escapes past 5/4)."""
    base = derivative_bounds(m, X)
    sup_ext: Fraction | None
    try:
        img = m.image(XTILDE)
        if XTILDE.contains_interval(img):
            sup_ext = derivative_bounds(m, XTILDE).sup
        else:
            sup_ext = None
    except ConformalityError:
        sup_ext = None
    return DerivativeBounds(sup_X=base.sup, inf_X=base.inf, sup_Xtilde=sup_ext)


def distortion_ratio(m: MobiusMap, domain: RationalInterval = XTILDE) -> Fraction:
    """Exact sup_{x,y in domain} |D m(x)| / |D m(y)|."""
    b = derivative_bounds(m, domain)
    return b.ratio


def extends_to_xtilde(sign: int, digit: int) -> bool:
    """Whether the branch has the explicit conformal extension to X-tilde.

    +1 branches extend for every digit; -1 branches for digit >= 3.  The
    digit-2 backward branch has a neutral fixed point at 1 and is admitted on
    X only.
    """
    return sign == 1 or digit >= 3


def log_derivative_norm(sign: int, digit: int, domain: RationalInterval = XTILDE) -> Fraction:
    """Exact sup over the domain of |D log |D phi_{sign,digit}|| = 2/|digit + sign*x|.

    Requires the branch to be pole-free on the domain.
    """
    m = generator(sign, digit)
    if not _pole_free(m, domain):
        raise ConformalityError(f"branch ({sign},{digit}) not conformal on {domain}")
    dlo = abs(m.denominator_at(domain.lo))
    dhi = abs(m.denominator_at(domain.hi))
    return Fraction(2) / min(dlo, dhi)


def distortion_exponent(min_digit: int) -> Fraction:
    """Exact exponent 2 * C0 * |X-tilde| of the bounded-distortion constant.

    C0 is the largest sup-norm of D log|D phi| over X-tilde among branches
    with digit >= min_digit (both signs); the -1 branch at the smallest digit
    attains it: C0 = 2/(min_digit - 5/4).
    """
    if min_digit < 3:
        raise ValueError(
            "distortion constant is defined for digit alphabets bounded below by 3; "
            f"got min_digit={min_digit}"
        )
    c0 = max(
        log_derivative_norm(1, min_digit),
        log_derivative_norm(-1, min_digit),
    )
    return 2 * c0 * XTILDE_LENGTH


def distortion_constant(min_digit: int) -> float:
    """Uniform distortion bound C = exp(2*C0*|X-tilde|) for words over digits
    >= min_digit on the extension domain; monotone nonincreasing in min_digit.

    min_digit=3 gives C = exp(116/35) ~ 27.50.
    """
    return math.exp(float(distortion_exponent(min_digit)))
