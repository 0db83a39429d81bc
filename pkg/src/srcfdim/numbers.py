"""Exact number inputs for digit extraction.

Three kinds are accepted: exact rationals, real quadratic surds
(p + q*sqrt(D))/r handled by pure integer arithmetic, and decimal balls
(center with a stated error radius).  Surd arithmetic stays exact through
reciprocals, integer shifts and floors, so every digit decision on a surd is
certified by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union


def _sign(n: int) -> int:
    return (n > 0) - (n < 0)


def sign_of_quadratic(A: int, B: int, D: int) -> int:
    """Exact sign of A + B*sqrt(D) for integers A, B and D >= 0."""
    if B == 0 or D == 0:
        return _sign(A)
    if A == 0:
        return _sign(B)
    if A > 0 and B > 0:
        return 1
    if A < 0 and B < 0:
        return -1
    # opposite signs: compare A^2 with B^2 * D
    lhs, rhs = A * A, B * B * D
    if lhs == rhs:
        return 0
    bigger_abs_A = lhs > rhs
    return _sign(A) if bigger_abs_A else _sign(B)


@dataclass(frozen=True)
class QuadraticSurd:
    """(p + q*sqrt(D)) / r with integer p, q, r (r > 0) and D a nonsquare >= 2."""

    p: int
    q: int
    r: int
    D: int

    def __post_init__(self) -> None:
        if self.r == 0:
            raise ZeroDivisionError("surd denominator r must be nonzero")
        if self.D < 2 or math.isqrt(self.D) ** 2 == self.D:
            raise ValueError(f"D must be a nonsquare integer >= 2, got {self.D}")
        if self.q == 0:
            raise ValueError("q = 0 denotes a rational; use a Fraction instead")

    @staticmethod
    def make(p: int, q: int, r: int, D: int) -> "QuadraticSurd":
        if r < 0:
            p, q, r = -p, -q, -r
        g = math.gcd(math.gcd(abs(p), abs(q)), r)
        if g > 1:
            p, q, r = p // g, q // g, r // g
        return QuadraticSurd(p, q, r, D)

    def sign(self) -> int:
        return sign_of_quadratic(self.p, self.q, self.D)

    def cmp_fraction(self, x: Fraction) -> int:
        """Exact sign of (self - x)."""
        # (p + q sqrt D)/r - u/v  ~ sign of (p*v - u*r) + q*v*sqrt(D), times sign(r*v)
        u, v = x.numerator, x.denominator
        s = sign_of_quadratic(self.p * v - u * self.r, self.q * v, self.D)
        return s * _sign(self.r * v)

    def floor(self) -> int:
        # estimate first (falling back to exact approximation when the
        # coefficients exceed float range), then adjust by exact comparisons
        try:
            est = (self.p + self.q * math.sqrt(self.D)) / self.r
            if not math.isfinite(est):
                raise OverflowError
            n = math.floor(est)
        except OverflowError:
            n = math.floor(self.approx(8))
        while self.cmp_fraction(Fraction(n)) < 0:
            n -= 1
        while self.cmp_fraction(Fraction(n + 1)) >= 0:
            n += 1
        return n

    def reciprocal(self) -> "QuadraticSurd":
        # r*(p - q sqrt D) / (p^2 - q^2 D)
        norm = self.p * self.p - self.q * self.q * self.D
        return QuadraticSurd.make(self.r * self.p, -self.r * self.q, norm, self.D)

    def rsub_int(self, n: int) -> "QuadraticSurd":
        """n - self."""
        return QuadraticSurd.make(n * self.r - self.p, -self.q, self.r, self.D)

    def sub_int(self, n: int) -> "QuadraticSurd":
        """self - n."""
        return QuadraticSurd.make(self.p - n * self.r, self.q, self.r, self.D)

    def approx(self, digits: int = 30) -> Fraction:
        """Rational approximation with error below 10^-digits (for display)."""
        scale = 10 ** (digits + 2)
        root = math.isqrt(self.D * scale * scale)
        num = Fraction(self.p) + Fraction(self.q * root, scale)
        return num / self.r

    def __float__(self) -> float:
        return float(self.approx(24))


@dataclass(frozen=True)
class DecimalBall:
    """A real known to lie in [center - radius, center + radius], exactly."""

    center: Fraction
    radius: Fraction

    def __post_init__(self) -> None:
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")

    @staticmethod
    def from_strings(value: str, radius: str) -> "DecimalBall":
        return DecimalBall(Fraction(value), Fraction(radius))

    @property
    def lo(self) -> Fraction:
        return self.center - self.radius

    @property
    def hi(self) -> Fraction:
        return self.center + self.radius

    def shrink(self, factor: int) -> "DecimalBall":
        return DecimalBall(self.center, self.radius / factor)


NumberInput = Union[Fraction, QuadraticSurd, DecimalBall]


def golden_ratio_conjugate() -> QuadraticSurd:
    """(sqrt(5) - 1)/2, the classical all-ones test point."""
    return QuadraticSurd.make(-1, 1, 2, 5)


def sqrt2_minus_1() -> QuadraticSurd:
    return QuadraticSurd.make(-1, 1, 1, 2)


def in_unit_interval(x: NumberInput) -> bool:
    if isinstance(x, Fraction):
        return 0 < x < 1
    if isinstance(x, QuadraticSurd):
        return x.cmp_fraction(Fraction(0)) > 0 and x.cmp_fraction(Fraction(1)) < 0
    return 0 < x.lo and x.hi < 1


def from_document(doc: dict) -> NumberInput:
    known = {"kind", "numerator", "denominator", "p", "q", "r", "d", "value", "radius"}
    unknown = set(doc) - known
    if unknown:
        raise ValueError(f"unknown number fields: {sorted(unknown)}")
    kind = doc.get("kind")
    if kind == "rational":
        return Fraction(int(doc["numerator"]), int(doc["denominator"]))
    if kind == "surd":
        return QuadraticSurd.make(int(doc["p"]), int(doc["q"]), int(doc["r"]), int(doc["d"]))
    if kind == "decimal":
        return DecimalBall.from_strings(str(doc["value"]), str(doc.get("radius", "0")))
    raise ValueError(f"unknown number kind {kind!r}")


def to_document(x: NumberInput) -> dict:
    if isinstance(x, Fraction):
        return {"kind": "rational", "numerator": x.numerator, "denominator": x.denominator}
    if isinstance(x, QuadraticSurd):
        return {"kind": "surd", "p": x.p, "q": x.q, "r": x.r, "d": x.D}
    return {"kind": "decimal", "value": str(x.center), "radius": str(x.radius)}
