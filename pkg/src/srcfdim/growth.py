"""Growth functions f: N -> [min B, infinity) with lim f(n) = infinity.

Each kind declares an index from which it is nondecreasing, so threshold
indices N(bound) = min{N : f(n) >= bound for all n >= N} are computable by a
finite head scan plus binary search on the monotone tail.  Values are exact
(rational scale, integer ceilings)."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

HEAD_SCAN_CAP = 1_000_000


def _ceil_fraction(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


class GrowthFunction:
    kind = "abstract"
    monotone_from = 1

    def value(self, n: int) -> int:
        raise NotImplementedError

    def _first_monotone_reaching(self, bound: int) -> int:
        """Smallest n >= monotone_from with f(n) >= bound (f unbounded)."""
        a = self.monotone_from
        if self.value(a) >= bound:
            return a
        b = 2 * a + 1
        while self.value(b) < bound:
            a, b = b, 2 * b
        lo, hi = a, b
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if self.value(mid) >= bound:
                hi = mid
            else:
                lo = mid
        return hi

    def first_index_at_least(self, bound: int) -> int:
        """N(bound) = min{N >= 1 : f(n) >= bound for all n >= N}."""
        n1 = self._first_monotone_reaching(bound)
        if n1 > self.monotone_from:
            return n1
        # monotone part clears the bound from its start; failures can only
        # hide in the head
        if self.monotone_from > HEAD_SCAN_CAP:
            raise ValueError("growth head too long to scan")
        last_fail = 0
        for n in range(1, self.monotone_from):
            if self.value(n) < bound:
                last_fail = n
        return last_fail + 1

    def min_over(self, lo: int, hi: int) -> int:
        """Exact min of f over the index window [lo, hi]."""
        if hi < lo:
            raise ValueError("empty window")
        best = None
        head_hi = min(hi, self.monotone_from)
        if lo <= head_hi:
            if head_hi - lo > HEAD_SCAN_CAP:
                raise ValueError("growth head too long to scan")
            best = min(self.value(n) for n in range(lo, head_hi + 1))
        if hi > self.monotone_from:
            v = self.value(max(lo, self.monotone_from))
            best = v if best is None else min(best, v)
        return best

    def validate_floor(self, floor: int) -> None:
        """Check f(n) >= floor for all n (head scan + monotone tail)."""
        if self.min_over(1, self.monotone_from + 1) < floor:
            raise ValueError(f"growth function drops below {floor}")

    def label(self) -> str:
        return self.kind

    def to_document(self) -> dict:
        return {"kind": self.kind}


class PowerGrowth(GrowthFunction):
    """f(n) = ceil(scale * n^exponent) with rational scale > 0, integer
    exponent >= 1; nondecreasing everywhere."""

    kind = "power"

    def __init__(self, scale: Fraction | int = 1, exponent: int = 1):
        self.scale = Fraction(scale)
        self.exponent = int(exponent)
        if self.scale <= 0 or self.exponent < 1:
            raise ValueError("power growth needs scale > 0 and exponent >= 1")
        self.monotone_from = 1

    def value(self, n: int) -> int:
        return _ceil_fraction(self.scale * n**self.exponent)

    def label(self) -> str:
        return f"ceil({self.scale}*n^{self.exponent})"

    def to_document(self) -> dict:
        return {"kind": self.kind, "scale": str(self.scale), "exponent": self.exponent}


class ExponentialGrowth(GrowthFunction):
    """f(n) = ceil(scale * ratio^n) with rational ratio > 1."""

    kind = "exponential"

    def __init__(self, scale: Fraction | int = 1, ratio: Fraction | int = 2):
        self.scale = Fraction(scale)
        self.ratio = Fraction(ratio)
        if self.scale <= 0 or self.ratio <= 1:
            raise ValueError("exponential growth needs scale > 0 and ratio > 1")
        self.monotone_from = 1

    def value(self, n: int) -> int:
        return _ceil_fraction(self.scale * self.ratio**n)

    def label(self) -> str:
        return f"ceil({self.scale}*{self.ratio}^n)"

    def to_document(self) -> dict:
        return {"kind": self.kind, "scale": str(self.scale), "ratio": str(self.ratio)}


class TableGrowth(GrowthFunction):
    """Explicit head values, then a tail rule applied to the index directly."""

    kind = "table"

    def __init__(self, values: Sequence[int], tail: GrowthFunction):
        self.values = tuple(int(v) for v in values)
        if any(v < 1 for v in self.values):
            raise ValueError("table values must be positive")
        self.tail = tail
        self.monotone_from = len(self.values) + tail.monotone_from

    def value(self, n: int) -> int:
        if n <= len(self.values):
            return self.values[n - 1]
        return self.tail.value(n)

    def label(self) -> str:
        return f"table({list(self.values)}; then {self.tail.label()})"

    def to_document(self) -> dict:
        return {"kind": self.kind, "values": list(self.values), "tail": self.tail.to_document()}


def growth_from_document(doc: dict) -> GrowthFunction:
    known = {"kind", "scale", "exponent", "ratio", "values", "tail"}
    unknown = set(doc) - known
    if unknown:
        raise ValueError(f"unknown growth fields: {sorted(unknown)}")
    kind = doc.get("kind")
    if kind == "power":
        return PowerGrowth(Fraction(str(doc.get("scale", 1))), int(doc.get("exponent", 1)))
    if kind == "exponential":
        return ExponentialGrowth(Fraction(str(doc.get("scale", 1))), Fraction(str(doc.get("ratio", 2))))
    if kind == "table":
        return TableGrowth([int(v) for v in doc["values"]], growth_from_document(doc["tail"]))
    raise ValueError(f"unknown growth kind {kind!r}")
