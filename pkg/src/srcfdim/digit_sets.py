"""Digit alphabets B, growth functions f, and the exponent of convergence.

tau(B) = inf{s >= 0 : sum_{k in B} k^-s < infinity}.  Closed forms exist for
the built-in kinds (naturals -> 1, b-th powers -> 1/b, geometric -> 0,
primes -> 1, polynomial of degree d -> 1/d, finite -> 0); a numeric bracket
path bisects certified convergence decisions instead, so the two can be
cross-checked.

Power sums over digit ranges are served either by direct enumeration (small
ranges) or by analytic two-sided brackets (Hurwitz-zeta range sums with
certified ratio corrections), which is what makes astronomically deep block
schemes computable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from mpmath import mp, mpf, zeta, digamma

ENUM_CAP = 500_000
_MP_DPS = 30


class NotEnumerableError(ValueError):
    """Range too large to enumerate and no analytic bracket for this kind."""


class NoTailBoundError(ValueError):
    """No certified tail estimate available (soft path: one-sided tau bracket)."""


def _iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for integers n >= 0, k >= 1, exactly (integer Newton)."""
    if n < 0:
        raise ValueError("negative radicand")
    if k == 1 or n in (0, 1):
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << (n.bit_length() // k + 1)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def _as_mpf(t) -> "mpf":
    if isinstance(t, Fraction):
        return mpf(t.numerator) / t.denominator
    return mpf(t)


def range_sum_naturals(t, a: int, b: int) -> float:
    """sum_{k=a}^{b-1} k^-t for integers 1 <= a <= b, via zeta/digamma
    differences (valid for every real t, including t < 1)."""
    if b <= a:
        return 0.0
    with mp.workdps(_MP_DPS):
        tm = _as_mpf(t)
        if abs(float(tm) - 1.0) < 1e-12:
            return float(digamma(b) - digamma(a))
        return float(zeta(tm, a) - zeta(tm, b))


def tail_upper_naturals(t: float, a: int) -> float:
    """Certified upper bound for sum_{k>=a} k^-t (integral comparison:
    (a-1)^(1-t)/(t-1), computed in logs so huge cutoffs stay finite)."""
    if t <= 1.0:
        return math.inf
    if a <= 1:
        return 1.0 + 1.0 / (t - 1.0)
    return math.exp((1.0 - t) * math.log(a - 1)) / (t - 1.0)


@dataclass(frozen=True)
class TauEstimate:
    """Bracket [lower, upper] for the exponent of convergence."""

    lower: Fraction | float
    upper: Fraction | float
    method: str
    warning: str | None = None

    @property
    def is_exact(self) -> bool:
        return self.lower == self.upper


class DigitSet:
    """Strictly increasing set of positive integers with certified tails."""

    kind = "abstract"
    #: True when power sums over huge digit ranges have an analytic bracket
    has_analytic_range_sums = False

    # -- enumeration ------------------------------------------------------
    def min_element(self) -> int:
        raise NotImplementedError

    @property
    def is_finite(self) -> bool:
        return False

    def iter_from(self, lo: int) -> Iterator[int]:
        raise NotImplementedError

    def next_element(self, after: int) -> int:
        for k in self.iter_from(after + 1):
            return k
        raise NotEnumerableError(f"{self.label()} exhausted after {after}")

    def contains(self, k: int) -> bool:
        raise NotImplementedError

    def count_range(self, lo: int, hi: int) -> int:
        """#B cap [lo, hi)."""
        raise NotImplementedError

    def range_element(self, lo: int, idx: int) -> int:
        """idx-th (0-based) element of B cap [lo, infinity)."""
        it = self.iter_from(lo)
        for pos, k in enumerate(it):
            if pos == idx:
                return k
            if pos > ENUM_CAP:
                raise NotEnumerableError(f"{self.label()}: rank {idx} beyond enumeration cap")
        raise IndexError(idx)

    def elements_range(self, lo: int, hi: int) -> tuple[int, ...]:
        n = self.count_range(lo, hi)
        if n > ENUM_CAP:
            raise NotEnumerableError(f"{self.label()}: {n} elements in [{lo},{hi})")
        out = []
        for k in self.iter_from(lo):
            if k >= hi:
                break
            out.append(k)
        return tuple(out)

    # -- analytic layer ----------------------------------------------------
    def tau_closed_form(self) -> Fraction | None:
        return None

    def series_converges(self, s: float) -> bool | None:
        """Certified convergence decision for sum_{k in B} k^-s; None means
        undecidable with the available tail bounds."""
        return None

    def tail_upper(self, exponent: float, L: int) -> float:
        """Certified upper bound for sum_{k in B, k >= L} k^-exponent."""
        raise NoTailBoundError(f"{self.label()} has no certified tail bound")

    def power_sum_bracket(self, t: float, lo: int, hi: int, shift: int = 0) -> tuple[float, float]:
        """Two-sided bracket of sum_{k in B cap [lo,hi)} (k+shift)^-t.

        Enumerates when the range is small; kinds with an analytic route
        override the large-range branch.
        """
        n = self.count_range(lo, hi)
        if n == 0:
            return (0.0, 0.0)
        if n <= ENUM_CAP:
            tf = float(t)
            total = 0.0
            for k in self.iter_from(lo):
                if k >= hi:
                    break
                base = k + shift
                if base <= 0:
                    raise ValueError(f"digit {k} with shift {shift} not summable")
                total += base ** (-tf)
            return (total, total)
        return self._power_sum_bracket_large(t, lo, hi, shift, n)

    def _power_sum_bracket_large(self, t, lo, hi, shift, count) -> tuple[float, float]:
        raise NotEnumerableError(
            f"{self.label()}: {count} elements in [{lo},{hi}) and no analytic bracket"
        )

    # -- documents ----------------------------------------------------------
    def label(self) -> str:
        return self.kind

    def to_document(self) -> dict:
        return {"kind": self.kind}


class Naturals(DigitSet):
    kind = "naturals"
    has_analytic_range_sums = True

    def power_sum_bracket(self, t, lo: int, hi: int, shift: int = 0) -> tuple[float, float]:
        # zeta range sums are exact for every shift; skip enumeration early
        n = self.count_range(lo, hi)
        if n > 512:
            return self._power_sum_bracket_large(t, lo, hi, shift, n)
        return super().power_sum_bracket(t, lo, hi, shift)

    def min_element(self) -> int:
        return 1

    def iter_from(self, lo: int) -> Iterator[int]:
        k = max(1, lo)
        while True:
            yield k
            k += 1

    def contains(self, k: int) -> bool:
        return k >= 1

    def count_range(self, lo: int, hi: int) -> int:
        return max(0, hi - max(1, lo))

    def range_element(self, lo: int, idx: int) -> int:
        return max(1, lo) + idx

    def tau_closed_form(self) -> Fraction:
        return Fraction(1)

    def series_converges(self, s: float) -> bool:
        # integral comparison: finite iff s > 1
        return s > 1.0

    def tail_upper(self, exponent: float, L: int) -> float:
        return tail_upper_naturals(exponent, max(1, L))

    def _power_sum_bracket_large(self, t, lo, hi, shift, count):
        v = range_sum_naturals(t, max(1, lo) + shift, hi + shift)
        return (v, v)


class Powers(DigitSet):
    """{ j^b : j >= 1 } for an integer exponent b >= 1."""

    kind = "powers"
    has_analytic_range_sums = True

    def __init__(self, exponent: int):
        if exponent < 1:
            raise ValueError("power exponent must be >= 1")
        self.exponent = int(exponent)

    def power_sum_bracket(self, t, lo: int, hi: int, shift: int = 0) -> tuple[float, float]:
        # base-index zeta sums are exact at shift 0; prefer them for big ranges
        n = self.count_range(lo, hi)
        if shift == 0 and n > 512:
            return self._power_sum_bracket_large(t, lo, hi, 0, n)
        return super().power_sum_bracket(t, lo, hi, shift)

    def min_element(self) -> int:
        return 1

    def _base_from(self, lo: int) -> int:
        b = self.exponent
        j = _iroot(max(0, lo - 1), b) + 1  # smallest j with j^b >= lo
        return max(1, j)

    def iter_from(self, lo: int) -> Iterator[int]:
        j = self._base_from(lo)
        while True:
            yield j**self.exponent
            j += 1

    def contains(self, k: int) -> bool:
        return k >= 1 and _iroot(k, self.exponent) ** self.exponent == k

    def count_range(self, lo: int, hi: int) -> int:
        return max(0, self._base_from(hi) - self._base_from(lo))

    def range_element(self, lo: int, idx: int) -> int:
        return (self._base_from(lo) + idx) ** self.exponent

    def tau_closed_form(self) -> Fraction:
        return Fraction(1, self.exponent)

    def series_converges(self, s: float) -> bool:
        return s * self.exponent > 1.0

    def tail_upper(self, exponent: float, L: int) -> float:
        return tail_upper_naturals(exponent * self.exponent, self._base_from(L))

    def _power_sum_bracket_large(self, t, lo, hi, shift, count):
        b = self.exponent
        jlo, jhi = self._base_from(lo), self._base_from(hi)
        base = range_sum_naturals(t * b, jlo, jhi)
        if shift == 0:
            return (base, base)
        t = float(t)
        # (j^b + shift)^-t = j^(-bt) * rho_j^-t with rho_j = 1 + shift*j^-b,
        # monotone in j; certified ends from the extreme bases.
        if jlo**b + shift <= 0:
            raise ValueError(f"digit {jlo**b} with shift {shift} not summable")
        rho_first = (1.0 + shift / float(jlo**b)) ** (-t)
        rho_last = (1.0 + shift / float((jhi - 1) ** b)) ** (-t)
        r_lo, r_hi = min(rho_first, rho_last), max(rho_first, rho_last)
        return (base * r_lo, base * r_hi)

    def label(self) -> str:
        return f"powers(b={self.exponent})"

    def to_document(self) -> dict:
        return {"kind": self.kind, "exponent": self.exponent}


class Geometric(DigitSet):
    """{ scale * ratio^j : j >= 0 } with integer scale >= 1, ratio >= 2."""

    kind = "geometric"
    has_analytic_range_sums = True  # ranges hold only O(log) elements

    def __init__(self, ratio: int, scale: int = 1):
        if ratio < 2 or scale < 1:
            raise ValueError("geometric set needs ratio >= 2 and scale >= 1")
        self.ratio = int(ratio)
        self.scale = int(scale)

    def min_element(self) -> int:
        return self.scale

    def _exp_from(self, lo: int) -> int:
        j, v = 0, self.scale
        while v < lo:
            v *= self.ratio
            j += 1
        return j

    def iter_from(self, lo: int) -> Iterator[int]:
        j = self._exp_from(lo)
        v = self.scale * self.ratio**j
        while True:
            yield v
            v *= self.ratio

    def contains(self, k: int) -> bool:
        if k < self.scale or k % self.scale:
            return False
        v = k // self.scale
        while v % self.ratio == 0:
            v //= self.ratio
        return v == 1

    def count_range(self, lo: int, hi: int) -> int:
        return max(0, self._exp_from(hi) - self._exp_from(lo))

    def range_element(self, lo: int, idx: int) -> int:
        return self.scale * self.ratio ** (self._exp_from(lo) + idx)

    def tau_closed_form(self) -> Fraction:
        return Fraction(0)

    def series_converges(self, s: float) -> bool:
        # geometric tail; converges for every positive s, diverges at 0
        return s > 0.0

    def tail_upper(self, exponent: float, L: int) -> float:
        if exponent <= 0.0:
            return math.inf
        first = self.scale * self.ratio ** self._exp_from(L)
        q = math.exp(-exponent * math.log(self.ratio))
        return math.exp(-exponent * math.log(first)) / (1.0 - q)

    def label(self) -> str:
        return f"geometric({self.scale}*{self.ratio}^k)"

    def to_document(self) -> dict:
        return {"kind": self.kind, "ratio": self.ratio, "scale": self.scale}


class PolynomialValues(DigitSet):
    """{ p(j) : j >= start } for an integer polynomial, strictly increasing."""

    kind = "polynomial"
    has_analytic_range_sums = True

    def __init__(self, coeffs: Sequence[int], start: int = 1):
        coeffs = tuple(int(c) for c in coeffs)
        if not coeffs or coeffs[-1] <= 0:
            raise ValueError("polynomial needs a positive leading coefficient")
        if len(coeffs) < 2:
            raise ValueError("degree must be >= 1 (constant sets are not infinite)")
        self.coeffs = coeffs
        self.start = int(start)
        # monotone-from bound: beyond 1 + sum|c_i|/c_d the derivative-free
        # increment p(j+1)-p(j) is positive; verify the declared start exactly
        guard = 1 + sum(abs(c) for c in coeffs) // coeffs[-1] + 1
        j = self.start
        prev = self._value(j)
        if prev < 1:
            raise ValueError("polynomial values must be positive from start")
        while j < self.start + guard:
            nxt = self._value(j + 1)
            if nxt <= prev:
                raise ValueError(f"polynomial not strictly increasing at j={j}")
            prev, j = nxt, j + 1

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def _value(self, j: int) -> int:
        v = 0
        for c in reversed(self.coeffs):
            v = v * j + c
        return v

    def min_element(self) -> int:
        return self._value(self.start)

    def _base_from(self, lo: int) -> int:
        # smallest j >= start with p(j) >= lo (p increasing from start)
        if self._value(self.start) >= lo:
            return self.start
        a, b = self.start, self.start + 1
        while self._value(b) < lo:
            a, b = b, 2 * b - self.start + 1
        while a + 1 < b:
            m = (a + b) // 2
            if self._value(m) >= lo:
                b = m
            else:
                a = m
        return b

    def iter_from(self, lo: int) -> Iterator[int]:
        j = self._base_from(lo)
        while True:
            yield self._value(j)
            j += 1

    def contains(self, k: int) -> bool:
        j = self._base_from(k)
        return self._value(j) == k

    def count_range(self, lo: int, hi: int) -> int:
        return max(0, self._base_from(hi) - self._base_from(lo))

    def range_element(self, lo: int, idx: int) -> int:
        return self._value(self._base_from(lo) + idx)

    def tau_closed_form(self) -> Fraction:
        return Fraction(1, self.degree)

    def series_converges(self, s: float) -> bool:
        return s * self.degree > 1.0

    def tail_upper(self, exponent: float, L: int) -> float:
        d, cd = self.degree, self.coeffs[-1]
        m = sum(abs(c) for c in self.coeffs[:-1])
        j0 = self._base_from(L)
        jstar = max(j0, 2 * (m // cd + 1), self.start)
        exponent = float(exponent)
        head = sum(math.exp(-exponent * math.log(self._value(j))) for j in range(j0, jstar))
        # beyond jstar, p(j) >= (cd/2) j^d
        tail = (cd / 2.0) ** (-exponent) * tail_upper_naturals(exponent * d, jstar)
        return head + tail

    def _power_sum_bracket_large(self, t, lo, hi, shift, count):
        d, cd = self.degree, self.coeffs[-1]
        m = sum(abs(c) for c in self.coeffs[:-1]) + abs(shift)
        jlo, jhi = self._base_from(lo), self._base_from(hi)
        t = float(t)
        if m >= cd * jlo:
            raise NotEnumerableError(
                f"{self.label()}: range starts too low for the analytic bracket"
            )
        base = range_sum_naturals(t * d, jlo, jhi) * float(cd) ** (-t)
        eps = m / float(cd * jlo)
        return (base * (1.0 + eps) ** (-t), base * (1.0 - eps) ** (-t))

    def label(self) -> str:
        return f"polynomial({list(self.coeffs)}; j>={self.start})"

    def to_document(self) -> dict:
        return {"kind": self.kind, "coeffs": list(self.coeffs), "start": self.start}


class Primes(DigitSet):
    """The primes.  Enumeration is sieve-backed and capped; tau is 1 exactly
    (Rosser-type bounds k log k <= p_k <= k(log k + log log k) pin both sides)."""

    kind = "primes"

    def __init__(self):
        self._sieve_limit = 0
        self._primes: list[int] = []

    def _extend(self, limit: int) -> None:
        if limit <= self._sieve_limit:
            return
        limit = max(limit, 2 * self._sieve_limit, 1 << 16)
        if limit > 50_000_000:
            raise NotEnumerableError("prime enumeration capped at 5e7")
        sieve = bytearray([1]) * (limit + 1)
        sieve[0:2] = b"\x00\x00"
        for p in range(2, math.isqrt(limit) + 1):
            if sieve[p]:
                sieve[p * p :: p] = b"\x00" * len(range(p * p, limit + 1, p))
        self._primes = [i for i, v in enumerate(sieve) if v]
        self._sieve_limit = limit

    def min_element(self) -> int:
        return 2

    def iter_from(self, lo: int) -> Iterator[int]:
        import bisect

        limit = max(64, 2 * lo)
        while True:
            self._extend(limit)
            i = bisect.bisect_left(self._primes, lo)
            while i < len(self._primes):
                yield self._primes[i]
                i += 1
            lo = self._sieve_limit + 1
            limit = 2 * self._sieve_limit

    def contains(self, k: int) -> bool:
        if k < 2:
            return False
        self._extend(k)
        import bisect

        i = bisect.bisect_left(self._primes, k)
        return i < len(self._primes) and self._primes[i] == k

    def count_range(self, lo: int, hi: int) -> int:
        import bisect

        self._extend(max(2, hi))
        return bisect.bisect_left(self._primes, hi) - bisect.bisect_left(self._primes, lo)

    def tau_closed_form(self) -> Fraction:
        return Fraction(1)

    def series_converges(self, s: float) -> bool:
        # p_k >= k log k gives convergence for s > 1; p_k <= 2k log k (k >= 6)
        # gives divergence for s <= 1
        return s > 1.0

    def tail_upper(self, exponent: float, L: int) -> float:
        return tail_upper_naturals(exponent, max(2, L))


class Explicit(DigitSet):
    """Finite sorted list, optionally continued by a generator tail that
    starts strictly above the largest listed element."""

    kind = "explicit"

    def __init__(self, elements: Sequence[int], tail: DigitSet | None = None):
        elems = tuple(sorted(set(int(k) for k in elements)))
        if not elems or elems[0] < 1:
            raise ValueError("explicit set needs positive elements")
        if tail is not None and tail.min_element() <= elems[-1]:
            raise ValueError("generator tail must start above the listed elements")
        self.elements = elems
        self.tail = tail

    def min_element(self) -> int:
        return self.elements[0]

    @property
    def is_finite(self) -> bool:
        return self.tail is None

    def iter_from(self, lo: int) -> Iterator[int]:
        for k in self.elements:
            if k >= lo:
                yield k
        if self.tail is not None:
            yield from self.tail.iter_from(max(lo, self.elements[-1] + 1))

    def contains(self, k: int) -> bool:
        if k in self.elements:
            return True
        return self.tail is not None and self.tail.contains(k)

    def count_range(self, lo: int, hi: int) -> int:
        import bisect

        n = bisect.bisect_left(self.elements, hi) - bisect.bisect_left(self.elements, lo)
        if self.tail is not None:
            n += self.tail.count_range(max(lo, self.elements[-1] + 1), max(hi, self.elements[-1] + 1))
        return n

    def tau_closed_form(self) -> Fraction | None:
        if self.tail is None:
            return Fraction(0)
        return self.tail.tau_closed_form()

    def series_converges(self, s: float) -> bool | None:
        if self.tail is None:
            return s >= 0.0
        return self.tail.series_converges(s)

    def tail_upper(self, exponent: float, L: int) -> float:
        exponent = float(exponent)
        head = sum(math.exp(-exponent * math.log(k)) for k in self.elements if k >= L)
        if self.tail is None:
            return head
        return head + self.tail.tail_upper(exponent, max(L, self.elements[-1] + 1))

    def label(self) -> str:
        base = f"explicit({list(self.elements)})"
        return base if self.tail is None else f"{base}+{self.tail.label()}"

    def to_document(self) -> dict:
        doc: dict = {"kind": self.kind, "elements": list(self.elements)}
        if self.tail is not None:
            doc["tail"] = self.tail.to_document()
        return doc


def tau(B: DigitSet, tolerance: float = 1e-6, method: str = "auto") -> TauEstimate:
    """Exponent of convergence of B, exact or bracketed to `tolerance`.

    method: "auto" prefers a closed form; "bracket" forces bisection on the
    certified convergence decisions; "closed-form" errors when unavailable.
    """
    if method not in ("auto", "bracket", "closed-form"):
        raise ValueError(f"unknown tau method {method!r}")
    closed = B.tau_closed_form()
    if method in ("auto", "closed-form"):
        if closed is not None:
            return TauEstimate(lower=closed, upper=closed, method="closed-form")
        if method == "closed-form":
            raise NoTailBoundError(f"{B.label()} has no closed-form tau")

    # bracket by bisection on s; decisions may be None (no tail bound)
    lo, lo_known = 0.0, True  # sum over an infinite B diverges at s = 0
    hi, hi_known = 1.0, False
    guard = 0
    while True:
        dec = B.series_converges(hi)
        if dec is True:
            hi_known = True
            break
        if dec is None:
            return TauEstimate(lower=lo, upper=math.inf, method="partial-sum",
                               warning="no certified tail bound above; one-sided bracket")
        hi *= 2.0
        guard += 1
        if guard > 60:
            return TauEstimate(lower=lo, upper=math.inf, method="partial-sum",
                               warning="no convergent exponent found below 2^60")
    while hi - lo > tolerance:
        mid = 0.5 * (lo + hi)
        dec = B.series_converges(mid)
        if dec is True:
            hi = mid
        elif dec is False:
            lo = mid
        else:
            return TauEstimate(lower=lo, upper=hi, method="partial-sum",
                               warning=f"tail bound undecidable at s={mid}; widened bracket kept")
    return TauEstimate(lower=lo, upper=hi, method="bracket")


def digit_set_from_document(doc: dict) -> DigitSet:
    known = {"kind", "exponent", "ratio", "scale", "coeffs", "start", "elements", "tail"}
    unknown = set(doc) - known
    if unknown:
        raise ValueError(f"unknown digit-set fields: {sorted(unknown)}")
    kind = doc.get("kind")
    if kind == "naturals":
        return Naturals()
    if kind == "powers":
        return Powers(int(doc["exponent"]))
    if kind == "geometric":
        return Geometric(int(doc["ratio"]), int(doc.get("scale", 1)))
    if kind == "polynomial":
        return PolynomialValues([int(c) for c in doc["coeffs"]], int(doc.get("start", 1)))
    if kind == "primes":
        return Primes()
    if kind == "explicit":
        tail = doc.get("tail")
        return Explicit([int(k) for k in doc["elements"]],
                        digit_set_from_document(tail) if tail else None)
    raise ValueError(f"unknown digit-set kind {kind!r}")
