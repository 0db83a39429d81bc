"""Block scheme (b_m, B_m, t_m) underlying the lower dimension bound.

Given a digit set B with exponent of convergence tau, a growth function f and
eps in (0, tau), the scheme partitions B into digit blocks

    b_1 = min B;  b_{m+1} = the minimal element of B above b_m with
                  sum_{k in B cap [b_m, b_{m+1})} k^-(tau - eps) >= 1,

sets B_1 = {min B}, B_m = B cap [b_m, b_{m+1}) for m >= 2, and assigns window
lengths t_m deterministically: t_m is the smallest positive integer such that

    (i)  the next window starts at or after N(b_{m+2}), the index from which
         f stays >= b_{m+2}, and
    (ii) the schedule certificates log #B_m / sum_{j<=m} t_j <= 1/m and
         log #B_{m+1} / (sum_{j<=m} t_j + 1) <= 1/(m+1) hold.

Level n then carries the alphabet B_1 for n <= t_1 and B_m on window m, which
keeps every installed digit below f(n) and the level alphabets
subexponentially small (rate 1/m).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .digit_sets import DigitSet, ENUM_CAP, Naturals, Powers, digit_set_from_document, tau
from .growth import GrowthFunction, growth_from_document

SCHEME_DOC_SCHEMA = "srcf-block-scheme/1"


class EpsilonOutOfRangeError(ValueError):
    pass


class HorizonTooSmallError(ValueError):
    """The b- or t-construction could not be completed within its scan bound."""


@dataclass(frozen=True)
class Block:
    """B_m as a digit range [lo, hi) of the parent set, with count and, when
    small enough, the materialized elements."""

    m: int
    lo: int
    hi: int
    count: int
    elements: tuple[int, ...] | None

    @property
    def min_digit(self) -> int:
        return self.lo if self.elements is None else self.elements[0]


@dataclass(frozen=True)
class BlockScheme:
    digit_set: DigitSet
    growth: GrowthFunction
    epsilon: Fraction
    tau_lower: Fraction | float
    exponent: Fraction | float  # tau_lower - epsilon
    b: tuple[int, ...]  # b_1 .. b_{M+2}
    blocks: tuple[Block, ...]  # B_1 .. B_{M+1}
    t: tuple[int, ...]  # t_1 .. t_M
    horizon: int  # M
    cum_t: tuple[int, ...] = field(default=())
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.cum_t:
            acc, cums = 0, []
            for tm in self.t:
                acc += tm
                cums.append(acc)
            object.__setattr__(self, "cum_t", tuple(cums))

    @property
    def depth_limit(self) -> int:
        """Largest level index covered by the t-schedule."""
        return self.cum_t[-1]

    def window_of(self, n: int) -> int:
        """Block index m whose window contains level n."""
        if n < 1 or n > self.depth_limit:
            raise HorizonTooSmallError(
                f"level {n} beyond scheme horizon (levels 1..{self.depth_limit})"
            )
        import bisect

        return bisect.bisect_left(self.cum_t, n) + 1

    def window_range(self, m: int) -> tuple[int, int]:
        """Inclusive level range of window m."""
        start = 1 if m == 1 else self.cum_t[m - 2] + 1
        return start, self.cum_t[m - 1]

    def block(self, m: int) -> Block:
        return self.blocks[m - 1]

    def alphabet_layout(self, n: int) -> tuple[int, Block, int]:
        """(window index m, level alphabet B_m, offset l_n within the window)."""
        m = self.window_of(n)
        start, _ = self.window_range(m)
        return m, self.block(m), n - start + 1

    def block_log_sum(self, m: int, t, shift: int = 0) -> tuple[float, float]:
        """log of a two-sided bracket of sum_{k in B_m} (k+shift)^-t."""
        blk = self.block(m)
        if m == 1:
            v = float(blk.min_digit + shift) ** (-float(t))
            return (math.log(v), math.log(v))
        lo, hi = self.digit_set.power_sum_bracket(t, blk.lo, blk.hi, shift)
        return (math.log(lo), math.log(hi))

    def audit(self) -> dict:
        """Re-verify the construction invariants by direct evaluation."""
        out = {}
        e = self.exponent
        B = self.digit_set
        # minimality: the predecessor of each b_{m+1} strictly fails the >= 1 sum
        ok = True
        for m in range(1, len(self.b) - 1):
            bm, bnext = self.b[m - 1], self.b[m]
            if not _sum_reaches_one(B, e, bm, bnext):
                ok = False
            if B.count_range(bm, bnext) > 1:
                prev = _previous_element(B, bm, bnext)
                if _sum_reaches_one(B, e, bm, prev):
                    ok = False
        out["b_minimal"] = ok
        # window floors: b_{m+1} <= min f over window m, m >= 2
        ok = True
        for m in range(2, self.horizon + 1):
            lo, hi = self.window_range(m)
            if self.growth.min_over(lo, hi) < self.b[m]:
                ok = False
        out["windows_below_growth"] = ok
        # subexponential rate certificates
        ok = True
        for m in range(1, self.horizon + 1):
            cnt = self.block(m).count
            start, end = self.window_range(m)
            if math.log(cnt) > end / m + 1e-12 or math.log(cnt) > start / m + 1e-12:
                ok = False
        out["rate_certificates"] = ok
        return out

    def to_document(self) -> dict:
        return {
            "schema": SCHEME_DOC_SCHEMA,
            "digit_set": self.digit_set.to_document(),
            "growth": self.growth.to_document(),
            "epsilon": str(self.epsilon),
            "tau_lower": str(self.tau_lower),
            "exponent": str(self.exponent),
            "b": list(self.b),
            "t": list(self.t),
            "horizon": self.horizon,
            "blocks": [
                {"m": blk.m, "lo": blk.lo, "hi": blk.hi, "count": blk.count}
                for blk in self.blocks
            ],
            "metadata": dict(self.metadata),
        }


def _previous_element(B: DigitSet, lo: int, element: int) -> int:
    """Largest element of B in [lo, element)."""
    count = B.count_range(lo, element)
    if count < 1:
        raise ValueError("no element below")
    return B.range_element(lo, count - 1)


def _resum_mp(B: DigitSet, bm: int, end: int, e) -> float:
    """High-precision re-accumulation of sum_{B cap [bm, end)} k^-e."""
    from mpmath import mp, mpf

    with mp.workdps(40):
        if isinstance(e, Fraction):
            t = mpf(e.numerator) / e.denominator
        else:
            t = mpf(e)
        s = mpf(0)
        for k in B.iter_from(bm):
            if k >= end:
                break
            s += mpf(k) ** (-t)
        return float(s)


def _range_sum_hp(B: DigitSet, e, lo: int, hi: int, dps: int = 50):
    """Zeta-backed range sum at high precision for tie decisions on the
    analytic kinds; None when the kind has no such route."""
    from mpmath import mp, mpf, zeta, digamma

    if isinstance(B, Powers):
        t = e * B.exponent if isinstance(e, Fraction) else float(e) * B.exponent
        a, b = B._base_from(lo), B._base_from(hi)
    elif isinstance(B, Naturals):
        t, a, b = e, max(1, lo), hi
    else:
        return None
    with mp.workdps(dps):
        tm = mpf(t.numerator) / t.denominator if isinstance(t, Fraction) else mpf(t)
        if abs(float(tm) - 1.0) < 1e-15:
            return digamma(b) - digamma(a)
        return zeta(tm, a) - zeta(tm, b)


def _sum_reaches_one(B: DigitSet, e, lo: int, hi: int) -> bool:
    """Certified decision of sum_{B cap [lo,hi)} k^-e >= 1, escalating to
    40-digit re-accumulation or 50-digit zeta sums near the threshold."""
    lo_v, hi_v = B.power_sum_bracket(e, lo, hi, 0)
    if lo_v == hi_v and abs(lo_v - 1.0) < 1e-9:
        if B.count_range(lo, hi) <= ENUM_CAP:
            return _resum_mp(B, lo, hi, e) >= 1.0
        hp = _range_sum_hp(B, e, lo, hi)
        if hp is not None:
            return hp >= 1
        raise HorizonTooSmallError(
            f"block sum over [{lo},{hi}) too close to 1 to certify"
        )
    if lo_v >= 1.0:
        return True
    if hi_v < 1.0:
        return False
    raise HorizonTooSmallError(f"block sum bracket over [{lo},{hi}) straddles 1")


def _next_block_end(B: DigitSet, bm: int, e, scan_cap: int) -> int:
    """Minimal element x of B above bm with sum_{B cap [bm, x)} k^-e >= 1.

    Enumerates while the block stays small, then switches to binary search on
    the element rank using analytic range sums.  Decisions within 1e-9 of the
    threshold are re-verified at 40 digits.
    """
    ef = float(e)
    linear_cap = 2000 if B.has_analytic_range_sums else min(ENUM_CAP, scan_cap)
    total = 0.0
    seen = 0
    prev = None
    for k in B.iter_from(bm):
        if prev is not None:
            crossed = total >= 1.0
            if abs(total - 1.0) < 1e-9:
                crossed = _resum_mp(B, bm, k, e) >= 1.0
            if crossed:
                return k
        total += k ** (-ef)
        prev = k
        seen += 1
        if seen > linear_cap:
            break
    if B.is_finite:
        raise HorizonTooSmallError(f"digit set {B.label()} exhausted while building blocks")
    # analytic path: binary search on the element rank
    def crossed_at(rank: int) -> bool:
        return _sum_reaches_one(B, e, bm, B.range_element(bm, rank))

    lo_rank, hi_rank = 1, 2
    while not crossed_at(hi_rank):
        hi_rank *= 2
        if hi_rank > scan_cap:
            raise HorizonTooSmallError(
                f"no block end within scan bound {scan_cap} elements from {bm}"
            )
    while lo_rank < hi_rank:
        mid = (lo_rank + hi_rank) // 2
        if crossed_at(mid):
            hi_rank = mid
        else:
            lo_rank = mid + 1
    return B.range_element(bm, lo_rank)


def build_blocks(B: DigitSet, f: GrowthFunction, epsilon: Fraction | float,
                 horizon: int, tau_value: Fraction | float | None = None,
                 scan_cap: int = 10**60) -> BlockScheme:
    """Construct the deterministic block scheme with M = horizon windows.

    tau_value overrides the tau estimate (must be a certified lower end);
    otherwise the closed form (or bracket lower end) of tau(B) is used.
    """
    epsilon = Fraction(str(epsilon)) if isinstance(epsilon, float) else Fraction(epsilon)
    if tau_value is None:
        est = tau(B)
        tau_lower = est.lower
    else:
        tau_lower = tau_value
    if isinstance(tau_lower, Fraction):
        exponent = tau_lower - epsilon
    else:
        exponent = float(tau_lower) - float(epsilon)
    if not (0 < float(epsilon) < float(tau_lower)):
        raise EpsilonOutOfRangeError(
            f"epsilon must lie in (0, tau(B)) = (0, {float(tau_lower)}); got {float(epsilon)}"
        )
    if horizon < 1:
        raise ValueError("horizon must be >= 1")

    f.validate_floor(B.min_element())

    # b_1 .. b_{M+2}
    b = [B.min_element()]
    while len(b) < horizon + 2:
        b.append(_next_block_end(B, b[-1], exponent, scan_cap))

    blocks = [Block(m=1, lo=b[0], hi=b[1], count=1, elements=(b[0],))]
    for m in range(2, horizon + 2):
        lo, hi = b[m - 1], b[m]
        count = B.count_range(lo, hi)
        elements = B.elements_range(lo, hi) if count <= ENUM_CAP else None
        blocks.append(Block(m=m, lo=lo, hi=hi, count=count, elements=elements))

    # deterministic t-schedule
    t: list[int] = []
    S = 0
    for m in range(1, horizon + 1):
        need = 1
        # (i) window m+1 must start at or after N(b_{m+2})
        n_next = f.first_index_at_least(b[m + 1])
        need = max(need, n_next - 1 - S)
        # (ii) own rate certificate: S + t >= m * log #B_m
        own = m * math.log(blocks[m - 1].count) if blocks[m - 1].count > 1 else 0.0
        if S < own:
            need = max(need, math.ceil(own) - S)
        # (ii') next window's first certificate: S + t + 1 >= (m+1) * log #B_{m+1}
        nxt = (m + 1) * math.log(blocks[m].count) if blocks[m].count > 1 else 0.0
        if S + 1 < nxt:
            need = max(need, math.ceil(nxt) - 1 - S)
        t.append(need)
        S += need

    skipped = B.count_range(b[0] + 1, b[1]) if b[0] + 1 < b[1] else 0
    metadata = {
        "skipped_elements_below_b2": skipped,
        "note": "block union omits elements strictly between min B and b_2 when min B > 1"
        if skipped
        else "",
        "rate": "log #B_m within windows certified at rate 1/m",
    }
    return BlockScheme(
        digit_set=B,
        growth=f,
        epsilon=epsilon,
        tau_lower=tau_lower,
        exponent=exponent,
        b=tuple(b),
        blocks=tuple(blocks),
        t=tuple(t),
        horizon=horizon,
        metadata=metadata,
    )


def scheme_from_document(doc: dict) -> BlockScheme:
    known = {"schema", "digit_set", "growth", "epsilon", "tau_lower", "exponent",
             "b", "t", "horizon", "blocks", "metadata"}
    unknown = set(doc) - known
    if unknown:
        raise ValueError(f"unknown scheme fields: {sorted(unknown)}")
    if doc.get("schema") != SCHEME_DOC_SCHEMA:
        raise ValueError(f"unsupported scheme schema {doc.get('schema')!r}")
    B = digit_set_from_document(doc["digit_set"])
    f = growth_from_document(doc["growth"])
    scheme = build_blocks(B, f, Fraction(doc["epsilon"]), int(doc["horizon"]))
    if list(scheme.b) != [int(x) for x in doc["b"]] or list(scheme.t) != [int(x) for x in doc["t"]]:
        raise ValueError("scheme document does not match its deterministic rebuild")
    return scheme
