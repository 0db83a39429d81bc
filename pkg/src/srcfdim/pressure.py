"""Partition-function brackets, lower pressure, and the critical exponent.

Z_n(s) = sum over depth-n words of (sup |D phi_word| over [0,1])^s.  Exact
enumeration composes the integer matrices word by word (the sup norm of a
word is 1/min(d, c+d)^2 exactly) and log-sums the results; factorized mode
brackets Z_n between products of per-level inf/sup sums via the chain rule:

    prod_j sum_i (inf |D phi^(j)_i|)^s <= Z_n(s) <= prod_j sum_i (sup ...)^s.

The critical exponent is located by bisection.  A sign classification at a
candidate s must persist over the tail of the depth schedule; the default
classifier uses difference quotients (z(n_k) - z(n_{k-1}))/(n_k - n_{k-1}),
which cancel the additive O(1) offset of log Z_n and converge to the pressure
far faster than z/n (classify="quotient" gives the plain per-depth rule).
Certificates speak only at their stated depths: the limit is never claimed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .ifs import NonAutonomousIFS
from .util import parallel_map

ENUMERATION_CAP = 10**7
_INT64_SAFE = 1 << 62


class EnumerationCapExceededError(ValueError):
    def __init__(self, n: int, cap: int):
        super().__init__(
            f"depth-{n} word count exceeds the enumeration cap {cap}; "
            "use factorized mode"
        )


@dataclass(frozen=True)
class PressureBracket:
    """z_low <= log Z_n(s) <= z_high, with per-level rates p = z/n."""

    s: float
    n: int
    z_low: float
    z_high: float
    mode: str

    @property
    def p_low(self) -> float:
        return self.z_low / self.n

    @property
    def p_high(self) -> float:
        return self.z_high / self.n


@dataclass(frozen=True)
class PressureRecord:
    s: float
    brackets: tuple[PressureBracket, ...]
    burn_in: int

    @property
    def positive_certificate(self) -> bool:
        tail = [b for b in self.brackets if b.n > self.burn_in]
        return bool(tail) and all(b.p_low > 0 for b in tail)

    @property
    def negative_certificate(self) -> bool:
        tail = [b for b in self.brackets if b.n > self.burn_in]
        return bool(tail) and all(b.p_high < 0 for b in tail)


@dataclass(frozen=True)
class BowenBracket:
    s_minus: float
    s_plus: float
    status: str  # "converged" | "indeterminate" | "exhausted"
    tolerance: float
    depths: tuple[int, ...]
    classify: str
    evidence: tuple = ()

    @property
    def width(self) -> float:
        return self.s_plus - self.s_minus


# -- exact enumeration --------------------------------------------------------

def _continuant_bound(alphabets) -> int:
    bound = 1
    for alpha in alphabets:
        bound *= max(alpha) + 1
    return bound


def _lognorms_vectorized(alphabets, signs) -> np.ndarray:
    C = np.zeros(1, dtype=np.int64)
    D = np.ones(1, dtype=np.int64)
    for alpha, s in zip(alphabets, signs):
        cs, ds = [], []
        for i in alpha:
            cs.append(D if s == 1 else -D)
            ds.append(C + D * i)
        C = np.concatenate(cs)
        D = np.concatenate(ds)
    m = np.minimum(D, C + D)
    return -2.0 * np.log(m.astype(np.float64))


def _lognorms_python(alphabets, signs, threads: int, deterministic: bool) -> np.ndarray:
    first = alphabets[0]
    rest = alphabets[1:]
    rest_signs = signs[1:]

    def chunk(digit: int) -> list:
        # denominator row (c, d) of the level-1 generator matrix (0,1; s0, digit)
        out: list[float] = []

        def rec(level: int, c: int, d: int) -> None:
            if level == len(rest):
                out.append(-2.0 * math.log(min(d, c + d)))
                return
            sgn = rest_signs[level]
            for i in rest[level]:
                rec(level + 1, d if sgn == 1 else -d, c + d * i)

        rec(0, signs[0], digit)
        return out

    chunks = parallel_map(chunk, list(first), threads=threads,
                          ordered=deterministic)
    return np.array([v for ch in chunks for v in ch], dtype=np.float64)


def enumerate_log_norms(system: NonAutonomousIFS, n: int,
                        cap: int = ENUMERATION_CAP, threads: int = 1,
                        deterministic: bool = True) -> np.ndarray:
    """Array of log sup-norms over all admissible depth-n words (cached)."""
    cache = getattr(system, "_lognorm_cache", None)
    if cache is None:
        cache = {}
        system._lognorm_cache = cache
    if n in cache:
        return cache[n]
    total = system.words_total(n, cap)
    if total is None:
        raise EnumerationCapExceededError(n, cap)
    alphabets = system.prefix_alphabets(n)
    signs = [system.sign(k) for k in range(1, n + 1)]
    if _continuant_bound(alphabets) < _INT64_SAFE:
        arr = _lognorms_vectorized(alphabets, signs)
    else:
        arr = _lognorms_python(alphabets, signs, threads, deterministic)
    arr.setflags(write=False)
    cache[n] = arr
    return arr


def _logsumexp(values: np.ndarray) -> float:
    m = float(values.max())
    return m + math.log(float(np.exp(values - m).sum()))


# -- factorized brackets -------------------------------------------------------

def _block_array(system: NonAutonomousIFS, window: int) -> np.ndarray | None:
    cache = getattr(system, "_block_arrays", None)
    if cache is None:
        cache = {}
        system._block_arrays = cache
    if window not in cache:
        blk = system.scheme.block(window)
        cache[window] = None if blk.elements is None else np.array(blk.elements, dtype=np.float64)
    return cache[window]


def _group_level_logsums(system: NonAutonomousIFS, group, s: float) -> tuple[float, float]:
    """(log sum_i inf_i^s, log sum_i sup_i^s) for one level of the group."""
    t = 2.0 * s
    if group.digits is not None and len(group.digits) <= 4096:
        arr = np.array(group.digits, dtype=np.float64)
    elif group.block_range is not None and system.scheme is not None:
        arr = _block_array(system, group.window)
        if arr is None:
            lo, hi = group.block_range
            B = system.scheme.digit_set
            if group.sign == 1:
                lo_v = B.power_sum_bracket(t, lo, hi, +1)[0]
                hi_v = B.power_sum_bracket(t, lo, hi, 0)[1]
            else:
                lo_v = B.power_sum_bracket(t, lo, hi, 0)[0]
                hi_v = B.power_sum_bracket(t, lo, hi, -1)[1]
            return math.log(lo_v), math.log(hi_v)
    else:
        arr = np.array(group.digits, dtype=np.float64)
    if group.sign == 1:
        lo_v = float(((arr + 1.0) ** (-t)).sum())
        hi_v = float((arr ** (-t)).sum())
    else:
        lo_v = float((arr ** (-t)).sum())
        hi_v = float(((arr - 1.0) ** (-t)).sum())
    return math.log(lo_v), math.log(hi_v)


def _factorized_bracket(system: NonAutonomousIFS, s: float, n: int) -> tuple[float, float]:
    z_lo = z_hi = 0.0
    cache = getattr(system, "_group_sum_cache", None)
    if cache is None:
        cache = {}
        system._group_sum_cache = cache
    for g in system.level_groups(n):
        key = (g.window, g.sign, s)
        if key in cache:
            lo, hi = cache[key]
        else:
            lo, hi = _group_level_logsums(system, g, s)
            cache[key] = (lo, hi)
        z_lo += g.count * lo
        z_hi += g.count * hi
    return z_lo, z_hi


def partition_bracket(system: NonAutonomousIFS, s: float, n: int,
                      mode: str = "auto", cap: int = ENUMERATION_CAP,
                      threads: int = 1, deterministic: bool = True) -> PressureBracket:
    """Bracket of log Z_n(s).

    mode "exact-enumeration" composes every word (capped); "factorized" uses
    the chain-rule product bracket; "auto" enumerates when feasible.
    """
    if mode not in ("auto", "exact-enumeration", "factorized"):
        raise ValueError(f"unknown partition mode {mode!r}")
    if mode in ("auto", "exact-enumeration"):
        feasible = system.words_total(n, cap) is not None
        if mode == "exact-enumeration" and not feasible:
            raise EnumerationCapExceededError(n, cap)
        if feasible:
            arr = enumerate_log_norms(system, n, cap, threads, deterministic)
            z = _logsumexp(s * arr)
            return PressureBracket(s=s, n=n, z_low=z, z_high=z, mode="exact-enumeration")
    z_lo, z_hi = _factorized_bracket(system, s, n)
    return PressureBracket(s=s, n=n, z_low=z_lo, z_high=z_hi, mode="factorized")


def lower_pressure(system: NonAutonomousIFS, s: float, depths,
                   mode: str = "auto", burn_in: int = 0,
                   threads: int = 1) -> PressureRecord:
    """Per-depth pressure brackets (1/n)[z_low, z_high] over a finite schedule."""
    depths = tuple(sorted(set(int(d) for d in depths)))
    brackets = tuple(partition_bracket(system, s, n, mode, threads=threads)
                     for n in depths)
    return PressureRecord(s=s, brackets=brackets, burn_in=burn_in)


def default_depth_schedule(system: NonAutonomousIFS, count: int = 5) -> tuple[int, ...]:
    """Exact-capable systems ramp to the deepest enumerable depth; scheme
    systems use their last window boundaries (grouped products stay cheap)."""
    if system.scheme is not None:
        bounds = [b for b in system.scheme.cum_t if b <= system.horizon]
        return tuple(bounds[-count:])
    top = None
    for n in range(min(system.horizon, 24), 0, -1):
        if system.words_total(n, ENUMERATION_CAP) is not None:
            top = n
            break
    if top is None:
        top = system.horizon
    step = max(1, top // count)
    depths = list(range(top, max(step - 1, 0), -step))[:count]
    return tuple(sorted(depths))


def _classify(brackets, classify: str, persistence: int) -> str | None:
    """"below" when the pressure evidence is persistently positive, "above"
    when persistently negative, None otherwise."""
    if classify == "quotient":
        tail = brackets[-persistence:]
        if len(tail) < persistence:
            return None
        if all(b.p_low > 0 for b in tail):
            return "below"
        if all(b.p_high < 0 for b in tail):
            return "above"
        return None
    pairs = list(zip(brackets, brackets[1:]))
    k = min(persistence, len(pairs))
    if k == 0:
        return None
    tail = pairs[-k:]
    dlow = [(b2.z_low - b1.z_low) / (b2.n - b1.n) for b1, b2 in tail]
    dhigh = [(b2.z_high - b1.z_high) / (b2.n - b1.n) for b1, b2 in tail]
    if all(d > 0 for d in dlow):
        return "below"
    if all(d < 0 for d in dhigh):
        return "above"
    return None


def bowen_bisect(system: NonAutonomousIFS, tolerance: float = 1e-2,
                 depths=None, mode: str = "auto", classify: str = "difference",
                 persistence: int = 3, threads: int = 1) -> BowenBracket:
    """Bisection bracket for the critical exponent of the system.

    The ambient bound pins s in [0,1].  A midpoint moves the bracket only
    when its classification persists over the scheduled depths; an
    unclassifiable midpoint stops the search with status "indeterminate"
    and the widest certified bracket.
    """
    if system.validation is not None and not system.validation.ok:
        raise ValueError(f"system failed validation: {system.validation}")
    if classify not in ("difference", "quotient"):
        raise ValueError(f"unknown classifier {classify!r}")
    if depths is None:
        depths = default_depth_schedule(system)
    depths = tuple(sorted(set(int(d) for d in depths)))
    s_minus, s_plus = 0.0, 1.0
    evidence = []
    status = "exhausted"
    for _ in range(200):
        if s_plus - s_minus <= tolerance:
            status = "converged"
            break
        mid = 0.5 * (s_minus + s_plus)
        brackets = [partition_bracket(system, mid, n, mode, threads=threads)
                    for n in depths]
        verdict = _classify(brackets, classify, persistence)
        evidence.append((mid, verdict))
        if verdict == "below":
            s_minus = mid
        elif verdict == "above":
            s_plus = mid
        else:
            status = "indeterminate"
            break
    return BowenBracket(s_minus=s_minus, s_plus=s_plus, status=status,
                        tolerance=tolerance, depths=depths, classify=classify,
                        evidence=tuple(evidence))
