"""Sign sequences sigma in {-1,+1}^N (1-indexed), with deterministic access.

Kinds: constant, periodic (with preperiod), explicit prefix with constant
tail, and seeded random.  Constant/periodic/explicit support O(1) counting of
+1 entries over index ranges, which the pressure engine needs for grouped
products over very deep level windows; seeded-random sequences materialize
their prefix and are capped accordingly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

RANDOM_MATERIALIZE_CAP = 10_000_000


def _check_sign(s: int) -> int:
    if s not in (1, -1):
        raise ValueError(f"sign entries must be +1 or -1, got {s!r}")
    return s


@dataclass(frozen=True)
class SignSequence:
    """Accessor n -> sigma_n for n >= 1; deterministic given kind and seed."""

    kind: str
    pattern: tuple[int, ...] = ()
    preperiod: tuple[int, ...] = ()
    tail: int = 1
    p_plus: float = 0.5
    seed: int = 0
    _cache: list = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.kind not in ("constant", "periodic", "explicit", "random"):
            raise ValueError(f"unknown sign sequence kind {self.kind!r}")
        for s in self.pattern + self.preperiod:
            _check_sign(s)
        if self.kind == "constant" and len(self.pattern) != 1:
            raise ValueError("constant sequence needs exactly one pattern entry")
        if self.kind == "periodic" and not self.pattern:
            raise ValueError("periodic sequence needs a nonempty pattern")
        if self.kind == "explicit":
            _check_sign(self.tail)
        if self.kind == "random" and not (0.0 <= self.p_plus <= 1.0):
            raise ValueError("p_plus must lie in [0,1]")

    def __call__(self, n: int) -> int:
        if n < 1:
            raise IndexError("sign sequences are 1-indexed")
        if self.kind == "constant":
            return self.pattern[0]
        if self.kind == "periodic":
            if n <= len(self.preperiod):
                return self.preperiod[n - 1]
            return self.pattern[(n - 1 - len(self.preperiod)) % len(self.pattern)]
        if self.kind == "explicit":
            if n <= len(self.pattern):
                return self.pattern[n - 1]
            return self.tail
        return self._random_prefix(n)[n - 1]

    def _random_prefix(self, n: int) -> list:
        if n > RANDOM_MATERIALIZE_CAP:
            raise ValueError(
                f"seeded-random sign sequence capped at {RANDOM_MATERIALIZE_CAP} levels"
            )
        cache = self._cache
        if len(cache) < n:
            rng = random.Random(self.seed)
            values = [1 if rng.random() < self.p_plus else -1 for _ in range(max(n, 64))]
            cache.clear()
            cache.extend(values)
        return cache

    def prefix(self, n: int) -> tuple[int, ...]:
        return tuple(self(k) for k in range(1, n + 1))

    def count_plus(self, lo: int, hi: int) -> int:
        """Number of +1 entries at indices lo..hi inclusive."""
        if hi < lo:
            return 0
        if self.kind == "constant":
            return (hi - lo + 1) if self.pattern[0] == 1 else 0
        if self.kind == "random":
            pref = self._random_prefix(hi)
            return sum(1 for k in range(lo, hi + 1) if pref[k - 1] == 1)
        if self.kind == "explicit":
            head_hi = min(hi, len(self.pattern))
            count = sum(1 for k in range(lo, head_hi + 1) if self.pattern[k - 1] == 1)
            if hi > len(self.pattern):
                tail_lo = max(lo, len(self.pattern) + 1)
                if self.tail == 1:
                    count += hi - tail_lo + 1
            return count
        # periodic: preperiod head, then whole periods plus a remainder
        count = 0
        head_hi = min(hi, len(self.preperiod))
        count += sum(1 for k in range(lo, head_hi + 1) if self.preperiod[k - 1] == 1)
        start = max(lo, len(self.preperiod) + 1)
        if start > hi:
            return count
        per = len(self.pattern)
        plus_per_period = sum(1 for s in self.pattern if s == 1)
        offset = start - len(self.preperiod) - 1
        total = hi - start + 1
        full, rem = divmod(total, per)
        count += full * plus_per_period
        for j in range(rem):
            if self.pattern[(offset + full * per + j) % per] == 1:
                count += 1
        return count

    @property
    def supports_large_horizons(self) -> bool:
        return self.kind != "random"

    def label(self) -> str:
        if self.kind == "constant":
            return f"constant({self.pattern[0]:+d})"
        if self.kind == "periodic":
            pat = ",".join(f"{s:+d}" for s in self.pattern)
            pre = ",".join(f"{s:+d}" for s in self.preperiod)
            return f"periodic([{pat}]; pre=[{pre}])"
        if self.kind == "explicit":
            pat = ",".join(f"{s:+d}" for s in self.pattern)
            return f"explicit([{pat}]; tail={self.tail:+d})"
        return f"random(p_plus={self.p_plus}, seed={self.seed})"

    def to_document(self) -> dict:
        doc: dict = {"kind": self.kind}
        if self.kind == "constant":
            doc["value"] = self.pattern[0]
        elif self.kind == "periodic":
            doc["pattern"] = list(self.pattern)
            if self.preperiod:
                doc["preperiod"] = list(self.preperiod)
        elif self.kind == "explicit":
            doc["prefix"] = list(self.pattern)
            doc["tail"] = self.tail
        else:
            doc["p_plus"] = self.p_plus
            doc["seed"] = self.seed
        return doc


def constant(sign: int) -> SignSequence:
    return SignSequence(kind="constant", pattern=(_check_sign(sign),))


def periodic(pattern: Sequence[int], preperiod: Sequence[int] = ()) -> SignSequence:
    return SignSequence(kind="periodic", pattern=tuple(pattern), preperiod=tuple(preperiod))


def explicit(prefix: Sequence[int], tail: int = 1) -> SignSequence:
    return SignSequence(kind="explicit", pattern=tuple(prefix), tail=tail)


def seeded_random(p_plus: float, seed: int) -> SignSequence:
    return SignSequence(kind="random", p_plus=p_plus, seed=seed)


ALTERNATING = periodic((1, -1))


def from_document(doc: dict) -> SignSequence:
    known = {"kind", "value", "pattern", "preperiod", "prefix", "tail", "p_plus", "seed"}
    unknown = set(doc) - known
    if unknown:
        raise ValueError(f"unknown sign-sequence fields: {sorted(unknown)}")
    kind = doc.get("kind")
    if kind == "constant":
        return constant(int(doc["value"]))
    if kind == "periodic":
        return periodic([int(s) for s in doc["pattern"]],
                        [int(s) for s in doc.get("preperiod", [])])
    if kind == "explicit":
        return explicit([int(s) for s in doc["prefix"]], int(doc.get("tail", 1)))
    if kind == "random":
        return seeded_random(float(doc.get("p_plus", 0.5)), int(doc.get("seed", 0)))
    raise ValueError(f"unknown sign-sequence kind {kind!r}")
