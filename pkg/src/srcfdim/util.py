"""Small shared helpers: ordered thread maps and deterministic formatting."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor, as_completed
from fractions import Fraction


def parallel_map(fn, items, threads: int = 1, ordered: bool = True) -> list:
    """Map preserving input order (ordered=True, the deterministic default).

    With ordered=False results arrive in completion order, which is only
    acceptable for order-insensitive reductions.
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        if ordered:
            return list(pool.map(fn, items))
        futures = [pool.submit(fn, x) for x in items]
        return [f.result() for f in as_completed(futures)]


def fmt_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def fmt_real(x, digits: int = 12) -> str:
    """Fixed-precision decimal rendering (deterministic across platforms)."""
    if isinstance(x, Fraction):
        return fmt_fraction(x)
    return f"{float(x):.{digits}g}"
