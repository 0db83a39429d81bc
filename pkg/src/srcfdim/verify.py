"""Invariant suite behind the `verify` subcommand: direct re-checks of the
geometric and combinatorial facts the certificates lean on, on desk-scale
inputs, all by exact arithmetic where the claim is exact."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from . import signs as signs_mod
from .blocks import build_blocks
from .expand import contains_point, evaluate, expand
from .ifs import assemble
from .mobius import (
    IDENTITY,
    X,
    XTILDE,
    derivative_bounds,
    distortion_constant,
    distortion_ratio,
    fundamental_interval,
    generator,
    interval_length_from_coefficients,
    word_map,
)
from .numbers import QuadraticSurd


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _random_word(rng: random.Random, sigma, depth: int, max_digit: int = 30):
    signs, digits = [], []
    for k in range(1, depth + 1):
        s = sigma(k)
        lo = 1 if s == 1 else 2
        signs.append(s)
        digits.append(rng.randint(lo, max_digit))
    return tuple(signs), tuple(digits)


def check_generator_images(limit: int = 300) -> CheckResult:
    for i in range(1, limit + 1):
        img = generator(1, i).image(X)
        if (img.lo, img.hi) != (Fraction(1, i + 1), Fraction(1, i)):
            return CheckResult("generator-images", False, f"+1 branch image wrong at {i}")
        if i >= 2:
            img = generator(-1, i).image(X)
            if (img.lo, img.hi) != (Fraction(1, i), Fraction(1, i - 1)):
                return CheckResult("generator-images", False, f"-1 branch image wrong at {i}")
    return CheckResult("generator-images", True, f"exact endpoints for digits <= {limit}")


def check_length_formula(samples: int = 200, seed: int = 11) -> CheckResult:
    rng = random.Random(seed)
    sigma = signs_mod.seeded_random(0.5, seed + 1)
    for _ in range(samples):
        depth = rng.randint(1, 30)
        sg, dg = _random_word(rng, sigma, depth)
        m = word_map(sg, dg)
        if fundamental_interval(sg, dg).length != interval_length_from_coefficients(m):
            return CheckResult("word-length-formula", False, f"mismatch at {dg}")
    return CheckResult("word-length-formula", True,
                       f"|det|/|d(c+d)| equals endpoint difference on {samples} random words")


def check_chain_rule_bracket(samples: int = 120, seed: int = 23) -> CheckResult:
    rng = random.Random(seed)
    sigma = signs_mod.seeded_random(0.5, seed + 1)
    for _ in range(samples):
        sg1, dg1 = _random_word(rng, sigma, rng.randint(1, 10))
        sg2, dg2 = _random_word(rng, sigma, rng.randint(1, 10))
        left, right = word_map(sg1, dg1), word_map(sg2, dg2)
        both = derivative_bounds(left @ right, X)
        bl, br = derivative_bounds(left, X), derivative_bounds(right, X)
        if not (bl.inf * br.inf <= both.inf and both.sup <= bl.sup * br.sup):
            return CheckResult("chain-rule-bracket", False, "bracket violated")
    return CheckResult("chain-rule-bracket", True,
                       f"inf/sup products bracket composed bounds on {samples} pairs")


def check_extension_containment(limit: int = 200) -> CheckResult:
    for i in range(3, limit + 1):
        for s in (1, -1):
            img = generator(s, i).image(XTILDE)
            if not (XTILDE.lo <= img.lo and img.hi <= XTILDE.hi):
                return CheckResult("extension-containment", False, f"({s},{i}) escapes")
    return CheckResult("extension-containment", True,
                       f"extended-domain images contained for digits 3..{limit}")


def check_distortion_bound(samples: int = 500, seed: int = 37) -> CheckResult:
    rng = random.Random(seed)
    limit = distortion_constant(3)
    worst = 0.0
    for _ in range(samples):
        depth = rng.randint(1, 20)
        m = IDENTITY
        for k in range(depth):
            m = m @ generator(rng.choice((1, -1)), rng.randint(3, 60))
        worst = max(worst, float(distortion_ratio(m, XTILDE)))
        if worst > limit:
            return CheckResult("bounded-distortion", False, f"ratio {worst} exceeds {limit}")
    return CheckResult("bounded-distortion", True,
                       f"max exact ratio {worst:.4f} <= {limit:.4f} on {samples} words")


def check_expansion_roundtrip(x=None, sigma=None, depth: int = 40) -> CheckResult:
    if x is None:
        x = QuadraticSurd.make(-1, 1, 2, 5)
    if not isinstance(x, QuadraticSurd):
        return CheckResult("expansion-roundtrip", True, "skipped: exact surd input required")
    if sigma is None:
        sigma = signs_mod.ALTERNATING
    stream = expand(x, sigma, depth)
    prev_len = None
    for n in range(1, len(stream.digits) + 1):
        iv = stream.interval(n)
        if not contains_point(iv, x):
            return CheckResult("expansion-roundtrip", False, f"point escapes at depth {n}")
        if prev_len is not None and not iv.length < prev_len:
            return CheckResult("expansion-roundtrip", False, f"lengths not decreasing at {n}")
        prev_len = iv.length
    return CheckResult("expansion-roundtrip", True,
                       f"membership and strict shrinking to depth {len(stream.digits)}")


def check_interior_disjointness(sigma=None, depth: int = 3, max_digit: int = 5) -> CheckResult:
    import itertools

    if sigma is None:
        sigma = signs_mod.ALTERNATING
    sg = sigma.prefix(depth)
    alphabets = [range(1 if s == 1 else 2, max_digit + 1) for s in sg]
    intervals = []
    for digits in itertools.product(*alphabets):
        intervals.append(fundamental_interval(sg, digits))
    intervals.sort(key=lambda iv: iv.lo)
    for a, b in zip(intervals, intervals[1:]):
        if a.hi > b.lo:
            return CheckResult("interior-disjointness", False, f"{a} overlaps {b}")
    return CheckResult("interior-disjointness", True,
                       f"{len(intervals)} depth-{depth} words pairwise interior-disjoint")


def check_backward_truncations(n_max: int = 60) -> CheckResult:
    for n in range(1, n_max + 1):
        if evaluate((-1,) * n, (2,) * n) != Fraction(n, n + 1):
            return CheckResult("backward-truncations", False, f"mismatch at n={n}")
    return CheckResult("backward-truncations", True,
                       f"all-2 backward truncations equal n/(n+1) for n <= {n_max}")


def check_scheme_invariants(B=None, f=None, epsilon=Fraction(1, 10), horizon: int = 6) -> CheckResult:
    from .digit_sets import Powers
    from .growth import PowerGrowth

    if B is None:
        B = Powers(2)
    if f is None:
        f = PowerGrowth(1, 1)
    try:
        scheme = build_blocks(B, f, epsilon, horizon)
    except Exception as exc:  # noqa: BLE001
        return CheckResult("scheme-invariants", False, f"build failed: {exc}")
    audit = scheme.audit()
    ok = all(audit.values())
    return CheckResult("scheme-invariants", ok, ", ".join(f"{k}={v}" for k, v in audit.items()))


def check_system_validation(sigma=None) -> CheckResult:
    if sigma is None:
        sigma = signs_mod.constant(1)
    system = assemble(sigma if sigma(1) == 1 else signs_mod.constant(1), [1, 2], horizon=12)
    v = system.validation
    detail = (f"a1={v.a1_ok} a2={v.a2_ok} a4={v.a4_ok} "
              f"(gamma={v.a4_gamma:.4f}, L={v.a4_L}) subexp={v.subexp_ok}")
    return CheckResult("system-validation", v.ok, detail)


def run_suite(instance=None) -> list[CheckResult]:
    """The full battery; instance context (x, sigma, B, f) is used when given."""
    x = sigma = B = f = None
    if instance is not None:
        x, sigma, B, f = instance.x, instance.sigma, instance.digit_set, instance.growth
    checks = [
        check_generator_images(),
        check_length_formula(),
        check_chain_rule_bracket(),
        check_extension_containment(),
        check_distortion_bound(),
        check_expansion_roundtrip(x=x, sigma=sigma),
        check_interior_disjointness(sigma=sigma),
        check_backward_truncations(),
    ]
    if B is not None and f is not None and not B.is_finite:
        from .digit_sets import tau as tau_fn

        est = tau_fn(B)
        if float(est.lower) > 0:
            checks.append(check_scheme_invariants(B=B, f=f))
    else:
        checks.append(check_scheme_invariants())
    checks.append(check_system_validation(sigma=sigma))
    return checks
