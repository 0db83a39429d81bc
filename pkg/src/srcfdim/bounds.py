"""Dimension certificates: the lower pressure chain, the covering upper
bound, and their combination into a two-sided report.

Lower certificate (target s_lower = (tau(B) - eps)/(2 + delta)): build the
block scheme, assemble the system, compute the per-level control pair (C, N),
and verify at every scheduled depth that the certified lower end of log Z_n
clears the n-independent floor

    log[ C^(-N s) (min B)^(-2 s t_1) prod_{m=2..N} (sum_{k in B_m} k^(-2s))^(t_m) ],

together with the block factors beyond window N being >= 1 at exponent
(2+delta) s = tau - eps (that is the block construction inequality).  The
default depth schedule sits at the window boundaries T_{N+1}, T_{N+2}, where
the floor argument applies.

Upper certificate: choose the smallest cutoff L >= 3 with
(2C)^((tau+eps)/2) * tail_{k in B, k >= L}(k^-(tau+eps)) <= 1 by certified
tail bounds, then audit the telescoping cover sums and the one-step ratio
bound 2C/a^2 on truncated alphabets by exact interval arithmetic.  The
conclusion dim <= (tau+eps)/2 transfers from the digit->=L subset to the full
restricted set by the bi-Lipschitz shift argument, recorded as narrative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .blocks import BlockScheme, build_blocks
from .digit_sets import DigitSet, tau
from .expand import evaluate
from .growth import GrowthFunction
from .ifs import NonAutonomousIFS, assemble, control_constants
from .mobius import distortion_constant, generator, IDENTITY, interval_length_from_coefficients
from .pressure import partition_bracket
from .signs import SignSequence


class LSearchExhaustedError(ValueError):
    pass


class SchemeBuildFailureError(ValueError):
    pass


def _as_fraction(x) -> Fraction:
    return Fraction(str(x)) if isinstance(x, float) else Fraction(x)


def _tau_lower_fraction(B: DigitSet) -> Fraction:
    est = tau(B)
    if isinstance(est.lower, Fraction):
        return est.lower
    return Fraction(math.floor(float(est.lower) * 10**9), 10**9)


def _tau_upper_fraction(B: DigitSet) -> Fraction:
    est = tau(B)
    if isinstance(est.upper, Fraction):
        return est.upper
    if not math.isfinite(float(est.upper)):
        raise LSearchExhaustedError(
            f"tau upper bracket for {B.label()} is unbounded ({est.warning})"
        )
    return Fraction(math.ceil(float(est.upper) * 10**9), 10**9)


@dataclass(frozen=True)
class DepthCheck:
    n: int
    z_low: float
    log_floor: float
    ok: bool


@dataclass(frozen=True)
class BlockFactorCheck:
    m: int
    log_sum_lower: float
    ok: bool


@dataclass(frozen=True)
class LowerCertificate:
    epsilon: Fraction
    delta: Fraction
    tau_lower: Fraction
    s_lower: Fraction  # (tau - eps)/(2 + delta)
    C: Fraction
    N: int
    t1: int
    min_digit: int
    gamma: float
    L: int
    depth_checks: tuple[DepthCheck, ...]
    block_checks: tuple[BlockFactorCheck, ...]
    substitutions: tuple[tuple[int, int, int], ...]
    applies_to_growth_set: bool
    scheme_summary: dict = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return (all(c.ok for c in self.depth_checks)
                and all(c.ok for c in self.block_checks)
                and bool(self.depth_checks))

    @property
    def s_lower_float(self) -> float:
        return float(self.s_lower)


def lower_certificate(B: DigitSet, f: GrowthFunction, sigma: SignSequence,
                      epsilon, delta, depth_schedule: Sequence[int] | None = None,
                      horizon: int | None = None,
                      return_system: bool = False):
    """Run the lower-bound chain for one (epsilon, delta) pair.

    The conclusion s(system) >= (tau - eps)/(2 + delta) is emitted only when
    every scheduled depth clears the floor and every audited block factor
    beyond window N is >= 1.  When digit substitutions were needed (digit 1
    at backward-sign levels), the certificate applies to the digit-membership
    set only and the growth-bounded applicability flag is withdrawn if a
    substitute exceeds f at its level.
    """
    epsilon = _as_fraction(epsilon)
    delta = _as_fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    tau_lo = _tau_lower_fraction(B)
    if not (0 < epsilon < tau_lo):
        raise SchemeBuildFailureError(
            f"epsilon must lie in (0, tau(B)) = (0, {float(tau_lo)}); got {float(epsilon)}"
        )
    s_ed = (tau_lo - epsilon) / (2 + delta)
    s = float(s_ed)

    M = horizon if horizon is not None else 8
    system = None
    for _ in range(20):
        try:
            scheme = build_blocks(B, f, epsilon, M, tau_value=tau_lo)
        except Exception as exc:  # noqa: BLE001 - surfaced with context
            raise SchemeBuildFailureError(f"scheme build failed at horizon {M}: {exc}") from exc
        system = assemble(sigma, scheme, on_inadmissible="substitute")
        try:
            cc = control_constants(system, delta)
        except ValueError:
            M *= 2
            continue
        if M >= cc.N + 3:
            break
        M = cc.N + 3
    else:
        raise SchemeBuildFailureError("control threshold not reached within horizon doubling cap")

    N = cc.N
    scheme = system.scheme
    t1 = scheme.t[0]
    min_digit = scheme.b[0]
    s_log_c = s * math.log(float(cc.C))

    # literal n-independent floor
    log_floor = -N * s_log_c - 2.0 * s * t1 * math.log(min_digit)
    for m in range(2, N + 1):
        log_floor += scheme.t[m - 1] * scheme.block_log_sum(m, 2.0 * s, 0)[1]

    if depth_schedule is None:
        depth_schedule = [scheme.cum_t[N], scheme.cum_t[N + 1]]
        if len(scheme.cum_t) > N + 2:
            depth_schedule.append(scheme.cum_t[N + 2])
    depth_schedule = sorted(set(int(n) for n in depth_schedule))

    depth_checks = []
    for n in depth_schedule:
        z_low = partition_bracket(system, s, n, mode="factorized").z_low
        depth_checks.append(DepthCheck(n=n, z_low=z_low, log_floor=log_floor,
                                       ok=z_low >= log_floor))

    last_window = scheme.window_of(max(depth_schedule))
    block_checks = []
    for m in range(N + 1, last_window + 1):
        lo = scheme.block_log_sum(m, scheme.exponent, 0)[0]
        block_checks.append(BlockFactorCheck(m=m, log_sum_lower=lo, ok=lo >= 0.0))

    applies_growth = all(new <= f.value(lvl) for lvl, _, new in system.substitutions)

    cert = LowerCertificate(
        epsilon=epsilon, delta=delta, tau_lower=tau_lo, s_lower=s_ed,
        C=cc.C, N=N, t1=t1, min_digit=min_digit,
        gamma=system.validation.a4_gamma, L=system.validation.a4_L,
        depth_checks=tuple(depth_checks), block_checks=tuple(block_checks),
        substitutions=system.substitutions,
        applies_to_growth_set=applies_growth,
        scheme_summary={
            "b_prefix": list(scheme.b[: min(len(scheme.b), 8)]),
            "t_prefix": list(scheme.t[: min(len(scheme.t), 8)]),
            "horizon": scheme.horizon,
            "skipped_elements_below_b2": scheme.metadata.get("skipped_elements_below_b2", 0),
        },
    )
    return (cert, system) if return_system else cert


@dataclass(frozen=True)
class CoverSumCheck:
    depth: int
    value: float
    ok: bool


@dataclass(frozen=True)
class UpperCertificate:
    epsilon: Fraction
    tau_upper: Fraction
    exponent: Fraction  # tau_upper + eps
    C_search: float
    L: int
    C_refined: float
    inequality_holds: bool
    cover_sums: tuple[CoverSumCheck, ...]
    cover_nonincreasing: bool
    ratio_bound_max_quotient: float  # max over audited steps of ratio/(2C/a^2)
    audited_words: int
    bound: Fraction  # (tau_upper + eps)/2
    shift_invariance_note: str

    @property
    def certified(self) -> bool:
        return (self.inequality_holds and self.cover_nonincreasing
                and all(c.ok for c in self.cover_sums)
                and self.ratio_bound_max_quotient <= 1.0 + 1e-9)


def _cutoff_inequality(C: float, p: float, tail: float) -> bool:
    return (2.0 * C) ** (0.5 * p) * tail <= 1.0


def _minimal_cutoff(B: DigitSet, p: float, C: float) -> int:
    lo, hi = 3, 3
    if _cutoff_inequality(C, p, B.tail_upper(p, 3)):
        return 3
    while not _cutoff_inequality(C, p, B.tail_upper(p, hi)):
        hi *= 2
        if hi > 10**150:
            raise LSearchExhaustedError(
                f"no cutoff below 1e150 satisfies the tail inequality at exponent {p}"
            )
    lo = hi // 2
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if _cutoff_inequality(C, p, B.tail_upper(p, mid)):
            hi = mid
        else:
            lo = mid
    return hi


def upper_certificate(B: DigitSet, sigma: SignSequence, epsilon,
                      audit_depth: int = 4, alphabet_span: int = 6) -> UpperCertificate:
    """Covering upper bound dim <= (tau(B) + eps)/2 with audited cover sums.

    The cutoff search uses the digit->=3 distortion constant; once L is found
    the constant is recomputed at min digit max(3, L) and the inequality is
    re-checked with it (it only improves).  Cover sums and one-step ratio
    bounds are audited by exact interval arithmetic over the first
    `alphabet_span` elements of B above L, to the audit depth.
    """
    epsilon = _as_fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    tau_hi = _tau_upper_fraction(B)
    p_frac = tau_hi + epsilon
    p = float(p_frac)

    C1 = distortion_constant(3)
    L = _minimal_cutoff(B, p, C1)
    C2 = distortion_constant(max(3, L))
    ineq = _cutoff_inequality(C2, p, B.tail_upper(p, L))

    # truncated alphabet audit
    digits = []
    for k in B.iter_from(L):
        digits.append(k)
        if len(digits) >= alphabet_span:
            break
    signs = sigma.prefix(audit_depth)

    cover_sums = []
    ratio_quotient = 0.0
    audited = 0
    level_words: list[tuple[object, float]] = [(IDENTITY, 0.0)]
    prev_total = None
    nonincreasing = True
    for d in range(1, audit_depth + 1):
        sgn = signs[d - 1]
        new_words = []
        total = 0.0
        for m, base_log in level_words:
            for a in digits:
                m2 = m @ generator(sgn, a)
                l2 = interval_length_from_coefficients(m2)
                log_l2 = math.log(l2.numerator) - math.log(l2.denominator)
                total += math.exp(0.5 * p * log_l2)
                if m is not IDENTITY:
                    # one-step ratio vs 2C/a^2, compared in log scale
                    log_q = (log_l2 - base_log) - (math.log(2.0 * C2) - 2.0 * math.log(a))
                    ratio_quotient = max(ratio_quotient, math.exp(min(log_q, 50.0)))
                    audited += 1
                new_words.append((m2, log_l2))
        cover_sums.append(CoverSumCheck(depth=d, value=total, ok=total <= 1.0))
        if prev_total is not None and total > prev_total + 1e-12:
            nonincreasing = False
        prev_total = total
        level_words = new_words

    note = (
        "full-set bound follows from the digit-cutoff subset by countably many "
        "branch-map images; branch maps are bi-Lipschitz on [0,1], which leaves "
        "Hausdorff dimension unchanged"
    )
    return UpperCertificate(
        epsilon=epsilon, tau_upper=tau_hi, exponent=p_frac,
        C_search=C1, L=L, C_refined=C2, inequality_holds=ineq,
        cover_sums=tuple(cover_sums), cover_nonincreasing=nonincreasing,
        ratio_bound_max_quotient=ratio_quotient, audited_words=audited,
        bound=p_frac / 2, shift_invariance_note=note,
    )


@dataclass(frozen=True)
class DimensionReport:
    target_lower: Fraction
    target_upper: Fraction
    lower_certificates: tuple[LowerCertificate, ...]
    upper_certificates: tuple[UpperCertificate, ...]
    final_lower: Fraction
    final_upper: Fraction
    status: str  # "ok" | "tolerance-not-reached"
    tolerance: float
    narrative: str

    @property
    def gap(self) -> float:
        return float(self.final_upper - self.final_lower)

    def csv_rows(self) -> list[dict]:
        rows = []
        for c in self.lower_certificates:
            rows.append({
                "kind": "lower", "epsilon": str(c.epsilon), "delta": str(c.delta),
                "bound": str(c.s_lower), "bound_float": f"{float(c.s_lower):.12g}",
                "verdict": "certified" if c.certified else "failed",
            })
        for c in self.upper_certificates:
            rows.append({
                "kind": "upper", "epsilon": str(c.epsilon), "delta": "",
                "bound": str(c.bound), "bound_float": f"{float(c.bound):.12g}",
                "verdict": "certified" if c.certified else "failed",
                "cutoff_L": c.L,
            })
        return rows


def dimension_report(B: DigitSet, f: GrowthFunction, sigma: SignSequence,
                     tolerance: float = 0.1,
                     epsilon_schedule: Sequence = (0.1, 0.05, 0.02),
                     delta_schedule: Sequence | None = None,
                     audit_depth: int = 4) -> DimensionReport:
    """Drive (eps, delta) schedules until the certified sandwich around
    tau(B)/2 is within `tolerance` (or the schedules exhaust: status then
    reports the best certified sandwich)."""
    est = tau(B)
    tau_lo = _tau_lower_fraction(B)
    tau_hi = _tau_upper_fraction(B)
    target_lo, target_hi = tau_lo / 2, tau_hi / 2

    eps_list = [_as_fraction(e) for e in epsilon_schedule]
    if delta_schedule is None:
        delta_list = list(eps_list)
    else:
        delta_list = [_as_fraction(d) for d in delta_schedule]
        if len(delta_list) != len(eps_list):
            raise ValueError("epsilon and delta schedules must have equal length")

    lowers: list[LowerCertificate] = []
    uppers: list[UpperCertificate] = []
    final_lower = Fraction(0)
    final_upper = Fraction(1)
    notes = []
    for eps, dlt in zip(eps_list, delta_list):
        if eps < tau_lo:
            cert = lower_certificate(B, f, sigma, eps, dlt)
            lowers.append(cert)
            if cert.certified:
                final_lower = max(final_lower, cert.s_lower)
        ucert = upper_certificate(B, sigma, eps, audit_depth=audit_depth)
        uppers.append(ucert)
        if ucert.certified:
            final_upper = min(final_upper, ucert.bound)
        if float(final_upper - final_lower) <= tolerance:
            break

    if tau_lo == 0:
        notes.append("tau(B) = 0: the lower bound is trivial and only the upper "
                     "certificates are informative")
    if lowers and not all(c.applies_to_growth_set for c in lowers):
        notes.append("lower bounds apply to the digit-membership set; digit "
                     "substitutions at backward-sign levels exceeded f there, so the "
                     "growth-bounded set is not covered by those certificates")
    else:
        notes.append("lower bounds apply to the growth-bounded set (hence to the "
                     "digit-membership set); upper bounds apply to the digit-membership "
                     "set (hence to the growth-bounded subset)")
    status = "ok" if float(final_upper - final_lower) <= tolerance else "tolerance-not-reached"
    return DimensionReport(
        target_lower=target_lo, target_upper=target_hi,
        lower_certificates=tuple(lowers), upper_certificates=tuple(uppers),
        final_lower=final_lower, final_upper=final_upper,
        status=status, tolerance=tolerance, narrative="; ".join(notes),
    )
