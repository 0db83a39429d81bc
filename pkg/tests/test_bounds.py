import math
from fractions import Fraction

import pytest

from srcfdim import signs
from srcfdim.bounds import (
    LSearchExhaustedError,
    SchemeBuildFailureError,
    dimension_report,
    lower_certificate,
    upper_certificate,
)
from srcfdim.digit_sets import Geometric, Naturals, Powers
from srcfdim.growth import PowerGrowth
from srcfdim.mobius import distortion_constant


class TestLowerCertificate:
    def test_squares_alternating_headline(self):
        cert = lower_certificate(Powers(2), PowerGrowth(1, 1), signs.ALTERNATING,
                                 Fraction(1, 10), Fraction(1, 10))
        assert cert.certified
        assert cert.s_lower == Fraction(4, 21)
        assert cert.scheme_summary["b_prefix"][:3] == [1, 4, 25]
        assert (cert.C, cert.N, cert.t1, cert.min_digit) == (Fraction(4), 16, 24, 1)
        assert cert.substitutions
        assert not cert.applies_to_growth_set  # substituted 4 > f(2) = 2

    def test_constant_sign_keeps_growth_applicability(self):
        cert = lower_certificate(Powers(2), PowerGrowth(1, 1), signs.constant(1),
                                 Fraction(1, 10), Fraction(1, 10))
        assert cert.certified
        assert cert.substitutions == ()
        assert cert.applies_to_growth_set

    def test_depth_checks_sit_beyond_window_N(self):
        cert, system = lower_certificate(Powers(2), PowerGrowth(1, 1), signs.constant(1),
                                         Fraction(1, 10), Fraction(1, 10),
                                         return_system=True)
        sch = system.scheme
        first_depth = cert.depth_checks[0].n
        assert first_depth == sch.cum_t[cert.N]
        assert all(c.ok for c in cert.depth_checks)
        assert all(c.ok for c in cert.block_checks)
        assert all(c.log_sum_lower >= 0 for c in cert.block_checks)

    def test_epsilon_validation(self):
        with pytest.raises(SchemeBuildFailureError):
            lower_certificate(Powers(2), PowerGrowth(1, 1), signs.constant(1),
                              Fraction(3, 5), Fraction(1, 10))
        with pytest.raises(ValueError):
            lower_certificate(Powers(2), PowerGrowth(1, 1), signs.constant(1),
                              Fraction(1, 10), Fraction(0))

    def test_schedule_toward_half_tau(self):
        bounds = []
        for eps in (Fraction(1, 10), Fraction(1, 20)):
            cert = lower_certificate(Powers(2), PowerGrowth(1, 1), signs.constant(1),
                                     eps, eps)
            assert cert.certified
            bounds.append(cert.s_lower)
        assert bounds[0] < bounds[1] < Fraction(1, 4)


class TestUpperCertificate:
    def test_naturals_headline(self):
        cert = upper_certificate(Naturals(), signs.constant(1), Fraction(1, 2))
        assert cert.certified
        assert 1500 <= cert.L <= 1800
        # minimal for the search constant: L satisfies the inequality, L-1 fails
        C = cert.C_search
        p = float(cert.exponent)
        tail = Naturals().tail_upper(p, cert.L)
        assert (2 * C) ** (0.5 * p) * tail <= 1.0
        tail_prev = Naturals().tail_upper(p, cert.L - 1)
        assert (2 * C) ** (0.5 * p) * tail_prev > 1.0
        assert cert.C_search == pytest.approx(math.exp(116 / 35), rel=1e-12)
        assert cert.C_refined < 1.01
        assert cert.bound == Fraction(3, 4)

    def test_cover_sums_nonincreasing_and_below_one(self):
        cert = upper_certificate(Naturals(), signs.ALTERNATING, Fraction(1, 2))
        values = [c.value for c in cert.cover_sums]
        assert all(v <= 1.0 for v in values)
        assert all(a + 1e-12 >= b for a, b in zip(values, values[1:]))
        assert cert.ratio_bound_max_quotient <= 1.0

    def test_cutoff_monotone_in_epsilon(self):
        l_values = [upper_certificate(Naturals(), signs.constant(1), eps).L
                    for eps in (Fraction(1, 2), Fraction(7, 10), Fraction(1, 1))]
        assert l_values[0] >= l_values[1] >= l_values[2]

    def test_subset_monotonicity_via_tau(self):
        for eps in (Fraction(1, 2), Fraction(3, 10)):
            small = upper_certificate(Powers(2), signs.constant(1), eps)
            big = upper_certificate(Naturals(), signs.constant(1), eps)
            assert small.bound <= big.bound

    def test_geometric_pins_dimension_zero(self):
        cert = upper_certificate(Geometric(2), signs.constant(1), Fraction(1, 10))
        assert cert.certified
        assert cert.bound == Fraction(1, 20)

    def test_divergent_exponent_rejected(self):
        class Stub(Naturals):
            def tau_closed_form(self):
                return None

            def series_converges(self, s):
                return None

        with pytest.raises(LSearchExhaustedError):
            upper_certificate(Stub(), signs.constant(1), Fraction(1, 2))


class TestDimensionReport:
    def test_squares_sandwich(self):
        rep = dimension_report(Powers(2), PowerGrowth(1, 1), signs.constant(1),
                               tolerance=0.1, epsilon_schedule=(0.1, 0.05))
        assert rep.status == "ok"
        assert rep.gap <= 0.1
        assert rep.final_lower <= Fraction(1, 4) <= rep.final_upper
        assert all(l.s_lower < u.bound for l in rep.lower_certificates
                   for u in rep.upper_certificates)

    def test_geometric_report(self):
        rep = dimension_report(Geometric(2), PowerGrowth(1, 1), signs.constant(1),
                               tolerance=0.1, epsilon_schedule=(0.1,))
        assert rep.status == "ok"
        assert rep.final_lower == 0
        assert float(rep.final_upper) <= 0.06
        assert "trivial" in rep.narrative

    def test_csv_rows(self):
        rep = dimension_report(Powers(2), PowerGrowth(1, 1), signs.constant(1),
                               tolerance=0.2, epsilon_schedule=(0.1,))
        rows = rep.csv_rows()
        kinds = {r["kind"] for r in rows}
        assert kinds == {"lower", "upper"}
        assert all("verdict" in r for r in rows)
