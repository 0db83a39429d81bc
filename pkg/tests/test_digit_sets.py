import math
from fractions import Fraction

import pytest

from srcfdim.digit_sets import (
    DigitSet,
    Explicit,
    Geometric,
    Naturals,
    NotEnumerableError,
    PolynomialValues,
    Powers,
    Primes,
    digit_set_from_document,
    range_sum_naturals,
    tau,
)
from srcfdim.growth import ExponentialGrowth, PowerGrowth, TableGrowth, growth_from_document


class TestClosedForms:
    @pytest.mark.parametrize("B,expected", [
        (Naturals(), Fraction(1)),
        (Powers(3), Fraction(1, 3)),
        (Powers(2), Fraction(1, 2)),
        (Geometric(2), Fraction(0)),
        (Primes(), Fraction(1)),
        (PolynomialValues([0, 0, 1]), Fraction(1, 2)),
        (Explicit([4, 7, 9]), Fraction(0)),
        (Explicit([2, 3], tail=PolynomialValues([0, 0, 1], start=2)), Fraction(1, 2)),
    ])
    def test_tau_exact(self, B, expected):
        est = tau(B)
        assert est.method == "closed-form"
        assert est.lower == est.upper == expected

    def test_bracket_contains_closed_form(self):
        for B in (Naturals(), Powers(2), Powers(3), Geometric(3)):
            exact = tau(B).lower
            est = tau(B, tolerance=1e-4, method="bracket")
            assert est.method == "bracket"
            assert est.lower <= float(exact) <= est.upper
            assert est.upper - est.lower <= 1e-4

    def test_no_tail_bound_soft_path(self):
        class Opaque(Naturals):
            def tau_closed_form(self):
                return None

            def series_converges(self, s):
                return True if s > 1.5 else None

        est = tau(Opaque(), method="bracket")
        assert est.method == "partial-sum"
        assert est.warning is not None


class TestEnumeration:
    def test_powers_indexing(self):
        B = Powers(2)
        assert B.count_range(4, 25) == 3
        assert B.elements_range(4, 25) == (4, 9, 16)
        assert B.range_element(4, 2) == 16
        assert B.range_element(10**30, 0) == (10**15) ** 2
        assert B.contains(12345678987654321**2)
        assert not B.contains(12345678987654321**2 + 1)

    def test_naturals_counts(self):
        B = Naturals()
        assert B.count_range(5, 9) == 4
        assert B.range_element(7, 3) == 10

    def test_geometric(self):
        B = Geometric(2, scale=3)
        assert list(B.iter_from(1))[:4] == [3, 6, 12, 24]
        assert B.count_range(6, 48) == 2
        assert B.contains(96) and not B.contains(30)

    def test_polynomial(self):
        B = PolynomialValues([1, 0, 1])  # k^2 + 1
        assert list(B.iter_from(1))[:4] == [2, 5, 10, 17]
        assert B.count_range(2, 17) == 3
        assert B.contains(401) and not B.contains(400)
        with pytest.raises(ValueError):
            PolynomialValues([5, -10, 1], start=1)  # decreasing at the start

    def test_primes(self):
        B = Primes()
        assert list(B.iter_from(1))[:5] == [2, 3, 5, 7, 11]
        assert B.count_range(10, 30) == 6
        assert B.contains(104729) and not B.contains(104730)

    def test_explicit_with_tail(self):
        B = Explicit([3, 5], tail=Geometric(2, scale=8))
        assert list(B.iter_from(1))[:5] == [3, 5, 8, 16, 32]
        with pytest.raises(ValueError):
            Explicit([3, 9], tail=Geometric(2, scale=4))


class TestPowerSums:
    def test_enumerated_matches_zeta(self):
        direct = sum(k ** (-0.7) for k in range(10, 200))
        assert range_sum_naturals(0.7, 10, 200) == pytest.approx(direct, rel=1e-12)
        # below 1 the zeta difference still equals the finite sum
        direct = sum(k ** (-1.0) for k in range(3, 50))
        assert range_sum_naturals(1.0, 3, 50) == pytest.approx(direct, rel=1e-12)

    def test_bracket_contains_truth_for_shifted_powers(self):
        B = Powers(2)
        lo, hi = 10**12, 2 * 10**12
        truth_lo, truth_hi = B._power_sum_bracket_large(0.6, lo, hi, +1, None)
        # enumerate a matching window on the base index to cross-check scale
        assert truth_lo <= truth_hi
        small_lo, small_hi = B.power_sum_bracket(0.6, 4, 10**4, +1)
        direct = sum((k * k + 1) ** (-0.6) for k in range(2, 100))
        assert small_lo == pytest.approx(direct, rel=1e-9)
        assert small_hi == pytest.approx(direct, rel=1e-9)

    def test_analytic_vs_enumerated_naturals(self):
        B = Naturals()
        a, b = 100, 900
        direct = sum((k + 1) ** (-0.8) for k in range(a, b))
        lo, hi = B._power_sum_bracket_large(0.8, a, b, +1, None)
        assert lo == pytest.approx(direct, rel=1e-10)
        assert hi == pytest.approx(direct, rel=1e-10)

    def test_tail_upper_bounds_partial_sums(self):
        for B, p in ((Naturals(), 1.5), (Powers(2), 1.2), (Geometric(2), 0.3),
                     (Primes(), 1.4), (PolynomialValues([0, 0, 1]), 1.1)):
            bound = B.tail_upper(p, 50)
            partial = 0.0
            for k in B.iter_from(50):
                if k > 500_000:
                    break
                partial += k ** (-p)
            assert partial <= bound

    def test_non_enumerable_guard(self):
        with pytest.raises(NotEnumerableError):
            Primes().elements_range(1, 10**9)


class TestDocuments:
    def test_roundtrip(self):
        for B in (Naturals(), Powers(3), Geometric(2, 5), Primes(),
                  PolynomialValues([1, 2, 3], start=2),
                  Explicit([2, 9], tail=Geometric(2, scale=16))):
            B2 = digit_set_from_document(B.to_document())
            assert B2.to_document() == B.to_document()

    def test_unknown_fields_rejected(self):
        with pytest.raises(ValueError):
            digit_set_from_document({"kind": "naturals", "bogus": 1})


class TestGrowth:
    def test_power_growth_exact_ceil(self):
        f = PowerGrowth(Fraction(3, 2), 2)
        assert [f.value(n) for n in (1, 2, 3)] == [2, 6, 14]

    def test_identity_growth_threshold(self):
        f = PowerGrowth(1, 1)
        for b in (1, 7, 25, 10**12):
            assert f.first_index_at_least(b) == b

    def test_exponential_growth(self):
        f = ExponentialGrowth(1, Fraction(3, 2))
        assert f.value(2) == 3  # ceil(2.25)
        assert f.first_index_at_least(100) == 12  # 1.5^12 ~ 129.7, 1.5^11 ~ 86.5

    def test_table_growth_head_failures(self):
        f = TableGrowth([5, 1, 7], tail=PowerGrowth(1, 1))
        # f = 5,1,7,4,5,6,7,... : f(n) >= 2 for all n >= 3
        assert f.first_index_at_least(2) == 3
        assert f.min_over(1, 3) == 1
        assert f.min_over(4, 10) == 4

    def test_validate_floor(self):
        f = TableGrowth([5, 1], tail=PowerGrowth(1, 1))
        with pytest.raises(ValueError):
            f.validate_floor(2)

    def test_document_roundtrip(self):
        for f in (PowerGrowth(Fraction(1, 2), 3), ExponentialGrowth(2, 2),
                  TableGrowth([4, 4], tail=PowerGrowth(1, 1))):
            f2 = growth_from_document(f.to_document())
            assert f2.to_document() == f.to_document()
