import math
from fractions import Fraction

import pytest

from srcfdim.blocks import (
    EpsilonOutOfRangeError,
    HorizonTooSmallError,
    build_blocks,
    scheme_from_document,
)
from srcfdim.digit_sets import Explicit, Geometric, Naturals, Powers
from srcfdim.growth import PowerGrowth, TableGrowth


@pytest.fixture(scope="module")
def squares_scheme():
    return build_blocks(Powers(2), PowerGrowth(1, 1), Fraction(1, 10), 8)


class TestBlockSequence:
    def test_squares_blocks(self, squares_scheme):
        assert squares_scheme.b[:5] == (1, 4, 25, 100, 324)
        assert squares_scheme.block(1).elements == (1,)
        assert squares_scheme.block(2).elements == (4, 9, 16)

    def test_partial_sum_oracle_for_b3(self):
        # direct partial summation at exponent -(tau - eps) = -0.4
        s49 = 4 ** (-0.4) + 9 ** (-0.4)
        assert s49 < 1.0
        assert s49 + 16 ** (-0.4) >= 1.0

    def test_min_element_one_forces_next_element(self, squares_scheme):
        assert squares_scheme.b[1] == 4  # 1^-e = 1 reaches the threshold alone

    def test_minimality_audit(self, squares_scheme):
        audit = squares_scheme.audit()
        assert audit["b_minimal"]
        assert audit["windows_below_growth"]
        assert audit["rate_certificates"]

    def test_naturals_analytic_path(self):
        scheme = build_blocks(Naturals(), PowerGrowth(1, 1), Fraction(1, 50), 6)
        assert scheme.b[:7] == (1, 2, 5, 13, 33, 83, 205)
        assert all(scheme.audit().values())

    def test_skipped_elements_metadata(self):
        B = Explicit([2, 3, 5], tail=Geometric(2, scale=8))
        scheme = build_blocks(B, PowerGrowth(2, 1), Fraction(1, 100), 3,
                              tau_value=Fraction(1, 10))
        # min B = 2 and 2^-e < 1, so elements between 2 and b_2 fall in no block
        assert scheme.b[0] == 2
        if scheme.b[1] > 3:
            assert scheme.metadata["skipped_elements_below_b2"] >= 1

    def test_epsilon_range_validated(self):
        with pytest.raises(EpsilonOutOfRangeError):
            build_blocks(Powers(2), PowerGrowth(1, 1), Fraction(3, 5), 4)
        with pytest.raises(EpsilonOutOfRangeError):
            build_blocks(Powers(2), PowerGrowth(1, 1), Fraction(0), 4)

    def test_finite_set_exhausts(self):
        with pytest.raises(HorizonTooSmallError):
            build_blocks(Explicit(list(range(2, 60))), PowerGrowth(2, 1),
                         Fraction(1, 20), 25, tau_value=Fraction(1, 2))


class TestSchedule:
    def test_growth_window_forces_t1(self, squares_scheme):
        # window 2 must sit where f(n) = n >= b_3 = 25
        assert squares_scheme.t[0] == 24
        assert squares_scheme.window_range(2)[0] == 25

    def test_windows_cover_levels(self, squares_scheme):
        sch = squares_scheme
        for m in range(1, sch.horizon + 1):
            lo, hi = sch.window_range(m)
            assert sch.window_of(lo) == m
            assert sch.window_of(hi) == m
        with pytest.raises(HorizonTooSmallError):
            sch.window_of(sch.depth_limit + 1)

    def test_alphabet_layout(self, squares_scheme):
        sch = squares_scheme
        m, blk, l_n = sch.alphabet_layout(1)
        assert (m, blk.elements, l_n) == (1, (1,), 1)
        t1 = sch.t[0]
        m, blk, _ = sch.alphabet_layout(t1)
        assert m == 1
        m, blk, l_n = sch.alphabet_layout(t1 + 1)
        assert m == 2 and blk.elements == (4, 9, 16) and l_n == 1
        end = sch.window_range(3)[1]
        m, _, l_n = sch.alphabet_layout(end)
        assert m == 3 and l_n == sch.t[2]

    def test_rate_certificates_hold(self, squares_scheme):
        sch = squares_scheme
        for m in range(1, sch.horizon + 1):
            start, end = sch.window_range(m)
            cnt = sch.block(m).count
            assert math.log(cnt) <= start / m + 1e-12
            assert math.log(cnt) <= end / m + 1e-12

    def test_table_growth_head_respected(self):
        # growth dips early; the schedule must push window 2 past the dip
        f = TableGrowth([1, 1, 1, 2, 1], tail=PowerGrowth(1, 1))
        scheme = build_blocks(Powers(2), f, Fraction(1, 10), 4)
        assert all(scheme.audit().values())


class TestDocuments:
    def test_roundtrip(self, squares_scheme):
        doc = squares_scheme.to_document()
        rebuilt = scheme_from_document(doc)
        assert rebuilt.to_document() == doc

    def test_tampered_document_rejected(self, squares_scheme):
        doc = squares_scheme.to_document()
        doc["b"] = list(doc["b"])
        doc["b"][2] = doc["b"][2] + 1
        with pytest.raises(ValueError):
            scheme_from_document(doc)

    def test_unknown_fields_rejected(self, squares_scheme):
        doc = squares_scheme.to_document()
        doc["extra"] = 1
        with pytest.raises(ValueError):
            scheme_from_document(doc)
