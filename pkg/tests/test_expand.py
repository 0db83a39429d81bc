import random
from fractions import Fraction

import pytest

from srcfdim import signs
from srcfdim.expand import (
    STATUS_OK,
    STATUS_RATIONAL_TERMINATED,
    STATUS_UNCERTIFIED,
    EnclosureTooWideError,
    contains_point,
    evaluate,
    expand,
    reconvert,
    singleton_check,
)
from srcfdim.mobius import AdmissibilityError, fundamental_interval
from srcfdim.numbers import DecimalBall, QuadraticSurd, golden_ratio_conjugate, sqrt2_minus_1


def random_surd(rng) -> QuadraticSurd:
    """Seeded quadratic surd in (0,1)."""
    while True:
        D = rng.choice([2, 3, 5, 6, 7, 10, 11, 13, 17, 19, 23])
        q = rng.randint(1, 9)
        r = rng.randint(2, 40)
        p = rng.randint(-3 * r, 0)
        try:
            x = QuadraticSurd.make(p, q, r, D)
        except (ValueError, ZeroDivisionError):
            continue
        if x.cmp_fraction(Fraction(0)) > 0 and x.cmp_fraction(Fraction(1)) < 0:
            return x


class TestExpandSurds:
    def test_golden_ratio_regular_all_ones(self):
        stream = expand(golden_ratio_conjugate(), signs.constant(1), 50)
        assert stream.digits == (1,) * 50
        assert stream.status == STATUS_OK

    def test_golden_ratio_backward(self):
        stream = expand(golden_ratio_conjugate(), signs.constant(-1), 50)
        assert stream.digits == (2,) + (3,) * 49

    def test_sqrt2_alternating(self):
        stream = expand(sqrt2_minus_1(), signs.periodic((1, -1)), 6)
        assert stream.digits == (2, 3, 1, 2, 1, 2)

    def test_membership_and_shrinking(self):
        rng = random.Random(3)
        sequences = [signs.constant(1), signs.constant(-1),
                     signs.periodic((1, -1)), signs.seeded_random(0.5, 9)]
        for trial in range(25):
            x = random_surd(rng)
            sigma = sequences[trial % len(sequences)]
            stream = expand(x, sigma, 40)
            assert stream.status == STATUS_OK
            prev = None
            for n in range(1, 41):
                iv = stream.interval(n)
                assert contains_point(iv, x)
                if prev is not None:
                    assert iv.length < prev
                prev = iv.length

    def test_backward_branch_never_emits_one(self):
        rng = random.Random(17)
        sigma = signs.constant(-1)
        for _ in range(50):
            stream = expand(random_surd(rng), sigma, 30)
            assert all(d >= 2 for d in stream.digits)


class TestExpandRationals:
    def test_terminating_regular(self):
        stream = expand(Fraction(2, 5), signs.constant(1), 10)
        # 2/5 = 1/(2 + 1/2)
        assert stream.digits == (2, 2)
        assert stream.status == STATUS_RATIONAL_TERMINATED
        assert stream.rational_input

    def test_backward_infinite_tail_is_depth_capped(self):
        stream = expand(Fraction(3, 4), signs.constant(-1), 12)
        assert stream.digits == (2, 2, 3) + (2,) * 9
        assert stream.status == STATUS_OK

    def test_remainder_one_then_plus_sign_terminates(self):
        sigma = signs.explicit([-1], tail=1)
        stream = expand(Fraction(1, 2), sigma, 10)
        assert stream.digits == (3, 1)
        assert stream.status == STATUS_RATIONAL_TERMINATED
        assert evaluate((-1, 1), (3, 1)) == Fraction(1, 2)

    def test_rejects_points_outside_unit_interval(self):
        with pytest.raises(ValueError):
            expand(Fraction(3, 2), signs.constant(1), 5)


class TestExpandBalls:
    def test_certified_prefix_matches_exact(self):
        x = golden_ratio_conjugate()
        approx = x.approx(30)
        ball = DecimalBall(approx, Fraction(1, 10**25))
        stream = expand(ball, signs.constant(-1), 20)
        exact = expand(x, signs.constant(-1), 20)
        assert stream.digits == exact.digits[: len(stream.digits)]
        assert len(stream.digits) >= 15

    def test_uncertified_status_when_radius_too_wide(self):
        ball = DecimalBall(Fraction(1, 3), Fraction(1, 50))
        stream = expand(ball, signs.constant(1), 30)
        assert stream.status == STATUS_UNCERTIFIED
        assert stream.uncertified_at == len(stream.digits) + 1

    def test_digit_decisions_stable_under_radius_shrink(self):
        rng = random.Random(23)
        for _ in range(20):
            x = random_surd(rng)
            center = x.approx(28)
            wide = expand(DecimalBall(center, Fraction(1, 10**20)), signs.periodic((1, -1)), 25)
            narrow = expand(DecimalBall(center, Fraction(1, 10**21)), signs.periodic((1, -1)), 25)
            k = len(wide.digits)
            assert narrow.digits[:k] == wide.digits


class TestEvaluate:
    def test_backward_truncations(self):
        for n in range(1, 101):
            assert evaluate((-1,) * n, (2,) * n) == Fraction(n, n + 1)

    def test_single_digit(self):
        assert evaluate((1,), (2,)) == Fraction(1, 2)

    def test_terminal_point_gives_interval_endpoint(self):
        assert evaluate((1, 1), (1, 2), Fraction(1)) == Fraction(3, 4)
        iv = fundamental_interval((1, 1), (1, 2))
        assert evaluate((1, 1), (1, 2), Fraction(0)) == iv.lo or \
            evaluate((1, 1), (1, 2), Fraction(0)) == iv.hi

    def test_inadmissible_word_rejected(self):
        with pytest.raises(AdmissibilityError):
            evaluate((-1,), (1,))
        with pytest.raises(ValueError):
            evaluate((1,), (2,), Fraction(3, 2))


class TestSingletonCheck:
    def test_all_ones_lengths_strictly_decrease(self):
        prev = None
        for n in range(1, 25):
            iv = singleton_check((1,) * n, (1,) * n)
            if prev is not None:
                assert iv.length < prev
            prev = iv.length

    def test_all_twos_backward_interval(self):
        for n in range(1, 30):
            iv = singleton_check((-1,) * n, (2,) * n)
            assert (iv.lo, iv.hi) == (Fraction(n, n + 1), Fraction(1))

    def test_digits_ge_3_halve_lengths(self):
        rng = random.Random(31)
        for _ in range(30):
            depth = rng.randint(2, 12)
            sg = tuple(rng.choice((1, -1)) for _ in range(depth))
            dg = tuple(rng.randint(3, 20) for _ in range(depth))
            prev = None
            for n in range(1, depth + 1):
                iv = singleton_check(sg[:n], dg[:n])
                if prev is not None:
                    assert iv.length <= prev / 2
                prev = iv.length


class TestReconvert:
    def test_backward_to_regular_golden(self):
        source = expand(golden_ratio_conjugate(), signs.constant(-1), 40)
        out = reconvert(source.signs, source.digits, signs.constant(1), 20)
        assert out.digits == (1,) * 20

    def test_identity_reproduces_prefix(self):
        source = expand(sqrt2_minus_1(), signs.periodic((1, -1)), 30)
        out = reconvert(source.signs, source.digits, signs.periodic((1, -1)), 20)
        assert out.digits == source.digits[:20]

    def test_rational_backward_word_reconverts_and_stops(self):
        # n/(n+1) has terminating regular digits (1, n); the oracle is the
        # exact rational re-expansion, while enclosure-based reconversion can
        # certify digits only before the termination index (the point sits on
        # a branch boundary, so both neighbours of it disagree from there on)
        n = 6
        x = Fraction(n, n + 1)
        exact = expand(x, signs.constant(1), 10)
        assert exact.digits == (1, n)
        assert exact.status == STATUS_RATIONAL_TERMINATED
        source = expand(x, signs.constant(-1), 30)
        out = reconvert(source.signs, source.digits, signs.constant(1), 1)
        assert out.digits == exact.digits[:1]
        with pytest.raises(EnclosureTooWideError):
            reconvert(source.signs, source.digits, signs.constant(1), 2)

    def test_too_short_input_raises(self):
        source = expand(golden_ratio_conjugate(), signs.constant(-1), 5)
        with pytest.raises(EnclosureTooWideError):
            reconvert(source.signs, source.digits, signs.constant(1), 25)


class TestUniqueness:
    def test_distinct_words_have_interior_disjoint_intervals(self):
        import itertools

        for sigma in (signs.constant(1), signs.constant(-1), signs.periodic((1, -1))):
            sg = sigma.prefix(3)
            alphabets = [range(1 if s == 1 else 2, 5) for s in sg]
            ivs = sorted(
                (fundamental_interval(sg, w) for w in itertools.product(*alphabets)),
                key=lambda iv: iv.lo,
            )
            for a, b in zip(ivs, ivs[1:]):
                assert a.hi <= b.lo
