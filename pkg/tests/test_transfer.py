import math

import pytest

from srcfdim import signs
from srcfdim.ifs import NonAutonomousInputError, assemble
from srcfdim.pressure import bowen_bisect
from srcfdim.transfer import leading_eigenvalue, transfer_refine


class TestLeadingEigenvalue:
    def test_zero_exponent_counts_branches(self):
        for alphabet in ((1, 2), (3, 4, 5), (7,)):
            for degree in (8, 16, 32):
                lam = leading_eigenvalue(alphabet, 0.0, degree)
                assert lam == pytest.approx(len(alphabet), abs=1e-9)

    def test_single_branch_fixed_point_formula(self):
        # fixed point x* of 1/(k+x) solves x^2 + kx - 1 = 0; at s the leading
        # eigenvalue converges to |D phi(x*)|^s
        for k in (2, 3, 5):
            xstar = (-k + math.sqrt(k * k + 4)) / 2
            for s in (0.35, 1.0):
                expected = (1.0 / (k + xstar) ** 2) ** s
                lam = leading_eigenvalue((k,), s, 64)
                assert lam == pytest.approx(expected, rel=1e-12)

    def test_system_entry_point_requires_autonomous(self):
        mixed = assemble(signs.constant(1), [(1, 2), (1, 3)])
        with pytest.raises(NonAutonomousInputError):
            leading_eigenvalue(mixed, 0.5)
        alt = assemble(signs.periodic((1, -1)), [2, 3], horizon=6)
        with pytest.raises(NonAutonomousInputError):
            transfer_refine(alt)


class TestRefine:
    def test_rcf_pair_root_agrees_with_bisection(self):
        system = assemble(signs.constant(1), [1, 2], horizon=20)
        refined = transfer_refine(system, tolerance=1e-10)
        assert refined.shift < 1e-10
        bracket = bowen_bisect(system, tolerance=1e-2, depths=(8, 12, 16, 20))
        assert bracket.s_minus <= refined.value <= bracket.s_plus
        # spectral accuracy: doubled-degree history pins 12+ digits
        assert refined.value == pytest.approx(0.5312805062772051, abs=1e-9)

    def test_history_records_degree_doubling(self):
        system = assemble(signs.constant(1), [2, 3], horizon=8)
        refined = transfer_refine(system, tolerance=1e-10, start_degree=8)
        degrees = [d for d, _ in refined.history]
        assert degrees == sorted(degrees)
        assert all(b == 2 * a for a, b in zip(degrees, degrees[1:]))
