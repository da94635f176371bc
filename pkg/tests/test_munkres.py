"""Matching kernel against enumeration, scipy, and its own invariants."""

import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

from sidesched.munkres import max_weight_assignment
from util import brute_max_matching


class TestReferenceCases:
    def test_identity_prefers_diagonal(self):
        cols, total = max_weight_assignment([[1.0, 0.0], [0.0, 1.0]])
        assert list(cols) == [0, 1]
        assert total == 2.0

    def test_cross_pairing(self):
        cols, total = max_weight_assignment([[1.0, 5.0], [2.0, 3.0]])
        assert list(cols) == [1, 0]
        assert total == 7.0

    def test_reduced_reference_matrix(self):
        cols, total = max_weight_assignment([[3.0, 5.0], [4.0, 2.0]])
        assert list(cols) == [1, 0]
        assert total == 9.0

    def test_single_cell(self):
        cols, total = max_weight_assignment([[4.5]])
        assert list(cols) == [0]
        assert total == 4.5


class TestAgainstEnumeration:
    def test_random_small(self):
        rng = np.random.default_rng(42)
        for _ in range(200):
            n = int(rng.integers(1, 8))
            w = rng.normal(0, 5, (n, n))
            cols, total = max_weight_assignment(w)
            _, ref = brute_max_matching(w)
            assert sorted(cols) == list(range(n))
            assert abs(total - ref) <= 1e-9 * max(1.0, abs(ref))

    def test_integer_weights_exact(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            n = int(rng.integers(2, 7))
            w = rng.integers(-20, 20, (n, n)).astype(float)
            _, total = max_weight_assignment(w)
            _, ref = brute_max_matching(w)
            assert total == ref


class TestAgainstScipy:
    def test_large_random(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            n = int(rng.integers(50, 120))
            w = rng.uniform(0, 1.5e7, (n, n))
            cols, total = max_weight_assignment(w)
            ri, ci = linear_sum_assignment(w, maximize=True)
            ref = float(w[ri, ci].sum())
            assert abs(total - ref) <= 1e-9 * ref
            assert sorted(cols) == list(range(n))


class TestInvariants:
    def test_constant_shift_keeps_matching(self):
        # exact arithmetic: integer-valued floats plus integer shifts
        rng = np.random.default_rng(15)
        for _ in range(50):
            n = int(rng.integers(2, 9))
            w = rng.integers(0, 50, (n, n)).astype(float)
            shift = float(rng.integers(-30, 30))
            cols, total = max_weight_assignment(w)
            cols2, total2 = max_weight_assignment(w + shift)
            np.testing.assert_array_equal(cols, cols2)
            assert total2 == total + n * shift

    def test_deterministic_under_ties(self):
        w = np.ones((4, 4))
        first = max_weight_assignment(w)
        for _ in range(5):
            cols, total = max_weight_assignment(w)
            np.testing.assert_array_equal(cols, first[0])
            assert total == 4.0

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            max_weight_assignment(np.ones((2, 3)))

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            max_weight_assignment([[1.0, np.nan], [0.0, 1.0]])

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            max_weight_assignment(np.zeros((0, 0)))
