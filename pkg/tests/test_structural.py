"""Tests for structural importance and the Banzhaf / Shapley-Shubik indices."""

from fractions import Fraction
from math import comb

import numpy as np
import pytest

from oracles import banzhaf_by_swings, random_structures, shapley_by_permutations
from relimp.reliability import birnbaum_all
from relimp.structural import (
    banzhaf,
    birnbaum_structural,
    birnbaum_structural_all,
    birnbaum_structural_exact,
    bp_structural,
    bp_structural_average,
    bp_structural_exact,
    bp_structural_integral,
    critical_path_counts,
    shapley_shubik,
    shapley_shubik_all,
    shapley_weights,
    structural_functioning_failure,
)
from relimp.structure import dual, from_minimal_paths, identity, parallel, series

BIRSTRUCT_PATHS = [{1, 2, 3}, {1, 2, 4}, {1, 2, 5}]


class TestBirnbaumStructural:
    def test_figure_values(self, birstruct):
        """Two components in series with a parallel block of three."""
        values = [birnbaum_structural_exact(birstruct, i) for i in range(1, 6)]
        assert values == [Fraction(7, 16)] * 2 + [Fraction(1, 16)] * 3
        assert birnbaum_structural_all(birstruct).values == (0.4375, 0.4375, 0.0625, 0.0625, 0.0625)

    def test_series3(self):
        assert critical_path_counts(series(3), 1) == (0, 0, 1)
        assert [birnbaum_structural(series(3), i) for i in (1, 2, 3)] == [0.25] * 3

    def test_single(self):
        assert birnbaum_structural(identity(), 1) == 1.0

    def test_equals_birnbaum_at_half(self):
        for n, fam in random_structures(seed=30, count=30, n_max=7):
            phi = from_minimal_paths(n, fam)
            np.testing.assert_allclose(
                birnbaum_structural_all(phi).as_array(), birnbaum_all(phi, [0.5] * n).as_array(), rtol=0, atol=1e-12
            )

    def test_dual_invariance(self):
        for n, fam in random_structures(seed=31, count=30, n_max=7):
            phi = from_minimal_paths(n, fam)
            for i in range(1, n + 1):
                assert birnbaum_structural_exact(phi, i) == birnbaum_structural_exact(dual(phi), i)


class TestBarlowProschanStructural:
    def test_series_uniform(self):
        for n in range(1, 7):
            assert all(bp_structural_exact(series(n), i) == Fraction(1, n) for i in range(1, n + 1))

    def test_figure_values(self, birstruct):
        """Permutation oracle for the figure structure: 9/20 and 1/30."""
        oracle = shapley_by_permutations(BIRSTRUCT_PATHS, 5)
        assert oracle == [Fraction(9, 20)] * 2 + [Fraction(1, 30)] * 3
        assert [bp_structural_exact(birstruct, i) for i in range(1, 6)] == oracle

    def test_three_routes_agree(self):
        """Combinatorial sum, closed-form integral and averaged critical fractions."""
        for n, fam in random_structures(seed=32, count=40, n_max=7):
            phi = from_minimal_paths(n, fam)
            for i in range(1, n + 1):
                combinatorial = bp_structural_exact(phi, i)
                assert bp_structural_integral(phi, i) == combinatorial
                assert bp_structural_average(phi, i) == combinatorial

    def test_single(self):
        assert bp_structural(identity(), 1) == 1.0


class TestFunctioningFailure:
    def test_series2(self):
        s = structural_functioning_failure(series(2), 1)
        assert (s.functioning, s.failure, s.total) == (0.25, 0.25, 0.5)

    def test_parallel2(self):
        s = structural_functioning_failure(parallel(2), 1)
        assert (s.functioning, s.failure, s.total) == (0.25, 0.25, 0.5)

    def test_single(self):
        s = structural_functioning_failure(identity(), 1)
        assert (s.functioning, s.failure, s.total) == (0.5, 0.5, 1.0)

    def test_halves_equal_and_total(self):
        for n, fam in random_structures(seed=33, count=50, n_max=7):
            phi = from_minimal_paths(n, fam)
            for j in range(1, n + 1):
                s = structural_functioning_failure(phi, j)
                assert s.functioning == s.failure
                assert s.total == pytest.approx(birnbaum_structural(phi, j), abs=1e-15)


class TestPowerIndices:
    def test_series3(self):
        assert [banzhaf(series(3), i) for i in (1, 2, 3)] == [0.25] * 3
        assert [shapley_shubik(series(3), i) for i in (1, 2, 3)] == pytest.approx([1 / 3] * 3, abs=1e-15)

    def test_figure_banzhaf(self, birstruct):
        assert [banzhaf(birstruct, i) for i in range(1, 6)] == [0.4375, 0.4375, 0.0625, 0.0625, 0.0625]

    def test_single(self):
        assert banzhaf(identity(), 1) == 1.0
        assert shapley_shubik(identity(), 1) == 1.0

    def test_against_swing_and_permutation_oracles(self):
        for n, fam in random_structures(seed=34, count=30, n_max=6):
            phi = from_minimal_paths(n, fam)
            assert [birnbaum_structural_exact(phi, i) for i in range(1, n + 1)] == banzhaf_by_swings(fam, n)
            assert [bp_structural_exact(phi, i) for i in range(1, n + 1)] == shapley_by_permutations(fam, n)

    def test_shapley_sums_to_one(self):
        for n, fam in random_structures(seed=35, count=50, n_max=7):
            phi = from_minimal_paths(n, fam)
            assert sum(bp_structural_exact(phi, i) for i in range(1, n + 1)) == 1
            assert shapley_shubik_all(phi).total() == pytest.approx(1.0, abs=1e-12)


class TestShapleyWeights:
    @pytest.mark.parametrize("n", range(1, 21))
    def test_profile(self, n):
        """Symmetric in r <-> n-r+1 and smallest in the middle."""
        w = shapley_weights(n)
        assert all(w[r - 1] == w[n - r] for r in range(1, n + 1))
        middle = -(-(n + 1) // 2)
        assert w[middle - 1] == min(w)
        # each player sees comb(n-1, r-1) coalitions of size r - 1
        assert sum(w[r - 1] * comb(n - 1, r - 1) for r in range(1, n + 1)) == 1
