import numpy as np
import pytest
from scipy import stats as scipy_stats

from chairsearch.errors import InvalidInputError
from chairsearch.stats import (
    friedman_test,
    rank_with_ties,
    wilcoxon_signed_rank,
)


def test_rank_simple():
    assert rank_with_ties(np.array([3.0, 1.0, 2.0])).tolist() == [3.0, 1.0, 2.0]


def test_rank_averages_ties():
    assert rank_with_ties(np.array([1.0, 1.0, 2.0])).tolist() == [1.5, 1.5, 3.0]
    assert rank_with_ties(np.array([5.0, 5.0, 5.0])).tolist() == [2.0, 2.0, 2.0]


def test_friedman_hand_computed_example():
    # rows -> ranks: (1,2,3), (3,1,2), (1,3,2); rank sums 5, 6, 7
    # chi2 = 12/(3*3*4) * (25+36+49) - 3*3*4 = 110/3 - 36 = 2/3
    matrix = np.array([[1.0, 2.0, 3.0], [6.0, 4.0, 5.0], [2.0, 6.0, 4.0]])
    result = friedman_test(matrix)
    assert result.statistic == pytest.approx(2.0 / 3.0, abs=1e-12)
    assert result.rank_sums == (5.0, 6.0, 7.0)
    assert result.degrees_of_freedom == 2


def test_friedman_degenerate_constant_rows():
    matrix = np.ones((10, 3))
    result = friedman_test(matrix)
    assert result.statistic == 0.0
    assert all(not pw.significant for pw in result.pairwise)


def test_friedman_matches_scipy_on_random_data():
    rng = np.random.default_rng(7)
    for _ in range(20):
        matrix = rng.integers(0, 5, size=(12, 4)).astype(float)
        if any(len(set(row)) == 1 for row in matrix):
            continue
        ours = friedman_test(matrix)
        ref_stat, ref_p = scipy_stats.friedmanchisquare(*matrix.T)
        # scipy applies a tie correction; agree exactly when rows are tie-free
        if all(len(set(row)) == len(row) for row in matrix):
            assert ours.statistic == pytest.approx(ref_stat)
            assert ours.p_value == pytest.approx(ref_p)


def test_friedman_rejects_degenerate_shapes():
    with pytest.raises(InvalidInputError):
        friedman_test(np.ones((1, 3)))
    with pytest.raises(InvalidInputError):
        friedman_test(np.ones((5, 1)))


def test_wilcoxon_all_zero_differences():
    x = np.ones(10)
    result = wilcoxon_signed_rank(x, x)
    assert result.p_value == 1.0
    assert result.n_effective == 0


def test_wilcoxon_one_sided_dominance_over_20_rows():
    # one condition always better by 1: W- = 0, n = 20 -> strongly significant
    x = np.ones(20)
    y = np.zeros(20)
    result = wilcoxon_signed_rank(x, y)
    assert result.statistic == 0.0
    assert result.p_value < 0.001


def test_wilcoxon_matches_scipy_approximation():
    rng = np.random.default_rng(3)
    for _ in range(20):
        x = rng.normal(size=30)
        y = x + rng.normal(scale=0.7, size=30)
        ours = wilcoxon_signed_rank(x, y)
        ref = scipy_stats.wilcoxon(x, y, zero_method="wilcox", correction=False,
                                   mode="approx")
        assert ours.statistic == pytest.approx(ref.statistic)
        assert ours.p_value == pytest.approx(ref.pvalue, rel=1e-9)


def test_pairwise_dominance_is_significant():
    rng = np.random.default_rng(5)
    base = rng.integers(0, 2, size=20).astype(float)
    matrix = np.column_stack([base, base + 1.0, base + rng.normal(scale=0.01, size=20)])
    result = friedman_test(matrix)
    pair = next(pw for pw in result.pairwise if {pw.condition_a, pw.condition_b} == {0, 1})
    assert pair.significant


def test_bonferroni_adjustment_applied():
    rng = np.random.default_rng(9)
    matrix = rng.normal(size=(15, 4))
    result = friedman_test(matrix)
    n_pairs = 6
    for pw in result.pairwise:
        assert pw.p_adjusted == pytest.approx(min(1.0, pw.p_value * n_pairs))
