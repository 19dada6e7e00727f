"""Nonparametric comparison of retrieval conditions.

Friedman's chi-square over within-row ranks decides whether the conditions
differ at all; pairwise Wilcoxon signed-rank tests with a Bonferroni
correction then locate the differences.  Rows are paired trials (same
target, same seed), columns are conditions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import chi2

from .errors import InvalidInputError

ALPHA = 0.05


def rank_with_ties(values: np.ndarray) -> np.ndarray:
    """Ascending ranks starting at 1; ties get the average rank."""
    values = np.asarray(values, dtype=np.float64)
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=np.float64)
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


@dataclass(frozen=True)
class WilcoxonResult:
    statistic: float  # W = min(W+, W-)
    z: float
    p_value: float
    n_effective: int  # pairs with a nonzero difference


def wilcoxon_signed_rank(x: np.ndarray, y: np.ndarray) -> WilcoxonResult:
    """Paired two-sided Wilcoxon signed-rank test, normal approximation.

    Zero differences are dropped; the variance carries the standard tie
    correction.  With no nonzero differences the test is vacuous (p = 1).
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise InvalidInputError("paired samples must have equal length")
    diff = x - y
    diff = diff[diff != 0.0]
    n = len(diff)
    if n == 0:
        return WilcoxonResult(statistic=0.0, z=0.0, p_value=1.0, n_effective=0)
    ranks = rank_with_ties(np.abs(diff))
    w_plus = float(ranks[diff > 0].sum())
    w_minus = float(ranks[diff < 0].sum())
    w = min(w_plus, w_minus)
    mean = n * (n + 1) / 4.0
    var = n * (n + 1) * (2 * n + 1) / 24.0
    _, counts = np.unique(np.abs(diff), return_counts=True)
    var -= float((counts**3 - counts).sum()) / 48.0
    if var <= 0.0:
        return WilcoxonResult(statistic=w, z=0.0, p_value=1.0, n_effective=n)
    z = (w - mean) / math.sqrt(var)
    p = 2.0 * 0.5 * math.erfc(abs(z) / math.sqrt(2.0))
    return WilcoxonResult(statistic=w, z=z, p_value=min(1.0, p), n_effective=n)


@dataclass(frozen=True)
class PairwiseComparison:
    condition_a: int
    condition_b: int
    statistic: float
    p_value: float
    p_adjusted: float
    significant: bool


@dataclass(frozen=True)
class FriedmanResult:
    statistic: float
    degrees_of_freedom: int
    p_value: float
    rank_sums: tuple[float, ...]
    pairwise: tuple[PairwiseComparison, ...]


def friedman_test(matrix: np.ndarray, alpha: float = ALPHA) -> FriedmanResult:
    """Friedman chi-square plus Bonferroni-corrected pairwise Wilcoxon tests.

    statistic = 12 / (n k (k+1)) * sum_j R_j^2 - 3 n (k+1), with R_j the
    column sums of within-row average ranks.  A matrix with constant rows
    ranks flat everywhere and yields statistic 0 and no significant pairs.
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] < 2 or matrix.shape[1] < 2:
        raise InvalidInputError("need at least 2 rows and 2 conditions")
    n, k = matrix.shape
    ranks = np.vstack([rank_with_ties(row) for row in matrix])
    rank_sums = ranks.sum(axis=0)
    statistic = float(12.0 / (n * k * (k + 1)) * (rank_sums**2).sum() - 3.0 * n * (k + 1))
    statistic = max(0.0, statistic)
    dof = k - 1
    p_value = float(chi2.sf(statistic, dof)) if statistic > 0 else 1.0
    n_pairs = k * (k - 1) // 2
    pairwise = []
    for a in range(k):
        for b in range(a + 1, k):
            res = wilcoxon_signed_rank(matrix[:, a], matrix[:, b])
            p_adj = min(1.0, res.p_value * n_pairs)
            pairwise.append(PairwiseComparison(
                condition_a=a, condition_b=b, statistic=res.statistic,
                p_value=res.p_value, p_adjusted=p_adj,
                significant=p_adj < alpha and res.n_effective > 0))
    return FriedmanResult(
        statistic=statistic,
        degrees_of_freedom=dof,
        p_value=p_value,
        rank_sums=tuple(float(r) for r in rank_sums),
        pairwise=tuple(pairwise),
    )
