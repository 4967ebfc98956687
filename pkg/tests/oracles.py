"""Independent brute-force oracles used by the unit and acceptance tests.

Everything here is deliberately naive: direct summations and exhaustive
enumeration that the fast implementations are checked against.
"""

import math
from itertools import combinations

import numpy as np

from histcmi import assign_labels, build_grid, total_score
from histcmi.data_model import binset_from_cuts


def multinomial_regret(n: int, K: int) -> float:
    """Direct sum over all compositions c_1+...+c_K = n of n!/(prod c!) prod (c/n)^c."""
    total = 0.0
    log_fact_n = math.lgamma(n + 1)

    def rec(k_left, n_left, log_acc):
        nonlocal total
        if k_left == 1:
            c = n_left
            term = log_acc - math.lgamma(c + 1) + (c * math.log(c / n) if c else 0.0)
            total += math.exp(term)
            return
        for c in range(n_left + 1):
            contrib = -math.lgamma(c + 1) + (c * math.log(c / n) if c else 0.0)
            rec(k_left - 1, n_left - c, log_acc + contrib)

    rec(K, n, log_fact_n)
    return total


def exhaustive_best_total(column, cand, K_max: int) -> float:
    """Minimum total score over every interior-cut subset with < K_max cuts."""
    interior = cand.interior
    lo, hi = float(cand.boundaries[0]), float(cand.boundaries[-1])
    best = np.inf
    for r in range(0, K_max):
        for subset in combinations(range(len(interior)), r):
            bs = binset_from_cuts(column, lo, hi, interior, interior[list(subset)])
            labs = assign_labels(column, bs)
            total = total_score(build_grid([labs], [bs]), [bs]).total
            best = min(best, total)
    return float(best)
