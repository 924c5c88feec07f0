"""
Exact VolSel Solvers

This module handles:
1. Brute-force subset enumeration for any dimension (one table for all k' <= k)
2. The staircase dynamic program for d = 2
3. The decision variant "is there a subset of at most k points with volume >= V"

Every solver reports indices in the original input and recomputes the value
of its witness with hv_sweep.
"""

import logging
import math
import time

from volsel.api.geometry import pareto_filter
from volsel.api.hypervolume import _contribution, hv_sweep
from volsel.api.subsets import best_subsets, subset_volume_table
from volsel.config import get_settings
from volsel.constants import (
    ALGO_BRUTE,
    ALGO_EXACT_2D,
    ERR_BRUTE_BUDGET,
    ERR_K_RANGE,
    ERR_NEEDS_2D,
    MSG_SOLVER_DONE,
)
from volsel.doctype.point_set.point_set import PointSet
from volsel.doctype.solution.solution import Guarantee, Solution
from volsel.exceptions import BudgetExceededError, DimensionMismatchError, InvalidParameterError

logger = logging.getLogger(__name__)


def check_k(points: PointSet, k: int):
    if not isinstance(k, int) or isinstance(k, bool) or not 0 <= k <= len(points):
        raise InvalidParameterError(ERR_K_RANGE.format(n=len(points), k=k))


def brute_force_count(n: int, k: int) -> int:
    """Subsets of size at most k out of n"""
    return sum(math.comb(n, size) for size in range(min(k, n) + 1))


def brute_force_feasible(n: int, k: int, budget: int | None = None) -> bool:
    if budget is None:
        budget = get_settings().brute_budget
    return brute_force_count(n, k) <= budget


def _solution(points: PointSet, positions, algorithm: str, guarantee: Guarantee) -> Solution:
    chosen = points.subset(positions)
    return Solution(
        indices=points.original_indices(positions),
        value=hv_sweep(chosen),
        algorithm=algorithm,
        guarantee=guarantee,
    )


def _enumerate(points: PointSet, k: int) -> list:
    """Lexicographic depth-first enumeration; best (value, positions) per exact size"""
    pts = points.points
    d = points.dimension
    n = len(pts)
    best = [None] * (k + 1)
    best[0] = (0, ())

    def visit(start: int, chosen: list, volume):
        size = len(chosen) + 1
        for i in range(start, n):
            value = volume + _contribution([pts[j] for j in chosen], pts[i], d)
            chosen.append(i)
            # preorder visits sets in lexicographic order, strict > keeps the first
            if best[size] is None or value > best[size][0]:
                best[size] = (value, tuple(chosen))
            if size < k:
                visit(i + 1, chosen, value)
            chosen.pop()

    if k > 0:
        visit(0, [], 0)
    return best


def _best_per_k(points: PointSet, k: int, settings) -> list:
    n = len(points)
    if n <= settings.subset_table_limit:
        table = subset_volume_table(points, settings.subset_table_limit)
        return [positions for _, positions in best_subsets(table, n, k)]

    per_size = _enumerate(points, k)
    result = []
    best = None
    for size in range(k + 1):
        candidate = per_size[size]
        if candidate is not None:
            if best is None or candidate[0] > best[0] or (candidate[0] == best[0] and candidate[1] < best[1]):
                best = candidate
        result.append(best[1])
    return result


def volsel_brute_table(points: PointSet, k: int, budget: int | None = None, settings=None) -> list:
    """
    Optimal selections for every budget k' = 0..k from one enumeration

    Args:
        points: input point set
        k: largest selection size, 0 <= k <= n
        budget: limit on the number of subsets, defaults to settings.brute_budget
        settings: VolselSettings, defaults to get_settings()

    Returns:
        list: Solution for each k' = 0..k, ties resolved to the
        lexicographically smallest index set

    Raises:
        BudgetExceededError: more subsets than the budget
    """
    settings = settings or get_settings()
    if budget is None:
        budget = settings.brute_budget
    check_k(points, k)

    count = brute_force_count(len(points), k)
    if count > budget:
        raise BudgetExceededError(ERR_BRUTE_BUDGET.format(count=count, budget=budget))

    started = time.perf_counter()
    solutions = [
        _solution(points, positions, ALGO_BRUTE, Guarantee.exact())
        for positions in _best_per_k(points, k, settings)
    ]

    elapsed = (time.perf_counter() - started) * 1000
    logger.info(MSG_SOLVER_DONE.format(
        algo=ALGO_BRUTE, n=len(points), d=points.dimension, k=k, value=solutions[-1].value, elapsed=elapsed
    ))
    return solutions


def volsel_brute(points: PointSet, k: int, budget: int | None = None, settings=None) -> Solution:
    """
    Exact VolSel(P, k) by enumerating every subset of size at most k

    Returns:
        Solution: optimal selection, lexicographically smallest among ties
    """
    return volsel_brute_table(points, k, budget, settings)[k]


def volsel_decide(points: PointSet, k: int, target, budget: int | None = None, settings=None) -> tuple:
    """
    Decide whether some subset of at most k points reaches volume `target`

    Returns:
        tuple: (answer, witness Solution)
    """
    solution = volsel_brute(points, k, budget, settings)
    return solution.value >= target, solution


def volsel_exact_2d(points: PointSet, k: int) -> Solution:
    """
    Exact VolSel(P, k) for d = 2 by a staircase dynamic program

    After Pareto filtering the points sorted by ascending x have descending y.
    f[i][t] is the best area of t points among the first i whose last pick is
    i, f[i][t] = max over j < i of f[j][t-1] + y_i * (x_i - x_j) with x_0 = 0.

    Args:
        points: two-dimensional point set
        k: selection size, 0 <= k <= n

    Returns:
        Solution: optimal selection

    Raises:
        DimensionMismatchError: points are not two-dimensional
    """
    if points.dimension != 2:
        raise DimensionMismatchError(ERR_NEEDS_2D.format(d=points.dimension))
    check_k(points, k)

    started = time.perf_counter()
    front = pareto_filter(points)
    order = sorted(range(len(front)), key=lambda i: front[i][0])
    xs = [front[i][0] for i in order]
    ys = [front[i][1] for i in order]
    h = len(order)
    kmax = min(k, h)

    # f[t][i] and its predecessor; index 0 of each row is the empty predecessor
    f = [[None] * (h + 1) for _ in range(kmax + 1)]
    pred = [[0] * (h + 1) for _ in range(kmax + 1)]
    f[0][0] = 0
    best_value, best_t, best_i = 0, 0, 0

    for t in range(1, kmax + 1):
        for i in range(t, h + 1):
            x, y = xs[i - 1], ys[i - 1]
            top, arg = None, 0
            for j in range(t - 1, i):
                if f[t - 1][j] is None:
                    continue
                left = xs[j - 1] if j else 0
                value = f[t - 1][j] + y * (x - left)
                if top is None or value > top:
                    top, arg = value, j
            f[t][i] = top
            pred[t][i] = arg
            if top is not None and top > best_value:
                best_value, best_t, best_i = top, t, i

    picked = []
    t, i = best_t, best_i
    while t > 0:
        picked.append(i - 1)
        i = pred[t][i]
        t -= 1

    positions = [order[p] for p in picked]
    solution = _solution(front, positions, ALGO_EXACT_2D, Guarantee.exact())

    elapsed = (time.perf_counter() - started) * 1000
    logger.info(MSG_SOLVER_DONE.format(
        algo=ALGO_EXACT_2D, n=len(points), d=2, k=k, value=solution.value, elapsed=elapsed
    ))
    return solution
