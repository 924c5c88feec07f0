"""
Greedy Selection

Adds, k times, the point with the largest contribution to the current
selection; ties go to the smallest index and the loop stops once the best
contribution is 0. The union volume is monotone submodular, so the result is
within a factor 1 - 1/e of the optimum.

The lazy variant keeps stale contributions in a heap and re-evaluates only
the top entry; a stale value bounds the current one from above, so it picks
exactly what the naive loop picks.
"""

import heapq
import logging
import math
import time

from volsel.api.exact import check_k
from volsel.api.hypervolume import _contribution, hv_sweep
from volsel.constants import ALGO_GREEDY, MSG_SOLVER_DONE
from volsel.doctype.point_set.point_set import PointSet
from volsel.doctype.solution.solution import Guarantee, Solution

logger = logging.getLogger(__name__)


def _lazy_sequence(points: PointSet, k: int) -> tuple:
    pts = points.points
    d = points.dimension
    chosen, gains = [], []
    selected = []

    # (-gain, index, round in which the gain was computed)
    heap = [(-math.prod(p), i, 0) for i, p in enumerate(pts)]
    heapq.heapify(heap)
    evaluations = 0

    while len(chosen) < k and heap:
        neg_gain, i, stamp = heapq.heappop(heap)
        if stamp == len(chosen):
            if neg_gain >= 0:
                break
            chosen.append(i)
            gains.append(-neg_gain)
            selected.append(pts[i])
            continue
        gain = _contribution(selected, pts[i], d)
        evaluations += 1
        heapq.heappush(heap, (-gain, i, len(chosen)))

    logger.debug(f"Lazy greedy: {evaluations} re-evaluations for {len(chosen)} picks")
    return chosen, gains


def _naive_sequence(points: PointSet, k: int) -> tuple:
    pts = points.points
    d = points.dimension
    chosen, gains = [], []
    selected = []
    remaining = set(range(len(pts)))

    while len(chosen) < k and remaining:
        best, best_gain = None, 0
        for i in sorted(remaining):
            gain = _contribution(selected, pts[i], d)
            if gain > best_gain:
                best, best_gain = i, gain
        if best is None:
            break
        chosen.append(best)
        gains.append(best_gain)
        selected.append(pts[best])
        remaining.remove(best)

    return chosen, gains


def greedy_sequence(points: PointSet, k: int, lazy: bool = True) -> tuple:
    """
    Greedy picks and their marginal contributions

    Args:
        points: input point set
        k: number of picks, 0 <= k <= n
        lazy: use the heap of stale contributions

    Returns:
        tuple: (positions in pick order, contributions in pick order)
    """
    check_k(points, k)
    if lazy:
        return _lazy_sequence(points, k)
    return _naive_sequence(points, k)


def volsel_greedy(points: PointSet, k: int, lazy: bool = True) -> Solution:
    """
    Greedy (1 - 1/e)-approximation of VolSel(P, k)

    Returns:
        Solution: tagged factor(1 - 1/e)
    """
    started = time.perf_counter()
    chosen, _ = greedy_sequence(points, k, lazy)

    solution = Solution(
        indices=points.original_indices(chosen),
        value=hv_sweep(points.subset(chosen)),
        algorithm=ALGO_GREEDY,
        guarantee=Guarantee.factor(),
    )

    elapsed = (time.perf_counter() - started) * 1000
    logger.info(MSG_SOLVER_DONE.format(
        algo=ALGO_GREEDY, n=len(points), d=points.dimension, k=k, value=solution.value, elapsed=elapsed
    ))
    return solution
