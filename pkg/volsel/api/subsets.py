"""
Subset Volume Table

Union volume of every subset of a small point set at once, as a vectorized
inclusion-exclusion:
1. Componentwise-minimum corner of every subset, built bit by bit
2. Signed box volume of every corner, sign (-1)^(|T|+1)
3. Subset-sum transform, so entry `mask` holds the volume of that subset

Entry `mask` describes the subset {i : bit i of mask is set}.
"""

import logging
import math

import numpy as np

from volsel.config import get_settings
from volsel.constants import ERR_IE_LIMIT, INT64_SAFE_BOUND
from volsel.doctype.point_set.point_set import PointSet
from volsel.exceptions import BudgetExceededError

logger = logging.getLogger(__name__)


def popcounts(n: int) -> np.ndarray:
    """Number of set bits of every mask below 2^n"""
    counts = np.zeros(1 << n, dtype=np.int64)
    for b in range(n):
        counts[1 << b : 1 << (b + 1)] = counts[: 1 << b] + 1
    return counts


def _dtype_for(points: PointSet):
    if not points.is_exact:
        return np.float64
    if not points.points:
        return np.int64
    top = [max(p[i] for p in points.points) for i in range(points.dimension)]
    if (1 << len(points)) * math.prod(top) < INT64_SAFE_BOUND:
        return np.int64
    # Python ints through object arrays
    return object


def subset_volume_table(points: PointSet, limit: int | None = None) -> np.ndarray:
    """
    Union volume of all 2^n subsets

    Args:
        points: point set with n <= limit points
        limit: size limit, defaults to settings.subset_table_limit

    Returns:
        np.ndarray: length 2^n; float64 in float mode, int64 or object (Python
        ints) in exact mode
    """
    if limit is None:
        limit = get_settings().subset_table_limit
    n = len(points)
    if n > limit:
        raise BudgetExceededError(ERR_IE_LIMIT.format(limit=limit, n=n))

    dtype = _dtype_for(points)
    if n == 0:
        return np.zeros(1, dtype=dtype)

    coords = np.array(points.points, dtype=dtype)
    corners = np.empty((1 << n, points.dimension), dtype=dtype)
    # minimum(top, p) == p, so the empty-set row seeds the singletons
    corners[0] = coords.max(axis=0)
    for b in range(n):
        corners[1 << b : 1 << (b + 1)] = np.minimum(corners[: 1 << b], coords[b])

    table = corners.prod(axis=1)
    table[0] = 0
    odd = popcounts(n) % 2 == 1
    table = np.where(odd, table, -table)

    for b in range(n):
        view = table.reshape(-1, 2, 1 << b)
        view[:, 1, :] += view[:, 0, :]

    logger.debug(f"Subset table: n={n} dtype={np.dtype(dtype).name}")
    return table


def _scalar(value):
    # numpy scalars to Python numbers, object entries are already Python ints
    return value.item() if isinstance(value, np.generic) else value


def mask_positions(mask: int) -> tuple:
    positions = []
    b = 0
    while mask:
        if mask & 1:
            positions.append(b)
        mask >>= 1
        b += 1
    return tuple(positions)


def best_subsets(table: np.ndarray, n: int, k: int) -> list:
    """
    Best subset of size at most k' for every k' <= k

    Ties go to the lexicographically smallest position tuple.

    Args:
        table: output of subset_volume_table for n points
        n: number of points
        k: largest subset size

    Returns:
        list: (value, positions) for k' = 0..k
    """
    counts = popcounts(n)
    exact_best = []
    for size in range(min(k, n) + 1):
        masks = np.flatnonzero(counts == size)
        values = table[masks]
        top = _scalar(values.max())
        winners = masks[values == top]
        positions = min(mask_positions(int(m)) for m in winners)
        exact_best.append((top, positions))

    result = []
    best = None
    for size in range(k + 1):
        if size < len(exact_best):
            candidate = exact_best[size]
            if best is None or candidate[0] > best[0] or (candidate[0] == best[0] and candidate[1] < best[1]):
                best = candidate
        result.append(best)
    return result
