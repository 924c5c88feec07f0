"""
Hypervolume Engines

Volume of the union of anchored boxes [0, p] for a point set:
1. Inclusion-exclusion over all nonempty subsets (test oracle, small sets)
2. Sweep: staircase for d = 2, incremental staircase for d = 3,
   last-dimension sweep for d >= 4
3. Monte Carlo coverage estimator (float mode)
4. Contribution of one point to a set

Arithmetic follows the coordinates: exact-mode sets give Python ints,
float-mode sets give floats. Events are processed in sorted order so float
results do not vary between runs.
"""

import logging
import math
from bisect import bisect_left, bisect_right
from typing import Sequence

import numpy as np

from volsel.config import get_settings
from volsel.constants import (
    ERR_DIMENSION_MISMATCH,
    ERR_ESTIMATE_PARAMS,
    ERR_FLOAT_ONLY,
    ERR_IE_LIMIT,
)
from volsel.doctype.point_set.point_set import Point, PointSet
from volsel.exceptions import BudgetExceededError, DimensionMismatchError, InvalidParameterError, ModeError

logger = logging.getLogger(__name__)

# Samples per chunk of the coverage count, bounds the (chunk, n, d) comparison array
ESTIMATE_CHUNK_CELLS = 1 << 22


def _area_2d(points: Sequence[Point]):
    area = 0
    top = 0
    for x, y in sorted(points, key=lambda p: (-p[0], -p[1])):
        if y > top:
            area += x * (y - top)
            top = y
    return area


class _Staircase:
    """Non-dominated (x, y) pairs, x ascending and y descending, with their area"""

    def __init__(self):
        self.xs = []
        self.ys = []
        self.area = 0

    def insert(self, x, y):
        xs, ys = self.xs, self.ys
        right = bisect_left(xs, x)
        if right < len(xs) and ys[right] >= y:
            return 0

        hi = bisect_right(xs, x)
        lo = hi
        while lo > 0 and ys[lo - 1] <= y:
            lo -= 1

        gain = 0
        bound = x
        height = ys[hi] if hi < len(xs) else 0
        for i in range(hi - 1, lo - 1, -1):
            gain += (bound - xs[i]) * (y - height)
            bound = xs[i]
            height = ys[i]
        left = xs[lo - 1] if lo > 0 else 0
        gain += (bound - left) * (y - height)

        xs[lo:hi] = [x]
        ys[lo:hi] = [y]
        self.area += gain
        return gain


def _volume_3d(points: Sequence[Point]):
    ordered = sorted(points, key=lambda p: (-p[2], -p[0], -p[1]))
    stairs = _Staircase()
    volume = 0
    for i, (x, y, z) in enumerate(ordered):
        if i:
            volume += stairs.area * (ordered[i - 1][2] - z)
        stairs.insert(x, y)
    if ordered:
        volume += stairs.area * ordered[-1][2]
    return volume


def _sweep_last(points: Sequence[Point], d: int):
    ordered = sorted(points, key=lambda p: tuple(-c for c in reversed(p)))
    volume = 0
    active = []
    i = 0
    while i < len(ordered):
        z = ordered[i][-1]
        while i < len(ordered) and ordered[i][-1] == z:
            active.append(ordered[i][:-1])
            i += 1
        below = ordered[i][-1] if i < len(ordered) else 0
        volume += _volume(active, d - 1) * (z - below)
    return volume


def _volume(points: Sequence[Point], d: int):
    """Union volume of raw coordinate tuples"""
    if not points:
        return 0
    if d == 1:
        return max(p[0] for p in points)
    if d == 2:
        return _area_2d(points)
    if d == 3:
        return _volume_3d(points)
    return _sweep_last(points, d)


def _contribution(points: Sequence[Point], p: Point, d: int):
    """Volume box(p) adds to the union of the given boxes"""
    clipped = []
    for q in points:
        if all(a >= b for a, b in zip(q, p)):
            return 0
        clipped.append(tuple(min(a, b) for a, b in zip(q, p)))
    return math.prod(p) - _volume(clipped, d)


def _as_mode(points: PointSet, value):
    return value if points.is_exact else float(value)


def hv_sweep(points: PointSet):
    """
    Exact union volume by dimension sweep

    Args:
        points: point set of any dimension

    Returns:
        int | float: the volume, an int in exact mode
    """
    return _as_mode(points, _volume(points.points, points.dimension))


def hv_inclusion_exclusion(points: PointSet, limit: int | None = None):
    """
    Union volume as the signed sum over all nonempty subsets T of the
    volume of the box spanned by the componentwise minimum of T

    Args:
        points: point set with at most `limit` points
        limit: size limit, defaults to settings.ie_limit

    Returns:
        int | float: the volume

    Raises:
        BudgetExceededError: more points than the limit
    """
    if limit is None:
        limit = get_settings().ie_limit
    n = len(points)
    if n > limit:
        raise BudgetExceededError(ERR_IE_LIMIT.format(limit=limit, n=n))

    pts = points.points
    total = 0

    def visit(start: int, corner: Point | None, size: int):
        nonlocal total
        for i in range(start, n):
            if corner is None:
                child = pts[i]
            else:
                child = tuple(min(a, b) for a, b in zip(corner, pts[i]))
            term = math.prod(child)
            total += term if size % 2 == 0 else -term
            visit(i + 1, child, size + 1)

    visit(0, None, 0)
    return _as_mode(points, total)


def estimate_sample_count(n: int, eps: float, delta: float, constant: float | None = None) -> int:
    """Samples drawn by hv_estimate: ceil(c * n * ln(2/delta) / eps^2)"""
    if constant is None:
        constant = get_settings().mc_constant
    return math.ceil(constant * n * math.log(2 / delta) / eps**2)


def hv_estimate(
    points: PointSet,
    eps: float,
    delta: float,
    seed: int | None = None,
    rng: np.random.Generator | None = None,
    constant: float | None = None,
) -> float:
    """
    Monte Carlo (1 +/- eps) estimate of the union volume

    Picks a box with probability proportional to its volume, a uniform point
    inside it, and counts the boxes containing that point. The estimate is the
    total box volume times the mean reciprocal count.

    Args:
        points: float-mode point set
        eps: relative error, > 0
        delta: failure probability, in (0, 1)
        seed: seed for a fresh generator when rng is not given
        rng: explicit random source
        constant: sample-count constant c, defaults to settings.mc_constant

    Returns:
        float: the estimate
    """
    if points.is_exact:
        raise ModeError(ERR_FLOAT_ONLY.format(operation="hv_estimate"))
    if not (eps > 0 and 0 < delta < 1):
        raise InvalidParameterError(ERR_ESTIMATE_PARAMS.format(eps=eps, delta=delta))

    n = len(points)
    if n == 0:
        return 0.0

    if rng is None:
        rng = np.random.default_rng(seed)

    corners = points.as_array()
    volumes = corners.prod(axis=1)
    total = float(volumes.sum())
    if n == 1:
        return total

    samples = estimate_sample_count(n, eps, delta, constant)
    chunk = max(1, ESTIMATE_CHUNK_CELLS // (n * points.dimension))
    logger.debug(f"hv_estimate: n={n} samples={samples} chunk={chunk}")

    reciprocal_sum = 0.0
    probabilities = volumes / total
    drawn = 0
    while drawn < samples:
        size = min(chunk, samples - drawn)
        boxes = rng.choice(n, size=size, p=probabilities)
        sample = rng.random((size, points.dimension)) * corners[boxes]
        counts = (sample[:, None, :] <= corners[None, :, :]).all(axis=2).sum(axis=1)
        reciprocal_sum += float((1.0 / counts).sum())
        drawn += size

    return total * reciprocal_sum / samples


def hv_contribution(points: PointSet, p: Sequence):
    """
    Volume that box(p) adds to the union of `points`

    Computed as vol(box(p)) minus the union volume of the boxes clipped to box(p).

    Returns:
        int | float: 0 when some point of the set dominates p
    """
    if len(p) != points.dimension:
        raise DimensionMismatchError(ERR_DIMENSION_MISMATCH.format(expected=points.dimension, got=len(p)))
    return _as_mode(points, _contribution(points.points, tuple(p), points.dimension))
