"""
Grid-Shifting Approximation Scheme

For eps in (0, 1/2] returns a selection of at most k points whose volume is
at least (1 - eps) times the optimum. With eps' = eps / 5:

1. For every offset l in [tau]^d, drop the points lying in boundary regions
2. Group the remaining points by grid cell
3. Round coordinates down to powers of beta = (1 - eps')^(-1/d), remove
   duplicates and dominated rounded points per cell
4. Solve every cell exactly for all budgets k' <= k (H table)
5. Combine the cells by a multiple-choice knapsack program (T table)
6. Keep the offset with the largest combined value and map the chosen
   rounded points back to original points

All grid logic runs on integer exponents: a coordinate c is represented by
s = floor(log_beta c), regions are R(x) with x = floor(s / j) where
lambda = beta^j, and cells are blocks of (tau - 1)^d regions. Coordinates are
materialized as beta^s only inside volume computations.
"""

import itertools
import logging
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from volsel.api.exact import check_k
from volsel.api.greedy import greedy_sequence
from volsel.api.hypervolume import hv_sweep
from volsel.api.subsets import best_subsets, subset_volume_table
from volsel.config import get_settings
from volsel.constants import (
    ALGO_EPTAS,
    ERR_CELL_CAP,
    ERR_DP_BUDGET,
    ERR_EPS_RANGE,
    ERR_FALLBACK,
    FALLBACK_ERROR,
    FALLBACK_POLICIES,
    MSG_CELL_FALLBACK,
    MSG_EPTAS_SUMMARY,
    MSG_SOLVER_DONE,
)
from volsel.doctype.point_set.point_set import PointSet, as_float
from volsel.doctype.solution.solution import Guarantee, Solution
from volsel.exceptions import BudgetExceededError, CellCapExceededError, InvalidParameterError

logger = logging.getLogger(__name__)

# log_beta(c) this close to an integer is settled by exact comparison
ROUNDING_SLACK = 1e-6
# coordinates this close (relative) to a materialized power are that power
POWER_SNAP = 1e-10

Offset = tuple  # (l_1, ..., l_d), each in 1..tau
CellKey = tuple  # (y_1, ..., y_d)
BOUNDARY = None


def _fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    # decimal text of the float, so 0.1 is 1/10
    return Fraction(repr(float(value)))


@dataclass(frozen=True)
class GridParams:
    d: int
    eps: Fraction
    tau: int
    j: int

    @property
    def ratio(self) -> Fraction:
        """beta^d = 1 / (1 - eps)"""
        return 1 / (1 - self.eps)

    @property
    def log_beta(self) -> float:
        return -math.log1p(-float(self.eps)) / self.d

    @property
    def beta(self) -> float:
        return math.exp(self.log_beta)

    @property
    def lam(self) -> float:
        return math.exp(self.j * self.log_beta)

    def power(self, s: int) -> float:
        """beta^s as a float"""
        return math.exp(s * self.log_beta)

    def to_dict(self) -> dict:
        return {"d": self.d, "eps": float(self.eps), "tau": self.tau, "j": self.j, "beta": self.beta}


def grid_params(d: int, eps_internal) -> GridParams:
    """
    Grid constants for dimension d and internal precision eps'

    tau is the smallest integer above d/eps'; j is the smallest integer with
    beta^j > d/eps', decided exactly as (1/(1-eps'))^j > (d/eps')^d.

    Args:
        d: dimension, >= 1
        eps_internal: eps' in (0, 1/2], a float or Fraction

    Returns:
        GridParams: the constants
    """
    if d < 1:
        raise InvalidParameterError(f"Dimension must be at least 1, got {d}")
    eps = _fraction(eps_internal)
    if not 0 < eps <= Fraction(1, 2):
        raise InvalidParameterError(ERR_EPS_RANGE.format(eps=eps_internal))

    threshold = Fraction(d) / eps
    tau = math.floor(threshold) + 1

    target = threshold**d
    ratio = 1 / (1 - eps)
    j, power = 0, Fraction(1)
    while power <= target:
        power *= ratio
        j += 1

    return GridParams(d=d, eps=eps, tau=tau, j=j)


@lru_cache(maxsize=4096)
def _ratio_power(ratio: Fraction, s: int) -> Fraction:
    return ratio**s


def round_exponent(coord: float, params: GridParams) -> int:
    """
    s = floor(log_beta coord), the integer with beta^s <= coord < beta^(s+1)

    Near-integer logarithms are settled exactly on beta^(s d) = ratio^s
    against coord^d; a coordinate equal to a materialized power maps to it.
    """
    t = math.log(coord) / params.log_beta
    s = round(t)
    if abs(t - s) > ROUNDING_SLACK:
        return math.floor(t)
    if math.isclose(coord, params.power(s), rel_tol=POWER_SNAP):
        return s

    scaled = Fraction(coord) ** params.d
    for _ in range(2):
        if _ratio_power(params.ratio, s) > scaled:
            s -= 1
        elif _ratio_power(params.ratio, s + 1) <= scaled:
            s += 1
        else:
            break
    return s


def round_exponents(points: PointSet, params: GridParams) -> np.ndarray:
    """Exponent vectors of all points as an (n, d) int64 array"""
    if not len(points):
        return np.empty((0, points.dimension), dtype=np.int64)
    t = np.log(points.as_array()) / params.log_beta
    nearest = np.rint(t)
    exps = np.floor(t).astype(np.int64)
    for i, c in zip(*np.nonzero(np.abs(t - nearest) <= ROUNDING_SLACK)):
        exps[i, c] = round_exponent(float(points[i][c]), params)
    return exps


def region_index(s: int, params: GridParams) -> int:
    """Region coordinate x = floor(s / j), rounding toward -infinity"""
    return s // params.j


def classify(regions: Sequence[int], offset: Offset, params: GridParams):
    """
    Cell of a region vector under an offset

    Returns:
        CellKey | None: None (BOUNDARY) when x_i = l_i (mod tau) for some i,
        otherwise y with y_i = floor((x_i - l_i) / tau)
    """
    tau = params.tau
    key = []
    for x, l in zip(regions, offset):
        if (x - l) % tau == 0:
            return BOUNDARY
        key.append((x - l) // tau)
    return tuple(key)


@dataclass(frozen=True)
class ExponentPoint:
    exps: tuple
    origin: int  # position in the input point set

    def materialize(self, params: GridParams) -> tuple:
        return tuple(params.power(s) for s in self.exps)


def _prune(candidates: Iterable[ExponentPoint]) -> list:
    """Drop duplicate and dominated exponent vectors, the lowest origin survives"""
    ordered = sorted(candidates, key=lambda e: (tuple(-s for s in e.exps), e.origin))
    kept = []
    for e in ordered:
        if any(all(a >= b for a, b in zip(other.exps, e.exps)) for other in kept):
            continue
        kept.append(e)
    return sorted(kept, key=lambda e: (e.exps, e.origin))


def partition(points: PointSet, offset: Offset, params: GridParams) -> dict:
    """
    Drop boundary points, round and group the rest by cell

    Args:
        points: input point set
        offset: l in [tau]^d
        params: grid constants

    Returns:
        dict: CellKey -> pruned list of ExponentPoint, keys in sorted order
    """
    cells = {}
    exps = round_exponents(as_float(points), params)
    for position, row in enumerate(exps):
        s = tuple(int(v) for v in row)
        key = classify(tuple(region_index(v, params) for v in s), offset, params)
        if key is BOUNDARY:
            continue
        cells.setdefault(key, []).append(ExponentPoint(s, position))
    return {key: _prune(cells[key]) for key in sorted(cells)}


def offset_survivors(points: PointSet, offset: Offset, params: GridParams) -> PointSet:
    """Original points of P that lie inside some cell for this offset"""
    exps = round_exponents(as_float(points), params)
    keep = [
        position
        for position, row in enumerate(exps)
        if classify(tuple(int(v) // params.j for v in row), offset, params) is not BOUNDARY
    ]
    return points.subset(keep)


def rounded_points(points: PointSet, params: GridParams) -> PointSet:
    """Every point with its coordinates rounded down to powers of beta"""
    exps = round_exponents(as_float(points), params)
    rows = [tuple(params.power(int(s)) for s in row) for row in exps]
    return PointSet(dimension=points.dimension, points=tuple(rows), origin=as_float(points).origin)


@dataclass
class CellSolutions:
    """One cell's row of the H table: values[k'] = VolSel(cell, k') with witnesses"""

    cell: list
    values: list
    witnesses: list
    exact: bool = True

    def witness_origins(self, budget: int) -> list:
        return [self.cell[p].origin for p in self.witnesses[budget]]


def solve_cell_exact(
    cell: Sequence[ExponentPoint],
    k: int,
    params: GridParams,
    cap: int | None = None,
    policy: str | None = None,
) -> CellSolutions:
    """
    H row of one cell for all k' <= min(k, |cell|)

    Args:
        cell: pruned exponent points of the cell
        k: selection budget
        params: grid constants used to materialize beta^s
        cap: largest cell solved exhaustively, defaults to settings.cell_cap
        policy: "error" or "greedy" for cells above the cap

    Returns:
        CellSolutions: the row; exact=False when filled by greedy

    Raises:
        CellCapExceededError: cell above the cap under policy "error"
    """
    settings = get_settings()
    cap = settings.cell_cap if cap is None else cap
    policy = settings.fallback if policy is None else policy
    if policy not in FALLBACK_POLICIES:
        raise InvalidParameterError(ERR_FALLBACK.format(policy=policy))

    cell = list(cell)
    size = len(cell)
    kmax = min(k, size)
    if kmax == 0:
        return CellSolutions(cell=cell, values=[0.0], witnesses=[()])

    materialized = PointSet(dimension=params.d, points=tuple(e.materialize(params) for e in cell))

    if size <= cap:
        table = subset_volume_table(materialized, limit=max(cap, 1))
        best = best_subsets(table, size, kmax)
        return CellSolutions(
            cell=cell,
            values=[value for value, _ in best],
            witnesses=[positions for _, positions in best],
        )

    if policy == FALLBACK_ERROR:
        raise CellCapExceededError(ERR_CELL_CAP.format(size=size, cap=cap), size=size, cap=cap)

    logger.warning(MSG_CELL_FALLBACK.format(size=size, cap=cap))
    chosen, gains = greedy_sequence(materialized, kmax)
    values, witnesses = [0.0], [()]
    for budget in range(1, kmax + 1):
        if budget <= len(chosen):
            values.append(values[-1] + gains[budget - 1])
            witnesses.append(tuple(sorted(chosen[:budget])))
        else:
            values.append(values[-1])
            witnesses.append(witnesses[-1])
    return CellSolutions(cell=cell, values=values, witnesses=witnesses, exact=False)


@dataclass
class CombineTable:
    """kappa choices per cell and budget, V = T[m][k] and the recovered allocation"""

    choices: list
    value: float
    allocation: list


def combine_dp(rows: Sequence[CellSolutions], k: int, budget: int | None = None) -> CombineTable:
    """
    V = max over k_1 + ... + k_m <= k of sum H[i][k_i]

    T[i][k'] = max over kappa <= min(k', |cell i|) of H[i][kappa] + T[i-1][k'-kappa];
    each step keeps the smallest maximizing kappa.

    Args:
        rows: H rows of the cells, in combine order
        k: total budget
        budget: limit on sum of row lengths times (k + 1), defaults to settings.dp_cell_budget

    Returns:
        CombineTable: T, kappa choices, V = T[m][k] and per-cell k_i
    """
    if budget is None:
        budget = get_settings().dp_cell_budget
    cost = sum(len(row.values) for row in rows) * (k + 1)
    if cost > budget:
        raise BudgetExceededError(ERR_DP_BUDGET.format(cost=cost, budget=budget))

    previous = [0.0] * (k + 1)
    choices = [[0] * (k + 1)]
    for row in rows:
        current = [0.0] * (k + 1)
        choice = [0] * (k + 1)
        for budget_left in range(k + 1):
            top, arg = None, 0
            for kappa in range(min(budget_left, len(row.values) - 1) + 1):
                value = row.values[kappa] + previous[budget_left - kappa]
                if top is None or value > top:
                    top, arg = value, kappa
            current[budget_left] = top
            choice[budget_left] = arg
        previous = current
        choices.append(choice)

    allocation = [0] * len(rows)
    budget_left = k
    for i in range(len(rows), 0, -1):
        allocation[i - 1] = choices[i][budget_left]
        budget_left -= allocation[i - 1]

    return CombineTable(choices=choices, value=previous[k], allocation=allocation)


def evaluate_offset(
    points: PointSet,
    k: int,
    offset: Offset,
    params: GridParams,
    cap: int | None = None,
    policy: str | None = None,
) -> tuple:
    """
    V(l) for one offset: partition, solve every cell, combine

    Returns:
        tuple: (CombineTable, {CellKey: CellSolutions})
    """
    cells = partition(points, offset, params)
    rows = {key: solve_cell_exact(cell, k, params, cap, policy) for key, cell in cells.items()}
    return combine_dp(list(rows.values()), k), rows


@dataclass
class EptasResult:
    solution: Solution
    chosen_offset: Offset
    reported_value: float
    user_eps: float
    internal_eps: float
    fallback_events: int
    params: GridParams
    allocation: list = field(default_factory=list)
    offsets_evaluated: int = 0
    offset_classes: int = 0
    distinct_partitions: int = 0
    cells_solved: int = 0
    max_cell_size: int = 0

    def summary(self) -> dict:
        """Extra fields for the run record"""
        return {
            "chosen_offset": list(self.chosen_offset),
            "reported_value": self.reported_value,
            "internal_eps": self.internal_eps,
            "offsets_evaluated": self.offsets_evaluated,
            "offset_classes": self.offset_classes,
            "distinct_partitions": self.distinct_partitions,
            "cells_solved": self.cells_solved,
            "max_cell_size": self.max_cell_size,
            "grid": self.params.to_dict(),
        }


def _offset_classes(values: Sequence[int], tau: int) -> list:
    """
    Group the offsets 1..tau of one dimension by the partition they induce
    on the occupied region coordinates

    Returns:
        list: (smallest offset, number of offsets, {x: y or BOUNDARY}) sorted by offset
    """
    classes = {}
    for l in range(1, tau + 1):
        lookup = {}
        labels = []
        for x in values:
            if (x - l) % tau == 0:
                lookup[x] = BOUNDARY
                labels.append(None)
            else:
                lookup[x] = (x - l) // tau
                labels.append(lookup[x])
        # relabel cells by first appearance so equivalent groupings compare equal
        ranks = {}
        signature = tuple(None if y is None else ranks.setdefault(y, len(ranks)) for y in labels)
        if signature in classes:
            classes[signature][1] += 1
        else:
            classes[signature] = [l, 1, lookup]
    return sorted((tuple(entry) for entry in classes.values()), key=lambda entry: entry[0])


class _CellCache:
    """H rows keyed by the set of regions forming a cell"""

    def __init__(self, fronts: dict, k: int, params: GridParams, cap: int, policy: str):
        self.fronts = fronts
        self.k = k
        self.params = params
        self.cap = cap
        self.policy = policy
        self.rows = {}
        self.fallback_events = 0
        self.max_cell_size = 0

    def row(self, regions: tuple) -> CellSolutions:
        if regions not in self.rows:
            cell = _prune(e for region in regions for e in self.fronts[region])
            self.max_cell_size = max(self.max_cell_size, len(cell))
            row = solve_cell_exact(cell, self.k, self.params, self.cap, self.policy)
            if not row.exact:
                self.fallback_events += 1
            logger.debug(f"Cell of {len(regions)} regions: {len(cell)} points")
            self.rows[regions] = row
        return self.rows[regions]


def eptas_solve(
    points: PointSet,
    k: int,
    eps_user: float,
    cap: int | None = None,
    fallback: str | None = None,
    settings=None,
) -> EptasResult:
    """
    (1 - eps)-approximation of VolSel(P, k) by grid shifting

    Offsets inducing the same grouping of the occupied regions give the same
    cells, so each such class is evaluated once at its smallest offset, and
    identical cells share one H row.

    Args:
        points: input point set (exact-mode sets are converted to float)
        k: selection budget, 0 <= k <= n
        eps_user: eps in (0, 1/2]
        cap: largest cell solved exhaustively, defaults to settings.cell_cap
        fallback: "error" or "greedy" for cells above the cap
        settings: VolselSettings, defaults to get_settings()

    Returns:
        EptasResult: selection, chosen offset, reported value and run statistics

    Raises:
        CellCapExceededError: a cell exceeds the cap under fallback "error"
    """
    settings = settings or get_settings()
    cap = settings.cell_cap if cap is None else cap
    fallback = settings.fallback if fallback is None else fallback
    if fallback not in FALLBACK_POLICIES:
        raise InvalidParameterError(ERR_FALLBACK.format(policy=fallback))
    if isinstance(eps_user, bool) or not 0 < eps_user <= 0.5:
        raise InvalidParameterError(ERR_EPS_RANGE.format(eps=eps_user))
    check_k(points, k)

    started = time.perf_counter()
    source = as_float(points)
    d = source.dimension
    params = grid_params(d, _fraction(eps_user) / settings.eps_divisor)
    internal_eps = float(params.eps)

    exps = round_exponents(source, params)
    regions = exps // params.j

    # rounded and pruned points of every occupied region
    members = {}
    for position in range(len(source)):
        region = tuple(int(x) for x in regions[position])
        members.setdefault(region, []).append(ExponentPoint(tuple(int(s) for s in exps[position]), position))
    fronts = {region: _prune(group) for region, group in members.items()}

    occupied = sorted(fronts)
    per_dimension = [
        _offset_classes(sorted({region[i] for region in occupied}), params.tau) for i in range(d)
    ]

    cache = _CellCache(fronts, k, params, cap, fallback)
    values = {}
    best = None
    classes = 0
    for combo in itertools.product(*per_dimension):
        classes += 1
        offset = tuple(entry[0] for entry in combo)
        cells = {}
        for region in occupied:
            key = []
            for i, x in enumerate(region):
                y = combo[i][2][x]
                if y is BOUNDARY:
                    break
                key.append(y)
            else:
                cells.setdefault(tuple(key), []).append(region)

        signature = tuple(sorted(tuple(group) for group in cells.values()))
        if signature not in values:
            rows = [cache.row(group) for group in signature]
            values[signature] = combine_dp(rows, k, settings.dp_cell_budget)
        combined = values[signature]
        logger.debug(f"offset {offset}: V = {combined.value}")

        if best is None or combined.value > best[1].value:
            best = (offset, combined, signature)

    offset, combined, signature = best
    positions = []
    for group, budget in zip(signature, combined.allocation):
        if budget:
            positions.extend(cache.row(group).witness_origins(budget))
    positions = sorted(positions)

    fallback_events = cache.fallback_events
    guarantee = Guarantee.eptas(eps_user) if fallback_events == 0 else Guarantee.none()
    solution = Solution(
        indices=points.original_indices(positions),
        value=hv_sweep(source.subset(positions)),
        algorithm=ALGO_EPTAS,
        guarantee=guarantee,
    )

    logger.info(MSG_EPTAS_SUMMARY.format(
        offsets=params.tau**d, partitions=len(values), cells=len(cache.rows), fallbacks=fallback_events
    ))
    elapsed = (time.perf_counter() - started) * 1000
    logger.info(MSG_SOLVER_DONE.format(
        algo=ALGO_EPTAS, n=len(points), d=d, k=k, value=solution.value, elapsed=elapsed
    ))

    return EptasResult(
        solution=solution,
        chosen_offset=offset,
        reported_value=combined.value,
        user_eps=eps_user,
        internal_eps=internal_eps,
        fallback_events=fallback_events,
        params=params,
        allocation=combined.allocation,
        offsets_evaluated=params.tau**d,
        offset_classes=classes,
        distinct_partitions=len(values),
        cells_solved=len(cache.rows),
        max_cell_size=cache.max_cell_size,
    )
