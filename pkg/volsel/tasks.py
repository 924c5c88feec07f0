"""
Long-running jobs for volsel

These jobs back the `verify lemmas` and `bench` commands:
- Lemma suites for the approximation scheme (boundary removal, rounding,
  independence of cells, combined cells), checked against brute force
- Lemma suites for the hardness construction (all of P_m is needed,
  overlapping Q points lose volume)
- Solver runs and the benchmark table
"""

import itertools
import logging
import time
from typing import Sequence

import numpy as np

from volsel.api.eptas import (
    classify,
    evaluate_offset,
    grid_params,
    offset_survivors,
    region_index,
    round_exponents,
    rounded_points,
)
from volsel.api.exact import brute_force_feasible, volsel_brute
from volsel.api.geometry import read_points
from volsel.api.hardness import (
    check_lemma_all_p,
    lattice,
    lattice_adjacent,
    neighbour_gains,
    reduction_deficit,
)
from volsel.api.hypervolume import hv_sweep
from volsel.config import get_settings
from volsel.constants import (
    ALGO_BRUTE,
    ALGO_EPTAS,
    MODE_FLOAT,
    SUITE_ALL_P,
    SUITE_BOUNDARY,
    SUITE_INDEPENDENCE,
    SUITE_INDEPENDENCE_II,
    SUITE_REDUCTION,
    SUITE_ROUNDING,
    VERIFY_SCHEMA_VERSION,
)
from volsel.doctype.point_set.point_set import PointSet
from volsel.doctype.run_record.run_record import RunRecord
from volsel.utils import get_hook

logger = logging.getLogger(__name__)

# relative slack for float comparisons in the suites
SLACK = 1e-9


def _report(suite: str, checks: list, **details) -> dict:
    failed = sum(1 for c in checks if not c["ok"])
    if failed:
        logger.warning(f"{suite}: {failed} of {len(checks)} checks failed")
    else:
        logger.info(f"{suite}: all {len(checks)} checks passed")
    return {
        "schema_version": VERIFY_SCHEMA_VERSION,
        "suite": suite,
        "checks": checks,
        "passed": len(checks) - failed,
        "failed": failed,
        "ok": failed == 0,
        **details,
    }


def _at_most(a, b) -> bool:
    return a <= b * (1 + SLACK)


def _random_points(rng: np.random.Generator, n: int, d: int, params, cells: int = 2) -> PointSet:
    """n points with log-uniform coordinates spanning about `cells` grid cells per axis"""
    top = cells * params.tau * params.j * params.log_beta
    rows = np.exp(rng.uniform(0.0, top, size=(n, d)))
    return PointSet.from_rows(rows.tolist())


def _opt(points: PointSet, k: int):
    if not len(points):
        return 0.0
    return volsel_brute(points, min(k, len(points))).value


def check_boundary_lemma(trials: int = 20, seed: int = 0, n: int = 8, d: int = 2, k: int = 3,
                         eps: float = 0.5, m: int | None = None) -> dict:
    """
    Removing the boundary regions of one offset never helps, and some offset
    keeps at least (1 - eps) of the optimum
    """
    params = grid_params(d, eps)
    rng = np.random.default_rng(seed)
    offsets = list(itertools.product(range(1, params.tau + 1), repeat=d))
    checks = []

    for trial in range(trials):
        points = _random_points(rng, n, d, params)
        opt = _opt(points, k)
        values = {}
        upper_ok = True
        for offset in offsets:
            survivors = offset_survivors(points, offset, params)
            key = survivors.origin
            if key not in values:
                values[key] = _opt(survivors, k)
            upper_ok = upper_ok and _at_most(values[key], opt)
        best = max(values.values())
        lower_ok = _at_most((1 - eps) * opt, best)
        checks.append({
            "trial": trial,
            "opt": opt,
            "best_offset_value": best,
            "offsets": len(offsets),
            "upper_ok": upper_ok,
            "lower_ok": lower_ok,
            "ok": upper_ok and lower_ok,
        })

    return _report(SUITE_BOUNDARY, checks, eps=eps, d=d, n=n, k=k)


def check_rounding_lemma(trials: int = 20, seed: int = 0, n: int = 8, d: int = 2, k: int = 3,
                         eps: float = 0.5, m: int | None = None) -> dict:
    """(1 - eps) VolSel(P, k) <= VolSel(rounded P, k) <= VolSel(P, k)"""
    params = grid_params(d, eps)
    rng = np.random.default_rng(seed)
    checks = []

    for trial in range(trials):
        points = _random_points(rng, n, d, params)
        opt = _opt(points, k)
        rounded = _opt(rounded_points(points, params), k)
        ok = _at_most((1 - eps) * opt, rounded) and _at_most(rounded, opt)
        checks.append({"trial": trial, "opt": opt, "rounded_opt": rounded, "ok": ok})

    return _report(SUITE_ROUNDING, checks, eps=eps, d=d, n=n, k=k)


def _cell_points(rng: np.random.Generator, key: Sequence[int], offset: Sequence[int], size: int, params) -> list:
    """Points strictly inside cell `key`: region x_i - l_i in [tau y_i + 1, tau y_i + tau - 1]"""
    rows = []
    for _ in range(size):
        row = []
        for y, l in zip(key, offset):
            low = params.j * (params.tau * y + l + 1)
            high = params.j * (params.tau * y + l + params.tau)
            row.append(params.power(rng.uniform(low + 0.01, high - 0.01)))
        rows.append(tuple(row))
    return rows


def check_independence_lemma(trials: int = 20, seed: int = 0, n: int = 8, d: int = 2, k: int = 3,
                             eps: float = 0.5, m: int | None = None) -> dict:
    """Sets S_1..S_m in distinct cells: (1 - eps) sum mu(S_i) <= mu(union) <= sum mu(S_i)"""
    params = grid_params(d, eps)
    rng = np.random.default_rng(seed)
    keys = list(itertools.product(range(2), repeat=d))
    checks = []

    for trial in range(trials):
        offset = tuple(int(v) for v in rng.integers(1, params.tau + 1, size=d))
        count = int(rng.integers(2, len(keys) + 1))
        chosen = [keys[i] for i in sorted(rng.choice(len(keys), size=count, replace=False))]
        groups = [_cell_points(rng, key, offset, int(rng.integers(1, 4)), params) for key in chosen]

        placed = all(
            classify(tuple(region_index(int(s), params) for s in row), offset, params) == key
            for key, group in zip(chosen, groups)
            for row in round_exponents(PointSet.from_rows(group), params)
        )
        parts = sum(hv_sweep(PointSet.from_rows(group)) for group in groups)
        union = hv_sweep(PointSet.from_rows([row for group in groups for row in group]))
        ok = placed and _at_most((1 - eps) * parts, union) and _at_most(union, parts)
        checks.append({
            "trial": trial,
            "offset": list(offset),
            "cells": [list(key) for key in chosen],
            "sum_of_cells": parts,
            "union": union,
            "placed_ok": placed,
            "ok": ok,
        })

    return _report(SUITE_INDEPENDENCE, checks, eps=eps, d=d, k=k)


def check_combined_independence_lemma(trials: int = 20, seed: int = 0, n: int = 8, d: int = 2, k: int = 3,
                                      eps: float = 0.5, m: int | None = None) -> dict:
    """(1 - eps) V(l) <= VolSel(union of rounded cells, k) <= V(l)"""
    params = grid_params(d, eps)
    rng = np.random.default_rng(seed)
    checks = []

    for trial in range(trials):
        points = _random_points(rng, n, d, params)
        offset = tuple(int(v) for v in rng.integers(1, params.tau + 1, size=d))
        combined, rows = evaluate_offset(points, k, offset, params)
        cell_points = [e for row in rows.values() for e in row.cell]
        union = PointSet.from_rows([e.materialize(params) for e in cell_points], dimension=d)
        opt = _opt(union, k)
        ok = _at_most((1 - eps) * combined.value, opt) and _at_most(opt, combined.value)
        checks.append({
            "trial": trial,
            "offset": list(offset),
            "cells": len(rows),
            "combined_value": combined.value,
            "union_opt": opt,
            "ok": ok,
        })

    return _report(SUITE_INDEPENDENCE_II, checks, eps=eps, d=d, n=n, k=k)


def check_all_p_lemma(trials: int = 20, seed: int = 0, n: int = 8, d: int = 3, k: int = 3,
                      eps: float = 0.5, m: int | None = None) -> dict:
    """
    Dropping any p from P_m loses more than all of Q_m regains, and the Q_m
    gains over P_m - {p} follow the neighbour rings of p
    """
    checks = []
    for size in ([m] if m else range(4, 9)):
        for entry in check_lemma_all_p(size):
            p = tuple(entry["removed"])
            gains = neighbour_gains(size, p)
            rings_ok = all(g["gain"] == g["expected"] for g in gains)
            checks.append({
                "m": size,
                "removed": list(p),
                "volume": entry["volume"],
                "bound": entry["bound"],
                "deficit": entry["bound"] - entry["volume"],
                "rings_ok": rings_ok,
                "ok": entry["holds"] and rings_ok,
            })
    return _report(SUITE_ALL_P, checks)


def check_reduction_lemma(trials: int = 20, seed: int = 0, n: int = 8, d: int = 3, k: int = 3,
                          eps: float = 0.5, m: int | None = None) -> dict:
    """
    Random Q' in Q_m: no deficit when Q' is independent in T_m, a positive
    integer deficit otherwise
    """
    size = m or 7
    rng = np.random.default_rng(seed)
    triples = lattice(size - 1)
    checks = []

    for trial in range(trials):
        count = int(rng.integers(2, min(5, len(triples)) + 1))
        chosen = [triples[i] for i in sorted(rng.choice(len(triples), size=count, replace=False))]
        independent = not any(lattice_adjacent(a, b) for a, b in itertools.combinations(chosen, 2))
        deficit = reduction_deficit(size, chosen)
        ok = deficit == 0 if independent else deficit >= 1
        checks.append({
            "trial": trial,
            "m": size,
            "lattice_points": [list(t) for t in chosen],
            "independent": independent,
            "deficit": deficit,
            "ok": ok,
        })

    return _report(SUITE_REDUCTION, checks, m=size)


def run_suite(which: str, **options) -> dict:
    """Run one verification suite from hooks.verify_suites"""
    return get_hook("verify_suites", which)(**options)


def run_solver(
    algorithm: str,
    points: PointSet,
    k: int,
    eps: float | None = None,
    cap: int | None = None,
    fallback: str | None = None,
    seed: int | None = None,
) -> RunRecord:
    """
    Run one registered solver and wrap the result as a RunRecord

    Args:
        algorithm: key of hooks.solvers
        points: input point set
        k: selection budget
        eps: precision for eptas
        cap: eptas cell cap
        fallback: eptas policy for capped cells
        seed: recorded with the run
    """
    solver = get_hook("solvers", algorithm)
    started = time.perf_counter()
    extra, fallback_events = {}, None

    if algorithm == ALGO_EPTAS:
        result = solver(points, k, eps if eps is not None else 0.5, cap=cap, fallback=fallback)
        solution = result.solution
        extra = result.summary()
        fallback_events = result.fallback_events
        eps = result.user_eps
    else:
        solution = solver(points, k)
        eps = None

    return RunRecord.from_solution(
        solution,
        n=len(points),
        d=points.dimension,
        k=k,
        eps=eps,
        elapsed_ms=(time.perf_counter() - started) * 1000,
        seed=seed,
        fallback_events=fallback_events,
        extra=extra,
    )


def run_benchmark(
    files: Sequence[str],
    algorithms: Sequence[str],
    ks: Sequence[int],
    eps: float = 0.5,
    mode: str = MODE_FLOAT,
    cap: int | None = None,
    fallback: str | None = None,
    seed: int | None = None,
) -> list:
    """
    Every algorithm on every file for every k

    Brute-force runs over the budget are skipped. Each row's ratio is its
    value over the best value seen for the same file and k.

    Returns:
        list: (file, RunRecord, ratio) in file, k, algorithm order
    """
    settings = get_settings()
    rows = []
    for path in files:
        points = read_points(path, mode=mode)
        for k in ks:
            group = []
            for algorithm in algorithms:
                if algorithm == ALGO_BRUTE and not brute_force_feasible(len(points), k, settings.brute_budget):
                    logger.info(f"Skipping brute force on {path} for k={k}: over budget")
                    continue
                group.append(run_solver(algorithm, points, k, eps, cap, fallback, seed))
            best = max((record.value for record in group), default=0)
            for record in group:
                ratio = record.value / best if best > 0 else 1.0
                rows.append((str(path), record, ratio))
    return rows
