import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from tests.conftest import random_points
from volsel.api.eptas import (
    BOUNDARY,
    CellSolutions,
    ExponentPoint,
    _prune,
    classify,
    combine_dp,
    eptas_solve,
    evaluate_offset,
    grid_params,
    partition,
    region_index,
    round_exponent,
    round_exponents,
    rounded_points,
    solve_cell_exact,
)
from volsel.api.exact import volsel_brute, volsel_brute_table
from volsel.api.greedy import volsel_greedy
from volsel.api.hypervolume import hv_sweep
from volsel.constants import FALLBACK_ERROR, FALLBACK_GREEDY, GUARANTEE_EPTAS, GUARANTEE_NONE, MODE_EXACT
from volsel.doctype.point_set.point_set import PointSet
from volsel.exceptions import BudgetExceededError, CellCapExceededError, InvalidParameterError


def test_grid_params_three_dimensions():
    params = grid_params(3, 0.5)
    assert params.tau == 7
    assert params.j == 8
    assert params.beta == pytest.approx(2 ** (1 / 3))
    assert params.lam == pytest.approx(2 ** (8 / 3))


def test_grid_params_strict_boundary():
    # beta^4 = 4 is not above d / eps' = 4
    params = grid_params(2, 0.5)
    assert params.tau == 5
    assert params.j == 5


def test_grid_params_internal_eps():
    params = grid_params(3, Fraction(1, 10))
    assert params.eps == Fraction(1, 10)
    assert params.tau == 31
    assert params.ratio ** (params.j - 1) <= 30**3 < params.ratio**params.j


@pytest.mark.parametrize("eps", [0, -0.1, 0.6])
def test_grid_params_rejects_eps(eps):
    with pytest.raises(InvalidParameterError):
        grid_params(2, eps)


def test_round_exponent_powers():
    params = grid_params(3, 0.5)
    assert round_exponent(1.0, params) == 0
    assert round_exponent(params.power(17), params) == 17
    assert round_exponent(params.power(-3), params) == -3
    assert round_exponent(2.0, params) == 3


def test_round_exponent_just_below_a_power():
    params = grid_params(2, 0.5)
    assert round_exponent(params.power(5) * (1 - 1e-8), params) == 4
    assert round_exponent(params.power(5) * (1 + 1e-8), params) == 5


def test_round_exponent_bounds(rng):
    params = grid_params(3, 0.1)
    for coord in np.exp(rng.uniform(-20, 20, size=200)):
        s = round_exponent(float(coord), params)
        assert params.power(s) <= coord * (1 + 1e-9)
        assert coord < params.power(s + 1) * (1 + 1e-9)


def test_round_exponents_vectorized(rng):
    params = grid_params(2, 0.5)
    rows = np.exp(rng.uniform(0, 10, size=(40, 2))).tolist() + [(params.power(7), 1.0), (2.0, 8.0)]
    points = PointSet.from_rows(rows)
    exps = round_exponents(points, params)
    for i, p in enumerate(points):
        assert exps[i].tolist() == [round_exponent(c, params) for c in p]


@pytest.mark.parametrize("s, x", [(0, 0), (-1, -1), (23, 2), (8, 1), (-8, -1), (-9, -2)])
def test_region_index(s, x):
    assert region_index(s, grid_params(3, 0.5)) == x


@pytest.mark.parametrize(
    "regions, key",
    [((7, 3, 5), BOUNDARY), ((1, 2, 3), (0, 0, 0)), ((8, 9, 13), (1, 1, 1)), ((-1, 2, 3), (-1, 0, 0))],
)
def test_classify(regions, key):
    assert classify(regions, (0, 0, 0), grid_params(3, 0.5)) == key


def test_partition_merges_duplicates():
    params = grid_params(2, 0.5)
    points = PointSet.from_rows([(1, 1), (1, 1)])
    cells = partition(points, (1, 1), params)
    assert list(cells) == [(-1, -1)]
    assert cells[(-1, -1)] == [ExponentPoint((0, 0), 0)]
    assert partition(points, (5, 5), params) == {}


def test_partition_prunes_dominated_rounded_points():
    params = grid_params(2, 0.5)
    # the first two both round to exponents (1, 1), the third to (3, 0)
    points = PointSet.from_rows([(1.5, 1.5), (1.45, 1.42), (2.9, 1.2)])
    cells = partition(points, (1, 1), params)
    assert [e.origin for e in cells[(-1, -1)]] == [0, 2]


def test_cell_single_point():
    params = grid_params(2, 0.5)
    row = solve_cell_exact([ExponentPoint((2, 4), 0)], 3, params)
    assert row.values == [0.0, pytest.approx(params.power(2) * params.power(4))]
    assert row.witnesses == [(), (0,)]
    assert row.exact


def test_cell_chain_is_top_box():
    params = grid_params(2, 0.5)
    chain = [ExponentPoint((s, s), s) for s in range(1, 4)]
    row = solve_cell_exact(chain, 3, params)
    top = params.power(3) ** 2
    assert row.values[1:] == [pytest.approx(top)] * 3


def test_cell_matches_brute(rng):
    params = grid_params(3, 0.5)
    for _ in range(10):
        size = int(rng.integers(1, 13))
        cell = [ExponentPoint(tuple(int(v) for v in rng.integers(0, 12, size=3)), i) for i in range(size)]
        row = solve_cell_exact(cell, 4, params)
        materialized = PointSet.from_rows([e.materialize(params) for e in cell])
        table = volsel_brute_table(materialized, min(4, size))
        assert row.values == pytest.approx([s.value for s in table], rel=1e-9)


def test_cell_cap_policies():
    params = grid_params(2, 0.5)
    cell = [ExponentPoint((s, 6 - s), s) for s in range(7)]
    with pytest.raises(CellCapExceededError) as info:
        solve_cell_exact(cell, 3, params, cap=4, policy=FALLBACK_ERROR)
    assert info.value.size == 7
    assert info.value.cap == 4

    row = solve_cell_exact(cell, 3, params, cap=4, policy=FALLBACK_GREEDY)
    assert not row.exact
    assert len(row.values) == 4
    assert row.values == sorted(row.values)
    assert [len(w) for w in row.witnesses] == [0, 1, 2, 3]


def _row(values):
    return CellSolutions(cell=[None] * (len(values) - 1), values=values, witnesses=[()] * len(values))


def test_combine_single_cell():
    table = combine_dp([_row([0.0, 3.0, 5.0])], 4)
    assert table.value == 5.0
    assert table.allocation == [2]


def test_combine_non_binding_budget():
    table = combine_dp([_row([0.0, 3.0, 5.0]), _row([0.0, 2.0])], 5)
    assert table.value == 7.0
    assert table.allocation == [2, 1]


def test_combine_prefers_smallest_allocation():
    table = combine_dp([_row([0.0, 3.0, 3.0])], 2)
    assert table.allocation == [1]


def test_combine_matches_exhaustive_allocation(rng):
    for _ in range(40):
        rows = []
        for _ in range(int(rng.integers(1, 5))):
            gains = rng.uniform(0, 10, size=int(rng.integers(1, 5)))
            rows.append(_row([0.0] + np.cumsum(gains).tolist()))
        k = int(rng.integers(0, 7))
        best = max(
            sum(row.values[a] for row, a in zip(rows, allocation))
            for allocation in itertools.product(*(range(len(row.values)) for row in rows))
            if sum(allocation) <= k
        )
        table = combine_dp(rows, k)
        assert table.value == pytest.approx(best, rel=1e-9)
        assert sum(table.allocation) <= k
        assert sum(row.values[a] for row, a in zip(rows, table.allocation)) == pytest.approx(table.value)


def test_combine_budget():
    with pytest.raises(BudgetExceededError):
        combine_dp([_row([0.0, 1.0, 2.0])], 3, budget=5)


def test_eptas_empty_budget(rng):
    result = eptas_solve(random_points(rng, 6, 3), 0, 0.5)
    assert result.solution.indices == ()
    assert result.solution.value == 0
    assert result.reported_value == 0


@pytest.mark.parametrize("eps", [0, 0.6, 1.0])
def test_eptas_rejects_eps(staircase, eps):
    with pytest.raises(InvalidParameterError):
        eptas_solve(staircase, 1, eps)


def test_eptas_all_points(rng):
    points = random_points(rng, 10, 2, high=1e4)
    result = eptas_solve(points, len(points), 0.5)
    assert result.solution.value >= 0.5 * hv_sweep(points)
    assert result.solution.guarantee.kind == GUARANTEE_EPTAS


def test_eptas_accepts_exact_mode_input():
    points = PointSet.from_rows([(1, 30), (6, 6), (30, 1)], mode=MODE_EXACT)
    result = eptas_solve(points, 2, 0.5)
    assert result.solution.size <= 2
    assert result.solution.value >= 0.5 * volsel_brute(points, 2).value


def test_offset_classes_match_every_offset(rng):
    for _ in range(3):
        points = random_points(rng, 8, 2, high=1e4)
        k = 3
        result = eptas_solve(points, k, 0.5)
        params = grid_params(2, Fraction(1, 10))
        assert result.params == params
        assert result.offsets_evaluated == params.tau**2
        values = [
            evaluate_offset(points, k, offset, params)[0].value
            for offset in itertools.product(range(1, params.tau + 1), repeat=2)
        ]
        assert result.reported_value == pytest.approx(max(values), rel=1e-9)


def test_eptas_fallback_policies():
    points = PointSet.from_rows([(1, 4), (2, 2), (4, 1)])
    with pytest.raises(CellCapExceededError):
        eptas_solve(points, 2, 0.5, cap=2, fallback=FALLBACK_ERROR)

    result = eptas_solve(points, 2, 0.5, cap=2, fallback=FALLBACK_GREEDY)
    assert result.fallback_events >= 1
    assert result.solution.guarantee.kind == GUARANTEE_NONE
    summary = result.summary()
    assert summary["grid"]["tau"] == 21
    assert 1 <= summary["offset_classes"] <= summary["offsets_evaluated"] == 21**2


def _check_against_brute(points, k, eps=0.5):
    result = eptas_solve(points, k, eps)
    optimum = volsel_brute(points, k).value
    assert result.fallback_events == 0
    assert result.solution.size <= k
    assert result.solution.value >= (1 - eps) * optimum * (1 - 1e-9)
    assert result.reported_value <= (1 + eps) * optimum * (1 + 1e-9)
    assert result.solution.value == pytest.approx(hv_sweep(points.subset(result.solution.indices)))


def test_eptas_against_brute(rng):
    for _ in range(15):
        n = int(rng.integers(1, 19))
        _check_against_brute(random_points(rng, n, 3, high=1e6), int(rng.integers(0, min(4, n) + 1)))


@pytest.mark.slow
def test_eptas_end_to_end_acceptance(rng):
    for _ in range(100):
        n = int(rng.integers(1, 19))
        _check_against_brute(random_points(rng, n, 3, high=1e6), int(rng.integers(0, min(4, n) + 1)))


@pytest.mark.slow
@pytest.mark.greedy_fallback
def test_eptas_large_instance_with_greedy_fallback(rng):
    # cells of a 10^5-point front exceed the default cap, so the run reports no eps guarantee
    points = random_points(rng, 100_000, 3, high=1e6)
    result = eptas_solve(points, 50, 0.5, cap=12, fallback=FALLBACK_GREEDY)
    greedy = volsel_greedy(points, 50)
    assert result.fallback_events > 0
    assert result.solution.guarantee.kind == GUARANTEE_NONE
    assert result.solution.size <= 50
    assert result.reported_value >= 0.5 * greedy.value
    assert math.isfinite(result.solution.value)


@pytest.mark.parametrize("d, eps", [(2, 0.25), (3, 0.5)])
def test_each_point_is_boundary_for_fixed_share_of_offsets(rng, d, eps):
    params = grid_params(d, eps)
    points = random_points(rng, 10, d, high=1e8)
    offsets = list(itertools.product(range(1, params.tau + 1), repeat=d))
    for row in round_exponents(points, params):
        regions = tuple(region_index(int(s), params) for s in row)
        boundary = sum(classify(regions, offset, params) is BOUNDARY for offset in offsets)
        assert boundary == params.tau**d - (params.tau - 1) ** d


def test_cells_span_bounded_exponent_ranges(rng):
    params = grid_params(2, 0.25)
    points = random_points(rng, 300, 2, high=1e12)
    for offset in [(1, 1), (3, 7), (params.tau, 2)]:
        for cell in partition(points, offset, params).values():
            for i in range(2):
                assert len({e.exps[i] for e in cell}) <= (params.tau - 1) * params.j


@pytest.mark.parametrize("d", [2, 3])
def test_rounding_keeps_points_in_their_region(rng, d):
    params = grid_params(d, 0.1)
    points = random_points(rng, 200, d, high=1e9)
    exps = round_exponents(points, params)
    rounded = rounded_points(points, params)
    rounded_exps = round_exponents(rounded, params)

    assert np.array_equal(rounded_exps, exps)
    assert np.array_equal(rounded_exps // params.j, exps // params.j)
    for original, low in zip(points, rounded):
        for c, r in zip(original, low):
            assert r <= c * (1 + 1e-9)
            assert c < r * params.beta * (1 + 1e-9)


def test_pruning_keeps_cell_values(rng):
    params = grid_params(2, 0.1)
    for _ in range(20):
        size = int(rng.integers(1, 13))
        raw = [
            ExponentPoint(tuple(int(s) for s in rng.integers(0, 6, size=2)), origin)
            for origin in range(size)
        ]
        pruned = _prune(raw)
        assert len(pruned) <= len(raw)

        full = solve_cell_exact(raw, 4, params, cap=16, policy=FALLBACK_ERROR)
        kept = solve_cell_exact(pruned, 4, params, cap=16, policy=FALLBACK_ERROR)
        for budget, value in enumerate(full.values):
            expected = kept.values[min(budget, len(kept.values) - 1)]
            assert value == pytest.approx(expected, rel=1e-9)


@pytest.mark.parametrize("d", [2, 3])
def test_selection_keeps_share_of_combined_value(rng, d):
    for _ in range(20):
        n = int(rng.integers(1, 15))
        points = random_points(rng, n, d, high=1e6)
        k = int(rng.integers(1, min(4, n) + 1))
        result = eptas_solve(points, k, 0.5)
        assert result.fallback_events == 0
        assert result.solution.value >= (1 - result.internal_eps) * result.reported_value * (1 - 1e-9)
