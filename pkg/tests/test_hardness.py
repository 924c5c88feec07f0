import itertools
import json

import pytest

from volsel.api.hardness import (
    LATTICE_STEPS,
    TriGridVertexSet,
    build_Tm,
    check_lemma_all_p,
    diff_volume,
    embed_instance,
    embedding_m,
    gen_Pm,
    gen_Qm,
    lattice,
    max_independent_set,
    neighbour_gains,
    reduction_deficit,
    scale,
    tetrahedral_volume,
    verify_construction,
    verify_reduction,
)
from volsel.api.hypervolume import hv_contribution, hv_sweep
from volsel.exceptions import BudgetExceededError, InvalidParameterError, ParseError


def test_point_counts():
    assert gen_Pm(3).points == ((36, 36, 36),)
    assert len(gen_Pm(9)) == 28
    assert len(gen_Qm(9)) == 21
    assert len(gen_Qm(3)) == 0
    assert gen_Qm(9).is_exact


@pytest.mark.parametrize("m", [2, 51, 4.5])
def test_m_range(m):
    with pytest.raises(InvalidParameterError):
        gen_Pm(m)


@pytest.mark.parametrize("m", range(3, 13))
def test_tetrahedral_volume(m):
    assert hv_sweep(gen_Pm(m)) == m * (m - 1) * (m - 2) // 6 * (4 * m * m) ** 3
    assert tetrahedral_volume(m) == m * (m - 1) * (m - 2) // 6 * scale(m) ** 3


@pytest.mark.parametrize("m", range(4, 11))
def test_diff_volume_law(m):
    base = gen_Pm(m)
    assert diff_volume(m) == 3 * 4 * m * m + 1
    for q in gen_Qm(m):
        assert hv_contribution(base, q) == diff_volume(m)


def test_t4_single_vertex():
    graph = build_Tm(4)
    assert graph.lattice == [(1, 1, 1)]
    assert graph.edges == set()


@pytest.mark.parametrize("m", range(5, 9))
def test_tm_is_triangular_grid(m):
    graph = build_Tm(m)
    assert graph.agrees()
    assert graph.max_degree <= 6
    assert set(graph.intersections.values()) == {1}


def test_lattice_steps_are_unit_moves():
    assert len(set(LATTICE_STEPS)) == 6
    assert all(sum(step) == 0 and sorted(step) == [-1, 0, 1] for step in LATTICE_STEPS)
    assert lattice(4) == [(1, 1, 2), (1, 2, 1), (2, 1, 1)]


def test_vertex_set_validation():
    with pytest.raises(InvalidParameterError):
        TriGridVertexSet(vertices=(), ell=1)
    with pytest.raises(InvalidParameterError):
        TriGridVertexSet(vertices=((0, 0),), ell=2)
    vertex_set = TriGridVertexSet(vertices=((1, 0), (0, 0), (1, 0)), ell=1)
    assert vertex_set.vertices == ((0, 0), (1, 0))


def test_vertex_set_from_file(tmp_path):
    path = tmp_path / "gamma.txt"
    path.write_text("# i j\n0 0\n2,1\n-1 3\n")
    vertex_set = TriGridVertexSet.from_file(path, 2)
    assert vertex_set.vertices == ((-1, 3), (0, 0), (2, 1))

    path.write_text("0 0 1\n")
    with pytest.raises(ParseError):
        TriGridVertexSet.from_file(path, 1)


def test_vertex_set_file_errors_report_file_lines(tmp_path):
    path = tmp_path / "gamma.txt"
    path.write_text("# i j\n\n0 0\n1 0 4\n")
    with pytest.raises(ParseError) as info:
        TriGridVertexSet.from_file(path, 1)
    assert info.value.line_number == 4
    assert "Line 4" in str(info.value)

    with pytest.raises(ParseError):
        TriGridVertexSet.from_file(tmp_path / "missing.txt", 1)


def test_max_independent_set():
    triangle = [(0, 0), (1, 0), (0, 1)]
    assert len(max_independent_set(triangle)) == 1
    path = [(0, 0), (1, 0), (2, 0), (3, 0)]
    assert len(max_independent_set(path)) == 2
    hexagon_with_centre = [(1, 1), (2, 1), (0, 1), (1, 2), (1, 0), (2, 0), (0, 2)]
    assert len(max_independent_set(hexagon_with_centre)) == 3


def test_single_vertex_is_yes_instance():
    instance = embed_instance(TriGridVertexSet(vertices=((0, 0),), ell=1))
    assert instance.m == embedding_m([(0, 0)]) == 5
    assert instance.k == 6 + 1
    report = verify_reduction(instance)
    assert report["independent_set_answer"]
    assert report["volsel_answer"]
    assert report["volsel_value"] == instance.V_scaled
    assert report["agree"]


def test_adjacent_pair_is_no_instance():
    instance = embed_instance(TriGridVertexSet(vertices=((0, 0), (1, 0)), ell=2))
    report = verify_reduction(instance)
    assert not report["independent_set_answer"]
    assert not report["volsel_answer"]
    assert report["volsel_value"] == instance.V_scaled - 1
    assert report["agree"]


def test_separated_pair_is_yes_instance():
    instance = embed_instance(TriGridVertexSet(vertices=((0, 0), (2, 0)), ell=2))
    report = verify_reduction(instance)
    assert report["independent_set_answer"]
    assert report["volsel_answer"]
    assert report["agree"]


def test_full_check_agrees():
    instance = embed_instance(TriGridVertexSet(vertices=((0, 0), (1, 0)), ell=1))
    report = verify_reduction(instance, full_check=True)
    assert report["full_answer"]
    assert report["agree"]


def test_sidecar():
    vertex_set = TriGridVertexSet(vertices=((0, 0), (0, 1), (2, 0)), ell=2)
    instance = embed_instance(vertex_set)
    sidecar = json.loads(json.dumps(instance.sidecar()))
    m = instance.m
    assert sidecar["k"] == (m - 1) * (m - 2) // 2 + 2
    assert sidecar["V_scaled"] == tetrahedral_volume(m) + 2 * diff_volume(m)
    assert sidecar["scale"] == 4 * m * m
    assert [entry["vertex"] for entry in sidecar["mapping"]] == [[0, 0], [0, 1], [2, 0]]
    assert [entry["index"] for entry in sidecar["mapping"]] == [instance.base_size + i for i in range(3)]


def test_reduction_budget():
    instance = embed_instance(TriGridVertexSet(vertices=((0, 0), (2, 0), (4, 0)), ell=2))
    with pytest.raises(BudgetExceededError):
        verify_reduction(instance, budget=2)


def _grid_sets():
    cells = [(i, j) for i in range(4) for j in range(3)]
    yield cells[:4], 2
    yield cells[:4], 3
    yield [(0, 0), (2, 0), (0, 2), (2, 2)], 4
    yield [(0, 0), (1, 1), (2, 2), (3, 0)], 3
    yield [(1, 0), (0, 1), (1, 1)], 2
    yield [(0, 0), (3, 0), (0, 2), (3, 2), (1, 1)], 5
    yield cells[:6], 3
    yield cells[:6], 4
    yield [(0, 0), (1, 0), (2, 0), (0, 1), (2, 1)], 3
    yield [(0, 0), (2, 0), (1, 1), (3, 1)], 3


@pytest.mark.parametrize("vertices, ell", list(_grid_sets()))
def test_reduction_agrees(vertices, ell):
    report = verify_reduction(embed_instance(TriGridVertexSet(vertices=tuple(vertices), ell=ell)))
    assert report["agree"]
    assert report["independent_set_answer"] == (len(max_independent_set(vertices)) >= ell)


@pytest.mark.slow
def test_reduction_agrees_on_full_grid():
    cells = [(i, j) for i in range(4) for j in range(3)]
    for ell in range(1, 8):
        report = verify_reduction(embed_instance(TriGridVertexSet(vertices=tuple(cells), ell=ell)))
        assert report["agree"]


@pytest.mark.parametrize("m", range(4, 7))
def test_removing_any_p_loses_volume(m):
    assert all(entry["holds"] for entry in check_lemma_all_p(m))


@pytest.mark.slow
@pytest.mark.parametrize("m", [7, 8])
def test_removing_any_p_loses_volume_acceptance(m):
    assert all(entry["holds"] for entry in check_lemma_all_p(m))


def test_neighbour_rings():
    gains = neighbour_gains(6, (2, 2, 2))
    assert all(g["gain"] == g["expected"] for g in gains)
    assert sorted(g["ring"] for g in gains).count(1) == 3
    assert sorted(g["ring"] for g in gains).count(2) == 3


def test_reduction_deficit():
    assert reduction_deficit(7, [(1, 1, 4), (3, 1, 2)]) == 0
    assert reduction_deficit(7, [(1, 1, 4), (1, 2, 3)]) == 1
    for a, b in itertools.combinations(lattice(6), 2):
        deficit = reduction_deficit(7, [a, b])
        adjacent = tuple(x - y for x, y in zip(a, b)) in LATTICE_STEPS
        assert (deficit > 0) == adjacent


def test_verify_construction():
    report = verify_construction(8)
    assert report["mu_Pm"] == 56 * (4 * 64) ** 3
    assert report["mu_ok"]
    assert report["diff_ok"]
    assert report["tm_ok"]
    assert report["passed"]
    assert "tm_ok" not in verify_construction(12)
