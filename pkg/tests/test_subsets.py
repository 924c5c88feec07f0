import numpy as np

from tests.conftest import random_points
from volsel.api.hypervolume import hv_sweep
from volsel.api.subsets import best_subsets, mask_positions, popcounts, subset_volume_table
from volsel.constants import MODE_EXACT
from volsel.doctype.point_set.point_set import PointSet


def test_popcounts():
    assert popcounts(3).tolist() == [0, 1, 1, 2, 1, 2, 2, 3]


def test_mask_positions():
    assert mask_positions(0) == ()
    assert mask_positions(0b1011) == (0, 1, 3)


def test_table_matches_sweep_exact(rng):
    points = random_points(rng, 7, 3, mode=MODE_EXACT, high=25)
    table = subset_volume_table(points)
    assert table.dtype == np.int64
    for mask in range(1 << len(points)):
        assert table[mask] == hv_sweep(points.subset(mask_positions(mask)))


def test_table_uses_python_ints_for_large_coordinates():
    big = 2**40
    points = PointSet.from_rows([(big, 3, 1), (2, big, 5), (big - 1, big - 1, big)], mode=MODE_EXACT)
    table = subset_volume_table(points)
    assert table.dtype == object
    for mask in range(8):
        assert table[mask] == hv_sweep(points.subset(mask_positions(mask)))


def test_table_float(staircase):
    table = subset_volume_table(staircase)
    assert table.tolist() == [0.0, 3.0, 4.0, 5.0, 3.0, 5.0, 5.0, 6.0]


def test_best_subsets_breaks_ties_lexicographically(staircase):
    best = best_subsets(subset_volume_table(staircase), 3, 3)
    assert best[0] == (0.0, ())
    assert best[1] == (4.0, (1,))
    assert best[2] == (5.0, (0, 1))
    assert best[3] == (6.0, (0, 1, 2))


def test_best_subsets_relaxes_to_at_most_k():
    points = PointSet.from_rows([(2, 2), (1, 1)])
    best = best_subsets(subset_volume_table(points), 2, 2)
    assert best[2] == (4.0, (0,))
