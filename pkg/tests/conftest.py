import numpy as np
import pytest

from volsel import config
from volsel.config import ENV_PREFIX
from volsel.constants import MODE_EXACT, MODE_FLOAT
from volsel.doctype.point_set.point_set import PointSet
from volsel.doctype.volsel_settings.volsel_settings import VolselSettings


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch):
    for name in VolselSettings.field_types():
        monkeypatch.delenv(ENV_PREFIX + name.upper(), raising=False)
    config._load.cache_clear()
    yield
    config._load.cache_clear()


@pytest.fixture
def staircase():
    """{(1,3), (2,2), (3,1)}: mu = 6, best single point (2,2)"""
    return PointSet.from_rows([(1, 3), (2, 2), (3, 1)])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_points(rng, n, d, mode=MODE_FLOAT, high=30):
    """n points with coordinates in [1, high): integers in exact mode, log-uniform floats otherwise"""
    if mode == MODE_EXACT:
        return PointSet.from_rows(rng.integers(1, high, size=(n, d)).tolist(), mode=MODE_EXACT, dimension=d)
    rows = np.exp(rng.uniform(0.0, np.log(high), size=(n, d)))
    return PointSet.from_rows(rows.tolist(), dimension=d)


def write_rows(path, rows):
    path.write_text("".join(",".join(str(c) for c in row) + "\n" for row in rows))
    return path
