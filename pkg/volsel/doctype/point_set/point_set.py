"""
Point Set

Indexed, immutable collection of d-dimensional points with strictly positive
coordinates. Every solver reports positions in the ORIGINAL input sequence:
derived sets (filtered, subsets) keep an origin map back to it.

Two arithmetic modes:
- float: coordinates are Python floats
- exact: coordinates are Python ints (volumes stay exact integers)
"""

import math
import numbers
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

from volsel.constants import (
    ERR_DIMENSION_MISMATCH,
    ERR_EMPTY_DIMENSION,
    ERR_NON_POSITIVE,
    ERR_NOT_FINITE,
    ERR_NOT_INTEGER,
    ERR_UNKNOWN_MODE,
    MODE_EXACT,
    MODE_FLOAT,
    MODES,
)
from volsel.exceptions import DimensionMismatchError, InvalidPointSetError

Number = Union[int, float]
Point = tuple  # tuple[Number, ...], the corner of the anchored box [0, p_1] x ... x [0, p_d]


def _normalize(index: int, row: Sequence, mode: str) -> Point:
    if mode == MODE_EXACT:
        coords = []
        for c in row:
            if isinstance(c, numbers.Integral) and not isinstance(c, bool):
                coords.append(int(c))
            elif isinstance(c, numbers.Real) and float(c).is_integer():
                coords.append(int(c))
            else:
                raise InvalidPointSetError(ERR_NOT_INTEGER.format(index=index, coords=tuple(row)))
        return tuple(coords)

    coords = tuple(float(c) for c in row)
    if not all(math.isfinite(c) for c in coords):
        raise InvalidPointSetError(ERR_NOT_FINITE.format(index=index, coords=coords))
    return coords


@dataclass(frozen=True)
class PointSet:
    dimension: int
    points: tuple
    mode: str = MODE_FLOAT
    origin: tuple | None = None

    def __post_init__(self):
        self.validate()

    def validate(self):
        """Validate dimension, positivity and the origin map"""
        if self.mode not in MODES:
            raise InvalidPointSetError(ERR_UNKNOWN_MODE.format(mode=self.mode))

        if self.dimension < 1:
            raise InvalidPointSetError(ERR_EMPTY_DIMENSION)

        for index, p in enumerate(self.points):
            if len(p) != self.dimension:
                raise DimensionMismatchError(ERR_DIMENSION_MISMATCH.format(expected=self.dimension, got=len(p)))
            if any(c <= 0 for c in p):
                raise InvalidPointSetError(ERR_NON_POSITIVE.format(index=index, coords=p))

        if self.origin is not None and len(self.origin) != len(self.points):
            raise InvalidPointSetError("Origin map must have one entry per point")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence], mode: str = MODE_FLOAT, dimension: int | None = None) -> "PointSet":
        """
        Build a point set from raw coordinate rows

        Args:
            rows: iterable of coordinate sequences
            mode: "float" or "exact"
            dimension: required when rows is empty

        Returns:
            PointSet: validated set with coordinates converted for the mode
        """
        if mode not in MODES:
            raise InvalidPointSetError(ERR_UNKNOWN_MODE.format(mode=mode))

        points = tuple(_normalize(i, row, mode) for i, row in enumerate(rows))
        if dimension is None:
            if not points:
                raise InvalidPointSetError(ERR_EMPTY_DIMENSION)
            dimension = len(points[0])
        return cls(dimension=dimension, points=points, mode=mode)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def __getitem__(self, index: int) -> Point:
        return self.points[index]

    @property
    def is_exact(self) -> bool:
        return self.mode == MODE_EXACT

    def original_index(self, position: int) -> int:
        """Map a position in this set to the index in the original input"""
        if self.origin is None:
            return position
        return self.origin[position]

    def original_indices(self, positions: Iterable[int]) -> tuple:
        return tuple(sorted(self.original_index(i) for i in positions))

    def subset(self, positions: Iterable[int]) -> "PointSet":
        """Point set restricted to the given positions, origin map preserved"""
        positions = tuple(positions)
        return PointSet(
            dimension=self.dimension,
            points=tuple(self.points[i] for i in positions),
            mode=self.mode,
            origin=tuple(self.original_index(i) for i in positions),
        )

    def as_array(self) -> np.ndarray:
        """Coordinates as an (n, d) float64 array"""
        if not self.points:
            return np.empty((0, self.dimension), dtype=np.float64)
        return np.asarray(self.points, dtype=np.float64)


def as_float(points: PointSet) -> PointSet:
    """Float-mode copy of a point set, origin map preserved"""
    if points.mode == MODE_FLOAT:
        return points
    return PointSet(
        dimension=points.dimension,
        points=tuple(tuple(float(c) for c in p) for p in points.points),
        mode=MODE_FLOAT,
        origin=points.origin,
    )
