"""
Point Set Geometry

This module handles:
1. Domination between points
2. Pareto filtering with original-index bookkeeping
3. Point-set CSV reading and writing
4. Translating inputs measured against another reference point
"""

import logging
from pathlib import Path
from typing import Iterable, Sequence, TextIO

from volsel.constants import (
    ERR_DIMENSION_MISMATCH,
    ERR_PARSE_EMPTY,
    ERR_PARSE_FIELDS,
    ERR_PARSE_POSITIVE,
    ERR_PARSE_VALUE,
    ERR_READ_FILE,
    ERR_REFERENCE,
    MODE_EXACT,
    MODE_FLOAT,
)
from volsel.doctype.point_set.point_set import Point, PointSet
from volsel.exceptions import DimensionMismatchError, InvalidPointSetError, ParseError

logger = logging.getLogger(__name__)


def dominates(p: Sequence, q: Sequence) -> bool:
    """
    Check whether p dominates q (p_i >= q_i for every i)

    Raises:
        DimensionMismatchError: if p and q differ in length
    """
    if len(p) != len(q):
        raise DimensionMismatchError(ERR_DIMENSION_MISMATCH.format(expected=len(p), got=len(q)))
    return all(a >= b for a, b in zip(p, q))


def _front_positions(points: Sequence[Point]) -> list:
    # Lexicographically decreasing order puts every dominator before what it dominates;
    # equal points are ordered by position so the lowest one survives.
    order = sorted(range(len(points)), key=lambda i: (tuple(-c for c in points[i]), i))
    kept = []
    for i in order:
        p = points[i]
        if any(all(a >= b for a, b in zip(points[j], p)) for j in kept):
            continue
        kept.append(i)
    return sorted(kept)


def pareto_filter(points: PointSet) -> PointSet:
    """
    Remove dominated points

    A point is dropped when some other point dominates it. Among duplicates
    exactly one copy, the lowest index, is kept.

    Args:
        points: input point set

    Returns:
        PointSet: the non-dominated points in input order, origin map kept
    """
    kept = _front_positions(points.points)
    if len(kept) < len(points):
        logger.debug(f"Pareto filter kept {len(kept)} of {len(points)} points")
    return points.subset(kept)


def shift_to_anchor(rows: Iterable[Sequence], reference: Sequence, maximize: bool = True) -> list:
    """
    Translate points measured against a reference point to the origin anchor

    Args:
        rows: raw coordinate rows
        reference: reference point r
        maximize: objectives are maximized (p - r); otherwise minimized (r - p)

    Returns:
        list: translated rows, all strictly positive

    Raises:
        InvalidPointSetError: a point does not strictly improve on the reference
    """
    shifted = []
    for index, row in enumerate(rows):
        if len(row) != len(reference):
            raise DimensionMismatchError(ERR_DIMENSION_MISMATCH.format(expected=len(reference), got=len(row)))
        if maximize:
            moved = tuple(c - r for c, r in zip(row, reference))
        else:
            moved = tuple(r - c for c, r in zip(row, reference))
        if any(c <= 0 for c in moved):
            raise InvalidPointSetError(ERR_REFERENCE.format(index=index, reference=tuple(reference)))
        shifted.append(moved)
    return shifted


def _parse_value(text: str, mode: str, line_number: int):
    try:
        if mode == MODE_EXACT:
            try:
                return int(text)
            except ValueError:
                value = float(text)
                if not value.is_integer():
                    raise ValueError(text)
                return int(value)
        return float(text)
    except ValueError:
        raise ParseError(ERR_PARSE_VALUE.format(line=line_number, value=text), line_number)


def parse_rows(
    lines: Iterable[str],
    mode: str = MODE_FLOAT,
    separator: str | None = ",",
    positive: bool = True,
    dimension: int | None = None,
) -> list:
    """
    Parse coordinate rows from text lines

    Blank lines are skipped, a single leading line starting with '#' is a header.

    Args:
        lines: text lines
        mode: "float" or "exact"
        separator: field separator, None splits on whitespace and commas
        positive: reject rows with a non-positive coordinate
        dimension: required number of values per row, taken from the first row when None

    Returns:
        list: rows as tuples of numbers
    """
    rows = []
    seen_content = False

    for line_number, line in enumerate(lines, start=1):
        text = line.strip()
        if not text:
            continue
        if text.startswith("#") and not seen_content:
            seen_content = True
            continue
        seen_content = True

        if separator is None:
            fields = text.replace(",", " ").split()
        else:
            fields = [f.strip() for f in text.split(separator)]

        if dimension is None:
            dimension = len(fields)
        elif len(fields) != dimension:
            raise ParseError(
                ERR_PARSE_FIELDS.format(line=line_number, expected=dimension, got=len(fields)), line_number
            )

        row = tuple(_parse_value(f, mode, line_number) for f in fields)
        if positive and any(c <= 0 for c in row):
            raise ParseError(ERR_PARSE_POSITIVE.format(line=line_number, coords=row), line_number)
        rows.append(row)

    return rows


def read_lines(path: str | Path) -> list:
    """Text lines of an input file, unreadable files reported as ParseError"""
    try:
        with open(path) as f:
            return f.read().splitlines()
    except (OSError, UnicodeDecodeError) as e:
        raise ParseError(ERR_READ_FILE.format(path=path, reason=getattr(e, "strerror", None) or e))


def read_points(
    path: str | Path,
    mode: str = MODE_FLOAT,
    reference: Sequence | None = None,
    maximize: bool = True,
) -> PointSet:
    """
    Read a point-set CSV file

    Args:
        path: file with one point per line
        mode: "float" or "exact"
        reference: optional reference point, rows are translated by shift_to_anchor
        maximize: direction of the objectives when a reference is given

    Returns:
        PointSet: validated point set
    """
    lines = read_lines(path)
    rows = parse_rows(lines, mode, positive=reference is None)
    if reference is not None:
        rows = shift_to_anchor(rows, reference, maximize)

    if not rows:
        raise ParseError(ERR_PARSE_EMPTY)

    logger.info(f"Read {len(rows)} points of dimension {len(rows[0])} from {path}")
    return PointSet.from_rows(rows, mode=mode)


def format_value(value) -> str:
    """Shortest text that parses back to the same number"""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_points(points: PointSet | Iterable[Sequence]) -> str:
    return "".join(",".join(format_value(c) for c in p) + "\n" for p in points)


def write_points(target: str | Path | TextIO, points: PointSet | Iterable[Sequence]):
    """Write points as CSV to a path or an open text stream"""
    text = format_points(points)
    if hasattr(target, "write"):
        target.write(text)
        return
    Path(target).write_text(text)
