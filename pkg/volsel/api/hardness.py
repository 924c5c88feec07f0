"""
Hardness Instance Generator

Builds and checks, in exact integer arithmetic, the instances that reduce
independent set on induced triangular-grid subgraphs to VolSel:

1. P_m: positive integer triples summing to m (an antichain)
2. Q_m: P_{m-1} shifted up by (eps, eps, eps) with eps = 1/(4m^2)
3. T_m: the intersection graph of the regions the Q_m points add to P_m
4. Embedding of a triangular-grid vertex set A into T_m, giving (P, k, V)
5. Exhaustive verification of the reduction and of its structural lemmas

All coordinates are scaled by sigma = 4m^2 so that eps becomes 1 and every
volume is an integer (in units of eps^3).
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from volsel.api.geometry import parse_rows, read_lines
from volsel.api.hypervolume import _contribution, _volume
from volsel.config import get_settings
from volsel.constants import (
    ERR_ELL_RANGE,
    ERR_EMBEDDING,
    ERR_EMPTY_GAMMA,
    ERR_HARDNESS_M,
    ERR_REDUCTION_BUDGET,
    HARDNESS_SIDECAR_SCHEMA_VERSION,
    MODE_EXACT,
)
from volsel.doctype.point_set.point_set import PointSet
from volsel.exceptions import BudgetExceededError, EmbeddingError, InvalidParameterError

logger = logging.getLogger(__name__)

# Lattice steps between adjacent Q_m points, in P_{m-1} coordinates
LATTICE_STEPS = (
    (0, 1, -1),
    (0, -1, 1),
    (1, 0, -1),
    (-1, 0, 1),
    (1, -1, 0),
    (-1, 1, 0),
)

# Steps between adjacent vertices of the triangular grid in (i, j) coordinates
GRID_STEPS = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1))


def _check_m(m: int, low: int = 3):
    max_m = get_settings().max_hardness_m
    if not isinstance(m, int) or not low <= m <= max_m:
        raise InvalidParameterError(ERR_HARDNESS_M.format(max_m=max_m, m=m))


def scale(m: int) -> int:
    """sigma = 4 m^2 = 1 / eps"""
    return 4 * m * m


def diff_volume(m: int) -> int:
    """Scaled volume a single Q_m point adds to P_m: 3 eps^2 + eps^3"""
    return 3 * scale(m) + 1


def tetrahedral_volume(m: int) -> int:
    """Scaled mu(P_m) = m(m-1)(m-2)/6 * sigma^3"""
    return m * (m - 1) * (m - 2) // 6 * scale(m) ** 3


def lattice(total: int) -> list:
    """Positive integer triples summing to total, in lexicographic order"""
    return [(a, b, total - a - b) for a in range(1, total - 1) for b in range(1, total - a)]


def gen_Pm(m: int) -> PointSet:
    """
    P_m scaled by sigma, exact mode

    Returns:
        PointSet: (m-1)(m-2)/2 points
    """
    _check_m(m)
    sigma = scale(m)
    rows = tuple(tuple(sigma * c for c in p) for p in lattice(m))
    return PointSet(dimension=3, points=rows, mode=MODE_EXACT)


def q_point(m: int, p: Sequence[int]) -> tuple:
    """Scaled Q_m point of the P_{m-1} lattice triple p"""
    sigma = scale(m)
    return tuple(sigma * c + 1 for c in p)


def gen_Qm(m: int) -> PointSet:
    """
    Q_m scaled by sigma: sigma * p + (1, 1, 1) for p in P_{m-1}

    Returns:
        PointSet: (m-2)(m-3)/2 points, empty for m = 3
    """
    _check_m(m)
    rows = tuple(q_point(m, p) for p in lattice(m - 1))
    return PointSet(dimension=3, points=rows, mode=MODE_EXACT)


def lattice_adjacent(p: Sequence[int], q: Sequence[int]) -> bool:
    return tuple(a - b for a, b in zip(p, q)) in LATTICE_STEPS


def intersection_volume(base: Sequence, q: Sequence, r: Sequence) -> int:
    """vol(diff(q) & diff(r)) relative to the boxes of `base`, scaled"""
    base = list(base)
    return _contribution(base, tuple(r), 3) - _contribution(base + [tuple(q)], tuple(r), 3)


@dataclass
class TmGraph:
    m: int
    lattice: list  # P_{m-1} triple of every Q_m index
    edges: set
    lattice_edges: set
    intersections: dict = field(default_factory=dict)

    @property
    def max_degree(self) -> int:
        degree = [0] * len(self.lattice)
        for a, b in self.edges:
            degree[a] += 1
            degree[b] += 1
        return max(degree, default=0)

    def agrees(self) -> bool:
        return self.edges == self.lattice_edges


def build_Tm(m: int) -> TmGraph:
    """
    Intersection graph of the diff regions of Q_m

    Edges come from the geometric oracle
    mu(P+q) + mu(P+r) - mu(P) - mu(P+q+r) > 0; the lattice rule is returned
    alongside for cross-checking.
    """
    _check_m(m)
    base = gen_Pm(m).points
    points = lattice(m - 1)
    qs = [q_point(m, p) for p in points]

    edges, lattice_edges, intersections = set(), set(), {}
    for a, b in itertools.combinations(range(len(qs)), 2):
        overlap = intersection_volume(base, qs[a], qs[b])
        if overlap > 0:
            edges.add((a, b))
            intersections[(a, b)] = overlap
        if lattice_adjacent(points[a], points[b]):
            lattice_edges.add((a, b))

    logger.info(f"T_{m}: {len(qs)} vertices, {len(edges)} edges")
    return TmGraph(m=m, lattice=points, edges=edges, lattice_edges=lattice_edges, intersections=intersections)


@dataclass(frozen=True)
class TriGridVertexSet:
    vertices: tuple  # sorted (i, j) pairs
    ell: int

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(sorted({(int(i), int(j)) for i, j in self.vertices})))
        self.validate()

    def validate(self):
        if not self.vertices:
            raise InvalidParameterError(ERR_EMPTY_GAMMA)
        if not 1 <= self.ell <= len(self.vertices):
            raise InvalidParameterError(ERR_ELL_RANGE.format(size=len(self.vertices), ell=self.ell))

    @staticmethod
    def adjacent(u: Sequence[int], v: Sequence[int]) -> bool:
        return (u[0] - v[0], u[1] - v[1]) in GRID_STEPS

    @classmethod
    def from_file(cls, path: str | Path, ell: int) -> "TriGridVertexSet":
        """Read (i, j) pairs, one per line, separated by a comma or whitespace"""
        rows = parse_rows(read_lines(path), MODE_EXACT, separator=None, positive=False, dimension=2)
        return cls(vertices=tuple(rows), ell=ell)


@dataclass
class HardnessInstance:
    points: PointSet
    k: int
    V_scaled: int
    m: int
    vertex_set: TriGridVertexSet
    mapping: list  # one {"vertex", "lattice", "index"} entry per vertex of A

    @property
    def scale(self) -> int:
        return scale(self.m)

    @property
    def base_size(self) -> int:
        return len(self.points) - len(self.mapping)

    def sidecar(self) -> dict:
        """JSON sidecar written next to the point file"""
        return {
            "schema_version": HARDNESS_SIDECAR_SCHEMA_VERSION,
            "m": self.m,
            "k": self.k,
            "V_scaled": self.V_scaled,
            "scale": self.scale,
            "ell": self.vertex_set.ell,
            "mapping": [
                {"vertex": list(e["vertex"]), "lattice": list(e["lattice"]), "index": e["index"]}
                for e in self.mapping
            ],
        }


def embedding_m(vertices: Iterable[Sequence[int]]) -> int:
    """m = max(i + j) + max(j) + 5 over the normalized vertex coordinates"""
    vertices = list(vertices)
    i0 = min(i for i, _ in vertices)
    j0 = min(j for _, j in vertices)
    normalized = [(i - i0, j - j0) for i, j in vertices]
    return max(i + j for i, j in normalized) + max(j for _, j in normalized) + 5


def embed_instance(vertex_set: TriGridVertexSet) -> HardnessInstance:
    """
    VolSel instance (P_m + Q_m(A), k, V) for an independent-set instance (A, ell)

    psi maps (i, j), normalized so min i = min j = 0, to the P_{m-1} triple
    (i + 1, j + 1, m - 3 - i - j); grid adjacency becomes lattice adjacency.

    Raises:
        EmbeddingError: the geometric intersection test disagrees with grid adjacency
    """
    vertices = vertex_set.vertices
    m = embedding_m(vertices)
    _check_m(m, low=4)

    i0 = min(i for i, _ in vertices)
    j0 = min(j for _, j in vertices)
    base = gen_Pm(m)
    triples = [(i - i0 + 1, j - j0 + 1, m - 1 - (i - i0 + 1) - (j - j0 + 1)) for i, j in vertices]
    if any(c < 1 for t in triples for c in t):
        raise EmbeddingError(ERR_EMBEDDING.format(m=m))
    qs = [q_point(m, t) for t in triples]

    for a, b in itertools.combinations(range(len(vertices)), 2):
        grid = TriGridVertexSet.adjacent(vertices[a], vertices[b])
        geometric = intersection_volume(base.points, qs[a], qs[b]) > 0
        if grid != geometric:
            raise EmbeddingError(ERR_EMBEDDING.format(m=m))

    n_base = len(base)
    mapping = [
        {"vertex": v, "lattice": t, "index": n_base + position}
        for position, (v, t) in enumerate(zip(vertices, triples))
    ]
    points = PointSet(dimension=3, points=base.points + tuple(qs), mode=MODE_EXACT)
    ell = vertex_set.ell
    k = (m - 1) * (m - 2) // 2 + ell
    V_scaled = tetrahedral_volume(m) + ell * diff_volume(m)

    logger.info(f"Hardness instance: |A|={len(vertices)} ell={ell} m={m} k={k} V_scaled={V_scaled}")
    return HardnessInstance(points=points, k=k, V_scaled=V_scaled, m=m, vertex_set=vertex_set, mapping=mapping)


def max_independent_set(vertices: Sequence[Sequence[int]]) -> tuple:
    """
    Maximum independent set of the induced triangular-grid subgraph

    Exhaustive branch and bound; among maximum sets the first found in
    include-before-exclude order over sorted vertices is returned.
    """
    vertices = sorted({tuple(v) for v in vertices})
    best = []

    def search(remaining: list, chosen: list):
        nonlocal best
        if len(chosen) + len(remaining) <= len(best):
            return
        if not remaining:
            best = list(chosen)
            return
        v, rest = remaining[0], remaining[1:]
        chosen.append(v)
        search([u for u in rest if not TriGridVertexSet.adjacent(u, v)], chosen)
        chosen.pop()
        search(rest, chosen)

    search(vertices, [])
    return tuple(best)


def verify_reduction(instance: HardnessInstance, budget: int | None = None, full_check: bool = False) -> dict:
    """
    Check that (A, ell) and (P, k, V) have the same answer

    The VolSel side maximizes mu(P_m + Q_m(B)) over B in A with |B| = ell,
    which suffices because every optimal selection keeps all of P_m.

    Args:
        instance: output of embed_instance
        budget: limit on C(|A|, ell), defaults to settings.reduction_budget
        full_check: also decide (P, k, V) by brute force over all of P

    Returns:
        dict: both answers, the best volume and whether they agree
    """
    settings = get_settings()
    if budget is None:
        budget = settings.reduction_budget
    vertex_set = instance.vertex_set
    size, ell = len(vertex_set.vertices), vertex_set.ell
    count = math.comb(size, ell)
    if count > budget:
        raise BudgetExceededError(ERR_REDUCTION_BUDGET.format(count=count, budget=budget))

    independent = max_independent_set(vertex_set.vertices)
    base = list(instance.points.points[: instance.base_size])
    qs = [instance.points.points[e["index"]] for e in instance.mapping]

    best_value, best_subset = None, ()
    for subset in itertools.combinations(range(size), ell):
        value = _volume(base + [qs[i] for i in subset], 3)
        if best_value is None or value > best_value:
            best_value, best_subset = value, subset

    report = {
        "m": instance.m,
        "k": instance.k,
        "V_scaled": instance.V_scaled,
        "ell": ell,
        "vertices": len(vertex_set.vertices),
        "independent_set_size": len(independent),
        "independent_set_answer": len(independent) >= ell,
        "volsel_value": best_value,
        "volsel_answer": best_value >= instance.V_scaled,
        "best_vertices": [list(vertex_set.vertices[i]) for i in best_subset],
    }
    report["agree"] = report["independent_set_answer"] == report["volsel_answer"]

    if full_check:
        from volsel.api.exact import volsel_decide

        answer, _ = volsel_decide(instance.points, instance.k, instance.V_scaled, settings=settings)
        report["full_answer"] = answer
        report["agree"] = report["agree"] and answer == report["volsel_answer"]

    return report


def neighbour_gains(m: int, p: Sequence[int]) -> list:
    """
    Gain of every Q_m point over P_m without p

    With p = (a, b, c) removed, the region only p covered is the cube of side
    sigma below its corner. Points p - e_i overlap it in a sigma x sigma x 1
    slab, points p + e_i - e_j - e_k in a sigma x 1 x 1 bar, the rest not at all.

    Returns:
        list: {"lattice", "ring", "gain", "expected"} per Q_m point
    """
    _check_m(m, low=4)
    p = tuple(p)
    sigma = scale(m)
    remaining = [tuple(sigma * c for c in t) for t in lattice(m) if t != p]

    first_ring = {tuple(c - (i == axis) for i, c in enumerate(p)) for axis in range(3)}
    second_ring = {tuple(c + 1 if i == axis else c - 1 for i, c in enumerate(p)) for axis in range(3)}

    gains = []
    for t in lattice(m - 1):
        if t in first_ring:
            ring, expected = 1, diff_volume(m) + sigma * sigma
        elif t in second_ring:
            ring, expected = 2, diff_volume(m) + sigma
        else:
            ring, expected = 0, diff_volume(m)
        gain = _contribution(remaining, q_point(m, t), 3)
        gains.append({"lattice": list(t), "ring": ring, "gain": gain, "expected": expected})
    return gains


def check_lemma_all_p(m: int) -> list:
    """
    mu((P_m - {p}) + Q_m) < mu(P_m) for every p in P_m

    Returns:
        list: {"removed", "volume", "bound", "holds"} per p
    """
    _check_m(m, low=4)
    sigma = scale(m)
    bound = tetrahedral_volume(m)
    qs = [q_point(m, t) for t in lattice(m - 1)]
    checks = []
    for p in lattice(m):
        rest = [tuple(sigma * c for c in t) for t in lattice(m) if t != p]
        volume = _volume(rest + qs, 3)
        checks.append({"removed": list(p), "volume": volume, "bound": bound, "holds": volume < bound})
    return checks


def reduction_deficit(m: int, lattice_points: Iterable[Sequence[int]]) -> int:
    """
    mu(P_m) + |Q'| (3 sigma + 1) - mu(P_m + Q') for Q' given by P_{m-1} triples

    0 exactly when no two of the points are lattice neighbours.
    """
    _check_m(m, low=4)
    chosen = [q_point(m, t) for t in lattice_points]
    base = list(gen_Pm(m).points)
    return tetrahedral_volume(m) + len(chosen) * diff_volume(m) - _volume(base + chosen, 3)


def verify_construction(m: int, exhaustive_limit: int = 10) -> dict:
    """
    Check mu(P_m), the diff law for every Q_m point and, for m up to
    exhaustive_limit, the T_m lattice rule

    Returns:
        dict: the compared quantities and a pass flag per check
    """
    _check_m(m)
    base = gen_Pm(m)
    qs = gen_Qm(m)
    volume = _volume(base.points, 3)
    expected = tetrahedral_volume(m)

    gains = [_contribution(base.points, q, 3) for q in qs.points]
    report = {
        "m": m,
        "scale": scale(m),
        "P_size": len(base),
        "Q_size": len(qs),
        "mu_Pm": volume,
        "expected_mu_Pm": expected,
        "mu_ok": volume == expected,
        "diff_volume": diff_volume(m),
        "diff_ok": all(g == diff_volume(m) for g in gains),
    }

    if m >= 4 and m <= exhaustive_limit:
        graph = build_Tm(m)
        report["tm_edges"] = len(graph.edges)
        report["tm_max_degree"] = graph.max_degree
        report["tm_unit_intersections"] = all(v == 1 for v in graph.intersections.values())
        report["tm_ok"] = graph.agrees()

    report["passed"] = all(v for key, v in report.items() if key.endswith("_ok") or key == "tm_unit_intersections")
    return report
