"""Combinatorial horoballs, truncated augmented spaces, and their subspaces.

A horoball over a finite base puts a copy of the base at each level, joins
(p,l)-(q,l) when 0 < d(p,q) <= 2^l, and adds vertical edges.  The augmented
space glues one horoball onto each enumerated peripheral coset of a Cayley
ball; level-0 horizontal edges are the Cayley edges themselves.  A second,
independently coded builder realizes the distance-one presentation of the
same space and doubles as a cross-check oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import BudgetExceededError, EmptyBaseError, vertex_budget
from .graphs import MetricGraph, Vertex
from .groups import CosetTable, GroupSpec, enumerate_cosets


def interval_points(lo: int, hi: int) -> list[int]:
    """Integer interval with the absolute-value metric, as a base space."""
    return list(range(lo, hi + 1))


def _levels_in(interval, lmax: int) -> list[int]:
    lo, hi = interval
    hi = lmax if hi is None else min(hi, lmax)
    lo = max(0, lo)
    return list(range(lo, hi + 1))


def build_horoball(
    points: Sequence,
    dist: Callable[[object, object], int],
    interval: tuple[int, int | None] = (0, None),
    lmax: int = 0,
    budget: int | None = None,
    coset: int = 1,
) -> MetricGraph:
    """Horoball truncation over a finite base metric space.

    ``interval`` selects the levels (upper bound None means "up to lmax");
    horizontal edges join base points at distance <= 2^level, vertical edges
    join consecutive present levels.  Level-0 vertices carry coset tag 0 so a
    single-coset augmented space has the same labels.
    """
    points = list(points)
    if not points:
        raise EmptyBaseError("horoball base is empty")
    levels = _levels_in(interval, lmax)
    if not levels:
        raise ValueError(f"no levels in {interval} truncated at {lmax}")
    cap = vertex_budget(budget)
    if len(points) * len(levels) > cap:
        raise BudgetExceededError(
            f"{len(points)} x {len(levels)} vertices exceed budget {cap}"
        )
    vof = lambda p, l: Vertex(p, l, 0 if l == 0 else coset)
    vertices = [vof(p, l) for p in points for l in levels]
    edges = []
    for l in levels:
        reach = 2**l
        for i, p in enumerate(points):
            for q in points[i + 1 :]:
                d = dist(p, q)
                if 0 < d <= reach:
                    edges.append((vof(p, l), vof(q, l)))
    for a, b in zip(levels, levels[1:]):
        if b == a + 1:
            for p in points:
                edges.append((vof(p, a), vof(p, b)))
    meta = {
        "kind": "horoball",
        "base_size": len(points),
        "levels": [levels[0], levels[-1]],
    }
    return MetricGraph(vertices, edges, meta=meta)


@dataclass(frozen=True)
class Truncation:
    """Explicit truncation of an augmented space: ball radius, horoball depth,
    number of attached horoballs (None = all cosets meeting the ball)."""

    rg: int
    lmax: int
    mmax: int | None = None

    def as_dict(self):
        return {"rg": self.rg, "lmax": self.lmax, "mmax": self.mmax}


class AugmentedSpace:
    """A truncated augmented space together with its group-side context."""

    def __init__(
        self,
        spec: GroupSpec,
        peripherals: tuple[int, ...],
        trunc: Truncation,
        graph: MetricGraph,
        table: CosetTable,
        attached: tuple,
        name: str = "",
    ):
        self.spec = spec
        self.peripherals = peripherals
        self.trunc = trunc
        self.graph = graph
        self.table = table
        self.attached = attached  # CosetEntry list for horoballs actually built
        self.name = name
        self._dist_cache: dict[tuple[str, str], int] = {}
        self._covers = {}

    def element_distance(self, x: str, y: str) -> int:
        key = (x, y) if x <= y else (y, x)
        d = self._dist_cache.get(key)
        if d is None:
            d = self.spec.word_metric(x, y)
            self._dist_cache[key] = d
        return d

    def describe(self) -> dict:
        return {
            "name": self.name,
            "atoms": [[a.kind, list(a.letters)] for a in self.spec.atoms],
            "peripherals": list(self.peripherals),
            "truncation": self.trunc.as_dict(),
            "vertices": len(self.graph),
        }


def build_augmented(
    spec: GroupSpec,
    peripherals: Sequence[int],
    trunc: Truncation,
    budget: int | None = None,
    name: str = "",
) -> AugmentedSpace:
    """Cayley ball with horoballs glued along the first mmax peripheral cosets."""
    cap = vertex_budget(budget)
    ball = spec.ball(trunc.rg, cap)
    ball_set = set(ball)
    table = enumerate_cosets(spec, tuple(peripherals), trunc.rg, cap)
    mmax = len(table.entries) if trunc.mmax is None else trunc.mmax
    attached = table.entries[:mmax]

    vertices = [Vertex(x, 0, 0) for x in ball]
    edges = []
    for x in ball:
        for c in spec.alphabet:
            y = spec.multiply(x, c)
            if y in ball_set and y != x:
                edges.append((Vertex(x, 0, 0), Vertex(y, 0, 0)))
    built = []
    for entry in attached:
        base = sorted(
            (x for x in ball if spec.coset_rep(x, entry.atom) == entry.rep),
            key=spec.shortlex_key,
        )
        if not base:
            continue
        built.append(entry)
        vertices.extend(
            Vertex(x, l, entry.index) for x in base for l in range(1, trunc.lmax + 1)
        )
        if len(vertices) > cap:
            raise BudgetExceededError(f"augmented space exceeds budget {cap}")
        for l in range(1, trunc.lmax + 1):
            reach = 2**l
            for i, x in enumerate(base):
                for y in base[i + 1 :]:
                    if spec.word_metric(x, y) <= reach:
                        edges.append((Vertex(x, l, entry.index), Vertex(y, l, entry.index)))
        for x in base:
            edges.append((Vertex(x, 0, 0), Vertex(x, 1, entry.index)))
            for l in range(1, trunc.lmax):
                edges.append((Vertex(x, l, entry.index), Vertex(x, l + 1, entry.index)))

    meta = {
        "kind": "augmented",
        "rg": trunc.rg,
        "lmax": trunc.lmax,
        "attached": [e.index for e in built],
        "name": name,
    }
    graph = MetricGraph(vertices, edges, meta=meta)
    return AugmentedSpace(spec, tuple(peripherals), trunc, graph, table, tuple(built), name)


def build_vertex_space(
    spec: GroupSpec,
    peripherals: Sequence[int],
    rg: int,
    lmax: int,
    budget: int | None = None,
) -> MetricGraph:
    """Distance-one presentation of the augmented space (second construction).

    Group-level horizontal edges are the distance-1 pairs of the word metric,
    horoball levels start at 1 over every enumerated coset.  Kept independent
    of build_augmented on purpose: for word metrics the two presentations
    produce the same graph, which the tests exploit as an oracle.
    """
    cap = vertex_budget(budget)
    ball = spec.ball(rg, cap)
    table = enumerate_cosets(spec, tuple(peripherals), rg, cap)
    vertices = [Vertex(x, 0, 0) for x in ball]
    edges = []
    for i, x in enumerate(ball):
        for y in ball[i + 1 :]:
            if spec.word_metric(x, y) == 1:
                edges.append((Vertex(x, 0, 0), Vertex(y, 0, 0)))
    for entry in table.entries:
        base = [x for x in ball if spec.coset_rep(x, entry.atom) == entry.rep]
        vertices.extend(
            Vertex(x, l, entry.index) for x in base for l in range(1, lmax + 1)
        )
        if len(vertices) > cap:
            raise BudgetExceededError(f"vertex space exceeds budget {cap}")
        for t in range(1, lmax + 1):
            reach = 2**t
            for i, x in enumerate(base):
                for y in base[i + 1 :]:
                    d = spec.word_metric(x, y)
                    if 0 < d <= reach:
                        edges.append((Vertex(x, t, entry.index), Vertex(y, t, entry.index)))
        for x in base:
            edges.append((Vertex(x, 0, 0), Vertex(x, 1, entry.index)))
            for t in range(1, lmax):
                edges.append((Vertex(x, t, entry.index), Vertex(x, t + 1, entry.index)))
    meta = {"kind": "vertex-space", "rg": rg, "lmax": lmax}
    return MetricGraph(vertices, edges, meta=meta)


def subspace(space: AugmentedSpace, which: str, param: int) -> MetricGraph:
    """Full subgraph on a standard vertex selection.

    which = "thick":  Cayley part plus horoball levels <= param
            "cusp":   horoball levels >= param (param >= 1)
            "slice":  horoball level == param (param >= 1)
            "tail":   Cayley part plus horoballs with coset index >= param
    """
    g = space.graph
    lmax = space.trunc.lmax
    if which == "thick":
        if not 0 <= param:
            raise ValueError("thick level must be >= 0")
        keep = [v for v in g.vertices if v.level <= param]
    elif which == "cusp":
        if param < 1:
            raise ValueError("cusp level must be >= 1")
        keep = [v for v in g.vertices if v.level >= param]
    elif which == "slice":
        if not 1 <= param <= lmax:
            raise ValueError(f"slice level must be in [1, {lmax}]")
        keep = [v for v in g.vertices if v.level == param]
    elif which == "tail":
        keep = [v for v in g.vertices if v.coset == 0 or v.coset >= param]
    else:
        raise ValueError(f"unknown subspace kind {which!r}")
    return g.induced_subgraph(keep, meta={**g.meta, "subspace": [which, param]})


def thick_vertices(space: AugmentedSpace, level: int) -> set[Vertex]:
    return {v for v in space.graph.vertices if v.level <= level}


def cusp_vertices(space: AugmentedSpace, level: int) -> set[Vertex]:
    return {v for v in space.graph.vertices if v.level >= level}


def slice_vertices(space: AugmentedSpace, level: int) -> set[Vertex]:
    return {v for v in space.graph.vertices if v.level == level}


def boundary_vertices(space: AugmentedSpace) -> set[Vertex]:
    """Outer shell of the truncation: the Cayley sphere at the ball radius,
    the top horoball slice, and Cayley vertices whose coset has no horoball."""
    g = space.graph
    spec = space.spec
    rg, lmax = space.trunc.rg, space.trunc.lmax
    attached_reps = {(e.atom, e.rep) for e in space.attached}
    out = set()
    for v in g.vertices:
        if v.level == lmax:
            out.add(v)
        elif v.level == 0:
            if len(v.element) == rg:
                out.add(v)
            elif not any(
                (atom, spec.coset_rep(v.element, atom)) in attached_reps
                for atom in space.peripherals
            ):
                out.add(v)
    return out


def interior_window(space: AugmentedSpace, scale: int) -> set[Vertex]:
    """Vertices at graph distance >= scale+1 from the truncation boundary.

    The margin grows linearly with the cover scale; the exponential margin
    2^(scale+1) empties every affordable truncation of a group with
    exponential growth, so the linear rule is used throughout.
    """
    g = space.graph
    boundary = boundary_vertices(space)
    if not boundary:
        return set(g.vertices)
    row = g.multi_source_distances(boundary)
    need = scale + 1
    return {g.vertices[i] for i, d in enumerate(row) if d < 0 or d >= need}
