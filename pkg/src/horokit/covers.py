"""Column covers of augmented spaces, their nerves, and connecting maps.

A column is the cover element centered at a vertex: around a horoball vertex
(x,t) at scale j it collects the same-coset vertices (y,l) with the group
distance d(x,y) <= 2^(t+j) and t <= l <= t+j; around a Cayley vertex the
window is d(x,y) <= 2^j, 0 <= l <= j over the whole space.  Column vertex
sets are bitmasks over the carrier's vertex order, so nerve faces and
contiguity reduce to integer AND.  Covers are formal families indexed by
centers: distinct centers stay distinct nerve vertices even when their
vertex sets coincide.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .complexes import SimplicialComplex, SimplicialMap
from .errors import (
    BudgetExceededError,
    DecompositionError,
    ScheduleMismatchError,
    vertex_budget,
)
from .graphs import Vertex
from .spaces import AugmentedSpace


@dataclass(frozen=True)
class Column:
    center: Vertex
    scale: int
    mask: int

    @property
    def size(self) -> int:
        return bin(self.mask).count("1")


class Cover:
    """All columns of one scale over an augmented space."""

    def __init__(self, space: AugmentedSpace, scale: int, columns: tuple[Column, ...]):
        self.space = space
        self.scale = scale
        self.columns = columns
        self.pos = {c.center: i for i, c in enumerate(columns)}

    def __len__(self):
        return len(self.columns)

    def level_mask(self, lo: int | None = None, hi: int | None = None) -> int:
        mask = 0
        for i, v in enumerate(self.space.graph.vertices):
            if (lo is None or v.level >= lo) and (hi is None or v.level <= hi):
                mask |= 1 << i
        return mask

    def family(self, name: str, positions: Iterable[int]) -> "Family":
        return Family(self, name, tuple(sorted(set(positions))))

    def whole(self) -> "Family":
        return Family(self, "whole", tuple(range(len(self.columns))))

    def meeting(self, region_mask: int, name: str) -> "Family":
        return Family(
            self,
            name,
            tuple(i for i, c in enumerate(self.columns) if c.mask & region_mask),
        )


@dataclass(frozen=True)
class Family:
    """A named subfamily of a cover; nerve vertices are its columns."""

    cover: Cover
    name: str
    positions: tuple[int, ...]

    def __len__(self):
        return len(self.positions)

    @property
    def columns(self) -> list[Column]:
        return [self.cover.columns[p] for p in self.positions]

    @property
    def centers(self) -> list[Vertex]:
        return [self.cover.columns[p].center for p in self.positions]

    def index_of_center(self, center: Vertex) -> int:
        p = self.cover.pos.get(center)
        if p is None:
            raise KeyError(f"no column centered at {center}")
        try:
            return self.positions.index(p)
        except ValueError:
            raise KeyError(f"column {center} not in family {self.name!r}") from None

    def restrict_to_centers(self, centers: Iterable[Vertex], name: str) -> "Family":
        wanted = set(centers)
        return Family(
            self.cover,
            name,
            tuple(p for p in self.positions if self.cover.columns[p].center in wanted),
        )

    def union_mask(self) -> int:
        out = 0
        for c in self.columns:
            out |= c.mask
        return out


def build_cover(space: AugmentedSpace, scale: int, budget: int | None = None) -> Cover:
    """One column per vertex of the carrier; cached per space and scale."""
    if scale < 1:
        raise ValueError("cover scale must be >= 1")
    cached = space._covers.get(scale)
    if cached is not None:
        return cached
    g = space.graph
    cap = vertex_budget(budget)
    if len(g) > cap:
        raise BudgetExceededError(f"carrier exceeds vertex budget {cap}")
    by_coset: dict[int, list[tuple[int, Vertex]]] = {}
    for i, v in enumerate(g.vertices):
        if v.coset:
            by_coset.setdefault(v.coset, []).append((i, v))
    columns = []
    for v in g.vertices:
        if v.level == 0:
            reach = 2**scale
            mask = 0
            for i, w in enumerate(g.vertices):
                if w.level <= scale and space.element_distance(v.element, w.element) <= reach:
                    mask |= 1 << i
        else:
            reach = 2 ** (v.level + scale)
            lo, hi = v.level, v.level + scale
            mask = 0
            for i, w in by_coset.get(v.coset, ()):
                if lo <= w.level <= hi and space.element_distance(v.element, w.element) <= reach:
                    mask |= 1 << i
        columns.append(Column(v, scale, mask))
    cover = Cover(space, scale, tuple(columns))
    space._covers[scale] = cover
    return cover


# -- schedules ---------------------------------------------------------------


@dataclass(frozen=True)
class Schedule:
    name: str
    scale_fn: Callable[[int], int]
    slice_fn: Callable[[int], int]

    def scale(self, n: int) -> int:
        return self.scale_fn(n)

    def slice_level(self, n: int) -> int:
        return self.slice_fn(n)


PAPER_SCHEDULE = Schedule("paper", lambda n: 3**n, lambda n: 3**n + 1)
LINEAR_SCHEDULE = Schedule("linear", lambda n: n + 1, lambda n: n + 2)

SCHEDULES = {"paper": PAPER_SCHEDULE, "linear": LINEAR_SCHEDULE}


@dataclass(frozen=True)
class Decomposition:
    stage: int
    scale: int
    slice_level: int
    whole: Family
    thick: Family  # columns meeting levels <= N
    cusp: Family  # columns meeting levels >= N
    interface: Family  # columns meeting level N exactly
    clusters: dict[int, Family]  # interface split by horoball


def decompose(space: AugmentedSpace, n: int, schedule: Schedule) -> Decomposition:
    """Split the scale-j_n cover by the level-N_n slice and verify the
    excision identities as exact set equalities of column families."""
    scale = schedule.scale(n)
    level = schedule.slice_level(n)
    if level <= scale:
        raise ScheduleMismatchError(
            f"slice level {level} must exceed scale {scale} for a clean split"
        )
    cover = build_cover(space, scale)
    thick_mask = cover.level_mask(hi=level)
    cusp_mask = cover.level_mask(lo=level)
    slice_mask = cover.level_mask(lo=level, hi=level)
    whole = cover.whole()
    thick = cover.meeting(thick_mask, f"thick[{n}]")
    cusp = cover.meeting(cusp_mask, f"cusp[{n}]")
    interface = cover.meeting(slice_mask, f"interface[{n}]")
    if set(thick.positions) | set(cusp.positions) != set(whole.positions):
        raise DecompositionError("thick and cusp families do not cover the whole")
    if set(thick.positions) & set(cusp.positions) != set(interface.positions):
        raise DecompositionError("thick-cusp overlap differs from the interface")
    clusters: dict[int, list[int]] = {}
    for p in interface.positions:
        c = cover.columns[p]
        if c.center.coset == 0:
            raise DecompositionError(
                "a Cayley column meets the slice; schedule too shallow"
            )
        clusters.setdefault(c.center.coset, []).append(p)
    cluster_fams = {
        i: cover.family(f"interface[{n}]@{i}", ps) for i, ps in sorted(clusters.items())
    }
    return Decomposition(n, scale, level, whole, thick, cusp, interface, cluster_fams)


# -- nerves ------------------------------------------------------------------


def iter_faces(family: Family, cap: int):
    """All nerve faces of the family up to the cap, as local index tuples."""
    masks = [c.mask for c in family.columns]
    m = len(masks)
    adj = [0] * m
    for i in range(m):
        mi = masks[i]
        for j in range(i + 1, m):
            if mi & masks[j]:
                adj[i] |= 1 << j
                adj[j] |= 1 << i

    def rec(face, common, cand):
        yield tuple(face)
        if len(face) == cap + 1:
            return
        c = cand
        while c:
            j = (c & -c).bit_length() - 1
            c &= c - 1
            nc = common & masks[j]
            if nc:
                yield from rec(face + [j], nc, cand & adj[j] & -(1 << (j + 1)))

    for i in range(m):
        yield from rec([i], masks[i], adj[i] & -(1 << (i + 1)))


def nerve(family: Family, cap: int = 3, budget: int | None = None) -> SimplicialComplex:
    """Nerve of the family: a simplex per subfamily with common intersection.

    The span test answers from column masks, so spans of vertex sets larger
    than the cap stay decidable (contiguity needs that).
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    limit = vertex_budget(budget) * 10 if budget is None else budget
    masks = [c.mask for c in family.columns]
    by_dim: list[list[tuple[int, ...]]] = [[] for _ in range(cap + 1)]
    count = 0
    truncated = False
    for face in iter_faces(family, cap + 1):
        if len(face) == cap + 2:
            truncated = True
            continue
        by_dim[len(face) - 1].append(face)
        count += 1
        if count > limit:
            raise BudgetExceededError(f"nerve exceeds face budget {limit}")

    def span_test(vertices: tuple[int, ...]) -> bool:
        common = -1
        for v in vertices:
            common &= masks[v]
            if common == 0:
                return False
        return True

    return SimplicialComplex(
        tuple(family.centers), by_dim, cap, span_test=span_test, truncated_at_cap=truncated
    )


def lazy_boundary_columns(family: Family, p: int, face_index: dict):
    """Boundary columns of the family's p-faces against a prebuilt index of
    (p-1)-faces, enumerated lazily (the p-faces are never stored)."""
    for face in iter_faces(family, p):
        if len(face) != p + 1:
            continue
        col = {}
        for i in range(len(face)):
            sub = face[:i] + face[i + 1 :]
            col[face_index[sub]] = -1 if i % 2 else 1
        yield col


# -- connecting maps ---------------------------------------------------------


@dataclass(frozen=True)
class CoverMap:
    """A map of cover families given on centers; simplicial by mask check."""

    source: Family
    target: Family
    center_map: Callable[[Vertex], Vertex]
    name: str = ""

    def image_positions(self) -> list[int]:
        out = []
        for c in self.source.columns:
            out.append(self.target.index_of_center(self.center_map(c.center)))
        return out

    def verify_simplicial(self, cap: int):
        """Image of every source face (up to cap) spans a target face."""
        images = self.image_positions()
        tmasks = [c.mask for c in self.target.columns]
        for face in iter_faces(self.source, cap):
            common = -1
            for v in face:
                common &= tmasks[images[v]]
            if common == 0:
                return tuple(self.source.centers[v] for v in face)
        return None

    def to_simplicial_map(
        self,
        source_nerve: SimplicialComplex,
        target_nerve: SimplicialComplex,
        check: bool = True,
    ) -> SimplicialMap:
        images = []
        tpos = {c: i for i, c in enumerate(target_nerve.labels)}
        for c in source_nerve.labels:
            images.append(tpos[self.center_map(c)])
        return SimplicialMap(
            source_nerve, target_nerve, images, check=check, name=self.name
        )

    def compose(self, other: "CoverMap") -> "CoverMap":
        """self after other."""
        if other.target.cover is not self.source.cover:
            raise ValueError("composition needs matching covers")
        inner, outer = other.center_map, self.center_map
        return CoverMap(
            other.source,
            self.target,
            lambda v: outer(inner(v)),
            name=f"{self.name}*{other.name}",
        )


def contiguous_cover_maps(f: CoverMap, g: CoverMap, cap: int):
    """(True, None) when f(s) | g(s) has common intersection for each source
    face s up to the cap; otherwise (False, witness centers)."""
    if f.source is not g.source and f.source.positions != g.source.positions:
        raise ValueError("contiguity needs a common source family")
    fi = f.image_positions()
    gi = g.image_positions()
    if f.target.cover is not g.target.cover:
        raise ValueError("contiguity needs a common target cover")
    tmasks = [c.mask for c in f.target.columns]
    gmasks = [c.mask for c in g.target.columns]
    for face in iter_faces(f.source, cap):
        common = -1
        for v in face:
            common &= tmasks[fi[v]]
            common &= gmasks[gi[v]]
            if common == 0:
                return False, tuple(f.source.centers[v] for v in face)
    return True, None


def _thick_meeting(space: AugmentedSpace, level: int, scale: int, name: str) -> Family:
    cover = build_cover(space, scale)
    return cover.meeting(cover.level_mask(hi=level), name)


def _cusp_meeting(space: AugmentedSpace, level: int, scale: int, name: str) -> Family:
    cover = build_cover(space, scale)
    return cover.meeting(cover.level_mask(lo=level), name)


def connecting_map(
    space: AugmentedSpace,
    kind: str,
    n: int,
    schedule: Schedule = PAPER_SCHEDULE,
    s: int | None = None,
) -> CoverMap:
    """The stage maps between cover families.

    kind = "refine":    whole cover at scale j_n -> whole cover at j_{n+1},
                        column-wise inclusion by center identity.
    kind = "inclusion": columns meeting the level-1 thick part at scale j_n
                        includes into those meeting the level-N_n thick part.
    kind = "collar":    level-N_n-meeting columns at j_n map to level-1-meeting
                        columns at j_{n+1}; horoball centers drop to level 1.
    kind = "stage-refine": level-N_n family at j_n to level-N_{n+1} at j_{n+1}
                        by center identity.
    kind = "floor":     cusp families; centers below level s are raised to s
                        (requires s within the truncation depth).
    """
    j_n, j_next = schedule.scale(n), schedule.scale(n + 1)
    level_n, level_next = schedule.slice_level(n), schedule.slice_level(n + 1)
    if kind == "refine":
        src = build_cover(space, j_n).whole()
        tgt = build_cover(space, j_next).whole()
        return CoverMap(src, tgt, lambda v: v, name=f"refine[{n}]")
    if kind == "inclusion":
        src = _thick_meeting(space, 1, j_n, f"near-base[{n}]")
        tgt = _thick_meeting(space, level_n, j_n, f"thick[{n}]")
        return CoverMap(src, tgt, lambda v: v, name=f"inclusion[{n}]")
    if kind == "collar":
        src = _thick_meeting(space, level_n, j_n, f"thick[{n}]")
        tgt = _thick_meeting(space, 1, j_next, f"near-base[{n + 1}]")

        def drop(v: Vertex) -> Vertex:
            return v if v.level == 0 else Vertex(v.element, 1, v.coset)

        return CoverMap(src, tgt, drop, name=f"collar[{n}]")
    if kind == "stage-refine":
        src = _thick_meeting(space, level_n, j_n, f"thick[{n}]")
        tgt = _thick_meeting(space, level_next, j_next, f"thick[{n + 1}]")
        return CoverMap(src, tgt, lambda v: v, name=f"stage-refine[{n}]")
    if kind == "floor":
        if s is None or s < 0:
            raise ValueError("floor map needs s >= 0")
        if s > space.trunc.lmax:
            raise ValueError(f"floor level {s} beyond truncation depth {space.trunc.lmax}")
        src = _cusp_meeting(space, level_n, j_n, f"cusp[{n}]")
        tgt = _cusp_meeting(space, level_next, j_next, f"cusp[{n + 1}]")

        def raise_floor(v: Vertex) -> Vertex:
            return v if v.level >= s else Vertex(v.element, s, v.coset)

        return CoverMap(src, tgt, raise_floor, name=f"floor[{n},{s}]")
    raise ValueError(f"unknown connecting map kind {kind!r}")
