"""Rips complexes over leveled metric graphs and the window decompositions.

Faces of the Rips complex at parameter D are the vertex sets of diameter at
most D (graph metric), up to a dimension cap.  Level windows select the full
subcomplexes on deep vertices (level >= r), shallow-plus-group vertices
(level <= R), and the band between.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .complexes import SimplicialComplex, barycentric_subdivision  # noqa: F401
from .errors import BudgetExceededError, vertex_budget
from .graphs import MetricGraph
from .homology import homology_type


@dataclass(frozen=True)
class LevelWindow:
    low: int  # r
    high: int  # R

    def __post_init__(self):
        if not (1 <= self.low <= self.high):
            raise ValueError("window needs 1 <= r <= R")


def rips(graph: MetricGraph, diameter: int, cap: int = 3, budget: int | None = None) -> SimplicialComplex:
    """Rips complex: faces are subsets of diameter <= the parameter."""
    if diameter < 1:
        raise ValueError("diameter parameter must be >= 1")
    n = len(graph)
    dist = graph.distance_matrix()
    adj = [0] * n
    for i in range(n):
        row = dist[i]
        for j in range(i + 1, n):
            if 0 <= row[j] <= diameter:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    limit = vertex_budget(budget) * 10 if budget is None else budget
    by_dim: list[list[tuple[int, ...]]] = [[] for _ in range(cap + 1)]
    count = 0
    truncated = False

    def rec(face, cand):
        nonlocal count, truncated
        by_dim[len(face) - 1].append(tuple(face))
        count += 1
        if count > limit:
            raise BudgetExceededError(f"rips complex exceeds face budget {limit}")
        if len(face) == cap + 1:
            if cand:
                truncated = True
            return
        c = cand
        while c:
            j = (c & -c).bit_length() - 1
            c &= c - 1
            rec(face + [j], cand & adj[j] & -(1 << (j + 1)))

    for i in range(n):
        rec([i], adj[i] & -(1 << (i + 1)))

    def span_test(vertices):
        for a in vertices:
            for b in vertices:
                if a < b and not (adj[a] >> b) & 1:
                    return False
        return True

    return SimplicialComplex(
        graph.vertices, by_dim, cap, span_test=span_test, truncated_at_cap=truncated
    )


def _window_vertices(complex_: SimplicialComplex, window: LevelWindow, which: str):
    if which == "lower":  # deep part: levels >= r
        keep = [i for i, v in enumerate(complex_.labels) if v.level >= window.low]
    elif which == "upper":  # group part plus levels <= R
        keep = [i for i, v in enumerate(complex_.labels) if v.level <= window.high]
    elif which == "band":  # levels r..R, no group vertices
        keep = [
            i
            for i, v in enumerate(complex_.labels)
            if window.low <= v.level <= window.high
        ]
    else:
        raise ValueError(f"unknown window selector {which!r}")
    return keep


def full_subcomplex(
    complex_: SimplicialComplex, window: LevelWindow, which: str
) -> SimplicialComplex:
    """Full subcomplex on the window's vertex selection."""
    keep = _window_vertices(complex_, window, which)
    sub, _ = complex_.induced(keep)
    return sub


@dataclass
class DecompositionCheck:
    union_ok: bool
    band_ok: bool
    witnesses: list[tuple] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.union_ok and self.band_ok

    def as_dict(self):
        return {
            "union_ok": self.union_ok,
            "band_ok": self.band_ok,
            "witnesses": [[repr(v) for v in w] for w in self.witnesses],
        }


def remark_decomposition_check(
    graph: MetricGraph, diameter: int, low: int, high: int, cap: int = 3
) -> DecompositionCheck:
    """Face-set identities of the window decomposition of a Rips complex.

    Checks that every face lies in the deep or the shallow subcomplex, and
    that the band subcomplex carries exactly the faces common to both,
    comparing materialized face sets.  Returns failing faces as witnesses
    (at most ten).
    """
    window = LevelWindow(low, high)
    c = rips(graph, diameter, cap)
    levels = [v.level for v in c.labels]
    union_ok = True
    witnesses = []

    def label_faces(sub):
        return {
            frozenset(sub.labels[v] for v in f) for fs in sub.faces for f in fs
        }

    lower_faces = label_faces(full_subcomplex(c, window, "lower"))
    upper_faces = label_faces(full_subcomplex(c, window, "upper"))
    band_faces = label_faces(full_subcomplex(c, window, "band"))
    for fs in c.faces:
        for f in fs:
            lf = frozenset(c.labels[v] for v in f)
            if lf not in lower_faces and lf not in upper_faces:
                union_ok = False
                if len(witnesses) < 10:
                    witnesses.append(tuple(c.labels[v] for v in f))
    band_ok = band_faces == (lower_faces & upper_faces)
    if not band_ok:
        for lf in (band_faces ^ (lower_faces & upper_faces)):
            if len(witnesses) < 10:
                witnesses.append(tuple(lf))
    return DecompositionCheck(union_ok, band_ok, witnesses)


@dataclass
class ContractibilityProxy:
    reduced_betti: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...]
    proxy_contractible: bool
    top_degree_cap_limited: bool

    def as_dict(self):
        return {
            "reduced_betti": list(self.reduced_betti),
            "torsion": [list(t) for t in self.torsion],
            "proxy_contractible": self.proxy_contractible,
            "top_degree_cap_limited": self.top_degree_cap_limited,
        }


def contractibility_proxy(complex_: SimplicialComplex) -> ContractibilityProxy:
    """Reduced Betti numbers up to the cap; a proxy, not a contractibility proof.

    When face enumeration was truncated at the cap, the top degree reports
    the homology of the cap-skeleton only; the verdict then ignores it.
    """
    if not complex_.labels:
        raise ValueError("empty complex")
    betti = []
    torsion = []
    for p in range(complex_.cap + 1):
        g = homology_type(complex_, p, reduced=True)
        betti.append(g.rank)
        torsion.append(g.torsion)
    judged = complex_.cap if complex_.truncated_at_cap else complex_.cap + 1
    proxy = all(b == 0 for b in betti[:judged]) and all(
        not t for t in torsion[:judged]
    )
    return ContractibilityProxy(
        tuple(betti), tuple(torsion), proxy, complex_.truncated_at_cap
    )
