"""Discretized open cones over finite subsets of a unit sphere.

A finite base metric space is embedded (exactly or with recorded distortion)
into the unit sphere of a small Euclidean space; the cone collects scalar
multiples of the base points on a dyadic parameter grid.  Level nets are
greedy 1-nets whose covering property is checked exhaustively, and the cone
covers at scale 3^i feed a nerve tower whose homology stabilization is
reported through the tower calculus.  Distance comparisons happen on squared
values, which are exact for dyadic fixtures.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .complexes import SimplicialComplex, SimplicialMap
from .errors import EmbeddingError
from .homology import DegreeCoordinates, induced_map
from .towers import Tower, direct_limit_report


@dataclass(frozen=True)
class ConePoint:
    ray: int  # index of the base point
    t: Fraction  # radial parameter

    def coords(self, base: np.ndarray) -> np.ndarray:
        return float(self.t) * base[self.ray]


@dataclass
class ConedSpace:
    base: np.ndarray  # unit vectors, one row per base point
    levels: int
    grid_step: Fraction
    distortion: float
    points: list[ConePoint] = field(default_factory=list)

    def __post_init__(self):
        if not self.points:
            step = self.grid_step
            pts = [ConePoint(0, Fraction(0))]  # the apex, once
            t = step
            while t <= self.levels:
                for ray in range(len(self.base)):
                    pts.append(ConePoint(ray, t))
                t += step
            self.points = pts
        self._xyz = np.array([p.coords(self.base) for p in self.points])

    def dist2(self, i: int, j: int) -> float:
        d = self._xyz[i] - self._xyz[j]
        return float(d @ d)

    def point_dist2(self, i: int, xyz: np.ndarray) -> float:
        d = self._xyz[i] - xyz
        return float(d @ d)

    def level_points(self, n: int) -> list[int]:
        """Indices of the exact level-n points (one per ray)."""
        return [
            i
            for i, p in enumerate(self.points)
            if p.t == n or (n == 0 and p.t == 0)
        ]

    def band_points(self, lo: Fraction, hi: Fraction) -> list[int]:
        return [i for i, p in enumerate(self.points) if lo <= p.t <= hi]


def embed_and_cone(
    dist_matrix,
    dim: int,
    levels: int,
    grid_step: Fraction = Fraction(1, 4),
    max_distortion: float = 1.5,
    coords=None,
) -> ConedSpace:
    """Embed a finite metric space in the unit sphere and build its cone.

    With explicit coordinates the embedding is taken as given (distortion
    still measured); otherwise a classical-scaling fit is used and the rows
    are normalized onto the sphere.  The achieved metric distortion (max
    expansion times max contraction) is recorded and gated.
    """
    d = np.asarray(dist_matrix, dtype=float)
    m = d.shape[0]
    if coords is not None:
        x = np.asarray(coords, dtype=float)
    else:
        # classical scaling, then radial projection to the sphere
        h = np.eye(m) - np.ones((m, m)) / m
        b = -0.5 * h @ (d**2) @ h
        w, v = np.linalg.eigh(b)
        idx = np.argsort(w)[::-1][:dim]
        w = np.clip(w[idx], 0, None)
        x = v[:, idx] * np.sqrt(w)
    norms = np.linalg.norm(x, axis=1)
    if (norms < 1e-9).any():
        x = x + 1e-6  # nudge a degenerate fit off the origin
        norms = np.linalg.norm(x, axis=1)
    x = x / norms[:, None]
    expansion = contraction = 1.0
    for i in range(m):
        for j in range(i + 1, m):
            e = float(np.linalg.norm(x[i] - x[j]))
            if d[i, j] > 0:
                expansion = max(expansion, e / d[i, j])
                contraction = max(contraction, d[i, j] / e if e > 0 else np.inf)
    distortion = float(expansion * contraction)
    if distortion > max_distortion:
        raise EmbeddingError(distortion, max_distortion)
    if grid_step >= Fraction(1, 2):
        raise ValueError("grid step must be below 1/2 for conclusive ball checks")
    return ConedSpace(x, levels, grid_step, distortion)


@dataclass
class LevelNet:
    level: int
    centers: list[int]  # point indices at the exact level
    covered: bool

    def as_dict(self):
        return {"level": self.level, "centers": len(self.centers), "covered": self.covered}


def build_net(cone: ConedSpace, level: int) -> LevelNet:
    """Greedy farthest-point 1-net on the exact level points, verified."""
    pts = cone.level_points(level)
    if not pts:
        raise ValueError(f"level {level} not populated")
    centers = [pts[0]]
    while True:
        best, best_d2 = None, 1.0
        for p in pts:
            d2 = min(cone.dist2(p, c) for c in centers)
            if d2 > best_d2:
                best, best_d2 = p, d2
        if best is None:
            break
        centers.append(best)
    covered = all(min(cone.dist2(p, c) for c in centers) <= 1.0 for p in pts)
    return LevelNet(level, centers, covered)


def band_cover_check(cone: ConedSpace, net: LevelNet, level: int) -> bool:
    """Radius-2 balls at the net centers cover the grid band one level out."""
    lo = Fraction(max(level - 1, 0))
    hi = Fraction(min(level + 1, cone.levels))
    band = cone.band_points(lo, hi)
    return all(
        min(cone.dist2(p, c) for c in net.centers) <= 4.0 for p in band
    )


@dataclass
class ConeCoverReport:
    scales: list[int]
    covering: list[bool]
    h0_tower: dict
    h1_tower: dict
    pen_inclusion: bool

    def as_dict(self):
        return {
            "scales": self.scales,
            "covering": self.covering,
            "h0_tower": self.h0_tower,
            "h1_tower": self.h1_tower,
            "pen_inclusion": self.pen_inclusion,
        }


def cone_cover_tower(
    cone: ConedSpace, nets: list[LevelNet], i_max: int, cap: int = 2
) -> ConeCoverReport:
    """Covers by 3^i-balls at all net centers and their nerve tower.

    Elements keep their center identity across scales, so the refinement
    maps are vertex-wise and simplicial; degree-0 and degree-1 homology
    towers are handed to the stabilization report.
    """
    centers = [c for net in nets for c in net.centers]
    complexes = []
    covering = []
    scales = list(range(1, i_max + 1))
    for i in scales:
        r2 = float(3**i) ** 2
        masks = []
        for c in centers:
            mask = 0
            for j in range(len(cone.points)):
                if cone.dist2(c, j) <= r2:
                    mask |= 1 << j
            masks.append(mask)
        union = 0
        for m in masks:
            union |= m
        covering.append(union == (1 << len(cone.points)) - 1)
        faces = []
        mcount = len(centers)
        adj = [0] * mcount
        for a in range(mcount):
            for b in range(a + 1, mcount):
                if masks[a] & masks[b]:
                    adj[a] |= 1 << b
                    adj[b] |= 1 << a

        def rec(face, common, cand):
            faces.append(tuple(face))
            if len(face) == cap + 1:
                return
            c = cand
            while c:
                j = (c & -c).bit_length() - 1
                c &= c - 1
                nc = common & masks[j]
                if nc:
                    rec(face + [j], nc, cand & adj[j] & -(1 << (j + 1)))

        for a in range(mcount):
            rec([a], masks[a], adj[a] & -(1 << (a + 1)))
        by_dim: list[list] = [[] for _ in range(cap + 1)]
        for f in faces:
            by_dim[len(f) - 1].append(f)
        complexes.append(SimplicialComplex(list(range(mcount)), by_dim, cap))
    towers = {}
    for degree in (0, 1):
        coords = [DegreeCoordinates(cx, degree) for cx in complexes]
        maps = []
        for k in range(len(complexes) - 1):
            smap = SimplicialMap(
                complexes[k],
                complexes[k + 1],
                list(range(len(centers))),
                check=True,
                name=f"refine{k}",
            )
            maps.append(induced_map(smap, degree, coords[k], coords[k + 1]))
        tower = Tower("inductive", [c.group for c in coords], maps)
        towers[degree] = direct_limit_report(tower).as_dict()
    # penumbra inclusion: cover elements are cut to cone points, so every
    # covered point is at distance zero from the cone, within every 3^i
    pen_ok = all(cone.dist2(c, c) == 0.0 for c in centers)
    return ConeCoverReport(scales, covering, towers[0], towers[1], pen_ok)


def cone_to_json(cone: ConedSpace) -> dict:
    return {
        "format": "horokit-cone",
        "version": 1,
        "base": [[float(x) for x in row] for row in cone.base],
        "levels": cone.levels,
        "grid_step": [cone.grid_step.numerator, cone.grid_step.denominator],
        "distortion": cone.distortion,
    }


def cone_from_json(data: dict) -> ConedSpace:
    step = Fraction(data["grid_step"][0], data["grid_step"][1])
    return ConedSpace(
        np.array(data["base"], dtype=float),
        int(data["levels"]),
        step,
        float(data.get("distortion", 1.0)),
    )


def cone_fixture(name: str, levels: int = 4) -> ConedSpace:
    """Named cone fixtures used across the verification suite."""
    if name == "two_rays":
        coords = np.array([[1.0], [-1.0]])
        dist = np.array([[0.0, 2.0], [2.0, 0.0]])
        return embed_and_cone(dist, 1, levels, coords=coords)
    if name == "circle4":
        coords = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])
        dist = np.array(
            [[np.linalg.norm(coords[i] - coords[j]) for j in range(4)] for i in range(4)]
        )
        return embed_and_cone(dist, 2, levels, coords=coords)
    if name == "graph6":
        # six-cycle graph metric, fit into three dimensions with distortion
        dist = np.array(
            [[min(abs(i - j), 6 - abs(i - j)) for j in range(6)] for i in range(6)]
        )
        return embed_and_cone(dist, 3, levels, max_distortion=4.0)
    raise KeyError(f"unknown cone fixture {name!r}")


def adversarial_net(cone: ConedSpace, level: int) -> LevelNet:
    """A deliberately broken net: one center only, first ray. Violates the
    level covering whenever another ray sits farther than distance one."""
    pts = cone.level_points(level)
    centers = [pts[0]]
    covered = all(min(cone.dist2(p, c) for c in centers) <= 1.0 for p in pts)
    return LevelNet(level, centers, covered)
