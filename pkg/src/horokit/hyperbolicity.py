"""Four-point hyperbolicity constants of finite metric graphs.

The exhaustive mode returns the exact four-point constant: the smallest
delta such that d(x,y)+d(z,w) <= max(d(x,z)+d(y,w), d(x,w)+d(y,z)) + 2*delta
over all vertex quadruples.  Scanning is organized per basepoint via the
(max,min) product of Gromov-product matrices; a quadruple realizing the
constant contains each of its points, so the maximum over basepoints is
exact.  When the first basepoint already gives zero, the standard
basepoint-change bound (a factor of two) certifies delta = 0 without
touching the remaining quadruples, which keeps large trees cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceededError, DisconnectedGraphError
from .graphs import MetricGraph, Vertex

EXHAUSTIVE_CELL_LIMIT = 40_000_000_000  # n^4 guard for the full scan


def gromov_product(graph: MetricGraph, x: Vertex, y: Vertex, base: Vertex) -> float:
    """(x|y) at the basepoint: half of d(x,base)+d(y,base)-d(x,y)."""
    dxw = graph.distance(x, base)
    dyw = graph.distance(y, base)
    dxy = graph.distance(x, y)
    if math.inf in (dxw, dyw, dxy):
        raise DisconnectedGraphError("gromov product needs a common component")
    return (dxw + dyw - dxy) / 2


@dataclass(frozen=True)
class DeltaEstimate:
    delta: float
    mode: str  # "exhaustive" | "sampled"
    quadruples_checked: int
    method: str = "scan"
    samples: int | None = None
    seed: int | None = None
    truncation: dict = field(default_factory=dict)

    def as_dict(self):
        out = {
            "delta": self.delta,
            "mode": self.mode,
            "quadruples_checked": self.quadruples_checked,
            "method": self.method,
            "truncation": self.truncation,
        }
        if self.mode == "sampled":
            out["samples"] = self.samples
            out["seed"] = self.seed
        return out


def _doubled_products(dist: np.ndarray, p: int) -> np.ndarray:
    # 2*(x|y)_p as integers
    col = dist[p].astype(np.int64)
    return col[:, None] + col[None, :] - dist.astype(np.int64)


def _basepoint_doubled_delta(dist: np.ndarray, p: int) -> int:
    """Max over x,y,z of min((x|z)_p,(z|y)_p) - (x|y)_p, doubled.

    Equals the largest doubled four-point defect among quadruples containing
    the basepoint p.
    """
    a = _doubled_products(dist, p)
    n = a.shape[0]
    best = np.full((n, n), np.iinfo(np.int64).min, dtype=np.int64)
    for z in range(n):
        np.maximum(best, np.minimum(a[:, z][:, None], a[z, :][None, :]), out=best)
    return int((best - a).max())


def _distance_matrix(graph: MetricGraph) -> np.ndarray:
    dist = graph.distance_matrix()
    if (dist < 0).any():
        raise DisconnectedGraphError("four-point scan needs a connected graph")
    return dist


def four_point_delta(
    graph: MetricGraph,
    mode: str = "exhaustive",
    samples: int = 100_000,
    seed: int = 0,
    truncation: dict | None = None,
) -> DeltaEstimate:
    """Four-point constant, exact (exhaustive) or a sampled lower bound."""
    n = len(graph)
    trunc = dict(truncation or {})
    trunc.setdefault("vertices", n)
    total = math.comb(n, 4)
    if n < 4:
        return DeltaEstimate(0.0, mode, 0, method="degenerate", truncation=trunc)
    if mode == "exhaustive":
        dist = _distance_matrix(graph)
        ecc = dist.max(axis=1)
        p0 = int(ecc.argmax())
        d0 = _basepoint_doubled_delta(dist, p0)
        if d0 == 0:
            # basepoint-change: delta <= 2 * (basepoint constant) = 0
            return DeltaEstimate(
                0.0, "exhaustive", total, method="basepoint-certificate", truncation=trunc
            )
        if float(n) ** 4 > EXHAUSTIVE_CELL_LIMIT:
            raise BudgetExceededError(
                f"exhaustive scan of {n} vertices is over budget; use sampled mode"
            )
        best = d0
        for p in range(n):
            if p != p0:
                best = max(best, _basepoint_doubled_delta(dist, p))
        return DeltaEstimate(best / 2, "exhaustive", total, method="scan", truncation=trunc)
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    dist = _distance_matrix(graph).astype(np.int64)
    rng = np.random.default_rng(seed)
    best = 0
    remaining = samples
    batch = 65_536
    while remaining > 0:
        m = min(batch, remaining)
        remaining -= m
        quad = rng.integers(0, n, size=(m, 4))
        x, y, z, w = quad.T
        s1 = dist[x, y] + dist[z, w]
        s2 = dist[x, z] + dist[y, w]
        s3 = dist[x, w] + dist[y, z]
        gap = s1 - np.maximum(s2, s3)
        np.maximum(gap, s2 - np.maximum(s1, s3), out=gap)
        np.maximum(gap, s3 - np.maximum(s1, s2), out=gap)
        best = max(best, int(gap.max()))
    return DeltaEstimate(
        best / 2,
        "sampled",
        samples,
        method="uniform-quadruples",
        samples=samples,
        seed=seed,
        truncation=trunc,
    )
