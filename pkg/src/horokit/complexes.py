"""Abstract finite simplicial complexes, vertex maps, and subdivision.

Faces are stored per dimension as sorted tuples of local vertex indices, up
to a recorded dimension cap.  A complex may carry a ``span_test`` deciding
whether an arbitrary vertex set spans a simplex (nerves answer this from
column intersections, so spans beyond the cap remain decidable).
"""

from __future__ import annotations

import json
from itertools import combinations
from typing import Callable, Iterable, Sequence

from .errors import MapDomainMismatchError, NotSimplicialError


class SimplicialComplex:
    def __init__(
        self,
        labels: Sequence,
        faces_by_dim: Sequence[Iterable[tuple[int, ...]]],
        cap: int,
        span_test: Callable[[tuple[int, ...]], bool] | None = None,
        truncated_at_cap: bool = False,
    ):
        self.labels = tuple(labels)
        self.cap = cap
        self.truncated_at_cap = truncated_at_cap
        self.faces: list[list[tuple[int, ...]]] = []
        for p, faces in enumerate(faces_by_dim):
            fs = sorted({tuple(sorted(f)) for f in faces})
            for f in fs:
                if len(f) != p + 1:
                    raise ValueError(f"face {f} has wrong dimension for slot {p}")
            self.faces.append(fs)
        while len(self.faces) <= cap:
            self.faces.append([])
        self.face_index: list[dict[tuple[int, ...], int]] = [
            {f: i for i, f in enumerate(fs)} for fs in self.faces
        ]
        self._span_test = span_test

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_faces(labels: Sequence, faces: Iterable[Sequence[int]], cap: int | None = None):
        """Downward closure of the given faces (local vertex indices)."""
        faces = [tuple(sorted(set(f))) for f in faces]
        top = max((len(f) - 1 for f in faces), default=0)
        if cap is None:
            cap = top
        by_dim: list[set] = [set() for _ in range(cap + 1)]
        for i in range(len(labels)):
            by_dim[0].add((i,))
        for f in faces:
            for k in range(1, min(len(f), cap + 1) + 1):
                for sub in combinations(f, k):
                    by_dim[k - 1].add(sub)
        return SimplicialComplex(
            labels, by_dim, cap, truncated_at_cap=top > cap
        )

    @staticmethod
    def from_label_faces(faces: Iterable[Sequence], cap: int | None = None):
        labels = sorted({v for f in faces for v in f}, key=repr)
        pos = {v: i for i, v in enumerate(labels)}
        return SimplicialComplex.from_faces(
            labels, [[pos[v] for v in f] for f in faces], cap
        )

    # -- queries ------------------------------------------------------------

    @property
    def dim(self) -> int:
        for p in range(len(self.faces) - 1, -1, -1):
            if self.faces[p]:
                return p
        return -1

    def n_faces(self, p: int) -> int:
        return len(self.faces[p]) if 0 <= p < len(self.faces) else 0

    def has_face(self, vertices: Iterable[int]) -> bool:
        f = tuple(sorted(set(vertices)))
        p = len(f) - 1
        return 0 <= p < len(self.faces) and f in self.face_index[p]

    def spans(self, vertices: Iterable[int]) -> bool:
        """Whether the vertex set spans a simplex, beyond the cap if needed."""
        f = tuple(sorted(set(vertices)))
        if self._span_test is not None:
            return self._span_test(f)
        if len(f) - 1 <= self.cap:
            return self.has_face(f)
        if not self.truncated_at_cap:
            return False  # face lists are complete, so absence is decisive
        raise ValueError(
            f"cannot decide span of {len(f)} vertices beyond cap {self.cap}"
        )

    def boundary_columns(self, p: int) -> list[dict[int, int]]:
        """Columns of the boundary map C_p -> C_{p-1} as {row: coefficient}."""
        if p <= 0 or p >= len(self.faces):
            return [{} for _ in range(self.n_faces(max(p, 0)))] if p == 0 else []
        idx = self.face_index[p - 1]
        cols = []
        for f in self.faces[p]:
            col = {}
            for i in range(len(f)):
                sub = f[:i] + f[i + 1 :]
                col[idx[sub]] = -1 if i % 2 else 1
            cols.append(col)
        return cols

    def boundary_dense(self, p: int):
        import numpy as np

        rows = self.n_faces(p - 1) if p >= 1 else 0
        cols = self.boundary_columns(p)
        mat = np.zeros((rows, len(cols)), dtype=object)
        for j, col in enumerate(cols):
            for r, v in col.items():
                mat[r, j] = v
        return mat

    def components(self) -> list[int]:
        """Component id per vertex, from the 1-skeleton."""
        parent = list(range(len(self.labels)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for a, b in self.faces[1] if len(self.faces) > 1 else []:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        roots = {}
        out = []
        for i in range(len(self.labels)):
            r = find(i)
            out.append(roots.setdefault(r, len(roots)))
        return out

    def induced(self, keep: Iterable[int]) -> tuple["SimplicialComplex", dict[int, int]]:
        keep = sorted(set(keep))
        remap = {old: new for new, old in enumerate(keep)}
        by_dim = []
        for fs in self.faces:
            by_dim.append(
                [tuple(remap[v] for v in f) for f in fs if all(v in remap for v in f)]
            )
        labels = [self.labels[i] for i in keep]
        return SimplicialComplex(labels, by_dim, self.cap), remap

    def to_json(self) -> dict:
        return {
            "format": "horokit-complex",
            "version": 1,
            "labels": [repr(l) for l in self.labels],
            "cap": self.cap,
            "faces": [[list(f) for f in fs] for fs in self.faces],
        }


def full_simplex(n: int) -> SimplicialComplex:
    """The genuine n-vertex full simplex (all faces, no cap truncation)."""
    return SimplicialComplex.from_faces(list(range(n)), [tuple(range(n))])


class SimplicialMap:
    """A vertex map between complexes, checked to send simplices to simplices."""

    def __init__(
        self,
        source: SimplicialComplex,
        target: SimplicialComplex,
        vertex_images: Sequence[int],
        check: bool = True,
        name: str = "",
    ):
        if len(vertex_images) != len(source.labels):
            raise ValueError("need one image per source vertex")
        self.source = source
        self.target = target
        self.vertex_images = tuple(vertex_images)
        self.name = name
        if check:
            self.verify()

    def verify(self):
        for fs in self.source.faces:
            for f in fs:
                image = {self.vertex_images[v] for v in f}
                if not self.target.spans(image):
                    raise NotSimplicialError(
                        tuple(self.source.labels[v] for v in f),
                        f"map {self.name or '<anon>'} is not simplicial",
                    )

    def chain_columns(self, p: int) -> list[dict[int, int]]:
        """Matrix of the induced chain map in degree p (degenerate -> 0)."""
        cols = []
        tgt_index = self.target.face_index[p] if p < len(self.target.faces) else {}
        for f in self.source.faces[p]:
            image = [self.vertex_images[v] for v in f]
            if len(set(image)) < len(image):
                cols.append({})
                continue
            order = sorted(range(len(image)), key=lambda i: image[i])
            sign = _permutation_sign(order)
            key = tuple(image[i] for i in order)
            if key not in tgt_index:
                raise NotSimplicialError(
                    tuple(self.source.labels[v] for v in f),
                    "image simplex missing from target (cap too low?)",
                )
            cols.append({tgt_index[key]: sign})
        return cols

    def compose(self, other: "SimplicialMap") -> "SimplicialMap":
        """self after other (other first)."""
        if other.target is not self.source:
            raise MapDomainMismatchError("composition needs matching middle complex")
        images = tuple(self.vertex_images[v] for v in other.vertex_images)
        return SimplicialMap(
            other.source, self.target, images, check=False,
            name=f"{self.name}*{other.name}",
        )

    def to_csv_rows(self):
        for v, w in enumerate(self.vertex_images):
            yield (repr(self.source.labels[v]), repr(self.target.labels[w]))

    def to_csv(self, path) -> None:
        import csv

        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["source", "target"])
            w.writerows(self.to_csv_rows())


def _permutation_sign(order: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(order)
    for i in range(len(order)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def contiguous(f: SimplicialMap, g: SimplicialMap):
    """Contiguity: f(s) | g(s) spans a target simplex for every source face.

    Returns (True, None) or (False, witness face as label tuple).
    """
    if f.source is not g.source or f.target is not g.target:
        raise MapDomainMismatchError("contiguity needs shared source and target")
    for fs in f.source.faces:
        for face in fs:
            union = {f.vertex_images[v] for v in face} | {
                g.vertex_images[v] for v in face
            }
            if not f.target.spans(union):
                return False, tuple(f.source.labels[v] for v in face)
    return True, None


def barycentric_subdivision(c: SimplicialComplex, times: int = 1) -> SimplicialComplex:
    """Iterated barycentric subdivision; vertices of the result are faces."""
    if times < 0:
        raise ValueError("times must be >= 0")
    for _ in range(times):
        c = _subdivide_once(c)
    return c


def _subdivide_once(c: SimplicialComplex) -> SimplicialComplex:
    # vertices of the subdivision are faces of c; its k-simplices are strict
    # chains f0 < f1 < ... < fk of faces under inclusion
    all_faces = [f for fs in c.faces for f in fs]
    pos = {f: i for i, f in enumerate(all_faces)}
    labels = [tuple(c.labels[v] for v in f) for f in all_faces]
    chains: list[tuple[int, ...]] = []

    def grow(chain: list[tuple[int, ...]]):
        chains.append(tuple(sorted(pos[f] for f in chain)))
        smallest = chain[-1]
        for k in range(1, len(smallest)):
            for g in combinations(smallest, k):
                grow(chain + [g])

    for f in all_faces:
        grow([f])
    top = max(len(ch) for ch in chains)
    by_dim: list[set] = [set() for _ in range(top)]
    for ch in chains:
        by_dim[len(ch) - 1].add(ch)
    return SimplicialComplex(labels, by_dim, cap=top - 1)
