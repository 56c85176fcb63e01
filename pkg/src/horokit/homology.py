"""Integer simplicial homology and maps between homology groups.

Group types (rank plus invariant factors) come from sparse eliminations of
the boundary matrices.  Where induced maps are needed, a coordinate system
is built per degree: a kernel basis of the boundary (components in degree 0,
fundamental cycles of a spanning forest in degree 1, a dense integer kernel
above), the boundary image expressed in those coordinates, and the Smith
row transform of that expression.  Classes of cycles are then plain integer
vectors reduced modulo the invariant factors.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .complexes import SimplicialComplex, SimplicialMap
from .snf import (
    column_hnf,
    kernel_basis,
    lattice_contains,
    lattice_equal,
    lattice_sum,
    smith_normal_form,
    sparse_diagonal,
)


@dataclass(frozen=True)
class AbelianGroup:
    """Finitely generated abelian group in invariant-factor form."""

    rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion {self.torsion} is not a divisibility chain")
        if any(t < 2 for t in self.torsion):
            raise ValueError("torsion coefficients must be > 1")

    @property
    def dim(self) -> int:
        return self.rank + len(self.torsion)

    @property
    def orders(self) -> tuple[int, ...]:
        # torsion coordinates first, then 0 for each free coordinate
        return self.torsion + (0,) * self.rank

    @property
    def is_trivial(self) -> bool:
        return self.dim == 0

    def __str__(self):
        parts = [f"Z/{t}" for t in self.torsion]
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        return " + ".join(parts) if parts else "0"

    def as_dict(self):
        return {"rank": self.rank, "torsion": list(self.torsion)}


@dataclass(frozen=True)
class OrdersGroup:
    """A group presented by a plain orders vector (used for direct sums)."""

    orders: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.orders)

    @property
    def is_trivial(self) -> bool:
        return self.dim == 0


def canonical_type(group) -> AbelianGroup:
    """Invariant-factor form of any orders-vector presentation."""
    if isinstance(group, AbelianGroup):
        return group
    torsion = [d for d in group.orders if d != 0]
    rank = sum(1 for d in group.orders if d == 0)
    if not torsion:
        return AbelianGroup(rank)
    mat = np.zeros((len(torsion), len(torsion)), dtype=object)
    for i, d in enumerate(torsion):
        mat[i, i] = d
    res = smith_normal_form(mat)
    return AbelianGroup(rank, _torsion_from_diag(res.diag))


def direct_sum_group(*groups) -> OrdersGroup:
    orders: tuple[int, ...] = ()
    for g in groups:
        orders = orders + tuple(g.orders)
    return OrdersGroup(orders)


def _torsion_from_diag(diag) -> tuple[int, ...]:
    return tuple(int(d) for d in diag if d > 1)


def homology_type(
    complex_: SimplicialComplex, degree: int, reduced: bool = False
) -> AbelianGroup:
    """H_degree via ranks and invariant factors of the boundary maps.

    At the cap dimension the next boundary is unavailable, so the value there
    is the homology of the cap-skeleton.
    """
    if degree < 0 or degree > complex_.cap:
        raise ValueError(f"degree {degree} outside cap {complex_.cap}")
    if degree == 0:
        comps = complex_.components()
        n_comp = len(set(comps)) if comps else 0
        rank = n_comp - (1 if reduced and n_comp else 0)
        return AbelianGroup(max(rank, 0))
    n_p = complex_.n_faces(degree)
    _, rank_dp = _sparse_rank_diag(complex_, degree)
    diag_next, rank_next = _sparse_rank_diag(complex_, degree + 1)
    rank = n_p - rank_dp - rank_next
    return AbelianGroup(rank, _torsion_from_diag(diag_next))


def _sparse_rank_diag(complex_: SimplicialComplex, p: int):
    if p <= 0 or p > complex_.cap or complex_.n_faces(p) == 0:
        return [], 0
    cols = complex_.boundary_columns(p)
    diag, rank = sparse_diagonal(cols, complex_.n_faces(p - 1))
    return diag, rank


class DegreeCoordinates:
    """Coordinates on H_degree of one complex (dense path; small complexes)."""

    def __init__(self, complex_: SimplicialComplex, degree: int, reduced: bool = False):
        self.complex = complex_
        self.degree = degree
        self.reduced = reduced
        self._nontree: list[int] | None = None
        self._kernel_snf = None
        if degree == 0:
            comps = complex_.components()
            self._comps = comps
            self._n_comp = len(set(comps)) if comps else 0
            rank = self._n_comp - (1 if reduced and self._n_comp else 0)
            self.group = AbelianGroup(max(rank, 0))
            self._U = None
            return
        kernel = self._kernel_matrix()
        self._kernel = kernel
        if kernel.shape[1] == 0:
            self.group = AbelianGroup(0)
            self._U = None
            return
        expr = self._boundary_expression()
        res = smith_normal_form(expr, want_u=True, want_uinv=True)
        self._U = res.U
        self._Uinv = res.Uinv
        self._diag = list(res.diag) + [0] * (kernel.shape[1] - res.rank)
        self.group = AbelianGroup(
            kernel.shape[1] - res.rank, _torsion_from_diag(res.diag)
        )
        # coordinate slots with order 1 are dropped when projecting
        self._keep = [i for i, d in enumerate(self._diag) if d != 1]

    def _kernel_matrix(self) -> np.ndarray:
        c, p = self.complex, self.degree
        if p == 1:
            mat, nontree = _cycle_space_basis(c)
            self._nontree = nontree
            return mat
        return kernel_basis(c.boundary_dense(p))

    def _boundary_expression(self) -> np.ndarray:
        """The boundary image in cycle coordinates, compacted to a lattice
        basis before any transform-tracked elimination.

        In fundamental-cycle coordinates a boundary column is just the
        restriction of the boundary to the non-tree edges (at most the face
        count of the simplex), so the columns stay sparse and the image
        lattice is absorbed incrementally; the Smith pass then runs on a
        square-ish basis instead of one column per top simplex.
        """
        from .snf import LazyLattice

        k = self._kernel.shape[1]
        p = self.degree
        cols = self.complex.boundary_columns(p + 1)
        if self._nontree is not None:
            edge_slot = {e: i for i, e in enumerate(self._nontree)}
            expr_cols = []
            for col in cols:
                expr_cols.append(
                    {edge_slot[r]: v for r, v in col.items() if r in edge_slot}
                )
        else:
            bound = self.complex.boundary_dense(p + 1)
            expr_cols = []
            for j in range(bound.shape[1]):
                u = self._solve_kernel(bound[:, j])
                expr_cols.append({i: int(x) for i, x in enumerate(u) if x})
        absorber = LazyLattice(iter(()), dim=k)
        for col in expr_cols:
            absorber._absorb(col)
        return absorber.basis_matrix()

    def _solve_kernel(self, vec) -> np.ndarray:
        """Integer coefficients u with kernel @ u == vec; vec must be a cycle."""
        vec = np.array(vec, dtype=object)
        if self._nontree is not None:
            u = np.array([vec[e] for e in self._nontree], dtype=object)
        else:
            if self._kernel_snf is None:
                self._kernel_snf = smith_normal_form(
                    self._kernel, want_u=True, want_v=True
                )
            res = self._kernel_snf
            y = res.U @ vec
            w = np.zeros(self._kernel.shape[1], dtype=object)
            for i in range(len(y)):
                if i < res.rank:
                    if y[i] % res.diag[i]:
                        raise ValueError("chain is not a cycle")
                    w[i] = y[i] // res.diag[i]
                elif y[i] != 0:
                    raise ValueError("chain is not a cycle")
            u = res.V @ w
        if not np.equal(self._kernel @ u, vec).all():
            raise ValueError("chain is not a cycle")
        return u

    # -- projections ---------------------------------------------------------

    def project(self, chain: dict[int, int]) -> tuple[int, ...]:
        """Class of a cycle in group coordinates (torsion reduced)."""
        if self.degree == 0:
            vec = [0] * max(self._n_comp, 1)
            for v, coeff in chain.items():
                vec[self._comps[v]] += coeff
            vec = vec[: self._n_comp]
            if self.reduced:
                if sum(vec) != 0:
                    raise ValueError("chain has nonzero augmentation")
                vec = vec[1:]
            return tuple(vec)
        if self._U is None:
            if chain:
                raise ValueError("nonzero chain in a complex with no cycles")
            return ()
        vec = np.zeros(self.complex.n_faces(self.degree), dtype=object)
        for r, val in chain.items():
            vec[r] = val
        h = self._U @ self._solve_kernel(vec)
        out = []
        for i in self._keep:
            d = self._diag[i]
            out.append(int(h[i]) % d if d > 1 else int(h[i]))
        return tuple(out)

    def generator_cycles(self) -> list[dict[int, int]]:
        """One representative cycle per retained group coordinate."""
        if self.degree == 0:
            reps = {}
            for v, comp in enumerate(self._comps):
                reps.setdefault(comp, v)
            if self.reduced:
                # reduced classes are differences against the base component
                return [{reps[c]: 1, reps[0]: -1} for c in range(1, self._n_comp)]
            return [{reps[c]: 1} for c in range(self._n_comp)]
        if self._U is None:
            return []
        out = []
        for i in self._keep:
            coeffs = self._Uinv[:, i]
            cycle = self._kernel @ coeffs
            out.append({r: int(v) for r, v in enumerate(cycle) if v})
        return out


def _cycle_space_basis(c: SimplicialComplex):
    """Fundamental cycles of a spanning forest, as columns over the edges.

    Returns (matrix, list of non-tree edge indices); the rows of the matrix
    at the non-tree edges form an identity block, so solving is a restriction.
    """
    n_v = len(c.labels)
    edges = c.faces[1] if len(c.faces) > 1 else []
    parent = list(range(n_v))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    tree = set()
    adj: dict[int, list[tuple[int, int, int]]] = {}
    for ei, (a, b) in enumerate(edges):
        if find(a) != find(b):
            parent[find(a)] = find(b)
            tree.add(ei)
            adj.setdefault(a, []).append((b, ei, 1))
            adj.setdefault(b, []).append((a, ei, -1))

    def tree_path(u, v):
        # edge coefficients of the forest path u -> v
        prev = {u: None}
        q = deque([u])
        while q:
            x = q.popleft()
            if x == v:
                break
            for y, ei, sgn in adj.get(x, ()):
                if y not in prev:
                    prev[y] = (x, ei, sgn)
                    q.append(y)
        path = {}
        x = v
        while prev[x] is not None:
            px, ei, sgn = prev[x]
            path[ei] = sgn
            x = px
        return path

    nontree = [ei for ei in range(len(edges)) if ei not in tree]
    cols = []
    for ei in nontree:
        a, b = edges[ei]
        # edge (a -> b) closed up by the tree path (b -> a)
        col = {ei: 1}
        for pe, sgn in tree_path(b, a).items():
            col[pe] = col.get(pe, 0) + sgn
        cols.append(col)
    mat = np.zeros((len(edges), len(cols)), dtype=object)
    for j, col in enumerate(cols):
        for r, v in col.items():
            mat[r, j] = v
    return mat, nontree


# -- maps between groups ------------------------------------------------------


def _relation_lattice(group) -> np.ndarray:
    cols = []
    dim = group.dim
    for i, d in enumerate(group.orders):
        if d:
            col = [0] * dim
            col[i] = d
            cols.append(col)
    if not cols:
        return np.zeros((dim, 0), dtype=object)
    return np.array(cols, dtype=object).T


@dataclass
class GroupMap:
    source: object  # AbelianGroup or OrdersGroup
    target: object
    matrix: np.ndarray  # target.dim x source.dim

    def __post_init__(self):
        self.matrix = np.array(self.matrix, dtype=object).reshape(
            self.target.dim, self.source.dim
        )
        for j, d in enumerate(self.source.orders):
            if d == 0:
                continue
            for i, e in enumerate(self.target.orders):
                v = d * self.matrix[i, j]
                if (e == 0 and v != 0) or (e != 0 and v % e):
                    raise ValueError("matrix does not respect torsion relations")

    @property
    def is_zero(self) -> bool:
        for j in range(self.source.dim):
            for i, e in enumerate(self.target.orders):
                v = self.matrix[i, j]
                if (e == 0 and v != 0) or (e != 0 and v % e):
                    return False
        return True

    def negate(self) -> "GroupMap":
        return GroupMap(self.source, self.target, -self.matrix)

    def compose(self, other: "GroupMap") -> "GroupMap":
        """self after other."""
        if tuple(other.target.orders) != tuple(self.source.orders):
            raise ValueError("composition type mismatch")
        return GroupMap(other.source, self.target, self.matrix @ other.matrix)

    def image_lattice(self) -> np.ndarray:
        return lattice_sum(
            np.array(self.matrix, dtype=object), _relation_lattice(self.target)
        )

    def kernel_lattice(self) -> np.ndarray:
        """Preimage in Z^source_dim of the target's torsion relations."""
        rel = _relation_lattice(self.target)
        stacked = np.concatenate([np.array(self.matrix, dtype=object), -rel], axis=1)
        if stacked.size:
            ker = kernel_basis(stacked)
            proj = ker[: self.source.dim, :]
        else:
            proj = column_hnf(np.eye(self.source.dim, dtype=object))
        return lattice_sum(proj, _relation_lattice(self.source))

    def is_isomorphism(self) -> bool:
        if canonical_type(self.source) != canonical_type(self.target):
            return False
        full = column_hnf(np.eye(self.target.dim, dtype=object))
        if not lattice_equal(self.image_lattice(), full):
            return False
        rel_src = column_hnf(_relation_lattice(self.source))
        return lattice_equal(self.kernel_lattice(), rel_src)


def zero_map(source, target) -> GroupMap:
    return GroupMap(source, target, np.zeros((target.dim, source.dim), dtype=object))


def identity_map(group) -> GroupMap:
    return GroupMap(group, group, np.eye(group.dim, dtype=object))


def stack_maps(f: GroupMap, g: GroupMap) -> GroupMap:
    """(f, g): A -> B + C from maps with common source."""
    if tuple(f.source.orders) != tuple(g.source.orders):
        raise ValueError("stack needs a common source")
    target = direct_sum_group(f.target, g.target)
    mat = np.concatenate([f.matrix, g.matrix], axis=0)
    return GroupMap(f.source, target, mat)


def concat_maps(f: GroupMap, g: GroupMap) -> GroupMap:
    """[f | g]: A + B -> C from maps with common target."""
    if tuple(f.target.orders) != tuple(g.target.orders):
        raise ValueError("concat needs a common target")
    source = direct_sum_group(f.source, g.source)
    mat = np.concatenate([f.matrix, g.matrix], axis=1)
    return GroupMap(source, f.target, mat)


@dataclass
class ExactnessResult:
    exact: bool
    image_in_kernel: bool
    kernel_in_image: bool
    note: str = ""

    def as_dict(self):
        return {
            "exact": self.exact,
            "image_in_kernel": self.image_in_kernel,
            "kernel_in_image": self.kernel_in_image,
            "note": self.note,
        }


def exactness_check(f: GroupMap, g: GroupMap) -> ExactnessResult:
    """Is image(f) equal to kernel(g) at the middle group?"""
    if tuple(f.target.orders) != tuple(g.source.orders):
        raise ValueError("shape mismatch between incoming and outgoing maps")
    im = f.image_lattice()
    ker = g.kernel_lattice()
    im_in_ker = all(lattice_contains(ker, im[:, j]) for j in range(im.shape[1]))
    ker_in_im = all(lattice_contains(im, ker[:, j]) for j in range(ker.shape[1]))
    note = ""
    if not im_in_ker:
        note = "image not contained in kernel (composite nonzero)"
    elif not ker_in_im:
        note = "kernel class not hit by the incoming map"
    return ExactnessResult(im_in_ker and ker_in_im, im_in_ker, ker_in_im, note)


def matrix_to_csv(matrix, path) -> None:
    """Dense CSV interchange for integer matrices."""
    import csv

    mat = np.array(matrix, dtype=object)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        for row in mat:
            w.writerow([int(x) for x in row])


def matrix_to_triplets(matrix) -> dict:
    """Sparse triplet JSON form: rows, cols, values, shape."""
    mat = np.array(matrix, dtype=object)
    rows, cols, vals = [], [], []
    for i in range(mat.shape[0]):
        for j in range(mat.shape[1]):
            if mat[i, j]:
                rows.append(i)
                cols.append(j)
                vals.append(int(mat[i, j]))
    return {"shape": list(mat.shape), "rows": rows, "cols": cols, "values": vals}


def induced_map(
    f: SimplicialMap,
    degree: int,
    source_coords: DegreeCoordinates | None = None,
    target_coords: DegreeCoordinates | None = None,
    reduced: bool = False,
) -> GroupMap:
    """Matrix of f_* on H_degree in the coordinate systems of both sides."""
    sc = source_coords or DegreeCoordinates(f.source, degree, reduced)
    tc = target_coords or DegreeCoordinates(f.target, degree, reduced)
    cols = []
    chain_cols = None
    for cycle in sc.generator_cycles():
        if chain_cols is None:
            chain_cols = f.chain_columns(degree)
        pushed: dict[int, int] = {}
        for r, coeff in cycle.items():
            for tr, tv in chain_cols[r].items():
                pushed[tr] = pushed.get(tr, 0) + coeff * tv
        cols.append(tc.project({k: v for k, v in pushed.items() if v}))
    mat = (
        np.array(cols, dtype=object).T
        if cols
        else np.zeros((tc.group.dim, 0), dtype=object)
    )
    return GroupMap(sc.group, tc.group, mat)
