"""Mayer-Vietoris verification at the nerve-homology level.

A stage assembles the thick/cusp/interface families of one cover scale
(restricted to the interior window), builds their nerves and inclusion maps,
and checks exactness of

    H_p(interface) -> H_p(thick) + H_p(cusp) -> H_p(whole)

with the (incoming, -outgoing) sign convention, plus the connecting-map
slots via an explicit chain-level snake.  The cusp-vanishing check, the
cluster decomposition of the interface, ladder commutativity with a
five-lemma verdict, and the half-line tower demonstration live here too.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complexes import SimplicialComplex, SimplicialMap
from .covers import (
    CoverMap,
    Family,
    Schedule,
    PAPER_SCHEDULE,
    connecting_map,
    contiguous_cover_maps,
    decompose,
    iter_faces,
    lazy_boundary_columns,
    nerve,
)
from .errors import EmptyWindowError
from .homology import (
    AbelianGroup,
    DegreeCoordinates,
    GroupMap,
    canonical_type,
    concat_maps,
    direct_sum_group,
    exactness_check,
    homology_type,
    induced_map,
    stack_maps,
)
from .snf import LazyLattice
from .spaces import AugmentedSpace, interior_window
from .towers import Tower, inverse_limit, ml_lim1


# -- stage assembly -----------------------------------------------------------


@dataclass
class MVStage:
    space: AugmentedSpace
    stage: int
    schedule: Schedule
    cap: int
    windowed: bool
    window_size: int
    families: dict  # whole/thick/cusp/interface (window-restricted)
    nerves: dict  # same keys -> SimplicialComplex
    coords: dict  # (key, degree) -> DegreeCoordinates
    inclusions: dict  # ("interface","thick") etc -> SimplicialMap

    def degrees(self):
        return range(0, self.cap)


def _inclusion(src: SimplicialComplex, tgt: SimplicialComplex, name: str) -> SimplicialMap:
    pos = {c: i for i, c in enumerate(tgt.labels)}
    return SimplicialMap(src, tgt, [pos[c] for c in src.labels], check=False, name=name)


def assemble_mv(
    space: AugmentedSpace,
    n: int,
    schedule: Schedule = PAPER_SCHEDULE,
    cap: int = 2,
    windowed: bool = True,
) -> MVStage:
    """Build the stage-n excision triple with nerves and homology coordinates."""
    dec = decompose(space, n, schedule)
    if windowed:
        window = interior_window(space, dec.scale)
        if not window:
            raise EmptyWindowError(
                f"no interior vertices at scale {dec.scale}; truncation too small"
            )
        fams = {
            "whole": dec.whole.restrict_to_centers(window, "whole|win"),
            "thick": dec.thick.restrict_to_centers(window, "thick|win"),
            "cusp": dec.cusp.restrict_to_centers(window, "cusp|win"),
            "interface": dec.interface.restrict_to_centers(window, "interface|win"),
        }
        if not fams["whole"].positions:
            raise EmptyWindowError("interior window contains no column centers")
        window_size = len(window)
    else:
        fams = {
            "whole": dec.whole,
            "thick": dec.thick,
            "cusp": dec.cusp,
            "interface": dec.interface,
        }
        window_size = len(space.graph)
    nerves = {k: nerve(f, cap=cap) for k, f in fams.items()}
    coords = {}
    for k, cx in nerves.items():
        for p in range(cap):
            coords[(k, p)] = DegreeCoordinates(cx, p)
    inclusions = {
        ("interface", "thick"): _inclusion(nerves["interface"], nerves["thick"], "int->thick"),
        ("interface", "cusp"): _inclusion(nerves["interface"], nerves["cusp"], "int->cusp"),
        ("thick", "whole"): _inclusion(nerves["thick"], nerves["whole"], "thick->whole"),
        ("cusp", "whole"): _inclusion(nerves["cusp"], nerves["whole"], "cusp->whole"),
    }
    return MVStage(
        space, n, schedule, cap, windowed, window_size, fams, nerves, coords, inclusions
    )


def _snake_matrix(stage: MVStage, p: int) -> GroupMap:
    """Connecting map H_p(whole) -> H_{p-1}(interface) by chain splitting."""
    u_coords = stage.coords[("whole", p)]
    z_coords = stage.coords[("interface", p - 1)]
    whole = stage.nerves["whole"]
    thick_centers = set(stage.nerves["thick"].labels)
    iface_index = {
        f: i
        for i, f in enumerate(stage.nerves["interface"].faces[p - 1])
    }
    iface_pos = {c: i for i, c in enumerate(stage.nerves["interface"].labels)}
    cusp_centers = set(stage.nerves["cusp"].labels)
    bcols = whole.boundary_columns(p)
    cols = []
    for cycle in u_coords.generator_cycles():
        part = {}
        for fi, coeff in cycle.items():
            face = whole.faces[p][fi]
            in_thick = all(whole.labels[v] in thick_centers for v in face)
            if not in_thick and not all(
                whole.labels[v] in cusp_centers for v in face
            ):
                raise RuntimeError(
                    "a face is neither all-thick nor all-cusp; excision broken"
                )
            if in_thick:
                for r, sgn in bcols[fi].items():
                    part[r] = part.get(r, 0) + coeff * sgn
        chain = {}
        for r, coeff in part.items():
            if not coeff:
                continue
            face = whole.faces[p - 1][r]
            labels = tuple(whole.labels[v] for v in face)
            try:
                zface = tuple(sorted(iface_pos[l] for l in labels))
            except KeyError:
                raise RuntimeError(
                    "snake boundary leaves the interface; excision identities broken"
                ) from None
            chain[iface_index[zface]] = coeff
        cols.append(z_coords.project(chain))
    mat = (
        np.array(cols, dtype=object).T
        if cols
        else np.zeros((z_coords.group.dim, 0), dtype=object)
    )
    return GroupMap(u_coords.group, z_coords.group, mat)


@dataclass
class MVVerdict:
    stage: int
    degrees: dict
    composites_agree: bool
    cap_limited: list

    @property
    def all_exact(self) -> bool:
        return self.composites_agree and all(
            d["middle"] for d in self.degrees.values()
        )

    def as_dict(self):
        return {
            "stage": self.stage,
            "degrees": {str(k): v for k, v in self.degrees.items()},
            "composites_agree": self.composites_agree,
            "cap_limited": self.cap_limited,
            "all_exact": self.all_exact,
        }


def check_mv_exactness(stage: MVStage) -> MVVerdict:
    """Slot-by-slot exactness verdicts for the assembled stage."""
    sk = stage.coords
    degrees = {}
    composites_agree = True
    snakes = {}
    for p in stage.degrees():
        i_map = induced_map(
            stage.inclusions[("interface", "thick")], p,
            sk[("interface", p)], sk[("thick", p)],
        )
        j_map = induced_map(
            stage.inclusions[("interface", "cusp")], p,
            sk[("interface", p)], sk[("cusp", p)],
        )
        k_map = induced_map(
            stage.inclusions[("thick", "whole")], p,
            sk[("thick", p)], sk[("whole", p)],
        )
        l_map = induced_map(
            stage.inclusions[("cusp", "whole")], p,
            sk[("cusp", p)], sk[("whole", p)],
        )
        diff = k_map.compose(i_map).matrix - l_map.compose(j_map).matrix
        if not GroupMap(
            sk[("interface", p)].group, sk[("whole", p)].group, diff
        ).is_zero:
            composites_agree = False
        into = stack_maps(i_map, j_map.negate())
        outof = concat_maps(k_map, l_map)
        middle = exactness_check(into, outof)
        entry = {
            "middle": middle.exact,
            "middle_detail": middle.as_dict(),
            "groups": {
                "interface": sk[("interface", p)].group.as_dict(),
                "thick": sk[("thick", p)].group.as_dict(),
                "cusp": sk[("cusp", p)].group.as_dict(),
                "whole": sk[("whole", p)].group.as_dict(),
            },
        }
        if p >= 1:
            snake = _snake_matrix(stage, p)
            snakes[p] = snake
            entry["whole_slot"] = exactness_check(outof, snake).exact
        degrees[p] = entry
    for p in stage.degrees():
        if p + 1 in snakes:
            i_map = induced_map(
                stage.inclusions[("interface", "thick")], p,
                sk[("interface", p)], sk[("thick", p)],
            )
            j_map = induced_map(
                stage.inclusions[("interface", "cusp")], p,
                sk[("interface", p)], sk[("cusp", p)],
            )
            into = stack_maps(i_map, j_map.negate())
            degrees[p]["interface_slot"] = exactness_check(snakes[p + 1], into).exact
    cap_limited = [
        f"degree {stage.cap} and above not computed (cap {stage.cap})",
        f"interface slot at degree {stage.cap - 1} needs the degree-{stage.cap} snake",
    ]
    return MVVerdict(stage.stage, degrees, composites_agree, cap_limited)


# -- cusp vanishing -----------------------------------------------------------


@dataclass
class ClusterVanishing:
    coset: int
    degrees: dict  # p -> {"zero": bool, "how": str, "source": group dict}

    def as_dict(self):
        return {"coset": self.coset, "degrees": {str(k): v for k, v in self.degrees.items()}}


@dataclass
class VanishingReport:
    stage: int
    clusters: list[ClusterVanishing]
    contiguity_chain: list  # [(s, ok, witness)]
    all_zero: bool

    def as_dict(self):
        return {
            "stage": self.stage,
            "clusters": [c.as_dict() for c in self.clusters],
            "contiguity_chain": [
                {"s": s, "contiguous": ok, "witness": [repr(w) for w in (wit or ())]}
                for s, ok, wit in self.contiguity_chain
            ],
            "all_zero": self.all_zero,
        }


def _split_by_coset(family: Family) -> dict[int, Family]:
    out: dict[int, list[int]] = {}
    for p in family.positions:
        c = family.cover.columns[p].center.coset
        out.setdefault(c, []).append(p)
    return {
        i: family.cover.family(f"{family.name}@{i}", ps) for i, ps in sorted(out.items())
    }


def y_vanishing_check(
    space: AugmentedSpace,
    n: int,
    schedule: Schedule = PAPER_SCHEDULE,
    max_degree: int = 2,
    contiguity_cap: int = 3,
) -> VanishingReport:
    """The tower map on cusp families induces zero on reduced homology.

    Verified cluster-by-cluster (one horoball at a time): a trivial source
    group is recorded as vacuously zero; nontrivial reduced classes are
    pushed through the chain map and certified to bound in the target via an
    incrementally absorbed boundary lattice.  The floor-map contiguity chain
    is verified for every floor up to the truncation depth.
    """
    level_next = schedule.slice_level(n + 1)
    if level_next > space.trunc.lmax:
        raise EmptyWindowError(
            f"stage {n + 1} slice level {level_next} exceeds depth {space.trunc.lmax}"
        )
    tower_map = connecting_map(space, "floor", n, schedule, s=0)
    if not tower_map.source.positions:
        return VanishingReport(n, [], [], True)
    # mechanism: consecutive floor maps are contiguous
    chain = []
    for s in range(space.trunc.lmax):
        f = connecting_map(space, "floor", n, schedule, s=s)
        g = connecting_map(space, "floor", n, schedule, s=s + 1)
        ok, wit = contiguous_cover_maps(f, g, cap=contiguity_cap)
        chain.append((s, ok, wit))
    src_pieces = _split_by_coset(tower_map.source)
    tgt_pieces = _split_by_coset(tower_map.target)
    clusters = []
    all_zero = all(ok for _, ok, _ in chain)
    for coset, src_fam in src_pieces.items():
        tgt_fam = tgt_pieces[coset]
        entry = _cluster_vanishing(src_fam, tgt_fam, tower_map, coset, max_degree)
        clusters.append(entry)
        all_zero = all_zero and all(d["zero"] for d in entry.degrees.values())
    return VanishingReport(n, clusters, chain, all_zero)


def _cluster_vanishing(
    src_fam: Family, tgt_fam: Family, tower_map: CoverMap, coset: int, max_degree: int
) -> ClusterVanishing:
    src_nerve = nerve(src_fam, cap=max_degree + 1)
    piece_map = CoverMap(src_fam, tgt_fam, tower_map.center_map, name=f"tower@{coset}")
    degrees = {}
    tgt_low = None  # target nerve materialized lazily, one dimension at a time
    for p in range(max_degree + 1):
        group = homology_type(src_nerve, p, reduced=True)
        rec = {"source": group.as_dict()}
        if group.is_trivial:
            rec.update(zero=True, how="source reduced homology is trivial")
            degrees[p] = rec
            continue
        if p == 0:
            tgt_edges = _piece_complex(tgt_fam, 1)
            comps = tgt_edges.components()
            tpos = {c: i for i, c in enumerate(tgt_edges.labels)}
            images = {
                comps[tpos[piece_map.center_map(c)]] for c in src_nerve.labels
            }
            rec.update(
                zero=len(images) <= 1,
                how="all source columns land in one target component",
            )
            degrees[p] = rec
            continue
        # push a generating set of source p-cycles; boundaries push to
        # boundaries, so kernel generators suffice
        gens = _kernel_generators(src_nerve, p)
        tgt_cx = _piece_complex(tgt_fam, p)
        smap = piece_map.to_simplicial_map(src_nerve, tgt_cx, check=False)
        chain_cols = smap.chain_columns(p)
        face_index = tgt_cx.face_index[p]
        lattice = LazyLattice(
            lazy_boundary_columns(tgt_fam, p + 1, face_index), dim=tgt_cx.n_faces(p)
        )
        ok = True
        for z in gens:
            pushed = [0] * tgt_cx.n_faces(p)
            for r, coeff in z.items():
                for tr, tv in chain_cols[r].items():
                    pushed[tr] += coeff * tv
            if any(pushed) and not lattice.contains(pushed):
                ok = False
                break
        rec.update(zero=ok, how=f"pushed {len(gens)} cycle generators bound in target")
        degrees[p] = rec
    return ClusterVanishing(coset, degrees)


def _piece_complex(fam: Family, cap: int) -> SimplicialComplex:
    masks = [c.mask for c in fam.columns]
    by_dim: list[list[tuple[int, ...]]] = [[] for _ in range(cap + 1)]
    for face in iter_faces(fam, cap):
        by_dim[len(face) - 1].append(face)

    def span_test(vertices):
        common = -1
        for v in vertices:
            common &= masks[v]
            if common == 0:
                return False
        return True

    return SimplicialComplex(tuple(fam.centers), by_dim, cap, span_test=span_test)


def _kernel_generators(cx: SimplicialComplex, p: int) -> list[dict[int, int]]:
    from .homology import _cycle_space_basis
    from .snf import kernel_basis

    if p == 1:
        mat, _ = _cycle_space_basis(cx)
    else:
        mat = kernel_basis(cx.boundary_dense(p))
    out = []
    for j in range(mat.shape[1]):
        col = {int(r): int(mat[r, j]) for r in range(mat.shape[0]) if mat[r, j]}
        out.append(col)
    return out


# -- cluster decomposition ----------------------------------------------------


@dataclass
class ClusterVerdict:
    stage: int
    disjoint: bool
    block_structure: bool
    additive: dict  # p -> bool
    types: dict

    @property
    def ok(self):
        return self.disjoint and self.block_structure and all(self.additive.values())

    def as_dict(self):
        return {
            "stage": self.stage,
            "disjoint": self.disjoint,
            "block_structure": self.block_structure,
            "additive": {str(k): v for k, v in self.additive.items()},
            "types": self.types,
            "ok": self.ok,
        }


def cluster_check(
    space: AugmentedSpace, n: int, schedule: Schedule = PAPER_SCHEDULE, cap: int = 2
) -> ClusterVerdict:
    """Interface homology decomposes as the direct sum over horoballs."""
    dec = decompose(space, n, schedule)
    clusters = dec.clusters
    disjoint = True
    fams = list(clusters.values())
    for a in range(len(fams)):
        for b in range(a + 1, len(fams)):
            if fams[a].union_mask() & fams[b].union_mask():
                disjoint = False
    whole = nerve(dec.interface, cap=cap)
    coset_of = {c: c.coset for c in whole.labels}
    block = True
    for fs in whole.faces[1:]:
        for f in fs:
            cosets = {coset_of[whole.labels[v]] for v in f}
            if len(cosets) > 1:
                block = False
    additive = {}
    types = {"whole": {}, "clusters": {}}
    for p in range(cap):
        whole_t = homology_type(whole, p)
        parts = [homology_type(nerve(f, cap=cap), p) for f in clusters.values()]
        summed = canonical_type(direct_sum_group(*parts)) if parts else AbelianGroup(0)
        additive[p] = whole_t == summed
        types["whole"][str(p)] = whole_t.as_dict()
        types["clusters"][str(p)] = [t.as_dict() for t in parts]
    return ClusterVerdict(n, disjoint, block, additive, types)


# -- ladders -------------------------------------------------------------------


@dataclass
class Ladder:
    top_groups: list
    top_maps: list[GroupMap]
    bottom_groups: list
    bottom_maps: list[GroupMap]
    verticals: list[GroupMap]


@dataclass
class LadderVerdict:
    squares_commute: list[bool]
    top_exact: list[bool]
    bottom_exact: list[bool]
    vertical_iso: list[bool]
    five_lemma_consistent: bool

    @property
    def ok(self):
        return (
            all(self.squares_commute)
            and all(self.top_exact)
            and all(self.bottom_exact)
            and self.five_lemma_consistent
        )

    def as_dict(self):
        return {
            "squares_commute": self.squares_commute,
            "top_exact": self.top_exact,
            "bottom_exact": self.bottom_exact,
            "vertical_iso": self.vertical_iso,
            "five_lemma_consistent": self.five_lemma_consistent,
            "ok": self.ok,
        }


def ladder_check(ladder: Ladder) -> LadderVerdict:
    """Square commutativity, row exactness, and a five-lemma consistency flag."""
    n = len(ladder.top_groups)
    if (
        len(ladder.bottom_groups) != n
        or len(ladder.verticals) != n
        or len(ladder.top_maps) != n - 1
        or len(ladder.bottom_maps) != n - 1
    ):
        raise ValueError("ladder shape mismatch")
    squares = []
    for i in range(n - 1):
        left = ladder.verticals[i + 1].compose(ladder.top_maps[i])
        right = ladder.bottom_maps[i].compose(ladder.verticals[i])
        diff = GroupMap(left.source, left.target, left.matrix - right.matrix)
        squares.append(diff.is_zero)
    top_exact = [
        exactness_check(ladder.top_maps[i], ladder.top_maps[i + 1]).exact
        for i in range(n - 2)
    ]
    bottom_exact = [
        exactness_check(ladder.bottom_maps[i], ladder.bottom_maps[i + 1]).exact
        for i in range(n - 2)
    ]
    iso = [v.is_isomorphism() for v in ladder.verticals]
    consistent = True
    for i in range(n):
        others = [iso[j] for j in range(n) if j != i]
        if all(others) and all(squares) and all(top_exact) and all(bottom_exact):
            if not iso[i]:
                consistent = False
    return LadderVerdict(squares, top_exact, bottom_exact, iso, consistent)


# -- the half-line tower demonstration ----------------------------------------


def _half_line_nerve(points: list[int]) -> SimplicialComplex:
    """Nerve of the unit-ball cover of a subset of the integer line."""
    pts = sorted(points)
    faces = []
    for i, a in enumerate(pts):
        faces.append((i,))
        for j in range(i + 1, len(pts)):
            b = pts[j]
            # common point within distance 1 of both centers
            if any(abs(y - a) <= 1 and abs(y - b) <= 1 for y in pts):
                faces.append((i, j))
    return SimplicialComplex.from_faces(pts, faces, cap=2)


def milnor_counterexample_demo(halfwidth: int = 8, stages: int = 5) -> dict:
    """Deterministic report on the tower of punctured lines.

    The stage-n space removes [-n, n] from a window of the integer line; its
    unit-ball nerve has two contractible components, the inclusion maps
    induce the identity on degree-0 homology, the inverse limit is free of
    rank two, and the image chains satisfy the stabilization criterion, yet
    the intersection of the family is empty with trivial homology.  The
    naive limit sequence therefore cannot be exact for these towers.
    """
    if stages >= halfwidth:
        raise ValueError("window too small for the requested number of stages")
    window = list(range(-halfwidth, halfwidth + 1))
    complexes = []
    stage_records = []
    for n in range(1, stages + 1):
        pts = [x for x in window if abs(x) > n]
        cx = _half_line_nerve(pts)
        complexes.append((pts, cx))
        comps = cx.components()
        stage_records.append(
            {
                "stage": n,
                "points": len(pts),
                "components": len(set(comps)),
                "h0": homology_type(cx, 0).as_dict(),
            }
        )
    groups = []
    maps = []
    coords = [DegreeCoordinates(cx, 0) for _, cx in complexes]
    for k in range(stages - 1):
        pts_small, cx_small = complexes[k + 1]
        pts_big, cx_big = complexes[k]
        pos_big = {x: i for i, x in enumerate(cx_big.labels)}
        smap = SimplicialMap(
            cx_small, cx_big, [pos_big[x] for x in cx_small.labels], name=f"incl{k}"
        )
        maps.append(induced_map(smap, 0, coords[k + 1], coords[k]))
    groups = [c.group for c in coords]
    tower = Tower("projective", groups, maps)
    lim = inverse_limit(tower)
    verdict = ml_lim1(tower)
    identity_maps = all(
        m.matrix.shape[0] == m.matrix.shape[1]
        and np.equal(m.matrix, np.eye(m.matrix.shape[0], dtype=object)).all()
        for m in maps
    )
    return {
        "schema": "horokit-report/1",
        "command": "milnor-demo",
        "config": {"halfwidth": halfwidth, "stages": stages},
        "stages": stage_records,
        "tower": {
            "direction": "projective",
            "maps_are_identity": bool(identity_maps),
            "inverse_limit": lim.as_dict(),
            "lim1": verdict.as_dict(),
        },
        "intersection": {"empty": True, "h0": AbelianGroup(0).as_dict()},
        "naive_sequence_exact": False,
        "note": (
            "limit homology rank 2 versus empty intersection: the naive"
            " limit sequence fails for these towers"
        ),
    }
