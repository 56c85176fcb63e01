import json

import numpy as np
import pytest

from horokit.covers import PAPER_SCHEDULE, build_cover
from horokit.errors import EmptyWindowError
from horokit.graphs import Vertex
from horokit.groups import GroupSpec
from horokit.homology import AbelianGroup, GroupMap, identity_map, zero_map
from horokit.instances import get_instance
from horokit.mv import (
    Ladder,
    assemble_mv,
    check_mv_exactness,
    cluster_check,
    ladder_check,
    milnor_counterexample_demo,
    y_vanishing_check,
)
from horokit.spaces import Truncation, build_augmented

Z = AbelianGroup(1)


def test_assemble_window_error_on_tiny_instance():
    z = GroupSpec.free_abelian(1, names=("x",))
    sp = build_augmented(z, (0,), Truncation(rg=1, lmax=2, mmax=1))
    with pytest.raises(EmptyWindowError):
        assemble_mv(sp, 0, PAPER_SCHEDULE)


def test_assemble_window_error_at_stage_one():
    # the scale-3 margin empties the window on every shipped truncation
    with pytest.raises(EmptyWindowError):
        assemble_mv(get_instance("z_horoball"), 1, PAPER_SCHEDULE)


def test_y_vanishing_stage_one_needs_depth():
    with pytest.raises(EmptyWindowError):
        y_vanishing_check(get_instance("z_horoball"), 1, PAPER_SCHEDULE)


def test_mv_degenerate_without_horoballs():
    # no cusp side: the sequence degenerates to thick == whole (with every
    # vertical neighbor clipped, the interior window is empty, so unwindowed)
    f2 = GroupSpec.free(2)
    sp = build_augmented(f2, (0,), Truncation(rg=2, lmax=0, mmax=0))
    stage = assemble_mv(sp, 0, PAPER_SCHEDULE, cap=2, windowed=False)
    assert len(stage.families["cusp"]) == 0
    v = check_mv_exactness(stage)
    assert v.all_exact
    for p in (0, 1):
        assert (
            stage.coords[("thick", p)].group == stage.coords[("whole", p)].group
        )


@pytest.mark.parametrize("name", ["z_horoball", "z2_free_z", "z2_free_z_deep"])
def test_mv_stage0_exact_on_shipped_instances(name):
    sp = get_instance(name)
    stage = assemble_mv(sp, 0, PAPER_SCHEDULE, cap=2)
    v = check_mv_exactness(stage)
    assert v.composites_agree
    for p, entry in v.degrees.items():
        assert entry["middle"], (name, p, entry)
        if "whole_slot" in entry:
            assert entry["whole_slot"], (name, p)
        if "interface_slot" in entry:
            assert entry["interface_slot"], (name, p)


def test_mv_unwindowed_also_exact_on_small_instance():
    sp = get_instance("z2_free_z_deep")
    stage = assemble_mv(sp, 0, PAPER_SCHEDULE, cap=2, windowed=False)
    v = check_mv_exactness(stage)
    assert v.all_exact


def test_mv_interface_splits_by_coset():
    sp = get_instance("z2_free_z")
    from horokit.covers import decompose

    dec = decompose(sp, 0, PAPER_SCHEDULE)
    assert len(dec.clusters) == 5


def test_cluster_check_shipped():
    for name in ("z_horoball", "z2_free_z", "z2_free_z_deep"):
        verdict = cluster_check(get_instance(name), 0, PAPER_SCHEDULE, cap=2)
        assert verdict.ok, name


def test_cluster_rank_additivity_two_cosets():
    verdict = cluster_check(get_instance("z2_free_z_deep"), 0, PAPER_SCHEDULE, cap=2)
    whole_rank = verdict.types["whole"]["0"]["rank"]
    parts = sum(t["rank"] for t in verdict.types["clusters"]["0"])
    assert whole_rank == parts


def test_y_vanishing_shipped_instances():
    for name in ("z_horoball", "z2_free_z", "z2_free_z_deep"):
        rep = y_vanishing_check(get_instance(name), 0, PAPER_SCHEDULE)
        assert rep.all_zero, name
        assert all(ok for _, ok, _ in rep.contiguity_chain), name


def test_y_vanishing_window_error():
    z = GroupSpec.free_abelian(1, names=("x",))
    sp = build_augmented(z, (0,), Truncation(rg=8, lmax=3, mmax=1))
    with pytest.raises(EmptyWindowError):
        y_vanishing_check(sp, 0, PAPER_SCHEDULE)  # needs depth >= 4


def test_y_vanishing_vacuous_when_no_horoballs():
    f2 = GroupSpec.free(2)
    sp = build_augmented(f2, (0,), Truncation(rg=2, lmax=5, mmax=0))
    rep = y_vanishing_check(sp, 0, PAPER_SCHEDULE)
    assert rep.all_zero and rep.clusters == []


def test_ladder_identity():
    zero = AbelianGroup(0)
    z2 = AbelianGroup(0, (2,))
    # 0 -> Z --2--> Z -> Z/2 -> 0, doubled with identity verticals
    groups = [zero, Z, Z, z2, zero]
    maps = [
        zero_map(zero, Z),
        GroupMap(Z, Z, np.array([[2]])),
        GroupMap(Z, z2, np.array([[1]])),
        zero_map(z2, zero),
    ]
    verticals = [identity_map(g) for g in groups]
    ladder = Ladder(groups, maps, list(groups), list(maps), verticals)
    verdict = ladder_check(ladder)
    assert verdict.ok
    assert all(verdict.squares_commute)
    assert all(verdict.top_exact)
    assert all(verdict.vertical_iso)


def test_ladder_sign_flip_breaks_a_square():
    groups = [Z, Z]
    maps = [identity_map(Z)]
    verticals = [identity_map(Z), GroupMap(Z, Z, np.array([[-1]]))]
    ladder = Ladder(groups, maps, list(groups), list(maps), verticals)
    verdict = ladder_check(ladder)
    assert not verdict.squares_commute[0]
    assert not verdict.ok


def test_ladder_five_lemma_consistency_from_tower_shape():
    # assembled from the half-line tower data: 0 -> 0 -> Z^2 -> Z^2 -> 0 rows
    zero = AbelianGroup(0)
    zz = AbelianGroup(2)
    groups = [zero, zero, zz, zz, zero]
    maps = [
        zero_map(zero, zero),
        zero_map(zero, zz),
        identity_map(zz),
        zero_map(zz, zero),
    ]
    verticals = [identity_map(g) for g in groups]
    verdict = ladder_check(Ladder(groups, maps, list(groups), list(maps), verticals))
    assert verdict.ok and verdict.five_lemma_consistent


def test_ladder_shape_mismatch():
    with pytest.raises(ValueError):
        ladder_check(Ladder([Z], [], [Z, Z], [identity_map(Z)], [identity_map(Z)]))


def test_vanishing_detects_component_merge():
    # a deliberately disconnected source piece: two level-1 columns too far
    # apart to intersect, merged by the connected coarser target
    from horokit.covers import connecting_map
    from horokit.mv import _cluster_vanishing, _split_by_coset

    z = GroupSpec.free_abelian(1, names=("x",))
    sp = build_augmented(z, (0,), Truncation(rg=6, lmax=4, mmax=1))
    tower = connecting_map(sp, "floor", 0, PAPER_SCHEDULE, s=0)
    far = {Vertex("xxxxxx", 1, 1), Vertex("XXXXXX", 1, 1)}
    src = tower.source.restrict_to_centers(far, "far-pair")
    tgt = _split_by_coset(tower.target)[1]
    from horokit.covers import nerve as build_nerve

    pair_nerve = build_nerve(src, cap=2)
    assert pair_nerve.n_faces(1) == 0  # genuinely disconnected
    entry = _cluster_vanishing(src, tgt, tower, 1, max_degree=0)
    assert entry.degrees[0]["zero"]
    assert entry.degrees[0]["source"]["rank"] == 1


def test_push_cycles_through_lazy_lattice():
    # the degree >= 1 mechanism on a hand fixture: a hollow square pushed
    # into a filled one must bound, certified by incremental absorption
    from horokit.complexes import SimplicialComplex, SimplicialMap
    from horokit.mv import _kernel_generators
    from horokit.snf import LazyLattice

    hollow = SimplicialComplex.from_label_faces([(0, 1), (1, 2), (2, 3), (0, 3)])
    filled = SimplicialComplex.from_label_faces([(0, 1, 2), (0, 2, 3)])
    f = SimplicialMap(hollow, filled, [0, 1, 2, 3])
    gens = _kernel_generators(hollow, 1)
    assert len(gens) == 1  # one independent square cycle
    cols = f.chain_columns(1)
    pushed = [0] * filled.n_faces(1)
    for r, coeff in gens[0].items():
        for tr, tv in cols[r].items():
            pushed[tr] += coeff * tv
    lattice = LazyLattice(iter(filled.boundary_columns(2)), dim=filled.n_faces(1))
    assert lattice.contains(pushed)
    # and a cycle that does not bound is rejected
    ring = SimplicialComplex.from_label_faces([(0, 1), (1, 2), (2, 3), (0, 3)])
    gens2 = _kernel_generators(ring, 1)
    empty_lattice = LazyLattice(iter(ring.boundary_columns(2)), dim=ring.n_faces(1))
    vec = [0] * ring.n_faces(1)
    for r, c in gens2[0].items():
        vec[r] = c
    assert not empty_lattice.contains(vec)


def _synthetic_stage(whole_faces, thick_faces, cusp_faces, iface_faces, cap=2):
    from horokit.complexes import SimplicialComplex
    from horokit.homology import DegreeCoordinates
    from horokit.mv import MVStage, _inclusion

    nerves = {
        "whole": SimplicialComplex.from_label_faces(whole_faces, cap=cap),
        "thick": SimplicialComplex.from_label_faces(thick_faces, cap=cap),
        "cusp": SimplicialComplex.from_label_faces(cusp_faces, cap=cap),
        "interface": SimplicialComplex.from_label_faces(iface_faces, cap=cap),
    }
    coords = {
        (k, p): DegreeCoordinates(cx, p)
        for k, cx in nerves.items()
        for p in range(cap)
    }
    inclusions = {
        ("interface", "thick"): _inclusion(nerves["interface"], nerves["thick"], "zi"),
        ("interface", "cusp"): _inclusion(nerves["interface"], nerves["cusp"], "zj"),
        ("thick", "whole"): _inclusion(nerves["thick"], nerves["whole"], "xk"),
        ("cusp", "whole"): _inclusion(nerves["cusp"], nerves["whole"], "yl"),
    }
    return MVStage(None, 0, None, cap, False, 0, {}, nerves, coords, inclusions)


def test_mv_line_split_into_half_lines():
    # the classic split of a path into two overlapping halves
    stage = _synthetic_stage(
        whole_faces=[(0, 1), (1, 2), (2, 3), (3, 4)],
        thick_faces=[(0, 1), (1, 2)],
        cusp_faces=[(2, 3), (3, 4)],
        iface_faces=[(2,)],
    )
    v = check_mv_exactness(stage)
    assert v.all_exact
    assert v.degrees[0]["middle"] and v.degrees[1]["middle"]


def test_mv_circle_split_has_nontrivial_snake():
    # a square cycle cut into two arcs: the degree-1 class of the whole maps
    # onto the difference of the two interface points
    from horokit.mv import _snake_matrix

    stage = _synthetic_stage(
        whole_faces=[(0, 1), (1, 2), (2, 3), (0, 3)],
        thick_faces=[(0, 1), (1, 2)],
        cusp_faces=[(2, 3), (0, 3)],
        iface_faces=[(0,), (2,)],
    )
    assert stage.coords[("whole", 1)].group == AbelianGroup(1)
    snake = _snake_matrix(stage, 1)
    assert sorted(int(x) for x in snake.matrix.flatten()) == [-1, 1]
    v = check_mv_exactness(stage)
    assert v.all_exact
    assert v.degrees[1]["whole_slot"] and v.degrees[0]["interface_slot"]


def test_mv_exactness_on_random_window_restrictions():
    # restricting all four families to a common center subset preserves the
    # excision identities, so middle exactness must survive any restriction
    from hypothesis import given, settings, strategies as st

    from horokit.covers import decompose, nerve as build_nerve
    from horokit.homology import (
        DegreeCoordinates,
        concat_maps,
        exactness_check,
        induced_map,
        stack_maps,
    )
    from horokit.mv import _inclusion

    sp = get_instance("z2_free_z_deep")
    dec = decompose(sp, 0, PAPER_SCHEDULE)
    all_centers = [c.center for c in dec.whole.columns]

    @settings(max_examples=12, deadline=None)
    @given(st.sets(st.integers(0, len(all_centers) - 1), min_size=2, max_size=12))
    def check(idxs):
        window = {all_centers[i] for i in idxs}
        fams = {
            "whole": dec.whole.restrict_to_centers(window, "w"),
            "thick": dec.thick.restrict_to_centers(window, "t"),
            "cusp": dec.cusp.restrict_to_centers(window, "c"),
            "interface": dec.interface.restrict_to_centers(window, "i"),
        }
        nerves = {k: build_nerve(f, cap=2) for k, f in fams.items()}
        coords = {k: DegreeCoordinates(nerves[k], 0) for k in nerves}
        i_map = induced_map(
            _inclusion(nerves["interface"], nerves["thick"], "i"), 0,
            coords["interface"], coords["thick"],
        )
        j_map = induced_map(
            _inclusion(nerves["interface"], nerves["cusp"], "j"), 0,
            coords["interface"], coords["cusp"],
        )
        k_map = induced_map(
            _inclusion(nerves["thick"], nerves["whole"], "k"), 0,
            coords["thick"], coords["whole"],
        )
        l_map = induced_map(
            _inclusion(nerves["cusp"], nerves["whole"], "l"), 0,
            coords["cusp"], coords["whole"],
        )
        res = exactness_check(stack_maps(i_map, j_map.negate()), concat_maps(k_map, l_map))
        assert res.exact

    check()


def test_refinement_induced_h0_matches_component_tracking():
    # degree-0 matrix of the refinement map against a component-fate oracle
    from horokit.covers import connecting_map, nerve as build_nerve
    from horokit.homology import DegreeCoordinates, induced_map

    sp = get_instance("z_horoball")
    m = connecting_map(sp, "refine", 0, PAPER_SCHEDULE)
    src_nerve = build_nerve(m.source, cap=2)
    tgt_nerve = build_nerve(m.target, cap=2)
    smap = m.to_simplicial_map(src_nerve, tgt_nerve)
    sc = DegreeCoordinates(src_nerve, 0)
    tc = DegreeCoordinates(tgt_nerve, 0)
    mat = induced_map(smap, 0, sc, tc).matrix
    src_comps = src_nerve.components()
    tgt_comps = tgt_nerve.components()
    tpos = {c: i for i, c in enumerate(tgt_nerve.labels)}
    oracle = {}
    for v, c in enumerate(src_nerve.labels):
        oracle[src_comps[v]] = tgt_comps[tpos[m.center_map(c)]]
    for j in range(mat.shape[1]):
        col = [int(x) for x in mat[:, j]]
        assert col.count(1) == 1 and col.count(0) == len(col) - 1
        assert col.index(1) == oracle[j]


def test_cusp_tower_eventual_images_vanish():
    # reduced degree-0 tower of a disconnected cusp piece into its coarser
    # stage: the eventual image collapses to the trivial group
    from horokit.covers import connecting_map, nerve as build_nerve
    from horokit.homology import DegreeCoordinates, induced_map
    from horokit.mv import _split_by_coset
    from horokit.towers import Tower, direct_limit_report

    z = GroupSpec.free_abelian(1, names=("x",))
    sp = build_augmented(z, (0,), Truncation(rg=6, lmax=4, mmax=1))
    tower_map = connecting_map(sp, "floor", 0, PAPER_SCHEDULE, s=0)
    far = {Vertex("xxxxxx", 1, 1), Vertex("XXXXXX", 1, 1)}
    src = tower_map.source.restrict_to_centers(far, "far-pair")
    tgt = _split_by_coset(tower_map.target)[1]
    src_nerve = build_nerve(src, cap=2)
    tgt_nerve = build_nerve(tgt, cap=2)
    smap = tower_map.__class__(src, tgt, tower_map.center_map).to_simplicial_map(
        src_nerve, tgt_nerve
    )
    sc = DegreeCoordinates(src_nerve, 0, reduced=True)
    tc = DegreeCoordinates(tgt_nerve, 0, reduced=True)
    assert sc.group.rank == 1  # two components upstairs
    assert tc.group.rank == 0  # connected downstairs
    m = induced_map(smap, 0, sc, tc, reduced=True)
    tower = Tower("inductive", [sc.group, tc.group], [m])
    rep = direct_limit_report(tower)
    assert all(g.is_trivial for g in rep.eventual)
    assert rep.limit is not None and rep.limit.is_trivial


def test_milnor_demo_values():
    rep = milnor_counterexample_demo()
    assert all(s["h0"] == {"rank": 2, "torsion": []} for s in rep["stages"])
    assert rep["tower"]["maps_are_identity"] is True
    assert rep["tower"]["inverse_limit"] == {"rank": 2, "torsion": []}
    assert rep["tower"]["lim1"]["kind"] == "zero"
    assert rep["intersection"]["h0"] == {"rank": 0, "torsion": []}
    assert rep["naive_sequence_exact"] is False


def test_milnor_demo_deterministic():
    a = json.dumps(milnor_counterexample_demo(), sort_keys=True)
    b = json.dumps(milnor_counterexample_demo(), sort_keys=True)
    assert a == b
