import itertools

import pytest

from horokit.errors import DisconnectedGraphError
from horokit.graphs import MetricGraph, Vertex
from horokit.groups import GroupSpec
from horokit.hyperbolicity import DeltaEstimate, four_point_delta, gromov_product
from horokit.spaces import Truncation, build_augmented, build_horoball, interval_points


def cycle(n):
    vs = [Vertex(i, 0, 0) for i in range(n)]
    return MetricGraph(vs, [(vs[i], vs[(i + 1) % n]) for i in range(n)])


def path(n):
    vs = [Vertex(i, 0, 0) for i in range(n)]
    return MetricGraph(vs, [(vs[i], vs[i + 1]) for i in range(n - 1)])


def brute_force_delta(g):
    # independent oracle: scan all quadruples directly
    n = len(g.vertices)
    d = g.distance_matrix()
    best = 0
    for x, y, z, w in itertools.combinations(range(n), 4):
        sums = sorted([d[x, y] + d[z, w], d[x, z] + d[y, w], d[x, w] + d[y, z]])
        best = max(best, sums[2] - sums[1])
    return best / 2


def test_gromov_product_basics():
    g = path(3)
    assert gromov_product(g, Vertex(0, 0, 0), Vertex(1, 0, 0), Vertex(0, 0, 0)) == 0
    assert gromov_product(g, Vertex(0, 0, 0), Vertex(2, 0, 0), Vertex(1, 0, 0)) == 0


def test_gromov_product_c4():
    g = cycle(4)
    assert gromov_product(g, Vertex(0, 0, 0), Vertex(2, 0, 0), Vertex(1, 0, 0)) == 0


def test_gromov_product_disconnected():
    vs = [Vertex(0, 0, 0), Vertex(1, 0, 0)]
    g = MetricGraph(vs, [])
    with pytest.raises(DisconnectedGraphError):
        gromov_product(g, vs[0], vs[1], vs[0])


def test_delta_path_is_zero():
    assert four_point_delta(path(7)).delta == 0.0


def test_delta_c4_is_one():
    est = four_point_delta(cycle(4))
    assert est.delta == 1.0
    assert est.delta == brute_force_delta(cycle(4))


@pytest.mark.parametrize("n", [5, 6, 7])
def test_delta_cycles_match_brute_force(n):
    assert four_point_delta(cycle(n)).delta == brute_force_delta(cycle(n))


def test_delta_tree_certificate():
    f2 = GroupSpec.free(2)
    sp = build_augmented(f2, (0,), Truncation(rg=3, lmax=0, mmax=0))
    est = four_point_delta(sp.graph)
    assert est.delta == 0.0
    assert est.method == "basepoint-certificate"


def test_delta_invariant_under_relabeling():
    g = cycle(5)
    relabeled = MetricGraph(
        [Vertex(v.element + 100, 0, 0) for v in g.vertices],
        [
            (Vertex(g.vertices[a].element + 100, 0, 0), Vertex(g.vertices[b].element + 100, 0, 0))
            for a, b in g.edges
        ],
    )
    assert four_point_delta(g).delta == four_point_delta(relabeled).delta


def test_delta_horoball_matches_brute_force():
    hb = build_horoball(interval_points(-4, 4), lambda p, q: abs(p - q), (0, 2), lmax=2)
    est = four_point_delta(hb)
    assert est.delta == brute_force_delta(hb)


def test_sampled_at_most_exhaustive():
    hb = build_horoball(interval_points(-6, 6), lambda p, q: abs(p - q), (0, 3), lmax=3)
    exact = four_point_delta(hb)
    sampled = four_point_delta(hb, mode="sampled", samples=2000, seed=7)
    assert sampled.delta <= exact.delta
    assert sampled.mode == "sampled" and sampled.seed == 7


def test_sampled_deterministic():
    g = cycle(6)
    a = four_point_delta(g, mode="sampled", samples=500, seed=3)
    b = four_point_delta(g, mode="sampled", samples=500, seed=3)
    assert a.delta == b.delta


def test_delta_disconnected_error():
    vs = [Vertex(0, 0, 0), Vertex(1, 0, 0), Vertex(2, 0, 0), Vertex(3, 0, 0), Vertex(4, 0, 0)]
    g = MetricGraph(vs, [(vs[0], vs[1]), (vs[2], vs[3])])
    with pytest.raises(DisconnectedGraphError):
        four_point_delta(g)


def test_estimate_reports_truncation():
    est = four_point_delta(cycle(4), truncation={"note": "fixture"})
    assert est.truncation["note"] == "fixture"
    assert isinstance(est, DeltaEstimate)


@pytest.mark.slow
def test_wide_horoball_delta_matches_golden():
    import json
    import pathlib

    golden = json.loads(
        (pathlib.Path(__file__).parent / "goldens" / "horoball_delta.json").read_text()
    )
    hb = build_horoball(interval_points(-32, 32), lambda p, q: abs(p - q), (0, 5), lmax=5)
    est = four_point_delta(hb, truncation={"base": [-32, 32], "levels": [0, 5]})
    assert est.as_dict() == golden
    assert est.delta <= 2.0
