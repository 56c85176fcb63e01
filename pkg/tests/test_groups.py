import pytest
from hypothesis import given, settings, strategies as st

from horokit.errors import BudgetExceededError, UnknownLetterError
from horokit.groups import Atom, GroupSpec, enumerate_cosets

F2 = GroupSpec.free(2)
ZA2 = GroupSpec.free_abelian(2, names=("x", "y"))
PROD = GroupSpec.free_product(
    GroupSpec.free_abelian(2, names=("x", "y")), GroupSpec.free(1, names=("t",))
)


def test_alphabet_is_symmetrized():
    for spec in (F2, ZA2, PROD):
        letters = set(spec.alphabet)
        assert all(c.swapcase() in letters for c in letters)
        assert "" not in letters


def test_normal_form_free_reduction():
    assert F2.normal_form("aAb") == "b"
    assert F2.normal_form("abBA") == ""
    assert F2.normal_form("abA") == "abA"


def test_normal_form_abelian_sorting():
    assert ZA2.normal_form("xyx") == "xxy"
    assert ZA2.normal_form("yxY") == "x"
    assert ZA2.normal_form("xX") == ""


def test_normal_form_free_product_syllables():
    w = PROD.normal_form("xtxT")
    assert w == "xtxT"
    assert len(w) == 4
    assert [a for a, _ in PROD.syllables(w)] == [0, 1, 0, 1]


def test_normal_form_unknown_letter():
    with pytest.raises(UnknownLetterError) as exc:
        F2.normal_form("az")
    assert "z" in str(exc.value)


def _oracle_reduce(spec, word):
    # test-local syllable reducer: repeatedly canonicalize adjacent runs
    syl = [(spec.atom_of(c), c) for c in word]
    changed = True
    while changed:
        changed = False
        out = []
        for a, s in syl:
            if out and out[-1][0] == a:
                out[-1] = (a, out[-1][1] + s)
                changed = True
            else:
                out.append((a, s))
        syl = []
        for a, s in out:
            canon = spec._canon_syllable(a, s)
            if canon != s:
                changed = True
            if canon:
                syl.append((a, canon))
    return "".join(s for _, s in syl)


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet="xXyYtT", max_size=8))
def test_normal_form_matches_independent_reducer(word):
    assert PROD.normal_form(word) == _oracle_reduce(PROD, word)


@settings(max_examples=200, deadline=None)
@given(st.text(alphabet="aAbB", max_size=8))
def test_normal_form_idempotent_free(word):
    nf = F2.normal_form(word)
    assert F2.normal_form(nf) == nf


@settings(max_examples=200, deadline=None)
@given(st.text(alphabet="xXyY", max_size=8))
def test_normal_form_idempotent_abelian(word):
    nf = ZA2.normal_form(word)
    assert ZA2.normal_form(nf) == nf


def test_inverse_involution():
    for spec, word in ((F2, "abA"), (ZA2, "xxY"), (PROD, "xtxT")):
        w = spec.normal_form(word)
        assert spec.multiply(w, spec.inverse(w)) == ""
        assert spec.inverse(spec.inverse(w)) == w


def test_word_metric_basics():
    assert F2.word_metric("", "") == 0
    assert ZA2.word_metric("", "xxyyy") == 5
    assert F2.word_metric("a", "b") == 2


def test_word_metric_axioms_and_left_invariance():
    ball = PROD.ball(2)
    small = ball[:12]
    for x in small:
        assert PROD.word_metric(x, x) == 0
        for y in small:
            d = PROD.word_metric(x, y)
            assert d == PROD.word_metric(y, x)
            assert (d == 0) == (x == y)
    g = "t"
    for x in small:
        for y in small:
            gx, gy = PROD.multiply(g, x), PROD.multiply(g, y)
            assert PROD.word_metric(gx, gy) == PROD.word_metric(x, y)


def test_triangle_inequality_sampled():
    ball = F2.ball(3)
    pts = ball[::7]
    for x in pts:
        for y in pts:
            for z in pts:
                assert F2.word_metric(x, z) <= F2.word_metric(x, y) + F2.word_metric(y, z)


def test_ball_counts():
    assert len(F2.ball(1)) == 5
    assert len(F2.ball(2)) == 17
    assert len(ZA2.ball(2)) == 13  # 2r^2 + 2r + 1


def test_ball_bfs_order_and_oracle():
    # independent BFS oracle using multiplication only
    ball = F2.ball(2)
    seen = {""}
    frontier = [""]
    for _ in range(2):
        nxt = []
        for w in frontier:
            for c in F2.alphabet:
                y = F2.multiply(w, c)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    assert set(ball) == seen
    # BFS order: lengths nondecreasing
    lengths = [len(w) for w in ball]
    assert lengths == sorted(lengths)


def test_ball_budget():
    with pytest.raises(BudgetExceededError):
        F2.ball(4, budget=10)


def test_coset_enumeration_free2():
    table = enumerate_cosets(F2, (0,), 1)
    assert [(e.index, e.rep) for e in table.entries] == [(1, ""), (2, "b"), (3, "B")]
    # oracle: strip trailing powers of a from every ball element, dedupe
    oracle = {F2.coset_rep(x, 0) for x in F2.ball(1)}
    assert {e.rep for e in table.entries} == oracle


def test_coset_radius_zero():
    table = enumerate_cosets(PROD, (0,), 0)
    assert len(table) == 1 and table.entries[0].rep == ""


def test_coset_round_robin_two_peripherals():
    table = enumerate_cosets(PROD, (0, 1), 0)
    assert [(e.index, e.slot) for e in table.entries] == [(1, 1), (2, 2)]


def test_coset_reps_pairwise_inequivalent():
    table = enumerate_cosets(PROD, (0,), 2)
    reps = [e.rep for e in table.entries]
    for i, g in enumerate(reps):
        for h in reps[i + 1 :]:
            quotient = PROD.multiply(PROD.inverse(g), h)
            assert not PROD.in_atom(quotient, 0) or quotient == ""


def test_coset_reps_are_shortlex_least():
    table = enumerate_cosets(PROD, (0,), 2)
    ball = PROD.ball(2)
    for e in table.entries:
        members = [x for x in ball if PROD.coset_rep(x, 0) == e.rep]
        best = min(members, key=PROD.shortlex_key)
        assert e.rep == best


def test_coset_csv(tmp_path):
    table = enumerate_cosets(F2, (0,), 1)
    path = tmp_path / "cosets.csv"
    table.to_csv(path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "index,representative,peripheral"
    assert len(lines) == 4


def test_from_config_roundtrip(tmp_path):
    cfg = {
        "family": "free-product",
        "atoms": [
            {"kind": "free-abelian", "rank": 2, "names": ["x", "y"]},
            {"kind": "free", "rank": 1, "names": ["t"]},
        ],
        "peripherals": [0],
    }
    spec, peripherals = GroupSpec.from_config(cfg)
    assert spec.alphabet == PROD.alphabet
    assert peripherals == (0,)
    import json

    path = tmp_path / "group.json"
    path.write_text(json.dumps(cfg))
    spec2, _ = GroupSpec.from_config(str(path))
    assert spec2.alphabet == spec.alphabet


def test_atom_validation():
    with pytest.raises(ValueError):
        Atom("free", ())
    with pytest.raises(ValueError):
        Atom("weird", ("a",))
    with pytest.raises(ValueError):
        GroupSpec.free_product(GroupSpec.free(1, ("a",)), GroupSpec.free(1, ("a",)))
