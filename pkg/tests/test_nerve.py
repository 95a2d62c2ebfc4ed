import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from equicat import corpus
from equicat.errors import InvariantError, VerificationError
from equicat.fincat import (chaotic, chaotic_action, conjugation_on_group_category, discrete, explicit_model,
                            fixed_category, group_automorphism_action, group_category, model_action, translation)
from equicat.groups import coset_gset, regular_gset, subgroups, trivial_gset
from equicat.nerve import (TruncSimplicialSet, bar, bar_comparison, burnside_count, contract_chaotic,
                           fixed_commutes, nerve, nerve_action, nerve_map, orbit_compare, pi0, product_comparison,
                           simpcon_comparison)

from oracles import composable_strings, conjugation_orbits_of_tuples, strings


def _cats():
    G = corpus.named("S3")
    return [chaotic(3), discrete(2), group_category(corpus.named("C3")), translation(G, coset_gset(G, subgroups(G)[1]))]


@pytest.mark.parametrize("C", _cats(), ids=lambda c: c.name)
def test_nerve_sizes_and_identities(C):
    N = nerve(C, 3)
    assert N.check() > 0
    assert N.size(0) == C.n_obj and N.size(1) == C.n_mor
    for q in (2, 3):
        assert N.size(q) == composable_strings(C.src, C.tgt, q)
        assert sorted(map(tuple, N.simplices[q].tolist())) == sorted(strings(C.src, C.tgt, q))


def test_face_conventions_on_level_one():
    C = chaotic(3)
    N = nerve(C, 2)
    d0, d1 = N.face[1]
    assert np.array_equal(d0, C.src) and np.array_equal(d1, C.tgt)
    # middle face of a 2-simplex composes
    rows = N.simplices[2]
    mid = N.face[2][1]
    assert np.array_equal(N.simplices[1][mid][:, 0], C.compose(rows[:, 0], rows[:, 1]))


def test_chaotic_nerve_counts():
    for n in range(1, 4):
        N = nerve(chaotic(n), 3)
        assert N.sizes == [n ** (q + 1) for q in range(4)]
        assert pi0(N) == 1


def test_pi0_counts_components():
    assert pi0(nerve(discrete(4), 1)) == 4
    G = corpus.named("S3")
    Y = trivial_gset(G, 3)
    assert pi0(nerve(translation(G, Y), 1)) == 3
    with pytest.raises(InvariantError):
        pi0(nerve(chaotic(2), 0))


def test_json_roundtrip():
    N = nerve(group_category(corpus.named("C2")), 2)
    S = TruncSimplicialSet.from_json(N.to_json())
    assert S.sizes == N.sizes
    S.check()


def _fixed_oracle(act, H, q):
    """Sizes of N_q(C^H) and (N_q C)^H by brute force on tuples."""
    C = act.cat
    elems = list(H.members)
    if q == 0:
        fixed = [x for x in range(C.n_obj) if all(act.on_obj[h][x] == x for h in elems)]
        return len(fixed), len(fixed)
    fm = [f for f in range(C.n_mor) if all(act.on_mor[h][f] == f for h in elems)]
    fixed_strings = [s for s in strings(C.src, C.tgt, q) if all(all(act.on_mor[h][f] == f for f in s) for h in elems)]
    sub = strings([C.src[f] for f in fm], [C.tgt[f] for f in fm], q) if fm else []
    # sub uses local indices; its count is what matters
    return len(sub), len(fixed_strings)


def _actions():
    G = corpus.named("S3")
    yield "chaotic-S3", chaotic_action(regular_gset(G))
    yield "chaotic-S3/C2", chaotic_action(coset_gset(G, subgroups(G)[1]))
    yield "conj-BS3", conjugation_on_group_category(G)
    act = corpus._actions("C2", "C3")[-1]
    yield "aut-C3", group_automorphism_action(act)
    C2, P = corpus.named("C2"), corpus.named("C2")
    yield "model-C2-C2", model_action(explicit_model(2, P), regular_gset(C2), corpus._actions("C2", "C2")[0])


@pytest.mark.parametrize("name,act", list(_actions()), ids=[n for n, _ in _actions()])
def test_fixed_commutes_against_oracle(name, act):
    for H in subgroups(act.group):
        r = fixed_commutes(act.cat, act, H, q_max=3)
        for row in r["levels"]:
            a, b = _fixed_oracle(act, H, row["q"])
            assert row["fixed_category"] == a == b == row["fixed_simplices"]


def test_nerve_action_orbits_match_burnside_and_oracle():
    for spec in ["C3", "S3", "D4", "Q8"]:
        G = corpus.named(spec)
        act = conjugation_on_group_category(G)
        N = nerve(act.cat, 2)
        ga = nerve_action(act, N)
        for q in (1, 2):
            expect = conjugation_orbits_of_tuples(G.rows, q)
            assert ga.n_orbits(q) == burnside_count(act, q) == expect


def test_orbit_compare_s3_and_a5():
    S3 = conjugation_on_group_category(corpus.named("S3"))
    r = orbit_compare(S3.cat, S3, 2)
    assert [(lv["nerve_of_orbits"], lv["orbits_of_nerve"]) for lv in r["levels"]] == [(1, 1), (2, 3), (4, 11)]
    A5 = conjugation_on_group_category(corpus.named("A5"))
    r = orbit_compare(A5.cat, A5, 2)
    lv = r["levels"][2]
    assert lv["orbits_of_nerve"] == lv["burnside"] == 77 >= 60


@pytest.mark.parametrize("spec", ["C1", "C2", "C3", "S3"])
def test_bar_comparison(spec):
    G = corpus.named(spec)
    for Y in (regular_gset(G), trivial_gset(G, 2)):
        r = bar_comparison(G, Y, 3)
        assert r["sizes"] == [G.order ** q * Y.size for q in range(4)]
    assert simpcon_comparison(G, 3)["ok"]


def test_bar_face_formula_small():
    G = corpus.named("C3")
    Y = regular_gset(G)
    B = bar(G, Y, 2)
    B.check()
    # [g1, g2]y: d0 drops g1, d2 acts with g2
    for idx, row in enumerate(B.simplices[2].tolist()):
        g1, g2, y = row
        d0 = B.simplices[1][B.face[2][0][idx]].tolist()
        d2 = B.simplices[1][B.face[2][2][idx]].tolist()
        assert d0 == [g2, y]
        assert d2 == [g1, Y.act[g2, y]]


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("q", [1, 2, 3])
def test_contract_chaotic(n, q):
    for x0 in range(n):
        r = contract_chaotic(n, x0, q)
        assert r["ok"] and r["sizes"] == [n ** (k + 1) for k in range(q + 1)]


def test_contract_chaotic_rejects_empty():
    with pytest.raises(InvariantError):
        contract_chaotic(0)


def test_product_comparison():
    assert product_comparison(chaotic(2), group_category(corpus.named("C2")), 3)["ok"]


def test_nerve_map_of_functor():
    from equicat.fincat import identity_functor
    C = group_category(corpus.named("S3"))
    m = nerve_map(identity_functor(C), q_max=2)
    m.check()
    assert m.is_isomorphism()


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["C2", "C3", "V4", "S3"]), st.integers(0, 3))
def test_chaotic_fixed_nerve_is_nerve_of_fixed(spec, q):
    G = corpus.named(spec)
    act = chaotic_action(regular_gset(G))
    for H in subgroups(G):
        r = fixed_commutes(act.cat, act, H, q_max=max(q, 1))
        free = H.order == 1
        assert all((row["fixed_category"] > 0) == free for row in r["levels"])
