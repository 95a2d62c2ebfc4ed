import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from equicat import corpus
from equicat.crossed import (CrossedHom, anti_iso_witnesses, bar, centralizer, check_fixed_map,
                             complement_subgroups, crossed_from_lambda, enumerate_crossed, fixed_map, h1,
                             iso_witnesses, lambda_of, trivial_crossed, twist, unbar, verify_finlem1,
                             verify_finlem2)
from equicat.errors import ContextError, InvariantError
from equicat.groups import GroupAction, cyclic, semidirect, subgroups, trivial_action

from oracles import complement_count, h1_oracle

# (G, Π) pairs small enough for the brute-force oracles
ORACLE_PAIRS = [("C2", "C2"), ("C2", "C3"), ("C2", "C4"), ("C2", "V4"), ("C2", "S3"), ("C3", "C3"),
                ("C3", "V4"), ("C3", "S3"), ("V4", "C2"), ("C4", "C2"), ("S3", "C2"), ("S3", "C3"),
                ("C2", "Q8"), ("C2", "D4"), ("V4", "V4")]


def _contexts(pairs=ORACLE_PAIRS):
    for gs, ps in pairs:
        G, P = corpus.named(gs), corpus.named(ps)
        for i, act in enumerate(corpus._actions(gs, ps)):
            yield pytest.param(G, P, act, id=f"{gs}-{ps}-{i}")


def inversion(G, P):
    inv = np.stack([np.arange(P.order) if g == G.identity else P.inv for g in range(G.order)])
    return GroupAction(G, P, inv, name="inversion")


@pytest.mark.parametrize("G,P,act", list(_contexts()))
def test_h1_matches_union_find_oracle(G, P, act):
    for H in subgroups(G):
        tab = h1(G, P, act, H)
        n, sizes, stabs, total = h1_oracle(G.rows, P.rows, act.rows, H.members, P.identity)
        assert len(tab) == n
        assert sorted(c.size for c in tab.classes) == sizes
        assert sorted(c.aut.order for c in tab.classes) == stabs
        assert tab.total == total
        # orbit-stabiliser inside each class
        assert all(c.size * c.aut.order == P.order for c in tab.classes)


@pytest.mark.parametrize("G,P,act", list(_contexts()))
def test_complement_classes_match_oracle(G, P, act):
    gp = semidirect(P, G, act)
    n_comp, n_cls = complement_count(P.rows, G.rows, act.rows, P.identity, G.identity)
    assert len(complement_subgroups(gp)) == n_comp
    assert len(h1(G, P, act)) == n_cls
    r = verify_finlem1(G, P, act, gp)
    assert r["h1"] == r["pi_classes"] == n_cls


def test_enumeration_methods_agree():
    for gs, ps in [("S3", "C3"), ("C4", "S3"), ("V4", "C4"), ("D4", "C2")]:
        G, P = corpus.named(gs), corpus.named(ps)
        for act in corpus._actions(gs, ps):
            for H in subgroups(G):
                a = [x.values for x in enumerate_crossed(H, P, act, method="scan")]
                b = [x.values for x in enumerate_crossed(H, P, act, method="generators")]
                assert a == b


def test_trivial_action_gives_homs_up_to_conjugacy():
    G, P = cyclic(2), corpus.named("S3")
    tab = h1(G, P, trivial_action(G, P))
    # homs C2 -> S3: trivial and three involutions (one class)
    assert tab.total == 4 and len(tab) == 2
    assert tab.classes[tab.basepoint].aut.order == 6


def test_inversion_on_cyclic():
    G = cyclic(2)
    for n, expect in [(3, 1), (4, 2), (5, 1), (6, 2)]:
        P = cyclic(n)
        assert len(h1(G, P, inversion(G, P))) == expect


def test_crossed_law_and_check():
    G, P = cyclic(2), cyclic(3)
    act = inversion(G, P)
    for a in enumerate_crossed(G.whole(), P, act):
        a.check()
        for g in range(2):
            for h in range(2):
                assert a(G.mul(g, h)) == P.mul(a(g), act(g, a(h)))
    with pytest.raises(InvariantError):
        CrossedHom(G.whole(), act, [1, 0])


def test_twist_and_witnesses():
    G, P = corpus.named("C2"), corpus.named("S3")
    for act in corpus._actions("C2", "S3"):
        homs = enumerate_crossed(G.whole(), P, act)
        for a in homs:
            for s in range(P.order):
                b = twist(a, s)
                b.check()
                assert s in iso_witnesses(a, b)
            assert set(centralizer(a).members) == set(iso_witnesses(a, a))
            for b in homs:
                w = iso_witnesses(a, b)
                # witnesses from a to b form a coset of Π^a
                if w:
                    s0 = w[0]
                    assert sorted(w) == sorted(P.mul(s0, c) for c in centralizer(a).members)


def test_bar_roundtrip_and_anti_law():
    for gs, ps in [("S3", "C3"), ("C2", "S3"), ("C4", "C4")]:
        G, P = corpus.named(gs), corpus.named(ps)
        for act in corpus._actions(gs, ps):
            homs = enumerate_crossed(G.whole(), P, act)
            for a in homs:
                b = bar(a)
                b.check()
                assert unbar(b).values == a.values
                for c in homs:
                    assert iso_witnesses(a, c) == anti_iso_witnesses(b, bar(c))


def test_lambda_roundtrip():
    G, P = corpus.named("S3"), corpus.named("C3")
    for act in corpus._actions("S3", "C3"):
        gp = semidirect(P, G, act)
        for H in subgroups(G):
            for a in enumerate_crossed(H, P, act):
                lam = lambda_of(a, gp)
                assert lam.order == H.order
                assert lam.as_set() & gp.pi_image == {gp.gamma.identity}
                back = crossed_from_lambda(lam, gp)
                assert back.source == H and back.values == a.values


def test_crossed_from_lambda_rejects_meeting_pi():
    G, P = cyclic(2), cyclic(2)
    gp = semidirect(P, G, trivial_action(G, P))
    with pytest.raises(InvariantError):
        crossed_from_lambda(gp.gamma.whole(), gp)


def test_context_mismatch():
    G = cyclic(2)
    P1, P2 = cyclic(3), cyclic(3)
    a = trivial_crossed(G.whole(), trivial_action(G, P1))
    b = trivial_crossed(G.whole(), trivial_action(G, P2))
    with pytest.raises(ContextError):
        iso_witnesses(a, b)
    with pytest.raises(ContextError):
        h1(G, P2, trivial_action(G, P1))


@pytest.mark.parametrize("G,P,act", list(_contexts(ORACLE_PAIRS[:10])))
def test_finlem2_and_fixed_maps(G, P, act):
    gp = semidirect(P, G, act)
    for H in subgroups(G):
        for a in enumerate_crossed(H, P, act):
            verify_finlem2(a, gp)
            f = fixed_map(a)
            assert check_fixed_map(a, f)


def test_fixed_map_bad_reps():
    G, P = cyclic(4), cyclic(2)
    H = next(s for s in subgroups(G) if s.order == 2)
    a = trivial_crossed(H, trivial_action(G, P))
    with pytest.raises(InvariantError):
        fixed_map(a, reps=[0, 2])


def test_h1_json_shape():
    G, P = cyclic(2), cyclic(4)
    d = h1(G, P, inversion(G, P)).to_json()
    assert d["crossed_homs"] == sum(c["size"] for c in d["classes"])
    assert sum(c["basepoint"] for c in d["classes"]) == 1


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([("C2", "S3"), ("C3", "C3"), ("S3", "C2"), ("C2", "D4"), ("C4", "C4")]), st.data())
def test_twist_is_action(pair, data):
    G, P = corpus.named(pair[0]), corpus.named(pair[1])
    act = data.draw(st.sampled_from(corpus._actions(*pair)))
    homs = enumerate_crossed(G.whole(), P, act)
    a = data.draw(st.sampled_from(homs))
    s = data.draw(st.integers(0, P.order - 1))
    t = data.draw(st.integers(0, P.order - 1))
    assert twist(twist(a, t), s).values == twist(a, P.mul(s, t)).values
    assert twist(a, P.identity).values == a.values
