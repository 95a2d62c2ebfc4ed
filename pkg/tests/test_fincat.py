import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from equicat import corpus
from equicat.errors import BoundExceeded, ContextError, DescentError, InvariantError
from equicat.fincat import (CatGAction, FinCat, Functor, chaotic, chaotic_action, conjugation_on_group_category,
                            cross_check_decomposition, discrete, explicit_model, fixed_category,
                            fixed_decomposition, fixed_decomposition_generic, from_table, functor_category,
                            group_category, identity_functor, is_chaotic_or_empty, mu, mu_gamma, orbit_category,
                            product, terminal, translation, verify_fixed_uni, verify_notformal)
from equicat.groups import coset_gset, regular_gset, subgroups, trivial_gset

from oracles import h1_oracle


def _poset(n):
    """The total order 0 < 1 < ... < n-1 as a thin category."""
    pairs = [(x, y) for y in range(n) for x in range(n) if x <= y]
    idx = {p: i for i, p in enumerate(pairs)}
    src = [x for x, _ in pairs]
    tgt = [y for _, y in pairs]
    ident = [idx[(x, x)] for x in range(n)]
    tri = [(idx[(b, c)], idx[(a, b)], idx[(a, c)]) for a, b in pairs for (b2, c) in pairs if b2 == b]
    return from_table(n, src, tgt, ident, tri, name=f"[{n - 1}]")


@pytest.mark.parametrize("n", [0, 1, 2, 4])
def test_chaotic_axioms(n):
    C = chaotic(n)
    C.check_axioms()
    assert C.n_mor == n * n
    assert is_chaotic_or_empty(C)
    assert C.is_groupoid()
    if n:
        assert C.is_chaotic()
        assert C.components()[0] == 1
    if n > 1:  # morphism y*n+x goes x -> y
        assert C.src[1 * n + 0] == 0 and C.tgt[1 * n + 0] == 1


@pytest.mark.parametrize("spec", ["C1", "C3", "S3", "Q8"])
def test_group_and_translation_categories(spec):
    G = corpus.named(spec)
    B = group_category(G)
    B.check_axioms()
    assert B.is_groupoid() and B.n_obj == 1
    grp, _ = B.vertex_group(0)
    assert grp.order == G.order
    for Y in (regular_gset(G), trivial_gset(G, 2)):
        T = translation(G, Y)
        T.check_axioms()
        assert T.n_mor == G.order * Y.size
        assert T.components()[0] == len(Y.orbits())


def _inverses_oracle(C):
    out = []
    for f in range(C.n_mor):
        inv = [g for g in range(C.n_mor)
               if C.src[g] == C.tgt[f] and C.tgt[g] == C.src[f]
               and C.comp(g, f) == C.ident[C.src[f]] and C.comp(f, g) == C.ident[C.tgt[f]]]
        out.append(inv[0] if inv else -1)
    return out


def test_inverses_against_oracle():
    G = corpus.named("S3")
    cats = [_poset(3), product(_poset(2), group_category(corpus.named("C3"))),
            translation(G, coset_gset(G, subgroups(G)[1])), chaotic(3), discrete(2)]
    for C in cats:
        assert C.inverses().tolist() == _inverses_oracle(C)


def test_poset_and_products():
    P = _poset(3)
    P.check_axioms()
    assert P.is_thin() and not P.is_groupoid()
    Q = product(P, chaotic(2))
    Q.check_axioms()
    assert Q.n_obj == 6 and Q.n_mor == 6 * 4
    D = discrete(3)
    D.check_axioms()
    assert D.components()[0] == 3


def test_bad_category_detected():
    # composite of the two non-identity loops has the wrong value for associativity
    # on a one-object category with a non-associative table
    table = [[0, 1, 2], [1, 0, 0], [2, 2, 0]]
    tri = [(f, g, table[f][g]) for f in range(3) for g in range(3)]
    C = from_table(1, [0, 0, 0], [0, 0, 0], [0], tri)
    with pytest.raises(InvariantError):
        C.check_axioms()


def test_text_roundtrip():
    C = product(_poset(2), group_category(corpus.named("C2")))
    D = FinCat.from_text(C.to_text())
    D.check_axioms()
    assert D.n_obj == C.n_obj and np.array_equal(D.src, C.src) and np.array_equal(D.tgt, C.tgt)
    f = np.arange(C.n_mor)
    for g in range(C.n_mor):
        ok = C.tgt[g] == C.src[f]
        assert np.array_equal(C.compose(f[ok], np.full(ok.sum(), g)), D.compose(f[ok], np.full(ok.sum(), g)))
    with pytest.raises(InvariantError):
        FinCat.from_text("objects 1\nmorphisms x\n")


def test_functor_composition_and_inverse():
    C = chaotic(3)
    perm = np.array([2, 0, 1])
    mor = perm[np.arange(9) // 3] * 3 + perm[np.arange(9) % 3]
    F = Functor(C, C, perm, mor)
    F.check()
    assert F.is_isomorphism()
    assert F.then(F.inverse()).equals(identity_functor(C))
    bad = Functor(C, C, perm, np.zeros(9))
    with pytest.raises(InvariantError):
        bad.check()


@pytest.mark.parametrize("A", [chaotic(1), chaotic(2), discrete(2), _poset(2), _poset(3), group_category(corpus.named("C2"))],
                         ids=["ch1", "ch2", "disc2", "poset2", "poset3", "BC2"])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_functor_category_into_chaotic_is_chaotic(A, k):
    fc = functor_category(A, chaotic(k))
    fc.check_axioms()
    # a functor into a chaotic category is its object map
    assert fc.n_obj == k ** A.n_obj
    assert fc.is_chaotic()


@pytest.mark.parametrize("n,ps", [(1, "C3"), (2, "C2"), (2, "S3"), (3, "C2"), (3, "C3")])
def test_functors_chaotic_to_group(n, ps):
    P = corpus.named(ps)
    fc = functor_category(chaotic(n), group_category(P))
    assert fc.n_obj == P.order ** (n - 1)
    assert fc.n_mor == P.order ** (2 * (n - 1)) * P.order
    assert fc.is_groupoid() and fc.components()[0] == 1


@pytest.mark.parametrize("spec", ["C2", "C3", "S3", "V4", "D4"])
def test_fixed_categories_of_chaotic_are_chaotic_or_empty(spec):
    G = corpus.named(spec)
    sets = [regular_gset(G), trivial_gset(G, 2)] + [coset_gset(G, H) for H in subgroups(G)]
    for Y in sets:
        act = chaotic_action(Y)
        act.check()
        for H in subgroups(G):
            fx = fixed_category(act.cat, act, H)
            fx.check_axioms()
            assert is_chaotic_or_empty(fx)
            fixed_pts = [y for y in range(Y.size) if all(Y.act[h, y] == y for h in H.members)]
            assert fx.n_obj == len(fixed_pts)


def test_fixed_category_context_errors():
    G = corpus.named("C2")
    act = chaotic_action(regular_gset(G))
    with pytest.raises(ContextError):
        fixed_category(chaotic(2), act)
    other = corpus.named("C3")
    with pytest.raises(ContextError):
        fixed_category(act.cat, act, other.whole())


def test_orbit_category_free_and_nonfree():
    G = corpus.named("S3")
    act = chaotic_action(regular_gset(G))
    Q = orbit_category(act.cat, act, strict=True)
    Q.check_axioms()
    assert Q.descended and Q.n_obj == 1 and Q.n_mor == G.order
    Q.quotient().check()
    conj = conjugation_on_group_category(G)
    with pytest.raises(DescentError):
        orbit_category(conj.cat, conj, strict=True)
    loose = orbit_category(conj.cat, conj)
    loose.check_axioms()
    assert not loose.descended
    # the generated congruence on BS3 is the abelianisation C2
    assert loose.n_mor == 2


@pytest.mark.parametrize("spec", ["C1", "C2", "C3", "V4", "S3", "Q8"])
def test_mu(spec):
    r = mu(corpus.named(spec))
    assert r["ok"] and r["morphisms"] == corpus.named(spec).order ** 2


@pytest.mark.parametrize("gs,ps", [("C2", "C2"), ("C2", "C3"), ("C3", "C2"), ("S3", "C2"), ("C2", "S3")])
def test_fixed_uni_and_mu_gamma(gs, ps):
    G, P = corpus.named(gs), corpus.named(ps)
    for act in corpus._actions(gs, ps):
        r = verify_fixed_uni(G, P, act)
        assert r["ok"] and r["free"] <= r["subgroups"]
        assert mu_gamma(G, P, act)["ok"]


@pytest.mark.parametrize("n,ps", [(1, "C2"), (2, "C3"), (2, "S3"), (3, "C2"), (3, "V4")])
def test_notformal_counts(n, ps):
    P = corpus.named(ps)
    r = verify_notformal(n, P)
    assert r["objects"] == P.order ** (n - 1)
    assert r["morphisms"] == P.order ** (2 * (n - 1)) * P.order
    M = explicit_model(n, P)
    M.check_axioms()
    assert M.is_groupoid()


@pytest.mark.parametrize("gs,ps", [("C2", "C2"), ("C2", "C3"), ("C2", "S3"), ("C3", "C2"), ("C3", "C3"),
                                   ("V4", "C2"), ("S3", "C2")])
def test_fixed_decomposition_matches_h1_oracle(gs, ps):
    G, P = corpus.named(gs), corpus.named(ps)
    for act in corpus._actions(gs, ps):
        for H in subgroups(G):
            r = fixed_decomposition(G, P, act, H)
            n, _, stabs, _ = h1_oracle(G.rows, P.rows, act.rows, H.members, P.identity)
            assert r["components"] == n
            assert sorted(len(c["vertex_group"]) for c in r["classes"]) == stabs


@pytest.mark.parametrize("gs,ps", [("C2", "C2"), ("C2", "C3"), ("C3", "C2"), ("C2", "S3")])
def test_decomposition_routes_agree(gs, ps):
    G, P = corpus.named(gs), corpus.named(ps)
    for act in corpus._actions(gs, ps):
        for H in subgroups(G):
            ex = fixed_decomposition(G, P, act, H, ghfix=False)
            ge = fixed_decomposition_generic(G, P, act, H)
            assert ex["components"] == ge["components"]
            assert cross_check_decomposition(G, P, act, H)["ok"]


def test_decomposition_bounds():
    G, P = corpus.named("C6"), corpus.named("S3")
    with pytest.raises(BoundExceeded):
        fixed_decomposition(G, P, corpus._actions("C6", "S3")[0], bound=1000)
    with pytest.raises(BoundExceeded):
        fixed_decomposition_generic(G, P, corpus._actions("C6", "S3")[0])


def test_functor_enumeration_bound_counts_object_assignments():
    with pytest.raises(BoundExceeded):
        functor_category(chaotic(8), chaotic(6))
    # a one-object codomain leaves a single assignment however large the domain
    fc = functor_category(chaotic(12), group_category(corpus.named("C1")))
    assert fc.n_obj == 1 and fc.n_mor == 1


def test_generic_decomposition_nine_objects():
    G, P = corpus.named("C9"), corpus.named("C2")
    act = corpus._actions("C9", "C2")[0]
    for H in subgroups(G):
        assert cross_check_decomposition(G, P, act, H)["ok"]


def test_terminal():
    T = terminal()
    assert T.n_obj == 1 and T.n_mor == 1


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 4), st.data())
def test_chaotic_composition_property(n, data):
    C = chaotic(n)
    x, y, z = (data.draw(st.integers(0, n - 1)) for _ in range(3))
    f, g = z * n + y, y * n + x
    assert C.comp(f, g) == z * n + x
