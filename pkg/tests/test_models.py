import itertools
from math import perm

import numpy as np
import pytest

from equicat import corpus
from equicat.errors import BoundExceeded, ContextError, InvariantError
from equicat.models import (build_universe, e_orbit, e_tilde, gl_fixed_object, gl_orbit, gl_tilde,
                            lambda_fixed_injection, place_hset, verify_e_model, verify_gl_model)
from equicat.crossed import enumerate_crossed
from equicat.skew import galois_field

from oracles import all_subgroups

ALL_SMALL = ["C1", "C2", "C3", "C4", "V4", "C5", "C6", "S3"]


def test_universe_layout():
    for spec, c, size in [("C1", 3, 3), ("C2", 1, 3), ("S3", 1, 1 + 2 + 3 + 6), ("S3", 2, 24)]:
        U = build_universe(corpus.named(spec), c)
        assert U.size == size
        U.gset.check()
        for t, K in enumerate(U.types):
            for j in range(c):
                assert U.gset.stabilizer(U.base[t][j]).as_set() == K.as_set()
    with pytest.raises(InvariantError):
        build_universe(corpus.named("C2"), 0)
    with pytest.raises(BoundExceeded):
        build_universe(corpus.named("S3"), 10, bound=50)


def test_place_hset_equivariant_and_copy_count():
    G = corpus.named("S3")
    U = build_universe(G, 2)
    H = G.whole()
    # two fixed points need two copies of G/G
    act = np.zeros((G.order, 2), dtype=np.int64)
    act[:, 1] = 1
    out, need = place_hset(U, list(H.members), act)
    assert need == 2
    for i, h in enumerate(H.members):
        for p in range(2):
            assert U.gset(h, out[p]) == out[act[i, p]]
    U1 = build_universe(G, 1)
    with pytest.raises(BoundExceeded, match="needs 2 copies"):
        place_hset(U1, list(H.members), act)


def _oracle_fixed(E):
    """Every subgroup of Σn×G (brute force) with a Python scan for fixed injective tuples."""
    n, G = E.n, E.G
    perms = [tuple(p) for p in itertools.permutations(range(n))]
    act = E.U.gset.act.tolist()
    tuples = list(itertools.permutations(range(E.U.size), n))

    def move(s, g, a):
        sinv = [perms[s].index(i) for i in range(n)]
        return tuple(act[g][a[sinv[i]]] for i in range(n))

    sigma = {E.pair(s, G.identity) for s in range(len(perms))}
    out = []
    for S in all_subgroups(E.gamma.rows, E.gamma.identity):
        admissible = S & sigma == {E.gamma.identity}
        els = [divmod(x, G.order) for x in S]
        has = any(all(move(s, g, a) == a for s, g in els) for a in tuples)
        out.append((admissible, has))
    return out


@pytest.mark.parametrize("spec,n", [("C2", 1), ("C2", 2), ("C3", 2), ("V4", 2), ("S3", 2), ("C2", 3)])
def test_fixed_objects_exist_exactly_for_admissible(spec, n):
    G = corpus.named(spec)
    E = e_tilde(G, n, build_universe(G, n))
    assert E.n_obj == perm(E.U.size, n)
    for admissible, has in _oracle_fixed(E):
        assert admissible == has


@pytest.mark.parametrize("spec", ALL_SMALL)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_verify_e_model(spec, n):
    r = verify_e_model(corpus.named(spec), n)
    assert r["ok"] and r["copies_needed"] <= r["copies"]


def test_e_model_zero():
    r = verify_e_model(corpus.named("C2"), 0, 1)
    assert r["objects"] == 1 and r["lambdas"] == 2


def test_e_free_action_oracle():
    G = corpus.named("C3")
    E = e_tilde(G, 2, build_universe(G, 2))
    assert E.check_free() == E.n_obj
    for s in range(1, E.sym.order):
        moved = E.action.act[E.pair(s, G.identity)]
        assert np.all(moved != np.arange(E.n_obj))


def test_lambda_fixed_injection_reports_need():
    G = corpus.named("C2")
    E = e_tilde(G, 2, build_universe(G, 1))
    # trivial ρ on H = G: two fixed points, one copy of G/G available
    with pytest.raises(BoundExceeded):
        lambda_fixed_injection(E, G.whole(), [E.sym.identity] * 2)
    E2 = e_tilde(G, 2, build_universe(G, 2))
    r = lambda_fixed_injection(E2, G.whole(), [E2.sym.identity] * 2)
    assert r["copies_needed"] == 2


def test_e_tilde_errors():
    G = corpus.named("C2")
    with pytest.raises(ContextError):
        e_tilde(G, 1, build_universe(corpus.named("C3")))
    with pytest.raises(InvariantError):
        e_tilde(G, 5, build_universe(G))


@pytest.mark.parametrize("spec,n,c", [("C1", 1, 1), ("C2", 1, 1), ("C2", 2, 1), ("C3", 2, 1), ("S3", 1, 1),
                                      ("S3", 2, 1), ("V4", 2, 1)])
def test_e_orbit_description(spec, n, c):
    G = corpus.named(spec)
    U = build_universe(G, c)
    r = e_orbit(G, n, U)
    assert r["objects"] == perm(U.size, n) // perm(n, n)
    # chaotic quotient: each pair of subsets carries n! bijections
    assert r["morphisms"] == r["objects"] ** 2 * perm(n, n)


def test_gl_tilde_f4():
    K = galois_field(2, 2)
    U = build_universe(K.group, 1)
    T = gl_tilde(1, K, U)
    # nonzero columns of length |U| = 3 over F4
    assert T.n_obj == 4 ** 3 - 1
    assert T.check_free() == T.n_obj
    assert T.check_semidirect_law() > 0


def test_gl_fixed_objects_for_every_crossed_hom():
    K = galois_field(2, 2)
    U = build_universe(K.group, 1)
    T = gl_tilde(1, K, U)
    glg = T.glg
    for rho in enumerate_crossed(K.group.whole(), glg.group, glg.entry_action):
        r = gl_fixed_object(T, rho)
        assert r["found"]


@pytest.mark.parametrize("p,k", [(2, 2), (3, 2), (2, 3)])
def test_verify_gl_model_n1(p, k):
    r = verify_gl_model(1, galois_field(p, k))
    assert r["ok"] and r["gl_order"] == p**k - 1


def test_gl_model_n2_needs_more_copies():
    with pytest.raises(BoundExceeded):
        verify_gl_model(2, galois_field(2, 2), c=1)


def test_gl_orbit_f4():
    K = galois_field(2, 2)
    r = gl_orbit(1, K, build_universe(K.group, 1))
    # lines in F4^3 are 21; each pair of lines has |GL(1,F4)| = 3 isomorphisms
    assert r["objects"] == 21 and r["morphisms"] == 21 * 21 * 3
    G = K.group
    only_fixed = build_universe(G, 1, types=[G.whole()])
    r = gl_orbit(1, K, only_fixed)
    assert r["objects"] == 1 and r["morphisms"] == 3
