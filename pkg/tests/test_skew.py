import numpy as np
import pytest

from equicat.crossed import enumerate_crossed, h1
from equicat.errors import BoundExceeded, ContextError, InvariantError
from equicat.groups import coset_gset, gl_order, is_isomorphic, make_named, regular_gset, trivial_gset
from equicat.skew import (FiniteRing, crossed_from_module, embed_in_permutation, enumerate_module_structures,
                          galois_field, gl, hilbert90, module_from_crossed, module_isomorphisms, perm_crossed,
                          perm_skew, prime_field, skew_group_ring, trivial_gring, verify_crossr)

from oracles import count_invertible_mod_p, gl_order_formula


@pytest.mark.parametrize("p,k", [(2, 1), (3, 1), (5, 1), (2, 2), (2, 3), (3, 2), (2, 4)])
def test_galois_fields(p, k):
    K = galois_field(p, k)
    R = K.ring
    R.check()
    assert R.order == p**k and R.is_field and R.is_commutative
    # multiplicative group is cyclic of order q-1
    units = [x for x in range(R.order) if x != R.zero]
    orders = []
    for x in units:
        y, e = x, 1
        while y != R.one:
            y, e = R.mul[y, x], e + 1
        orders.append(e)
    assert max(orders) == p**k - 1
    # Frobenius generates the Galois action with fixed field F_p
    assert len(K.fixed_subring()) == p
    for x in range(R.order):
        y = x
        for _ in range(p - 1):
            y = R.mul[y, x]
        if k > 1:
            assert K.act[1][x] == y


def test_field_argument_errors():
    with pytest.raises(ValueError):
        galois_field(4, 1)
    with pytest.raises(ValueError):
        prime_field(9)


def test_non_ring_rejected():
    a = np.arange(2)
    with pytest.raises(InvariantError):
        FiniteRing((a[:, None] + a[None, :]) % 2, np.ones((2, 2), dtype=int))


@pytest.mark.parametrize("n,p", [(1, 2), (1, 3), (2, 2), (2, 3), (3, 2)])
def test_gl_prime_field_against_brute_force(n, p):
    G = gl(n, galois_field(p, 1))
    assert G.order == count_invertible_mod_p(n, p) == gl_order_formula(n, p)


@pytest.mark.parametrize("n,p,k", [(1, 2, 2), (2, 2, 2), (1, 3, 2)])
def test_gl_extension_field(n, p, k):
    glg = gl(n, galois_field(p, k))
    assert glg.order == gl_order(n, p**k)
    glg.group.check_axioms()
    assert glg.check_gamma_action() > 0
    for i in range(glg.order):
        assert glg.index(glg.matrix(i)) == i


def test_gl_bound():
    with pytest.raises(BoundExceeded):
        gl(3, galois_field(3, 1), bound=100)


def test_gl1_f4_is_c3_with_inversion():
    glg = gl(1, galois_field(2, 2))
    assert is_isomorphic(glg.group, make_named("C3"))
    P = glg.group
    # Frobenius squares units; on a group of order 3 that is inversion
    assert all(glg.entry_action(1, x) == P.inverse(x) for x in range(3))


@pytest.mark.parametrize("p,k,n,aut", [(2, 2, 1, 1), (2, 2, 2, 6), (3, 2, 1, 2)])
def test_hilbert90(p, k, n, aut):
    r = hilbert90(p, k, n)
    assert r["classes"] == 1
    assert r["aut_order"] == r["gl_n_p"] == gl_order(n, p) == aut
    assert r["crossed_homs"] * r["aut_order"] == r["gl_order"]


def test_skew_group_ring_axioms():
    K = galois_field(2, 2)
    S = skew_group_ring(K)
    r = S.check()
    assert r["ok"] and r["size"] == 16
    # (r g)(s h) = r s^g gh: check on basis elements
    a, g = 2, 1
    b, h = 3, 1
    lhs = S.mul(S.basis(a, g), S.basis(b, h))
    expect = S.basis(int(K.ring.mul[a, K.act[g][b]]), K.group.mul(g, h))
    assert np.array_equal(lhs, expect)


def test_trivial_gring_has_group_ring():
    R = prime_field(2)
    G = make_named("C2")
    S = skew_group_ring(trivial_gring(R, G))
    assert S.check()["ok"]


@pytest.mark.parametrize("n", [1, 2])
def test_crossr_f4(n):
    K = galois_field(2, 2)
    r = verify_crossr(K, n)
    assert r["ok"]
    assert r["crossed_homs"] == r["module_structures"]
    glg = gl(n, K)
    assert r["classes"] == len(h1(K.group, glg.group, glg.entry_action))


def test_module_roundtrip_and_isomorphisms():
    K = galois_field(2, 2)
    glg = gl(1, K)
    homs = enumerate_crossed(K.group.whole(), glg.group, glg.entry_action)
    assert len(homs) == 3
    mods = [module_from_crossed(r, glg) for r in homs]
    for r, M in zip(homs, mods):
        M.check()
        assert crossed_from_module(M, glg) == r
    assert all(module_isomorphisms(mods[0], M, glg) for M in mods)
    assert len(enumerate_module_structures(K, 1)) == 3


def test_permutation_modules():
    K = galois_field(2, 2)
    G = K.group
    for A in (regular_gset(G), trivial_gset(G, 2), coset_gset(G, G.whole())):
        M = perm_skew(A, K)
        M.check()
        glg = gl(A.size, K)
        rho = perm_crossed(A, glg)
        rho.check()
    with pytest.raises(ContextError):
        perm_skew(regular_gset(make_named("C2")), K)


def test_embed_in_permutation():
    K = galois_field(2, 2)
    glg = gl(1, K)
    for r in enumerate_crossed(K.group.whole(), glg.group, glg.entry_action):
        res = embed_in_permutation(module_from_crossed(r, glg), search_bound=2)
        assert res["found"] and res["size"] >= 1
        Phi = np.array(res["matrix"])
        assert Phi.shape == (res["size"], 1) and np.any(Phi != 0)
    # a search limited to zero points cannot find anything and says so
    eps = enumerate_crossed(K.group.whole(), glg.group, glg.entry_action)[0]
    res = embed_in_permutation(module_from_crossed(eps, glg), search_bound=0)
    assert not res["found"] and res["reason"] == "search bound"
