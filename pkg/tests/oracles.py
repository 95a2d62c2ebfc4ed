"""Brute-force reference computations used as independent oracles.

Nothing here calls the enumeration or search code of the package; inputs are
plain Python tables (lists of lists) read off the objects under test.
"""

from __future__ import annotations

import itertools
from math import prod


# -- groups -----------------------------------------------------------------

def perm_compose(p, q):
    """(pq)(i) = p(q(i))."""
    return tuple(p[i] for i in q)


def table_from_perms(perms):
    idx = {p: i for i, p in enumerate(perms)}
    return [[idx[perm_compose(p, q)] for q in perms] for p in perms]


def is_group_table(t) -> bool:
    n = len(t)
    es = [e for e in range(n) if all(t[e][x] == x == t[x][e] for x in range(n))]
    if len(es) != 1:
        return False
    e = es[0]
    if any(sorted(row) != list(range(n)) for row in t):
        return False
    if not all(any(t[a][b] == e for b in range(n)) for a in range(n)):
        return False
    return all(t[t[a][b]][c] == t[a][t[b][c]] for a in range(n) for b in range(n) for c in range(n))


def closure(t, gens, e):
    out = {e}
    frontier = [e]
    while frontier:
        x = frontier.pop()
        for s in gens:
            y = t[x][s]
            if y not in out:
                out.add(y)
                frontier.append(y)
    return frozenset(out)


def all_subgroups(t, e):
    """Every subgroup, via closures of ever-larger generating sets (small groups only)."""
    n = len(t)
    seen = {frozenset([e])}
    frontier = [frozenset([e])]
    while frontier:
        nxt = []
        for s in frontier:
            for x in range(n):
                if x not in s:
                    c = closure(t, list(s) + [x], e)
                    if c not in seen:
                        seen.add(c)
                        nxt.append(c)
        frontier = nxt
    return seen


def inverse_of(t, e, a):
    return next(b for b in range(len(t)) if t[a][b] == e)


# -- crossed homomorphisms ----------------------------------------------------

def crossed_maps(gt, pt, act, H):
    """All dicts h -> Π with a(gh) = a(g) (g . a(h)) on the subgroup H (brute force over maps)."""
    H = sorted(H)
    out = []
    for vals in itertools.product(range(len(pt)), repeat=len(H)):
        a = dict(zip(H, vals))
        if all(a[gt[g][h]] == pt[a[g]][act[g][a[h]]] for g in H for h in H):
            out.append(a)
    return out


def h1_oracle(gt, pt, act, H, pe):
    """(number of classes, sorted class sizes, sorted stabiliser orders) by union-find on twisting."""
    homs = crossed_maps(gt, pt, act, H)
    key = [tuple(sorted(a.items())) for a in homs]
    pos = {k: i for i, k in enumerate(key)}
    parent = list(range(len(homs)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    stab = [0] * len(homs)
    for i, a in enumerate(homs):
        for s in range(len(pt)):
            # b(h) = s a(h) (h.s)^-1
            b = {h: pt[pt[s][v]][inverse_of(pt, pe, act[h][s])] for h, v in a.items()}
            j = pos[tuple(sorted(b.items()))]
            if j == i:
                stab[i] += 1
            parent[find(i)] = find(j)
    groups = {}
    for i in range(len(homs)):
        groups.setdefault(find(i), []).append(i)
    sizes = sorted(len(v) for v in groups.values())
    stabs = sorted(stab[v[0]] for v in groups.values())
    return len(groups), sizes, stabs, len(homs)


def semidirect_table(pt, gt, act):
    n, m = len(pt), len(gt)
    return [[pt[s][act[a][t]] * m + gt[a][b] for t in range(n) for b in range(m)]
            for s in range(n) for a in range(m)]


def complement_count(pt, gt, act, pe, ge):
    """Π-conjugacy classes of complements of Π in Π⋊G, found by choosing one point per fibre."""
    n, m = len(pt), len(gt)
    T = semidirect_table(pt, gt, act)
    comps = set()
    for vals in itertools.product(range(n), repeat=m):
        if vals[ge] != pe:
            continue
        S = frozenset(vals[g] * m + g for g in range(m))
        if all(T[x][y] in S for x in S for y in S):
            comps.add(S)
    e = pe * m + ge
    classes = set()
    for S in comps:
        orbit = []
        for s in range(n):
            x = s * m + ge
            xi = inverse_of(T, e, x)
            orbit.append(frozenset(T[T[x][y]][xi] for y in S))
        classes.add(min(tuple(sorted(o)) for o in orbit))
    return len(comps), len(classes)


# -- categories and nerves ------------------------------------------------------

def composable_strings(src, tgt, q):
    """Number of strings (f1, ..., fq) with src(f_i) = tgt(f_{i+1})."""
    n_obj = max(list(src) + list(tgt), default=-1) + 1
    if q == 0:
        return None
    count = {x: 0 for x in range(n_obj)}
    # count[x] = number of strings of current length whose last source is x
    for f in range(len(src)):
        count[src[f]] += 1
    for _ in range(q - 1):
        new = {x: 0 for x in range(n_obj)}
        for f in range(len(src)):
            new[src[f]] += count[tgt[f]]
        count = new
    return sum(count.values())


def conjugation_orbits_of_tuples(gt, q):
    """Orbits of G on G^q under simultaneous conjugation, by explicit orbit sweeping."""
    n = len(gt)
    e = next(x for x in range(n) if gt[x][x] == x)
    inv = [inverse_of(gt, e, a) for a in range(n)]
    seen = set()
    orbits = 0
    for tup in itertools.product(range(n), repeat=q):
        if tup in seen:
            continue
        orbits += 1
        for g in range(n):
            seen.add(tuple(gt[gt[g][x]][inv[g]] for x in tup))
    return orbits


# -- finite fields ----------------------------------------------------------------

def gl_order_formula(n, q):
    return prod(q**n - q**i for i in range(n))


def count_invertible_mod_p(n, p):
    """|GL(n, F_p)| by brute force over all matrices with Gaussian elimination."""
    count = 0
    for entries in itertools.product(range(p), repeat=n * n):
        M = [list(entries[i * n:(i + 1) * n]) for i in range(n)]
        rank = 0
        for c in range(n):
            piv = next((r for r in range(rank, n) if M[r][c] % p), None)
            if piv is None:
                continue
            M[rank], M[piv] = M[piv], M[rank]
            iv = pow(M[rank][c], p - 2, p)
            for r in range(n):
                if r != rank and M[r][c]:
                    f = M[r][c] * iv
                    M[r] = [(x - f * y) % p for x, y in zip(M[r], M[rank])]
            rank += 1
        count += rank == n
    return count


def strings(src, tgt, q):
    """All composable q-strings (f1, ..., fq) as tuples (q >= 1)."""
    out = [(f,) for f in range(len(src))]
    for _ in range(q - 1):
        out = [s + (g,) for s in out for g in range(len(src)) if tgt[g] == src[s[-1]]]
    return out
