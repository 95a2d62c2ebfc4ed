"""Truncated nerves of finite categories, group actions on them, bar constructions.

A ``q``-simplex of ``NC`` is a row ``[f1, ..., fq]`` of morphism indices with
``S(f_i) = T(f_{i+1})``, so its vertices read ``x0 <- x1 <- ... <- xq`` with
``x0 = T(f1)`` and ``x_i = S(f_i)``.  ``d_i`` deletes vertex ``x_i``; on level
one that gives ``d0 = S`` and ``d1 = T``.  Levels are enumerated in
lexicographic order of their rows, so construction is deterministic.
"""

from __future__ import annotations

import json
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import BoundExceeded, ContextError, InvariantError, VerificationError
from .fincat import (CatGAction, FinCat, Functor, RowIndex, chaotic, fixed_category, orbit_category,
                     product as cat_product, translation)
from .groups import FiniteGroup, GSet, Subgroup

DEFAULT_Q_MAX = 3
NERVE_BOUND = 2 * 10**6


def _ro(a) -> np.ndarray:
    a = np.ascontiguousarray(np.asarray(a, dtype=np.int64))
    a.setflags(write=False)
    return a


def _fail(message: str, witness=None):
    raise VerificationError(message, witness)


class TruncSimplicialSet:
    """Levels ``0..q_max`` with face maps ``face[q][i]: S_q -> S_{q-1}`` and
    degeneracies ``degen[q][i]: S_q -> S_{q+1}``, all as index arrays.

    ``simplices[q]`` holds one integer row per simplex (its canonical tuple).
    """

    def __init__(self, simplices: Sequence[np.ndarray], face: Sequence[Sequence[np.ndarray]],
                 degen: Sequence[Sequence[np.ndarray]], name: str = ""):
        self.simplices = [_ro(s) for s in simplices]
        self.face = [[_ro(f) for f in fs] for fs in face]
        self.degen = [[_ro(s) for s in ss] for ss in degen]
        self.name = name
        q_max = len(self.simplices) - 1
        if q_max < 0 or len(self.face) != q_max + 1 or len(self.degen) != q_max + 1:
            raise InvariantError("level structure has inconsistent lengths")
        for q in range(q_max + 1):
            if len(self.face[q]) != (q + 1 if q else 0):
                raise InvariantError(f"level {q} needs {q + 1 if q else 0} face maps")
            if len(self.degen[q]) != (q + 1 if q < q_max else 0):
                raise InvariantError(f"level {q} has the wrong number of degeneracies")

    def __repr__(self):
        return f"TruncSimplicialSet({self.name or '?'}: sizes {self.sizes})"

    @property
    def q_max(self) -> int:
        return len(self.simplices) - 1

    @property
    def sizes(self) -> list[int]:
        return [len(s) for s in self.simplices]

    def size(self, q: int) -> int:
        return len(self.simplices[q])

    def check(self) -> int:
        """Verify every simplicial identity among the stored levels; returns how many were checked."""
        d, s, n = self.face, self.degen, 0
        for q in range(1, self.q_max + 1):
            for i, f in enumerate(d[q]):
                if len(f) != self.size(q) or (len(f) and (f.min() < 0 or f.max() >= self.size(q - 1))):
                    raise InvariantError(f"face d{i} on level {q} is out of range")
        for q in range(self.q_max):
            for i, f in enumerate(s[q]):
                if len(f) != self.size(q) or (len(f) and (f.min() < 0 or f.max() >= self.size(q + 1))):
                    raise InvariantError(f"degeneracy s{i} on level {q} is out of range")
        for q in range(2, self.q_max + 1):
            for j in range(q + 1):
                for i in range(j):
                    if not np.array_equal(d[q - 1][i][d[q][j]], d[q - 1][j - 1][d[q][i]]):
                        _fail(f"d{i} d{j} != d{j - 1} d{i} on level {q}")
                    n += 1
        for q in range(self.q_max - 1):
            for j in range(q + 1):
                for i in range(j + 1):
                    if not np.array_equal(s[q + 1][i][s[q][j]], s[q + 1][j + 1][s[q][i]]):
                        _fail(f"s{i} s{j} != s{j + 1} s{i} on level {q}")
                    n += 1
        ident = [np.arange(k) for k in self.sizes]
        for q in range(self.q_max):
            for j in range(q + 1):
                for i in range(q + 2):
                    lhs = d[q + 1][i][s[q][j]]
                    if i == j or i == j + 1:
                        rhs = ident[q]
                    elif i < j:
                        rhs = s[q - 1][j - 1][d[q][i]]
                    else:
                        rhs = s[q - 1][j][d[q][i - 1]]
                    if not np.array_equal(lhs, rhs):
                        _fail(f"d{i} s{j} identity fails on level {q}")
                    n += 1
        return n

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "q_max": self.q_max,
            "simplices": [s.tolist() for s in self.simplices],
            "face": [[f.tolist() for f in fs] for fs in self.face],
            "degen": [[f.tolist() for f in fs] for fs in self.degen],
        }

    @classmethod
    def from_json(cls, data) -> "TruncSimplicialSet":
        if isinstance(data, str):
            data = json.loads(data)
        simp = [np.asarray(s, dtype=np.int64).reshape(len(s), -1) for s in data["simplices"]]
        return cls(simp, data["face"], data["degen"], name=data.get("name", ""))


class SimplicialMap:
    def __init__(self, dom: TruncSimplicialSet, cod: TruncSimplicialSet, levels: Sequence[np.ndarray],
                 name: str = ""):
        if len(levels) != dom.q_max + 1 or cod.q_max < dom.q_max:
            raise InvariantError("level maps do not match the truncation")
        self.dom, self.cod, self.name = dom, cod, name
        self.levels = [_ro(l) for l in levels]

    def check(self) -> None:
        a, b, m = self.dom, self.cod, self.levels
        for q in range(a.q_max + 1):
            if len(m[q]) != a.size(q):
                raise InvariantError(f"level {q} map has the wrong length")
        for q in range(1, a.q_max + 1):
            for i in range(q + 1):
                if not np.array_equal(m[q - 1][a.face[q][i]], b.face[q][i][m[q]]):
                    _fail(f"map does not commute with d{i} on level {q}")
        for q in range(a.q_max):
            for i in range(q + 1):
                if not np.array_equal(m[q + 1][a.degen[q][i]], b.degen[q][i][m[q]]):
                    _fail(f"map does not commute with s{i} on level {q}")

    def is_injective(self) -> bool:
        return all(len(np.unique(l)) == len(l) for l in self.levels)

    def is_isomorphism(self) -> bool:
        return self.is_injective() and all(len(l) == self.cod.size(q) for q, l in enumerate(self.levels))

    def then(self, other: "SimplicialMap") -> "SimplicialMap":
        if other.dom is not self.cod:
            raise ContextError("simplicial maps are not composable")
        return SimplicialMap(self.dom, other.cod, [o[l] for o, l in zip(other.levels, self.levels)])

    def inverse(self) -> "SimplicialMap":
        if not self.is_isomorphism():
            raise InvariantError("simplicial map is not bijective")
        inv = []
        for l in self.levels:
            a = np.empty_like(l)
            a[l] = np.arange(len(l))
            inv.append(a)
        return SimplicialMap(self.cod, self.dom, inv)


# --------------------------------------------------------------------------
# nerves
# --------------------------------------------------------------------------

class Nerve(TruncSimplicialSet):
    """``NC`` truncated at ``q_max``; ``simplices[0]`` is the column of objects."""

    def __init__(self, cat: FinCat, q_max: int = DEFAULT_Q_MAX, bound: int = NERVE_BOUND):
        if q_max < 0:
            raise InvariantError("q_max must be non-negative")
        self.cat = cat
        levels = [np.arange(cat.n_obj, dtype=np.int64)[:, None]]
        if q_max >= 1:
            levels.append(np.arange(cat.n_mor, dtype=np.int64)[:, None])
        order, starts = cat._in
        for q in range(2, q_max + 1):
            prev = levels[-1]
            s = cat.src[prev[:, -1]]
            counts = starts[s + 1] - starts[s]
            total = int(counts.sum())
            if total > bound:
                raise BoundExceeded(f"N_{q} of {cat.name} has {total} simplices (bound {bound})")
            rep = np.repeat(np.arange(len(prev)), counts)
            off = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
            col = order[np.repeat(starts[s], counts) + off]
            levels.append(np.column_stack([prev[rep], col]))
        self._index = [None] * (q_max + 1)
        face = [[] for _ in range(q_max + 1)]
        degen = [[] for _ in range(q_max + 1)]
        for q in range(1, q_max + 1):
            rows = levels[q]
            if q == 1:
                face[1] = [cat.src[rows[:, 0]], cat.tgt[rows[:, 0]]]
                continue
            fs = [rows[:, 1:]]
            for i in range(1, q):
                fs.append(np.column_stack([rows[:, :i - 1], cat.compose(rows[:, i - 1], rows[:, i]),
                                           rows[:, i + 1:]]))
            fs.append(rows[:, :-1])
            face[q] = [self._lookup(levels, q - 1, r) for r in fs]
        for q in range(q_max):
            if q == 0:
                degen[0] = [cat.ident.copy()]
                continue
            rows = levels[q]
            vert = self._vertices(rows)
            degen[q] = [self._lookup(levels, q + 1, np.column_stack([rows[:, :i], cat.ident[vert[:, i]], rows[:, i:]]))
                        for i in range(q + 1)]
        super().__init__(levels, face, degen, name=f"N({cat.name})")

    def _vertices(self, rows: np.ndarray) -> np.ndarray:
        return np.column_stack([self.cat.tgt[rows[:, 0]], self.cat.src[rows]])

    def _lookup(self, levels, q, rows) -> np.ndarray:
        if q == 0:
            return np.asarray(rows, dtype=np.int64).reshape(-1)
        if self._index[q] is None:
            self._index[q] = RowIndex(levels[q], [self.cat.n_mor] * q)
        return self._index[q].lookup(rows)

    def index(self, q: int, rows) -> np.ndarray:
        """Positions of the given ``q``-simplices (rows of morphisms, or objects for ``q = 0``)."""
        rows = np.asarray(rows, dtype=np.int64)
        if q <= 1:
            return rows.reshape(-1)
        return self._lookup(self.simplices, q, rows.reshape(-1, q))

    def vertices(self, q: int) -> np.ndarray:
        """``(x0, ..., xq)`` for every ``q``-simplex."""
        if q == 0:
            return self.simplices[0]
        return self._vertices(self.simplices[q])


def nerve(c: FinCat, q_max: int = DEFAULT_Q_MAX, bound: int = NERVE_BOUND) -> Nerve:
    return Nerve(c, q_max, bound)


def nerve_map(F: Functor, dom: Nerve | None = None, cod: Nerve | None = None,
              q_max: int = DEFAULT_Q_MAX) -> SimplicialMap:
    """``NF`` on simplices; checked against faces and degeneracies."""
    dom = dom if dom is not None else nerve(F.dom, q_max)
    cod = cod if cod is not None else nerve(F.cod, dom.q_max)
    if dom.cat is not F.dom or cod.cat is not F.cod:
        raise ContextError("nerves are not over the functor's categories")
    levels = [F.obj_map.copy()] + [cod.index(q, F.mor_map[dom.simplices[q]]) for q in range(1, dom.q_max + 1)]
    m = SimplicialMap(dom, cod, levels, name=f"N({F.name})")
    m.check()
    return m


def product_sset(a: TruncSimplicialSet, b: TruncSimplicialSet) -> TruncSimplicialSet:
    """Levelwise product; the pair ``(s, t)`` sits at ``s*|B_q| + t``."""
    q_max = min(a.q_max, b.q_max)
    simp, face, degen = [], [], []
    for q in range(q_max + 1):
        na, nb = a.size(q), b.size(q)
        ia, ib = np.repeat(np.arange(na), nb), np.tile(np.arange(nb), na)
        simp.append(np.column_stack([ia, ib]))
        face.append([fa[ia] * b.size(q - 1) + fb[ib] for fa, fb in zip(a.face[q], b.face[q])] if q else [])
        degen.append([sa[ia] * b.size(q + 1) + sb[ib] for sa, sb in zip(a.degen[q], b.degen[q])]
                     if q < q_max else [])
    return TruncSimplicialSet(simp, face, degen, name=f"{a.name}x{b.name}")


def product_comparison(a: FinCat, b: FinCat, q_max: int = DEFAULT_Q_MAX) -> dict:
    """``N(A×B) -> NA × NB`` is a simplicial isomorphism."""
    ab = cat_product(a, b)
    n_ab, n_a, n_b = nerve(ab, q_max), nerve(a, q_max), nerve(b, q_max)
    prod = product_sset(n_a, n_b)
    mb = b.n_mor
    levels = [n_ab.simplices[0][:, 0]]
    for q in range(1, q_max + 1):
        rows = n_ab.simplices[q]
        levels.append(n_a.index(q, rows // mb) * n_b.size(q) + n_b.index(q, rows % mb))
    m = SimplicialMap(n_ab, prod, levels, name="product")
    m.check()
    prod.check()
    if not m.is_isomorphism():
        _fail("N(AxB) -> NA x NB is not bijective")
    return {"sizes": n_ab.sizes, "ok": True}


# --------------------------------------------------------------------------
# group actions on nerves
# --------------------------------------------------------------------------

class SimplicialGAction:
    """Left action by permutations ``perms[q][g]`` of each level."""

    def __init__(self, group: FiniteGroup, sset: TruncSimplicialSet, perms: Sequence[np.ndarray],
                 validate: bool = True):
        self.group, self.sset = group, sset
        self.perms = [_ro(np.asarray(p).reshape(group.order, sset.size(q))) for q, p in enumerate(perms)]
        if len(self.perms) != sset.q_max + 1:
            raise InvariantError("one permutation table per level is required")
        if validate:
            self.check()

    def check(self) -> None:
        G, S, P = self.group, self.sset, self.perms
        t = G.table
        for q, p in enumerate(P):
            if not np.array_equal(p[G.identity], np.arange(S.size(q))):
                raise InvariantError(f"identity does not act trivially on level {q}")
            if not np.array_equal(np.sort(p, axis=1), np.broadcast_to(np.arange(S.size(q)), p.shape)):
                raise InvariantError(f"not a permutation on level {q}")
            for h in G.generators():
                if not np.array_equal(p[t[:, h]], p[:, p[h]]):
                    raise InvariantError(f"not an action on level {q} at generator {h}")
        for q in range(1, S.q_max + 1):
            for i, f in enumerate(S.face[q]):
                if not np.array_equal(P[q - 1][:, f], f[P[q]]):
                    _fail(f"action does not commute with d{i} on level {q}")
        for q in range(S.q_max):
            for i, s in enumerate(S.degen[q]):
                if not np.array_equal(P[q + 1][:, s], s[P[q]]):
                    _fail(f"action does not commute with s{i} on level {q}")

    def fixed(self, q: int, elems: Sequence[int]) -> np.ndarray:
        p = self.perms[q]
        elems = list(elems) or [self.group.identity]
        return np.flatnonzero(np.all(p[elems] == np.arange(p.shape[1]), axis=0))

    def orbit_labels(self, q: int) -> np.ndarray:
        """Least member of each simplex's orbit."""
        return self.perms[q].min(axis=0)

    def n_orbits(self, q: int) -> int:
        return len(np.unique(self.orbit_labels(q)))


def nerve_action(act: CatGAction, N: Nerve, validate: bool = True) -> SimplicialGAction:
    """The action induced on ``NC`` by a ``G``-action on ``C``."""
    if N.cat is not act.cat:
        raise ContextError("nerve of a different category")
    perms = [act.on_obj.copy()]
    for q in range(1, N.q_max + 1):
        rows = N.simplices[q]
        perms.append(np.stack([N.index(q, act.on_mor[g][rows]) for g in range(act.group.order)]))
    return SimplicialGAction(act.group, N, perms, validate=validate)


def fixed_commutes(c: FinCat, act: CatGAction, H=None, q_max: int = DEFAULT_Q_MAX,
                   bound: int = NERVE_BOUND, N: Nerve | None = None) -> dict:
    """``N(C^H)`` against ``(NC)^H``: the inclusion is a simplicial map onto the fixed simplices.

    Fixed simplices of ``NC`` are found by moving every simplex with each
    generator of ``H``; nothing about strings of fixed morphisms is assumed.
    """
    F = fixed_category(c, act, H)
    if isinstance(H, Subgroup):
        elems = H.generators()
    else:
        elems = list(H) if H is not None else act.group.generators()
    if N is None:
        N = nerve(c, q_max, bound)
    elif N.cat is not c or N.q_max != q_max:
        raise ContextError("precomputed nerve does not match")
    NF = nerve(F, q_max, bound)
    NF.check()
    levels = [F.obj_index.copy()] + [N.index(q, F.mor_index[NF.simplices[q]]) for q in range(1, q_max + 1)]
    inc = SimplicialMap(NF, N, levels, name="inclusion")
    inc.check()
    if not inc.is_injective():
        _fail("N(C^H) -> NC is not injective")
    rows = []
    for q in range(q_max + 1):
        keep = np.ones(N.size(q), dtype=bool)
        for g in elems:
            moved = act.on_obj[g][N.simplices[0][:, 0]] if q == 0 else N.index(q, act.on_mor[g][N.simplices[q]])
            keep &= moved == np.arange(N.size(q))
        fixed = np.flatnonzero(keep)
        if not np.array_equal(np.sort(levels[q]), fixed):
            _fail(f"N_{q}(C^H) and (N_{q}C)^H differ", witness=q)
        rows.append({"q": q, "fixed_category": NF.size(q), "fixed_simplices": len(fixed), "total": N.size(q)})
    return {"category": c.name, "levels": rows, "ok": True}


def _max_level(n_obj: int, per_step: int, q_max: int, bound: int) -> int:
    """Largest ``q <= q_max`` with ``n_obj * per_step**q <= bound`` (a chaotic-style size estimate)."""
    q = -1
    while q < q_max and n_obj * per_step ** (q + 1) <= bound:
        q += 1
    return q


def verify_fixed_nerve_corpus(max_gamma: int | None = None, q_max: int = DEFAULT_Q_MAX,
                              model_bound: int = 2 * 10**5) -> dict:
    """``N(C^H) = (NC)^H`` over the corpus, for every ``H <= G``.

    Families: ``Π`` as a one-object ``G``-category through the action, the
    chaotic ``G~`` with translation, and the explicit model of
    ``Cat(G~, Π)`` with conjugation.  The model is truncated at the largest
    level whose size estimate stays within ``model_bound`` (skipped when even
    level one does not fit); the level used is reported per triple.
    """
    from .corpus import named, triples
    from .fincat import chaotic_action, explicit_model, group_automorphism_action, model_action
    from .groups import regular_gset, subgroups
    runs, model_levels, skipped, seen_g = 0, {}, [], set()

    def run(ca, q, subs):
        N = nerve(ca.cat, q)
        for H in subs:
            fixed_commutes(ca.cat, ca, H, q, N=N)
        return len(subs)

    for gs, ps, action in triples(max_gamma=max_gamma):
        G, P = named(gs), named(ps)
        subs = subgroups(G)
        X = regular_gset(G)
        if gs not in seen_g:
            seen_g.add(gs)
            runs += run(chaotic_action(X), q_max, subs)
        runs += run(group_automorphism_action(action), q_max, subs)
        o = P.order ** (G.order - 1)
        qm = _max_level(o, o * P.order, q_max, model_bound)
        key = f"{gs}/{ps}/{action.name}"
        model_levels[key] = qm
        if qm >= 1:
            runs += run(model_action(explicit_model(G.order, P), X, action, validate=False), qm, subs)
        else:
            skipped.append(key)
    return {"runs": runs, "model_levels": model_levels, "model_skipped": skipped, "ok": True}


def burnside_count(act: CatGAction, q: int) -> int:
    """``|(N_q C)/G|`` by Burnside's lemma, counting fixed strings with adjacency matrices."""
    G, C = act.group, act.cat
    total = 0
    for g in range(G.order):
        fo = act.on_obj[g] == np.arange(C.n_obj)
        if q == 0:
            total += int(fo.sum())
            continue
        fm = np.flatnonzero(act.on_mor[g] == np.arange(C.n_mor))
        M = np.zeros((C.n_obj, C.n_obj), dtype=object)
        np.add.at(M, (C.tgt[fm], C.src[fm]), 1)
        P = M
        for _ in range(q - 1):
            P = P.dot(M)
        total += int(P.sum())
    if total % G.order:
        _fail("Burnside sum is not divisible by |G|", witness=total)
    return total // G.order


def orbit_compare(c: FinCat, act: CatGAction, q_max: int = 2) -> dict:
    """Per-level ``|N_q(C/G)|`` against ``|(N_q C)/G|``.

    ``C/G`` is the quotient category of :func:`orbit_category`; when orbits of
    morphisms do not form a congruence it is the generated congruence
    (``descended`` is then false).
    """
    Q = orbit_category(c, act)
    NQ = nerve(Q, q_max)
    N = nerve(c, q_max)
    ga = nerve_action(act, N, validate=False)
    rows = []
    for q in range(q_max + 1):
        orb = ga.n_orbits(q)
        rows.append({"q": q, "nerve_of_orbits": NQ.size(q), "orbits_of_nerve": orb,
                     "burnside": burnside_count(act, q), "equal": NQ.size(q) == orb})
        if rows[-1]["burnside"] != orb:
            _fail(f"orbit enumeration and Burnside count disagree on level {q}", witness=rows[-1])
    return {"category": c.name, "descended": Q.descended, "levels": rows}


# --------------------------------------------------------------------------
# bar constructions
# --------------------------------------------------------------------------

def bar(G: FiniteGroup, Y: GSet, q_max: int = DEFAULT_Q_MAX, bound: int = NERVE_BOUND) -> TruncSimplicialSet:
    """``B_*(*, G, Y)``: ``[g1, ..., gq]y`` is the row ``(g1, ..., gq, y)`` at its mixed-radix index."""
    if Y.group is not G:
        raise ContextError("G-set over a different group")
    n, m, t = G.order, Y.size, G.table
    simp, face, degen = [], [], []

    def idx(rows):
        out = np.zeros(len(rows), dtype=np.int64)
        for k in range(rows.shape[1] - 1):
            out = out * n + rows[:, k]
        return out * m + rows[:, -1]

    for q in range(q_max + 1):
        if n**q * m > bound:
            raise BoundExceeded(f"B_{q} has {n**q * m} simplices (bound {bound})")
        grid = np.indices((n,) * q + (m,)).reshape(q + 1, -1).T
        simp.append(grid)
        g, y = grid[:, :q], grid[:, q]
        fs = []
        if q:
            fs.append(grid[:, 1:])
            for i in range(1, q):
                fs.append(np.column_stack([g[:, :i - 1], t[g[:, i - 1], g[:, i]], grid[:, i + 1:]]))
            fs.append(np.column_stack([g[:, :q - 1], Y.act[g[:, q - 1], y]]))
        face.append([idx(r) for r in fs])
        if q < q_max:
            e = np.full((len(grid), 1), G.identity)
            degen.append([idx(np.column_stack([g[:, :i], e, grid[:, i:]])) for i in range(q + 1)])
        else:
            degen.append([])
    return TruncSimplicialSet(simp, face, degen, name=f"B(*,{G.name},Y)")


def bar_comparison(G: FiniteGroup, Y: GSet, q_max: int = DEFAULT_Q_MAX) -> dict:
    """``N<G,Y> -> B_*(*,G,Y)``, checked in both directions.

    Forward: read ``g_i`` off ``f_i`` and ``y`` off the source of ``f_q``.
    Backward: rebuild ``f_i = (g_i, g_{i+1}...g_q y)`` and look it up.
    """
    T = translation(G, Y)
    N = nerve(T, q_max)
    B = bar(G, Y, q_max)
    B.check()
    m = Y.size
    fwd = [np.arange(m)]
    back = [np.arange(m)]
    for q in range(1, q_max + 1):
        rows = N.simplices[q]
        key = np.zeros(len(rows), dtype=np.int64)
        for k in range(q):
            key = key * G.order + rows[:, k] // m
        fwd.append(key * m + rows[:, -1] % m)
        brow = B.simplices[q]
        pts = np.empty((len(brow), q), dtype=np.int64)
        pt = brow[:, q]
        for i in range(q - 1, -1, -1):
            pts[:, i] = brow[:, i] * m + pt
            pt = Y.act[brow[:, i], pt]
        back.append(N.index(q, pts))
    F = SimplicialMap(N, B, fwd, name="Cat1")
    F.check()
    if not F.is_isomorphism():
        _fail("N<G,Y> -> B(*,G,Y) is not bijective")
    for q in range(q_max + 1):
        if not np.array_equal(F.inverse().levels[q], back[q]):
            _fail(f"explicit inverse disagrees on level {q}")
    return {"nerve": N, "bar": B, "map": F, "sizes": B.sizes, "ok": True}


def simpcon_comparison(G: FiniteGroup, q_max: int = DEFAULT_Q_MAX) -> dict:
    """``E_*G -> D_*G`` through ``N<G,G>`` and ``Nμ``: ``[g1..gq]y`` goes to ``(g1...gq y, ..., gq y, y)``."""
    from .fincat import mu
    from .groups import regular_gset
    Y = regular_gset(G)
    cmp = bar_comparison(G, Y, q_max)
    F = mu(G)["functor"]
    if F.dom.n_obj != cmp["nerve"].cat.n_obj:
        raise ContextError("unexpected μ domain")
    # μ was built on its own translation category; rebuild its map on ours
    mF = Functor(cmp["nerve"].cat, F.cod, F.obj_map, F.mor_map, name="mu")
    mF.check()
    D = nerve(F.cod, q_max)
    Nmu = nerve_map(mF, cmp["nerve"], D)
    alpha = cmp["map"].inverse().then(Nmu)
    t = G.table
    for q in range(q_max + 1):
        brow = cmp["bar"].simplices[q]
        vert = np.empty((len(brow), q + 1), dtype=np.int64)
        pt = brow[:, q]
        vert[:, q] = pt
        for i in range(q - 1, -1, -1):
            pt = t[brow[:, i], pt]
            vert[:, i] = pt
        if not np.array_equal(D.vertices(q)[alpha.levels[q]], vert):
            _fail(f"E_*G -> D_*G is not the standard comparison on level {q}")
    if not alpha.is_isomorphism():
        _fail("E_*G -> D_*G is not bijective")
    return {"sizes": D.sizes, "ok": True}


# --------------------------------------------------------------------------
# chaotic nerves
# --------------------------------------------------------------------------

def contract_chaotic(n: int, x0: int = 0, q_max: int = DEFAULT_Q_MAX) -> dict:
    """Extra degeneracy ``h(x0, ..., xq) = (x0, ..., xq, *)`` on ``D_*X = N(X~)``.

    The basepoint is appended as a new last vertex, i.e. ``[f1..fq]`` gains
    the unique arrow ``* -> xq``.  Checked exhaustively:
    ``d_{q+1} h = id``, ``d_i h = h d_i`` (``i <= q``), ``d0 h = *`` on level 0,
    ``s_i h = h s_i`` and ``h h = s_{q+1} h``.
    """
    if n < 1 or not 0 <= x0 < n:
        raise InvariantError("need a nonempty set with a basepoint")
    D = nerve(chaotic(n), q_max)
    D.check()
    h = []
    for q in range(q_max):
        rows = D.simplices[q]
        last = rows[:, 0] if q == 0 else D.cat.src[rows[:, -1]]
        arrow = last * n + x0
        h.append(D.index(q + 1, arrow if q == 0 else np.column_stack([rows, arrow])))
    d, s, checked = D.face, D.degen, 0
    for q in range(q_max):
        if not np.array_equal(d[q + 1][q + 1][h[q]], np.arange(D.size(q))):
            _fail(f"d{q + 1} h != id on level {q}")
        checked += 1
        if q == 0:
            if not np.all(d[1][0][h[0]] == x0):
                _fail("d0 h is not constant at the basepoint")
            checked += 1
        for i in range(q + 1 if q else 0):
            if not np.array_equal(d[q + 1][i][h[q]], h[q - 1][d[q][i]]):
                _fail(f"d{i} h != h d{i} on level {q}")
            checked += 1
        if q + 1 < q_max:
            for i in range(q + 1):
                if not np.array_equal(s[q + 1][i][h[q]], h[q + 1][s[q][i]]):
                    _fail(f"s{i} h != h s{i} on level {q}")
                checked += 1
            if not np.array_equal(h[q + 1][h[q]], s[q + 1][q + 1][h[q]]):
                _fail(f"h h != s{q + 1} h on level {q}")
            checked += 1
    return {"n": n, "basepoint": x0, "sizes": D.sizes, "identities": checked,
            "h": [a.tolist() for a in h], "ok": True}


def pi0(S: TruncSimplicialSet) -> int:
    """Components: the coequalizer of ``d0, d1: S_1 -> S_0``."""
    if S.q_max < 1:
        raise InvariantError("pi0 needs level 1")
    n = S.size(0)
    if n == 0:
        return 0
    d0, d1 = S.face[1]
    g = coo_matrix((np.ones(len(d0)), (d0, d1)), shape=(n, n))
    return int(connected_components(g, directed=False)[0])
