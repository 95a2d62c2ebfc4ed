"""The symmetric-group model ``E~_G(n)`` and the general linear model ``GL~(n, R)``.

Both are chaotic categories over a finite truncation of the ambient ``G``-set
``U``, which holds ``c`` copies of every orbit type ``G/K``.  Objects are stored
as arrays; the chaotic category itself is only built when it is small.

Objects of ``E~_G(n)`` are injective tuples ``(α(0), ..., α(n-1))`` of points
of ``U`` and ``(σ, g)`` sends ``α`` to ``g∘α∘σ^-1``.  Objects of ``GL~(n, R)``
are ``|U| × n`` matrices ``Φ`` of injective ``R``-linear maps ``R^n -> R[U]``
(column ``i`` is ``α(e_i)``); ``g`` sends ``Φ`` to ``P_g Φ^g`` and ``τ`` acts on
the right by ``Φ τ``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .crossed import CrossedHom, enumerate_crossed
from .errors import BoundExceeded, ContextError, InvariantError, VerificationError
from .fincat import CatGAction, FinCat, Functor, RowIndex, chaotic_action, orbit_category
from .groups import (FiniteGroup, GSet, Subgroup, coset_gset, direct_product, disjoint_union, homomorphisms,
                     semidirect, subgroup_classes, subgroups, symmetric)
from .skew import GRing, MatrixGroupGL, _vec_index, _vectors, embed_in_permutation, gl, module_from_crossed

UNIVERSE_BOUND = 10**4
OBJECT_BOUND = 2 * 10**5
CATEGORY_BOUND = 10**6


def _fail(message: str, witness=None):
    raise VerificationError(message, witness)


def _rows(it, n: int) -> np.ndarray:
    """Tuples of length ``n`` as an int array (``n`` may be 0)."""
    rows = list(it)
    return np.array(rows, dtype=np.int64).reshape(len(rows), n)


# --------------------------------------------------------------------------
# the universe
# --------------------------------------------------------------------------

@dataclass
class FiniteUniverse:
    """``c`` copies of ``G/K`` for each orbit type ``K`` in ``types``."""

    group: FiniteGroup
    copies: int
    gset: GSet
    types: list[Subgroup]
    # base[t][j] is the point eK of copy j of type t; its stabiliser is types[t]
    base: list[list[int]]
    orbit_of: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return self.gset.size

    def type_of(self, K: Sequence[int]) -> tuple[int, int] | None:
        """``(t, x)`` with ``x types[t] x^-1 = K``, or None."""
        target = frozenset(int(k) for k in K)
        for t, T in enumerate(self.types):
            if T.order != len(target):
                continue
            for x in range(self.group.order):
                if T.conjugate(x).as_set() == target:
                    return t, x
        return None


def build_universe(G: FiniteGroup, c: int = 1, types: Sequence[Subgroup] | None = None,
                   bound: int = UNIVERSE_BOUND) -> FiniteUniverse:
    """``c`` copies of ``G/K`` for one ``K`` per conjugacy class (or for the given ``types``).

    Types are sorted by ``|K|``; the copies of one type are adjacent.
    """
    if c < 1:
        raise InvariantError("need at least one copy of each orbit")
    if types is None:
        types = [cl[0] for cl in subgroup_classes(G)]
    reps = sorted(types, key=lambda K: (K.order, K.members))
    total = c * sum(G.order // K.order for K in reps)
    if total > bound:
        raise BoundExceeded(f"universe of {total} points exceeds bound {bound}")
    cols, base, orbit_of, off = [], [], [], 0
    for t, K in enumerate(reps):
        orb = coset_gset(G, K)
        e_pt = next(i for i, r in enumerate(K.left_coset_reps()) if G.identity in {G.mul(r, k) for k in K})
        base.append([])
        for j in range(c):
            cols.append(orb.act + off)
            base[t].append(off + e_pt)
            orbit_of += [t * c + j] * orb.size
            off += orb.size
    X = GSet(G, np.concatenate(cols, axis=1), name=f"U({G.name},{c})")
    return FiniteUniverse(G, c, X, list(reps), base, np.array(orbit_of, dtype=np.int64))


def place_hset(U: FiniteUniverse, H: Sequence[int], act: np.ndarray) -> tuple[np.ndarray, int]:
    """An ``H``-equivariant injection of a finite ``H``-set into ``U``.

    ``act[i, p]`` is ``H[i]·p``.  An orbit ``H/K`` is sent into an unused copy
    of ``G/K'`` (``K' ~ K``) through ``h·p -> h x·eK'``, so the image is a copy
    of ``G ×_H A``.  Returns the point map and the largest number of copies of
    one type that was used.
    """
    H = [int(h) for h in H]
    m = act.shape[1]
    # orbit representatives with their orbit type, before anything is placed
    reps, seen = [], np.zeros(m, dtype=bool)
    for p in range(m):
        if seen[p]:
            continue
        seen[act[:, p]] = True
        hit = U.type_of([h for i, h in enumerate(H) if act[i, p] == p])
        if hit is None:
            raise BoundExceeded("universe lacks the orbit type of a stabiliser")
        reps.append((p, *hit))
    counts = np.bincount([t for _, t, _ in reps], minlength=len(U.types))
    need = int(counts.max(initial=0))
    if need > U.copies:
        raise BoundExceeded(f"needs {need} copies of orbit type {int(counts.argmax())}, universe has {U.copies}")
    out = np.full(m, -1, dtype=np.int64)
    used = [0] * len(U.types)
    for p, t, x in reps:
        u = U.gset(x, U.base[t][used[t]])
        used[t] += 1
        for i, h in enumerate(H):
            out[act[i, p]] = U.gset(h, u)
    if len(np.unique(out)) != m:
        _fail("placement is not injective")
    return out, need


def _equivariant(F: Functor, a: CatGAction, b: CatGAction) -> None:
    for g in range(a.group.order):
        if not (np.array_equal(F.obj_map[a.on_obj[g]], b.on_obj[g][F.obj_map])
                and np.array_equal(F.mor_map[a.on_mor[g]], b.on_mor[g][F.mor_map])):
            _fail("isomorphism is not G-equivariant", witness=g)


def _induced_action(ca: CatGAction, Q) -> CatGAction:
    """The ``G``-action on an orbit category induced by an action commuting with the quotiented one."""
    G = ca.group
    on_obj = np.stack([Q.obj_class[ca.on_obj[g][Q.obj_rep]] for g in range(G.order)])
    on_mor = np.stack([Q.mor_class[ca.on_mor[g][Q.mor_rep]] for g in range(G.order)])
    for g in range(G.order):
        if not (np.array_equal(on_obj[g][Q.obj_class], Q.obj_class[ca.on_obj[g]])
                and np.array_equal(on_mor[g][Q.mor_class], Q.mor_class[ca.on_mor[g]])):
            _fail("G-action does not descend to the orbit category", witness=g)
    return CatGAction(G, Q, on_obj, on_mor, name="induced")


def _part(ca: CatGAction, group: FiniteGroup, idx: Sequence[int]) -> CatGAction:
    return CatGAction(group, ca.cat, ca.on_obj[list(idx)], ca.on_mor[list(idx)], validate=False)


# --------------------------------------------------------------------------
# E~_G(n)
# --------------------------------------------------------------------------

class ETilde:
    """Objects of ``E~_G(n)`` with the ``Σ_n × G`` action; ``(σ, g)`` sits at ``σ*|G| + g``."""

    def __init__(self, G: FiniteGroup, n: int, U: FiniteUniverse, bound: int = OBJECT_BOUND):
        if U.group is not G:
            raise ContextError("universe over a different group")
        if n < 0 or n > U.size:
            raise InvariantError(f"no {n}-element subset in a universe of {U.size} points")
        count = 1
        for i in range(n):
            count *= U.size - i
        if count > bound:
            raise BoundExceeded(f"{count} objects exceed bound {bound}")
        self.G, self.n, self.U = G, n, U
        self.sym = symmetric(n)
        self.perms = _rows(itertools.permutations(range(n)), n)
        self.objects = _rows(itertools.permutations(range(U.size), n), n)
        self._index = RowIndex(self.objects, [U.size] * n)
        self.gamma = direct_product(self.sym, G)
        sinv = np.argsort(self.perms, axis=1)
        act = np.empty((self.gamma.order, len(self.objects)), dtype=np.int64)
        for s in range(self.sym.order):
            # (α∘σ^-1)(i) = α(σ^-1(i))
            moved = self.objects[:, sinv[s]]
            for g in range(G.order):
                act[self.pair(s, g)] = self.index(U.gset.act[g][moved])
        self.action = GSet(self.gamma, act, name="Sigma_n x G")

    @property
    def n_obj(self) -> int:
        return len(self.objects)

    def index(self, rows) -> np.ndarray:
        rows = np.asarray(rows, dtype=np.int64)
        if self.n == 0:
            return np.zeros(rows.shape[0] if rows.ndim == 2 else 1, dtype=np.int64)
        return self._index.lookup(rows.reshape(-1, self.n))

    def pair(self, s: int, g: int) -> int:
        return s * self.G.order + g

    def sigma_elements(self) -> list[int]:
        return [self.pair(s, self.G.identity) for s in range(self.sym.order)]

    def check_free(self) -> int:
        """Every ``Σ_n``-stabiliser is trivial; returns the number of objects checked."""
        ar = np.arange(self.n_obj)
        for s in range(self.sym.order):
            if s != self.sym.identity and np.any(self.action.act[self.pair(s, self.G.identity)] == ar):
                _fail("Σ_n does not act freely", witness=self.perms[s].tolist())
        return self.n_obj

    def fixed_objects(self, elems: Sequence[int]) -> np.ndarray:
        ar = np.arange(self.n_obj)
        return np.flatnonzero(np.all(self.action.act[list(elems)] == ar, axis=0))

    def category(self, bound: int = CATEGORY_BOUND) -> CatGAction:
        """The chaotic category with its ``Σ_n × G`` action."""
        if self.n_obj ** 2 > bound:
            raise BoundExceeded(f"{self.n_obj}^2 morphisms exceed bound {bound}")
        return chaotic_action(self.action)


def e_tilde(G: FiniteGroup, n: int, U: FiniteUniverse) -> ETilde:
    return ETilde(G, n, U)


def lambda_fixed_injection(E: ETilde, H: Subgroup, rho: Sequence[int]) -> dict:
    """A ``Λ_ρ``-fixed object, ``Λ_ρ = {(ρ(h), h)}``, for a homomorphism ``ρ: H -> Σ_n``.

    ``ρ`` lists ``Σ_n`` elements aligned with ``H.members``.  The ``H``-set
    ``n`` (through ``ρ``) is placed into ``U`` and the result is checked to be
    fixed by every ``(ρ(h), h)``.
    """
    H_el = list(H.members)
    act = E.perms[np.asarray(rho, dtype=np.int64)].reshape(len(H_el), E.n)
    alpha, need = place_hset(E.U, H_el, act)
    obj = int(E.index(alpha)[0])
    for h, s in zip(H_el, rho):
        if E.action(E.pair(int(s), h), obj) != obj:
            _fail("constructed object is not Λ-fixed", witness=(h, int(s)))
    return {"object": obj, "alpha": alpha.tolist(), "copies_needed": need}


def verify_e_model(G: FiniteGroup, n: int, c: int | None = None) -> dict:
    """Freeness and ``Λ``-fixed objects for every ``Λ <= Σ_n × G`` with ``Λ ∩ Σ_n = e``.

    The admissible ``Λ`` are found twice, as graphs of homomorphisms
    ``H -> Σ_n`` and by a subgroup search avoiding ``Σ_n``; fixed objects are
    both constructed and found by scanning.
    """
    c = max(n, 1) if c is None else c
    U = build_universe(G, c)
    E = e_tilde(G, n, U)
    E.check_free()
    graphs: set[frozenset[int]] = set()
    need = 0
    for H in subgroups(G):
        hg, emb = H.as_group()
        for rho in homomorphisms(hg, E.sym):
            vals = list(rho.map)
            r = lambda_fixed_injection(E, H, vals)
            need = max(need, r["copies_needed"])
            lam = [E.pair(s, h) for s, h in zip(vals, emb)]
            if r["object"] not in E.fixed_objects(lam):
                _fail("scan disagrees with the constructed fixed object", witness=lam)
            graphs.add(frozenset(lam))
    direct = {S.as_set() for S in subgroups(E.gamma, bound=E.gamma.order, avoid=E.sigma_elements())}
    if direct != graphs:
        _fail("graph subgroups and subgroups avoiding Σ_n differ",
              witness=sorted(map(sorted, direct ^ graphs))[:3])
    return {"G": G.name, "n": n, "copies": c, "universe": U.size, "objects": E.n_obj,
            "lambdas": len(graphs), "copies_needed": need, "ok": True}


# -- E_G(n) as an orbit category and directly --------------------------------

class EDirect(FinCat):
    """``E_G(n)`` directly: ``n``-subsets of ``U`` and bijections.

    The morphism ``(B, A, σ)`` sits at ``(B*|Ob| + A)*n! + σ`` and sends the
    ``i``-th element of ``A`` to the ``σ(i)``-th element of ``B`` (both sorted).
    """

    def __init__(self, G: FiniteGroup, n: int, U: FiniteUniverse):
        self.G, self.n, self.U = G, n, U
        self.subsets = _rows(itertools.combinations(range(U.size), n), n)
        self._sidx = RowIndex(self.subsets, [U.size] * n)
        self.sym = symmetric(n)
        self.perms = _rows(itertools.permutations(range(n)), n)
        self._pidx = RowIndex(self.perms, [n] * n)
        k, f = len(self.subsets), self.sym.order
        rest = np.arange(k * k * f) // f
        st = self.sym.table
        super().__init__(k, rest % k, rest // k, (np.arange(k) * k + np.arange(k)) * f + self.sym.identity,
                         lambda a, b: ((a // f) // k * k + (b // f) % k) * f + st[a % f, b % f],
                         name=f"E_{G.name}({n})")

    def mor(self, B, A, s):
        return (np.asarray(B) * self.n_obj + A) * self.sym.order + s

    def parts(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        f, k = self.sym.order, self.n_obj
        idx = np.arange(self.n_mor)
        return idx // f // k, idx // f % k, idx % f

    def g_action(self) -> CatGAction:
        """Translation of subsets; bijections by ``(gγ)(g·a) = g·γ(a)``."""
        G, U = self.G, self.U
        on_obj = np.empty((G.order, self.n_obj), dtype=np.int64)
        on_mor = np.empty((G.order, self.n_mor), dtype=np.int64)
        B, A, s = self.parts()
        for g in range(G.order):
            moved = U.gset.act[g][self.subsets]
            order = np.argsort(moved, axis=1)
            on_obj[g] = self._sidx.lookup(np.take_along_axis(moved, order, axis=1))
            # pi[X][i] is the position of g·x_i in sorted gX; σ' = π_B σ π_A^-1
            pi = np.argsort(order, axis=1)
            inner = np.take_along_axis(self.perms[s], order[A], axis=1)
            new = np.take_along_axis(pi[B], inner, axis=1)
            on_mor[g] = self.mor(on_obj[g][B], on_obj[g][A], self._pidx.lookup(new))
        return CatGAction(G, self, on_obj, on_mor, name="conjugation")

    def pinned_frames(self, da: CatGAction) -> np.ndarray:
        """``η_A`` as tuples: the least subset of each ``G``-orbit gets its sorted order, and
        ``η_{gA0} = g∘η_{A0}`` for the least ``g`` reaching ``gA0``."""
        eta = np.full((self.n_obj, self.n), -1, dtype=np.int64)
        done = np.zeros(self.n_obj, dtype=bool)
        for A0 in range(self.n_obj):
            if done[A0]:
                continue
            for g in range(self.G.order):
                B = int(da.on_obj[g][A0])
                if not done[B]:
                    eta[B] = self.U.gset.act[g][self.subsets[A0]]
                    done[B] = True
        return eta


def e_orbit(G: FiniteGroup, n: int, U: FiniteUniverse) -> dict:
    """``E~_G(n)/Σ_n`` against :class:`EDirect`, with a ``G``-equivariant isomorphism.

    Forward, the class of ``α -> β`` goes to ``β∘α^-1``.  Backward, ``γ: A -> B``
    goes to the class of ``η_A -> γ∘η_A`` for pinned frames ``η``.  The two
    routes are checked to be mutually inverse.
    """
    if n < 1:
        raise InvariantError("e_orbit needs n >= 1")
    E = e_tilde(G, n, U)
    ca = E.category()
    Q = orbit_category(ca.cat, _part(ca, E.sym, E.sigma_elements()), strict=True)
    qa = _induced_action(_part(ca, G, [E.pair(E.sym.identity, g) for g in range(G.order)]), Q)
    D = EDirect(G, n, U)
    da = D.g_action()
    m, objs = E.n_obj, E.objects
    subset_of = D._sidx.lookup(np.sort(objs, axis=1))
    tgt, src = Q.mor_rep // m, Q.mor_rep % m
    # σ sends the position of α(i) in A to the position of β(i) in B
    posA = np.argsort(np.argsort(objs[src], axis=1), axis=1)
    posB = np.argsort(np.argsort(objs[tgt], axis=1), axis=1)
    sig = np.empty_like(posA)
    np.put_along_axis(sig, posA, posB, axis=1)
    F = Functor(Q, D, subset_of[Q.obj_rep], D.mor(subset_of[tgt], subset_of[src], D._pidx.lookup(sig)),
                name="orbit->direct")
    F.check()
    if not F.is_isomorphism():
        _fail("E~/Σ_n -> E_G(n) is not bijective", witness=(Q.n_obj, Q.n_mor, D.n_obj, D.n_mor))
    _equivariant(F, qa, da)
    # backward route through the pinned frames
    eta = D.pinned_frames(da)
    if not np.array_equal(np.sort(eta, axis=1), D.subsets):
        _fail("pinned frame does not enumerate its subset")
    B, A, s = D.parts()
    p = np.argsort(np.argsort(eta, axis=1), axis=1)[A]   # position of η_A(j) in sorted A
    img = np.take_along_axis(D.subsets[B], np.take_along_axis(D.perms[s], p, axis=1), axis=1)
    back = Q.mor_class[E.index(img) * m + E.index(eta[A])]
    if not np.array_equal(F.mor_map[back], np.arange(D.n_mor)):
        _fail("the frame route does not invert the canonical isomorphism")
    return {"G": G.name, "n": n, "universe": U.size, "objects": Q.n_obj, "morphisms": Q.n_mor,
            "descended": Q.descended, "ok": True}


# --------------------------------------------------------------------------
# GL~(n, R)
# --------------------------------------------------------------------------

class GLTilde:
    """Objects of ``GL~(n, R)`` with the ``GL ⋊ G`` action ``(τ, g)Φ = (gΦ)τ^-1``."""

    def __init__(self, n: int, base: GRing, U: FiniteUniverse, glg: MatrixGroupGL | None = None,
                 bound: int = OBJECT_BOUND):
        if U.group is not base.group:
            raise ContextError("universe over a different group")
        R = base.ring
        m = R.order
        if m ** (U.size * n) > 20 * bound:
            raise BoundExceeded(f"{m}^{U.size * n} candidate matrices exceed the search limit")
        self.n, self.base, self.U = n, base, U
        self.glg = glg if glg is not None else gl(n, base)
        self.V = _vectors(m, n)
        cand = _vectors(m, U.size * n).reshape(-1, U.size, n)
        imgs = self._images(cand)
        inj = np.array([len(np.unique(r)) == len(self.V) for r in imgs], dtype=bool)
        self.objects = cand[inj]
        if len(self.objects) > bound:
            raise BoundExceeded(f"{len(self.objects)} objects exceed bound {bound}")
        self._keys = _vec_index(self.objects.reshape(len(self.objects), -1), m)
        G = base.group
        self.perm_mats = np.full((G.order, U.size, U.size), R.zero, dtype=np.int64)
        for g in range(G.order):
            self.perm_mats[g, U.gset.act[g], np.arange(U.size)] = R.one
        self.semidirect = semidirect(self.glg.group, G, self.glg.entry_action)
        gamma = self.semidirect.gamma
        act = np.empty((gamma.order, self.n_obj), dtype=np.int64)
        ginv = self.glg.group.inv
        for x in range(gamma.order):
            s, g = self.semidirect.split(x)
            act[x] = self.index(self.right(self.left(self.objects, g), int(ginv[s])))
        self.action = GSet(gamma, act, name="GL x| G")

    def _images(self, mats) -> np.ndarray:
        """Vector indices of ``Φ v`` for every ``v`` in ``R^n``."""
        R = self.base.ring
        out = R.matmul(np.asarray(mats)[:, None], self.V[None, :, :, None])[..., 0]
        return _vec_index(out, R.order)

    @property
    def n_obj(self) -> int:
        return len(self.objects)

    def index(self, mats) -> np.ndarray:
        mats = np.asarray(mats, dtype=np.int64)
        k = _vec_index(mats.reshape(len(mats), -1), self.base.ring.order)
        pos = np.minimum(np.searchsorted(self._keys, k), len(self._keys) - 1)
        if np.any(self._keys[pos] != k):
            raise InvariantError("matrix is not a monomorphism R^n -> R[U]")
        return pos

    def left(self, mats, g: int) -> np.ndarray:
        """``gΦ = P_g Φ^g``, so ``(gα)(e_i) = g·α(e_i)``."""
        return self.base.ring.matmul(self.perm_mats[g][None], self.base.act[g][mats])

    def right(self, mats, s: int) -> np.ndarray:
        return self.base.ring.matmul(mats, self.glg.matrix(s)[None])

    def gl_elements(self) -> list[int]:
        return [self.semidirect.pair(s, self.base.group.identity) for s in range(self.glg.order)]

    def check_free(self) -> int:
        ar = np.arange(self.n_obj)
        e = self.glg.group.identity
        for s, x in enumerate(self.gl_elements()):
            if s != e and np.any(self.action.act[x] == ar):
                _fail("GL does not act freely", witness=self.glg.matrix(s).tolist())
        return self.n_obj

    def check_semidirect_law(self) -> int:
        """``g(Φτ) = (gΦ)(g·τ)`` for every object, ``g`` and ``τ``; returns the number of triples."""
        ent = self.glg.entry_action.act
        for g in range(self.base.group.order):
            for s in range(self.glg.order):
                lhs = self.left(self.right(self.objects, s), g)
                rhs = self.right(self.left(self.objects, g), int(ent[g][s]))
                if not np.array_equal(lhs, rhs):
                    _fail("g(ατ) != (gα)(g·τ)", witness=(g, s))
        return self.base.group.order * self.glg.order * self.n_obj

    def fixed_objects(self, elems: Sequence[int]) -> np.ndarray:
        ar = np.arange(self.n_obj)
        return np.flatnonzero(np.all(self.action.act[list(elems)] == ar, axis=0))

    def category(self, bound: int = CATEGORY_BOUND) -> CatGAction:
        if self.n_obj ** 2 > bound:
            raise BoundExceeded(f"{self.n_obj}^2 morphisms exceed bound {bound}")
        return chaotic_action(self.action)


def gl_tilde(n: int, base: GRing, U: FiniteUniverse) -> GLTilde:
    return GLTilde(n, base, U)


def gl_fixed_object(T: GLTilde, rho: CrossedHom, search_bound: int = 6) -> dict:
    """A ``Λ_ρ``-fixed object for a crossed hom ``ρ: H -> GL(n, R)``.

    ``R^n`` with the skew ``H``-structure of ``ρ`` is embedded in a
    permutation module ``R[A]`` by bounded search; ``A`` is then placed into
    ``U``.  A fixed object satisfies ``P_h Φ^h = Φ ρ(h)``.
    """
    H = rho.source
    emb = list(H.members)
    glh = gl(T.n, T.base.restrict(H))
    hg = glh.base.group
    vals = [int(glh.index(T.glg.matrix(rho(h)))) for h in emb]
    M = module_from_crossed(CrossedHom(hg.whole(), glh.entry_action, vals), glh)
    found = embed_in_permutation(M, search_bound)
    if not found["found"]:
        return {"found": False, "reason": found["reason"]}
    A = disjoint_union([coset_gset(hg, Subgroup(hg, K, check=False)) for K in found["orbits"]])[0]
    placed, need = place_hset(T.U, emb, A.act)
    Phi = np.full((T.U.size, T.n), T.base.ring.zero, dtype=np.int64)
    Phi[placed] = np.asarray(found["matrix"], dtype=np.int64)
    obj = int(T.index(Phi[None])[0])
    for h in emb:
        if T.action(T.semidirect.pair(rho(h), h), obj) != obj:
            _fail("constructed object is not Λ-fixed", witness=h)
    return {"found": True, "object": obj, "A_size": A.size, "copies_needed": need}


def verify_gl_model(n: int, base: GRing, c: int = 1, search_bound: int = 6) -> dict:
    """Freeness, the semidirect law and ``Λ_ρ``-fixed objects for every crossed ``ρ: H -> GL``.

    As for the symmetric model, admissible ``Λ`` are also found by a direct
    subgroup search and fixed objects also by scanning.
    """
    G = base.group
    U = build_universe(G, c)
    T = gl_tilde(n, base, U)
    T.check_free()
    T.check_semidirect_law()
    graphs: set[frozenset[int]] = set()
    missing, need, largest = [], 0, 0
    for H in subgroups(G):
        for rho in enumerate_crossed(H, T.glg.group, T.glg.entry_action):
            lam = [T.semidirect.pair(v, h) for h, v in rho.items()]
            graphs.add(frozenset(lam))
            r = gl_fixed_object(T, rho, search_bound)
            if not r["found"]:
                missing.append((list(H.members), list(rho.values)))
                continue
            need, largest = max(need, r["copies_needed"]), max(largest, r["A_size"])
            if r["object"] not in T.fixed_objects(lam):
                _fail("scan disagrees with the constructed fixed object", witness=lam)
    if missing:
        _fail("no fixed object found within the search bound", witness=missing)
    gamma = T.semidirect.gamma
    direct = {S.as_set() for S in subgroups(gamma, bound=gamma.order, avoid=T.gl_elements())}
    if direct != graphs:
        _fail("crossed-hom graphs and subgroups avoiding GL differ")
    return {"ring": base.ring.name, "G": G.name, "n": n, "universe": U.size, "objects": T.n_obj,
            "gl_order": T.glg.order, "lambdas": len(graphs), "largest_A": largest,
            "copies_needed": need, "ok": True}


# -- GL_G(n, R) as an orbit category and directly -----------------------------

class GLDirect(FinCat):
    """Rank-``n`` free submodules ``M ⊆ R[U]`` and ``R``-isomorphisms between them.

    ``M`` carries a pinned frame ``η_M``, the least object with image ``M``.
    The morphism ``(N, M, τ)`` is ``η_N τ η_M^-1`` and sits at
    ``(N*|Ob| + M)*|GL| + τ``.
    """

    def __init__(self, T: GLTilde):
        self.T = T
        glg = T.glg
        spans = np.sort(T._images(T.objects), axis=1)
        _, first, label = np.unique(spans, axis=0, return_index=True, return_inverse=True)
        label = np.asarray(label).reshape(-1)
        # submodules ordered by their frames
        order = np.argsort(first)
        rank = np.empty_like(order)
        rank[order] = np.arange(len(order))
        self.frames = first[order]
        self.frame_of = rank[label]
        self.spans = spans[self.frames]
        k, f = len(self.frames), glg.order
        rest = np.arange(k * k * f) // f
        t = glg.group.table
        super().__init__(k, rest % k, rest // k, (np.arange(k) * k + np.arange(k)) * f + glg.group.identity,
                         lambda a, b: ((a // f) // k * k + (b // f) % k) * f + t[a % f, b % f],
                         name=f"GL_{T.base.group.name}({T.n},{T.base.ring.name})")
        # coords[α] = η_M^-1 α in GL, where M is the image of α
        self.coords = np.full(T.n_obj, -1, dtype=np.int64)
        for s in range(f):
            self.coords[T.index(T.right(T.objects[self.frames], s))] = s
        if np.any(self.coords < 0):
            _fail("some frame is not a GL-translate of its pinned frame")

    def mor(self, N, M, s):
        return (np.asarray(N) * self.n_obj + M) * self.T.glg.order + s

    def parts(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        f, k = self.T.glg.order, self.n_obj
        idx = np.arange(self.n_mor)
        return idx // f // k, idx // f % k, idx % f

    def g_action(self) -> CatGAction:
        """``gM`` by translation and ``(gφ)(g·m) = g·φ(m)`` on isomorphisms.

        With ``g η_M = η_{gM} c_M``, ``g(η_N τ η_M^-1) = η_{gN} c_N (g·τ) c_M^-1 η_{gM}^-1``.
        """
        T = self.T
        G, P = T.base.group, T.glg.group
        on_obj = np.empty((G.order, self.n_obj), dtype=np.int64)
        on_mor = np.empty((G.order, self.n_mor), dtype=np.int64)
        N, M, s = self.parts()
        t, inv = P.table, P.inv
        for g in range(G.order):
            moved = T.index(T.left(T.objects[self.frames], g))
            on_obj[g] = self.frame_of[moved]
            c = self.coords[moved]
            new_s = t[t[c[N], T.glg.entry_action.act[g][s]], inv[c[M]]]
            on_mor[g] = self.mor(on_obj[g][N], on_obj[g][M], new_s)
        return CatGAction(G, self, on_obj, on_mor, name="conjugation")

    def check_isomorphisms(self) -> int:
        """Each morphism maps ``M`` onto ``N``, and distinct labels give distinct maps."""
        T = self.T
        N, M, s = self.parts()
        lin = T.base.ring.matmul(T.objects[self.frames][N], T.glg.matrices[s])
        if not np.array_equal(np.sort(T._images(lin), axis=1), self.spans[N]):
            _fail("a morphism does not land onto its target submodule")
        # φ is determined by M and the images φ(η_M(e_i)), the columns of η_N τ
        keys = _vec_index(lin.reshape(len(lin), -1), T.base.ring.order) * self.n_obj + M
        if len(np.unique(keys)) != self.n_mor:
            _fail("two labels give the same isomorphism")
        return self.n_mor


def gl_orbit(n: int, base: GRing, U: FiniteUniverse) -> dict:
    """``GL~(n,R)/GL`` against :class:`GLDirect`, with a ``G``-equivariant isomorphism.

    The class of ``α -> β`` goes to ``β∘α^-1: M -> N``, i.e. ``τ_β τ_α^-1``
    in the pinned frames.  Backward, ``(N, M, τ)`` goes to the class of
    ``η_M -> η_N τ``.
    """
    T = gl_tilde(n, base, U)
    ca = T.category()
    G, P = base.group, T.glg.group
    Q = orbit_category(ca.cat, _part(ca, P, T.gl_elements()), strict=True)
    qa = _induced_action(_part(ca, G, [T.semidirect.pair(P.identity, g) for g in range(G.order)]), Q)
    D = GLDirect(T)
    D.check_isomorphisms()
    da = D.g_action()
    m = T.n_obj
    tgt, src = Q.mor_rep // m, Q.mor_rep % m
    tau = P.table[D.coords[tgt], P.inv[D.coords[src]]]
    F = Functor(Q, D, D.frame_of[Q.obj_rep], D.mor(D.frame_of[tgt], D.frame_of[src], tau), name="orbit->direct")
    F.check()
    if not F.is_isomorphism():
        _fail("GL~/GL -> GL_G(n,R) is not bijective", witness=(Q.n_obj, Q.n_mor, D.n_obj, D.n_mor))
    _equivariant(F, qa, da)
    N, M, s = D.parts()
    back_tgt = T.index(T.base.ring.matmul(T.objects[D.frames][N], T.glg.matrices[s]))
    back = Q.mor_class[back_tgt * m + D.frames[M]]
    if not np.array_equal(F.mor_map[back], np.arange(D.n_mor)):
        _fail("the frame route does not invert the canonical isomorphism")
    return {"ring": base.ring.name, "G": G.name, "n": n, "universe": U.size, "objects": Q.n_obj,
            "morphisms": Q.n_mor, "descended": Q.descended, "ok": True}
