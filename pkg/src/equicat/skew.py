"""Finite G-rings, GL(n, R) with the entrywise action, skew group rings and skew modules.

Ring elements are integers ``0..m-1`` with ``add``/``mul`` tables.  A vector
of ``R^n`` is the integer ``Σ v_i m^(n-1-i)`` (lexicographic order).  A
``G``-ring writes ``r^g`` for ``act[g][r]``.  Matrices follow the column
convention: column ``i`` of ``ρ(g)`` holds the coordinates of ``g e_i``, and
``g·v = ρ(g) v^g`` on ``R^n``.
"""

from __future__ import annotations

import functools
import itertools
from typing import Sequence

import numpy as np

from .crossed import CrossedHom, centralizer, enumerate_crossed, h1, iso_witnesses, trivial_crossed
from .errors import BoundExceeded, ContextError, InvariantError, VerificationError
from .groups import (FiniteGroup, GroupAction, GSet, SemidirectProduct, Subgroup, coset_gset, cyclic,
                     disjoint_union, gl_order, semidirect, subgroup_classes, subgroups, trivial_gset)

GL_BOUND = 10**4
MODULE_BOUND = 10**6
SKEW_TABLE_LIMIT = 1024


def _fail(message: str, witness=None):
    raise VerificationError(message, witness)


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


class FiniteRing:
    """A finite ring with unit, by addition and multiplication tables."""

    def __init__(self, add, mul, zero: int = 0, one: int = 1, name: str = "", labels: Sequence[str] | None = None,
                 validate: bool = True):
        self.add = np.asarray(add, dtype=np.int64)
        self.mul = np.asarray(mul, dtype=np.int64)
        self.add.setflags(write=False)
        self.mul.setflags(write=False)
        m = self.add.shape[0]
        if self.add.shape != (m, m) or self.mul.shape != (m, m) or m == 0:
            raise InvariantError("ring tables must be square and agree in size")
        self.order, self.zero, self.one, self.name = m, int(zero), int(one), name
        self.labels = list(labels) if labels is not None else None
        self.neg = np.array([int(np.flatnonzero(self.add[a] == self.zero)[0]) if np.any(self.add[a] == self.zero)
                             else -1 for a in range(m)])
        self.char = None
        self.degree = None
        self.modulus = None
        if validate:
            self.check()

    def __repr__(self):
        return f"FiniteRing({self.name or '?'}, order {self.order})"

    def label(self, r: int) -> str:
        return self.labels[r] if self.labels else str(r)

    def check(self) -> None:
        a, m, z, o = self.add, self.mul, self.zero, self.one
        n = self.order
        ar = np.arange(n)
        if a.min() < 0 or a.max() >= n or m.min() < 0 or m.max() >= n:
            raise InvariantError("table entries out of range")
        if not np.array_equal(a[z], ar) or not np.array_equal(a, a.T) or np.any(self.neg < 0):
            raise InvariantError("addition is not an abelian group with zero")
        if not np.array_equal(a[a[:, :, None], ar[None, None, :]], a[ar[:, None, None], a[None, :, :]]):
            raise InvariantError("addition is not associative")
        if not (np.array_equal(m[o], ar) and np.array_equal(m[:, o], ar)):
            raise InvariantError("one is not a two-sided unit")
        if not np.array_equal(m[m[:, :, None], ar[None, None, :]], m[ar[:, None, None], m[None, :, :]]):
            raise InvariantError("multiplication is not associative")
        # a(b+c) = ab+ac and (b+c)a = ba+ca
        if not np.array_equal(m[ar[:, None, None], a[None, :, :]], a[m[:, :, None], m[:, None, :]]):
            raise InvariantError("left distributivity fails")
        if not np.array_equal(m[a[None, :, :], ar[:, None, None]], a[m.T[:, :, None], m.T[:, None, :]]):
            raise InvariantError("right distributivity fails")

    @functools.cached_property
    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    @functools.cached_property
    def units(self) -> np.ndarray:
        m = self.mul
        left = np.any(m == self.one, axis=1)
        right = np.any(m == self.one, axis=0)
        return np.flatnonzero(left & right)

    @functools.cached_property
    def inverse(self) -> np.ndarray:
        out = np.full(self.order, -1, dtype=np.int64)
        for u in self.units:
            out[u] = int(np.flatnonzero(self.mul[u] == self.one)[0])
        return out

    def is_field(self) -> bool:
        return self.is_commutative and len(self.units) == self.order - 1 and self.order > 1

    def center(self) -> np.ndarray:
        return np.flatnonzero(np.all(self.mul == self.mul.T, axis=1))

    # vectorised linear algebra over R
    def dot(self, a, b) -> np.ndarray:
        """``Σ_k a[..., k] b[..., k]`` (left factor first)."""
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        out = np.full(a.shape[:-1], self.zero, dtype=np.int64)
        for k in range(a.shape[-1]):
            out = self.add[out, self.mul[a[..., k], b[..., k]]]
        return out

    def matmul(self, A, B) -> np.ndarray:
        """Batched matrix product; ``A`` is ``(..., p, q)`` and ``B`` is ``(..., q, r)``."""
        A, B = np.asarray(A), np.asarray(B)
        return self.dot(A[..., :, None, :], np.swapaxes(B, -1, -2)[..., None, :, :])


def prime_field(p: int) -> FiniteRing:
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    a = np.arange(p)
    R = FiniteRing((a[:, None] + a[None, :]) % p, (a[:, None] * a[None, :]) % p, name=f"F{p}")
    R.char, R.degree, R.modulus = p, 1, (0, 1)
    return R


def _poly_tables(p: int, k: int, low: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """Tables of ``F_p[x]/(x^k + Σ low_i x^i)``; element ``Σ c_i p^i`` has coefficient ``c_i`` at ``x^i``."""
    q = p**k
    digits = np.array([[(e // p**i) % p for i in range(k)] for e in range(q)], dtype=np.int64)
    w = p ** np.arange(k)
    add = ((digits[:, None, :] + digits[None, :, :]) % p) @ w
    prod = np.zeros((q, q, 2 * k - 1), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            prod[:, :, i + j] += digits[:, None, i] * digits[None, :, j]
    prod %= p
    low = np.asarray(low, dtype=np.int64)
    for d in range(2 * k - 2, k - 1, -1):
        c = prod[:, :, d].copy()
        prod[:, :, d] = 0
        # x^d = -Σ low_i x^(d-k+i)
        for i in range(k):
            prod[:, :, d - k + i] = (prod[:, :, d - k + i] - c * low[i]) % p
    return add, prod[:, :, :k] @ w


def galois_field(p: int, k: int) -> "GRing":
    """``F_{p^k}`` with ``C_k`` acting by powers of Frobenius ``x -> x^p``.

    The modulus is the monic irreducible ``x^k + Σ c_i x^i`` whose coefficient
    tuple ``(c_{k-1}, ..., c_0)`` is lexicographically least.
    """
    if not _is_prime(p) or k < 1 or p**k > 256:
        raise ValueError("need p prime, k >= 1 and p^k <= 256")
    if k == 1:
        R = prime_field(p)
    else:
        R = None
        for code in range(p**k):
            low = [(code // p**i) % p for i in range(k)]
            if low[0] == 0:
                continue
            add, mul = _poly_tables(p, k, low)
            # a quotient of F_p[x] is a field iff it has no zero divisors
            nz = mul[1:, 1:]
            if np.all(nz != 0):
                R = FiniteRing(add, mul, name=f"F{p**k}", validate=False)
                R.char, R.degree, R.modulus = p, k, tuple(low) + (1,)
                break
        assert R is not None
    G = cyclic(k)
    frob = np.arange(R.order)
    for _ in range(p - 1):
        frob = R.mul[frob, np.arange(R.order)]
    act = [np.arange(R.order)]
    for _ in range(1, k):
        act.append(frob[act[-1]])
    return GRing(R, G, np.array(act), name=f"Gal(F{p**k}/F{p})")


class GRing:
    """A ring with a left action of ``G`` by ring automorphisms; ``act[g][r] = r^g``."""

    def __init__(self, ring: FiniteRing, group: FiniteGroup, act, name: str = "", validate: bool = True):
        self.ring, self.group, self.name = ring, group, name
        self.act = np.asarray(act, dtype=np.int64).reshape(group.order, ring.order)
        self.act.setflags(write=False)
        if validate:
            self.check()

    def __repr__(self):
        return f"GRing({self.ring.name} with {self.group.name})"

    def check(self) -> None:
        R, G, a = self.ring, self.group, self.act
        ar = np.arange(R.order)
        if not np.array_equal(a[G.identity], ar):
            raise InvariantError("identity does not act trivially")
        for g in range(G.order):
            p = a[g]
            if not np.array_equal(np.sort(p), ar):
                raise InvariantError(f"act[{g}] is not a bijection")
            if not (np.array_equal(p[R.add], R.add[p[:, None], p[None, :]])
                    and np.array_equal(p[R.mul], R.mul[p[:, None], p[None, :]]) and p[R.one] == R.one):
                raise InvariantError(f"act[{g}] is not a ring automorphism")
        t = G.table
        # r^{gh} = (r^h)^g
        if not np.array_equal(a[t], a[np.arange(G.order)[:, None, None], a[None, :, :]]):
            raise InvariantError("not a left action")

    def fixed_subring(self, H: Subgroup | None = None) -> np.ndarray:
        elems = list(H.members) if H is not None else list(range(self.group.order))
        return np.flatnonzero(np.all(self.act[elems] == np.arange(self.ring.order), axis=0))

    def base_ring(self) -> np.ndarray:
        """``k = center(R) ∩ R^G``."""
        return np.intersect1d(self.ring.center(), self.fixed_subring())

    def restrict(self, H: Subgroup) -> "GRing":
        hg, emb = H.as_group()
        return GRing(self.ring, hg, self.act[emb], name=f"{self.name}|H", validate=False)


def trivial_gring(ring: FiniteRing, group: FiniteGroup) -> GRing:
    return GRing(ring, group, np.tile(np.arange(ring.order), (group.order, 1)), name="trivial", validate=False)


# --------------------------------------------------------------------------
# vectors and matrices over R
# --------------------------------------------------------------------------

def _vectors(m: int, n: int) -> np.ndarray:
    idx = np.arange(m**n, dtype=np.int64)
    out = np.empty((m**n, n), dtype=np.int64)
    for j in range(n - 1, -1, -1):
        out[:, j] = idx % m
        idx //= m
    return out


def _vec_index(rows, m: int) -> np.ndarray:
    rows = np.asarray(rows, dtype=np.int64)
    out = np.zeros(rows.shape[:-1], dtype=np.int64)
    for j in range(rows.shape[-1]):
        out = out * m + rows[..., j]
    return out


def _det(R: FiniteRing, A: np.ndarray) -> np.ndarray:
    """Leibniz determinant of a batch of square matrices over a commutative ring."""
    n = A.shape[-1]
    out = np.full(A.shape[:-2], R.zero, dtype=np.int64)
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = np.full(A.shape[:-2], R.one, dtype=np.int64)
        for i in range(n):
            term = R.mul[term, A[..., i, perm[i]]]
        out = R.add[out, R.neg[term] if inv % 2 else term]
    return out


class MatrixGroupGL:
    """``GL(n, R)`` materialised as a :class:`FiniteGroup` (matrix product), with ``G`` acting entrywise."""

    def __init__(self, n: int, base: GRing, bound: int = GL_BOUND):
        R = base.ring
        self.n, self.base = n, base
        m = R.order
        if m ** (n * n) > 50 * bound and not R.is_commutative:
            raise BoundExceeded("too many matrices to search for inverses")
        if R.is_commutative:
            if m ** (n * n) > 100 * bound:
                raise BoundExceeded(f"{m}^{n * n} candidate matrices exceed the search limit")
            allm = _vectors(m, n * n).reshape(-1, n, n)
            det = _det(R, allm) if n else np.full(1, R.one)
            ok = np.isin(det, R.units)
        else:
            allm = _vectors(m, n * n).reshape(-1, n, n)
            eye = np.eye(n, dtype=np.int64) * R.one + (1 - np.eye(n, dtype=np.int64)) * R.zero
            ok = np.zeros(len(allm), dtype=bool)
            for i, A in enumerate(allm):
                left = np.all(R.matmul(A[None], allm) == eye, axis=(1, 2))
                right = np.all(R.matmul(allm, A[None]) == eye, axis=(1, 2))
                ok[i] = np.any(left & right)
        mats = allm[ok]
        if len(mats) > bound:
            raise BoundExceeded(f"|GL({n},{R.name})| = {len(mats)} exceeds bound {bound}")
        self.matrices = mats
        self.matrices.setflags(write=False)
        keys = _vec_index(mats.reshape(len(mats), -1), m)
        self._keys = keys  # sorted, since candidates were enumerated in order
        N = len(mats)
        table = np.empty((N, N), dtype=np.int64)
        for i in range(N):
            table[i] = self.index(R.matmul(mats[i][None], mats))
        G = base.group
        self.group = FiniteGroup(table, name=f"GL({n},{R.name})", validate=N <= 200,
                                 labels=[str(A.tolist()) for A in mats])
        ent = np.stack([self.index(base.act[g][mats]) for g in range(G.order)])
        self.entry_action = GroupAction(G, self.group, ent, validate=N <= 200, name="entrywise")

    @property
    def order(self) -> int:
        return self.group.order

    def index(self, A) -> np.ndarray:
        A = np.asarray(A, dtype=np.int64)
        k = _vec_index(A.reshape(A.shape[:-2] + (-1,)), self.base.ring.order)
        pos = np.searchsorted(self._keys, k)
        pos = np.minimum(pos, len(self._keys) - 1)
        if np.any(self._keys[pos] != k):
            raise InvariantError("matrix is not invertible")
        return pos

    def matrix(self, i: int) -> np.ndarray:
        return self.matrices[i]

    def identity(self) -> int:
        return self.group.identity

    def check_gamma_action(self) -> int:
        """``(τ, g)(x) = (g x) τ^-1`` is a left action of ``GL ⋊ G`` on ``GL``; returns |Γ|."""
        gamma = semidirect(self.group, self.base.group, self.entry_action)
        P, ent = self.group, self.entry_action.act
        order = gamma.gamma.order
        act = np.empty((order, P.order), dtype=np.int64)
        for x in range(order):
            s, g = gamma.split(x)
            act[x] = P.table[ent[g], P.inv[s]]
        GSet(gamma.gamma, act)
        return order


def gl(n: int, base: GRing, bound: int = GL_BOUND) -> MatrixGroupGL:
    return MatrixGroupGL(n, base, bound)


# --------------------------------------------------------------------------
# skew group ring
# --------------------------------------------------------------------------

class SkewGroupRing:
    """``R_G[G]``: coefficient rows ``(r_g)_g``; ``(r g)(s h) = r s^g gh`` extended additively."""

    def __init__(self, base: GRing, exhaustive_limit: int = SKEW_TABLE_LIMIT):
        self.base = base
        R, G = base.ring, base.group
        self.size = R.order ** G.order
        self.exhaustive = self.size <= exhaustive_limit
        t = G.table
        self._pairs = [(g, h, int(t[g, h])) for g in range(G.order) for h in range(G.order)]

    def elements(self) -> np.ndarray:
        return _vectors(self.base.ring.order, self.base.group.order)

    def index(self, coeffs) -> np.ndarray:
        return _vec_index(coeffs, self.base.ring.order)

    def mul(self, a, b) -> np.ndarray:
        R, act = self.base.ring, self.base.act
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        out = np.full(a.shape, R.zero, dtype=np.int64)
        for g, h, gh in self._pairs:
            out[..., gh] = R.add[out[..., gh], R.mul[a[..., g], act[g][b[..., h]]]]
        return out

    def add(self, a, b) -> np.ndarray:
        return self.base.ring.add[np.asarray(a), np.asarray(b)]

    def basis(self, r: int, g: int) -> np.ndarray:
        R = self.base.ring
        out = np.full(self.base.group.order, R.zero, dtype=np.int64)
        out[g] = r
        return out

    def one(self) -> np.ndarray:
        return self.basis(self.base.ring.one, self.base.group.identity)

    def check(self, sample: int = 20000, seed: int = 0) -> dict:
        """Ring axioms exhaustively when small, else on a seeded sample of triples."""
        R, G = self.base.ring, self.base.group
        if self.exhaustive:
            E = self.elements()
            A, B = E[:, None, :], E[None, :, :]
            prod = self.mul(A, B)
            pidx = self.index(prod)
            tab = pidx
            lhs = tab[tab[:, :, None], np.arange(len(E))[None, None, :]]
            rhs = tab[np.arange(len(E))[:, None, None], tab[None, :, :]]
            if not np.array_equal(lhs, rhs):
                _fail("skew group ring product is not associative")
            sidx = self.index(self.add(A, B))
            if not np.array_equal(tab[np.arange(len(E))[:, None, None], sidx[None, :, :]],
                                  self.index(self.add(prod[:, :, None, :], prod[:, None, :, :]))):
                _fail("left distributivity fails")
            if not np.array_equal(tab[sidx[:, :, None], np.arange(len(E))[None, None, :]],
                                  self.index(self.add(prod[:, None, :, :], prod[None, :, :, :]))):
                _fail("right distributivity fails")
            mode, checked = "exhaustive", len(E) ** 3
        else:
            rng = np.random.default_rng(seed)
            a, b, c = (rng.integers(0, R.order, (sample, G.order)) for _ in range(3))
            if not np.array_equal(self.mul(self.mul(a, b), c), self.mul(a, self.mul(b, c))):
                _fail("skew group ring product is not associative (sampled)")
            if not np.array_equal(self.mul(a, self.add(b, c)), self.add(self.mul(a, b), self.mul(a, c))):
                _fail("left distributivity fails (sampled)")
            mode, checked = "sampled", sample
        one = self.one()
        E = self.elements() if self.exhaustive else rng.integers(0, R.order, (sample, G.order))
        if not (np.array_equal(self.mul(one, E), E) and np.array_equal(self.mul(E, one), E)):
            _fail("1·e is not a unit")
        # g r = r^g g
        for g in range(G.order):
            for r in range(R.order):
                lhs = self.mul(self.basis(R.one, g), self.basis(r, G.identity))
                if not np.array_equal(lhs, self.basis(int(self.base.act[g][r]), g)):
                    _fail("g r != r^g g", witness=(g, r))
        # R and k[G] are subrings
        rs = np.stack([self.basis(r, G.identity) for r in range(R.order)])
        if not np.all(np.delete(self.mul(rs[:, None], rs[None, :]), G.identity, axis=-1) == R.zero):
            _fail("R is not closed in R_G[G]")
        k = self.base.base_ring()
        kg = np.array(list(itertools.product(k.tolist(), repeat=G.order))) if len(k) ** G.order <= 4096 else None
        if kg is not None and not np.all(np.isin(self.mul(kg[:, None], kg[None, :]), k)):
            _fail("k[G] is not closed in R_G[G]")
        return {"size": self.size, "mode": mode, "triples": checked, "ok": True}


def skew_group_ring(base: GRing) -> SkewGroupRing:
    return SkewGroupRing(base)


# --------------------------------------------------------------------------
# skew modules
# --------------------------------------------------------------------------

class SkewModule:
    """``R^n`` with ``G`` acting by the permutations ``g_action[g]`` of vector indices."""

    def __init__(self, base: GRing, n: int, g_action, name: str = "", validate: bool = True):
        self.base, self.n, self.name = base, n, name
        m = base.ring.order
        self.g_action = np.asarray(g_action, dtype=np.int64).reshape(base.group.order, m**n)
        self.g_action.setflags(write=False)
        if validate:
            self.check()

    def __repr__(self):
        return f"SkewModule({self.base.ring.name}^{self.n}{', ' + self.name if self.name else ''})"

    @functools.cached_property
    def vectors(self) -> np.ndarray:
        return _vectors(self.base.ring.order, self.n)

    def vadd(self, u, v) -> np.ndarray:
        return self.base.ring.add[np.asarray(u), np.asarray(v)]

    def scale(self, r, v) -> np.ndarray:
        return self.base.ring.mul[np.asarray(r)[..., None], np.asarray(v)]

    def index(self, rows) -> np.ndarray:
        return _vec_index(rows, self.base.ring.order)

    def check(self) -> None:
        R, G, A = self.base.ring, self.base.group, self.g_action
        V = self.vectors
        N = len(V)
        ar = np.arange(N)
        if not np.array_equal(A[G.identity], ar):
            raise InvariantError("identity does not act trivially")
        if not np.array_equal(np.sort(A, axis=1), np.broadcast_to(ar, A.shape)):
            raise InvariantError("some g does not act bijectively")
        t = G.table
        for h in G.generators():
            if not np.array_equal(A[t[:, h]], A[:, A[h]]):
                raise InvariantError("(gh)m != g(hm)")
        sums = self.index(self.vadd(V[:, None, :], V[None, :, :]))
        for g in range(G.order):
            if not np.array_equal(A[g][sums], self.index(self.vadd(V[A[g]][:, None, :], V[A[g]][None, :, :]))):
                raise InvariantError(f"g={g} is not additive")
            for r in range(R.order):
                lhs = A[g][self.index(self.scale(r, V))]
                rhs = self.index(self.scale(int(self.base.act[g][r]), V[A[g]]))
                if not np.array_equal(lhs, rhs):
                    raise InvariantError(f"g(rm) != r^g(gm) at g={g}, r={r}")

    def basis_images(self, g: int) -> np.ndarray:
        """Column ``i`` holds ``g e_i``."""
        R = self.base.ring
        n = self.n
        eye = np.full((n, n), R.zero, dtype=np.int64)
        np.fill_diagonal(eye, R.one)
        return self.vectors[self.g_action[g][self.index(eye)]].T


def _semilinear_perm(base: GRing, n: int, g: int, M: np.ndarray) -> np.ndarray:
    """The permutation ``v -> M v^g`` of ``R^n``."""
    R = base.ring
    V = _vectors(R.order, n)
    return _vec_index(R.matmul(M[None], base.act[g][V][:, :, None])[..., 0], R.order)


def module_from_crossed(rho: CrossedHom, glg: MatrixGroupGL) -> SkewModule:
    """``g e_i = ρ(g)(e_i)``, extended by ``g(Σ r_i e_i) = Σ r_i^g ρ(g)(e_i)``."""
    if rho.action is not glg.entry_action:
        raise ContextError("ρ is not a crossed hom for this GL action")
    if rho.source.order != glg.base.group.order:
        raise InvariantError("ρ must be defined on all of G")
    rho.check()
    acts = [_semilinear_perm(glg.base, glg.n, g, glg.matrix(rho(g))) for g in range(glg.base.group.order)]
    return SkewModule(glg.base, glg.n, np.stack(acts), name="from crossed hom")


def crossed_from_module(M: SkewModule, glg: MatrixGroupGL) -> CrossedHom:
    """``ρ(g)`` is the matrix whose ``i``-th column is ``g e_i``."""
    if M.base is not glg.base or M.n != glg.n:
        raise ContextError("module and GL differ in ring or rank")
    G = M.base.group
    vals = []
    for g in range(G.order):
        B = M.basis_images(g)
        if not np.array_equal(_semilinear_perm(M.base, M.n, g, B), M.g_action[g]):
            raise InvariantError(f"g={g} is not determined by its basis images (not semilinear)")
        vals.append(int(glg.index(B)))
    return CrossedHom(G.whole(), glg.entry_action, vals)


def module_isomorphisms(M1: SkewModule, M2: SkewModule, glg: MatrixGroupGL) -> list[int]:
    """GL elements ``P`` with ``P(g v) = g(P v)`` for every ``g`` and every vector ``v``."""
    R = M1.base.ring
    if not R.is_commutative:
        raise InvariantError("module isomorphisms as matrices need a commutative ring")
    V = M1.vectors
    out = []
    for i in range(glg.order):
        P = glg.matrix(i)
        pv = _vec_index(R.matmul(P[None], V[:, :, None])[..., 0], R.order)
        if all(np.array_equal(pv[M1.g_action[g]], M2.g_action[g][pv]) for g in range(M1.base.group.order)):
            out.append(i)
    return out


def enumerate_module_structures(base: GRing, n: int, bound: int = MODULE_BOUND) -> list[SkewModule]:
    """Every skew module structure on ``R^n``, found without crossed homs.

    Each generator gets a choice of images of the basis vectors, extended
    semilinearly; the words in the generators must then close up to a well
    defined bijective action of ``G``.
    """
    R, G = base.ring, base.group
    gens = G.generators()
    per = R.order ** (n * n)
    if per ** len(gens) > bound:
        raise BoundExceeded(f"{per}^{len(gens)} candidate generator images exceed {bound}")
    cands = _vectors(R.order, n * n).reshape(-1, n, n)
    perms = {g: np.stack([_semilinear_perm(base, n, g, B) for B in cands]) for g in gens}
    N = R.order ** n
    t = G.table
    out = []
    for choice in itertools.product(range(per), repeat=len(gens)):
        act = {G.identity: np.arange(N)}
        ok = True
        frontier = [G.identity]
        while frontier and ok:
            nxt = []
            for x in frontier:
                for gi, c in zip(gens, choice):
                    y = int(t[gi, x])
                    p = perms[gi][c][act[x]]
                    if y in act:
                        if not np.array_equal(act[y], p):
                            ok = False
                            break
                    else:
                        act[y] = p
                        nxt.append(y)
                if not ok:
                    break
            frontier = nxt
        if not ok:
            continue
        table = np.stack([act[g] for g in range(G.order)])
        if any(len(np.unique(row)) != N for row in table):
            continue
        try:
            out.append(SkewModule(base, n, table, name="enumerated"))
        except InvariantError:
            continue
    return out


def verify_crossr(base: GRing, n: int, gl_bound: int = GL_BOUND, module_bound: int = MODULE_BOUND) -> dict:
    """Module structures on ``R^n`` against crossed homs ``G -> GL(n, R)``.

    Checks the bijection in both directions, the roundtrip, and that module
    isomorphisms are exactly the crossed-hom witnesses, hence that the
    isomorphism classes agree.
    """
    glg = gl(n, base, gl_bound)
    G = base.group
    homs = enumerate_crossed(G.whole(), glg.group, glg.entry_action)
    mods = enumerate_module_structures(base, n, module_bound)
    from_homs = [module_from_crossed(r, glg) for r in homs]
    key = lambda M: M.g_action.tobytes()
    if sorted(map(key, from_homs)) != sorted(map(key, mods)) or len(set(map(key, mods))) != len(mods):
        _fail("module structures and crossed homs are not in bijection")
    for r, M in zip(homs, from_homs):
        if crossed_from_module(M, glg) != r:
            _fail("crossed_from_module ∘ module_from_crossed is not the identity", witness=r.values)
    for M in mods:
        if not np.array_equal(module_from_crossed(crossed_from_module(M, glg), glg).g_action, M.g_action):
            _fail("module_from_crossed ∘ crossed_from_module is not the identity")
    # isomorphisms: brute force on vectors vs. crossed-hom witnesses
    classes_mod: list[int] = [-1] * len(homs)
    k = 0
    for i in range(len(homs)):
        for j in range(len(homs)):
            isos = module_isomorphisms(from_homs[i], from_homs[j], glg)
            if sorted(isos) != sorted(iso_witnesses(homs[i], homs[j])):
                _fail("module isomorphisms differ from crossed-hom witnesses", witness=(i, j))
            if isos and classes_mod[i] == -1 and classes_mod[j] != -1:
                classes_mod[i] = classes_mod[j]
        if classes_mod[i] == -1:
            classes_mod[i] = k
            k += 1
    tab = h1(G, glg.group, glg.entry_action)
    by_h1 = {r.values: c for c, cl in enumerate(tab.classes) for r in cl.members}
    pairs = {(classes_mod[i], by_h1[r.values]) for i, r in enumerate(homs)}
    if len(pairs) != k or len(tab) != k:
        _fail("isomorphism classes of modules and H^1 classes do not correspond")
    return {"ring": base.ring.name, "G": G.name, "n": n, "gl_order": glg.order,
            "crossed_homs": len(homs), "module_structures": len(mods), "classes": k, "ok": True}


# --------------------------------------------------------------------------
# permutation skew representations
# --------------------------------------------------------------------------

def perm_skew(A: GSet, base: GRing) -> SkewModule:
    """``R[A]`` with ``g(Σ r_a a) = Σ r_a^g (g a)``."""
    if A.group is not base.group:
        raise ContextError("G-set over a different group")
    R = base.ring
    n = A.size
    V = _vectors(R.order, n)
    acts = []
    for g in range(A.group.order):
        W = np.empty_like(V)
        W[:, A.act[g]] = base.act[g][V]
        acts.append(_vec_index(W, R.order))
    return SkewModule(base, n, np.stack(acts), name="permutation")


def perm_crossed(A: GSet, glg: MatrixGroupGL) -> CrossedHom:
    """``ρ_A``: ``ρ_A(g)`` is the permutation matrix of ``g`` on ``A``."""
    return crossed_from_module(perm_skew(A, glg.base), glg)


# --------------------------------------------------------------------------
# Hilbert 90
# --------------------------------------------------------------------------

def hilbert90(p: int, k: int, n: int, bound: int = GL_BOUND) -> dict:
    """``H^1(C_k; GL(n, F_{p^k}))`` with the entrywise Frobenius action, for ``C_k`` and each subgroup.

    Triviality is asserted, and ``|Aut ε| = |GL(n, K^H)|`` is checked against
    the closed-form order of ``GL`` over the fixed field.
    """
    K = galois_field(p, k)
    glg = gl(n, K, bound)
    G = K.group
    per_h = []
    for H in subgroups(G):
        tab = h1(G, glg.group, glg.entry_action, H=H)
        q = len(K.fixed_subring(H))
        fixed = np.flatnonzero(np.all(glg.entry_action.act[list(H.members)] == np.arange(glg.order), axis=0))
        aut = centralizer(trivial_crossed(H, glg.entry_action))
        if aut.order != tab.classes[tab.basepoint].aut.order:
            _fail("Aut(ε) and the stabiliser of the class representative differ in order")
        row = {"H_order": H.order, "crossed_homs": tab.total, "classes": len(tab), "aut_order": aut.order,
               "fixed_field": q, "gl_fixed_order": gl_order(n, q)}
        if len(tab) != 1:
            _fail(f"H^1 is not trivial for |H|={H.order}", witness=row)
        if aut.order != gl_order(n, q) or sorted(aut.members) != fixed.tolist():
            _fail("Aut(ε) differs from GL(n, K^H)", witness=row)
        per_h.append(row)
    top = per_h[-1] if per_h[-1]["H_order"] == G.order else max(per_h, key=lambda r: r["H_order"])
    return {"p": p, "k": k, "n": n, "field": K.ring.name, "gl_order": glg.order,
            "crossed_homs": top["crossed_homs"], "classes": top["classes"], "aut_order": top["aut_order"],
            "gl_n_p": gl_order(n, p), "subgroups": per_h, "ok": True}


# --------------------------------------------------------------------------
# amenability search
# --------------------------------------------------------------------------

def _orbit_types(G: FiniteGroup) -> list[tuple[int, Subgroup]]:
    """One ``G/H`` per conjugacy class of subgroups, as ``(index, H)`` sorted by index."""
    reps = [cl[0] for cl in subgroup_classes(G)]
    return sorted(((G.order // H.order, H) for H in reps), key=lambda t: (t[0], sorted(t[1].members)))


def _gsets_by_size(G: FiniteGroup, max_size: int):
    types = _orbit_types(G)
    for size in range(1, max_size + 1):
        def rec(i, left, chosen):
            if left == 0:
                yield list(chosen)
                return
            for j in range(i, len(types)):
                if types[j][0] <= left:
                    chosen.append(j)
                    yield from rec(j, left - types[j][0], chosen)
                    chosen.pop()
        for combo in rec(0, size, []):
            yield size, [types[j] for j in combo]


def embed_in_permutation(M: SkewModule, search_bound: int, candidate_bound: int = 10**6) -> dict:
    """Look for a monomorphism ``M -> R[A]`` with ``|A| <= search_bound``.

    ``G``-sets are tried as multisets of orbit types in order of size; for each,
    every ``|A| × n`` matrix ``Φ`` is tested for ``Φ ρ(g) = ρ_A(g) Φ^g`` on
    generators and injectivity on vectors.  Not finding one is reported, never
    treated as a disproof.
    """
    base, G = M.base, M.base.group
    R = base.ring
    n = M.n
    rho = [M.basis_images(g) for g in range(G.order)]
    gens = G.generators()
    V = M.vectors
    tried = 0
    for size, parts in _gsets_by_size(G, search_bound):
        A, _ = disjoint_union([coset_gset(G, H) for _, H in parts]) if parts else (trivial_gset(G, 0), [])
        P = perm_skew(A, base)
        rhoA = [P.basis_images(g) for g in range(G.order)]
        count = R.order ** (size * n)
        if tried + count > candidate_bound:
            return {"found": False, "reason": "candidate bound", "tried": tried}
        tried += count
        Phis = _vectors(R.order, size * n).reshape(-1, size, n)
        ok = np.ones(len(Phis), dtype=bool)
        for g in gens:
            lhs = R.matmul(Phis, rho[g][None])
            rhs = R.matmul(rhoA[g][None], base.act[g][Phis])
            ok &= np.all(lhs == rhs, axis=(1, 2))
        for c in np.flatnonzero(ok):
            img = _vec_index(R.matmul(Phis[c][None], V[:, :, None])[..., 0], R.order)
            if len(np.unique(img)) == len(V):
                return {"found": True, "size": size, "orbits": [sorted(H.members) for _, H in parts],
                        "matrix": Phis[c].tolist(), "tried": tried}
    return {"found": False, "reason": "search bound", "tried": tried}
