"""Finite categories, G-categories, functor categories, fixed and orbit categories.

Morphisms are integers ``0..n_mor-1`` with ``src``/``tgt``/``ident`` arrays.
Composition is a vectorised callable ``compose(f, g)`` returning ``f∘g``
(first ``g``, then ``f``) for arrays of composable pairs; nothing is assumed
about non-composable input.
"""

from __future__ import annotations

import functools
import itertools
from typing import Callable, Iterator, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import BoundExceeded, ContextError, DescentError, InvariantError, VerificationError
from .groups import FiniteGroup, GSet, Subgroup

DENSE_TABLE_LIMIT = 2048
PAIR_CHUNK = 1 << 16
ASSOC_EXHAUSTIVE_LIMIT = 5 * 10**6
ASSOC_SAMPLE = 200_000
# composable pairs checked exhaustively when validating an action by functors
ACTION_PAIR_LIMIT = 2 * 10**6


def _ro(a) -> np.ndarray:
    a = np.ascontiguousarray(np.asarray(a, dtype=np.int64).reshape(-1))
    a.setflags(write=False)
    return a


class RowIndex:
    """Exact lookup of integer rows, by mixed-radix keys when they fit in int64."""

    def __init__(self, rows: np.ndarray, radix: Sequence[int]):
        rows = np.asarray(rows, dtype=np.int64)
        self.width = rows.shape[1]
        self.radix = [max(1, int(r)) for r in radix]
        self._weights = None
        total = 1
        for r in self.radix:
            total *= r
        if total < 2**62:
            w = [1] * self.width
            for i in range(self.width - 2, -1, -1):
                w[i] = w[i + 1] * self.radix[i + 1]
            self._weights = np.array(w, dtype=np.int64)
            keys = rows @ self._weights if self.width else np.zeros(len(rows), dtype=np.int64)
            self._order = np.argsort(keys, kind="stable")
            self._sorted = keys[self._order]
            if len(keys) > 1 and np.any(self._sorted[1:] == self._sorted[:-1]):
                raise InvariantError("duplicate rows in index")
        else:
            self._dict = {r.tobytes(): i for i, r in enumerate(np.ascontiguousarray(rows))}
            if len(self._dict) != len(rows):
                raise InvariantError("duplicate rows in index")

    def lookup(self, rows, missing_ok: bool = False) -> np.ndarray:
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, self.width)
        if self._weights is not None:
            keys = rows @ self._weights if self.width else np.zeros(len(rows), dtype=np.int64)
            pos = np.searchsorted(self._sorted, keys)
            pos = np.minimum(pos, max(len(self._sorted) - 1, 0))
            ok = (self._sorted[pos] == keys) if len(self._sorted) else np.zeros(len(keys), bool)
            out = np.where(ok, self._order[pos] if len(self._sorted) else -1, -1)
        else:
            rows = np.ascontiguousarray(rows)
            out = np.array([self._dict.get(r.tobytes(), -1) for r in rows], dtype=np.int64)
        if not missing_ok and np.any(out < 0):
            bad = rows[int(np.argmax(out < 0))]
            raise InvariantError(f"row {bad.tolist()} not found")
        return out


class FinCat:
    """A finite category."""

    def __init__(self, n_obj: int, src, tgt, ident, compose: Callable, name: str = "",
                 obj_labels: Sequence[str] | None = None, mor_labels: Sequence[str] | None = None):
        self.n_obj = int(n_obj)
        self.src, self.tgt, self.ident = _ro(src), _ro(tgt), _ro(ident)
        if len(self.src) != len(self.tgt) or len(self.ident) != self.n_obj:
            raise InvariantError("structure arrays have inconsistent lengths")
        self._compose = compose
        self.name = name
        self.obj_labels = obj_labels
        self.mor_labels = mor_labels

    def __repr__(self):
        return f"FinCat({self.name or '?'}: {self.n_obj} objects, {self.n_mor} morphisms)"

    @property
    def n_mor(self) -> int:
        return len(self.src)

    def compose(self, f, g) -> np.ndarray:
        f = np.asarray(f, dtype=np.int64)
        g = np.asarray(g, dtype=np.int64)
        if f.size == 0:
            return np.zeros(np.broadcast(f, g).shape, dtype=np.int64)
        return np.asarray(self._compose(*np.broadcast_arrays(f, g)), dtype=np.int64)

    def comp(self, f: int, g: int) -> int:
        """Scalar ``f∘g``; the pair must be composable."""
        if self.src[f] != self.tgt[g]:
            raise InvariantError(f"morphisms {f} and {g} are not composable")
        return int(self.compose(np.array([f]), np.array([g]))[0])

    # -- hom sets ---------------------------------------------------------
    @functools.cached_property
    def _out(self):
        order = np.argsort(self.src, kind="stable")
        return order, np.searchsorted(self.src[order], np.arange(self.n_obj + 1))

    @functools.cached_property
    def _in(self):
        order = np.argsort(self.tgt, kind="stable")
        return order, np.searchsorted(self.tgt[order], np.arange(self.n_obj + 1))

    def out_of(self, x: int) -> np.ndarray:
        order, starts = self._out
        return order[starts[x]:starts[x + 1]]

    def into(self, x: int) -> np.ndarray:
        order, starts = self._in
        return order[starts[x]:starts[x + 1]]

    def hom(self, y: int, x: int) -> np.ndarray:
        """Morphisms ``x -> y``."""
        m = self.out_of(x)
        return m[self.tgt[m] == y]

    @functools.cached_property
    def dense_table(self) -> list[list[int]] | None:
        """``table[f][g]`` (or -1) when the category is small enough."""
        if self.n_mor > DENSE_TABLE_LIMIT:
            return None
        table = [[-1] * self.n_mor for _ in range(self.n_mor)]
        for f, g, c in self.composable_pairs(with_composite=True):
            for a, b, v in zip(f.tolist(), g.tolist(), c.tolist()):
                table[a][b] = v
        return table

    def n_composable(self) -> int:
        _, so = self._out
        _, si = self._in
        return int(np.sum(np.diff(so) * np.diff(si)))

    def composable_pairs(self, with_composite: bool = False, chunk: int = PAIR_CHUNK) -> Iterator:
        """All ``(f, g)`` with ``src f = tgt g``, batched over middle objects."""
        so = np.diff(self._out[1])
        si = np.diff(self._in[1])
        fs, gs, size = [], [], 0
        for m in range(self.n_obj):
            if so[m] == 0 or si[m] == 0:
                continue
            f, g = np.meshgrid(self.out_of(m), self.into(m), indexing="ij")
            fs.append(f.ravel())
            gs.append(g.ravel())
            size += f.size
            if size >= chunk:
                yield self._emit(fs, gs, with_composite)
                fs, gs, size = [], [], 0
        if fs:
            yield self._emit(fs, gs, with_composite)

    def _emit(self, fs, gs, with_composite):
        f, g = np.concatenate(fs), np.concatenate(gs)
        return (f, g, self.compose(f, g)) if with_composite else (f, g)

    # -- axioms and shape -------------------------------------------------
    def is_thin(self) -> bool:
        """At most one morphism between any ordered pair of objects."""
        key = self.tgt * max(self.n_obj, 1) + self.src
        return len(np.unique(key)) == self.n_mor

    def n_triples(self) -> int:
        """Number of composable triples ``(h, f, g)``."""
        so = np.diff(self._out[1])
        si = np.diff(self._in[1])
        # pairs (f, g) per object tgt f, then times |out(tgt f)|
        per_f = si[self.src]
        by_t = np.bincount(self.tgt, weights=per_f, minlength=self.n_obj)
        return int(np.dot(by_t, so))

    def check_axioms(self, assoc_limit: int = ASSOC_EXHAUSTIVE_LIMIT) -> dict:
        """Raise :class:`InvariantError` on any failure; report what was covered.

        Unit laws and endpoints are always exhaustive. Associativity is
        exhaustive up to ``assoc_limit`` triples and is sampled (seeded) above.
        """
        n, m = self.n_obj, self.n_mor
        report = {"objects": n, "morphisms": m, "triples": 0, "assoc": "exhaustive"}
        ar = np.arange(n)
        for nm, a, hi in (("src", self.src, n), ("tgt", self.tgt, n), ("ident", self.ident, m)):
            if len(a) and (a.min() < 0 or a.max() >= hi):
                raise InvariantError(f"{nm} out of range")
        if not (np.array_equal(self.src[self.ident], ar) and np.array_equal(self.tgt[self.ident], ar)):
            raise InvariantError("identity has wrong source or target")
        if m == 0:
            return report
        f = np.arange(m)
        left = self.compose(f, self.ident[self.src])
        right = self.compose(self.ident[self.tgt], f)
        if not np.array_equal(left, f) or not np.array_equal(right, f):
            bad = int(np.argmax((left != f) | (right != f)))
            raise InvariantError(f"unit law fails at morphism {bad}")
        for a, b, c in self.composable_pairs(with_composite=True):
            ok = (self.src[c] == self.src[b]) & (self.tgt[c] == self.tgt[a])
            if not ok.all():
                i = int(np.argmin(ok))
                raise InvariantError(f"composite of {(int(a[i]), int(b[i]))} has wrong endpoints")
        # with singleton hom sets associativity is forced by the endpoint checks
        if self.is_thin():
            report["assoc"] = "thin"
            return report
        report["triples"] = self.n_triples()
        if report["triples"] <= assoc_limit:
            self._check_assoc()
        else:
            self._sample_assoc(ASSOC_SAMPLE)
            report["assoc"] = f"sampled {ASSOC_SAMPLE}"
        return report

    def _sample_assoc(self, k: int) -> None:
        rng = np.random.default_rng(0)
        g = rng.integers(0, self.n_mor, k)
        f = self._random_from(self.out_of, self.tgt[g], rng)
        ok = f >= 0
        g, f = g[ok], f[ok]
        h = self._random_from(self.out_of, self.tgt[f], rng)
        ok = h >= 0
        h, f, g = h[ok], f[ok], g[ok]
        one = self.compose(h, self.compose(f, g))
        two = self.compose(self.compose(h, f), g)
        if not np.array_equal(one, two):
            i = int(np.argmax(one != two))
            raise InvariantError(f"associativity fails at {(int(h[i]), int(f[i]), int(g[i]))}")

    def _sample_pairs(self, k: int, seed: int = 0):
        """Seeded random composable pairs ``(f, g, f∘g)``."""
        rng = np.random.default_rng(seed)
        g = rng.integers(0, self.n_mor, k)
        f = self._random_from(self.out_of, self.tgt[g], rng)
        ok = f >= 0
        f, g = f[ok], g[ok]
        return f, g, self.compose(f, g)

    def _random_from(self, table, objs, rng) -> np.ndarray:
        order, starts = self._out
        lo, hi = starts[objs], starts[objs + 1]
        size = hi - lo
        pick = lo + (rng.random(len(objs)) * np.maximum(size, 1)).astype(np.int64)
        return np.where(size > 0, order[np.minimum(pick, len(order) - 1)], -1)

    def _check_assoc(self) -> None:
        for f, g, fg in self.composable_pairs(with_composite=True):
            order = np.argsort(self.tgt[f], kind="stable")
            f, g, fg = f[order], g[order], fg[order]
            t = self.tgt[f]
            bounds = np.searchsorted(t, np.arange(self.n_obj + 1))
            for a in range(self.n_obj):
                lo, hi = bounds[a], bounds[a + 1]
                hs = self.out_of(a)
                if lo == hi or len(hs) == 0:
                    continue
                H, P = np.meshgrid(hs, np.arange(lo, hi), indexing="ij")
                H, P = H.ravel(), P.ravel()
                one = self.compose(H, fg[P])
                two = self.compose(self.compose(H, f[P]), g[P])
                if not np.array_equal(one, two):
                    i = int(np.argmax(one != two))
                    raise InvariantError(
                        f"associativity fails at {(int(H[i]), int(f[P[i]]), int(g[P[i]]))}")

    def is_chaotic(self) -> bool:
        return self.n_mor == self.n_obj ** 2 and self.is_thin()

    def inverses(self) -> np.ndarray:
        """Inverse of each morphism, or -1."""
        out = np.full(self.n_mor, -1, dtype=np.int64)
        n = max(self.n_obj, 1)
        key = self.tgt * n + self.src
        order = np.argsort(key, kind="stable")
        skey = key[order]
        rev = self.src * n + self.tgt
        lo = np.searchsorted(skey, rev)
        cnt = np.searchsorted(skey, rev, side="right") - lo
        # batches of morphisms whose candidate lists total about PAIR_CHUNK
        ends = np.cumsum(cnt)
        start = 0
        while start < self.n_mor:
            base = ends[start - 1] if start else 0
            stop = max(int(np.searchsorted(ends, base + PAIR_CHUNK, side="right")), start + 1)
            f = np.repeat(np.arange(start, stop), cnt[start:stop])
            if len(f):
                off = np.arange(len(f)) - np.repeat(np.cumsum(cnt[start:stop]) - cnt[start:stop], cnt[start:stop])
                g = order[np.repeat(lo[start:stop], cnt[start:stop]) + off]
                ok = ((self.compose(g, f) == self.ident[self.src[f]])
                      & (self.compose(f, g) == self.ident[self.tgt[f]]))
                # first valid candidate per morphism, in sorted order
                hit = np.flatnonzero(ok)[::-1]
                out[f[hit]] = g[hit]
            start = stop
        return out

    def is_groupoid(self) -> bool:
        return bool(np.all(self.inverses() >= 0))

    def components(self) -> tuple[int, np.ndarray]:
        """Connected components of the underlying graph; labels ordered by least object."""
        n = self.n_obj
        if n == 0:
            return 0, np.zeros(0, dtype=np.int64)
        adj = coo_matrix((np.ones(self.n_mor), (self.src, self.tgt)), shape=(n, n))
        k, lab = connected_components(adj, directed=True, connection="weak")
        first = np.full(k, n, dtype=np.int64)
        np.minimum.at(first, lab, np.arange(n))
        rank = np.empty(k, dtype=np.int64)
        rank[np.argsort(first)] = np.arange(k)
        return int(k), rank[lab]

    def vertex_group(self, x: int) -> tuple[FiniteGroup, np.ndarray]:
        """``End(x)`` as a group (requires invertibility); also the morphism list."""
        mors = self.hom(x, x)
        pos = {int(f): i for i, f in enumerate(mors)}
        F, Gm = np.meshgrid(mors, mors, indexing="ij")
        comp = self.compose(F.ravel(), Gm.ravel()).reshape(F.shape)
        table = [[pos[int(c)] for c in row] for row in comp]
        return FiniteGroup(table, name=f"Aut({x})"), mors

    # -- serialisation -----------------------------------------------------
    def to_text(self) -> str:
        out = [f"objects {self.n_obj}", f"morphisms {self.n_mor}"]
        out += [f"{int(s)} {int(t)}" for s, t in zip(self.src, self.tgt)]
        out.append("identities " + " ".join(map(str, self.ident.tolist())))
        out.append("compose")
        for f, g, c in self.composable_pairs(with_composite=True):
            out += [f"{a} {b} {v}" for a, b, v in zip(f.tolist(), g.tolist(), c.tolist())]
        return "\n".join(out) + "\n"

    @classmethod
    def from_text(cls, text: str, name: str = "") -> "FinCat":
        lines = [ln.split("#")[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        try:
            n_obj = int(lines[0].split()[1])
            n_mor = int(lines[1].split()[1])
            st = [tuple(map(int, ln.split())) for ln in lines[2:2 + n_mor]]
            ident = [int(x) for x in lines[2 + n_mor].split()[1:]]
            if lines[3 + n_mor] != "compose":
                raise ValueError
            triples = [tuple(map(int, ln.split())) for ln in lines[4 + n_mor:]]
        except (IndexError, ValueError) as exc:
            raise InvariantError("malformed category file") from exc
        src = [s for s, _ in st]
        tgt = [t for _, t in st]
        return from_table(n_obj, src, tgt, ident, triples, name=name)


def from_table(n_obj: int, src, tgt, ident, triples, name: str = "") -> FinCat:
    """Category from explicit ``(f, g, f∘g)`` triples."""
    src, tgt = _ro(src), _ro(tgt)
    m = len(src)
    tri = np.asarray(list(triples), dtype=np.int64).reshape(-1, 3)
    keys = tri[:, 0] * m + tri[:, 1]
    order = np.argsort(keys)
    skeys, svals = keys[order], tri[order, 2]
    if len(skeys) > 1 and np.any(skeys[1:] == skeys[:-1]):
        raise InvariantError("composite given twice")

    def compose(f, g):
        k = f * m + g
        pos = np.minimum(np.searchsorted(skeys, k), max(len(skeys) - 1, 0))
        if len(skeys) == 0 or np.any(skeys[pos] != k):
            raise InvariantError("composite missing from table")
        return svals[pos]

    return FinCat(n_obj, src, tgt, ident, compose, name=name)


# --------------------------------------------------------------------------
# basic constructions
# --------------------------------------------------------------------------

def chaotic(n: int, labels: Sequence[str] | None = None, name: str = "") -> FinCat:
    """``X~`` on ``0..n-1``; the morphism ``(y, x): x -> y`` has index ``y*n + x``."""
    idx = np.arange(n * n)
    return FinCat(n, idx % n if n else idx, idx // n if n else idx, np.arange(n) * (n + 1),
                  lambda f, g: (f // n) * n + g % n, name=name or f"chaotic({n})", obj_labels=labels)


def discrete(n: int) -> FinCat:
    a = np.arange(n)
    return FinCat(n, a, a, a, lambda f, g: f, name=f"discrete({n})")


def terminal() -> FinCat:
    return chaotic(1, name="terminal")


def group_category(g: FiniteGroup) -> FinCat:
    """``G`` as a one-object category, ``f∘g = fg``."""
    t = g.table
    n = g.order
    return FinCat(1, np.zeros(n), np.zeros(n), [g.identity], lambda f, h: t[f, h],
                  name=f"B{g.name}", mor_labels=[g.label(x) for x in range(n)])


def translation(g: FiniteGroup, y: GSet) -> FinCat:
    """``<G, Y>``: ``(g, y): y -> gy`` at index ``g*|Y| + y``; ``(h, gy)∘(g, y) = (hg, y)``."""
    if y.group is not g:
        raise ContextError("G-set over a different group")
    m = y.size
    gi = np.repeat(np.arange(g.order), m)
    yi = np.tile(np.arange(m), g.order)
    t = g.table
    return FinCat(m, yi, y.act[gi, yi], g.identity * m + np.arange(m),
                  lambda f, h: t[f // m, h // m] * m + h % m, name=f"<{g.name},Y>")


def product(a: FinCat, b: FinCat) -> FinCat:
    """``A × B``; object ``(x, y)`` at ``x*|Ob B| + y``, morphism ``(f, g)`` at ``f*|Mor B| + g``."""
    nb, mb = b.n_obj, b.n_mor
    fa = np.repeat(np.arange(a.n_mor), mb)
    fb = np.tile(np.arange(mb), a.n_mor)
    ident = (a.ident[:, None] * mb + b.ident[None, :]).ravel()
    return FinCat(a.n_obj * nb, a.src[fa] * nb + b.src[fb], a.tgt[fa] * nb + b.tgt[fb], ident,
                  lambda f, g: a.compose(f // mb, g // mb) * mb + b.compose(f % mb, g % mb),
                  name=f"{a.name}x{b.name}")


class Functor:
    def __init__(self, dom: FinCat, cod: FinCat, obj_map, mor_map, name: str = ""):
        self.dom, self.cod = dom, cod
        self.obj_map, self.mor_map = _ro(obj_map), _ro(mor_map)
        self.name = name
        if len(self.obj_map) != dom.n_obj or len(self.mor_map) != dom.n_mor:
            raise InvariantError("functor maps have the wrong length")

    def __repr__(self):
        return f"Functor({self.name or '?'}: {self.dom.name} -> {self.cod.name})"

    def check(self) -> None:
        d, c, F, Fo = self.dom, self.cod, self.mor_map, self.obj_map
        if not np.array_equal(c.src[F], Fo[d.src]) or not np.array_equal(c.tgt[F], Fo[d.tgt]):
            raise InvariantError("functor does not preserve source/target")
        if not np.array_equal(F[d.ident], c.ident[Fo]):
            raise InvariantError("functor does not preserve identities")
        for f, g, fg in d.composable_pairs(with_composite=True):
            ok = F[fg] == c.compose(F[f], F[g])
            if not ok.all():
                i = int(np.argmin(ok))
                raise InvariantError(f"functor does not preserve the composite of {(int(f[i]), int(g[i]))}")

    def is_isomorphism(self) -> bool:
        return (self.dom.n_obj == self.cod.n_obj and self.dom.n_mor == self.cod.n_mor
                and len(np.unique(self.obj_map)) == self.dom.n_obj
                and len(np.unique(self.mor_map)) == self.dom.n_mor)

    def then(self, other: "Functor") -> "Functor":
        """``other ∘ self``."""
        if other.dom is not self.cod:
            raise ContextError("functors are not composable")
        return Functor(self.dom, other.cod, other.obj_map[self.obj_map], other.mor_map[self.mor_map])

    def inverse(self) -> "Functor":
        if not self.is_isomorphism():
            raise InvariantError("functor is not bijective")
        io = np.empty_like(self.obj_map)
        io[self.obj_map] = np.arange(len(io))
        im = np.empty_like(self.mor_map)
        im[self.mor_map] = np.arange(len(im))
        return Functor(self.cod, self.dom, io, im)

    def equals(self, other: "Functor") -> bool:
        return (np.array_equal(self.obj_map, other.obj_map) and np.array_equal(self.mor_map, other.mor_map))


def identity_functor(c: FinCat) -> Functor:
    return Functor(c, c, np.arange(c.n_obj), np.arange(c.n_mor), name="id")


class CatGAction:
    """Left action of a finite group on a finite category by functors."""

    def __init__(self, group: FiniteGroup, cat: FinCat, on_obj, on_mor, name: str = "", validate: bool = True):
        self.group, self.cat, self.name = group, cat, name
        self.on_obj = np.asarray(on_obj, dtype=np.int64).reshape(group.order, cat.n_obj)
        self.on_mor = np.asarray(on_mor, dtype=np.int64).reshape(group.order, cat.n_mor)
        self.on_obj.setflags(write=False)
        self.on_mor.setflags(write=False)
        if validate:
            self.check()

    def __repr__(self):
        return f"CatGAction({self.group.name} on {self.cat.name})"

    def check(self) -> None:
        G, C = self.group, self.cat
        for arr, n, what in ((self.on_obj, C.n_obj, "objects"), (self.on_mor, C.n_mor, "morphisms")):
            if not np.array_equal(arr[G.identity], np.arange(n)):
                raise InvariantError(f"identity does not act trivially on {what}")
            srt = np.sort(arr, axis=1)
            if not np.array_equal(srt, np.broadcast_to(np.arange(n), arr.shape)):
                raise InvariantError(f"some element does not permute the {what}")
        gens = G.generators()
        t = G.table
        for h in gens:
            for arr in (self.on_obj, self.on_mor):
                if not np.array_equal(arr[t[:, h]], arr[:, arr[h]] if arr.shape[1] else arr):
                    raise InvariantError(f"not a group action at generator {h}")
        for h in gens:
            o, m = self.on_obj[h], self.on_mor[h]
            if not (np.array_equal(C.src[m], o[C.src]) and np.array_equal(C.tgt[m], o[C.tgt])
                    and np.array_equal(m[C.ident], C.ident[o])):
                raise InvariantError(f"element {h} does not act by a functor")
            if C.n_composable() <= ACTION_PAIR_LIMIT:
                batches = C.composable_pairs(with_composite=True)
            else:
                batches = [C._sample_pairs(ASSOC_SAMPLE, seed=h)]
            for f, g, fg in batches:
                if not np.array_equal(m[fg], C.compose(m[f], m[g])):
                    raise InvariantError(f"element {h} does not preserve composition")

    def functor(self, g: int) -> Functor:
        return Functor(self.cat, self.cat, self.on_obj[g], self.on_mor[g])

    def restrict(self, h: Subgroup) -> "CatGAction":
        hg, emb = h.as_group()
        return CatGAction(hg, self.cat, self.on_obj[emb], self.on_mor[emb], validate=False)

    def is_trivial(self) -> bool:
        return (np.all(self.on_obj == np.arange(self.cat.n_obj)) and np.all(self.on_mor == np.arange(self.cat.n_mor)))


def trivial_cat_action(g: FiniteGroup, c: FinCat) -> CatGAction:
    return CatGAction(g, c, np.tile(np.arange(c.n_obj), (g.order, 1)),
                      np.tile(np.arange(c.n_mor), (g.order, 1)), name="trivial", validate=False)


def chaotic_action(y: GSet, cat: FinCat | None = None) -> CatGAction:
    """Diagonal action on ``Y~`` (or on ``cat``, which must be ``chaotic(|Y|)``)."""
    n = y.size
    if cat is None:
        cat = chaotic(n)
    elif cat.n_obj != n or not np.array_equal(cat.src, np.tile(np.arange(n), n)):
        raise ContextError("category is not the chaotic category on Y")
    a = y.act
    on_mor = (a[:, :, None] * n + a[:, None, :]).reshape(y.group.order, n * n)
    return CatGAction(y.group, cat, a, on_mor, name="diagonal", validate=False)


def conjugation_on_group_category(g: FiniteGroup) -> CatGAction:
    """``G`` acting on ``BG`` by conjugation."""
    conj = np.array([[g.conj(x, a) for a in range(g.order)] for x in range(g.order)])
    return CatGAction(g, group_category(g), np.zeros((g.order, 1)), conj, name="conjugation", validate=False)


def _subgroup_elements(act_group: FiniteGroup, H) -> list[int]:
    if H is None:
        return list(range(act_group.order))
    if isinstance(H, Subgroup):
        if H.parent is not act_group:
            raise ContextError("subgroup of a different group")
        return list(H.members)
    return [int(x) for x in H]


class SubCategory(FinCat):
    """Subcategory with index maps back into the ambient category."""

    def __init__(self, ambient: FinCat, obj_index, mor_index, name: str = ""):
        self.ambient = ambient
        self.obj_index, self.mor_index = _ro(obj_index), _ro(mor_index)
        opos = np.full(ambient.n_obj, -1, dtype=np.int64)
        opos[self.obj_index] = np.arange(len(self.obj_index))
        mpos = np.full(ambient.n_mor, -1, dtype=np.int64)
        mpos[self.mor_index] = np.arange(len(self.mor_index))
        self.obj_pos, self.mor_pos = opos, mpos
        mi = self.mor_index
        super().__init__(len(self.obj_index), opos[ambient.src[mi]], opos[ambient.tgt[mi]],
                         mpos[ambient.ident[self.obj_index]],
                         lambda f, g: mpos[ambient.compose(mi[f], mi[g])], name=name)
        if (len(mi) and (self.src.min() < 0 or self.tgt.min() < 0)) or (len(self.ident) and self.ident.min() < 0):
            raise InvariantError("not a subcategory: endpoints or identities missing")

    def inclusion(self) -> Functor:
        return Functor(self, self.ambient, self.obj_index, self.mor_index, name="inclusion")


def fixed_category(c: FinCat, act: CatGAction, H=None) -> SubCategory:
    """Objects and morphisms fixed by every element of ``H``."""
    if act.cat is not c:
        raise ContextError("action is on a different category")
    if isinstance(H, Subgroup):
        if H.parent is not act.group:
            raise ContextError("subgroup of a different group")
        elems = H.generators() or [act.group.identity]
    else:
        elems = _subgroup_elements(act.group, H)
    ob = np.all(act.on_obj[elems] == np.arange(c.n_obj), axis=0)
    mo = np.all(act.on_mor[elems] == np.arange(c.n_mor), axis=0)
    return SubCategory(c, np.flatnonzero(ob), np.flatnonzero(mo), name=f"{c.name}^H")


# --------------------------------------------------------------------------
# orbit categories
# --------------------------------------------------------------------------

class OrbitCategory(FinCat):
    """Quotient ``C/K``: orbit objects, morphism classes and the quotient functor.

    ``descended`` records whether orbits of morphisms already formed a
    congruence; when not, classes are the congruence generated by the orbits,
    which is the colimit of the action in categories.
    """

    def __init__(self, base: FinCat, act: CatGAction, obj_class, mor_class, descended: bool):
        self.base, self.action, self.descended = base, act, descended
        self.obj_class, self.mor_class = _ro(obj_class), _ro(mor_class)
        n_o = int(self.obj_class.max()) + 1 if len(self.obj_class) else 0
        n_m = int(self.mor_class.max()) + 1 if len(self.mor_class) else 0
        obj_rep = np.full(n_o, -1, dtype=np.int64)
        obj_rep[self.obj_class[::-1]] = np.arange(base.n_obj)[::-1]
        mor_rep = np.full(n_m, -1, dtype=np.int64)
        mor_rep[self.mor_class[::-1]] = np.arange(base.n_mor)[::-1]
        self.obj_rep, self.mor_rep = obj_rep, mor_rep
        # to_rep[x] sends x to the representative of its orbit
        G = act.group
        to_rep = np.full(base.n_obj, -1, dtype=np.int64)
        for g in range(G.order):
            hit = (act.on_obj[g] == obj_rep[self.obj_class]) & (to_rep < 0)
            to_rep[hit] = g
        self.to_rep = to_rep
        inv = np.asarray(G.inv_list)
        t = G.table
        oc, mc, om = self.obj_class, self.mor_class, act.on_mor

        def compose(F, Gc):
            f, g = mor_rep[F], mor_rep[Gc]
            k = t[inv[to_rep[base.src[f]]], to_rep[base.tgt[g]]]
            return mc[base.compose(f, om[k, g])]

        super().__init__(n_o, oc[base.src[mor_rep]], oc[base.tgt[mor_rep]], mc[base.ident[obj_rep]],
                         compose, name=f"{base.name}/{G.name}")

    def quotient(self) -> Functor:
        return Functor(self.base, self, self.obj_class, self.mor_class, name="p")


def _orbit_labels(on: np.ndarray) -> np.ndarray:
    """Label each point by the least point of its orbit, then renumber densely."""
    least = on.min(axis=0)
    _, lab = np.unique(least, return_inverse=True)
    return lab.astype(np.int64)


def _free_on_objects(act: CatGAction) -> bool:
    moved = act.on_obj != np.arange(act.cat.n_obj)
    return bool(np.all(moved[[g for g in range(act.group.order) if g != act.group.identity]]))


def descent_witness(c: FinCat, mor_lab: np.ndarray):
    """First composable pairs ``(f,g), (f',g')`` with equal classes but different composite classes."""
    for f, g, fg in c.composable_pairs(with_composite=True):
        key = mor_lab[f] * (int(mor_lab.max()) + 1) + mor_lab[g]
        order = np.lexsort((mor_lab[fg], key))
        k, v = key[order], mor_lab[fg][order]
        bad = np.flatnonzero((k[1:] == k[:-1]) & (v[1:] != v[:-1]))
        if len(bad):
            i, j = order[bad[0]], order[bad[0] + 1]
            return (int(f[i]), int(g[i])), (int(f[j]), int(g[j]))
    return None


def orbit_category(c: FinCat, act: CatGAction, strict: bool = False) -> OrbitCategory:
    """Quotient of ``c`` by ``act`` with an explicit descent check.

    When the orbit relation on morphisms is not compatible with composition
    the congruence it generates is used, unless ``strict`` is set, in which
    case :class:`DescentError` carries a witness.
    """
    if act.cat is not c:
        raise ContextError("action is on a different category")
    obj_lab = _orbit_labels(act.on_obj) if c.n_obj else np.zeros(0, dtype=np.int64)
    mor_lab = _orbit_labels(act.on_mor) if c.n_mor else np.zeros(0, dtype=np.int64)
    if _free_on_objects(act) or c.n_mor == 0:
        return OrbitCategory(c, act, obj_lab, mor_lab, descended=True)
    wit = descent_witness(c, mor_lab)
    if wit is None:
        return OrbitCategory(c, act, obj_lab, mor_lab, descended=True)
    if strict:
        raise DescentError("composition does not descend to orbits", witness=wit)
    return OrbitCategory(c, act, obj_lab, _congruence_closure(c, mor_lab), descended=False)


def _congruence_closure(c: FinCat, lab: np.ndarray) -> np.ndarray:
    lab = lab.copy()
    while True:
        n = int(lab.max()) + 1
        rows, cols = [], []
        for f, g, fg in c.composable_pairs(with_composite=True):
            key = lab[f] * n + lab[g]
            order = np.lexsort((lab[fg], key))
            k, v = key[order], lab[fg][order]
            same = (k[1:] == k[:-1]) & (v[1:] != v[:-1])
            rows.append(v[:-1][same])
            cols.append(v[1:][same])
        r = np.concatenate(rows) if rows else np.zeros(0, dtype=np.int64)
        if len(r) == 0:
            return _orbit_relabel(lab)
        q = np.concatenate(cols)
        adj = coo_matrix((np.ones(len(r)), (r, q)), shape=(n, n))
        _, merge = connected_components(adj, directed=False)
        lab = _orbit_relabel(merge[lab])


def _orbit_relabel(lab: np.ndarray) -> np.ndarray:
    """Renumber classes in order of their least member."""
    n = int(lab.max()) + 1
    first = np.full(n, len(lab), dtype=np.int64)
    np.minimum.at(first, lab, np.arange(len(lab)))
    used = np.flatnonzero(first < len(lab))
    rank = np.full(n, -1, dtype=np.int64)
    rank[used[np.argsort(first[used])]] = np.arange(len(used))
    return rank[lab]


# --------------------------------------------------------------------------
# functor categories
# --------------------------------------------------------------------------

DEFAULT_FUNCTOR_BOUND = 10**6
# object assignments Ob A -> Ob B tried by the functor enumerator
MAX_OBJECT_ASSIGNMENTS = 10**6


class FunctorCategory(FinCat):
    """``Cat(A, B)``.

    ``functors[i]`` lists the images of A's morphisms; ``nat[j]`` lists the
    components of a natural transformation ``nat_src[j] -> nat_tgt[j]``.
    """

    def __init__(self, A: FinCat, B: FinCat, functors: np.ndarray, nat: np.ndarray,
                 nat_src: np.ndarray, nat_tgt: np.ndarray):
        self.A, self.B = A, B
        self.functors = np.asarray(functors, dtype=np.int64).reshape(-1, A.n_mor)
        self.obj_images = B.src[self.functors[:, A.ident]] if len(self.functors) else np.zeros((0, A.n_obj), np.int64)
        self.nat = np.asarray(nat, dtype=np.int64).reshape(-1, A.n_obj)
        nF = len(self.functors)
        self.functor_index = RowIndex(self.functors, [B.n_mor] * A.n_mor)
        rows = np.concatenate([nat_src[:, None], nat_tgt[:, None], self.nat], axis=1)
        self.nat_index = RowIndex(rows, [nF, nF] + [B.n_mor] * A.n_obj)
        ident_rows = np.concatenate([np.arange(nF)[:, None], np.arange(nF)[:, None],
                                     B.ident[self.obj_images]], axis=1)
        ident = self.nat_index.lookup(ident_rows)
        nat_arr = self.nat
        nidx = self.nat_index

        def compose(f, g):
            comps = B.compose(nat_arr[f], nat_arr[g])
            return nidx.lookup(np.concatenate([self.src[g][:, None], self.tgt[f][:, None], comps], axis=1))

        super().__init__(nF, nat_src, nat_tgt, ident, compose, name=f"Cat({A.name},{B.name})")


def _enumerate_functors(A: FinCat, B: FinCat, bound: int) -> list[list[int]]:
    if B.n_obj ** A.n_obj > MAX_OBJECT_ASSIGNMENTS:
        raise BoundExceeded(f"{B.n_obj}^{A.n_obj} object assignments; limit is {MAX_OBJECT_ASSIGNMENTS}")
    at = A.dense_table
    if at is None:
        raise BoundExceeded("domain category too large for functor enumeration")
    bt = B.dense_table
    bcomp = (lambda f, g: bt[f][g]) if bt is not None else B.comp
    a_src, a_tgt = A.src.tolist(), A.tgt.tolist()
    b_src, b_tgt = B.src.tolist(), B.tgt.tolist()
    m = A.n_mor
    after = [[g for g in range(m) if a_tgt[g] == a_src[f]] for f in range(m)]
    before = [[g for g in range(m) if a_src[g] == a_tgt[f]] for f in range(m)]
    hom_b: dict[tuple[int, int], list[int]] = {}
    for f in range(B.n_mor):
        hom_b.setdefault((b_tgt[f], b_src[f]), []).append(f)
    out: list[list[int]] = []
    assign = [-1] * m

    def push(f, v, objs, trail):
        stack = [(f, v)]
        while stack:
            f, v = stack.pop()
            if assign[f] != -1:
                if assign[f] != v:
                    return False
                continue
            if b_src[v] != objs[a_src[f]] or b_tgt[v] != objs[a_tgt[f]]:
                return False
            assign[f] = v
            trail.append(f)
            for g in after[f]:
                w = assign[g]
                if w != -1:
                    stack.append((at[f][g], bcomp(v, w)))
            for g in before[f]:
                w = assign[g]
                if w != -1:
                    stack.append((at[g][f], bcomp(w, v)))
        return True

    def undo(trail):
        for f in trail:
            assign[f] = -1

    def rec(objs, i):
        while i < m and assign[i] != -1:
            i += 1
        if i == m:
            out.append(list(assign))
            if len(out) > bound:
                raise BoundExceeded(f"more than {bound} functors")
            return
        for v in hom_b.get((objs[a_tgt[i]], objs[a_src[i]]), ()):
            trail: list[int] = []
            if push(i, v, objs, trail):
                rec(objs, i + 1)
            undo(trail)

    b_ident = B.ident.tolist()
    for objs in itertools.product(range(B.n_obj), repeat=A.n_obj):
        trail: list[int] = []
        ok = all(push(A.ident[a], b_ident[objs[a]], objs, trail) for a in range(A.n_obj))
        if ok:
            rec(objs, 0)
        undo(trail)
    out.sort()
    return out


def _enumerate_nat(A: FinCat, B: FinCat, F: list[int], Fp: list[int], objF, objFp, hom_b, bcomp,
                   by_obj) -> list[list[int]]:
    k = A.n_obj
    out = []
    comp = [-1] * k

    def ok_at(a):
        for f, s, t in by_obj[a]:
            # naturality: F'(f) ∘ η_s = η_t ∘ F(f)
            if bcomp(Fp[f], comp[s]) != bcomp(comp[t], F[f]):
                return False
        return True

    def rec(a):
        if a == k:
            out.append(list(comp))
            return
        for c in hom_b.get((objFp[a], objF[a]), ()):
            comp[a] = c
            if ok_at(a):
                rec(a + 1)
        comp[a] = -1

    rec(0)
    return out


def functor_category(A: FinCat, B: FinCat, bound: int = DEFAULT_FUNCTOR_BOUND) -> FunctorCategory:
    """All functors ``A -> B`` and all natural transformations between them."""
    functors = _enumerate_functors(A, B, bound)
    bt = B.dense_table
    bcomp = (lambda f, g: bt[f][g]) if bt is not None else B.comp
    hom_b: dict[tuple[int, int], list[int]] = {}
    for f in range(B.n_mor):
        hom_b.setdefault((int(B.tgt[f]), int(B.src[f])), []).append(f)
    # squares to check once both endpoint components are chosen
    by_obj: list[list[tuple[int, int, int]]] = [[] for _ in range(A.n_obj)]
    for f in range(A.n_mor):
        s, t = int(A.src[f]), int(A.tgt[f])
        by_obj[max(s, t)].append((f, s, t))
    ident = A.ident.tolist()
    b_src = B.src.tolist()
    objs = [[b_src[F[i]] for i in ident] for F in functors]
    nat, ns, nt = [], [], []
    for i, F in enumerate(functors):
        for j, Fp in enumerate(functors):
            for comps in _enumerate_nat(A, B, F, Fp, objs[i], objs[j], hom_b, bcomp, by_obj):
                nat.append(comps)
                ns.append(i)
                nt.append(j)
                if len(nat) > bound:
                    raise BoundExceeded(f"more than {bound} natural transformations")
    return FunctorCategory(A, B, np.array(functors, dtype=np.int64).reshape(-1, A.n_mor),
                           np.array(nat, dtype=np.int64).reshape(-1, A.n_obj),
                           np.array(ns, dtype=np.int64), np.array(nt, dtype=np.int64))


def conjugation_action(fc: FunctorCategory, act_a: CatGAction, act_b: CatGAction) -> CatGAction:
    """``(gF)(a) = g F(g^-1 a)`` and ``(gη)_a = g η_{g^-1 a}``."""
    if act_a.group is not act_b.group:
        raise ContextError("actions by different groups")
    if act_a.cat is not fc.A or act_b.cat is not fc.B:
        raise ContextError("actions are not on the functor category's factors")
    G = act_a.group
    on_obj = np.empty((G.order, fc.n_obj), dtype=np.int64)
    on_mor = np.empty((G.order, fc.n_mor), dtype=np.int64)
    for g in range(G.order):
        gi = G.inverse(g)
        bm = act_b.on_mor[g]
        new_f = bm[fc.functors[:, act_a.on_mor[gi]]]
        on_obj[g] = fc.functor_index.lookup(new_f)
        new_n = bm[fc.nat[:, act_a.on_obj[gi]]]
        rows = np.concatenate([on_obj[g][fc.src][:, None], on_obj[g][fc.tgt][:, None], new_n], axis=1)
        on_mor[g] = fc.nat_index.lookup(rows)
    return CatGAction(G, fc, on_obj, on_mor, name="conjugation")


def is_chaotic_or_empty(c: FinCat) -> bool:
    return c.n_obj == 0 or c.is_chaotic()


# --------------------------------------------------------------------------
# map groups U(X, Π) ⊃ O(X, Π)
# --------------------------------------------------------------------------

DEFAULT_MAP_BOUND = 2 * 10**6


def _digits(idx: np.ndarray, base: int, width: int) -> np.ndarray:
    out = np.empty((len(idx), width), dtype=np.int64)
    rest = np.asarray(idx, dtype=np.int64).copy()
    for j in range(width - 1, -1, -1):
        out[:, j] = rest % base
        rest //= base
    return out


class PointedMapGroup:
    """Maps ``X -> Π`` (``X = 0..n-1``) as rows, indexed lexicographically.

    ``U`` is every map under the pointwise product; ``O`` is the subgroup of
    maps with ``α(x0) = e``, one per orbit of the right action of constants.
    """

    def __init__(self, n: int, pi: FiniteGroup, x0: int = 0, bound: int = DEFAULT_MAP_BOUND):
        if not 0 <= x0 < max(n, 1):
            raise ValueError("basepoint out of range")
        if pi.order ** n > bound:
            raise BoundExceeded(f"|Π|^|X| = {pi.order}^{n} exceeds {bound}")
        self.n, self.pi, self.x0 = n, pi, x0
        self.base = pi.order
        self.weights = np.array([self.base ** (n - 1 - j) for j in range(n)], dtype=np.int64)
        self._t = pi.table
        self._inv = np.asarray(pi.inv_list)

    @property
    def size_u(self) -> int:
        return self.base ** self.n

    @property
    def size_o(self) -> int:
        return self.base ** (self.n - 1) if self.n else 1

    @functools.cached_property
    def U(self) -> np.ndarray:
        return _digits(np.arange(self.size_u), self.base, self.n)

    @functools.cached_property
    def O(self) -> np.ndarray:
        free = _digits(np.arange(self.size_o), self.base, self.n - 1) if self.n else np.zeros((1, 0), np.int64)
        return np.insert(free, self.x0, self.pi.identity, axis=1) if self.n else free

    @functools.cached_property
    def _o_keys(self) -> np.ndarray:
        return self.index(self.O)

    def index(self, rows) -> np.ndarray:
        """Position in ``U``."""
        return np.asarray(rows, dtype=np.int64) @ self.weights

    def o_index(self, rows) -> np.ndarray:
        """Position in ``O`` (rows must send ``x0`` to ``e``)."""
        k = self.index(rows)
        pos = np.searchsorted(self._o_keys, k)
        pos = np.minimum(pos, len(self._o_keys) - 1)
        if np.any(self._o_keys[pos] != k):
            raise InvariantError("map is not in O(X, Π)")
        return pos

    def mul(self, a, b) -> np.ndarray:
        return self._t[a, b]

    def inv(self, a) -> np.ndarray:
        return self._inv[a]

    def times_const(self, rows, s) -> np.ndarray:
        """``(α σ)(x) = α(x) σ``; ``s`` scalar or one per row."""
        s = np.asarray(s, dtype=np.int64)
        return self._t[rows, s[:, None] if s.ndim else s]

    def rep(self, rows) -> np.ndarray:
        """Orbit representative ``α α(x0)^-1`` in ``O``."""
        rows = np.asarray(rows, dtype=np.int64)
        return self.times_const(rows, self._inv[rows[:, self.x0]])

    def const(self, s: int) -> np.ndarray:
        return np.full(self.n, s, dtype=np.int64)

    def group(self) -> FiniteGroup:
        """``U`` as a :class:`FiniteGroup` (pointwise product)."""
        U = self.U
        table = self.index(self._t[U[:, None, :], U[None, :, :]])
        return FiniteGroup(table, name=f"U({self.n},{self.pi.name})", validate=False)


def conj_rows(rows: np.ndarray, X: GSet, action, g: int) -> np.ndarray:
    """``(g u)(y) = g·u(g^-1 y)`` for each row ``u``."""
    G = X.group
    perm = X.act[G.inverse(g)]
    return action.act[g][np.asarray(rows)[:, perm]]


def _expect(cond, message: str, witness=None) -> None:
    if not cond:
        raise VerificationError(message, witness=witness)


# --------------------------------------------------------------------------
# the explicit model of Cat(X~, Π)
# --------------------------------------------------------------------------

class ExplicitModel(FinCat):
    """Objects ``O(X, Π)``; morphisms ``(βσ, α) ∈ U × O`` at index ``u*|O| + o``.

    ``S(βσ, α) = α``, ``T(βσ, α) = β``, ``I(α) = (α, α)`` and
    ``C(γτ, βσ, α) = (γτσ, α)``.
    """

    def __init__(self, maps: PointedMapGroup):
        self.maps = maps
        nO, nU = maps.size_o, maps.size_u
        O = maps.O
        u = np.repeat(np.arange(nU), nO)
        o = np.tile(np.arange(nO), nU)
        self._tgt_of_u = maps.o_index(maps.rep(maps.U))
        U = maps.U
        sig = U[:, maps.x0]
        # right multiplication by each constant, as a permutation of U
        right = np.stack([maps.index(maps.times_const(U, s)) for s in range(maps.base)])

        def compose(f, g):
            return right[sig[g // nO], f // nO] * nO + g % nO

        super().__init__(nO, o, self._tgt_of_u[u], maps.index(O) * nO + np.arange(nO), compose,
                         name=f"M({maps.n},{maps.pi.name})")

    def eta(self, mor) -> np.ndarray:
        """Components ``η(x) = (βσ)(x) α(x)^-1``."""
        mor = np.asarray(mor, dtype=np.int64)
        m = self.maps
        u, a = m.U[mor // self.n_obj], m.O[mor % self.n_obj]
        return m.mul(u, m.inv(a))

    def from_eta(self, eta, src) -> np.ndarray:
        """Morphism with components ``eta`` out of object ``src``."""
        m = self.maps
        u = m.mul(np.asarray(eta), m.O[np.asarray(src)])
        return m.index(u) * self.n_obj + np.asarray(src)


def explicit_model(n: int, pi: FiniteGroup, x0: int = 0) -> ExplicitModel:
    return ExplicitModel(PointedMapGroup(n, pi, x0))


def model_action(model: ExplicitModel, X: GSet, action, validate: bool = True) -> CatGAction:
    """``G`` acting on the model by conjugation of functors ``X~ -> Π``."""
    m = model.maps
    if X.size != m.n:
        raise ContextError("G-set size differs from |X|")
    G = X.group
    mors = np.arange(model.n_mor)
    eta = model.eta(mors)
    src = model.src
    on_obj = np.empty((G.order, model.n_obj), dtype=np.int64)
    on_mor = np.empty((G.order, model.n_mor), dtype=np.int64)
    for g in range(G.order):
        on_obj[g] = m.o_index(m.rep(conj_rows(m.O, X, action, g)))
        on_mor[g] = model.from_eta(conj_rows(eta, X, action, g), on_obj[g][src])
    return CatGAction(G, model, on_obj, on_mor, name="conjugation", validate=validate)


def group_automorphism_action(action) -> CatGAction:
    """``G`` acting on the one-object category of ``Π`` through ``action``."""
    G = action.actor
    return CatGAction(G, group_category(action.target), np.zeros((G.order, 1)), action.act, validate=False)


def model_to_functors(model: ExplicitModel, fc: FunctorCategory) -> Functor:
    """The identification ``α ↦ E_α``, ``(βσ, α) ↦ η`` with ``Cat(X~, Π)``."""
    m = model.maps
    n = m.n
    if fc.A.n_obj != n or fc.B.n_obj != 1 or fc.B.n_mor != m.pi.order:
        raise ContextError("functor category does not match the model")
    ys, xs = np.divmod(np.arange(n * n), n)
    O = m.O
    e_rows = m.mul(O[:, ys], m.inv(O[:, xs]))
    obj = fc.functor_index.lookup(e_rows)
    mors = np.arange(model.n_mor)
    rows = np.concatenate([obj[model.src][:, None], obj[model.tgt][:, None], model.eta(mors)], axis=1)
    mor = fc.nat_index.lookup(rows)
    return Functor(model, fc, obj, mor, name="E")


# --------------------------------------------------------------------------
# μ and the Γ-action on Cat_G(G~, Π~)
# --------------------------------------------------------------------------

def mu(G: FiniteGroup) -> dict:
    """``μ: <G,G> -> G~``, ``μ(h,g) = (hg, g)``, checked to be an isomorphism of right G-categories."""
    from .groups import regular_gset
    n = G.order
    tl = translation(G, regular_gset(G))
    ch = chaotic(n)
    h, g = np.divmod(np.arange(n * n), n)
    t = G.table
    F = Functor(tl, ch, np.arange(n), t[h, g] * n + g, name="mu")
    F.check()
    _expect(F.is_isomorphism(), "μ is not bijective")
    inv = F.inverse()
    y, x = np.divmod(np.arange(n * n), n)
    expected = t[y, np.asarray(G.inv_list)[x]] * n + x
    _expect(np.array_equal(inv.mor_map, expected), "μ^-1(h,g) != (hg^-1, g)")
    # right actions turned left: k acts by right multiplication with k^-1
    ki = np.asarray(G.inv_list)
    obj_act = t[np.arange(n)[None, :], ki[:, None]]
    tl_act = CatGAction(G, tl, obj_act, h[None, :] * n + obj_act[:, g], name="right")
    ch_act = chaotic_action(GSet(G, obj_act, validate=False))
    ch_act = CatGAction(G, ch, ch_act.on_obj, ch_act.on_mor, validate=True)
    for k in range(n):
        _expect(np.array_equal(F.mor_map[tl_act.on_mor[k]], ch_act.on_mor[k][F.mor_map]),
                "μ is not equivariant", witness=k)
    return {"functor": F, "order": n, "morphisms": n * n, "ok": True}


class GammaCategory:
    """``Cat_G(G~, Π~)`` realised as the chaotic category on ``U(G, Π)`` with its Γ-action."""

    def __init__(self, G: FiniteGroup, pi: FiniteGroup, action, bound: int = 1000):
        from .groups import regular_gset, semidirect
        self.maps = PointedMapGroup(G.order, pi, x0=G.identity)
        if self.maps.size_u > bound:
            raise BoundExceeded(f"|U(G,Π)| = {self.maps.size_u} exceeds {bound}")
        self.gamma = semidirect(pi, G, action)
        self.G, self.pi, self.action = G, pi, action
        X = regular_gset(G)
        m = self.maps
        U = m.U
        nG = G.order
        on_u = np.empty((self.gamma.gamma.order, m.size_u), dtype=np.int64)
        self.conj = np.stack([m.index(conj_rows(U, X, action, g)) for g in range(nG)])
        for s in range(pi.order):
            si = pi.inverse(s)
            right = m.index(m.times_const(U, si))
            for g in range(nG):
                # (σ, g)u = (g u) σ^-1
                on_u[self.gamma.pair(s, g)] = right[self.conj[g]]
        self.on_u = on_u
        self.right = np.stack([m.index(m.times_const(U, s)) for s in range(pi.order)])
        self.cat = chaotic(m.size_u, name="Cat(G~,Pi~)")
        ga = GSet(self.gamma.gamma, on_u, validate=False)
        diag = chaotic_action(ga)
        self.act = CatGAction(self.gamma.gamma, self.cat, diag.on_obj, diag.on_mor, name="gamma", validate=False)

    def check_relation(self) -> None:
        """``g(uσ) = (gu)(g·σ)`` elementwise."""
        a = self.action.act
        for g in range(self.G.order):
            for s in range(self.pi.order):
                lhs = self.conj[g][self.right[s]]
                rhs = self.right[a[g, s]][self.conj[g]]
                _expect(np.array_equal(lhs, rhs), "twisted commutation relation fails", witness=(g, s))


def gamma_action(G: FiniteGroup, pi: FiniteGroup, action, bound: int = 1000) -> GammaCategory:
    gc = GammaCategory(G, pi, action, bound)
    gc.check_relation()
    gc.act.check()
    return gc


def verify_fixed_uni(G: FiniteGroup, pi: FiniteGroup, action, bound: int = 1000) -> dict:
    """Λ-fixed category of ``Cat_G(G~,Π~)`` is empty iff ``Λ ∩ Π != e``, else chaotic,
    with the constructive fixed map as a witness object."""
    from .crossed import crossed_from_lambda, fixed_map
    from .groups import subgroups
    gc = gamma_action(G, pi, action, bound)
    gam = gc.gamma
    n_sub = n_free = 0
    for lam in subgroups(gam.gamma, bound=max(gam.gamma.order, 1)):
        n_sub += 1
        fx = fixed_category(gc.cat, gc.act, lam)
        meets = len(lam.as_set() & gam.pi_image) > 1
        if meets:
            _expect(fx.n_obj == 0, "fixed category nonempty although Λ meets Π", witness=lam.members)
            continue
        n_free += 1
        _expect(fx.n_obj > 0 and fx.is_chaotic(), "fixed category empty or not chaotic", witness=lam.members)
        alpha = crossed_from_lambda(lam, gam)
        f = fixed_map(alpha)
        idx = int(gc.maps.index(np.array([f]))[0])
        _expect(fx.obj_pos[idx] >= 0, "constructed fixed map is not Λ-fixed", witness=(lam.members, f))
    return {"subgroups": n_sub, "free": n_free, "ok": True}


def mu_gamma(G: FiniteGroup, pi: FiniteGroup, action, bound: int = 400) -> dict:
    """``μ: <U,U> -> Cat_G(G~,Π~)`` is an isomorphism of Γ-categories."""
    from .groups import regular_gset
    gc = GammaCategory(G, pi, action, bound)
    m = gc.maps
    Ug = m.group()
    nU = m.size_u
    tl = translation(Ug, regular_gset(Ug))
    h, u = np.divmod(np.arange(nU * nU), nU)
    t = Ug.table
    F = Functor(tl, gc.cat, np.arange(nU), t[h, u] * nU + u, name="mu")
    F.check()
    _expect(F.is_isomorphism(), "μ is not bijective")
    # Γ on <U,U>: (σ,g)(h,u) = (g h, (g u) σ^-1), the conjugation being by group automorphisms of U
    gp = gc.gamma
    on_mor = np.empty((gp.gamma.order, nU * nU), dtype=np.int64)
    for x in range(gp.gamma.order):
        s, g = gp.split(x)
        on_mor[x] = gc.conj[g][h] * nU + gc.on_u[x][u]
    tl_act = CatGAction(gp.gamma, tl, gc.on_u, on_mor, name="gamma")
    for x in range(gp.gamma.order):
        _expect(np.array_equal(F.mor_map[tl_act.on_mor[x]], gc.act.on_mor[x][F.mor_map]),
                "μ is not Γ-equivariant", witness=x)
    return {"U": nU, "gamma": gp.gamma.order, "ok": True}


# --------------------------------------------------------------------------
# Theorem: the diagram <U,U> -> Cat(X~,Π~) -> Cat(X~,Π~)/Π -> Cat(X~,Π)
# --------------------------------------------------------------------------

def _right_mult_gset(pi: FiniteGroup) -> GSet:
    """Right multiplication turned left: ``σ·τ = τσ^-1``."""
    t = pi.table
    inv = np.asarray(pi.inv_list)
    return GSet(pi, t[np.arange(pi.order)[None, :], inv[:, None]], validate=False)


def _check_iso(F: Functor, what: str) -> None:
    try:
        F.check()
    except InvariantError as exc:
        raise VerificationError(f"{what} is not a functor: {exc}") from exc
    _expect(F.is_isomorphism(), f"{what} is not an isomorphism")


def verify_notformal(n: int, pi: FiniteGroup, x0: int = 0) -> dict:
    """Build every vertex of the diagram and check μ, ν, ξ are isomorphisms and that it commutes."""
    from .groups import regular_gset
    maps = PointedMapGroup(n, pi, x0)
    nU, nO, npi = maps.size_u, maps.size_o, pi.order
    U = maps.U
    Ug = maps.group()
    UU = translation(Ug, regular_gset(Ug))
    CT = functor_category(chaotic(n), chaotic(npi))
    _expect(CT.is_chaotic(), "Cat(X~, Π~) is not chaotic")
    # right Π-actions, as left actions by σ^-1
    right = _right_mult_gset(pi)
    pi_on_ct = conjugation_action(CT, trivial_cat_action(pi, CT.A), chaotic_action(right, CT.B))
    inv = np.asarray(pi.inv_list)
    rmul = np.stack([maps.index(maps.times_const(U, inv[s])) for s in range(npi)])
    h, u = np.divmod(np.arange(nU * nU), nU)
    pi_on_uu = CatGAction(pi, UU, rmul, h[None, :] * nU + rmul[:, u], name="right")

    # μ(h, u) = (hu, u)
    ys, xs = np.divmod(np.arange(n * n), n)
    f_obj = CT.functor_index.lookup(U[:, ys] * npi + U[:, xs])
    hu = Ug.table[h, u]
    comps = U[hu] * npi + U[u]
    mu_mor = CT.nat_index.lookup(np.concatenate([f_obj[u][:, None], f_obj[hu][:, None], comps], axis=1))
    MU = Functor(UU, CT, f_obj, mu_mor, name="mu")
    _check_iso(MU, "μ")
    for s in range(npi):
        _expect(np.array_equal(MU.mor_map[pi_on_uu.on_mor[s]], pi_on_ct.on_mor[s][MU.mor_map]),
                "μ is not a Π-map", witness=s)

    CTq = orbit_category(CT, pi_on_ct, strict=True)
    P = CTq.quotient()
    UUq = orbit_category(UU, pi_on_uu, strict=True)

    # <U, O>: U acting on O by h·α = rep(h ∗ α)
    o_keys = maps.index(maps.O)
    on_o = maps.o_index(maps.rep(U[Ug.table[:, o_keys].reshape(-1)]))
    UO = translation(Ug, GSet(Ug, on_o.reshape(nU, nO), validate=False))
    UO.check_axioms()
    opos = maps.o_index(maps.rep(U))
    QL = Functor(UU, UO, opos, h * nO + opos[u], name="q")
    QL.check()
    # q on the left is the passage to Π-orbits: it identifies exactly the orbits
    ind = Functor(UUq, UO, QL.obj_map[UUq.obj_rep], QL.mor_map[UUq.mor_rep])
    _check_iso(ind, "<U,U>/Π -> <U,O>")
    _expect(np.array_equal(ind.mor_map[UUq.mor_class], QL.mor_map), "q is not constant on orbits")

    # ν(h, α) = p μ(h, α)
    nu_obj = P.obj_map[MU.obj_map[o_keys]]
    hh, aa = np.divmod(np.arange(nU * nO), nO)
    nu_mor = P.mor_map[MU.mor_map[hh * nU + o_keys[aa]]]
    NU = Functor(UO, CTq, nu_obj, nu_mor, name="nu")
    _check_iso(NU, "ν")
    _expect(QL.then(NU).equals(MU.then(P)), "left trapezoid does not commute")

    # q on the right: Cat(id, p) with p(τ, σ) = τσ^-1
    FB = functor_category(chaotic(n), group_category(pi))
    tau, sig = np.divmod(np.arange(npi * npi), npi)
    p_mor = pi.table[tau, inv[sig]]
    qr_obj = FB.functor_index.lookup(p_mor[CT.functors])
    qr_mor = FB.nat_index.lookup(np.concatenate(
        [qr_obj[CT.src][:, None], qr_obj[CT.tgt][:, None], p_mor[CT.nat]], axis=1))
    QR = Functor(CT, FB, qr_obj, qr_mor, name="q")
    QR.check()
    XI = Functor(CTq, FB, QR.obj_map[CTq.obj_rep], QR.mor_map[CTq.mor_rep], name="xi")
    _expect(P.then(XI).equals(QR), "q is not constant on Π-orbits (triangle fails)")
    _check_iso(XI, "ξ")

    model = ExplicitModel(maps)
    model.check_axioms()
    E = model_to_functors(model, FB)
    _check_iso(E, "explicit model -> Cat(X~, Π)")
    _expect(FB.n_obj == npi ** (n - 1), "object count is not |Π|^(|X|-1)")
    return {"X": n, "Pi": pi.name, "objects": FB.n_obj, "morphisms": FB.n_mor,
            "top_morphisms": UU.n_mor, "ok": True}


# --------------------------------------------------------------------------
# fixed points of Cat_G(G~, Π) and H^1
# --------------------------------------------------------------------------

DEFAULT_DECOMP_BOUND = 10**6


def _conjugate_sets(pi: FiniteGroup, a: Sequence[int], b: Sequence[int]) -> int | None:
    """Some ``τ`` with ``τ a τ^-1 = b`` as sets, or None."""
    target = sorted(b)
    for t in range(pi.order):
        if sorted(pi.conj(t, x) for x in a) == target:
            return t
    return None


def _anti_fixed_rows(maps: PointedMapGroup, X: GSet, action, gens: Sequence[int]) -> np.ndarray:
    """Rows of ``O`` fixed by every ``g`` in ``gens`` under ``(gα) = rep(g·α(g^-1 -))``."""
    O = maps.O
    keep = np.ones(len(O), dtype=bool)
    for g in gens:
        moved = maps.rep(conj_rows(O, X, action, g))
        keep &= np.all(moved == O, axis=1)
    return O[keep]


def fixed_decomposition(G: FiniteGroup, pi: FiniteGroup, action, H: Subgroup | None = None,
                        bound: int = DEFAULT_DECOMP_BOUND, ghfix: bool = True) -> dict:
    """Components and vertex groups of ``Cat_G(G~, Π)^H`` matched against ``H^1(H; Π_H)``.

    Objects are the ``H``-fixed maps ``α ∈ O(G, Π)``.  A fixed morphism out of
    ``α`` is an ``H``-equivariant ``η: G -> Π`` (``η(hx) = h·η(x)``), with target
    ``η ∗ α ∗ η(e)^-1``; components are computed as orbits of the group of such
    ``η`` and vertex groups as ``{σ : α0 σ α0^-1 is H-equivariant}``.
    """
    from .crossed import CrossedAntiHom, h1, iso_witnesses, unbar
    from .groups import regular_gset
    H = G.whole() if H is None else H
    if H.parent is not G:
        raise ContextError("H is not a subgroup of G")
    if pi.order ** G.order > bound:
        raise BoundExceeded(f"|Π|^|G| = {pi.order}^{G.order} exceeds {bound}")
    maps = PointedMapGroup(G.order, pi, x0=G.identity, bound=bound)
    X = regular_gset(G)
    hgens = H.generators()
    fixed = _anti_fixed_rows(maps, X, action, hgens)
    nfix = len(fixed)
    keys = maps.index(fixed)
    table = h1(G, pi, action, H)
    reps = H.right_coset_reps()
    _expect(nfix == table.total * pi.order ** (len(reps) - 1),
            "fixed object count differs from |Z^1(H)|·|Π|^([G:H]-1)", witness=(nfix, table.total))

    def pos(rows):
        k = maps.index(rows)
        p = np.minimum(np.searchsorted(keys, k), nfix - 1)
        if np.any(keys[p] != k):
            raise VerificationError("target of a fixed morphism is not a fixed object")
        return p

    # generators of the group of H-equivariant η: value π at one coset rep, e elsewhere
    hm = H.members
    act = action.act
    eta_gens = []
    for r in reps:
        for p in pi.generators():
            eta = np.full(G.order, pi.identity, dtype=np.int64)
            for h in hm:
                eta[G.mul(h, r)] = act[h, p]
            eta_gens.append(eta)
    e = G.identity
    rows_i, rows_j = [], []
    for eta in eta_gens:
        # β = η ∗ α ∗ η(e)^-1
        beta = maps.times_const(maps.mul(eta[None, :], fixed), pi.inverse(int(eta[e])))
        rows_i.append(np.arange(nfix))
        rows_j.append(pos(beta))
    if rows_i:
        adj = coo_matrix((np.ones(nfix * len(rows_i)), (np.concatenate(rows_i), np.concatenate(rows_j))),
                         shape=(nfix, nfix))
        ncomp, lab = connected_components(adj, directed=False)
    else:
        ncomp, lab = nfix, np.arange(nfix)
    lab = _orbit_relabel(lab)

    # class of unbar(α|_H) for every fixed object
    hpos = {h: i for i, h in enumerate(hm)}
    cols = list(hm)
    member_class = {}
    for k, c in enumerate(table.classes):
        for a in c.members:
            member_class[a.values] = k
    inv_h = [hpos[G.inverse(h)] for h in hm]
    restricted = fixed[:, cols]
    crossed_rows = np.stack([act[h][restricted[:, inv_h[i]]] for i, h in enumerate(hm)], axis=1)
    cls = np.array([member_class.get(tuple(r), -1) for r in crossed_rows.tolist()], dtype=np.int64)
    _expect(np.all(cls >= 0), "restriction of a fixed object is not a crossed anti-homomorphism")
    first = np.full(ncomp, -1, dtype=np.int64)
    first[lab[::-1]] = np.arange(nfix)[::-1]
    comp_class = cls[first]
    _expect(np.array_equal(cls, comp_class[lab]), "a component meets two H^1 classes")
    _expect(sorted(comp_class.tolist()) == list(range(len(table))),
            "components do not biject with H^1 classes", witness=comp_class.tolist())

    comps = []
    for c in range(ncomp):
        a0 = fixed[first[c]]
        sig = np.arange(pi.order)
        eta = maps.mul(maps.mul(np.broadcast_to(a0, (pi.order, G.order)), sig[:, None]), maps.inv(a0)[None, :])
        ok = np.ones(pi.order, dtype=bool)
        for h in hgens:
            ok &= np.all(conj_rows(eta, X, action, h) == eta, axis=1)
        vertex = np.flatnonzero(ok).tolist()
        anti = CrossedAntiHom(H, action, a0[cols].tolist())
        gamma0 = unbar(anti)
        k = int(comp_class[c])
        rep = table.classes[k].representative
        aut = table.classes[k].aut.members
        _expect(set(vertex) == set(iso_witnesses(gamma0, gamma0)),
                "vertex group differs from the crossed centralizer", witness=(c, vertex))
        tau = iso_witnesses(rep, gamma0)[0]
        _expect(sorted(pi.conj(tau, s) for s in aut) == sorted(vertex),
                "vertex group is not conjugate to Π^α", witness=(c, tau))
        comps.append({"object": a0.tolist(), "size": int(np.sum(lab == c)), "vertex_group": vertex,
                      "h1_class": k, "aut_order": len(aut)})

    # ι: Π^H -> Cat^H is an equivalence iff there is one component
    eps = int(np.searchsorted(keys, maps.index(maps.const(pi.identity)[None, :])[0]))
    eps_vertex = comps[int(lab[eps])]["vertex_group"]
    fixed_pi = [s for s in range(pi.order) if all(act[h, s] == s for h in hm)]
    _expect(sorted(eps_vertex) == fixed_pi, "Aut(ε) differs from Π^H")
    iota_equiv = ncomp == 1
    _expect(iota_equiv == (len(table) == 1), "ι equivalence criterion fails")

    report = {"G": G.name, "Pi": pi.name, "action": action.name, "H": list(hm),
              "objects": nfix, "components": ncomp, "h1": len(table), "classes": comps,
              "iota_equivalence": iota_equiv, "ok": True}
    if ghfix and H.order < G.order:
        report["ghfix"] = _ghfix(G, pi, action, H, table, comps, bound)
    return report


def _ghfix(G, pi, action, H, table, comps, bound) -> dict:
    """``Cat_G(G~,Π)^H ≃ Cat_H(H~,Π)^H``: equal class counts, conjugate vertex groups per class."""
    from .crossed import CrossedHom, h1
    from .groups import GroupAction
    hg, emb = H.as_group()
    res = GroupAction(hg, pi, action.act[emb], validate=False, name=action.name)
    small = fixed_decomposition(hg, pi, res, None, bound=bound, ghfix=False)
    _expect(small["components"] == len(comps), "class counts differ between G~ and H~",
            witness=(small["components"], len(comps)))
    small_table = h1(hg, pi, res)
    by_class = {c["h1_class"]: c for c in small["classes"]}
    for c in comps:
        rep = table.classes[c["h1_class"]].representative
        moved = CrossedHom(hg.whole(), res, [rep(emb[x]) for x in range(hg.order)])
        other = by_class[small_table.class_of(moved)]
        _expect(_conjugate_sets(pi, other["vertex_group"], c["vertex_group"]) is not None,
                "vertex groups not isomorphic across G~ and H~", witness=c["h1_class"])
    return {"components": small["components"], "ok": True}


def generic_conjugation(G: FiniteGroup, pi: FiniteGroup, action, bound: int = 2 * 10**5) -> CatGAction:
    """``G`` acting by conjugation on the brute-force ``Cat(G~, BΠ)``; independent of ``H``."""
    from .groups import regular_gset
    if pi.order ** (2 * G.order - 1) > bound:
        raise BoundExceeded("functor category too large for the generic route")
    A = chaotic(G.order)
    fc = functor_category(A, group_category(pi))
    act_a = chaotic_action(regular_gset(G), A)
    bact = group_automorphism_action(action)
    act_b = CatGAction(G, fc.B, bact.on_obj, bact.on_mor, validate=False)
    return conjugation_action(fc, act_a, act_b)


def fixed_decomposition_generic(G: FiniteGroup, pi: FiniteGroup, action, H: Subgroup | None = None,
                                bound: int = 2 * 10**5, conj: CatGAction | None = None) -> dict:
    """Same decomposition computed from the brute-force functor category and its fixed subcategory.

    Pass ``conj`` from :func:`generic_conjugation` to reuse it across subgroups.
    """
    H = G.whole() if H is None else H
    if conj is None:
        conj = generic_conjugation(G, pi, action, bound)
    elif conj.group is not G:
        raise ContextError("conjugation action is for another group")
    fc = conj.cat
    fx = fixed_category(fc, conj, H)
    _expect(fx.is_groupoid(), "fixed category is not a groupoid")
    ncomp, lab = fx.components()
    n = G.order
    x0 = G.identity
    # α(x) = E(x, x0)
    alphas = fc.functors[fx.obj_index][:, np.arange(n) * n + x0]
    classes = []
    for c in range(ncomp):
        obj = int(np.flatnonzero(lab == c)[0])
        grp, mors = fx.vertex_group(obj)
        sig = fc.nat[fx.mor_index[mors], x0]
        classes.append({"object": alphas[obj].tolist(), "size": int(np.sum(lab == c)),
                        "vertex_group": sorted(sig.tolist()), "group": grp})
    return {"objects": fx.n_obj, "morphisms": fx.n_mor, "components": ncomp, "classes": classes,
            "fixed": fx, "alphas": alphas, "labels": lab, "nat": fc.nat, "ok": True}


def cross_check_decomposition(G: FiniteGroup, pi: FiniteGroup, action, H: Subgroup | None = None,
                              conj: CatGAction | None = None) -> dict:
    """Both routes must give the same objects, the same component partition and,
    at each explicit canonical object, the same vertex group."""
    ex = fixed_decomposition(G, pi, action, H, ghfix=False)
    ge = fixed_decomposition_generic(G, pi, action, H, conj=conj)
    _expect(ex["objects"] == ge["objects"], "fixed object counts differ", witness=(ex["objects"], ge["objects"]))
    _expect(ex["components"] == ge["components"], "component counts differ")
    where = {tuple(a): i for i, a in enumerate(ge["alphas"].tolist())}
    fx, lab = ge["fixed"], ge["labels"]
    sizes = np.bincount(lab, minlength=ge["components"])
    for c in ex["classes"]:
        i = where.get(tuple(c["object"]))
        _expect(i is not None, "explicit object missing from the generic fixed category", witness=c["object"])
        _expect(sizes[lab[i]] == c["size"], "component sizes differ", witness=c["object"])
        _, mors = fx.vertex_group(i)
        sig = sorted(ge["nat"][fx.mor_index[mors], G.identity].tolist())
        _expect(sig == sorted(c["vertex_group"]), "vertex groups differ", witness=c["object"])
    return {"objects": ex["objects"], "components": ex["components"], "ok": True}
