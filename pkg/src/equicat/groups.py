"""Finite groups as Cayley tables.

Elements are the integers ``0..n-1``; ``table[a, b]`` is the index of ``ab``.
Everything here is brute force and meant for groups of order at most a few
hundred.
"""

from __future__ import annotations

import itertools
import math
import os
import re
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import BoundExceeded, ContextError, InvariantError

DEFAULT_MAX_SUBGROUP_ORDER = 120


class FiniteGroup:
    """A finite group given by its multiplication table.

    Instances compare by identity; two tables describing isomorphic groups are
    different objects.
    """

    def __init__(self, table, labels: Sequence[str] | None = None, name: str = "",
                 validate: bool = True):
        table = np.asarray(table, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise InvariantError("group table must be a non-empty square array")
        n = table.shape[0]
        if table.min() < 0 or table.max() >= n:
            raise InvariantError("table entries out of range")
        self.table = table
        self.table.setflags(write=False)
        self.order = n
        self.name = name
        self.labels = list(labels) if labels is not None else None
        self.rows: list[list[int]] = table.tolist()

        ar = np.arange(n)
        ids = [e for e in range(n) if np.array_equal(table[e], ar) and np.array_equal(table[:, e], ar)]
        if not ids:
            raise InvariantError("no two-sided identity")
        self.identity = ids[0]
        inv = np.full(n, -1, dtype=np.int64)
        for a in range(n):
            hits = np.nonzero(table[a] == self.identity)[0]
            if len(hits) != 1:
                raise InvariantError(f"element {a} has no unique right inverse")
            inv[a] = hits[0]
        self.inv = inv
        self.inv.setflags(write=False)
        self.inv_list: list[int] = inv.tolist()
        if validate:
            self.check_axioms()
        self._gens: list[int] | None = None

    # -- basic arithmetic -------------------------------------------------
    def __len__(self):
        return self.order

    def __repr__(self):
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    def mul(self, a: int, b: int) -> int:
        return self.rows[a][b]

    def inverse(self, a: int) -> int:
        return self.inv_list[a]

    def prod(self, elems: Iterable[int]) -> int:
        out = self.identity
        for x in elems:
            out = self.rows[out][x]
        return out

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv_list[a], -k
        out = self.identity
        for _ in range(k):
            out = self.rows[out][a]
        return out

    def conj(self, x: int, a: int) -> int:
        """``x a x^-1``."""
        return self.rows[self.rows[x][a]][self.inv_list[x]]

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.rows[x][a]
            k += 1
        return k

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)

    def elements(self) -> range:
        return range(self.order)

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def check_axioms(self) -> None:
        t = self.table
        # (ab)c == a(bc) for all triples, one row of a at a time
        for a in range(self.order):
            left = t[t[a]]          # left[b, c] = (ab)c
            right = t[a][t]         # right[b, c] = a(bc)
            if not np.array_equal(left, right):
                b, c = map(int, np.argwhere(left != right)[0])
                raise InvariantError(f"associativity fails at {(a, b, c)}")
        e = self.identity
        if not (np.all(t[np.arange(self.order), self.inv] == e)
                and np.all(t[self.inv, np.arange(self.order)] == e)):
            raise InvariantError("inverse table is not two-sided")

    # -- structure ---------------------------------------------------------
    def generators(self) -> list[int]:
        """A small generating set, picked greedily by decreasing element order."""
        if self._gens is None:
            by_order = sorted(range(self.order), key=lambda a: (-self.element_order(a), a))
            gens: list[int] = []
            span = {self.identity}
            for a in by_order:
                if len(span) == self.order:
                    break
                if a not in span:
                    gens.append(a)
                    span = set(closure(self, gens))
            self._gens = gens
        return list(self._gens)

    def conjugacy_classes(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        out = []
        for a in range(self.order):
            if a in seen:
                continue
            cls = tuple(sorted({self.conj(x, a) for x in range(self.order)}))
            seen.update(cls)
            out.append(cls)
        return out

    def centralizer_of(self, a: int) -> "Subgroup":
        return Subgroup(self, [x for x in range(self.order) if self.rows[x][a] == self.rows[a][x]])

    def center(self) -> "Subgroup":
        t = self.table
        return Subgroup(self, [a for a in range(self.order) if np.array_equal(t[a], t[:, a])])

    def whole(self) -> "Subgroup":
        return Subgroup(self, range(self.order))

    def trivial(self) -> "Subgroup":
        return Subgroup(self, [self.identity])

    def commutator_subgroup(self) -> "Subgroup":
        comms = {self.prod([a, b, self.inv_list[a], self.inv_list[b]])
                 for a in range(self.order) for b in range(self.order)}
        return Subgroup(self, closure(self, sorted(comms)))


def closure(g: FiniteGroup, gens: Iterable[int], forbidden: set[int] | None = None) -> list[int] | None:
    """Elements of the subgroup generated by ``gens`` (sorted).

    With ``forbidden`` given, returns ``None`` as soon as the closure meets it.
    """
    rows = g.rows
    gens = list(dict.fromkeys(gens))
    seen = {g.identity}
    queue = deque([g.identity])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = rows[x][s]
            if y not in seen:
                if forbidden is not None and y in forbidden:
                    return None
                seen.add(y)
                queue.append(y)
    return sorted(seen)


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    members: tuple[int, ...]

    def __init__(self, parent: FiniteGroup, members: Iterable[int], check: bool = True):
        mem = tuple(sorted(set(int(m) for m in members)))
        object.__setattr__(self, "parent", parent)
        object.__setattr__(self, "members", mem)
        object.__setattr__(self, "_set", frozenset(mem))
        if check:
            rows, inv = parent.rows, parent.inv_list
            s = self._set
            if parent.identity not in s:
                raise InvariantError("subgroup must contain the identity")
            for a in mem:
                if inv[a] not in s or any(rows[a][b] not in s for b in mem):
                    raise InvariantError("member list is not closed under product/inverse")

    def __eq__(self, other):
        return isinstance(other, Subgroup) and other.parent is self.parent and other.members == self.members

    def __hash__(self):
        return hash((id(self.parent), self.members))

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, a):
        return a in self._set

    def __repr__(self):
        return f"Subgroup(order={len(self.members)}, members={list(self.members)})"

    @property
    def order(self) -> int:
        return len(self.members)

    def as_set(self) -> frozenset[int]:
        return self._set

    def is_subgroup_of(self, other: "Subgroup") -> bool:
        return self.parent is other.parent and self._set <= other._set

    def is_normal(self) -> bool:
        g = self.parent
        return all(g.conj(x, a) in self._set for x in g.generators() for a in self.members)

    def conjugate(self, x: int) -> "Subgroup":
        g = self.parent
        return Subgroup(g, (g.conj(x, a) for a in self.members), check=False)

    def generators(self) -> list[int]:
        g = self.parent
        gens: list[int] = []
        span = {g.identity}
        for a in sorted(self.members, key=lambda a: (-g.element_order(a), a)):
            if len(span) == len(self.members):
                break
            if a not in span:
                gens.append(a)
                span = set(closure(g, gens))
        return gens

    def as_group(self) -> tuple[FiniteGroup, list[int]]:
        """The subgroup as a standalone group plus the embedding (new index -> old)."""
        mem = list(self.members)
        pos = {a: i for i, a in enumerate(mem)}
        rows = self.parent.rows
        table = [[pos[rows[a][b]] for b in mem] for a in mem]
        labels = [self.parent.label(a) for a in mem]
        return FiniteGroup(table, labels=labels, name=f"sub({self.parent.name})", validate=False), mem

    def right_coset_reps(self) -> list[int]:
        """Least element of each right coset ``H g`` (sorted)."""
        g = self.parent
        seen: set[int] = set()
        reps = []
        for x in range(g.order):
            if x in seen:
                continue
            reps.append(x)
            seen.update(g.rows[h][x] for h in self.members)
        return reps

    def left_coset_reps(self) -> list[int]:
        g = self.parent
        seen: set[int] = set()
        reps = []
        for x in range(g.order):
            if x in seen:
                continue
            reps.append(x)
            seen.update(g.rows[x][h] for h in self.members)
        return reps


def subgroup_generated(g: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    return Subgroup(g, closure(g, gens), check=False)


# --------------------------------------------------------------------------
# homomorphisms and actions
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GroupHom:
    dom: FiniteGroup
    cod: FiniteGroup
    map: tuple[int, ...]

    def __init__(self, dom: FiniteGroup, cod: FiniteGroup, mapping: Sequence[int], check: bool = True):
        object.__setattr__(self, "dom", dom)
        object.__setattr__(self, "cod", cod)
        object.__setattr__(self, "map", tuple(int(x) for x in mapping))
        if len(self.map) != dom.order:
            raise InvariantError("map length must equal the domain order")
        if check:
            m = np.asarray(self.map)
            if m[dom.identity] != cod.identity or not np.array_equal(m[dom.table], cod.table[m[:, None], m[None, :]]):
                raise InvariantError("map is not a homomorphism")

    def __call__(self, a: int) -> int:
        return self.map[a]

    def __eq__(self, other):
        return isinstance(other, GroupHom) and self.dom is other.dom and self.cod is other.cod and self.map == other.map

    def __hash__(self):
        return hash(self.map)

    def kernel(self) -> Subgroup:
        return Subgroup(self.dom, [a for a in range(self.dom.order) if self.map[a] == self.cod.identity], check=False)

    def image(self) -> Subgroup:
        return Subgroup(self.cod, set(self.map), check=False)

    def is_bijective(self) -> bool:
        return len(set(self.map)) == self.cod.order == self.dom.order

    def compose(self, other: "GroupHom") -> "GroupHom":
        """``self ∘ other``."""
        if other.cod is not self.dom:
            raise ContextError("homomorphisms are not composable")
        return GroupHom(other.dom, self.cod, [self.map[x] for x in other.map], check=False)


def _extend_by_generators(g: FiniteGroup, gens: Sequence[int], images: Sequence[int],
                          step: Callable[[int, int, int], int], start: int) -> list[int] | None:
    """Breadth-first extension of generator images along the Cayley graph.

    ``step(x, value_at_x, s)`` returns the value at ``x*s``; returns ``None`` on
    an inconsistency, else the full value list.
    """
    rows = g.rows
    val = [-1] * g.order
    val[g.identity] = start
    queue = deque([g.identity])
    while queue:
        x = queue.popleft()
        vx = val[x]
        for s, img in zip(gens, images):
            y = rows[x][s]
            v = step(x, vx, img)
            if val[y] == -1:
                val[y] = v
                queue.append(y)
            elif val[y] != v:
                return None
    return val


def homomorphisms(dom: FiniteGroup, cod: FiniteGroup, bound: int = 10**7,
                  candidates: Callable[[int], Iterable[int]] | None = None) -> list[GroupHom]:
    """All homomorphisms ``dom -> cod`` by generator-image search."""
    gens = dom.generators()
    if cod.order ** len(gens) > bound:
        raise BoundExceeded(f"{cod.order}^{len(gens)} generator images exceed bound {bound}")
    crow = cod.rows
    pools = []
    for s in gens:
        k = dom.element_order(s)
        pool = [c for c in (candidates(s) if candidates else range(cod.order)) if k % cod.element_order(c) == 0]
        pools.append(pool)
    out = []
    for imgs in itertools.product(*pools):
        val = _extend_by_generators(dom, gens, imgs, lambda x, vx, img: crow[vx][img], cod.identity)
        if val is not None:
            out.append(GroupHom(dom, cod, val, check=False))
    out.sort(key=lambda h: h.map)
    return out


def find_isomorphism(a: FiniteGroup, b: FiniteGroup) -> GroupHom | None:
    """Bounded backtracking on generator images; ``None`` if not isomorphic."""
    if a.order != b.order:
        return None
    if sorted(a.element_order(x) for x in range(a.order)) != sorted(b.element_order(x) for x in range(b.order)):
        return None
    gens = a.generators()
    pools = [[c for c in range(b.order) if b.element_order(c) == a.element_order(s)] for s in gens]
    brow = b.rows
    for imgs in itertools.product(*pools):
        val = _extend_by_generators(a, gens, imgs, lambda x, vx, img: brow[vx][img], b.identity)
        if val is not None and len(set(val)) == b.order:
            return GroupHom(a, b, val, check=False)
    return None


def is_isomorphic(a: FiniteGroup, b: FiniteGroup) -> bool:
    return find_isomorphism(a, b) is not None


def automorphisms(pi: FiniteGroup) -> list[tuple[int, ...]]:
    """All automorphisms of ``pi`` as permutation tuples, sorted."""
    gens = pi.generators()
    pools = [[c for c in range(pi.order) if pi.element_order(c) == pi.element_order(s)] for s in gens]
    rows = pi.rows
    out = []
    for imgs in itertools.product(*pools):
        val = _extend_by_generators(pi, gens, imgs, lambda x, vx, img: rows[vx][img], pi.identity)
        if val is not None and len(set(val)) == pi.order:
            out.append(tuple(val))
    out.sort()
    return out


def permutation_group(perms: Sequence[Sequence[int]], name: str = "") -> FiniteGroup:
    """Group of the given permutations (assumed closed); product ``(p q)(i) = p(q(i))``."""
    perms = [tuple(p) for p in perms]
    pos = {p: i for i, p in enumerate(perms)}
    table = [[pos[tuple(p[i] for i in q)] for q in perms] for p in perms]
    return FiniteGroup(table, labels=[str(list(p)) for p in perms], name=name)


class GroupAction:
    """Left action of ``actor`` on the group ``target`` by automorphisms.

    ``act[g, s]`` is ``g·s``.
    """

    def __init__(self, actor: FiniteGroup, target: FiniteGroup, act, validate: bool = True, name: str = ""):
        self.actor = actor
        self.target = target
        self.act = np.asarray(act, dtype=np.int64)
        self.act.setflags(write=False)
        self.rows: list[list[int]] = self.act.tolist()
        self.name = name
        if self.act.shape != (actor.order, target.order):
            raise InvariantError("action array has the wrong shape")
        if validate:
            self.check()

    def __repr__(self):
        return f"GroupAction({self.actor.name}->{self.target.name}{', ' + self.name if self.name else ''})"

    def __call__(self, g: int, s: int) -> int:
        return self.rows[g][s]

    def check(self) -> None:
        t, a = self.target.table, self.act
        ar = np.arange(self.target.order)
        for g in range(self.actor.order):
            perm = a[g]
            if len(set(perm.tolist())) != self.target.order:
                raise InvariantError(f"act[{g}] is not a bijection")
            if not np.array_equal(perm[t], t[perm[:, None], perm[None, :]]):
                raise InvariantError(f"act[{g}] is not a group automorphism")
        if not np.array_equal(a[self.actor.identity], ar):
            raise InvariantError("identity does not act trivially")
        gt = self.actor.table
        for g in range(self.actor.order):
            for h in range(self.actor.order):
                if not np.array_equal(a[gt[g, h]], a[g][a[h]]):
                    raise InvariantError(f"act is not a homomorphism at {(g, h)}")

    def is_trivial(self) -> bool:
        return bool(np.all(self.act == np.arange(self.target.order)[None, :]))

    def key(self) -> tuple:
        return tuple(self.act.ravel().tolist())


def trivial_action(actor: FiniteGroup, target: FiniteGroup) -> GroupAction:
    return GroupAction(actor, target, np.tile(np.arange(target.order), (actor.order, 1)),
                       validate=False, name="trivial")


def automorphism_actions(g: FiniteGroup, pi: FiniteGroup, bound: int = 10**7) -> list[GroupAction]:
    """Every homomorphism ``g -> Aut(pi)`` as a :class:`GroupAction`, sorted by table."""
    auts = automorphisms(pi)
    if len(auts) ** len(g.generators()) > bound:
        raise BoundExceeded("too many candidate actions")
    aut_group = permutation_group(auts, name=f"Aut({pi.name})")
    homs = homomorphisms(g, aut_group, bound=bound)
    seen = {}
    for h in homs:
        act = [auts[h.map[x]] for x in range(g.order)]
        key = tuple(itertools.chain.from_iterable(act))
        seen.setdefault(key, act)
    out = []
    for key in sorted(seen):
        act = seen[key]
        ga = GroupAction(g, pi, act, validate=False)
        if ga.is_trivial():
            ga.name = "trivial"
        out.append(ga)
    return out


# --------------------------------------------------------------------------
# subgroup enumeration
# --------------------------------------------------------------------------

def _max_order_default() -> int:
    return int(os.environ.get("EQUICAT_MAX_GAMMA", DEFAULT_MAX_SUBGROUP_ORDER))


def subgroups(g: FiniteGroup, bound: int | None = None,
              avoid: Iterable[int] | None = None) -> list[Subgroup]:
    """All subgroups of ``g`` ordered lexicographically by member list.

    Built by joining cyclic subgroups until nothing new appears. With ``avoid``
    only subgroups meeting ``avoid`` trivially are produced; that family is
    closed under taking subgroups, so the join search stays complete.
    """
    bound = _max_order_default() if bound is None else bound
    if g.order > bound:
        raise BoundExceeded(f"|G|={g.order} exceeds subgroup-enumeration bound {bound}")
    forbidden = None
    if avoid is not None:
        forbidden = set(avoid) - {g.identity}
    cyclic: dict[tuple[int, ...], int] = {}
    for a in range(g.order):
        if forbidden is not None and a in forbidden:
            continue
        c = closure(g, [a], forbidden)
        if c is not None:
            cyclic.setdefault(tuple(c), a)
    found: dict[tuple[int, ...], list[int]] = {(g.identity,): []}
    for mem, a in cyclic.items():
        found.setdefault(mem, [a])
    frontier = list(found.items())
    cyc_items = sorted(cyclic.items())
    while frontier:
        new = []
        for mem, gens in frontier:
            s = set(mem)
            for cmem, a in cyc_items:
                if a in s:
                    continue
                j = closure(g, gens + [a], forbidden)
                if j is None:
                    continue
                key = tuple(j)
                if key not in found:
                    found[key] = gens + [a]
                    new.append((key, gens + [a]))
        frontier = new
    return [Subgroup(g, mem, check=False) for mem in sorted(found)]


def subgroup_classes(g: FiniteGroup, subs: Sequence[Subgroup] | None = None) -> list[list[Subgroup]]:
    """Conjugacy classes of subgroups, each sorted, classes ordered by first member."""
    subs = subgroups(g) if subs is None else subs
    index = {s.members: i for i, s in enumerate(subs)}
    seen = [False] * len(subs)
    out = []
    for i, s in enumerate(subs):
        if seen[i]:
            continue
        cls = set()
        for x in range(g.order):
            j = index[s.conjugate(x).members]
            cls.add(j)
            seen[j] = True
        out.append([subs[j] for j in sorted(cls)])
    return out


def normalizer(g: FiniteGroup, s: Subgroup) -> Subgroup:
    """``{x : x s x^-1 = s}``."""
    if s.parent is not g:
        raise ContextError("subgroup does not belong to this group")
    mem = s.as_set()
    return Subgroup(g, [x for x in range(g.order) if all(g.conj(x, a) in mem for a in s.members)], check=False)


# --------------------------------------------------------------------------
# semidirect products
# --------------------------------------------------------------------------

class SemidirectProduct:
    """``Γ = Π ⋊ G`` on pairs ``(σ, g)`` stored at index ``σ*|G| + g``.

    Product: ``(σ, g)(τ, h) = (σ (g·τ), gh)``.
    """

    def __init__(self, pi: FiniteGroup, g: FiniteGroup, action: GroupAction):
        if action.actor is not g or action.target is not pi:
            raise ContextError("action does not match the factors")
        self.pi, self.g, self.action = pi, g, action
        n, m = pi.order, g.order
        prow, grow, arow = pi.rows, g.rows, action.rows
        table = [[0] * (n * m) for _ in range(n * m)]
        for s in range(n):
            for a in range(m):
                row = table[s * m + a]
                ar = arow[a]
                for t in range(n):
                    st = prow[s][ar[t]] * m
                    for b in range(m):
                        row[t * m + b] = st + grow[a][b]
        labels = [f"({pi.label(s)},{g.label(a)})" for s in range(n) for a in range(m)]
        self.gamma = FiniteGroup(table, labels=labels, name=f"{pi.name}x|{g.name}", validate=False)
        self.proj = GroupHom(self.gamma, g, [x % m for x in range(n * m)], check=False)
        self.incl_pi = GroupHom(pi, self.gamma, [s * m + g.identity for s in range(n)], check=False)
        self.incl_g = GroupHom(g, self.gamma, [pi.identity * m + a for a in range(m)], check=False)
        self.pi_image = frozenset(self.incl_pi.map)

    def __repr__(self):
        return f"SemidirectProduct({self.pi.name} x| {self.g.name}, order={self.gamma.order})"

    def pair(self, s: int, a: int) -> int:
        return s * self.g.order + a

    def split(self, x: int) -> tuple[int, int]:
        return divmod(x, self.g.order)

    def pi_subgroup(self) -> Subgroup:
        return Subgroup(self.gamma, self.pi_image, check=False)

    def check(self) -> None:
        self.gamma.check_axioms()
        GroupHom(self.gamma, self.g, self.proj.map)
        GroupHom(self.pi, self.gamma, self.incl_pi.map)
        GroupHom(self.g, self.gamma, self.incl_g.map)
        if any(self.proj(self.incl_g(a)) != a for a in range(self.g.order)):
            raise InvariantError("projection does not split the inclusion of G")
        if set(self.proj.kernel().members) != set(self.pi_image):
            raise InvariantError("kernel of the projection is not Π")


def semidirect(pi: FiniteGroup, g: FiniteGroup, action: GroupAction | None = None) -> SemidirectProduct:
    if action is None:
        action = trivial_action(g, pi)
    return SemidirectProduct(pi, g, action)


def pi_conjugacy_classes(gamma: SemidirectProduct, candidates: Sequence[Subgroup]) -> list[list[Subgroup]]:
    """Partition ``candidates`` under conjugation by elements of ``Π`` only.

    Classes keep the input order of their members and are ordered by first
    appearance. Conjugates falling outside ``candidates`` are ignored.
    """
    G = gamma.gamma
    index = {}
    for i, c in enumerate(candidates):
        if c.parent is not G:
            raise ContextError("candidate is not a subgroup of Γ")
        index[c.members] = i
    parent = list(range(len(candidates)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, c in enumerate(candidates):
        for s in gamma.incl_pi.map:
            j = index.get(c.conjugate(s).members)
            if j is not None:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[Subgroup]] = {}
    for i, c in enumerate(candidates):
        groups.setdefault(find(i), []).append(c)
    return [groups[k] for k in sorted(groups)]


# --------------------------------------------------------------------------
# named groups
# --------------------------------------------------------------------------

def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("cyclic group needs n >= 1")
    a = np.arange(n)
    return FiniteGroup((a[:, None] + a[None, :]) % n, labels=[str(i) for i in range(n)], name=f"C{n}")


def symmetric(n: int) -> FiniteGroup:
    perms = list(itertools.permutations(range(n)))
    g = permutation_group(perms, name=f"S{n}")
    return g


def _parity(p) -> int:
    p = list(p)
    sign = 0
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign ^= 1
    return sign


def alternating(n: int) -> FiniteGroup:
    perms = [p for p in itertools.permutations(range(n)) if _parity(p) == 0]
    return permutation_group(perms, name=f"A{n}")


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order ``2n``; element ``r^k s^f`` at ``f*n + k``."""
    if n < 1:
        raise ValueError("dihedral group needs n >= 1")
    m = 2 * n
    table = np.zeros((m, m), dtype=np.int64)
    for x in range(m):
        f1, k1 = divmod(x, n)
        for y in range(m):
            f2, k2 = divmod(y, n)
            k = (k1 + (k2 if f1 == 0 else -k2)) % n
            table[x, y] = ((f1 ^ f2) * n) + k
    labels = [("s" if f else "") + (f"r{k}" if k else ("" if f else "e")) for f in range(2) for k in range(n)]
    return FiniteGroup(table, labels=labels, name=f"D{n}")


def quaternion() -> FiniteGroup:
    # elements ±1, ±i, ±j, ±k at index 2*u + sign, u in (1, i, j, k)
    mult = {(0, 0): (0, 1), (0, 1): (1, 1), (0, 2): (2, 1), (0, 3): (3, 1),
            (1, 0): (1, 1), (1, 1): (0, -1), (1, 2): (3, 1), (1, 3): (2, -1),
            (2, 0): (2, 1), (2, 1): (3, -1), (2, 2): (0, -1), (2, 3): (1, 1),
            (3, 0): (3, 1), (3, 1): (2, 1), (3, 2): (1, -1), (3, 3): (0, -1)}
    table = np.zeros((8, 8), dtype=np.int64)
    for x in range(8):
        u, sx = divmod(x, 2)
        for y in range(8):
            v, sy = divmod(y, 2)
            w, s = mult[(u, v)]
            neg = (sx + sy + (1 if s < 0 else 0)) % 2
            table[x, y] = 2 * w + neg
    labels = [("-" if s else "") + u for u in ("1", "i", "j", "k") for s in (0, 1)]
    return FiniteGroup(table, labels=labels, name="Q8")


def direct_product(a: FiniteGroup, b: FiniteGroup) -> FiniteGroup:
    """Pairs ``(x, y)`` at index ``x*|b| + y``."""
    n, m = a.order, b.order
    ta, tb = a.table, b.table
    table = (ta[:, None, :, None] * m + tb[None, :, None, :]).reshape(n * m, n * m)
    labels = [f"({a.label(x)},{b.label(y)})" for x in range(n) for y in range(m)]
    return FiniteGroup(table, labels=labels, name=f"{a.name}x{b.name}", validate=False)


def direct_power(a: FiniteGroup, k: int) -> FiniteGroup:
    """``a^k`` under pointwise product; tuples indexed lexicographically."""
    if k == 0:
        return FiniteGroup([[0]], name=f"{a.name}^0")
    out = a
    for _ in range(k - 1):
        out = direct_product(out, a)
    out.name = f"{a.name}^{k}"
    out.labels = None
    return out


def read_group_table(path: str | Path) -> FiniteGroup:
    """Parse a table file: ``order n``, then n rows of n indices, optional ``labels ...``."""
    lines = [ln.strip() for ln in Path(path).read_text().splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("order"):
        raise InvariantError("table file must start with 'order n'")
    n = int(lines[0].split()[1])
    rows = [[int(x) for x in ln.split()] for ln in lines[1:1 + n]]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise InvariantError("table file has the wrong shape")
    labels = None
    rest = lines[1 + n:]
    if rest and rest[0].startswith("labels"):
        labels = rest[0].split()[1:]
        if len(labels) != n:
            raise InvariantError("wrong number of labels")
    return FiniteGroup(rows, labels=labels, name=Path(path).stem)


def write_group_table(g: FiniteGroup, path: str | Path) -> None:
    out = [f"order {g.order}"]
    out += [" ".join(map(str, row)) for row in g.rows]
    if g.labels:
        out.append("labels " + " ".join(x.replace(" ", "") for x in g.labels))
    Path(path).write_text("\n".join(out) + "\n")


_NAMED = re.compile(r"^(C|S|D|A)(\d+)$")


def make_named(spec: str) -> FiniteGroup:
    """Build ``C{n}``, ``S{n}`` (n<=6), ``D{n}`` (order 2n), ``A{n}`` (n<=5), ``Q8``, ``V4``,
    a product ``AxB`` of those, or read a table file."""
    spec = spec.strip()
    if "x" in spec and not Path(spec).exists():
        parts = spec.split("x")
        out = make_named(parts[0])
        for p in parts[1:]:
            out = direct_product(out, make_named(p))
        out.name = spec
        return out
    if spec == "Q8":
        return quaternion()
    if spec == "V4":
        g = direct_product(cyclic(2), cyclic(2))
        g.name = "V4"
        return g
    m = _NAMED.match(spec)
    if m:
        kind, n = m.group(1), int(m.group(2))
        if kind == "C":
            return cyclic(n)
        if kind == "S":
            if not 1 <= n <= 6:
                raise ValueError("S{n} supported for 1 <= n <= 6")
            return symmetric(n)
        if kind == "A":
            if not 1 <= n <= 5:
                raise ValueError("A{n} supported for 1 <= n <= 5")
            return alternating(n)
        if kind == "D":
            return dihedral(n)
    if Path(spec).exists():
        return read_group_table(spec)
    raise ValueError(f"unknown group spec {spec!r}")


def gl_order(n: int, q: int) -> int:
    return math.prod(q ** n - q ** i for i in range(n))


# --------------------------------------------------------------------------
# finite G-sets
# --------------------------------------------------------------------------

class GSet:
    """Left ``G``-set on ``0..size-1``; ``act[g, y]`` is ``g·y``."""

    def __init__(self, group: FiniteGroup, act, labels: Sequence[str] | None = None,
                 validate: bool = True, name: str = ""):
        self.group = group
        self.act = np.asarray(act, dtype=np.int64).reshape(group.order, -1)
        self.act.setflags(write=False)
        self.rows: list[list[int]] = self.act.tolist()
        self.labels = list(labels) if labels is not None else None
        self.name = name
        if validate:
            self.check()

    @property
    def size(self) -> int:
        return self.act.shape[1]

    def __len__(self):
        return self.size

    def __repr__(self):
        return f"GSet({self.group.name}, size={self.size}{', ' + self.name if self.name else ''})"

    def __call__(self, g: int, y: int) -> int:
        return self.rows[g][y]

    def check(self) -> None:
        n = self.size
        a = self.act
        if n and (a.min() < 0 or a.max() >= n):
            raise InvariantError("action values out of range")
        if not np.array_equal(a[self.group.identity], np.arange(n)):
            raise InvariantError("identity does not act trivially")
        for g in range(self.group.order):
            if len(set(self.rows[g])) != n:
                raise InvariantError(f"g={g} does not act bijectively")
        t = self.group.table
        for h in self.group.generators():
            if not np.array_equal(a[t[:, h]], a[:, a[h]]):
                raise InvariantError(f"not an action at generator {h}")

    def orbits(self) -> list[list[int]]:
        seen = [False] * self.size
        out = []
        for y in range(self.size):
            if not seen[y]:
                orb = sorted(set(self.act[:, y].tolist()))
                for z in orb:
                    seen[z] = True
                out.append(orb)
        return out

    def stabilizer(self, y: int) -> Subgroup:
        return Subgroup(self.group, [g for g in range(self.group.order) if self.rows[g][y] == y], check=False)

    def is_free(self) -> bool:
        return all(self.stabilizer(y).order == 1 for y in range(self.size))

    def label(self, y: int) -> str:
        return self.labels[y] if self.labels else str(y)


def regular_gset(g: FiniteGroup) -> GSet:
    return GSet(g, g.table, labels=[g.label(x) for x in range(g.order)], validate=False, name="regular")


def trivial_gset(g: FiniteGroup, n: int) -> GSet:
    return GSet(g, np.tile(np.arange(n), (g.order, 1)), validate=False, name=f"trivial{n}")


def coset_gset(g: FiniteGroup, h: Subgroup) -> GSet:
    """``G/H`` (left cosets ``xH``) indexed by least coset element."""
    reps = h.left_coset_reps()
    where = {}
    for i, r in enumerate(reps):
        for k in h.members:
            where[g.mul(r, k)] = i
    act = [[where[g.mul(x, r)] for r in reps] for x in range(g.order)]
    return GSet(g, act, labels=[g.label(r) + "H" for r in reps], validate=False, name=f"G/H{h.order}")


def disjoint_union(parts: Sequence[GSet]) -> tuple[GSet, list[int]]:
    """Disjoint union; also returns the offset of each part."""
    if not parts:
        raise ValueError("need at least one G-set")
    g = parts[0].group
    offsets, cols, off = [], [], 0
    for p in parts:
        if p.group is not g:
            raise ContextError("G-sets over different groups")
        offsets.append(off)
        cols.append(p.act + off)
        off += p.size
    return GSet(g, np.concatenate(cols, axis=1) if off else np.zeros((g.order, 0)), validate=False), offsets
