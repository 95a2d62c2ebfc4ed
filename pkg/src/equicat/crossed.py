"""Crossed homomorphisms, nonabelian H^1 and the graph-subgroup dictionary.

A crossed homomorphism ``α: H -> Π`` (``H <= G``, ``G`` acting on ``Π``)
satisfies ``α(gh) = α(g) (g·α(h))``.  Values are stored as a tuple aligned with
``H.members``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import BoundExceeded, ContextError, InvariantError, VerificationError
from .groups import (FiniteGroup, GroupAction, SemidirectProduct, Subgroup, normalizer, pi_conjugacy_classes,
                     semidirect, subgroups)

DEFAULT_CROSSED_BOUND = 10**7
FULL_SCAN_THRESHOLD = 4096


class _MapOnSubgroup:
    """Shared plumbing for maps ``H -> Π`` in a fixed action context."""

    kind = "map"

    def __init__(self, source: Subgroup, action: GroupAction, values: Sequence[int], check: bool = True):
        if source.parent is not action.actor:
            raise ContextError("source subgroup is not a subgroup of the acting group")
        self.source = source
        self.action = action
        self.values = tuple(int(v) for v in values)
        if len(self.values) != len(source.members):
            raise InvariantError("one value per element of the source is required")
        self._pos = {h: i for i, h in enumerate(source.members)}
        if check:
            self.check()

    @property
    def target(self) -> FiniteGroup:
        return self.action.target

    @property
    def group(self) -> FiniteGroup:
        return self.action.actor

    def __call__(self, h: int) -> int:
        return self.values[self._pos[h]]

    def items(self):
        return zip(self.source.members, self.values)

    def same_context(self, other) -> bool:
        return (self.action is other.action and self.source == other.source)

    def __eq__(self, other):
        return type(self) is type(other) and self.same_context(other) and self.values == other.values

    def __hash__(self):
        return hash((self.kind, self.values))

    def __repr__(self):
        pi = self.target
        body = ", ".join(f"{self.group.label(h)}->{pi.label(v)}" for h, v in self.items())
        return f"{type(self).__name__}({body})"

    def is_trivial(self) -> bool:
        return all(v == self.target.identity for v in self.values)


class CrossedHom(_MapOnSubgroup):
    kind = "crossed"

    def check(self) -> None:
        G, P, act = self.group, self.target, self.action.rows
        for g, ag in self.items():
            for h, ah in self.items():
                if self(G.mul(g, h)) != P.mul(ag, act[g][ah]):
                    raise InvariantError(f"crossed relation fails at {(g, h)}")


class CrossedAntiHom(_MapOnSubgroup):
    kind = "anti"

    def check(self) -> None:
        G, P, act = self.group, self.target, self.action.rows
        for g, ag in self.items():
            for h, ah in self.items():
                if self(G.mul(g, h)) != P.mul(act[g][ah], ag):
                    raise InvariantError(f"anti-crossed relation fails at {(g, h)}")


def trivial_crossed(source: Subgroup, action: GroupAction) -> CrossedHom:
    return CrossedHom(source, action, [action.target.identity] * len(source), check=False)


def _check_bound(pi: FiniteGroup, ngens: int, bound: int) -> None:
    if pi.order ** ngens > bound:
        raise BoundExceeded(f"|Π|^gens = {pi.order}^{ngens} exceeds bound {bound}")


def enumerate_crossed(H: Subgroup, pi: FiniteGroup, action: GroupAction,
                      bound: int = DEFAULT_CROSSED_BOUND, method: str = "auto") -> list[CrossedHom]:
    """All crossed homomorphisms ``H -> Π``, sorted by value tuple.

    ``method="generators"`` extends generator images along the Cayley graph of
    ``H``; ``"scan"`` tests every map ``H -> Π``.  ``"auto"`` scans when
    ``|Π|^|H|`` is below :data:`FULL_SCAN_THRESHOLD`.
    """
    if action.target is not pi or H.parent is not action.actor:
        raise ContextError("H, Π and the action do not share a context")
    G = action.actor
    P = pi
    prow, arow = P.rows, action.rows
    if method == "auto":
        method = "scan" if P.order ** len(H) <= FULL_SCAN_THRESHOLD else "generators"
    out: list[CrossedHom] = []
    if method == "scan":
        if P.order ** len(H) > bound:
            raise BoundExceeded(f"|Π|^|H| = {P.order}^{len(H)} exceeds bound {bound}")
        mem = H.members
        pos = {h: i for i, h in enumerate(mem)}
        pairs = [(pos[g], pos[h], pos[G.mul(g, h)], g) for g in mem for h in mem]
        for vals in itertools.product(range(P.order), repeat=len(mem)):
            if all(vals[gh] == prow[vals[i]][arow[g][vals[j]]] for i, j, gh, g in pairs):
                out.append(CrossedHom(H, action, vals, check=False))
    elif method == "generators":
        gens = H.generators()
        _check_bound(P, len(gens), bound)
        # Cayley-graph extension inside H viewed as its own group
        sub, emb = H.as_group()
        pos = {h: i for i, h in enumerate(emb)}
        sgens = [pos[s] for s in gens]

        for imgs in itertools.product(range(P.order), repeat=len(gens)):
            val = [-1] * len(emb)
            val[pos[G.identity]] = P.identity
            queue = [pos[G.identity]]
            ok = True
            qi = 0
            while qi < len(queue) and ok:
                x = queue[qi]
                qi += 1
                gx = emb[x]
                vx = val[x]
                for s, img in zip(sgens, imgs):
                    y = sub.rows[x][s]
                    v = prow[vx][arow[gx][img]]
                    if val[y] == -1:
                        val[y] = v
                        queue.append(y)
                    elif val[y] != v:
                        ok = False
                        break
            if ok:
                out.append(CrossedHom(H, action, val, check=False))
    else:
        raise ValueError(f"unknown method {method!r}")
    out.sort(key=lambda a: a.values)
    return out


def _require_same_context(a: _MapOnSubgroup, b: _MapOnSubgroup) -> None:
    if not a.same_context(b):
        raise ContextError("crossed homomorphisms live over different contexts")


def iso_witnesses(alpha: CrossedHom, beta: CrossedHom) -> list[int]:
    """All ``σ ∈ Π`` with ``β(g)(g·σ) = σ α(g)`` for every ``g`` in the source."""
    _require_same_context(alpha, beta)
    P, act = alpha.target, alpha.action.rows
    out = []
    for s in range(P.order):
        if all(P.mul(b, act[g][s]) == P.mul(s, a) for (g, a), b in zip(alpha.items(), beta.values)):
            out.append(s)
    return out


def anti_iso_witnesses(alpha: CrossedAntiHom, beta: CrossedAntiHom) -> list[int]:
    """All ``σ`` with ``β(g)σ = (g·σ)α(g)``."""
    _require_same_context(alpha, beta)
    P, act = alpha.target, alpha.action.rows
    return [s for s in range(P.order)
            if all(P.mul(b, s) == P.mul(act[g][s], a) for (g, a), b in zip(alpha.items(), beta.values))]


def twist(alpha: CrossedHom, s: int) -> CrossedHom:
    """The crossed hom ``h -> σ α(h) (h·σ)^-1``, the target of ``σ: α -> ·``."""
    P, act = alpha.target, alpha.action.rows
    vals = [P.mul(P.mul(s, a), P.inverse(act[h][s])) for h, a in alpha.items()]
    return CrossedHom(alpha.source, alpha.action, vals, check=False)


def centralizer(alpha: CrossedHom) -> Subgroup:
    """``Π^α = {σ : α(g)(g·σ) = σ α(g)}``."""
    return Subgroup(alpha.target, iso_witnesses(alpha, alpha), check=False)


@dataclass
class H1Class:
    representative: CrossedHom
    members: list[CrossedHom]
    aut: Subgroup

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass
class H1Table:
    group: FiniteGroup
    pi: FiniteGroup
    action: GroupAction
    source: Subgroup
    classes: list[H1Class]
    basepoint: int

    def __len__(self):
        return len(self.classes)

    @property
    def total(self) -> int:
        return sum(c.size for c in self.classes)

    def class_of(self, alpha: CrossedHom) -> int:
        for i, c in enumerate(self.classes):
            if alpha in c.members:
                return i
        raise KeyError("crossed homomorphism not in this table")

    def to_json(self) -> dict:
        return {
            "context": {
                "G": self.group.name, "Pi": self.pi.name,
                "action": self.action.name or "custom",
                "H": list(self.source.members),
                "order_G": self.group.order, "order_Pi": self.pi.order,
            },
            "crossed_homs": self.total,
            "classes": [
                {"representative": list(c.representative.values), "size": c.size,
                 "aut_order": c.aut.order, "basepoint": i == self.basepoint}
                for i, c in enumerate(self.classes)
            ],
        }


def h1(G: FiniteGroup, pi: FiniteGroup, action: GroupAction, H: Subgroup | None = None,
       bound: int = DEFAULT_CROSSED_BOUND) -> H1Table:
    """Isomorphism classes of crossed homomorphisms ``H -> Π`` (``H = G`` by default).

    Classes are the orbits of the twisting action of ``Π``; each keeps all of its
    members, and ``aut`` is the stabiliser ``Π^α`` of the representative.
    """
    if action.actor is not G or action.target is not pi:
        raise ContextError("action does not match G and Π")
    H = G.whole() if H is None else H
    homs = enumerate_crossed(H, pi, action, bound=bound)
    index = {a.values: i for i, a in enumerate(homs)}
    cls_of = [-1] * len(homs)
    classes: list[H1Class] = []
    for i, a in enumerate(homs):
        if cls_of[i] != -1:
            continue
        k = len(classes)
        mem: set[int] = set()
        stab = []
        for s in range(pi.order):
            j = index[twist(a, s).values]
            mem.add(j)
            cls_of[j] = k
            if j == i:
                stab.append(s)
        classes.append(H1Class(a, [homs[j] for j in sorted(mem)], Subgroup(pi, stab, check=False)))
    base = cls_of[index[trivial_crossed(H, action).values]]
    return H1Table(G, pi, action, H, classes, base)


# --------------------------------------------------------------------------
# graph subgroups Λ_α of Γ
# --------------------------------------------------------------------------

def _check_gamma(alpha: _MapOnSubgroup, gamma: SemidirectProduct) -> None:
    if gamma.action is not alpha.action:
        raise ContextError("crossed homomorphism and Γ use different actions")


def lambda_of(alpha: CrossedHom, gamma: SemidirectProduct) -> Subgroup:
    """``Λ_α = {(α(h), h)}``."""
    _check_gamma(alpha, gamma)
    return Subgroup(gamma.gamma, [gamma.pair(a, h) for h, a in alpha.items()], check=False)


def crossed_from_lambda(lam: Subgroup, gamma: SemidirectProduct) -> CrossedHom:
    """Recover ``α`` with ``Λ = Λ_α``; requires ``Λ ∩ Π = {e}``."""
    if lam.parent is not gamma.gamma:
        raise ContextError("Λ is not a subgroup of Γ")
    meet = lam.as_set() & gamma.pi_image
    if meet != {gamma.gamma.identity}:
        raise InvariantError("Λ meets Π nontrivially")
    vals = {}
    for x in lam.members:
        s, h = gamma.split(x)
        vals[h] = s
    H = Subgroup(gamma.g, vals.keys(), check=False)
    return CrossedHom(H, gamma.action, [vals[h] for h in H.members], check=False)


# --------------------------------------------------------------------------
# crossed <-> anti-crossed
# --------------------------------------------------------------------------

def bar(alpha: CrossedHom) -> CrossedAntiHom:
    """``ᾱ(g) = g·α(g^-1)``."""
    G, act = alpha.group, alpha.action.rows
    vals = [act[g][alpha(G.inverse(g))] for g in alpha.source.members]
    return CrossedAntiHom(alpha.source, alpha.action, vals, check=False)


def unbar(beta: CrossedAntiHom) -> CrossedHom:
    """Inverse of :func:`bar`; the same formula ``g·β(g^-1)``."""
    G, act = beta.group, beta.action.rows
    vals = [act[g][beta(G.inverse(g))] for g in beta.source.members]
    return CrossedHom(beta.source, beta.action, vals, check=False)


# --------------------------------------------------------------------------
# fixed maps G -> Π for Λ_α
# --------------------------------------------------------------------------

def fixed_map(alpha: CrossedHom, G: FiniteGroup | None = None,
              reps: Sequence[int] | None = None) -> list[int]:
    """A ``Λ_α``-fixed map ``f: G -> Π``: ``f(k g_i) = α(k)^-1`` on right cosets ``H g_i``.

    ``reps`` defaults to the least element of each coset.  The result satisfies
    ``h·f(h^-1 g) = f(g) α(h)`` for all ``h ∈ H``, ``g ∈ G``.
    """
    G = alpha.group if G is None else G
    if G is not alpha.group:
        raise ContextError("G is not the group of the crossed homomorphism")
    H = alpha.source
    reps = H.right_coset_reps() if reps is None else list(reps)
    P = alpha.target
    f = [-1] * G.order
    for r in reps:
        for k in H.members:
            x = G.mul(k, r)
            if f[x] != -1:
                raise InvariantError("representatives are not a right-coset transversal")
            f[x] = P.inverse(alpha(k))
    if -1 in f:
        raise InvariantError("representatives do not cover G")
    return f


def check_fixed_map(alpha: CrossedHom, f: Sequence[int]) -> bool:
    G, P, act = alpha.group, alpha.target, alpha.action.rows
    return all(act[h][f[G.mul(G.inverse(h), g)]] == P.mul(f[g], alpha(h))
               for h in alpha.source.members for g in range(G.order))


# --------------------------------------------------------------------------
# verifications
# --------------------------------------------------------------------------

def complement_subgroups(gamma: SemidirectProduct, H: Subgroup | None = None) -> list[Subgroup]:
    """Subgroups ``Λ <= Γ`` with ``Λ ∩ Π = e`` and ``q(Λ) = H`` (``H = G`` by default),
    found by subgroup search in ``Γ`` alone."""
    H = gamma.g.whole() if H is None else H
    target = H.as_set()
    out = []
    for lam in subgroups(gamma.gamma, bound=max(gamma.gamma.order, 1), avoid=gamma.pi_image):
        if {gamma.proj(x) for x in lam.members} == target and len(lam) == len(H):
            out.append(lam)
    return out


def verify_finlem1(G: FiniteGroup, pi: FiniteGroup, action: GroupAction,
                   gamma: SemidirectProduct | None = None) -> dict:
    """|H^1(G;Π_G)| equals the number of Π-classes of complements, realised by ``Λ_α``."""
    gamma = semidirect(pi, G, action) if gamma is None else gamma
    table = h1(G, pi, action)
    homs = [a for c in table.classes for a in c.members]
    comps = complement_subgroups(gamma)
    lam = {a.values: lambda_of(a, gamma) for a in homs}
    lam_sets = {l.members for l in lam.values()}
    comp_sets = {c.members for c in comps}
    if lam_sets != comp_sets:
        raise VerificationError("graph subgroups differ from complements",
                                witness=sorted(lam_sets ^ comp_sets)[:1])
    classes = pi_conjugacy_classes(gamma, comps)
    if len(classes) != len(table):
        raise VerificationError(f"|H^1|={len(table)} but {len(classes)} Π-classes",
                                witness=(len(table), len(classes)))
    by_members = {lam[a.values].members: a for a in homs}
    # elementwise: σ Λ_α σ^-1 = Λ_β  iff  σ: α -> β
    for a in homs:
        conj_target: dict[tuple, list[int]] = {}
        for s in range(pi.order):
            x = gamma.incl_pi(s)
            b = by_members.get(lam[a.values].conjugate(x).members)
            if b is None:
                raise VerificationError("Π-conjugate of a graph subgroup is not a graph subgroup",
                                        witness=(a.values, s))
            conj_target.setdefault(b.values, []).append(s)
        for b in homs:
            w = iso_witnesses(a, b)
            if w != conj_target.get(b.values, []):
                raise VerificationError("conjugation and witnesses disagree", witness=(a.values, b.values))
    # class partition agreement
    h1_part = sorted(sorted(lam[a.values].members for a in c.members) for c in table.classes)
    sub_part = sorted(sorted(l.members for l in cls) for cls in classes)
    if h1_part != sub_part:
        raise VerificationError("class partitions differ")
    return {"h1": len(table), "pi_classes": len(classes), "crossed_homs": len(homs),
            "complements": len(comps), "ok": True}


def verify_finlem2(alpha: CrossedHom, gamma: SemidirectProduct) -> dict:
    """``Π^α = Π ∩ N_Γ(Λ_α)`` elementwise."""
    _check_gamma(alpha, gamma)
    lam = lambda_of(alpha, gamma)
    norm = normalizer(gamma.gamma, lam).as_set()
    rhs = {gamma.split(x)[0] for x in gamma.pi_image & norm}
    lhs = set(centralizer(alpha).members)
    if lhs != rhs:
        raise VerificationError("crossed centralizer differs from Π ∩ N(Λ_α)",
                                witness=(alpha.values, sorted(lhs ^ rhs)))
    return {"order": len(lhs), "ok": True}
