"""Command-line frontend: ``equicat <command> [options]``.

Every command builds a report ``{"schema", "command", "config", "checks", "ok"}``;
``--json`` prints it (sorted keys, so equal configs give equal bytes),
otherwise a short table is printed.  The exit status is 0 exactly when every
check passed.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from pathlib import Path
from typing import Callable

import numpy as np

from . import corpus
from .crossed import h1, verify_finlem1, verify_finlem2
from .errors import BoundExceeded, EquicatError
from .fincat import (FinCat, conjugation_on_group_category, cross_check_decomposition, fixed_decomposition,
                     generic_conjugation, group_category, mu, verify_notformal)
from .groups import (FiniteGroup, GroupAction, automorphism_actions, coset_gset, cyclic, homomorphisms,
                     regular_gset, semidirect, subgroup_classes, subgroups, trivial_action, trivial_gset)
from .models import build_universe, e_orbit, gl_orbit, verify_e_model, verify_gl_model
from .nerve import bar_comparison, nerve, orbit_compare, pi0, simpcon_comparison, verify_fixed_nerve_corpus
from .skew import galois_field, gl, hilbert90, verify_crossr

SCHEMA = "equicat.report/1"
DECOMP_BOUND = 10**6
GENERIC_DECOMP_BOUND = 2 * 10**5

_GL = re.compile(r"^GL(\d+)F(\d+)$")


# --------------------------------------------------------------------------
# parsing group specs and actions
# --------------------------------------------------------------------------

def _prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            if r != 1:
                break
            return p, k
    raise ValueError(f"{q} is not a prime power")


def parse_context(g_spec: str, pi_spec: str, action: str = "trivial") -> tuple[FiniteGroup, FiniteGroup, GroupAction]:
    """Resolve ``G``, ``Π`` and an action selector.

    ``Π`` may be a named group or ``GL{n}F{q}``.  Actions: ``trivial``,
    ``inversion`` (abelian ``Π``; ``g`` inverts when it lies outside the
    kernel of the first nontrivial ``G -> C2``), ``frobenius`` (``Π = GL{n}F{p^k}``,
    ``G`` cyclic of order ``k``), or ``aut:<i>`` for the ``i``-th action of
    :func:`automorphism_actions`.
    """
    G = corpus.named(g_spec)
    m = _GL.match(pi_spec)
    if m:
        n, q = int(m.group(1)), int(m.group(2))
        p, k = _prime_power(q)
        if action == "frobenius":
            K = galois_field(p, k)
            if G.order != k or not any(G.element_order(x) == k for x in range(G.order)):
                raise ValueError(f"frobenius needs G cyclic of order {k}")
            glg = gl(n, K)
            glg.group.name = pi_spec
            return K.group, glg.group, glg.entry_action
        glg = gl(n, galois_field(p, k))
        P = glg.group
        P.name = pi_spec
    else:
        P = corpus.named(pi_spec)
    if action == "trivial":
        return G, P, trivial_action(G, P)
    if action == "inversion":
        if not P.is_abelian():
            raise ValueError("inversion needs an abelian Π")
        chis = [h for h in homomorphisms(G, cyclic(2)) if any(h.map)]
        if not chis:
            raise ValueError(f"{g_spec} has no quotient of order 2")
        inv = np.asarray(P.inv_list)
        act = np.stack([inv if chis[0].map[g] else np.arange(P.order) for g in range(G.order)])
        return G, P, GroupAction(G, P, act, name="inversion")
    if action.startswith("aut:"):
        acts = automorphism_actions(G, P)
        i = int(action[4:])
        if not 0 <= i < len(acts):
            raise ValueError(f"there are {len(acts)} actions of {g_spec} on {pi_spec}")
        return G, P, acts[i]
    raise ValueError(f"unknown action {action!r}")


# --------------------------------------------------------------------------
# reports
# --------------------------------------------------------------------------

class Report:
    def __init__(self, command: str, config: dict):
        self.command, self.config = command, config
        self.checks: list[dict] = []
        self.started = time.perf_counter()

    def add(self, name: str, ok: bool, **data) -> dict:
        row = {"name": name, "ok": bool(ok), **data}
        self.checks.append(row)
        return row

    def attempt(self, name: str, fn: Callable[[], dict], keep: Callable[[dict], dict] | None = None) -> dict:
        """Run ``fn``; a verification failure becomes a failed check carrying its witness."""
        try:
            res = fn()
        except BoundExceeded as exc:
            return self.add(name, False, error=f"bound: {exc}")
        except (EquicatError, AssertionError) as exc:
            return self.add(name, False, error=str(exc), witness=_plain(getattr(exc, "witness", None)))
        data = keep(res) if keep else {}
        return self.add(name, bool(res.get("ok", True)), **data)

    @property
    def ok(self) -> bool:
        return all(c["ok"] for c in self.checks)

    def to_json(self, timing: bool = False) -> dict:
        out = {"schema": SCHEMA, "command": self.command, "config": self.config,
               "checks": self.checks, "passed": sum(c["ok"] for c in self.checks),
               "failed": sum(not c["ok"] for c in self.checks), "ok": self.ok}
        if timing:
            out["seconds"] = round(time.perf_counter() - self.started, 3)
        return out


def _plain(x):
    """JSON-safe copy of witness data."""
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        return [_plain(v) for v in x]
    if x is None or isinstance(x, (int, float, str, bool)):
        return x
    return repr(x)


def _print_table(rep: Report, out, timing: bool) -> None:
    print(f"{rep.command}: {'PASS' if rep.ok else 'FAIL'} ({sum(c['ok'] for c in rep.checks)}"
          f"/{len(rep.checks)} checks)", file=out)
    for c in rep.checks:
        extra = "  ".join(f"{k}={v}" for k, v in c.items() if k not in ("name", "ok", "witness", "rows"))
        print(f"  [{'ok' if c['ok'] else 'FAIL'}] {c['name']}  {extra}".rstrip(), file=out)
        for r in c.get("rows", []):
            print("      " + "  ".join(f"{k}={v}" for k, v in r.items()), file=out)
    if timing:
        print(f"  time {time.perf_counter() - rep.started:.2f}s", file=out)


# --------------------------------------------------------------------------
# corpus runners (also used by the acceptance suite)
# --------------------------------------------------------------------------

def _ctx(gs, ps, action) -> str:
    return f"{gs}/{ps}/{action.name or 'custom'}"


def run_finlem1(max_gamma: int | None = None, rep: Report | None = None) -> Report:
    rep = rep or Report("verify finlem1", {"max_gamma": max_gamma})
    for gs, ps, action in corpus.triples(max_gamma=max_gamma):
        G, P = corpus.named(gs), corpus.named(ps)
        rep.attempt(_ctx(gs, ps, action), lambda: verify_finlem1(G, P, action),
                    lambda r: {"h1": r["h1"], "pi_classes": r["pi_classes"]})
    return rep


def run_finlem2(max_gamma: int | None = None, rep: Report | None = None) -> Report:
    """``Π^α = Π ∩ N_Γ(Λ_α)`` for every crossed hom on every subgroup ``H``."""
    rep = rep or Report("verify finlem2", {"max_gamma": max_gamma})
    for gs, ps, action in corpus.triples(max_gamma=max_gamma):
        G, P = corpus.named(gs), corpus.named(ps)
        gamma = semidirect(P, G, action)

        def one():
            n = 0
            for H in subgroups(G):
                for c in h1(G, P, action, H).classes:
                    for a in c.members:
                        verify_finlem2(a, gamma)
                        n += 1
            return {"crossed_homs": n, "ok": True}
        rep.attempt(_ctx(gs, ps, action), one, lambda r: {"crossed_homs": r["crossed_homs"]})
    return rep


def run_fffxxx(max_gamma: int | None = None, bound: int = DECOMP_BOUND, rep: Report | None = None) -> Report:
    """Components and vertex groups of ``Cat_G(G~,Π)^H`` for every ``H``; generic cross-check when small."""
    rep = rep or Report("verify fffxxx", {"max_gamma": max_gamma, "bound": bound})
    for gs, ps, action in corpus.triples(max_gamma=max_gamma):
        G, P = corpus.named(gs), corpus.named(ps)
        if P.order ** G.order > bound:
            continue

        def one():
            comps, generic = 0, 0
            conj = None
            if P.order ** (2 * G.order - 1) <= GENERIC_DECOMP_BOUND:
                conj = generic_conjugation(G, P, action, GENERIC_DECOMP_BOUND)
            for H in subgroups(G):
                r = fixed_decomposition(G, P, action, H, bound=bound)
                comps += r["components"]
                if conj is not None:
                    cross_check_decomposition(G, P, action, H, conj=conj)
                    generic += 1
            return {"components": comps, "generic": generic, "ok": True}
        rep.attempt(_ctx(gs, ps, action), one, lambda r: {"components": r["components"],
                                                         "generic_checked": r["generic"]})
    return rep


NOTFORMAL_PI = ("C1", "C2", "C3", "V4", "C4", "C5", "C6", "S3")


def run_notformal(max_x: int = 3, max_pi: int = 6, rep: Report | None = None) -> Report:
    rep = rep or Report("verify notformal", {"max_x": max_x, "max_pi": max_pi})
    for ps in NOTFORMAL_PI:
        P = corpus.named(ps)
        if P.order > max_pi:
            continue
        for n in range(1, max_x + 1):
            rep.attempt(f"X={n}/{ps}", lambda: verify_notformal(n, P),
                        lambda r: {"objects": r["objects"], "morphisms": r["morphisms"]})
    return rep


def run_fixed_nerve(max_gamma: int | None = None, q_max: int = 3, rep: Report | None = None) -> Report:
    rep = rep or Report("verify fixed-nerve", {"max_gamma": max_gamma, "q": q_max})
    rep.attempt("corpus", lambda: verify_fixed_nerve_corpus(max_gamma, q_max),
                lambda r: {"runs": r["runs"], "model_skipped": len(r["model_skipped"])})
    return rep


def run_orbit_nerve(g_spec: str, q_max: int = 2, rep: Report | None = None) -> Report:
    """Conjugation on the one-object category: ``N_q(C/G)`` against ``(N_q C)/G``; differences are reported, not failed."""
    rep = rep or Report("verify orbit-nerve", {"G": g_spec, "q": q_max})
    G = corpus.named(g_spec)
    act = conjugation_on_group_category(G)
    res = {}

    def one():
        res.update(orbit_compare(act.cat, act, q_max))
        return res
    row = rep.attempt(f"B{g_spec}/conjugation", one, lambda r: {"descended": r["descended"],
                                                               "rows": r["levels"]})
    if "rows" in row:
        row["unequal_levels"] = [lv["q"] for lv in row["rows"] if not lv["equal"]]
    return rep


def run_crossr(max_n: int = 2, rep: Report | None = None) -> Report:
    rep = rep or Report("verify crossr", {"max_n": max_n})
    K = galois_field(2, 2)
    for n in range(1, max_n + 1):
        rep.attempt(f"F4/C2/n={n}", lambda: verify_crossr(K, n),
                    lambda r: {k: v for k, v in r.items() if isinstance(v, (int, str)) and k != "ok"})
    return rep


SMALL_GROUPS = ("C1", "C2", "C3", "V4", "C4", "C5", "S3", "C6", "D4", "Q8")


def run_silly(g_spec: str | None = None, rep: Report | None = None) -> Report:
    rep = rep or Report("verify silly", {"G": g_spec})
    for gs in ([g_spec] if g_spec else SMALL_GROUPS):
        G = corpus.named(gs)
        rep.attempt(gs, lambda: mu(G), lambda r: {"morphisms": r["morphisms"]})
    return rep


def run_cat1(g_spec: str | None = None, q_max: int = 3, rep: Report | None = None) -> Report:
    """``N<G,Y> ≅ B(*,G,Y)`` for the regular, trivial and every coset ``G``-set, plus ``E_*G -> D_*G``."""
    rep = rep or Report("verify cat1", {"G": g_spec, "q": q_max})
    for gs in ([g_spec] if g_spec else SMALL_GROUPS[:7]):
        G = corpus.named(gs)
        sets = [("regular", regular_gset(G)), ("trivial2", trivial_gset(G, 2))]
        sets += [(f"G/K{cl[0].order}", coset_gset(G, cl[0])) for cl in subgroup_classes(G)]
        for name, Y in sets:
            rep.attempt(f"{gs}/{name}", lambda: bar_comparison(G, Y, q_max), lambda r: {"sizes": r["sizes"]})
        rep.attempt(f"{gs}/simpcon", lambda: simpcon_comparison(G, q_max), lambda r: {"sizes": r["sizes"]})
    return rep


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_h1(a) -> Report:
    G, P, action = parse_context(a.G, a.Pi, a.action)
    rep = Report("h1", {"G": a.G, "Pi": a.Pi, "action": a.action})
    for H in subgroups(G):
        def one():
            tab = h1(G, P, action, H)
            out = {"classes": len(tab), "crossed_homs": tab.total,
                   "rows": [{"class": i, "size": c.size, "aut_order": c.aut.order,
                             "basepoint": i == tab.basepoint} for i, c in enumerate(tab.classes)], "ok": True}
            if P.order ** G.order <= DECOMP_BOUND:
                dec = fixed_decomposition(G, P, action, H, ghfix=False)
                out["components"] = dec["components"]
                out["ok"] = dec["components"] == len(tab)
            return out
        rep.attempt(f"H={list(H.members)}", one,
                    lambda r: {k: r[k] for k in ("classes", "crossed_homs", "rows", "components") if k in r})
    return rep


def cmd_verify(a) -> Report:
    sel = a.selector
    cfg = {"selector": sel}
    if sel == "finlem1":
        return run_finlem1(a.max_gamma, Report("verify finlem1", {**cfg, "max_gamma": a.max_gamma}))
    if sel == "finlem2":
        return run_finlem2(a.max_gamma, Report("verify finlem2", {**cfg, "max_gamma": a.max_gamma}))
    if sel == "fffxxx":
        return run_fffxxx(a.max_gamma, rep=Report("verify fffxxx", {**cfg, "max_gamma": a.max_gamma}))
    if sel == "notformal":
        return run_notformal(rep=Report("verify notformal", cfg))
    if sel == "fixed-nerve":
        q = a.q if a.q is not None else 3
        return run_fixed_nerve(a.max_gamma, q, Report("verify fixed-nerve", {**cfg, "max_gamma": a.max_gamma, "q": q}))
    if sel == "orbit-nerve":
        q = a.q if a.q is not None else 2
        return run_orbit_nerve(a.G or "S3", q, Report("verify orbit-nerve", {**cfg, "G": a.G or "S3", "q": q}))
    if sel == "crossr":
        return run_crossr(rep=Report("verify crossr", cfg))
    if sel == "silly":
        return run_silly(a.G, Report("verify silly", {**cfg, "G": a.G}))
    if sel == "cat1":
        q = a.q if a.q is not None else 3
        return run_cat1(a.G, q, Report("verify cat1", {**cfg, "G": a.G, "q": q}))
    raise ValueError(f"unknown selector {sel!r}")


def cmd_model_sigma(a) -> Report:
    G = corpus.named(a.G)
    c = a.copies if a.copies is not None else max(a.n, 1)
    rep = Report("model-sigma", {"G": a.G, "n": a.n, "copies": c, "check_fixed": a.check_fixed})
    rep.attempt("freeness+fixed", lambda: verify_e_model(G, a.n, c),
                lambda r: {k: r[k] for k in ("universe", "objects", "lambdas", "copies_needed")})
    if a.n >= 1:
        U = build_universe(G, c)
        if U.size < a.n:
            rep.add("orbit-description", True, skipped=f"no {a.n}-subset in {U.size} points")
        else:
            rep.attempt("orbit-description", lambda: e_orbit(G, a.n, U),
                        lambda r: {k: r[k] for k in ("universe", "objects", "morphisms")})
    return rep


def cmd_model_gl(a) -> Report:
    K = galois_field(a.p, a.k)
    rep = Report("model-gl", {"p": a.p, "k": a.k, "n": a.n, "copies": a.copies, "search_bound": a.search_bound})
    rep.attempt("freeness+fixed", lambda: verify_gl_model(a.n, K, a.copies, a.search_bound),
                lambda r: {k: r[k] for k in ("universe", "objects", "gl_order", "lambdas", "largest_A")})
    rep.attempt("orbit-description", lambda: gl_orbit(a.n, K, build_universe(K.group, a.copies)),
                lambda r: {k: r[k] for k in ("universe", "objects", "morphisms")})
    return rep


def cmd_hilbert90(a) -> Report:
    rep = Report("hilbert90", {"p": a.p, "k": a.k, "n": a.n})
    rep.attempt(f"F{a.p ** a.k}/n={a.n}", lambda: hilbert90(a.p, a.k, a.n),
                lambda r: {k: r[k] for k in ("gl_order", "crossed_homs", "classes", "aut_order", "gl_n_p")})
    return rep


def cmd_nerve(a) -> Report:
    q = a.q if a.q is not None else 2
    rep = Report("nerve", {"cat": a.cat, "G": a.G, "chaotic": a.chaotic, "q": q})
    if a.cat:
        C = FinCat.from_text(Path(a.cat).read_text(), name=Path(a.cat).stem)
    elif a.G:
        C = group_category(corpus.named(a.G))
    elif a.chaotic is not None:
        from .fincat import chaotic
        C = chaotic(a.chaotic)
    else:
        raise ValueError("give --cat, --G or --chaotic")

    def one():
        C.check_axioms()
        N = nerve(C, q)
        checked = N.check()
        out = {"sizes": N.sizes, "identities": checked, "ok": True}
        if q >= 1:
            out["pi0"] = pi0(N)
        return out
    rep.attempt(C.name or "category", one, lambda r: {k: r[k] for k in ("sizes", "identities", "pi0") if k in r})
    return rep


def cmd_notformal(a) -> Report:
    P = corpus.named(a.Pi)
    rep = Report("notformal", {"X": a.X, "Pi": a.Pi})
    rep.attempt(f"X={a.X}/{a.Pi}", lambda: verify_notformal(a.X, P),
                lambda r: {"objects": r["objects"], "morphisms": r["morphisms"]})
    return rep


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="equicat", description="Finite verifications for equivariant classifying categories.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the JSON report")
    common.add_argument("--timing", action="store_true", help="include wall-clock time")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("h1", parents=[common], help="H^1 table and fixed-point decomposition rows")
    s.add_argument("--G", required=True)
    s.add_argument("--Pi", required=True)
    s.add_argument("--action", default="trivial")
    s.set_defaults(func=cmd_h1)

    s = sub.add_parser("verify", parents=[common], help="run a named verification")
    s.add_argument("selector", choices=["finlem1", "finlem2", "fffxxx", "notformal", "fixed-nerve",
                                        "orbit-nerve", "crossr", "silly", "cat1"])
    s.add_argument("--max-gamma", type=int, default=None, help="corpus bound on |G||Π| (env EQUICAT_MAX_GAMMA)")
    s.add_argument("--G", default=None)
    s.add_argument("--q", type=int, default=None)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("model-sigma", parents=[common], help="symmetric-group model checks")
    s.add_argument("--G", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--copies", type=int, default=None)
    s.add_argument("--check-fixed", action="store_true")
    s.set_defaults(func=cmd_model_sigma)

    s = sub.add_parser("model-gl", parents=[common], help="general linear model checks")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--copies", type=int, default=1)
    s.add_argument("--search-bound", type=int, default=6)
    s.set_defaults(func=cmd_model_gl)

    s = sub.add_parser("hilbert90", parents=[common], help="H^1(C_k; GL(n, F_{p^k}))")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_hilbert90)

    s = sub.add_parser("nerve", parents=[common], help="truncated nerve of a finite category")
    s.add_argument("--cat", default=None, help="category file (FinCat text format)")
    s.add_argument("--G", default=None, help="use the one-object category of a group")
    s.add_argument("--chaotic", type=int, default=None, help="use the chaotic category on n objects")
    s.add_argument("--q", type=int, default=None)
    s.set_defaults(func=cmd_nerve)

    s = sub.add_parser("notformal", parents=[common], help="explicit model of Cat(X~, Π)")
    s.add_argument("--X", type=int, required=True)
    s.add_argument("--Pi", required=True)
    s.set_defaults(func=cmd_notformal)
    return p


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if getattr(args, "max_gamma", None) is not None and args.max_gamma < 1:
        print("error: --max-gamma must be positive", file=sys.stderr)
        return 2
    try:
        rep = args.func(args)
    except (ValueError, OSError, EquicatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        print(json.dumps(_plain(rep.to_json(args.timing)), sort_keys=True, indent=2), file=out)
    else:
        _print_table(rep, out, args.timing)
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
