"""Deterministic corpus of small (G, Π, action) triples for the verification suites."""

from __future__ import annotations

import functools
import os
from typing import Iterator

from .groups import FiniteGroup, GroupAction, automorphism_actions, make_named

DEFAULT_MAX_GAMMA = 48

# one representative per isomorphism type where the families overlap
NAMED_SPECS = (
    ["C1"] + [f"C{n}" for n in range(2, 25)]
    + ["V4", "S3", "D4", "Q8", "D5", "A4", "D6", "D7", "D8", "D9", "D10", "D11", "D12", "S4"]
)


def max_gamma_default() -> int:
    return int(os.environ.get("EQUICAT_MAX_GAMMA", DEFAULT_MAX_GAMMA))


@functools.lru_cache(maxsize=None)
def named(spec: str) -> FiniteGroup:
    """Cached :func:`make_named` so corpus entries share group objects."""
    return make_named(spec)


@functools.lru_cache(maxsize=None)
def _actions(gspec: str, pspec: str) -> tuple[GroupAction, ...]:
    acts = automorphism_actions(named(gspec), named(pspec))
    for i, a in enumerate(acts):
        if not a.name:
            a.name = f"aut#{i}"
    return tuple(acts)


def triples(max_gamma: int | None = None, max_pi: int | None = None,
            max_g: int | None = None, specs=NAMED_SPECS) -> Iterator[tuple[str, str, GroupAction]]:
    """Yield ``(G spec, Π spec, action)`` with ``|G||Π| <= max_gamma``, every action included."""
    max_gamma = max_gamma_default() if max_gamma is None else max_gamma
    for gs in specs:
        G = named(gs)
        if max_g is not None and G.order > max_g:
            continue
        for ps in specs:
            P = named(ps)
            if G.order * P.order > max_gamma or (max_pi is not None and P.order > max_pi):
                continue
            for act in _actions(gs, ps):
                yield gs, ps, act
