"""Exact oracles for small digraphs: cycle recognition, acyclicity, dichromatic number."""

from __future__ import annotations

import os
from dataclasses import dataclass
from graphlib import CycleError, TopologicalSorter

from .digraph import Digraph
from .exceptions import DomainError, NoColoringError, SizeLimitError

DEFAULT_LIMIT = 16
LIMIT_ENV = "HAJOS_BF_LIMIT"


def default_limit() -> int:
    raw = os.environ.get(LIMIT_ENV)
    if raw is None:
        return DEFAULT_LIMIT
    try:
        value = int(raw)
    except ValueError:
        raise DomainError(f"{LIMIT_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise DomainError(f"{LIMIT_ENV} must be positive, got {value}")
    return value


@dataclass(frozen=True)
class ColoringWitness:
    colors: dict[int, int]
    num_colors: int

    def classes(self) -> list[set[int]]:
        out = [set() for _ in range(self.num_colors)]
        for v, c in self.colors.items():
            out[c].add(v)
        return out


def is_symmetric_cycle(D: Digraph) -> bool:
    """True iff ``D`` is isomorphic to D(C_n) for ``n = D.order >= 3``."""
    if D.order < 3:
        return False
    for v in D.vertices:
        out, inn = D.successors(v), D.predecessors(v)
        if len(out) != 2 or out != inn:
            return False
    start = min(D.vertices)
    seen = {start}
    stack = [start]
    while stack:
        for w in D.successors(stack.pop()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == D.order


def is_acyclic(D: Digraph) -> bool:
    """No directed cycle; a symmetric arc is a cycle of length two."""
    sorter = TopologicalSorter({v: D.predecessors(v) for v in D.vertices})
    try:
        sorter.prepare()
    except CycleError:
        return False
    return True


def _closes_cycle(succ: dict[int, frozenset[int]], members: set[int], v: int) -> bool:
    # Is v reachable from itself inside members ∪ {v}?
    stack = [w for w in succ[v] if w in members]
    seen = set(stack)
    while stack:
        u = stack.pop()
        for w in succ[u]:
            if w == v:
                return True
            if w in members and w not in seen:
                seen.add(w)
                stack.append(w)
    return False


def _search(D: Digraph, c: int) -> dict[int, int] | None:
    order = sorted(D.vertices)
    succ = {v: D.successors(v) for v in order}
    classes: list[set[int]] = [set() for _ in range(c)]
    colors: dict[int, int] = {}

    def place(pos: int, used: int) -> bool:
        if pos == len(order):
            return True
        v = order[pos]
        # Canonical colorings only: a new color is always the next unused one.
        for k in range(min(used + 1, c)):
            if _closes_cycle(succ, classes[k], v):
                continue
            classes[k].add(v)
            colors[v] = k
            if place(pos + 1, max(used, k + 1)):
                return True
            classes[k].discard(v)
            del colors[v]
        return False

    return dict(colors) if place(0, 0) else None


def _check_size(D: Digraph, limit: int | None) -> None:
    limit = default_limit() if limit is None else limit
    if D.order > limit:
        raise SizeLimitError(f"digraph has {D.order} vertices, brute-force limit is {limit}")


def dichromatic_number(
    D: Digraph, cap: int | None = None, limit: int | None = None
) -> tuple[int, ColoringWitness]:
    """Smallest number of colors whose classes all induce acyclic subdigraphs.

    ``cap`` bounds the search (default: the order of ``D``); ``limit`` bounds
    the order of ``D`` (default :data:`DEFAULT_LIMIT`, or ``$HAJOS_BF_LIMIT``).
    """
    _check_size(D, limit)
    if D.order == 0:
        return 0, ColoringWitness({}, 0)
    cap = D.order if cap is None else cap
    if cap < 1:
        raise DomainError(f"cap must be at least 1, got {cap}")
    for c in range(1, min(cap, D.order) + 1):
        colors = _search(D, c)
        if colors is not None:
            return c, ColoringWitness(colors, c)
    raise NoColoringError(f"no acyclic coloring with at most {cap} colors")


def check_witness(D: Digraph, witness: ColoringWitness) -> bool:
    """Re-check a coloring class by class with :func:`is_acyclic`."""
    if set(witness.colors) != set(D.vertices):
        return False
    if any(not 0 <= c < witness.num_colors for c in witness.colors.values()):
        return False
    return all(is_acyclic(D.induced(cls)) for cls in witness.classes())


def is_3_critical(D: Digraph, limit: int | None = None) -> bool:
    """Vertex-criticality: dichromatic number 3 and 2 after deleting any vertex."""
    _check_size(D, limit)
    chi, _ = dichromatic_number(D, limit=limit)
    if chi != 3:
        return False
    for v in sorted(D.vertices):
        chi_v, _ = dichromatic_number(D.remove_vertex(v), cap=3, limit=limit)
        if chi_v > 2:
            return False
    return True
