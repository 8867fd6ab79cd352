"""Loopless simple digraphs over non-negative integer labels.

A :class:`Digraph` is immutable from the outside. Internally it keeps a
successor and a predecessor map of plain sets so that the identification
kernels in :mod:`hajos.hajos_ops` can take ownership of a private copy and
edit it in place before sealing the result into a new value.
"""

from __future__ import annotations

import enum
from functools import lru_cache
from typing import Iterable, Iterator

from .exceptions import (
    DomainError,
    InvalidDigraphError,
    LabelError,
    MissingArcError,
    UnknownVertexError,
)

Arc = tuple[int, int]


class ArcClass(enum.Enum):
    SYMMETRIC = "symmetric"
    ASYMMETRIC = "asymmetric"


def _check_label(label) -> int:
    if isinstance(label, bool) or not isinstance(label, int):
        raise InvalidDigraphError(f"vertex labels must be integers, got {label!r}")
    if label < 0:
        raise InvalidDigraphError(f"vertex labels must be non-negative, got {label}")
    return label


class Digraph:
    """Finite digraph without loops or parallel arcs.

    Vertices are non-negative integers, not necessarily contiguous. Arcs are
    ordered pairs ``(tail, head)``; iteration over arcs is always sorted so
    that anything serialized from a digraph is reproducible byte for byte.
    """

    __slots__ = ("_succ", "_pred", "_size", "_hash")

    def __init__(self, vertices: Iterable[int] = (), arcs: Iterable[Arc] = ()):
        succ: dict[int, set[int]] = {}
        pred: dict[int, set[int]] = {}
        for v in vertices:
            _check_label(v)
            succ.setdefault(v, set())
            pred.setdefault(v, set())
        for u, v in arcs:
            if u not in succ:
                raise InvalidDigraphError(f"arc ({u}, {v}) has tail outside the vertex set")
            if v not in succ:
                raise InvalidDigraphError(f"arc ({u}, {v}) has head outside the vertex set")
            if u == v:
                raise InvalidDigraphError(f"loop at vertex {u}")
            succ[u].add(v)
            pred[v].add(u)
        self._seal(succ, pred)

    def _seal(self, succ, pred):
        self._succ = succ
        self._pred = pred
        self._size = sum(len(s) for s in succ.values())
        self._hash = None

    @classmethod
    def _adopt(cls, succ: dict[int, set[int]], pred: dict[int, set[int]]) -> "Digraph":
        # Takes ownership of the maps; callers must not keep references.
        g = cls.__new__(cls)
        g._seal(succ, pred)
        return g

    def _buffers(self) -> tuple[dict[int, set[int]], dict[int, set[int]]]:
        return (
            {v: set(s) for v, s in self._succ.items()},
            {v: set(s) for v, s in self._pred.items()},
        )

    # -- basic queries -------------------------------------------------

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self._succ)

    @property
    def order(self) -> int:
        return len(self._succ)

    @property
    def size(self) -> int:
        return self._size

    def __len__(self) -> int:
        return len(self._succ)

    def __contains__(self, label) -> bool:
        return label in self._succ

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self._succ))

    def has_arc(self, tail: int, head: int) -> bool:
        s = self._succ.get(tail)
        return s is not None and head in s

    def arcs(self) -> list[Arc]:
        """All arcs sorted by ``(tail, head)``."""
        return [(u, v) for u in sorted(self._succ) for v in sorted(self._succ[u])]

    def arc_set(self) -> frozenset[Arc]:
        return frozenset((u, v) for u, s in self._succ.items() for v in s)

    def successors(self, label: int) -> frozenset[int]:
        try:
            return frozenset(self._succ[label])
        except KeyError:
            raise UnknownVertexError(label) from None

    def predecessors(self, label: int) -> frozenset[int]:
        try:
            return frozenset(self._pred[label])
        except KeyError:
            raise UnknownVertexError(label) from None

    def out_degree(self, label: int) -> int:
        return len(self.successors(label))

    def in_degree(self, label: int) -> int:
        return len(self.predecessors(label))

    def asymmetric_arcs(self) -> list[Arc]:
        return [(u, v) for u, v in self.arcs() if u not in self._succ[v]]

    # -- derived digraphs ----------------------------------------------

    def remove_vertex(self, label: int) -> "Digraph":
        if label not in self._succ:
            raise UnknownVertexError(label)
        succ, pred = self._buffers()
        for w in succ.pop(label):
            pred[w].discard(label)
        for w in pred.pop(label):
            succ[w].discard(label)
        return Digraph._adopt(succ, pred)

    def induced(self, labels: Iterable[int]) -> "Digraph":
        keep = set(labels)
        for v in keep:
            if v not in self._succ:
                raise UnknownVertexError(v)
        succ = {v: self._succ[v] & keep for v in keep}
        pred = {v: self._pred[v] & keep for v in keep}
        return Digraph._adopt(succ, pred)

    def relabel(self, mapping) -> "Digraph":
        """Rename vertices through ``mapping`` (a dict or a callable); must be injective."""
        f = mapping.__getitem__ if isinstance(mapping, dict) else mapping
        new = {v: _check_label(f(v)) for v in self._succ}
        if len(set(new.values())) != len(new):
            raise LabelError("relabeling is not injective")
        succ = {new[v]: {new[w] for w in s} for v, s in self._succ.items()}
        pred = {new[v]: {new[w] for w in s} for v, s in self._pred.items()}
        return Digraph._adopt(succ, pred)

    # -- dunder ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self._size == other._size and self._succ == other._succ

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.vertices, self.arc_set()))
        return self._hash

    def __repr__(self) -> str:
        return f"Digraph(order={self.order}, size={self.size})"


def out_neighborhood(D: Digraph, u: int) -> frozenset[int]:
    return D.successors(u)


def in_neighborhood(D: Digraph, u: int) -> frozenset[int]:
    return D.predecessors(u)


def is_independent(D: Digraph, labels: Iterable[int]) -> bool:
    """True iff no arc of ``D`` joins two members of ``labels``."""
    members = set(labels)
    for v in members:
        if v not in D:
            raise UnknownVertexError(v)
    return all(not (D._succ[v] & members) for v in members)


def classify_arc(D: Digraph, u: int, v: int) -> ArcClass:
    if not D.has_arc(u, v):
        raise MissingArcError(u, v)
    return ArcClass.SYMMETRIC if D.has_arc(v, u) else ArcClass.ASYMMETRIC


@lru_cache(maxsize=256)
def symmetric_cycle(n: int) -> Digraph:
    """D(C_n) on labels ``0..n-1``; ``symmetric_cycle(3)`` is D(K_3).

    Digraphs are immutable, so the result is cached and shared.
    """
    if n < 3:
        raise DomainError(f"a symmetric cycle needs at least 3 vertices, got {n}")
    succ = {i: {(i - 1) % n, (i + 1) % n} for i in range(n)}
    pred = {i: set(s) for i, s in succ.items()}
    return Digraph._adopt(succ, pred)


def copy_offset(D: Digraph, offset: int) -> Digraph:
    """Isomorphic copy of ``D`` with every label increased by ``offset``."""
    if D.order and min(D.vertices) + offset < 0:
        raise LabelError(f"offset {offset} produces negative labels")
    return D.relabel(lambda v: v + offset)


def relabel_cyclic(D: Digraph, add: int, modulus: int) -> Digraph:
    """Rotate labels: vertex ``i`` becomes ``(i + add) % modulus``.

    Requires ``V(D) == {0, ..., modulus - 1}``.
    """
    if modulus < 1 or D.order != modulus or any(v >= modulus for v in D._succ):
        raise LabelError(f"relabel_cyclic needs vertex set 0..{modulus - 1}")
    return D.relabel(lambda v: (v + add) % modulus)


# -- text format --------------------------------------------------------------


def format_digraph(D: Digraph) -> str:
    lines = [f"DIGRAPH {D.order} {D.size}"]
    lines.extend(f"V {v}" for v in sorted(D._succ))
    lines.extend(f"A {u} {v}" for u, v in D.arcs())
    return "\n".join(lines) + "\n"


def parse_digraph(text: str) -> Digraph:
    """Inverse of :func:`format_digraph`; raises ``InvalidDigraphError`` on malformed input."""
    lines = text.split("\n")
    if not text.endswith("\n"):
        raise InvalidDigraphError("digraph text must end with a newline")
    lines.pop()
    if not lines:
        raise InvalidDigraphError("empty digraph file")
    head = lines[0].split(" ")
    if len(head) != 3 or head[0] != "DIGRAPH":
        raise InvalidDigraphError("line 1: expected 'DIGRAPH <order> <size>'")
    try:
        order, size = int(head[1]), int(head[2])
    except ValueError:
        raise InvalidDigraphError("line 1: order and size must be integers") from None
    if len(lines) != 1 + order + size:
        raise InvalidDigraphError(
            f"expected {1 + order + size} lines for order {order} and size {size}, got {len(lines)}"
        )
    vertices, arcs = [], []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(" ")
        want_vertex = lineno <= order + 1
        try:
            if want_vertex and len(parts) == 2 and parts[0] == "V":
                vertices.append(int(parts[1]))
                continue
            if not want_vertex and len(parts) == 3 and parts[0] == "A":
                arcs.append((int(parts[1]), int(parts[2])))
                continue
        except ValueError:
            pass
        expected = "'V <label>'" if want_vertex else "'A <tail> <head>'"
        raise InvalidDigraphError(f"line {lineno}: expected {expected}, got {line!r}")
    if vertices != sorted(set(vertices)) or arcs != sorted(set(arcs)):
        raise InvalidDigraphError("vertices and arcs must be listed in strictly ascending order")
    return Digraph(vertices, arcs)
