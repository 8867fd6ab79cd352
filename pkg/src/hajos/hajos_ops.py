"""Directed Hajós operations.

Three operations act on :class:`~hajos.digraph.Digraph` values:

* :func:`identify` merges an independent vertex set into one vertex;
* :func:`hajos_join` is the directed Hajós join of two disjoint digraphs;
* :func:`cyclic_identification` is a join of two digraphs of the same order
  followed by the ``n - 1`` index-shifted identifications that fold the second
  operand onto the first.

Each public function copies its input, runs an in-place kernel on the copy and
seals the result. The kernels are also used by :func:`hajos.trace.replay`,
which owns its intermediate digraphs and can skip the copies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from .digraph import Digraph
from .exceptions import (
    CyclicSpecError,
    DependentSetError,
    LabelCollisionError,
    LabelError,
    MissingArcError,
    UnknownVertexError,
)

Adjacency = dict[int, set[int]]


@dataclass(frozen=True)
class JoinSpec:
    """Join ``(D1, u1, v1) ▽ (D2, v2, u2)``: arcs ``u1->v1`` and ``v2->u2`` are removed."""

    u1: int
    v1: int
    v2: int
    u2: int


@dataclass(frozen=True)
class IdentSpec:
    labels: tuple[int, ...]
    target: int


@dataclass(frozen=True)
class CyclicSpec:
    """Parameters of ``(D, v_i, v_j) ⊗ (D', v'_k, v'_l)`` for digraphs of order ``order``."""

    i: int
    j: int
    k: int
    l: int  # noqa: E741
    order: int

    def __post_init__(self):
        n = self.order
        if n < 2:
            raise CyclicSpecError(f"order must be at least 2, got {n}")
        for name in ("i", "j", "k", "l"):
            value = getattr(self, name)
            if not 0 <= value < n:
                raise CyclicSpecError(f"index {name}={value} outside 0..{n - 1}")
        if self.i == self.j or self.k == self.l:
            raise CyclicSpecError("i != j and k != l are required")

    @property
    def degenerate(self) -> bool:
        """True when ``j - i ≡ k - l (mod n)``: the added arc would become a loop at ``v_i``."""
        return (self.j - self.i - self.k + self.l) % self.order == 0

    def shift(self, a: int) -> int:
        """Index in ``D`` that vertex ``v'_a`` of the second operand is folded onto."""
        return (a - self.k + self.j) % self.order


Step = Union[JoinSpec, IdentSpec]


# -- in-place kernels ---------------------------------------------------------


def check_identification(succ: Adjacency, labels: Iterable[int], target: int) -> frozenset[int]:
    members = frozenset(labels)
    if not members:
        raise LabelError("cannot identify an empty set")
    for v in members:
        if v not in succ:
            raise UnknownVertexError(v)
    if target not in members:
        raise LabelError(f"target {target} is not a member of the identified set")
    for v in members:
        hit = succ[v] & members
        if hit:
            raise DependentSetError(f"vertices {v} and {min(hit)} are adjacent")
    return members


def _merge_into(succ: Adjacency, pred: Adjacency, u: int, target: int) -> None:
    out_t, in_t = succ[target], pred[target]
    for w in succ.pop(u):
        p = pred[w]
        p.discard(u)
        p.add(target)
        out_t.add(w)
    for w in pred.pop(u):
        s = succ[w]
        s.discard(u)
        s.add(target)
        in_t.add(w)


def identify_in_place(succ: Adjacency, pred: Adjacency, labels: Iterable[int], target: int) -> None:
    if isinstance(labels, tuple) and len(labels) == 2:
        # Pairs dominate every construction; same checks, no set building.
        a, b = labels
        sa, sb = succ.get(a), succ.get(b)
        if a != b and sa is not None and sb is not None and (target == a or target == b):
            if b in sa or a in sb:
                raise DependentSetError(f"vertices {a} and {b} are adjacent")
            u = b if target == a else a
            out_t, in_t = succ[target], pred[target]
            for w in succ.pop(u):
                p = pred[w]
                p.discard(u)
                p.add(target)
            out_t |= sb if u == b else sa
            for w in pred.pop(u):
                s = succ[w]
                s.discard(u)
                s.add(target)
                in_t.add(w)
            return
    members = check_identification(succ, labels, target)
    for u in members:
        if u != target:
            _merge_into(succ, pred, u, target)


def join_in_place(
    succ1: Adjacency, pred1: Adjacency, succ2: Adjacency, pred2: Adjacency, spec: JoinSpec
) -> None:
    """Join the second digraph into the first; the second pair of maps is consumed."""
    u1, v1, v2, u2 = spec.u1, spec.v1, spec.v2, spec.u2
    if u1 not in succ1 or v1 not in succ1[u1]:
        raise MissingArcError(u1, v1)
    if v2 not in succ2 or u2 not in succ2[v2]:
        raise MissingArcError(v2, u2)
    small, big = (succ1, succ2) if len(succ1) <= len(succ2) else (succ2, succ1)
    shared = [v for v in small if v in big]
    if shared:
        raise LabelCollisionError(f"operands share labels {sorted(shared)[:5]}")
    succ1[u1].discard(v1)
    pred1[v1].discard(u1)
    succ2[v2].discard(u2)
    pred2[u2].discard(v2)
    succ1.update(succ2)
    pred1.update(pred2)
    identify_in_place(succ1, pred1, (v1, v2), v1)
    succ1[u1].add(u2)
    pred1[u2].add(u1)


# -- public operations --------------------------------------------------------


def identify(D: Digraph, labels: Iterable[int], target: int) -> Digraph:
    """Merge the independent set ``labels`` into a single vertex named ``target``.

    The merged vertex receives every out-arc and in-arc of the set members.
    Raises :class:`DependentSetError` if two members are adjacent and
    :class:`LabelError` if ``target`` is not a member.
    """
    succ, pred = D._buffers()
    identify_in_place(succ, pred, labels, target)
    return Digraph._adopt(succ, pred)


def hajos_join(D1: Digraph, D2: Digraph, spec: JoinSpec) -> Digraph:
    """Directed Hajós join ``(D1, u1, v1) ▽ (D2, v2, u2)``.

    Deletes ``u1->v1`` and ``v2->u2``, merges ``v2`` into ``v1`` (the merged
    vertex keeps the label ``v1``) and adds ``u1->u2``. Label sets must be
    disjoint; use :func:`hajos.digraph.copy_offset` to make them so.
    """
    succ1, pred1 = D1._buffers()
    succ2, pred2 = D2._buffers()
    join_in_place(succ1, pred1, succ2, pred2, spec)
    return Digraph._adopt(succ1, pred1)


def cyclic_plan(spec: CyclicSpec) -> list[Step]:
    """The join and identifications of ``D ⊗ D'`` with ``D'`` relabeled ``a -> a + n``."""
    n, i, j, k, l = spec.order, spec.i, spec.j, spec.k, spec.l
    steps: list[Step] = [JoinSpec(u1=i, v1=j, v2=n + k, u2=n + l)]
    for r in range(1, n):
        mine = (j + r) % n
        theirs = n + (k + r) % n
        steps.append(IdentSpec((mine, theirs), mine))
    return steps


def _check_canonical(D: Digraph, n: int, name: str) -> None:
    if D.order != n or any(v >= n for v in D._succ):
        raise CyclicSpecError(f"{name} must have vertex set 0..{n - 1}")


def cyclic_identification(
    D: Digraph, Dp: Digraph, spec: CyclicSpec, literal: bool = False
) -> tuple[Digraph, list[Step]]:
    """Cyclic Hajós identification ``(D, v_i, v_j) ⊗ (Dp, v'_k, v'_l)``.

    Both operands are given with labels ``0..n-1``; the second is treated as
    relabeled by ``+n`` so the operands are disjoint. Returns the result on
    labels ``0..n-1`` and the operation plan (one :class:`JoinSpec`, then
    ``n - 1`` :class:`IdentSpec`) in terms of those shifted labels.

    By default the result is computed by transporting arcs: every surviving
    arc ``b->a`` of ``Dp`` lands on ``shift(b)->shift(a)`` with
    ``shift(x) = x - k + j (mod n)``, and the join adds ``i->shift(l)``.
    With ``literal=True`` the plan is executed step by step instead; an
    adjacent pair then raises :class:`DependentSetError` whose ``step`` is
    the offending ``r``.
    """
    n = spec.order
    _check_canonical(D, n, "D")
    _check_canonical(Dp, n, "Dp")
    if not D.has_arc(spec.i, spec.j):
        raise MissingArcError(spec.i, spec.j)
    if not Dp.has_arc(spec.k, spec.l):
        raise MissingArcError(spec.k, spec.l)
    plan = cyclic_plan(spec)

    if literal:
        succ, pred = D._buffers()
        other = Dp.relabel(lambda v: v + n)
        succ2, pred2 = other._buffers()
        join_in_place(succ, pred, succ2, pred2, plan[0])
        for r, step in enumerate(plan[1:], start=1):
            try:
                identify_in_place(succ, pred, step.labels, step.target)
            except DependentSetError as exc:
                raise DependentSetError(f"identification r={r}: {exc}", step=r) from None
        return Digraph._adopt(succ, pred), plan

    if spec.degenerate:
        r = (spec.l - spec.k) % n
        raise CyclicSpecError(
            f"j - i ≡ k - l (mod {n}): identification r={r} would merge the ends of the added arc"
        )
    succ, pred = D._buffers()
    succ[spec.i].discard(spec.j)
    pred[spec.j].discard(spec.i)
    shift = [spec.shift(a) for a in range(n)]
    for b, heads in Dp._succ.items():
        sb = shift[b]
        out_b = succ[sb]
        for a in heads:
            if b == spec.k and a == spec.l:
                continue
            sa = shift[a]
            out_b.add(sa)
            pred[sa].add(sb)
    end = shift[spec.l]
    succ[spec.i].add(end)
    pred[end].add(spec.i)
    return Digraph._adopt(succ, pred), plan
