"""Construction of D(C_N), N odd, from D(K_3) with directed Hajós operations.

The pipeline doubles the order of a symmetric cycle, ``2^t + 1 -> 2^(t+1) + 1``,
through a fixed sequence of stages:

``H0``
    join of ``D(C_{2^t+1})`` with a rotated copy of itself (1 operation);
``H1``
    ``(H0, 0, 2^t) ⊗ (H0', 2^t+1, 0)`` followed by a rotation by one, which
    leaves the symmetric cycle plus the chords ``0->2^t`` and
    ``2^t+2->1``;
``H2 .. H(t+1)``
    chord-doubling steps; with ``x = 2^t + a + 1`` the chord ``x->a`` moves to
    ``x+a -> 2a`` while ``0->2^t`` stays put, until both coincide;
``H(t+2)``
    a last ``⊗`` that removes the remaining chord.

Each ``⊗`` stage on ``M = 2^(t+1) + 1`` vertices costs ``M`` operations (one
join and ``M - 1`` identifications), so a doubling costs ``1 + (t+2)M``.
Odd orders that are not of the form ``2^n + 1`` are reached by collapsing
two alternating vertex sets of the next larger power cycle (2 operations).

Every stage records its steps in a :class:`~hajos.trace.TraceRecorder` and
checks its output against the analytic prediction, raising
:class:`~hajos.exceptions.ShapeError` on any mismatch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from .digraph import Digraph, copy_offset, relabel_cyclic, symmetric_cycle
from .exceptions import DomainError, ShapeError
from .hajos_ops import CyclicSpec, JoinSpec, cyclic_identification, hajos_join, identify_in_place
from .trace import HajosTrace, TraceRecorder, gc_paused

__all__ = [
    "StageState",
    "ConstructionReport",
    "copy_offset",
    "relabel_cyclic",
    "build_h0",
    "build_h1",
    "lemma_step",
    "finalize",
    "double_order",
    "construct_power_cycle",
    "reduce_to_odd",
    "construct_odd_cycle",
    "hajos_bound",
    "complexity_envelope",
    "index_sum",
    "exponent_for",
    "chorded_cycle",
]


@dataclass(frozen=True)
class StageState:
    """Bookkeeping of the doubling procedure at target order ``2^(exponent+1) + 1``.

    The moving chord is ``x -> chord_a`` with ``x = 2^exponent + chord_a + 1``.
    """

    exponent: int
    stage: int
    chord_a: int

    @property
    def modulus(self) -> int:
        return 2 ** (self.exponent + 1) + 1

    @property
    def x(self) -> int:
        return (2**self.exponent + self.chord_a + 1) % self.modulus

    def chords(self) -> set[tuple[int, int]]:
        return {(0, 2**self.exponent), (self.x, self.chord_a % self.modulus)}


@dataclass(frozen=True)
class ConstructionReport:
    target_order: int
    exponent: int
    op_count: int
    bound: int | None
    envelope_low: float | None
    envelope_high: float | None
    stages: tuple[tuple[str, int], ...] = field(default=())

    @property
    def in_envelope(self) -> bool | None:
        if self.envelope_low is None:
            return None
        return self.envelope_low < self.op_count < self.envelope_high

    def as_pairs(self) -> list[tuple[str, str]]:
        def fmt(x):
            if x is None:
                return "na"
            if isinstance(x, bool):
                return "yes" if x else "no"
            if isinstance(x, float):
                return f"{x:.6f}"
            return str(x)

        pairs = [
            ("order", fmt(self.target_order)),
            ("exponent", fmt(self.exponent)),
            ("op_count", fmt(self.op_count)),
            ("bound", fmt(self.bound)),
            ("envelope_low", fmt(self.envelope_low)),
            ("envelope_high", fmt(self.envelope_high)),
            ("in_envelope", fmt(self.in_envelope)),
        ]
        if self.exponent >= 2:
            # The summation Σ_{i=2}^{n} (i+1)(2^i+1) + 1 undercounts the procedure by n - 2.
            pairs.append(("index_sum", fmt(index_sum(self.exponent))))
        return pairs


# -- formulas -------------------------------------------------------------------


def _check_odd(N: int, low: int) -> None:
    if N < low:
        raise DomainError(f"order must be at least {low}, got {N}")
    if N % 2 == 0:
        raise DomainError(f"order must be odd, got {N}")


def exponent_for(N: int) -> int:
    """Smallest ``n`` with ``N <= 2^n + 1``."""
    _check_odd(N, 3)
    return max(1, (N - 2).bit_length())


def _closed_form(n: int) -> int:
    twice = n * (2 ** (n + 2) + n + 5)
    assert twice % 2 == 0
    return twice // 2


def hajos_bound(N: int) -> int:
    """Operations the procedure spends on ``D(C_N)``, ``N >= 5`` odd."""
    _check_odd(N, 5)
    n = exponent_for(N)
    return _closed_form(n) - (7 if N == 2**n + 1 else 5)


def index_sum(n: int) -> int:
    return sum((i + 1) * (2**i + 1) for i in range(2, n + 1)) + 1


def complexity_envelope(N: int) -> tuple[float, float]:
    _check_odd(N, 5)
    low = N * math.log(N)
    return low, 13 * low


def doubling_cost(t: int) -> int:
    """Operations of one doubling ``2^t + 1 -> 2^(t+1) + 1``."""
    return 1 + (t + 2) * (2 ** (t + 1) + 1)


# -- shape helpers ------------------------------------------------------------------


def chorded_cycle(M: int, chords) -> Digraph:
    """``symmetric_cycle(M)`` plus the given extra arcs."""
    base = symmetric_cycle(M)
    return Digraph(range(M), base.arc_set() | set(chords))


def _expect(actual: Digraph, expected: Digraph, what: str) -> None:
    if actual != expected:
        missing = sorted(expected.arc_set() - actual.arc_set())[:4]
        extra = sorted(actual.arc_set() - expected.arc_set())[:4]
        raise ShapeError(f"{what}: missing arcs {missing}, unexpected arcs {extra}")


def _recorder_for(rec: TraceRecorder | None) -> TraceRecorder:
    return rec if rec is not None else TraceRecorder(external=1)


def _cyclic_stage(rec: TraceRecorder, H: Digraph, spec: CyclicSpec) -> Digraph:
    result, plan = cyclic_identification(H, H, spec)
    src = rec.last_id
    dup = rec.copy(src, spec.order)
    g = rec.join(src, dup, plan[0])
    for step in plan[1:]:
        g = rec.ident(g, step.labels, step.target)
    return result


def _exponent_of_cycle(C: Digraph) -> int:
    n = C.order - 1
    if n < 2 or n & (n - 1) or C != symmetric_cycle(C.order):
        raise ShapeError(f"expected a canonical symmetric cycle of order 2^n + 1, got {C!r}")
    return n.bit_length() - 1


# -- stages ---------------------------------------------------------------------


def build_h0(C: Digraph, rec: TraceRecorder | None = None) -> tuple[Digraph, list]:
    """Join ``(C, 2^n, 0) ▽ (C', v'_0, v'_1)`` and name ``v'_i`` as ``2^n + i``.

    The copy is rotated by ``-1`` before offsetting, so after the join its
    vertices already carry the labels ``2^n + 1 .. 2^(n+1)`` and the merged
    ``v'_0`` disappears into ``0``. One counted operation.
    """
    n = _exponent_of_cycle(C)
    rec = _recorder_for(rec)
    start = len(rec.steps)
    half = 2**n
    M = 2 * half + 1
    src = rec.last_id
    rotated = rec.relabel(src, half, half + 1)
    dup = rec.copy(rotated, half + 1)
    spec = JoinSpec(u1=half, v1=0, v2=M, u2=half + 1)
    rec.join(src, dup, spec)
    other = copy_offset(relabel_cyclic(C, half, half + 1), half + 1)
    H0 = hajos_join(C, other, spec)

    path = list(range(half + 1, M)) + list(range(0, half + 1))
    arcs = {(a, b) for a, b in zip(path, path[1:])}
    arcs |= {(b, a) for a, b in arcs}
    arcs |= {(half, half + 1), (0, half), (half + 1, 0)}
    _expect(H0, Digraph(range(M), arcs), "H0")
    return H0, rec.steps[start:]


def build_h1(H0: Digraph, rec: TraceRecorder | None = None) -> tuple[Digraph, list]:
    """``(H0, v_0, v_{2^n}) ⊗ (H0', v'_{2^n+1}, v'_0)``, before the rotation by one."""
    M = H0.order
    half = (M - 1) // 2
    rec = _recorder_for(rec)
    start = len(rec.steps)
    H1 = _cyclic_stage(rec, H0, CyclicSpec(0, half, half + 1, 0, M))
    _expect(H1, chorded_cycle(M, {(2 * half, half - 1), (half + 1, 0)}), "H1")
    return H1, rec.steps[start:]


def lemma_step(
    state: StageState, H: Digraph, rec: TraceRecorder | None = None
) -> tuple[Digraph, StageState, list]:
    """``(H, v_x, v_a) ⊗ (H', v'_0, v'_{2^n})``: moves the chord ``x->a`` to ``x+a -> 2a``."""
    M = state.modulus
    a, x = state.chord_a, state.x
    _expect(H, chorded_cycle(M, state.chords()), f"input of stage H{state.stage + 1}")
    rec = _recorder_for(rec)
    start = len(rec.steps)
    H_next = _cyclic_stage(rec, H, CyclicSpec(x, a % M, 0, 2**state.exponent, M))
    predicted = (H.arc_set() - {(x, a % M)}) | {((x + a) % M, (2 * a) % M)}
    _expect(H_next, Digraph(range(M), predicted), f"stage H{state.stage + 1}")
    new_state = StageState(state.exponent, state.stage + 1, 2 * a)
    return H_next, new_state, rec.steps[start:]


def finalize(H: Digraph, n: int, rec: TraceRecorder | None = None) -> tuple[Digraph, list]:
    """``(H, v_0, v_{2^n}) ⊗ (H', v'_0, v'_{2^n})``; removes the last chord ``0->2^n``."""
    M = 2 ** (n + 1) + 1
    _expect(H, chorded_cycle(M, {(0, 2**n)}), "input of the final stage")
    rec = _recorder_for(rec)
    start = len(rec.steps)
    out = _cyclic_stage(rec, H, CyclicSpec(0, 2**n, 0, 2**n, M))
    _expect(out, symmetric_cycle(M), "final stage")
    return out, rec.steps[start:]


def _double(C: Digraph, rec: TraceRecorder) -> tuple[Digraph, list[tuple[str, int]]]:
    n = _exponent_of_cycle(C)
    M = 2 ** (n + 1) + 1
    stages = []

    def mark(name, before):
        stages.append((f"t{n}:{name}", rec.ops - before))

    before = rec.ops
    H, _ = build_h0(C, rec)
    mark("H0", before)

    before = rec.ops
    H, _ = build_h1(H, rec)
    rec.relabel(rec.last_id, 1, M)
    H = relabel_cyclic(H, 1, M)
    mark("H1", before)

    state = StageState(exponent=n, stage=1, chord_a=1)
    for _ in range(n):
        before = rec.ops
        H, state, _ = lemma_step(state, H, rec)
        mark(f"H{state.stage}", before)
    if state.chord_a != 2**n:
        raise ShapeError(f"chord parameter ended at {state.chord_a}, expected {2**n}")

    before = rec.ops
    H, _ = finalize(H, n, rec)
    mark(f"H{n + 2}", before)
    return H, stages


def double_order(C: Digraph, rec: TraceRecorder | None = None) -> tuple[Digraph, list, int]:
    """Build ``D(C_{2^(n+1)+1})`` from ``C = D(C_{2^n+1})``.

    Returns the new cycle, the recorded steps and the number of counted
    operations, which is always ``1 + (n+2)(2^(n+1)+1)``.
    """
    rec = _recorder_for(rec)
    start, before = len(rec.steps), rec.ops
    H, _ = _double(C, rec)
    return H, rec.steps[start:], rec.ops - before


@lru_cache(maxsize=None)
def _power_chain(n: int) -> tuple[Digraph, tuple, tuple, int]:
    if n == 1:
        rec = TraceRecorder()
        rec.base((0, 1, 2))
        return symmetric_cycle(3), tuple(rec.steps), (), 0
    C, steps, stages, ops = _power_chain(n - 1)
    rec = TraceRecorder.resume(steps, ops)
    D, more = _double(C, rec)
    return D, tuple(rec.steps), stages + tuple(more), rec.ops


def _resume(n: int) -> tuple[Digraph, TraceRecorder, tuple]:
    C, steps, stages, ops = _power_chain(n)
    return C, TraceRecorder.resume(steps, ops), stages


@gc_paused
def construct_power_cycle(n: int) -> tuple[Digraph, HajosTrace, ConstructionReport]:
    """``D(C_{2^n+1})`` from ``D(K_3)`` by doubling ``n - 1`` times."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise DomainError(f"exponent must be an integer >= 2, got {n!r}")
    D, rec, stages = _resume(n)
    N = 2**n + 1
    trace = rec.end(rec.last_id, N, rec.ops)
    low, high = complexity_envelope(N)
    report = ConstructionReport(N, n, rec.ops, hajos_bound(N), low, high, stages)
    return D, trace, report


def reduce_to_odd(C: Digraph, m: int, rec: TraceRecorder | None = None) -> tuple[Digraph, list]:
    """Collapse ``D(C_{2^n+1})`` to ``D(C_{2m+1})`` with two identifications.

    ``{2m, 2m+2, .., 2^n}`` merges into ``2m`` and ``{2m+1, 2m+3, .., 2^n - 1, 0}``
    merges into ``0``, which leaves exactly ``symmetric_cycle(2m+1)``.
    """
    n = _exponent_of_cycle(C)
    if isinstance(m, bool) or not isinstance(m, int) or not 1 <= m < 2 ** (n - 1):
        raise DomainError(f"m must satisfy 1 <= m < {2 ** (n - 1)}, got {m!r}")
    rec = _recorder_for(rec)
    start = len(rec.steps)
    N0 = C.order
    evens = list(range(2 * m, N0, 2))
    odds = [v % N0 for v in range(2 * m + 1, N0 + 1, 2)]
    succ, pred = C._buffers()
    identify_in_place(succ, pred, evens, 2 * m)
    rec.ident(rec.last_id, evens, 2 * m)
    identify_in_place(succ, pred, odds, 0)
    rec.ident(rec.last_id, odds, 0)
    D = Digraph._adopt(succ, pred)
    _expect(D, symmetric_cycle(2 * m + 1), f"reduction to order {2 * m + 1}")
    return D, rec.steps[start:]


@gc_paused
def construct_odd_cycle(N: int) -> tuple[Digraph, HajosTrace, ConstructionReport]:
    """``D(C_N)`` for odd ``N >= 3`` using the smallest covering power cycle."""
    if isinstance(N, bool) or not isinstance(N, int):
        raise DomainError(f"order must be an integer, got {N!r}")
    _check_odd(N, 3)
    if N == 3:
        rec = TraceRecorder()
        g = rec.base((0, 1, 2))
        trace = rec.end(g, 3, 0)
        return symmetric_cycle(3), trace, ConstructionReport(3, 1, 0, None, None, None, ())
    n = exponent_for(N)
    if N == 2**n + 1:
        return construct_power_cycle(n)
    C, rec, stages = _resume(n)
    D, _ = reduce_to_odd(C, (N - 1) // 2, rec)
    trace = rec.end(rec.last_id, N, rec.ops)
    low, high = complexity_envelope(N)
    report = ConstructionReport(N, n, rec.ops, hajos_bound(N), low, high, stages + (("reduce", 2),))
    return D, trace, report


@gc_paused
def reduce_power_cycle(n: int, m: int) -> tuple[Digraph, HajosTrace, ConstructionReport]:
    """``D(C_{2m+1})`` through ``D(C_{2^n+1})`` for an explicitly chosen ``n``."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise DomainError(f"exponent must be an integer >= 2, got {n!r}")
    C, rec, stages = _resume(n)
    D, _ = reduce_to_odd(C, m, rec)
    N = 2 * m + 1
    trace = rec.end(rec.last_id, N, rec.ops)
    if N >= 5:
        low, high = complexity_envelope(N)
        bound = hajos_bound(N)
    else:
        low = high = bound = None
    report = ConstructionReport(N, n, rec.ops, bound, low, high, stages + (("reduce", 2),))
    return D, trace, report
