"""Construction certificates: recording, text serialization and replay.

A trace is a single-assignment program over digraph ids. Every step reads
previously defined ids and defines exactly one fresh id (``END`` defines
none). Only ``JOIN`` and ``IDENT`` count as Hajós operations.

Text form, one step per line, LF endings::

    HAJOS-TRACE 1
    BASE g<id> K3 <a> <b> <c>
    COPY g<src> g<dst> OFFSET <d>
    JOIN g<A> <u1> <v1> g<B> <v2> <u2> g<out>
    IDENT g<id> <l1>,<l2>[,...] <target> g<out>
    RELABEL g<id> ADD <c> MOD <M> g<out>
    END g<id> ORDER <N> OPS <X>
"""

from __future__ import annotations

import functools
import gc
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Union

from . import hajos_ops
from .digraph import Digraph, symmetric_cycle
from .exceptions import (
    HajosError,
    LabelError,
    ReplayError,
    TraceSemanticError,
    TraceSyntaxError,
    VerificationError,
)

HEADER = "HAJOS-TRACE 1"


def gc_paused(func):
    """Run ``func`` with the cyclic garbage collector switched off.

    Certificates allocate many small acyclic objects; generational scans
    over them (and over cached traces) cost more than the work itself.
    """

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        enabled = gc.isenabled()
        gc.disable()
        try:
            return func(*args, **kwargs)
        finally:
            if enabled:
                gc.enable()

    return wrapper


@dataclass(frozen=True)
class Base:
    out: int
    labels: tuple[int, int, int]
    kind = "BASE"
    counted = False

    @property
    def reads(self):
        return ()

    @functools.cached_property
    def line(self) -> str:
        a, b, c = self.labels
        return f"BASE g{self.out} K3 {a} {b} {c}"


@dataclass(frozen=True)
class Copy:
    src: int
    out: int
    offset: int
    kind = "COPY"
    counted = False

    @property
    def reads(self):
        return (self.src,)

    @functools.cached_property
    def line(self) -> str:
        return f"COPY g{self.src} g{self.out} OFFSET {self.offset}"


@dataclass(frozen=True)
class Join:
    left: int
    u1: int
    v1: int
    right: int
    v2: int
    u2: int
    out: int
    kind = "JOIN"
    counted = True

    @property
    def reads(self):
        return (self.left, self.right)

    @functools.cached_property
    def line(self) -> str:
        return (
            f"JOIN g{self.left} {self.u1} {self.v1} g{self.right} {self.v2} {self.u2} g{self.out}"
        )


@dataclass(frozen=True)
class Ident:
    src: int
    labels: tuple[int, ...]
    target: int
    out: int
    kind = "IDENT"
    counted = True

    @property
    def reads(self):
        return (self.src,)

    @functools.cached_property
    def line(self) -> str:
        members = ",".join(map(str, self.labels))
        return f"IDENT g{self.src} {members} {self.target} g{self.out}"


@dataclass(frozen=True)
class Relabel:
    src: int
    add: int
    modulus: int
    out: int
    kind = "RELABEL"
    counted = False

    @property
    def reads(self):
        return (self.src,)

    @functools.cached_property
    def line(self) -> str:
        return f"RELABEL g{self.src} ADD {self.add} MOD {self.modulus} g{self.out}"


@dataclass(frozen=True)
class End:
    src: int
    order: int
    ops: int
    kind = "END"
    counted = False
    out = None

    @property
    def reads(self):
        return (self.src,)

    @functools.cached_property
    def line(self) -> str:
        return f"END g{self.src} ORDER {self.order} OPS {self.ops}"


TraceStep = Union[Base, Copy, Join, Ident, Relabel, End]


def _check_step(step: TraceStep, defined: set[int], index: int, ended: bool) -> None:
    if ended:
        raise TraceSemanticError("step after END", index)
    for ref in step.reads:
        if ref not in defined:
            raise TraceSemanticError(f"g{ref} is not defined", index)
    if step.out is not None and step.out in defined:
        raise TraceSemanticError(f"g{step.out} is defined twice", index)
    if isinstance(step, Ident):
        labels = step.labels
        if len(labels) < 2 or any(a >= b for a, b in zip(labels, labels[1:])):
            raise TraceSemanticError("IDENT set must list at least two labels in ascending order", index)
    if isinstance(step, Relabel) and step.modulus < 1:
        raise TraceSemanticError("RELABEL modulus must be positive", index)


@dataclass(frozen=True)
class HajosTrace:
    """An ordered certificate; normally terminated by an :class:`End` step."""

    steps: tuple[TraceStep, ...] = ()

    @property
    def ops(self) -> int:
        return sum(1 for s in self.steps if s.counted)

    @property
    def end(self) -> End | None:
        if self.steps and isinstance(self.steps[-1], End):
            return self.steps[-1]
        return None

    @property
    def final_id(self) -> int | None:
        if self.end is not None:
            return self.end.src
        for step in reversed(self.steps):
            if step.out is not None:
                return step.out
        return None

    @property
    def declared_order(self) -> int | None:
        return self.end.order if self.end else None

    @property
    def declared_ops(self) -> int | None:
        return self.end.ops if self.end else None

    def __len__(self) -> int:
        return len(self.steps)


def record(step: TraceStep, trace: HajosTrace) -> HajosTrace:
    """Return ``trace`` extended by ``step`` after checking its id references."""
    defined = {s.out for s in trace.steps if s.out is not None}
    _check_step(step, defined, len(trace.steps), trace.end is not None)
    return HajosTrace(trace.steps + (step,))


class TraceRecorder:
    """Mutable builder used by the construction pipeline.

    ``external`` ids ``0..external-1`` are treated as given inputs, which
    lets a stage be recorded on its own. ``last_id`` follows the most
    recently defined digraph.
    """

    def __init__(self, steps: Iterable[TraceStep] = (), external: int = 0):
        self.steps: list[TraceStep] = []
        self._defined: set[int] = set(range(external))
        self._next = external
        self.last_id: int | None = external - 1 if external else None
        self.ops = 0
        for step in steps:
            self.add(step)

    @classmethod
    def resume(cls, steps: tuple[TraceStep, ...], ops: int | None = None) -> "TraceRecorder":
        """Continue a prefix recorded from scratch by another recorder.

        The prefix is trusted: ids are assumed to be ``0..k`` in order, so it
        is not re-validated.
        """
        rec = cls()
        rec.steps = list(steps)
        rec.last_id = next((s.out for s in reversed(steps) if s.out is not None), None)
        rec._next = 0 if rec.last_id is None else rec.last_id + 1
        rec._defined = set(range(rec._next))
        rec.ops = sum(1 for s in steps if s.counted) if ops is None else ops
        return rec

    def add(self, step: TraceStep) -> TraceStep:
        _check_step(step, self._defined, len(self.steps), False)
        self.steps.append(step)
        if step.counted:
            self.ops += 1
        if step.out is not None:
            self._defined.add(step.out)
            self._next = max(self._next, step.out + 1)
            self.last_id = step.out
        return step

    def _fresh(self) -> int:
        return self._next

    def base(self, labels=(0, 1, 2)) -> int:
        return self.add(Base(self._fresh(), tuple(labels))).out

    def copy(self, src: int, offset: int) -> int:
        return self.add(Copy(src, self._fresh(), offset)).out

    def join(self, left: int, right: int, spec: hajos_ops.JoinSpec) -> int:
        return self.add(Join(left, spec.u1, spec.v1, right, spec.v2, spec.u2, self._fresh())).out

    def ident(self, src: int, labels: Iterable[int], target: int) -> int:
        return self.add(Ident(src, tuple(sorted(labels)), target, self._fresh())).out

    def relabel(self, src: int, add: int, modulus: int) -> int:
        return self.add(Relabel(src, add, modulus, self._fresh())).out

    def end(self, src: int, order: int, ops: int) -> HajosTrace:
        self.add(End(src, order, ops))
        return self.freeze()

    def freeze(self) -> HajosTrace:
        return HajosTrace(tuple(self.steps))


# -- serialization ------------------------------------------------------------

_GRAMMAR = {
    "BASE": "BASE g{n} K3 {n} {n} {n}",
    "COPY": "COPY g{n} g{n} OFFSET {n}",
    "JOIN": "JOIN g{n} {n} {n} g{n} {n} {n} g{n}",
    "IDENT": "IDENT g{n} ({n}(?:,{n})+) {n} g{n}",
    "RELABEL": "RELABEL g{n} ADD {n} MOD {n} g{n}",
    "END": "END g{n} ORDER {n} OPS {n}",
}
_NUM = "(0|[1-9][0-9]*)"
_PATTERNS = {k: re.compile(v.format(n=_NUM)) for k, v in _GRAMMAR.items()}
# The same grammar without groups, used to vet a whole body in one pass.
_BODY = re.compile(
    "(?:(?:"
    + "|".join(v.replace("(", "(?:", 1).format(n="(?:0|[1-9][0-9]*)") if k == "IDENT" else v.format(n="(?:0|[1-9][0-9]*)") for k, v in _GRAMMAR.items())
    + ")\n)*"
)


@gc_paused
def serialize(trace: HajosTrace) -> str:
    return "\n".join([HEADER, *(s.line for s in trace.steps)]) + "\n"


def _parse_line(line: str, lineno: int) -> TraceStep:
    keyword = line.split(" ", 1)[0]
    pattern = _PATTERNS.get(keyword)
    m = pattern.fullmatch(line) if pattern is not None else None
    if m is None:
        raise TraceSyntaxError(f"malformed step {line!r}", lineno)
    g = m.groups()
    if keyword == "IDENT":
        # group layout: src, set, (first member, last repeated member), target, out
        return Ident(int(g[0]), tuple(map(int, g[1].split(","))), int(g[-2]), int(g[-1]))
    n = tuple(map(int, g))
    if keyword == "JOIN":
        return Join(*n)
    if keyword == "COPY":
        return Copy(*n)
    if keyword == "RELABEL":
        return Relabel(*n)
    if keyword == "BASE":
        return Base(n[0], n[1:])
    return End(*n)


@gc_paused
def parse(text: str) -> HajosTrace:
    """Parse the text form; syntax errors carry the 1-based line number."""
    if not text:
        raise TraceSyntaxError("empty trace", 1)
    lines = text.split("\n")
    if lines[-1] != "":
        raise TraceSyntaxError(
            f"truncated input: no newline after line {len(lines)} (last good line {len(lines) - 1})",
            len(lines),
        )
    lines.pop()
    if lines[0] != HEADER:
        raise TraceSyntaxError(f"expected header {HEADER!r}", 1)
    steps: list[TraceStep] = []
    defined: set[int] = set()
    ended = False
    # When the whole body is well formed, IDENT lines (the bulk of every
    # certificate) are split instead of matched; anything unusual falls back
    # to the line parser and the full check for its error message.
    vetted = _BODY.fullmatch(text, len(HEADER) + 1) is not None
    for lineno, line in enumerate(lines[1:], start=2):
        if vetted and not ended and line.startswith("IDENT "):
            _, src, members, target, out = line.split(" ")
            src, out = int(src[1:]), int(out[1:])
            labels = tuple(map(int, members.split(",")))
            step = Ident(src, labels, int(target), out)
            if src in defined and out not in defined and (
                labels[0] < labels[1] if len(labels) == 2 else all(a < b for a, b in zip(labels, labels[1:]))
            ):
                defined.add(out)
                steps.append(step)
                continue
        else:
            step = _parse_line(line, lineno)
        _check_step(step, defined, len(steps), ended)
        if step.out is not None:
            defined.add(step.out)
        ended = isinstance(step, End)
        steps.append(step)
    return HajosTrace(tuple(steps))


def write_trace(trace: HajosTrace, path) -> None:
    Path(path).write_text(serialize(trace), encoding="ascii", newline="\n")


def read_trace(path) -> HajosTrace:
    return parse(Path(path).read_text(encoding="ascii"))


# -- replay -------------------------------------------------------------------


def _k3(labels) -> tuple[dict, dict]:
    if len(set(labels)) != 3:
        raise LabelError("BASE labels must be distinct")
    succ = {v: {w for w in labels if w != v} for v in labels}
    pred = {v: set(s) for v, s in succ.items()}
    return succ, pred


@gc_paused
def replay(trace: HajosTrace) -> tuple[Digraph, int]:
    """Execute every step literally and return ``(final digraph, counted ops)``.

    Joins and identifications go through the kernels of
    :mod:`hajos.hajos_ops`; nothing about the construction that produced the
    trace is assumed. Each intermediate digraph is edited in place when the
    step reading it is its last reader, and copied otherwise.
    """
    last_read: dict[int, int] = {}
    for index, step in enumerate(trace.steps):
        for ref in step.reads:
            last_read[ref] = index

    store: dict[int, tuple[dict, dict]] = {}

    def take(ref: int, index: int) -> tuple[dict, dict]:
        if last_read[ref] == index:
            return store.pop(ref)
        succ, pred = store[ref]
        return {v: set(s) for v, s in succ.items()}, {v: set(s) for v, s in pred.items()}

    ops = 0
    result = None
    identify = hajos_ops.identify_in_place
    for index, step in enumerate(trace.steps):
        try:
            if type(step) is Ident:
                # Hot path: most steps are identifications of the last digraph.
                src = step.src
                bufs = store.pop(src) if last_read[src] == index else take(src, index)
                identify(bufs[0], bufs[1], step.labels, step.target)
                store[step.out] = bufs
                ops += 1
                continue
            if isinstance(step, Join):
                if step.left == step.right:
                    raise hajos_ops.LabelCollisionError("a digraph cannot be joined with itself")
                left = take(step.left, index)
                right = take(step.right, index)
                spec = hajos_ops.JoinSpec(step.u1, step.v1, step.v2, step.u2)
                hajos_ops.join_in_place(*left, *right, spec)
                store[step.out] = left
                ops += 1
            elif isinstance(step, Copy):
                succ, pred = store[step.src]
                off = step.offset
                store[step.out] = (
                    {v + off: {w + off for w in s} for v, s in succ.items()},
                    {v + off: {w + off for w in s} for v, s in pred.items()},
                )
                if last_read[step.src] == index:
                    del store[step.src]
            elif isinstance(step, Relabel):
                succ, pred = store[step.src]
                m, c = step.modulus, step.add
                if len(succ) != m or any(v >= m for v in succ):
                    raise LabelError(f"RELABEL needs vertex set 0..{m - 1}")
                store[step.out] = (
                    {(v + c) % m: {(w + c) % m for w in s} for v, s in succ.items()},
                    {(v + c) % m: {(w + c) % m for w in s} for v, s in pred.items()},
                )
                if last_read[step.src] == index:
                    del store[step.src]
            elif isinstance(step, Base):
                store[step.out] = _k3(step.labels)
            elif isinstance(step, End):
                result = Digraph._adopt(*take(step.src, index))
        except HajosError as exc:
            raise ReplayError(index, exc) from exc
        except KeyError as exc:
            raise ReplayError(index, f"g{exc.args[0]} is no longer available") from exc
    if result is None and trace.steps and trace.steps[-1].out is not None:
        result = Digraph._adopt(*store[trace.steps[-1].out])
    if result is None:
        raise ReplayError(len(trace.steps), "trace defines no digraph")
    return result, ops


def verify(trace: HajosTrace) -> tuple[Digraph, int]:
    """Replay ``trace`` and check its END declarations.

    The final digraph must equal ``symmetric_cycle(ORDER)`` label for label
    and the number of counted steps must equal ``OPS``.
    """
    end = trace.end
    if end is None:
        raise VerificationError("trace has no END step", len(trace.steps))
    final, ops = replay(trace)
    index = len(trace.steps) - 1
    if ops != end.ops:
        raise VerificationError(f"trace performs {ops} operations, END declares {end.ops}", index)
    if final.order != end.order:
        raise VerificationError(f"final digraph has order {final.order}, END declares {end.order}", index)
    if end.order < 3 or final != symmetric_cycle(end.order):
        raise VerificationError(f"final digraph is not D(C_{end.order}) on labels 0..{end.order - 1}", index)
    return final, ops
