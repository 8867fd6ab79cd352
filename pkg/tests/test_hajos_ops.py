import itertools

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from hajos.analysis import dichromatic_number
from hajos.digraph import Digraph, copy_offset, is_independent, symmetric_cycle
from hajos.exceptions import (
    CyclicSpecError,
    DependentSetError,
    LabelCollisionError,
    LabelError,
    MissingArcError,
    UnknownVertexError,
)
from hajos.hajos_ops import (
    CyclicSpec,
    IdentSpec,
    JoinSpec,
    cyclic_identification,
    hajos_join,
    identify,
)

from .conftest import digraphs, directed_triangle


# -- oracles: the definitions executed on plain arc lists ----------------------


def identify_by_definition(D, members, target):
    rename = {v: target for v in members}
    verts = {rename.get(v, v) for v in D.vertices}
    arcs = {(rename.get(u, u), rename.get(v, v)) for u, v in D.arcs()}
    return verts, arcs


def join_by_definition(D1, D2, u1, v1, v2, u2):
    kept = [a for a in D1.arcs() if a != (u1, v1)] + [a for a in D2.arcs() if a != (v2, u2)]
    r = lambda x: v1 if x == v2 else x  # noqa: E731
    verts = (D1.vertices | D2.vertices) - {v2}
    arcs = {(r(a), r(b)) for a, b in kept} | {(u1, u2)}
    return verts, arcs


def literal_cyclic(D, Dp, i, j, k, l):
    """Join then the n-1 shifted identifications, using only the public operations."""
    n = D.order
    H = hajos_join(D, copy_offset(Dp, n), JoinSpec(i, j, n + k, n + l))
    for r in range(1, n):
        H = identify(H, {(j + r) % n, n + (k + r) % n}, (j + r) % n)
    return H


# -- identify --------------------------------------------------------------------


def test_identify_c5_pair():
    H = identify(symmetric_cycle(5), {2, 4}, 2)
    assert H.vertices == {0, 1, 2, 3}
    assert H.successors(2) == H.predecessors(2) == {0, 1, 3}
    verts, arcs = identify_by_definition(symmetric_cycle(5), {2, 4}, 2)
    assert H.vertices == verts and H.arc_set() == arcs


def test_identify_singleton_is_identity():
    D = symmetric_cycle(7)
    for v in range(7):
        assert identify(D, {v}, v) == D


def test_identify_twice_gives_k3():
    H = identify(identify(symmetric_cycle(5), {2, 4}, 2), {3, 0}, 3)
    assert H == Digraph([1, 2, 3], [(1, 2), (2, 1), (2, 3), (3, 2), (1, 3), (3, 1)])


def test_identify_errors():
    c5 = symmetric_cycle(5)
    with pytest.raises(DependentSetError):
        identify(c5, {0, 1}, 0)
    with pytest.raises(UnknownVertexError):
        identify(c5, {0, 9}, 0)
    with pytest.raises(LabelError):
        identify(c5, {0, 2}, 4)
    with pytest.raises(LabelError):
        identify(c5, set(), 0)


@given(digraphs(max_order=9), st.data())
def test_identify_properties(D, data):
    members = data.draw(st.sets(st.sampled_from(sorted(D.vertices)), min_size=1, max_size=4))
    assume(is_independent(D, members))
    target = data.draw(st.sampled_from(sorted(members)))
    H = identify(D, members, target)
    assert H.order == D.order - len(members) + 1
    out_union = set().union(*(D.successors(v) for v in members))
    in_union = set().union(*(D.predecessors(v) for v in members))
    assert H.successors(target) == out_union - members
    assert H.predecessors(target) == in_union - members
    untouched = {(u, v) for u, v in D.arcs() if u not in members and v not in members}
    assert untouched <= H.arc_set()
    verts, arcs = identify_by_definition(D, members, target)
    assert H.vertices == verts and H.arc_set() == arcs


# -- join --------------------------------------------------------------------------


def test_join_two_directed_triangles_is_directed_5_cycle():
    D1 = directed_triangle(0)  # 0->1->2->0, delete 2->0
    D2 = directed_triangle(3)  # 3->4->5->3, delete 3->4
    H = hajos_join(D1, D2, JoinSpec(u1=2, v1=0, v2=3, u2=4))
    assert H == Digraph([0, 1, 2, 4, 5], [(0, 1), (1, 2), (2, 4), (4, 5), (5, 0)])


def test_join_single_arcs():
    H = hajos_join(Digraph([0, 1], [(0, 1)]), Digraph([2, 3], [(2, 3)]), JoinSpec(0, 1, 2, 3))
    assert H == Digraph([0, 1, 3], [(0, 3)])


def test_join_two_k3():
    D1, D2 = symmetric_cycle(3), copy_offset(symmetric_cycle(3), 3)
    H = hajos_join(D1, D2, JoinSpec(u1=0, v1=1, v2=3, u2=4))
    verts, arcs = join_by_definition(D1, D2, 0, 1, 3, 4)
    assert H.vertices == verts and H.arc_set() == arcs
    assert H.order == 5
    assert H.size == 11
    assert len(H.asymmetric_arcs()) == 3


def test_join_errors():
    k3 = symmetric_cycle(3)
    with pytest.raises(LabelCollisionError):
        hajos_join(k3, k3, JoinSpec(0, 1, 1, 2))
    with pytest.raises(MissingArcError):
        hajos_join(directed_triangle(), directed_triangle(3), JoinSpec(1, 0, 3, 4))
    with pytest.raises(MissingArcError):
        hajos_join(directed_triangle(), directed_triangle(3), JoinSpec(0, 1, 4, 3))


@given(digraphs(max_order=7), digraphs(max_order=7), st.data())
def test_join_properties(D1, D2, data):
    assume(D1.size and D2.size)
    D2 = copy_offset(D2, max(D1.vertices) + 1)
    u1, v1 = data.draw(st.sampled_from(D1.arcs()))
    v2, u2 = data.draw(st.sampled_from(D2.arcs()))
    H = hajos_join(D1, D2, JoinSpec(u1, v1, v2, u2))
    verts, arcs = join_by_definition(D1, D2, u1, v1, v2, u2)
    assert H.vertices == verts and H.arc_set() == arcs
    assert H.order == D1.order + D2.order - 1
    assert H.has_arc(u1, u2)
    assert H.size <= D1.size + D2.size - 1


def _asymmetric_chord_digraphs():
    yield symmetric_cycle(3)
    yield symmetric_cycle(5)
    yield symmetric_cycle(7)
    yield Digraph(range(5), symmetric_cycle(5).arc_set() | {(0, 2)})


def test_join_preserves_dichromatic_lower_bound():
    bases = [D for D in _asymmetric_chord_digraphs() if dichromatic_number(D)[0] >= 3]
    checked = 0
    for D1, D2 in itertools.product(bases, repeat=2):
        if D1.order + D2.order - 1 > 12:
            continue
        D2 = copy_offset(D2, D1.order)
        for (u1, v1), (v2, u2) in itertools.product(D1.arcs(), D2.arcs()):
            H = hajos_join(D1, D2, JoinSpec(u1, v1, v2, u2))
            assert dichromatic_number(H)[0] >= 3
            checked += 1
    assert checked > 100


# -- cyclic identification ---------------------------------------------------------


def chorded(n, chords):
    return Digraph(range(n), symmetric_cycle(n).arc_set() | set(chords))


def test_cyclic_lemma_instance_order_5():
    D = chorded(5, {(0, 2), (4, 1)})
    H, plan = cyclic_identification(D, D, CyclicSpec(i=4, j=1, k=0, l=2, order=5))
    assert H == chorded(5, {(0, 2)})
    assert isinstance(plan[0], JoinSpec) and plan[0] == JoinSpec(4, 1, 5, 7)
    assert len(plan) == 5 and all(isinstance(s, IdentSpec) for s in plan[1:])
    assert H == literal_cyclic(D, D, 4, 1, 0, 2)


def test_cyclic_arc_transport():
    # every surviving arc b->a of the second operand lands on shift(b)->shift(a)
    n = 9
    D = chorded(n, {(0, 4), (6, 1)})
    Dp = chorded(n, {(0, 4), (8, 3)})
    spec = CyclicSpec(i=6, j=1, k=0, l=4, order=n)
    H, _ = cyclic_identification(D, Dp, spec)
    for b, a in Dp.arcs():
        if (b, a) != (0, 4):
            assert H.has_arc((b - 0 + 1) % n, (a - 0 + 1) % n)
    assert H.has_arc(6, (4 - 0 + 1) % n)


def test_cyclic_degenerate_rejected():
    c5 = symmetric_cycle(5)
    spec = CyclicSpec(i=0, j=1, k=1, l=0, order=5)
    assert spec.degenerate
    with pytest.raises(CyclicSpecError):
        cyclic_identification(c5, c5, spec)
    with pytest.raises(DependentSetError) as info:
        cyclic_identification(c5, c5, spec, literal=True)
    assert info.value.step == 4


def test_cyclic_spec_validation():
    with pytest.raises(CyclicSpecError):
        CyclicSpec(0, 0, 1, 2, 5)
    with pytest.raises(CyclicSpecError):
        CyclicSpec(0, 1, 2, 2, 5)
    with pytest.raises(CyclicSpecError):
        CyclicSpec(0, 5, 1, 2, 5)
    c5 = symmetric_cycle(5)
    with pytest.raises(MissingArcError):
        cyclic_identification(c5, c5, CyclicSpec(0, 2, 0, 1, 5))
    with pytest.raises(CyclicSpecError):
        cyclic_identification(c5, symmetric_cycle(7), CyclicSpec(0, 1, 0, 1, 5))


@st.composite
def cyclic_cases(draw, min_order=5, max_order=13):
    n = draw(st.integers(min_order, max_order))
    candidates = [(u, v) for u in range(n) for v in range(n) if (u - v) % n not in (0, 1, n - 1)]
    D = chorded(n, draw(st.sets(st.sampled_from(candidates), max_size=3)))
    Dp = chorded(n, draw(st.sets(st.sampled_from(candidates), max_size=3)))
    i, j = draw(st.sampled_from(D.arcs()))
    k, l = draw(st.sampled_from(Dp.arcs()))
    assume((j - i) % n != (k - l) % n)
    return D, Dp, CyclicSpec(i, j, k, l, n)


@settings(max_examples=150)
@given(cyclic_cases())
def test_cyclic_closed_form_matches_literal(case):
    D, Dp, spec = case
    H, plan = cyclic_identification(D, Dp, spec)
    assert H == literal_cyclic(D, Dp, spec.i, spec.j, spec.k, spec.l)
    assert cyclic_identification(D, Dp, spec, literal=True)[0] == H
    assert len(plan) == spec.order
    n = spec.order
    expected = (D.arc_set() - {(spec.i, spec.j)}) | {
        (spec.shift(b), spec.shift(a)) for b, a in Dp.arcs() if (b, a) != (spec.k, spec.l)
    }
    expected |= {(spec.i, (spec.l - spec.k + spec.j) % n)}
    assert H.arc_set() == expected
