import random

import pytest
from hypothesis import given, settings

from _support import ENTRANCE, O2, SINGLE_LOOP, TWO_CYCLE, cuntz, valid_graphs
from grpd.decide import (af_cycle, af_lp, af_stiemke, decide, power_condition,
                         transfer_witness, verify_verdict)
from grpd.errors import PreconditionError
from grpd.generators import random_graph
from grpd.graphmodel import DirectedGraph, adjacency_transfer, cycles_with_entrance
from grpd.oracle import witness_search


def test_af_lp_examples():
    assert af_lp([[1]]).embeddable
    assert witness_search([[1]], 10) is None
    v = af_lp([[2]])
    assert (v.embeddable, v.witness, v.increment) == (False, (1,), (1,))
    v = af_lp([[1, 1], [0, 1]])
    assert (v.embeddable, v.witness, v.increment) == (False, (0, 1), (1, 0))


def test_af_lp_engines_agree():
    for rows in ([[1, 1], [0, 1]], [[0, 1], [1, 0]], [[2]]):
        assert af_lp(rows, method="fm") == af_lp(rows, method="simplex")


def test_af_stiemke_examples():
    v = af_stiemke([[0, 1], [1, 0]])
    assert v.embeddable and v.fixed_vector == (1, 1)
    v = af_stiemke([[1]])
    assert v.embeddable and v.fixed_vector == (1,)
    v = af_stiemke([[1, 1], [0, 1]])
    assert not v.embeddable and v.fixed_vector is None


def test_af_cycle_examples():
    assert af_cycle(TWO_CYCLE).embeddable
    assert not af_cycle(cuntz(2)).embeddable
    v = af_cycle(ENTRANCE)
    assert not v.embeddable
    assert (v.witness, v.increment) == ((0, 1), (1, 0))
    assert verify_verdict(adjacency_transfer(ENTRANCE), v)


def test_cylinder_orientation_witness():
    ent = cycles_with_entrance(ENTRANCE)[0]
    cycle, f, h = transfer_witness(ENTRANCE, ent)
    assert cycle == ("e1",) and f == (1, 0) and h == (0, 1)


@pytest.mark.parametrize("A, n, expected", [
    ([[1]], 1, True), ([[1]], 4, True),
    ([[2]], 2, False),
    ([[1, 1], [0, 1]], 2, False),
])
def test_power_condition_examples(A, n, expected):
    assert power_condition(A, n) is expected


def test_power_witnesses():
    v = af_lp([[2]], power=2)
    assert (v.witness, v.increment) == ((1,), (3,))
    v = af_lp([[1, 1], [0, 1]], power=2)
    assert (v.witness, v.increment) == ((0, 1), (2, 0))


def test_decide_examples():
    assert decide(SINGLE_LOOP).embeddable
    d = decide(O2)
    assert not d.embeddable and len(d.verdicts) == 3
    src = DirectedGraph.build(["v1", "v2"], [("e1", "v1", "v1"), ("e2", "v2", "v1")])
    with pytest.raises(PreconditionError, match="v2"):
        decide(src)


@settings(max_examples=60, deadline=None)
@given(valid_graphs(n_max=5))
def test_three_way_agreement(g):
    d = decide(g)
    A = adjacency_transfer(g)
    for v in d.verdicts:
        assert verify_verdict(A, v)
        assert v.witness is None or v.fixed_vector is None


def test_three_way_agreement_seeded():
    rng = random.Random(7)
    for _ in range(40):
        g = random_graph(rng, 2, 6)
        d = decide(g)
        assert {v.embeddable for v in d.verdicts} == {d.embeddable}
        # embeddable graphs are exactly disjoint unions of cycles
        A = adjacency_transfer(g).A
        perm = all(sum(A.row(i)) == 1 for i in range(A.rows)) and \
            all(sum(A.col(j)) == 1 for j in range(A.cols))
        assert d.embeddable == perm


@settings(max_examples=40, deadline=None)
@given(valid_graphs(n_max=4))
def test_power_stability(g):
    A = adjacency_transfer(g)
    base = power_condition(A, 1)
    assert power_condition(A, 2) == base and power_condition(A, 3) == base


@settings(max_examples=30, deadline=None)
@given(valid_graphs(n_max=3, max_mult=2))
def test_telescoping(g):
    A = adjacency_transfer(g).A
    v = af_lp(A)
    if v.embeddable:
        return
    F, h = list(v.witness), list(v.increment)
    for n in (2, 3):
        An = A ** n
        lhs = [a - b for a, b in zip(An.apply(F), F)]
        rhs = [0] * len(F)
        w = list(h)
        for _ in range(n):
            rhs = [a + b for a, b in zip(rhs, w)]
            w = A.apply(w)
        assert lhs == rhs
