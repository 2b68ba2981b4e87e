import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _support import ENTRANCE, TWO_CYCLE, cuntz, valid_graphs
from grpd.errors import InvalidInputError, PreconditionError
from grpd.graphmodel import (DirectedGraph, adjacency_transfer, cycle_through,
                             cycles_with_entrance, is_path, transfer_apply, validate)


def test_validate_examples():
    rep = validate(ENTRANCE)
    assert rep.ok and rep.sinks == () and rep.sources == ()
    lone = DirectedGraph.build(["v"], [])
    assert validate(lone).sinks == ("v",) and validate(lone).sources == ("v",)
    arrow = DirectedGraph.build(["v1", "v2"], [("e", "v1", "v2")])
    rep = validate(arrow)
    assert rep.sinks == ("v2",) and rep.sources == ("v1",)


def test_structural_errors():
    with pytest.raises(InvalidInputError, match="not a vertex"):
        DirectedGraph.build(["v"], [("e", "v", "w")])
    with pytest.raises(InvalidInputError, match="duplicate edge"):
        DirectedGraph.build(["v"], [("e", "v", "v"), ("e", "v", "v")])
    with pytest.raises(InvalidInputError):
        DirectedGraph.from_json({"vertices": ["v"]})


def test_json_roundtrip():
    assert DirectedGraph.from_json(ENTRANCE.to_json()) == ENTRANCE


@pytest.mark.parametrize("g, rows", [
    (ENTRANCE, [[1, 1], [0, 1]]),
    (cuntz(3), [[3]]),
    (TWO_CYCLE, [[0, 1], [1, 0]]),
])
def test_adjacency_transfer(g, rows):
    assert adjacency_transfer(g).A.to_rows() == rows


def test_transfer_rejects_sources():
    g = DirectedGraph.build(["v1", "v2"], [("e1", "v1", "v1"), ("e2", "v2", "v1")])
    with pytest.raises(PreconditionError, match="v2"):
        adjacency_transfer(g)


def test_transfer_apply_examples():
    assert transfer_apply([[1, 1], [0, 1]], [0, 1], 1) == [1, 1]
    assert transfer_apply([[1, 1], [0, 1]], [3, -2], 0) == [3, -2]
    assert transfer_apply([[2]], [1], 3) == [8]
    with pytest.raises(ValueError):
        transfer_apply([[2]], [1, 2], 1)


def test_cycles_with_entrance_examples():
    ents = cycles_with_entrance(ENTRANCE)
    assert [(e.vertex, e.entrance) for e in ents] == [("v1", "e2")]
    assert cycles_with_entrance(TWO_CYCLE) == []
    ents = cycles_with_entrance(cuntz(2))
    assert [(e.vertex, e.cycle_edge, e.entrance) for e in ents] == [("v", "e0", "e1")]


def _entrance_by_paths(g):
    """Some vertex on a closed path (length <= |V|) receives two edges."""
    on_cycle = set()
    for L in range(1, len(g.vertices) + 1):
        for path in itertools.product([e.id for e in g.edges], repeat=L):
            if is_path(g, path) and g.edge(path[0]).rng == g.edge(path[-1]).src:
                on_cycle.update(g.edge(p).rng for p in path)
    return any(len(g.incoming(v)) >= 2 for v in on_cycle)


@settings(max_examples=60, deadline=None)
@given(valid_graphs(n_max=4, max_mult=2))
def test_entrance_detection_matches_path_enumeration(g):
    if len(g.edges) > 7:
        return
    assert bool(cycles_with_entrance(g)) == _entrance_by_paths(g)
    for ent in cycles_with_entrance(g):
        cyc = cycle_through(g, ent.cycle_edge)
        assert is_path(g, cyc)
        assert g.edge(cyc[0]).rng == g.edge(cyc[-1]).src == ent.vertex


@settings(max_examples=60, deadline=None)
@given(valid_graphs(), st.integers(0, 3), st.integers(0, 3), st.data())
def test_transfer_apply_semigroup_and_positivity(g, m, n, data):
    A = adjacency_transfer(g)
    f = data.draw(st.lists(st.integers(-3, 3), min_size=len(g.vertices),
                           max_size=len(g.vertices)))
    assert transfer_apply(A, f, m + n) == transfer_apply(A, transfer_apply(A, f, n), m)
    pos = [abs(x) for x in f]
    out = transfer_apply(A, pos, n)
    assert all(x >= 0 for x in out)
    assert any(out) == any(pos)
