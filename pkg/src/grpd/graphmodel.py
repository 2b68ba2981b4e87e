"""Finite directed multigraphs presenting graph-shift systems.

Path convention: a path is a tuple of edge ids ``(m1, ..., mL)`` with
``s(m_i) == r(m_{i+1})``; its range is ``r(m1)`` and its source ``s(mL)``.
The shift deletes the first edge.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import networkx as nx

from .errors import InvalidInputError, PreconditionError
from .exactlin import IntMatrix


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    rng: str


@dataclass(frozen=True)
class DirectedGraph:
    vertices: tuple
    edges: tuple

    def __post_init__(self):
        verts = tuple(sorted(self.vertices))
        if len(set(verts)) != len(verts):
            raise InvalidInputError("duplicate vertex ids")
        edges = tuple(sorted((e if isinstance(e, Edge) else Edge(*e) for e in self.edges),
                             key=lambda e: e.id))
        ids = [e.id for e in edges]
        if len(set(ids)) != len(ids):
            dup = sorted({i for i in ids if ids.count(i) > 1})
            raise InvalidInputError(f"duplicate edge ids: {', '.join(map(str, dup))}")
        vs = set(verts)
        for e in edges:
            for end, name in ((e.src, "src"), (e.rng, "rng")):
                if end not in vs:
                    raise InvalidInputError(
                        f"edge {e.id!r} has {name} {end!r}, which is not a vertex")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", edges)

    @classmethod
    def build(cls, vertices, edges: Sequence[tuple]) -> DirectedGraph:
        """``edges`` as (id, src, rng) triples."""
        return cls(tuple(vertices), tuple(Edge(*e) for e in edges))

    @classmethod
    def from_json(cls, data) -> DirectedGraph:
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, dict) or "vertices" not in data or "edges" not in data:
            raise InvalidInputError("graph JSON needs 'vertices' and 'edges'")
        try:
            edges = tuple(Edge(str(e["id"]), str(e["src"]), str(e["rng"]))
                          for e in data["edges"])
        except (KeyError, TypeError) as exc:
            raise InvalidInputError(f"malformed edge entry: {exc}") from None
        return cls(tuple(str(v) for v in data["vertices"]), edges)

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices),
                "edges": [{"id": e.id, "src": e.src, "rng": e.rng} for e in self.edges]}

    def edge(self, eid) -> Edge:
        return self._edge_map()[eid]

    def _edge_map(self):
        cache = self.__dict__.get("_emap")
        if cache is None:
            cache = {e.id: e for e in self.edges}
            object.__setattr__(self, "_emap", cache)
        return cache

    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    def incoming(self, v) -> list[Edge]:
        """Edges with range v."""
        return [e for e in self.edges if e.rng == v]

    def outgoing(self, v) -> list[Edge]:
        """Edges with source v."""
        return [e for e in self.edges if e.src == v]

    def reversed(self) -> DirectedGraph:
        return DirectedGraph(self.vertices, tuple(Edge(e.id, e.rng, e.src) for e in self.edges))


@dataclass(frozen=True)
class ValidationReport:
    sinks: tuple
    sources: tuple
    row_finite: bool = True

    @property
    def ok(self) -> bool:
        return not self.sinks and not self.sources

    def describe(self) -> str:
        parts = []
        if self.sources:
            parts.append("source vertex " + ", ".join(map(str, self.sources))
                         + " (no edge has it as range)")
        if self.sinks:
            parts.append("sink vertex " + ", ".join(map(str, self.sinks))
                         + " (no edge has it as source)")
        return "; ".join(parts) or "ok"


def validate(g: DirectedGraph) -> ValidationReport:
    has_out = {e.src for e in g.edges}
    has_in = {e.rng for e in g.edges}
    return ValidationReport(sinks=tuple(v for v in g.vertices if v not in has_out),
                            sources=tuple(v for v in g.vertices if v not in has_in))


def require_valid(g: DirectedGraph) -> None:
    rep = validate(g)
    if not rep.ok:
        raise PreconditionError(f"graph not admissible: {rep.describe()}")


@dataclass(frozen=True)
class TransferMatrix:
    """``A[v][w]`` counts edges with range v and source w."""

    vertices: tuple
    A: IntMatrix


def adjacency_transfer(g: DirectedGraph) -> TransferMatrix:
    require_valid(g)
    idx = g.index()
    n = len(g.vertices)
    rows = [[0] * n for _ in range(n)]
    for e in g.edges:
        rows[idx[e.rng]][idx[e.src]] += 1
    return TransferMatrix(g.vertices, IntMatrix.from_rows(rows, n))


def as_matrix(A) -> IntMatrix:
    if isinstance(A, TransferMatrix):
        return A.A
    if isinstance(A, IntMatrix):
        return A
    return IntMatrix.from_rows(A)


def transfer_apply(A, f: Sequence[int], n: int) -> list[int]:
    M = as_matrix(A)
    if n < 0:
        raise ValueError("n must be nonnegative")
    if len(f) != M.cols:
        raise ValueError(f"vector of length {len(f)} for {M.cols} vertices")
    out = list(f)
    for _ in range(n):
        out = M.apply(out)
    return out


@dataclass(frozen=True)
class Entrance:
    vertex: str
    cycle_edge: str
    entrance: str


def _cycle_vertices(g: DirectedGraph) -> set:
    dg = nx.MultiDiGraph()
    dg.add_nodes_from(g.vertices)
    dg.add_edges_from((e.src, e.rng) for e in g.edges)
    comp = {}
    for k, scc in enumerate(nx.strongly_connected_components(dg)):
        for v in scc:
            comp[v] = k
    internal = {comp[e.src] for e in g.edges if comp[e.src] == comp[e.rng]}
    return {v for v in g.vertices if comp[v] in internal}, comp


def cycles_with_entrance(g: DirectedGraph) -> list[Entrance]:
    """Vertices on a cycle that receive a second edge.

    For each such vertex v the cycle edge is the smallest-id edge with range v
    inside v's strongly connected component; the entrance is the smallest-id
    other edge with range v."""
    on_cycle, comp = _cycle_vertices(g)
    out = []
    for v in g.vertices:
        if v not in on_cycle:
            continue
        inc = g.incoming(v)
        if len(inc) < 2:
            continue
        cyc = next(e for e in inc if comp[e.src] == comp[v])
        ent = next(e for e in inc if e.id != cyc.id)
        out.append(Entrance(v, cyc.id, ent.id))
    return out


def cycle_through(g: DirectedGraph, eid: str) -> tuple:
    """A cycle (as a path) whose first edge is ``eid``; empty if none."""
    e0 = g.edge(eid)
    target = e0.rng
    # walk forward (source to range) from the range of e0 back to the source of e0
    start = e0.rng
    goal = e0.src
    prev = {start: None}
    queue = [start]
    for v in queue:
        if v == goal:
            break
        for e in g.outgoing(v):
            if e.rng not in prev:
                prev[e.rng] = e
                queue.append(e.rng)
    if goal not in prev:
        return ()
    walk = []
    v = goal
    while prev[v] is not None:
        walk.append(prev[v].id)
        v = prev[v].src
    # walk lists edges from goal backwards to start, which is the path order
    path = (eid,) + tuple(walk)
    assert g.edge(path[-1]).src == target if len(path) > 1 else e0.src == target
    return path


def is_path(g: DirectedGraph, path: Sequence[str]) -> bool:
    em = g._edge_map()
    if not path or any(p not in em for p in path):
        return False
    return all(em[a].src == em[b].rng for a, b in zip(path, path[1:]))


def path_range(g: DirectedGraph, path) -> str:
    return g.edge(path[0]).rng


def path_source(g: DirectedGraph, path) -> str:
    return g.edge(path[-1]).src
