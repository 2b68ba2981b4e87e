"""Windowed Deaconu-Renault machinery for graph shifts.

Points of a window of size L are finite paths of length 1..L (tuples of
edge ids, see ``graphmodel``); a path stands for the cylinder of infinite
paths extending it at the source end. The shift ``sigma`` deletes the first
edge and a graph section ``phi`` prepends a preferred edge.

Skew elements are tuples ``(x, k, y, a)`` with ``k = |x| - |y|`` and
``s(x) == s(y)`` (x and y share their tail beyond the window), and ``a`` the
integer coordinate of the skew product.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

from . import guards
from .errors import InvalidInputError, WindowBoundaryError
from .exactlin import IntMatrix
from .graphmodel import DirectedGraph, as_matrix, is_path, path_source, require_valid

PATH_GUARD = 10 ** 5
SECTION_GUARD = 10 ** 6


@dataclass(frozen=True)
class PathWindow:
    graph: DirectedGraph
    length: int
    paths: tuple


def window_paths(g: DirectedGraph, L: int) -> PathWindow:
    """All paths of length exactly L, in lexicographic order of edge ids."""
    require_valid(g)
    if L < 1:
        raise ValueError("window length must be at least 1")
    A = _range_source_counts(g)
    total = sum((A ** L).entries)
    guards.check("path window", total, PATH_GUARD)
    return PathWindow(g, L, tuple(_paths(g, L)))


def _range_source_counts(g: DirectedGraph) -> IntMatrix:
    idx = g.index()
    n = len(g.vertices)
    rows = [[0] * n for _ in range(n)]
    for e in g.edges:
        rows[idx[e.rng]][idx[e.src]] += 1
    return IntMatrix.from_rows(rows, n)


def _paths(g: DirectedGraph, L: int) -> list[tuple]:
    by_range: dict = {}
    for e in g.edges:
        by_range.setdefault(e.rng, []).append(e)
    layer = [(e.id,) for e in g.edges]
    for _ in range(L - 1):
        nxt = []
        for p in layer:
            for e in by_range.get(g.edge(p[-1]).src, ()):
                nxt.append(p + (e.id,))
        layer = nxt
    return sorted(layer)


def all_window_points(g: DirectedGraph, L: int) -> list[tuple]:
    out = []
    for ell in range(1, L + 1):
        out.extend(window_paths(g, ell).paths)
    return out


# --------------------------------------------------------------------------
# relation transfer on R(sigma^n)


def in_shift_relation(g: DirectedGraph, n: int, u: tuple, v: tuple) -> bool:
    """(u, v) in R(sigma^n): equal length, equal after deleting n edges."""
    return (len(u) == len(v) and u[n:] == v[n:]
            and path_source(g, u) == path_source(g, v))


def relation_transfer(g: DirectedGraph, n: int, F: Mapping) -> dict:
    """Push a function on R(sigma^n) over paths of length L to R(sigma^(n-1))
    over paths of length L-1: ``(x, y)`` collects ``F(u, v)`` over
    ``sigma(u) = x, sigma(v) = y``."""
    if n < 1:
        raise ValueError("relation transfer needs n >= 1")
    out: dict = {}
    for (u, v), val in F.items():
        if not (is_path(g, u) and is_path(g, v)):
            raise InvalidInputError(f"({u!r}, {v!r}) is not a pair of paths")
        if not in_shift_relation(g, n, u, v):
            raise InvalidInputError(f"({u!r}, {v!r}) is not in R(sigma^{n})")
        if len(u) < 2:
            raise WindowBoundaryError("shifting a length-1 path leaves the window")
        key = (u[1:], v[1:])
        out[key] = out.get(key, 0) + val
    return {k: v for k, v in sorted(out.items()) if v}


def pair_boundary(F: Mapping) -> dict:
    """s_* - r_* on functions of pairs."""
    out: dict = {}
    for (u, v), val in F.items():
        out[v] = out.get(v, 0) + val
        out[u] = out.get(u, 0) - val
    return {k: v for k, v in sorted(out.items()) if v}


def point_transfer(f: Mapping) -> dict:
    """sigma_* on finitely supported functions of paths."""
    out: dict = {}
    for x, val in f.items():
        if len(x) < 2:
            raise WindowBoundaryError("shifting a length-1 path leaves the window")
        out[x[1:]] = out.get(x[1:], 0) + val
    return {k: v for k, v in sorted(out.items()) if v}


# --------------------------------------------------------------------------
# sections, skew elements, rho, eta, beta


@dataclass(frozen=True)
class GraphSection:
    """A preferred edge ``e_v`` with source v for every vertex v; phi(x)
    prepends ``e_{r(x)}``."""

    preferred: Mapping

    def __post_init__(self):
        object.__setattr__(self, "preferred", dict(sorted(self.preferred.items())))


def check_graph_section(g: DirectedGraph, phi: GraphSection) -> None:
    if set(phi.preferred) != set(g.vertices):
        raise InvalidInputError("a section needs one preferred edge per vertex")
    for v, eid in phi.preferred.items():
        try:
            e = g.edge(eid)
        except KeyError:
            raise InvalidInputError(f"unknown edge {eid!r}") from None
        if e.src != v:
            raise InvalidInputError(
                f"preferred edge {eid!r} for {v!r} must have source {v!r}, not {e.src!r}")


def enumerate_graph_sections(g: DirectedGraph) -> list[GraphSection]:
    require_valid(g)
    choices = [[e.id for e in g.outgoing(v)] for v in g.vertices]
    total = 1
    for c in choices:
        total *= len(c)
    guards.check("graph section enumeration", total, SECTION_GUARD)
    return [GraphSection(dict(zip(g.vertices, pick))) for pick in itertools.product(*choices)]


def default_graph_section(g: DirectedGraph) -> GraphSection:
    require_valid(g)
    return GraphSection({v: g.outgoing(v)[0].id for v in g.vertices})


def parse_graph_section(g: DirectedGraph, text: str) -> GraphSection:
    """``"auto"`` or ``"v1=e1,v2=e3"``."""
    if text == "auto":
        return default_graph_section(g)
    pref = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        if "=" not in part:
            raise InvalidInputError(f"section entry {part!r} is not of the form vertex=edge")
        v, e = (s.strip() for s in part.split("=", 1))
        pref[v] = e
    sec = GraphSection(pref)
    check_graph_section(g, sec)
    return sec


def phi_power(g: DirectedGraph, phi: GraphSection, x: tuple, a: int, L: int) -> tuple:
    """phi^a(x); negative powers shift. Raises outside lengths 1..L."""
    new_len = len(x) + a
    if new_len < 1 or new_len > L:
        raise WindowBoundaryError(
            f"phi^{a} of a length-{len(x)} path leaves the window 1..{L}")
    if a <= 0:
        return x[-a:]
    out = x
    for _ in range(a):
        out = (phi.preferred[g.edge(out[0]).rng],) + out
    return out


@dataclass(frozen=True)
class SkewElement:
    x: tuple
    k: int
    y: tuple
    a: int

    def __iter__(self):
        return iter((self.x, self.k, self.y, self.a))


def check_skew(g: DirectedGraph, el: SkewElement) -> None:
    if not (is_path(g, el.x) and is_path(g, el.y)):
        raise InvalidInputError("skew element coordinates must be paths")
    if el.k != len(el.x) - len(el.y):
        raise InvalidInputError(f"cocycle value {el.k} must equal |x| - |y|")
    if path_source(g, el.x) != path_source(g, el.y):
        raise InvalidInputError("x and y must share their tail")


def skew_product(el1: SkewElement, el2: SkewElement) -> SkewElement:
    """``(g, a)(h, a + c(g)) = (gh, a)``; raises if not composable."""
    if el1.y != el2.x or el2.a != el1.a + el1.k:
        raise InvalidInputError("skew elements are not composable")
    return SkewElement(el1.x, el1.k + el2.k, el2.y, el1.a)


def skew_inverse(el: SkewElement) -> SkewElement:
    return SkewElement(el.y, -el.k, el.x, el.a + el.k)


def rho_phi(g: DirectedGraph, phi: GraphSection, el: SkewElement, L: int) -> tuple:
    """``(phi^a x, phi^(a+k) y)``, a pair of equal-length paths."""
    check_skew(g, el)
    return (phi_power(g, phi, el.x, el.a, L), phi_power(g, phi, el.y, el.a + el.k, L))


def eta(pair: tuple) -> SkewElement:
    x, y = pair
    if len(x) != len(y):
        raise InvalidInputError("eta needs a pair of equal-length paths")
    return SkewElement(tuple(x), 0, tuple(y), 0)


def beta_shift(F: Mapping, W: int | None = None) -> dict:
    """``beta(F)(g, a) = F(g, a + 1)``: support moves from a to a - 1."""
    out = {}
    for el, val in F.items():
        x, k, y, a = el
        if W is not None and a - 1 < -W:
            raise WindowBoundaryError(f"beta would move a = {a} below -{W}")
        out[SkewElement(x, k, y, a - 1) if isinstance(el, SkewElement) else (x, k, y, a - 1)] = val
    return out


def pushforward_units(g, phi, F: Mapping, L: int) -> dict:
    """Push a function on unit skew elements along rho_phi to paths."""
    out: dict = {}
    for el, val in F.items():
        el = el if isinstance(el, SkewElement) else SkewElement(*el)
        u, v = rho_phi(g, phi, el, L)
        if u != v:
            raise InvalidInputError("pushforward of units must land on units")
        out[u] = out.get(u, 0) + val
    return {k: v for k, v in sorted(out.items()) if v}


def _interior(g: DirectedGraph, f: Mapping, L: int):
    for x in f:
        if not is_path(g, x):
            raise InvalidInputError(f"{x!r} is not a path")
        if not 2 <= len(x) <= L:
            raise WindowBoundaryError(
                f"path of length {len(x)} is not in the window interior 2..{L}")


def diagram_sides(g: DirectedGraph, phi: GraphSection, f: Mapping, L: int):
    """(left, right): the composite of eta, beta and rho_phi pushforwards,
    and sigma_* computed directly."""
    check_graph_section(g, phi)
    _interior(g, f, L)
    units = {eta((x, x)): v for x, v in f.items()}
    left = pushforward_units(g, phi, beta_shift(units), L)
    right = point_transfer(f)
    return left, right


def diagram_check(g: DirectedGraph, phi: GraphSection, f: Mapping, L: int) -> bool:
    left, right = diagram_sides(g, phi, f, L)
    return left == right


def lift_vertex_function(g: DirectedGraph, u: Sequence[int], ell: int) -> dict:
    """The cylinder function ``mu -> u[r(mu)]`` on paths of length ell."""
    idx = g.index()
    return {p: u[idx[g.edge(p[0]).rng]] for p in window_paths(g, ell).paths
            if u[idx[g.edge(p[0]).rng]]}


def diagram_check_vertex(g: DirectedGraph, phi: GraphSection, u: Sequence[int],
                         ell: int, L: int) -> bool:
    """Diagram composite on a lifted vertex vector equals the lift of the
    vertex-level transfer (the transpose of the range-source matrix)."""
    f = lift_vertex_function(g, u, ell)
    left, _ = diagram_sides(g, phi, f, L)
    At = _range_source_counts(g).T
    return left == lift_vertex_function(g, At.apply(list(u)), ell - 1)


# --------------------------------------------------------------------------
# dimension group of the core


@dataclass(frozen=True)
class DimensionGroupElement:
    level: int
    v: tuple

    def __post_init__(self):
        if self.level < 0:
            raise ValueError("negative level")
        object.__setattr__(self, "v", tuple(int(x) for x in self.v))


class Connecting:
    """Connecting maps of an inductive system of groups ``Z^{d_n}``.

    Either one square matrix used at every level, or a finite list of
    per-level matrices (level n -> n+1) after which the maps are identities.
    """

    def __init__(self, stationary: IntMatrix | None = None, chain: Sequence | None = None):
        if (stationary is None) == (chain is None):
            raise ValueError("give exactly one of a stationary map or a chain")
        self.stationary = stationary
        self.chain = None if chain is None else [as_matrix(m) for m in chain]
        if stationary is not None and stationary.rows != stationary.cols:
            raise ValueError("a stationary connecting map must be square")
        if self.chain is not None:
            for a, b in zip(self.chain, self.chain[1:]):
                if b.cols != a.rows:
                    raise ValueError("consecutive connecting maps do not compose")

    def dim(self, level: int) -> int:
        if self.stationary is not None:
            return self.stationary.cols
        if level < len(self.chain):
            return self.chain[level].cols
        return self.chain[-1].rows if self.chain else 0

    def step(self, level: int, v: list) -> list:
        if self.stationary is not None:
            return self.stationary.apply(v)
        if level < len(self.chain):
            return self.chain[level].apply(v)
        return list(v)

    def push(self, level: int, v, target: int) -> list:
        if len(v) != self.dim(level):
            raise ValueError(f"vector of length {len(v)} at level {level}, "
                             f"expected {self.dim(level)}")
        v = list(v)
        for n in range(level, target):
            v = self.step(n, v)
        return v

    def stable_level(self, level: int) -> int:
        """A level past which a vector at ``level`` is zero in the limit iff
        its image there is zero."""
        if self.stationary is not None:
            return level + self.stationary.rows
        return max(level, len(self.chain))


def _connecting(C) -> Connecting:
    """A Connecting, a single matrix, or a list of IntMatrix per level."""
    if isinstance(C, Connecting):
        return C
    if isinstance(C, (list, tuple)) and C and all(isinstance(m, IntMatrix) for m in C):
        return Connecting(chain=C)
    return Connecting(stationary=as_matrix(C))


def dg_equal(e1: DimensionGroupElement, e2: DimensionGroupElement, C) -> bool:
    C = _connecting(C)
    k = max(e1.level, e2.level)
    a = C.push(e1.level, e1.v, k)
    b = C.push(e2.level, e2.v, k)
    if a == b:
        return True
    diff = [x - y for x, y in zip(a, b)]
    return not any(C.push(k, diff, C.stable_level(k)))


@dataclass(frozen=True)
class Positivity:
    status: str  # "positive", "not_positive" or "unknown"
    k: int | None = None
    depth: int | None = None

    def __str__(self):
        if self.status == "positive":
            return f"positive({self.k})"
        if self.status == "unknown":
            return f"unknown({self.depth})"
        return "not_positive"


def dg_positive(e: DimensionGroupElement, C, depth: int) -> Positivity:
    """positive(k) if the image k steps on is nonnegative (k <= depth);
    not_positive if the negative is so certified and the class is nonzero;
    otherwise unknown(depth)."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    C = _connecting(C)
    v = list(e.v)
    C.push(e.level, v, e.level)
    images = [v]
    for k in range(depth):
        images.append(C.step(e.level + k, images[-1]))
    for k, w in enumerate(images):
        if all(x >= 0 for x in w):
            return Positivity("positive", k=k)
    neg_ok = any(all(x <= 0 for x in w) for w in images)
    if neg_ok and any(C.push(e.level, v, C.stable_level(e.level))):
        return Positivity("not_positive", k=next(k for k, w in enumerate(images)
                                                if all(x <= 0 for x in w)))
    return Positivity("unknown", depth=depth)
