"""Brute-force reference computations for tests.

Nothing here is used by the decision path, and nothing here calls into the
main modules beyond the IntMatrix / SNF substrate: relation lattices,
boundaries and transfers are rebuilt from their definitions.
"""

from __future__ import annotations

import itertools
import random
from typing import Mapping, Sequence

import numpy as np

from . import guards
from .exactlin import H0Presentation, IntMatrix, cokernel_presentation, solve_integer

WITNESS_GUARD = 10 ** 7
H0_GUARD = 12
_CHUNK = 1 << 18


def witness_search(A, B: int):
    """First f in [-B, B]^dim (lexicographic, first coordinate most
    significant) with (A - I) f nonzero and nonnegative, else None."""
    rows = _rows(A)
    n = len(rows)
    guards.check("witness search", (2 * B + 1) ** n, WITNESS_GUARD)
    M = np.array(rows, dtype=np.int64).reshape(n, n) - np.eye(n, dtype=np.int64)
    base = 2 * B + 1
    total = base ** n
    weights = base ** np.arange(n - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        F = (idx[:, None] // weights[None, :]) % base - B
        H = F @ M.T
        ok = np.all(H >= 0, axis=1) & np.any(H != 0, axis=1)
        hits = np.nonzero(ok)[0]
        if hits.size:
            return [int(x) for x in F[hits[0]]]
    return None


def _rows(A) -> list[list[int]]:
    A = getattr(A, "A", A)
    if isinstance(A, IntMatrix):
        return A.to_rows()
    return [list(r) for r in A]


def _fibers(X, sigma: Mapping) -> dict:
    out: dict = {}
    for x in X:
        out.setdefault(sigma[x], []).append(x)
    return out


def relation_matrix(X: Sequence, sigma: Mapping) -> IntMatrix:
    """Columns ``delta_u - delta_v`` over ordered same-fiber pairs u != v."""
    X = list(X)
    pos = {x: i for i, x in enumerate(X)}
    cols = []
    for u in X:
        for v in X:
            if u != v and sigma[u] == sigma[v]:
                c = [0] * len(X)
                c[pos[u]] += 1
                c[pos[v]] -= 1
                cols.append(c)
    if not cols:
        return IntMatrix.zeros(len(X), 0)
    return IntMatrix.from_rows([list(r) for r in zip(*cols)], len(cols))


def h0_bruteforce(fs) -> H0Presentation:
    X = list(fs.X)
    guards.check("h0 brute force", len(X), H0_GUARD)
    return cokernel_presentation(relation_matrix(X, fs.sigma))


def in_relation_lattice(X, sigma, f: Sequence[int]) -> bool:
    return solve_integer(relation_matrix(X, sigma), list(f)) is not None


def _faces(points):
    for i in range(len(points)):
        yield (-1) ** i, points[:i] + points[i + 1:]


def _d(chain: Mapping) -> dict:
    out: dict = {}
    for pts, val in chain.items():
        for sign, face in _faces(pts):
            out[face] = out.get(face, 0) + sign * val
    return {k: v for k, v in out.items() if v}


def chain_check(fs, trials: int, rng: random.Random | None = None) -> bool:
    """Apply the boundary twice to random level-2 chains (as point triples)."""
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = rng or random.Random(0)
    fibers = _fibers(fs.X, fs.sigma)
    ys = sorted(fibers)
    for _ in range(trials):
        chain: dict = {}
        for _ in range(rng.randint(0, 6)):
            fib = fibers[rng.choice(ys)]
            pts = tuple(rng.choice(fib) for _ in range(3))
            chain[pts] = chain.get(pts, 0) + rng.randint(-4, 4)
        if _d(_d(chain)):
            return False
    return True


def level2_boundary(chain: Mapping) -> dict:
    """Boundary of a level-2 chain keyed by pair tuples, keyed by pairs."""
    pts = {(a, b, c): v for ((a, b), (b2, c)), v in chain.items()}
    return _d(pts)


def relation_transfer_direct(pairs: Sequence, F: Mapping) -> dict:
    """Shifted relation function by scanning every target pair: the value at
    (x, y) is the sum of F(u, v) over u, v whose first edge deleted gives x, y."""
    out = {}
    targets = {(u[1:], v[1:]) for u, v in pairs}
    for (x, y) in sorted(targets):
        total = sum(val for (u, v), val in F.items() if u[1:] == x and v[1:] == y)
        if total:
            out[(x, y)] = total
    return out


def window_transfer(f: Mapping) -> dict:
    """Pushforward along deletion of the first edge, by grouping."""
    groups: dict = {}
    for p, v in sorted(f.items()):
        groups.setdefault(p[1:], []).append(v)
    return {k: sum(v) for k, v in groups.items() if sum(v)}


def cylinder_class_equal(g, e1, e2, extra: int) -> bool:
    """Windowed comparison of two dimension-group elements of a graph.

    (n, u) is represented by the cylinder function ``mu -> u[r(mu)]`` on
    paths of a common length; moving to a later level applies the window
    transfer. Both are pushed to level ``max(n1, n2) + extra``."""
    n1, u1 = e1
    n2, u2 = e2
    K = max(n1, n2) + extra
    L = K + 2
    a = _push_cylinder(g, u1, L - n1, K - n1)
    b = _push_cylinder(g, u2, L - n2, K - n2)
    return a == b


def _push_cylinder(g, u, ell, steps):
    idx = {v: i for i, v in enumerate(g.vertices)}
    rng_of = {e.id: e.rng for e in g.edges}
    by_range: dict = {}
    for e in g.edges:
        by_range.setdefault(e.rng, []).append(e)
    layer = [(e.id,) for e in g.edges]
    src_of = {e.id: e.src for e in g.edges}
    for _ in range(ell - 1):
        layer = [p + (e.id,) for p in layer for e in by_range.get(src_of[p[-1]], ())]
    f = {p: u[idx[rng_of[p[0]]]] for p in layer if u[idx[rng_of[p[0]]]]}
    for _ in range(steps):
        f = window_transfer(f)
    return f


def chain_class(X, maps, level: int, v: Sequence[int], top: int):
    """Lift v (coordinates on Y_level) to X, one point per fiber."""
    f = [0] * len(X)
    pos = {x: i for i, x in enumerate(X)}
    for y, val in enumerate(v):
        fib = [x for x in X if maps[level][x] == y]
        f[pos[min(fib)]] += val
    return f


def chain_equal(X, maps, e1, e2) -> bool:
    """Classes of two elements in H_0 of the top relation of the chain."""
    top = len(maps) - 1
    f1 = chain_class(X, maps, e1[0], e1[1], top)
    f2 = chain_class(X, maps, e2[0], e2[1], top)
    return in_relation_lattice(X, maps[top], [a - b for a, b in zip(f1, f2)])


def chain_positive(X, maps, e) -> bool:
    """Is the class of e in the positive cone of the top relation?

    A class is positive iff every top fiber has nonnegative sum; positivity
    is certified by a nonnegative g (the fiber sum placed on one point)
    whose difference with f lies in the relation lattice."""
    top = len(maps) - 1
    f = chain_class(X, maps, e[0], e[1], top)
    sigma = maps[top]
    # connected components of the relation, by union-find over same-image pairs
    parent = {x: x for x in X}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, w in itertools.combinations(X, 2):
        if sigma[u] == sigma[w]:
            parent[find(u)] = find(w)
    pos = {x: i for i, x in enumerate(X)}
    sums: dict = {}
    for x in X:
        sums[find(x)] = sums.get(find(x), 0) + f[pos[x]]
    if any(s < 0 for s in sums.values()):
        return False
    g = [0] * len(X)
    for root, s in sums.items():
        g[pos[root]] = s
    if not in_relation_lattice(X, sigma, [a - b for a, b in zip(f, g)]):
        raise AssertionError("positive certificate fails lattice membership")
    return True


def orbit_cycle(X, sigma: Mapping, x) -> bool:
    """x returns to itself under iteration (direct orbit walk)."""
    seen = []
    y = x
    while y not in seen:
        seen.append(y)
        y = sigma[y]
    return y == x
