"""Seeded random instances for tests and experiment scripts."""

from __future__ import annotations

import random
from fractions import Fraction

from .drgroupoid import Connecting
from .exactlin import IntMatrix, rational_inverse
from .fibered import FiberedSet
from .graphmodel import DirectedGraph, Edge


def permutation_graph(perm: list[int]) -> DirectedGraph:
    """One edge i -> perm[i] per vertex; a disjoint union of cycles."""
    verts = [f"v{i}" for i in range(len(perm))]
    return DirectedGraph(tuple(verts), tuple(Edge(f"e{i}", verts[i], verts[p])
                                             for i, p in enumerate(perm)))


def random_graph(rng: random.Random, n_min=2, n_max=8, max_mult=3, density=0.3,
                 permutation_share=0.2) -> DirectedGraph:
    """A graph with no sinks and no sources and edge multiplicity <= max_mult."""
    n = rng.randint(n_min, n_max)
    if rng.random() < permutation_share:
        perm = list(range(n))
        rng.shuffle(perm)
        return permutation_graph(perm)
    mult = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if rng.random() < density:
                mult[i][j] = rng.randint(1, max_mult)
    for i in range(n):
        if not any(mult[i]):
            mult[i][rng.randrange(n)] = 1
    for j in range(n):
        if not any(mult[i][j] for i in range(n)):
            mult[rng.randrange(n)][j] = 1
    return graph_from_multiplicities(mult)


def graph_from_multiplicities(mult) -> DirectedGraph:
    """``mult[i][j]`` edges with source i and range j."""
    n = len(mult)
    verts = [f"v{i}" for i in range(n)]
    edges = []
    for i in range(n):
        for j in range(n):
            for _ in range(mult[i][j]):
                edges.append(Edge(f"e{len(edges):03d}", verts[i], verts[j]))
    return DirectedGraph(tuple(verts), tuple(edges))


def random_fibered_set(rng: random.Random, x_max=12, x_min=1) -> FiberedSet:
    nx_ = rng.randint(x_min, x_max)
    ny = rng.randint(1, nx_)
    X = [f"x{i:02d}" for i in range(nx_)]
    Y = [f"y{i:02d}" for i in range(ny)]
    images = list(range(ny)) + [rng.randrange(ny) for _ in range(nx_ - ny)]
    rng.shuffle(images)
    return FiberedSet(tuple(X), tuple(Y), {x: Y[k] for x, k in zip(X, images)})


def random_level2_chain(rng: random.Random, fs: FiberedSet, terms=5, bound=3) -> dict:
    """Random integer combination of composable pairs-of-pairs keys."""
    fibers = fs.fibers()
    out = {}
    for _ in range(terms):
        y = rng.choice(fs.Y)
        a, b, c = (rng.choice(fibers[y]) for _ in range(3))
        key = ((a, b), (b, c))
        out[key] = out.get(key, 0) + rng.randint(-bound, bound)
    return out


def random_projection_block(rng: random.Random, m: int, bound=2):
    """A rational orthogonal projection of random rank on Q^m."""
    r = rng.randint(0, m)
    while True:
        V = [[rng.randint(-bound, bound) for _ in range(r)] for _ in range(m)]
        if r == 0:
            return [[Fraction(0)] * m for _ in range(m)]
        G = [[sum(V[k][i] * V[k][j] for k in range(m)) for j in range(r)] for i in range(r)]
        if IntMatrix.from_rows(G, r).det() != 0:
            break
    Gi = rational_inverse(G)
    VG = [[sum(Fraction(V[i][k]) * Gi[k][j] for k in range(r)) for j in range(r)]
          for i in range(m)]
    return [[sum(VG[i][k] * V[j][k] for k in range(r)) for j in range(m)] for i in range(m)]


def random_projection(rng: random.Random, fs: FiberedSet) -> dict:
    """A projection on R(sigma) assembled from random per-fiber blocks."""
    out = {}
    for y, us in fs.fibers().items():
        P = random_projection_block(rng, len(us))
        for r, u in enumerate(us):
            for s, v in enumerate(us):
                if P[r][s]:
                    out[(u, v)] = P[r][s]
    return out


def random_chain_model(rng: random.Random, x_max=10):
    """Surjections X -> Y0 -> Y1 -> Y2; returns (X, maps, merge matrices).

    ``maps[n]`` sends X onto Y_n; the merge matrix of level n has a 1 at
    (y', y) when Y_n's y lies over Y_{n+1}'s y'."""
    nx_ = rng.randint(1, x_max)
    X = list(range(nx_))
    sizes = [nx_]
    for _ in range(3):
        sizes.append(rng.randint(1, sizes[-1]))
    sizes = sizes[1:]
    first = list(range(sizes[0])) + [rng.randrange(sizes[0]) for _ in range(nx_ - sizes[0])]
    rng.shuffle(first)
    maps = [dict(zip(X, first))]
    merges = []
    for n in range(2):
        lo, hi = sizes[n], sizes[n + 1]
        up = list(range(hi)) + [rng.randrange(hi) for _ in range(lo - hi)]
        rng.shuffle(up)
        merges.append(IntMatrix.from_rows([[int(up[y] == t) for y in range(lo)]
                                           for t in range(hi)], lo))
        maps.append({x: up[maps[-1][x]] for x in X})
    return X, maps, Connecting(chain=merges)


def random_metric(rng: random.Random, n: int, max_num=6, den=3):
    """A rational metric on n points: shortest paths of random positive weights."""
    w = [[Fraction(0) if i == j else Fraction(rng.randint(1, max_num), den)
          for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i):
            w[i][j] = w[j][i]
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if w[i][k] + w[k][j] < w[i][j]:
                    w[i][j] = w[i][k] + w[k][j]
    return w


def _rooted_trees(k: int, memo={}) -> list:
    """Unlabeled rooted trees on k nodes as canonical nested sorted tuples."""
    if k not in memo:
        out = set()

        def forests(total, max_tree):
            # multisets of trees (non-increasing order) with total size `total`
            if total == 0:
                yield ()
                return
            for size in range(min(total, max_tree[0]), 0, -1):
                for t in _rooted_trees(size):
                    if (size, t) > max_tree:
                        continue
                    for rest in forests(total - size, (size, t)):
                        yield ((size, t),) + rest

        for f in forests(k - 1, (k, ())):
            out.add(tuple(sorted(t for _, t in f)))
        memo[k] = sorted(out)
    return memo[k]


def _tree_size(t) -> int:
    return 1 + sum(_tree_size(c) for c in t)


def _components(m: int) -> list:
    """Connected self-maps on m points: cycles of rooted trees, up to rotation."""
    out = set()

    def seqs(c, total):
        if c == 0:
            if total == 0:
                yield ()
            return
        for size in range(1, total - c + 2):
            for t in _rooted_trees(size):
                for rest in seqs(c - 1, total - size):
                    yield (t,) + rest

    for c in range(1, m + 1):
        for s in seqs(c, m):
            out.add(min(s[i:] + s[:i] for i in range(c)))
    return sorted(out)


def functional_graphs(n: int) -> list[dict]:
    """One self-map of ``range(n)`` per isomorphism class."""
    classes = []

    def multisets(total, max_key):
        if total == 0:
            yield ()
            return
        top = total if max_key is None else min(total, max_key[0])
        for size in range(top, 0, -1):
            for comp in _components(size):
                if max_key is not None and (size, comp) > max_key:
                    continue
                for rest in multisets(total - size, (size, comp)):
                    yield ((size, comp),) + rest

    for ms in multisets(n, None):
        sigma: dict = {}
        counter = [0]

        def place(tree, target):
            node = counter[0]
            counter[0] += 1
            sigma[node] = target
            for child in tree:
                place(child, node)
            return node

        for _, comp in ms:
            roots = []
            for t in comp:
                node = counter[0]
                counter[0] += 1
                roots.append(node)
                for child in t:
                    place(child, node)
            for i, r in enumerate(roots):
                sigma[r] = roots[(i + 1) % len(roots)]
        classes.append(dict(sorted(sigma.items())))
    return classes
