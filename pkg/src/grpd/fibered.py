"""Finite fibered sets and the elementary groupoid of a surjection.

For ``sigma: X -> Y`` the groupoid R(sigma) consists of pairs (u, v) in one
fiber, with range u and source v. A composable n-tuple
``((x0,x1), (x1,x2), ..., (x_{n-1},x_n))`` is determined by the point
sequence ``x0..xn``; the i-th face map deletes ``x_i``.

Level-0 functions are integer vectors indexed by ``fs.X`` (sorted ids).
Functions on R(sigma) (projections, convolution) are dicts keyed by pairs.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import guards
from .errors import InvalidInputError, NotAProjectionError, UnsupportedDegreeError
from .exactlin import H0Presentation, IntMatrix, cokernel_coordinates, invariant_factors

SECTION_GUARD = 10 ** 6


@dataclass(frozen=True)
class FiberedSet:
    X: tuple
    Y: tuple
    sigma: Mapping

    def __post_init__(self):
        X = tuple(sorted(self.X))
        Y = tuple(sorted(self.Y))
        if len(set(X)) != len(X) or len(set(Y)) != len(Y):
            raise InvalidInputError("duplicate point ids")
        sigma = dict(self.sigma)
        if set(sigma) != set(X):
            missing = sorted(set(X) - set(sigma), key=str)
            raise InvalidInputError(f"sigma must be total on X; missing {missing}")
        ys = set(Y)
        for x, y in sigma.items():
            if y not in ys:
                raise InvalidInputError(f"sigma({x!r}) = {y!r} is not in Y")
        hit = set(sigma.values())
        empty = [y for y in Y if y not in hit]
        if empty:
            raise InvalidInputError(f"sigma is not surjective; empty fibers over {empty}")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)
        object.__setattr__(self, "sigma", dict(sorted(sigma.items())))

    @classmethod
    def from_json(cls, data) -> FiberedSet:
        if isinstance(data, str):
            data = json.loads(data)
        try:
            return cls(tuple(map(str, data["X"])), tuple(map(str, data["Y"])),
                       {str(k): str(v) for k, v in data["sigma"].items()})
        except (KeyError, TypeError, AttributeError) as exc:
            raise InvalidInputError(f"fibered set JSON needs X, Y, sigma: {exc}") from None

    def to_json(self) -> dict:
        return {"X": list(self.X), "Y": list(self.Y), "sigma": dict(self.sigma)}

    def fiber(self, y) -> tuple:
        return tuple(x for x in self.X if self.sigma[x] == y)

    def fibers(self) -> dict:
        out = {y: [] for y in self.Y}
        for x in self.X:
            out[self.sigma[x]].append(x)
        return {y: tuple(v) for y, v in out.items()}

    def index(self) -> dict:
        return {x: i for i, x in enumerate(self.X)}


@dataclass(frozen=True)
class Section:
    phi: Mapping

    def __post_init__(self):
        object.__setattr__(self, "phi", dict(self.phi))

    def __call__(self, y):
        return self.phi[y]

    def image(self) -> set:
        return set(self.phi.values())


def check_section(fs: FiberedSet, phi: Section) -> None:
    if set(phi.phi) != set(fs.Y):
        raise InvalidInputError("section must be defined on every point of Y")
    for y, x in phi.phi.items():
        if x not in fs.sigma or fs.sigma[x] != y:
            raise InvalidInputError(f"section sends {y!r} to {x!r}, outside its fiber")


def enumerate_sections(fs: FiberedSet) -> list[Section]:
    fibers = fs.fibers()
    total = 1
    for y in fs.Y:
        total *= len(fibers[y])
    guards.check("section enumeration", total, SECTION_GUARD)
    return [Section(dict(zip(fs.Y, choice)))
            for choice in itertools.product(*(fibers[y] for y in fs.Y))]


def relation_pairs(fs: FiberedSet) -> set:
    fibers = fs.fibers()
    return {(u, v) for y in fs.Y for u in fibers[y] for v in fibers[y]}


# --------------------------------------------------------------------------
# chains


@dataclass(frozen=True)
class ChainFunction:
    """Finitely supported integer function on composable n-tuples.

    Keys: a point at level 0, a pair (u, v) at level 1, a tuple of n pairs
    at level n >= 2. Zero values are dropped."""

    level: int
    values: Mapping

    def __post_init__(self):
        if self.level < 0:
            raise ValueError("negative level")
        object.__setattr__(self, "values",
                           {k: int(v) for k, v in sorted(self.values.items(), key=repr) if v})

    @classmethod
    def delta(cls, level: int, key) -> ChainFunction:
        return cls(level, {key: 1})

    def __add__(self, other: ChainFunction) -> ChainFunction:
        if self.level != other.level:
            raise ValueError("level mismatch")
        out = dict(self.values)
        for k, v in other.values.items():
            out[k] = out.get(k, 0) + v
        return ChainFunction(self.level, out)

    def scale(self, c: int) -> ChainFunction:
        return ChainFunction(self.level, {k: c * v for k, v in self.values.items()})

    def is_zero(self) -> bool:
        return not self.values

    def vector(self, fs: FiberedSet) -> list[int]:
        if self.level != 0:
            raise ValueError("only level-0 functions are vectors on X")
        return [self.values.get(x, 0) for x in fs.X]


def points_of(level: int, key) -> tuple:
    """Point sequence x0..xn of a composable tuple key."""
    if level == 0:
        return (key,)
    if level == 1:
        return tuple(key)
    pts = [key[0][0]]
    for a, b in key:
        if a != pts[-1]:
            raise InvalidInputError(f"tuple {key!r} is not composable")
        pts.append(b)
    return tuple(pts)


def key_of(points: Sequence) -> object:
    n = len(points) - 1
    if n == 0:
        return points[0]
    if n == 1:
        return (points[0], points[1])
    return tuple((points[i], points[i + 1]) for i in range(n))


def _check_support(fs: FiberedSet, F: ChainFunction):
    for key in F.values:
        pts = points_of(F.level, key)
        if len(pts) != F.level + 1:
            raise InvalidInputError(f"key {key!r} does not have level {F.level}")
        for p in pts:
            if p not in fs.sigma:
                raise InvalidInputError(f"unknown point {p!r}")
        if len({fs.sigma[p] for p in pts}) != 1:
            raise InvalidInputError(f"key {key!r} leaves a single fiber")


def boundary(fs: FiberedSet, n: int, F: ChainFunction) -> ChainFunction:
    """Alternating sum of face pushforwards; at level 1 this is s_* - r_*."""
    if n < 1:
        raise ValueError("boundary needs level n >= 1")
    if F.level != n:
        raise ValueError(f"chain has level {F.level}, expected {n}")
    _check_support(fs, F)
    out: dict = {}
    for key, val in F.values.items():
        pts = points_of(n, key)
        for i in range(n + 1):
            face = key_of(pts[:i] + pts[i + 1:])
            out[face] = out.get(face, 0) + (-1) ** i * val
    return ChainFunction(n - 1, out)


def chain_basis(fs: FiberedSet, n: int) -> list:
    """All composable n-tuples, fiber by fiber in sorted order."""
    fibers = fs.fibers()
    out = []
    for y in fs.Y:
        for pts in itertools.product(fibers[y], repeat=n + 1):
            out.append(key_of(pts))
    return out


def boundary_matrix(fs: FiberedSet, n: int) -> tuple[IntMatrix, list, list]:
    rows = chain_basis(fs, n - 1)
    cols = chain_basis(fs, n)
    ridx = {k: i for i, k in enumerate(rows)}
    dense = [[0] * len(cols) for _ in rows]
    for j, key in enumerate(cols):
        for face, v in boundary(fs, n, ChainFunction.delta(n, key)).values.items():
            dense[ridx[face]][j] += v
    return IntMatrix.from_rows(dense, len(cols)), rows, cols


def homology(fs: FiberedSet, n: int) -> H0Presentation:
    """H_0 (with cone generators in free coordinates) or H_1."""
    if n == 0:
        d1, rows, _ = boundary_matrix(fs, 1)
        factors = invariant_factors(d1)
        coords = cokernel_coordinates(d1)
        gens = tuple(coords([int(i == k) for i in range(len(rows))])[0]
                     for k in range(len(rows)))
        return H0Presentation(free_rank=len(rows) - len(factors),
                              torsion=tuple(d for d in factors if d > 1),
                              cone_generators=gens, labels=tuple(rows))
    if n == 1:
        d1, rows1, cols1 = boundary_matrix(fs, 1)
        d2, _, _ = boundary_matrix(fs, 2)
        rank1 = len(invariant_factors(d1))
        f2 = invariant_factors(d2)
        # ker d1 is saturated in C_1, so torsion of ker/im equals that of C_1/im
        return H0Presentation(free_rank=(len(cols1) - rank1) - len(f2),
                              torsion=tuple(d for d in f2 if d > 1))
    raise UnsupportedDegreeError(f"homology in degree {n} is not computed (only 0 and 1)")


def cone_is_standard(p: H0Presentation) -> bool:
    """True when the cone generators are exactly a Z-basis of the free part,
    so the positive cone is N^free_rank in some basis."""
    if p.cone_generators is None or p.torsion:
        return False
    distinct = sorted(set(p.cone_generators))
    if len(distinct) != p.free_rank:
        return False
    if p.free_rank == 0:
        return True
    return abs(IntMatrix.from_rows(distinct, p.free_rank).det()) == 1


def _vec(fs: FiberedSet, f) -> list:
    if isinstance(f, ChainFunction):
        return f.vector(fs)
    f = list(f)
    if len(f) != len(fs.X):
        raise ValueError(f"function of length {len(f)} on a set of size {len(fs.X)}")
    return f


def fiber_sum(fs: FiberedSet, f) -> list[int]:
    f = _vec(fs, f)
    idx = fs.index()
    sums = {y: 0 for y in fs.Y}
    for x in fs.X:
        sums[fs.sigma[x]] += f[idx[x]]
    return [sums[y] for y in fs.Y]


def h0_class_equal(fs: FiberedSet, f1, f2) -> bool:
    return fiber_sum(fs, f1) == fiber_sum(fs, f2)


# --------------------------------------------------------------------------
# block matrices and traces


def convolve(f: Mapping, g: Mapping) -> dict:
    out: dict = {}
    for (u, v), a in f.items():
        for (v2, w), b in g.items():
            if v == v2:
                out[(u, w)] = out.get((u, w), 0) + a * b
    return {k: v for k, v in out.items() if v}


def adjoint(f: Mapping) -> dict:
    return {(v, u): a for (u, v), a in f.items()}


def identity_function(fs: FiberedSet) -> dict:
    return {(x, x): 1 for x in fs.X}


def indicator_projection(fs: FiberedSet, V) -> dict:
    """The diagonal projection 1_V."""
    return {(x, x): 1 for x in fs.X if x in set(V)}


@dataclass(frozen=True)
class BlockDecomposition:
    fs: FiberedSet
    blocks: tuple  # ((y, (u_1, u_2, ...)), ...)

    def mu(self, f: Mapping) -> dict:
        """Per-block matrices ``mu(f)[y][r][s] = f(u_r, u_s)``."""
        out = {}
        for y, us in self.blocks:
            out[y] = [[Fraction(f.get((a, b), 0)) for b in us] for a in us]
        for (u, v) in f:
            if u not in self.fs.sigma or v not in self.fs.sigma \
                    or self.fs.sigma[u] != self.fs.sigma[v]:
                if f[(u, v)]:
                    raise InvalidInputError(f"({u!r}, {v!r}) is not in the relation")
        return out

    def mu_k(self, p) -> dict:
        """Amplified blocks for a k x k matrix of functions: block y is the
        k|fiber| square matrix with (i,j) sub-block mu(p[i][j])[y]."""
        if isinstance(p, Mapping):
            return self.mu(p)
        k = len(p)
        subs = [[self.mu(p[i][j]) for j in range(k)] for i in range(k)]
        out = {}
        for y, us in self.blocks:
            m = len(us)
            big = [[Fraction(0)] * (k * m) for _ in range(k * m)]
            for i in range(k):
                for j in range(k):
                    blk = subs[i][j][y]
                    for r in range(m):
                        for s in range(m):
                            big[i * m + r][j * m + s] = blk[r][s]
            out[y] = big
        return out


def block_decomposition(fs: FiberedSet, phi: Section) -> BlockDecomposition:
    check_section(fs, phi)
    fibers = fs.fibers()
    blocks = []
    for y in fs.Y:
        head = phi(y)
        blocks.append((y, (head,) + tuple(x for x in fibers[y] if x != head)))
    return BlockDecomposition(fs, tuple(blocks))


def _matmul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def is_projection_blocks(blocks: Mapping) -> bool:
    for m in blocks.values():
        if not m:
            continue
        if _matmul(m, m) != m:
            return False
        if [list(r) for r in zip(*m)] != m:
            return False
    return True


def _block_traces(bd: BlockDecomposition, p) -> dict:
    blocks = bd.mu_k(p)
    if not is_projection_blocks(blocks):
        raise NotAProjectionError("input is not a self-adjoint idempotent")
    return {y: sum(m[i][i] for i in range(len(m))) for y, m in blocks.items()}


def trace_phi(fs: FiberedSet, phi: Section, p) -> list[int]:
    """Level-0 function on X: the block trace of p over y sits at phi(y)."""
    bd = block_decomposition(fs, phi)
    traces = _block_traces(bd, p)
    out = {x: 0 for x in fs.X}
    for y, t in traces.items():
        if t.denominator != 1 or t < 0:
            raise NotAProjectionError(f"block trace {t} over {y!r} is not a natural number")
        out[phi(y)] = int(t)
    return [out[x] for x in fs.X]


def trace_data(fs: FiberedSet, p) -> list[int]:
    """Per-fiber traces of a projection (section independent)."""
    phi = Section({y: fs.fiber(y)[0] for y in fs.Y})
    traces = _block_traces(block_decomposition(fs, phi), p)
    return [int(traces[y]) for y in fs.Y]


def projection_equiv(fs: FiberedSet, p, q) -> bool:
    return trace_data(fs, p) == trace_data(fs, q)
