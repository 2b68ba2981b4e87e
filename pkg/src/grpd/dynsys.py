"""Finite dynamical models: compressions of bijections and pseudoloops.

A finite Hausdorff space is discrete, so a homeomorphism is a permutation
and every subset is compact open. For the pseudoloop criterion the system
``sigma: X -> X`` is read as a topological graph with edges X, range the
identity and source sigma.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from . import guards
from .decide import Verdict, af_lp
from .errors import InconsistencyError, InvalidInputError, PreconditionError
from .exactlin import IntMatrix, parse_rational

COMPRESSION_GUARD = 20


@dataclass(frozen=True)
class FiniteSystem:
    X: tuple
    sigma: Mapping
    kind: str = "general"  # "bijection" or "general"

    def __post_init__(self):
        X = tuple(sorted(self.X))
        sigma = dict(self.sigma)
        if set(sigma) != set(X):
            raise InvalidInputError("sigma must be defined on exactly the points of X")
        for x, y in sigma.items():
            if y not in sigma:
                raise InvalidInputError(f"sigma({x!r}) = {y!r} is not a point")
        is_bij = len(set(sigma.values())) == len(X)
        kind = self.kind
        if kind == "auto":
            kind = "bijection" if is_bij else "general"
        if kind not in ("bijection", "general"):
            raise InvalidInputError(f"unknown system kind {kind!r}")
        if kind == "bijection" and not is_bij:
            raise InvalidInputError("sigma is flagged as a bijection but is not one")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "sigma", dict(sorted(sigma.items())))
        object.__setattr__(self, "kind", kind)

    def image(self, U) -> frozenset:
        return frozenset(self.sigma[x] for x in U)


@dataclass(frozen=True)
class MetricModel:
    system: FiniteSystem
    metric: tuple  # rows indexed like system.X

    def __post_init__(self):
        n = len(self.system.X)
        d = tuple(tuple(Fraction(v) for v in row) for row in self.metric)
        if len(d) != n or any(len(r) != n for r in d):
            raise InvalidInputError(f"metric must be a {n}x{n} matrix")
        for i in range(n):
            if d[i][i] != 0:
                raise InvalidInputError("metric must vanish on the diagonal")
            for j in range(n):
                if d[i][j] != d[j][i]:
                    raise InvalidInputError("metric must be symmetric")
                if i != j and d[i][j] <= 0:
                    raise InvalidInputError("metric must be positive off the diagonal")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if d[i][k] > d[i][j] + d[j][k]:
                        raise InvalidInputError("metric violates the triangle inequality")
        object.__setattr__(self, "metric", d)

    def d(self, x, y) -> Fraction:
        idx = self.system_index
        return self.metric[idx[x]][idx[y]]

    @property
    def system_index(self) -> dict:
        cache = self.__dict__.get("_idx")
        if cache is None:
            cache = {x: i for i, x in enumerate(self.system.X)}
            object.__setattr__(self, "_idx", cache)
        return cache

    @classmethod
    def from_json(cls, data) -> MetricModel:
        if isinstance(data, str):
            data = json.loads(data)
        try:
            points = [str(p) for p in data["points"]]
            sigma = {str(k): str(v) for k, v in data["sigma"].items()}
            raw = data.get("metric")
        except (KeyError, TypeError, AttributeError) as exc:
            raise InvalidInputError(f"model JSON needs points and sigma: {exc}") from None
        system = FiniteSystem(tuple(points), sigma, "auto")
        if raw is None:
            raw = [["0" if a == b else "1" for b in points] for a in points]
        try:
            # the file lists rows in the order of "points"; reorder to sorted ids
            pos = {p: i for i, p in enumerate(points)}
            rows = [[parse_rational(raw[pos[a]][pos[b]]) for b in system.X] for a in system.X]
        except (ValueError, ZeroDivisionError, IndexError, TypeError) as exc:
            raise InvalidInputError(f"bad metric entry: {exc}") from None
        return cls(system, tuple(tuple(r) for r in rows))


def discrete_metric(X) -> tuple:
    n = len(X)
    return tuple(tuple(Fraction(int(i != j)) for j in range(n)) for i in range(n))


def _require_bijection(sys: FiniteSystem):
    if sys.kind != "bijection":
        raise PreconditionError("compression is only modelled for bijections")


def compresses(sys: FiniteSystem, U) -> bool:
    """sigma(U) is a proper subset of U."""
    _require_bijection(sys)
    U = frozenset(U)
    if not U <= set(sys.X):
        raise InvalidInputError("U must be a subset of X")
    img = sys.image(U)
    return img < U


@dataclass(frozen=True)
class CompressionReport:
    exists: bool
    by_cardinality: bool
    subsets_checked: int
    witness: tuple | None = None
    log: tuple = field(default=(), compare=False)


def compression_exists(sys: FiniteSystem) -> CompressionReport:
    """Cardinality argument and exhaustive subset enumeration, compared."""
    _require_bijection(sys)
    n = len(sys.X)
    guards.check("compression subset enumeration", n, COMPRESSION_GUARD)
    # a bijection preserves cardinality, so sigma(U) is never a proper subset
    by_card = False
    witness = None
    idx_sigma = [sys.X.index(sys.sigma[x]) for x in sys.X]
    for mask in range(1 << n):
        img = 0
        for i in range(n):
            if mask >> i & 1:
                img |= 1 << idx_sigma[i]
        if img != mask and img & ~mask == 0:
            witness = tuple(sys.X[i] for i in range(n) if mask >> i & 1)
            break
    found = witness is not None
    if found != by_card:
        raise InconsistencyError("compression enumeration contradicts the cardinality "
                                 "argument", {"witness": witness})
    log = (f"cardinality shortcut: {by_card}", f"enumerated {1 << n} subsets: {found}")
    return CompressionReport(found, by_card, 1 << n, witness, log)


def permutation_transfer(sys: FiniteSystem) -> IntMatrix:
    """``P[sigma(y)][y] = 1``: the transfer of the system on functions."""
    idx = {x: i for i, x in enumerate(sys.X)}
    n = len(sys.X)
    rows = [[0] * n for _ in range(n)]
    for y in sys.X:
        rows[idx[sys.sigma[y]]][idx[y]] += 1
    return IntMatrix.from_rows(rows, n)


def crossed_product_verdict(sys: FiniteSystem) -> Verdict:
    _require_bijection(sys)
    rep = compression_exists(sys)
    lp = af_lp(permutation_transfer(sys))
    if lp.embeddable == rep.exists:
        raise InconsistencyError("compression check and transfer feasibility disagree",
                                 {"compression": rep.exists, "lp": lp.embeddable})
    return Verdict(not rep.exists, "lp", witness=lp.witness, increment=lp.increment,
                   details={"compression_subsets_checked": rep.subsets_checked})


@dataclass(frozen=True)
class PseudoloopResult:
    exists: bool
    witness: tuple | None
    cap: int


def pseudoloop_exists(m: MetricModel, base, eps) -> PseudoloopResult:
    """Search for an eps-pseudoloop e_1 = base, ..., e_n.

    Consecutive edges need ``d(sigma(e_i), e_{i+1}) < eps`` and the loop
    closes when ``d(base, sigma(e_n)) < eps``. States are single points, so a
    breadth-first search visits each point once and the shortest witness has
    at most |X| <= |X|^2 edges."""
    eps = parse_rational(eps) if not isinstance(eps, Fraction) else eps
    if eps <= 0:
        raise PreconditionError("eps must be positive")
    sys = m.system
    if base not in sys.sigma:
        raise InvalidInputError(f"unknown base point {base!r}")
    cap = len(sys.X) ** 2
    prev = {base: None}
    queue = deque([base])
    while queue:
        u = queue.popleft()
        su = sys.sigma[u]
        if m.d(base, su) < eps:
            path = [u]
            while prev[path[-1]] is not None:
                path.append(prev[path[-1]])
            return PseudoloopResult(True, tuple(reversed(path)), cap)
        for w in sys.X:
            if w not in prev and m.d(su, w) < eps:
                prev[w] = u
                queue.append(w)
    return PseudoloopResult(False, None, cap)


def on_orbit_cycle(sys: FiniteSystem, x) -> bool:
    y = sys.sigma[x]
    for _ in range(len(sys.X)):
        if y == x:
            return True
        y = sys.sigma[y]
    return False
