"""Smith normal form over the integers, kernels and cokernels."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .matrix import IntMatrix


@dataclass(frozen=True)
class SNFResult:
    """``U @ M @ V == D`` with U, V unimodular and D in Smith form."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i, i] for i in range(min(self.D.rows, self.D.cols))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


@dataclass(frozen=True)
class H0Presentation:
    """Finitely generated abelian group ``Z^free_rank + sum Z/t`` with an
    optional positive cone given by generator images in free coordinates."""

    free_rank: int
    torsion: tuple = ()
    cone_generators: tuple | None = None
    labels: tuple | None = None

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def describe(self) -> str:
        parts = [f"Z^{self.free_rank}"] if self.free_rank else []
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) or "0"


def _pick_pivot(a, t, m, n):
    best = None
    for i in range(t, m):
        row = a[i]
        for j in range(t, n):
            v = row[j]
            if v and (best is None or abs(v) < best[0]):
                best = (abs(v), i, j)
                if best[0] == 1:
                    return best
    return best


def _smith(a: list[list[int]], m: int, n: int, track: bool):
    U = [[int(i == j) for j in range(m)] for i in range(m)] if track else None
    V = [[int(i == j) for j in range(n)] for i in range(n)] if track else None

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        if track:
            U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]
        if track:
            for row in V:
                row[j], row[k] = row[k], row[j]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        rs, rd = a[src], a[dst]
        for j in range(n):
            if rs[j]:
                rd[j] += q * rs[j]
        if track:
            us, ud = U[src], U[dst]
            for j in range(m):
                if us[j]:
                    ud[j] += q * us[j]

    def add_col(dst, src, q):
        for row in a:
            if row[src]:
                row[dst] += q * row[src]
        if track:
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        piv = _pick_pivot(a, t, m, n)
        if piv is None:
            break
        _, pi, pj = piv
        if pi != t:
            swap_rows(pi, t)
        if pj != t:
            swap_cols(pj, t)
        while True:
            p = a[t][t]
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
            best = None
            for i in range(t + 1, m):
                v = a[i][t]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), "r", i)
            for j in range(t + 1, n):
                v = a[t][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), "c", j)
            if best is not None:
                if best[1] == "r":
                    swap_rows(best[2], t)
                else:
                    swap_cols(best[2], t)
                continue
            bad = None
            for i in range(t + 1, m):
                row = a[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if track:
                U[t] = [-x for x in U[t]]
        t += 1
    return U, V


def snf(M: IntMatrix) -> SNFResult:
    """Smith normal form with transforms.

    Pivot: smallest nonzero absolute value in the remaining block, ties broken
    by lowest (row, col)."""
    m, n = M.rows, M.cols
    a = M.to_rows()
    U, V = _smith(a, m, n, track=True)
    return SNFResult(IntMatrix.from_rows(U, m), IntMatrix.from_rows(a, n),
                     IntMatrix.from_rows(V, n))


def invariant_factors(M: IntMatrix | Sequence[Sequence[int]]) -> list[int]:
    """Nonzero Smith diagonal entries (``d_1 | d_2 | ...``), without transforms.

    Unit pivots are eliminated sparsely first; whatever survives goes through
    the dense algorithm. Suitable for large sparse boundary matrices."""
    if isinstance(M, IntMatrix):
        rows = [{j: v for j, v in enumerate(M.row(i)) if v} for i in range(M.rows)]
    else:
        rows = [{j: v for j, v in enumerate(r) if v} for r in M]
    rows = [r for r in rows if r]
    cols: dict[int, set] = {}
    for i, r in enumerate(rows):
        for j in r:
            cols.setdefault(j, set()).add(i)
    alive = set(range(len(rows)))
    units = 0
    while True:
        best = None
        for i in alive:
            r = rows[i]
            for j, v in r.items():
                if v == 1 or v == -1:
                    cost = (len(r) - 1) * (len(cols[j]) - 1)
                    key = (cost, i, j)
                    if best is None or key < best:
                        best = key
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        _, pi, pj = best
        prow = rows[pi]
        pv = prow[pj]
        for i in list(cols[pj]):
            if i == pi:
                continue
            r = rows[i]
            q = r[pj] * pv  # pv is +-1, so r[pj]/pv == r[pj]*pv
            for j, v in prow.items():
                nv = r.get(j, 0) - q * v
                if nv:
                    if j not in r:
                        cols.setdefault(j, set()).add(i)
                    r[j] = nv
                elif j in r:
                    del r[j]
                    cols[j].discard(i)
            if not r:
                alive.discard(i)
        for j in prow:
            cols[j].discard(pi)
        del cols[pj]
        alive.discard(pi)
        rows[pi] = {}
        units += 1
    rest_rows = sorted(alive)
    rest_cols = sorted({j for i in rest_rows for j in rows[i]})
    factors = [1] * units
    if rest_rows and rest_cols:
        index = {j: k for k, j in enumerate(rest_cols)}
        dense = [[0] * len(rest_cols) for _ in rest_rows]
        for k, i in enumerate(rest_rows):
            for j, v in rows[i].items():
                dense[k][index[j]] = v
        _smith(dense, len(rest_rows), len(rest_cols), track=False)
        factors += [dense[k][k] for k in range(min(len(rest_rows), len(rest_cols)))
                    if dense[k][k]]
    return factors


def rank(M: IntMatrix) -> int:
    return len(invariant_factors(M))


def kernel_basis(M: IntMatrix) -> list[list[int]]:
    """Basis of the integer kernel; each vector's first nonzero entry is positive."""
    res = snf(M)
    r = res.rank
    basis = []
    for j in range(r, M.cols):
        v = list(res.V.col(j))
        lead = next((x for x in v if x), 0)
        if lead < 0:
            v = [-x for x in v]
        basis.append(v)
    return basis


def cokernel_presentation(M: IntMatrix) -> H0Presentation:
    """``Z^rows / im(M)``."""
    factors = invariant_factors(M)
    return H0Presentation(free_rank=M.rows - len(factors),
                          torsion=tuple(d for d in factors if d > 1))


def cokernel_coordinates(M: IntMatrix):
    """Return a function mapping a vector in ``Z^rows`` to its class in
    ``coker M``: a pair (free coordinates, torsion residues)."""
    res = snf(M)
    diag = res.diagonal + [0] * (M.rows - min(M.rows, M.cols))
    U = res.U

    def coords(vec):
        img = U.apply(list(vec))
        free = tuple(img[i] for i in range(M.rows) if diag[i] == 0)
        tors = tuple(img[i] % diag[i] for i in range(M.rows) if diag[i] > 1)
        return free, tors

    return coords


def solve_integer(M: IntMatrix, b: Sequence[int]) -> list[int] | None:
    """Some integer x with ``M x = b``, or None if none exists."""
    res = snf(M)
    c = res.U.apply(list(b))
    diag = res.diagonal
    y = [0] * M.cols
    for i, ci in enumerate(c):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if ci != 0:
                return None
        else:
            if ci % d:
                return None
            y[i] = ci // d
    return res.V.apply(y)
