"""Exact rational feasibility of finite linear systems.

Two independent engines:

* Fourier-Motzkin elimination (default up to ``FM_MAX_VARS`` variables).
  Every derived row carries its multipliers over the input rows, so an
  infeasible system comes back with a Farkas certificate.
* A two-phase dense simplex on Fractions with Bland's rule, used for larger
  systems and for linear objectives (l1-minimal witnesses).

Constraints are ``a.x >= b``, ``a.x > b`` or ``a.x == b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .matrix import rational_inverse

FM_MAX_VARS = 12

GEQ, GT, EQ = ">=", ">", "=="


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple
    rhs: Fraction
    sense: str = GEQ

    def __post_init__(self):
        if self.sense not in (GEQ, GT, EQ):
            raise ValueError(f"unknown sense {self.sense!r}")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))
        object.__setattr__(self, "rhs", Fraction(self.rhs))

    def holds(self, point: Sequence) -> bool:
        lhs = sum(a * x for a, x in zip(self.coeffs, point))
        if self.sense == GEQ:
            return lhs >= self.rhs
        if self.sense == GT:
            return lhs > self.rhs
        return lhs == self.rhs


def geq(coeffs, rhs=0) -> Constraint:
    return Constraint(tuple(coeffs), rhs, GEQ)


def gt(coeffs, rhs=0) -> Constraint:
    return Constraint(tuple(coeffs), rhs, GT)


def eq(coeffs, rhs=0) -> Constraint:
    return Constraint(tuple(coeffs), rhs, EQ)


@dataclass(frozen=True)
class FarkasCertificate:
    """Multipliers (nonnegative on inequalities) combining the system into
    ``0 >= c`` with ``c > 0``, or ``0 > 0``."""

    multipliers: tuple


@dataclass(frozen=True)
class Feasibility:
    feasible: bool
    point: tuple | None
    certificate: FarkasCertificate | None
    method: str


def _nvars(constraints, nvars):
    if nvars is None:
        nvars = max((len(c.coeffs) for c in constraints), default=0)
    for c in constraints:
        if len(c.coeffs) != nvars:
            raise ValueError(f"constraint has {len(c.coeffs)} coefficients, expected {nvars}")
    return nvars


def verify_point(constraints: Sequence[Constraint], point: Sequence) -> bool:
    return all(c.holds(point) for c in constraints)


def verify_infeasibility(constraints: Sequence[Constraint], cert: FarkasCertificate) -> bool:
    lam = cert.multipliers
    if len(lam) != len(constraints):
        return False
    n = max((len(c.coeffs) for c in constraints), default=0)
    total = [Fraction(0)] * n
    rhs = Fraction(0)
    strict_used = False
    for c, m in zip(constraints, lam):
        m = Fraction(m)
        if c.sense != EQ and m < 0:
            return False
        if m == 0:
            continue
        for k, a in enumerate(c.coeffs):
            total[k] += m * a
        rhs += m * c.rhs
        if c.sense == GT:
            strict_used = True
    if any(total):
        return False
    return rhs > 0 or (rhs == 0 and strict_used)


# --------------------------------------------------------------------------
# Fourier-Motzkin


class _Row:
    __slots__ = ("a", "b", "strict", "mult", "hist")

    def __init__(self, a, b, strict, mult, hist):
        self.a = a
        self.b = b
        self.strict = strict
        self.mult = mult
        self.hist = hist

    def scaled(self, s):
        return _Row([x * s for x in self.a], self.b * s, self.strict,
                    {k: v * s for k, v in self.mult.items()}, self.hist)


def _combine(p: _Row, q: _Row, sp, sq) -> _Row:
    a = [x * sp + y * sq for x, y in zip(p.a, q.a)]
    mult = {k: v * sp for k, v in p.mult.items()}
    for k, v in q.mult.items():
        mult[k] = mult.get(k, 0) + v * sq
    return _Row(a, p.b * sp + q.b * sq, p.strict or q.strict, mult, p.hist | q.hist)


def _contradiction(row: _Row) -> bool:
    return row.b > 0 or (row.b == 0 and row.strict)


def _certificate(row: _Row, m: int) -> FarkasCertificate:
    return FarkasCertificate(tuple(Fraction(row.mult.get(i, 0)) for i in range(m)))


def _choose(lo, lo_strict, hi, hi_strict):
    def ok(v):
        if lo is not None and (v < lo or (lo_strict and v == lo)):
            return False
        if hi is not None and (v > hi or (hi_strict and v == hi)):
            return False
        return True

    if ok(Fraction(0)):
        return Fraction(0)
    candidates = []
    if lo is not None:
        candidates.append(lo + 1 if lo_strict else lo)
        candidates.append(Fraction(int(lo // 1) + 1))
    if hi is not None:
        candidates.append(hi - 1 if hi_strict else hi)
        candidates.append(Fraction(-int((-hi) // 1) - 1))
    if lo is not None and hi is not None:
        candidates.append((lo + hi) / 2)
    for v in sorted(candidates, key=lambda v: (abs(v), v)):
        if ok(v):
            return v
    raise AssertionError("empty interval during back-substitution")


def fourier_motzkin(constraints: Sequence[Constraint], nvars: int | None = None) -> Feasibility:
    n = _nvars(constraints, nvars)
    m = len(constraints)

    # equalities: reduced row echelon form, pivots substituted away
    pivots: list[tuple[int, _Row]] = []
    for idx, c in enumerate(constraints):
        if c.sense != EQ:
            continue
        row = _Row(list(c.coeffs), c.rhs, False, {idx: Fraction(1)}, frozenset())
        for p, prow in pivots:
            if row.a[p]:
                row = _combine(row, prow, 1, -row.a[p])
        lead = next((k for k, x in enumerate(row.a) if x), None)
        if lead is None:
            if row.b != 0:
                if row.b < 0:
                    row = row.scaled(-1)
                return Feasibility(False, None, _certificate(row, m), "fourier-motzkin")
            continue
        row = row.scaled(1 / row.a[lead])
        pivots = [(p, _combine(prow, row, 1, -prow.a[lead]) if prow.a[lead] else prow)
                  for p, prow in pivots]
        pivots.append((lead, row))
    pivot_vars = {p for p, _ in pivots}

    rows = []
    for idx, c in enumerate(constraints):
        if c.sense == EQ:
            continue
        row = _Row(list(c.coeffs), c.rhs, c.sense == GT, {idx: Fraction(1)},
                   frozenset([idx]))
        for p, prow in pivots:
            if row.a[p]:
                row = _combine(row, prow, 1, -row.a[p])
        rows.append(row)

    any_strict = any(r.strict for r in rows)
    eliminated: list[tuple[int, list[_Row]]] = []
    rows, bad = _tidy(rows, any_strict, 0)
    if bad is not None:
        return Feasibility(False, None, _certificate(bad, m), "fourier-motzkin")
    active = [v for v in range(n) if v not in pivot_vars]
    while True:
        used = [v for v in active if any(r.a[v] for r in rows)]
        if not used:
            break

        def cost(v):
            pos = sum(1 for r in rows if r.a[v] > 0)
            neg = sum(1 for r in rows if r.a[v] < 0)
            return (pos * neg - pos - neg, v)

        v = min(used, key=cost)
        pos = [r for r in rows if r.a[v] > 0]
        neg = [r for r in rows if r.a[v] < 0]
        rest = [r for r in rows if r.a[v] == 0]
        eliminated.append((v, pos + neg))
        for p in pos:
            for q in neg:
                rest.append(_combine(p, q, 1 / p.a[v], 1 / -q.a[v]))
        active.remove(v)
        rows, bad = _tidy(rest, any_strict, len(eliminated))
        if bad is not None:
            return Feasibility(False, None, _certificate(bad, m), "fourier-motzkin")

    point = [Fraction(0)] * n
    for v, bound_rows in reversed(eliminated):
        lo = hi = None
        lo_s = hi_s = False
        for r in bound_rows:
            rest = sum(r.a[k] * point[k] for k in range(n) if k != v)
            val = (r.b - rest) / r.a[v]
            if r.a[v] > 0:
                if lo is None or val > lo or (val == lo and r.strict):
                    lo, lo_s = val, r.strict
            else:
                if hi is None or val < hi or (val == hi and r.strict):
                    hi, hi_s = val, r.strict
        point[v] = _choose(lo, lo_s, hi, hi_s)
    for p, prow in reversed(pivots):
        point[p] = prow.b - sum(prow.a[k] * point[k] for k in range(n) if k != p)
    if not verify_point(constraints, point):
        raise AssertionError("Fourier-Motzkin back-substitution produced an infeasible point")
    return Feasibility(True, tuple(point), None, "fourier-motzkin")


def _tidy(rows, any_strict, k):
    """Drop trivial rows, detect contradictions, deduplicate and apply
    Chernikov's history bound (non-strict systems only)."""
    best: dict[tuple, _Row] = {}
    for r in rows:
        lead = next((x for x in r.a if x), None)
        if lead is None:
            if _contradiction(r):
                return [], r
            continue
        if not any_strict and len(r.hist) > k + 1:
            continue
        r = r.scaled(1 / abs(lead))
        key = tuple(r.a)
        cur = best.get(key)
        if (cur is None or r.b > cur.b or (r.b == cur.b and r.strict and not cur.strict)
                or (r.b == cur.b and r.strict == cur.strict and len(r.hist) < len(cur.hist))):
            best[key] = r
    return list(best.values()), None


# --------------------------------------------------------------------------
# Simplex


def _simplex_standard(A, b, c):
    """Minimise ``c.z`` subject to ``A z = b``, ``z >= 0`` with ``b >= 0``.

    Returns (status, z, phase1_duals) where status is 'optimal', 'infeasible'
    or 'unbounded'. Bland's rule throughout."""
    m = len(A)
    n = len(c)
    T = [list(A[i]) + [Fraction(int(i == j)) for j in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    width = n + m

    def pivot(r, col):
        pv = T[r][col]
        T[r] = [x / pv for x in T[r]]
        for i in range(m):
            if i != r and T[i][col]:
                f = T[i][col]
                Ti, Tr = T[i], T[r]
                T[i] = [x - f * y for x, y in zip(Ti, Tr)]
        basis[r] = col

    def run(cost, allowed):
        while True:
            y_cost = [cost[j] for j in basis]
            entering = None
            for j in range(width):
                if j not in allowed or j in basis:
                    continue
                rc = cost[j] - sum(y_cost[i] * T[i][j] for i in range(m))
                if rc < 0:
                    entering = j
                    break
            if entering is None:
                return "optimal"
            best = None
            for i in range(m):
                if T[i][entering] > 0:
                    ratio = T[i][-1] / T[i][entering]
                    key = (ratio, basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded"
            pivot(best[1], entering)

    phase1 = [Fraction(0)] * n + [Fraction(1)] * m
    run(phase1, set(range(width)))
    value = sum(T[i][-1] for i in range(m) if basis[i] >= n)
    if value > 0:
        B = [[(A[r][j] if j < n else Fraction(int(r == j - n))) for j in basis]
             for r in range(m)]
        cb = [phase1[j] for j in basis]
        Binv = rational_inverse(B)
        y = [sum(cb[i] * Binv[i][r] for i in range(m)) for r in range(m)]
        return "infeasible", None, y
    # drive artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j] != 0), None)
            if col is not None:
                pivot(i, col)
    allowed = set(range(n))
    cost = list(c) + [Fraction(0)] * m
    status = run(cost, allowed)
    if status == "unbounded":
        return "unbounded", None, None
    z = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            z[j] = T[i][-1]
    return "optimal", z, None


def _standardize(constraints, n, strict_var):
    """Variables: x+ (n), x- (n), one slack per inequality, optional t."""
    ineq = [i for i, c in enumerate(constraints) if c.sense != EQ]
    slack_of = {i: 2 * n + k for k, i in enumerate(ineq)}
    width = 2 * n + len(ineq) + (1 if strict_var else 0)
    t_col = width - 1 if strict_var else None
    A, b, signs = [], [], []
    for i, c in enumerate(constraints):
        row = [Fraction(0)] * width
        for k, a in enumerate(c.coeffs):
            row[k] = a
            row[n + k] = -a
        if c.sense != EQ:
            row[slack_of[i]] = Fraction(-1)
        if c.sense == GT:
            row[t_col] = Fraction(-1)
        rhs = c.rhs
        sign = 1
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
            sign = -1
        A.append(row)
        b.append(rhs)
        signs.append(sign)
    if strict_var:
        # t + u = 1 with a fresh slack u
        row = [Fraction(0)] * width
        row[t_col] = Fraction(1)
        for r in A:
            r.append(Fraction(0))
        row.append(Fraction(1))
        A.append(row)
        b.append(Fraction(1))
        signs.append(1)
        width += 1
    return A, b, signs, width, t_col


def simplex(constraints: Sequence[Constraint], nvars: int | None = None,
            objective: Sequence | None = None) -> Feasibility:
    """Feasibility (and optionally the minimiser of a linear objective)."""
    n = _nvars(constraints, nvars)
    m = len(constraints)
    strict = any(c.sense == GT for c in constraints)
    A, b, signs, width, t_col = _standardize(constraints, n, strict)
    if strict:
        cost = [Fraction(0)] * width
        cost[t_col] = Fraction(-1)
    else:
        cost = [Fraction(0)] * width
        if objective is not None:
            for k, w in enumerate(objective):
                cost[k] = Fraction(w)
                cost[n + k] = -Fraction(w)
    if not A:
        point = tuple(Fraction(0) for _ in range(n))
        return Feasibility(True, point, None, "simplex")
    status, z, y = _simplex_standard(A, b, cost)
    if status == "infeasible":
        lam = [Fraction(signs[i]) * y[i] for i in range(m)]
        cert = FarkasCertificate(tuple(lam))
        if not verify_infeasibility(constraints, cert):
            cert = fourier_motzkin(constraints, n).certificate
        return Feasibility(False, None, cert, "simplex")
    if status == "unbounded":
        raise ValueError("objective is unbounded below on the feasible region")
    if strict and z[t_col] == 0:
        cert = fourier_motzkin(constraints, n).certificate
        return Feasibility(False, None, cert, "simplex")
    point = [z[k] - z[n + k] for k in range(n)]
    if strict and objective is not None:
        # fix the achieved strictness margin, then optimise the objective
        tight = [Constraint(c.coeffs, c.rhs + z[t_col] / 2, GEQ) if c.sense == GT else c
                 for c in constraints]
        return simplex(tight, n, objective)
    if not verify_point(constraints, point):
        raise AssertionError("simplex produced an infeasible point")
    return Feasibility(True, tuple(point), None, "simplex")


def rational_feasible(constraints: Sequence[Constraint], nvars: int | None = None,
                      method: str = "auto") -> Feasibility:
    """Decide a finite system of linear constraints over Q.

    ``method`` is 'auto' (Fourier-Motzkin up to ``FM_MAX_VARS`` variables,
    simplex above), 'fm' or 'simplex'."""
    n = _nvars(constraints, nvars)
    if method == "auto":
        method = "fm" if n <= FM_MAX_VARS else "simplex"
    if method == "fm":
        return fourier_motzkin(constraints, n)
    if method == "simplex":
        return simplex(constraints, n)
    raise ValueError(f"unknown method {method!r}")


def l1_minimal_point(constraints: Sequence[Constraint], nvars: int | None = None):
    """A point of the (non-strict) system minimising sum |x_i|, or None."""
    n = _nvars(constraints, nvars)
    # x = x+ - x-; at an optimum at most one of each pair is nonzero, so the
    # split objective sum(x+) + sum(x-) equals the l1 norm.
    A, b, signs, width, _ = _standardize(constraints, n, False)
    if not A:
        return tuple(Fraction(0) for _ in range(n))
    cost = [Fraction(1)] * (2 * n) + [Fraction(0)] * (width - 2 * n)
    status, z, _ = _simplex_standard(A, b, cost)
    if status != "optimal":
        return None
    point = tuple(z[k] - z[n + k] for k in range(n))
    if not verify_point(constraints, point):
        raise AssertionError("l1 minimisation produced an infeasible point")
    return point
