"""AF-embeddability decisions for graph shifts, three independent ways.

All three decide whether some integer vector f has ``(A - I) f`` nonzero and
nonnegative, where A is the range-source transfer matrix:

* ``af_lp``: per-coordinate rational feasibility, l1-minimal witness;
* ``af_stiemke``: the theorem of the alternative, with a positive fixed
  vector of ``A^T`` as the embeddability certificate;
* ``af_cycle``: the combinatorial criterion (a cycle with an entrance), with
  a witness built from the cycle.

Rational feasibility suffices for the integer question because the
condition is invariant under positive scaling; witnesses are scaled to
primitive integer vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import InconsistencyError
from .exactlin import (IntMatrix, clear_denominators, l1_minimal_point, rational_feasible,
                       stiemke_alternative)
from .exactlin.alternative import primal_system
from .graphmodel import (DirectedGraph, Entrance, adjacency_transfer, as_matrix,
                         cycle_through, cycles_with_entrance, require_valid)


@dataclass(frozen=True)
class Verdict:
    embeddable: bool
    method: str  # lp, stiemke, cycle or oracle
    witness: tuple | None = None  # f
    increment: tuple | None = None  # h = (A^n - I) f
    fixed_vector: tuple | None = None  # y > 0 with (A^n)^T y = y
    power: int = 1
    details: dict = field(default_factory=dict, compare=False)


def _shifted(A, n: int = 1) -> IntMatrix:
    M = as_matrix(A)
    return (M ** n) - IntMatrix.identity(M.rows)


def verify_verdict(A, v: Verdict) -> bool:
    """Re-check a verdict's certificate with exact integer arithmetic."""
    M = _shifted(A, v.power)
    if v.witness is not None and v.fixed_vector is not None:
        return False
    if not v.embeddable:
        if v.witness is None:
            return False
        h = M.apply(list(v.witness))
        return (tuple(h) == tuple(v.increment) and all(x >= 0 for x in h) and any(h))
    if v.fixed_vector is not None:
        y = list(v.fixed_vector)
        return all(x > 0 for x in y) and not any(M.T.apply(y))
    return True


def af_lp(A, power: int = 1, method: str = "auto") -> Verdict:
    M = _shifted(A, power)
    best = None
    for j in range(M.rows):
        system = primal_system(M, j)
        if not rational_feasible(system, M.cols, method).feasible:
            continue
        point = l1_minimal_point(system, M.cols)
        f = clear_denominators(point)
        norm = sum(abs(x) for x in f)
        if best is None or norm < best[0]:
            best = (norm, j, f)
    if best is None:
        return Verdict(True, "lp", power=power)
    _, j, f = best
    return Verdict(False, "lp", witness=tuple(f), increment=tuple(M.apply(f)), power=power,
                   details={"coordinate": j})


def af_stiemke(A, power: int = 1) -> Verdict:
    M = _shifted(A, power)
    cert = stiemke_alternative(M)
    if cert.branch == "dual":
        return Verdict(True, "stiemke", fixed_vector=cert.vector, power=power)
    return Verdict(False, "stiemke", witness=cert.vector, increment=cert.image, power=power)


def transfer_witness(g: DirectedGraph, ent: Entrance):
    """Witness for the cylinder transfer (the transpose of the range-source
    matrix) built from a cycle with an entrance.

    With u the indicator of the cycle's range vertex, the transfer applied
    |cycle| times to u counts paths of that length ending at the vertex: the
    cycle itself plus the path through the entrance, so it exceeds u. The
    telescoped sum F of the first |cycle| iterates then satisfies
    ``(T - I) F = T^|cycle| u - u``, nonzero and nonnegative."""
    cycle = cycle_through(g, ent.cycle_edge)
    if not cycle:
        raise InconsistencyError("reported cycle edge lies on no cycle",
                                 {"entrance": ent.__dict__})
    T = adjacency_transfer(g).A.T
    idx = g.index()
    u = [0] * len(g.vertices)
    u[idx[ent.vertex]] = 1
    F = [0] * len(u)
    w = list(u)
    for _ in range(len(cycle)):
        F = [a + b for a, b in zip(F, w)]
        w = T.apply(w)
    h = (T - IntMatrix.identity(T.rows)).apply(F)
    return cycle, tuple(F), tuple(h)


def af_cycle(g: DirectedGraph) -> Verdict:
    """Embeddable iff no cycle has an entrance.

    For the range-source matrix A the witness comes from the reversed graph
    (whose range-source matrix is the transpose of A); a finite graph without
    sinks or sources has a cycle with an entrance iff its reverse does."""
    require_valid(g)
    forward = cycles_with_entrance(g)
    rev = g.reversed()
    backward = cycles_with_entrance(rev)
    if bool(forward) != bool(backward):
        raise InconsistencyError("entrance detection disagrees with its reverse",
                                 {"forward": [e.__dict__ for e in forward],
                                  "reversed": [e.__dict__ for e in backward]})
    if not forward:
        return Verdict(True, "cycle")
    ent = forward[0]
    cycle, Fp, hp = transfer_witness(g, ent)
    rent = backward[0]
    rcycle, F, h = transfer_witness(rev, rent)
    details = {"entrance": {"vertex": ent.vertex, "cycle_edge": ent.cycle_edge,
                            "entrance": ent.entrance, "cycle": list(cycle)},
               "cylinder_witness": {"f": list(Fp), "h": list(hp)},
               "exit": {"vertex": rent.vertex, "cycle_edge": rent.cycle_edge,
                        "exit": rent.entrance, "cycle": list(reversed(rcycle))}}
    return Verdict(False, "cycle", witness=F, increment=h, details=details)


def power_condition(A, n: int) -> bool:
    """Condition for A^n: no integer f with (A^n - I) f nonzero and >= 0."""
    if n < 1:
        raise ValueError("power must be at least 1")
    M = _shifted(A, n)
    # feasibility alone settles the condition; stop at the first coordinate
    return not any(rational_feasible(primal_system(M, j), M.cols).feasible
                   for j in range(M.rows))


@dataclass(frozen=True)
class Decision:
    embeddable: bool
    verdicts: tuple

    def verdict(self, method: str) -> Verdict:
        return next(v for v in self.verdicts if v.method == method)


def decide(g: DirectedGraph, methods: Sequence[str] = ("lp", "stiemke", "cycle"),
           power: int = 1) -> Decision:
    """Run the requested methods and insist they agree."""
    require_valid(g)
    A = adjacency_transfer(g)
    verdicts = []
    for m in methods:
        if m == "lp":
            verdicts.append(af_lp(A, power))
        elif m == "stiemke":
            verdicts.append(af_stiemke(A, power))
        elif m == "cycle":
            if power == 1:
                verdicts.append(af_cycle(g))
        else:
            raise ValueError(f"unknown method {m!r}")
    dump = {"matrix": A.A.to_rows(), "power": power,
            "verdicts": [{"method": v.method, "embeddable": v.embeddable,
                          "witness": v.witness, "fixed_vector": v.fixed_vector}
                         for v in verdicts]}
    for v in verdicts:
        if not verify_verdict(A, v):
            raise InconsistencyError(f"{v.method} certificate fails verification", dump)
    if len({v.embeddable for v in verdicts}) > 1:
        raise InconsistencyError("decision methods disagree", dump)
    return Decision(verdicts[0].embeddable, tuple(verdicts))

