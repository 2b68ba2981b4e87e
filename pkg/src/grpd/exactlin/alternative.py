"""Stiemke's theorem of the alternative for integer matrices.

For an integer matrix M exactly one holds:

* primal: some integer f with ``M f >= 0`` and ``M f != 0``;
* dual: some integer y with every entry positive and ``y^T M = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InconsistencyError
from .feasible import eq, geq, rational_feasible, verify_infeasibility
from .matrix import IntMatrix, clear_denominators


@dataclass(frozen=True)
class AlternativeCertificate:
    branch: str  # "primal" or "dual"
    vector: tuple
    image: tuple

    def check(self, M: IntMatrix) -> bool:
        if self.branch == "primal":
            img = M.apply(list(self.vector))
            return tuple(img) == self.image and all(x >= 0 for x in img) and any(img)
        if self.branch == "dual":
            img = M.T.apply(list(self.vector))
            return (tuple(img) == self.image and not any(img)
                    and all(y > 0 for y in self.vector))
        return False


def dual_system(M: IntMatrix):
    """Constraints ``y >= 1`` and ``M^T y = 0`` in the variables y."""
    m, n = M.rows, M.cols
    cons = [geq([int(i == k) for k in range(m)], 1) for i in range(m)]
    cons += [eq(list(M.col(j)), 0) for j in range(n)]
    return cons


def primal_system(M: IntMatrix, j: int):
    """Constraints ``M f >= 0`` and ``(M f)_j >= 1``."""
    cons = [geq(list(M.row(i)), 0) for i in range(M.rows)]
    cons.append(geq(list(M.row(j)), 1))
    return cons


def primal_witness(M: IntMatrix, method: str = "auto"):
    """First row index j (ascending) admitting ``M f >= 0, (Mf)_j >= 1``,
    with an integer f; or None when ``M f >= 0`` forces ``M f = 0``."""
    for j in range(M.rows):
        res = rational_feasible(primal_system(M, j), M.cols, method)
        if res.feasible:
            f = clear_denominators(res.point)
            return j, f
    return None


def stiemke_alternative(M: IntMatrix, method: str = "auto") -> AlternativeCertificate:
    """Decide which side of the alternative holds and certify it.

    The dual is tried first; if it is infeasible the primal must succeed, and
    failure of both is reported as an inconsistency."""
    dual = rational_feasible(dual_system(M), M.rows, method)
    if dual.feasible:
        y = clear_denominators(dual.point)
        cert = AlternativeCertificate("dual", tuple(y), tuple(M.T.apply(y)))
    else:
        if not verify_infeasibility(dual_system(M), dual.certificate):
            raise InconsistencyError("dual infeasibility certificate does not verify",
                                     {"matrix": M.to_rows()})
        found = primal_witness(M, method)
        if found is None:
            raise InconsistencyError("neither side of the alternative holds",
                                     {"matrix": M.to_rows()})
        _, f = found
        cert = AlternativeCertificate("primal", tuple(f), tuple(M.apply(f)))
    if not cert.check(M):
        raise InconsistencyError("alternative certificate fails its own check",
                                 {"matrix": M.to_rows(), "certificate": cert.vector})
    return cert

