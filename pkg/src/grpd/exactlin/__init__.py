"""Exact integer and rational linear algebra."""

from .alternative import AlternativeCertificate, primal_witness, stiemke_alternative
from .feasible import (Constraint, FarkasCertificate, Feasibility, eq, fourier_motzkin, geq, gt,
                       l1_minimal_point, rational_feasible, simplex, verify_infeasibility,
                       verify_point)
from .matrix import (IntMatrix, Rational, clear_denominators, format_rational, parse_rational,
                     rational_inverse, rational_rank)
from .snf import (H0Presentation, SNFResult, cokernel_coordinates, cokernel_presentation,
                  invariant_factors, kernel_basis, rank, snf, solve_integer)
