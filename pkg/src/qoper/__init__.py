"""Twisted q-opers and anisotropic Bethe systems: solvers, identities, certificates."""

from .frame import QFrame, ToleranceConfig, default_lattice_window
from .poly import (Poly, coprime_test, lattice_related, monicize, qshift,
                   rel_error, roots)
from .structure import (PunctureData, Puncture, check_ffunc, f_poly,
                        lambda_poly, p_poly, pi_poly, w_poly)
from .wronskian import (DFactorization, SectionData, TwistData, d_factorize,
                        desnanot_jacobi_check, m_det, poly_det, vandermonde_det)
from .bethe import (BetheProblem, BetheRoots, classical_sl2_residual,
                    classical_sln_residual, gaudin_residual,
                    inhomogeneous_sl2_residual, nondegenerate_check,
                    problem_frame, sl2_q_residual, solve_newton, xxx_residual,
                    xxz_residual)

__all__ = [name for name in dir() if not name.startswith("_")]
