"""Numerical construction of non-circular planar domains admitting
solutions of the constant-data overdetermined Helmholtz problem,
by bifurcation from the disk at Bessel-Wronskian roots."""

from .bessel import (BesselEval, BesselRoot, bessel_j, bessel_j_prime,
                     bessel_j_second, bessel_root)
from .branch import (BranchPoint, ScalingReport, branch_diagnostics,
                     newton_continue, non_circularity,
                     overdetermination_defect, scaling_study)
from .config import DEFAULTS
from .fields import (AsymptoticFamily, ConformalMap, CosineSeries,
                     FourierBesselField, KernelField, LinearizedInput,
                     TrivialSolution, apply_linearized, asymptotic_family,
                     first_order_boundary_deviation, kernel_fields,
                     schwarz_lift)
from .helmholtz import (DirichletSolution, SymmetricDomain, build_domain,
                        deviation, normal_derivative, solve_dirichlet)
from .wronskian import (WronskianRoot, find_mu, mu_wronskian_derivative,
                        verify_bifurcation_values, wronskian)

__version__ = "0.1.0"

__all__ = [
    "BesselEval", "BesselRoot", "bessel_j", "bessel_j_prime",
    "bessel_j_second", "bessel_root",
    "WronskianRoot", "find_mu", "mu_wronskian_derivative", "verify_bifurcation_values",
    "wronskian",
    "AsymptoticFamily", "ConformalMap", "CosineSeries", "FourierBesselField",
    "KernelField", "LinearizedInput", "TrivialSolution", "apply_linearized",
    "asymptotic_family", "first_order_boundary_deviation", "kernel_fields",
    "schwarz_lift",
    "DirichletSolution", "SymmetricDomain", "build_domain", "deviation",
    "normal_derivative", "solve_dirichlet",
    "BranchPoint", "ScalingReport", "branch_diagnostics", "newton_continue",
    "non_circularity", "overdetermination_defect", "scaling_study",
    "DEFAULTS",
    "__version__",
]
