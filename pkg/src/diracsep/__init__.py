"""Separation of variables for the (2+1)-dimensional Dirac equation.

Library layers, bottom to top: ``clifford`` (gamma-matrix algebra),
``geometry`` (flat-spacetime charts), ``symmetry`` (first-order symmetry
operators and the determining equations), ``separation`` (the seven
complete sets, admissible potentials, separable ansatz), ``reduction``
(reduced ODE systems and integration), ``verification`` (independent
finite-difference certification), and ``cli``.
"""

from .clifford import GammaRep, make_gamma_rep
from .errors import (AdmissibilityError, CliffordError, ConfigError, DiracSepError,
                     DomainError, IntegrationError, SingularFrameError)
from .geometry import Chart, all_charts, make_chart
from .reduction import ReducedODE, Trajectory, integrate, reconstruct, reduce
from .separation import (CompleteSet, PotentialField, Profile, SpinorField, SET_IDS,
                         get_set, make_potential, separable_ansatz, spin_factor,
                         zero_potential)
from .symmetry import (DiracOperator, KillingField, SymmetryOperator,
                       build_operator_pair, check_determining, commutator_residual,
                       make_killing, pair_commutator_residual, solve_phi)
from .verification import ResidualReport, dirac_residual, eigen_residual, grid_points

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityError", "Chart", "CliffordError", "CompleteSet", "ConfigError",
    "DiracOperator", "DiracSepError", "DomainError", "GammaRep", "IntegrationError",
    "KillingField", "PotentialField", "Profile", "ReducedODE", "ResidualReport",
    "SET_IDS", "SingularFrameError", "SpinorField", "SymmetryOperator", "Trajectory",
    "all_charts", "build_operator_pair", "check_determining", "commutator_residual",
    "dirac_residual", "eigen_residual", "get_set", "grid_points", "integrate",
    "make_chart", "make_gamma_rep", "make_killing", "make_potential",
    "pair_commutator_residual", "reconstruct", "reduce", "separable_ansatz",
    "solve_phi", "spin_factor", "zero_potential",
]
