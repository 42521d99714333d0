"""Information-theoretic measures of the half-line Coulomb potential."""

__version__ = "0.1.0"

from .errors import CapacityError, ConvergenceError, InfolabError, InvalidInputError
from .laguerre_core import RationalPoly, laguerre_poly, poly_pow, integrate_poly_exp
from .entropic_functionals import (MomentResult, iq_closed_n2, iq_lauricella, iq_poly_expansion, iq_quadrature,
                                   e1_log_functional, e1_rydberg_asymptotic, theta_coefficients)
from .measures import (QuantumState, StateReport, density, disequilibrium, entropic_moment, lengths,
                       linear_entropy, power_moment, renyi_entropy, shannon_entropy, shape_complexity,
                       state_report, tsallis_entropy)
from .bounds import BoundResult, a_constant, complexity_bound, optimal_k, shannon_bound
