"""Order-N AGMs, theta constants and sharp Gaussian Gabor frame bounds."""

from .agm import AgmTrace, ag2, ag3, agm_general
from .errors import (CapacityError, ConsistencyError, DensityError, DomainError, NonConvergence,
                     OptimizationError, ThetaAgmError, Unsupported)
from .gabor import (BoundLadder, FrameBounds, JanssenSum, KappaSequence, agm_bound_ladder, agm_bound_sequence,
                    bessel_bound, bounds_hexagonal_closed, bounds_janssen_numeric, bounds_rectangular_closed,
                    bounds_square_closed, conjecture_constant, conjecture_constants, kappa_sequence)
from .lattice import (Lattice2D, RootSystem, adjoint, deep_hole, dual, enumerate_points, hexagonal, host_lattice,
                      rectangular, standard_root_system, validate_root_system, von_neumann)
from .lattice_theta import check_functional_equation, theta_lattice, theta_lattice_dual
from .special import (EllipticModuli, Nome, SeriesControl, ThetaTriple, constant_gauss, constant_landau_plus,
                      cubic_a, cubic_b, cubic_c, cubic_triple, elliptic_k, gamma_fn, hyp2f1, lemniscate_length,
                      modulus_cubic, modulus_quadratic, theta2, theta3, theta4, theta_triple)

__version__ = "0.1.0"
