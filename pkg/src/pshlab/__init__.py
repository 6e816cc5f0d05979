"""Numerical toolkit for Hardy spaces weighted by plurisubharmonic exhaustions of the unit disk."""

from .errors import (BlaschkeConditionError, ConfigError, DomainError, InfiniteMassError, NonMemberError,
                     NotNonvanishingError, PshlabError, QuadratureError, UnsupportedFixtureError)
from .factorize import (OuterFunction, ball_probe, blaschke_product, deflate, isometry_apply, isometry_inverse,
                        isometry_report, outer_eval, split_zeros)
from .functions import (AbsHarmonicPower, AbsPower, Affine, AnalyticFunction, Blaschke, Constant, ConstantDensity,
                        HarmonicDensity, ImagPart, Mobius, Monomial, Polynomial, PowerBranch, RealPart,
                        taylor_partial_sum)
from .hardy import (classical_norm, demailly_functional, harmonic_norm, membership, norm_report,
                    partial_density, weak_star_gap, weighted_norm_boundary, weighted_norm_interior)
from .kernels import blaschke_factor, green, herglotz, poisson
from .measures import (BoundaryDensity, RadialComponent, RieszMeasure, boundary_density, density_lower_bound,
                       evaluate_u, mu_u, total_mass)

__version__ = "0.1.0"
