"""Boundary dynamics of finite Blaschke products fixing the origin.

Correlation identities of iterates, Aleksandrov-Clark measures, variance
formulas for coefficient sequences, and Monte Carlo verification of the
Gaussian limit of normalized iterate sums.
"""

from .blaschke import (BlaschkeProduct, CirclePoint, TaylorJet, jet_of_iterate,
                       iterate_derivative_on_circle, monomial)
from .clark import (ClarkMeasure, clark_measure, check_first_moment,
                    check_second_moment, desintegrate)
from .clt import (EmpiricalDistribution, GaussFitReport, Tolerances,
                  gauss_report, sample_T, simulate, tails_run)
from .correlations import (BlockSum, CorrelationSpec, PhiReport,
                           block_product_factorization, decay_check,
                           four_factor, higher_correlation, pair_correlation,
                           phi_exponent)
from .quadrature import (check_invariance, counter_uniform, integrate,
                         mc_integrate, uniform_angles)
from .variance import (CoefficientSequence, SplitPlan, VarianceReport,
                       asymptotic_sigma_squared, auxiliary_bound_check,
                       growth_condition, l2_identity_check, l4_ratio,
                       quasiorthogonality, sigma_N_squared, split_plan,
                       tail_sigma_squared, toeplitz_sandwich)

__version__ = "0.1.0"
