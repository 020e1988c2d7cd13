"""Potential-weighted connective constants, Gibbs uniqueness thresholds and exact
finite-volume Gibbs sampling for repulsive pair potentials on R^d."""

__version__ = "0.1.0"

from .errors import (AcceptanceTooLow, BracketFailure, ConfigError, DegeneratePotential,
                     DegenerateWeights, DimensionMismatch, EmptyBatch, EmptyInput, InvalidK,
                     KindNormMismatch, NoResults, PWCCError, QuadratureFailure, ZeroAcceptance)
from .geometry import Norm, Space
from .potentials import HardCube, HardSphere, Potential, RadialTable, Strauss, zero_potential
from .connective import (DeltaBound, Method, Threshold, VkEstimate, chain_weight, damping_weitz,
                         delta_bound, estimate_vk, exact_v2, exact_v2_hard_disk, exact_v2_strauss,
                         uniqueness_threshold, v2_bound_dim_d)
from .recursion import (Classification, FixedPointReport, ScalarRecursion, classify,
                        contraction_check, depth_k_iterate, fixed_point, scalar_map, two_cycle)
from .gibbs import (Boundary, BoxRegion, GibbsSampleBatch, PointConfiguration, estimate_density,
                    estimate_partition, estimate_tilted_density, sample_gibbs,
                    verify_kpoint_product, verify_recursion_identity)
