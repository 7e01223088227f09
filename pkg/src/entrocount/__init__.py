"""Generalized (Tsallis-Havrda-Charvat) entropies for counting problems."""

from .bounds import (BoundReport, OptimizationResult, alpha_bound, bound_rhs, bregman_bound,
                     invert_bound, optimize_alpha)
from .checks import CheckResult, UnsupportedRangeError
from .entropy import (AlphaParameter, DiscreteDistribution, JointTable, alpha_log,
                      binary_thc_entropy, conditional_entropy_daroczy,
                      conditional_entropy_weighted, joint_entropy, thc_entropy)
from .families import (SetFamily, check_cardinality_bound, check_distinct_pairwise_intersections,
                       check_intersection_family_bound, fraction_vector, verify_lemma_concavity)
from .permanent import (BinaryMatrix, expand_minor, from_bipartite_graph, parse_matrix,
                        permanent_bruteforce, permanent_ryser)
from .shearer import (CoverFamily, check_conditioning_monotonicity, check_merge_bound,
                      check_shearer, check_subadditivity, check_trace_corollary)

__version__ = "0.1.0"
