"""Steady-state analysis of power-law reaction networks with independent decompositions."""

from .chain import ChainSpec, chain_parametrization, chain_parametrization_exact, chain_t_hat_check, make_chain
from .decomposition import (IndependenceReport, finest_independent_decomposition, subnetworks_identical,
                            verify_independence, verify_t_hat_independence)
from .linalg import ExactSolution, RatMatrix, nullspace, rank, rank_additive, rref, solve
from .model import (Complex, Decomposition, KineticSystem, Network, NotReactantDetermined, Reaction, Species,
                    deficiency, incidence_matrix, is_plrdk, laplacian, linkage_classes, molecularity_matrix,
                    stoichiometric_matrix, t_hat_matrix, t_hat_sub, t_matrix)
from .parser import (CrnParseError, CrnSyntaxError, DuplicateLabel, NonPositiveRate, UnknownReaction,
                     UnknownSpecies, load_network, parse_network, serialize_network)
from .report import REPORT_SCHEMA, build_report, emit_report
from .steady_state import (BlockSolution, InconsistentSystem, MergeResult, MonomialFamily, NotBinomial,
                           SolverConfig, Verdict, binomial_parametrization, existence_verdict, factor_map,
                           find_common_steady_state, merge_steady_states, relative_residual, sfrf,
                           sfrf_jacobian, solve_reactions, solve_subnetwork)

__version__ = "0.1.0"
