"""Exact run/step statistics and limit laws for two-strata persistent ruin walks."""

from .params import (ModelParams, ParamError, StrataTooLow, homogeneous_params,
                     params_from_eta, gamma_turn)
from .ring import (Series3, SeriesRing, PointRing, NonUnitDivisor,
                   VariantMismatch, TruncationExceeded, scalar_arith,
                   series_eval, series_coeff)
from .fib import fib_pair, fib_closed, DegenerateAlpha, StrataTables
from .ruin import (pi_value, rho, rho_oracle, u_factor, height_dist,
                   height_tail, prob_height_le_N, m_count_pmf)
from .genfun import GenFunCalc, k_infinity, last_visit_gf, BranchAmbiguity
from .oracle import (PathSignature, JointDist, count_path_stats,
                     enum_excursions, enum_first_passage, symmetry_check)
from .simulate import (TrajectoryStats, BatchStats, simulate_trajectory,
                       simulate_batch, stats_from_steps, scaled_statistic,
                       empirical_cf)
from .limits import (LimitParams, limit_params, phi_hat, special_phi_hat,
                     psi_hat, xcal_cf, joint_cf_homog, z_joint_cf,
                     invert_cf, cf_mean, DensityGrid)

__version__ = "0.1.0"
