"""Z_n-symmetric elliptic R-matrix, its trigonometric limits and the twist
between them, with residual checks for the identities they satisfy."""

__version__ = "0.1.0"

from .errors import (ConvergenceViolation, DimensionError, DomainError, NonConvergent,
                     PoleError)
from .qproducts import (NomeSet, ScalarParams, curly_brace, g1_factor, kappa, kappa_beta,
                        multi_q_product, scalar_prefactor)
from .suite import CheckReport, convergence_table, run_suite
from .theta import (ModularPoint, ThetaCharacteristic, TruncationControl, check_mt1_ratio,
                    check_shift_identity, sigma_alpha, theta, theta_char)
from .trig import (DegenerateParams, ordinary_path_sample, r_dy, r_q, reference_n2,
                   scaling_path_sample, sine_product)
from .twist import (TwistData, m_matrix, mt2_residual, twist_f, twist_residual,
                    twisted_conjugate)
from .znmatrix import (build_I, build_g, build_h, embed, permutation_op, s_full, sbar_explicit,
                       sbar_sum)
