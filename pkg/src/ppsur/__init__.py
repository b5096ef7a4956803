"""Uncertainty relations for pre- and post-selected quantum systems.

Weak values, post-selected standard deviations, the family of PPS
uncertainty relations and OTOC bounds, purity detection from the
classical-uncertainty gap, and a small post-selection optimizer.
"""
from .core import (anticommutator, commutator, eig_hermitian, expect, fix_phase,
                   gram_schmidt_complete, is_hermitian, mat_alg, sqrt_psd)
from .errors import *  # noqa: F401,F403
from .purity import (PurityVerdict, detect_qubit, detect_qubit_qubit, detect_qubit_qutrit,
                     detect_qutrit, qutrit_basis)
from .relations import (BoundReport, EqualityReport, combined_stronger, common_zero_postselection,
                        equality_product, equality_sum, intelligent_residual, mpur_bounds,
                        otoc_bong_bound, otoc_bounds, otoc_commutator_norm, otoc_pps_bound,
                        otoc_value, pps_ur, pps_ur_mixed, rhur, stronger_ur,
                        tight_saturating_postselection, tighter_sum_ur, unitary_pps_ur, w_ab)
from .search import SearchConfig, SearchResult, make_objective, optimize_postselection
from .states import (I2, SX, SY, SZ, DensityMatrix, Observable, PPSContext, PureState, UnitaryOp,
                     collapse_subsystem, ensemble_to_density, make_qubit_state, purity,
                     random_density_matrix, random_observable, random_pure_state, random_unitary,
                     tensor_product)
from .stats import (av_decompose, classical_uncertainty, max_uncertainty_postselection,
                    metrology_report, pps_decompose, std_pps, std_pps_infotheoretic,
                    std_pps_mixed, std_pps_mixed_weak, std_standard, weak_value,
                    weak_value_mixed, zero_uncertainty_postselection)

__version__ = "0.1.0"
