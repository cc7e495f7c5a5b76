"""Minimality analysis of state-space realizations through spectral criteria."""

from .echelon import (JordanSpec, RowSpec, block_echelon_reduce, build_selector_T, check_row_spec,
                      echelon_pivots, is_block_echelon, jordan_col_spec, jordan_row_spec,
                      sample_controllable_B)
from .errors import (DimensionError, InvariantFailure, NoGainFound, NumericalBreakdown,
                     PoleEvaluationError, PreconditionError, RealizationLabError,
                     SingularBridgeError, SingularFamilyError)
from .families import (FamilyReport, conjecture_probe, family_report, invariant_subspace_containment,
                       inverse_matrix_family, psi_realization)
from .feedback import (CriteriaReport, completion_disjoint, criterion_iii, feedback_completion_bridge,
                       find_disjoining_feedback, minimality_equivalence_report,
                       per_eigenvalue_completion, siso_all_D_check)
from .minimality import (MinimalityVerdict, alpha, is_minimal, kalman_controllable, kalman_observable,
                         pbh_controllable, pbh_observable, rank_formula_check)
from .numeric import (DEFAULT_TOL, Spectrum, Tolerances, cluster_eigenvalues, matrix_polynomial,
                      null_space, numeric_rank, spectra_intersect, spectrum)
from .realization import (Realization, SystemMatrix, assemble_L, associated, closed_loop, eval_transfer,
                          inverse_realization, naive_square, split_L)
from .squaring import SquaringTransform, construct_Tb, construct_Tc, square_realization

__all__ = [
    "JordanSpec",
    "RowSpec",
    "block_echelon_reduce",
    "build_selector_T",
    "check_row_spec",
    "echelon_pivots",
    "is_block_echelon",
    "jordan_col_spec",
    "jordan_row_spec",
    "sample_controllable_B",
    "DimensionError",
    "InvariantFailure",
    "NoGainFound",
    "NumericalBreakdown",
    "PoleEvaluationError",
    "PreconditionError",
    "RealizationLabError",
    "SingularBridgeError",
    "SingularFamilyError",
    "FamilyReport",
    "conjecture_probe",
    "family_report",
    "invariant_subspace_containment",
    "inverse_matrix_family",
    "psi_realization",
    "CriteriaReport",
    "completion_disjoint",
    "criterion_iii",
    "feedback_completion_bridge",
    "find_disjoining_feedback",
    "minimality_equivalence_report",
    "per_eigenvalue_completion",
    "siso_all_D_check",
    "MinimalityVerdict",
    "alpha",
    "is_minimal",
    "kalman_controllable",
    "kalman_observable",
    "pbh_controllable",
    "pbh_observable",
    "rank_formula_check",
    "DEFAULT_TOL",
    "Spectrum",
    "Tolerances",
    "cluster_eigenvalues",
    "matrix_polynomial",
    "null_space",
    "numeric_rank",
    "spectra_intersect",
    "spectrum",
    "Realization",
    "SystemMatrix",
    "assemble_L",
    "associated",
    "closed_loop",
    "eval_transfer",
    "inverse_realization",
    "naive_square",
    "split_L",
    "SquaringTransform",
    "construct_Tb",
    "construct_Tc",
    "square_realization",
]

__version__ = "0.1.0"
