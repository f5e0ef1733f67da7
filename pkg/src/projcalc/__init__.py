"""Projection calculus for pairs of projections in matrix algebras."""
from .calculus import (CalculusResult, ScalarFunction, pc_build, pc_constant,
                       pc_projection_distance, pc_unitary_distance)
from .errors import ProjCalcError
from .geometry import (complement, idempotent_to_pair, mvn_partial_isometry,
                       pair_report, pair_to_idempotent, product_support,
                       split_partial_isometry, sup_join, upq_equivalences)
from .homotopy import (HomotopyPath, homotopy_close, homotopy_mvn,
                       homotopy_orthogonal_mvn)
from .lifting import (BlockAlgebra, BlockElement, QuotientMap,
                      approximate_norm_lift, lift_idempotent,
                      lift_partial_isometry, lift_partial_isometry_spectrum,
                      lift_projection_norm, lift_projection_spectrum,
                      lift_triple_special, spectral_sandwich)
from .numeric import (DEFAULT_TOL, Tolerances, hermitian_eig, pair_from_angles,
                      spectrum_of_pair)
from .states import (MatrixUnitSystem, PureState, approximate_excision, excise,
                     excision_step, transitivity_multi, transitivity_units)
from .support import (is_well_supported, left_support, polar, quasi_inverse,
                      right_support)
from .verify import run_suite

__all__ = [
    "BlockAlgebra", "BlockElement", "CalculusResult", "DEFAULT_TOL",
    "HomotopyPath", "MatrixUnitSystem", "ProjCalcError", "PureState",
    "QuotientMap", "ScalarFunction", "Tolerances", "approximate_excision",
    "approximate_norm_lift", "complement", "excise", "excision_step",
    "hermitian_eig", "homotopy_close", "homotopy_mvn",
    "homotopy_orthogonal_mvn", "idempotent_to_pair", "is_well_supported",
    "left_support", "lift_idempotent", "lift_partial_isometry",
    "lift_partial_isometry_spectrum", "lift_projection_norm",
    "lift_projection_spectrum", "lift_triple_special", "mvn_partial_isometry",
    "pair_from_angles", "pair_report", "pair_to_idempotent", "pc_build",
    "pc_constant", "pc_projection_distance", "pc_unitary_distance", "polar",
    "product_support", "quasi_inverse", "right_support", "run_suite",
    "spectral_sandwich", "spectrum_of_pair", "split_partial_isometry",
    "sup_join", "transitivity_multi", "transitivity_units",
    "upq_equivalences",
]
