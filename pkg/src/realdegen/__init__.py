"""Exact complexes of stratified degenerations and real Betti-number bounds."""

from .complexes import (CochainComplex, Coefficient, CohomologyResult,
                        FilteredComplex, cohomology, reduce_mod2,
                        spectral_sequence, universal_coefficients_check)
from .degeneration import (StratifiedDegeneration, Stratum, pair_of_pants,
                           point_stratum, torus_stratum, validate_hypotheses)
from .linalg import IntegerMatrix, SmithForm, smith_normal_form
from .main_complexes import (augmentation_filtration, build_cq, build_cq_f2,
                             build_real_complex, verdict)
from .patchwork import (PatchworkInput, build_viro_graph, harnack_patchwork,
                        to_sdd, validate_input)

__version__ = "0.1.0"

__all__ = [
    "CochainComplex", "Coefficient", "CohomologyResult", "FilteredComplex",
    "cohomology", "reduce_mod2", "spectral_sequence", "universal_coefficients_check",
    "StratifiedDegeneration", "Stratum", "pair_of_pants", "point_stratum",
    "torus_stratum", "validate_hypotheses", "IntegerMatrix", "SmithForm",
    "smith_normal_form", "augmentation_filtration", "build_cq", "build_cq_f2",
    "build_real_complex", "verdict", "PatchworkInput", "build_viro_graph",
    "harnack_patchwork", "to_sdd", "validate_input",
]
