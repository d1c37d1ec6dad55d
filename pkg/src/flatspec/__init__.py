"""Exact spectra of compact flat manifolds built from the integer torus.

The package constructs Bieberbach groups over the canonical lattice Z^n,
validates torsion-freeness, and computes multiplicities of Hodge-Laplacian
eigenvalues on p-forms exactly (eigenvalues are 4*pi^2*mu for integer mu).
"""

from .crystal import (
    AbelianGroupType,
    AffineGenerator,
    GroupDefinition,
    HWMatrix,
    PointGroupElement,
    ValidationReport,
    build_hw_group,
    check_pairwise_condition,
    check_torsion_condition,
    close_point_group,
    extend_with_characters,
    first_homology,
    group_from_json,
    group_to_json,
    validate_bieberbach,
)
from .corpus import corpus_ids, example
from .exact_linear import (
    IntMatrix,
    RatVector,
    SmithDecomposition,
    char_poly,
    in_image_lattice,
    integer_kernel,
    smith_normal_form,
    trace_p,
)
from .isospec import (
    ComparisonReport,
    DualityReport,
    HolonomyPairing,
    check_pairing_criterion,
    compare_spectra,
    duality_check,
    identity_pairing,
    kunneth_betti,
    pairing_from_words,
)
from .krawtchouk import diagonal_trace, krawtchouk, krawtchouk_subset_oracle
from .spectral import (
    MultiplicityTable,
    RootOfUnityTally,
    Shell,
    betti,
    betti_row,
    character_sum,
    enumerate_fixed_shell,
    enumerate_shell,
    multiplicity,
    multiplicity_diagonal,
    multiplicity_hw,
    multiplicity_table,
    projector_oracle,
    reduce_tally,
)

__version__ = "0.1.0"

__all__ = [
    "AbelianGroupType",
    "AffineGenerator",
    "ComparisonReport",
    "DualityReport",
    "GroupDefinition",
    "HWMatrix",
    "HolonomyPairing",
    "IntMatrix",
    "MultiplicityTable",
    "PointGroupElement",
    "RatVector",
    "RootOfUnityTally",
    "Shell",
    "SmithDecomposition",
    "ValidationReport",
    "betti",
    "betti_row",
    "build_hw_group",
    "char_poly",
    "character_sum",
    "check_pairing_criterion",
    "check_pairwise_condition",
    "check_torsion_condition",
    "close_point_group",
    "compare_spectra",
    "corpus_ids",
    "diagonal_trace",
    "duality_check",
    "enumerate_fixed_shell",
    "enumerate_shell",
    "example",
    "extend_with_characters",
    "first_homology",
    "group_from_json",
    "group_to_json",
    "identity_pairing",
    "in_image_lattice",
    "integer_kernel",
    "krawtchouk",
    "krawtchouk_subset_oracle",
    "kunneth_betti",
    "multiplicity",
    "multiplicity_diagonal",
    "multiplicity_hw",
    "multiplicity_table",
    "pairing_from_words",
    "projector_oracle",
    "reduce_tally",
    "smith_normal_form",
    "trace_p",
    "validate_bieberbach",
]
