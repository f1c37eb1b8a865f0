"""Type-D structures, morphism complexes, composition and filtered inversion."""

from .filtered import FilteredLinearMap, NotStrictlyLower, SingularPreservingPart, invert_filtered
from .gf2 import ChainComplexF2, Homology, NotAComplex, NotACycle, homology
from .mor import (
    MorComplex,
    NonIdempotentEvaluation,
    box_tensor_complex,
    compose,
    compose_via_evaluation,
    g_at_map,
    is_homotopic,
    mor_complex,
    mor_homology,
    yoneda_product,
)
from .typed import (
    ChainMismatch,
    IdempotentViolation,
    TypeDMorphism,
    TypeDStructure,
    check_structure_equation,
    identity_morphism,
    is_bounded,
    morphism_from_json,
    structure_from_json,
)

__all__ = [
    "ChainComplexF2",
    "ChainMismatch",
    "FilteredLinearMap",
    "Homology",
    "IdempotentViolation",
    "MorComplex",
    "NonIdempotentEvaluation",
    "NotAComplex",
    "NotACycle",
    "NotStrictlyLower",
    "SingularPreservingPart",
    "TypeDMorphism",
    "TypeDStructure",
    "box_tensor_complex",
    "check_structure_equation",
    "compose",
    "compose_via_evaluation",
    "g_at_map",
    "homology",
    "identity_morphism",
    "invert_filtered",
    "is_bounded",
    "is_homotopic",
    "mor_complex",
    "mor_homology",
    "morphism_from_json",
    "structure_from_json",
    "yoneda_product",
]
