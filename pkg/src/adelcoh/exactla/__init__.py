"""Exact linear algebra over Z, its localizations and completions, and graded Q."""
from .abelian import UndeterminedExtension, UnsupportedScalars, abelian_cohomology, eliminate
from .complex import (
    AbelianGroup,
    CochainComplex,
    CohomologyTable,
    ComplexError,
    WindowError,
    check_complex,
    cohomology,
)
from .kernels import BACKEND, rank
from .modules import (
    AbelianAtom,
    CanonicalMapError,
    GradedAtom,
    Grading,
    ModuleError,
    ModuleMap,
    PresentedModule,
    Window,
    abelian_atom,
    alive,
    block_map,
    graded_atom,
    identity_map,
    zero_map,
)
from .scalars import Q, Qp, Scalars, Z, ZInv, ZS, Zp
from .snf import integer_kernel, invariant_factors, smith_normal_form

__all__ = [
    "AbelianAtom", "AbelianGroup", "BACKEND", "CanonicalMapError", "CochainComplex",
    "CohomologyTable", "ComplexError", "GradedAtom", "Grading", "ModuleError", "ModuleMap",
    "PresentedModule", "Q", "Qp", "Scalars", "UndeterminedExtension", "UnsupportedScalars",
    "Window", "WindowError", "Z", "ZInv", "ZS", "Zp", "abelian_atom", "abelian_cohomology",
    "alive", "block_map", "check_complex", "cohomology", "eliminate", "graded_atom",
    "identity_map", "integer_kernel", "invariant_factors", "rank", "smith_normal_form",
    "zero_map",
]
