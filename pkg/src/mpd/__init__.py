"""Exact duality tools for multiparameter persistence over prime fields."""

from .core import (
    CompositionError,
    DimensionError,
    DomainError,
    FieldError,
    FieldScalar,
    GradedMatrix,
    MPDError,
    ValidationError,
    compose,
    grade_leq,
    is_minimal,
    is_valid,
    join_masked,
    shift_matrix,
    transpose,
)
from .complex import (
    AugmentationError,
    FiltrationError,
    FreeComplex,
    Multifiltration,
    chain_complex,
    dagger,
    koszul,
    shift_graded,
    shift_homological,
)
from .oracle import (
    Barcode,
    GridBox,
    HilbertFunction,
    PointwiseModule,
    barcode_1d,
    hilbert_homology,
    homology_functor,
    koszul_betti,
    relative_barcode_1d,
)
from .cone import ConeThreshold, cone_complex, default_zeta, restrict
from .resolve import (
    BettiTable,
    LengthError,
    Presentation,
    UnsupportedParameterError,
    dual_resolution,
    free_resolution,
    kernel_basis,
    mfr_cohomological,
    mfr_direct,
    minimal_presentation,
    minimize,
    resolution_length,
)

__version__ = "0.1.0"
