"""Distance and quotient sets over finite fields, with exhaustive checks of group-action bounds."""

from .counting import (
    DistanceHistogram,
    EtaTally,
    PointSet,
    VrTable,
    count_n_zero,
    count_vr_bruteforce,
    count_vr_fast,
    distance_histogram,
    distance_set,
    energy_identity_check,
    eta_tally,
    quotient_set,
    vr_table,
)
from .field import (
    FieldDescriptor,
    FieldElement,
    FieldError,
    QuadraticExtension,
    arith,
    build_quadratic_extension,
    construct_field,
    enumerate_field,
    field_of_order,
    invert,
    is_square,
    square_root,
)
from .harness import (
    ConfigurationNotFound,
    HypothesisError,
    SimilarConfiguration,
    find_similar_configuration,
    gen_random_pointset,
    gen_subfield_example,
    verify_bhowmik,
    verify_main_theorem,
    verify_quotient_coverage,
    verify_sharpness,
)
from .linalg import (
    OrthogonalGroup2,
    Point,
    SimilarityMatrix,
    SquareMatrix,
    build_similarity_even,
    build_similarity_odd,
    enumerate_O2,
    is_orthogonal,
    norm_sq,
    sphere_points,
    sum_of_two_squares,
)
from .report import VerificationReport

__version__ = "0.1.0"
