"""Inequality catalogs for singular spectra of operator products.

The package enumerates the saturated index-triple catalog in each matrix
size, checks the resulting two-sided inequality families on concrete
matrices and candidate spectra (including singular ones), searches for
unitaries realizing a target spectrum, and extends the same battery to
step-function data via exact interval arithmetic.
"""

from .body import (
    BodySpec,
    InvertibleDomainError,
    NonMemberTargetError,
    RealizationResult,
    epsilon_shift,
    membership,
    membership_invertible,
    realize,
    sample_body,
)
from .combinatorics import (
    CatalogCapacityError,
    HornTriple,
    IndexSubset,
    Partition,
    TripleCatalog,
    additive_horn_check,
    bar,
    box_complement,
    co_partition,
    enumerate_catalog,
    lr_coefficient,
    triple_coefficient,
)
from .reports import (
    COMPLEMENT,
    DETERMINANT,
    FORWARD,
    NEG_INF,
    InequalityRecord,
    MembershipReport,
    default_log_tol,
    slack_of,
)
from .spectra import (
    CompressionReport,
    NumericalError,
    haar_unitary,
    product_inequality_check,
    product_spectrum,
    schubert_compression_check,
    singular_values,
)
from .stepfn import (
    IntervalSet,
    StepFunction,
    complement_set,
    discretize,
    fk_determinant,
    interval_set,
    log_integral,
    matrix_model,
    spectrum_to_step,
    vn_inequality_check,
    vn_membership,
)

__version__ = "0.1.0"

__all__ = [
    "BodySpec",
    "CatalogCapacityError",
    "COMPLEMENT",
    "CompressionReport",
    "DETERMINANT",
    "FORWARD",
    "HornTriple",
    "IndexSubset",
    "InequalityRecord",
    "IntervalSet",
    "InvertibleDomainError",
    "MembershipReport",
    "NEG_INF",
    "NonMemberTargetError",
    "NumericalError",
    "Partition",
    "RealizationResult",
    "StepFunction",
    "TripleCatalog",
    "additive_horn_check",
    "bar",
    "box_complement",
    "co_partition",
    "complement_set",
    "default_log_tol",
    "discretize",
    "enumerate_catalog",
    "epsilon_shift",
    "fk_determinant",
    "haar_unitary",
    "interval_set",
    "log_integral",
    "lr_coefficient",
    "matrix_model",
    "membership",
    "membership_invertible",
    "product_inequality_check",
    "product_spectrum",
    "realize",
    "sample_body",
    "schubert_compression_check",
    "singular_values",
    "slack_of",
    "spectrum_to_step",
    "triple_coefficient",
    "vn_inequality_check",
    "vn_membership",
]
