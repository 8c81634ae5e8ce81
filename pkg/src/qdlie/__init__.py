"""Spectral and dynamical regularity criteria for C*-algebras of
generalized ax+b groups ``R x_D V``, plus a discretised operator lab."""

from .catalog import CATALOG_NAMES, catalog
from .classifier import (
    GroupSpec,
    IsoInvariant,
    QDReport,
    Tri,
    TriState,
    Variant,
    classify,
    count_classes,
    enumerate_classes,
    iso_invariant,
)
from .estimators import FlowClassifier, LyapunovDecomposer, ProductConvolution, RegularityClassifier
from .exceptions import (
    ConditioningWarning,
    InvalidInputError,
    MatrixExpOverflowError,
    NotInEnd0Error,
    PreconditionError,
    QdlieError,
    UnsupportedInputError,
)
from .flows import (
    INFINITY,
    FlowClassification,
    FlowKind,
    OmegaSetEstimate,
    check_omega_symmetry,
    classify_flow,
    omega_distance,
    omega_limit,
    oracle_classify_flow,
)
from .lyapunov import LyapunovDecomposition, classify_vector, growth_rate, lyapunov_decomposition
from .operators import (
    DiscretizedOp,
    Grid,
    SymbolFunction,
    check_unitary,
    cokernel_witness,
    compactness_ladder,
    compactness_profile,
    conv_operator_T,
    covariance_check,
    index_signature,
    product_conv_operator,
)
from .spectra import JordanChevalley, Spectrum, compute_spectrum, jordan_chevalley, matrix_exp

__version__ = "0.1.0"
