"""Spectra of nonnegative centrosymmetric matrices: decomposition,
eigenvalue perturbation, stochastic normalization and realization."""

from .centro_decomp import (
    CentroBlocks,
    ReducedForms,
    assemble,
    assemble_from_reduced,
    reduced_forms,
    split,
    update_from_reduced,
)
from .centro_perturb import (
    PerturbReport,
    PreparedMatrix,
    guo_complex,
    guo_real,
    prepare,
    shift_perron,
    stochastic_form,
)
from .errors import (
    BoundViolation,
    CentroError,
    CertificationError,
    IllConditionedError,
    InfeasibleError,
    MembershipError,
    NumericalFailure,
    PreconditionError,
    ShapeError,
    StructureError,
)
from .matrix_core import (
    DEFAULT_TOL,
    Tolerance,
    as_matrix,
    as_vector,
    counteridentity,
    is_centrosymmetric,
    is_nonnegative,
    row_sum_constant,
    vector_symmetry_class,
)
from .perturb_kernels import (
    DominationCertificate,
    EigenPairComplex,
    EigenPairReal,
    brauer,
    complex_eigenpair,
    complex_rank_two,
    dominating_complex,
    dominating_real,
    rado,
    real_eigenpair,
)
from .realize import (
    RealizationInput,
    RealizationResult,
    build_EF,
    in_ctilde,
    lambda_gamma_bound,
    partition_gamma,
    realize_L4,
)
from .spectral_engine import CertReport, PerronPair, Spectrum, certify, match_spectra, perron_pair, spectrum

__version__ = "0.1.0"
