"""Wu pseudometric of complex seminorms.

The core entry points are :func:`wu_form` (kernel split, minimal circumscribed
Hermitian ellipsoid, normalization), :func:`busemann_seminorm` and the field
scanner :func:`scan`.
"""

from .busemann import HomogeneousFunction, busemann_seminorm
from .errors import (
    AdmissionError,
    ConvergenceError,
    DimensionError,
    InvariantError,
    NotSpanningError,
    OffCarrierError,
    UnsupportedPointError,
    WuError,
)
from .fields import (
    Ball,
    Ex1Field,
    Ex3Synthetic,
    GEps,
    MetricField,
    Polydisc,
    RemarkField,
    ScanReport,
    ex1_field,
    ex3_field,
    kobayashi_model,
    model_field,
    remark_field,
    scan,
    wu_field,
)
from .hermitian import HermitianForm, SubspaceBasis, ellipsoid_volume, gram_eval, null_space, ortho_complement, restrict_form
from .mvee import MveeCertificate, SolverOptions, mvee_finite, mvee_seminorm, worst_violation
from .seminorm import (
    BlackBox,
    HermitianQ,
    KernelDecomposition,
    MaxAbsFunctionals,
    MaxCombination,
    ProductMax,
    ScaledEuclidean,
    Seminorm,
    boundary_sample,
    eval_seminorm,
    kernel_decomposition,
)
from .wu import WuResult, pullback, wu_form, wu_norm, wu_norm_unnormalized

__version__ = "0.1.0"
