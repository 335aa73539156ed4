"""meanlab: means, metrics and order relations on HPD matrices.

A library plus CLI for two- and many-variable means of Hermitian positive
definite matrices (geometric, spectral, Wasserstein, power, Riemannian and
transport barycenters), the order relations they respect, and a seeded,
tolerance-controlled verification lab that turns the governing
inequalities into reproducible property suites.
"""

__version__ = "0.1.0"

from .hpd import (  # noqa: F401
    DomainError,
    EigenDecomposition,
    HermitianMatrix,
    HpdMatrix,
    NumericalFailure,
    ScalarFunctionSpec,
    apply_spectral_fn,
    congruence,
    eig_hermitian,
    expm,
    identity,
    log_det,
    logm,
    operator_norm,
    powm,
)
from .pair_means import (  # noqa: F401
    bures_wasserstein_distance,
    fidelity,
    inv_sharp,
    metric_geometric,
    spectral_geometric,
    spectral_semimetric,
    thompson_distance,
    wasserstein_mean,
    weighted_arithmetic,
)
from .orders import (  # noqa: F401
    OrderVerdict,
    RelationProfile,
    ToleranceProfile,
    chaotic_cmp,
    eigen_entrywise_cmp,
    loewner_cmp,
    near_order_cmp,
    relation_profile,
    spectra_equal_cmp,
    weak_log_majorization_cmp,
)
from .multi_means import (  # noqa: F401
    MatrixTuple,
    SolverConfig,
    SolverTrace,
    WeightVector,
    arithmetic_mean,
    harmonic_mean,
    karcher_mean,
    log_euclidean,
    make_mean,
    quasi_arithmetic,
    renyi_power_mean,
    wasserstein_barycenter,
)
from .asymptotics import (  # noqa: F401
    Curve,
    LimitStudyReport,
    lie_trotter_limit_study,
    qp_le_convergence_study,
    renyi_zero_limit_study,
)
from .samplers import SamplerSpec  # noqa: F401
from .report import SuiteReport  # noqa: F401
