"""Nonintersecting particle walks on a discrete circle.

Spectral calculus for the commuting transition family of k
nonintersecting particles on Z/nZ, the matching quantum product on
Grassmannian Schubert classes, heat kernels on the unitary eigenvalue
torus, and numerical checks of the large-convolution limit theorems.
"""

from .configurations import (
    AnglePoint,
    Configuration,
    dual,
    embed,
    enumerate_configs,
    from_partition,
    hat,
    k_stat,
    pieri_neighbors,
    root_configuration,
    rotate,
    step_configuration,
    tilde,
    to_partition,
)
from .harmonic import (
    FourierCoeffs,
    HMeasure,
    aggregate,
    convolve,
    convolve_sequence,
    dirac,
    fourier,
    inverse_fourier,
    moments,
)
from .heat import (
    HeatParams,
    KernelEvaluation,
    determinantal_kernel_11,
    dyson_fourier_multiplier,
    heat_kernel_suk,
    heat_kernel_uk,
    kappa,
)
from .limits import (
    LimitReport,
    corollary_check,
    fourier_decay_check,
    local_limit_check,
    wasserstein_upper_bound,
)
from .qcoh import (
    CohomologyClass,
    enumerative_count,
    pieri_multiply,
    qdim,
    qlr,
    schubert,
    verlinde_product,
)
from .schur import (
    EPS_NUM,
    SchurValue,
    asymptotic_schur_ratio,
    schur_at,
    vandermonde,
    vandermonde_abs_config,
    weyl_dimension,
)
from .spectral import (
    MarkovKernel,
    SpectralData,
    adjacency,
    build_spectral,
    markov_kernel,
    perron_eigenvalue,
    sample_path,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
