from .basic import chi_square_marginal, marginal_mean, marginal_variance, quantile_edges
from .mmd import (
    MMDConfig,
    gaussian_kernel,
    median_heuristic,
    mmd,
    mmd_exact,
    mmd_rff,
    rff_features,
    rff_parameters,
)
from .swd import (
    SWDConfig,
    projection_directions,
    sample_unit_sphere,
    sliced_wasserstein,
    wasserstein_1d,
)
