"""Area-tilted Brownian line ensembles: samplers, the stationary law and verification checks."""

from ._tiltlab import (
    DomainError,
    InvalidArgument,
    airy_ai,
    airy_first_zero,
    fs_cdf,
    fs_density,
    fs_quantile,
    fs_tail_exponent,
    hydro_limit_shape,
    ks_two_sample,
    light_path_scaffold,
    main,
    n0_threshold,
    run_suite,
    sample_ensemble,
    sample_one_line,
    suite_names,
    tangency_location,
)

__all__ = [
    "DomainError",
    "InvalidArgument",
    "airy_ai",
    "airy_first_zero",
    "fs_cdf",
    "fs_density",
    "fs_quantile",
    "fs_tail_exponent",
    "hydro_limit_shape",
    "ks_two_sample",
    "light_path_scaffold",
    "main",
    "n0_threshold",
    "run_suite",
    "sample_ensemble",
    "sample_one_line",
    "suite_names",
    "tangency_location",
]
