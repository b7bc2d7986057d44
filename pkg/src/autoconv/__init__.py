"""Solutions of the autoconvolution inequality f >= f*f on R^d.

Numerical construction (series and spectral routes from a nonnegative
residual), verification of the structural laws (positivity, mass bound,
mass relation, moment growth signatures), closed-form oracle families,
and the escape-of-mass experiment for rescaled n-fold convolutions.
"""

__version__ = "0.1.0"

from .analyze import (
    MomentDemo,
    MomentReport,
    PositivityReport,
    SolutionReport,
    TailFit,
    critical_moment_theorem_demo,
    exp_tail_fit,
    moment_scan,
    positivity_check,
    recovered_residual,
    verify,
)
from .clt import (
    CltResult,
    ball_mass,
    phi_functional,
    rescaled_density,
    run_experiment,
)
from .coeffs import CoeffTable, build_coeffs, tail_bound
from .construct import (
    SeriesBuild,
    build_exponential_example,
    build_series,
    build_spectral,
    bump_residual,
    crosscheck,
)
from .families import (
    PoissonParams,
    SincParams,
    gaussian_density,
    heavy_tail_cdf,
    heavy_tail_density,
    heavy_tail_sampler,
    poisson,
    poisson_inequality_margin,
    reverse_example,
    sinc_counterexample,
)
from .grids import (
    GridFunction,
    GridSpec,
    Spectrum,
    convolve,
    dft,
    from_csv,
    from_json,
    idft,
    integrate,
    moment,
    restrict,
    sample,
    to_csv,
    to_json,
)

__all__ = [
    "__version__",
    "CoeffTable",
    "build_coeffs",
    "tail_bound",
    "GridSpec",
    "GridFunction",
    "Spectrum",
    "sample",
    "integrate",
    "moment",
    "convolve",
    "dft",
    "idft",
    "restrict",
    "to_csv",
    "from_csv",
    "to_json",
    "from_json",
    "PoissonParams",
    "SincParams",
    "poisson",
    "poisson_inequality_margin",
    "sinc_counterexample",
    "gaussian_density",
    "reverse_example",
    "heavy_tail_density",
    "heavy_tail_cdf",
    "heavy_tail_sampler",
    "SeriesBuild",
    "build_series",
    "build_spectral",
    "crosscheck",
    "bump_residual",
    "build_exponential_example",
    "SolutionReport",
    "PositivityReport",
    "MomentReport",
    "TailFit",
    "MomentDemo",
    "verify",
    "recovered_residual",
    "positivity_check",
    "moment_scan",
    "exp_tail_fit",
    "critical_moment_theorem_demo",
    "CltResult",
    "rescaled_density",
    "ball_mass",
    "phi_functional",
    "run_experiment",
]
