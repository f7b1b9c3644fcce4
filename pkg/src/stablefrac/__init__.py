"""Fractional-calculus tools for strictly stable Lévy processes.

The generator of a strictly stable process as a weighted sum of
Riemann--Liouville derivatives, its explicit inverse, the Tanaka and power
decomposition constants, and a Monte Carlo harness that checks the
decompositions on simulated paths.
"""

from stablefrac.errors import (
    DegenerateError,
    DomainError,
    LizorkinError,
    MethodError,
    SingularFrequencyError,
    StableFracError,
)
from stablefrac.fracops import (
    GridFunction,
    SampleGrid,
    Side,
    SpectralFunction,
    apply_spectral,
    crossed_compose_coeffs,
    frac_derivative,
    frac_integral,
    frac_op,
    lizorkin_test,
    spectral_multiplier,
    to_grid,
    to_spectral,
)
from stablefrac.generator import (
    GeneratorConstants,
    InverseConstants,
    PowerImage,
    StableParams,
    apply_generator,
    fourier_multiplier,
    generator_constants,
    generator_on_power,
    inverse_constants,
    invert_generator,
    symbol,
)
from stablefrac.stablelaw import (
    SkewScaleParams,
    char_exponent,
    empirical_moment,
    from_skew_scale,
    levy_density,
    make_rng,
    sample_standard,
    to_skew_scale,
)
from stablefrac.tanaka import (
    CriticalExponent,
    MartingaleClass,
    PowerConstants,
    SignedMeasure,
    TanakaConstants,
    class_C_eval,
    classify,
    critical_beta,
    h_functions,
    power_constants,
    tanaka_constants,
    tanaka_F,
)
from stablefrac.simulate import (
    EstimatorSpec,
    LocalTimeField,
    MCResult,
    PathSample,
    default_bandwidth,
    level_grid,
    mc_run,
    meyer_ito_residual,
    occupation_local_time,
    power_drift,
    power_residual,
    residual_samples,
    simulate_path,
    simulate_paths,
    tanaka_residual,
)

__version__ = "0.1.0"
