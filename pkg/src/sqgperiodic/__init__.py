"""Pseudo-spectral construction of time-periodic solutions of the 2D
dissipative surface quasi-geostrophic equation, with a verification toolbox
for the supporting frequency-shell calculus."""

__version__ = "0.1.0"

from .grid import Field, Grid, SpectralField, forward_transform, inverse_transform
from .operators import (
    Multiplier,
    apply_multiplier,
    dealias,
    fractional_laplacian,
    riesz_perp,
    semigroup,
)
from .dyadic import (
    BesovSpec,
    DyadicDecomposition,
    Trajectory,
    besov_norm,
    build_decomposition,
    commutator_block,
    low_pass,
    lp_block,
    paraproduct,
    remainder,
    spacetime_besov_norm,
)
from .periodic_linear import (
    ConstantProfile,
    CosineProfile,
    PeriodicForcing,
    TableProfile,
    duhamel_integral,
    estimate_u0_bound,
    periodic_initial_datum,
    resolvent_inverse,
    resolvent_inverse_series,
)
from .stepper import (
    BlowupError,
    FrozenAdvection,
    SelfAdvection,
    StepperConfig,
    nonlinear_term,
    solve_on_period,
    step,
)
from .iteration import (
    ConfigError,
    ConvergenceReport,
    IterationConfig,
    IterationState,
    extend_periodically,
    iterate_once,
    next_initial_datum,
    solve_periodic,
    uniqueness_probe,
    x_norm,
)
from .snapshots import read_snapshot, write_snapshot
