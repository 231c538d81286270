"""Successive approximation for time-periodic solutions.

Each pass solves a frozen-advection transport-diffusion equation over one
period, then rebuilds the initial datum from the periodicity constraint:
the datum is the resolvent inverse of psi(T) = theta(T) - exp(-T|k|^a) theta(0),
so that (1 - exp(-T|k|^a)) theta0_next = psi(T) holds at every pass.  Both
the forcing and the fresh datum are filtered through a frequency cutoff that
opens up with the pass index.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .dyadic import (
    BesovSpec,
    DyadicDecomposition,
    Trajectory,
    besov_norm,
    block_lp_norm_matrix,
    build_decomposition,
    spacetime_besov_norm,
)
from .grid import Field, Grid, field_from_spectral, forward_transform, inverse_values, transform_values
from .operators import advect, decay_semigroup, dissipation_symbol, riesz_perp_symbols
from .periodic_linear import PeriodicForcing, resolvent_inverse
from .stepper import (
    BlowupError,
    FrozenAdvection,
    SelfAdvection,
    StepperConfig,
    sample_times,
    solve_on_period,
)

REPORT_SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """Configuration rejected; the message names the violated constraint."""


@dataclass(frozen=True)
class IterationConfig:
    """Exponents, period, grid, and stepping knobs for the periodic construction."""

    grid: Grid
    alpha: float
    p: float
    q: float
    r: float
    period: float
    sigma: float | None = None
    max_iter: int = 40
    tol_b: float = 1e-9
    stepper: StepperConfig = field(default_factory=lambda: StepperConfig(dt=1e-3))

    def __post_init__(self):
        a = self.alpha
        if not (2.0 / 3.0 < a < 1.0):
            raise ConfigError(f"2/3<alpha<1 violated (alpha={a})")
        if not (2.0 / (2.0 * a - 1.0) < self.r):
            raise ConfigError(f"2/(2*alpha-1)<r violated (r={self.r}, bound {2.0/(2.0*a-1.0):.6g})")
        if not (self.r <= self.p):
            raise ConfigError(f"r<=p violated (r={self.r}, p={self.p})")
        if not (self.p < 4.0 / a):
            raise ConfigError(f"p<4/alpha violated (p={self.p}, bound {4.0/a:.6g})")
        if not (1 <= self.q and not math.isinf(self.q)):
            raise ConfigError(f"1<=q<inf violated (q={self.q})")
        if not self.period > 0:
            raise ConfigError(f"period must be positive (T={self.period})")
        s = self.sigma_value
        lo, hi = a - 2.0 / self.p, 2.0 / self.p
        if not (lo < s < hi):
            raise ConfigError(f"alpha-2/p<sigma<2/p violated (sigma={s}, window ({lo:.6g}, {hi:.6g}))")
        if self.max_iter < 1:
            raise ConfigError(f"max_iter must be >= 1 (got {self.max_iter})")
        if not self.tol_b > 0:
            raise ConfigError(f"tol_b must be positive (got {self.tol_b})")

    @property
    def sigma_value(self) -> float:
        return self.alpha / 2.0 if self.sigma is None else self.sigma

    @property
    def s_critical(self) -> float:
        """Scaling-critical regularity 1 + 2/p - alpha."""
        return 1.0 + 2.0 / self.p - self.alpha

    @cached_property
    def spec_low(self) -> BesovSpec:
        return BesovSpec(0.0, self.p, 1.0)

    @cached_property
    def spec_critical(self) -> BesovSpec:
        return BesovSpec(self.s_critical, self.p, self.q)

    @cached_property
    def spec_sigma(self) -> BesovSpec:
        return BesovSpec(self.sigma_value, self.p, self.q)


@dataclass(frozen=True)
class IterationState:
    """One pass of the approximation: datum, trajectory, and monitors."""

    n: int
    theta0: Field
    traj: Trajectory
    psi_T: Field | None
    a_n: float
    b_prev: float | None  # distance to the previous pass (datum + trajectory addends)
    b_prev_datum: float | None
    b_prev_traj: float | None
    periodicity_residual: float


def x_norm(traj: Trajectory, cfg: IterationConfig, dec: DyadicDecomposition) -> float:
    """Norm of the working space: max of the (0,p,1) and critical space-time norms."""
    m = block_lp_norm_matrix(traj, dec, cfg.p)
    low = spacetime_besov_norm(traj, cfg.spec_low, dec, block_matrix=m)
    crit = spacetime_besov_norm(traj, cfg.spec_critical, dec, block_matrix=m)
    return max(low, crit)


def datum_norm(theta0: Field, cfg: IterationConfig, dec: DyadicDecomposition) -> float:
    """Intersection norm for initial data: max of (0,p,1) and critical norms."""
    return max(besov_norm(theta0, cfg.spec_low, dec), besov_norm(theta0, cfg.spec_critical, dec))


def zero_state(cfg: IterationConfig) -> IterationState:
    """The starting pass: zero datum and identically zero trajectory."""
    times = sample_times(cfg.period, cfg.stepper)
    return IterationState(
        n=0,
        theta0=Field.zero(cfg.grid),
        traj=Trajectory.zero(cfg.grid, times),
        psi_T=None,
        a_n=0.0,
        b_prev=None,
        b_prev_datum=None,
        b_prev_traj=None,
        periodicity_residual=0.0,
    )


def state_from_datum(
    theta0: Field,
    forcing: PeriodicForcing | None,
    cfg: IterationConfig,
    dec: DyadicDecomposition,
    adv=None,
) -> IterationState:
    """Seed a nonzero pass by evolving a datum over one period (plain IVP solve)."""
    traj = solve_on_period(
        theta0, cfg.period, cfg.alpha, SelfAdvection() if adv is None else adv, forcing, cfg.stepper
    )
    return IterationState(
        n=0,
        theta0=theta0,
        traj=traj,
        psi_T=None,
        a_n=max(datum_norm(theta0, cfg, dec), x_norm(traj, cfg, dec)),
        b_prev=None,
        b_prev_datum=None,
        b_prev_traj=None,
        periodicity_residual=0.0,
    )


def _psi_final(traj: Trajectory, cfg: IterationConfig) -> Field:
    """theta(T) minus the freely decayed initial value."""
    grid = traj.grid
    sym = decay_semigroup(grid, cfg.period, cfg.alpha).symbol
    c = forward_transform(traj.final).coeffs - sym * forward_transform(traj.initial).coeffs
    c[0, 0] = 0.0
    return field_from_spectral(grid, c)


def next_initial_datum(state: IterationState, cfg: IterationConfig) -> Field:
    """Datum for the next pass: resolvent inverse of psi(T) of the current trajectory."""
    psi_T = _psi_final(state.traj, cfg)
    return resolvent_inverse(psi_T, cfg.period, cfg.alpha)


def iterate_once(
    state: IterationState,
    forcing: PeriodicForcing | None,
    cfg: IterationConfig,
    dec: DyadicDecomposition,
) -> IterationState:
    """One pass: rebuild the datum, solve with frozen advection, update monitors."""
    grid = cfg.grid
    level = state.n + 4
    psi_T = _psi_final(state.traj, cfg)
    theta0_next = resolvent_inverse(psi_T, cfg.period, cfg.alpha)

    lowpass = dec.lowpass_symbol(level)
    c0 = forward_transform(theta0_next).coeffs * grid.dealias_mask
    if lowpass is not None:
        c0 = c0 * lowpass
    theta_init = field_from_spectral(grid, c0)

    traj_next = solve_on_period(
        theta_init,
        cfg.period,
        cfg.alpha,
        FrozenAdvection(state.traj),
        forcing,
        cfg.stepper,
        low_pass_level=level,
        dec=dec,
    )

    a_next = max(datum_norm(theta0_next, cfg, dec), x_norm(traj_next, cfg, dec))
    b_datum = besov_norm(theta0_next - state.theta0, cfg.spec_sigma, dec)
    b_traj = spacetime_besov_norm(traj_next - state.traj, cfg.spec_sigma, dec)

    datum_scale = besov_norm(theta0_next, cfg.spec_sigma, dec)
    gap = besov_norm(traj_next.final - traj_next.initial, cfg.spec_sigma, dec)
    residual = gap / datum_scale if datum_scale > 0 else 0.0

    return IterationState(
        n=state.n + 1,
        theta0=theta0_next,
        traj=traj_next,
        psi_T=psi_T,
        a_n=a_next,
        b_prev=b_datum + b_traj,
        b_prev_datum=b_datum,
        b_prev_traj=b_traj,
        periodicity_residual=residual,
    )


@dataclass
class IterationRow:
    n: int
    a_n: float
    b_n: float
    b_n_datum: float
    b_n_traj: float
    periodicity_residual: float


@dataclass
class ConvergenceReport:
    rows: list[IterationRow]
    converged: bool
    reason: str
    theta0_norms: dict[str, float]
    k_norm: float
    sup_forcing_norm: float
    k_over_forcing: float | None
    final_residual: float
    iteration_wall_ms: list[float]

    def to_dict(self) -> dict:
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "kind": "convergence_report",
            "iterations": [
                {
                    "n": r.n,
                    "a_n": r.a_n,
                    "b_n": r.b_n,
                    "b_n_datum": r.b_n_datum,
                    "b_n_traj": r.b_n_traj,
                    "periodicity_residual": r.periodicity_residual,
                }
                for r in self.rows
            ],
            "final": {
                "converged": self.converged,
                "reason": self.reason,
                "theta0_norms": self.theta0_norms,
                "K": self.k_norm,
                "sup_forcing_norm": self.sup_forcing_norm,
                "K_over_F": self.k_over_forcing,
                "final_periodicity_residual": self.final_residual,
            },
            "metadata": {"iteration_wall_ms": self.iteration_wall_ms},
        }


@dataclass
class SolveResult:
    theta0: Field
    traj: Trajectory
    report: ConvergenceReport
    state: IterationState

    @property
    def converged(self) -> bool:
        return self.report.converged


def solve_periodic(
    forcing: PeriodicForcing | None,
    cfg: IterationConfig,
    dec: DyadicDecomposition | None = None,
    seed_state: IterationState | None = None,
) -> SolveResult:
    """Run the successive approximation until the pass distance drops below tol_b.

    Never raises on divergence: non-contraction (three consecutive increases
    of the pass distance) and stepper blow-up both come back as a structured
    report with converged=False and a distinct reason.
    """
    if dec is None:
        dec = build_decomposition(cfg.grid)
    state = zero_state(cfg) if seed_state is None else seed_state

    rows: list[IterationRow] = []
    wall: list[float] = []
    b_history: list[float] = []
    converged = False
    reason = f"pass budget exhausted (max_iter={cfg.max_iter})"

    for _ in range(cfg.max_iter):
        t0 = time.perf_counter()
        try:
            state = iterate_once(state, forcing, cfg, dec)
        except BlowupError as exc:
            reason = f"stepper blow-up: {exc}"
            wall.append((time.perf_counter() - t0) * 1e3)
            break
        wall.append((time.perf_counter() - t0) * 1e3)
        b_n = float(state.b_prev)  # defined for every state past the zeroth
        rows.append(
            IterationRow(
                n=state.n,
                a_n=state.a_n,
                b_n=b_n,
                b_n_datum=float(state.b_prev_datum),
                b_n_traj=float(state.b_prev_traj),
                periodicity_residual=state.periodicity_residual,
            )
        )
        b_history.append(b_n)
        if b_n < cfg.tol_b:
            converged = True
            reason = f"pass distance below tol_b={cfg.tol_b:g}"
            break
        if len(b_history) >= 4 and all(
            b_history[-k] > b_history[-k - 1] for k in (1, 2, 3)
        ):
            reason = (
                "non-contraction: pass distance increased for 3 consecutive passes "
                "(forcing amplitude too large for the contraction regime)"
            )
            break

    k_norm = x_norm(state.traj, cfg, dec)
    sup_f = forcing.sup_besov0(cfg.r, dec) if forcing is not None else 0.0
    theta0_norms = {
        "besov_low": besov_norm(state.theta0, cfg.spec_low, dec),
        "besov_critical": besov_norm(state.theta0, cfg.spec_critical, dec),
        "besov_sigma": besov_norm(state.theta0, cfg.spec_sigma, dec),
        "l2": state.theta0.lp_norm(2.0),
    }
    report = ConvergenceReport(
        rows=rows,
        converged=converged,
        reason=reason,
        theta0_norms=theta0_norms,
        k_norm=k_norm,
        sup_forcing_norm=sup_f,
        k_over_forcing=(k_norm / sup_f) if sup_f > 0 else None,
        final_residual=state.periodicity_residual,
        iteration_wall_ms=wall,
    )
    return SolveResult(theta0=state.theta0, traj=state.traj, report=report, state=state)


def extend_periodically(traj: Trajectory, n_periods: int, rel_tol: float = 1e-6) -> Trajectory:
    """Tile a periodic trajectory over n_periods; refuses when endpoints disagree.

    Copy semantics: the value at m*T + t equals the value at t bitwise for
    t in (0, T]; the t=0 sample appears once.
    """
    if n_periods < 1:
        raise ValueError(f"n_periods must be >= 1, got {n_periods}")
    gap = traj.grid.lp_norm(traj.values[-1] - traj.values[0], 2.0)
    scale = traj.grid.lp_norm(traj.values[0], 2.0)
    resid = gap / scale if scale > 0 else gap
    if resid > rel_tol:
        raise ValueError(
            f"trajectory is not periodic: relative endpoint residual {resid:.3e} exceeds {rel_tol:g}"
        )
    if n_periods == 1:
        return traj
    period = traj.period
    times = [traj.times]
    values = [traj.values]
    for m in range(1, n_periods):
        times.append(traj.times[1:] + m * period)
        values.append(traj.values[1:])
    return Trajectory(traj.grid, np.concatenate(times), np.concatenate(values))


@dataclass(frozen=True)
class UniquenessResult:
    identical: bool
    difference_norm: float
    ratio: float | None


def uniqueness_probe(
    traj_a: Trajectory, traj_b: Trajectory, cfg: IterationConfig, dec: DyadicDecomposition
) -> UniquenessResult:
    """Empirical stability constant for two candidate periodic solutions.

    The bound compares the sigma-norm of the difference against itself scaled
    by the solutions' critical norms, so the reported ratio reduces to
    1/(x_norm(a) + sup-critical-norm(b)); zero difference reports identical.
    """
    diff = spacetime_besov_norm(traj_a - traj_b, cfg.spec_sigma, dec)
    if diff == 0.0:
        return UniquenessResult(identical=True, difference_norm=0.0, ratio=None)
    denom = (x_norm(traj_a, cfg, dec) + spacetime_besov_norm(traj_b, cfg.spec_critical, dec)) * diff
    return UniquenessResult(identical=False, difference_norm=diff, ratio=diff / denom)


def pde_residual(
    traj: Trajectory,
    forcing: PeriodicForcing | None,
    alpha: float,
    relative_to: float | None = None,
) -> float:
    """L2 norm of d/dt theta + |k|^a theta + u.grad theta - F over interior samples.

    The time derivative uses 4th-order central differences on the stored
    samples with periodic wrap (valid for converged periodic trajectories).
    Returns the max over sampled times, divided by ``relative_to`` if given.
    """
    grid = traj.grid
    times = traj.times
    dts = np.diff(times)
    if not np.allclose(dts, dts[0], rtol=1e-9, atol=0.0):
        raise ValueError("residual check needs uniformly spaced samples")
    h = float(dts[0])
    m = len(traj) - 1  # wrap: sample m is sample 0 one period later
    vals = traj.values[:m]
    lam = dissipation_symbol(grid, alpha)
    s1, s2 = riesz_perp_symbols(grid)

    worst = 0.0
    for i in range(0, m):
        stencil = (vals[(i - 2) % m] - 8 * vals[(i - 1) % m] + 8 * vals[(i + 1) % m] - vals[(i + 2) % m]) / (12 * h)
        that = transform_values(grid, vals[i])
        u1 = inverse_values(grid, s1 * that)
        u2 = inverse_values(grid, s2 * that)
        nl = inverse_values(grid, advect(u1, u2, that, grid))
        diss = inverse_values(grid, lam * that)
        res = stencil + diss + nl
        if forcing is not None:
            res = res - inverse_values(grid, forcing.spectral_at(times[i]) * grid.dealias_mask)
        worst = max(worst, grid.lp_norm(res, 2.0))
    return worst / relative_to if relative_to else worst
