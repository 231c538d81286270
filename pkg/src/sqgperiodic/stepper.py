"""Time integration of the transport-diffusion equation.

d/dt theta + |k|^a theta + u.grad(theta) = F, stepped with an integrating
factor (the linear decay is applied through the exact per-mode exponential)
and classical RK4 stages for the advection/forcing part.  Advection is
either self (u recovered from the evolving scalar) or frozen (u recovered
from a stored trajectory, linearly interpolated in time).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .dyadic import DyadicDecomposition, Trajectory
from .grid import (
    Field,
    Grid,
    _require_same_grid,
    field_from_spectral,
    forward_transform,
    inverse_values,
    transform_values,
)
from .operators import advect, dissipation_symbol, divergence_values, riesz_perp_symbols
from .periodic_linear import PeriodicForcing

BLOWUP_NORM_FACTOR = 1e6


@dataclass(frozen=True)
class StepperConfig:
    """Fixed-step integrating-factor RK4 configuration."""

    dt: float
    store_every: int = 1

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.store_every < 1:
            raise ValueError(f"store_every must be >= 1, got {self.store_every}")


class BlowupError(RuntimeError):
    """Divergence signal: carries the blow-up time, the last finite norms, and any partial trajectory."""

    def __init__(self, t: float, last_l2: float, last_max: float, partial: Trajectory | None = None):
        super().__init__(
            f"solution diverged at t={t:.6g} (last finite L2={last_l2:.6g}, max|theta|={last_max:.6g})"
        )
        self.t = t
        self.last_l2 = last_l2
        self.last_max = last_max
        self.partial = partial


class SelfAdvection:
    """u = perpendicular Riesz velocity of the evolving scalar."""


class FrozenAdvection:
    """u = perpendicular Riesz velocity of a stored trajectory, linear in t between samples."""

    def __init__(self, traj: Trajectory):
        self.traj = traj
        self._cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        self._symbols = riesz_perp_symbols(traj.grid)

    def _sample(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        hit = self._cache.get(i)
        if hit is None:
            s1, s2 = self._symbols
            that = transform_values(self.traj.grid, self.traj.values[i])
            grid = self.traj.grid
            hit = (inverse_values(grid, s1 * that), inverse_values(grid, s2 * that))
            self._cache[i] = hit
            for stale in [k for k in self._cache if k < i - 2]:
                del self._cache[stale]
        return hit

    def velocity_at(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        times = self.traj.times
        if t < times[0] - 1e-9 or t > times[-1] + 1e-9:
            raise ValueError(f"frozen advection queried at t={t} outside [{times[0]}, {times[-1]}]")
        t = min(max(t, times[0]), times[-1])
        i = int(np.searchsorted(times, t, side="right")) - 1
        if i >= len(times) - 1:
            return self._sample(len(times) - 1)
        w = (t - times[i]) / (times[i + 1] - times[i])
        if w == 0.0:
            return self._sample(i)
        a1, a2 = self._sample(i)
        b1, b2 = self._sample(i + 1)
        return (1.0 - w) * a1 + w * b1, (1.0 - w) * a2 + w * b2


AdvectionSource = SelfAdvection | FrozenAdvection | None


def nonlinear_term(theta: Field, u: tuple[Field, Field]) -> Field:
    """Dealiased u.grad(theta); rejects velocities that are not divergence-free."""
    u1, u2 = u
    _require_same_grid(theta.grid, u1.grid)
    _require_same_grid(theta.grid, u2.grid)
    grid = theta.grid
    div = divergence_values(u1.values, u2.values, grid)
    u_scale = max(u1.max_abs(), u2.max_abs())
    if np.max(np.abs(div)) > 1e-10 * max(u_scale, 1e-300) * grid.k_unit * grid.n:
        raise ValueError(f"velocity is not divergence-free (max |div u| = {np.max(np.abs(div)):.3e})")
    nhat = advect(u1.values, u2.values, forward_transform(theta).coeffs, grid)
    return field_from_spectral(grid, nhat)


def _normalize_forcing(
    forcing: PeriodicForcing | Callable[[float], np.ndarray] | None,
    grid: Grid,
    lowpass_sym: np.ndarray | None,
) -> Callable[[float], np.ndarray] | None:
    """Spectral forcing closure with dealias + optional low-pass baked in."""
    if forcing is None:
        return None
    mask = grid.dealias_mask if lowpass_sym is None else grid.dealias_mask * lowpass_sym
    if isinstance(forcing, PeriodicForcing):
        _require_same_grid(forcing.grid, grid)
        base = forcing.spatial_coeffs * mask
        base[0, 0] = 0.0
        amp, temporal = forcing.amplitude, forcing.temporal
        return lambda t: (amp * float(temporal(t))) * base

    def fn(t: float) -> np.ndarray:
        c = forcing(t) * mask
        c[0, 0] = 0.0
        return c

    return fn


class _Integrator:
    def __init__(
        self,
        grid: Grid,
        alpha: float,
        adv: AdvectionSource,
        forcing_fn: Callable[[float], np.ndarray] | None,
    ):
        self.grid = grid
        self.adv = adv
        self.forcing_fn = forcing_fn
        self.lam = dissipation_symbol(grid, alpha)
        self.riesz = riesz_perp_symbols(grid)
        self._decay_cache: dict[float, tuple[np.ndarray, np.ndarray]] = {}

    def _decays(self, dt: float) -> tuple[np.ndarray, np.ndarray]:
        hit = self._decay_cache.get(dt)
        if hit is None:
            hit = (np.exp(-dt * self.lam), np.exp(-0.5 * dt * self.lam))
            self._decay_cache[dt] = hit
        return hit

    def _velocity(self, t: float, theta_hat: np.ndarray) -> tuple[np.ndarray, np.ndarray] | None:
        if self.adv is None:
            return None
        if isinstance(self.adv, FrozenAdvection):
            return self.adv.velocity_at(t)
        s1, s2 = self.riesz
        return inverse_values(self.grid, s1 * theta_hat), inverse_values(self.grid, s2 * theta_hat)

    def rhs(self, t: float, theta_hat: np.ndarray) -> np.ndarray:
        """Non-stiff part of the tendency: forcing minus advection."""
        vel = self._velocity(t, theta_hat)
        if vel is None:
            acc = np.zeros_like(theta_hat)
        else:
            acc = -advect(vel[0], vel[1], theta_hat, self.grid)
        if self.forcing_fn is not None:
            acc = acc + self.forcing_fn(t)
        return acc

    def step(self, theta_hat: np.ndarray, t: float, dt: float) -> np.ndarray:
        """One integrating-factor RK4 step; exact decay when the tendency vanishes."""
        e_full, e_half = self._decays(dt)
        b1 = self.rhs(t, theta_hat)
        u2 = e_half * (theta_hat + (0.5 * dt) * b1)
        b2 = self.rhs(t + 0.5 * dt, u2)
        u3 = e_half * theta_hat + (0.5 * dt) * b2
        b3 = self.rhs(t + 0.5 * dt, u3)
        u4 = e_full * theta_hat + dt * (e_half * b3)
        b4 = self.rhs(t + dt, u4)
        return e_full * theta_hat + (dt / 6.0) * (e_full * b1 + 2.0 * e_half * (b2 + b3) + b4)


def step(
    theta: Field,
    t: float,
    dt: float,
    alpha: float,
    adv: AdvectionSource,
    forcing: PeriodicForcing | Callable[[float], np.ndarray] | None = None,
    low_pass_level: int | None = None,
    dec: DyadicDecomposition | None = None,
) -> Field:
    """Advance one step from time t; forcing is filtered through the level cutoff when given."""
    lowpass_sym = _resolve_lowpass(theta.grid, low_pass_level, dec)
    integ = _Integrator(theta.grid, alpha, adv, _normalize_forcing(forcing, theta.grid, lowpass_sym))
    out = integ.step(forward_transform(theta).coeffs, t, dt)
    if not np.isfinite(out).all():
        raise BlowupError(t + dt, theta.lp_norm(2.0), theta.max_abs())
    return field_from_spectral(theta.grid, out)


def _resolve_lowpass(
    grid: Grid, level: int | None, dec: DyadicDecomposition | None
) -> np.ndarray | None:
    if level is None:
        return None
    if dec is None:
        raise ValueError("low_pass_level given without a dyadic decomposition")
    _require_same_grid(grid, dec.grid)
    return dec.lowpass_symbol(level)


def sample_times(period: float, cfg: StepperConfig) -> np.ndarray:
    """Stored sample times for a [0, T] solve: stride store_every, t=0 and t=T always included."""
    steps, _ = _step_layout(period, cfg.dt)
    idx = list(range(0, steps + 1, cfg.store_every))
    if idx[-1] != steps:
        idx.append(steps)
    times = np.minimum(np.array(idx, dtype=np.float64) * cfg.dt, period)
    times[-1] = period
    return times


def _step_layout(period: float, dt: float) -> tuple[int, float]:
    """Number of steps and the (possibly shortened) final step landing exactly on T."""
    if dt > period:
        raise ValueError(f"dt={dt} exceeds the integration window {period}")
    n_full = int(np.floor(period / dt + 1e-9))
    rem = period - n_full * dt
    if rem > 1e-9 * dt:
        return n_full + 1, rem
    return n_full, dt


def solve_on_period(
    theta0: Field,
    period: float,
    alpha: float,
    adv: AdvectionSource,
    forcing: PeriodicForcing | Callable[[float], np.ndarray] | None,
    cfg: StepperConfig,
    low_pass_level: int | None = None,
    dec: DyadicDecomposition | None = None,
) -> Trajectory:
    """Integrate on [0, T] and return the stored trajectory.

    The initial state and forcing are dealiased on ingestion (and filtered
    through the level cutoff when given), so products stay alias-free for the
    whole solve.  Deterministic: identical inputs give identical bytes.
    """
    grid = theta0.grid
    lowpass_sym = _resolve_lowpass(grid, low_pass_level, dec)
    integ = _Integrator(grid, alpha, adv, _normalize_forcing(forcing, grid, lowpass_sym))

    theta_hat = forward_transform(theta0).coeffs * grid.dealias_mask
    steps, last_dt = _step_layout(period, cfg.dt)

    stored_values = [inverse_values(grid, theta_hat)]
    stored_times = [0.0]
    ref_l2 = _safe_l2(grid, stored_values[0])
    last_l2, last_max = ref_l2, float(np.max(np.abs(stored_values[0])))

    for i in range(steps):
        dt_i = last_dt if i == steps - 1 else cfg.dt
        t_i = i * cfg.dt
        with np.errstate(over="ignore", invalid="ignore"):  # non-finite is a signal here
            theta_hat = integ.step(theta_hat, t_i, dt_i)
            l2 = np.sqrt(np.sum(np.abs(theta_hat) ** 2)) * grid.length  # Plancherel, cheap
        t_next = period if i == steps - 1 else (i + 1) * cfg.dt

        if not np.isfinite(l2):  # any non-finite mode poisons the Plancherel sum
            raise BlowupError(t_next, last_l2, last_max, _partial(grid, stored_times, stored_values))
        ref_l2 = max(ref_l2, l2) if i == 0 else ref_l2
        if ref_l2 > 0 and l2 > BLOWUP_NORM_FACTOR * ref_l2:
            raise BlowupError(t_next, last_l2, last_max, _partial(grid, stored_times, stored_values))
        last_l2 = float(l2)

        if (i + 1) % cfg.store_every == 0 or i == steps - 1:
            v = inverse_values(grid, theta_hat)
            if not np.isfinite(v).all():
                raise BlowupError(t_next, last_l2, last_max, _partial(grid, stored_times, stored_values))
            last_max = float(np.max(np.abs(v)))
            stored_values.append(v)
            stored_times.append(t_next)

    return _partial(grid, stored_times, stored_values)


def _partial(grid: Grid, times: list[float], values: list[np.ndarray]) -> Trajectory:
    return Trajectory(grid, np.array(times), np.stack(values))


def _safe_l2(grid: Grid, values: np.ndarray) -> float:
    """Overflow-safe rectangle-rule L2 norm (scaled by max-abs before squaring)."""
    m = float(np.max(np.abs(values)))
    if m == 0.0 or not np.isfinite(m):
        return m
    scaled = values / m
    return m * float(np.sqrt(np.sum(scaled * scaled) * grid.cell_area))
