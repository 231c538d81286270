"""Fourier multiplier calculus on the periodic box.

Symbols implemented: fractional dissipation |k|^a, its decay semigroup
exp(-t |k|^a), perpendicular Riesz velocity (i k_perp / |k|), spectral
derivatives i*k, and the two-thirds dealias projection.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import (
    Field,
    Grid,
    SpectralField,
    _require_same_grid,
    forward_transform,
    hermitian_defect,
    inverse_transform,
    inverse_values,
    transform_values,
)


@dataclass(frozen=True)
class Multiplier:
    """Diagonal Fourier operator: coeff_out(k) = symbol(k) * coeff_in(k)."""

    grid: Grid
    symbol: np.ndarray
    description: str
    zero_mode_excluded: bool = field(default=False)

    def __post_init__(self):
        s = np.asarray(self.symbol, dtype=np.complex128)
        if s.shape != (self.grid.n, self.grid.n):
            raise ValueError(f"symbol shape {s.shape} does not match grid n={self.grid.n}")
        if not np.isfinite(s).all():
            raise ValueError(f"non-finite symbol values in {self.description!r}")
        if not self.zero_mode_excluded and s[0, 0] != 0:
            raise ValueError(f"symbol(0) must be 0 for {self.description!r} (or mark zero-mode excluded)")
        scale = float(np.max(np.abs(s)))
        if scale > 0.0 and hermitian_defect(s) > 1e-13 * scale:
            raise ValueError(f"symbol {self.description!r} is not Hermitian: would not preserve realness")
        object.__setattr__(self, "symbol", s)

    def compose(self, other: "Multiplier") -> "Multiplier":
        _require_same_grid(self.grid, other.grid)
        return Multiplier(
            self.grid,
            self.symbol * other.symbol,
            f"({self.description})*({other.description})",
            zero_mode_excluded=self.zero_mode_excluded and other.zero_mode_excluded,
        )


def apply_multiplier(f: SpectralField, m: Multiplier) -> SpectralField:
    _require_same_grid(f.grid, m.grid)
    c = m.symbol * f.coeffs
    c[0, 0] = 0.0
    return SpectralField(f.grid, c)


def dissipation_symbol(grid: Grid, alpha: float) -> np.ndarray:
    """|k|^alpha on the lattice, 0 at the zero mode."""
    lam = grid.k_mag.copy()
    lam[0, 0] = 1.0
    lam = lam**alpha
    lam[0, 0] = 0.0
    return lam


def fractional_dissipation(grid: Grid, alpha: float) -> Multiplier:
    _check_alpha(alpha)
    return Multiplier(grid, dissipation_symbol(grid, alpha), f"|k|^{alpha:g}")


def decay_semigroup(grid: Grid, t: float, alpha: float) -> Multiplier:
    """exp(-t |k|^alpha); value 1 at the zero mode (acts on mean-zero fields)."""
    if t < 0:
        raise ValueError(f"semigroup time must be >= 0, got {t}")
    _check_alpha(alpha)
    sym = np.exp(-t * dissipation_symbol(grid, alpha))
    return Multiplier(grid, sym, f"exp(-{t:g}|k|^{alpha:g})", zero_mode_excluded=True)


def derivative_symbols(grid: Grid) -> tuple[np.ndarray, np.ndarray]:
    """i*k1 and i*k2 with the sign-ambiguous Nyquist line annihilated."""
    keep = ~grid.nyquist_mask
    return 1j * grid.kx * keep, 1j * grid.ky * keep


def riesz_perp_symbols(grid: Grid) -> tuple[np.ndarray, np.ndarray]:
    """Symbols of the perpendicular-velocity map theta -> (-R2, R1) theta."""
    mag = grid.k_mag.copy()
    mag[0, 0] = 1.0
    keep = ~grid.nyquist_mask
    u1 = -1j * grid.ky / mag * keep
    u2 = 1j * grid.kx / mag * keep
    u1[0, 0] = 0.0
    u2[0, 0] = 0.0
    return u1, u2


def _check_alpha(alpha: float) -> None:
    if not (0.0 < alpha <= 2.0):
        raise ValueError(f"dissipation order must lie in (0, 2], got {alpha}")


def fractional_laplacian(f: Field, alpha: float) -> Field:
    return inverse_transform(apply_multiplier(forward_transform(f), fractional_dissipation(f.grid, alpha)))


def semigroup(f: Field, t: float, alpha: float) -> Field:
    return inverse_transform(apply_multiplier(forward_transform(f), decay_semigroup(f.grid, t, alpha)))


def riesz_perp(theta: Field) -> tuple[Field, Field]:
    """Divergence-free velocity recovered from the scalar via perpendicular Riesz transforms."""
    s1, s2 = riesz_perp_symbols(theta.grid)
    that = forward_transform(theta).coeffs
    u1 = inverse_values(theta.grid, s1 * that)
    u2 = inverse_values(theta.grid, s2 * that)
    return Field(theta.grid, u1), Field(theta.grid, u2)


def dealias(f: SpectralField) -> SpectralField:
    """Zero every coefficient with max(|k1|, |k2|) above n/3 (two-thirds rule)."""
    return SpectralField(f.grid, f.coeffs * f.grid.dealias_mask)


def dealias_field(f: Field) -> Field:
    return inverse_transform(dealias(forward_transform(f)))


def advect(u1: np.ndarray, u2: np.ndarray, theta_hat: np.ndarray, grid: Grid) -> np.ndarray:
    """Dealiased spectral coefficients of u.grad(theta).

    ``u1, u2`` are real-space velocity samples, ``theta_hat`` spectral.  The
    advection derivative is evaluated spectrally, the product pointwise, and
    the result is projected back through the two-thirds mask with DC pinned
    to 0 (divergence form has zero mean).
    """
    d1, d2 = derivative_symbols(grid)
    tx = inverse_values(grid, d1 * theta_hat)
    ty = inverse_values(grid, d2 * theta_hat)
    nhat = transform_values(grid, u1 * tx + u2 * ty)
    nhat *= grid.dealias_mask
    nhat[0, 0] = 0.0
    return nhat


def divergence_values(u1: np.ndarray, u2: np.ndarray, grid: Grid) -> np.ndarray:
    d1, d2 = derivative_symbols(grid)
    dhat = d1 * transform_values(grid, u1) + d2 * transform_values(grid, u2)
    return inverse_values(grid, dhat)
