"""Periodic-box collocation grid, real scalar fields, and their Fourier coefficients.

Conventions (fixed here so every oracle in the test suite is bit-comparable):

* ``f(x) = sum_k fhat(k) exp(i k.x)`` with ``k`` on the integer lattice scaled
  by ``2*pi/L`` in numpy fft ordering; the forward transform is ``fft2/n**2``.
* All fields are mean-zero; the zero-mode coefficient is pinned to exactly 0.
* L^p norms use the grid rectangle rule with the torus volume element,
  ``(sum |f|^p * (L/n)^2)**(1/p)``; ``p = inf`` is the grid max.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class Grid:
    """Uniform n-by-n grid on the torus [0, L)^2.

    ``values[i, j]`` samples the point ``(i*L/n, j*L/n)`` (row-major).  The
    Nyquist line (index n//2) is sign-ambiguous on an even lattice; odd
    multipliers annihilate it so that every operator maps real fields to
    real fields.
    """

    n: int
    length: float = TWO_PI

    def __post_init__(self):
        n = self.n
        if n < 8 or (n & (n - 1)) != 0:
            raise ValueError(f"grid size must be a power of two >= 8, got {n}")
        if not (np.isfinite(self.length) and self.length > 0.0):
            raise ValueError(f"box length must be positive and finite, got {self.length}")

    @cached_property
    def spacing(self) -> float:
        return self.length / self.n

    @cached_property
    def cell_area(self) -> float:
        return self.spacing**2

    @cached_property
    def k_unit(self) -> float:
        """Spacing of the wavenumber lattice, 2*pi/L."""
        return TWO_PI / self.length

    @cached_property
    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        x = np.arange(self.n) * self.spacing
        return tuple(np.meshgrid(x, x, indexing="ij"))  # type: ignore[return-value]

    @cached_property
    def k_index(self) -> tuple[np.ndarray, np.ndarray]:
        """Integer wavenumber index grids (numpy fft ordering)."""
        ki = np.fft.fftfreq(self.n, d=1.0 / self.n)
        return tuple(np.meshgrid(ki, ki, indexing="ij"))  # type: ignore[return-value]

    @cached_property
    def kx(self) -> np.ndarray:
        return self.k_index[0] * self.k_unit

    @cached_property
    def ky(self) -> np.ndarray:
        return self.k_index[1] * self.k_unit

    @cached_property
    def k_mag(self) -> np.ndarray:
        return np.hypot(self.kx, self.ky)

    @cached_property
    def k_max(self) -> float:
        """Largest resolvable |k|: sqrt(2)*pi*n/L."""
        return np.sqrt(2.0) * np.pi * self.n / self.length

    @cached_property
    def nyquist_mask(self) -> np.ndarray:
        k1i, k2i = self.k_index
        half = self.n // 2
        return (np.abs(k1i) == half) | (np.abs(k2i) == half)

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        """Two-thirds rule: keep modes with max(|k1|, |k2|) <= n/3 lattice units."""
        k1i, k2i = self.k_index
        cut = self.n / 3.0
        return (np.abs(k1i) <= cut) & (np.abs(k2i) <= cut)

    def lp_norm(self, values: np.ndarray, p: float) -> float:
        """Rectangle-rule L^p norm with the torus volume element; p=inf is max-abs."""
        if np.isinf(p):
            return float(np.max(np.abs(values)))
        if p == 2.0:
            return float(np.sqrt(np.sum(values * values) * self.cell_area))
        return float((np.sum(np.abs(values) ** p) * self.cell_area) ** (1.0 / p))


_MEAN_TOL = 1e-12
_HERMITIAN_TOL = 1e-12


def _first_nonfinite(values: np.ndarray) -> tuple[int, ...]:
    return tuple(int(i) for i in np.argwhere(~np.isfinite(values))[0])


@dataclass(frozen=True)
class Field:
    """Real samples of a mean-zero scalar on a grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (self.grid.n, self.grid.n):
            raise ValueError(f"values shape {v.shape} does not match grid n={self.grid.n}")
        if not np.isfinite(v).all():
            raise ValueError(f"non-finite sample at index {_first_nonfinite(v)}")
        scale = float(np.max(np.abs(v)))
        if scale > 0.0 and abs(float(v.mean())) > _MEAN_TOL * scale:
            raise ValueError(
                f"field mean {float(v.mean()):.3e} exceeds {_MEAN_TOL:g} * max|f| = {_MEAN_TOL * scale:.3e}"
            )
        object.__setattr__(self, "values", v)

    @classmethod
    def zero(cls, grid: Grid) -> "Field":
        return cls(grid, np.zeros((grid.n, grid.n)))

    @classmethod
    def from_function(cls, grid: Grid, fn) -> "Field":
        """Sample ``fn(x1, x2)`` on the grid and remove the grid mean."""
        v = np.asarray(fn(*grid.coords), dtype=np.float64)
        return cls(grid, v - v.mean())

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    def lp_norm(self, p: float) -> float:
        return self.grid.lp_norm(self.values, p)

    def __add__(self, other: "Field") -> "Field":
        _require_same_grid(self.grid, other.grid)
        v = self.values + other.values
        return Field(self.grid, v - v.mean())  # drop the roundoff mean residue

    def __sub__(self, other: "Field") -> "Field":
        _require_same_grid(self.grid, other.grid)
        v = self.values - other.values
        return Field(self.grid, v - v.mean())

    def __mul__(self, c: float) -> "Field":
        return Field(self.grid, self.values * float(c))

    __rmul__ = __mul__

    def __neg__(self) -> "Field":
        return Field(self.grid, -self.values)


def hermitian_defect(coeffs: np.ndarray) -> float:
    """Max-abs deviation from coeff(-k) = conj(coeff(k)) on the lattice."""
    mirrored = np.roll(coeffs[::-1, ::-1], shift=(1, 1), axis=(0, 1))
    return float(np.max(np.abs(coeffs - np.conj(mirrored))))


@dataclass(frozen=True)
class SpectralField:
    """Fourier coefficients of a real mean-zero scalar (Hermitian, zero DC)."""

    grid: Grid
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.shape != (self.grid.n, self.grid.n):
            raise ValueError(f"coeffs shape {c.shape} does not match grid n={self.grid.n}")
        if not np.isfinite(c).all():
            raise ValueError("non-finite coefficient")
        if c[0, 0] != 0:
            raise ValueError(f"zero-mode coefficient must be exactly 0, got {c[0, 0]}")
        scale = float(np.max(np.abs(c)))
        if scale > 0.0 and hermitian_defect(c) > _HERMITIAN_TOL * scale:
            raise ValueError("coefficients are not Hermitian-symmetric: inverse would not be real")
        object.__setattr__(self, "coeffs", c)

    def to_field(self) -> Field:
        return inverse_transform(self)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        _require_same_grid(self.grid, other.grid)
        return SpectralField(self.grid, self.coeffs - other.coeffs)


def _require_same_grid(a: Grid, b: Grid) -> None:
    if a != b:
        raise ValueError(f"grid mismatch: {a} vs {b}")


def forward_transform(f: Field) -> SpectralField:
    """Fourier coefficients of ``f`` (amplitudes of e^{i k.x}); DC pinned to 0."""
    c = np.fft.fft2(f.values) / f.grid.n**2
    c[0, 0] = 0.0
    return SpectralField(f.grid, c)


def inverse_transform(sf: SpectralField) -> Field:
    return field_from_spectral(sf.grid, sf.coeffs)


def field_from_spectral(grid: Grid, coeffs: np.ndarray) -> Field:
    """Field from coefficients with zero DC; the roundoff mean residue is projected out."""
    v = np.real(np.fft.ifft2(coeffs)) * grid.n**2
    return Field(grid, v - v.mean())


def transform_values(grid: Grid, values: np.ndarray) -> np.ndarray:
    """fft of raw samples with this package's normalization (no validation)."""
    c = np.fft.fft2(values) / grid.n**2
    c[..., 0, 0] = 0.0
    return c


def inverse_values(grid: Grid, coeffs: np.ndarray) -> np.ndarray:
    return np.real(np.fft.ifft2(coeffs)) * grid.n**2
