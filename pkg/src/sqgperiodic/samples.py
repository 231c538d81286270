"""Seeded sample fields for probes and tests.

Three families: white noise restricted to a single dyadic shell, multiscale
fields with power-law spectra and random phases, and generic dealiased
mean-zero noise.  Every generator is deterministic given its seed.
"""

from __future__ import annotations

import numpy as np

from .dyadic import DyadicDecomposition
from .grid import Field, Grid, inverse_values, transform_values


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def _to_unit_field(grid: Grid, coeffs: np.ndarray) -> Field:
    coeffs[0, 0] = 0.0
    v = inverse_values(grid, coeffs)
    scale = np.max(np.abs(v))
    if scale > 0:
        v = v / scale
    return Field(grid, v - v.mean())


def single_shell_field(grid: Grid, dec: DyadicDecomposition, j: int, seed: int) -> Field:
    """Random real field spectrally supported on the j-th dyadic shell, max-abs 1."""
    noise = _rng(seed).standard_normal((grid.n, grid.n))
    coeffs = transform_values(grid, noise) * dec.weight(j)
    return _to_unit_field(grid, coeffs)


def multiscale_field(grid: Grid, gamma: float, seed: int) -> Field:
    """Random-phase field with |k|^-gamma amplitude spectrum, dealiased, max-abs 1."""
    noise = _rng(seed).standard_normal((grid.n, grid.n))
    mag = grid.k_mag.copy()
    mag[0, 0] = 1.0
    coeffs = transform_values(grid, noise) * mag ** (-gamma) * grid.dealias_mask
    return _to_unit_field(grid, coeffs)


def random_dealiased_field(grid: Grid, seed: int) -> Field:
    """White-noise field restricted to the dealiased band, max-abs 1."""
    noise = _rng(seed).standard_normal((grid.n, grid.n))
    coeffs = transform_values(grid, noise) * grid.dealias_mask
    return _to_unit_field(grid, coeffs)


def cosine_mode(grid: Grid, k1: int, k2: int, amplitude: float = 1.0) -> Field:
    """amplitude * cos(k.x) sampled on the grid."""
    x1, x2 = grid.coords
    return Field(grid, amplitude * np.cos(grid.k_unit * (k1 * x1 + k2 * x2)))


def sine_mode(grid: Grid, k1: int, k2: int, amplitude: float = 1.0) -> Field:
    x1, x2 = grid.coords
    return Field(grid, amplitude * np.sin(grid.k_unit * (k1 * x1 + k2 * x2)))


def mode_sum(grid: Grid, modes: list[tuple[int, int, float]]) -> Field:
    """Sum of cosine modes given as (k1, k2, amplitude) triples."""
    v = np.zeros((grid.n, grid.n))
    x1, x2 = grid.coords
    for k1, k2, a in modes:
        v += a * np.cos(grid.k_unit * (k1 * x1 + k2 * x2))
    return Field(grid, v - v.mean())


def probe_corpus(grid: Grid, dec: DyadicDecomposition, seed: int, count: int = 12) -> list[Field]:
    """Mixed corpus: shell-localized noise per resolved shell plus multiscale spectra."""
    fields: list[Field] = []
    inner = [j for j in dec.js if 2.0 ** (j + 1) <= grid.k_max / 2][1:]
    for i in range(count):
        kind = i % 3
        if kind == 0 and inner:
            j = inner[i % len(inner)]
            fields.append(single_shell_field(grid, dec, int(j), seed + 101 * i))
        elif kind == 1:
            gamma = (1.0, 2.0, 3.0)[(i // 3) % 3]
            fields.append(multiscale_field(grid, gamma, seed + 101 * i))
        else:
            fields.append(random_dealiased_field(grid, seed + 101 * i))
    return fields
