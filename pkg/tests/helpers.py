"""Independent oracles for the test suite.

These deliberately avoid the package's fft path: dense DFT matrices, direct
convolution sums, finite differences.  Slow on purpose; use tiny grids.
"""

from __future__ import annotations

import numpy as np

from sqgperiodic.grid import Grid


def dense_dft_coeffs(grid: Grid, values: np.ndarray) -> np.ndarray:
    """O(n^4) direct evaluation of the coefficient convention fhat(k) = mean(f e^{-ik.x})."""
    n = grid.n
    x1, x2 = grid.coords
    ki = np.fft.fftfreq(n, d=1.0 / n)
    out = np.empty((n, n), dtype=np.complex128)
    for a in range(n):
        for b in range(n):
            phase = np.exp(-1j * grid.k_unit * (ki[a] * x1 + ki[b] * x2))
            out[a, b] = np.sum(values * phase) / n**2
    return out


def direct_convolution(grid: Grid, ahat: np.ndarray, bhat: np.ndarray) -> np.ndarray:
    """Exact spectral product: (ab)hat(k) = sum_m ahat(m) bhat(k-m), indices mod n.

    Matches the pointwise grid product exactly (the grid product IS the
    circular convolution of coefficient arrays).
    """
    n = grid.n
    out = np.zeros((n, n), dtype=np.complex128)
    for a in range(n):
        for b in range(n):
            out[a, b] = np.sum(ahat * np.roll(np.roll(bhat[::-1, ::-1], a + 1, axis=0), b + 1, axis=1))
    return out


def dealias_exact_product(grid: Grid, ahat: np.ndarray, bhat: np.ndarray) -> np.ndarray:
    """True (alias-free) product coefficients restricted to the two-thirds band.

    For inputs supported inside the band the circular and linear convolutions
    agree on the kept modes, so this doubles as the dealiased-product oracle.
    """
    conv = direct_convolution(grid, ahat, bhat)
    conv *= grid.dealias_mask
    conv[0, 0] = 0.0
    return conv


def fd_laplacian(grid: Grid, values: np.ndarray) -> np.ndarray:
    """5-point periodic finite-difference Laplacian."""
    h2 = grid.spacing**2
    return (
        np.roll(values, 1, axis=0)
        + np.roll(values, -1, axis=0)
        + np.roll(values, 1, axis=1)
        + np.roll(values, -1, axis=1)
        - 4.0 * values
    ) / h2


def trig_l2_norm_1d_mode(grid: Grid) -> float:
    """||sin(k.x)||_{L^2} on the torus: sqrt(L^2 / 2) for any single mode."""
    return np.sqrt(grid.length**2 / 2.0)


def blockwise_lq(values: dict[int, float], s: float, q: float) -> float:
    """Direct enumeration of the weighted shell-sum norm."""
    weighted = [2.0 ** (s * j) * v for j, v in values.items()]
    if np.isinf(q):
        return max(weighted) if weighted else 0.0
    return float(np.sum(np.asarray(weighted) ** q) ** (1.0 / q))
