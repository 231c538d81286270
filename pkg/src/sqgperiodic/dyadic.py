"""Dyadic frequency-shell decomposition, Besov norms, paraproducts, commutators.

The radial shell profile is ``phi0(r) = chi(r) - chi(2r)`` built from the
standard smooth cutoff ``chi`` (1 on r<=1, 0 on r>=2, exponential glue in
between).  The profile satisfies phi0(1) = 1 exactly, supp phi0 in
[1/2, 2], and the shifted copies ``phi0(2^-j r)`` telescope to 1 on every
nonzero lattice wavenumber within the resolved range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .grid import (
    Field,
    Grid,
    _require_same_grid,
    field_from_spectral,
    forward_transform,
    inverse_values,
    transform_values,
)
from .operators import advect, riesz_perp_symbols


def smooth_cutoff(r: np.ndarray) -> np.ndarray:
    """chi(r): 1 for r <= 1, 0 for r >= 2, h(2-r)/(h(2-r)+h(r-1)) between."""
    r = np.asarray(r, dtype=np.float64)
    out = np.zeros_like(r)
    out[r <= 1.0] = 1.0
    mid = (r > 1.0) & (r < 2.0)
    rm = r[mid]
    ha = np.exp(-1.0 / (2.0 - rm))
    hb = np.exp(-1.0 / (rm - 1.0))
    out[mid] = ha / (ha + hb)
    return out


def shell_profile(r: np.ndarray) -> np.ndarray:
    """Radial bump phi0(r) = chi(r) - chi(2r), supported on [1/2, 2]."""
    return smooth_cutoff(r) - smooth_cutoff(2.0 * np.asarray(r, dtype=np.float64))


@dataclass(frozen=True)
class BesovSpec:
    """Besov exponent triple (s, p, q); p or q may be math.inf."""

    s: float
    p: float
    q: float

    def __post_init__(self):
        if not self.p >= 1:
            raise ValueError(f"p must be >= 1 (inf allowed), got {self.p}")
        if not self.q >= 1:
            raise ValueError(f"q must be >= 1 (inf allowed), got {self.q}")

    def with_s(self, s: float) -> "BesovSpec":
        return BesovSpec(s, self.p, self.q)


@dataclass(frozen=True)
class DyadicDecomposition:
    """Shell weights phi0(2^-j |k|) tabulated on a grid's wavenumber lattice."""

    grid: Grid
    j_min: int
    j_max: int
    weights: np.ndarray  # (j_max - j_min + 1, n, n), float64

    @cached_property
    def js(self) -> np.ndarray:
        return np.arange(self.j_min, self.j_max + 1)

    def index(self, j: int) -> int:
        if not (self.j_min <= j <= self.j_max):
            raise ValueError(f"shell index {j} outside resolved range [{self.j_min}, {self.j_max}]")
        return j - self.j_min

    def weight(self, j: int) -> np.ndarray:
        return self.weights[self.index(j)]

    @cached_property
    def _cumulative(self) -> np.ndarray:
        return np.cumsum(self.weights, axis=0)

    def lowpass_symbol(self, level: int) -> np.ndarray | None:
        """Multiplier of S_level = sum of shells j <= level-3.

        Returns None when the operator is the lattice identity (level-3 past
        the top shell) so callers can skip the multiplication exactly.
        """
        top = level - 3
        if top >= self.j_max:
            return None
        if top < self.j_min:
            return np.zeros((self.grid.n, self.grid.n))
        return self._cumulative[top - self.j_min]


def build_decomposition(grid: Grid) -> DyadicDecomposition:
    """Tabulate shell weights for every j touching the resolved lattice.

    j_min/j_max pad the occupied dyadic range by one shell each way; shells
    outside are identically zero on the lattice (torus truncation of the
    low-frequency tail, recorded in run diagnostics).
    """
    j_min = math.floor(math.log2(grid.k_unit)) - 1
    j_max = math.ceil(math.log2(grid.k_max)) + 1
    r = grid.k_mag
    weights = np.stack([shell_profile(r / 2.0**j) for j in range(j_min, j_max + 1)])
    weights[:, 0, 0] = 0.0
    return DyadicDecomposition(grid, j_min, j_max, weights)


def lp_block(f: Field, j: int, dec: DyadicDecomposition) -> Field:
    """Frequency shell projection: inverse transform of weight_j * fhat."""
    _require_same_grid(f.grid, dec.grid)
    c = forward_transform(f).coeffs
    return field_from_spectral(f.grid, dec.weight(j) * c)


def low_pass(f: Field, level: int, dec: DyadicDecomposition) -> Field:
    _require_same_grid(f.grid, dec.grid)
    sym = dec.lowpass_symbol(level)
    if sym is None:
        return f
    c = forward_transform(f).coeffs
    return field_from_spectral(f.grid, sym * c)


def block_values(coeffs: np.ndarray, dec: DyadicDecomposition) -> np.ndarray:
    """Real-space samples of every shell of one coefficient array: (J, n, n)."""
    return inverse_values(dec.grid, dec.weights * coeffs[None, :, :])


def block_lp_norms(coeffs: np.ndarray, dec: DyadicDecomposition, p: float) -> np.ndarray:
    """L^p norm of each shell; vector indexed like dec.js."""
    blocks = block_values(coeffs, dec)
    if np.isinf(p):
        return np.max(np.abs(blocks), axis=(1, 2))
    if p == 2.0:
        return np.sqrt(np.sum(blocks * blocks, axis=(1, 2)) * dec.grid.cell_area)
    return (np.sum(np.abs(blocks) ** p, axis=(1, 2)) * dec.grid.cell_area) ** (1.0 / p)


def lq_combine(weighted: np.ndarray, q: float) -> float:
    if np.isinf(q):
        return float(np.max(weighted)) if weighted.size else 0.0
    return float(np.sum(weighted**q) ** (1.0 / q))


def besov_from_block_norms(block_norms: np.ndarray, spec: BesovSpec, dec: DyadicDecomposition) -> float:
    weighted = 2.0 ** (spec.s * dec.js) * block_norms
    return lq_combine(weighted, spec.q)


def besov_norm(f: Field, spec: BesovSpec, dec: DyadicDecomposition) -> float:
    """Homogeneous Besov norm: l^q over shells of 2^{sj} ||shell_j f||_{L^p}."""
    _require_same_grid(f.grid, dec.grid)
    norms = block_lp_norms(forward_transform(f).coeffs, dec, spec.p)
    return besov_from_block_norms(norms, spec, dec)


def inhomogeneous_besov_norm(f: Field, spec: BesovSpec, dec: DyadicDecomposition) -> float:
    """Homogeneous norm plus the plain L^p norm."""
    return besov_norm(f, spec, dec) + f.lp_norm(spec.p)


@dataclass(frozen=True)
class Trajectory:
    """Time samples of a field on [0, T]: times (m,), values (m, n, n)."""

    grid: Grid
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=np.float64)
        v = np.asarray(self.values, dtype=np.float64)
        if t.ndim != 1 or t.size < 1:
            raise ValueError("times must be a nonempty 1-D array")
        if v.shape != (t.size, self.grid.n, self.grid.n):
            raise ValueError(f"values shape {v.shape} does not match ({t.size}, n, n)")
        if t[0] != 0.0:
            raise ValueError(f"trajectory must start at t=0, got {t[0]}")
        if t.size > 1 and not np.all(np.diff(t) > 0):
            raise ValueError("sample times must be strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.times.size

    @property
    def period(self) -> float:
        return float(self.times[-1])

    def field_at(self, i: int) -> Field:
        return Field(self.grid, self.values[i])

    @property
    def initial(self) -> Field:
        return self.field_at(0)

    @property
    def final(self) -> Field:
        return self.field_at(len(self) - 1)

    def __sub__(self, other: "Trajectory") -> "Trajectory":
        _require_same_grid(self.grid, other.grid)
        if self.times.shape != other.times.shape or not np.array_equal(self.times, other.times):
            raise ValueError("trajectories are sampled at different times")
        return Trajectory(self.grid, self.times, self.values - other.values)

    def __mul__(self, c: float) -> "Trajectory":
        return Trajectory(self.grid, self.times, self.values * float(c))

    __rmul__ = __mul__

    @classmethod
    def constant(cls, f: Field, times: np.ndarray) -> "Trajectory":
        return cls(f.grid, times, np.broadcast_to(f.values, (len(times), f.grid.n, f.grid.n)).copy())

    @classmethod
    def zero(cls, grid: Grid, times: np.ndarray) -> "Trajectory":
        return cls(grid, times, np.zeros((len(times), grid.n, grid.n)))


_NORM_CHUNK = 16  # samples per batched fft when sweeping a trajectory


def block_lp_norm_matrix(traj: Trajectory, dec: DyadicDecomposition, p: float) -> np.ndarray:
    """Matrix M[j, i] = ||shell_j f(t_i)||_{L^p} over a whole trajectory.

    Shells whose coefficient mass is zero across a chunk are skipped without a
    transform (their L^p norm is exactly 0); narrow-band trajectories only pay
    for the shells they occupy.
    """
    grid = dec.grid
    m = len(traj)
    nj = dec.js.size
    out = np.zeros((nj, m))
    for lo in range(0, m, _NORM_CHUNK):
        hi = min(lo + _NORM_CHUNK, m)
        coeffs = transform_values(grid, traj.values[lo:hi])  # (c, n, n)
        masked = dec.weights[:, None, :, :] * coeffs[None, :, :, :]
        mass = np.sum(np.abs(masked) ** 2, axis=(2, 3))  # (nj, c), Plancherel
        if p == 2.0:
            out[:, lo:hi] = np.sqrt(mass) * grid.length
            continue
        live = np.nonzero(np.max(mass, axis=1) > 1e-30 * max(mass.max(), 1e-300))[0]
        if live.size == 0:
            continue
        blocks = inverse_values(grid, masked[live])
        if np.isinf(p):
            out[live, lo:hi] = np.max(np.abs(blocks), axis=(2, 3))
        else:
            out[live, lo:hi] = (np.sum(np.abs(blocks) ** p, axis=(2, 3)) * grid.cell_area) ** (1.0 / p)
    return out


def spacetime_besov_norm(
    traj: Trajectory,
    spec: BesovSpec,
    dec: DyadicDecomposition,
    block_matrix: np.ndarray | None = None,
) -> float:
    """Time-sup-inside norm: l^q over shells of 2^{sj} max_t ||shell_j f(t)||_{L^p}."""
    if len(traj) == 0:
        raise ValueError("empty trajectory")
    if block_matrix is None:
        block_matrix = block_lp_norm_matrix(traj, dec, spec.p)
    sup_norms = np.max(block_matrix, axis=1)
    return besov_from_block_norms(sup_norms, spec, dec)


# ---------------------------------------------------------------------------
# Low/high frequency product splitting


def _shifted_window_sum(blocks: np.ndarray, radius: int) -> np.ndarray:
    """out[l] = sum_{|k-l| <= radius} blocks[k] (edges clipped)."""
    nj = blocks.shape[0]
    out = np.zeros_like(blocks)
    for l in range(nj):
        lo, hi = max(0, l - radius), min(nj, l + radius + 1)
        out[l] = blocks[lo:hi].sum(axis=0)
    return out


def _dealias_to_field(grid: Grid, values: np.ndarray) -> Field:
    nhat = transform_values(grid, values)
    nhat *= grid.dealias_mask
    nhat[0, 0] = 0.0
    return field_from_spectral(grid, nhat)


def paraproduct(f: Field, g: Field, dec: DyadicDecomposition) -> Field:
    """Low-high paraproduct T_f g = sum_l S_l f * shell_l g (dealiased)."""
    _require_same_grid(f.grid, g.grid)
    _require_same_grid(f.grid, dec.grid)
    fb = block_values(forward_transform(f).coeffs, dec)
    gb = block_values(forward_transform(g).coeffs, dec)
    cum = np.cumsum(fb, axis=0)  # cum[i] = sum of shells j_min..j_min+i
    acc = np.zeros_like(fb[0])
    for li, _ in enumerate(dec.js):
        ci = li - 3  # S_l keeps shells <= l-3
        if ci >= 0:
            acc += cum[ci] * gb[li]
    return _dealias_to_field(f.grid, acc)


def remainder(f: Field, g: Field, dec: DyadicDecomposition) -> Field:
    """Diagonal part of the product: sum over |k-l| <= 2 of shell_k f * shell_l g."""
    _require_same_grid(f.grid, g.grid)
    _require_same_grid(f.grid, dec.grid)
    fb = block_values(forward_transform(f).coeffs, dec)
    gb = block_values(forward_transform(g).coeffs, dec)
    near = _shifted_window_sum(fb, 2)
    acc = np.einsum("jxy,jxy->xy", near, gb)
    return _dealias_to_field(f.grid, acc)


def commutator_block(u: tuple[Field, Field], j: int, psi: Field, dec: DyadicDecomposition) -> Field:
    """[u.grad, shell_j] psi = shell_j(u.grad psi) - u.grad(shell_j psi), dealiased products."""
    u1, u2 = u
    _require_same_grid(u1.grid, psi.grid)
    _require_same_grid(u1.grid, dec.grid)
    grid = psi.grid
    w = dec.weight(j)
    psihat = forward_transform(psi).coeffs
    full = advect(u1.values, u2.values, psihat, grid)
    inner = advect(u1.values, u2.values, w * psihat, grid)
    return field_from_spectral(grid, w * full - inner)


def velocity_from_scalar(theta: Field) -> tuple[Field, Field]:
    s1, s2 = riesz_perp_symbols(theta.grid)
    that = forward_transform(theta).coeffs
    return (
        field_from_spectral(theta.grid, s1 * that),
        field_from_spectral(theta.grid, s2 * that),
    )


def besov_spectrum_rows(f: Field, spec: BesovSpec, dec: DyadicDecomposition) -> list[tuple[int, float]]:
    """Per-shell weighted norms 2^{sj} ||shell_j f||_{L^p} for CSV export."""
    norms = block_lp_norms(forward_transform(f).coeffs, dec, spec.p)
    weighted = 2.0 ** (spec.s * dec.js) * norms
    return [(int(j), float(v)) for j, v in zip(dec.js, weighted)]
