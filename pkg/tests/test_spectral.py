"""Transforms, multipliers, Riesz velocity, dealiasing."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sqgperiodic.grid import Field, Grid, SpectralField, forward_transform, inverse_transform
from sqgperiodic.operators import (
    Multiplier,
    apply_multiplier,
    dealias,
    decay_semigroup,
    divergence_values,
    fractional_dissipation,
    fractional_laplacian,
    riesz_perp,
    semigroup,
)
from sqgperiodic.samples import cosine_mode, random_dealiased_field, sine_mode

from helpers import dealias_exact_product, dense_dft_coeffs, fd_laplacian


class TestGrid:
    def test_rejects_non_power_of_two(self):
        with pytest.raises(ValueError, match="power of two"):
            Grid(24)

    def test_rejects_small_and_nonpositive(self):
        with pytest.raises(ValueError):
            Grid(4)
        with pytest.raises(ValueError):
            Grid(16, length=-1.0)

    def test_wavenumber_range(self):
        g = Grid(16, length=2 * np.pi)
        assert g.k_mag[0, 0] == 0.0
        assert np.max(g.k_mag) <= g.k_max + 1e-12


class TestTransforms:
    def test_zero_field(self, grid32):
        sf = forward_transform(Field.zero(grid32))
        assert np.all(sf.coeffs == 0)

    def test_single_cosine_mode_amplitudes(self, grid32):
        sf = forward_transform(cosine_mode(grid32, 1, 0))
        assert abs(sf.coeffs[1, 0] - 0.5) < 1e-13
        assert abs(sf.coeffs[-1, 0] - 0.5) < 1e-13
        rest = sf.coeffs.copy()
        rest[1, 0] = rest[-1, 0] = 0.0
        assert np.max(np.abs(rest)) < 1e-13

    def test_matches_dense_dft_oracle(self):
        g = Grid(8)
        rng = np.random.default_rng(7)
        v = rng.standard_normal((8, 8))
        v -= v.mean()
        f = Field(g, v)
        got = forward_transform(f).coeffs
        want = dense_dft_coeffs(g, v)
        want[0, 0] = 0.0
        assert np.max(np.abs(got - want)) < 1e-12

    def test_round_trip(self, grid64, rng):
        f = random_dealiased_field(grid64, 11)
        back = inverse_transform(forward_transform(f))
        assert np.max(np.abs(back.values - f.values)) <= 1e-12 * f.max_abs()

    def test_parseval(self, grid64):
        f = random_dealiased_field(grid64, 5)
        sf = forward_transform(f)
        grid_mean_sq = float(np.mean(f.values**2))
        coeff_sum = float(np.sum(np.abs(sf.coeffs) ** 2))
        assert abs(grid_mean_sq - coeff_sum) <= 1e-10 * grid_mean_sq

    def test_rejects_non_finite_with_index(self, grid32):
        v = np.zeros((32, 32))
        v[3, 7] = np.nan
        with pytest.raises(ValueError, match=r"\(3, 7\)"):
            Field(grid32, v)

    def test_rejects_nonzero_mean(self, grid32):
        with pytest.raises(ValueError, match="mean"):
            Field(grid32, np.ones((32, 32)))

    @settings(max_examples=10, deadline=None)
    @given(seed=st.integers(0, 2**31))
    def test_round_trip_property(self, seed):
        g = Grid(16)
        f = random_dealiased_field(g, seed)
        back = inverse_transform(forward_transform(f))
        assert np.max(np.abs(back.values - f.values)) <= 1e-12 * max(f.max_abs(), 1e-300)


class TestSpectralFieldInvariants:
    def test_zero_mode_must_be_zero(self, grid32):
        c = np.zeros((32, 32), dtype=complex)
        c[0, 0] = 1.0
        with pytest.raises(ValueError, match="zero-mode"):
            SpectralField(grid32, c)

    def test_hermitian_enforced(self, grid32):
        c = np.zeros((32, 32), dtype=complex)
        c[1, 0] = 1.0  # missing conjugate partner
        with pytest.raises(ValueError, match="Hermitian"):
            SpectralField(grid32, c)


class TestMultipliers:
    def test_identity(self, grid32):
        m = Multiplier(grid32, np.ones((32, 32)), "identity", zero_mode_excluded=True)
        f = random_dealiased_field(grid32, 3)
        out = apply_multiplier(forward_transform(f), m)
        fhat = forward_transform(f).coeffs
        assert np.max(np.abs(out.coeffs - fhat)) == 0.0

    def test_dissipation_on_three_four_mode(self, grid32):
        f = cosine_mode(grid32, 3, 4)
        out = fractional_laplacian(f, 1.0)
        assert np.max(np.abs(out.values - 5.0 * f.values)) < 1e-12 * 5.0

    def test_composition_matches_pointwise_product(self, grid32):
        a = fractional_dissipation(grid32, 0.7)
        b = decay_semigroup(grid32, 0.3, 0.7)
        f = forward_transform(random_dealiased_field(grid32, 9))
        via_compose = apply_multiplier(f, a.compose(b)).coeffs
        via_seq = apply_multiplier(apply_multiplier(f, a), b).coeffs
        scale = np.max(np.abs(via_seq))
        assert np.max(np.abs(via_compose - via_seq)) <= 1e-13 * scale

    def test_multiplier_ops_commute(self, grid32):
        a = fractional_dissipation(grid32, 0.9)
        b = decay_semigroup(grid32, 0.1, 0.5)
        f = forward_transform(random_dealiased_field(grid32, 2))
        ab = apply_multiplier(apply_multiplier(f, a), b).coeffs
        ba = apply_multiplier(apply_multiplier(f, b), a).coeffs
        assert np.max(np.abs(ab - ba)) <= 1e-13 * np.max(np.abs(ab))

    def test_grid_mismatch_rejected(self, grid32):
        m = fractional_dissipation(Grid(16), 1.0)
        with pytest.raises(ValueError, match="grid mismatch"):
            apply_multiplier(forward_transform(random_dealiased_field(grid32, 1)), m)


class TestFractionalLaplacian:
    def test_alpha_bounds(self, grid32):
        f = sine_mode(grid32, 1, 0)
        for bad in (0.0, -0.5, 2.5):
            with pytest.raises(ValueError):
                fractional_laplacian(f, bad)

    def test_single_mode_alpha_one(self, grid32):
        f = sine_mode(grid32, 1, 0)
        out = fractional_laplacian(f, 1.0)
        assert np.max(np.abs(out.values - f.values)) < 1e-12

    def test_fractional_scaling_single_mode(self, grid32):
        f = sine_mode(grid32, 2, 0)
        out = fractional_laplacian(f, 0.8)
        assert np.max(np.abs(out.values - 2**0.8 * f.values)) < 1e-12 * 2**0.8

    def test_alpha_two_matches_finite_differences(self):
        errs = []
        for n in (32, 64):
            g = Grid(n)
            f = Field.from_function(g, lambda x, y: np.sin(x) * np.cos(2 * y) + np.cos(3 * x))
            spectral = fractional_laplacian(f, 2.0)
            fd = -fd_laplacian(g, f.values)
            errs.append(np.max(np.abs(spectral.values - fd)))
        assert errs[0] > 3.0 * errs[1]  # second-order: error drops ~4x when n doubles
        assert errs[1] < 0.1


class TestSemigroup:
    def test_identity_at_zero_time(self, grid32):
        f = random_dealiased_field(grid32, 4)
        out = semigroup(f, 0.0, 0.8)
        assert np.max(np.abs(out.values - f.values)) < 1e-13

    def test_half_decay_at_log2(self, grid32):
        f = sine_mode(grid32, 1, 0)
        out = semigroup(f, np.log(2.0), 1.0)
        assert np.max(np.abs(out.values - 0.5 * f.values)) < 1e-13

    def test_exponent_additivity(self, grid32):
        f = random_dealiased_field(grid32, 8)
        once = semigroup(semigroup(f, 0.2, 0.8), 0.5, 0.8)
        direct = semigroup(f, 0.7, 0.8)
        assert np.max(np.abs(once.values - direct.values)) <= 1e-12 * max(direct.max_abs(), 1e-300)

    def test_l2_monotone_decay(self, grid32):
        f = random_dealiased_field(grid32, 12)
        norms = [semigroup(f, t, 0.8).lp_norm(2.0) for t in (0.0, 0.1, 0.5, 1.0, 3.0)]
        assert all(a >= b - 1e-14 for a, b in zip(norms, norms[1:]))

    def test_negative_time_rejected(self, grid32):
        with pytest.raises(ValueError):
            semigroup(random_dealiased_field(grid32, 1), -0.1, 1.0)


class TestRieszPerp:
    def test_sine_gives_perpendicular_cosine(self, grid32):
        theta = sine_mode(grid32, 1, 0)
        u1, u2 = riesz_perp(theta)
        x1 = grid32.coords[0]
        assert u1.max_abs() < 1e-13
        assert np.max(np.abs(u2.values - np.cos(x1))) < 1e-13

    def test_divergence_free(self, grid64):
        theta = random_dealiased_field(grid64, 21)
        u1, u2 = riesz_perp(theta)
        div = divergence_values(u1.values, u2.values, grid64)
        assert np.max(np.abs(div)) <= 1e-12 * theta.max_abs()

    def test_riesz_squared_is_minus_identity(self, grid64):
        theta = random_dealiased_field(grid64, 22)
        # R1^2 + R2^2 applied via two perpendicular rotations: R_perp(R_perp theta) . flip
        u1, u2 = riesz_perp(theta)
        w1a, w2a = riesz_perp(u1)
        w1b, w2b = riesz_perp(u2)
        # (-R2, R1) twice: first component -R2(-R2 t) - ... assemble minus identity directly
        got = w2a.values * 0.0
        # R1 theta = u2, R2 theta = -u1; R1(R1 theta) = second comp of riesz_perp(u2)... use symbols instead
        from sqgperiodic.grid import forward_transform, inverse_values
        from sqgperiodic.operators import riesz_perp_symbols

        s1, s2 = riesz_perp_symbols(grid64)  # s1 = -i k2/|k|, s2 = i k1/|k|
        that = forward_transform(theta).coeffs
        r1 = s2 * that  # R1 theta
        r2 = -s1 * that  # R2 theta
        total = inverse_values(grid64, s2 * r1 - s1 * r2)  # R1^2 + R2^2
        assert np.max(np.abs(total + theta.values)) <= 1e-12 * theta.max_abs()


class TestDealias:
    def test_low_modes_unchanged(self, grid32):
        f = cosine_mode(grid32, 3, 2)  # well inside n/4
        sf = forward_transform(f)
        out = dealias(sf)
        # kept modes are untouched exactly; outside the band only fft dust is dropped
        keep = grid32.dealias_mask
        assert np.array_equal(out.coeffs[keep], sf.coeffs[keep])
        assert np.max(np.abs(out.coeffs - sf.coeffs)) < 1e-15

    def test_nyquist_mode_zeroed(self, grid32):
        f = cosine_mode(grid32, 16, 0)  # Nyquist index for n=32
        out = dealias(forward_transform(f))
        assert np.max(np.abs(out.coeffs)) == 0.0

    def test_pseudospectral_product_matches_convolution_oracle(self):
        g = Grid(8)
        rng = np.random.default_rng(3)
        a = random_dealiased_field(g, 31)
        b = random_dealiased_field(g, 32)
        ahat = forward_transform(a).coeffs
        bhat = forward_transform(b).coeffs
        prod = a.values * b.values
        phat = np.fft.fft2(prod) / 64
        phat[0, 0] = 0.0
        phat *= g.dealias_mask
        oracle = dealias_exact_product(g, ahat, bhat)
        assert np.max(np.abs(phat - oracle)) < 1e-12
