"""Frequency-shell decomposition, Besov norms, paraproducts, commutators."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sqgperiodic.dyadic import (
    BesovSpec,
    Trajectory,
    besov_norm,
    block_lp_norms,
    commutator_block,
    inhomogeneous_besov_norm,
    low_pass,
    lp_block,
    paraproduct,
    remainder,
    shell_profile,
    spacetime_besov_norm,
    velocity_from_scalar,
)
from sqgperiodic.grid import Field, forward_transform
from sqgperiodic.operators import dealias_field
from sqgperiodic.samples import cosine_mode, random_dealiased_field, sine_mode

from helpers import blockwise_lq


class TestShellProfile:
    def test_plateau_value_at_one(self):
        assert shell_profile(np.array([1.0]))[0] == 1.0

    def test_support_endpoints(self):
        vals = shell_profile(np.array([0.5, 2.0, 0.49, 2.01, 4.0]))
        assert np.all(vals == 0.0)

    def test_range_zero_one(self):
        r = np.linspace(0.01, 4.0, 500)
        v = shell_profile(r)
        assert np.all(v >= 0.0) and np.all(v <= 1.0)


class TestDecomposition:
    def test_index_bounds(self, grid64, dec64):
        assert dec64.j_min == math.floor(math.log2(grid64.k_unit)) - 1
        assert dec64.j_max == math.ceil(math.log2(grid64.k_max)) + 1

    def test_partition_of_unity(self, grid64, dec64):
        total = dec64.weights.sum(axis=0)
        live = grid64.k_mag > 0
        assert np.max(np.abs(total[live] - 1.0)) <= 1e-12

    def test_support_annulus(self, dec64, grid64):
        for idx, j in enumerate(dec64.js):
            w = dec64.weights[idx]
            outside = (grid64.k_mag < 2.0 ** (j - 1)) | (grid64.k_mag > 2.0 ** (j + 1))
            assert np.all(w[outside] == 0.0)

    def test_neighbor_overlap_only(self, dec64):
        for a in range(dec64.js.size):
            for b in range(a + 2, dec64.js.size):
                assert np.all(dec64.weights[a] * dec64.weights[b] == 0.0)


class TestBlocks:
    def test_single_mode_lands_in_shell_zero(self, grid64, dec64):
        f = sine_mode(grid64, 1, 0)
        b0 = lp_block(f, 0, dec64)
        assert np.max(np.abs(b0.values - f.values)) <= 1e-12
        for j in dec64.js:
            if j != 0:
                assert lp_block(f, int(j), dec64).max_abs() <= 1e-12

    def test_disjoint_blocks_annihilate(self, grid64, dec64):
        f = random_dealiased_field(grid64, 40)
        b3 = lp_block(f, 3, dec64)
        again = lp_block(b3, 0, dec64)
        assert again.max_abs() <= 1e-12 * max(b3.max_abs(), 1e-300)

    def test_reconstruction(self, grid64, dec64):
        f = random_dealiased_field(grid64, 41)
        total = np.zeros_like(f.values)
        for j in dec64.js:
            total += lp_block(f, int(j), dec64).values
        assert np.max(np.abs(total - f.values)) <= 1e-11

    def test_out_of_range_rejected(self, grid64, dec64):
        with pytest.raises(ValueError, match="outside"):
            lp_block(random_dealiased_field(grid64, 1), dec64.j_max + 1, dec64)


class TestLowPass:
    def test_full_sum_is_identity(self, grid64, dec64):
        f = random_dealiased_field(grid64, 42)
        out = low_pass(f, dec64.j_max + 4, dec64)
        assert np.max(np.abs(out.values - f.values)) <= 1e-11
        assert out is f  # identity short-circuits exactly on the lattice

    def test_empty_sum_is_zero(self, grid64, dec64):
        f = random_dealiased_field(grid64, 43)
        assert low_pass(f, dec64.j_min + 2, dec64).max_abs() == 0.0

    def test_two_mode_cutoff(self, grid64, dec64):
        f = sine_mode(grid64, 1, 0) + sine_mode(grid64, 8, 0)
        # |k|=8 sits in shell j=3; S_l keeps shells <= l-3, so level 5 keeps shells <= 2
        out = low_pass(f, 5, dec64)
        want = sine_mode(grid64, 1, 0)
        assert np.max(np.abs(out.values - want.values)) <= 1e-12

    def test_support_bound(self, grid64, dec64):
        f = random_dealiased_field(grid64, 44)
        level = 6
        out = low_pass(f, level, dec64)
        chat = forward_transform(out).coeffs
        beyond = grid64.k_mag > 2.0 ** (level - 2)
        assert np.max(np.abs(chat[beyond])) <= 1e-13


class TestBesovNorm:
    def test_zero_field(self, grid64, dec64):
        assert besov_norm(Field.zero(grid64), BesovSpec(0.7, 4, 2), dec64) == 0.0

    def test_single_mode_l2(self, grid64, dec64):
        f = sine_mode(grid64, 1, 0)
        for s in (-0.3, 0.0, 0.7):
            got = besov_norm(f, BesovSpec(s, 2, 2), dec64)
            assert abs(got - np.pi * np.sqrt(2.0)) < 1e-10

    def test_mode_two_carries_shell_weight(self, grid64, dec64):
        f = sine_mode(grid64, 2, 0)
        s = 0.6
        got = besov_norm(f, BesovSpec(s, 2, 1), dec64)
        assert abs(got - 2.0**s * np.pi * np.sqrt(2.0)) < 1e-10

    def test_homogeneity(self, grid64, dec64):
        f = random_dealiased_field(grid64, 50)
        spec = BesovSpec(0.4, 4, 2)
        assert abs(besov_norm(3.5 * f, spec, dec64) - 3.5 * besov_norm(f, spec, dec64)) < 1e-12

    def test_triangle_inequality(self, grid64, dec64):
        f = random_dealiased_field(grid64, 51)
        g = random_dealiased_field(grid64, 52)
        spec = BesovSpec(0.3, 4, 2)
        assert besov_norm(f + g, spec, dec64) <= besov_norm(f, spec, dec64) + besov_norm(g, spec, dec64) + 1e-9

    def test_q_infinity_takes_max(self, grid64, dec64):
        f = sine_mode(grid64, 1, 0) + sine_mode(grid64, 4, 0)
        norms = block_lp_norms(forward_transform(f).coeffs, dec64, 2.0)
        want = max(2.0 ** (0.5 * j) * v for j, v in zip(dec64.js, norms))
        got = besov_norm(f, BesovSpec(0.5, 2, math.inf), dec64)
        assert abs(got - want) < 1e-12

    def test_l2_equivalence_constants(self, grid64, dec64):
        # at most two overlapping shells: 1/sqrt(3) <= besov/l2 <= sqrt(3)
        for seed in range(6):
            f = random_dealiased_field(grid64, 60 + seed)
            ratio = besov_norm(f, BesovSpec(0.0, 2, 2), dec64) / f.lp_norm(2.0)
            assert 1.0 / np.sqrt(3.0) <= ratio <= np.sqrt(3.0)

    def test_inhomogeneous_adds_lp(self, grid64, dec64):
        f = sine_mode(grid64, 1, 0)
        spec = BesovSpec(0.7, 2, 2)
        assert abs(
            inhomogeneous_besov_norm(f, spec, dec64)
            - besov_norm(f, spec, dec64)
            - f.lp_norm(2.0)
        ) < 1e-12

    @settings(max_examples=10, deadline=None)
    @given(c=st.floats(min_value=0.01, max_value=100.0))
    def test_homogeneity_property(self, c, grid32, dec32):
        f = random_dealiased_field(grid32, 77)
        spec = BesovSpec(0.25, 4, 1)
        assert besov_norm(c * f, spec, dec32) == pytest.approx(c * besov_norm(f, spec, dec32), rel=1e-12)


class TestSpacetimeNorm:
    def test_constant_trajectory_equals_snapshot(self, grid64, dec64):
        f = random_dealiased_field(grid64, 70)
        traj = Trajectory.constant(f, np.linspace(0.0, 1.0, 5))
        spec = BesovSpec(0.7, 4, 2)
        assert abs(spacetime_besov_norm(traj, spec, dec64) - besov_norm(f, spec, dec64)) < 1e-12

    def test_sup_picks_scaled_snapshot(self, grid64, dec64):
        f = random_dealiased_field(grid64, 71)
        traj = Trajectory(grid64, np.array([0.0, 1.0]), np.stack([f.values, 2.0 * f.values]))
        spec = BesovSpec(0.4, 4, 2)
        assert abs(spacetime_besov_norm(traj, spec, dec64) - 2.0 * besov_norm(f, spec, dec64)) < 1e-12

    def test_disjoint_shells_combine_blockwise(self, grid64, dec64):
        a = sine_mode(grid64, 1, 0)  # shell 0
        b = sine_mode(grid64, 8, 0)  # shell 3
        traj = Trajectory(grid64, np.array([0.0, 1.0]), np.stack([a.values, b.values]))
        s, q = 0.7, 2.0
        got = spacetime_besov_norm(traj, BesovSpec(s, 2, q), dec64)
        norm = np.pi * np.sqrt(2.0)
        want = blockwise_lq({0: norm, 3: norm}, s, q)
        assert abs(got - want) < 1e-9

    def test_dominates_single_time_norm(self, grid64, dec64):
        f = random_dealiased_field(grid64, 72)
        g = random_dealiased_field(grid64, 73)
        traj = Trajectory(grid64, np.array([0.0, 0.5]), np.stack([f.values, g.values]))
        spec = BesovSpec(0.4, 4, 2)
        st_norm = spacetime_besov_norm(traj, spec, dec64)
        assert st_norm >= besov_norm(f, spec, dec64) - 1e-12
        assert st_norm >= besov_norm(g, spec, dec64) - 1e-12

    def test_empty_trajectory_rejected(self, grid64, dec64):
        with pytest.raises(ValueError):
            Trajectory(grid64, np.array([]), np.zeros((0, 64, 64)))


class TestBony:
    def test_zero_factor(self, grid64, dec64):
        z = Field.zero(grid64)
        f = random_dealiased_field(grid64, 80)
        assert paraproduct(z, f, dec64).max_abs() == 0.0
        assert remainder(z, f, dec64).max_abs() == 0.0

    def test_identity_on_random_fields(self, grid64, dec64):
        f = random_dealiased_field(grid64, 81)
        g = random_dealiased_field(grid64, 82)
        total = paraproduct(f, g, dec64) + remainder(f, g, dec64) + paraproduct(g, f, dec64)
        prod = dealias_field(Field(grid64, f.values * g.values - np.mean(f.values * g.values)))
        assert np.max(np.abs(total.values - prod.values)) <= 1e-10

    def test_low_high_separation(self, grid64, dec64):
        f = sine_mode(grid64, 1, 0)  # shell 0
        g = sine_mode(grid64, 0, 17)  # |k|=17 -> shell 4
        tfg = paraproduct(f, g, dec64)
        tgf = paraproduct(g, f, dec64)
        rem = remainder(f, g, dec64)
        prod = dealias_field(Field(grid64, f.values * g.values))
        assert np.max(np.abs(tfg.values - prod.values)) <= 1e-12
        assert tgf.max_abs() <= 1e-12
        assert rem.max_abs() <= 1e-12

    def test_remainder_symmetry(self, grid64, dec64):
        f = random_dealiased_field(grid64, 83)
        g = random_dealiased_field(grid64, 84)
        a = remainder(f, g, dec64)
        b = remainder(g, f, dec64)
        assert np.max(np.abs(a.values - b.values)) <= 1e-12 * max(a.max_abs(), 1e-300)

    def test_same_shell_pair_is_mostly_remainder(self, grid64, dec64):
        f = cosine_mode(grid64, 5, 0)  # shell 2 (|k|=5)
        g = cosine_mode(grid64, 0, 5)
        rem = remainder(f, g, dec64)
        prod = dealias_field(Field(grid64, f.values * g.values - np.mean(f.values * g.values)))
        para = paraproduct(f, g, dec64).max_abs() + paraproduct(g, f, dec64).max_abs()
        assert np.max(np.abs(rem.values - prod.values)) <= 1e-12 + para
        assert para <= 1e-12


class TestCommutator:
    def test_zero_scalar(self, grid64, dec64):
        u = velocity_from_scalar(random_dealiased_field(grid64, 90))
        out = commutator_block(u, 2, Field.zero(grid64), dec64)
        assert out.max_abs() == 0.0

    def test_linearity(self, grid64, dec64):
        u = velocity_from_scalar(random_dealiased_field(grid64, 91))
        p1 = random_dealiased_field(grid64, 92)
        p2 = random_dealiased_field(grid64, 93)
        lhs = commutator_block(u, 3, p1 + p2, dec64)
        rhs = commutator_block(u, 3, p1, dec64) + commutator_block(u, 3, p2, dec64)
        assert np.max(np.abs(lhs.values - rhs.values)) <= 1e-12 * max(lhs.max_abs(), 1e-300)

    def test_frequency_separation_gain(self, grid64, dec64):
        from sqgperiodic.stepper import nonlinear_term

        low = sine_mode(grid64, 1, 0)
        psi = sine_mode(grid64, 0, 16)  # shell 4
        u = velocity_from_scalar(low)
        adv = nonlinear_term(psi, u)
        j = 4
        comm = commutator_block(u, j, psi, dec64)
        adv_j = lp_block(adv, j, dec64)
        assert comm.lp_norm(2.0) <= adv_j.lp_norm(2.0) / 4.0
