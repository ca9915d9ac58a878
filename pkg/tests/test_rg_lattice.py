import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sscasimir.gaussian import (
    LatticeField,
    LGParams,
    UnstableKernelError,
    fixed_point_field_scale,
    mode_split_log_partition,
    parseval_residuals,
    rg_rescale,
)


class TestRgRescale:
    def test_exponent_bookkeeping_example(self):
        # B chosen so the gradient coefficient is held fixed in d = 3
        out = rg_rescale(LGParams(t=1.0, K=1.0, L=1.0), 2.0, 2.0 ** 2.5, 3)
        assert out.t == pytest.approx(4.0, rel=1e-14)
        assert out.K == pytest.approx(1.0, rel=1e-14)
        assert out.L == pytest.approx(0.25, rel=1e-14)

    def test_t_preserving_field_scale(self):
        # B = b^(d/2) cancels the volume factor on the constant term
        for d in (1, 2, 3, 4):
            for b in (1.5, 2.0, 3.0):
                out = rg_rescale(LGParams(t=0.7, K=1.0), b, b ** (d / 2.0), d)
                assert out.t == pytest.approx(0.7, rel=1e-14)

    def test_identity_limit(self):
        eps = 1e-9
        params = LGParams(t=1.0, K=2.0, L=0.5, higher=(0.25,))
        out = rg_rescale(params, 1.0 + eps, 1.0, 3)
        for before, after in (
            (params.t, out.t),
            (params.K, out.K),
            (params.L, out.L),
            (params.higher[0], out.higher[0]),
        ):
            assert abs(after - before) <= (3 + 4 + 2 * 1) * eps * 2 * abs(before)

    def test_higher_coefficients(self):
        out = rg_rescale(LGParams(t=0.0, K=1.0, higher=(1.0,)), 2.0, 1.0, 1)
        # q^6 coefficient scales as b^(-d-6) B^2 = 2^-7
        assert out.higher[0] == pytest.approx(2.0 ** -7, rel=1e-14)

    def test_composition_law(self):
        params = LGParams(t=1.0, K=1.0, L=1.0, higher=(0.3,))
        for d in (1, 2, 3, 4):
            for b1 in (1.25, 1.5, 2.0, 3.0):
                for b2 in (1.25, 1.5, 2.0, 3.0):
                    for B1 in (0.8, 1.0, 2.5):
                        for B2 in (0.8, 1.0, 2.5):
                            two = rg_rescale(rg_rescale(params, b1, B1, d), b2, B2, d)
                            one = rg_rescale(params, b1 * b2, B1 * B2, d)
                            for u, v in (
                                (two.t, one.t),
                                (two.K, one.K),
                                (two.L, one.L),
                                (two.higher[0], one.higher[0]),
                            ):
                                assert abs(u - v) <= 1e-15 * abs(v)

    def test_invalid_parameters(self):
        with pytest.raises(ValueError):
            rg_rescale(LGParams(t=1.0, K=1.0), 1.0, 1.0, 3)
        with pytest.raises(ValueError):
            rg_rescale(LGParams(t=1.0, K=1.0), 2.0, 0.0, 3)


class TestFixedPointFieldScale:
    def test_d3(self):
        assert fixed_point_field_scale(2.0, 3) == pytest.approx(2.0 ** 2.5, rel=1e-15)
        assert fixed_point_field_scale(2.0, 3) == pytest.approx(5.65685, rel=1e-5)

    def test_d2(self):
        assert fixed_point_field_scale(2.0, 2) == 4.0

    def test_identity_limit(self):
        assert fixed_point_field_scale(1.0 + 1e-12, 5) == pytest.approx(1.0, abs=1e-11)

    def test_gradient_coefficient_held_bit_exact(self):
        for d in (1, 2, 3, 4):
            for b in (1.25, 1.5, 2.0, 3.0, 7.3):
                B = fixed_point_field_scale(b, d)
                params = LGParams(t=1.0, K=0.8, L=0.6)
                out = rg_rescale(params, b, B, d)
                assert out.K == params.K
                assert out.t == pytest.approx(b * b * params.t, rel=1e-15)
                assert out.L == pytest.approx(params.L / (b * b), rel=1e-15)


class TestModeSplit:
    def test_two_mode_hand_computation(self):
        shell, interior, total = mode_split_log_partition(
            [(0.4, 1.0), (0.9, 4.0)], 2.0, 1.0
        )
        assert interior == 0.0
        assert shell == pytest.approx(-0.5 * math.log(4.0), rel=1e-15)
        assert shell == pytest.approx(-0.693147, rel=1e-5)
        assert total == shell + interior

    def test_unit_weights_contribute_nothing(self):
        shell, interior, total = mode_split_log_partition(
            [(q / 10.0, 1.0) for q in range(10)], 2.0, 1.0
        )
        assert shell == 0.0 and interior == 0.0 and total == 0.0

    def test_additivity_exact(self):
        rng = np.random.default_rng(3)
        modes = [(float(q), float(g)) for q, g in zip(rng.uniform(0, 1, 100), rng.uniform(0.1, 5, 100))]
        shell, interior, total = mode_split_log_partition(modes, 1.7, 1.0)
        assert shell + interior - total == 0.0

    def test_total_invariant_under_repartition(self):
        rng = np.random.default_rng(4)
        modes = [(float(q), float(g)) for q, g in zip(rng.uniform(0, 1, 100), rng.uniform(0.1, 5, 100))]
        totals = [mode_split_log_partition(modes, b, 1.0)[2] for b in (1.1, 1.5, 2.0, 5.0, 50.0)]
        for total in totals[1:]:
            assert total == pytest.approx(totals[0], rel=1e-12)

    def test_unstable_mode_rejected(self):
        with pytest.raises(UnstableKernelError):
            mode_split_log_partition([(0.5, 0.0)], 2.0, 1.0)

    def test_mode_outside_cutoff_rejected(self):
        with pytest.raises(ValueError):
            mode_split_log_partition([(1.5, 1.0)], 2.0, 1.0)


class TestParseval:
    def test_constant_field(self):
        lattice = LatticeField(np.full(64, 3.0), spacing=0.5)
        phi2, grad2 = parseval_residuals(lattice)
        assert phi2 <= 1e-12
        assert grad2 <= 1e-12

    def test_single_cosine_mode(self):
        # one-mode oracle: integral of phi^2 is V/2
        n, h = 128, 0.25
        x = np.arange(n) * h
        box = n * h
        lattice = LatticeField(np.cos(2.0 * math.pi * x / box), spacing=h)
        cell_sum = h * float(np.sum(lattice.values ** 2))
        assert cell_sum == pytest.approx(box / 2.0, rel=1e-12)
        phi2, grad2 = parseval_residuals(lattice)
        assert phi2 <= 1e-10
        assert grad2 <= 1e-10

    def test_white_noise_1d(self):
        rng = np.random.default_rng(11)
        lattice = LatticeField(rng.standard_normal(64), spacing=1.0)
        phi2, grad2 = parseval_residuals(lattice)
        assert phi2 <= 1e-10
        assert grad2 <= 1e-10

    def test_white_noise_2d(self):
        rng = np.random.default_rng(12)
        lattice = LatticeField(rng.standard_normal((32, 32)), spacing=0.3)
        phi2, grad2 = parseval_residuals(lattice)
        assert phi2 <= 1e-10
        assert grad2 <= 1e-10

    @given(seed=st.integers(min_value=0, max_value=10 ** 6))
    @settings(max_examples=40, deadline=None)
    def test_random_fields_property(self, seed):
        rng = np.random.default_rng(seed)
        lattice = LatticeField(rng.standard_normal(256), spacing=0.7)
        phi2, grad2 = parseval_residuals(lattice)
        assert phi2 <= 1e-10
        assert grad2 <= 1e-10

    def test_validation(self):
        with pytest.raises(ValueError):
            LatticeField(np.zeros((2, 2, 2)), spacing=1.0)
        with pytest.raises(ValueError):
            LatticeField(np.array([1.0]), spacing=1.0)
        with pytest.raises(ValueError):
            LatticeField(np.array([1.0, math.nan]), spacing=1.0)
        with pytest.raises(ValueError):
            LatticeField(np.array([1.0, 2.0]), spacing=0.0)
