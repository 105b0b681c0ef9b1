import math

import numpy as np
import pytest

from weakslit.core.errors import DegenerateDenominatorError, DomainError
from weakslit.core.kernel import BsKernel, FunctionKernel, f_odd
from weakslit.core.weak_value import (
    classical_envelope,
    forward_initial,
    forward_two_slit,
    generic_inverse_two_slit,
    generic_two_slit,
    inverse_two_slit,
    multi_slit_weak,
    n_slit_weak,
    sample_trajectory,
    weak_price,
)
from weakslit.schemas.market import (
    MarketParams,
    SlitConfig,
    SlitSide,
    TrajectoryRequest,
    WeakTrajectorySample,
)


def random_cases(n: int, seed: int = 2024):
    """(x_i, x_f, r, sigma, T, s) tuples over a desk-sized parameter box."""
    rng = np.random.default_rng(seed)
    low = [0.01, -0.5, -0.02, 0.1, 0.25, 0.0]
    high = [0.5, 0.5, 0.1, 0.6, 3.0, 1.0]
    return rng.uniform(low, high, size=(n, 6))


class TestForward:
    def test_screen_endpoint_is_exact(self, market_params):
        assert forward_two_slit(0.1, 0.05, 0.0, 1.0, market_params) == 0.05

    def test_initial_value(self, market_params):
        value = forward_two_slit(0.1, 0.05, 1.0, 1.0, market_params)
        assert value == pytest.approx(0.1 * math.tanh(0.05), rel=1e-15)
        assert value == pytest.approx(0.00499583, abs=1e-8)

    def test_midpoint_when_final_is_drift(self, market_params):
        x_f = 1.0 * market_params.log_drift
        assert forward_two_slit(0.2, x_f, 1.0, 1.0, market_params) == 0.0

    def test_forward_initial(self, market_params):
        assert forward_initial(0.0, 0.05, 1.0, market_params) == 0.0
        assert forward_initial(0.1, 0.05, 1.0, market_params) == forward_two_slit(0.1, 0.05, 1.0, 1.0, market_params)
        with pytest.raises(DomainError):
            forward_initial(0.1, 0.05, 0.0, market_params)

    def test_forward_initial_inside_slits(self):
        for x_i, x_f, r, sigma, T, _ in random_cases(200):
            params = MarketParams(r=r, sigma=sigma, T=T)
            argument = x_i * (x_f - T * params.log_drift) / (T * sigma ** 2)
            if abs(argument) < 10:
                assert -x_i < forward_initial(x_i, x_f, T, params) < x_i

    @pytest.mark.parametrize("tau", [-0.1, 1.5])
    def test_tau_outside_horizon(self, market_params, tau):
        with pytest.raises(DomainError):
            forward_two_slit(0.1, 0.05, tau, 1.0, market_params)

    def test_odd_under_reflection(self, market_params):
        sigma = market_params.sigma
        reflected = MarketParams(r=sigma ** 2 - market_params.r, sigma=sigma, T=1.0)
        assert reflected.log_drift == pytest.approx(-market_params.log_drift)
        assert forward_two_slit(0.1, -0.05, 1.0, 1.0, reflected) == pytest.approx(
            -forward_two_slit(0.1, 0.05, 1.0, 1.0, market_params), rel=1e-12
        )


class TestInverse:
    def test_initial_endpoint_is_exact(self, market_params):
        assert inverse_two_slit(0.1, 0.05, 1.0, 1.0, market_params) == 0.1

    def test_screen_value(self, market_params):
        assert inverse_two_slit(0.1, 0.05, 0.0, 1.0, market_params) == pytest.approx(
            0.05 * math.tanh(1.25 * 0.13), rel=1e-12
        )
        assert inverse_two_slit(0.1, 0.05, 0.0, 1.0, market_params) == pytest.approx(0.0080543, rel=1e-5)

    def test_degenerate_slits_give_straight_line(self, market_params):
        for tau in np.linspace(0.0, 1.0, 11):
            assert inverse_two_slit(0.1, 0.0, tau, 1.0, market_params) == pytest.approx(0.1 * tau, abs=1e-17)


class TestNSlit:
    def test_reduces_to_forward_closed_form(self):
        for x_i, x_f, r, sigma, T, s in random_cases(1000):
            params = MarketParams(r=r, sigma=sigma, T=T)
            tau = s * T
            slits = SlitConfig(positions=[x_i, -x_i], endpoint=x_f)
            assert n_slit_weak(slits, tau, T, BsKernel(params)) == pytest.approx(
                forward_two_slit(x_i, x_f, tau, T, params), rel=1e-12, abs=1e-13
            )

    def test_reduces_to_inverse_closed_form(self):
        for x_i, x_f, r, sigma, T, s in random_cases(1000, seed=99):
            params = MarketParams(r=r, sigma=sigma, T=T)
            tau = s * T
            slits = SlitConfig(positions=[x_i, -x_i], endpoint=x_f, side=SlitSide.post)
            assert n_slit_weak(slits, tau, T, BsKernel(params)) == pytest.approx(
                inverse_two_slit(x_f, x_i, tau, T, params), rel=1e-12, abs=1e-13
            )

    def test_single_slit_is_straight_path(self, market_params):
        slits = SlitConfig(positions=[0.2], endpoint=-0.1)
        for tau in np.linspace(0.0, 1.0, 5):
            s = tau / 1.0
            assert n_slit_weak(slits, tau, 1.0, BsKernel(market_params)) == -0.1 * (1.0 - s) + 0.2 * s

    def test_three_slits_strictly_inside(self, market_params):
        slits = SlitConfig(positions=[-0.1, 0.0, 0.1], endpoint=0.05)
        value = n_slit_weak(slits, 1.0, 1.0, BsKernel(market_params))
        assert -0.1 < value < 0.1

    @pytest.mark.parametrize("amplitude", [1e-6, 2.5, 1e6])
    def test_amplitude_prefactor_cancels(self, market_params, amplitude):
        bs = BsKernel(market_params)
        unit = FunctionKernel(bs.exponent, amplitude=1.0)
        scaled = FunctionKernel(bs.exponent, amplitude=lambda T: amplitude * T)
        slits = SlitConfig(positions=[-0.2, 0.05, 0.3], endpoint=0.1, weights=[1.0, 2.0, 0.5])
        for tau in [0.0, 0.3, 0.75, 1.0]:
            assert n_slit_weak(slits, tau, 1.0, scaled) == pytest.approx(
                n_slit_weak(slits, tau, 1.0, unit), rel=1e-14, abs=1e-15
            )
        assert n_slit_weak(slits, 0.5, 1.0, unit) == pytest.approx(n_slit_weak(slits, 0.5, 1.0, bs), rel=1e-14)

    def test_weights_shift_the_average(self, market_params):
        equal = SlitConfig(positions=[-0.1, 0.1], endpoint=0.0)
        heavy = SlitConfig(positions=[-0.1, 0.1], endpoint=0.0, weights=[1.0, 3.0])
        kernel = BsKernel(market_params)
        assert n_slit_weak(heavy, 1.0, 1.0, kernel) > n_slit_weak(equal, 1.0, 1.0, kernel)

    def test_large_exponents_do_not_underflow(self):
        kernel = FunctionKernel(lambda x_i, x_f, T: -1.0e4 + 10.0 * np.asarray(x_i) * x_f)
        slits = SlitConfig(positions=[-0.1, 0.1], endpoint=0.5)
        value = n_slit_weak(slits, 1.0, 1.0, kernel)
        assert value == pytest.approx(0.1 * math.tanh(0.5), rel=1e-9)

    def test_vanishing_amplitudes(self):
        kernel = FunctionKernel(lambda x_i, x_f, T: np.full(np.shape(x_i), -np.inf))
        slits = SlitConfig(positions=[-0.1, 0.1], endpoint=0.5)
        with pytest.raises(DegenerateDenominatorError):
            n_slit_weak(slits, 0.5, 1.0, kernel)

    def test_multi_slit_reduces_to_n_slit(self, market_params):
        kernel = BsKernel(market_params)
        for tau in np.linspace(0.0, 1.0, 7):
            slits = SlitConfig(positions=[0.15, -0.15, 0.02], endpoint=0.05)
            assert multi_slit_weak([0.15, -0.15, 0.02], [0.05], tau, 1.0, kernel) == pytest.approx(
                n_slit_weak(slits, tau, 1.0, kernel), rel=1e-12, abs=1e-15
            )

    def test_multi_slit_inside_hull(self, market_params):
        value = multi_slit_weak([-0.1, 0.1], [-0.05, 0.08], 0.4, 1.0, BsKernel(market_params))
        assert -0.1 <= value <= 0.1


class TestGeneric:
    def test_bs_kernel_reproduces_closed_forms(self):
        for x_i, x_f, r, sigma, T, s in random_cases(200, seed=5):
            params = MarketParams(r=r, sigma=sigma, T=T)
            kernel = BsKernel(params)
            tau = s * T
            assert generic_two_slit(kernel, x_i, x_f, tau, T) == pytest.approx(
                forward_two_slit(x_i, x_f, tau, T, params), rel=1e-10, abs=1e-13
            )
            assert generic_inverse_two_slit(kernel, x_f, x_i, tau, T) == pytest.approx(
                inverse_two_slit(x_f, x_i, tau, T, params), rel=1e-10, abs=1e-13
            )

    def test_forward_matches_closed_form_tightly(self):
        for x_i, x_f, r, sigma, T, s in random_cases(1000, seed=17):
            params = MarketParams(r=r, sigma=sigma, T=T)
            assert generic_two_slit(BsKernel(params), x_i, x_f, s * T, T) == pytest.approx(
                forward_two_slit(x_i, x_f, s * T, T, params), rel=1e-12, abs=1e-13
            )

    def test_even_kernel_gives_straight_line(self):
        kernel = FunctionKernel(lambda x_i, x_f, T: -(np.asarray(x_i) ** 2 + x_f ** 2) / T)
        assert f_odd(kernel, 0.3, 0.1, 1.0) == 0.0
        assert generic_two_slit(kernel, 0.3, 0.1, 0.25, 1.0) == pytest.approx(0.1 * 0.75)

    def test_saturated_kernel_follows_envelope(self):
        kernel = FunctionKernel(lambda x_i, x_f, T: 1.0e6 * np.asarray(x_i))
        slits = SlitConfig(positions=[0.3, -0.3], endpoint=0.1)
        _, high = classical_envelope(slits, None, 0.25, 1.0)
        assert generic_two_slit(kernel, 0.3, 0.1, 0.25, 1.0) == high


class TestEnvelope:
    def test_zero_width_at_screen(self):
        slits = SlitConfig(positions=[0.1, -0.1], endpoint=0.05)
        assert classical_envelope(slits, None, 0.0, 1.0) == (0.05, 0.05)

    def test_slits_at_start(self):
        slits = SlitConfig(positions=[0.1, -0.1], endpoint=0.05)
        assert classical_envelope(slits, None, 1.0, 1.0) == (-0.1, 0.1)

    def test_containment(self):
        for x_i, x_f, r, sigma, T, _ in random_cases(300, seed=11):
            params = MarketParams(r=r, sigma=sigma, T=T)
            slits = SlitConfig(positions=[x_i, -x_i], endpoint=x_f)
            saturated = abs(f_odd(BsKernel(params), x_i, x_f, T)) >= 10
            for tau in np.linspace(0.0, T, 21):
                low, high = classical_envelope(slits, None, tau, T)
                value = weak_price(slits, tau, T, params)
                assert low <= value <= high
                if 0.0 < tau and not saturated:
                    assert low < value < high


class TestSampling:
    def test_two_steps_are_the_boundaries(self, market_params):
        request = TrajectoryRequest(
            slits=SlitConfig(positions=[0.1, -0.1], endpoint=0.05), params=market_params, steps=2
        )
        samples = sample_trajectory(request)
        assert [s.t for s in samples] == [0.0, 1.0]
        assert [s.tau for s in samples] == [1.0, 0.0]
        assert samples[0].x_w == forward_two_slit(0.1, 0.05, 1.0, 1.0, market_params)
        assert samples[1].x_w == 0.05

    def test_matches_closed_form_pointwise(self, market_params):
        request = TrajectoryRequest(slits=SlitConfig(positions=[0.1, -0.1], endpoint=0.05), params=market_params)
        samples = sample_trajectory(request)
        assert len(samples) == 101
        for sample in samples:
            assert sample.tau == sample.T - sample.t
            assert sample.x_w == forward_two_slit(0.1, 0.05, sample.tau, 1.0, market_params)
            assert sample.band_low <= sample.x_w <= sample.band_high

    def test_inverse_and_weighted_samples_stay_in_band(self, market_params):
        for slits in [
            SlitConfig(positions=[0.1, -0.1], endpoint=0.05, side=SlitSide.post),
            SlitConfig(positions=[-0.2, 0.05, 0.3], endpoint=0.1, weights=[1.0, 2.0, 0.5]),
        ]:
            samples = sample_trajectory(TrajectoryRequest(slits=slits, params=market_params, steps=51))
            assert all(s.band_low <= s.x_w <= s.band_high for s in samples)

    def test_sample_rejects_tau_mismatch(self):
        with pytest.raises(ValueError):
            WeakTrajectorySample(t=0.3, tau=0.71, T=1.0, x_w=0.0, band_low=-0.1, band_high=0.1)

    def test_sample_rejects_value_outside_band(self):
        with pytest.raises(ValueError):
            WeakTrajectorySample(t=0.0, tau=1.0, T=1.0, x_w=0.5, band_low=-0.1, band_high=0.1)
        sample = WeakTrajectorySample(t=0.0, tau=1.0, T=1.0, x_w=0.1, band_low=-0.1, band_high=0.1)
        assert sample.x_w == sample.band_high

    def test_duplicate_positions_rejected(self, market_params):
        with pytest.raises(ValueError):
            TrajectoryRequest(slits=SlitConfig(positions=[0.1, 0.1], endpoint=0.0), params=market_params)
