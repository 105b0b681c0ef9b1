import logging
import math

import numpy as np
import pytest

from weakslit.core.config import settings
from weakslit.core.errors import DomainError
from weakslit.core.kernel import bs_kernel, kernel_gaussian
from weakslit.oracles.monte_carlo import (
    chi_square_against_kernel,
    martingale_check,
    mc_kernel_density,
    run_batches,
    simulate_gbm,
)
from weakslit.oracles.pde import (
    apply_hamiltonian,
    crank_nicolson_evolve,
    evolve_history,
    gaussian_field,
    gaussian_kernel_image,
    hamiltonian_split,
    non_hermiticity,
    norm_flow,
)
from weakslit.oracles.validation import validate_kernel
from weakslit.schemas.market import MarketParams
from weakslit.schemas.oracles import Field, GbmParams, Grid

SMALL_GRID = Grid(x_min=-3.0, x_max=3.0, n=800)


def field_mean(field: Field) -> float:
    return float(np.sum(field.grid.nodes * field.values) / np.sum(field.values))


class TestSimulateGbm:
    def test_same_seed_same_path(self):
        p = GbmParams(S0=100.0, phi=0.05, sigma=0.2, dt=0.01, steps=250, seed=17)
        np.testing.assert_array_equal(simulate_gbm(p), simulate_gbm(p))

    def test_seed_changes_path(self):
        base = GbmParams(S0=100.0, phi=0.05, sigma=0.2, dt=0.01, steps=50, seed=1)
        other = base.model_copy(update={"seed": 2})
        assert not np.array_equal(simulate_gbm(base), simulate_gbm(other))

    def test_shape_and_start(self):
        path = simulate_gbm(GbmParams(S0=42.0, phi=0.0, sigma=0.3, dt=0.1, steps=10))
        assert path.shape == (11,)
        assert path[0] == pytest.approx(42.0, rel=1e-15)
        assert np.all(path > 0)

    def test_vanishing_volatility_is_deterministic_growth(self):
        p = GbmParams(S0=100.0, phi=0.05, sigma=1e-12, dt=0.01, steps=100)
        assert simulate_gbm(p)[-1] == pytest.approx(100.0 * math.exp(0.05), rel=1e-9)

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            GbmParams(S0=-1.0, phi=0.0, sigma=0.2, dt=0.01)
        with pytest.raises(ValueError):
            GbmParams(S0=1.0, phi=0.0, sigma=0.0, dt=0.01)


class TestRunBatches:
    def test_batches_come_back_in_order(self):
        sizes = run_batches(lambda rng, size: size, 25, seed=3, batch_size=10, workers=2)
        assert sizes == [10, 10, 5]

    def test_worker_count_does_not_change_results(self):
        def work(rng, size):
            return rng.standard_normal(size)

        serial = run_batches(work, 5000, seed=9, batch_size=1000, workers=1)
        parallel = run_batches(work, 5000, seed=9, batch_size=1000, workers=4)
        for a, b in zip(serial, parallel):
            np.testing.assert_array_equal(a, b)


class TestMartingale:
    @pytest.mark.parametrize("r", [0.0, 0.05])
    def test_discounted_price_is_martingale(self, r):
        p = GbmParams(S0=100.0, phi=r, sigma=0.2, dt=0.1, seed=11)
        result = martingale_check(p, r, 1.0, 200_000)
        assert result.n_paths == 200_000
        assert abs(result.estimate) < 5.0 * result.standard_error

    def test_wrong_drift_is_detected(self):
        p = GbmParams(S0=100.0, phi=0.10, sigma=0.2, dt=0.1, seed=11)
        result = martingale_check(p, 0.05, 1.0, 200_000)
        assert result.estimate == pytest.approx(100.0 * (math.exp(0.05) - 1.0), rel=0.05)
        assert abs(result.estimate) > 5.0 * result.standard_error

    @pytest.mark.slow
    def test_many_paths(self):
        p = GbmParams(S0=100.0, phi=0.05, sigma=0.2, dt=0.01, seed=5)
        result = martingale_check(p, 0.05, 1.0, 1_000_000)
        assert abs(result.estimate) <= 3.0 * result.standard_error
        assert result.standard_error < 0.03

    def test_needs_enough_paths(self):
        with pytest.raises(DomainError):
            martingale_check(GbmParams(S0=1.0, phi=0.0, sigma=0.2, dt=0.1), 0.0, 1.0, 99)

    def test_needs_positive_horizon(self):
        with pytest.raises(DomainError):
            martingale_check(GbmParams(S0=1.0, phi=0.0, sigma=0.2, dt=0.1), 0.0, 0.0, 1000)


class TestKernelDensity:
    @pytest.fixture
    def density(self, market_params):
        return mc_kernel_density(0.0, 1.0, market_params, 200_000, 40, seed=1)

    def test_mass_is_discount_factor(self, density):
        assert int(density.counts.sum()) == 200_000
        assert density.mass == pytest.approx(math.exp(-0.05), rel=1e-12)

    def test_peak_near_kernel_mean(self, density, market_params):
        mean, _ = kernel_gaussian(market_params, 1.0, 0.0)
        width = density.edges[1] - density.edges[0]
        assert abs(density.centers[np.argmax(density.density)] - mean) <= width

    def test_matches_kernel_in_the_core(self, density, market_params):
        mean, sd = kernel_gaussian(market_params, 1.0, 0.0)
        core = np.abs(density.centers - mean) <= sd
        expected = bs_kernel(density.centers[core], 1.0, 0.0, market_params)
        np.testing.assert_allclose(density.density[core], expected, rtol=0.05)

    def test_chi_square_accepts_kernel(self, density, market_params):
        _, p_value = chi_square_against_kernel(density, market_params)
        assert p_value > settings.CHI2_ALPHA

    def test_chi_square_rejects_wrong_volatility(self, density):
        wrong = MarketParams(r=0.05, sigma=0.25, T=1.0)
        _, p_value = chi_square_against_kernel(density, wrong)
        assert p_value < 1e-6

    def test_needs_ten_bins(self, market_params):
        with pytest.raises(DomainError):
            mc_kernel_density(0.0, 1.0, market_params, 1000, 9, seed=1)

    def test_independent_of_worker_count(self, market_params, monkeypatch):
        monkeypatch.setattr(settings, "MC_BATCH_SIZE", 10_000)
        monkeypatch.setattr(settings, "MC_WORKERS", 1)
        serial = mc_kernel_density(0.1, 0.5, market_params, 35_000, 20, seed=4)
        monkeypatch.setattr(settings, "MC_WORKERS", 3)
        parallel = mc_kernel_density(0.1, 0.5, market_params, 35_000, 20, seed=4)
        np.testing.assert_array_equal(serial.counts, parallel.counts)

    @pytest.mark.slow
    def test_chi_square_ten_million_paths(self, market_params):
        density = mc_kernel_density(0.0, 1.0, market_params, 10_000_000, 50, seed=settings.WEAKSLIT_SEED)
        _, p_value = chi_square_against_kernel(density, market_params)
        assert p_value > settings.CHI2_ALPHA


class TestHamiltonian:
    def test_split_is_exact(self, market_params):
        hermitian, anti_hermitian = hamiltonian_split(Grid(x_min=-2.0, x_max=2.0, n=64), market_params)
        assert abs(hermitian - hermitian.T).max() == 0.0
        assert abs(anti_hermitian + anti_hermitian.T).max() == 0.0

    def test_stencil_matches_matrix(self, market_params):
        grid = Grid(x_min=-3.0, x_max=3.0, n=200)
        hermitian, anti_hermitian = hamiltonian_split(grid, market_params)
        values = np.random.default_rng(8).standard_normal(grid.n)
        expected = (hermitian + anti_hermitian) @ values
        np.testing.assert_allclose(
            apply_hamiltonian(Field(grid=grid, values=values), market_params),
            expected,
            rtol=0,
            atol=1e-12 * np.max(np.abs(expected)),
        )

    def test_hermitian_when_drift_vanishes(self):
        params = MarketParams(r=0.125, sigma=0.5, T=1.0)
        assert non_hermiticity(SMALL_GRID, params) == 0.0

    def test_non_hermitian_for_market_parameters(self, market_params):
        assert non_hermiticity(SMALL_GRID, market_params) > 0.0


class TestCrankNicolson:
    def test_stationary_mean_without_drift(self):
        params = MarketParams(r=0.125, sigma=0.5, T=1.0)
        grid = Grid(x_min=-4.0, x_max=4.0, n=400)
        evolved = crank_nicolson_evolve(gaussian_field(grid, 0.0, 0.2), 1.0, params, n_time_steps=200)
        assert abs(field_mean(evolved)) < 1e-8

    def test_mean_moves_against_log_drift(self, market_params):
        evolved = crank_nicolson_evolve(gaussian_field(SMALL_GRID, 0.0, 0.1), 1.0, market_params, n_time_steps=400)
        assert field_mean(evolved) == pytest.approx(-market_params.log_drift, abs=1e-3)

    def test_mass_decays_at_the_rate(self, market_params):
        history = evolve_history(gaussian_field(SMALL_GRID, 0.0, 0.1), 1.0, market_params, 400, record_every=40)
        flow = norm_flow(history)
        assert flow[-1].mass / flow[0].mass == pytest.approx(math.exp(-0.05), abs=1e-4)
        assert np.all(np.diff([sample.l2 for sample in flow]) < 0)

    def test_mass_conserved_without_discount(self):
        params = MarketParams(r=0.0, sigma=0.2, T=1.0)
        history = evolve_history(gaussian_field(SMALL_GRID, 0.0, 0.1), 1.0, params, 400, record_every=100)
        flow = norm_flow(history)
        assert len(flow) == 5
        assert flow[-1].mass == pytest.approx(flow[0].mass, rel=1e-6)

    def test_norm_flow_needs_two_snapshots(self):
        with pytest.raises(DomainError):
            norm_flow([gaussian_field(SMALL_GRID, 0.0, 0.1)])

    def test_rejects_field_on_other_grid(self, market_params):
        psi0 = gaussian_field(SMALL_GRID, 0.0, 0.1)
        with pytest.raises(DomainError):
            crank_nicolson_evolve(psi0, 1.0, market_params, grid=SMALL_GRID.refined())

    def test_non_positive_horizon(self, market_params):
        with pytest.raises(DomainError):
            evolve_history(gaussian_field(SMALL_GRID, 0.0, 0.1), 0.0, market_params, 10)

    def test_warns_when_mass_reaches_boundary(self, market_params, caplog):
        with caplog.at_level(logging.WARNING, logger="weakslit.oracles.pde"):
            evolve_history(gaussian_field(SMALL_GRID, 0.0, 1.0), 0.1, market_params, 10)
        assert "boundary" in caplog.text

    def test_close_to_kernel_image(self, market_params):
        grid = Grid(x_min=-3.0, x_max=3.0, n=2000)
        evolved = crank_nicolson_evolve(gaussian_field(grid, 0.0, 0.1), 1.0, market_params, n_time_steps=500)
        exact = gaussian_kernel_image(grid, 0.0, 0.1, 1.0, market_params)
        assert np.max(np.abs(evolved.values - exact.values)) / exact.peak < 1e-3

    @pytest.mark.slow
    def test_validation_grid_accuracy_and_order(self, market_params):
        report = validate_kernel(market_params, n_paths=100_000)
        assert report.metrics["pde_linf_rel"] <= settings.PDE_TOLERANCE
        low, high = settings.PDE_RATIO_RANGE
        assert low <= report.metrics["pde_convergence_ratio"] <= high


class TestValidateKernel:
    def test_coarse_grid_fails(self, market_params):
        report = validate_kernel(
            market_params, grid=Grid(x_min=-3.0, x_max=3.0, n=16), n_time_steps=50, n_paths=20_000
        )
        assert not report.passed
        assert "pde_linf_rel" in report.failures
        assert report.metrics["hermitian_asymmetry"] == 0.0
        assert report.metrics["anti_hermitian_symmetry"] == 0.0

    def test_coarse_grid_is_reproducible(self, market_params):
        kwargs = dict(grid=Grid(x_min=-3.0, x_max=3.0, n=16), n_time_steps=50, n_paths=20_000, seed=3)
        assert validate_kernel(market_params, **kwargs) == validate_kernel(market_params, **kwargs)

    @pytest.mark.slow
    def test_default_run_passes(self, market_params):
        report = validate_kernel(market_params)
        assert report.passed, report.failures
        assert report.metrics["mc_mass"] == pytest.approx(math.exp(-0.05), rel=1e-12)
