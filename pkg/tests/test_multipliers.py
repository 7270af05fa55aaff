import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tfwave.utils.calibration import CalibrationStore
from tfwave.utils.constants import INF, STREAM_CALIBRATE
from tfwave.utils.errors import GridMismatch, InvalidSymbolParams, SpecKindMismatch, WindowNotCompactlySupported
from tfwave.utils.grid import GridFunction, GridSpec, forward_fourier, weighted_lp_norm
from tfwave.utils.multipliers import (
    Cutoff, Symbol, apply_multiplier, estimate_operator_norm, eval_symbol, klein_gordon_symbols,
    osc_derivative_profile, peetre_check, split_symbol, symbol_amalgam_norm, symbol_kernel_norm,
    symbol_modulation_norm, symbol_values
)
from tfwave.utils.samplers import gaussian
from tfwave.utils.tfnorms import AmalgamSpec, ModulationSpec


class TestSymbols:
    """Closed-form symbols, the cutoff and the singular/oscillatory split"""

    def test_values_at_origin(self):
        assert eval_symbol(Symbol.cos(), 0.0) == 1
        assert eval_symbol(Symbol.wave_sinc(0.5), 0.0) == pytest.approx(0.5)
        assert eval_symbol(Symbol.wave_cos(0.3), 0.0) == 1
        assert eval_symbol(Symbol.sinpow(1, 1), 0.0) == 1
        assert eval_symbol(Symbol.sinpow(1, 0.5), 0.0) == 0

    def test_sinpow_zero(self):
        assert abs(eval_symbol(Symbol.sinpow(1, 1), np.pi)) < 1e-15

    def test_sinpow_parameters(self):
        for alpha, delta in ((1.5, 1.0), (0.5, 0.8), (0.0, 0.0)):
            with pytest.raises(InvalidSymbolParams):
                Symbol.sinpow(alpha, delta)

    @given(st.floats(min_value=1e-3, max_value=50.0))
    @settings(max_examples=50)
    def test_wave_sinc_bounded_by_t(self, r):
        """|sin(2 pi t r) / (2 pi r)| <= t"""
        t = 0.7
        assert abs(Symbol.wave_sinc(t).radial_values(np.array(r))) <= t + 1e-15

    def test_klein_gordon_at_origin(self):
        cos_part, sinc_part = klein_gordon_symbols(0.4)
        assert eval_symbol(cos_part, 0.0) == pytest.approx(np.cos(0.4))
        assert eval_symbol(sinc_part, 0.0) == pytest.approx(np.sin(0.4))

    def test_cutoff(self):
        chi = Cutoff()
        r = np.linspace(0, 3, 301)
        values = chi(r)
        assert np.all(values[r <= 1] == 1.0)
        assert np.all(values[r >= 2] == 0.0)
        assert np.all((values >= 0) & (values <= 1))
        assert np.all(np.diff(values) <= 0)

    def test_split_recomposes(self, grid):
        sym = Symbol.sinpow(1, 1)
        sing, osc = split_symbol(sym, Cutoff(), grid)
        full = symbol_values(sym, grid).values
        assert np.max(np.abs(sing.grid.values + osc.grid.values - full)) < 1e-14
        r = grid.radius('frequency')
        assert not np.any(sing.grid.values[r >= 2])
        assert not np.any(osc.grid.values[r <= 1])

    def test_closed_form_split_needs_grid(self, grid2d):
        """Closed-form symbols carry no grid, so splitting one without a grid is refused"""
        with pytest.raises(ValueError):
            split_symbol(Symbol.cos(), Cutoff())
        with pytest.raises(ValueError):
            estimate_operator_norm(Symbol.cos(), ModulationSpec(2, 1, 0), ModulationSpec(2, 1, 0), trials=1)
        sing, _ = split_symbol(Symbol.cos(), Cutoff(), grid2d)
        assert sing.grid.spec == grid2d
        custom_sing, _ = split_symbol(sing, Cutoff())
        assert custom_sing.grid.spec == grid2d

    def test_osc_decay(self):
        """|sigma_osc| <= 2 * 2^(-m/2) on dyadic shells for SinPow(1/2, 1/2)"""
        spec = GridSpec(1, 1024, 16.0)
        _, osc = split_symbol(Symbol.sinpow(0.5, 0.5), Cutoff(), spec)
        r = spec.radius('frequency')
        for m in range(1, 5):
            shell = (r >= 2 ** m) & (r <= 2 ** (m + 1))
            assert np.max(np.abs(osc.grid.values[shell])) <= 2 * 2 ** (-m / 2)

    def test_osc_derivative_profile_finite(self, grid):
        value = osc_derivative_profile(Symbol.sinpow(1, 1), Cutoff(), grid)
        assert 0 < value < INF

    def test_custom_symbol_grid(self, grid, small_grid):
        sym = Symbol.custom(GridFunction(grid, np.ones(grid.shape)))
        with pytest.raises(GridMismatch):
            symbol_values(sym, small_grid)


class TestMultipliers:
    """Application of H_sigma, symbol norms and operator-norm estimates"""

    def test_identity(self, gabor):
        sym = Symbol.custom(GridFunction(gabor.spec, np.ones(gabor.spec.shape)))
        assert np.max(np.abs(apply_multiplier(sym, gabor).values - gabor.values)) < 1e-13 * max(1, gabor.sup())

    def test_plane_wave_eigenfunction(self):
        spec = GridSpec(1, 128, 8.0)
        k = 7 / spec.l
        f = GridFunction.from_callable(spec, lambda x: np.exp(2j * np.pi * k * x))
        result = apply_multiplier(Symbol.wave_cos(0.37), f)
        assert np.max(np.abs(result.values - np.cos(2 * np.pi * 0.37 * k) * f.values)) < 1e-12

    def test_gaussian_symbol(self):
        """exp(-pi xi^2) applied to exp(-pi x^2) gives 2^(-1/2) exp(-pi x^2 / 2)"""
        spec = GridSpec(1, 256, 16.0)
        sym = Symbol.custom(GridFunction.from_callable(spec, lambda xi: np.exp(-np.pi * xi ** 2), 'frequency'))
        result = apply_multiplier(sym, gaussian(spec))
        expected = 2 ** -0.5 * np.exp(-np.pi * spec.axis() ** 2 / 2)
        assert np.max(np.abs(result.values - expected)) < 1e-9

    def test_linearity(self, grid, gabor):
        other = gaussian(grid)
        sym = Symbol.sinpow(1, 1)
        combined = apply_multiplier(sym, gabor * 2.0 + other * (1 - 3j))
        separate = apply_multiplier(sym, gabor) * 2.0 + apply_multiplier(sym, other) * (1 - 3j)
        assert np.max(np.abs(combined.values - separate.values)) < 1e-12

    def test_composition(self, gabor):
        spec = gabor.spec
        twice = apply_multiplier(Symbol.wave_cos(0.2), apply_multiplier(Symbol.wave_cos(0.3), gabor))
        product = Symbol.custom(GridFunction(
            spec, symbol_values(Symbol.wave_cos(0.2), spec).values * symbol_values(Symbol.wave_cos(0.3), spec).values,
            'frequency'))
        assert np.max(np.abs(twice.values - apply_multiplier(product, gabor).values)) < 1e-12

    def test_symbol_amalgam_norm_zero(self, bump):
        zero = Symbol.custom(GridFunction.zeros(bump.spec, 'frequency'))
        assert symbol_amalgam_norm(zero, 1, 0, bump, 8.0).value == 0.0

    def test_symbol_amalgam_norm_identity(self, bump):
        """The window normalization gives the constant symbol norm one"""
        assert symbol_amalgam_norm(Symbol.one(), 1, 0, bump, 4.0).value == pytest.approx(1.0)

    def test_symbol_amalgam_norm_needs_bump(self, unit_gaussian):
        with pytest.raises(WindowNotCompactlySupported):
            symbol_amalgam_norm(Symbol.cos(), 1, 0, unit_gaussian, 4.0)

    @pytest.mark.parametrize('sym,gamma', [(Symbol.sinpow(1, 1), 1.0), (Symbol.cos(), 0.0)])
    def test_symbol_amalgam_norm_stabilizes(self, bump, sym, gamma):
        """Doubling the truncation 64 -> 128 changes the norm by under 5%"""
        first = symbol_amalgam_norm(sym, 1, gamma, bump, 64.0).value
        second = symbol_amalgam_norm(sym, 1, gamma, bump, 128.0).value
        assert 0 < first < INF
        assert abs(second - first) / first < 0.05

    def test_kernel_norm_stable(self, small_grid):
        sing, _ = split_symbol(Symbol.sinpow(1, 1), Cutoff(), small_grid)
        larger = small_grid.enlarge()
        sing_larger, _ = split_symbol(Symbol.sinpow(1, 1), Cutoff(), larger)
        first = symbol_kernel_norm(sing, small_grid, 1.0)
        second = symbol_kernel_norm(sing_larger, larger, 1.0)
        assert 0 < first < INF
        assert abs(second - first) / first < 0.05

    def test_symbol_modulation_norm_finite(self, small_grid):
        value = symbol_modulation_norm(Symbol.cos(), small_grid)
        assert 0 < value < INF

    def test_identity_operator_norm(self, small_grid):
        """H_1 on M^{2,2}_0 has every ratio equal to one"""
        report = estimate_operator_norm(Symbol.one(), ModulationSpec(2, 2, 0), ModulationSpec(2, 2, 0),
                                        seed=1, trials=5, spec=small_grid, rounds=1)
        assert report.reference_norm == pytest.approx(1.0)
        assert len(report.trials) == 6
        for trial in report.trials:
            assert trial.ratio == pytest.approx(1.0, abs=1e-10)

    def test_operator_norm_calibrated(self, small_grid, tmp_path):
        """Ratios for cos |xi| on M^{2,1}_0 stay below the constant stored from the other stream"""
        spec = ModulationSpec(2, 1, 0)
        store = CalibrationStore(str(tmp_path))
        calibration = estimate_operator_norm(Symbol.cos(), spec, spec, seed=4, trials=12, spec=small_grid,
                                             stream=STREAM_CALIBRATE)
        store.record('cos-modulation', 'multiplier-check', calibration.max_ratio, 4, 12, STREAM_CALIBRATE)
        verification = estimate_operator_norm(Symbol.cos(), spec, spec, seed=4, trials=6, spec=small_grid,
                                              reference=calibration.reference_norm)
        assert verification.max_ratio <= store.constant('cos-modulation')

    def test_amalgam_operator_norm_calibrated(self, small_grid, tmp_path):
        """cos |xi| on W(FL^1, L^2) against the kernel norm, calibrated then verified"""
        spec = AmalgamSpec(1, 0, 2, 0)
        store = CalibrationStore(str(tmp_path))
        calibration = estimate_operator_norm(Symbol.cos(), spec, spec, seed=6, trials=12, spec=small_grid,
                                             stream=STREAM_CALIBRATE)
        assert calibration.reference_norm == pytest.approx(symbol_kernel_norm(Symbol.cos(), small_grid))
        store.record('cos-amalgam', 'multiplier-check', calibration.max_ratio, 6, 12, STREAM_CALIBRATE)
        verification = estimate_operator_norm(Symbol.cos(), spec, spec, seed=6, trials=6, spec=small_grid,
                                              reference=calibration.reference_norm)
        assert 0 < verification.max_ratio <= store.constant('cos-amalgam')

    def test_spec_kind_mismatch(self, small_grid):
        with pytest.raises(SpecKindMismatch):
            estimate_operator_norm(Symbol.cos(), ModulationSpec(2, 1, 0), AmalgamSpec(1, 0, 2, 0), trials=1,
                                   spec=small_grid)
        with pytest.raises(SpecKindMismatch):
            estimate_operator_norm(Symbol.cos(), ModulationSpec(2, 1, 0), ModulationSpec(1, 1, 0), trials=1,
                                   spec=small_grid)

    def test_zero_trials(self, small_grid):
        report = estimate_operator_norm(Symbol.cos(), ModulationSpec(2, 1, 0), ModulationSpec(2, 1, 0),
                                        trials=0, spec=small_grid, reference=1.0)
        assert report.trials == []
        assert report.max_ratio is None

    def test_bounded_symbol_contracts_l2(self, gabor):
        """|sigma| <= 1 cannot raise the L^2 norm"""
        result = apply_multiplier(Symbol.wave_cos(0.25), gabor)
        assert weighted_lp_norm(forward_fourier(result), 2) <= weighted_lp_norm(gabor, 2) * (1 + 1e-12)


class TestPeetre:
    """Weight inequality <xi>^-delta <x - xi>^-|delta| <= C <x>^-delta"""

    def test_random_sample(self):
        rng = np.random.default_rng(0)
        x = rng.uniform(-50, 50, 10_000)
        xi = rng.uniform(-50, 50, 10_000)
        delta = rng.uniform(0, 1, 10_000)
        assert peetre_check(x, xi, delta).holds

    def test_constant_free_form_fails(self):
        """x = 1, xi = 1/2, delta = 1 breaks the inequality without the constant"""
        report = peetre_check(np.array([1.0]), np.array([0.5]), 1.0)
        assert report.holds
        assert not report.constant_free_holds

    def test_two_dimensional_points(self):
        rng = np.random.default_rng(1)
        report = peetre_check(rng.normal(size=(100, 2)), rng.normal(size=(100, 2)), 0.5)
        assert report.holds
        assert report.lhs.shape == (100,)
