import numpy as np
import pytest

from tfwave.utils.constants import FREQUENCY, GRID_MAGIC, INF, STREAM_VERIFY
from tfwave.utils.errors import DomainMismatch, GridMismatch, UnsupportedExponent
from tfwave.utils.grid import (
    GridFunction, GridSpec, Weight, check_exponent, forward_fourier, from_json, inverse_fourier,
    laplacian, pointwise, read_binary, spectral_derivative, to_json, weighted_lp_norm, write_binary
)
from tfwave.utils.samplers import gabor_superposition, gaussian, trial_rng


class TestGrid:
    """Grid specification, Fourier contract and weighted Lebesgue norms"""

    def test_grid_spec_invariants(self):
        """Odd or tiny sample counts and empty boxes are rejected"""
        spec = GridSpec(1, 256, 16.0)
        assert spec.dx * spec.n == pytest.approx(spec.l)
        assert spec.freq_axis()[0] == pytest.approx(-spec.n / (2 * spec.l))
        for bad in ((1, 5, 1.0), (1, 2, 1.0), (1, 8, 0.0), (3, 8, 1.0)):
            with pytest.raises(ValueError):
                GridSpec(*bad)

    def test_gaussian_transform(self):
        """exp(-pi x^2) is its own Fourier transform up to the periodization tail"""
        spec = GridSpec(1, 256, 16.0)
        f = GridFunction.from_callable(spec, lambda x: np.exp(-np.pi * x ** 2))
        f_hat = forward_fourier(f)
        expected = np.exp(-np.pi * spec.freq_axis() ** 2)
        assert f_hat.domain == FREQUENCY
        assert np.max(np.abs(f_hat.values - expected)) < 1e-10

    def test_round_trip(self, grid):
        """inverse_fourier undoes forward_fourier over 100 seeded draws"""
        for trial in range(100):
            f = gabor_superposition(grid, trial_rng(0, STREAM_VERIFY, trial))
            back = inverse_fourier(forward_fourier(f))
            assert np.max(np.abs(back.values - f.values)) <= 1e-12 * f.sup()

    def test_plane_wave_is_unit_delta(self):
        """A grid plane wave transforms into a delta of mass one"""
        spec = GridSpec(1, 64, 8.0)
        k = 3 / spec.l
        f = GridFunction.from_callable(spec, lambda x: np.exp(2j * np.pi * k * x))
        f_hat = forward_fourier(f)
        peak = spec.n // 2 + 3
        assert f_hat.values[peak] == pytest.approx(spec.l)
        rest = np.delete(f_hat.values, peak)
        assert np.max(np.abs(rest)) < 1e-10
        assert weighted_lp_norm(f_hat, 1) == pytest.approx(1.0)

    def test_zero_transform(self, grid):
        assert not np.any(forward_fourier(GridFunction.zeros(grid)).values)

    def test_parseval(self, gabor):
        """Spatial and frequency cell volumes make the discrete Parseval identity exact"""
        assert weighted_lp_norm(forward_fourier(gabor), 2) == pytest.approx(weighted_lp_norm(gabor, 2), rel=1e-12)

    def test_domain_mismatch(self, gabor):
        with pytest.raises(DomainMismatch):
            inverse_fourier(gabor)
        with pytest.raises(DomainMismatch):
            forward_fourier(forward_fourier(gabor))
        with pytest.raises(DomainMismatch):
            gabor + forward_fourier(gabor)

    def test_grid_mismatch(self, grid, small_grid):
        with pytest.raises(GridMismatch):
            GridFunction.zeros(grid) + GridFunction.zeros(small_grid)
        with pytest.raises(GridMismatch):
            GridFunction(grid, np.zeros(10))

    def test_weighted_norms(self):
        """Riemann sums, the sup for p = inf, and the polynomial weight"""
        spec = GridSpec(1, 64, 16.0)
        ones = GridFunction(spec, np.ones(spec.shape))
        assert weighted_lp_norm(GridFunction.zeros(spec), 3, 2.0) == 0.0
        assert weighted_lp_norm(ones, 1) == pytest.approx(spec.l)
        assert weighted_lp_norm(ones, 2) == pytest.approx(np.sqrt(spec.l))
        assert weighted_lp_norm(ones, INF) == 1.0
        # The weighted sup sits at the box corner x = -l/2
        assert weighted_lp_norm(ones, INF, Weight(2.0)) == pytest.approx(1 + (spec.l / 2) ** 2)

    def test_indicator_norm(self):
        """The unit step on [0, 1) has L^1 norm one up to a cell"""
        spec = GridSpec(1, 256, 16.0)
        step = GridFunction.from_callable(spec, lambda x: ((x >= 0) & (x < 1)).astype(float))
        assert weighted_lp_norm(step, 1) == pytest.approx(1.0, abs=spec.dx)

    def test_weighted_norm_monotone_in_s(self, gabor):
        for p in (1, 2, INF):
            values = [weighted_lp_norm(gabor, p, s) for s in (-1.0, 0.0, 0.5, 2.0)]
            assert values == sorted(values)

    def test_weighted_norm_refinement(self):
        """Doubling n at fixed l barely moves the norm of a smooth function"""
        spec = GridSpec(1, 256, 16.0)
        for p, s in ((1, 0.0), (2, 0.0), (2, 1.0)):
            coarse = weighted_lp_norm(gaussian(spec), p, s)
            fine = weighted_lp_norm(gaussian(spec.refine()), p, s)
            assert abs(fine - coarse) < 1e-6 * coarse
        assert weighted_lp_norm(gaussian(spec), 2) == pytest.approx(2 ** -0.25, abs=1e-8)

    def test_weight_positive(self):
        r = np.linspace(0, 100, 11)
        assert np.all(Weight(-3.0)(r) > 0)
        assert Weight(0.0)(r) == pytest.approx(np.ones_like(r))

    def test_exponent_range(self):
        assert check_exponent(1) == 1.0
        assert check_exponent(INF) == INF
        with pytest.raises(UnsupportedExponent):
            check_exponent(0.5)
        with pytest.raises(ValueError):
            check_exponent(-1)

    def test_spectral_derivative(self):
        """d/dx sin(2 pi k x) = 2 pi k cos(2 pi k x) for k on the grid"""
        spec = GridSpec(1, 128, 8.0)
        k = 5 / spec.l
        f = GridFunction.from_callable(spec, lambda x: np.sin(2 * np.pi * k * x))
        derivative = spectral_derivative(f, (1,))
        expected = 2 * np.pi * k * np.cos(2 * np.pi * k * spec.axis())
        assert np.max(np.abs(derivative.values - expected)) < 1e-10
        with pytest.raises(ValueError):
            spectral_derivative(f, (1, 0))

    def test_laplacian_eigenvalue(self, grid2d):
        k = (2 / grid2d.l, 1 / grid2d.l)
        f = GridFunction.from_callable(grid2d, lambda x, y: np.exp(2j * np.pi * (k[0] * x + k[1] * y)))
        expected = -(2 * np.pi) ** 2 * (k[0] ** 2 + k[1] ** 2) * f.values
        assert np.max(np.abs(laplacian(f).values - expected)) < 1e-9

    def test_pointwise(self, gabor):
        assert np.allclose(pointwise('add', gabor, gabor).values, 2 * gabor.values)
        assert np.allclose(pointwise('abs_power', gabor, 1).values, np.abs(gabor.values) ** 2 * gabor.values)
        assert np.allclose(pointwise('scale', gabor, 2j).values, 2j * gabor.values)
        with pytest.raises(ValueError):
            pointwise('divide', gabor, gabor)

    def test_binary_file(self, tmp_path, grid2d):
        """Header is magic, version, d, n, l; samples follow as complex128"""
        rng = np.random.default_rng(1)
        f = GridFunction(grid2d, rng.normal(size=grid2d.shape) + 1j * rng.normal(size=grid2d.shape))
        path = tmp_path / 'f.tfwg'
        write_binary(f, str(path))
        assert path.read_bytes()[:4] == GRID_MAGIC
        back = read_binary(str(path))
        assert back.spec == grid2d
        assert np.array_equal(back.values, f.values)

    def test_bad_binary_file(self, tmp_path):
        path = tmp_path / 'junk.tfwg'
        path.write_bytes(b'JUNK' + bytes(40))
        with pytest.raises(ValueError):
            read_binary(str(path))

    def test_json(self, gabor):
        back = from_json(to_json(gabor))
        assert back.spec == gabor.spec
        assert np.array_equal(back.values, gabor.values)
