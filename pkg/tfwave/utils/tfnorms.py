"""Short-time Fourier transform, modulation and Wiener amalgam norms, and estimate checks

All mixed norms are Riemann sums over a time-frequency lattice. With the default lattice
(a = dx, b = 1/l in d=1) the STFT samples are exactly the scaled DFT outputs, so no
interpolation enters the norms.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Union

import numpy as np

from .constants import DEFAULT_BUMP_RADIUS, DEFAULT_X_STRIDE, INF, SPATIAL, WINDOW_BUMP, WINDOW_GAUSSIAN
from .errors import (
    DomainMismatch, EmbeddingConditionFailed, ExponentMismatch, GridMismatch,
    LatticeIncompatible, SupportTooLarge, WindowNotCompactlySupported
)
from .grid import (
    GridFunction, GridSpec, Weight, centered_fft, check_exponent, forward_fourier,
    inverse_fourier, lp_reduce, reciprocal, spectral_derivative, weighted_lp_norm
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Window:
    g: GridFunction
    kind: str
    l2_norm: float
    radius: float = DEFAULT_BUMP_RADIUS
    normalized: bool = False

    @classmethod
    def gaussian(cls, spec, normalized=False):
        """exp(-pi |x|^2), optionally scaled to unit L^2 norm on the grid"""
        g = GridFunction.from_callable(spec, lambda *x: np.exp(-np.pi * sum(c ** 2 for c in x)))
        norm = weighted_lp_norm(g, 2)
        if normalized:
            g = g * (1.0 / norm)
            norm = weighted_lp_norm(g, 2)
        return cls(g, WINDOW_GAUSSIAN, norm, radius=INF, normalized=normalized)

    @classmethod
    def bump(cls, spec, radius=DEFAULT_BUMP_RADIUS):
        """exp(1 - 1/(1 - |x/R|^2)) on |x| < R, zero outside"""
        t = (spec.radius() / radius) ** 2
        inside = t < 1.0
        values = np.zeros(spec.shape)
        values[inside] = np.exp(1.0 - 1.0 / (1.0 - t[inside]))
        g = GridFunction(spec, values)
        return cls(g, WINDOW_BUMP, weighted_lp_norm(g, 2), radius=radius)

    @property
    def spec(self):
        return self.g.spec

    @property
    def compact(self):
        return self.kind == WINDOW_BUMP

    def resample(self, spec):
        """The same window rebuilt on another grid"""
        if spec == self.spec:
            return self
        if self.kind == WINDOW_BUMP:
            return Window.bump(spec, self.radius)
        return Window.gaussian(spec, self.normalized)


def default_window(spec, compact=False):
    """Unit-L^2 Gaussian for modulation norms, bump for amalgam norms"""
    return Window.bump(spec) if compact else Window.gaussian(spec, normalized=True)


@dataclass(frozen=True)
class Lattice:
    spec: GridSpec
    x_stride: int = 1
    xi_stride: int = 1

    def __post_init__(self):
        for stride in (self.x_stride, self.xi_stride):
            if stride < 1 or self.spec.n % stride:
                raise LatticeIncompatible(f"Stride {stride} does not divide n={self.spec.n}")

    @property
    def a(self):
        return self.x_stride * self.spec.dx

    @property
    def b(self):
        return self.xi_stride * self.spec.dxi

    @property
    def x_counts(self):
        return (self.spec.n // self.x_stride,) * self.spec.d

    @property
    def xi_counts(self):
        return (self.spec.n // self.xi_stride,) * self.spec.d

    def x_indices(self):
        return np.arange(0, self.spec.n, self.x_stride)

    def x_nodes(self):
        return self.spec.axis()[::self.x_stride]

    def xi_nodes(self):
        return self.spec.freq_axis()[::self.xi_stride]

    def x_radius(self):
        axes = np.meshgrid(*([self.x_nodes()] * self.spec.d), indexing='ij')
        return np.sqrt(sum(a ** 2 for a in axes))

    def xi_radius(self):
        axes = np.meshgrid(*([self.xi_nodes()] * self.spec.d), indexing='ij')
        return np.sqrt(sum(a ** 2 for a in axes))

    def cells(self, unit_cells=False):
        if unit_cells:
            return 1.0, 1.0
        return self.a ** self.spec.d, self.b ** self.spec.d


def default_lattice(spec):
    return Lattice(spec, DEFAULT_X_STRIDE[spec.d], 1)


@dataclass(frozen=True, eq=False)
class StftCoefficients:
    """V_g f sampled on a lattice; axes are (x-node axes..., xi-node axes...)"""
    lattice: Lattice
    coeffs: np.ndarray
    window: Window


@dataclass(frozen=True)
class ModulationSpec:
    p: float
    q: float
    s: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, 'p', check_exponent(self.p))
        object.__setattr__(self, 'q', check_exponent(self.q))

    def with_weight(self, s):
        return ModulationSpec(self.p, self.q, s)


@dataclass(frozen=True)
class AmalgamSpec:
    """W(FL^q_s, L^p_gamma): local exponent q and weight s, global exponent p and weight gamma"""
    q: float
    s: float = 0.0
    p: float = 1.0
    gamma: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, 'q', check_exponent(self.q))
        object.__setattr__(self, 'p', check_exponent(self.p))

    def with_weight(self, s):
        return AmalgamSpec(self.q, s, self.p, self.gamma)


NormSpec = Union[ModulationSpec, AmalgamSpec]


@dataclass(frozen=True)
class RatioReport:
    lhs: float
    rhs: float
    ratio: float

    @classmethod
    def from_pair(cls, lhs, rhs):
        if rhs > 0:
            ratio = lhs / rhs
        else:
            ratio = 0.0 if lhs == 0 else INF
        return cls(float(lhs), float(rhs), float(ratio))


@dataclass(frozen=True)
class L3Report:
    lhs: float
    rhs: float
    ratio: float
    k: int


def _check_window(f, g, lat):
    if f.domain != SPATIAL:
        raise DomainMismatch("Time-frequency norms expect a spatial function")
    if g.spec != f.spec:
        raise GridMismatch(f"Window grid {g.spec} differs from function grid {f.spec}")
    lat = lat or default_lattice(f.spec)
    if lat.spec != f.spec:
        raise LatticeIncompatible(f"Lattice built for {lat.spec}, function lives on {f.spec}")
    return lat


def _local_spectra(f, window_values, lat):
    """F(f * T_x w) for every lattice x-node, subsampled at the lattice xi-nodes"""
    spec = f.spec
    half = spec.n // 2
    space_axes = tuple(range(spec.d))
    translates = np.stack([
        np.roll(window_values, tuple(j - half for j in node), axis=space_axes)
        for node in itertools.product(lat.x_indices(), repeat=spec.d)
    ])
    batch_axes = tuple(range(1, spec.d + 1))
    # one FFT over the batch of windowed copies
    spectra = centered_fft(translates * f.values[None, ...], batch_axes) * spec.dx ** spec.d
    # keep every xi_stride-th frequency
    spectra = spectra[(slice(None),) + (slice(None, None, lat.xi_stride),) * spec.d]
    return spectra.reshape(lat.x_counts + lat.xi_counts)


def stft(f, g, lat=None):
    """V_g f(x, xi) = F(f conj(T_x g))(xi) on the lattice"""
    lat = _check_window(f, g, lat)
    coeffs = _local_spectra(f, np.conj(g.g.values), lat)
    return StftCoefficients(lat, coeffs, g)


def modulation_norm(f, g, spec, lat=None, unit_cells=False):
    """Inner L^p over x-nodes, then <xi>^s weighted L^q over xi-nodes"""
    coefficients = stft(f, g, lat)
    lat = coefficients.lattice
    x_cell, xi_cell = lat.cells(unit_cells)
    x_axes = tuple(range(f.spec.d))
    inner = lp_reduce(np.abs(coefficients.coeffs), spec.p, x_cell, axes=x_axes)
    return float(lp_reduce(inner * Weight(spec.s)(lat.xi_radius()), spec.q, xi_cell))


def amalgam_norm(f, g, spec, lat=None, unit_cells=False):
    """Local FL^q_s norms of f T_x g, then <x>^gamma weighted L^p over x-nodes (outer exponent 1/p)"""
    if not g.compact:
        raise WindowNotCompactlySupported(f"Amalgam norms need a bump window, got {g.kind}")
    lat = _check_window(f, g, lat)
    spectra = _local_spectra(f, g.g.values, lat)
    x_cell, xi_cell = lat.cells(unit_cells)
    xi_axes = tuple(range(f.spec.d, 2 * f.spec.d))
    local = lp_reduce(np.abs(spectra) * Weight(spec.s)(lat.xi_radius()), spec.q, xi_cell, axes=xi_axes)
    return float(lp_reduce(local * Weight(spec.gamma)(lat.x_radius()), spec.p, x_cell))


def fl_norm(f, q, s=0.0):
    """||<.>^s f_hat||_q"""
    return weighted_lp_norm(forward_fourier(f), q, Weight(s))


def spec_norm(f, spec, window=None, lat=None):
    """Dispatch to the modulation or amalgam norm with the matching default window"""
    if isinstance(spec, ModulationSpec):
        return modulation_norm(f, window or default_window(f.spec), spec, lat)
    return amalgam_norm(f, window or default_window(f.spec, compact=True), spec, lat)


def product_exponent(n_factors, q):
    """r solving N/q = N - 1 + 1/r"""
    inverse = n_factors * reciprocal(q) - (n_factors - 1)
    if inverse < 0 or inverse > 1 + 1e-12:
        raise ExponentMismatch(f"No admissible r for N={n_factors}, q={q}")
    return INF if inverse == 0 else 1.0 / inverse


def check_product_numerology(n_factors, r, q):
    lhs = n_factors * reciprocal(q)
    rhs = n_factors - 1 + reciprocal(r)
    if abs(lhs - rhs) > 1e-12:
        raise ExponentMismatch(f"N/q = {lhs} but N - 1 + 1/r = {rhs} (N={n_factors}, q={q}, r={r})")


def check_product_estimate(us, p, r, q, s, g, space='modulation', gamma=0.0, lat=None):
    """||prod u_i|| in the (p, r, s[, gamma]) space against prod ||u_i|| in (Np, q, s[, gamma/N])"""
    n_factors = len(us)
    if n_factors < 1:
        raise ValueError("Product estimate needs at least one factor")
    p, q, r = check_exponent(p), check_exponent(q), check_exponent(r)
    check_product_numerology(n_factors, r, q)
    if s < 0 or gamma < 0:
        raise ValueError(f"Product estimates need s >= 0 and gamma >= 0, got s={s}, gamma={gamma}")
    factor_p = INF if p == INF else n_factors * p

    product = us[0]
    for u in us[1:]:
        product = product * u

    if space == 'modulation':
        lhs = modulation_norm(product, g, ModulationSpec(p, r, s), lat)
        factors = [modulation_norm(u, g, ModulationSpec(factor_p, q, s), lat) for u in us]
    elif space == 'amalgam':
        lhs = amalgam_norm(product, g, AmalgamSpec(r, s, p, gamma), lat)
        factors = [amalgam_norm(u, g, AmalgamSpec(q, s, factor_p, gamma / n_factors), lat) for u in us]
    else:
        raise ValueError(f"Unknown space: {space}")
    return RatioReport.from_pair(lhs, float(np.prod(factors)))


def check_embedding_condition(d, q, r):
    excess = d * reciprocal(check_exponent(q)) - d * reciprocal(check_exponent(r))
    if not excess < 1:
        raise EmbeddingConditionFailed(f"d/q - d/r = {excess} is not below 1")


def check_embedding(f, r, q, s, gamma, p, g, lat=None):
    """W(FL^q_{s-1}, L^p_gamma) norm against the W(FL^r_s, L^p_gamma) norm"""
    check_embedding_condition(f.spec.d, q, r)
    lhs = amalgam_norm(f, g, AmalgamSpec(q, s - 1, p, gamma), lat)
    rhs = amalgam_norm(f, g, AmalgamSpec(r, s, p, gamma), lat)
    return RatioReport.from_pair(lhs, rhs)


def convolution_check(kernel, f, g, q, s, p, gamma, lat=None):
    """W(FL^inf, L^1_|gamma|) * W(FL^q_s, L^p_gamma) into W(FL^q_s, L^p_gamma)"""
    target = AmalgamSpec(q, s, p, gamma)
    k_hat, f_hat = forward_fourier(kernel), forward_fourier(f)
    convolution = inverse_fourier(k_hat * f_hat)
    lhs = amalgam_norm(convolution, g, target, lat)
    rhs = amalgam_norm(kernel, g, AmalgamSpec(INF, 0.0, 1.0, abs(gamma)), lat) * amalgam_norm(f, g, target, lat)
    return RatioReport.from_pair(lhs, rhs)


def default_derivative_order(p, d):
    """Smallest k with k p > d/2"""
    return int(np.floor(d / (2.0 * p))) + 1 if p != INF else 1


def lemma_l3_bound(f, p, R, k=None, center=None, tol=1e-10):
    """||f||_{FL^p} against sup over |alpha| <= 2k of ||d^alpha f||_inf for f supported in B(y, R)"""
    p = check_exponent(p)
    spec = f.spec
    center = np.zeros(spec.d) if center is None else np.asarray(center, dtype=float)
    distance = np.sqrt(sum((x - c) ** 2 for x, c in zip(spec.coordinates(), center)))
    outside = float(np.sum(np.abs(f.values[distance > R])) * spec.cell_volume())
    if outside >= tol:
        raise SupportTooLarge(f"Mass {outside:.3e} lies outside the ball of radius {R}")
    k = default_derivative_order(p, spec.d) if k is None else int(k)

    lhs = fl_norm(f, p, 0.0)
    rhs = 0.0
    for alpha in itertools.product(range(2 * k + 1), repeat=spec.d):
        if sum(alpha) <= 2 * k:
            rhs = max(rhs, spectral_derivative(f, alpha).sup())
    ratio = lhs / rhs if rhs > 0 else 0.0
    logger.debug(f"FL^{p:g} derivative bound: lhs={lhs:.6e} rhs={rhs:.6e} k={k}")
    return L3Report(lhs, rhs, ratio, k)
