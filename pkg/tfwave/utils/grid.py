"""Uniform periodic grids, the Fourier transform contract and weighted Lebesgue norms"""
from __future__ import annotations

import json
import logging
import struct
from dataclasses import dataclass

import numpy as np
from scipy import fft as sfft

from .constants import (
    DEFAULT_GRIDS, FREQUENCY, GRID_FORMAT_VERSION, GRID_HEADER_FORMAT, GRID_MAGIC,
    INF, MIN_SAMPLES, SPATIAL, SUPPORTED_DIMENSIONS
)
from .errors import DomainMismatch, GridMismatch, UnsupportedExponent

logger = logging.getLogger(__name__)

Exponent = float


@dataclass(frozen=True)
class GridSpec:
    """Periodic box [-l/2, l/2)^d sampled with n points per axis"""
    d: int
    n: int
    l: float

    def __post_init__(self):
        if self.d not in SUPPORTED_DIMENSIONS:
            raise ValueError(f"Unsupported dimension d={self.d}")
        if self.n < MIN_SAMPLES or self.n % 2:
            raise ValueError(f"Samples per axis must be even and >= {MIN_SAMPLES}, got {self.n}")
        if not self.l > 0:
            raise ValueError(f"Box length must be positive, got {self.l}")

    @classmethod
    def default(cls, d=1):
        params = DEFAULT_GRIDS[d]
        return cls(d, params['n'], params['l'])

    @property
    def dx(self):
        return self.l / self.n

    @property
    def dxi(self):
        return 1.0 / self.l

    @property
    def shape(self):
        return (self.n,) * self.d

    @property
    def band(self):
        """Largest |xi_k| along an axis"""
        return self.n / (2 * self.l)

    def axis(self):
        return -self.l / 2 + np.arange(self.n) * self.dx

    def freq_axis(self):
        return (np.arange(self.n) - self.n // 2) / self.l

    def coordinates(self):
        return tuple(np.meshgrid(*([self.axis()] * self.d), indexing='ij'))

    def frequencies(self):
        return tuple(np.meshgrid(*([self.freq_axis()] * self.d), indexing='ij'))

    def radius(self, domain=SPATIAL):
        """|x| on the spatial grid or |xi| on the frequency grid"""
        axes = self.coordinates() if domain == SPATIAL else self.frequencies()
        return np.sqrt(sum(a ** 2 for a in axes))

    def cell_volume(self, domain=SPATIAL):
        step = self.dx if domain == SPATIAL else self.dxi
        return step ** self.d

    def refine(self):
        """Same box, twice the samples"""
        return GridSpec(self.d, 2 * self.n, self.l)

    def enlarge(self):
        """Twice the box at the same cell width"""
        return GridSpec(self.d, 2 * self.n, 2 * self.l)


@dataclass(frozen=True)
class Weight:
    """Polynomial weight <x>^s = (1 + |x|^2)^(s/2)"""
    s: float = 0.0

    def __call__(self, r):
        return (1.0 + np.asarray(r, dtype=float) ** 2) ** (self.s / 2.0)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Complex samples on a GridSpec, tagged spatial or frequency"""
    spec: GridSpec
    values: np.ndarray
    domain: str = SPATIAL

    def __post_init__(self):
        values = np.array(self.values, dtype=np.complex128)
        if values.shape != self.spec.shape:
            raise GridMismatch(f"Expected samples of shape {self.spec.shape}, got {values.shape}")
        if self.domain not in (SPATIAL, FREQUENCY):
            raise ValueError(f"Unknown domain tag: {self.domain}")
        object.__setattr__(self, 'values', values)

    @classmethod
    def zeros(cls, spec, domain=SPATIAL):
        return cls(spec, np.zeros(spec.shape, dtype=np.complex128), domain)

    @classmethod
    def from_callable(cls, spec, fn, domain=SPATIAL):
        """Sample fn(x_1, ..., x_d) on the spatial or frequency grid"""
        axes = spec.coordinates() if domain == SPATIAL else spec.frequencies()
        values = np.broadcast_to(fn(*axes), spec.shape)
        return cls(spec, values, domain)

    def with_values(self, values):
        return GridFunction(self.spec, values, self.domain)

    def sup(self):
        return float(np.max(np.abs(self.values)))

    def conj(self):
        return self.with_values(np.conj(self.values))

    def abs_power(self, k):
        """|u|^(2k) u"""
        return self.with_values(np.abs(self.values) ** (2 * k) * self.values)

    def __add__(self, other):
        check_compatible(self, other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other):
        check_compatible(self, other)
        return self.with_values(self.values - other.values)

    def __mul__(self, other):
        if isinstance(other, GridFunction):
            check_compatible(self, other)
            return self.with_values(self.values * other.values)
        return self.with_values(self.values * other)

    __rmul__ = __mul__

    def __neg__(self):
        return self.with_values(-self.values)


def check_compatible(*functions):
    """Raise unless every function shares the first one's grid and domain"""
    first = functions[0]
    for other in functions[1:]:
        if other.spec != first.spec:
            raise GridMismatch(f"Grid mismatch: {first.spec} vs {other.spec}")
        if other.domain != first.domain:
            raise DomainMismatch(f"Domain mismatch: {first.domain} vs {other.domain}")


def check_exponent(p):
    """Accept exponents in [1, inf]; reject the quasi-Banach range"""
    p = float(p)
    if np.isnan(p) or p <= 0:
        raise ValueError(f"Exponent must be positive, got {p}")
    if p < 1:
        raise UnsupportedExponent(f"Exponent {p} lies in the quasi-Banach range 0 < p < 1")
    return p


def reciprocal(p):
    return 0.0 if p == INF else 1.0 / p


def lp_reduce(magnitudes, p, cell, axes=None):
    """Riemann-sum L^p norm of nonnegative samples over the given axes"""
    if p == INF:
        return np.max(magnitudes, axis=axes)
    return (np.sum(magnitudes ** p, axis=axes) * cell) ** (1.0 / p)


def centered_fft(values, axes):
    return sfft.fftshift(sfft.fftn(sfft.ifftshift(values, axes=axes), axes=axes), axes=axes)


def centered_ifft(values, axes):
    return sfft.fftshift(sfft.ifftn(sfft.ifftshift(values, axes=axes), axes=axes), axes=axes)


def forward_fourier(f):
    """f_hat(xi) = integral of exp(-2 pi i x xi) f(x) dx as a scaled DFT"""
    if f.domain != SPATIAL:
        raise DomainMismatch("forward_fourier expects a spatial function")
    axes = tuple(range(f.spec.d))
    # Riemann sum of the continuous transform
    values = centered_fft(f.values, axes) * f.spec.dx ** f.spec.d
    return GridFunction(f.spec, values, FREQUENCY)


def inverse_fourier(f_hat):
    if f_hat.domain != FREQUENCY:
        raise DomainMismatch("inverse_fourier expects a frequency function")
    axes = tuple(range(f_hat.spec.d))
    values = centered_ifft(f_hat.values, axes) / f_hat.spec.dx ** f_hat.spec.d
    return GridFunction(f_hat.spec, values, SPATIAL)


def weighted_lp_norm(f, p, w=0.0):
    """(sum |<x>^s f|^p cell)^(1/p); the weight variable is x or xi by domain"""
    p = check_exponent(p)
    weight = w if isinstance(w, Weight) else Weight(float(w))
    weighted = np.abs(f.values) * weight(f.spec.radius(f.domain))
    return float(lp_reduce(weighted, p, f.spec.cell_volume(f.domain)))


def pointwise(op, *args):
    """Elementwise algebra: add, mul, scale, conj, abs_power"""
    if op == 'add':
        result = args[0]
        for other in args[1:]:
            result = result + other
        return result
    if op == 'mul':
        result = args[0]
        for other in args[1:]:
            result = result * other
        return result
    if op == 'scale':
        f, c = args
        return f * complex(c)
    if op == 'conj':
        return args[0].conj()
    if op == 'abs_power':
        u, k = args
        return u.abs_power(int(k))
    raise ValueError(f"Unknown pointwise operation: {op}")


def spectral_derivative(f, alpha):
    """Multi-index derivative via multiplication by (2 pi i xi)^alpha"""
    if len(alpha) != f.spec.d:
        raise ValueError(f"Multi-index {tuple(alpha)} does not match d={f.spec.d}")
    f_hat = forward_fourier(f)
    factor = np.ones(f.spec.shape, dtype=np.complex128)
    for xi, order in zip(f.spec.frequencies(), alpha):
        factor = factor * (2j * np.pi * xi) ** order
    return inverse_fourier(f_hat.with_values(f_hat.values * factor))


def laplacian(f):
    f_hat = forward_fourier(f)
    symbol = -(2 * np.pi * f.spec.radius(FREQUENCY)) ** 2
    return inverse_fourier(f_hat.with_values(f_hat.values * symbol))


def write_binary(f, path):
    """Little-endian header (magic, version, d, n, l) then complex128 samples row-major"""
    header = struct.pack(GRID_HEADER_FORMAT, GRID_MAGIC, GRID_FORMAT_VERSION,
                         f.spec.d, f.spec.n, float(f.spec.l))
    with open(path, 'wb') as handle:
        handle.write(header)
        handle.write(np.ascontiguousarray(f.values, dtype='<c16').tobytes(order='C'))
    logger.debug(f"Wrote grid function {f.spec} to {path}")


def read_binary(path, domain=SPATIAL):
    header_size = struct.calcsize(GRID_HEADER_FORMAT)
    with open(path, 'rb') as handle:
        raw = handle.read()
    magic, version, d, n, l = struct.unpack(GRID_HEADER_FORMAT, raw[:header_size])
    if magic != GRID_MAGIC:
        raise ValueError(f"Not a grid function file: {path}")
    if version != GRID_FORMAT_VERSION:
        raise ValueError(f"Unsupported grid function version {version} in {path}")
    spec = GridSpec(d, n, l)
    values = np.frombuffer(raw[header_size:], dtype='<c16')
    if values.size != n ** d:
        raise ValueError(f"Truncated grid function file: {path}")
    return GridFunction(spec, values.reshape(spec.shape), domain)


def to_json(f):
    pairs = np.stack([f.values.real, f.values.imag], axis=-1)
    return json.dumps({
        'd': f.spec.d,
        'n': f.spec.n,
        'l': f.spec.l,
        'domain': f.domain,
        'values': pairs.tolist(),
    })


def from_json(text):
    data = json.loads(text)
    spec = GridSpec(int(data['d']), int(data['n']), float(data['l']))
    pairs = np.asarray(data['values'], dtype=float)
    return GridFunction(spec, pairs[..., 0] + 1j * pairs[..., 1], data.get('domain', SPATIAL))
