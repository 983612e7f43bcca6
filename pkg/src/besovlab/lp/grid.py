"""Periodic Fourier grids and real-valued grid functions.

Fields are stored either as samples on the uniform grid of ``[0, L)^dim`` or
as their half-spectrum (``numpy.fft.rfftn`` layout); the other representation
is computed on demand and cached.  All derivative operators act in Fourier
space, and pointwise products are truncated with the 2/3 rule unless asked
otherwise.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid with ``n`` points per axis on ``[0, period)^dim``."""

    dim: int
    n: int
    period: float = 2 * math.pi

    def __post_init__(self) -> None:
        if self.dim not in (1, 2, 3):
            raise ValueError(f"dim must be 1, 2 or 3, got {self.dim}")
        if self.n < 8 or self.n & (self.n - 1):
            raise ValueError(f"points_per_axis must be a power of two >= 8, got {self.n}")
        if not self.period > 0:
            raise ValueError(f"period must be positive, got {self.period}")

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.dim

    @property
    def spectral_shape(self) -> tuple[int, ...]:
        return (self.n,) * (self.dim - 1) + (self.n // 2 + 1,)

    @property
    def spacing(self) -> float:
        return self.period / self.n

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    @property
    def volume(self) -> float:
        return self.period**self.dim

    @property
    def k0(self) -> float:
        """Lattice spacing of the wavenumbers, 2*pi/L."""
        return 2 * math.pi / self.period

    @property
    def k_max(self) -> float:
        """Nyquist wavenumber along one axis."""
        return math.pi * self.n / self.period

    @cached_property
    def points(self) -> tuple[np.ndarray, ...]:
        x = np.arange(self.n) * self.spacing
        return tuple(np.meshgrid(*([x] * self.dim), indexing="ij"))

    @cached_property
    def mode_numbers(self) -> tuple[np.ndarray, ...]:
        """Integer mode numbers per axis, broadcast to the half-spectrum shape."""
        full = np.fft.fftfreq(self.n, 1.0 / self.n)
        half = np.fft.rfftfreq(self.n, 1.0 / self.n)
        axes = [full] * (self.dim - 1) + [half]
        return tuple(np.meshgrid(*axes, indexing="ij"))

    @cached_property
    def wavenumbers(self) -> tuple[np.ndarray, ...]:
        return tuple(self.k0 * nk for nk in self.mode_numbers)

    @cached_property
    def kmag(self) -> np.ndarray:
        return np.sqrt(sum(k**2 for k in self.wavenumbers))

    @cached_property
    def derivative_symbols(self) -> tuple[np.ndarray, ...]:
        """``i k_j`` with the Nyquist mode of each axis zeroed (odd derivative)."""
        out = []
        for k, nk in zip(self.wavenumbers, self.mode_numbers):
            out.append(np.where(np.abs(nk) == self.n // 2, 0.0, 1j * k))
        return tuple(out)

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        """Per-axis 2/3 rule: keep modes with ``|n_j| < N/3``."""
        keep = np.ones(self.spectral_shape, dtype=bool)
        for nk in self.mode_numbers:
            keep &= np.abs(nk) < self.n / 3
        return keep

    @cached_property
    def parseval_weights(self) -> np.ndarray:
        """Multiplicity of each half-spectrum entry in the full spectrum."""
        w = np.full(self.spectral_shape, 2.0)
        w[..., 0] = 1.0
        w[..., -1] = 1.0
        return w


def make_grid(dim: int, points_per_axis: int, period: float = 2 * math.pi) -> Grid:
    return Grid(dim, points_per_axis, float(period))


class Field:
    """Real periodic function sampled on a :class:`Grid`."""

    __slots__ = ("grid", "_values", "_spectrum")

    def __init__(self, grid: Grid, values=None, spectrum=None):
        if (values is None) == (spectrum is None):
            raise ValueError("give exactly one of values or spectrum")
        self.grid = grid
        self._values = None
        self._spectrum = None
        if values is not None:
            values = np.asarray(values, dtype=float)
            if values.shape != grid.shape:
                values = np.broadcast_to(values, grid.shape).copy()
            self._values = values
        else:
            spectrum = np.asarray(spectrum, dtype=complex)
            if spectrum.shape != grid.spectral_shape:
                raise ValueError(f"spectrum shape {spectrum.shape} != {grid.spectral_shape}")
            self._spectrum = spectrum

    @classmethod
    def zeros(cls, grid: Grid) -> Field:
        return cls(grid, values=np.zeros(grid.shape))

    @classmethod
    def constant(cls, grid: Grid, c: float) -> Field:
        return cls(grid, values=np.full(grid.shape, float(c)))

    @property
    def values(self) -> np.ndarray:
        if self._values is None:
            self._values = np.fft.irfftn(self._spectrum, s=self.grid.shape,
                                          axes=tuple(range(self.grid.dim)))
        return self._values

    @property
    def spectrum(self) -> np.ndarray:
        if self._spectrum is None:
            self._spectrum = np.fft.rfftn(self._values)
        return self._spectrum

    def with_spectrum(self, spectrum: np.ndarray) -> Field:
        return Field(self.grid, spectrum=spectrum)

    def filtered(self, multiplier: np.ndarray) -> Field:
        return Field(self.grid, spectrum=multiplier * self.spectrum)

    def mean(self) -> float:
        return float(self.spectrum.flat[0].real) / self.values.size

    def sup(self) -> float:
        return float(np.max(np.abs(self.values)))

    def resample(self, grid: Grid) -> Field:
        """Spectral interpolation onto another grid of the same dim and period."""
        if grid.dim != self.grid.dim or grid.period != self.grid.period:
            raise ValueError("resample needs matching dim and period")
        src = self.grid.mode_numbers
        dst = np.zeros(grid.spectral_shape, dtype=complex)
        keep = np.ones(self.grid.spectral_shape, dtype=bool)
        for nk in src:
            keep &= np.abs(nk) < min(self.grid.n, grid.n) / 2
        idx = tuple(np.mod(nk[keep], grid.n).astype(int) for nk in src)
        scale = (grid.n / self.grid.n) ** grid.dim
        dst[idx] = self.spectrum[keep] * scale
        return Field(grid, spectrum=dst)

    def _check(self, other: Field) -> None:
        if other.grid != self.grid:
            raise ValueError("fields live on different grids")

    def __add__(self, other):
        if isinstance(other, Field):
            self._check(other)
            if self._spectrum is not None and other._spectrum is not None:
                return Field(self.grid, spectrum=self._spectrum + other._spectrum)
            return Field(self.grid, values=self.values + other.values)
        return Field(self.grid, values=self.values + other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Field):
            self._check(other)
            if self._spectrum is not None and other._spectrum is not None:
                return Field(self.grid, spectrum=self._spectrum - other._spectrum)
            return Field(self.grid, values=self.values - other.values)
        return Field(self.grid, values=self.values - other)

    def __rsub__(self, other):
        return Field(self.grid, values=other - self.values)

    def __neg__(self):
        if self._spectrum is not None:
            return Field(self.grid, spectrum=-self._spectrum)
        return Field(self.grid, values=-self._values)

    def __mul__(self, c):
        if isinstance(c, Field):
            raise TypeError("use multiply() for products of fields")
        if self._spectrum is not None:
            return Field(self.grid, spectrum=c * self._spectrum)
        return Field(self.grid, values=c * self._values)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1.0 / c)

    def __repr__(self) -> str:
        return f"Field(dim={self.grid.dim}, n={self.grid.n}, sup={self.sup():.3e})"


class VectorField:
    """``dim`` scalar :class:`Field` components on one grid."""

    __slots__ = ("components",)

    def __init__(self, components: Sequence[Field]):
        components = tuple(components)
        if not components:
            raise ValueError("empty vector field")
        g = components[0].grid
        if any(c.grid != g for c in components):
            raise ValueError("components must share one grid")
        self.components = components

    @classmethod
    def zeros(cls, grid: Grid) -> VectorField:
        return cls([Field.zeros(grid) for _ in range(grid.dim)])

    @property
    def grid(self) -> Grid:
        return self.components[0].grid

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self) -> Iterator[Field]:
        return iter(self.components)

    def __getitem__(self, i: int) -> Field:
        return self.components[i]

    def map(self, fn) -> VectorField:
        return VectorField([fn(c) for c in self.components])

    def magnitude(self) -> np.ndarray:
        return np.sqrt(sum(c.values**2 for c in self.components))

    def sup(self) -> float:
        return float(np.max(self.magnitude()))

    def resample(self, grid: Grid) -> VectorField:
        return self.map(lambda c: c.resample(grid))

    def __add__(self, other: VectorField) -> VectorField:
        return VectorField([a + b for a, b in zip(self, other)])

    def __sub__(self, other: VectorField) -> VectorField:
        return VectorField([a - b for a, b in zip(self, other)])

    def __neg__(self) -> VectorField:
        return self.map(lambda c: -c)

    def __mul__(self, c) -> VectorField:
        return self.map(lambda f: f * c)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"VectorField(dim={self.grid.dim}, n={self.grid.n}, sup={self.sup():.3e})"


AnyField = Field | VectorField


def dealias(f: Field) -> Field:
    return f.filtered(f.grid.dealias_mask)


def multiply(f: Field, g: Field, dealiased: bool = True) -> Field:
    """Pointwise product, 2/3-truncated afterwards when ``dealiased``."""
    f._check(g)
    out = Field(f.grid, values=f.values * g.values)
    return dealias(out) if dealiased else out


def dot(u: VectorField, v: VectorField, dealiased: bool = True) -> Field:
    grid = u.grid
    prod = Field(grid, values=sum(a.values * b.values for a, b in zip(u, v)))
    return dealias(prod) if dealiased else prod


def scale_by(f: Field, u: VectorField, dealiased: bool = True) -> VectorField:
    """Componentwise ``f * u``."""
    return u.map(lambda c: multiply(f, c, dealiased))


def partial(f: Field, axis: int) -> Field:
    return f.filtered(f.grid.derivative_symbols[axis])


def spectral_gradient(f: Field) -> VectorField:
    return VectorField([partial(f, j) for j in range(f.grid.dim)])


def divergence(u: VectorField) -> Field:
    grid = u.grid
    spec = sum(s * c.spectrum for s, c in zip(grid.derivative_symbols, u))
    return Field(grid, spectrum=spec)


def curl(u: VectorField) -> Field | VectorField:
    """Spectral curl: a scalar in 2-D, a vector in 3-D."""
    grid = u.grid
    if grid.dim == 2:
        return partial(u[1], 0) - partial(u[0], 1)
    if grid.dim == 3:
        return VectorField([
            partial(u[2], 1) - partial(u[1], 2),
            partial(u[0], 2) - partial(u[2], 0),
            partial(u[1], 0) - partial(u[0], 1),
        ])
    raise ValueError("curl is defined for dim 2 or 3 only")


def advect(u: VectorField, g: Field, dealiased: bool = True) -> Field:
    """``u . grad g``."""
    return dot(u, spectral_gradient(g), dealiased)


def gradient_tensor(u: VectorField) -> VectorField:
    """All first derivatives ``d_j u_i`` flattened into one vector field."""
    return VectorField([partial(c, j) for c in u for j in range(u.grid.dim)])


def lp_norm(f: AnyField, p: float) -> float:
    """Grid-quadrature L^p norm; vectors use the pointwise Euclidean magnitude."""
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    a = np.abs(f.values) if isinstance(f, Field) else f.magnitude()
    if math.isinf(p):
        return float(a.max())
    grid = f.grid
    if p == 2:
        return float(math.sqrt(np.sum(a * a) * grid.cell_volume))
    peak = a.max()
    if peak == 0:
        return 0.0
    # factor out the peak to keep large p finite
    return float(peak * (np.sum((a / peak) ** p) * grid.cell_volume) ** (1.0 / p))


def l2_from_spectrum(spectrum: np.ndarray, grid: Grid) -> float:
    """L^2 norm through Parseval; equal to the grid quadrature of |f|^2."""
    total = np.sum(grid.parseval_weights * np.abs(spectrum) ** 2)
    return float(math.sqrt(total * grid.volume) / grid.n**grid.dim)


# -- raw field dumps ---------------------------------------------------------

def write_field(path: str | Path, f: Field) -> None:
    """JSON header line, then the samples as little-endian float64 (C order)."""
    header = {"dim": f.grid.dim, "points_per_axis": f.grid.n, "period": f.grid.period}
    with open(path, "wb") as fh:
        fh.write((json.dumps(header) + "\n").encode())
        fh.write(np.ascontiguousarray(f.values, dtype="<f8").tobytes())


def read_field(path: str | Path) -> Field:
    with open(path, "rb") as fh:
        header = json.loads(fh.readline().decode())
        payload = fh.read()
    grid = make_grid(int(header["dim"]), int(header["points_per_axis"]), float(header["period"]))
    data = np.frombuffer(payload, dtype="<f8")
    if data.size != grid.n**grid.dim:
        raise ValueError(f"{path}: expected {grid.n ** grid.dim} samples, found {data.size}")
    return Field(grid, values=data.reshape(grid.shape).astype(float))
