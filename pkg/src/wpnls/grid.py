"""Periodic sampling grids, complex fields and the symmetric-normalization Fourier transform.

Conventions used throughout the package:

* forward transform   f^(xi) = (2pi)^(-n/2) * integral f(x) exp(-i x.xi) dx
* spatial lattice     x_j = -L + j*dx,  j = 0..N-1,  dx = 2L/N
* frequency lattice   xi_k = k*pi/L,    k = -N/2..N/2-1  (centered ordering)
* quadrature          uniform (trapezoidal on a periodic domain): sum * dx^n
* inner product       (f, g) = integral f * conj(g) dx   (conjugate-linear in g)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, TextIO

import numpy as np

from .errors import DegenerateInputError, GridMismatchError, SizingError

__all__ = [
    "Grid",
    "Field",
    "SobolevParams",
    "make_grid",
    "fourier",
    "inverse_fourier",
    "inner_product",
    "l2_norm",
    "weighted_sobolev_norm",
    "field_from_function",
    "zeros_like",
    "write_field",
    "read_field",
]


@dataclass(frozen=True)
class Grid:
    """Uniform periodic lattice on [-L, L)^dim with its dual frequency lattice."""

    dim: int
    points_per_axis: int
    half_width: float

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.points_per_axis

    @property
    def nyquist(self) -> float:
        return np.pi / self.spacing

    @property
    def total_points(self) -> int:
        return self.points_per_axis**self.dim

    def axis_points(self) -> np.ndarray:
        """Spatial sample positions along one axis, ascending."""
        n = self.points_per_axis
        return -self.half_width + self.spacing * np.arange(n)

    def axis_freqs(self) -> np.ndarray:
        """Dual lattice k*pi/L along one axis, centered ordering."""
        n = self.points_per_axis
        return (np.pi / self.half_width) * (np.arange(n) - n // 2)

    def meshes(self) -> tuple[np.ndarray, ...]:
        x = self.axis_points()
        if self.dim == 1:
            return (x,)
        return np.meshgrid(x, x, indexing="ij")

    def freq_meshes(self) -> tuple[np.ndarray, ...]:
        xi = self.axis_freqs()
        if self.dim == 1:
            return (xi,)
        return np.meshgrid(xi, xi, indexing="ij")


@dataclass(frozen=True)
class SobolevParams:
    """Exponents (s, m) of the weighted space: <.>^m weight then H^s multiplier."""

    s: float
    m: float = 0.0


@dataclass
class Field:
    """Complex function sampled on a grid, or a symbolic Dirac delta.

    ``samples`` is None exactly when ``kind == "dirac"``; a delta carries only
    its center and is accepted only by operations with a documented closed form.
    """

    grid: Grid
    samples: np.ndarray | None
    kind: str = "sampled"  # "sampled" | "dirac"
    delta_center: np.ndarray = field(default_factory=lambda: np.zeros(1))
    space: str = "position"  # "position" | "frequency": which lattice indexes samples

    @property
    def measure(self) -> float:
        """Quadrature cell volume on the lattice the samples live on."""
        g = self.grid
        step = g.spacing if self.space == "position" else np.pi / g.half_width
        return float(step**g.dim)

    def __post_init__(self) -> None:
        if self.kind == "sampled":
            if self.samples is None:
                raise ValueError("sampled field requires samples")
            expected = (self.grid.points_per_axis,) * self.grid.dim
            if self.samples.shape != expected:
                raise GridMismatchError(
                    f"samples shape {self.samples.shape} != grid shape {expected}"
                )
            self.samples = np.asarray(self.samples, dtype=np.complex128)
        elif self.kind == "dirac":
            if self.samples is not None:
                raise ValueError("dirac field carries no samples")
            self.delta_center = np.atleast_1d(np.asarray(self.delta_center, dtype=float))
            if self.delta_center.shape != (self.grid.dim,):
                raise ValueError("delta center dimension mismatch")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @property
    def is_dirac(self) -> bool:
        return self.kind == "dirac"

    def require_sampled(self, what: str = "operation") -> np.ndarray:
        if self.is_dirac:
            raise ValueError(f"{what} requires a sampled field, got DiracDelta")
        assert self.samples is not None
        return self.samples


def make_grid(dim: int, points_per_axis: int, half_width: float) -> Grid:
    """Build a periodic grid; sizes must be powers of two >= 8."""
    if dim not in (1, 2):
        raise SizingError(f"dim must be 1 or 2, got {dim}")
    n = points_per_axis
    if n < 8 or (n & (n - 1)) != 0:
        raise SizingError(f"points_per_axis must be a power of two >= 8, got {n}")
    if not (half_width > 0 and np.isfinite(half_width)):
        raise SizingError(f"half_width must be positive, got {half_width}")
    return Grid(dim=dim, points_per_axis=n, half_width=float(half_width))


def field_from_function(grid: Grid, fn: Callable[..., np.ndarray]) -> Field:
    """Sample ``fn`` on the grid; ``fn`` receives one coordinate array per axis."""
    vals = np.asarray(fn(*grid.meshes()), dtype=np.complex128)
    vals = np.broadcast_to(vals, (grid.points_per_axis,) * grid.dim).copy()
    return Field(grid=grid, samples=vals)


def dirac_field(grid: Grid, center) -> Field:
    return Field(grid=grid, samples=None, kind="dirac", delta_center=np.atleast_1d(center))


def zeros_like(grid: Grid) -> Field:
    return Field(grid=grid, samples=np.zeros((grid.points_per_axis,) * grid.dim, complex))


def _centered_fft(samples: np.ndarray) -> np.ndarray:
    # samples indexed by ascending x; output indexed by ascending xi
    return np.fft.fftshift(np.fft.fftn(np.fft.ifftshift(samples)))


def _centered_ifft(samples: np.ndarray) -> np.ndarray:
    return np.fft.fftshift(np.fft.ifftn(np.fft.ifftshift(samples)))


def fourier(f: Field) -> Field:
    """Forward transform with the symmetric (2pi)^(-n/2) normalization."""
    samples = f.require_sampled("fourier")
    g = f.grid
    if f.space != "position":
        raise ValueError("fourier expects a position-space field")
    scale = (2.0 * np.pi) ** (-g.dim / 2) * g.spacing**g.dim
    return Field(grid=g, samples=scale * _centered_fft(samples), space="frequency")


def inverse_fourier(f: Field) -> Field:
    """Exact discrete inverse of :func:`fourier`."""
    samples = f.require_sampled("inverse_fourier")
    g = f.grid
    if f.space != "frequency":
        raise ValueError("inverse_fourier expects a frequency-space field")
    scale = (2.0 * np.pi) ** (g.dim / 2) / g.spacing**g.dim
    return Field(grid=g, samples=scale * _centered_ifft(samples))


def _check_same_grid(f: Field, g: Field) -> None:
    if f.grid != g.grid or f.space != g.space:
        raise GridMismatchError("fields live on different grids or spaces")


def inner_product(f: Field, g: Field) -> complex:
    """Quadrature of integral f * conj(g) dx."""
    _check_same_grid(f, g)
    a = f.require_sampled("inner_product")
    b = g.require_sampled("inner_product")
    return complex(np.sum(a * np.conj(b)) * f.measure)


def l2_norm(f: Field) -> float:
    a = f.require_sampled("l2_norm")
    return float(np.sqrt(np.sum(np.abs(a) ** 2) * f.measure))


def weighted_sobolev_norm(f: Field, params: SobolevParams) -> float:
    """|| <xi>^s F[<x>^m f] ||_L2 by spectral multiplier."""
    a = f.require_sampled("weighted_sobolev_norm")
    g = f.grid
    if not (np.isfinite(params.s) and np.isfinite(params.m)):
        raise ValueError("Sobolev exponents must be finite")
    r2 = sum(x**2 for x in g.meshes())
    weighted = Field(grid=g, samples=a * (1.0 + r2) ** (params.m / 2.0))
    spec = fourier(weighted).samples
    assert spec is not None
    k2 = sum(x**2 for x in g.freq_meshes())
    integrand = (1.0 + k2) ** params.s * np.abs(spec) ** 2
    dxi = np.pi / g.half_width
    return float(np.sqrt(np.sum(integrand) * dxi**g.dim))


# --- columnar text serialization -------------------------------------------

def write_field(f: Field, fh: TextIO) -> None:
    """Columnar text format: header lines then `x re im` (or `x y re im`) rows."""
    g = f.grid
    if f.is_dirac:
        raise ValueError("DiracDelta fields are symbolic and are not serialized")
    samples = f.require_sampled("write_field")
    fh.write(f"# dim {g.dim}\n")
    fh.write(f"# points {g.points_per_axis}\n")
    fh.write(f"# half_width {float(g.half_width)!r}\n")
    if g.dim == 1:
        for x, v in zip(g.axis_points(), samples):
            fh.write(f"{float(x)!r} {float(v.real)!r} {float(v.imag)!r}\n")
    else:
        xs = g.axis_points()
        for i, x in enumerate(xs):
            for j, y in enumerate(xs):
                v = samples[i, j]
                fh.write(f"{float(x)!r} {float(y)!r} {float(v.real)!r} {float(v.imag)!r}\n")


def read_field(fh: TextIO) -> Field:
    header: dict[str, str] = {}
    rows: list[list[float]] = []
    for line in fh:
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) >= 2:
                header[parts[0]] = parts[1]
            continue
        rows.append([float(tok) for tok in line.split()])
    try:
        dim = int(header["dim"])
        n = int(header["points"])
        half_width = float(header["half_width"])
    except KeyError as exc:
        raise ValueError(f"missing header line in field file: {exc}") from exc
    grid = make_grid(dim, n, half_width)
    data = np.asarray(rows)
    if data.shape[0] != grid.total_points:
        raise ValueError(f"expected {grid.total_points} rows, got {data.shape[0]}")
    vals = data[:, dim] + 1j * data[:, dim + 1]
    return Field(grid=grid, samples=vals.reshape((n,) * dim))


def require_nonzero(f: Field, what: str = "input") -> None:
    if l2_norm(f) < 1e-300:
        raise DegenerateInputError(f"{what} has zero L2 norm")
