"""Discrete wave packet transform, adjoint/inversion and related inequality checks.

The transform follows  W_phi f(x, xi) = integral conj(phi(y - x)) f(y) exp(-i y xi) dy
with no 2pi prefactor; every 2pi factor lives in the adjoint, the inversion
formula and the Plancherel identity:

    adjoint      W*_phi[F](x) = (2pi)^-n  iint phi(x - y) F(y, xi) e^(i x xi) dy dxi
    inversion    f = (2pi)^-n (psi, phi)^-1 W*_psi[W_phi f]
    Plancherel   ||W_phi f||_L2(R^2n) = (2pi)^(n/2) ||phi|| ||f||

Windows are passed either as sampled Fields (lattice positions only) or as
callables of the offset y - x (usable at arbitrary positions, e.g. the closed
form Gaussians from :mod:`wpnls.windows`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, TextIO, Union

import numpy as np

from .errors import (
    DegenerateInputError,
    FrequencyRangeError,
    GridMismatchError,
)
from .grid import Field, Grid, inner_product, l2_norm
from .windows import WindowSpec, window_values

__all__ = [
    "WPTSlice",
    "wpt",
    "wpt_full",
    "adjoint_wpt",
    "plancherel_ratio",
    "WindowChangeReport",
    "window_change_bound_check",
    "ConjugationReport",
    "conjugation_identity_check",
    "write_slice_csv",
    "write_slice_matrix",
]

WindowLike = Union[Field, Callable[[np.ndarray], np.ndarray], WindowSpec]


@dataclass
class WPTSlice:
    """Sampled W_phi f values over x_samples x xi_samples at one dilation."""

    x_samples: np.ndarray
    xi_samples: np.ndarray
    values: np.ndarray
    window: str = "custom"
    lam: float = 1.0

    def __post_init__(self) -> None:
        self.x_samples = np.atleast_1d(np.asarray(self.x_samples, dtype=float))
        self.xi_samples = np.atleast_1d(np.asarray(self.xi_samples, dtype=float))
        if self.values.shape != (self.x_samples.size, self.xi_samples.size):
            raise ValueError(
                f"values shape {self.values.shape} != "
                f"({self.x_samples.size}, {self.xi_samples.size})"
            )


def _window_offsets(window: WindowLike, offsets: np.ndarray, grid: Grid) -> np.ndarray:
    """Window values at the given y - x offsets."""
    if isinstance(window, WindowSpec):
        return window_values(window, offsets)
    if isinstance(window, Field):
        samples = window.require_sampled("window")
        if window.grid != grid:
            raise GridMismatchError("window field lives on a different grid")
        n = grid.points_per_axis
        idx = np.rint(offsets / grid.spacing).astype(int)
        if not np.allclose(idx * grid.spacing, offsets, atol=1e-9 * grid.spacing):
            raise ValueError(
                "sampled windows support lattice offsets only; "
                "pass a callable window for off-lattice positions"
            )
        return samples[(idx + n // 2) % n]
    return np.asarray(window(offsets), dtype=np.complex128)


def _check_nyquist(xi: np.ndarray, grid: Grid) -> None:
    if np.max(np.abs(xi)) > grid.nyquist * (1 + 1e-12):
        raise FrequencyRangeError(
            f"requested frequency {np.max(np.abs(xi)):.4g} beyond Nyquist {grid.nyquist:.4g}"
        )


def wpt(
    f: Field,
    window: WindowLike,
    x_set: np.ndarray,
    xi_set: np.ndarray,
    label: str = "custom",
    lam: float = 1.0,
) -> WPTSlice:
    """Exact windowed quadrature sum at arbitrary positions and frequencies.

    Frequencies need not lie on the dual lattice: the discrete sum
    dx * sum_y conj(phi(y - x)) f(y) exp(-i y xi) is evaluated as stated,
    which is what the criterion integrals at xi = lam * xi0 require.
    """
    grid = f.grid
    if grid.dim != 1:
        raise NotImplementedError("wave packet transform is implemented for dim 1")
    x_set = np.atleast_1d(np.asarray(x_set, dtype=float))
    xi_set = np.atleast_1d(np.asarray(xi_set, dtype=float))
    _check_nyquist(xi_set, grid)
    if f.is_dirac:
        y0 = float(f.delta_center[0])
        w = _window_offsets(window, y0 - x_set, grid)
        values = np.conj(w)[:, None] * np.exp(-1j * y0 * xi_set)[None, :]
        return WPTSlice(x_set, xi_set, values, window=label, lam=lam)
    samples = f.require_sampled("wpt")
    y = grid.axis_points()
    wmat = np.conj(_window_offsets(window, y[None, :] - x_set[:, None], grid))
    phase = np.exp(-1j * y[:, None] * xi_set[None, :])
    values = grid.spacing * (wmat * samples[None, :]) @ phase
    return WPTSlice(x_set, xi_set, values, window=label, lam=lam)


def _window_samples(window: WindowLike, grid: Grid) -> np.ndarray:
    if isinstance(window, Field):
        if window.grid != grid:
            raise GridMismatchError("window field lives on a different grid")
        return window.require_sampled("window")
    if isinstance(window, WindowSpec):
        return window_values(window, grid.axis_points())
    return np.asarray(window(grid.axis_points()), dtype=np.complex128)


def wpt_full(f: Field, window: WindowLike) -> np.ndarray:
    """W_phi f on the full x-lattice x dual-lattice product, via per-x FFT.

    Returns an (N, N) array indexed (ascending x, ascending xi).
    """
    grid = f.grid
    if grid.dim != 1:
        raise NotImplementedError("wpt_full is implemented for dim 1")
    samples = f.require_sampled("wpt_full")
    w = _window_samples(window, grid)
    n = grid.points_per_axis
    j = np.arange(n)
    shift = j[:, None] - n // 2  # x_i = (i - N/2) dx
    g = np.conj(w[(j[None, :] - shift) % n]) * samples[None, :]
    return grid.spacing * np.fft.fftshift(
        np.fft.fft(np.fft.ifftshift(g, axes=1), axis=1), axes=1
    )


def adjoint_wpt(slc: WPTSlice, window: WindowLike, grid: Grid) -> Field:
    """Adjoint (2pi)^-n iint window(x - y) F(y, xi) e^(i x xi) dy dxi by quadrature.

    Requires F sampled on the full (x, xi) product lattice of ``grid``.
    """
    if grid.dim != 1:
        raise NotImplementedError("adjoint_wpt is implemented for dim 1")
    n = grid.points_per_axis
    if not (
        slc.x_samples.size == n
        and slc.xi_samples.size == n
        and np.allclose(slc.x_samples, grid.axis_points())
        and np.allclose(slc.xi_samples, grid.axis_freqs())
    ):
        raise ValueError("adjoint needs a slice on the full phase-space lattice")
    w = _window_samples(window, grid)
    # B[y, i] = sum_k F[y, k] exp(i x_i xi_k)
    b = n * np.fft.fftshift(
        np.fft.ifft(np.fft.ifftshift(slc.values, axes=1), axis=1), axes=1
    )
    j = np.arange(n)
    wmat = w[(j[:, None] - j[None, :] + n // 2) % n]  # wmat[i, y] = window(x_i - y)
    dxi = np.pi / grid.half_width
    vals = np.einsum("iy,yi->i", wmat, b) * grid.spacing * dxi / (2.0 * np.pi)
    return Field(grid=grid, samples=vals)


def invert_wpt(slc: WPTSlice, synthesis: WindowLike, analysis: WindowLike, grid: Grid) -> Field:
    """Two-window inversion: scale the adjoint by (2pi)^n-absorbed 1/(psi, phi)."""
    syn = Field(grid=grid, samples=_window_samples(synthesis, grid))
    ana = Field(grid=grid, samples=_window_samples(analysis, grid))
    pairing = inner_product(syn, ana)
    if abs(pairing) < 1e-12:
        raise DegenerateInputError("window pairing (psi, phi) is numerically zero")
    rec = adjoint_wpt(slc, synthesis, grid)
    rec.samples = rec.samples / pairing
    return rec


def plancherel_ratio(f: Field, window: WindowLike) -> float:
    """||W_phi f||_L2(R^2) / ((2pi)^(1/2) ||phi|| ||f||); contract: within 1e-6 of 1."""
    grid = f.grid
    wfield = Field(grid=grid, samples=_window_samples(window, grid))
    nf, nw = l2_norm(f), l2_norm(wfield)
    if nf < 1e-300 or nw < 1e-300:
        raise DegenerateInputError("Plancherel ratio undefined for zero input")
    values = wpt_full(f, window)
    dxi = np.pi / grid.half_width
    total = np.sqrt(np.sum(np.abs(values) ** 2) * grid.spacing * dxi)
    return float(total / ((2.0 * np.pi) ** 0.5 * nw * nf))


def _periodic_conv2(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Periodic convolution of two centered-lattice arrays, index aligned with a."""
    return np.real(
        np.fft.ifft2(np.fft.fft2(a) * np.fft.fft2(np.fft.ifftshift(b)))
    )


@dataclass
class WindowChangeReport:
    """Pointwise check of |W_a f| <= (2pi)^-n |(a, nb)|^-1 (|W_a a| * |W_nb f|)."""

    max_violation: float
    max_lhs: float
    pairing_abs: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_violation <= self.tolerance


def window_change_bound_check(
    f: Field, a: Field, nb: Field, tolerance: float = 1e-6
) -> WindowChangeReport:
    """Verify the window-change convolution bound on the full product lattice."""
    pairing = inner_product(a, nb)
    if abs(pairing) < 1e-12:
        raise DegenerateInputError("pairing (a, nb) below 1e-12")
    grid = f.grid
    lhs = np.abs(wpt_full(f, a))
    waa = np.abs(wpt_full(a, a))
    wnbf = np.abs(wpt_full(f, nb))
    dxi = np.pi / grid.half_width
    conv = _periodic_conv2(wnbf, waa) * grid.spacing * dxi
    rhs = conv / (2.0 * np.pi * abs(pairing))
    violation = float(np.max(lhs - rhs))
    return WindowChangeReport(
        max_violation=violation,
        max_lhs=float(np.max(lhs)),
        pairing_abs=abs(pairing),
        tolerance=tolerance,
    )


@dataclass
class ConjugationReport:
    """Deviation of W_{phi^(t)}[conj u](x, xi) from conj(W_{phi^(-t)} u(x, -xi))."""

    max_deviation: float
    u_norm: float
    tolerance_factor: float = 1e-10

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance_factor * self.u_norm


def conjugation_identity_check(u: Field, spec: WindowSpec) -> ConjugationReport:
    samples = u.require_sampled("conjugation_identity_check")
    grid = u.grid
    ubar = Field(grid=grid, samples=np.conj(samples))
    w1 = wpt_full(ubar, spec)
    w2 = wpt_full(u, spec.at_time(-spec.t))
    # xi lattice is centered at index N/2; -xi_k exists for k = 1..N-1
    dev = np.abs(w1[:, 1:] - np.conj(w2[:, :0:-1]))
    return ConjugationReport(max_deviation=float(np.max(dev)), u_norm=l2_norm(u))


# --- serialization ----------------------------------------------------------

def write_slice_csv(slc: WPTSlice, fh: TextIO) -> None:
    fh.write(f"# window {slc.window}\n")
    fh.write(f"# lambda {float(slc.lam)!r}\n")
    fh.write("x,xi,re,im\n")
    for i, x in enumerate(slc.x_samples):
        for k, xi in enumerate(slc.xi_samples):
            v = slc.values[i, k]
            fh.write(f"{float(x)!r},{float(xi)!r},{float(v.real)!r},{float(v.imag)!r}\n")


def write_slice_matrix(slc: WPTSlice, fh: TextIO) -> None:
    """Gnuplot-compatible magnitude matrix: one x-row per line, blank-line separated."""
    fh.write(f"# |W| matrix, rows x ({slc.x_samples.size}), cols xi ({slc.xi_samples.size})\n")
    for i in range(slc.x_samples.size):
        fh.write(" ".join(repr(float(abs(v))) for v in slc.values[i]))
        fh.write("\n")
