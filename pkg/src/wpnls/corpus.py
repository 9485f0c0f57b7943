"""Built-in signal and window corpora with their known regularity truth values.

Thresholds live next to their derivations:

* sign(x) e^(-x^2): jump at 0, Fourier tail ~ 1/xi, locally H^s iff s < 1/2
* |x| e^(-x^2): kink at 0, tail ~ 1/xi^2, threshold s = 3/2
* x_+^(3/2) bump: tail ~ xi^(-5/2), threshold s = 2
* Dirac delta: flat Fourier transform, threshold s = -1/2
* Gaussian / chirped Gaussian / sech bump: Schwartz, empty wave front set
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .grid import Field, Grid, field_from_function, dirac_field, inverse_fourier

__all__ = [
    "SignalInfo",
    "SIGNALS",
    "WINDOWS",
    "make_signal",
    "random_band_limited",
    "smooth_bump",
]


def smooth_bump(x: np.ndarray, width: float = 2.0) -> np.ndarray:
    """Compactly supported C-infinity bump, equal to 1 at the center."""
    u = np.asarray(x, dtype=float) / width
    out = np.zeros_like(u)
    inside = np.abs(u) < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - u[inside] ** 2))
    return out


@dataclass(frozen=True)
class SignalInfo:
    """A corpus entry: sampler plus the truth data the detectors are graded on."""

    name: str
    fn: Optional[Callable[[np.ndarray], np.ndarray]]
    threshold: float  # H^s threshold at the singular point (inf: empty WF set)
    singular_x: Optional[float]  # None when the wave front set is empty
    dirac: bool = False


def _gaussian(x):
    return np.exp(-(x**2) / 2.0)


def _modulated_gaussian(x):
    return np.exp(2j * x) * np.exp(-(x**2) / 2.0)


def _wide_bump(x):
    return 1.0 / np.cosh(x / 2.0)


def _step_gaussian(x):
    return np.sign(x) * np.exp(-(x**2))


def _kink_gaussian(x):
    return np.abs(x) * np.exp(-(x**2))


def _cusp_bump(x):
    return np.maximum(x, 0.0) ** 1.5 * smooth_bump(x, width=2.0)


def _chirped_gaussian(x):
    return np.exp(0.5j * x**2) * np.exp(-(x**2) / 9.0)


SIGNALS: dict[str, SignalInfo] = {
    "gaussian": SignalInfo("gaussian", _gaussian, np.inf, None),
    "modulated_gaussian": SignalInfo("modulated_gaussian", _modulated_gaussian, np.inf, None),
    "wide_bump": SignalInfo("wide_bump", _wide_bump, np.inf, None),
    "step_gaussian": SignalInfo("step_gaussian", _step_gaussian, 0.5, 0.0),
    "kink_gaussian": SignalInfo("kink_gaussian", _kink_gaussian, 1.5, 0.0),
    "cusp_bump": SignalInfo("cusp_bump", _cusp_bump, 2.0, 0.0),
    "dirac": SignalInfo("dirac", None, -0.5, 0.0, dirac=True),
    "chirped_gaussian": SignalInfo("chirped_gaussian", _chirped_gaussian, np.inf, None),
}


def make_signal(name: str, grid: Grid) -> Field:
    info = SIGNALS[name]
    if info.dirac:
        return dirac_field(grid, [0.0] * grid.dim)
    assert info.fn is not None
    return field_from_function(grid, info.fn)


# Structurally distinct analyzing windows: even, odd-moment, sign-changing,
# compactly supported, complex chirped.
WINDOWS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "gaussian": lambda y: np.exp(-(y**2) / 2.0),
    "odd_gaussian": lambda y: y * np.exp(-(y**2)),
    "hermite2": lambda y: (4.0 * y**2 - 2.0) * np.exp(-(y**2) / 2.0),
    "bump": lambda y: smooth_bump(y, width=2.0),
    "chirped": lambda y: np.exp(0.5j * y**2) * np.exp(-(y**2) / 4.0),
}


def random_band_limited(grid: Grid, rng: np.random.Generator, band_fraction: float = 0.25) -> Field:
    """Random smooth field with spectrum confined to a fraction of the Nyquist ball."""
    n = grid.points_per_axis
    xi = grid.axis_freqs()
    cutoff = band_fraction * grid.nyquist
    shape = (n,) * grid.dim
    coeffs = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    k2 = sum(m**2 for m in np.meshgrid(*([xi] * grid.dim), indexing="ij"))
    envelope = np.exp(-k2 / (2.0 * (cutoff / 3.0) ** 2)) * (np.sqrt(k2) <= cutoff)
    spec = Field(grid=grid, samples=coeffs * envelope, space="frequency")
    return inverse_fourier(spec)
