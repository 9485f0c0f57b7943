"""Wave packet transform basics: energy conservation and two-window inversion.

The transform W_phi f(x, xi) = int conj(phi(y - x)) f(y) e^{-i y xi} dy
correlates a signal with translated, modulated copies of a window.  With the
quadrature measures used throughout the package it conserves energy exactly:

    ||W_phi f||_{L2(dx dxi)} = sqrt(2 pi) ||phi|| ||f||

and any second window psi with (psi, phi) != 0 reconstructs f from the slice.
"""

import numpy as np

from wpnls import (
    Field,
    WPTSlice,
    field_from_function,
    inner_product,
    invert_wpt,
    l2_norm,
    make_grid,
    plancherel_ratio,
    wpt_full,
)

grid = make_grid(dim=1, points_per_axis=1024, half_width=20.0)
f = field_from_function(grid, lambda x: np.exp(-((x - 0.5) ** 2)) * np.cos(3 * x))

analysis = lambda y: np.exp(-(y**2) / 2.0)          # Gaussian analysis window
synthesis = lambda y: (y + 0.7) * np.exp(-(y**2))   # deliberately different

ratio = plancherel_ratio(f, analysis)
print(f"energy ratio ||W f|| / (sqrt(2 pi) ||phi|| ||f||) = {ratio:.15f}")

slc = WPTSlice(grid.axis_points(), grid.axis_freqs(), wpt_full(f, analysis),
               window="gaussian")
rec = invert_wpt(slc, synthesis, analysis, grid)
err = l2_norm(Field(grid=grid, samples=rec.samples - f.samples)) / l2_norm(f)
print(f"two-window inversion relative L2 error = {err:.3e}")

x = grid.axis_points()
pairing = inner_product(Field(grid=grid, samples=synthesis(x) + 0j),
                        Field(grid=grid, samples=analysis(x) + 0j))
print(f"window pairing (psi, phi) = {pairing:.6f}  (must be nonzero)")
