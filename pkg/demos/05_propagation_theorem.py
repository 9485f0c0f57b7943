"""End-to-end propagation-of-singularities experiment.

Checks the implication: if the data u0 satisfies the convergence hypotheses at
(z, xi0) for every z on the segment swept by the Hamilton flow, then the
solution at time t0 has no H^r wave front set along the transported tile.  The
experiment evaluates hypothesis curves on the data, solves the nonlinear flow,
and runs the detector on the solution at the transported phase points.
"""

import numpy as np

from wpnls import (
    NonlinearityPowers,
    field_from_function,
    make_grid,
    theorem2_experiment,
)

grid = make_grid(1, 1024, 20.0)
u0 = field_from_function(grid, lambda x: np.exp(-(x**2) / 2.0))

rep = theorem2_experiment(u0, NonlinearityPowers(2, 1), t0=0.5, xi0=1.0,
                          r=0.9, s=0.75, n_steps=128, lambda_cap=32.0)

print(f"hypothesis curves Convergent: {rep.hypotheses_convergent}")
print(f"implication held:            {rep.implication_held}")
print(f"trajectory times: {rep.trajectory.times[0]:.2f} .. "
      f"{rep.trajectory.times[-1]:.2f} ({len(rep.trajectory.times)} states)")
for note in rep.notes:
    print(f"note: {note}")
print("conclusion verdicts at transported centers:")
for center, curve in zip(rep.conclusion_centers, rep.conclusion_curves):
    print(f"  x = {center:6.2f}: {curve.verdict}")
