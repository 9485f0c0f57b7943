"""Free propagator, split-step solver for i u_t + (1/2) Laplacian u = u^p conj(u)^q,
conservation diagnostics and the transformed-equation (Duhamel) residual check.

Sign convention: i u_t + (1/2) Delta u = N[u] gives the Fourier multiplier
exp(-i |xi|^2 t / 2) for the free factor.  The free case of the Duhamel residual
doubles as a guard against the classic sign flip.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import FrequencyRangeError
from .grid import Field, Grid, fourier, inverse_fourier, read_field, write_field
from .windows import NonlinearityPowers, WindowSpec, window_values

__all__ = [
    "Trajectory",
    "free_propagate",
    "nls_solve",
    "ConservationReport",
    "conservation_report",
    "DuhamelReport",
    "duhamel_residual",
    "save_trajectory",
    "load_trajectory",
]


def free_propagate(f: Field, t: float) -> Field:
    """exp(i t Delta / 2): multiply by exp(-i |xi|^2 t / 2) in frequency."""
    g = f.grid
    spec = fourier(f)
    k2 = sum(x**2 for x in g.freq_meshes())
    spec.samples = spec.samples * np.exp(-0.5j * k2 * t)
    return inverse_fourier(spec)


@dataclass
class Trajectory:
    """Time-ordered states of one solver run on a fixed grid.

    ``powers`` is None for the free flow.  ``blew_up`` flags an aborted run;
    the stored states then end at the last finite one.
    """

    times: np.ndarray
    states: list[Field]
    powers: Optional[NonlinearityPowers]
    step_scheme: str = "strang"  # "strang" | "lie"
    substep: str = "exact_phase"  # "exact_phase" | "rk4"
    blew_up: bool = False

    def __post_init__(self) -> None:
        if len(self.states) != len(self.times):
            raise ValueError("one state per time required")

    @property
    def grid(self) -> Grid:
        return self.states[0].grid

    @property
    def final(self) -> Field:
        return self.states[-1]


def _nonlinear_flow(u: np.ndarray, powers: NonlinearityPowers, dt: float, substep: str) -> np.ndarray:
    if substep == "exact_phase":
        # i u_t = |u|^(2q) u preserves |u|; exact phase rotation
        return u * np.exp(-1j * np.abs(u) ** (2 * powers.q) * dt)
    rhs = lambda v: -1j * v**powers.p * np.conj(v) ** powers.q
    k1 = rhs(u)
    k2 = rhs(u + 0.5 * dt * k1)
    k3 = rhs(u + 0.5 * dt * k2)
    k4 = rhs(u + dt * k3)
    return u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def nls_solve(
    u0: Field,
    powers: Optional[NonlinearityPowers],
    t_end: float,
    n_steps: int,
    scheme: str = "strang",
) -> Trajectory:
    """Split-step solve to t_end (possibly negative), storing every state.

    The nonlinear substep is the exact phase rotation when p = q + 1 (the
    modulus-preserving case), a classical four-stage explicit step otherwise.
    """
    samples = u0.require_sampled("nls_solve").copy()
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    if scheme not in ("strang", "lie"):
        raise ValueError(f"unknown scheme {scheme!r}")
    g = u0.grid
    if t_end == 0.0:
        return Trajectory(
            times=np.array([0.0]), states=[Field(grid=g, samples=samples)],
            powers=powers, step_scheme=scheme,
            substep="exact_phase" if powers is None else _substep_kind(powers),
        )
    dt = t_end / n_steps
    k2 = sum(x**2 for x in g.freq_meshes())
    full_kin = np.fft.ifftshift(np.exp(-0.5j * k2 * dt))
    half_kin = np.fft.ifftshift(np.exp(-0.25j * k2 * dt))
    substep = "exact_phase" if powers is None else _substep_kind(powers)

    def kinetic(v: np.ndarray, mult: np.ndarray) -> np.ndarray:
        return np.fft.fftshift(np.fft.ifftn(np.fft.fftn(np.fft.ifftshift(v)) * mult))

    times = [0.0]
    states = [Field(grid=g, samples=samples.copy())]
    u = samples
    blew_up = False
    for j in range(n_steps):
        if scheme == "strang":
            u = kinetic(u, half_kin)
            if powers is not None:
                u = _nonlinear_flow(u, powers, dt, substep)
            u = kinetic(u, half_kin)
        else:
            u = kinetic(u, full_kin)
            if powers is not None:
                u = _nonlinear_flow(u, powers, dt, substep)
        if not np.all(np.isfinite(u)):
            blew_up = True
            break
        times.append(dt * (j + 1))
        states.append(Field(grid=g, samples=u.copy()))
    return Trajectory(
        times=np.asarray(times), states=states, powers=powers,
        step_scheme=scheme, substep=substep, blew_up=blew_up,
    )


def _substep_kind(powers: NonlinearityPowers) -> str:
    return "exact_phase" if powers.p == powers.q + 1 else "rk4"


def apply_nonlinearity(f: Field, powers: NonlinearityPowers) -> Field:
    s = f.require_sampled("apply_nonlinearity")
    return Field(grid=f.grid, samples=s**powers.p * np.conj(s) ** powers.q)


@dataclass
class ConservationReport:
    times: np.ndarray
    mass: np.ndarray
    energy: Optional[np.ndarray]

    @property
    def mass_drift(self) -> float:
        return float(np.max(np.abs(self.mass - self.mass[0])) / abs(self.mass[0]))

    @property
    def energy_drift(self) -> Optional[float]:
        if self.energy is None:
            return None
        scale = max(abs(self.energy[0]), 1e-300)
        return float(np.max(np.abs(self.energy - self.energy[0])) / scale)


def conservation_report(traj: Trajectory) -> ConservationReport:
    """Mass always; Hamiltonian energy for the gauge-invariant case p = q + 1
    (and the kinetic energy alone for the free flow)."""
    g = traj.grid
    k2 = sum(x**2 for x in g.freq_meshes())
    dxi = (np.pi / g.half_width) ** g.dim
    dx = g.spacing**g.dim
    mass, energy = [], []
    p = traj.powers
    hamiltonian = p is None or p.p == p.q + 1
    for state in traj.states:
        u = state.require_sampled("conservation_report")
        mass.append(np.sum(np.abs(u) ** 2) * dx)
        if hamiltonian:
            spec = fourier(state).samples
            kinetic = 0.5 * np.sum(k2 * np.abs(spec) ** 2) * dxi
            if p is None:
                energy.append(kinetic)
            else:
                potential = np.sum(np.abs(u) ** (2 * p.q + 2)) * dx / (p.q + 1)
                energy.append(kinetic + potential)
    return ConservationReport(
        times=traj.times,
        mass=np.asarray(mass),
        energy=np.asarray(energy) if hamiltonian else None,
    )


@dataclass
class DuhamelReport:
    """Residual of the transformed integral equation over an (x, xi) sample set."""

    max_residual: float
    residuals: np.ndarray
    x_set: np.ndarray
    xi_set: np.ndarray
    coarse_max_residual: Optional[float] = None

    @property
    def quadrature_suspect(self) -> bool:
        """True when halving the time resolution moves the residual by > 10%."""
        if self.coarse_max_residual is None:
            return False
        scale = max(self.max_residual, 1e-300)
        return abs(self.coarse_max_residual - self.max_residual) > 0.1 * scale


def _wpt_points(
    u: np.ndarray, grid: Grid, spec: WindowSpec, t: float,
    x_pts: np.ndarray, xi_pts: np.ndarray,
) -> np.ndarray:
    """W_{phi_lam^(t)} u at paired (x_pts[j], xi_pts[j]), analytic window."""
    y = grid.axis_points()
    wspec = spec.at_time(t)
    wmat = np.conj(window_values(wspec, y[None, :] - x_pts[:, None]))
    phase = np.exp(-1j * y[None, :] * xi_pts[:, None])
    return grid.spacing * np.sum(wmat * u[None, :] * phase, axis=1)


def duhamel_residual(
    traj: Trajectory,
    spec: WindowSpec,
    xi_set: np.ndarray,
    x_set: np.ndarray,
) -> DuhamelReport:
    """Evaluate both sides of the transformed integral equation and report max |LHS - RHS|.

    LHS:  W_{phi^(t)} u(t, x, xi)
    RHS:  e^(-i|xi|^2 t/2) W_phi u0(x - t xi, xi)
          - i * trapezoid_tau [ e^(-i|xi|^2 (t-tau)/2)
                                W_{phi^(tau)}[N[u(tau)]](x + (tau - t) xi, xi) ]
    """
    grid = traj.grid
    if grid.dim != 1:
        raise NotImplementedError("duhamel_residual is implemented for dim 1")
    x_set = np.atleast_1d(np.asarray(x_set, dtype=float))
    xi_set = np.atleast_1d(np.asarray(xi_set, dtype=float))
    if np.max(np.abs(xi_set)) > grid.nyquist:
        raise FrequencyRangeError("xi sample beyond Nyquist")
    xg, kg = np.meshgrid(x_set, xi_set, indexing="ij")
    xf, kf = xg.ravel(), kg.ravel()
    t = float(traj.times[-1])

    def assemble(times: np.ndarray, states: list[Field]) -> np.ndarray:
        lhs = _wpt_points(states[-1].require_sampled("duhamel"), grid, spec, t, xf, kf)
        rhs = np.exp(-0.5j * kf**2 * t) * _wpt_points(
            states[0].require_sampled("duhamel"), grid, spec, 0.0, xf - t * kf, kf
        )
        if traj.powers is not None and len(times) > 1:
            integrand = np.empty((len(times), xf.size), dtype=complex)
            for j, (tau, state) in enumerate(zip(times, states)):
                nl = state.require_sampled("duhamel") ** traj.powers.p * np.conj(
                    state.require_sampled("duhamel")
                ) ** traj.powers.q
                integrand[j] = np.exp(-0.5j * kf**2 * (t - tau)) * _wpt_points(
                    nl, grid, spec, tau, xf + (tau - t) * kf, kf
                )
            rhs = rhs - 1j * np.trapezoid(integrand, x=times, axis=0)
        return np.abs(lhs - rhs)

    res = assemble(traj.times, traj.states)
    coarse = None
    if traj.powers is not None and (len(traj.times) - 1) % 2 == 0 and len(traj.times) > 2:
        coarse = float(np.max(assemble(traj.times[::2], traj.states[::2])))
    return DuhamelReport(
        max_residual=float(np.max(res)),
        residuals=res.reshape(x_set.size, xi_set.size),
        x_set=x_set,
        xi_set=xi_set,
        coarse_max_residual=coarse,
    )


# --- persistence ------------------------------------------------------------

def save_trajectory(traj: Trajectory, directory: str) -> None:
    """Directory of field files plus a flat key=value manifest."""
    os.makedirs(directory, exist_ok=True)
    with open(os.path.join(directory, "manifest.txt"), "w") as fh:
        fh.write(f"n_states = {len(traj.states)}\n")
        fh.write(f"scheme = {traj.step_scheme}\n")
        fh.write(f"substep = {traj.substep}\n")
        fh.write(f"blew_up = {int(traj.blew_up)}\n")
        if traj.powers is None:
            fh.write("powers = free\n")
        else:
            fh.write(f"powers = {traj.powers.p} {traj.powers.q}\n")
        fh.write("times = " + " ".join(repr(float(t)) for t in traj.times) + "\n")
    for j, state in enumerate(traj.states):
        with open(os.path.join(directory, f"state_{j:05d}.txt"), "w") as fh:
            write_field(state, fh)


def load_trajectory(directory: str) -> Trajectory:
    meta: dict[str, str] = {}
    with open(os.path.join(directory, "manifest.txt")) as fh:
        for line in fh:
            if "=" in line:
                key, _, val = line.partition("=")
                meta[key.strip()] = val.strip()
    n = int(meta["n_states"])
    times = np.asarray([float(tok) for tok in meta["times"].split()])
    powers = None
    if meta["powers"] != "free":
        p, q = meta["powers"].split()
        powers = NonlinearityPowers(p=int(p), q=int(q))
    states = []
    for j in range(n):
        with open(os.path.join(directory, f"state_{j:05d}.txt")) as fh:
            states.append(read_field(fh))
    return Trajectory(
        times=times, states=states, powers=powers,
        step_scheme=meta.get("scheme", "strang"),
        substep=meta.get("substep", "exact_phase"),
        blew_up=bool(int(meta.get("blew_up", "0"))),
    )
