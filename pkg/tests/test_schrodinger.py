import numpy as np
import pytest

from wpnls import (
    Field,
    NonlinearityPowers,
    WindowSpec,
    conservation_report,
    duhamel_residual,
    free_propagate,
    l2_norm,
    load_trajectory,
    nls_solve,
    save_trajectory,
)
from wpnls.windows import evaluate_window


def evolved_gaussian(grid, t):
    # e^(it d^2/2 dx^2) e^(-x^2/2) = (1+it)^(-1/2) e^(-x^2/(2(1+it)))
    x = grid.axis_points()
    return (1.0 + 1j * t) ** -0.5 * np.exp(-(x**2) / (2.0 * (1.0 + 1j * t)))


def test_free_propagation_closed_form(gaussian):
    t = 0.8
    out = free_propagate(gaussian, t)
    expected = evolved_gaussian(gaussian.grid, t)
    assert np.max(np.abs(out.samples - expected)) < 1e-12


def test_free_propagation_group_law(gaussian):
    one = free_propagate(free_propagate(gaussian, 0.3), 0.5)
    two = free_propagate(gaussian, 0.8)
    assert np.max(np.abs(one.samples - two.samples)) < 1e-12


def test_free_propagation_unitary(gaussian):
    out = free_propagate(gaussian, 1.7)
    assert np.isclose(l2_norm(out), l2_norm(gaussian), rtol=1e-13)


def test_linear_case_matches_exact_solution(grid1024, gaussian):
    # i u_t + u_xx/2 = u  =>  u(t) = e^(-it) e^(it Delta/2) u0
    traj = nls_solve(gaussian, NonlinearityPowers(1, 0), 1.0, 256)
    exact = np.exp(-1j * 1.0) * evolved_gaussian(grid1024, 1.0)
    err = np.max(np.abs(traj.final.samples - exact))
    assert err < 1e-6


def test_cubic_conservation(grid1024, gaussian):
    traj = nls_solve(gaussian, NonlinearityPowers(2, 1), 0.5, 1024)
    rep = conservation_report(traj)
    assert rep.mass_drift < 1e-10
    assert rep.energy_drift is not None and rep.energy_drift < 1e-6


def test_time_reversal_round_trip(grid1024, gaussian):
    fwd = nls_solve(gaussian, NonlinearityPowers(2, 1), 0.5, 512)
    back = nls_solve(fwd.final, NonlinearityPowers(2, 1), -0.5, 512)
    err = l2_norm(Field(grid=grid1024,
                        samples=back.final.samples - gaussian.samples))
    assert err / l2_norm(gaussian) < 1e-6


def test_strang_beats_lie(grid1024, gaussian):
    exact = nls_solve(gaussian, NonlinearityPowers(2, 1), 0.25, 2048).final
    errs = {}
    for scheme in ("strang", "lie"):
        got = nls_solve(gaussian, NonlinearityPowers(2, 1), 0.25, 64,
                        scheme=scheme).final
        errs[scheme] = np.max(np.abs(got.samples - exact.samples))
    assert errs["strang"] < errs["lie"]


def test_solver_rejects_unknown_scheme(gaussian):
    with pytest.raises(ValueError):
        nls_solve(gaussian, NonlinearityPowers(2, 1), 0.1, 8, scheme="euler")


def test_trajectory_round_trip(tmp_path, gaussian):
    traj = nls_solve(gaussian, NonlinearityPowers(2, 1), 0.1, 8)
    save_trajectory(traj, str(tmp_path / "traj"))
    back = load_trajectory(str(tmp_path / "traj"))
    assert np.allclose(back.times, traj.times)
    assert back.powers == traj.powers
    for a, b in zip(back.states, traj.states):
        assert np.array_equal(a.samples, b.samples)


def test_duhamel_free_residual_tiny(gaussian):
    traj = nls_solve(gaussian, None, 0.5, 64)
    rep = duhamel_residual(traj, WindowSpec(b=0.25, lam=2.0, t=0.5, dim=1),
                           np.array([0.5, 1.0]), np.array([0.0, 1.0]))
    assert rep.max_residual < 1e-8


@pytest.mark.parametrize("powers", [NonlinearityPowers(1, 0),
                                    NonlinearityPowers(2, 1)])
def test_duhamel_second_order_self_convergence(gaussian, powers):
    spec = WindowSpec(b=0.25, lam=2.0, t=0.25, dim=1)
    res = []
    for n in (128, 256):
        traj = nls_solve(gaussian, powers, 0.25, n)
        rep = duhamel_residual(traj, spec, np.array([0.5, 1.0]),
                               np.array([0.0, 0.5]))
        res.append(rep.max_residual)
    order = np.log2(res[0] / res[1])
    assert 1.7 <= order <= 2.3


def test_duhamel_window_consistency(grid1024, gaussian):
    # The same closed-form window the residual uses, sampled, matches the
    # propagated initial window (anchor for the trajectory-time evaluation).
    spec = WindowSpec(b=0.25, lam=4.0, t=0.25, dim=1)
    a = evaluate_window(spec, grid1024)
    b = free_propagate(evaluate_window(spec.at_time(0.0), grid1024), 0.25)
    assert np.max(np.abs(a.samples - b.samples)) < 1e-10
