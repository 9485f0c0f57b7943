import io

import numpy as np
import pytest

from wpnls import (
    DegenerateInputError,
    Field,
    FrequencyRangeError,
    WindowSpec,
    WPTSlice,
    adjoint_wpt,
    conjugation_identity_check,
    evaluate_window,
    invert_wpt,
    l2_norm,
    plancherel_ratio,
    window_change_bound_check,
    wpt,
    wpt_full,
)
from wpnls.corpus import WINDOWS, make_signal, random_band_limited
from wpnls.grid import dirac_field
from wpnls.wavepacket import write_slice_csv, write_slice_matrix


def _gauss_window(y):
    return np.exp(-(y**2) / 2.0)


def full_slice(f, window):
    g = f.grid
    return WPTSlice(g.axis_points(), g.axis_freqs(), wpt_full(f, window),
                    window="test")


def test_wpt_matches_direct_sum(grid1024, rng):
    f = random_band_limited(grid1024, rng)
    x_set = np.array([-0.7, 0.0, 1.3])
    xi_set = np.array([0.5, 2.0])
    slc = wpt(f, _gauss_window, x_set, xi_set)
    y = grid1024.axis_points()
    for i, x in enumerate(x_set):
        for j, xi in enumerate(xi_set):
            direct = grid1024.spacing * np.sum(
                np.conj(_gauss_window(y - x)) * f.samples * np.exp(-1j * y * xi))
            assert abs(slc.values[i, j] - direct) < 1e-13


def test_wpt_full_matches_pointwise(gaussian):
    g = gaussian.grid
    full = wpt_full(gaussian, _gauss_window)
    idx = [10, 500, 900]
    sub = wpt(gaussian, _gauss_window, g.axis_points()[idx], g.axis_freqs()[idx])
    assert np.max(np.abs(full[np.ix_(idx, idx)] - sub.values)) < 1e-12


def test_wpt_gaussian_origin_closed_form(grid2048):
    # W_phi[phi](0, 0) = sqrt(pi) for phi = e^(-x^2/2)
    x = grid2048.axis_points()
    phi = Field(grid=grid2048, samples=np.exp(-(x**2) / 2.0))
    slc = wpt(phi, _gauss_window, np.array([0.0]), np.array([0.0]))
    assert abs(slc.values[0, 0] - np.sqrt(np.pi)) < 1e-13


def test_wpt_rejects_beyond_nyquist(gaussian):
    with pytest.raises(FrequencyRangeError):
        wpt(gaussian, _gauss_window, np.array([0.0]),
            np.array([2.0 * gaussian.grid.nyquist]))


def test_wpt_dirac_closed_form(grid1024):
    d = dirac_field(grid1024, [0.25])
    slc = wpt(d, WindowSpec(b=0.25, lam=1.0, t=0.0, dim=1),
              np.array([0.1]), np.array([3.0]))
    from wpnls.windows import window_values
    spec = WindowSpec(b=0.25, lam=1.0, t=0.0, dim=1)
    expected = np.conj(window_values(spec, np.array([0.25 - 0.1]))) \
        * np.exp(-1j * 0.25 * 3.0)
    assert abs(slc.values[0, 0] - expected[0]) < 1e-14


@pytest.mark.parametrize("name", ["gaussian", "step_gaussian", "chirped_gaussian"])
def test_plancherel_ratio_is_one(grid1024, name):
    f = make_signal(name, grid1024)
    assert abs(plancherel_ratio(f, _gauss_window) - 1.0) < 1e-6


def test_plancherel_ratio_many_windows(grid1024, rng):
    for _ in range(4):
        f = random_band_limited(grid1024, rng)
        for wfn in WINDOWS.values():
            assert abs(plancherel_ratio(f, wfn) - 1.0) < 1e-6


def test_adjoint_is_scaled_identity_on_self(gaussian):
    # (2pi)^-n W*_phi W_phi f = (phi, phi) f for matching windows
    from wpnls import inner_product
    g = gaussian.grid
    phi = Field(grid=g, samples=_gauss_window(g.axis_points()))
    rec = adjoint_wpt(full_slice(gaussian, _gauss_window), _gauss_window, g)
    scale = inner_product(phi, phi)
    err = np.max(np.abs(rec.samples - scale * gaussian.samples))
    assert err < 1e-10


def test_two_window_inversion(gaussian):
    g = gaussian.grid
    slc = full_slice(gaussian, _gauss_window)
    psi = lambda y: (y + 0.7) * np.exp(-(y**2))
    rec = invert_wpt(slc, psi, _gauss_window, g)
    rel = l2_norm(Field(grid=g, samples=rec.samples - gaussian.samples)) \
        / l2_norm(gaussian)
    assert rel < 1e-6


def test_inversion_rejects_orthogonal_pair(gaussian):
    g = gaussian.grid
    slc = full_slice(gaussian, _gauss_window)
    odd = lambda y: y * np.exp(-(y**2))
    with pytest.raises(DegenerateInputError):
        invert_wpt(slc, odd, _gauss_window, g)


def test_conjugation_identity(grid1024):
    u = make_signal("chirped_gaussian", grid1024)
    rep = conjugation_identity_check(u, WindowSpec(b=0.25, lam=4.0, t=0.3, dim=1))
    assert rep.passed
    assert rep.max_deviation < 1e-10 * rep.u_norm


def test_window_change_bound_holds(grid1024):
    f = make_signal("step_gaussian", grid1024)
    for lam in (1.0, 4.0, 16.0):
        for t in (0.0, 0.3):
            spec = WindowSpec(b=0.25, lam=lam, t=t, dim=1)
            a = evaluate_window(spec, grid1024)
            nb = Field(grid=grid1024,
                       samples=a.samples**2 * np.conj(a.samples))
            rep = window_change_bound_check(f, a, nb)
            assert rep.passed
            assert rep.max_violation < 1e-6


def test_slice_serialization_round_trippable_text(gaussian):
    slc = wpt(gaussian, _gauss_window, np.array([0.0, 1.0]), np.array([0.0, 2.0]))
    buf = io.StringIO()
    write_slice_csv(slc, buf)
    text = buf.getvalue()
    assert text.splitlines()[2] == "x,xi,re,im"
    assert "np.float64" not in text
    buf2 = io.StringIO()
    write_slice_matrix(slc, buf2)
    rows = [ln for ln in buf2.getvalue().splitlines()
            if ln.strip() and not ln.startswith("#")]
    assert len(rows) == 2
