"""Acceptance suite: one test per criterion, one printed pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines; every tolerance is pinned in the body of its test.
"""

import numpy as np
import pytest

from wpnls import (
    CriterionParams,
    Field,
    NonlinearityPowers,
    PhasePoint,
    WindowSpec,
    WPTSlice,
    cone_fourier_detect,
    conservation_report,
    duhamel_residual,
    evaluate_window,
    field_from_function,
    inner_product,
    invert_wpt,
    l2_norm,
    make_grid,
    nls_solve,
    nonlinear_pairing,
    pairing_lower_bound_check,
    plancherel_ratio,
    theorem2_experiment,
    transported_criterion,
    wavepacket_detect,
    window_change_bound_check,
    wpt_full,
    free_propagate,
)
from wpnls.corpus import SIGNALS, WINDOWS, make_signal, random_band_limited


def _report(criterion: str, ok: bool, detail: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
    assert ok, f"{criterion}: {detail}"


def _gauss(y):
    return np.exp(-(y**2) / 2.0)


def test_criterion_01_plancherel():
    grid = make_grid(1, 1024, 20.0)
    rng = np.random.default_rng(2024)
    corpus = [make_signal(n, grid) for n in SIGNALS if not SIGNALS[n].dirac]
    while len(corpus) < 20:
        corpus.append(random_band_limited(grid, rng))
    worst = max(abs(plancherel_ratio(f, _gauss) - 1.0) for f in corpus)
    # Gaussian closed form: ||W_phi phi||_L2 = (2pi)^(1/2) ||phi||^2 = pi sqrt(2)
    phi = field_from_function(grid, _gauss)
    vals = wpt_full(phi, _gauss)
    dxi = np.pi / grid.half_width
    norm = np.sqrt(np.sum(np.abs(vals) ** 2) * grid.spacing * dxi)
    gauss_err = abs(norm - np.pi * np.sqrt(2.0)) / (np.pi * np.sqrt(2.0))
    ok = worst <= 1e-6 and gauss_err <= 1e-6
    _report("criterion 1 (Plancherel)", ok,
            f"worst |ratio-1| {worst:.2e} (tol 1e-6), "
            f"Gaussian closed-form rel err {gauss_err:.2e} (tol 1e-6)")


def test_criterion_02_inversion():
    grid = make_grid(1, 1024, 20.0)
    f = field_from_function(grid, _gauss)
    x = grid.axis_points()
    worst, tested = 0.0, 0
    for aname, afn in WINDOWS.items():
        slc = WPTSlice(grid.axis_points(), grid.axis_freqs(),
                       wpt_full(f, afn), window=aname)
        for sname, sfn in WINDOWS.items():
            pairing = inner_product(Field(grid=grid, samples=sfn(x) + 0j),
                                    Field(grid=grid, samples=afn(x) + 0j))
            if abs(pairing) <= 1e-6:
                continue
            rec = invert_wpt(slc, sfn, afn, grid)
            rel = l2_norm(Field(grid=grid, samples=rec.samples - f.samples)) \
                / l2_norm(f)
            worst = max(worst, rel)
            tested += 1
    ok = worst <= 1e-6 and tested > 0
    _report("criterion 2 (inversion)", ok,
            f"{tested} admissible window pairs, worst rel L2 err {worst:.2e} "
            "(tol 1e-6)")


def test_criterion_03_closed_form_window():
    grid = make_grid(1, 4096, 40.0)
    worst = 0.0
    for b in (0.25, 0.5):
        for lam in (1.0, 4.0, 16.0):
            for t in (0.0, 0.3, 1.0):
                spec = WindowSpec(b=b, lam=lam, t=t, dim=1)
                closed = evaluate_window(spec, grid)
                prop = free_propagate(evaluate_window(spec.at_time(0.0), grid), t)
                worst = max(worst, float(np.max(np.abs(
                    closed.samples - prop.samples))))
    ok = worst <= 1e-8
    _report("criterion 3 (evolved-window closed form)", ok,
            f"worst L-inf err over 18 (b,lam,t) combos {worst:.2e} (tol 1e-8)")


def test_criterion_04_pairing_bounds():
    lambdas = 10.0 ** np.linspace(0.0, 3.0, 31)
    worst_spread, min_const = 0.0, np.inf
    for p, q in ((2, 0), (2, 1)):
        rep = pairing_lower_bound_check(0.25, NonlinearityPowers(p, q), lambdas)
        for regime in ("inner", "outer"):
            c = rep.inner_constant if regime == "inner" else rep.outer_constant
            min_const = min(min_const, c)
            worst_spread = max(worst_spread, rep.stability(regime))
    value = abs(nonlinear_pairing(WindowSpec(b=0.25, lam=1.0, t=0.0, dim=1),
                                  NonlinearityPowers(2, 0)))
    value_err = abs(value - np.sqrt(2.0 * np.pi / 3.0))
    ok = min_const > 0.0 and worst_spread < 0.2 and value_err <= 1e-8
    _report("criterion 4 (pairing lower bounds)", ok,
            f"min constant {min_const:.3f} > 0, worst spread {worst_spread:.2%} "
            f"(< 20%), t=0 value err {value_err:.2e} (tol 1e-8)")


def test_criterion_05_transformed_integral_equation():
    grid = make_grid(1, 1024, 20.0)
    u0 = field_from_function(grid, _gauss)
    spec = WindowSpec(b=0.25, lam=2.0, t=0.5, dim=1)
    xi_set, x_set = np.array([0.5, 1.0]), np.array([0.0, 1.0])
    free = duhamel_residual(nls_solve(u0, None, 0.5, 64), spec, xi_set, x_set)
    orders = {}
    for p, q in ((1, 0), (2, 1)):
        spec_q = WindowSpec(b=0.25, lam=2.0, t=0.25, dim=1)
        res = []
        for n in (128, 256):
            traj = nls_solve(u0, NonlinearityPowers(p, q), 0.25, n)
            res.append(duhamel_residual(traj, spec_q, xi_set,
                                        np.array([0.0, 0.5])).max_residual)
        orders[(p, q)] = float(np.log2(res[0] / res[1]))
    ok = free.max_residual <= 1e-8 and all(
        1.7 <= o <= 2.3 for o in orders.values())
    _report("criterion 5 (transformed integral equation)", ok,
            f"free residual {free.max_residual:.2e} (tol 1e-8), "
            f"self-convergence orders linear {orders[(1, 0)]:.2f} / "
            f"cubic {orders[(2, 1)]:.2f} (window [1.7, 2.3])")


def test_criterion_06_nls_solver():
    grid = make_grid(1, 1024, 20.0)
    u0 = field_from_function(grid, _gauss)
    x = grid.axis_points()
    traj = nls_solve(u0, NonlinearityPowers(1, 0), 1.0, 256)
    exact = np.exp(-1j) * (1.0 + 1j) ** -0.5 * np.exp(-(x**2) / (2.0 * (1 + 1j)))
    linear_err = float(np.max(np.abs(traj.final.samples - exact)))
    cubic = nls_solve(u0, NonlinearityPowers(2, 1), 0.5, 1024)
    cons = conservation_report(cubic)
    back = nls_solve(cubic.final, NonlinearityPowers(2, 1), -0.5, 1024)
    rev = l2_norm(Field(grid=grid, samples=back.final.samples - u0.samples)) \
        / l2_norm(u0)
    ok = (linear_err <= 1e-6 and cons.mass_drift <= 1e-10
          and cons.energy_drift is not None and cons.energy_drift <= 1e-6
          and rev <= 1e-6)
    _report("criterion 6 (NLS solver)", ok,
            f"linear err {linear_err:.2e} (tol 1e-6), mass drift "
            f"{cons.mass_drift:.2e} (tol 1e-10), energy drift "
            f"{cons.energy_drift:.2e} (tol 1e-6), reversal {rev:.2e} (tol 1e-6)")


TRUTH_CORPUS = ["gaussian", "step_gaussian", "kink_gaussian", "cusp_bump",
                "dirac", "chirped_gaussian"]
LEVELS = (0.25, 0.75, 1.25, 1.75)


def _phase_point(name):
    x0 = SIGNALS[name].singular_x
    return PhasePoint(x0 if x0 is not None else 0.0, 1.0)


def test_criterion_07_detector_equivalence():
    grid = make_grid(1, 2048, 20.0)
    decisive = disagreements = total = 0
    for name in TRUTH_CORPUS:
        f = make_signal(name, grid)
        pt = _phase_point(name)
        for s in LEVELS:
            total += 1
            v_cone = cone_fourier_detect(f, pt, s).verdict
            v_wp = wavepacket_detect(f, pt, s, CriterionParams(s_or_r=s)).verdict
            if "Inconclusive" not in (v_cone, v_wp):
                decisive += 1
                if v_cone != v_wp:
                    disagreements += 1
    # window independence at the finer grid where all windows resolve the tails
    fine = make_grid(1, 4096, 20.0)
    window_conflicts = 0
    for name in TRUTH_CORPUS:
        f = make_signal(name, fine)
        if f.is_dirac:
            continue  # custom analyzing windows need sampled data
        pt = _phase_point(name)
        for s in LEVELS:
            verdicts = {
                wavepacket_detect(f, pt, s, CriterionParams(s_or_r=s),
                                  window=wfn).verdict
                for wfn in WINDOWS.values()
            }
            verdicts.discard("Inconclusive")
            if len(verdicts) > 1:
                window_conflicts += 1
    frac = decisive / total
    ok = disagreements == 0 and frac >= 0.8 and window_conflicts == 0
    _report("criterion 7 (detector equivalence)", ok,
            f"{decisive}/{total} decisive ({frac:.0%}, need >= 80%), "
            f"{disagreements} disagreements (need 0), "
            f"{window_conflicts} window-dependent cells (need 0)")


def test_criterion_08_localization():
    grid = make_grid(1, 2048, 20.0)
    bad_far = bad_leak = 0
    for xstar in (0.0, 2.0):
        f = field_from_function(
            grid, lambda x: np.sign(x - xstar) * np.exp(-((x - xstar) ** 2)))
        for s in (1.0, 1.5):
            for center in xstar + np.arange(-2.0, 2.01, 0.5):
                params = CriterionParams(s_or_r=s, b=0.5, K_halfwidth=0.25)
                v = wavepacket_detect(f, PhasePoint(center, 1.0), s,
                                      params).verdict
                dist = max(0.0, abs(center - xstar) - params.K_halfwidth)
                if v == "Divergent" and dist > 0.5:
                    bad_leak += 1
                if dist >= 1.0 and v != "Convergent":
                    bad_far += 1
            # the window containing x* must be decisively Divergent
            v0 = wavepacket_detect(
                f, PhasePoint(xstar, 1.0), s,
                CriterionParams(s_or_r=s, b=0.5, K_halfwidth=0.25)).verdict
            assert v0 == "Divergent"
    ok = bad_far == 0 and bad_leak == 0
    _report("criterion 8 (localization)", ok,
            f"{bad_leak} Divergent verdicts beyond distance 0.5 (need 0), "
            f"{bad_far} non-Convergent at distance >= 1 (need 0)")


def test_criterion_09_theorem_soundness_sweep():
    grid = make_grid(1, 1024, 20.0)
    sweep = [("gaussian", 0.5), ("modulated_gaussian", 0.25), ("wide_bump", 0.5)]
    powers = [(2, 1), (2, 0), (3, 0), (1, 1)]
    violations = hyp_count = 0
    for name, t0 in sweep:
        u0 = make_signal(name, grid)
        for p, q in powers:
            rep = theorem2_experiment(u0, NonlinearityPowers(p, q), t0=t0,
                                      xi0=1.0, r=0.9, s=0.75, b=0.25,
                                      n_steps=256, lambda_cap=48.0)
            if rep.hypotheses_convergent:
                hyp_count += 1
            if not rep.implication_held:
                violations += 1
    ok = violations == 0
    _report("criterion 9 (propagation-theorem soundness)", ok,
            f"12-config sweep: hypotheses Convergent in {hyp_count}/12, "
            f"{violations} implication violations (need 0)")


def test_criterion_10_window_change_bound():
    grid = make_grid(1, 1024, 20.0)
    corpus = [make_signal(n, grid) for n in SIGNALS if not SIGNALS[n].dirac]
    worst = 0.0
    for lam in (1.0, 4.0, 16.0):
        for t in (0.0, 0.3):
            spec = WindowSpec(b=0.25, lam=lam, t=t, dim=1)
            a = evaluate_window(spec, grid)
            nb = Field(grid=grid, samples=a.samples**2 * np.conj(a.samples))
            for f in corpus:
                rep = window_change_bound_check(f, a, nb)
                worst = max(worst, rep.max_violation)
    ok = worst <= 1e-6
    _report("criterion 10 (window-change convolution bound)", ok,
            f"worst violation {worst:.2e} across corpus x 6 (lam, t) combos "
            "(tol 1e-6)")
