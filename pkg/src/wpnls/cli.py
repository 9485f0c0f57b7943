"""Command-line front end: config handling, identity suites, experiment runs.

Config files are flat ``key = value`` text under ``[section]`` headers (INI).
Any value can be overridden with ``--set section.key=value``.  Exit codes:
0 success / decisive verdict, 2 inconclusive, 64 usage error, 66 missing
input, 70 internal numerical failure.
"""

from __future__ import annotations

import argparse
import configparser
import os
import sys
import time
from typing import Callable, Optional

import numpy as np

from . import __version__
from .corpus import SIGNALS, WINDOWS, make_signal
from .errors import ResolutionError, WpnlsError
from .grid import Field, inner_product, l2_norm, make_grid
from .microlocal import (
    CONVERGENT,
    DIVERGENT,
    CriterionCurve,
    CriterionParams,
    PhasePoint,
    cone_fourier_detect,
    theorem2_experiment,
    transported_criterion,
    wavepacket_detect,
    write_curve_csv,
    write_curve_summary,
)
from .schrodinger import (
    conservation_report,
    duhamel_residual,
    free_propagate,
    nls_solve,
    save_trajectory,
)
from .wavepacket import (
    WPTSlice,
    conjugation_identity_check,
    invert_wpt,
    plancherel_ratio,
    window_change_bound_check,
    wpt_full,
)
from .windows import (
    NonlinearityPowers,
    WindowSpec,
    evaluate_window,
    nonlinear_pairing,
    pairing_lower_bound_check,
    write_pairing_csv,
)

EXIT_OK = 0
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 64
EXIT_NOINPUT = 66
EXIT_NUMERICAL = 70

DEFAULT_CONFIG = {
    "grid": {"dim": "1", "points": "2048", "half_width": "20.0"},
    "signal": {"name": "gaussian"},
    "window": {"name": "gaussian", "b": "0.25"},
    "detector": {
        "method": "wavepacket",
        "s": "1.0",
        "r": "0.9",
        "x0": "0.0",
        "xi0": "1.0",
        "k_halfwidth": "0.5",
        "margin": "0.3",
        "window_len": "8",
        "lambda_cap": "inf",
        "t0": "0.5",
        "direction_sign": "1",
    },
    "solver": {"p": "2", "q": "1", "t0": "0.5", "steps": "256", "scheme": "strang"},
    "run": {"outdir": "wpnls-out", "seed": "0", "workers": "1"},
}


def load_config(path: Optional[str], overrides: list[str]) -> configparser.ConfigParser:
    cfg = configparser.ConfigParser()
    cfg.read_dict(DEFAULT_CONFIG)
    if path is not None:
        if not os.path.exists(path):
            raise FileNotFoundError(path)
        cfg.read(path)
    for item in overrides:
        try:
            key, value = item.split("=", 1)
            section, option = key.strip().split(".", 1)
        except ValueError as exc:
            raise UsageError(f"bad --set {item!r}; expected section.key=value") from exc
        if not cfg.has_section(section):
            cfg.add_section(section)
        cfg.set(section, option.strip(), value.strip())
    return cfg


class UsageError(Exception):
    pass


def _outdir(cfg: configparser.ConfigParser, args: argparse.Namespace) -> str:
    out = args.outdir or os.environ.get("WPNLS_OUTDIR") or cfg.get("run", "outdir")
    os.makedirs(out, exist_ok=True)
    return out


def _write_manifest(outdir: str, command: str, cfg: configparser.ConfigParser,
                    extra: Optional[dict] = None) -> None:
    with open(os.path.join(outdir, "manifest.txt"), "w") as fh:
        fh.write(f"command = {command}\n")
        fh.write(f"version = {__version__}\n")
        fh.write(f"timestamp = {time.strftime('%Y-%m-%dT%H:%M:%S')}\n")
        for section in cfg.sections():
            for key, value in sorted(cfg.items(section)):
                fh.write(f"{section}.{key} = {value}\n")
        for key, value in (extra or {}).items():
            fh.write(f"{key} = {value}\n")


def _grid_from(cfg: configparser.ConfigParser):
    return make_grid(cfg.getint("grid", "dim"), cfg.getint("grid", "points"),
                     cfg.getfloat("grid", "half_width"))


def _signal_from(cfg: configparser.ConfigParser, grid) -> Field:
    name = cfg.get("signal", "name")
    if name not in SIGNALS:
        raise UsageError(f"unknown signal {name!r}; choices: {sorted(SIGNALS)}")
    return make_signal(name, grid)


def _detector_params(cfg: configparser.ConfigParser, index: float) -> CriterionParams:
    d = cfg["detector"]
    return CriterionParams(
        s_or_r=index,
        b=cfg.getfloat("window", "b"),
        K_halfwidth=d.getfloat("k_halfwidth"),
        t0=d.getfloat("t0"),
        direction_sign=d.getint("direction_sign"),
        margin=d.getfloat("margin"),
        window_len=d.getint("window_len"),
        lambda_cap=d.getfloat("lambda_cap"),
    )


def _verdict_exit(verdict: str) -> int:
    return EXIT_OK if verdict in (CONVERGENT, DIVERGENT) else EXIT_INCONCLUSIVE


# ---------------------------------------------------------------- suites


class SuiteReport:
    """Per-check pass/fail records plus an overall status."""

    def __init__(self, name: str):
        self.name = name
        self.records: list[tuple[str, str, float, float]] = []
        self.start = time.time()

    def check(self, name: str, measured: float, tolerance: float) -> None:
        status = "pass" if measured <= tolerance else "FAIL"
        self.records.append((name, status, measured, tolerance))

    def skip(self, name: str, reason: str) -> None:
        self.records.append((name, f"skipped: {reason}", float("nan"), float("nan")))

    @property
    def passed(self) -> bool:
        return all(status != "FAIL" for _, status, _, _ in self.records)

    def write(self, fh) -> None:
        fh.write(f"suite = {self.name}\n")
        for name, status, measured, tol in self.records:
            fh.write(f"{name}: {status} (measured {measured:.3e}, tolerance {tol:.1e})\n")
        fh.write(f"overall = {'pass' if self.passed else 'FAIL'}\n")
        fh.write(f"wall_clock_s = {time.time() - self.start:.2f}\n")


def cmd_verify_identities(cfg: configparser.ConfigParser, args) -> int:
    outdir = _outdir(cfg, args)
    grid = _grid_from(cfg)
    report = SuiteReport("identities")
    gauss = Field(grid=grid, samples=np.exp(-grid.axis_points() ** 2 / 2.0))

    for name in ("gaussian", "step_gaussian", "chirped_gaussian"):
        f = make_signal(name, grid)
        report.check(f"plancherel[{name}]",
                     abs(plancherel_ratio(f, WINDOWS["gaussian"]) - 1.0), 1e-6)

    slc = WPTSlice(
        x_samples=grid.axis_points(),
        xi_samples=grid.axis_freqs(),
        values=wpt_full(gauss, WINDOWS["gaussian"]),
        window="gaussian",
    )
    for wname, wfn in WINDOWS.items():
        if abs(inner_product(
                Field(grid=grid, samples=wfn(grid.axis_points())), gauss)) < 1e-6:
            report.skip(f"inversion[{wname}]", "near-orthogonal window pair")
            continue
        rec = invert_wpt(slc, wfn, WINDOWS["gaussian"], grid)
        err = l2_norm(Field(grid=grid, samples=rec.samples - gauss.samples))
        report.check(f"inversion[{wname}]", err / l2_norm(gauss), 1e-6)

    for lam in (1.0, 4.0, 16.0):
        for t in (0.0, 0.3, 1.0):
            spec = WindowSpec(b=cfg.getfloat("window", "b"), lam=lam, t=t, dim=1)
            try:
                sampled = evaluate_window(spec, grid)
            except ResolutionError as exc:
                report.skip(f"closed_form[lam={lam},t={t}]", str(exc))
                continue
            prop = free_propagate(evaluate_window(spec.at_time(0.0), grid), t)
            err = float(np.max(np.abs(sampled.samples - prop.samples)))
            report.check(f"closed_form[lam={lam},t={t}]", err, 1e-8)

    spec = WindowSpec(b=0.25, lam=4.0, t=0.3, dim=1)
    rep = conjugation_identity_check(gauss, spec)
    report.check("conjugation", rep.max_deviation, 1e-8)

    exact = abs(nonlinear_pairing(WindowSpec(b=0.25, lam=1.0, t=0.0, dim=1),
                                  NonlinearityPowers(2, 0)))
    report.check("pairing_value", abs(exact - np.sqrt(2 * np.pi / 3.0)), 1e-8)

    lambdas = 10.0 ** np.linspace(0.0, 3.0, 25)
    for p, q in ((2, 0), (2, 1)):
        bound = pairing_lower_bound_check(0.25, NonlinearityPowers(p, q), lambdas)
        with open(os.path.join(outdir, f"pairing_p{p}q{q}.csv"), "w") as fh:
            write_pairing_csv(bound, fh)
        for regime in ("inner", "outer"):
            report.check(f"pairing_bound[p={p},q={q},{regime}]",
                         bound.stability(regime), 0.2)

    phi = evaluate_window(WindowSpec(b=0.25, lam=4.0, t=0.3, dim=1), grid)
    nphi = Field(grid=grid, samples=phi.samples ** 2 * np.conj(phi.samples))
    wc = window_change_bound_check(gauss, phi, nphi)
    report.check("window_change_bound", wc.max_violation, 1e-6)

    traj = nls_solve(gauss, None, 0.5, 64)
    duh = duhamel_residual(traj, WindowSpec(b=0.25, lam=2.0, t=0.5, dim=1),
                           np.array([0.5, 1.0]), np.array([0.0, 1.0]))
    report.check("duhamel_free", duh.max_residual, 1e-8)

    with open(os.path.join(outdir, "suite_report.txt"), "w") as fh:
        report.write(fh)
    _write_manifest(outdir, "verify-identities", cfg,
                    {"overall": "pass" if report.passed else "FAIL"})
    for name, status, measured, tol in report.records:
        print(f"{name}: {status}")
    return EXIT_OK if report.passed else EXIT_NUMERICAL


def cmd_detect(cfg: configparser.ConfigParser, args) -> int:
    outdir = _outdir(cfg, args)
    grid = _grid_from(cfg)
    f = _signal_from(cfg, grid)
    s = cfg.getfloat("detector", "s")
    pt = PhasePoint(cfg.getfloat("detector", "x0"), cfg.getfloat("detector", "xi0"))
    method = cfg.get("detector", "method")
    if method == "cone":
        curve = cone_fourier_detect(f, pt, s)
    elif method == "wavepacket":
        wname = cfg.get("window", "name")
        window = WINDOWS[wname] if wname != "gaussian" else None
        curve = wavepacket_detect(f, pt, s, _detector_params(cfg, s), window=window)
    else:
        raise UsageError(f"unknown detector method {method!r}")
    _emit_curve(curve, outdir, "curve")
    _write_manifest(outdir, "detect", cfg, {"verdict": curve.verdict,
                                            "tail_slope": repr(curve.tail_slope)})
    print(f"verdict = {curve.verdict} (tail slope {curve.tail_slope:.3f})")
    return _verdict_exit(curve.verdict)


def cmd_transported(cfg: configparser.ConfigParser, args) -> int:
    outdir = _outdir(cfg, args)
    grid = _grid_from(cfg)
    f = _signal_from(cfg, grid)
    r = cfg.getfloat("detector", "r")
    params = _detector_params(cfg, r)
    curve = transported_criterion(f, cfg.getfloat("detector", "xi0"), params, r)
    _emit_curve(curve, outdir, "transported")
    _write_manifest(outdir, "transported", cfg, {"verdict": curve.verdict})
    print(f"verdict = {curve.verdict} (tail slope {curve.tail_slope:.3f})")
    for warning in curve.warnings:
        print(f"warning: {warning}")
    return _verdict_exit(curve.verdict)


def cmd_solve(cfg: configparser.ConfigParser, args) -> int:
    outdir = _outdir(cfg, args)
    grid = _grid_from(cfg)
    u0 = _signal_from(cfg, grid)
    powers = NonlinearityPowers(cfg.getint("solver", "p"), cfg.getint("solver", "q"))
    traj = nls_solve(u0, powers, cfg.getfloat("solver", "t0"),
                     cfg.getint("solver", "steps"),
                     scheme=cfg.get("solver", "scheme"))
    save_trajectory(traj, os.path.join(outdir, "trajectory"))
    cons = conservation_report(traj)
    with open(os.path.join(outdir, "conservation.txt"), "w") as fh:
        fh.write(f"mass_drift = {float(cons.mass_drift)!r}\n")
        fh.write(f"energy_drift = {cons.energy_drift if cons.energy_drift is None else float(cons.energy_drift)!r}\n")
    _write_manifest(outdir, "solve", cfg, {"mass_drift": repr(cons.mass_drift),
                                           "blew_up": traj.blew_up})
    print(f"solved to t={traj.times[-1]:g}; mass drift {cons.mass_drift:.3e}")
    return EXIT_NUMERICAL if traj.blew_up else EXIT_OK


def cmd_theorem2(cfg: configparser.ConfigParser, args) -> int:
    outdir = _outdir(cfg, args)
    grid = _grid_from(cfg)
    u0 = _signal_from(cfg, grid)
    powers = NonlinearityPowers(cfg.getint("solver", "p"), cfg.getint("solver", "q"))
    rep = theorem2_experiment(
        u0, powers,
        t0=cfg.getfloat("solver", "t0"),
        xi0=cfg.getfloat("detector", "xi0"),
        r=cfg.getfloat("detector", "r"),
        s=cfg.getfloat("detector", "s"),
        b=cfg.getfloat("window", "b"),
        n_steps=cfg.getint("solver", "steps"),
        lambda_cap=cfg.getfloat("detector", "lambda_cap"),
    )
    for label, curve in (("condition2", rep.condition2), ("condition3", rep.condition3)):
        if curve is not None:
            _emit_curve(curve, outdir, label)
    for z, curve in zip(rep.conclusion_centers, rep.conclusion_curves):
        _emit_curve(curve, outdir, f"conclusion_z{z:+.3f}")
    save_trajectory(rep.trajectory, os.path.join(outdir, "trajectory"))
    with open(os.path.join(outdir, "report.txt"), "w") as fh:
        for line in rep.summary_lines() + rep.notes:
            fh.write(line + "\n")
    _write_manifest(outdir, "theorem2", cfg,
                    {"hypotheses_convergent": rep.hypotheses_convergent,
                     "implication_held": rep.implication_held})
    for line in rep.summary_lines():
        print(line)
    if not rep.implication_held:
        return EXIT_NUMERICAL
    return EXIT_OK if rep.hypotheses_convergent else EXIT_INCONCLUSIVE


def cmd_plotdata(cfg: configparser.ConfigParser, args) -> int:
    outdir = _outdir(cfg, args)
    if not args.inputs:
        raise UsageError("plotdata needs at least one input file")
    for path in args.inputs:
        if not os.path.exists(path):
            raise FileNotFoundError(path)
        stem = os.path.splitext(os.path.basename(path))[0]
        with open(path) as fh:
            header = fh.readline()
        if header.startswith("lambda,"):
            _plot_curve(path, outdir, stem)
        elif header.startswith("# window"):
            _plot_slice(path, outdir, stem)
        else:
            raise UsageError(f"unrecognized input format in {path}")
    _write_manifest(outdir, "plotdata", cfg, {"inputs": ",".join(args.inputs)})
    return EXIT_OK


def _plot_curve(path: str, outdir: str, stem: str) -> None:
    data = np.genfromtxt(path, delimiter=",", names=True)
    lam, g = data["lambda"], data["integrand"]
    keep = g > 0
    loglam, logg = np.log(lam[keep]), np.log(g[keep])
    with open(os.path.join(outdir, f"{stem}_loglog.dat"), "w") as fh:
        for a, b in zip(loglam, logg):
            fh.write(f"{float(a)!r} {float(b)!r}\n")
    n_fit = min(8, loglam.size)
    slope, intercept = np.polyfit(loglam[-n_fit:], logg[-n_fit:], 1)
    with open(os.path.join(outdir, f"{stem}_fit.dat"), "w") as fh:
        for a in (loglam[-n_fit], loglam[-1]):
            fh.write(f"{float(a)!r} {float(slope * a + intercept)!r}\n")


def _plot_slice(path: str, outdir: str, stem: str) -> None:
    data = np.genfromtxt(path, delimiter=",", names=True, skip_header=1)
    x, xi = np.unique(data["x"]), np.unique(data["xi"])
    mag = np.hypot(data["re"], data["im"]).reshape(x.size, xi.size)
    with open(os.path.join(outdir, f"{stem}_matrix.dat"), "w") as fh:
        for row in mag:
            fh.write(" ".join(repr(v) for v in row) + "\n")
            fh.write("\n")


def _emit_curve(curve: CriterionCurve, outdir: str, stem: str) -> None:
    with open(os.path.join(outdir, f"{stem}.csv"), "w") as fh:
        write_curve_csv(curve, fh)
    with open(os.path.join(outdir, f"{stem}_summary.txt"), "w") as fh:
        write_curve_summary(curve, fh)


# ---------------------------------------------------------------- entry point

COMMANDS: dict[str, Callable] = {
    "verify-identities": cmd_verify_identities,
    "detect": cmd_detect,
    "transported": cmd_transported,
    "solve": cmd_solve,
    "theorem2": cmd_theorem2,
    "plotdata": cmd_plotdata,
}


def _add_common(parser: argparse.ArgumentParser, suppress: bool) -> None:
    # The same options are accepted before or after the subcommand name.
    d = argparse.SUPPRESS if suppress else None
    parser.add_argument("--config", default=d, help="INI-style config file")
    parser.add_argument("--set", action="append", metavar="SEC.KEY=VAL",
                        default=argparse.SUPPRESS if suppress else [],
                        help="override one config value")
    parser.add_argument("-o", "--outdir", default=d, help="output directory")
    parser.add_argument("--workers", type=int, default=d,
                        help="worker-count override (advisory)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wpnls",
        description="Wave packet transform identities, NLS propagation, and "
                    "microlocal regularity experiments.",
    )
    _add_common(parser, suppress=False)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        _add_common(p, suppress=True)
        if name == "plotdata":
            p.add_argument("inputs", nargs="*")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        cfg = load_config(args.config, args.set)
        return COMMANDS[args.command](cfg, args)
    except (UsageError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"missing input: {exc}", file=sys.stderr)
        return EXIT_NOINPUT
    except WpnlsError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
