"""Command-line front end: figure data generation, verification, CSV/JSON emission.

Subcommands of the `becback` executable:

    fig        emit the data behind one of the five standard figures
               (1: depletion vs system size, sudden quench; 2: depletion vs
               switching time at ell=20; 3: power vs system size, sudden
               quench; 4: power vs switching time; 5: total energy vs
               switching time)
    verify     run the conservation-law residuals plus the two integration
               oracles and write a machine-readable report
    depletion  single depletion time series
    energy     single energy-channel time series
    power      single power time series

Output files are self-describing: every parameter, the truncation tail bound
and the code version are recorded in `# key=value` header lines, followed by
a `t,value` column header and data rows with 15 significant digits.  Repeated
runs with identical inputs produce byte-identical files.

A flat `key = value` config file (keys equal to the long flag names, `#`
comments allowed) can seed any option; explicit flags override it.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .conservation import LAWS, verify
from .core import PhysicalParams
from .modes import (HISTORY, HistoryVacuum, QuasiparticleVacuum, VacuumChoice,
                    evaluate_mode, minimal_depletion_vacuum)
from .observables import correlators, observable_series
from .oracle import integrate_bdg, integrate_zeta

__all__ = ["FigureSpec", "RunConfig", "run_figure", "run_verify", "main"]

FIGURE_IDS = ("fig1", "fig2", "fig3", "fig4", "fig5")
_CHANNEL_OF_FIGURE = {"fig1": "depletion", "fig2": "depletion",
                      "fig3": "power", "fig4": "power", "fig5": "total"}
_SIZE_SWEEP = (10.0, 20.0, 40.0, 80.0)
_RAMP_SWEEP = (0.0, 0.5, 1.0, 5.0)
VERIFY_LAWS = LAWS + ("oracle_modes", "oracle_zeta")
_DEFAULT_TOLS = {"norm": 1e-9, "number_continuity": 1e-6, "energy_balance": 1e-6,
                 "momentum": 1e-10, "oracle_modes": 1e-6, "oracle_zeta": 1e-6}


@dataclass(frozen=True)
class FigureSpec:
    """One figure's channel, (ell, tau_s) sweep and time grid."""

    id: str
    channel: str
    sweep: tuple
    t_min: float
    t_max: float
    samples: int


@dataclass(frozen=True)
class RunConfig:
    """Shared run configuration for all subcommands."""

    params: PhysicalParams
    vacuum: VacuumChoice
    out_dir: Path
    fmt: str = "csv"
    mu_mode: str = "instantaneous"


# ---------------------------------------------------------------------------
# deterministic serialization
# ---------------------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.15g}"
    return str(x)


def _meta(spec_id, channel, ell, tau_s, config: RunConfig, t_min, t_max, samples,
          tail_bound, converged):
    meta = {
        "figure": spec_id, "channel": channel,
        "ell": ell, "tau_s": tau_s,
        "v_ext": config.params.v_ext, "n_max": config.params.n_max,
        "rel_tol": config.params.rel_tol,
        "vacuum": "history" if isinstance(config.vacuum, HistoryVacuum) else "qp",
        "mu_mode": config.mu_mode,
        "t_min": t_min, "t_max": t_max, "samples": samples,
        "tail_bound": tail_bound, "converged": converged,
    }
    if isinstance(config.vacuum, QuasiparticleVacuum):
        meta["alpha"] = config.vacuum.alpha
        meta["beta"] = config.vacuum.beta
    return meta


def _write_series(path: Path, meta: dict, times, values, fmt: str) -> Path:
    if fmt == "csv":
        lines = [f"# becback v{__version__}"]
        lines += [f"# {key}={_fmt(val)}" for key, val in meta.items()]
        lines.append("t,value")
        lines += [f"{_fmt(float(t))},{_fmt(float(v))}" for t, v in zip(times, values)]
        path.write_text("\n".join(lines) + "\n", encoding="ascii")
    else:
        doc = {"version": __version__, "meta": {k: _fmt(v) for k, v in meta.items()},
               "t": [_fmt(float(t)) for t in times],
               "value": [_fmt(float(v)) for v in values]}
        path.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n",
                        encoding="ascii")
    return path


def _series_for(channel, ell, tau_s, config: RunConfig, t_min, t_max, samples):
    params = PhysicalParams(ell=ell, tau_s=tau_s, v_ext=config.params.v_ext,
                            n_max=config.params.n_max, rel_tol=config.params.rel_tol)
    times = np.linspace(t_min, t_max, samples)
    series = observable_series(times, params, config.vacuum, config.mu_mode)
    return series, series.channels[channel]


# ---------------------------------------------------------------------------
# figure and verification drivers
# ---------------------------------------------------------------------------

def figure_spec(fig_id: str, ells=None, taus=None, t_min=None, t_max=None,
                samples=None) -> FigureSpec:
    """Default sweep for a figure id, with optional overrides."""
    if fig_id not in FIGURE_IDS:
        raise ValueError(f"unknown figure id {fig_id!r}")
    channel = _CHANNEL_OF_FIGURE[fig_id]
    if fig_id in ("fig1", "fig3"):
        sweep = tuple((ell, (taus or (0.0,))[0]) for ell in (ells or _SIZE_SWEEP))
    else:
        sweep = tuple(((ells or (20.0,))[0], tau) for tau in (taus or _RAMP_SWEEP))
    lo = 0.0 if t_min is None else t_min
    hi = (15.0 if fig_id == "fig5" else 30.0) if t_max is None else t_max
    return FigureSpec(id=fig_id, channel=channel, sweep=sweep,
                      t_min=lo, t_max=hi, samples=samples or 600)


def run_figure(spec: FigureSpec, config: RunConfig) -> list[Path]:
    """Emit one data file per sweep member; returns the written paths."""
    paths = []
    for ell, tau_s in spec.sweep:
        label = f"ell{ell:g}" if spec.id in ("fig1", "fig3") else f"tau{tau_s:g}"
        name = f"{spec.id}_{label}.{'csv' if config.fmt == 'csv' else 'json'}"
        series, values = _series_for(spec.channel, ell, tau_s, config,
                                     spec.t_min, spec.t_max, spec.samples)
        meta = _meta(spec.id, spec.channel, ell, tau_s, config,
                     spec.t_min, spec.t_max, spec.samples,
                     series.tail_bound, series.converged)
        paths.append(_write_series(config.out_dir / name, meta, series.times,
                                   values, config.fmt))
    return paths


def _oracle_modes_residual(config: RunConfig, t_end: float) -> float:
    params = config.params
    worst = 0.0
    for n in (1, 5, 20):
        traj = integrate_bdg(n, t_end, params, step_tol=1e-8)
        u, v = traj.at(t_end)
        exact = evaluate_mode(n, t_end, params, config.vacuum)
        worst = max(worst, (abs(u - exact.u) + abs(v - exact.v)) * np.sqrt(params.ell))
    return worst


def _oracle_zeta_residual(config: RunConfig, t_end: float) -> float:
    params = config.params

    def source(t):
        return correlators(t, params, config.vacuum, adaptive=False)

    traj = integrate_zeta(t_end, params, source, step_tol=1e-7)
    stride = max(1, len(traj.times) // 40)
    return max(abs(w.real + correlators(float(t), params, config.vacuum).n_dep)
               for t, w in zip(traj.times[::stride], traj.values[::stride]))


def run_verify(config: RunConfig, laws, tol=None, t_min=-1.0, t_max=10.0,
               samples=45) -> tuple[int, Path]:
    """Run the requested laws, write the JSON report, return (exit code, path)."""
    unknown = [law for law in laws if law not in VERIFY_LAWS]
    if unknown:
        raise ValueError(f"unknown laws {unknown}; choose from {VERIFY_LAWS}")
    grid = np.linspace(t_min, t_max, samples)
    entries = []
    for law in laws:
        law_tol = tol if tol is not None else _DEFAULT_TOLS[law]
        if law in LAWS:
            report = verify(law, grid, config.params, config.vacuum, law_tol)
            max_residual = report.max_residual
        elif law == "oracle_modes":
            max_residual = _oracle_modes_residual(config, t_max)
        else:
            max_residual = _oracle_zeta_residual(config, t_max)
        entries.append({"law": law, "max_residual": max_residual,
                        "tol": law_tol, "pass": bool(max_residual < law_tol)})
    path = config.out_dir / "verify_report.json"
    path.write_text(json.dumps(entries, indent=1, sort_keys=True) + "\n",
                    encoding="ascii")
    return (0 if all(e["pass"] for e in entries) else 1), path


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------

def _read_config_file(path: str) -> dict:
    values = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line without '=': {raw!r}")
        key, _, val = line.partition("=")
        values[key.strip()] = val.strip()
    return values


def _float_list(text: str) -> tuple:
    return tuple(float(tok) for tok in text.split(",") if tok.strip())


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ell", type=str, default=None,
                        help="ring circumference (comma list allowed for fig sweeps)")
    common.add_argument("--tau-s", type=str, default=None,
                        help="switching time (comma list allowed for fig sweeps)")
    common.add_argument("--v-ext", type=float, default=None, help="external potential")
    common.add_argument("--n-max", type=int, default=None, help="mode cutoff")
    common.add_argument("--rel-tol", type=float, default=None,
                        help="relative tolerance of mode sums")
    common.add_argument("--vacuum", choices=("history", "qp"), default=None)
    common.add_argument("--t0", type=float, default=None,
                        help="reference time of the minimal-depletion vacuum")
    common.add_argument("--alpha", type=float, default=None, help="qp vacuum alpha")
    common.add_argument("--beta", type=float, default=None, help="qp vacuum beta")
    common.add_argument("--mu-mode", choices=("instantaneous", "final"), default=None)
    common.add_argument("--t-min", type=float, default=None)
    common.add_argument("--t-max", type=float, default=None)
    common.add_argument("--samples", type=int, default=None)
    common.add_argument("--out", type=str, default=None, help="output directory")
    common.add_argument("--format", choices=("csv", "json"), default=None,
                        dest="format_", metavar="{csv,json}")
    common.add_argument("--config", type=str, default=None,
                        help="flat key=value config file; flags override it")

    parser = argparse.ArgumentParser(
        prog="becback",
        description="Quench backreaction of a homogeneous ring condensate")
    parser.add_argument("--version", action="version", version=f"becback v{__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    fig = sub.add_parser("fig", parents=[common], help="emit figure data files")
    fig.add_argument("--id", required=True, choices=FIGURE_IDS + tuple("12345"),
                     help="figure to generate")

    ver = sub.add_parser("verify", parents=[common],
                         help="conservation and oracle verification")
    ver.add_argument("--laws", type=str, default=",".join(VERIFY_LAWS),
                     help="comma list from " + ",".join(VERIFY_LAWS))
    ver.add_argument("--tol", type=float, default=None,
                     help="single tolerance overriding the per-law defaults")

    for name in ("depletion", "power"):
        sub.add_parser(name, parents=[common], help=f"single {name} time series")
    energy = sub.add_parser("energy", parents=[common], help="single energy series")
    energy.add_argument("--channel", choices=("total", "e_chi", "e_zeta", "g2"),
                        default="total")
    return parser


_CONFIG_KEYS = {
    "ell": str, "tau-s": str, "v-ext": float, "n-max": int, "rel-tol": float,
    "vacuum": str, "t0": float, "alpha": float, "beta": float, "mu-mode": str,
    "t-min": float, "t-max": float, "samples": int, "out": str, "format": str,
    "laws": str, "tol": float, "id": str, "channel": str,
}


def _apply_config(args: argparse.Namespace, parser: argparse.ArgumentParser):
    if not args.config:
        return
    try:
        file_values = _read_config_file(args.config)
    except OSError as exc:
        parser.error(f"cannot read config file: {exc}")
    except ValueError as exc:
        parser.error(str(exc))
    for key, text in file_values.items():
        if key not in _CONFIG_KEYS:
            parser.error(f"unknown config key {key!r}")
        dest = {"format": "format_"}.get(key, key.replace("-", "_"))
        if getattr(args, dest, None) is None:
            setattr(args, dest, _CONFIG_KEYS[key](text))


def _config_from(args: argparse.Namespace, ell: float, tau_s: float) -> RunConfig:
    params = PhysicalParams(
        ell=ell, tau_s=tau_s,
        v_ext=args.v_ext if args.v_ext is not None else 0.0,
        n_max=args.n_max if args.n_max is not None else 2000,
        rel_tol=args.rel_tol if args.rel_tol is not None else 1e-8)
    if args.vacuum == "qp":
        if args.alpha is not None:
            vacuum = QuasiparticleVacuum(args.alpha, args.beta or 0.0)
        else:
            alpha, beta = minimal_depletion_vacuum(args.t0 or 0.0)
            vacuum = QuasiparticleVacuum(alpha, beta)
    else:
        vacuum = HISTORY
    out_dir = Path(args.out) if args.out else Path(".")
    return RunConfig(params=params, vacuum=vacuum, out_dir=out_dir,
                     fmt=args.format_ or "csv",
                     mu_mode=args.mu_mode or "instantaneous")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    _apply_config(args, parser)

    ells = _float_list(args.ell) if args.ell else None
    taus = _float_list(args.tau_s) if args.tau_s else None

    try:
        if args.command == "fig":
            fig_id = args.id if args.id.startswith("fig") else f"fig{args.id}"
            spec = figure_spec(fig_id, ells, taus, args.t_min, args.t_max, args.samples)
            config = _config_from(args, spec.sweep[0][0], spec.sweep[0][1])
            config.out_dir.mkdir(parents=True, exist_ok=True)
            for path in run_figure(spec, config):
                print(path)
            return 0

        ell = (ells or (20.0,))[0]
        tau_s = (taus or (1.0,))[0]
        config = _config_from(args, ell, tau_s)
        config.out_dir.mkdir(parents=True, exist_ok=True)

        if args.command == "verify":
            laws = tuple(tok.strip() for tok in args.laws.split(",") if tok.strip())
            try:
                code, path = run_verify(config, laws, args.tol,
                                        t_min=args.t_min if args.t_min is not None else -1.0,
                                        t_max=args.t_max if args.t_max is not None else 10.0,
                                        samples=args.samples or 45)
            except ValueError as exc:
                parser.error(str(exc))
            print(path)
            return code

        # single-series subcommands share the grid and writer with fig
        t_min = args.t_min if args.t_min is not None else 0.0
        t_max = args.t_max if args.t_max is not None else 30.0
        samples = args.samples or 600
        channel = {"depletion": "depletion", "power": "power"}.get(args.command) \
            or args.channel
        series, values = _series_for(channel, ell, tau_s, config, t_min, t_max, samples)
        meta = _meta(args.command, channel, ell, tau_s, config, t_min, t_max,
                     samples, series.tail_bound, series.converged)
        name = f"{args.command}_{channel}.{'csv' if config.fmt == 'csv' else 'json'}" \
            if args.command == "energy" else \
            f"{args.command}.{'csv' if config.fmt == 'csv' else 'json'}"
        path = _write_series(config.out_dir / name, meta, series.times, values,
                             config.fmt)
        print(path)
        return 0
    except OSError as exc:
        print(f"becback: I/O error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
