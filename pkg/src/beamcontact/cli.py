"""Command line entry point: ``beamcontact {modal,simulate,fft,sweep}``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .config import ConfigError, ExperimentConfig, format_config, parse_config
from .csvio import CsvFormatError, read_timeseries_csv, write_csv, write_timeseries_csv
from .dynamics import DivergenceError, State, StabilityError, integrate
from .fem import assemble
from .modal import AnalyticModeConstants, analytic_frequencies, eigenfrequencies
from .spectrum import fft_amplitude, find_peaks
from .springs import SpringMode
from .sweep import run_sweep

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGED = 3
EXIT_PARTIAL_SWEEP = 4
EXIT_IO = 5

# flag dest -> (section, key)
_COMMON = {
    "n_elements": ("beam", "n_elements"),
    "mode": ("spring", "mode"),
    "k_r": ("spring", "k_r"),
    "node": ("spring", "node"),
}
_PER_KIND = {
    "modal": {"modes": ("run", "modes")},
    "simulate": {
        "a": ("excitation", "a"),
        "f": ("excitation", "f"),
        "excitation": ("excitation", "enabled"),
        "t_end": ("run", "t_end"),
        "dt": ("run", "dt"),
        "output_every": ("run", "output_every"),
        "ic": ("run", "ic"),
        "ic_amplitude": ("run", "ic_amplitude"),
    },
    "fft": {"input": ("run", "input"), "dof": ("run", "dof"), "threshold": ("run", "threshold")},
    "sweep": {
        "f0": ("sweep", "f0"),
        "f1": ("sweep", "f1"),
        "df": ("sweep", "df"),
        "a": ("sweep", "a"),
        "tf": ("sweep", "tf"),
        "dt": ("run", "dt"),
    },
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="beamcontact",
        description="Clamped beam with a bilateral or unilateral spring under shaker excitation.",
    )
    sub = parser.add_subparsers(dest="kind", required=True)

    def common(p):
        p.add_argument("--config", type=Path, help="experiment file ([beam], [spring], ... sections)")
        p.add_argument("--out", type=Path, default=Path("results"), help="output directory")
        p.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE",
                       help="override any config key (repeatable)")
        p.add_argument("--n-elements", dest="n_elements")
        p.add_argument("--mode", choices=[m.value for m in SpringMode])
        p.add_argument("--kr", dest="k_r", help="spring stiffness (N/m)")
        p.add_argument("--node", help="spring attachment node (default: middle)")

    p = sub.add_parser("modal", help="eigenfrequencies vs the clamped-clamped formula")
    common(p)
    p.add_argument("--modes")

    p = sub.add_parser("simulate", help="integrate one run, write time series and phase plane")
    common(p)
    p.add_argument("--a", help="shaker acceleration amplitude (m/s^2)")
    p.add_argument("--f", help="shaker frequency (Hz)")
    p.add_argument("--no-excitation", dest="excitation", action="store_const", const="false")
    p.add_argument("--t-end", dest="t_end")
    p.add_argument("--dt")
    p.add_argument("--output-every", dest="output_every")
    p.add_argument("--ic", choices=["rest", "released"])
    p.add_argument("--ic-amplitude", dest="ic_amplitude")

    p = sub.add_parser("fft", help="amplitude spectrum and peaks of a time series CSV")
    common(p)
    p.add_argument("--input", help="time series CSV written by 'simulate'")
    p.add_argument("--dof", help="DOF column index (default: the spring DOF)")
    p.add_argument("--threshold", help="peak threshold relative to the largest amplitude")

    p = sub.add_parser("sweep", help="stepped sweep-up test")
    common(p)
    for name in ("f0", "f1", "df", "a", "tf", "dt"):
        p.add_argument(f"--{name}")
    p.add_argument("--threads", type=int, help="worker threads (default: $BEAMCONTACT_THREADS or 1)")
    return parser


def _overrides(args):
    out = {}
    for dest, target in {**_COMMON, **_PER_KIND[args.kind]}.items():
        value = getattr(args, dest, None)
        if value is not None:
            out[target] = str(value)
    for item in args.set:
        lhs, sep, value = item.partition("=")
        section, dot, key = lhs.strip().partition(".")
        if not (sep and dot):
            raise ConfigError(f"--set expects SECTION.KEY=VALUE, got {item!r}")
        out[section, key] = value.strip()
    return out


def _load_config(args) -> ExperimentConfig:
    text = args.config.read_text() if args.config else ""
    cfg = parse_config(text, kind=args.kind, overrides=_overrides(args))
    if cfg.kind != args.kind:
        raise ConfigError(f"config is for '{cfg.kind}', not '{args.kind}'", "run", "kind")
    return cfg


def _run_modal(cfg, out):
    sys_ = assemble(cfg.beam, cfg.n_elements)
    spring = cfg.spring if cfg.spring.active else None
    res = eigenfrequencies(sys_, cfg.modes, spring)
    analytic = analytic_frequencies(cfg.beam, AnalyticModeConstants())
    rows = []
    print(f"{'mode':>4}  {'discrete_hz':>14}  {'analytic_hz':>14}  {'rel_error':>10}")
    for i, f in enumerate(res.frequencies_hz):
        if i < len(analytic):
            fa = analytic[i]
            err = (f - fa) / fa
            print(f"{i + 1:>4}  {f:14.5f}  {fa:14.5f}  {err:10.2e}")
            rows.append((i + 1, f, fa, err))
        else:
            print(f"{i + 1:>4}  {f:14.5f}  {'':>14}  {'':>10}")
            rows.append((i + 1, f, "", ""))
    write_csv(out / "modal.csv", ["mode", "discrete_hz", "analytic_hz", "rel_error"], rows)
    return EXIT_OK


def _run_simulate(cfg, out):
    sys_ = assemble(cfg.beam, cfg.n_elements)
    if cfg.ic == "released":
        ic = State.released(sys_, cfg.spring.node, cfg.ic_amplitude)
    else:
        ic = State.rest(sys_)
    series = integrate(sys_, cfg.spring, cfg.excitation, ic, cfg.t_end, cfg.dt, cfg.output_every)
    write_timeseries_csv(series, out / "timeseries.csv")
    j = sys_.dof_map.displacement_dof(cfg.spring.node)
    write_csv(
        out / "phase.csv",
        ["t", f"u{cfg.spring.node}", f"du{cfg.spring.node}_dt"],
        np.column_stack([series.t, series.q[:, j], series.v[:, j]]),
    )
    print(f"{series.n_samples} samples, dt = {series.dt:.6g} s -> {out}")
    return EXIT_OK


def _run_fft(cfg, out):
    series = read_timeseries_csv(cfg.input)
    dof = cfg.dof if cfg.dof is not None else int(series.metadata.get("spring_dof", 0))
    if not 0 <= dof < series.n_dof:
        raise ConfigError(f"dof {dof} out of range 0..{series.n_dof - 1}", "run", "dof")
    spec = fft_amplitude(series, dof)
    peaks = find_peaks(spec, cfg.threshold)
    write_csv(out / "spectrum.csv", ["frequency_hz", "amplitude"],
              np.column_stack([spec.frequencies, spec.amplitude]),
              metadata={"dof": dof, "df_bin": spec.df_bin, "n_samples": spec.n_samples})
    write_csv(out / "peaks.csv", ["frequency_hz", "amplitude", "bin"],
              [(p.frequency, p.amplitude, p.bin) for p in peaks])
    for p in peaks[:10]:
        print(f"{p.frequency:12.3f} Hz  {p.amplitude:.6g}")
    return EXIT_OK


def _run_sweep(cfg, out, threads):
    result = run_sweep(cfg.beam, cfg.sweep_config(), threads=threads)
    header = ["frequency_hz"]
    header += [f"umax_{n}" for n in result.nodes]
    header += [f"amax_{n}" for n in result.nodes]
    write_csv(out / "sweep.csv", header,
              np.column_stack([result.frequencies, result.max_displacement, result.max_acceleration]))
    for f, why in result.failures.items():
        print(f"sweep point {f:g} Hz failed: {why}", file=sys.stderr)
    print(f"{len(result.frequencies)} points, {len(result.failures)} failed -> {out}")
    return EXIT_PARTIAL_SWEEP if result.failures else EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = _load_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO

    out = args.out
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / "config.ini").write_text(format_config(cfg))
        if cfg.kind == "modal":
            return _run_modal(cfg, out)
        if cfg.kind == "simulate":
            return _run_simulate(cfg, out)
        if cfg.kind == "fft":
            return _run_fft(cfg, out)
        return _run_sweep(cfg, out, getattr(args, "threads", None))
    except (ConfigError, StabilityError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DivergenceError as exc:
        print(f"diverged: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except (OSError, CsvFormatError) as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
