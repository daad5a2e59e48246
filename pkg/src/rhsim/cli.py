"""Command-line front end: sweep, probe, render, dump.

Exit codes: 0 success, 1 configuration error, 2 runtime failure. All
artifacts land in the --out directory (or $RHSIM_OUT) together with a run
manifest; report commands also render PNG figures next to the CSVs unless
--no-figures is given.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

import numpy as np

from . import __version__
from .channel import (NUSW, UPW, USW, channel_auto, channel_nusw, channel_upw,
                      channel_usw, classify_region, angles_of,
                      _element_distances, normalized_correlation)
from .energyopt import ee_sweep
from .errors import ConfigError
from .pipeline import build_system, link_state, system_radiation_pattern
from .report import (write_gains_csv, write_geometry_csv, write_hologram_csv,
                     write_manifest, write_radiation_csv, write_sweep_csv)
from .scenario import list_presets, load_scenario

OUT_ENV = "RHSIM_OUT"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sim",
        description="Holographic-surface aerial base station simulator.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", required=True,
                        help="scenario YAML path or bundled preset name "
                             f"({', '.join(list_presets())})")
        sp.add_argument("--out", default=None,
                        help=f"output directory (falls back to ${OUT_ENV})")
        sp.add_argument("--seed", type=int, default=None,
                        help="override the scenario seed")

    sweep = sub.add_parser("sweep", help="optimize efficiency across the circuit-power sweep")
    common(sweep)
    sweep.add_argument("--threads", type=int, default=1,
                       help="worker threads for independent sweep points")
    sweep.add_argument("--no-figures", action="store_true")

    probe = sub.add_parser("probe", help="classify a field point and summarize channel models")
    common(probe)
    probe.add_argument("--point", type=float, nargs=3, metavar=("X", "Y", "Z"),
                       default=[0.0, 0.0, 0.0],
                       help="probe point in meters (default: ground below the platform)")
    probe.add_argument("--dump-gains", action="store_true",
                       help="write per-element gain CSVs for each model")

    render = sub.add_parser("render", help="emit the scenario hologram and its radiation pattern")
    common(render)
    render.add_argument("--grid-start", type=float, default=-90.0)
    render.add_argument("--grid-stop", type=float, default=90.0)
    render.add_argument("--grid-step", type=float, default=0.25)
    render.add_argument("--no-figures", action="store_true")

    dump = sub.add_parser("dump", help="emit element and feed positions")
    common(dump)
    dump.add_argument("--no-figures", action="store_true")
    return parser


def _cmd_sweep(scenario, out_dir, args):
    report = ee_sweep(scenario, threads=args.threads)
    if all(not c and np.isnan(e)
           for c, e in zip(report.converged, report.ee_rhs_bpj)):
        raise RuntimeError("all sweep points failed")
    csv_path = os.path.join(out_dir, "ee_sweep.csv")
    write_sweep_csv(report, csv_path)
    artifacts = [csv_path]
    if not args.no_figures:
        from .plots import save_ee_sweep_figure

        fig_path = os.path.join(out_dir, "ee_sweep.png")
        save_ee_sweep_figure(report, fig_path)
        artifacts.append(fig_path)
    ok = [e for e in report.ee_rhs_bpj if np.isfinite(e)]
    print(f"sweep: {len(report.circuit_powers_w)} circuit-power points, "
          f"efficiency {min(ok):.4g} .. {max(ok):.4g} bit/J")
    print(f"wrote {csv_path}")
    return artifacts


def _model_rows(scenario, geometry, point):
    freq = scenario.radio.carrier_frequency_hz
    az, el = angles_of(np.asarray(point) - geometry.center)
    ref = float(_element_distances(geometry, point).mean())
    return {
        UPW: channel_upw(geometry, az, el, freq, ref),
        USW: channel_usw(geometry, point, freq),
        NUSW: channel_nusw(geometry, point, freq),
    }


def _cmd_probe(scenario, out_dir, args):
    geometry = scenario.build_geometry()
    freq = scenario.radio.carrier_frequency_hz
    point = np.asarray(args.point, dtype=float)
    tol = scenario.channel.amplitude_tolerance

    cls = classify_region(geometry, point, freq, tol)
    auto = channel_auto(geometry, point, freq, tol)
    print(f"point: {point.tolist()} m")
    print(f"region: {cls.region} (auto model: {auto.model})")
    print(f"distance_m: {cls.distance_m:.6g}")
    print(f"rayleigh_distance_m: {cls.rayleigh_distance_m:.6g}")
    print(f"uniform_power_distance_m: {cls.uniform_power_distance_m:.6g}")
    print(f"amplitude_ratio: {cls.amplitude_ratio:.9g}")

    rows = _model_rows(scenario, geometry, point)
    for tag, row in rows.items():
        mags = np.abs(row)
        print(f"{tag}: mean |gain| {20 * np.log10(mags.mean()):.4f} dB, "
              f"spread {mags.max() / mags.min():.6f}, "
              f"row norm {np.linalg.norm(row):.6e}")
    print(f"corr(UPW, USW): {normalized_correlation(rows[UPW], rows[USW]):.9f}")
    print(f"corr(USW, NUSW): {normalized_correlation(rows[USW], rows[NUSW]):.9f}")

    artifacts = []
    if args.dump_gains:
        for tag, row in rows.items():
            path = os.path.join(out_dir, f"probe_gains_{tag.lower()}.csv")
            write_gains_csv(row, path)
            artifacts.append(path)
        print(f"wrote per-element gains to {out_dir}")
    return artifacts


def _cmd_render(scenario, out_dir, args):
    if args.grid_step <= 0 or args.grid_stop <= args.grid_start:
        raise ConfigError("render grid must have positive step and stop > start")
    system = build_system(scenario)
    grid = np.arange(args.grid_start, args.grid_stop + args.grid_step / 2,
                     args.grid_step)
    pattern = system_radiation_pattern(system, grid)

    paths = {
        "continuous": os.path.join(out_dir, "hologram_continuous.csv"),
        "binary": os.path.join(out_dir, "hologram_binary.csv"),
        "radiation": os.path.join(out_dir, "radiation_pattern.csv"),
    }
    write_hologram_csv(system.hologram, system.geometry, paths["continuous"], "continuous")
    write_hologram_csv(system.hologram, system.geometry, paths["binary"], "binary")
    write_radiation_csv(pattern, paths["radiation"])
    artifacts = list(paths.values())

    if not args.no_figures:
        from .plots import save_hologram_figure, save_radiation_figure

        holo_png = os.path.join(out_dir, "hologram.png")
        rad_png = os.path.join(out_dir, "radiation_pattern.png")
        save_hologram_figure(system.hologram, system.geometry, holo_png)
        save_radiation_figure(pattern, rad_png,
                              targets_deg=system.users.azimuths_deg)
        artifacts += [holo_png, rad_png]

    active = system.hologram.active_count
    state = link_state(system)
    print(f"hologram: {active}/{system.geometry.n_elements} elements active "
          f"({100.0 * active / system.geometry.n_elements:.1f}%)")
    print(f"pattern peak at {pattern.argmax_deg:.2f} deg "
          f"(user azimuths: {np.round(system.users.azimuths_deg, 2).tolist()})")
    print("per-user rate [bit/s]:",
          np.array2string(state.per_user_rate, precision=4))
    return artifacts


def _cmd_dump(scenario, out_dir, args):
    geometry = scenario.build_geometry()
    users = scenario.build_users()
    csv_path = os.path.join(out_dir, "geometry.csv")
    write_geometry_csv(geometry, csv_path)
    artifacts = [csv_path]
    if not args.no_figures:
        from .plots import save_geometry_figure

        fig_path = os.path.join(out_dir, "geometry.png")
        save_geometry_figure(geometry, users, fig_path)
        artifacts.append(fig_path)
    print(f"geometry: {geometry.n_elements} elements, {geometry.n_feeds} feeds")
    print(f"wrote {csv_path}")
    return artifacts


_COMMANDS = {"sweep": _cmd_sweep, "probe": _cmd_probe,
             "render": _cmd_render, "dump": _cmd_dump}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    try:
        scenario = load_scenario(args.config)
        if args.seed is not None:
            scenario = scenario.with_seed(args.seed)
        out_dir = args.out or os.environ.get(OUT_ENV)
        if not out_dir:
            raise ConfigError(f"no output directory: pass --out or set ${OUT_ENV}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1

    started = time.perf_counter()
    try:
        os.makedirs(out_dir, exist_ok=True)
        artifacts = _COMMANDS[args.command](scenario, out_dir, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 2

    manifest_path = os.path.join(out_dir, "run_manifest.json")
    write_manifest(manifest_path, args.command, scenario, out_dir,
                   [os.path.basename(a) for a in artifacts],
                   time.perf_counter() - started)
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
