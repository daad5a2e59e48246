"""CSV artifact writers and the run manifest.

All writers emit a fixed header row, a fixed column order, and format floats
identically on every run so repeated runs are byte-identical.
"""

from __future__ import annotations

import csv
import json
import math
import platform
import sys
import time

import numpy as np


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.12g}"
    return str(value)


def write_csv(path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def write_sweep_csv(report, path) -> None:
    n_users = len(report.per_user_rates[0])
    header = (["circuit_power_W", "ee_rhs_bpj", "ee_baseline_bpj"]
              + [f"rate_user_{k + 1}" for k in range(n_users)]
              + ["energy_J", "iterations", "converged"])
    rows = []
    for idx, pc in enumerate(report.circuit_powers_w):
        rows.append([pc, report.ee_rhs_bpj[idx], report.ee_baseline_bpj[idx],
                     *report.per_user_rates[idx], report.energies_j[idx],
                     report.iterations[idx], report.converged[idx]])
    write_csv(path, header, rows)


def write_geometry_csv(geometry, path) -> None:
    header = ["kind", "panel", "ix", "iy", "x", "y", "z"]
    rows = []
    for (panel, ix, iy), pos in zip(geometry.element_index, geometry.element_positions):
        rows.append(["element", panel, ix, iy, *pos])
    for (panel, slot), pos in zip(geometry.feed_index, geometry.feed_positions):
        rows.append(["feed", panel, slot, 0, *pos])
    write_csv(path, header, rows)


def write_hologram_csv(hologram, geometry, path, which) -> None:
    values = hologram.continuous if which == "continuous" else hologram.binary
    header = ["panel", "ix", "iy", "value"]
    rows = [[panel, ix, iy, value]
            for (panel, ix, iy), value in zip(geometry.element_index, values)]
    write_csv(path, header, rows)


def write_radiation_csv(pattern, path) -> None:
    write_csv(path, ["angle_deg", "gain_dB"],
              zip(pattern.angles_deg, pattern.gains_db))


def write_gains_csv(row, path) -> None:
    header = ["element", "re", "im", "magnitude_dB", "phase_rad"]
    mags = np.abs(row)
    with np.errstate(divide="ignore"):
        mags_db = 20.0 * np.log10(mags)
    rows = [[m, g.real, g.imag, db, phase]
            for m, (g, db, phase) in enumerate(zip(row, mags_db, np.angle(row)))]
    write_csv(path, header, rows)


def write_manifest(path, command, scenario, out_dir, artifacts, wall_time_s) -> None:
    from . import __version__

    manifest = {
        "command": command,
        "config_digest": scenario.digest,
        "seed": scenario.seed,
        "parameters": scenario.to_dict(),
        "artifacts": sorted(artifacts),
        "output_dir": str(out_dir),
        "wall_time_s": wall_time_s,
        "versions": {
            "rhsim": __version__,
            "numpy": np.__version__,
            "python": platform.python_version(),
        },
        "argv": sys.argv[1:],
        "written_at_unix": time.time(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
