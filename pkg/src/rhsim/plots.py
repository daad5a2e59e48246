"""Matplotlib figures rendered next to the CSV artifacts."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def save_ee_sweep_figure(report, path) -> None:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    pc = np.asarray(report.circuit_powers_w)
    ax.loglog(pc, report.ee_rhs_bpj, "o-", label="platform + surface")
    ax.loglog(pc, report.ee_baseline_bpj, "s--", label="platform only (TDMA)")
    ax.set_xlabel("circuit power [W]")
    ax.set_ylabel("energy efficiency [bit/J]")
    ax.set_title("Energy efficiency vs circuit power")
    ax.grid(True, which="both", linestyle=":", linewidth=0.8)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_radiation_figure(pattern, path, targets_deg=None) -> None:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    gains = np.asarray(pattern.gains_db, dtype=float)
    floor = -60.0
    ax.plot(pattern.angles_deg, np.maximum(gains, floor), linewidth=1.2)
    if targets_deg is not None:
        for t in np.atleast_1d(targets_deg):
            ax.axvline(t, color="C3", linestyle="--", linewidth=0.9)
    ax.set_xlabel("azimuth [deg]")
    ax.set_ylabel("normalized gain [dB]")
    ax.set_ylim(floor, 3.0)
    ax.set_title("Radiation pattern")
    ax.grid(True, linestyle=":", linewidth=0.8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _pattern_image(values, geometry):
    img = np.full((geometry.elements_y, geometry.panels * geometry.elements_x), np.nan)
    cols = geometry.element_index[:, 0] * geometry.elements_x + geometry.element_index[:, 1]
    img[geometry.element_index[:, 2], cols] = values
    return img


def save_hologram_figure(hologram, geometry, path) -> None:
    fig, axes = plt.subplots(2, 1, figsize=(9, 4.5), sharex=True)
    for ax, values, title in ((axes[0], hologram.continuous, "continuous pattern"),
                              (axes[1], hologram.binary, "binary pattern")):
        im = ax.imshow(_pattern_image(values, geometry), origin="lower",
                       aspect="auto", vmin=0.0, vmax=1.0, cmap="viridis")
        ax.set_title(title)
        ax.set_ylabel("iy")
        fig.colorbar(im, ax=ax, fraction=0.046)
    axes[1].set_xlabel("element column (panel-major)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_geometry_figure(geometry, users, path) -> None:
    fig, (ax_array, ax_scene) = plt.subplots(1, 2, figsize=(11, 4.5))

    e = geometry.element_positions
    f = geometry.feed_positions
    ax_array.scatter(e[:, 0], e[:, 1], s=4, label="elements")
    ax_array.scatter(f[:, 0], f[:, 1], s=18, marker="x", color="C3", label="feeds")
    ax_array.set_xlabel("x [m]")
    ax_array.set_ylabel("y [m]")
    ax_array.set_title("Radiating surface (top view)")
    ax_array.set_aspect("equal", adjustable="datalim")
    ax_array.grid(True, linestyle=":", linewidth=0.8)
    ax_array.legend(loc="upper right", fontsize=8)

    platform = geometry.platform_position
    ax_scene.scatter([platform[0]], [platform[2]], marker="^", s=60,
                     color="C0", label="platform")
    if users is not None:
        u = users.positions
        ax_scene.scatter(u[:, 0], u[:, 2], marker="o", s=30, color="C2", label="users")
        for pos in u:
            ax_scene.plot([platform[0], pos[0]], [platform[2], pos[2]],
                          color="0.6", linewidth=0.8, linestyle="--")
    ax_scene.axhline(0.0, color="0.3", linewidth=1.0)
    ax_scene.set_xlabel("x [m]")
    ax_scene.set_ylabel("z [m]")
    ax_scene.set_title("Scene (side view)")
    ax_scene.grid(True, linestyle=":", linewidth=0.8)
    ax_scene.legend(loc="center right", fontsize=8)

    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
