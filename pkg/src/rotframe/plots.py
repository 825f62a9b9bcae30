"""Figure rendering for the report paths; headless backend, PNG output."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

__all__ = [
    "potential_figure",
    "field_figure",
    "bloch_figure",
    "evolve_figure",
    "phase_figure",
    "sweep_figure",
]


def _save(fig, path) -> Path:
    path = Path(path)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def potential_figure(path, x, q, v):
    fig = plt.figure(figsize=(7, 4.5))
    ax = fig.add_subplot(111)
    ax.plot(x, v[:, 0, 0], label="V11")
    if v.shape[-1] > 1:
        ax.plot(x, v[:, 1, 1], label="V22")
        ax.plot(x, v[:, 0, 1], label="V12", ls="--")
    ax.plot(x, q, label="scalar part", color="k", lw=0.8)
    ax.set_xlabel("x")
    ax.set_ylabel("coupling")
    ax.legend(loc="best", fontsize=8)
    return _save(fig, path)


def field_figure(path, profile):
    fig = plt.figure(figsize=(8, 4))
    ax1 = fig.add_subplot(121)
    ax1.plot(profile.x, profile.omega_bar, label="bare magnitude")
    ax1.plot(profile.x, profile.omega_dressed, label="dressed magnitude")
    ax1.set_xlabel("x")
    ax1.legend(loc="best", fontsize=8)
    ax2 = fig.add_subplot(122)
    ax2.plot(profile.x, profile.theta_bar, label="bare tilt")
    ax2.plot(profile.x, profile.theta_dressed, label="dressed tilt")
    ax2.set_xlabel("x")
    ax2.set_ylabel("angle [rad]")
    ax2.legend(loc="best", fontsize=8)
    return _save(fig, path)


def bloch_figure(path, t_values, b_center):
    """Lab-field components at the grid center as functions of time."""
    fig = plt.figure(figsize=(7, 4))
    ax = fig.add_subplot(111)
    for i, label in enumerate(("B1", "B2", "B3")):
        ax.plot(t_values, b_center[:, i], label=label)
    ax.set_xlabel("t")
    ax.set_ylabel("field component")
    ax.legend(loc="best", fontsize=8)
    return _save(fig, path)


def evolve_figure(path, overlaps):
    fig = plt.figure(figsize=(4.5, 4.5))
    ax = fig.add_subplot(111)
    ax.plot(overlaps.real, overlaps.imag, lw=1.0)
    ax.plot([overlaps[0].real], [overlaps[0].imag], "o", ms=5, label="start")
    ax.plot([overlaps[-1].real], [overlaps[-1].imag], "s", ms=5, label="end")
    ax.set_xlabel("Re overlap")
    ax.set_ylabel("Im overlap")
    ax.set_aspect("equal")
    ax.legend(loc="best", fontsize=8)
    return _save(fig, path)


def phase_figure(path, reports):
    fig = plt.figure(figsize=(7, 4))
    ax = fig.add_subplot(111)
    names = ("total", "dynamical", "geometric", "aa")
    width = 0.8 / max(len(reports), 1)
    base = np.arange(len(names))
    for k, rep in enumerate(reports):
        vals = (rep.total, rep.dynamical, rep.geometric, rep.anandan)
        ax.bar(base + k * width, vals, width=width, label=f"state {rep.state}")
    ax.set_xticks(base + 0.4 - width / 2)
    ax.set_xticklabels(names)
    ax.axhline(0.0, color="k", lw=0.6)
    ax.set_ylabel("phase [rad]")
    ax.legend(loc="best", fontsize=8)
    return _save(fig, path)


def sweep_figure(path, rows):
    fig = plt.figure(figsize=(5.5, 4))
    ax = fig.add_subplot(111)
    ratios = [r.omega_ratio for r in rows]
    devs = [r.deviation for r in rows]
    ax.loglog(ratios, devs, "o-")
    ax.set_xlabel("frame rate / field magnitude")
    ax.set_ylabel("|geometric - adiabatic limit|")
    ax.grid(True, which="both", alpha=0.3)
    return _save(fig, path)
