"""Static figures for the CLI report path (Agg backend, files only)."""
from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

golden_mean = (math.sqrt(5) - 1.0) / 2.0
fig_width = 6.0

params = {
    "axes.labelsize": 10,
    "font.size": 9,
    "font.family": "serif",
    "mathtext.fontset": "stix",
    "legend.fontsize": 8,
    "legend.frameon": False,
    "xtick.labelsize": 9,
    "ytick.labelsize": 9,
    "xtick.direction": "in",
    "ytick.direction": "in",
    "lines.linewidth": 1.2,
    "figure.dpi": 150,
    "savefig.bbox": "tight",
}


def new_figure(nrows=1, ncols=1, height_scale=1.0):
    with plt.rc_context(params):
        fig, ax = plt.subplots(nrows, ncols, figsize=(fig_width, fig_width * golden_mean * height_scale),
                               squeeze=False)
    return fig, ax


def save(fig, path):
    with plt.rc_context(params):
        fig.savefig(path)
    plt.close(fig)


def plot_spectrum(rows, path, title=None, reference=None, reference_label="linear"):
    """T and R against omega; adds a dT/domega panel when present."""
    omega = np.array([r.omega for r in rows])
    has_slope = rows and rows[0].dT_domega is not None
    fig, ax = new_figure(2 if has_slope else 1, 1, 1.6 if has_slope else 1.0)
    a = ax[0, 0]
    a.plot(omega, [r.T for r in rows], label="T")
    a.plot(omega, [r.R for r in rows], label="R", ls="--")
    if reference:
        a.plot([r.omega for r in reference], [r.T for r in reference], label=f"T ({reference_label})",
               color="tab:orange", lw=0.8)
    a.set_ylabel("probability")
    a.set_ylim(-0.02, 1.02)
    a.legend(loc="best")
    if title:
        a.set_title(title)
    if has_slope:
        b = ax[1, 0]
        b.plot(omega, [r.dT_domega for r in rows], color="k")
        b.axhline(0, color="0.6", lw=0.6)
        b.set_ylabel(r"$\partial_\omega T$")
        b.set_xlabel(r"$\omega/\omega_2$")
    else:
        a.set_xlabel(r"$\omega/\omega_2$")
    save(fig, path)


def plot_bands(report, path, title=None):
    """cos(KL) per spacing with forbidden intervals shaded."""
    spacings = list(report.intervals)
    fig, ax = new_figure(1, len(spacings), 1.2)
    for a, spacing in zip(ax[0], spacings):
        rows = [r for r in report.rows if r["spacing"] == spacing]
        omega = np.array([r["omega"] for r in rows])
        cos_kl = np.array([r["cos_KL"] for r in rows])
        cos_kl[np.abs(cos_kl) > 3] = np.nan  # break the curve across poles
        a.plot(cos_kl, omega, color="k", lw=0.8)
        for iv in report.intervals[spacing]:
            if iv.kind == "forbidden":
                a.axhspan(iv.omega_start, iv.omega_end, color="tab:green", alpha=0.25, lw=0)
        a.axvline(-1, color="0.6", lw=0.6)
        a.axvline(1, color="0.6", lw=0.6)
        a.set_xlim(-3, 3)
        a.set_xlabel(r"$\cos(KL)$")
        a.set_title(rf"$L={spacing:g}\,\lambda_0$")
    ax[0, 0].set_ylabel(r"$\omega/\omega_2$")
    if title:
        fig.suptitle(title)
    save(fig, path)


def plot_gapfit(report, path):
    """Computed gap differences and the fitted logarithmic law."""
    js = np.array([s["J"] for s in report["samples"]])
    fig, ax = new_figure()
    a = ax[0, 0]
    a.plot(js, [s["delta_omega_B"] for s in report["samples"]], "o", color="tab:red", ms=4, label="computed")
    grid = np.geomspace(min(js.min(), 0.8), js.max(), 200)
    slope = 1.0 / math.log(report["base_b"])
    a.plot(grid, slope * np.log(grid) + report["xi"], color="tab:blue",
           label=rf"fit: $b={report['base_b']:.3g}$, $\xi={report['xi']:.3g}$")
    reference = report["reference"]
    a.plot(grid, np.log(grid) / math.log(reference["base_b"]) + reference["xi"], color="0.5", ls=":",
           label=rf"$b={reference['base_b']}$, $\xi={reference['xi']}$")
    a.axhline(0, color="0.7", lw=0.6)
    a.set_xlabel(r"$J/\omega_2$")
    a.set_ylabel(r"$\Delta\omega_B/\omega_2$")
    a.legend(loc="best")
    save(fig, path)
