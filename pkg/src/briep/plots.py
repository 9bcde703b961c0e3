"""Figure rendering for run reports.

Four panels, saved as PNG next to the delimited output: the error sweep
with the predicted slope, the node/pole layout on the boundaries, the
per-panel density profiles, and (when a grid was configured) the contour
map of the discrete potential.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["errors_figure", "points_figure", "density_figure",
           "potential_figure", "save_all"]


def _component_outline(component, samples=400):
    arcs = np.linspace(0.0, component.length, samples)
    pts = np.array([component.point_at(min(s, component.length)) for s in arcs])
    if component.closed:
        pts = np.append(pts, pts[:1])
    return pts


def _draw_boundaries(ax, report):
    for comp in report.boundary_E.components:
        pts = _component_outline(comp)
        ax.plot(pts.real, pts.imag, color="0.6", lw=0.8)
    if report.boundary_F is not None:
        for comp in report.boundary_F.components:
            pts = _component_outline(comp)
            ax.plot(pts.real, pts.imag, color="0.6", lw=0.8, ls="--")


def errors_figure(report):
    fig, ax = plt.subplots(figsize=(6, 4.5))
    ns = np.array([r.n for r in report.results])
    errs = np.array([r.max_error for r in report.results])
    ax.semilogy(ns, errs, "o-", ms=3, lw=0.8, label="max error")
    rho = report.predicted_rate
    if math.isfinite(rho) and 0 < rho < 1 and np.any(errs > 0):
        k = int(np.argmax(errs > 0))
        anchor = errs[k] / rho ** ns[k]
        ax.semilogy(ns, anchor * rho ** ns.astype(float), "r--", lw=1.0,
                    label=f"predicted {rho:.4g}^n")
    ax.set_xlabel("n")
    ax.set_ylabel("max error")
    ax.legend(loc="best")
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    return fig


def points_figure(report):
    fig, ax = plt.subplots(figsize=(5.5, 5.5))
    _draw_boundaries(ax, report)
    final = report.final
    ax.plot(final.nodes.real, final.nodes.imag, ".", color="tab:blue", ms=4,
            label=f"nodes (n={final.n})")
    if final.poles.size:
        ax.plot(final.poles.real, final.poles.imag, ".", color="tab:red", ms=4,
                label=f"poles (m={final.m})")
    ax.set_aspect("equal", adjustable="datalim")
    ax.legend(loc="best")
    fig.tight_layout()
    return fig


def density_figure(report):
    fig, ax = plt.subplots(figsize=(6, 4))
    sol = report.solution
    arcs_E = report.boundary_E.arc0 + report.boundary_E.lengths / 2.0
    ax.plot(arcs_E, sol.density_E.values, lw=0.9, label="density on E")
    if report.boundary_F is not None:
        arcs_F = report.boundary_F.arc0 + report.boundary_F.lengths / 2.0
        ax.plot(arcs_F, sol.density_F.values, lw=0.9, ls="--", label="density on F")
    ax.set_xlabel("arc length")
    ax.set_ylabel("panel density")
    ax.legend(loc="best")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    return fig


def potential_figure(report, xs, ys, U):
    fig, ax = plt.subplots(figsize=(6, 5))
    finite = np.isfinite(U)
    levels = 30
    if finite.any():
        lo, hi = np.percentile(U[finite], [2, 98])
        if hi > lo:
            levels = np.linspace(lo, hi, 30)
    masked = np.where(finite, U, np.nan)
    cs = ax.contour(xs, ys, masked, levels=levels, linewidths=0.6)
    fig.colorbar(cs, ax=ax, shrink=0.85)
    _draw_boundaries(ax, report)
    final = report.final
    ax.plot(final.nodes.real, final.nodes.imag, ".", color="tab:blue", ms=3)
    if final.poles.size:
        ax.plot(final.poles.real, final.poles.imag, ".", color="tab:red", ms=3)
    ax.set_aspect("equal", adjustable="box")
    fig.tight_layout()
    return fig


def save_all(report, out_dir, grid_data=None):
    """Render every applicable figure into ``out_dir``."""
    pairs = [
        ("errors.png", errors_figure(report)),
        ("points.png", points_figure(report)),
        ("density.png", density_figure(report)),
    ]
    if grid_data is not None:
        pairs.append(("potential.png", potential_figure(report, *grid_data)))
    for name, fig in pairs:
        fig.savefig(out_dir / name, dpi=150)
        plt.close(fig)
