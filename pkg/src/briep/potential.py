"""Discrete logarithmic potentials of node/pole families and rate fits.

The discrete potential of ``n+1`` nodes ``x_i`` and ``m`` poles ``z_j`` is

    U(z) = (1/(n+1)) * ( sum_i -log|z - x_i| + sum_j log|z - z_j| ),

the potential of the signed atomic measure that places ``1/(n+1)`` at each
node and ``-1/(n+1)`` at each pole.  Interpolation error decays like
``exp(-(n+1) * (c1 - U(q)))`` toward the nearest singularity ``q``, which is
what :func:`observed_rate` estimates from an error sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    InfinitePotentialError,
    InvalidGeometryError,
    RateUndefinedError,
)
from .geometry import require_finite_complex

__all__ = [
    "DiscreteMeasure",
    "discrete_potential",
    "potential_grid",
    "observed_rate",
]


@dataclass(frozen=True)
class DiscreteMeasure:
    """Signed atomic measure: ``+1/(n+1)`` per node, ``-1/(n+1)`` per pole."""

    positive_points: np.ndarray
    negative_points: np.ndarray = None

    def __post_init__(self):
        pos = np.atleast_1d(np.asarray(self.positive_points, dtype=complex))
        neg = (
            np.atleast_1d(np.asarray(self.negative_points, dtype=complex))
            if self.negative_points is not None and len(np.atleast_1d(self.negative_points))
            else np.array([], complex)
        )
        if pos.size == 0:
            raise ValueError("a discrete measure needs at least one positive atom")
        for arr, what in ((pos, "nodes"), (neg, "poles")):
            if arr.size and not np.all(np.isfinite(arr.view(float))):
                raise ValueError(f"{what} must be finite")
        if neg.size > pos.size:
            raise ValueError("a discrete measure cannot have more poles than nodes")
        object.__setattr__(self, "positive_points", pos)
        object.__setattr__(self, "negative_points", neg)

    @property
    def normalizer(self):
        """Number of positive atoms (``n + 1``)."""
        return self.positive_points.size


def _potential_values(measure, zs):
    zs = np.asarray(zs, dtype=complex)
    flat = zs.ravel()
    out = np.zeros(flat.shape, dtype=float)
    chunk = max(1, (1 << 22) // max(1, measure.normalizer + measure.negative_points.size))
    for lo in range(0, flat.size, chunk):
        part = flat[lo : lo + chunk]
        dpos = np.abs(part[:, None] - measure.positive_points[None, :])
        with np.errstate(divide="ignore"):
            acc = -np.log(dpos).sum(axis=1)
        if measure.negative_points.size:
            dneg = np.abs(part[:, None] - measure.negative_points[None, :])
            with np.errstate(divide="ignore", invalid="ignore"):
                acc = acc + np.log(dneg).sum(axis=1)
        out[lo : lo + chunk] = acc
    out /= measure.normalizer
    return out.reshape(zs.shape)


def discrete_potential(measure, z):
    """Potential of the signed discrete measure at a single point.

    Raises :class:`InfinitePotentialError` exactly at an atom.
    """
    z = require_finite_complex(z, "potential evaluation point")
    if np.any(measure.positive_points == z) or np.any(measure.negative_points == z):
        raise InfinitePotentialError(f"evaluation point {z!r} is an atom of the measure")
    return float(_potential_values(measure, np.array([z]))[0])


def potential_grid(measure, window, resolution):
    """Potential sampled on a rectangular grid, row-major.

    ``window`` is ``(x0, y0, x1, y1)`` with ``x0 < x1`` and ``y0 < y1``;
    ``resolution`` is ``(nx, ny)``.  Rows sweep ``y`` from ``y0`` to ``y1``,
    columns sweep ``x``.  Grid points that hit an atom get ``+inf`` (nodes)
    or ``-inf`` (poles) rather than raising.

    Returns ``(xs, ys, U)`` with ``U`` of shape ``(ny, nx)``.
    """
    x0, y0, x1, y1 = (float(v) for v in window)
    nx, ny = (int(v) for v in resolution)
    if not (x1 > x0 and y1 > y0):
        raise InvalidGeometryError(f"degenerate grid window {window!r}")
    if nx < 2 or ny < 2:
        raise InvalidGeometryError("grid needs at least 2 points per axis")
    xs = np.linspace(x0, x1, nx)
    ys = np.linspace(y0, y1, ny)
    Z = xs[None, :] + 1j * ys[:, None]
    U = _potential_values(measure, Z)
    hit_pos = np.isin(Z, measure.positive_points)
    U[hit_pos] = np.inf
    if measure.negative_points.size:
        U[np.isin(Z, measure.negative_points)] = -np.inf
    return xs, ys, U


def observed_rate(samples):
    """Geometric convergence factor fitted to ``(n, error)`` samples.

    Least-squares slope of ``log(error)`` against ``n``, exponentiated.
    Requires at least three samples with strictly increasing ``n`` and
    positive error, not all at the rounding floor (1e-15).
    """
    pts = [(int(n), float(e)) for n, e in samples]
    if any(e < 0 for _, e in pts):
        raise RateUndefinedError("errors must be nonnegative")
    pts = [(n, e) for n, e in pts if e > 0]
    if len(pts) < 3:
        raise RateUndefinedError("need at least three positive error samples")
    ns = np.array([n for n, _ in pts], dtype=float)
    if np.any(np.diff(ns) <= 0):
        raise RateUndefinedError("sample degrees must be strictly increasing")
    errs = np.array([e for _, e in pts])
    if np.all(errs < 1e-15):
        raise RateUndefinedError("all errors at rounding floor; rate undefined")
    slope = np.polyfit(ns, np.log(errs), 1)[0]
    return float(math.exp(slope))
