"""Piecewise-smooth boundaries in the complex plane and their panelization.

A boundary component is an ordered chain of smooth pieces (line segments,
circular arcs, or parametric curves) that share endpoints.  Panelization
cuts each component into contiguous arc-length panels; panel endpoints
always include the chain's corners, and every panel records its arc-length
midpoint, which later serves as a collocation point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import InvalidGeometryError, OutOfRangeError

__all__ = [
    "LineSegment",
    "CircularArc",
    "ParametricPiece",
    "BoundaryComponent",
    "Panel",
    "PanelizedBoundary",
    "panelize",
    "point_at_arclength",
    "largest_remainder",
]

_JOIN_RTOL = 1e-9


def require_finite_complex(z, what="point"):
    """Coerce to complex and reject NaN/Inf components."""
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InvalidGeometryError(f"{what} must have finite components, got {z!r}")
    return z


class LineSegment:
    """Straight piece from ``a`` to ``b``, parametrized by arc length."""

    def __init__(self, a, b):
        self.a = require_finite_complex(a, "segment endpoint")
        self.b = require_finite_complex(b, "segment endpoint")
        self.length = abs(self.b - self.a)
        if self.length <= 0.0:
            raise InvalidGeometryError("segment endpoints coincide")

    def point(self, s):
        t = np.asarray(s, dtype=float) / self.length
        return self.a + (self.b - self.a) * t

    @property
    def start(self):
        return self.a

    @property
    def end(self):
        return self.b


class CircularArc:
    """Arc of a circle traversed from ``theta_start`` to ``theta_end``.

    Angles are in radians; the sweep direction is the sign of
    ``theta_end - theta_start``.  A full circle is the special case
    ``|theta_end - theta_start| == 2*pi``.
    """

    def __init__(self, center, radius, theta_start, theta_end):
        self.center = require_finite_complex(center, "arc center")
        self.radius = float(radius)
        self.theta_start = float(theta_start)
        self.theta_end = float(theta_end)
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise InvalidGeometryError(f"arc radius must be positive, got {radius!r}")
        if not (math.isfinite(self.theta_start) and math.isfinite(self.theta_end)):
            raise InvalidGeometryError("arc angles must be finite")
        if self.theta_end == self.theta_start:
            raise InvalidGeometryError("arc has zero angular sweep")
        self.length = self.radius * abs(self.theta_end - self.theta_start)
        self._sign = 1.0 if self.theta_end > self.theta_start else -1.0

    def point(self, s):
        th = self.theta_start + self._sign * np.asarray(s, dtype=float) / self.radius
        return self.center + self.radius * np.exp(1j * th)

    @property
    def start(self):
        return complex(self.point(0.0))

    @property
    def end(self):
        return complex(self.point(self.length))


class ParametricPiece:
    """Smooth curve given by a parametric map ``t -> point`` on ``[t0, t1]``.

    Arc length is computed numerically: the speed ``|dz/dt|`` is estimated by
    fourth-order central differences and integrated with a composite Simpson
    rule whose grid is doubled until the total length is converged to a
    relative tolerance of 1e-10.  The cumulative table is cached and inverted
    with a monotone interpolant, so ``point(s)`` is arc-length parametrized.

    The map must be evaluable on a slightly enlarged interval (the difference
    stencil steps ``2e-5 * (t1 - t0)`` outside the ends).
    """

    def __init__(self, fn, t0, t1, rel_tol=1e-10):
        self._fn = fn
        self.t0 = float(t0)
        self.t1 = float(t1)
        if not (math.isfinite(self.t0) and math.isfinite(self.t1) and self.t1 > self.t0):
            raise InvalidGeometryError("parametric domain must be a finite increasing interval")
        self._rel_tol = float(rel_tol)
        self._build_table()

    def _speed(self, t):
        t = np.asarray(t, dtype=float)
        h = (self.t1 - self.t0) * 1e-5
        fn = self._fn

        def z(u):
            return np.asarray(fn(u), dtype=complex)

        d = (z(t - 2 * h) - 8.0 * z(t - h) + 8.0 * z(t + h) - z(t + 2 * h)) / (12.0 * h)
        return np.abs(d)

    def _build_table(self):
        m = 1024
        total_prev = None
        while True:
            ts = np.linspace(self.t0, self.t1, m + 1)
            sp = self._speed(ts)
            sp_mid = self._speed(0.5 * (ts[:-1] + ts[1:]))
            if sp.min() <= 0.0 or sp_mid.min() <= 0.0:
                raise InvalidGeometryError("parametric piece has a stationary point (zero speed)")
            h = (self.t1 - self.t0) / m
            seg = (h / 6.0) * (sp[:-1] + 4.0 * sp_mid + sp[1:])
            cum = np.concatenate(([0.0], np.cumsum(seg)))
            total = cum[-1]
            if total_prev is not None and abs(total - total_prev) <= self._rel_tol * total:
                break
            if m >= 1 << 17:
                break
            total_prev = total
            m *= 2
        # strictly increasing by the positive-speed check above
        self._ts = ts
        self._cum = cum
        self.length = float(total)
        self._inv = PchipInterpolator(cum, ts)

    def point(self, s):
        s = np.clip(np.asarray(s, dtype=float), 0.0, self.length)
        return np.asarray(self._fn(self._inv(s)), dtype=complex)

    @property
    def start(self):
        return complex(self.point(0.0))

    @property
    def end(self):
        return complex(self.point(self.length))


class BoundaryComponent:
    """Ordered chain of pieces forming one open or closed boundary curve.

    Consecutive pieces must share endpoints; a closed component's last piece
    must end where the first begins.
    """

    def __init__(self, pieces, closed):
        pieces = list(pieces)
        if not pieces:
            raise InvalidGeometryError("boundary component has no pieces")
        self.pieces = pieces
        self.closed = bool(closed)
        ends = [p.end for p in pieces] + [p.start for p in pieces]
        scale = max(1.0, max(abs(z) for z in ends))
        for k in range(len(pieces) - 1):
            if abs(pieces[k].end - pieces[k + 1].start) > _JOIN_RTOL * scale:
                raise InvalidGeometryError(
                    f"pieces {k} and {k + 1} do not share an endpoint"
                )
        if self.closed and abs(pieces[-1].end - pieces[0].start) > _JOIN_RTOL * scale:
            raise InvalidGeometryError("closed component does not return to its start")
        self._piece_lengths = np.array([p.length for p in pieces], dtype=float)
        self._cum = np.concatenate(([0.0], np.cumsum(self._piece_lengths)))
        self.length = float(self._cum[-1])

    @property
    def start(self):
        return complex(self.pieces[0].start)

    @property
    def end(self):
        return complex(self.pieces[-1].end)

    def point_at(self, s):
        """Point at arc length ``s`` from the component's start.

        Closed components wrap ``s`` modulo the total length; open components
        raise ``OutOfRangeError`` outside ``[0, length]`` (up to a tiny slack).
        """
        scalar = np.isscalar(s)
        s = np.atleast_1d(np.asarray(s, dtype=float))
        if self.closed:
            s = np.mod(s, self.length)
        else:
            slack = _JOIN_RTOL * max(1.0, self.length)
            if np.any(s < -slack) or np.any(s > self.length + slack):
                bad = s[(s < -slack) | (s > self.length + slack)][0]
                raise OutOfRangeError(
                    f"arc length {bad!r} outside [0, {self.length!r}] on open component"
                )
            s = np.clip(s, 0.0, self.length)
        idx = np.searchsorted(self._cum, s, side="right") - 1
        idx = np.clip(idx, 0, len(self.pieces) - 1)
        out = np.empty(s.shape, dtype=complex)
        for k, piece in enumerate(self.pieces):
            mask = idx == k
            if np.any(mask):
                out[mask] = piece.point(s[mask] - self._cum[k])
        return complex(out[0]) if scalar else out


def point_at_arclength(component, s):
    """Module-level alias for :meth:`BoundaryComponent.point_at`."""
    return component.point_at(s)


@dataclass(frozen=True)
class Panel:
    """One constant element: endpoints, arc midpoint, arc length, component."""

    start: complex
    mid: complex
    end: complex
    length: float
    component: int


class PanelizedBoundary:
    """Flat arrays of panels over one or more boundary components.

    Panels are stored component by component in traversal order.  ``arc0``
    holds each panel's starting arc-length coordinate within its component.
    """

    def __init__(self, components, starts, mids, ends, lengths, comp_index, arc0):
        self.components = tuple(components)
        self.starts = np.asarray(starts, dtype=complex)
        self.mids = np.asarray(mids, dtype=complex)
        self.ends = np.asarray(ends, dtype=complex)
        self.lengths = np.asarray(lengths, dtype=float)
        self.comp_index = np.asarray(comp_index, dtype=int)
        self.arc0 = np.asarray(arc0, dtype=float)
        for ci, comp in enumerate(self.components):
            total = self.lengths[self.comp_index == ci].sum()
            if abs(total - comp.length) > 1e-10 * comp.length:
                raise InvalidGeometryError(
                    f"panel lengths of component {ci} do not sum to its length"
                )

    @property
    def n_panels(self):
        return self.lengths.size

    @property
    def total_length(self):
        return float(self.lengths.sum())

    def panel(self, i):
        return Panel(
            complex(self.starts[i]),
            complex(self.mids[i]),
            complex(self.ends[i]),
            float(self.lengths[i]),
            int(self.comp_index[i]),
        )

    def component_slice(self, ci):
        idx = np.flatnonzero(self.comp_index == ci)
        return slice(int(idx[0]), int(idx[-1]) + 1)

    def component_view(self, ci):
        """Single-component view sharing this boundary's panel data."""
        sl = self.component_slice(ci)
        return PanelizedBoundary(
            [self.components[ci]],
            self.starts[sl],
            self.mids[sl],
            self.ends[sl],
            self.lengths[sl],
            np.zeros(sl.stop - sl.start, dtype=int),
            self.arc0[sl],
        )

    def sample_points(self):
        """Panel endpoints and midpoints pooled, for distance queries."""
        return np.concatenate([self.starts, self.mids, self.ends])


def largest_remainder(weights, total, minimum=0):
    """Integer allocation proportional to ``weights`` summing to ``total``.

    Each slot receives at least ``minimum`` (scalar or per-slot array).
    Fractional remainders are settled largest-first; ties go to the lower
    index.  Deficits caused by the floors are taken from the slots with the
    smallest remainders that sit above their floor.
    """
    weights = np.asarray(weights, dtype=float)
    mins = np.broadcast_to(np.asarray(minimum, dtype=int), weights.shape).copy()
    if weights.ndim != 1 or weights.size == 0:
        raise InvalidGeometryError("allocation needs a nonempty weight vector")
    if np.any(weights < 0) or weights.sum() <= 0:
        raise InvalidGeometryError("allocation weights must be nonnegative with positive sum")
    total = int(total)
    if total < mins.sum():
        raise InvalidGeometryError(
            f"cannot allocate {total} items with floors summing to {int(mins.sum())}"
        )
    quota = weights / weights.sum() * total
    base = np.floor(quota).astype(int)
    rem = quota - base
    counts = np.maximum(base, mins)
    deficit = total - counts.sum()
    if deficit > 0:
        # grant +1 to the largest remainders, lower index first on ties
        order = sorted(range(weights.size), key=lambda i: (-rem[i], i))
        for i in order[:deficit]:
            counts[i] += 1
    elif deficit < 0:
        # floors overshot: take back from smallest remainders above floor
        order = sorted(range(weights.size), key=lambda i: (rem[i], -i))
        need = -deficit
        for i in order:
            while counts[i] > mins[i] and need > 0:
                counts[i] -= 1
                need -= 1
            if need == 0:
                break
        if need > 0:
            raise InvalidGeometryError("allocation floors are infeasible")
    return counts


def panelize(components, N, min_per_component=2):
    """Split components into ``N`` arc-length panels in total.

    Panel counts per component are proportional to component length with
    largest-remainder rounding; every component receives at least
    ``max(min_per_component, number of pieces)`` panels so that corners of
    piecewise chains always fall on panel endpoints.  Within a component the
    count is distributed over the pieces the same way, and each piece is cut
    into equal arc-length panels.
    """
    if isinstance(components, BoundaryComponent):
        components = [components]
    components = list(components)
    if not components:
        raise InvalidGeometryError("no boundary components to panelize")
    for c in components:
        if not isinstance(c, BoundaryComponent):
            raise InvalidGeometryError(f"not a boundary component: {c!r}")
    lengths = np.array([c.length for c in components], dtype=float)
    floors = np.array(
        [max(int(min_per_component), len(c.pieces)) for c in components], dtype=int
    )
    comp_counts = largest_remainder(lengths, N, floors)

    starts, mids, ends, plens, comp_index, arc0 = [], [], [], [], [], []
    for ci, comp in enumerate(components):
        piece_lengths = np.array([p.length for p in comp.pieces], dtype=float)
        piece_counts = largest_remainder(piece_lengths, comp_counts[ci], 1)
        s_base = 0.0
        for piece, k in zip(comp.pieces, piece_counts):
            cuts = piece.length * np.arange(k + 1) / k
            p_start = piece.point(cuts[:-1])
            p_end = piece.point(cuts[1:])
            p_mid = piece.point(0.5 * (cuts[:-1] + cuts[1:]))
            starts.append(np.atleast_1d(p_start))
            ends.append(np.atleast_1d(p_end))
            mids.append(np.atleast_1d(p_mid))
            plens.append(np.diff(cuts))
            arc0.append(s_base + cuts[:-1])
            comp_index.append(np.full(k, ci, dtype=int))
            s_base += piece.length

    return PanelizedBoundary(
        components,
        np.concatenate(starts),
        np.concatenate(mids),
        np.concatenate(ends),
        np.concatenate(plens),
        np.concatenate(comp_index),
        np.concatenate(arc0),
    )
