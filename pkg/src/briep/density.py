"""Step densities on panelized boundaries and quantile point generation.

A solved boundary density is piecewise constant over the panels.  Points are
placed at equal increments of cumulative mass: the i-th target quantile is
``(i-1)/n`` on closed curves and ``(i-1)/(n-1)`` on open ones, located inside
its panel by linear interpolation of the cumulative mass.  The equivalent
matrix formulation (clamped quantile-coverage fractions times panel lengths)
is kept as a cross-check behind ``check_matrix=True``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateDensityError,
    DensityGapWarning,
    InfeasibleAllocationError,
    InvalidGeometryError,
    NegativeDensityWarning,
    OutOfRangeError,
)
from .geometry import PanelizedBoundary, largest_remainder

__all__ = [
    "StepDensity",
    "PointFamily",
    "normalize_and_clamp",
    "den2pts",
    "allocate_counts",
]


@dataclass(frozen=True)
class StepDensity:
    """Per-panel constant density over a panelized boundary.

    ``values`` must be nonnegative (clamp first, see
    :func:`normalize_and_clamp`).  ``cumulative`` holds the running mass at
    panel boundaries, ``cumulative[-1] == total_mass``.
    """

    boundary: PanelizedBoundary
    values: np.ndarray
    cumulative: np.ndarray = field(init=False)
    total_mass: float = field(init=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.boundary.n_panels,):
            raise InvalidGeometryError(
                f"density needs one value per panel, got {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise InvalidGeometryError("density values must be finite")
        if np.any(values < 0):
            raise InvalidGeometryError("density values must be nonnegative; clamp first")
        cum = np.concatenate(([0.0], np.cumsum(self.boundary.lengths * values)))
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "cumulative", cum)
        object.__setattr__(self, "total_mass", float(cum[-1]))

    def component_masses(self):
        return np.array(
            [
                (self.boundary.lengths * self.values)[self.boundary.comp_index == ci].sum()
                for ci in range(len(self.boundary.components))
            ]
        )

    def split_components(self):
        """One StepDensity per component, values unchanged."""
        out = []
        for ci in range(len(self.boundary.components)):
            sl = self.boundary.component_slice(ci)
            out.append(StepDensity(self.boundary.component_view(ci), self.values[sl]))
        return out

    def rescaled(self, target_mass):
        if self.total_mass <= 0:
            raise DegenerateDensityError("cannot rescale a zero-mass density")
        return StepDensity(self.boundary, self.values * (target_mass / self.total_mass))


def normalize_and_clamp(raw_values, boundary, target_mass=1.0):
    """Clamp negative density entries to zero and rescale to ``target_mass``.

    Negative entries are reported with a :class:`NegativeDensityWarning`; a
    density with no positive part raises :class:`DegenerateDensityError`.
    """
    raw = np.asarray(raw_values, dtype=float)
    if raw.shape != (boundary.n_panels,):
        raise InvalidGeometryError("one raw density value per panel required")
    negative = np.flatnonzero(raw < 0)
    clamped = np.maximum(raw, 0.0)
    mass = float((boundary.lengths * clamped).sum())
    if mass <= 0.0:
        raise DegenerateDensityError("density is nonpositive everywhere")
    if negative.size:
        warnings.warn(
            f"clamped {negative.size} negative density panel(s) "
            f"(indices {negative[:8].tolist()}{'...' if negative.size > 8 else ''})",
            NegativeDensityWarning,
            stacklevel=2,
        )
    return StepDensity(boundary, clamped * (target_mass / mass))


@dataclass(frozen=True)
class PointFamily:
    """Points generated on a boundary, with their arc-length coordinates."""

    points: np.ndarray
    arcs: np.ndarray
    role: str = "nodes"

    def __post_init__(self):
        points = np.asarray(self.points, dtype=complex)
        arcs = np.asarray(self.arcs, dtype=float)
        if self.role not in ("nodes", "poles"):
            raise ValueError(f"role must be 'nodes' or 'poles', got {self.role!r}")
        if points.shape != arcs.shape:
            raise ValueError("points and arcs must have matching shapes")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "arcs", arcs)

    def __len__(self):
        return self.points.size


def _mass_at_arc(density, arc):
    """Cumulative mass at arc-length coordinate ``arc`` within the component."""
    b = density.boundary
    k = np.searchsorted(b.arc0, arc, side="right") - 1
    k = int(np.clip(k, 0, b.n_panels - 1))
    return float(density.cumulative[k] + (arc - b.arc0[k]) * density.values[k])

def _quantile_arcs(density, h):
    """Arc-length positions of mass quantiles ``h`` (streaming scan)."""
    b = density.boundary
    s = density.cumulative / density.total_mass
    values = density.values / density.total_mass
    total_length = b.total_length
    arcs = np.empty(h.shape, dtype=float)
    at_end = h >= s[-1]
    arcs[at_end] = total_length
    inner = ~at_end
    if np.any(inner):
        hi = h[inner]
        k = np.searchsorted(s, hi, side="right") - 1
        # side="right" skips zero-mass panels: a quantile tying a gap edge is
        # placed at the far edge of the gap
        if np.any(values[k] <= 0):
            raise DegenerateDensityError("quantile landed on a zero-density panel")
        arcs[inner] = b.arc0[k] + (hi - s[k]) / values[k]
    if np.any(values <= 0):
        gap_edges = s[:-1][values <= 0]
        if np.any(np.isin(h, gap_edges)):
            warnings.warn(
                "a quantile fell on a zero-density gap; point placed at the far edge",
                DensityGapWarning,
                stacklevel=3,
            )
    return arcs


def _quantile_arcs_matrix(density, h):
    """Matrix form of the quantile scan, used as a cross-check.

    Entry (i, j) is the clamped fraction of panel j's mass lying below
    quantile i; arc positions are the row sums of fractions times panel
    lengths.
    """
    b = density.boundary
    s = density.cumulative / density.total_mass
    masses = (b.lengths * density.values) / density.total_mass
    with np.errstate(divide="ignore", invalid="ignore"):
        bmat = (h[:, None] - s[None, :-1]) / masses[None, :]
    zero = masses <= 0
    if np.any(zero):
        bmat[:, zero] = (h[:, None] >= s[1:][zero][None, :]).astype(float)
    bmat = np.clip(bmat, 0.0, 1.0)
    return bmat @ b.lengths


def den2pts(density, n, closed=None, start_offset=0.0, role="nodes", check_matrix=False):
    """Place ``n`` points on a single-component boundary at mass quantiles.

    Parameters
    ----------
    density : StepDensity
        Must cover exactly one component and be normalized to unit mass
        (within 1e-9).
    n : int
        Number of points.  Open curves need ``n >= 2`` (both endpoints are
        included); closed curves accept ``n >= 1``.
    closed : bool, optional
        Cross-checked against the component; inferred when omitted.
    start_offset : float
        Arc-length position of the first point (closed curves only; open
        curves must start at the endpoint, offset 0).
    check_matrix : bool
        Also compute the matrix formulation and assert both paths agree.

    Returns
    -------
    PointFamily
    """
    b = density.boundary
    if len(b.components) != 1:
        raise InvalidGeometryError("den2pts expects a single-component density")
    comp = b.components[0]
    if closed is None:
        closed = comp.closed
    elif bool(closed) != comp.closed:
        raise InvalidGeometryError("closed flag contradicts the component")
    if abs(density.total_mass - 1.0) > 1e-9:
        raise InvalidGeometryError(
            f"density mass must be 1 for point generation, got {density.total_mass!r}"
        )
    n = int(n)
    if n < 1:
        raise InvalidGeometryError("need at least one point")
    if not closed and n < 2:
        raise InvalidGeometryError("open curves need at least two points")

    if closed:
        h = np.arange(n, dtype=float) / n
        if start_offset:
            offset = float(start_offset) % comp.length
            h = np.mod(h + _mass_at_arc(density, offset), 1.0)
            # keep the first point exactly at the requested offset
            h[0] = _mass_at_arc(density, offset)
    else:
        if start_offset not in (0, 0.0):
            raise OutOfRangeError("open curves must start at an endpoint (offset 0)")
        h = np.arange(n, dtype=float) / (n - 1)

    arcs = _quantile_arcs(density, h)
    if check_matrix:
        arcs_mat = _quantile_arcs_matrix(density, h)
        if not np.allclose(arcs, arcs_mat, rtol=0.0, atol=1e-9 * max(1.0, comp.length)):
            raise AssertionError("streaming and matrix quantile paths disagree")
    points = comp.point_at(arcs)
    return PointFamily(np.atleast_1d(points), arcs, role=role)


def allocate_counts(densities, total):
    """Split ``total`` points across components proportionally to their mass.

    ``densities`` is a sequence of per-component StepDensity (or anything
    with ``total_mass``).  Every component receives at least one point;
    remainders are settled largest-first with ties to the lower index.
    """
    masses = np.array([d.total_mass for d in densities], dtype=float)
    if masses.size == 0:
        raise InfeasibleAllocationError("no components to allocate points to")
    if int(total) < masses.size:
        raise InfeasibleAllocationError(
            f"cannot place {total} point(s) on {masses.size} components"
        )
    try:
        counts = largest_remainder(masses, int(total), 1)
    except InvalidGeometryError as exc:
        raise InfeasibleAllocationError(str(exc)) from exc
    return [int(c) for c in counts]
