"""End-to-end drivers: solve, place points, interpolate, measure, emit.

A run follows one of two pipelines depending on whether the config declares
a second region F:

* polynomial: equilibrium density on ``boundary E`` -> ``n+1`` nodes per
  degree -> polynomial barycentric weights;
* rational: condenser densities on E and F -> ``n+1`` nodes and
  ``m = floor(gamma*(n+1))`` poles per degree -> rational weights.

The density solve happens once per run; only point generation and error
measurement repeat along the degree sweep.  Independent degrees evaluate
concurrently (capped by the BRIEP_THREADS env var); artifacts are written
serially at the end.

The observed convergence rate is a least-squares slope of ``log(error)``
against ``n`` over the trailing part of the sweep that sits above the
rounding floor; early pre-asymptotic degrees are dropped.
"""

from __future__ import annotations

import json
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import __version__
from .barycentric import Interpolant, weights_polynomial, weights_rational
from .density import (
    PointFamily,
    _quantile_arcs,
    allocate_counts,
    den2pts,
)
from .errors import (
    AllocationWarning,
    DensityRatioWarning,
    InvalidGeometryError,
    NotApplicableError,
    RateUndefinedError,
)
from .geometry import PanelizedBoundary, largest_remainder, panelize
from .potential import DiscreteMeasure, observed_rate, potential_grid
from .symm import (
    CondenserSystem,
    potential_of_density,
    predicted_rate,
    solve_polynomial,
)

__all__ = [
    "DegreeResult",
    "RunReport",
    "run",
    "run_bpiep",
    "run_briep",
    "measure_error",
    "build_error_samples",
    "density_ratio_diagnostic",
    "emit_artifacts",
]

ERROR_FLOOR = 1e-12
SINGULARITY_RADIUS = 0.05
DENSIFY_FACTOR = 4
DEFAULT_BOUNDARY_SAMPLES = 4000
INTERVAL_GRID_POINTS = 200001


@dataclass(frozen=True)
class DegreeResult:
    """Outcome of one degree in a sweep."""

    n: int
    m: int
    nodes: np.ndarray
    poles: np.ndarray
    weights: np.ndarray
    samples_f: np.ndarray
    max_error: float
    argmax: complex


@dataclass
class RunReport:
    """Everything a finished run produced, ready for artifact emission."""

    kind: str
    config: object
    boundary_E: PanelizedBoundary
    boundary_F: Optional[PanelizedBoundary]
    solution: object
    results: list
    c1: float
    c2: Optional[float]
    predicted_rate: float
    observed_rate: float
    rate_window: tuple
    density_ratios: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def final(self):
        return self.results[-1]


def _panel_split(config):
    """Pool the panel budget over all components of E and F by length."""
    comps_E = config.components_E
    comps_F = config.components_F or []
    comps = comps_E + comps_F
    lengths = [c.length for c in comps]
    floors = [max(config.min_panels, len(c.pieces)) for c in comps]
    need = sum(floors)
    budget = max(config.panels_N, need)
    counts = largest_remainder(lengths, budget, minimum=min(floors))
    counts = [max(k, f) for k, f in zip(counts, floors)]
    extra = sum(counts) - budget
    order = np.argsort(lengths)
    for i in order[::-1]:
        if extra <= 0:
            break
        give = min(extra, counts[i] - floors[i])
        counts[i] -= give
        extra -= give
    n_E = sum(counts[: len(comps_E)])
    n_F = sum(counts[len(comps_E):])
    return n_E, n_F


def _build_boundaries(config):
    n_E, n_F = _panel_split(config)
    boundary_E = panelize(config.components_E, n_E, config.min_panels)
    boundary_F = None
    if config.components_F is not None:
        boundary_F = panelize(config.components_F, n_F, config.min_panels)
    return boundary_E, boundary_F


def _single_open_point(density):
    """Mass-median point for a lone point on an open component."""
    arc = _quantile_arcs(density.rescaled(1.0), np.array([0.5]))[0]
    comp = density.boundary.components[0]
    return PointFamily(
        points=np.array([comp.point_at(arc)]),
        arcs=np.array([arc]),
        role="poles",
    )


def _points_for_region(density, total, offsets, role):
    """Distribute ``total`` points over all components of one region.

    Components receive counts proportional to their share of the mass.
    When fewer points than components are requested, the heaviest
    components get one point each and the rest get none.
    """
    parts = density.split_components()
    masses = density.component_masses()
    if total < len(parts):
        warnings.warn(
            f"{total} {role} over {len(parts)} components: placing one point "
            f"on each of the {total} heaviest components",
            AllocationWarning,
            stacklevel=3,
        )
        counts = [0] * len(parts)
        for ci in np.argsort(-masses, kind="stable")[:total]:
            counts[ci] = 1
    else:
        counts = allocate_counts(parts, total)

    points, arcs = [], []
    for ci, (part, k) in enumerate(zip(parts, counts)):
        if k == 0:
            continue
        offset = offsets[ci] if ci < len(offsets) else 0.0
        closed = part.boundary.components[0].closed
        if k == 1 and not closed:
            fam = _single_open_point(part)
        else:
            fam = den2pts(part.rescaled(1.0), k, start_offset=offset, role=role)
        points.append(fam.points)
        arcs.append(fam.arcs)
    return np.concatenate(points), np.concatenate(arcs)


def _is_unit_interval(components):
    if len(components) != 1 or components[0].closed:
        return False
    pieces = components[0].pieces
    if len(pieces) != 1:
        return False
    a, b = pieces[0].start, pieces[0].end
    return {a, b} == {complex(-1.0), complex(1.0)}


def _boundary_samples(components, total, singularities):
    """Midpoint samples on each component, 4x denser near singularities."""
    lengths = [c.length for c in components]
    counts = largest_remainder(lengths, max(total, 2 * len(components)), minimum=2)
    qs = np.asarray(singularities, dtype=complex)
    out = []
    for comp, k in zip(components, counts):
        h = comp.length / k
        base = (np.arange(k) + 0.5) * h
        pts = np.array([comp.point_at(s) for s in base])
        if qs.size:
            near = np.min(np.abs(pts[:, None] - qs[None, :]), axis=1) < SINGULARITY_RADIUS
        else:
            near = np.zeros(k, dtype=bool)
        sub = (np.arange(DENSIFY_FACTOR) + 0.5) / DENSIFY_FACTOR - 0.5
        arcs = []
        for s, dense in zip(base, near):
            if dense:
                arcs.extend(s + h * sub)
            else:
                arcs.append(s)
        out.append(np.array([comp.point_at(min(max(s, 0.0), comp.length)) for s in arcs]))
    return np.concatenate(out)


def build_error_samples(config):
    """Resolve the sampling spec into a concrete set of probe points."""
    spec = config.error_samples
    kind = spec.get("kind", "auto")
    if kind == "auto":
        kind = "interval_grid" if _is_unit_interval(config.components_E) else "boundary"
    if kind == "interval_grid":
        if not _is_unit_interval(config.components_E):
            piece = config.components_E[0].pieces[0]
            total = int(spec.get("total", INTERVAL_GRID_POINTS))
            return piece.start + (piece.end - piece.start) * np.linspace(0.0, 1.0, total)
        return np.linspace(-1.0, 1.0, INTERVAL_GRID_POINTS).astype(complex)
    total = int(spec.get("total", DEFAULT_BOUNDARY_SAMPLES))
    return _boundary_samples(config.components_E, total, config.singularities)


def measure_error(interpolant, f, samples):
    """Uniform-norm error estimate over the samples plus its maximizer."""
    approx = interpolant(samples)
    exact = f(samples)
    err = np.abs(approx - exact)
    i = int(np.argmax(err))
    return float(err[i]), complex(samples[i])


def density_ratio_diagnostic(solution):
    """End-of-cut density ratio for each open component of F.

    Reports the panel density at the cut end nearest E divided by the
    density at the far end.  A ratio under 10 suggests the cut is too
    short for the poles to decouple from the far endpoint; a clamped far
    end reports ``inf`` without a warning.
    """
    if solution.boundary_F is None:
        raise NotApplicableError("no second region to diagnose")
    density = solution.density_F
    mids_E = solution.boundary_E.mids
    ratios = {}
    for ci, comp in enumerate(solution.boundary_F.components):
        if comp.closed:
            continue
        sl = solution.boundary_F.component_slice(ci)
        vals = density.values[sl]
        ends = solution.boundary_F.mids[sl][[0, -1]]
        d = [np.min(np.abs(mids_E - e)) for e in ends]
        near, far = (vals[0], vals[-1]) if d[0] <= d[1] else (vals[-1], vals[0])
        if far == 0.0:
            ratios[ci] = math.inf
            continue
        ratio = float(near / far)
        ratios[ci] = ratio
        if ratio < 10.0:
            warnings.warn(
                f"F component {ci}: end density ratio {ratio:.3g} < 10; "
                f"the cut may be too short",
                DensityRatioWarning,
                stacklevel=2,
            )
    return ratios


def _fit_window(results):
    """Trailing above-floor portion of the sweep used for the rate fit.

    The sweep is cut at its running minimum and entries within 3x of the
    smallest error are dropped, so a machine-precision plateau cannot
    pollute the fit; the first third of what remains is discarded as
    pre-asymptotic.
    """
    positive = [r for r in results if r.max_error > 0.0]
    if not positive:
        return []
    emin = min(r.max_error for r in positive)
    floor = max(ERROR_FLOOR, 3.0 * emin)
    decay = []
    for r in results:
        if r.max_error > floor:
            decay.append(r)
        elif 0.0 < r.max_error <= 3.0 * emin:
            break
    if len(decay) > 5:
        decay = decay[len(decay) // 3:]
    return decay


def _observed_rate(results):
    window = _fit_window(results)
    ns = np.array([r.n for r in window], dtype=float)
    errs = np.array([r.max_error for r in window], dtype=float)
    try:
        rate = observed_rate(list(zip(ns, errs)))
    except RateUndefinedError:
        return math.nan, (0, 0)
    return rate, (int(ns[0]), int(ns[-1]))


def _polynomial_predicted_rate(solution, singularities):
    if not singularities:
        return math.nan
    gaps = [solution.c1 - potential_of_density(solution, q) for q in singularities]
    worst = min(gaps)
    if worst <= 0:
        return math.nan
    return math.exp(-worst)


def run_bpiep(config):
    """Polynomial pipeline: one density solve, then the degree sweep."""
    if config.components_F is not None:
        raise InvalidGeometryError("polynomial run cannot take a second region")
    boundary_E, _ = _build_boundaries(config)
    solution = solve_polynomial(boundary_E)
    density = solution.density_E
    samples = build_error_samples(config)
    f = config.function

    prepared = []
    for n in config.n_list:
        nodes, _ = _points_for_region(density, n + 1, config.start_offsets_E, "nodes")
        prepared.append((n, nodes))

    def finish(task):
        n, nodes = task
        w = weights_polynomial(nodes)
        interp = Interpolant(nodes, w, f(nodes))
        err, arg = measure_error(interp, f, samples)
        return DegreeResult(n, 0, nodes, np.array([], dtype=complex), w,
                            interp.samples, err, arg)

    results = _sweep(prepared, finish)
    rate, window = _observed_rate(results)
    return RunReport(
        kind="bpiep",
        config=config,
        boundary_E=boundary_E,
        boundary_F=None,
        solution=solution,
        results=results,
        c1=solution.c1,
        c2=None,
        predicted_rate=_polynomial_predicted_rate(solution, config.singularities),
        observed_rate=rate,
        rate_window=window,
    )


def _sweep(prepared, finish):
    """Run the per-degree finishing work, possibly across worker threads."""
    env = os.environ.get("BRIEP_THREADS", "")
    workers = int(env) if env.strip() else (os.cpu_count() or 1)
    workers = max(1, min(workers, len(prepared)))
    if workers == 1:
        return [finish(task) for task in prepared]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(finish, prepared))


def run_briep(config):
    """Rational pipeline: condenser solve, then nodes and poles per degree."""
    if config.components_F is None:
        raise InvalidGeometryError("rational run needs a second region")
    boundary_E, boundary_F = _build_boundaries(config)
    system = CondenserSystem(boundary_E, boundary_F)
    solution = system.solve(config.gamma)
    density_E = solution.density_E
    density_F = solution.density_F
    samples = build_error_samples(config)
    f = config.function

    prepared = []
    for n in config.n_list:
        m = int(math.floor(config.gamma * (n + 1)))
        nodes, _ = _points_for_region(density_E, n + 1, config.start_offsets_E, "nodes")
        if m >= 1:
            poles, _ = _points_for_region(density_F, m, config.start_offsets_F, "poles")
        else:
            poles = np.array([], dtype=complex)
        prepared.append((n, m, nodes, poles))

    def finish(task):
        n, m, nodes, poles = task
        w = weights_rational(nodes, poles)
        interp = Interpolant(nodes, w, f(nodes), poles=poles if poles.size else None)
        err, arg = measure_error(interp, f, samples)
        return DegreeResult(n, m, nodes, poles, w, interp.samples, err, arg)

    results = _sweep(prepared, finish)
    rate, window = _observed_rate(results)
    ratios = density_ratio_diagnostic(solution)
    return RunReport(
        kind="briep",
        config=config,
        boundary_E=boundary_E,
        boundary_F=boundary_F,
        solution=solution,
        results=results,
        c1=solution.c1,
        c2=solution.c2,
        predicted_rate=predicted_rate(solution),
        observed_rate=rate,
        rate_window=window,
        density_ratios=ratios,
    )


def run(config):
    """Dispatch on the presence of a second region."""
    if config.is_condenser:
        return run_briep(config)
    return run_bpiep(config)


def _g(value):
    return f"{float(value):.17g}"


def _write_points_csv(path, points):
    lines = ["index,re,im"]
    for i, z in enumerate(points):
        lines.append(f"{i},{_g(z.real)},{_g(z.imag)}")
    path.write_text("\n".join(lines) + "\n")


def _write_weights_csv(path, weights):
    lines = ["index,re,im,log_abs"]
    for i, w in enumerate(weights):
        lines.append(f"{i},{_g(w.real)},{_g(w.imag)},{_g(np.log(np.abs(w)))}")
    path.write_text("\n".join(lines) + "\n")


def _write_errors_csv(path, results):
    lines = ["n,m,max_error,argmax_re,argmax_im"]
    for r in results:
        lines.append(
            f"{r.n},{r.m},{_g(r.max_error)},{_g(r.argmax.real)},{_g(r.argmax.imag)}"
        )
    path.write_text("\n".join(lines) + "\n")


def _write_rates_csv(path, report):
    lines = ["n_min,n_max,observed_rate,predicted_rate"]
    n_min, n_max = report.rate_window
    lines.append(
        f"{n_min},{n_max},{_g(report.observed_rate)},{_g(report.predicted_rate)}"
    )
    path.write_text("\n".join(lines) + "\n")


def _write_grid_csv(path, xs, ys, U):
    lines = ["x,y,U"]
    for j, y in enumerate(ys):
        for i, x in enumerate(xs):
            lines.append(f"{_g(x)},{_g(y)},{_g(U[j, i])}")
    path.write_text("\n".join(lines) + "\n")


def emit_artifacts(report, out_dir, figures=True):
    """Write the CSV bundle, run metadata, and (optionally) figures.

    All delimited output is deterministic for a fixed config: floats are
    printed with 17 significant digits and row order is fixed.
    """
    from pathlib import Path

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    final = report.final

    _write_points_csv(out / "nodes.csv", final.nodes)
    _write_points_csv(out / "poles.csv", final.poles)
    _write_weights_csv(out / "weights.csv", final.weights)
    _write_errors_csv(out / "errors.csv", report.results)
    _write_rates_csv(out / "rates.csv", report)

    grid_data = None
    grid = report.config.grid
    if grid is not None:
        measure = DiscreteMeasure(
            final.nodes, final.poles if final.poles.size else None
        )
        x0, y0, x1, y1 = grid["window"]
        xs, ys, U = potential_grid(measure, (x0, y0, x1, y1), (grid["nx"], grid["ny"]))
        _write_grid_csv(out / "potential_grid.csv", xs, ys, U)
        grid_data = (xs, ys, U)

    meta = {
        "version": __version__,
        "kind": report.kind,
        "config": report.config.echo,
        "panels": {
            "E": report.boundary_E.n_panels,
            "F": report.boundary_F.n_panels if report.boundary_F is not None else 0,
        },
        "c1": report.c1,
        "c2": report.c2,
        "gamma": report.config.gamma if report.kind == "briep" else None,
        "rcond": report.solution.rcond,
        "clamped_panels": {
            "E": int(report.solution.negative_E.size),
            "F": int(report.solution.negative_F.size)
            if report.solution.negative_F is not None
            else 0,
        },
        "predicted_rate": report.predicted_rate,
        "observed_rate": report.observed_rate,
        "rate_window": list(report.rate_window),
        "density_ratios": {str(k): v for k, v in sorted(report.density_ratios.items())},
        "notes": list(report.notes),
    }
    (out / "run_meta.json").write_text(
        json.dumps(meta, indent=2, sort_keys=True, allow_nan=True) + "\n"
    )

    if figures:
        from . import plots

        plots.save_all(report, out, grid_data)
    return out
