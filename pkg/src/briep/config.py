"""Run configuration: JSON schema, geometry primitives, and F-builders.

A run config is a JSON object::

    {
      "region_E": [<component>, ...],
      "region_F": [<component-or-strategy>, ...],   # optional
      "function": {"name": "...", "params": {...}} | {"table": "path.csv"},
      "singularities": [[re, im], ...],             # optional
      "n_list": [1, 2, ...],
      "gamma": 0.5,
      "panels_N": 500,                              # optional, see below
      "error_samples": {"kind": "auto"|"interval_grid"|"boundary",
                         "total": 4000},            # optional
      "grid": {"nx": 65, "ny": 65,
               "window": [x0, y0, x1, y1]},         # optional
      "start_offset": {"E": [...], "F": [...]},     # optional, per component
      "outputs": "out"                              # optional
    }

Geometry components are declarative primitives (no code in configs):
``segment``, ``polygon``, ``circle``, ``arc``, ``annulus`` (expands to two
circles), and ``polyline`` (a parametric curve sampled to segments).  The
second region additionally accepts placement strategies for covering
singularities: ``disk`` around an isolated singularity, ``cut_segment``
leading a branch point away from E, and ``cut_between`` joining two branch
points.  When ``panels_N`` is omitted it defaults to 500 when E (and F, if
present) are single components, 3000 otherwise.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

from .errors import ConfigError, CutLengthWarning, InvalidGeometryError
from .functions import build_function
from .geometry import BoundaryComponent, CircularArc, LineSegment

__all__ = ["RunConfig", "load_config", "parse_config", "component_from_spec"]

DEFAULT_PANELS_SIMPLE = 500
DEFAULT_PANELS_GENERAL = 3000
MIN_PANELS_PER_COMPONENT = 32


def _as_complex(value, where):
    if isinstance(value, (int, float)):
        return complex(value)
    if (
        isinstance(value, (list, tuple))
        and len(value) == 2
        and all(isinstance(v, (int, float)) for v in value)
    ):
        return complex(value[0], value[1])
    raise ConfigError(f"{where}: expected a number or [re, im] pair, got {value!r}")


def _positive_number(value, where):
    if not isinstance(value, (int, float)) or not math.isfinite(value) or value <= 0:
        raise ConfigError(f"{where}: expected a positive number, got {value!r}")
    return float(value)


def component_from_spec(spec, where):
    """Build boundary component(s) from one declarative primitive.

    Returns a list (the ``annulus`` primitive expands to two components).
    """
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError(f"{where}: component must be a mapping with a 'kind'")
    kind = spec["kind"]
    try:
        if kind == "segment":
            a = _as_complex(spec["a"], where)
            b = _as_complex(spec["b"], where)
            return [BoundaryComponent([LineSegment(a, b)], closed=False)]
        if kind == "polygon":
            verts = [_as_complex(v, where) for v in spec["vertices"]]
            if len(verts) < 3:
                raise ConfigError(f"{where}: polygon needs at least 3 vertices")
            pieces = [
                LineSegment(verts[k], verts[(k + 1) % len(verts)])
                for k in range(len(verts))
            ]
            return [BoundaryComponent(pieces, closed=True)]
        if kind in ("circle", "disk"):
            center = _as_complex(spec["center"], where)
            radius = _positive_number(spec["radius"], where)
            piece = CircularArc(center, radius, 0.0, 2.0 * math.pi)
            return [BoundaryComponent([piece], closed=True)]
        if kind == "arc":
            center = _as_complex(spec["center"], where)
            radius = _positive_number(spec["radius"], where)
            t0 = float(spec["theta_start"])
            t1 = float(spec["theta_end"])
            closed = abs(abs(t1 - t0) - 2.0 * math.pi) <= 1e-12
            return [BoundaryComponent([CircularArc(center, radius, t0, t1)], closed=closed)]
        if kind == "annulus":
            center = _as_complex(spec["center"], where)
            r_in = _positive_number(spec["r_inner"], where)
            r_out = _positive_number(spec["r_outer"], where)
            if r_in >= r_out:
                raise ConfigError(f"{where}: annulus needs r_inner < r_outer")
            return [
                BoundaryComponent([CircularArc(center, r_out, 0.0, 2.0 * math.pi)], True),
                BoundaryComponent([CircularArc(center, r_in, 0.0, 2.0 * math.pi)], True),
            ]
        if kind == "polyline":
            pts = [_as_complex(v, where) for v in spec["points"]]
            closed = bool(spec.get("closed", False))
            if len(pts) < 2 or (closed and len(pts) < 3):
                raise ConfigError(f"{where}: polyline needs enough points")
            pairs = list(zip(pts[:-1], pts[1:]))
            if closed:
                pairs.append((pts[-1], pts[0]))
            return [BoundaryComponent([LineSegment(a, b) for a, b in pairs], closed)]
        if kind == "cut_segment":
            z1 = _as_complex(spec["from"], where)
            direction = _as_complex(spec["direction"], where)
            if direction == 0:
                raise ConfigError(f"{where}: cut direction must be nonzero")
            length = _positive_number(spec["length"], where)
            z2 = z1 + direction / abs(direction) * length
            return [BoundaryComponent([LineSegment(z1, z2)], closed=False)]
        if kind == "cut_between":
            z1 = _as_complex(spec["z1"], where)
            z2 = _as_complex(spec["z2"], where)
            return [BoundaryComponent([LineSegment(z1, z2)], closed=False)]
    except KeyError as exc:
        raise ConfigError(f"{where}: {kind} component is missing field {exc}") from exc
    except InvalidGeometryError as exc:
        raise ConfigError(f"{where}: {exc}") from exc
    raise ConfigError(f"{where}: unknown component kind {kind!r}")


def _components_from_list(specs, where):
    if not isinstance(specs, list) or not specs:
        raise ConfigError(f"{where}: expected a nonempty list of components")
    out = []
    for k, spec in enumerate(specs):
        out.extend(component_from_spec(spec, f"{where}[{k}]"))
    return out


def _diameter(components):
    pts = []
    for comp in components:
        for piece in comp.pieces:
            pts.append(piece.start)
            pts.append(piece.end)
            pts.append(complex(piece.point(piece.length / 2.0)))
    best = 0.0
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            best = max(best, abs(pts[i] - pts[j]))
    return best


@dataclass
class RunConfig:
    """Validated run configuration with constructed geometry and function."""

    components_E: list
    components_F: Optional[list]
    function: object
    function_spec: dict
    singularities: list
    n_list: list
    gamma: float
    panels_N: int
    min_panels: int
    error_samples: dict
    grid: Optional[dict]
    start_offsets_E: list
    start_offsets_F: list
    outputs: str
    echo: dict = field(default_factory=dict)

    @property
    def is_condenser(self):
        return self.components_F is not None


def parse_config(raw):
    """Validate a config mapping and construct geometry and function."""
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    unknown = set(raw) - {
        "region_E",
        "region_F",
        "function",
        "singularities",
        "n_list",
        "gamma",
        "panels_N",
        "error_samples",
        "grid",
        "start_offset",
        "outputs",
    }
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")

    if "region_E" not in raw:
        raise ConfigError("config needs region_E")
    components_E = _components_from_list(raw["region_E"], "region_E")
    components_F = None
    if raw.get("region_F"):
        components_F = _components_from_list(raw["region_F"], "region_F")
        diam = _diameter(components_E)
        if 1.0 <= diam <= 2.0:
            for k, spec in enumerate(raw["region_F"]):
                if spec.get("kind") in ("cut_segment", "cut_between"):
                    comp = components_F[k] if k < len(components_F) else None
                    length = comp.length if comp is not None else 0.0
                    if not 1.0 <= length <= 4.0:
                        warnings.warn(
                            f"region_F[{k}]: cut length {length:g} is outside [1, 4], "
                            f"the empirically effective band for regions of diameter "
                            f"{diam:g}",
                            CutLengthWarning,
                            stacklevel=2,
                        )

    if "function" not in raw:
        raise ConfigError("config needs a function")
    function = build_function(raw["function"])

    singularities = [
        _as_complex(v, "singularities") for v in raw.get("singularities", [])
    ]
    if not singularities:
        singularities = [complex(q) for q in getattr(function, "singularities", ())]

    n_list = raw.get("n_list")
    if (
        not isinstance(n_list, list)
        or not n_list
        or not all(isinstance(n, int) and n >= 1 for n in n_list)
        or any(b <= a for a, b in zip(n_list, n_list[1:]))
    ):
        raise ConfigError("n_list must be a strictly increasing list of degrees >= 1")

    gamma = raw.get("gamma", 0.5)
    if not isinstance(gamma, (int, float)) or not 0.0 < float(gamma) < 1.0:
        raise ConfigError(f"gamma must lie in (0, 1), got {gamma!r}")

    simple = len(components_E) == 1 and (components_F is None or len(components_F) == 1)
    panels_N = raw.get("panels_N", DEFAULT_PANELS_SIMPLE if simple else DEFAULT_PANELS_GENERAL)
    if not isinstance(panels_N, int) or panels_N < 1:
        raise ConfigError(f"panels_N must be a positive integer, got {panels_N!r}")

    error_samples = raw.get("error_samples", {"kind": "auto"})
    if not isinstance(error_samples, dict):
        raise ConfigError("error_samples must be a mapping")
    kind = error_samples.get("kind", "auto")
    if kind not in ("auto", "interval_grid", "boundary"):
        raise ConfigError(f"unknown error_samples kind {kind!r}")

    grid = raw.get("grid")
    if grid is not None:
        if (
            not isinstance(grid, dict)
            or not isinstance(grid.get("nx"), int)
            or not isinstance(grid.get("ny"), int)
            or grid["nx"] < 2
            or grid["ny"] < 2
            or not isinstance(grid.get("window"), list)
            or len(grid["window"]) != 4
        ):
            raise ConfigError("grid needs integer nx, ny >= 2 and window [x0, y0, x1, y1]")
        x0, y0, x1, y1 = grid["window"]
        if not (x1 > x0 and y1 > y0):
            raise ConfigError(f"degenerate grid window {grid['window']!r}")

    offsets = raw.get("start_offset", {})
    if not isinstance(offsets, dict) or set(offsets) - {"E", "F"}:
        raise ConfigError("start_offset must be a mapping with keys E and/or F")

    def _offsets_for(key, comps):
        vals = offsets.get(key, [])
        if comps is None:
            return []
        if not isinstance(vals, list) or not all(
            isinstance(v, (int, float)) for v in vals
        ):
            raise ConfigError(f"start_offset.{key} must be a list of numbers")
        if len(vals) > len(comps):
            raise ConfigError(f"start_offset.{key} has more entries than components")
        return [float(v) for v in vals] + [0.0] * (len(comps) - len(vals))

    outputs = raw.get("outputs", "out")
    if not isinstance(outputs, str) or not outputs:
        raise ConfigError("outputs must be a nonempty path string")

    return RunConfig(
        components_E=components_E,
        components_F=components_F,
        function=function,
        function_spec=raw["function"],
        singularities=singularities,
        n_list=list(n_list),
        gamma=float(gamma),
        panels_N=panels_N,
        min_panels=MIN_PANELS_PER_COMPONENT,
        error_samples=dict(error_samples),
        grid=dict(grid) if grid is not None else None,
        start_offsets_E=_offsets_for("E", components_E),
        start_offsets_F=_offsets_for("F", components_F),
        outputs=outputs,
        echo=raw,
    )


def load_config(path):
    """Read and parse a JSON run config from ``path``."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_config(raw)
