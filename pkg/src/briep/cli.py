"""Command line entry point.

``briep run --config cfg.json`` executes one interpolation run and writes
its artifacts.  Exit codes: 0 success, 2 config error, 3 geometry error,
4 solver error, 5 I/O error.
"""

from __future__ import annotations

import sys

import click

from .errors import BriepError, ConfigError, GeometryError, OutOfRangeError
from .runner import emit_artifacts, run

EXIT_CONFIG = 2
EXIT_GEOMETRY = 3
EXIT_SOLVER = 4
EXIT_IO = 5


def _parse_n_list(text):
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) == 2:
            a, b = (int(p) for p in parts)
            step = 1
        elif len(parts) == 3:
            a, step, b = (int(p) for p in parts)
        else:
            raise ConfigError(f"cannot parse degree range {text!r}")
        if step < 1 or b < a:
            raise ConfigError(f"empty degree range {text!r}")
        return list(range(a, b + 1, step))
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise ConfigError(f"cannot parse degree list {text!r}: {exc}") from exc


def _parse_grid(text):
    try:
        shape, window = text.split("@")
        nx, ny = (int(v) for v in shape.lower().split("x"))
        x0, y0, x1, y1 = (float(v) for v in window.split(","))
    except ValueError as exc:
        raise ConfigError(
            f"grid spec {text!r} is not of the form <nx>x<ny>@<x0,y0,x1,y1>"
        ) from exc
    return {"nx": nx, "ny": ny, "window": [x0, y0, x1, y1]}


@click.group()
@click.version_option(package_name="briep")
def main():
    """Barycentric interpolation with equilibrium-potential point sets."""


@main.command("run")
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=False), help="JSON run configuration.")
@click.option("--out", "out_dir", default=None,
              help="Output directory (default: the config's outputs field).")
@click.option("--n", "n_override", default=None,
              help="Degree override: comma list or start:step:stop range.")
@click.option("--gamma", type=float, default=None,
              help="Pole mass fraction override, in (0, 1).")
@click.option("--panels", type=int, default=None,
              help="Total panel budget override.")
@click.option("--grid", "grid_spec", default=None,
              help="Potential grid override: <nx>x<ny>@<x0,y0,x1,y1>.")
@click.option("--figures/--no-figures", default=True,
              help="Render PNG figures next to the CSV output.")
def run_command(config_path, out_dir, n_override, gamma, panels, grid_spec,
                figures):
    """Execute one interpolation run from a config file."""
    try:
        raw_overrides = {}
        if n_override is not None:
            raw_overrides["n_list"] = _parse_n_list(n_override)
        if gamma is not None:
            raw_overrides["gamma"] = gamma
        if panels is not None:
            raw_overrides["panels_N"] = panels
        if grid_spec is not None:
            raw_overrides["grid"] = _parse_grid(grid_spec)

        config = _load_with_overrides(config_path, raw_overrides)
        report = run(config)
        target = out_dir if out_dir is not None else config.outputs
        emit_artifacts(report, target, figures=figures)
    except ConfigError as exc:
        _fail(exc, EXIT_CONFIG)
    except (GeometryError, OutOfRangeError) as exc:
        _fail(exc, EXIT_GEOMETRY)
    except OSError as exc:
        _fail(exc, EXIT_IO)
    except BriepError as exc:
        _fail(exc, EXIT_SOLVER)
    click.echo(f"wrote artifacts to {out_dir if out_dir is not None else config.outputs}")


def _load_with_overrides(config_path, overrides):
    import json

    from .config import parse_config

    try:
        with open(config_path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {config_path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {config_path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    raw.update(overrides)
    return parse_config(raw)


def _fail(exc, code):
    click.echo(f"error: {exc}", err=True)
    sys.exit(code)


if __name__ == "__main__":
    main()
