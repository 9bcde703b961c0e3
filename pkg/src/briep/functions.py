"""Built-in target functions with declared singularities.

Every builtin evaluates on complex numpy arrays and exposes the singular
points that drive pole placement and error-sample densification.  All square
roots are principal branches (cut where the radicand is negative real), so
each builtin's docstring spells out where its cuts land.
"""

from __future__ import annotations

import cmath
import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, FunctionEvaluationError

__all__ = ["TargetFunction", "TableFunction", "build_function", "BUILTINS"]


@dataclass(frozen=True)
class TargetFunction:
    """Callable target with its singular points and a display label."""

    name: str
    fn: callable
    singularities: tuple
    label: str
    params: dict = field(default_factory=dict)

    def __call__(self, z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        with np.errstate(divide="raise", invalid="raise", over="raise"):
            try:
                out = np.asarray(self.fn(z), dtype=complex)
            except FloatingPointError as exc:
                raise FunctionEvaluationError(
                    f"{self.name} failed on the requested points: {exc}"
                ) from exc
        finite = np.isfinite(out.real) & np.isfinite(out.imag)
        if not np.all(finite):
            bad = z.ravel()[~finite.ravel()][0]
            raise FunctionEvaluationError(
                f"{self.name} is singular at {bad!r}; keep samples away from singularities"
            )
        return out


def _quadratic_roots(c, b):
    """Roots of ``c + b z^2 = 0``."""
    r = cmath.sqrt(complex(-c) / complex(b))
    return (r, -r)


def _cparam(params, key, default):
    """Complex parameter from a config mapping; JSON spells them [re, im]."""
    value = params.get(key, default)
    if isinstance(value, (list, tuple)):
        if len(value) != 2 or not all(isinstance(v, (int, float)) for v in value):
            raise ConfigError(f"parameter {key} must be a number or [re, im] pair")
        return complex(value[0], value[1])
    if isinstance(value, (int, float, complex)):
        return complex(value)
    raise ConfigError(f"parameter {key} must be a number or [re, im] pair")


def _builtin_exp_z2(params):
    return TargetFunction("exp_z2", lambda z: np.exp(z * z), (), "exp(z^2)")


def _builtin_inv_quadratic(params):
    c = _cparam(params, "c", 1.0)
    b = _cparam(params, "b", 1.0)
    if b == 0:
        raise ConfigError("inv_quadratic needs b != 0")
    return TargetFunction(
        "inv_quadratic",
        lambda z: 1.0 / (c + b * z * z),
        _quadratic_roots(c, b),
        f"1/({_fmt(c)} + {_fmt(b)} z^2)",
        {"c": c, "b": b},
    )


def _builtin_inv_linear(params):
    q = _cparam(params, "q", 1.0)
    return TargetFunction(
        "inv_linear", lambda z: 1.0 / (z - q), (q,), f"1/(z - {_fmt(q)})", {"q": q}
    )


def _builtin_sqrt_shift(params):
    b = _cparam(params, "b", 0.0)
    return TargetFunction(
        "sqrt_shift",
        lambda z: np.sqrt(z + b),
        (-b,),
        f"sqrt(z + {_fmt(b)}), cut on (-inf, {_fmt(-b)}] shifted by {_fmt(-b)}",
        {"b": b},
    )


def _builtin_inv_sqrt_z(params):
    return TargetFunction(
        "inv_sqrt_z",
        lambda z: 1.0 / np.sqrt(z),
        (0j,),
        "z^(-1/2), principal branch, cut on (-inf, 0]",
    )


def _builtin_sqrt_ratio(params):
    a = float(params.get("a", 0.25))
    b = float(params.get("b", 0.01))
    if not a > b > 0:
        raise ConfigError("sqrt_ratio needs a > b > 0")
    sa, sb = math.sqrt(a), math.sqrt(b)
    return TargetFunction(
        "sqrt_ratio",
        lambda z: np.sqrt((z * z - a) / (z * z - b)),
        (sa, -sa, sb, -sb),
        f"((z^2 - {a})/(z^2 - {b}))^(1/2), cuts [{-sa}, {-sb}] and [{sb}, {sa}]",
        {"a": a, "b": b},
    )


def _builtin_exp_inv_quadratic(params):
    c = _cparam(params, "c", 1.0)
    b = _cparam(params, "b", 1.0)
    if b == 0:
        raise ConfigError("exp_inv_quadratic needs b != 0")
    return TargetFunction(
        "exp_inv_quadratic",
        lambda z: np.exp(1.0 / (c + b * z * z)),
        _quadratic_roots(c, b),
        f"exp(1/({_fmt(c)} + {_fmt(b)} z^2))",
        {"c": c, "b": b},
    )


def _builtin_exp_inv_sqrt_quadratic(params):
    c = _cparam(params, "c", 1.0)
    b = _cparam(params, "b", 1.0)
    if b == 0:
        raise ConfigError("exp_inv_sqrt_quadratic needs b != 0")
    return TargetFunction(
        "exp_inv_sqrt_quadratic",
        lambda z: np.exp(1.0 / np.sqrt(c + b * z * z)),
        _quadratic_roots(c, b),
        f"exp((({_fmt(c)} + {_fmt(b)} z^2))^(-1/2)), branch points where the "
        "radicand vanishes, cut where it is negative real",
        {"c": c, "b": b},
    )


def _builtin_sqrt_over_poles(params):
    b = _cparam(params, "b", 0.5)
    c = _cparam(params, "c", 0.25)
    d = _cparam(params, "d", 0.5)
    poles = _quadratic_roots(c, 1.0) + (d,)
    return TargetFunction(
        "sqrt_over_poles",
        lambda z: np.sqrt(z + b) / ((z * z + c) * (z - d)),
        (-b,) + poles,
        f"sqrt(z + {_fmt(b)}) / ((z^2 + {_fmt(c)})(z - {_fmt(d)}))",
        {"b": b, "c": c, "d": d},
    )


def _builtin_exp_inv_product(params):
    s = _cparam(params, "scale", 100.0)
    q1 = _cparam(params, "q1", 0.09)
    q2 = _cparam(params, "q2", 0.51j)
    if s == 0:
        raise ConfigError("exp_inv_product needs scale != 0")
    return TargetFunction(
        "exp_inv_product",
        lambda z: np.exp(1.0 / (s * (z - q1) * (z - q2))),
        (q1, q2),
        f"exp(1/({_fmt(s)} (z - {_fmt(q1)})(z - {_fmt(q2)})))",
        {"scale": s, "q1": q1, "q2": q2},
    )


def _fmt(v):
    v = complex(v)
    if v.imag == 0:
        return f"{v.real:g}"
    return f"({v.real:g}{v.imag:+g}i)"


BUILTINS = {
    "exp_z2": _builtin_exp_z2,
    "inv_quadratic": _builtin_inv_quadratic,
    "inv_linear": _builtin_inv_linear,
    "sqrt_shift": _builtin_sqrt_shift,
    "inv_sqrt_z": _builtin_inv_sqrt_z,
    "sqrt_ratio": _builtin_sqrt_ratio,
    "exp_inv_quadratic": _builtin_exp_inv_quadratic,
    "exp_inv_sqrt_quadratic": _builtin_exp_inv_sqrt_quadratic,
    "sqrt_over_poles": _builtin_sqrt_over_poles,
    "exp_inv_product": _builtin_exp_inv_product,
}


class TableFunction:
    """Target defined by an external sample table.

    The CSV columns ``re, im, f_re, f_im`` list points with function values.
    Evaluation requires every requested point to match a table point within
    ``1e-9`` times the table's coordinate scale; use tables only with
    configs whose nodes and error samples are drawn from the same grid.
    """

    name = "table"
    singularities = ()

    def __init__(self, path):
        pts, vals = [], []
        try:
            with open(path, newline="") as fh:
                reader = csv.reader(fh)
                header = next(reader, None)
                if header is None:
                    raise ConfigError(f"empty sample table {path}")
                if [h.strip() for h in header] != ["re", "im", "f_re", "f_im"]:
                    raise ConfigError(
                        f"sample table {path} must have header re,im,f_re,f_im"
                    )
                for row in reader:
                    if not row:
                        continue
                    re_, im_, fr, fi = (float(v) for v in row)
                    pts.append(complex(re_, im_))
                    vals.append(complex(fr, fi))
        except OSError as exc:
            raise ConfigError(f"cannot read sample table {path}: {exc}") from exc
        if not pts:
            raise ConfigError(f"sample table {path} has no rows")
        self.points = np.array(pts, dtype=complex)
        self.values = np.array(vals, dtype=complex)
        self.label = f"table({path})"
        self._tol = 1e-9 * max(1.0, np.abs(self.points).max())

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        flat = z.ravel()
        dist = np.abs(flat[:, None] - self.points[None, :])
        idx = dist.argmin(axis=1)
        best = dist[np.arange(flat.size), idx]
        if np.any(best > self._tol):
            missing = flat[best > self._tol][0]
            raise FunctionEvaluationError(
                f"sample table has no value at {missing!r} (nearest is "
                f"{best[best > self._tol][0]:.3e} away)"
            )
        return self.values[idx].reshape(z.shape)


def build_function(spec):
    """Build a target function from a config mapping.

    Either ``{"name": <builtin>, "params": {...}}`` or
    ``{"table": <csv path>}``.
    """
    if not isinstance(spec, dict):
        raise ConfigError(f"function spec must be a mapping, got {spec!r}")
    if "table" in spec:
        return TableFunction(spec["table"])
    name = spec.get("name")
    if name not in BUILTINS:
        known = ", ".join(sorted(BUILTINS))
        raise ConfigError(f"unknown function {name!r}; builtins: {known}")
    params = spec.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError("function params must be a mapping")
    return BUILTINS[name](params)
