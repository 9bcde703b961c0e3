"""Builtin target functions, branch conventions, and sample tables."""

import cmath
import math

import numpy as np
import pytest

from briep.errors import ConfigError, FunctionEvaluationError
from briep.functions import BUILTINS, TableFunction, build_function


def test_registry_names():
    assert set(BUILTINS) == {
        "exp_z2",
        "inv_quadratic",
        "inv_linear",
        "sqrt_shift",
        "inv_sqrt_z",
        "sqrt_ratio",
        "exp_inv_quadratic",
        "exp_inv_sqrt_quadratic",
        "sqrt_over_poles",
        "exp_inv_product",
    }


def test_entire_function_has_no_singularities():
    f = build_function({"name": "exp_z2"})
    assert f.singularities == ()
    assert abs(f(0.0)[0] - 1.0) < 1e-15
    assert abs(f(1.0j)[0] - math.exp(-1)) < 1e-15


def test_reciprocal_quadratic():
    f = build_function({"name": "inv_quadratic", "params": {"c": 2.0, "b": 1.0}})
    np.testing.assert_allclose(
        sorted(s.imag for s in f.singularities), [-math.sqrt(2), math.sqrt(2)]
    )
    assert abs(f(0.0)[0] - 0.5) < 1e-15


def test_spike_family_singularities_scale_with_b():
    f = build_function(
        {"name": "exp_inv_quadratic", "params": {"c": 1.0, "b": 10000.0}}
    )
    np.testing.assert_allclose(
        sorted(s.imag for s in f.singularities), [-0.01, 0.01], atol=1e-15
    )
    assert abs(f(0.0)[0] - math.e) < 1e-14
    assert abs(f(1.0)[0] - math.exp(1.0 / 10001.0)) < 1e-14


def test_simple_pole():
    f = build_function({"name": "inv_linear", "params": {"q": 1.0}})
    assert f.singularities == (1.0 + 0j,)
    assert abs(f(0.0)[0] - (-1.0)) < 1e-15


def test_shifted_sqrt_principal_branch():
    f = build_function({"name": "sqrt_shift", "params": {"b": 0.2}})
    assert f.singularities == (-0.2 + 0j,)
    assert abs(f(0.0)[0] - math.sqrt(0.2)) < 1e-15
    # cut along (-inf, -0.2]: values jump across the negative real axis
    above = f(-1.0 + 1e-12j)[0]
    below = f(-1.0 - 1e-12j)[0]
    assert above.imag > 0.5 and below.imag < -0.5


def test_inverse_sqrt_principal_branch():
    f = build_function({"name": "inv_sqrt_z"})
    assert f.singularities == (0j,)
    assert abs(f(4.0)[0] - 0.5) < 1e-15
    assert abs(f(-1.0 + 1e-14j)[0] - (-1.0j)) < 1e-6


def test_sqrt_ratio_branch_points_and_far_field():
    f = build_function({"name": "sqrt_ratio", "params": {"a": 0.25, "b": 0.01}})
    np.testing.assert_allclose(
        sorted(s.real for s in f.singularities), [-0.5, -0.1, 0.1, 0.5]
    )
    assert abs(f(0.0)[0] - 5.0) < 1e-12
    assert abs(f(100.0)[0] - 1.0) < 1e-3
    with pytest.raises(ConfigError):
        build_function({"name": "sqrt_ratio", "params": {"a": 0.01, "b": 0.25}})


def test_sqrt_over_poles_value():
    f = build_function({"name": "sqrt_over_poles"})
    want = math.sqrt(0.5) / (0.25 * -0.5)
    assert abs(f(0.0)[0] - want) < 1e-14
    assert set(f.singularities) == {-0.5 + 0j, 0.5j, -0.5j, 0.5 + 0j}


def test_essential_pair_value():
    f = build_function({"name": "exp_inv_product"})
    assert f.singularities == (0.09 + 0j, 0.51j)
    want = cmath.exp(1.0 / (100.0 * (-0.09) * (-0.51j)))
    assert abs(f(0.0)[0] - want) < 1e-14


def test_evaluation_at_singularity_reports_point():
    f = build_function({"name": "inv_linear", "params": {"q": 1.0}})
    with pytest.raises(FunctionEvaluationError):
        f(1.0)
    f = build_function({"name": "inv_sqrt_z"})
    with pytest.raises(FunctionEvaluationError):
        f(0.0)


def test_vectorized_evaluation_shape():
    f = build_function({"name": "exp_z2"})
    z = np.linspace(-1, 1, 11)
    assert f(z).shape == (11,)


def test_unknown_function_rejected():
    with pytest.raises(ConfigError) as err:
        build_function({"name": "no_such_function"})
    assert "exp_z2" in str(err.value)
    with pytest.raises(ConfigError):
        build_function({"params": {}})
    with pytest.raises(ConfigError):
        build_function("exp_z2")


def test_table_function_roundtrip(tmp_path):
    rows = ["re,im,f_re,f_im"]
    pts = np.linspace(-1, 1, 5)
    for x in pts:
        rows.append(f"{x},0.0,{x * x},0.0")
    path = tmp_path / "table.csv"
    path.write_text("\n".join(rows) + "\n")
    f = TableFunction(str(path))
    np.testing.assert_allclose(f(pts + 0j).real, pts**2)
    with pytest.raises(FunctionEvaluationError):
        f(np.array([0.123 + 0j]))


def test_table_function_validates_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x,y\n1,2\n")
    with pytest.raises(ConfigError):
        TableFunction(str(path))
    with pytest.raises(ConfigError):
        TableFunction(str(tmp_path / "missing.csv"))
