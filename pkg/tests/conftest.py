"""Shared fixtures: boundaries and equilibrium solves reused across files."""

from pathlib import Path

import pytest

from briep.geometry import BoundaryComponent, CircularArc, LineSegment, panelize
from briep.symm import solve_polynomial

CONFIG_DIR = Path(__file__).resolve().parents[1] / "configs"


def unit_interval():
    return BoundaryComponent([LineSegment(-1.0, 1.0)], closed=False)


def unit_circle(radius=1.0, center=0.0):
    import math

    return BoundaryComponent(
        [CircularArc(center, radius, 0.0, 2.0 * math.pi)], closed=True
    )


@pytest.fixture(scope="session")
def interval_boundary():
    return panelize([unit_interval()], 500)


@pytest.fixture(scope="session")
def interval_solution(interval_boundary):
    return solve_polynomial(interval_boundary)


@pytest.fixture(scope="session")
def circle_boundary():
    return panelize([unit_circle()], 500)


@pytest.fixture(scope="session")
def circle_solution(circle_boundary):
    return solve_polynomial(circle_boundary)
