"""Constant-element solve of the logarithmic-kernel equilibrium equations.

The boundary density ``w`` of a compact region E satisfies a first-kind
integral equation: the logarithmic potential ``int log(1/|z-t|) w(t) |dt|``
is a constant ``c1`` for every ``z`` on the boundary, with total mass 1.
Discretizing with constant elements (one unknown per panel, collocation at
panel arc midpoints) gives a dense linear system; the constant ``c1`` is an
extra unknown balanced by the mass constraint.  The two-region (condenser)
variant carries a density on E with mass 1 and one on F with mass
``gamma``, potentials ``+c1`` on E and ``-c2`` on F, and two constants.

Off-diagonal kernel integrals use a three-point Simpson rule over the source
panel; the self integral uses the exact antiderivative of ``log`` over the
two half-chords.  Note the published element formulas mix the ``log`` and
``log(1/.)`` conventions: the self-integral formula as usually printed is
the integral of ``+log|.|``, so the assembled diagonal is its negative.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import lu_factor, lu_solve
from scipy.linalg import lapack as _lapack
from scipy.spatial import cKDTree

from .density import StepDensity, normalize_and_clamp
from .errors import (
    IllConditionedWarning,
    InvalidGeometryError,
    NearBoundaryWarning,
    NotApplicableError,
    SingularKernelError,
    SolverError,
)
from .geometry import Panel, PanelizedBoundary, require_finite_complex

__all__ = [
    "EquilibriumProblem",
    "EquilibriumSolution",
    "kernel_offdiag",
    "kernel_diag",
    "solve_polynomial",
    "solve_condenser",
    "CondenserSystem",
    "predicted_rate",
    "potential_of_density",
]

RCOND_HARD = 1e-14
RCOND_SOFT = 1e-10


def kernel_offdiag(target_mid, panel):
    """Simpson-rule integral of ``log(1/|t - .|)`` over a distinct panel.

    ``target_mid`` is the collocation point (another panel's arc midpoint);
    the rule samples the source panel at its endpoints and midpoint:
    ``-(length/6) * (log|t-start| + 4 log|t-mid| + log|t-end|)``.
    """
    t = require_finite_complex(target_mid, "collocation point")
    ds = abs(t - panel.start)
    dm = abs(t - panel.mid)
    de = abs(t - panel.end)
    if min(ds, dm, de) == 0.0:
        raise SingularKernelError(
            f"collocation point {t!r} coincides with a quadrature point of the panel"
        )
    return -(panel.length / 6.0) * (math.log(ds) + 4.0 * math.log(dm) + math.log(de))


def kernel_diag(panel):
    """Exact self integral of ``log|t - .|`` over the panel's two half-chords.

    Returns ``d1*(log d1 - 1) + d2*(log d2 - 1)`` with ``d1 = |mid-start|``
    and ``d2 = |mid-end|``.  This is the integral of ``+log``; assembly uses
    its negative so all matrix entries share the ``log(1/.)`` convention.
    """
    d1 = abs(panel.mid - panel.start)
    d2 = abs(panel.mid - panel.end)
    if d1 == 0.0 or d2 == 0.0:
        raise SingularKernelError("panel midpoint coincides with an endpoint")
    return d1 * (math.log(d1) - 1.0) + d2 * (math.log(d2) - 1.0)


def _kernel_matrix(boundary):
    """Dense matrix of ``int log(1/|mid_i - t|) |dt|`` over every panel j."""
    mids = boundary.mids
    t = mids[:, None]
    A = np.abs(t - mids[None, :])
    np.fill_diagonal(A, 1.0)
    ds = np.abs(t - boundary.starts[None, :])
    if A.min() <= 0.0 or ds.min() <= 0.0:
        raise SingularKernelError(
            "a collocation point coincides with another panel's quadrature point"
        )
    np.log(A, out=A)
    A *= 4.0
    np.log(ds, out=ds)
    A += ds
    del ds
    de = np.abs(t - boundary.ends[None, :])
    if de.min() <= 0.0:
        raise SingularKernelError(
            "a collocation point coincides with another panel's quadrature point"
        )
    np.log(de, out=de)
    A += de
    del de
    A *= -(boundary.lengths[None, :] / 6.0)
    d1 = np.abs(mids - boundary.starts)
    d2 = np.abs(mids - boundary.ends)
    np.fill_diagonal(A, -(d1 * (np.log(d1) - 1.0) + d2 * (np.log(d2) - 1.0)))
    return A


@dataclass(frozen=True)
class EquilibriumProblem:
    """One- or two-region equilibrium problem on panelized boundaries."""

    E: PanelizedBoundary
    F: Optional[PanelizedBoundary] = None
    gamma: Optional[float] = None

    def __post_init__(self):
        if self.F is not None:
            if self.gamma is None or not (0.0 < float(self.gamma) < 1.0):
                raise InvalidGeometryError(
                    f"condenser problems need gamma in (0, 1), got {self.gamma!r}"
                )
            pe = self.E.sample_points()
            pf = self.F.sample_points()
            scale = max(1.0, np.abs(pe).max(), np.abs(pf).max())
            tree = cKDTree(np.column_stack([pf.real, pf.imag]))
            dist, _ = tree.query(np.column_stack([pe.real, pe.imag]), k=1)
            if dist.min() <= 1e-12 * scale:
                raise InvalidGeometryError("regions E and F share points")


@dataclass
class EquilibriumSolution:
    """Raw densities and constants from a boundary-element solve.

    ``w_E``/``w_F`` are the raw per-panel values as solved (negative entries
    are kept here and flagged in ``negative_E``/``negative_F``); the
    ``density_E``/``density_F`` properties clamp and normalize them for
    point generation.
    """

    boundary_E: PanelizedBoundary
    w_E: np.ndarray
    c1: float
    boundary_F: Optional[PanelizedBoundary] = None
    w_F: Optional[np.ndarray] = None
    c2: Optional[float] = None
    gamma: Optional[float] = None
    rcond: float = float("nan")

    def __post_init__(self):
        self.negative_E = np.flatnonzero(np.asarray(self.w_E) < 0)
        self.negative_F = (
            np.flatnonzero(np.asarray(self.w_F) < 0) if self.w_F is not None else np.array([], int)
        )

    @property
    def density_E(self) -> StepDensity:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return normalize_and_clamp(self.w_E, self.boundary_E, 1.0)

    @property
    def density_F(self) -> Optional[StepDensity]:
        if self.boundary_F is None:
            return None
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return normalize_and_clamp(self.w_F, self.boundary_F, float(self.gamma))

    @property
    def mass_E(self):
        return float((self.boundary_E.lengths * self.w_E).sum())

    @property
    def mass_F(self):
        if self.w_F is None:
            return None
        return float((self.boundary_F.lengths * self.w_F).sum())


def _factor_with_condition(M, what):
    anorm = np.linalg.norm(M, 1)
    factor = lu_factor(M)
    rcond, info = _lapack.dgecon(factor[0], anorm, norm="1")
    if info != 0:
        raise SolverError(f"{what}: condition estimation failed (info={info})")
    if rcond == 0.0 or 1.0 / max(rcond, np.finfo(float).tiny) > 1e14:
        raise SolverError(
            f"{what}: system is numerically singular "
            f"(condition estimate {1.0 / max(rcond, np.finfo(float).tiny):.3e} > 1e14); "
            "check for touching or duplicated boundary pieces"
        )
    if 1.0 / rcond > 1e10:
        warnings.warn(
            f"{what}: condition estimate {1.0 / rcond:.3e} exceeds 1e10; "
            "results may lose accuracy",
            IllConditionedWarning,
            stacklevel=3,
        )
    return factor, rcond


def solve_polynomial(E):
    """Solve the one-region equilibrium system on a panelized boundary.

    Unknowns are the per-panel density and the potential constant ``c1``;
    rows enforce constant potential at every collocation midpoint, plus the
    unit total mass.
    """
    if not isinstance(E, PanelizedBoundary):
        raise InvalidGeometryError("solve_polynomial expects a PanelizedBoundary")
    N = E.n_panels
    A = _kernel_matrix(E)
    M = np.zeros((N + 1, N + 1))
    M[:N, :N] = A
    M[:N, N] = -1.0
    M[N, :N] = E.lengths
    rhs = np.zeros(N + 1)
    rhs[N] = 1.0
    factor, rcond = _factor_with_condition(M, "one-region equilibrium solve")
    x = lu_solve(factor, rhs)
    sol = EquilibriumSolution(boundary_E=E, w_E=x[:N], c1=float(x[N]), rcond=rcond)
    if sol.negative_E.size:
        warnings.warn(
            f"solved density has {sol.negative_E.size} negative panel value(s)",
            UserWarning,
            stacklevel=2,
        )
    return sol


class CondenserSystem:
    """Factorized two-region system; ``gamma`` enters only the right side.

    Reuse one factorization to solve for several mass ratios of the same
    geometry.
    """

    def __init__(self, E, F):
        problem = EquilibriumProblem(E, F, gamma=0.5)  # validates disjointness
        self.E = problem.E
        self.F = problem.F
        I = E.n_panels
        J = F.n_panels
        N = I + J
        both = PanelizedBoundary(
            list(E.components) + list(F.components),
            np.concatenate([E.starts, F.starts]),
            np.concatenate([E.mids, F.mids]),
            np.concatenate([E.ends, F.ends]),
            np.concatenate([E.lengths, F.lengths]),
            np.concatenate([E.comp_index, F.comp_index + len(E.components)]),
            np.concatenate([E.arc0, F.arc0]),
        )
        A = _kernel_matrix(both)
        M = np.zeros((N + 2, N + 2))
        M[:N, :I] = A[:, :I]
        M[:N, I:N] = -A[:, I:N]
        M[:I, N] = -1.0  # potential +c1 on E rows
        M[I:N, N + 1] = 1.0  # potential -c2 on F rows
        M[N, :I] = E.lengths
        M[N + 1, I:N] = F.lengths
        self._I, self._J, self._N = I, J, N
        self._factor, self.rcond = _factor_with_condition(M, "two-region equilibrium solve")

    def solve(self, gamma):
        gamma = float(gamma)
        if not 0.0 < gamma < 1.0:
            raise InvalidGeometryError(f"gamma must lie in (0, 1), got {gamma!r}")
        I, N = self._I, self._N
        rhs = np.zeros(N + 2)
        rhs[N] = 1.0
        rhs[N + 1] = gamma
        x = lu_solve(self._factor, rhs)
        sol = EquilibriumSolution(
            boundary_E=self.E,
            w_E=x[:I],
            c1=float(x[N]),
            boundary_F=self.F,
            w_F=x[I:N],
            c2=float(x[N + 1]),
            gamma=gamma,
            rcond=self.rcond,
        )
        if sol.c1 <= -sol.c2:
            warnings.warn(
                f"condenser constants violate c1 > -c2 (c1={sol.c1!r}, c2={sol.c2!r}); "
                "the regions may be too close or gamma too extreme",
                UserWarning,
                stacklevel=2,
            )
        if sol.negative_E.size or sol.negative_F.size:
            warnings.warn(
                f"solved densities have negative panel values "
                f"(E: {sol.negative_E.size}, F: {sol.negative_F.size})",
                UserWarning,
                stacklevel=2,
            )
        return sol


def solve_condenser(problem):
    """Solve a two-region :class:`EquilibriumProblem`."""
    if problem.F is None:
        raise InvalidGeometryError("condenser solve needs a second region F")
    return CondenserSystem(problem.E, problem.F).solve(problem.gamma)


def predicted_rate(solution):
    """Asymptotic interpolation convergence factor ``exp(-(c1 + c2))``."""
    if solution.c2 is None:
        raise NotApplicableError(
            "predicted_rate needs a two-region solution (no c2 present)"
        )
    return math.exp(-(solution.c1 + solution.c2))


def _panel_potential_row(boundary, z, warn_context=True):
    """Potential integrals of every panel at one point ``z`` (unit density).

    Uses the off-diagonal Simpson rule away from the boundary.  If ``z`` is a
    panel's quadrature midpoint the exact self rule is used; if it lies on a
    panel (or one of its endpoints) away from the midpoint, the self rule is
    re-centred on ``z``, which is exact for straight panels, and a warning is
    emitted.
    """
    z = require_finite_complex(z, "potential evaluation point")
    ds = np.abs(z - boundary.starts)
    dm = np.abs(z - boundary.mids)
    de = np.abs(z - boundary.ends)

    # distance from z to each panel's chord, and the chord parameter
    chord = boundary.ends - boundary.starts
    clen2 = np.abs(chord) ** 2
    tpar = np.clip(((z - boundary.starts) * np.conj(chord)).real / clen2, 0.0, 1.0)
    foot = boundary.starts + tpar * chord
    chord_dist = np.abs(z - foot)
    sagitta = np.abs(boundary.mids - 0.5 * (boundary.starts + boundary.ends))
    scale = max(1.0, abs(z), float(np.abs(boundary.mids).max()))
    on_panel = chord_dist <= sagitta + 1e-12 * scale

    exact_mid = dm == 0.0
    near = (on_panel | (ds == 0.0) | (de == 0.0)) & ~exact_mid

    out = np.empty(boundary.n_panels)
    regular = ~(exact_mid | near)
    with np.errstate(divide="ignore"):
        out[regular] = -(boundary.lengths[regular] / 6.0) * (
            np.log(ds[regular]) + 4.0 * np.log(dm[regular]) + np.log(de[regular])
        )

    def split_rule(d1, d2):
        # integral of log(1/r) over the two chords meeting at z;
        # d*(log d - 1) -> 0 as d -> 0
        t1 = np.where(d1 > 0, d1 * (np.log(np.where(d1 > 0, d1, 1.0)) - 1.0), 0.0)
        t2 = np.where(d2 > 0, d2 * (np.log(np.where(d2 > 0, d2, 1.0)) - 1.0), 0.0)
        return -(t1 + t2)

    if np.any(exact_mid):
        out[exact_mid] = split_rule(ds[exact_mid], de[exact_mid])
    if np.any(near):
        out[near] = split_rule(ds[near], de[near])
        if warn_context:
            warnings.warn(
                "potential evaluated on a panel away from its quadrature points; "
                "using the endpoint-split rule there",
                NearBoundaryWarning,
                stacklevel=3,
            )
    return out


def potential_of_density(solution, z):
    """Logarithmic potential of the solved (signed) density at ``z``.

    For a one-region solution this is ``int log(1/|z-t|) w_E |dt|``; a
    two-region solution subtracts the F-side integral.  Approaches ``c1``
    on the boundary of E and ``-log|z| + o(1)`` far away (one-region).
    """
    total = float(solution.w_E @ _panel_potential_row(solution.boundary_E, z))
    if solution.boundary_F is not None:
        total -= float(solution.w_F @ _panel_potential_row(solution.boundary_F, z))
    return total
