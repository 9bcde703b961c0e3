"""Second-kind barycentric evaluation with prescribed nodes and poles.

The interpolant is the quotient

    r(x) = sum_k w_k f_k / (x - x_k)  /  sum_k w_k / (x - x_k),

which reproduces ``f_k`` at the nodes for any nonzero weights.  Polynomial
interpolation uses ``w_k = C / prod_{j!=k} (x_k - x_j)``; prescribing poles
``z_1..z_m`` (m <= n) multiplies each weight by ``prod_i (x_k - z_i)``.  The
free constant ``C`` is fixed by normalizing ``max_k |w_k| = 1``.  Weight
products are accumulated as log magnitudes plus phases and exponentiated
after subtracting the maximum, so clustered nodes do not overflow.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DuplicateNodeError,
    PoleHitError,
    PoleNodeCoincidenceError,
)

__all__ = [
    "Interpolant",
    "weights_polynomial",
    "weights_rational",
    "evaluate",
    "evaluate_many",
]

_NODE_HIT_RTOL = 1e-15
_CHUNK = 4096


def _as_points(values, what):
    arr = np.atleast_1d(np.asarray(values, dtype=complex))
    if arr.ndim != 1:
        raise ValueError(f"{what} must be one-dimensional")
    if arr.size and not np.all(np.isfinite(arr.view(float))):
        raise ValueError(f"{what} must be finite")
    return arr


def _check_distinct_nodes(nodes):
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    dup = np.argwhere(diff == 0)
    if dup.size:
        i, j = dup[0]
        raise DuplicateNodeError(f"nodes {i} and {j} coincide at {nodes[i]!r}")
    return diff


def _normalized_weights(logmag, phase):
    w = np.exp(logmag - logmag.max() + 1j * phase)
    if np.any(w == 0) or not np.all(np.isfinite(w.view(float))):
        raise ArithmeticError(
            "weight magnitudes span more than the floating-point range; "
            "nodes are too unevenly clustered"
        )
    return w


def weights_polynomial(nodes):
    """Barycentric weights for polynomial interpolation at ``nodes``.

    Normalized so that ``max |w_k| = 1``; on sorted real nodes the signs
    alternate.
    """
    nodes = _as_points(nodes, "nodes")
    if nodes.size < 1:
        raise ValueError("at least one node required")
    if nodes.size == 1:
        return np.ones(1, dtype=complex)
    diff = _check_distinct_nodes(nodes)
    logmag = -np.sum(np.log(np.abs(diff)), axis=1)
    phase = -np.sum(np.angle(diff), axis=1)
    # remove the diagonal placeholder contribution (log 1 = 0, angle 1 = 0)
    return _normalized_weights(logmag, phase)


def weights_rational(nodes, poles):
    """Weights for interpolation at ``nodes`` with prescribed ``poles``.

    Requires ``len(poles) <= len(nodes) - 1`` and poles distinct from nodes.
    Empty ``poles`` reduces to :func:`weights_polynomial`.
    """
    nodes = _as_points(nodes, "nodes")
    poles = _as_points(poles, "poles") if len(np.atleast_1d(poles)) else np.array([], complex)
    if poles.size == 0:
        return weights_polynomial(nodes)
    if poles.size > nodes.size - 1:
        raise ValueError(
            f"{poles.size} poles exceed the degree budget of {nodes.size} nodes"
        )
    diff = _check_distinct_nodes(nodes)
    pdiff = nodes[:, None] - poles[None, :]
    hit = np.argwhere(pdiff == 0)
    if hit.size:
        k, i = hit[0]
        raise PoleNodeCoincidenceError(
            f"pole {i} coincides with node {k} at {nodes[k]!r}"
        )
    logmag = np.sum(np.log(np.abs(pdiff)), axis=1) - np.sum(np.log(np.abs(diff)), axis=1)
    phase = np.sum(np.angle(pdiff), axis=1) - np.sum(np.angle(diff), axis=1)
    return _normalized_weights(logmag, phase)


@dataclass(frozen=True)
class Interpolant:
    """Nodes, weights and samples defining a barycentric quotient."""

    nodes: np.ndarray
    weights: np.ndarray
    samples: np.ndarray
    poles: np.ndarray = None

    def __post_init__(self):
        nodes = _as_points(self.nodes, "nodes")
        weights = np.atleast_1d(np.asarray(self.weights, dtype=complex))
        samples = np.atleast_1d(np.asarray(self.samples, dtype=complex))
        poles = (
            _as_points(self.poles, "poles")
            if self.poles is not None and len(np.atleast_1d(self.poles))
            else np.array([], complex)
        )
        if not (nodes.size == weights.size == samples.size):
            raise ValueError("nodes, weights and samples must have equal lengths")
        _check_distinct_nodes(nodes)
        if np.any(weights == 0):
            raise ValueError("zero barycentric weight")
        if poles.size and np.any(nodes[:, None] == poles[None, :]):
            raise PoleNodeCoincidenceError("a pole coincides with a node")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "poles", poles)

    @property
    def n(self):
        """Polynomial degree budget (number of nodes minus one)."""
        return self.nodes.size - 1

    @property
    def m(self):
        return self.poles.size

    def __call__(self, x):
        if np.isscalar(x):
            return evaluate(self, x)
        return evaluate_many(self, x)


def evaluate(interpolant, x):
    """Evaluate at one point; see :func:`evaluate_many`."""
    return complex(evaluate_many(interpolant, np.array([x], dtype=complex))[0])


def evaluate_many(interpolant, xs):
    """Evaluate the barycentric quotient at an array of points.

    Points that hit a node exactly (or within a relative distance of 1e-15)
    return the stored sample.  A vanishing denominator anywhere else means
    ``x`` is a pole of the quotient and raises :class:`PoleHitError`.
    """
    xs = np.asarray(xs, dtype=complex)
    shape = xs.shape
    flat = xs.ravel()
    nodes = interpolant.nodes
    w = interpolant.weights
    f = interpolant.samples
    out = np.empty(flat.shape, dtype=complex)
    for lo in range(0, flat.size, _CHUNK):
        chunk = flat[lo : lo + _CHUNK]
        D = chunk[:, None] - nodes[None, :]
        tol = _NODE_HIT_RTOL * (np.abs(chunk)[:, None] + np.abs(nodes)[None, :])
        hit = (D == 0) | (np.abs(D) <= tol)
        np.copyto(D, 1.0, where=hit)
        C = w[None, :] / D
        # per-row pairwise sums: identical results for any chunking of xs
        num = (C * f[None, :]).sum(axis=1)
        den = C.sum(axis=1)
        hit_any = hit.any(axis=1)
        bad = (den == 0) & ~hit_any
        if np.any(bad):
            raise PoleHitError(
                f"barycentric denominator vanishes at {flat[lo:][bad.nonzero()[0][0]]!r}"
            )
        vals = num / np.where(den == 0, 1.0, den)
        if np.any(hit_any):
            rows = hit_any.nonzero()[0]
            cols = hit[rows].argmax(axis=1)
            vals[rows] = f[cols]
        out[lo : lo + _CHUNK] = vals
    return out.reshape(shape)
