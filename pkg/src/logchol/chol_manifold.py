"""Riemannian manifold and abelian group structure on the Cholesky space.

The space of lower triangular matrices with positive diagonal carries a
metric that is Frobenius on the strict lower triangle and scaled by the
inverse squared diagonal on the diagonal.  All operations below are smooth
closed forms: the manifold is flat and complete, so geodesics, exponential
and logarithmic maps, parallel transport and Frechet means are globally
defined.
"""
from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .tri import (
    CholeskyFactor,
    DomainError,
    EmptyInputError,
    LowerTriangular,
    _require_same_dim,
    diag_indices,
)


def metric_chol(L: CholeskyFactor, X: LowerTriangular, Y: LowerTriangular) -> float:
    """Inner product of tangent vectors ``X`` and ``Y`` at ``L``.

    Frobenius on the strict lower triangle plus diagonal products weighted
    by ``L_jj^-2``.
    """
    _require_same_dim(L, X)
    _require_same_dim(L, Y)
    di = diag_indices(L.dim)
    prod = X.data * Y.data
    diag_prod = prod[di].copy()
    prod[di] = 0.0  # zeroed, not subtracted: avoids cancellation for large diagonals
    return float(prod.sum() + (diag_prod / L.data[di] ** 2).sum())


def norm_chol(L: CholeskyFactor, X: LowerTriangular) -> float:
    return float(np.sqrt(metric_chol(L, X, X)))


def geodesic_chol(L: CholeskyFactor, X: LowerTriangular, t: float) -> CholeskyFactor:
    """Geodesic through ``L`` with initial velocity ``X``, evaluated at ``t``.

    Linear in the strict lower triangle; exponential on the diagonal.
    Defined for all real ``t``.
    """
    _require_same_dim(L, X)
    di = diag_indices(L.dim)
    out = L.data + t * X.data
    out[di] = L.data[di] * np.exp(t * X.data[di] / L.data[di])
    return CholeskyFactor(L.dim, out)


def exp_chol(L: CholeskyFactor, X: LowerTriangular) -> CholeskyFactor:
    """Riemannian exponential map at ``L``: the geodesic at ``t = 1``."""
    return geodesic_chol(L, X, 1.0)


def log_chol(L: CholeskyFactor, K: CholeskyFactor) -> LowerTriangular:
    """Riemannian logarithm: the tangent at ``L`` pointing to ``K``."""
    _require_same_dim(L, K)
    di = diag_indices(L.dim)
    out = K.data - L.data
    out[di] = L.data[di] * np.log(K.data[di] / L.data[di])
    return LowerTriangular(L.dim, out)


def dist_chol(L: CholeskyFactor, K: CholeskyFactor) -> float:
    """Geodesic distance between two factors."""
    _require_same_dim(L, K)
    di = diag_indices(L.dim)
    gap = L.data - K.data
    gap[di] = 0.0  # the diagonal enters through the log gap only
    dlog = np.log(L.data[di]) - np.log(K.data[di])
    return float(np.sqrt(gap @ gap + dlog @ dlog))


def group_op(L: LowerTriangular, K: LowerTriangular) -> LowerTriangular:
    """Commutative group operation: strict lower parts add, diagonals multiply.

    Returns a :class:`CholeskyFactor` when both operands are factors.
    """
    _require_same_dim(L, K)
    di = diag_indices(L.dim)
    out = L.data + K.data
    out[di] = L.data[di] * K.data[di]
    if isinstance(L, CholeskyFactor) and isinstance(K, CholeskyFactor):
        return CholeskyFactor(L.dim, out)
    return LowerTriangular(L.dim, out)


def group_inv(L: CholeskyFactor) -> CholeskyFactor:
    """Group inverse: negated strict lower part, reciprocal diagonal."""
    di = diag_indices(L.dim)
    out = -L.data
    out[di] = 1.0 / L.data[di]
    return CholeskyFactor(L.dim, out)


def group_identity(dim: int) -> CholeskyFactor:
    """The group identity: the identity matrix."""
    return CholeskyFactor.from_dense(np.eye(dim))


def transport_chol(
    L: CholeskyFactor, K: CholeskyFactor, X: LowerTriangular
) -> LowerTriangular:
    """Parallel transport of ``X`` from ``L`` to ``K``.

    The strict lower block is carried over untouched; diagonal entries are
    rescaled by ``K_jj / L_jj``.  Transport is path independent (the
    manifold is flat) and preserves the metric.
    """
    _require_same_dim(L, K)
    _require_same_dim(L, X)
    di = diag_indices(L.dim)
    out = X.data.copy()
    out[di] *= K.data[di] / L.data[di]
    return LowerTriangular(L.dim, out)


def frechet_mean_chol(
    Ls: Sequence[CholeskyFactor], weights: Sequence[float] | None = None
) -> CholeskyFactor:
    """Closed-form Frechet mean of factors.

    Arithmetic mean of the strict lower parts combined with the geometric
    mean of the diagonals.  Optional convex weights generalize the uniform
    average; unweighted input follows the uniform closed form.
    """
    if len(Ls) == 0:
        raise EmptyInputError("frechet_mean_chol requires at least one factor")
    dim = Ls[0].dim
    for L in Ls[1:]:
        _require_same_dim(Ls[0], L)
    w = _convex_weights(weights, len(Ls))
    di = diag_indices(dim)
    stacked = np.stack([L.data for L in Ls])
    out = w @ stacked
    out[di] = np.exp(w @ np.log(stacked[:, di]))
    return CholeskyFactor(dim, out)


def _convex_weights(weights, n: int) -> np.ndarray:
    if weights is None:
        return np.full(n, 1.0 / n)
    w = np.asarray(weights, dtype=float)
    if w.shape != (n,):
        raise DomainError(f"expected {n} weights, got shape {w.shape}")
    if np.any(w < 0.0) or abs(w.sum() - 1.0) > 1e-10:
        raise DomainError("weights must be nonnegative and sum to one")
    return w
