"""Cholesky factorization, reconstruction, and their differentials.

These maps form the bridge between the space of lower triangular matrices
with positive diagonal and the space of SPD matrices: factorization in one
direction, ``L L^T`` in the other, and the linearizations of both.
"""
from __future__ import annotations

import numpy as np
from scipy.linalg import solve_triangular

from .tri import (
    CholeskyFactor,
    LowerTriangular,
    NotSpdError,
    SpdMatrix,
    SymMatrix,
    SymTangent,
    _require_same_dim,
    pack_lower,
)


def cholesky_factor(P: SpdMatrix) -> CholeskyFactor:
    """Unique lower triangular factor with positive diagonal of ``P = L L^T``.

    Raises
    ------
    NotSpdError
        If the factorization encounters a nonpositive or non-finite pivot.
    """
    try:
        f = np.linalg.cholesky(P.dense())
    except np.linalg.LinAlgError as exc:
        raise NotSpdError("Cholesky factorization failed: nonpositive pivot") from exc
    return CholeskyFactor(P.dim, pack_lower(f))


def cholesky_factor_recursive(P: SpdMatrix) -> CholeskyFactor:
    """Column-oriented evaluation of the factorization recurrences.

    Reference route for :func:`cholesky_factor`, which delegates to LAPACK;
    the two are cross-checked in the test suite.
    """
    a = P.dense()
    m = P.dim
    f = np.zeros((m, m))
    for j in range(m):
        pivot = a[j, j] - f[j, :j] @ f[j, :j]
        if not np.isfinite(pivot) or pivot <= 0.0:
            raise NotSpdError(f"nonpositive pivot {pivot!r} at column {j}")
        f[j, j] = np.sqrt(pivot)
        f[j + 1 :, j] = (a[j + 1 :, j] - f[j + 1 :, :j] @ f[j, :j]) / f[j, j]
    return CholeskyFactor(m, pack_lower(f))


def reconstruct(L: CholeskyFactor) -> SpdMatrix:
    """The SPD matrix ``L L^T``."""
    f = L.dense()
    a = f @ f.T
    a = (a + a.T) / 2.0
    return SpdMatrix(L.dim, pack_lower(a))


def diff_S(L: CholeskyFactor, X: LowerTriangular) -> SymTangent:
    """Differential of ``L -> L L^T`` at ``L`` applied to ``X``: ``L X^T + X L^T``."""
    _require_same_dim(L, X)
    m = L.dense() @ X.dense().T
    return SymMatrix(L.dim, pack_lower(m + m.T))


def diff_S_inv(L: CholeskyFactor, W: SymTangent) -> LowerTriangular:
    """Inverse differential: the lower triangular ``X`` with ``L X^T + X L^T = W``.

    Computed as ``L (L^{-1} W L^{-T})_half`` via two triangular solves; the
    inner product is symmetrized to absorb roundoff before halving the
    diagonal.
    """
    _require_same_dim(L, W)
    f = L.dense()
    b = solve_triangular(f, W.dense(), lower=True, check_finite=False)
    b = solve_triangular(f, b.T, lower=True, check_finite=False)
    b = (b + b.T) / 2.0
    h = np.tril(b)
    np.fill_diagonal(h, np.diagonal(b) / 2.0)
    return LowerTriangular(L.dim, pack_lower(f @ h))
