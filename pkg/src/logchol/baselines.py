"""Baseline SPD geometries: Euclidean, Cholesky distance, Log-Euclidean,
affine-invariant.

All four expose distance, geodesic interpolation and a mean; the two
Riemannian baselines additionally expose exponential/logarithmic maps and
parallel transport so they can be timed and stress-tested against the
Log-Cholesky geometry.  A small registry keys every geometry (including
Log-Cholesky) by its selector string for uniform iteration from the CLI
and tests.
"""
from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from . import spd_manifold as spd
from .chol_map import cholesky_factor, reconstruct
from .tri import (
    CholeskyFactor,
    DomainError,
    EigFailureError,
    EmptyInputError,
    NoConvergenceError,
    NotSpdError,
    SpdMatrix,
    SymMatrix,
    SymTangent,
    _require_same_dim,
    pack_lower,
)

# ---------------------------------------------------------------------------
# Matrix functions of symmetric matrices via eigendecomposition
# ---------------------------------------------------------------------------


def _eigh(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    try:
        return np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise EigFailureError("symmetric eigendecomposition failed") from exc


def sym_expm(a: np.ndarray) -> np.ndarray:
    """Matrix exponential of a symmetric matrix."""
    w, u = _eigh(a)
    return (u * np.exp(w)) @ u.T


def spd_logm(a: np.ndarray) -> np.ndarray:
    """Matrix logarithm of an SPD matrix."""
    w, u = _eigh(a)
    if w[0] <= 0.0:
        raise NotSpdError(f"matrix logarithm undefined: smallest eigenvalue {w[0]}")
    return (u * np.log(w)) @ u.T


def spd_powm(a: np.ndarray, t: float) -> np.ndarray:
    """Real matrix power of an SPD matrix."""
    w, u = _eigh(a)
    if w[0] <= 0.0:
        raise NotSpdError(f"matrix power undefined: smallest eigenvalue {w[0]}")
    return (u * w**t) @ u.T


def _sym(a: np.ndarray) -> np.ndarray:
    return (a + a.T) / 2.0


def _wrap_spd(a: np.ndarray) -> SpdMatrix:
    return SpdMatrix(a.shape[0], pack_lower(_sym(a)))


def _wrap_sym(a: np.ndarray) -> SymMatrix:
    return SymMatrix(a.shape[0], pack_lower(_sym(a)))


# ---------------------------------------------------------------------------
# Euclidean
# ---------------------------------------------------------------------------


def euclid_dist(P: SymMatrix, Q: SymMatrix) -> float:
    _require_same_dim(P, Q)
    return float(np.linalg.norm(P.dense() - Q.dense()))


def euclid_interpolate(P: SymMatrix, Q: SymMatrix, t: float) -> SymMatrix:
    """Linear interpolation ``(1 - t) P + t Q``; exhibits determinant swelling."""
    _require_same_dim(P, Q)
    return _wrap_sym((1.0 - t) * P.dense() + t * Q.dense())


def euclid_mean(Ps: Sequence[SymMatrix]) -> SymMatrix:
    if len(Ps) == 0:
        raise EmptyInputError("euclid_mean requires at least one matrix")
    return _wrap_sym(np.mean([P.dense() for P in Ps], axis=0))


def euclid_exp(P: SymMatrix, W: SymTangent) -> SymMatrix:
    return _wrap_sym(P.dense() + W.dense())


def euclid_log(P: SymMatrix, Q: SymMatrix) -> SymTangent:
    return _wrap_sym(Q.dense() - P.dense())


# ---------------------------------------------------------------------------
# Cholesky distance (Frobenius gap of factors)
# ---------------------------------------------------------------------------


def cholesky_distance(P: SpdMatrix, Q: SpdMatrix) -> float:
    _require_same_dim(P, Q)
    l1 = cholesky_factor(P)
    l2 = cholesky_factor(Q)
    return float(np.linalg.norm(l1.data - l2.data))


def cholesky_interpolate(P: SpdMatrix, Q: SpdMatrix, t: float) -> SpdMatrix:
    """Convex combination of the factors, reconstructed."""
    _require_same_dim(P, Q)
    l1 = cholesky_factor(P)
    l2 = cholesky_factor(Q)
    f = (1.0 - t) * l1.data + t * l2.data
    return reconstruct(CholeskyFactor(P.dim, f))


def cholesky_mean(Ps: Sequence[SpdMatrix]) -> SpdMatrix:
    if len(Ps) == 0:
        raise EmptyInputError("cholesky_mean requires at least one matrix")
    f = np.mean([cholesky_factor(P).data for P in Ps], axis=0)
    return reconstruct(CholeskyFactor(Ps[0].dim, f))


def cholesky_exp(P: SpdMatrix, X_packed_gap: SymTangent) -> SpdMatrix:
    # Factor-space translation; the "tangent" is a symmetric carrier for the
    # packed factor gap so all metrics share one exp/log signature.
    f = cholesky_factor(P).data + X_packed_gap.data
    return reconstruct(CholeskyFactor(P.dim, f))


def cholesky_log(P: SpdMatrix, Q: SpdMatrix) -> SymTangent:
    gap = cholesky_factor(Q).data - cholesky_factor(P).data
    return SymMatrix(P.dim, gap)


# ---------------------------------------------------------------------------
# Log-Euclidean
# ---------------------------------------------------------------------------

DLOG_SERIES_TOL = 1e-12
DLOG_SERIES_MAX_TERMS = 500


def dexp_sym(s: np.ndarray, h: np.ndarray, tol: float = DLOG_SERIES_TOL,
             max_terms: int = DLOG_SERIES_MAX_TERMS) -> np.ndarray:
    """Directional derivative of the matrix exponential at ``s`` along ``h``.

    Evaluated from the power series of ``exp``; each term is accumulated
    with its factorial folded in to avoid overflow.
    """
    # term_k = (1/k!) sum_{i+j=k-1} s^i h s^j, via the recurrence
    # term_{k+1} = (s term_k + h s^k/k!) / (k+1).
    term = h.copy()
    out = h.copy()
    pk = np.eye(s.shape[0])  # s^k / k!
    for k in range(1, max_terms):
        pk = pk @ s / k
        term = (s @ term + h @ pk) / (k + 1)
        out += term
        if np.linalg.norm(term) < tol:
            break
    return out


def dlog_spd(p: np.ndarray, w: np.ndarray, tol: float = DLOG_SERIES_TOL,
             max_terms: int = DLOG_SERIES_MAX_TERMS) -> np.ndarray:
    """Directional derivative of the matrix logarithm at SPD ``p`` along ``w``.

    Uses the alternating series of ``log(I + E)`` after the exact scalar
    rescaling ``log(p) = log(c) I + log(p / c)`` with ``c`` the midpoint of
    the spectrum, which keeps the spectral radius of ``E`` below one.  The
    series is truncated adaptively once a term drops below ``tol`` or after
    ``max_terms`` terms.
    """
    lam = np.linalg.eigvalsh(p)
    if lam[0] <= 0.0:
        raise NotSpdError("matrix logarithm differential undefined off the SPD cone")
    c = (lam[0] + lam[-1]) / 2.0
    e = p / c - np.eye(p.shape[0])
    v = w / c
    term = v.copy()  # sum_{i+j=k-1} e^i v e^j
    ek = e.copy()
    out = v.copy()
    sign = 1.0
    for k in range(2, max_terms + 1):
        term = e @ term + v @ ek
        ek = ek @ e
        sign = -sign
        contrib = sign * term / k
        out += contrib
        if np.linalg.norm(contrib) < tol:
            break
    return out


def logeuclid_dist(P: SpdMatrix, Q: SpdMatrix) -> float:
    _require_same_dim(P, Q)
    return float(np.linalg.norm(spd_logm(P.dense()) - spd_logm(Q.dense())))


def logeuclid_interpolate(P: SpdMatrix, Q: SpdMatrix, t: float) -> SpdMatrix:
    _require_same_dim(P, Q)
    lp = spd_logm(P.dense())
    lq = spd_logm(Q.dense())
    return _wrap_spd(sym_expm((1.0 - t) * lp + t * lq))


def logeuclid_mean(Ps: Sequence[SpdMatrix]) -> SpdMatrix:
    if len(Ps) == 0:
        raise EmptyInputError("logeuclid_mean requires at least one matrix")
    return _wrap_spd(sym_expm(np.mean([spd_logm(P.dense()) for P in Ps], axis=0)))


def logeuclid_exp(P: SpdMatrix, W: SymTangent, tol: float = DLOG_SERIES_TOL,
                  max_terms: int = DLOG_SERIES_MAX_TERMS) -> SpdMatrix:
    """Riemannian exponential: push the tangent into log space and exponentiate."""
    p = P.dense()
    return _wrap_spd(sym_expm(spd_logm(p) + dlog_spd(p, W.dense(), tol, max_terms)))


def logeuclid_log(P: SpdMatrix, Q: SpdMatrix, tol: float = DLOG_SERIES_TOL,
                  max_terms: int = DLOG_SERIES_MAX_TERMS) -> SymTangent:
    """Riemannian logarithm: log-space difference pulled back to the tangent at P."""
    lp = spd_logm(P.dense())
    lq = spd_logm(Q.dense())
    return _wrap_sym(dexp_sym(lp, lq - lp, tol, max_terms))


def logeuclid_transport(P: SpdMatrix, Q: SpdMatrix, W: SymTangent,
                        tol: float = DLOG_SERIES_TOL,
                        max_terms: int = DLOG_SERIES_MAX_TERMS) -> SymTangent:
    """Parallel transport: flatten at ``P`` via d(log), restore at ``Q`` via d(exp)."""
    _require_same_dim(P, Q)
    flat = dlog_spd(P.dense(), W.dense(), tol, max_terms)
    return _wrap_sym(dexp_sym(spd_logm(Q.dense()), flat, tol, max_terms))


# ---------------------------------------------------------------------------
# Affine-invariant
# ---------------------------------------------------------------------------

KARCHER_TOL = 1e-12
KARCHER_MAX_ITER = 200


def _sqrt_pair(p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    w, u = _eigh(p)
    if w[0] <= 0.0:
        raise NotSpdError(f"matrix square root undefined: smallest eigenvalue {w[0]}")
    sq = np.sqrt(w)
    return (u * sq) @ u.T, (u / sq) @ u.T


def affine_dist(P: SpdMatrix, Q: SpdMatrix) -> float:
    _require_same_dim(P, Q)
    _, pis = _sqrt_pair(P.dense())
    return float(np.linalg.norm(spd_logm(_sym(pis @ Q.dense() @ pis))))


def affine_interpolate(P: SpdMatrix, Q: SpdMatrix, t: float) -> SpdMatrix:
    _require_same_dim(P, Q)
    ps, pis = _sqrt_pair(P.dense())
    mid = spd_powm(_sym(pis @ Q.dense() @ pis), t)
    return _wrap_spd(ps @ mid @ ps)


def affine_exp(P: SpdMatrix, W: SymTangent) -> SpdMatrix:
    ps, pis = _sqrt_pair(P.dense())
    return _wrap_spd(ps @ sym_expm(_sym(pis @ W.dense() @ pis)) @ ps)


def affine_log(P: SpdMatrix, Q: SpdMatrix) -> SymTangent:
    ps, pis = _sqrt_pair(P.dense())
    return _wrap_sym(ps @ spd_logm(_sym(pis @ Q.dense() @ pis)) @ ps)


def affine_transport(P: SpdMatrix, Q: SpdMatrix, W: SymTangent) -> SymTangent:
    """Closed-form transport ``E W E^T`` with ``E = (Q P^-1)^(1/2)``."""
    _require_same_dim(P, Q)
    ps, pis = _sqrt_pair(P.dense())
    inner = spd_powm(_sym(pis @ Q.dense() @ pis), 0.5)
    e = ps @ inner @ pis
    return _wrap_sym(e @ W.dense() @ e.T)


def affine_inner(P: SpdMatrix, W: SymTangent, V: SymTangent) -> float:
    """Affine-invariant inner product ``tr(P^-1 W P^-1 V)``."""
    pinv = np.linalg.inv(P.dense())
    return float(np.trace(pinv @ W.dense() @ pinv @ V.dense()))


def affine_karcher_mean(
    Ps: Sequence[SpdMatrix],
    tol: float = KARCHER_TOL,
    max_iter: int = KARCHER_MAX_ITER,
) -> SpdMatrix:
    """Frechet mean by fixed-point iteration with unit step.

    Raises
    ------
    NoConvergenceError
        If the tangent-space gradient has not dropped below ``tol``
        (relative to the iterate's norm) within ``max_iter`` iterations.
    """
    if len(Ps) == 0:
        raise EmptyInputError("affine_karcher_mean requires at least one matrix")
    if len(Ps) == 1:
        return Ps[0]
    s = euclid_mean(Ps).dense()
    mean = _wrap_spd(s)
    for _ in range(max_iter):
        grad = np.mean([affine_log(mean, P).dense() for P in Ps], axis=0)
        if np.linalg.norm(grad) <= tol * (1.0 + np.linalg.norm(mean.dense())):
            return mean
        mean = affine_exp(mean, _wrap_sym(grad))
    raise NoConvergenceError(
        f"Karcher iteration did not converge in {max_iter} iterations"
    )


# ---------------------------------------------------------------------------
# Registry keyed by metric selector string
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MetricOps:
    """Uniform interface over the five geometries."""

    name: str
    distance: Callable[[SpdMatrix, SpdMatrix], float]
    interpolate: Callable[[SpdMatrix, SpdMatrix, float], SymMatrix]
    mean: Callable[[Sequence[SpdMatrix]], SymMatrix]
    exp: Callable[[SpdMatrix, SymTangent], SymMatrix]
    log: Callable[[SpdMatrix, SpdMatrix], SymTangent]
    transport: Callable[[SpdMatrix, SpdMatrix, SymTangent], SymTangent] | None = None


def _lc_interpolate(P: SpdMatrix, Q: SpdMatrix, t: float) -> SpdMatrix:
    return spd.interpolate_spd(P, Q, [t])[0]


_METRICS = {
    "euclidean": MetricOps(
        name="euclidean",
        distance=euclid_dist,
        interpolate=euclid_interpolate,
        mean=euclid_mean,
        exp=euclid_exp,
        log=euclid_log,
    ),
    "cholesky": MetricOps(
        name="cholesky",
        distance=cholesky_distance,
        interpolate=cholesky_interpolate,
        mean=cholesky_mean,
        exp=cholesky_exp,
        log=cholesky_log,
    ),
    "log-euclidean": MetricOps(
        name="log-euclidean",
        distance=logeuclid_dist,
        interpolate=logeuclid_interpolate,
        mean=logeuclid_mean,
        exp=logeuclid_exp,
        log=logeuclid_log,
        transport=logeuclid_transport,
    ),
    "affine-invariant": MetricOps(
        name="affine-invariant",
        distance=affine_dist,
        interpolate=affine_interpolate,
        mean=affine_karcher_mean,
        exp=affine_exp,
        log=affine_log,
        transport=affine_transport,
    ),
    "log-cholesky": MetricOps(
        name="log-cholesky",
        distance=spd.dist_spd,
        interpolate=_lc_interpolate,
        mean=spd.log_cholesky_mean,
        exp=spd.exp_spd,
        log=spd.log_spd,
        transport=spd.transport_spd,
    ),
}

METRIC_NAMES = tuple(_METRICS)


def get_metric(name: str) -> MetricOps:
    """Look up a geometry by its selector string."""
    try:
        return _METRICS[name]
    except KeyError:
        raise DomainError(
            f"unknown metric {name!r}; expected one of {sorted(_METRICS)}"
        ) from None
