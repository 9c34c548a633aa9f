"""Packed triangular/symmetric matrix storage and elementwise operators.

Lower triangles are stored row-major in a flat array of length
``m (m + 1) / 2``; entry ``(i, j)`` with ``j <= i`` lives at index
``i (i + 1) / 2 + j``.  The packed form is canonical; dense ``m x m``
conversions are provided for interop and testing.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

# Positivity tolerance at type boundaries: any representable normal positive
# diagonal is admitted.  Numerical-quality checks live in the operations.
TAU_POS = 1e-300


class LogCholError(Exception):
    """Base class for errors raised by this package."""


class DomainError(LogCholError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class NotSpdError(LogCholError, ValueError):
    """Matrix is not symmetric positive definite."""


class EmptyInputError(LogCholError, ValueError):
    """An operation requiring at least one element received an empty input."""


class NoConvergenceError(LogCholError, RuntimeError):
    """An iterative routine did not converge within its iteration budget."""


class EigFailureError(LogCholError, RuntimeError):
    """Symmetric eigendecomposition failed to converge."""


def packed_size(dim: int) -> int:
    """Number of stored entries of an ``dim x dim`` lower triangle."""
    return dim * (dim + 1) // 2


@functools.lru_cache(maxsize=None)
def diag_indices(dim: int) -> np.ndarray:
    """Positions of the diagonal entries inside the packed layout."""
    i = np.arange(dim)
    idx = i * (i + 3) // 2
    idx.setflags(write=False)
    return idx


@functools.lru_cache(maxsize=None)
def _tril_rc(dim: int) -> tuple[np.ndarray, np.ndarray]:
    rows, cols = np.tril_indices(dim)
    rows.setflags(write=False)
    cols.setflags(write=False)
    return rows, cols


def pack_lower(dense: np.ndarray) -> np.ndarray:
    """Pack the lower triangle (diagonal included) of a square matrix."""
    a = np.asarray(dense, dtype=float)
    rows, cols = _tril_rc(a.shape[0])
    return a[rows, cols]


def unpack_lower(data: np.ndarray, dim: int) -> np.ndarray:
    """Expand packed data to a dense lower triangular matrix."""
    out = np.zeros((dim, dim))
    rows, cols = _tril_rc(dim)
    out[rows, cols] = data
    return out


def unpack_sym(data: np.ndarray, dim: int) -> np.ndarray:
    """Expand packed data to a dense symmetric matrix."""
    lo = unpack_lower(data, dim)
    out = lo + lo.T
    np.fill_diagonal(out, np.diagonal(lo))
    return out


def _as_packed(data, dim: int) -> np.ndarray:
    arr = np.ascontiguousarray(data, dtype=float)
    if arr.shape != (packed_size(dim),):
        raise DomainError(
            f"packed data must have length {packed_size(dim)} for dim={dim}, "
            f"got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise DomainError("matrix entries must be finite")
    return arr


def _square_dense(dense) -> np.ndarray:
    a = np.asarray(dense, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DomainError(f"expected a square matrix, got shape {a.shape}")
    return a


@dataclass(frozen=True, eq=False)
class LowerTriangular:
    """General lower triangular matrix in packed row-major storage."""

    dim: int
    data: np.ndarray

    def __post_init__(self):
        if not isinstance(self.dim, (int, np.integer)) or self.dim < 1:
            raise DomainError(f"dim must be a positive integer, got {self.dim}")
        object.__setattr__(self, "data", _as_packed(self.data, self.dim))
        self._check()

    def _check(self) -> None:
        pass

    @property
    def diag(self) -> np.ndarray:
        """The diagonal entries, as a length-``dim`` vector."""
        return self.data[diag_indices(self.dim)]

    def dense(self) -> np.ndarray:
        return unpack_lower(self.data, self.dim)

    @classmethod
    def from_dense(cls, dense) -> "LowerTriangular":
        a = _square_dense(dense)
        if np.any(np.triu(a, 1) != 0.0):
            raise DomainError("matrix has nonzero entries above the diagonal")
        return cls(a.shape[0], pack_lower(a))

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim}, data={self.data!r})"


@dataclass(frozen=True, eq=False)
class CholeskyFactor(LowerTriangular):
    """Lower triangular matrix with strictly positive diagonal."""

    def _check(self) -> None:
        if np.any(self.diag < TAU_POS):
            raise DomainError("Cholesky factor diagonal must be strictly positive")


@dataclass(frozen=True, eq=False)
class SymMatrix:
    """Symmetric matrix storing only its lower triangle (packed row-major)."""

    dim: int
    data: np.ndarray

    def __post_init__(self):
        if not isinstance(self.dim, (int, np.integer)) or self.dim < 1:
            raise DomainError(f"dim must be a positive integer, got {self.dim}")
        object.__setattr__(self, "data", _as_packed(self.data, self.dim))
        self._check()

    def _check(self) -> None:
        pass

    @property
    def diag(self) -> np.ndarray:
        return self.data[diag_indices(self.dim)]

    def dense(self) -> np.ndarray:
        return unpack_sym(self.data, self.dim)

    @classmethod
    def from_dense(cls, dense) -> "SymMatrix":
        a = _square_dense(dense)
        scale = max(1.0, float(np.abs(a).max()))
        if not np.allclose(a, a.T, rtol=0.0, atol=1e-8 * scale):
            raise DomainError("matrix is not symmetric")
        return cls(a.shape[0], pack_lower((a + a.T) / 2.0))

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim}, data={self.data!r})"


# Tangent vectors at an SPD point are symmetric matrices.
SymTangent = SymMatrix


@dataclass(frozen=True, eq=False)
class SpdMatrix(SymMatrix):
    """Symmetric positive definite matrix.

    The operational SPD test (a Cholesky factorization with positive pivots)
    runs in :meth:`from_dense` and in every downstream factorization; the
    constructor itself performs only cheap checks, so internal code that
    produces values of the form ``L L^T`` can wrap them without re-factorizing.
    """

    def _check(self) -> None:
        if np.any(self.diag <= 0.0):
            raise NotSpdError("SPD matrix must have strictly positive diagonal")

    @classmethod
    def from_dense(cls, dense) -> "SpdMatrix":
        a = _square_dense(dense)
        scale = max(1.0, float(np.abs(a).max()))
        if not np.allclose(a, a.T, rtol=0.0, atol=1e-8 * scale):
            raise NotSpdError("matrix is not symmetric")
        a = (a + a.T) / 2.0
        try:
            np.linalg.cholesky(a)
        except np.linalg.LinAlgError as exc:
            raise NotSpdError("matrix is not positive definite") from exc
        return cls(a.shape[0], pack_lower(a))


def _require_same_dim(a, b) -> None:
    if a.dim != b.dim:
        raise DomainError(f"dimension mismatch: {a.dim} vs {b.dim}")


def strict_lower(a: LowerTriangular | SymMatrix) -> LowerTriangular:
    """Strictly lower triangular part: sub-diagonal entries, zero diagonal."""
    out = a.data.copy()
    out[diag_indices(a.dim)] = 0.0
    return LowerTriangular(a.dim, out)


def diag_part(a: LowerTriangular | SymMatrix) -> LowerTriangular:
    """Diagonal part, as a (diagonal) lower triangular matrix."""
    out = np.zeros_like(a.data)
    di = diag_indices(a.dim)
    out[di] = a.data[di]
    return LowerTriangular(a.dim, out)


def half_lower(s: SymMatrix) -> LowerTriangular:
    """Lower triangular part of a symmetric matrix with the diagonal halved."""
    out = s.data.copy()
    out[diag_indices(s.dim)] *= 0.5
    return LowerTriangular(s.dim, out)


def _require_diagonal(d: LowerTriangular) -> None:
    off = np.delete(d.data, diag_indices(d.dim))
    if np.any(off != 0.0):
        raise DomainError("expected a diagonal matrix")


def diag_exp(d: LowerTriangular) -> LowerTriangular:
    """Elementwise exponential of a diagonal matrix."""
    _require_diagonal(d)
    out = d.data.copy()
    di = diag_indices(d.dim)
    out[di] = np.exp(out[di])
    return LowerTriangular(d.dim, out)


def diag_log(d: LowerTriangular) -> LowerTriangular:
    """Elementwise logarithm of a diagonal matrix with positive diagonal."""
    _require_diagonal(d)
    if np.any(d.diag <= 0.0):
        raise DomainError("diag_log requires a strictly positive diagonal")
    out = d.data.copy()
    di = diag_indices(d.dim)
    out[di] = np.log(out[di])
    return LowerTriangular(d.dim, out)


def tri_det(l: LowerTriangular) -> float:
    """Determinant of a triangular matrix: the product of its diagonal."""
    return float(np.prod(l.diag))


# ---------------------------------------------------------------------------
# Matrix text format: one matrix per block, first line the dimension m, then
# m whitespace-separated rows of the full dense matrix.  Blocks are separated
# by blank lines.
# ---------------------------------------------------------------------------

_KINDS = {
    "lower": LowerTriangular,
    "cholesky": CholeskyFactor,
    "sym": SymMatrix,
    "spd": SpdMatrix,
}


def parse_matrix_text(text: str) -> list[np.ndarray]:
    """Parse dense matrices from the block text format."""
    lines = [ln.strip() for ln in text.splitlines()]
    mats: list[np.ndarray] = []
    i = 0
    while i < len(lines):
        if not lines[i]:
            i += 1
            continue
        try:
            m = int(lines[i])
        except ValueError as exc:
            raise DomainError(f"expected a dimension, got {lines[i]!r}") from exc
        if m < 1:
            raise DomainError(f"dimension must be positive, got {m}")
        rows = []
        for k in range(m):
            if i + 1 + k >= len(lines) or not lines[i + 1 + k]:
                raise DomainError(f"matrix block truncated after {k} rows")
            row = [float(tok) for tok in lines[i + 1 + k].split()]
            if len(row) != m:
                raise DomainError(f"expected {m} entries per row, got {len(row)}")
            rows.append(row)
        mats.append(np.array(rows))
        i += 1 + m
    return mats


def format_matrix_text(mats) -> str:
    """Render dense matrices in the block text format."""
    blocks = []
    for a in mats:
        a = _square_dense(a)
        rows = [" ".join(repr(float(x)) for x in row) for row in a]
        blocks.append("\n".join([str(a.shape[0])] + rows))
    return "\n\n".join(blocks) + "\n"


def load_matrices(path, kind: str = "spd") -> list:
    """Load and validate matrices of the declared kind from a fixture file."""
    if kind not in _KINDS:
        raise DomainError(f"unknown matrix kind {kind!r}; expected one of {sorted(_KINDS)}")
    cls = _KINDS[kind]
    with open(path, "r", encoding="utf-8") as fh:
        dense = parse_matrix_text(fh.read())
    return [cls.from_dense(a) for a in dense]


def dump_matrices(mats, path) -> None:
    """Write matrices (wrapped or dense) to a fixture file."""
    dense = [a.dense() if hasattr(a, "dense") else a for a in mats]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_matrix_text(dense))
