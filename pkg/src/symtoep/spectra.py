"""Spectral measurements: symmetric eigenvalues, singular values, norms, rank.

The factorizations themselves are LAPACK's (through numpy); this module adds
the input checks and the sorted ``Spectrum`` container everything else uses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SYMMETRY_TOL = 1e-12
RESIDUAL_TOL = 1e-9
# eigenvectors are only formed for the residual check up to this order
AUTO_CHECK_LIMIT = 1024


class AsymmetricMatrixError(ValueError):
    pass


class NumericalError(ArithmeticError):
    pass


@dataclass(frozen=True, eq=False)
class Spectrum:
    values: np.ndarray
    kind: str  # "eigenvalues" or "singular_values"

    def __len__(self):
        return len(self.values)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)


def _finite(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    if not np.all(np.isfinite(A)):
        raise NumericalError("matrix has non-finite entries")
    return A


def eig_sym(A, check: bool | None = None) -> Spectrum:
    """Ascending eigenvalues of a real symmetric matrix.

    With ``check`` (default: only for order <= 1024) the eigenvectors are
    formed too and the residual ``max |AQ - Q diag(w)|`` is verified.
    """
    A = _finite(A)
    if A.shape[0] != A.shape[1]:
        raise AsymmetricMatrixError(f"matrix of shape {A.shape} is not square")
    scale = np.max(np.abs(A), initial=0.0)
    if np.max(np.abs(A - A.T), initial=0.0) > SYMMETRY_TOL * scale:
        raise AsymmetricMatrixError("matrix is not symmetric")
    if check is None:
        check = A.shape[0] <= AUTO_CHECK_LIMIT
    if check:
        w, Q = np.linalg.eigh(A)
        resid = np.max(np.abs(A @ Q - Q * w), initial=0.0)
        if resid > RESIDUAL_TOL * max(np.linalg.norm(A, 2), 1.0):
            raise NumericalError(f"eigendecomposition residual {resid:.3g} too large")
    else:
        w = np.linalg.eigvalsh(A)
    return Spectrum(np.sort(w, kind="stable"), "eigenvalues")


def singular_values(A) -> Spectrum:
    A = _finite(A)
    s = np.linalg.svd(A, compute_uv=False)
    return Spectrum(np.sort(s, kind="stable"), "singular_values")


def trace_norm(A) -> float:
    """Schatten-1 norm: the sum of the singular values."""
    return float(np.sum(singular_values(A).values))


def numerical_rank(A) -> int:
    """Count of singular values above ``max(m, n) * eps * sigma_max``."""
    A = _finite(A)
    if A.size == 0:
        return 0
    s = singular_values(A).values
    if s[-1] == 0:
        return 0
    tol = max(A.shape) * np.finfo(float).eps * s[-1]
    return int(np.count_nonzero(s > tol))
