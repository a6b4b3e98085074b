"""Dense multilevel Toeplitz matrices, flips, and their circulant fast path."""

from __future__ import annotations

import numpy as np

from .multiindex import InvalidDimensionError, as_dims, product
from .symbol import FourierStencil

DEFAULT_MAX_DENSE = 8192


class DenseSizeError(ValueError):
    pass


class UnsupportedDecompositionError(ValueError):
    pass


def _check_size(n, max_size):
    N = product(n)
    if max_size is not None and N > max_size:
        raise DenseSizeError(f"N(n) = {N} exceeds the dense limit {max_size}")
    return N


def _check_levels(stencil: FourierStencil, n):
    if stencil.k != len(n):
        raise InvalidDimensionError(f"stencil has {stencil.k} levels but n = {n}")


def build_toeplitz(stencil: FourierStencil, n, max_size=DEFAULT_MAX_DENSE) -> np.ndarray:
    """T_n[f]: entry (l, h) is c_{l-h} when every |l_t - h_t| <= r_t, else 0."""
    n = as_dims(n)
    _check_levels(stencil, n)
    N = _check_size(n, max_size)
    k = len(n)
    idx, mask = [], np.ones((1,) * (2 * k), dtype=bool)
    for t, (nt, rt) in enumerate(zip(n, stencil.degree)):
        d = np.arange(nt)[:, None] - np.arange(nt)[None, :]
        shape = [1] * (2 * k)
        shape[t], shape[k + t] = nt, nt
        idx.append(np.clip(d + rt, 0, 2 * rt).reshape(shape))
        mask = mask & (np.abs(d) <= rt).reshape(shape)
    T = np.where(mask, stencil.coeffs[tuple(idx)], 0.0)
    return np.ascontiguousarray(T.reshape(N, N))


def anti_identity(m: int) -> np.ndarray:
    return np.eye(m)[::-1].copy()


def flip(n, max_size=DEFAULT_MAX_DENSE) -> np.ndarray:
    """Y_n = Y_{n_1} (x) ... (x) Y_{n_k}."""
    n = as_dims(n)
    _check_size(n, max_size)
    Y = np.ones((1, 1))
    for nt in n:
        Y = np.kron(Y, anti_identity(nt))
    return Y


def symmetrize(stencil: FourierStencil, n, max_size=DEFAULT_MAX_DENSE) -> np.ndarray:
    """Y_n T_n[f]; the product with the anti-identity is a row reversal."""
    T = build_toeplitz(stencil, n, max_size)
    return np.ascontiguousarray(T[::-1])


def decompose_blocks(stencil: FourierStencil, n, max_size=DEFAULT_MAX_DENSE):
    """Split Y_n T_n[f] = M_n + E_n for even n_1.

    M_n has zero diagonal blocks and Y_m T_m[f] off the diagonal, with
    m = (n_1 / 2, n_2, ..., n_k). E_n holds the two Hankel corner blocks.
    """
    n = as_dims(n)
    if n[0] % 2:
        raise UnsupportedDecompositionError(f"n_1 = {n[0]} is odd")
    _check_levels(stencil, n)
    _check_size(n, max_size)
    half = (n[0] // 2,) + n[1:]
    A = symmetrize(stencil, half, max_size)
    Z = np.zeros_like(A)
    M = np.block([[Z, A], [A, Z]])
    E = symmetrize(stencil, n, max_size) - M
    return M, E


class ToeplitzOperator:
    """Matrix-free T_n[f] through a multilevel circulant embedding.

    Each level is embedded in a circulant of order 2 n_t, so a product costs
    one forward and one inverse real FFT of the padded array.
    """

    def __init__(self, stencil: FourierStencil, n):
        n = as_dims(n)
        _check_levels(stencil, n)
        self.n = n
        self.stencil = stencil
        self.shape = (product(n), product(n))
        self._fft_shape = tuple(2 * v for v in n)
        kernel = np.zeros(self._fft_shape)
        # offsets reachable inside the matrix: |j_t| <= min(r_t, n_t - 1)
        src, dst = [], []
        for nt, rt in zip(n, stencil.degree):
            m = min(rt, nt - 1)
            j = np.arange(-m, m + 1)
            src.append(j + rt)
            dst.append(np.mod(j, 2 * nt))
        kernel[np.ix_(*dst)] = stencil.coeffs[np.ix_(*src)]
        self._kernel_hat = np.fft.rfftn(kernel)

    def matvec(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.shape[1],):
            raise InvalidDimensionError(f"vector of length {x.shape} does not match N = {self.shape[1]}")
        axes = tuple(range(len(self.n)))
        xh = np.fft.rfftn(x.reshape(self.n), s=self._fft_shape, axes=axes)
        y = np.fft.irfftn(xh * self._kernel_hat, s=self._fft_shape, axes=axes)
        return np.ascontiguousarray(y[tuple(slice(0, v) for v in self.n)]).ravel()

    __call__ = matvec

    def __matmul__(self, x):
        return self.matvec(x)

    def to_dense(self, max_size=DEFAULT_MAX_DENSE) -> np.ndarray:
        return build_toeplitz(self.stencil, self.n, max_size)


def matvec(op: ToeplitzOperator, x) -> np.ndarray:
    return op.matvec(x)


def format_matrix(A: np.ndarray) -> str:
    A = np.atleast_2d(np.asarray(A, dtype=float))
    lines = [f"{A.shape[0]} {A.shape[1]}"]
    lines += [" ".join(f"{v:.17g}" for v in row) for row in A]
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> np.ndarray:
    tokens = text.split()
    rows, cols = int(tokens[0]), int(tokens[1])
    data = np.array([float(v) for v in tokens[2:]])
    if data.size != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, got {data.size}")
    return data.reshape(rows, cols)


def write_matrix(A: np.ndarray, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(format_matrix(A))


def read_matrix(path) -> np.ndarray:
    with open(path) as fh:
        return parse_matrix(fh.read())
