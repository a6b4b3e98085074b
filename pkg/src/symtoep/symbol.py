"""Generating functions and their Fourier coefficients.

Convention: ``f(theta) = sum_j c_j exp(i <j, theta>)`` and a stencil stores
``c_j`` at array offset ``j + r``. Fourier coefficients of a sampled function
are therefore ``c_j = (2 pi)^-k int f(theta) exp(-i <j, theta>) dtheta``.
Every spectral quantity computed downstream is invariant under the opposite
sign convention (it maps ``T_n[f]`` to its transpose).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .multiindex import InvalidDimensionError, MultiIndex, as_degree

IMAG_TOL = 1e-10
DEFAULT_DEGREE = 8


class NonRealCoefficientsError(ValueError):
    pass


class NotSeparableError(ValueError):
    pass


class StencilFormatError(ValueError):
    pass


class FourierStencil:
    """Dense real array of Fourier coefficients over ``[-r, r]^k``."""

    def __init__(self, coeffs):
        arr = np.asarray(coeffs)
        if np.iscomplexobj(arr):
            if np.max(np.abs(arr.imag), initial=0.0) > IMAG_TOL:
                raise NonRealCoefficientsError("stencil has non-real coefficients")
            arr = arr.real
        arr = np.array(arr, dtype=float)
        if arr.ndim == 0:
            arr = arr.reshape(1)
        if any(s % 2 == 0 for s in arr.shape):
            raise InvalidDimensionError(f"stencil shape {arr.shape} is not 2r+1 per level")
        if not np.all(np.isfinite(arr)):
            raise ValueError("stencil has non-finite coefficients")
        arr.setflags(write=False)
        self._coeffs = arr

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def degree(self) -> MultiIndex:
        return tuple((s - 1) // 2 for s in self._coeffs.shape)

    @property
    def k(self) -> int:
        return self._coeffs.ndim

    def __repr__(self):
        return f"FourierStencil(degree={self.degree})"

    def __eq__(self, other):
        if not isinstance(other, FourierStencil):
            return NotImplemented
        return self.degree == other.degree and np.array_equal(self._coeffs, other._coeffs)

    def coefficient(self, j: Sequence[int]) -> float:
        """c_j, zero outside the stored degree."""
        r = self.degree
        if len(j) != self.k:
            raise InvalidDimensionError(f"index {tuple(j)} has wrong length")
        if any(abs(jt) > rt for jt, rt in zip(j, r)):
            return 0.0
        return float(self._coeffs[tuple(jt + rt for jt, rt in zip(j, r))])

    def resized(self, degree) -> "FourierStencil":
        """Truncate or zero-pad to ``degree`` (same number of levels)."""
        degree = as_degree(degree)
        if len(degree) != self.k:
            raise InvalidDimensionError(f"degree {degree} has wrong length for k={self.k}")
        out = np.zeros([2 * d + 1 for d in degree])
        src, dst = [], []
        for old, new in zip(self.degree, degree):
            m = min(old, new)
            src.append(slice(old - m, old + m + 1))
            dst.append(slice(new - m, new + m + 1))
        out[tuple(dst)] = self._coeffs[tuple(src)]
        return FourierStencil(out)

    @classmethod
    def constant(cls, c: float, k: int = 1) -> "FourierStencil":
        return cls(np.full((1,) * k, float(c)))

    @classmethod
    def outer(cls, factors: Sequence["FourierStencil"]) -> "FourierStencil":
        arr = factors[0].coeffs
        for fs in factors[1:]:
            arr = np.multiply.outer(arr, fs.coeffs)
        return cls(arr)


# --------------------------------------------------------------------------
# symbols
# --------------------------------------------------------------------------


class Symbol:
    """Base class for generating functions on ``[-pi, pi]^k``."""

    k: int

    def stencil(self, degree=None) -> FourierStencil:
        raise NotImplementedError

    def values(self, theta: np.ndarray) -> np.ndarray:
        """Evaluate at points ``theta`` of shape ``(..., k)``."""
        raise NotImplementedError

    def grid_values(self, axes: Sequence[np.ndarray]) -> np.ndarray:
        """Evaluate on the tensor grid ``axes[0] x ... x axes[k-1]``."""
        mesh = np.meshgrid(*axes, indexing="ij")
        return self.values(np.stack(mesh, axis=-1))

    def __sub__(self, other: "Symbol") -> "DifferenceSymbol":
        return DifferenceSymbol(self, other)


@dataclass(frozen=True, eq=False)
class StencilSymbol(Symbol):
    """A trigonometric polynomial given by its stencil."""

    stencil_: FourierStencil

    @property
    def k(self) -> int:
        return self.stencil_.k

    def stencil(self, degree=None) -> FourierStencil:
        if degree is None:
            return self.stencil_
        return self.stencil_.resized(degree)

    def values(self, theta):
        theta = np.asarray(theta, dtype=float)
        _check_points(theta, self.k)
        pts = theta.reshape(-1, self.k)
        out = self.stencil_.coeffs.astype(complex)
        # contract the last level first: out[p, a1.., at] -> out[p, a1.., a_{t-1}]
        out = np.broadcast_to(out, (pts.shape[0],) + out.shape)
        for t in reversed(range(self.k)):
            r = self.stencil_.degree[t]
            e = np.exp(1j * np.outer(pts[:, t], np.arange(-r, r + 1)))
            e = e.reshape((pts.shape[0],) + (1,) * t + (2 * r + 1,))
            out = np.sum(out * e, axis=-1)
        return out.reshape(theta.shape[:-1])

    def grid_values(self, axes):
        if len(axes) != self.k:
            raise InvalidDimensionError("axes length does not match k")
        out = self.stencil_.coeffs.astype(complex)
        for t in range(self.k):
            r = self.stencil_.degree[t]
            e = np.exp(1j * np.outer(np.asarray(axes[t], float), np.arange(-r, r + 1)))
            # consume level t (always the leading axis), append the grid axis
            out = np.tensordot(out, e, axes=([0], [1]))
        return out


@dataclass(frozen=True, eq=False)
class SeparableSymbol(Symbol):
    """``f = f_1 (x) ... (x) f_k`` with unilevel factors."""

    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise InvalidDimensionError("separable symbol needs at least one factor")
        if any(f.k != 1 for f in self.factors):
            raise InvalidDimensionError("separable factors must be unilevel")

    @property
    def k(self) -> int:
        return len(self.factors)

    def stencil(self, degree=None) -> FourierStencil:
        if degree is None:
            degree = [None] * self.k
        else:
            degree = as_degree(degree)
            if len(degree) != self.k:
                raise InvalidDimensionError("degree length does not match k")
        return FourierStencil.outer([f.stencil(d) for f, d in zip(self.factors, degree)])

    def values(self, theta):
        theta = np.asarray(theta, dtype=float)
        _check_points(theta, self.k)
        out = np.ones(theta.shape[:-1], dtype=complex)
        for t, f in enumerate(self.factors):
            out = out * f.values(theta[..., t : t + 1])
        return out

    def grid_values(self, axes):
        if len(axes) != self.k:
            raise InvalidDimensionError("axes length does not match k")
        out = np.ones(())
        for f, ax in zip(self.factors, axes):
            out = np.multiply.outer(out, f.grid_values([ax]))
        return out


@dataclass(frozen=True, eq=False)
class QuadratureSymbol(Symbol):
    """A pointwise-evaluable symbol whose coefficients come from quadrature.

    ``func`` takes ``k`` broadcastable arrays (one per level, each already
    reduced to ``[-pi, pi)``) and returns real values. ``coefficients``, when
    given, is an exact formula taking ``k`` integer index arrays and is used
    instead of quadrature.
    """

    func: Callable
    k: int = 1
    degree: MultiIndex | None = None
    samples: int | None = None
    coefficients: Callable | None = None
    name: str = ""

    def __post_init__(self):
        deg = as_degree(self.degree if self.degree is not None else (DEFAULT_DEGREE,) * self.k)
        if len(deg) != self.k:
            raise InvalidDimensionError("degree length does not match k")
        object.__setattr__(self, "degree", deg)

    def stencil(self, degree=None) -> FourierStencil:
        degree = self.degree if degree is None else as_degree(degree)
        if len(degree) != self.k:
            raise InvalidDimensionError("degree length does not match k")
        if self.coefficients is not None:
            idx = np.meshgrid(*(np.arange(-r, r + 1) for r in degree), indexing="ij")
            return FourierStencil(np.asarray(self.coefficients(*idx), dtype=float))
        return quadrature_stencil(self.func, degree, self.samples)

    def values(self, theta):
        theta = np.asarray(theta, dtype=float)
        _check_points(theta, self.k)
        wrapped = _wrap(theta)
        return np.asarray(
            self.func(*(wrapped[..., t] for t in range(self.k))), dtype=float
        ).astype(complex)


@dataclass(frozen=True, eq=False)
class DifferenceSymbol(Symbol):
    """``a - b``; used for truncation errors ``f - f_m``."""

    a: Symbol
    b: Symbol

    def __post_init__(self):
        if self.a.k != self.b.k:
            raise InvalidDimensionError("symbols have different numbers of levels")

    @property
    def k(self) -> int:
        return self.a.k

    def stencil(self, degree=None) -> FourierStencil:
        sa, sb = self.a.stencil(degree), self.b.stencil(degree)
        deg = tuple(max(x, y) for x, y in zip(sa.degree, sb.degree))
        return FourierStencil(sa.resized(deg).coeffs - sb.resized(deg).coeffs)

    def values(self, theta):
        return self.a.values(theta) - self.b.values(theta)

    def grid_values(self, axes):
        return self.a.grid_values(axes) - self.b.grid_values(axes)


def _check_points(theta: np.ndarray, k: int) -> None:
    if theta.ndim == 0 or theta.shape[-1] != k:
        raise InvalidDimensionError(f"points must have trailing dimension {k}")
    if not np.all(np.isfinite(theta)):
        raise ValueError("non-finite evaluation point")


def _wrap(theta):
    return np.mod(theta + np.pi, 2 * np.pi) - np.pi


def quadrature_nodes(samples: int) -> np.ndarray:
    """Midpoint nodes ``-pi + 2 pi (m + 1/2) / M``."""
    return -np.pi + 2 * np.pi * (np.arange(samples) + 0.5) / samples


def quadrature_stencil(func: Callable, degree, samples: int | None = None) -> FourierStencil:
    """Fourier coefficients up to ``degree`` by a tensorised midpoint DFT."""
    degree = as_degree(degree)
    need = 2 * max(degree) + 2
    if samples is None:
        samples = max(need, 128)
    if samples < need:
        raise ValueError(f"{samples} samples per level aliases degree {degree} (need >= {need})")
    nodes = quadrature_nodes(samples)
    vals = np.asarray(func(*np.meshgrid(*([nodes] * len(degree)), indexing="ij")), dtype=float)
    vals = np.broadcast_to(vals, (samples,) * len(degree))
    out = vals.astype(complex)
    for r in degree:
        w = np.exp(-1j * np.outer(nodes, np.arange(-r, r + 1))) / samples
        out = np.tensordot(out, w, axes=([0], [0]))
    if np.max(np.abs(out.imag), initial=0.0) > IMAG_TOL:
        raise NonRealCoefficientsError(
            f"quadrature coefficients have imaginary part {np.abs(out.imag).max():.3g}"
        )
    return FourierStencil(out.real)


# --------------------------------------------------------------------------
# operations
# --------------------------------------------------------------------------


def stencil_of(spec, degree=None) -> FourierStencil:
    if isinstance(spec, FourierStencil):
        return spec if degree is None else spec.resized(degree)
    return spec.stencil(degree)


def as_symbol(spec) -> Symbol:
    if isinstance(spec, FourierStencil):
        return StencilSymbol(spec)
    return spec


def evaluate(spec, theta) -> complex | np.ndarray:
    """Value of the symbol at ``theta`` (a k-vector, or an array of them)."""
    sym = as_symbol(spec)
    theta = np.asarray(theta, dtype=float)
    if theta.ndim == 0:
        theta = theta.reshape(1)
    out = sym.values(theta)
    return complex(out) if theta.ndim == 1 else out


def l1_norm(spec, samples_per_dim: int = 256) -> float:
    """Midpoint-rule approximation of the integral of ``|f|`` over the cube."""
    if samples_per_dim < 16:
        raise ValueError("samples_per_dim must be >= 16")
    sym = as_symbol(spec)
    nodes = quadrature_nodes(samples_per_dim)
    vals = np.abs(sym.grid_values([nodes] * sym.k))
    return float(np.sum(vals) * (2 * np.pi / samples_per_dim) ** sym.k)


def stencil_rank1_factor(s: FourierStencil, tol: float = 1e-10):
    """Split a bilevel stencil ``C = u v^T`` into two unilevel stencils.

    ``u`` and ``v`` are scaled to equal norm and the first nonzero entry of
    ``u`` is positive.
    """
    if s.k != 2:
        raise InvalidDimensionError("rank-1 factoring needs a bilevel stencil")
    c = s.coeffs
    U, sv, Vt = np.linalg.svd(c)
    if sv[0] == 0:
        return FourierStencil(np.zeros(c.shape[0])), FourierStencil(np.zeros(c.shape[1]))
    if len(sv) > 1 and sv[1] > tol * sv[0]:
        raise NotSeparableError(f"stencil has numerical rank > 1 (sigma2/sigma1 = {sv[1] / sv[0]:.3g})")
    u = U[:, 0] * np.sqrt(sv[0])
    first = u[np.flatnonzero(np.abs(u) > tol * np.abs(u).max())[0]]
    if first < 0:
        u = -u
    v = c.T @ u / (u @ u)
    return FourierStencil(u), FourierStencil(v)


def monomial_decompose(s: FourierStencil) -> list[tuple[float, MultiIndex]]:
    """All nonzero ``(c_j, j)`` pairs, lexicographic in ``j``."""
    r = np.array(s.degree)
    return [
        (float(s.coeffs[idx]), tuple(int(v) for v in np.array(idx) - r))
        for idx in zip(*np.nonzero(s.coeffs))
    ]


# --------------------------------------------------------------------------
# text format
# --------------------------------------------------------------------------


def format_stencil(s: FourierStencil) -> str:
    lines = [" ".join(str(v) for v in (s.k,) + s.degree)]
    lines += [f"{v + 0.0:.17g}" for v in s.coeffs.ravel()]
    return "\n".join(lines) + "\n"


def parse_stencil(text: str) -> FourierStencil:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise StencilFormatError("empty stencil file")
    try:
        head = [int(v) for v in lines[0].split()]
        coeffs = np.array([float(v) for v in lines[1:]])
    except ValueError as exc:
        raise StencilFormatError(f"malformed stencil file: {exc}") from None
    k, degree = head[0], tuple(head[1:])
    if k < 1 or len(degree) != k or any(r < 0 for r in degree):
        raise StencilFormatError(f"bad header {lines[0]!r}")
    shape = tuple(2 * r + 1 for r in degree)
    if coeffs.size != int(np.prod(shape)):
        raise StencilFormatError(f"expected {int(np.prod(shape))} coefficients, got {coeffs.size}")
    return FourierStencil(coeffs.reshape(shape))


def read_stencil(path) -> FourierStencil:
    with open(path) as fh:
        return parse_stencil(fh.read())


def write_stencil(s: FourierStencil, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(format_stencil(s))
