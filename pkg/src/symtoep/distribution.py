"""Symbol-side samplers and the comparisons between spectra and symbols.

Three functions describe the eigenvalues of ``Y_n T_n[f]``:

* ``psi``: ``|f|`` on ``[0, 2pi]^k`` and ``-|f(theta + 2pi)|`` on ``[-2pi, 0]^k``;
* ``phi``: ``|f|`` on ``[0, 2pi]^k`` and ``-|f(-theta)|`` on ``[-2pi, 0)^k``;
* ``h`` (separable ``f`` only): the tensor product of the unilevel ``psi``
  of each factor, on the whole cube ``[-2pi, 2pi]^k``.

They are rearrangements of one another, so after an ascending sort their
samples on fine enough grids line up with the sorted eigenvalues.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .multiindex import InvalidDimensionError, as_dims, product
from .spectra import Spectrum, numerical_rank, trace_norm
from .symbol import (
    FourierStencil,
    NotSeparableError,
    SeparableSymbol,
    StencilSymbol,
    Symbol,
    as_symbol,
    l1_norm,
    quadrature_nodes,
    stencil_of,
)
from .toeplitz import DEFAULT_MAX_DENSE, UnsupportedDecompositionError, build_toeplitz, decompose_blocks

TWO_PI = 2 * np.pi
DOMAIN_TOL = 1e-12
N_HATS = 20


class DomainError(ValueError):
    pass


# --------------------------------------------------------------------------
# pointwise samplers
# --------------------------------------------------------------------------


def _points(theta, k):
    theta = np.asarray(theta, dtype=float)
    single = theta.ndim == 1
    theta = np.atleast_2d(theta)
    if theta.shape[-1] != k:
        raise InvalidDimensionError(f"points must have trailing dimension {k}")
    return theta, single


def _branches(theta, strict_negative):
    """+1 on [0, 2pi]^k, -1 on the negative orthant, error elsewhere."""
    in_range = np.all(np.abs(theta) <= TWO_PI + DOMAIN_TOL, axis=-1)
    pos = np.all(theta >= -DOMAIN_TOL, axis=-1)
    if strict_negative:
        neg = np.all(theta < 0, axis=-1)
    else:
        neg = np.all(theta <= DOMAIN_TOL, axis=-1)
    ok = in_range & (pos | neg)
    if not np.all(ok):
        bad = theta[~ok][0]
        raise DomainError(f"point {bad} lies outside the two-orthant domain")
    return np.where(pos, 1, -1)


def psi_sample(spec, theta, branch=None):
    """psi_{|f|} at ``theta`` (a k-vector or an ``(m, k)`` array).

    ``theta = 0`` belongs to the positive branch unless ``branch`` (an array
    of +1/-1 labels) says otherwise; grids pass their own labels so that the
    corner ``gamma - 2pi = 0`` keeps its negative sign.
    """
    sym = as_symbol(spec)
    pts, single = _points(theta, sym.k)
    b = _branches(pts, strict_negative=False)
    if branch is not None:
        b = np.where(np.all(pts == 0, axis=-1), np.broadcast_to(branch, b.shape), b)
    shifted = np.where(b[:, None] > 0, pts, pts + TWO_PI)
    out = b * np.abs(sym.values(shifted))
    return float(out[0]) if single else out


def phi_sample(spec, theta):
    """phi_{|f|}: ``|f(theta)|`` or ``-|f(-theta)|`` on ``[-2pi, 0)^k``."""
    sym = as_symbol(spec)
    pts, single = _points(theta, sym.k)
    b = _branches(pts, strict_negative=True)
    out = b * np.abs(sym.values(b[:, None] * pts))
    return float(out[0]) if single else out


def _factors(factors) -> tuple:
    if isinstance(factors, SeparableSymbol):
        return factors.factors
    if isinstance(factors, (Symbol, FourierStencil)):
        raise NotSeparableError("h needs the separable factors of f")
    factors = tuple(as_symbol(f) for f in factors)
    if any(f.k != 1 for f in factors):
        raise NotSeparableError("h needs unilevel factors")
    return factors


def _psi_unilevel_axis(f, x):
    """Unilevel psi_{|f|} at the 1-D points ``x``."""
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > TWO_PI + DOMAIN_TOL):
        raise DomainError("point outside [-2pi, 2pi]")
    neg = x < 0
    vals = np.abs(f.grid_values([np.where(neg, x + TWO_PI, x)]))
    return np.where(neg, -vals, vals)


def h_sample(factors, theta):
    """h_f = psi_{|f_1|} (x) ... (x) psi_{|f_k|} at ``theta``."""
    fs = _factors(factors)
    pts, single = _points(theta, len(fs))
    out = np.ones(pts.shape[0])
    for t, f in enumerate(fs):
        out = out * _psi_unilevel_axis(f, pts[:, t])
    return float(out[0]) if single else out


# --------------------------------------------------------------------------
# grids
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GridSpec:
    kind: str
    n: tuple
    points: np.ndarray
    # +1 / -1 per point for two-orthant grids, None for the full cube
    branch: np.ndarray | None = None

    def __len__(self):
        return len(self.points)


def _lex_points(axes):
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def xi_grid(n) -> GridSpec:
    """gamma union (gamma - 2pi), gamma = 2pi (j1, j2) / (n1/2 - 1, n2 - 1)."""
    n = as_dims(n)
    if len(n) != 2:
        raise InvalidDimensionError("the xi grid is defined for two levels only")
    n1, n2 = n
    if n1 % 2:
        raise InvalidDimensionError(f"xi grid needs even n1, got {n1}")
    if n1 < 4 or n2 < 2:
        raise InvalidDimensionError(f"xi grid needs n1 >= 4 and n2 >= 2, got {n}")
    half = n1 // 2
    gamma = _lex_points([TWO_PI * (np.arange(half) / (half - 1)), TWO_PI * (np.arange(n2) / (n2 - 1))])
    pts = np.concatenate([gamma, gamma - TWO_PI])
    branch = np.repeat([1, -1], len(gamma))
    return GridSpec("xi_union", n, pts, branch)


def theta_grid(n) -> GridSpec:
    """Uniform grid 4pi j / (n - 1) - 2pi covering [-2pi, 2pi]^k."""
    n = as_dims(n)
    if any(v < 2 for v in n):
        raise InvalidDimensionError(f"theta grid needs every n_t >= 2, got {n}")
    axes = [4 * np.pi * (np.arange(v) / (v - 1)) - TWO_PI for v in n]
    return GridSpec("theta_uniform", n, _lex_points(axes))


def orthant_grid(n) -> GridSpec:
    """Cell-centred two-orthant grid with N(n) points, for phi.

    The positive half is the midpoint grid of [0, 2pi]^k with n_1/2 cells in
    the first level and n_t cells in the others; the negative half is its
    reflection through the origin.
    """
    n = as_dims(n)
    if n[0] % 2:
        raise InvalidDimensionError(f"orthant grid needs even n1, got {n[0]}")
    cells = (n[0] // 2,) + n[1:]
    pos = _lex_points([TWO_PI * (np.arange(c) + 0.5) / c for c in cells])
    pts = np.concatenate([pos, -pos])
    return GridSpec("orthant_midpoint", n, pts, np.repeat([1, -1], len(pos)))


def sample(spec, which: str, grid: GridSpec) -> np.ndarray:
    """Samples of psi / phi / h on ``grid`` in grid order."""
    if which == "psi":
        return psi_sample(spec, grid.points, branch=grid.branch)
    if which == "phi":
        return phi_sample(spec, grid.points)
    if which == "h":
        return h_sample(spec, grid.points)
    raise ValueError(f"unknown symbol kind {which!r}")


# --------------------------------------------------------------------------
# matching and discrepancies
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SpectrumReport:
    eigenvalues: np.ndarray
    samples: np.ndarray
    per_index_abs_err: np.ndarray
    mean_abs_err: float
    max_abs_err: float
    wasserstein1: float
    outlier_count: int
    outlier_threshold: float
    functional_discrepancy: float | None = None


def match_sorted(eigs, samples, outlier_threshold: float | None = None) -> SpectrumReport:
    """Pair ascending eigenvalues with ascending samples index by index.

    The default outlier threshold is ten times the mean absolute error.
    """
    lam = np.sort(np.asarray(eigs, dtype=float), kind="stable")
    s = np.sort(np.asarray(samples, dtype=float), kind="stable")
    if lam.shape != s.shape:
        raise ValueError(f"{lam.size} eigenvalues but {s.size} samples")
    err = np.abs(lam - s)
    mean = float(np.mean(err)) if err.size else 0.0
    thr = 10 * mean if outlier_threshold is None else float(outlier_threshold)
    return SpectrumReport(
        eigenvalues=lam,
        samples=s,
        per_index_abs_err=err,
        mean_abs_err=mean,
        max_abs_err=float(err.max(initial=0.0)),
        wasserstein1=mean,
        outlier_count=int(np.count_nonzero(err > thr)),
        outlier_threshold=thr,
    )


def wasserstein1_sorted(a, b) -> float:
    """W1 between two equal-size empirical measures."""
    a, b = np.sort(np.asarray(a, float)), np.sort(np.asarray(b, float))
    if a.shape != b.shape:
        raise ValueError("sample sets differ in size")
    return float(np.mean(np.abs(a - b)))


def fine_samples_of(spec, which: str, fine_samples: int) -> np.ndarray:
    """Equal-weight midpoint samples of psi / phi / h over their domain."""
    if which == "h":
        fs = _factors(spec)
        x = TWO_PI * (2 * (np.arange(fine_samples) + 0.5) / fine_samples - 1)
        out = np.ones(())
        for f in fs:
            out = np.multiply.outer(out, _psi_unilevel_axis(f, x))
        return out.ravel()
    sym = as_symbol(spec)
    x = TWO_PI * (np.arange(fine_samples) + 0.5) / fine_samples
    pos = np.abs(sym.grid_values([x] * sym.k)).ravel()
    y = x - TWO_PI  # midpoints of [-2pi, 0)
    if which == "psi":
        neg = -np.abs(sym.grid_values([y + TWO_PI] * sym.k)).ravel()
    elif which == "phi":
        neg = -np.abs(sym.grid_values([-y] * sym.k)).ravel()
    else:
        raise ValueError(f"unknown symbol kind {which!r}")
    return np.concatenate([pos, neg])


def hat_functions(lo: float, hi: float, count: int = N_HATS) -> list[Callable]:
    """Hats max(0, 1 - |x - c| / w) on ``count`` centres, w = 2 * spacing."""
    if count < 1:
        raise ValueError("empty test family")
    centres = np.linspace(lo, hi, count)
    spacing = (hi - lo) / (count - 1) if count > 1 and hi > lo else max(abs(hi), 1.0)
    width = 2 * spacing
    return [lambda x, c=c: np.maximum(0.0, 1.0 - np.abs(x - c) / width) for c in centres]


def functional_discrepancy(
    eigs,
    spec,
    which: str = "psi",
    test_functions: Sequence[Callable] | None = None,
    fine_samples: int = 512,
    absolute: bool = False,
) -> float:
    """max_F |mean F(lambda_j) - eta_g(F)| over a family of test functions.

    ``eta_g(F)`` is the domain average of ``F(g)`` by a midpoint rule; the
    domain is the two orthants (measure 2 (2pi)^k) for psi and phi and the
    cube [-2pi, 2pi]^k for h. ``absolute`` compares against ``|g|`` for
    singular values.
    """
    lam = np.asarray(eigs, dtype=float)
    g = fine_samples_of(spec, which, fine_samples)
    if absolute:
        g = np.abs(g)
    if test_functions is None:
        test_functions = hat_functions(float(g.min()), float(g.max()))
    if len(test_functions) == 0:
        raise ValueError("empty test family")
    return float(max(abs(np.mean(F(lam)) - np.mean(F(g))) for F in test_functions))


# --------------------------------------------------------------------------
# approximating classes
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class AcsReport:
    m: tuple | None
    rank_fraction: float
    norm_bound: float
    measured: float
    bound: float
    passed: bool
    details: dict = field(default_factory=dict)


def acs_check_polynomial(stencil, n, max_size=DEFAULT_MAX_DENSE) -> AcsReport:
    """Check rank(E_n) <= 2 r_1 N(n) / n_1 for the Hankel corner part E_n."""
    stencil = stencil_of(stencil)
    n = as_dims(n)
    if n[0] % 2:
        raise UnsupportedDecompositionError(f"n_1 = {n[0]} is odd")
    _, E = decompose_blocks(stencil, n, max_size)
    rank = numerical_rank(E)
    N = product(n)
    bound = 2 * stencil.degree[0] * N // n[0]
    return AcsReport(
        m=None,
        rank_fraction=rank / N,
        norm_bound=0.0,
        measured=float(rank),
        bound=float(bound),
        passed=rank <= bound,
        details={"rank": rank, "rank_bound": bound},
    )


def acs_check_truncation(f, m_degrees, n, l1_samples: int = 512, max_size=DEFAULT_MAX_DENSE) -> list[AcsReport]:
    """Trace-norm certificate ||T_n[f] - T_n[f_m]||_1 / N <= ||f - f_m||_L1 / (2pi)^k.

    ``f_m`` is the degree-``m`` truncation of ``f``. ``norm_bound`` holds the
    certified epsilon(m); the reports are in the order of ``m_degrees``.
    """
    sym = as_symbol(f)
    n = as_dims(n)
    N = product(n)
    full = stencil_of(sym, tuple(v - 1 for v in n))
    T = build_toeplitz(full, n, max_size)
    reports = []
    for m in m_degrees:
        m = tuple(int(v) for v in m)
        fm = StencilSymbol(stencil_of(sym, m))
        measured = trace_norm(T - build_toeplitz(fm.stencil(), n, max_size)) / N
        eps = l1_norm(sym - fm, l1_samples) / TWO_PI**sym.k
        reports.append(
            AcsReport(
                m=m,
                rank_fraction=0.0,
                norm_bound=eps,
                measured=measured,
                bound=eps,
                passed=measured <= eps * (1 + 1e-8),
            )
        )
    return reports
