"""Exit criteria for the library, runnable from ``symtoep suite`` and pytest.

Each ``criterion_*`` function returns ``(passed, detail)``. Regression values
below were produced once by :func:`distribution_metrics` itself and are
checked to 5 %.
"""

from __future__ import annotations

import time
from functools import lru_cache

import numpy as np

from . import catalog
from .distribution import (
    acs_check_truncation,
    functional_discrepancy,
    match_sorted,
    orthant_grid,
    sample,
    theta_grid,
    wasserstein1_sorted,
    xi_grid,
)
from .multiindex import product
from .spectra import eig_sym, numerical_rank, singular_values
from .symbol import FourierStencil, stencil_of
from .toeplitz import DEFAULT_MAX_DENSE, ToeplitzOperator, build_toeplitz, decompose_blocks, symmetrize

SEED = 20240229
REGRESSION_RTOL = 0.05
RUNTIME_LIMIT = 300.0
FINE_SAMPLES = 512

# numerical_rank(E_n) for Example 1, measured with the dense SVD.
FROZEN_HANKEL_RANKS = {(16, 16): 64, (32, 32): 128, (64, 32): 128}

# (mean_abs_err, functional_discrepancy) of eig(Y_n T_n[f]) against psi on xi.
FROZEN_DISTRIBUTION = {
    ("example1", (32, 32)): (0.585960, 9.31028e-3),
    ("example1", (64, 64)): (0.287692, 4.64525e-3),
    ("example2", (32, 32)): (1.615689, 4.04174e-3),
    ("example2", (64, 64)): (0.806412, 1.97925e-3),
    ("example3", (32, 32)): (1.154829, 2.25942e-3),
    ("example3", (64, 64)): (0.559403, 1.11122e-3),
}


def example_stencil(name: str, n) -> FourierStencil:
    sym = catalog.builtin(name)
    if name == "example3":
        return stencil_of(sym, catalog.full_degree(n))
    return stencil_of(sym)


@lru_cache(maxsize=None)
def example_eigenvalues(name: str, n: tuple, max_size: int = DEFAULT_MAX_DENSE) -> np.ndarray:
    return eig_sym(symmetrize(example_stencil(name, n), n, max_size)).values


def distribution_metrics(name: str, n: tuple, max_size: int = DEFAULT_MAX_DENSE):
    sym = catalog.builtin(name)
    lam = example_eigenvalues(name, n, max_size)
    rep = match_sorted(lam, sample(sym, "psi", xi_grid(n)))
    fd = functional_discrepancy(lam, sym, "psi", fine_samples=FINE_SAMPLES)
    return rep.mean_abs_err, fd


def _random_dyadic(rng, size):
    return rng.integers(-64, 65, size=size) / 8.0


def _random_dims(rng, k, cap):
    if k == 1:
        return (int(rng.integers(1, cap + 1)),)
    while True:
        n = tuple(int(v) for v in rng.integers(1, 13, size=k))
        if product(n) <= cap:
            return n


# --------------------------------------------------------------------------


def criterion_kronecker(max_size=DEFAULT_MAX_DENSE):
    rng = np.random.default_rng(SEED)
    t0 = time.perf_counter()
    bad = 0
    for _ in range(100):
        k = int(rng.integers(2, 4))
        n = _random_dims(rng, k, 1024)
        factors = [FourierStencil(_random_dyadic(rng, 2 * int(rng.integers(0, 4)) + 1)) for _ in range(k)]
        T = build_toeplitz(FourierStencil.outer(factors), n, max_size)
        K = np.ones((1, 1))
        for f, nt in zip(factors, n):
            K = np.kron(K, build_toeplitz(f, (nt,), max_size))
        bad += not np.array_equal(T, K)
    elapsed = time.perf_counter() - t0
    return bad == 0 and elapsed < 10, f"{100 - bad}/100 exact, {elapsed:.2f}s"


def criterion_flip_singular_values(max_size=DEFAULT_MAX_DENSE):
    rng = np.random.default_rng(SEED + 1)
    worst = 0.0
    for _ in range(50):
        k = int(rng.integers(1, 4))
        n = _random_dims(rng, k, 1024)
        s = FourierStencil(rng.standard_normal([2 * int(rng.integers(0, 4)) + 1 for _ in range(k)]))
        T = build_toeplitz(s, n, max_size)
        a = singular_values(T).values
        b = singular_values(symmetrize(s, n, max_size)).values
        worst = max(worst, np.max(np.abs(a - b)) / max(a[-1], 1e-300))
    return bool(worst <= 1e-10), f"max relative deviation {worst:.2e}"


def criterion_pm_sigma_pairing(max_size=DEFAULT_MAX_DENSE):
    worst = 0.0
    for name in ("example1", "example2"):
        s = example_stencil(name, None)
        for n in ((16, 16), (32, 32)):
            M, _ = decompose_blocks(s, n, max_size)
            half = (n[0] // 2,) + n[1:]
            sig = singular_values(build_toeplitz(s, half, max_size)).values
            expected = np.sort(np.concatenate([-sig, sig]))
            worst = max(worst, float(np.max(np.abs(eig_sym(M).values - expected))))
    return worst <= 1e-9, f"max deviation {worst:.2e}"


def hankel_ranks(max_size=DEFAULT_MAX_DENSE):
    s = example_stencil("example1", None)
    return {n: numerical_rank(decompose_blocks(s, n, max_size)[1]) for n in FROZEN_HANKEL_RANKS}


def criterion_hankel_rank(max_size=DEFAULT_MAX_DENSE):
    r1 = example_stencil("example1", None).degree[0]
    ranks = hankel_ranks(max_size)
    ok = all(ranks[n] <= 2 * r1 * n[1] and ranks[n] == FROZEN_HANKEL_RANKS[n] for n in ranks)
    return ok, ", ".join(f"{n}: {ranks[n]} <= {2 * r1 * n[1]}" for n in ranks)


def criterion_trace_norm_acs(max_size=DEFAULT_MAX_DENSE):
    reports = acs_check_truncation(
        catalog.example3(), [(2, 2), (4, 4), (8, 8)], (16, 16), max_size=max_size
    )
    eps = [r.norm_bound for r in reports]
    meas = [r.measured for r in reports]
    ok = all(r.passed for r in reports) and all(a > b for a, b in zip(eps, eps[1:]))
    detail = "; ".join(f"m={r.m}: {mv:.4g} <= {e:.4g}" for r, mv, e in zip(reports, meas, eps))
    return ok, detail


def criterion_theta_squared():
    quad = catalog.theta_squared(8, samples=65536, exact=False).stencil()
    j = np.arange(-8, 9)
    exact = np.where(j == 0, np.pi**2 / 3, (-1.0) ** np.abs(j) * 2.0 / np.where(j == 0, 1, j) ** 2)
    err = float(np.max(np.abs(quad.coeffs - exact)))
    return err <= 1e-8, f"max coefficient error {err:.2e}"


def criterion_distribution_convergence(max_size=DEFAULT_MAX_DENSE):
    ok, parts = True, []
    for name in ("example1", "example2", "example3"):
        small = distribution_metrics(name, (32, 32), max_size)
        large = distribution_metrics(name, (64, 64), max_size)
        ok &= large[0] < small[0] and large[1] < small[1]
        for n, got in (((32, 32), small), ((64, 64), large)):
            want = FROZEN_DISTRIBUTION[(name, n)]
            ok &= bool(np.allclose(got, want, rtol=REGRESSION_RTOL, atol=0))
        parts.append(f"{name}: err {small[0]:.4f}->{large[0]:.4f}, disc {small[1]:.2e}->{large[1]:.2e}")
    return ok, "; ".join(parts)


def rearrangement_distances(name: str, n):
    sym = catalog.builtin(name)
    psi = sample(sym, "psi", xi_grid(n))
    out = {"psi-phi": wasserstein1_sorted(psi, sample(sym, "phi", orthant_grid(n)))}
    if name != "example1":
        out["psi-h"] = wasserstein1_sorted(psi, sample(sym, "h", theta_grid(n)))
    return out


def criterion_rearrangement():
    ok, parts = True, []
    for name in ("example1", "example2", "example3"):
        a, b = rearrangement_distances(name, (32, 32)), rearrangement_distances(name, (64, 64))
        for key in a:
            ok &= b[key] < a[key]
            parts.append(f"{name} {key}: {a[key]:.3f}->{b[key]:.3f}")
    return ok, "; ".join(parts)


def criterion_fast_matvec(max_size=DEFAULT_MAX_DENSE):
    rng = np.random.default_rng(SEED + 2)
    worst = 0.0
    for _ in range(50):
        k = int(rng.integers(1, 4))
        n = _random_dims(rng, k, 4096)
        s = FourierStencil(rng.standard_normal([2 * int(rng.integers(0, 6)) + 1 for _ in range(k)]))
        x = rng.standard_normal(product(n))
        dense = build_toeplitz(s, n, max_size) @ x
        fast = ToeplitzOperator(s, n).matvec(x)
        worst = max(worst, np.linalg.norm(fast - dense) / max(np.linalg.norm(dense), 1e-300))
    n = (64, 64)
    s = catalog.example1().stencil()
    A, op, x = build_toeplitz(s, n, max_size), ToeplitzOperator(s, n), rng.standard_normal(4096)
    t_dense = _best_time(lambda: A @ x)
    t_fast = _best_time(lambda: op.matvec(x))
    speedup = t_dense / t_fast
    return bool(worst <= 1e-10 and speedup >= 10), f"max rel err {worst:.2e}, speedup {speedup:.1f}x at N=4096"


def _best_time(fn, reps=20):
    best = np.inf
    for _ in range(reps):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def criterion_runtime(elapsed: float):
    return elapsed < RUNTIME_LIMIT, f"{elapsed:.1f}s (limit {RUNTIME_LIMIT:.0f}s)"


CRITERIA = [
    # (label, function, takes the dense size limit)
    ("1 kronecker identity", criterion_kronecker, True),
    ("2 flip keeps singular values", criterion_flip_singular_values, True),
    ("3 +-sigma pairing of M_n", criterion_pm_sigma_pairing, True),
    ("4 Hankel corner rank bound", criterion_hankel_rank, True),
    ("5 trace-norm a.c.s. bound", criterion_trace_norm_acs, True),
    ("6 theta^2 coefficients", criterion_theta_squared, False),
    ("7 distribution convergence", criterion_distribution_convergence, True),
    ("8 rearrangement equivalences", criterion_rearrangement, False),
    ("9 fast matvec", criterion_fast_matvec, True),
]
