"""Built-in symbols for the three reference experiments."""

from __future__ import annotations

import numpy as np

from .symbol import FourierStencil, QuadratureSymbol, SeparableSymbol, StencilSymbol

# Bivariate polynomial of degree (2, 2). Row a holds j1 = a - 2, column b
# holds j2 = b - 2, matching the printed stencil entrywise.
EXAMPLE1_STENCIL = np.array(
    [
        [1, 1, 1, 3, 0],
        [1, 3, 1, 1, 1],
        [1, -2, 5, 2, 1],
        [1, 2, -3, 3, 0],
        [1, 1, 2, 2, 1],
    ],
    dtype=float,
)

# (10 - 3 e^{i t} + e^{-i t}) (4 - 3 e^{i t}) as two unilevel factors.
EXAMPLE2_FACTORS = (np.array([-3.0, 10.0, 1.0]), np.array([0.0, 4.0, -3.0]))


def theta_squared_coefficients(j):
    """Exact Fourier coefficients of theta^2 on [-pi, pi]."""
    j = np.asarray(j)
    safe = np.where(j == 0, 1, j).astype(float)
    return np.where(j == 0, np.pi**2 / 3, (-1.0) ** np.abs(j) * 2.0 / safe**2)


def theta_squared(degree=8, samples=None, exact=True) -> QuadratureSymbol:
    return QuadratureSymbol(
        func=lambda t: t**2,
        k=1,
        degree=(degree,),
        samples=samples,
        coefficients=theta_squared_coefficients if exact else None,
        name="theta2",
    )


def example1() -> StencilSymbol:
    return StencilSymbol(FourierStencil(EXAMPLE1_STENCIL))


def example2() -> SeparableSymbol:
    return SeparableSymbol(tuple(StencilSymbol(FourierStencil(c)) for c in EXAMPLE2_FACTORS))


def example3(degree=8, exact=True) -> SeparableSymbol:
    """theta_1^2 theta_2^2, periodically extended."""
    return SeparableSymbol((theta_squared(degree, exact=exact), theta_squared(degree, exact=exact)))


BUILTINS = {"example1": example1, "example2": example2, "example3": example3}


def builtin(name: str):
    try:
        return BUILTINS[name]()
    except KeyError:
        raise KeyError(f"unknown built-in symbol {name!r}; choose from {sorted(BUILTINS)}") from None


def full_degree(n):
    """Degree needed to fill T_n exactly: n_t - 1 per level."""
    return tuple(v - 1 for v in n)
