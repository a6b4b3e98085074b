"""Multi-index helpers.

Multi-indices are plain tuples of ints. Orderings are lexicographic with the
first coordinate varying slowest, which is the ordering under which
``kron(T_{n1}[f1], ..., T_{nk}[fk])`` is the multilevel Toeplitz matrix of the
tensor symbol.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterable, Sequence

MultiIndex = tuple[int, ...]


class InvalidDimensionError(ValueError):
    pass


def as_dims(n: int | Iterable[int]) -> MultiIndex:
    """Validate ``n`` as a dimension vector and return it as a tuple."""
    if isinstance(n, (int,)) or hasattr(n, "__index__"):
        n = (int(n),)
    n = tuple(int(v) for v in n)
    if len(n) == 0:
        raise InvalidDimensionError("empty dimension vector")
    if any(v < 1 for v in n):
        raise InvalidDimensionError(f"dimension entries must be >= 1, got {n}")
    return n


def as_degree(r: int | Iterable[int]) -> MultiIndex:
    if isinstance(r, int) or hasattr(r, "__index__"):
        r = (int(r),)
    r = tuple(int(v) for v in r)
    if len(r) == 0 or any(v < 0 for v in r):
        raise InvalidDimensionError(f"degree entries must be >= 0, got {r}")
    return r


def product(n: Iterable[int]) -> int:
    """N(n) = n_1 n_2 ... n_k."""
    return math.prod(as_dims(n))


def lex_enumerate(n: Iterable[int]) -> list[MultiIndex]:
    n = as_dims(n)
    return list(itertools.product(*(range(v) for v in n)))


def linear_index(i: Sequence[int], n: Iterable[int]) -> int:
    n = as_dims(n)
    if len(i) != len(n):
        raise InvalidDimensionError(f"index {tuple(i)} has wrong length for {n}")
    p = 0
    for it, nt in zip(i, n):
        if not 0 <= it < nt:
            raise IndexError(f"index {tuple(i)} out of range for {n}")
        p = p * nt + int(it)
    return p


def multi_index(p: int, n: Iterable[int]) -> MultiIndex:
    """Inverse of :func:`linear_index`."""
    n = as_dims(n)
    if not 0 <= p < math.prod(n):
        raise IndexError(f"position {p} out of range for {n}")
    out = []
    for nt in reversed(n):
        p, rem = divmod(p, nt)
        out.append(rem)
    return tuple(reversed(out))
