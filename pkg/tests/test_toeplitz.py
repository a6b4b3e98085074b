import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from symtoep import catalog
from symtoep.multiindex import InvalidDimensionError, lex_enumerate
from symtoep.symbol import FourierStencil
from symtoep.toeplitz import (
    DenseSizeError,
    ToeplitzOperator,
    UnsupportedDecompositionError,
    anti_identity,
    build_toeplitz,
    decompose_blocks,
    flip,
    format_matrix,
    matvec,
    parse_matrix,
    read_matrix,
    symmetrize,
    write_matrix,
)

LAPLACE = FourierStencil([-1.0, 2.0, -1.0])


def naive_toeplitz(coeffs, n):
    """Entry-by-entry oracle straight from the definition c_{l - h}."""
    coeffs = np.asarray(coeffs, dtype=float)
    r = [(s - 1) // 2 for s in coeffs.shape]
    idx = list(lex_enumerate(n))
    T = np.zeros((len(idx), len(idx)))
    for a, l in enumerate(idx):
        for b, h in enumerate(idx):
            d = [lt - ht for lt, ht in zip(l, h)]
            if all(abs(dt) <= rt for dt, rt in zip(d, r)):
                T[a, b] = coeffs[tuple(dt + rt for dt, rt in zip(d, r))]
    return T


def test_laplace_3x3():
    expected = [[2, -1, 0], [-1, 2, -1], [0, -1, 2]]
    np.testing.assert_array_equal(build_toeplitz(LAPLACE, (3,)), expected)


def test_example1_diagonal_is_constant_coefficient():
    T = build_toeplitz(catalog.example1().stencil(), (4, 5))
    assert np.all(np.diag(T) == 5)


def test_example1_matches_naive_definition():
    s = catalog.example1().stencil()
    np.testing.assert_array_equal(build_toeplitz(s, (4, 3)), naive_toeplitz(s.coeffs, (4, 3)))


def test_kronecker_identity_small():
    f1, f2 = FourierStencil([1.0, 2.0, 3.0]), FourierStencil([4.0, 5.0, 6.0, 7.0, 8.0])
    T = build_toeplitz(FourierStencil.outer([f1, f2]), (3, 4))
    K = np.kron(build_toeplitz(f1, (3,)), build_toeplitz(f2, (4,)))
    np.testing.assert_array_equal(T, K)


def test_anti_identity_and_flip():
    np.testing.assert_array_equal(anti_identity(3), [[0, 0, 1], [0, 1, 0], [1, 0, 0]])
    # the Kronecker product of anti-identities is the full anti-identity
    np.testing.assert_array_equal(flip((2, 3)), anti_identity(6))
    Y = flip((3, 2, 2))
    np.testing.assert_array_equal(Y @ Y, np.eye(12))


def test_symmetrize_laplace():
    expected = [[0, -1, 2], [-1, 2, -1], [2, -1, 0]]
    np.testing.assert_array_equal(symmetrize(LAPLACE, (3,)), expected)


def test_decompose_constant_symbol():
    M, E = decompose_blocks(FourierStencil.constant(2.0, 2), (4, 2))
    np.testing.assert_array_equal(E, 0)
    np.testing.assert_array_equal(M, 2 * anti_identity(8))


def test_decompose_zero_first_degree_has_no_corner():
    s = FourierStencil(np.array([[1.0, -2.0, 3.0]]))  # r = (0, 1)
    M, E = decompose_blocks(s, (6, 4))
    np.testing.assert_array_equal(E, 0)


def test_decompose_example1_corner_rank():
    M, E = decompose_blocks(catalog.example1().stencil(), (32, 32))
    assert np.linalg.matrix_rank(E) <= 2 * 2 * 32


def test_decompose_odd_rejected():
    with pytest.raises(UnsupportedDecompositionError):
        decompose_blocks(LAPLACE, (5,))


def test_size_cap():
    with pytest.raises(DenseSizeError):
        build_toeplitz(catalog.example1().stencil(), (100, 100))
    with pytest.raises(DenseSizeError):
        symmetrize(LAPLACE, (50,), max_size=10)


def test_level_mismatch():
    with pytest.raises(InvalidDimensionError):
        build_toeplitz(LAPLACE, (3, 3))


def test_stencil_wider_than_matrix():
    s = FourierStencil(np.arange(1.0, 10.0))  # r = 4 but n = 2
    np.testing.assert_array_equal(build_toeplitz(s, (2,)), [[5, 4], [6, 5]])
    np.testing.assert_allclose(ToeplitzOperator(s, (2,)).matvec(np.array([1.0, 1.0])), [9, 11])


def test_matvec_examples():
    op = ToeplitzOperator(LAPLACE, (4,))
    np.testing.assert_allclose(op.matvec(np.ones(4)), [1, 0, 0, 1], atol=1e-14)
    np.testing.assert_allclose(op @ np.arange(4.0), [-1, 0, 0, 4], atol=1e-14)
    np.testing.assert_allclose(matvec(op, np.arange(4.0)), op(np.arange(4.0)))
    with pytest.raises(InvalidDimensionError):
        op.matvec(np.ones(5))


def test_operator_to_dense():
    s = catalog.example1().stencil()
    np.testing.assert_array_equal(ToeplitzOperator(s, (6, 5)).to_dense(), build_toeplitz(s, (6, 5)))


def test_matrix_dump_roundtrip(tmp_path, rng):
    A = rng.standard_normal((3, 4))
    path = tmp_path / "a.txt"
    write_matrix(A, path)
    np.testing.assert_array_equal(read_matrix(path), A)
    assert format_matrix(A).splitlines()[0] == "3 4"
    with pytest.raises(ValueError):
        parse_matrix("2 2\n1 2 3\n")


# ---------------------------------------------------------------- properties

dims = st.lists(st.integers(1, 5), min_size=1, max_size=3)


@st.composite
def stencil_and_dims(draw, even_first=False):
    n = draw(dims)
    if even_first:
        n[0] = 2 * draw(st.integers(1, 4))
    shape = [2 * draw(st.integers(0, 3)) + 1 for _ in n]
    coeffs = draw(arrays(float, shape, elements=st.integers(-8, 8).map(float)))
    return FourierStencil(coeffs), tuple(n)


@given(stencil_and_dims())
def test_build_matches_naive(case):
    s, n = case
    np.testing.assert_array_equal(build_toeplitz(s, n), naive_toeplitz(s.coeffs, n))


@given(stencil_and_dims())
def test_symmetrize_is_flip_times_t(case):
    s, n = case
    np.testing.assert_array_equal(symmetrize(s, n), flip(n) @ build_toeplitz(s, n))


@given(stencil_and_dims())
def test_symmetrized_matrix_is_symmetric(case):
    # Y T is symmetric for any real stencil since T^T = Y T Y
    s, n = case
    A = symmetrize(s, n)
    np.testing.assert_array_equal(A, A.T)


@given(stencil_and_dims())
def test_even_stencil_gives_symmetric_t(case):
    s, n = case
    c = s.coeffs + s.coeffs[tuple(slice(None, None, -1) for _ in n)]
    T = build_toeplitz(FourierStencil(c), n)
    np.testing.assert_array_equal(T, T.T)


@given(stencil_and_dims(even_first=True))
def test_decomposition_blocks(case):
    s, n = case
    M, E = decompose_blocks(s, n)
    np.testing.assert_array_equal(M + E, symmetrize(s, n))
    half = (n[0] // 2,) + n[1:]
    m = M.shape[0] // 2
    np.testing.assert_array_equal(M[:m, :m], 0)
    np.testing.assert_array_equal(M[m:, m:], 0)
    np.testing.assert_array_equal(M[:m, m:], flip(half) @ build_toeplitz(s, half))
    np.testing.assert_array_equal(M[m:, :m], M[:m, m:])


@given(stencil_and_dims(), st.integers(0, 2**31))
def test_fast_matvec_matches_dense(case, seed):
    s, n = case
    x = np.random.default_rng(seed).standard_normal(int(np.prod(n)))
    dense = build_toeplitz(s, n) @ x
    fast = ToeplitzOperator(s, n).matvec(x)
    assert np.linalg.norm(fast - dense) <= 1e-10 * max(np.linalg.norm(dense), 1.0)
