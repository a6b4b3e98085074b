import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from symtoep import acceptance, catalog
from symtoep.distribution import (
    DomainError,
    acs_check_polynomial,
    acs_check_truncation,
    fine_samples_of,
    functional_discrepancy,
    h_sample,
    hat_functions,
    match_sorted,
    orthant_grid,
    phi_sample,
    psi_sample,
    sample,
    theta_grid,
    wasserstein1_sorted,
    xi_grid,
)
from symtoep.multiindex import InvalidDimensionError
from symtoep.spectra import eig_sym, singular_values
from symtoep.symbol import FourierStencil, NotSeparableError, StencilSymbol
from symtoep.toeplitz import symmetrize

TWO_PI = 2 * np.pi


def test_psi_examples():
    f = catalog.example1()
    assert psi_sample(f, [0.0, 0.0]) == pytest.approx(30)
    assert psi_sample(f, [-TWO_PI, -TWO_PI]) == pytest.approx(-30)
    assert psi_sample(f, [1.0, 2.0]) == pytest.approx(abs(f.values(np.array([1.0, 2.0]))))
    assert psi_sample(f, [-1.0, -2.0]) == pytest.approx(-abs(f.values(np.array([TWO_PI - 1, TWO_PI - 2]))))


def test_phi_examples():
    f = catalog.example1()
    assert phi_sample(f, [0.0, 0.0]) == pytest.approx(30)
    assert phi_sample(f, [-1.0, -2.0]) == pytest.approx(-abs(f.values(np.array([1.0, 2.0]))))
    with pytest.raises(DomainError):
        phi_sample(f, [-1.0, 0.0])  # negative orthant is strict for phi


def test_domain_errors():
    f = catalog.example1()
    with pytest.raises(DomainError):
        psi_sample(f, [1.0, -1.0])
    with pytest.raises(DomainError):
        psi_sample(f, [7.0, 1.0])
    with pytest.raises(InvalidDimensionError):
        psi_sample(f, [1.0, 1.0, 1.0])


def test_h_example2():
    # |10 + 4i| * |4 - 3i| at (pi/2, pi/2)
    assert h_sample(catalog.example2(), [np.pi / 2, np.pi / 2]) == pytest.approx(5 * np.sqrt(116))
    assert h_sample(catalog.example2(), [-np.pi / 2, np.pi / 2]) < 0
    assert h_sample(catalog.example2(), [-np.pi / 2, -np.pi / 2]) > 0


def test_h_needs_factors():
    with pytest.raises(NotSeparableError):
        h_sample(catalog.example1(), [0.0, 0.0])


def test_phi_equals_psi_for_even_symbol():
    f = catalog.example3(degree=6)  # theta^2 (x) theta^2 is even in every variable
    pts = -np.random.default_rng(5).uniform(0.01, TWO_PI - 0.01, size=(50, 2))
    np.testing.assert_allclose(phi_sample(f, pts), psi_sample(f, pts), rtol=1e-12)


def test_xi_grid_small():
    g = xi_grid((4, 4))
    assert len(g) == 16
    pts = {tuple(np.round(p, 12)) for p in g.points}
    assert (round(TWO_PI, 12), round(TWO_PI, 12)) in pts
    assert (round(-TWO_PI, 12), round(-TWO_PI, 12)) in pts
    assert (0.0, 0.0) in pts
    # the corner gamma - 2pi = 0 keeps the negative label
    zero = np.all(g.points == 0, axis=1)
    assert sorted(g.branch[zero]) == [-1, 1]


def test_xi_sample_signs():
    s = sample(catalog.example1(), "psi", xi_grid((4, 4)))
    # f is 2pi-periodic, so all four corners of each square carry |f(0)| = 30
    assert np.count_nonzero(s == 30) == 4 and np.count_nonzero(s == -30) == 4
    assert np.all(s[:8] >= 0) and np.all(s[8:] <= 0)


def test_theta_grid():
    g = theta_grid((2, 2))
    np.testing.assert_allclose(g.points, [[-TWO_PI, -TWO_PI], [-TWO_PI, TWO_PI], [TWO_PI, -TWO_PI], [TWO_PI, TWO_PI]])
    g3 = theta_grid((3, 3))
    assert np.any(np.all(np.abs(g3.points) < 1e-15, axis=1))
    assert len(theta_grid((32, 32))) == 1024 and len(theta_grid((64, 64))) == 4096


def test_grid_sizes_and_errors():
    assert len(xi_grid((32, 32))) == 1024 and len(xi_grid((64, 64))) == 4096
    assert len(orthant_grid((8, 3, 2))) == 48
    with pytest.raises(InvalidDimensionError):
        xi_grid((5, 4))
    with pytest.raises(InvalidDimensionError):
        xi_grid((4, 4, 4))
    with pytest.raises(InvalidDimensionError):
        orthant_grid((3, 4))


def test_match_sorted_examples():
    rep = match_sorted([3.0, 1.0, 2.0], [1.5, 2.0, 2.5])
    np.testing.assert_allclose(rep.per_index_abs_err, [0.5, 0.0, 0.5])
    assert rep.mean_abs_err == pytest.approx(1 / 3)
    assert rep.wasserstein1 == rep.mean_abs_err
    assert rep.max_abs_err == 0.5
    assert rep.outlier_count == 0
    assert match_sorted([0.0, 0.0, 0.0, 10.0], [0.0] * 4, outlier_threshold=1.0).outlier_count == 1
    with pytest.raises(ValueError):
        match_sorted([1.0], [1.0, 2.0])


def test_example1_tail_errors_halve():
    # The largest per-index errors sit in the tails of the spectrum and shrink
    # like 1/n; they are discretization error, not isolated outliers.
    small = match_sorted(acceptance.example_eigenvalues("example1", (32, 32)),
                         sample(catalog.example1(), "psi", xi_grid((32, 32))))
    large = match_sorted(acceptance.example_eigenvalues("example1", (64, 64)),
                         sample(catalog.example1(), "psi", xi_grid((64, 64))))
    assert large.max_abs_err < 0.6 * small.max_abs_err
    assert large.mean_abs_err < 0.6 * small.mean_abs_err
    assert small.outlier_count <= 0.01 * 1024
    assert large.outlier_count <= 0.01 * 4096


def test_hat_functions():
    hats = hat_functions(0.0, 19.0)
    assert len(hats) == 20
    assert hats[0](0.0) == 1.0 and hats[0](2.0) == 0.0 and hats[0](1.0) == 0.5


def test_constant_symbol_discrepancy():
    f = StencilSymbol(FourierStencil.constant(2.0, 2))
    lam = eig_sym(symmetrize(f.stencil(), (8, 8))).values
    assert functional_discrepancy(lam, f, "psi") <= 1e-6


def test_fine_samples_measure():
    f = catalog.example2()
    assert fine_samples_of(f, "psi", 16).size == 2 * 16**2
    assert fine_samples_of(f, "h", 16).size == 16**2
    with pytest.raises(ValueError):
        fine_samples_of(f, "sigma", 16)


def test_psi_and_phi_give_same_distribution():
    # psi and phi are rearrangements of one another: both carry
    # |f| on one orthant and -|f| on the other
    f = catalog.example1()
    a = np.sort(fine_samples_of(f, "psi", 128))
    b = np.sort(fine_samples_of(f, "phi", 128))
    assert wasserstein1_sorted(a, b) < 1e-2
    lam = acceptance.example_eigenvalues("example1", (32, 32))
    assert abs(functional_discrepancy(lam, f, "psi") - functional_discrepancy(lam, f, "phi")) < 2e-3


def test_discrepancy_decreases_with_n():
    for name in ("example1", "example2", "example3"):
        (e32, d32), (e64, d64) = (acceptance.distribution_metrics(name, n) for n in ((32, 32), (64, 64)))
        assert e64 < e32 and d64 < d32


def test_sigma_mode_discrepancy():
    f = catalog.example2()
    A = symmetrize(f.stencil(), (32, 32))
    d = functional_discrepancy(singular_values(A).values, f, "psi", absolute=True)
    assert d < 0.05


def test_rearrangement_distances_shrink():
    for name in ("example2", "example3"):
        a = acceptance.rearrangement_distances(name, (32, 32))
        b = acceptance.rearrangement_distances(name, (64, 64))
        assert set(a) == {"psi-phi", "psi-h"}
        assert all(b[k] < a[k] for k in a)


def test_acs_polynomial():
    s = catalog.example1().stencil()
    a = acs_check_polynomial(s, (16, 16))
    b = acs_check_polynomial(s, (32, 16))
    assert a.passed and b.passed
    assert a.details == {"rank": 64, "rank_bound": 64}
    assert b.rank_fraction == pytest.approx(a.rank_fraction / 2)
    zero = acs_check_polynomial(FourierStencil(np.array([[1.0, 2.0, 1.0]])), (8, 4))
    assert zero.measured == 0 and zero.passed


def test_acs_truncation_of_polynomial_is_exact():
    (rep,) = acs_check_truncation(catalog.example1(), [(2, 2)], (8, 8))
    assert rep.measured < 1e-12 and rep.norm_bound < 1e-12 and rep.passed


def _theta_squared_tail_l1(m, samples=200_000):
    """||theta^2 - f_m||_L1 on [-pi, pi) from the cosine series, trapezoid rule."""
    t = np.linspace(-np.pi, np.pi, samples + 1)
    j = np.arange(1, m + 1)
    fm = np.pi**2 / 3 + (4 * (-1.0) ** j / j**2) @ np.cos(np.outer(j, t))
    trapezoid = getattr(np, "trapezoid", None) or np.trapz
    return trapezoid(np.abs(t**2 - fm), t)


def test_acs_truncation_theta_squared():
    reports = acs_check_truncation(catalog.theta_squared(), [(4,), (8,), (16,)], (32,))
    eps = [r.norm_bound for r in reports]
    assert eps[0] > eps[1] > eps[2]
    assert all(r.passed for r in reports)
    # the 512-point midpoint norm is within a fraction of a percent of the fine oracle
    for m, e in zip((4, 8, 16), eps):
        assert e == pytest.approx(_theta_squared_tail_l1(m) / TWO_PI, rel=5e-3)


def test_acs_truncation_example3():
    (rep,) = acs_check_truncation(catalog.example3(), [(4, 4)], (16, 16))
    assert rep.passed and 0 < rep.measured <= rep.bound


@given(st.lists(st.floats(-100, 100), min_size=1, max_size=30))
def test_w1_is_a_metric_on_permutations(xs):
    a = np.array(xs)
    assert wasserstein1_sorted(a, a[::-1]) == 0
    assert wasserstein1_sorted(a, a + 1) == pytest.approx(1)
