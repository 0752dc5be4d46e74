"""Robin and Dirichlet fiber problems against closed-form oracles.

Oracles used here: odd-Hermite levels of the half-line oscillator (the
Dirichlet spectrum of -d^2 + (x)^2 +- 1 at xi = 0 is 4n resp. 4n - 2),
the half-line Gaussian integral for the zero-mode boundary value, plain
quadrature of the continuum quadratic form, and central finite
differences for both derivative formulas.
"""

import math

import numpy as np
import pytest

from edgedirac.errors import DomainError, RefineGridError
from edgedirac.grids import auto_domain, make_grid
from edgedirac.robin import (RobinFamily, RobinFiberParams, assemble_robin,
                             nu, nu_dirichlet, nu_partial_alpha,
                             nu_partial_xi, nu_partial_xi_dirichlet,
                             trapezoid_weights)

G_DEFAULT = make_grid(12.0, 1200)
G_FINE = make_grid(12.0, 6000)


def test_assembly_boundary_entry():
    g = make_grid(2.0, 8)
    sys_p = assemble_robin(RobinFiberParams(1, 1.0, 1.0, 0.0), g)
    h = g.h
    assert sys_p.diag_A[0] == pytest.approx(1.0 / h + (h / 2) * (0.0 - 1.0) + 1.0)
    # h = 1 toy: 1 + (1/2)(0^2 - 1) + (alpha - xi) = 1 - 0.5 + 1 = 1.5
    toy = assemble_robin(RobinFiberParams(1, 1.0, 1.0, 0.0), make_grid(8.0, 8))
    assert toy.diag_A[0] == pytest.approx(1.5)


def test_assembly_neumann_like_boundary():
    # sign -, alpha = 0, xi = 0: boundary coefficient c = alpha + xi = 0
    g = make_grid(8.0, 8)
    sys_m = assemble_robin(RobinFiberParams(-1, 1.0, 0.0, 0.0), g)
    h = g.h
    assert sys_m.diag_A[0] == pytest.approx(1.0 / h + (h / 2) * (0.0 + 1.0))


def test_reduced_matrix_is_symmetric_by_construction():
    sys_p = assemble_robin(RobinFiberParams(1, 2.0, 0.3, -1.2), G_DEFAULT)
    dense = sys_p.tridiag.to_dense()
    assert np.array_equal(dense, dense.T)


def test_discrete_form_matches_continuum_quadrature():
    # fixed analytic test function with u(0) != 0 and fast decay
    from scipy.integrate import quad

    b, alpha, xi, sign = 1.0, 0.7, -0.4, 1

    def u(x):
        return (2.0 + x) * np.exp(-x * x)

    def du(x):
        return np.exp(-x * x) - 2 * x * (2.0 + x) * np.exp(-x * x)

    V = lambda x: (xi + b * x) ** 2 - sign * b
    c = alpha - sign * xi
    exact = (quad(lambda x: du(x) ** 2, 0, 20, limit=200)[0]
             + quad(lambda x: V(x) * u(x) ** 2, 0, 20, limit=200)[0]
             + c * u(0.0) ** 2)
    errs = []
    for N in (600, 1200):
        g = make_grid(12.0, N)
        sysm = assemble_robin(RobinFiberParams(sign, b, alpha, xi), g)
        uj = u(g.nodes()[: g.N])
        errs.append(abs(sysm.form_value(uj) - exact))
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.2)  # O(h^2)
    assert errs[1] < 1e-4


def test_weights_strictly_positive():
    w = trapezoid_weights(G_DEFAULT)
    assert np.all(w > 0)
    assert w[0] == pytest.approx(G_DEFAULT.h / 2)


def test_zero_mode_flat():
    # q+ with alpha = 0 has the Gaussian zero mode; needs a fine grid since
    # the discrete eigenvalue drifts like -h^2/16 at xi = 0
    e = nu(RobinFiberParams(1, 1.0, 0.0, 0.0), 1, G_FINE)
    assert abs(e.nu) <= 1e-6


def test_zero_mode_coarse_grid_is_flagged():
    with pytest.raises(RefineGridError):
        nu(RobinFiberParams(1, 1.0, 0.0, 0.0), 1, G_DEFAULT)


def test_minus_branch_alpha_zero():
    # nu-_1(0, 0) = nuDir_1(-b, 0) = 2 for b = 1
    e = nu(RobinFiberParams(-1, 1.0, 0.0, 0.0), 1, G_DEFAULT)
    assert e.nu == pytest.approx(2.0, abs=1e-3)


def test_minus_branch_large_alpha_approaches_dirichlet():
    e = nu(RobinFiberParams(-1, 1.0, 1000.0, 0.0), 1, G_DEFAULT)
    want = nu_dirichlet(1.0, 0.0, 1, G_DEFAULT).nu
    assert abs(e.nu - want) <= 0.05


def test_dirichlet_odd_hermite_levels():
    assert nu_dirichlet(1.0, 0.0, 1, G_DEFAULT).nu == pytest.approx(4.0, abs=4e-3)
    assert nu_dirichlet(1.0, 0.0, 2, G_DEFAULT).nu == pytest.approx(8.0, abs=8e-3)
    assert nu_dirichlet(-1.0, 0.0, 1, G_DEFAULT).nu == pytest.approx(2.0, abs=2e-3)


def test_dirichlet_landau_limit():
    g = auto_domain(1.0, -8.0, 2)
    assert nu_dirichlet(1.0, -8.0, 1, g).nu == pytest.approx(2.0, abs=1e-3)


def test_dirichlet_convergence_is_second_order():
    e1 = abs(nu_dirichlet(1.0, 0.0, 1, G_DEFAULT).nu - 4.0)
    e2 = abs(nu_dirichlet(1.0, 0.0, 1, G_DEFAULT.refined()).nu - 4.0)
    assert 3.5 <= e1 / e2 <= 4.5


def test_normalization_invariant():
    e = nu(RobinFiberParams(1, 1.0, 1.3, 0.5), 2, G_DEFAULT)
    w = trapezoid_weights(G_DEFAULT)
    assert float(np.sum(w * e.samples**2)) == pytest.approx(1.0, abs=1e-10)
    assert e.u0 == e.samples[0]


def test_partial_alpha_is_boundary_value_squared():
    # zero mode of q+ at alpha=0: u0^2 = 2/sqrt(pi) for the normalized
    # half-line Gaussian exp(-x^2/2)
    e = nu(RobinFiberParams(1, 1.0, 0.0, 0.0), 1, G_FINE)
    assert nu_partial_alpha(e) == pytest.approx(2 / math.sqrt(math.pi), abs=1e-3)
    e2 = nu(RobinFiberParams(-1, 1.0, 0.8, -0.7), 2, G_DEFAULT)
    assert nu_partial_alpha(e2) > 0


@pytest.mark.parametrize("sign,alpha,xi,n", [(1, 0.9, 0.4, 1), (-1, 0.5, -1.1, 2)])
def test_partial_alpha_matches_finite_difference(sign, alpha, xi, n):
    d = 1e-4
    fam = RobinFamily(sign, 1.0, xi, G_DEFAULT)
    e = fam.eigen(alpha, n)
    fd = (fam.eigen(alpha + d, n).nu - fam.eigen(alpha - d, n).nu) / (2 * d)
    assert nu_partial_alpha(e) == pytest.approx(fd, abs=1e-3)


@pytest.mark.parametrize("sign,alpha,xi,n", [(1, 0.9, 0.4, 1), (-1, 1.4, -0.6, 1),
                                             (1, 2.0, 1.0, 2)])
def test_partial_xi_matches_finite_difference(sign, alpha, xi, n):
    d = 1e-4
    e = nu(RobinFiberParams(sign, 1.0, alpha, xi), n, G_DEFAULT)
    fd = (nu(RobinFiberParams(sign, 1.0, alpha, xi + d), n, G_DEFAULT).nu
          - nu(RobinFiberParams(sign, 1.0, alpha, xi - d), n, G_DEFAULT).nu) / (2 * d)
    assert nu_partial_xi(e) == pytest.approx(fd, abs=1e-3)


def test_dirichlet_partial_xi_matches_finite_difference():
    d = 1e-4
    e = nu_dirichlet(1.0, 0.3, 1, G_DEFAULT)
    fd = (nu_dirichlet(1.0, 0.3 + d, 1, G_DEFAULT).nu
          - nu_dirichlet(1.0, 0.3 - d, 1, G_DEFAULT).nu) / (2 * d)
    assert nu_partial_xi_dirichlet(e) == pytest.approx(fd, abs=1e-6)


def test_flat_zero_mode_has_zero_xi_slope():
    e = nu(RobinFiberParams(1, 1.0, 0.0, 0.0), 1, G_FINE)
    assert abs(nu_partial_xi(e)) <= 1e-4  # (nu/b) u0^2 with nu ~ 0


def test_minus_critical_point_relation():
    # at the minimizer of nu-(alpha, .) the identity nu + alpha^2 + 2 alpha xi = 0
    alpha = 0.8

    def nu_at(xi):
        return nu(RobinFiberParams(-1, 1.0, alpha, xi), 1, G_DEFAULT)

    lo, hi = -4.0, 2.0
    for _ in range(60):
        mid = (lo + hi) / 2
        if nu_partial_xi(nu_at(mid)) < 0:
            lo = mid
        else:
            hi = mid
    e = nu_at((lo + hi) / 2)
    xi_c = (lo + hi) / 2
    assert abs(e.nu + alpha**2 + 2 * alpha * xi_c) <= 1e-3 * (1 + alpha**2)


def test_alpha_monotonicity_lattice():
    alphas = [0.0, 0.5, 1.0, 2.0, 5.0]
    for sign in (1, -1):
        for xi in (-4.0, -1.0, 0.0, 1.0, 4.0):
            fam = RobinFamily(sign, 1.0, xi, G_DEFAULT)
            for n in (1, 2, 3):
                floor = -0.05 * (1 + xi * xi)
                vals = [fam.eigen(a, n, nu_floor=floor).nu for a in alphas]
                assert all(b > a for a, b in zip(vals, vals[1:]))


def test_ordering_and_simplicity():
    for xi in (-2.0, 0.0, 2.0):
        fam = RobinFamily(1, 1.0, xi, G_DEFAULT)
        vals = [fam.eigen(1.0, n).nu for n in (1, 2, 3, 4)]
        assert all(b - a > 1e-9 for a, b in zip(vals, vals[1:]))


def test_sandwich_minus_below_dirichlet():
    for alpha in (0.5, 2.0):
        for xi in (-1.0, 1.0):
            fam = RobinFamily(-1, 1.0, xi, G_DEFAULT)
            for n in (1, 2, 3):
                assert fam.eigen(alpha, n).nu <= nu_dirichlet(1.0, xi, n, G_DEFAULT).nu + 1e-9


def test_alpha_to_zero_identities():
    # nu+_n(0, xi) = nuDir_{n-1}(b, xi) for n >= 2; nu-_n(0, xi) = nuDir_n(-b, -xi)
    xi = 0.4
    a = RobinFamily(1, 1.0, xi, G_FINE).eigen(0.0, 2).nu
    b = nu_dirichlet(1.0, xi, 1, G_FINE).nu
    assert a == pytest.approx(b, rel=2e-3)
    am = RobinFamily(-1, 1.0, xi, G_FINE).eigen(0.0, 1).nu
    bm = nu_dirichlet(-1.0, -xi, 1, G_FINE).nu
    assert am == pytest.approx(bm, rel=2e-3)


def test_domain_errors():
    with pytest.raises(DomainError):
        RobinFiberParams(1, -1.0, 0.0, 0.0)  # b must be positive here
    with pytest.raises(DomainError):
        RobinFiberParams(1, 1.0, -0.1, 0.0)
    with pytest.raises(DomainError):
        RobinFiberParams(2, 1.0, 0.0, 0.0)
    e = nu_dirichlet(1.0, 0.0, 1, G_DEFAULT)
    with pytest.raises(DomainError):
        nu_partial_alpha(e)
    with pytest.raises(DomainError):
        nu_partial_xi(e)
    ep = nu(RobinFiberParams(1, 1.0, 1.0, 0.0), 1, G_DEFAULT)
    with pytest.raises(DomainError):
        nu_partial_xi_dirichlet(ep)


def test_resolution_guard():
    with pytest.raises(RefineGridError):
        nu(RobinFiberParams(1, 1.0, 1.0, 0.0), 5, make_grid(4.0, 16))
