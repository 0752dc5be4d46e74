"""Staggered Dirac oracle: exact symmetry, zero-mode dichotomy, spinors.

The staggered matrix is the independent route; here it is checked against
closed forms (zigzag levels via odd-Hermite), its own exact structural
properties (transpose equality, discrete charge conjugation), and the
fixed-point route only in the dedicated cross-oracle test.
"""

import math

import numpy as np
import pytest

from edgedirac.dirac import (assemble_dirac, dirac_eigenspinor, dirac_residual,
                             dirac_spectrum_window, feynman_hellmann_velocity,
                             reconstruct_spinor, Spinor)
from edgedirac.dispersion import critical_point, curve_slope, theta_pair
from edgedirac.errors import DomainError
from edgedirac.grids import auto_domain, make_grid
from edgedirac.params import Branch, FiberParams, canonicalize
from edgedirac.robin import RobinFamily

G = make_grid(14.0, 1400)


def test_matrix_is_exactly_symmetric():
    for gamma in (0.0, 0.7, 2.5, math.inf):
        dense = assemble_dirac(FiberParams(1.0, gamma, -0.4), G).to_dense()
        assert np.array_equal(dense, dense.T)


def test_zero_mode_iff_gamma_zero():
    vals0 = dirac_spectrum_window(FiberParams(1.0, 0.0, 0.0), G, 2)
    assert np.min(np.abs(vals0)) <= 1e-6
    vals1 = dirac_spectrum_window(FiberParams(1.0, 1.0, 0.0), G, 2)
    assert np.min(np.abs(vals1)) >= 0.3


@pytest.mark.parametrize("gamma", [0.5, 2.0, math.inf])
def test_no_zero_mode_on_lattice(gamma):
    for xi in (-2.0, 0.0, 2.0):
        vals = dirac_spectrum_window(FiberParams(1.0, gamma, xi), G, 2)
        assert np.min(np.abs(vals)) > 1e-6


def test_zigzag_infinite_levels():
    vals = dirac_spectrum_window(FiberParams(1.0, math.inf, 0.0), G, 4)
    want = [-math.sqrt(6), -math.sqrt(2), math.sqrt(2), math.sqrt(6)]
    assert vals == pytest.approx(want, abs=2e-3)


def test_zigzag_spectra_symmetric():
    # k odd at gamma = 0 so the window is the exact zero mode plus pairs
    for gamma, k in ((0.0, 9), (math.inf, 8)):
        vals = np.sort(dirac_spectrum_window(FiberParams(1.0, gamma, 1.3), G, k))
        assert np.max(np.abs(vals + vals[::-1])) <= 1e-6


def test_discrete_charge_conjugation_is_exact():
    fp = FiberParams(-1.0, 2.0, 0.3)
    can, t = canonicalize(fp)
    assert can == FiberParams(1.0, 0.5, -0.3)
    assert t.negate_spectrum and t.reflect_xi and t.invert_gamma
    direct = np.sort(dirac_spectrum_window(fp, G, 6))
    mapped = np.sort(t.map_value(dirac_spectrum_window(can, G, 6)))
    assert np.max(np.abs(direct - mapped)) <= 1e-6


def test_sigma3_flip_is_exact():
    fp = FiberParams(1.0, -3.0, 0.3)
    can, t = canonicalize(fp)
    assert can.gamma == 3.0 and t.negate_spectrum and not t.reflect_xi
    direct = np.sort(dirac_spectrum_window(fp, G, 6))
    mapped = np.sort(t.map_value(dirac_spectrum_window(can, G, 6)))
    assert np.max(np.abs(direct - mapped)) <= 1e-6


def test_reconstructed_spinor_boundary_ratio_and_residual():
    fp = FiberParams(1.0, 1.0, 0.0)
    th, pair = theta_pair(Branch(1, 1), fp, G)
    s = reconstruct_spinor(pair, th, fp, G)
    ratio = s.boundary_psi2() / s.psi1[0]
    assert ratio == pytest.approx(fp.gamma, rel=1e-3)
    assert s.norm() == pytest.approx(1.0, abs=1e-10)
    assert dirac_residual(s, G) <= 5e-3 * (1 + th)


def test_reconstruct_rejects_nonpositive_lambda():
    fp = FiberParams(1.0, 1.0, 0.0)
    th, pair = theta_pair(Branch(1, 1), fp, G)
    with pytest.raises(DomainError):
        reconstruct_spinor(pair, -th, fp, G)
    with pytest.raises(DomainError):
        reconstruct_spinor(pair, 0.0, fp, G)


def test_sigma3_maps_negative_branch_spinor():
    # sigma_3 applied to an eigenspinor of gamma' = -gamma at +lambda gives
    # an eigenspinor of gamma at -lambda
    lam_pos = dirac_spectrum_window(FiberParams(1.0, -1.0, 0.3), G, 4)
    lam_pos = float(lam_pos[lam_pos > 0][0])
    s = dirac_eigenspinor(FiberParams(1.0, -1.0, 0.3), G, lam_pos)
    flipped = Spinor(s.psi1, -s.psi2, -s.lam, FiberParams(1.0, 1.0, 0.3), s.grid)
    assert dirac_residual(flipped, G) <= 1e-6


def test_velocity_flat_band_is_zero():
    fam = RobinFamily(1, 1.0, 0.5, make_grid(14.0, 7000))
    pair = fam.eigen(0.0, 1, nu_floor=-1.0)
    psi1 = np.zeros(7001)
    psi1[:7000] = pair.samples
    s = Spinor(psi1, np.zeros(7000), 0.0, FiberParams(1.0, 0.0, 0.5),
               make_grid(14.0, 7000))
    assert feynman_hellmann_velocity(s) == 0.0


def test_velocity_matches_closed_form_slope():
    fp = FiberParams(1.0, 1.0, 0.0)
    br = Branch(1, 1)
    th, pair = theta_pair(br, fp, G)
    slope = curve_slope(br, fp, th, pair)
    s = dirac_eigenspinor(fp, G, th)
    assert feynman_hellmann_velocity(s) == pytest.approx(slope, abs=2e-3)


def test_velocity_vanishes_at_minimizer():
    g = auto_domain(1.0, -6.0, 2)
    xi_star, th_star = critical_point(1.0, 1.0, 1, g)
    s = dirac_eigenspinor(FiberParams(1.0, 1.0, xi_star), g, -th_star)
    assert abs(feynman_hellmann_velocity(s)) <= 2e-3


def test_cross_oracle_at_infinite_mass():
    fp = FiberParams(1.0, 1.0, 0.0)
    spec = dirac_spectrum_window(fp, G, 6)
    for n in (1, 2):
        th_p, _ = theta_pair(Branch(1, n), fp, G)
        pos = np.sort(spec[spec > 0])
        assert abs(th_p - pos[n - 1]) <= 1e-3 * (1 + th_p)
