"""Dispersion curves and quantized edge Hall conductance of half-plane
magnetic Dirac operators with boundary conditions interpolating between
zigzag (gamma = 0, +inf) and infinite mass (gamma = +-1)."""

from .grids import Grid, auto_domain, make_grid
from .params import (Branch, FiberParams, SymmetryTransform, canonicalize,
                     gamma_from_eta, invert_gamma)
from .tridiag import (BACKEND, SymTridiag, eigenpair, eigenvalue_by_index,
                      eigenvalues_by_range, eigenvector, lowest_eigenvalues,
                      sturm_count)
from .robin import (DirichletParams, EigenPair, RobinFamily, RobinFiberParams,
                    RobinSystem, assemble_robin, nu, nu_dirichlet,
                    nu_partial_alpha, nu_partial_xi, nu_partial_xi_dirichlet)
from .dirac import (DiracMatrix, Spinor, assemble_dirac, dirac_eigenspinor,
                    dirac_residual, dirac_spectrum_window,
                    feynman_hellmann_velocity, reconstruct_spinor)
from .dispersion import (DispersionCurve, asymptotic_limit, critical_point,
                         curve_slope, gap_profile, sweep, theta, theta_pair)
from .conductance import (ConductanceReport, LevelWindow, build_window,
                          conductance_by_integral, conductance_by_limits,
                          default_delta, landau_levels)

__version__ = "0.1.0"
