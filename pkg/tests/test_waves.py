import json

import numpy as np
import pytest
from scipy.integrate import quad

from skwave import elliptic as el
from skwave import waves as wv
from skwave.errors import DomainError, ExistenceError, UsageError
from skwave.kernel import line_grid, quadrature, torus_grid


# ----------------------------------------------------------------------
# shape constants
# ----------------------------------------------------------------------

def test_shape_constants_closed_forms():
    A1, M1 = wv.shape_constants(1)
    assert abs(A1 - 2 / 3) < 1e-10
    assert abs(M1 - 2.0) < 1e-10
    A2, M2 = wv.shape_constants(2)
    assert abs(M2 - np.pi) < 1e-10
    assert abs(A2 - np.pi / 2) < 1e-10


def test_shape_constants_vs_substitution_oracle():
    # t = tanh(x) maps the integrals onto a finite interval: an oracle
    # independent of the infinite-interval quadrature in the module
    for r in (2, 4):
        p = 2.0 / r
        A_or = 2 * quad(lambda t: (1 - t * t) ** (p / 2 - 1) * t * t, 0, 1,
                        epsabs=1e-13, epsrel=1e-13)[0]
        M_or = 2 * quad(lambda t: (1 - t * t) ** (p / 2 - 1), 0, 1,
                        epsabs=1e-13, epsrel=1e-13)[0]
        A, M = wv.shape_constants(r)
        assert abs(A - A_or) < 1e-10
        assert abs(M - M_or) < 1e-10


# ----------------------------------------------------------------------
# solitary family
# ----------------------------------------------------------------------

def test_solitary_r1_limit_values():
    thr = wv.solitary_threshold(1)
    assert abs(thr - 12 ** (-1 / 3)) < 1e-12
    p = wv.solve_solitary(1, thr + 1e-6)
    assert abs(p.a - 0.93467) < 1e-3
    assert abs(p.b - 0.57235) < 1e-3


def test_solitary_r1_closed_form_vs_cubic():
    # phi = a sech(bx) in the stationary equation forces a^2 = 2w and
    # (4/3) w b^3 + b^2 - w = 0 (sech'' = sech - 2 sech^3)
    p = wv.solve_solitary(1, 1.0)
    assert abs((4 / 3) * p.b ** 3 + p.b ** 2 - 1.0) < 1e-10
    assert abs(p.a ** 2 - 2.0) < 1e-10


@pytest.mark.parametrize("r,omega", [(1, 0.4), (1, 0.43), (2, 0.28), (4, 0.19)])
def test_solitary_existence_rejection(r, omega):
    with pytest.raises(ExistenceError):
        wv.solve_solitary(r, omega)


@pytest.mark.parametrize("r,omega", [(1, 0.44), (2, 0.29), (4, 0.21)])
def test_solitary_existence_acceptance(r, omega):
    p = wv.solve_solitary(r, omega)
    assert p.a > 0 and p.b > 0 and p.c > 1


def test_solitary_general_r_consistency():
    # the width equation is equivalent to a^(2r) = (r+1) omega
    for r, omega in [(2, 0.5), (4, 0.3), (3, 0.4)]:
        p = wv.solve_solitary(r, omega)
        assert abs(p.a ** (2 * r) - (r + 1) * omega) < 1e-9


def test_solitary_monotone_parameters():
    thr = wv.solitary_threshold(1)
    omegas = thr + np.linspace(0.01, 1.5, 50)
    ps = [wv.solve_solitary(1, float(w), validate=False) for w in omegas]
    assert np.all(np.diff([p.a for p in ps]) > 0)
    assert np.all(np.diff([p.b for p in ps]) > 0)


# ----------------------------------------------------------------------
# periodic families
# ----------------------------------------------------------------------

def test_periodic_r1_frequency_at_half():
    p = wv.solve_periodic_r1(0.5)
    assert abs(p.omega - 0.508) < 1e-3


def test_periodic_r1_small_k_width_limit():
    p = wv.solve_periodic_r1(1e-4)
    assert abs(p.b - 0.5) < 1e-6


@pytest.mark.parametrize("k", [0.1, 0.3, 0.5, 0.7, 0.9])
def test_periodic_r1_bounds(k):
    p = wv.solve_periodic_r1(k)
    assert p.a > np.sqrt(2) / 2
    assert p.omega > 0.5


def test_periodic_r1_beyond_limit():
    with pytest.raises(DomainError):
        wv.solve_periodic_r1(0.99)


def test_dn_modulus_limit_value():
    assert abs(wv.dn_modulus_limit() - 0.979653) < 1e-5


def test_periodic_r2_alpha():
    assert abs(wv.dnq_alpha(0.5) - (0.75 - np.sqrt(0.8125))) < 1e-12
    assert abs(wv.dnq_alpha(0.5) + 0.151388) < 1e-6
    for k in (0.1, 0.3, 0.5, 0.7, 0.9):
        assert wv.dnq_alpha(k) < 0


def test_periodic_r2_frequency_at_half():
    p = wv.solve_periodic_r2(0.5)
    assert abs(p.omega - 0.2642) < 1e-3


def test_periodic_r2_amplitude_independent_of_quad_size():
    a1 = wv.solve_periodic_r2(0.3, n_quad=256).a
    a2 = wv.solve_periodic_r2(0.3, n_quad=1024).a
    assert abs(a1 - a2) < 1e-11


# ----------------------------------------------------------------------
# profiles and the stationary residual
# ----------------------------------------------------------------------

def test_profile_solitary_origin_values():
    p = wv.solve_solitary(1, 1.0)
    phi, dphi, d2phi = wv.closed_form_evaluators(p)
    assert abs(float(phi(0.0)) - p.a) < 1e-14
    assert abs(float(dphi(0.0))) < 1e-14
    assert abs(float(d2phi(0.0)) + p.a * p.b ** 2) < 1e-14


def test_profile_dn_range(dn_profile):
    p = dn_profile.params
    assert abs(dn_profile.phi[0] - p.a) < 1e-13
    idx = np.argmin(np.abs(dn_profile.grid.nodes - np.pi))
    assert abs(np.min(dn_profile.phi) - p.a * np.sqrt(1 - p.k ** 2)) < 1e-10
    assert idx == np.argmin(dn_profile.phi)


def test_profile_positivity_and_periodicity(dn_profile, dnq_profile):
    for prof in (dn_profile, dnq_profile):
        assert np.all(prof.phi > 0)
        phi_f, dphi_f, _ = wv.closed_form_evaluators(prof.params)
        assert abs(float(phi_f(0.0)) - float(phi_f(2 * np.pi))) < 1e-10
        assert abs(float(dphi_f(0.0)) - float(dphi_f(2 * np.pi))) < 1e-10


def test_profile_tail_rule(solitary_r1_profile):
    prof = solitary_r1_profile
    assert prof.phi[0] < 1e-12 * prof.params.a
    assert prof.phi[-1] < 1e-12 * prof.params.a


@pytest.mark.parametrize("fixture", ["solitary_r1_profile", "solitary_r4_profile",
                                     "dn_profile", "dnq_profile"])
def test_ode_residual_all_families(fixture, request):
    prof = request.getfixturevalue(fixture)
    assert wv.ode_residual(prof) < 1e-7


def test_ode_residual_solitary_fine():
    p = wv.solve_solitary(1, 1.0)
    prof = wv.sample_profile(p, wv.default_grid(p, 1024))
    assert wv.ode_residual(prof) < 1e-8


def test_ode_residual_detects_perturbation(dn_profile):
    g = dn_profile.grid
    bad = wv.Profile(dn_profile.params, g,
                     dn_profile.phi + 0.01 * np.cos(g.nodes),
                     dn_profile.dphi - 0.01 * np.sin(g.nodes),
                     dn_profile.d2phi - 0.01 * np.cos(g.nodes))
    assert wv.ode_residual(bad) >= 1e-3


def test_ode_residual_resolution_convergence():
    # trapezoid error on the line family is visible below n ~ 256; each
    # doubling must gain at least 4x until the roundoff floor (~1e-11).
    # (On the torus the rectangle rule is already at the floor at n=16.)
    p = wv.solve_solitary(1, 1.0)
    L = wv.tail_half_length(p)
    res = [wv.ode_residual(wv.sample_profile(p, line_grid(L, n)))
           for n in (64, 128, 256)]
    for coarse, fine in zip(res, res[1:]):
        assert coarse > 4 * fine or coarse < 1e-11
    assert wv.ode_residual(wv.sample_profile(p, line_grid(L, 1024))) < 1e-11
    assert wv.ode_residual(
        wv.sample_profile(wv.solve_periodic_r1(0.9, validate=False),
                          torus_grid(512))) < 1e-11


def test_kirchhoff_constant_self_consistency():
    for p, n in [(wv.solve_solitary(2, 0.5), 1024),
                 (wv.solve_periodic_r1(0.3), 512),
                 (wv.solve_periodic_r2(0.7), 512)]:
        prof = wv.sample_profile(p, wv.default_grid(p, n))
        c_quad = 1 + quadrature(prof.grid, prof.dphi ** 2)
        assert abs(c_quad - p.c) < 1e-8 * p.c


def test_periodic_r1_gradient_matches_tau1(dn_profile):
    from skwave.functionals import closed_form_tau
    tau1 = closed_form_tau(0.5)[0]
    grad = quadrature(dn_profile.grid, dn_profile.dphi ** 2)
    assert abs(grad - tau1) < 1e-8 * abs(tau1)


def test_topology_mismatch():
    p = wv.solve_solitary(1, 1.0)
    with pytest.raises(UsageError):
        wv.sample_profile(p, torus_grid(64))
    q = wv.solve_periodic_r1(0.5)
    with pytest.raises(UsageError):
        wv.sample_profile(q, line_grid(10.0, 64))


def test_profile_csv_roundtrip(tmp_path, dn_profile):
    path = tmp_path / "dn.csv"
    wv.write_profile_csv(dn_profile, path)
    header = wv.read_profile_header(path)
    assert header["family"] == "periodic_dn"
    assert header["k"] == 0.5
    data = np.loadtxt(path, delimiter=",", skiprows=2)
    assert data.shape == (dn_profile.grid.n, 4)
    assert np.allclose(data[:, 1], dn_profile.phi)
