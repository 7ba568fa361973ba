"""Standing-wave families and their closed-form profiles.

Every family solves the stationary equation

    -(1 + int phi'^2) phi'' + omega*phi - phi^(2r+1) = 0

with a positive profile:

* ``solitary``              phi = a sech^(1/r)(b x)              on the line
* ``periodic_dn``           phi = a dn(b x, k)                   on the 2*pi torus, r = 1
* ``periodic_dn_quotient``  phi = a dn / sqrt(1 - alpha sn^2)    on the 2*pi torus, r = 2

Substituting the solitary ansatz gives a^(2r) = (r+1)*omega together
with a cubic for the inverse width,

    A(r)*a^2/r^2 * b^3 + b^2 - omega*r^2 = 0,

whose unique positive root exists for every omega > 0; the family is
nevertheless restricted to the regime where the cubic's discriminant is
negative (a single real root), which is exactly where the closed-form
amplitude/width expressions are real.  That regime boundary is

    omega_thr(r) = [4 r^2 / (27 A(r)^2 (r+1)^(2/r))]^(r/(r+2)).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad

from . import elliptic as el
from .errors import DomainError, ExistenceError, UsageError
from .kernel import Grid, find_root_bracketed, line_grid, quadrature, torus_grid

SOLITARY = "solitary"
PERIODIC_DN = "periodic_dn"
PERIODIC_DNQ = "periodic_dn_quotient"

FAMILIES = (SOLITARY, PERIODIC_DN, PERIODIC_DNQ)

DEFAULT_N_LINE = 1024
DEFAULT_N_TORUS = 512


@dataclass(frozen=True)
class WaveParams:
    """One member of a standing-wave family.

    ``c`` is the Kirchhoff constant 1 + int phi'^2 of the wave itself.
    ``k``/``alpha`` are populated for the periodic families only.
    """

    family: str
    r: int
    omega: float
    a: float
    b: float
    c: float
    k: Optional[float] = None
    alpha: Optional[float] = None


@dataclass(frozen=True, eq=False)
class Profile:
    """Closed-form wave sampled on a grid, with analytic derivatives."""

    params: WaveParams
    grid: Grid
    phi: np.ndarray
    dphi: np.ndarray
    d2phi: np.ndarray


# ----------------------------------------------------------------------
# shape constants of the sech^(1/r) ansatz
# ----------------------------------------------------------------------

@lru_cache(maxsize=None)
def shape_constants(r: int) -> tuple[float, float]:
    """(A, M) with A = int sech^(2/r) tanh^2 dx and M = int sech^(2/r) dx."""
    if r < 1:
        raise DomainError("nonlinearity exponent r must be >= 1")
    p = 2.0 / r

    def sech_pow(x: float) -> float:
        # overflow-safe sech(x)^p for the infinite-interval quadrature
        e = math.exp(-abs(x))
        return (2 * e / (1 + e * e)) ** p

    A = 2 * quad(lambda x: sech_pow(x) * math.tanh(x) ** 2, 0, np.inf,
                 epsabs=1e-13, epsrel=1e-13, limit=200)[0]
    M = 2 * quad(sech_pow, 0, np.inf, epsabs=1e-13, epsrel=1e-13, limit=200)[0]
    return A, M


@lru_cache(maxsize=None)
def solitary_threshold(r: int) -> float:
    """Lower frequency bound of the solitary family (see module docstring)."""
    A, _ = shape_constants(r)
    return (4 * r * r / (27 * A * A * (r + 1) ** (2.0 / r))) ** (r / (r + 2.0))


# ----------------------------------------------------------------------
# solitary waves
# ----------------------------------------------------------------------

def _gensolit_a(r: int, omega: float, A: float, b: float) -> float:
    """Amplitude in terms of the width candidate b."""
    disc = A * b * (r * r * omega - b * b)
    if disc <= 0:
        raise DomainError("width candidate outside the admissible range")
    return math.sqrt(disc) * r / (A * b * b)


def _gensolit_residual(r: int, omega: float, A: float, b: float) -> float:
    """Width equation: vanishes exactly on the solitary branch."""
    root = math.sqrt(A * b * (r * r * omega - b * b))
    a = root * r / (A * b * b)
    return (-(a ** (2 * r + 1)) * r ** 4
            + (1 + r) * root * r * (r * r + (r * r * omega - b * b) * r * r / (b * b)) / A)


def _solve_solitary_r1(omega: float) -> tuple[float, float]:
    """Closed-form (a, b) for r = 1."""
    inner = (12 * omega ** 3 - 1) / omega
    D = 24 * omega ** 3 - 1 + 4 * math.sqrt(3) * math.sqrt(inner) * omega ** 2
    cbrt = D ** (1.0 / 3)
    b = (cbrt + 1.0 / cbrt - 1.0) / (4 * omega)
    a = math.sqrt(6 * b * (omega - b * b)) / (2 * b * b)
    return a, b


def solve_solitary(r: int, omega: float, validate: bool = True) -> WaveParams:
    """Solitary-wave parameters at frequency omega.

    Raises ExistenceError below the family threshold.  The returned
    parameters are cross-validated against the stationary equation on a
    default grid unless ``validate`` is disabled.
    """
    if r < 1:
        raise DomainError("nonlinearity exponent r must be >= 1")
    thr = solitary_threshold(r)
    if omega <= thr:
        raise ExistenceError(
            f"solitary family with r={r} requires omega > {thr:.6f}, got {omega}")
    A, _ = shape_constants(r)
    if r == 1:
        a, b = _solve_solitary_r1(omega)
    else:
        bmax = r * math.sqrt(omega)
        lo, hi = 1e-6 * bmax, (1 - 1e-9) * bmax
        # single sign change on (0, bmax); scan picks the subinterval,
        # keeping the branch that continues from b -> 0
        bs = np.linspace(lo, hi, 129)
        vals = [_gensolit_residual(r, omega, A, float(x)) for x in bs]
        bracket = None
        for i in range(len(bs) - 1):
            if vals[i] == 0.0:
                bracket = (bs[i], bs[i])
                break
            if vals[i] * vals[i + 1] < 0:
                bracket = (float(bs[i]), float(bs[i + 1]))
                break
        if bracket is None:
            raise ExistenceError(
                f"no width root in (0, {bmax:.4f}) for r={r}, omega={omega}")
        if bracket[0] == bracket[1]:
            b = bracket[0]
        else:
            b = find_root_bracketed(
                lambda x: _gensolit_residual(r, omega, A, x),
                bracket[0], bracket[1], tol=1e-14)
        a = _gensolit_a(r, omega, A, b)
    c = omega * r * r / (b * b)
    params = WaveParams(SOLITARY, r, omega, a, b, c)
    if validate:
        _validate_params(params)
    return params


# ----------------------------------------------------------------------
# periodic waves, r = 1 (dnoidal)
# ----------------------------------------------------------------------

def _dn_denominator(k: float) -> float:
    K, E = el.complete_K(k), el.complete_E(k)
    return (8 * (1 - k * k) * K ** 4 - 4 * (2 - k * k) * E * K ** 3
            + 3 * math.pi ** 3)


@lru_cache(maxsize=1)
def dn_modulus_limit() -> float:
    """Largest admissible modulus k* of the dnoidal family (~0.979653)."""
    return find_root_bracketed(_dn_denominator, 0.9, 0.9999, tol=1e-12)


def solve_periodic_r1(k: float, validate: bool = True) -> WaveParams:
    """Dnoidal parameters a(k), b(k), omega(k) on the 2*pi torus."""
    if not 0 < k < 1:
        raise DomainError(f"modulus must lie in (0, 1), got {k}")
    den = _dn_denominator(k)
    if den <= 0:
        raise DomainError(
            f"modulus {k} beyond the dnoidal limit k* ~ {dn_modulus_limit():.6f}")
    K = el.complete_K(k)
    a = math.sqrt(6 * math.pi) * K / math.sqrt(den)
    b = K / math.pi
    omega = 3 * (2 - k * k) * math.pi * K * K / den
    c = 3 * math.pi ** 3 / den
    params = WaveParams(PERIODIC_DN, 1, omega, a, b, c, k=k)
    if validate:
        _validate_params(params)
    return params


# ----------------------------------------------------------------------
# periodic waves, r = 2 (dn quotient)
# ----------------------------------------------------------------------

def dnq_alpha(k: float) -> float:
    """Characteristic alpha(k) < 0 of the quotient ansatz."""
    return -k * k + 1 - math.sqrt(k ** 4 - k * k + 1)


def dnq_omega_coefficient(k: float) -> float:
    """kappa(k) with omega = kappa * a^4 on the quotient branch."""
    alpha = dnq_alpha(k)
    return (k * k * (alpha * k * k - k * k - alpha)
            / (alpha * alpha * (alpha - 2)))


def solve_periodic_r2(k: float, n_quad: int = DEFAULT_N_TORUS,
                      validate: bool = True) -> WaveParams:
    """Quotient-family parameters at modulus k.

    b and alpha are closed forms; the amplitude solves the scalar
    consistency condition <residual(a), phi_a> = 0 where the residual is
    the stationary equation with omega = kappa * a^4 and the Kirchhoff
    constant recomputed from the candidate profile.
    """
    if not 0 < k < 1:
        raise DomainError(f"modulus must lie in (0, 1), got {k}")
    alpha = dnq_alpha(k)
    kappa = dnq_omega_coefficient(k)
    b = el.complete_K(k) / math.pi
    grid = torus_grid(n_quad)
    sn, cn, dn = el.jacobi(b * grid.nodes, k)
    g = 1 - alpha * sn ** 2

    def fields(a: float):
        phi = a * dn / np.sqrt(g)
        dphi = a * b * (alpha - k * k) * sn * cn * g ** -1.5
        d2phi = (a * b * b * (alpha - k * k) * dn * g ** -2.5
                 * ((cn ** 2 - sn ** 2) * g + 3 * alpha * sn ** 2 * cn ** 2))
        return phi, dphi, d2phi

    def projected_residual(a: float) -> float:
        phi, dphi, d2phi = fields(a)
        c = 1 + quadrature(grid, dphi ** 2)
        omega = kappa * a ** 4
        resid = -c * d2phi + omega * phi - phi ** 5
        return quadrature(grid, resid * phi)

    lo, hi = 0.05, 10.0
    aa = np.linspace(lo, hi, 200)
    vals = [projected_residual(float(x)) for x in aa]
    bracket = None
    for i in range(len(aa) - 1):
        if vals[i] * vals[i + 1] < 0:
            bracket = (float(aa[i]), float(aa[i + 1]))
            break
    if bracket is None:
        raise ExistenceError(
            f"no amplitude root in ({lo}, {hi}) for the quotient family at k={k}")
    a = find_root_bracketed(projected_residual, bracket[0], bracket[1], tol=1e-14)
    _, dphi, _ = fields(a)
    c = 1 + quadrature(grid, dphi ** 2)
    omega = kappa * a ** 4
    params = WaveParams(PERIODIC_DNQ, 2, omega, a, b, c, k=k, alpha=alpha)
    if validate:
        _validate_params(params)
    return params


def solve_family(family: str, r: int, at: float, validate: bool = True) -> WaveParams:
    """Family dispatch with the family/exponent pairing enforced."""
    if family == SOLITARY:
        return solve_solitary(r, at, validate)
    if family == PERIODIC_DN:
        if r != 1:
            raise UsageError("the dnoidal family has r = 1")
        return solve_periodic_r1(at, validate)
    if family == PERIODIC_DNQ:
        if r != 2:
            raise UsageError("the dn-quotient family has r = 2")
        return solve_periodic_r2(at, validate=validate)
    raise UsageError(f"unknown family {family!r}")


# ----------------------------------------------------------------------
# profiles
# ----------------------------------------------------------------------

def closed_form_evaluators(params: WaveParams):
    """(phi, dphi, d2phi) callables accepting scalars or arrays."""
    a, b, r = params.a, params.b, params.r
    if params.family == SOLITARY:
        inv_r = 1.0 / r

        def phi(x):
            return a * np.cosh(b * np.asarray(x)) ** -inv_r

        def dphi(x):
            y = b * np.asarray(x)
            return -(a * b / r) * np.cosh(y) ** -inv_r * np.tanh(y)

        def d2phi(x):
            y = b * np.asarray(x)
            s = 1.0 / np.cosh(y)
            t = np.tanh(y)
            return (a * b * b / r) * s ** inv_r * (t * t / r - s * s)

    elif params.family == PERIODIC_DN:
        k = params.k

        def phi(x):
            _, _, dn = el.jacobi(b * np.asarray(x), k)
            return a * dn

        def dphi(x):
            sn, cn, _ = el.jacobi(b * np.asarray(x), k)
            return -a * b * k * k * sn * cn

        def d2phi(x):
            _, _, dn = el.jacobi(b * np.asarray(x), k)
            return a * b * b * ((2 - k * k) * dn - 2 * dn ** 3)

    elif params.family == PERIODIC_DNQ:
        k, alpha = params.k, params.alpha

        def phi(x):
            sn, _, dn = el.jacobi(b * np.asarray(x), k)
            return a * dn / np.sqrt(1 - alpha * sn ** 2)

        def dphi(x):
            sn, cn, _ = el.jacobi(b * np.asarray(x), k)
            g = 1 - alpha * sn ** 2
            return a * b * (alpha - k * k) * sn * cn * g ** -1.5

        def d2phi(x):
            sn, cn, dn = el.jacobi(b * np.asarray(x), k)
            g = 1 - alpha * sn ** 2
            return (a * b * b * (alpha - k * k) * dn * g ** -2.5
                    * ((cn ** 2 - sn ** 2) * g + 3 * alpha * sn ** 2 * cn ** 2))

    else:
        raise UsageError(f"unknown family {params.family!r}")
    return phi, dphi, d2phi


def tail_half_length(params: WaveParams) -> float:
    """Truncation L with phi(L)/phi(0) < 1e-12 for the solitary tail."""
    if params.family != SOLITARY:
        raise UsageError("tail rule applies to the solitary family")
    return params.r * math.log(2 * params.a * 1e12) / params.b


def default_grid(params: WaveParams, n: Optional[int] = None) -> Grid:
    if params.family == SOLITARY:
        return line_grid(tail_half_length(params), n or DEFAULT_N_LINE)
    return torus_grid(n or DEFAULT_N_TORUS)


def sample_profile(params: WaveParams, grid: Grid) -> Profile:
    """Sample the closed form and its analytic derivatives on a grid."""
    expected = "line" if params.family == SOLITARY else "torus"
    if grid.topology != expected:
        raise UsageError(
            f"{params.family} profiles live on a {expected} grid, got {grid.topology}")
    phi_f, dphi_f, d2phi_f = closed_form_evaluators(params)
    return Profile(params, grid,
                   np.asarray(phi_f(grid.nodes), dtype=float),
                   np.asarray(dphi_f(grid.nodes), dtype=float),
                   np.asarray(d2phi_f(grid.nodes), dtype=float))


def ode_residual(p: Profile) -> float:
    """Sup-norm of the stationary equation on the profile's grid.

    The Kirchhoff constant is recomputed by quadrature from the sampled
    derivative, so this detects inconsistent (a, b, omega, c) sets as
    well as wrong profiles.
    """
    c = 1 + quadrature(p.grid, p.dphi ** 2)
    r = p.params.r
    resid = -c * p.d2phi + p.params.omega * p.phi - p.phi ** (2 * r + 1)
    return float(np.max(np.abs(resid)))


def _validate_params(params: WaveParams, rel_c: float = 1e-8,
                     residual_bound: float = 1e-7) -> None:
    profile = sample_profile(params, default_grid(params))
    c_quad = 1 + quadrature(profile.grid, profile.dphi ** 2)
    if abs(c_quad - params.c) > rel_c * params.c:
        raise DomainError(
            f"Kirchhoff constant mismatch: stored {params.c!r}, "
            f"from profile {c_quad!r}")
    resid = ode_residual(profile)
    if resid > residual_bound:
        raise DomainError(
            f"stationary-equation residual {resid:.3e} exceeds {residual_bound}")


# ----------------------------------------------------------------------
# export
# ----------------------------------------------------------------------

def write_profile_csv(p: Profile, path) -> None:
    """CSV with columns x, phi, dphi, d2phi under a JSON header line."""
    header = {
        "family": p.params.family, "r": p.params.r, "omega": p.params.omega,
        "a": p.params.a, "b": p.params.b, "c": p.params.c,
        "k": p.params.k, "alpha": p.params.alpha,
        "topology": p.grid.topology, "n": p.grid.n,
    }
    with open(path, "w") as fh:
        fh.write("# " + json.dumps(header) + "\n")
        fh.write("x,phi,dphi,d2phi\n")
        for row in zip(p.grid.nodes, p.phi, p.dphi, p.d2phi):
            fh.write("%.17g,%.17g,%.17g,%.17g\n" % row)


def read_profile_header(path) -> dict:
    with open(path) as fh:
        first = fh.readline()
    if not first.startswith("# "):
        raise UsageError("profile CSV lacks the JSON header line")
    return json.loads(first[2:])
