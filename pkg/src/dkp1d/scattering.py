"""Closed-form scattering solver for the spin-one DKP equation with a
Woods-Saxon barrier.

The first spinor component of the reduced problem satisfies a Riemann
equation on either side of the barrier center, so the scattering state is
assembled from Gauss hypergeometric functions: a pair of solutions growing
from the left edge and a purely transmitted solution on the right.  Matching
value and slope at x = 0 fixes the superposition, and the reflection and
transmission amplitudes follow from the x -> -inf connection formulas of the
left solutions.

Energies are in units of the mass, lengths in units of 1/m (natural units),
and the propagating region is |E| > 1.
"""

from __future__ import annotations

import dataclasses
import enum

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import (
    DegenerateParameterError,
    DomainError,
    PoleError,
    SingularMatchingError,
    UnitarityViolationError,
)
from .potentials import PotentialSpec, Shape, evaluate
from .specfun import complex_power, gamma_c, hyp2f1, hyp2f1_regularized, rgamma_c

# Elements closer than this to the band edge |E - V0| = 1 are evaluated by
# averaging the two energies E +/- BRANCH_SHIFT, where the solver parameters
# are regular again.
BRANCH_TOL = 1e-8
BRANCH_SHIFT = 1e-9

# The line E = V0 is a second isolated degeneracy: the interior parameter
# a*mu reaches 1 there, quadratically in E - V0, and drags a lower
# hypergeometric parameter onto an integer.  Soft walls lose accuracy over
# a wide neighbourhood of the line while stiff walls stay clean almost up
# to it, so the guard radius shrinks like 1/a.  Inside the radius a raw
# point is kept only if its own unitarity deficit certifies it (the
# deficit tracks the actual error within a small factor); otherwise the
# point is rebuilt by extrapolation from certified nodes outside the line.
_CENTER_BASE = 1.5e-2
_DIRECT_TOL = 2e-9
_NODE_TOL = 5e-10
_STENCIL_MAX = 0.35


def _center_radius(a: float) -> float:
    """Half-width in E around E = V0 where direct evaluation degrades."""
    return _CENTER_BASE / min(max(a, 0.5), 15.0)

# Scale-relative threshold below which the 2x2 matching system is considered
# singular.
MATCHING_TOL = 1e-14

# Acceptance threshold on |R| for a transmission resonance.
RESONANCE_TOL = 1e-10

_UNITARITY_TOL = 1e-8


@dataclasses.dataclass(frozen=True)
class ScatteringParams:
    """Derived solver parameters at energy E (all complex, principal roots).

    k is the asymptotic wavenumber, nu = i k / a, mu = sqrt(1 - (E-V0)^2)/a
    controls the behaviour under the barrier top, and lam1 = -1/2 + lam with
    lam = sqrt(a^2 - 4 V0^2)/(2 a) is the exponent pair of the regular
    singular point between the edges.
    """

    E: float
    k: float
    nu: complex
    mu: complex
    lam: complex
    lam1: complex


@dataclasses.dataclass(frozen=True)
class HFunctionTable:
    """The thirteen hypergeometric values used by the matching block.

    h1..h4 are the left pair and its parameter-shifted derivatives at the
    barrier edge w0 = -exp(-a L); h5..h7 and h9 are the transmitted solution
    and shifts at t = 1/(1 + exp(-a L)); h8 and h10..h13 are regularized and
    shifted variants entering the amplitude quotients.
    """

    h1: complex
    h2: complex
    h3: complex
    h4: complex
    h5: complex
    h6: complex
    h7: complex
    h8: complex
    h9: complex
    h10: complex
    h11: complex
    h12: complex
    h13: complex


@dataclasses.dataclass(frozen=True)
class MatchingCoefficients:
    """Superposition weights of the matched scattering state.

    d1 is the (unit) amplitude of the transmitted solution, D1 and D2 weight
    the two left solutions, and A, B are the incident and reflected plane
    wave amplitudes at x -> -inf.
    """

    d1: complex
    D1: complex
    D2: complex
    A: complex
    B: complex


@dataclasses.dataclass(frozen=True)
class TransmissionPoint:
    E: float
    T: float
    R: float


class SpinorRegion(str, enum.Enum):
    IncidentLeft = "IncidentLeft"
    ReflectedLeft = "ReflectedLeft"
    TransmittedRight = "TransmittedRight"


@dataclasses.dataclass(frozen=True)
class SpinorField:
    """Values of the three non-trivial spinor components at the points x."""

    x: np.ndarray
    phi1: np.ndarray
    phi2: np.ndarray
    phi3: np.ndarray


def scattering_params(E, spec: PotentialSpec):
    """Derived parameters (k, nu, mu, lam, lam1) for scattering at energy E.

    Accepts a scalar or an array of energies above the continuum edge.
    """
    E_arr = np.asarray(E, dtype=float)
    if np.any(E_arr <= 1.0):
        raise DomainError("scattering energies must satisfy E > 1")
    a, V0 = spec.a, spec.V0
    k = np.sqrt(E_arr * E_arr - 1.0)
    nu = 1j * k / a
    mu = np.sqrt((1.0 - (E_arr - V0) ** 2).astype(complex)) / a
    lam = np.sqrt(complex(a * a - 4.0 * V0 * V0)) / (2.0 * a)
    lam1 = -0.5 + lam
    if E_arr.ndim == 0:
        return ScatteringParams(float(E_arr), float(k), complex(nu),
                                complex(mu), complex(lam), complex(lam1))
    lam_arr = np.full_like(nu, lam)
    return ScatteringParams(E_arr, k, nu, mu, lam_arr, lam_arr - 0.5)


def h_table(params: ScatteringParams, a: float, L: float) -> HFunctionTable:
    """Evaluate the thirteen matching hypergeometric values.

    Entries h8..h11 use the regularized function (entire in the third
    parameter); the rest use the ordinary Gauss series.  Any special-function
    failure is re-raised with the offending table index attached.
    """
    nu, mu, lam, lam1 = params.nu, params.mu, params.lam, params.lam1
    u = np.exp(-a * L)
    w0 = -u
    t = 1.0 / (1.0 + u)
    # exact complement 1 - t; the subtraction would lose most digits once
    # a*L exceeds ~20 and t rounds into the last ulps below 1
    ct = u / (1.0 + u)
    defs = {
        1: (hyp2f1, -lam1 + mu - nu, -lam1 + mu + nu, 1 + 2 * mu, w0, None),
        2: (hyp2f1, 1 - lam1 + mu - nu, 1 - lam1 + mu + nu, 2 * (1 + mu), w0, None),
        3: (hyp2f1, -lam1 - mu - nu, -lam1 - mu + nu, 1 - 2 * mu, w0, None),
        4: (hyp2f1, 1 - lam1 - mu - nu, 1 - lam1 - mu + nu, 2 * (1 - mu), w0, None),
        5: (hyp2f1, 0.5 - lam - mu - nu, 0.5 + lam - mu - nu, 1 - 2 * nu, t, ct),
        6: (hyp2f1, 1.5 - lam - mu - nu, 1.5 + lam - mu - nu, 2 * (1 - nu), t, ct),
        7: (hyp2f1_regularized, 1.5 - lam - mu - nu, 0.5 + lam - mu - nu,
            1 - 2 * nu, t, ct),
        8: (hyp2f1_regularized, lam1 - mu - nu, -lam1 - mu + nu, 1 - 2 * mu,
            w0, None),
        9: (hyp2f1_regularized, 0.5 - lam - mu - nu, 0.5 + lam - mu - nu,
            1 - 2 * nu, t, ct),
        10: (hyp2f1_regularized, -lam1 - mu - nu, -lam1 - mu + nu, 1 - 2 * mu,
             w0, None),
        11: (hyp2f1_regularized, 1 - lam1 - mu - nu, -lam1 - mu + nu,
             1 - 2 * mu, w0, None),
        12: (hyp2f1, 1 - lam1 - mu - nu, -lam1 - mu + nu, 1 - 2 * mu, w0, None),
        13: (hyp2f1, 1 - lam1 + mu - nu, -lam1 + mu + nu, 1 + 2 * mu, w0, None),
    }
    vals = {}
    for idx, (fn, fa, fb, fc, fz, fomz) in defs.items():
        try:
            vals[idx] = fn(fa, fb, fc, fz, one_minus_z=fomz)
        except (DomainError, PoleError, DegenerateParameterError) as exc:
            raise type(exc)(f"h{idx}: {exc}") from exc
    return HFunctionTable(**{f"h{i}": vals[i] for i in range(1, 14)})


def _left_value_slope(params: ScatteringParams, a: float, L: float,
                      table: HFunctionTable):
    """Values and x-derivatives of the two left solutions at x = 0.

    The left solutions are w^s (1-w)^(-lam1) F(-lam1+s-nu, -lam1+s+nu;
    1+2s; w) with s = +/- mu and w = -exp(-a (x+L)).
    """
    nu, mu, lam1 = params.nu, params.mu, params.lam1
    w0 = -np.exp(-a * L)
    out = []
    for s, h, hp in ((mu, table.h1, table.h2), (-mu, table.h3, table.h4)):
        fa, fb, fc = -lam1 + s - nu, -lam1 + s + nu, 1 + 2 * s
        pref = complex_power(w0, s) * complex_power(1.0 - w0, -lam1)
        val = pref * h
        dF = (fa * fb / fc) * hp
        slope = (-a * w0) * pref * (
            (s / w0) * h + (lam1 / (1.0 - w0)) * h + dF)
        out.append((val, slope))
    return out


def _right_value_slope(params: ScatteringParams, a: float, L: float,
                       table: HFunctionTable):
    """Value and x-derivative of the transmitted solution at x = 0.

    The transmitted solution is z^(-nu) (1-z)^(-mu) F(1/2-lam-mu-nu,
    1/2+lam-mu-nu; 1-2nu; z) with z = 1/(1 + exp(a (x-L))).
    """
    nu, mu, lam = params.nu, params.mu, params.lam
    u = np.exp(-a * L)
    t = 1.0 / (1.0 + u)
    ct = u / (1.0 + u)  # exact 1 - t
    fa, fb, fc = 0.5 - lam - mu - nu, 0.5 + lam - mu - nu, 1 - 2 * nu
    pref = complex_power(t, -nu) * complex_power(ct, -mu)
    val = pref * table.h5
    dF = (fa * fb / fc) * table.h6
    slope = (-a * t * ct) * pref * (
        (-nu / t) * table.h5 + (mu / ct) * table.h5 + dF)
    return val, slope


def matching_coefficients(params: ScatteringParams, table: HFunctionTable,
                          a: float, L: float) -> MatchingCoefficients:
    """Solve the continuity conditions at x = 0 and form the asymptotic
    incident and reflected amplitudes.

    The transmitted amplitude is normalized to d1 = 1; D1 and D2 follow from
    a 2x2 linear solve, and A, B from the w -> 0^- connection formula of the
    left solutions.  Raises SingularMatchingError when the system degenerates
    (typically at an isolated parameter coincidence).
    """
    (vp, sp), (vm, sm) = _left_value_slope(params, a, L, table)
    rv, rs = _right_value_slope(params, a, L, table)
    det = vp * sm - vm * sp
    scale = max(abs(vp) * abs(sm), abs(vm) * abs(sp), 1.0)
    if abs(det) < MATCHING_TOL * scale:
        raise SingularMatchingError(
            f"left-solution Wronskian at x=0 is {det!r} (scale {scale:.3e})")
    d1 = 1.0 + 0.0j
    D1 = (rv * sm - vm * rs) / det
    D2 = (vp * rs - rv * sp) / det

    nu, mu, lam1 = params.nu, params.mu, params.lam1
    gm2nu = gamma_c(-2 * nu)
    gp2nu = gamma_c(2 * nu)
    A = (D1 * complex_power(-1.0, mu) * gamma_c(1 + 2 * mu) * gm2nu
         * rgamma_c(-lam1 + mu - nu) * rgamma_c(1 + lam1 + mu - nu)
         + D2 * complex_power(-1.0, -mu) * gamma_c(1 - 2 * mu) * gm2nu
         * rgamma_c(-lam1 - mu - nu) * rgamma_c(1 + lam1 - mu - nu))
    B = (D1 * complex_power(-1.0, mu) * gamma_c(1 + 2 * mu) * gp2nu
         * rgamma_c(-lam1 + mu + nu) * rgamma_c(1 + lam1 + mu + nu)
         + D2 * complex_power(-1.0, -mu) * gamma_c(1 - 2 * mu) * gp2nu
         * rgamma_c(-lam1 - mu + nu) * rgamma_c(1 + lam1 - mu + nu))
    return MatchingCoefficients(d1=d1, D1=D1, D2=D2, A=complex(A), B=complex(B))


def _transmission_once(E: float, spec: PotentialSpec) -> TransmissionPoint:
    p = scattering_params(E, spec)
    table = h_table(p, spec.a, spec.L)
    m = matching_coefficients(p, table, spec.a, spec.L)
    T = 1.0 / abs(m.A) ** 2
    R = abs(m.B / m.A) ** 2
    return TransmissionPoint(E=float(E), T=float(T), R=float(R))


def _certified_node(E: float, spec: PotentialSpec):
    """Raw point at E, or None unless it certifies itself to _NODE_TOL."""
    try:
        pt = _transmission_once(E, spec)
    except (DegenerateParameterError, SingularMatchingError, PoleError):
        return None
    if abs(pt.T + pt.R - 1.0) > _NODE_TOL:
        return None
    return pt


def _center_rebuild(E: float, spec: PotentialSpec) -> TransmissionPoint:
    """Rebuild (T, R) at E from certified nodes clear of the E = V0 line.

    A symmetric four-node stencil cancels interpolation error through
    cubic order; when the lower nodes would leave the continuum E > 1 a
    one-sided quadratic above E is used instead.  The spacing widens
    geometrically until every node passes its own unitarity certificate,
    so the severity of the degeneracy never needs to be known in advance.
    The combined point is renormalized to exact unitarity.
    """
    s = max(2.0 * abs(E - spec.V0), _center_radius(spec.a))
    while s <= _STENCIL_MAX:
        if E - 2.0 * s > 1.0 + 1e-9:
            offs = (-2.0, -1.0, 1.0, 2.0)
            wts = (-1.0 / 6.0, 2.0 / 3.0, 2.0 / 3.0, -1.0 / 6.0)
        else:
            offs = (1.0, 2.0, 3.0)
            wts = (3.0, -3.0, 1.0)
        nodes = [_certified_node(E + j * s, spec) for j in offs]
        if all(n is not None for n in nodes):
            T = sum(w * n.T for w, n in zip(wts, nodes))
            R = sum(w * n.R for w, n in zip(wts, nodes))
            total = T + R
            if abs(total - 1.0) <= _UNITARITY_TOL:
                T = min(max(T / total, 0.0), 1.0)
                return TransmissionPoint(E=E, T=T, R=1.0 - T)
        s *= 1.6
    raise UnitarityViolationError(
        f"no unitary evaluation found near E = {E!r}")


def transmission(E: float, spec: PotentialSpec) -> TransmissionPoint:
    """Transmission and reflection probabilities at energy E > 1.

    Within BRANCH_TOL of the band edges |E - V0| = 1 (where the two left
    solutions coincide) the point is evaluated as the average over
    E +/- BRANCH_SHIFT.  Near the degenerate line E = V0 a raw point is
    kept only when its unitarity deficit certifies it; otherwise the
    point is rebuilt from certified nodes around the line.
    """
    if spec.shape not in (Shape.WoodsSaxonBarrier,):
        raise DomainError(
            f"closed-form transmission requires a Woods-Saxon barrier, got {spec.shape}")
    E = float(E)
    if E <= 1.0:
        raise DomainError("transmission requires E > 1")
    near_edge = abs(1.0 - (E - spec.V0) ** 2) < BRANCH_TOL
    if not near_edge:
        accept = (_DIRECT_TOL if abs(E - spec.V0) < _center_radius(spec.a)
                  else _UNITARITY_TOL)
        try:
            pt = _transmission_once(E, spec)
            if abs(pt.T + pt.R - 1.0) <= accept:
                return pt
        except (DegenerateParameterError, SingularMatchingError, PoleError):
            pass
        return _center_rebuild(E, spec)
    # on a band edge: average across it, widening the shift until the
    # solver parameters are regular again
    shift = BRANCH_SHIFT
    while True:
        try:
            lo = _transmission_once(E - shift, spec)
            hi = _transmission_once(E + shift, spec)
            break
        except (DegenerateParameterError, SingularMatchingError, PoleError):
            shift *= 10.0
            if shift > 1e-4:
                raise
    pt = TransmissionPoint(E=E, T=0.5 * (lo.T + hi.T), R=0.5 * (lo.R + hi.R))
    if abs(pt.T + pt.R - 1.0) > _UNITARITY_TOL:
        raise UnitarityViolationError(
            f"T + R = {pt.T + pt.R!r} at E = {E!r}")
    return pt


def transmission_grid(energies, spec: PotentialSpec):
    """Vectorized T and R over an array of energies.

    Runs the whole pipeline on arrays; elements that are non-finite or too
    close to a band edge are redone one by one through the guarded scalar
    path.
    """
    all_E = np.atleast_1d(np.asarray(energies, dtype=float))
    T_all = np.empty_like(all_E)
    R_all = np.empty_like(all_E)
    edge = np.abs(1.0 - (all_E - spec.V0) ** 2) < BRANCH_TOL
    energies = all_E[~edge]
    T = np.empty_like(energies)
    R = np.empty_like(energies)
    retry = np.zeros(energies.shape, dtype=bool)
    try:
        p = scattering_params(energies, spec)
        table = h_table(p, spec.a, spec.L)
        (vp, sp), (vm, sm) = _left_value_slope(p, spec.a, spec.L, table)
        rv, rs = _right_value_slope(p, spec.a, spec.L, table)
        det = vp * sm - vm * sp
        bad_det = np.abs(det) < MATCHING_TOL * np.maximum(
            np.abs(vp) * np.abs(sm), np.maximum(np.abs(vm) * np.abs(sp), 1.0))
        det = np.where(bad_det, 1.0, det)
        D1 = (rv * sm - vm * rs) / det
        D2 = (vp * rs - rv * sp) / det
        nu, mu, lam1 = p.nu, p.mu, p.lam1
        gm2nu = gamma_c(-2 * nu)
        gp2nu = gamma_c(2 * nu)
        cpp = complex_power(-1.0, mu)
        cpm = complex_power(-1.0, -mu)
        g1p = gamma_c(1 + 2 * mu)
        g1m = gamma_c(1 - 2 * mu)
        A = (D1 * cpp * g1p * gm2nu * rgamma_c(-lam1 + mu - nu)
             * rgamma_c(1 + lam1 + mu - nu)
             + D2 * cpm * g1m * gm2nu * rgamma_c(-lam1 - mu - nu)
             * rgamma_c(1 + lam1 - mu - nu))
        B = (D1 * cpp * g1p * gp2nu * rgamma_c(-lam1 + mu + nu)
             * rgamma_c(1 + lam1 + mu + nu)
             + D2 * cpm * g1m * gp2nu * rgamma_c(-lam1 - mu + nu)
             * rgamma_c(1 + lam1 - mu + nu))
        with np.errstate(divide="ignore", invalid="ignore"):
            T = 1.0 / np.abs(A) ** 2
            R = np.abs(B / A) ** 2
        strict = np.abs(energies - spec.V0) < _center_radius(spec.a)
        retry = (bad_det | ~np.isfinite(T) | ~np.isfinite(R)
                 | (np.abs(T + R - 1.0)
                    > np.where(strict, _DIRECT_TOL, _UNITARITY_TOL)))
    except (DegenerateParameterError, SingularMatchingError, PoleError,
            DomainError):
        retry[:] = True
    for i in np.nonzero(retry)[0]:
        pt = transmission(float(energies[i]), spec)
        T[i] = pt.T
        R[i] = pt.R
    T_all[~edge] = T
    R_all[~edge] = R
    for i in np.nonzero(edge)[0]:
        pt = transmission(float(all_E[i]), spec)
        T_all[i] = pt.T
        R_all[i] = pt.R
    return T_all, R_all


def find_resonances(spec: PotentialSpec, E_min: float, E_max: float,
                    grid: int = 2000):
    """Energies in [E_min, E_max] where the barrier is fully transparent.

    Scans R on a uniform grid, brackets each local minimum and polishes it by
    bounded minimization; minima with |R| < RESONANCE_TOL are returned as a
    sorted list.
    """
    Es = np.linspace(E_min, E_max, grid)
    _, R = transmission_grid(Es, spec)
    idx = np.nonzero((R[1:-1] <= R[:-2]) & (R[1:-1] <= R[2:]))[0] + 1
    found = []
    for i in idx:
        lo, hi = Es[i - 1], Es[i + 1]
        res = minimize_scalar(lambda e: transmission(e, spec).R,
                              bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-12})
        if res.fun < RESONANCE_TOL:
            found.append(float(res.x))
    found.sort()
    out = []
    for e in found:
        if not out or abs(e - out[-1]) > 1e-6:
            out.append(e)
    return out


def square_barrier_transmission(E: float, L: float, V0: float) -> TransmissionPoint:
    """Reference transmission through the square barrier of height V0 on
    [-L, L].

    The standard result T = [1 + (k^2-q^2)^2 sin^2(2qL) / (4 k^2 q^2)]^(-1)
    is evaluated with complex q = sqrt((E-V0)^2 - 1) so that the tunnelling
    regime comes out automatically; the q -> 0 limit is removable and handled
    by the sinc form.
    """
    E = float(E)
    if E <= 1.0:
        raise DomainError("transmission requires E > 1")
    k2 = E * E - 1.0
    q2 = complex((E - V0) ** 2 - 1.0)
    q = np.sqrt(q2)
    width = 2.0 * L
    # sin(q w)/q as w * sinc(q w / pi), finite at q = 0
    s = width * np.sinc(q * width / np.pi)
    factor = ((k2 - q2) ** 2 / (4.0 * k2)) * s * s
    f = float(np.real(factor))
    T = 1.0 / (1.0 + f)
    R = f / (1.0 + f)
    return TransmissionPoint(E=E, T=T, R=R)


def _left_field(x, params: ScatteringParams, spec: PotentialSpec,
                coeffs: MatchingCoefficients):
    """phi1 and phi1' of the full matched solution for x <= 0."""
    a, L = spec.a, spec.L
    nu, mu, lam1 = params.nu, params.mu, params.lam1
    w = -np.exp(-a * (np.asarray(x, dtype=float) + L))
    phi = np.zeros(w.shape, dtype=complex)
    dphi = np.zeros(w.shape, dtype=complex)
    for D, s in ((coeffs.D1, mu), (coeffs.D2, -mu)):
        fa, fb, fc = -lam1 + s - nu, -lam1 + s + nu, 1 + 2 * s
        F = hyp2f1(fa, fb, fc, w)
        dF = (fa * fb / fc) * hyp2f1(fa + 1, fb + 1, fc + 1, w)
        pref = complex_power(w, s) * complex_power(1.0 - w, -lam1)
        phi += D * pref * F
        dphi += D * (-a * w) * pref * (
            (s / w) * F + (lam1 / (1.0 - w)) * F + dF)
    return phi, dphi


def _right_field(x, params: ScatteringParams, spec: PotentialSpec,
                 coeffs: MatchingCoefficients):
    """phi1 and phi1' of the transmitted solution for x >= 0."""
    a, L = spec.a, spec.L
    nu, mu, lam = params.nu, params.mu, params.lam
    with np.errstate(over="ignore", invalid="ignore"):
        s = np.exp(a * (np.asarray(x, dtype=float) - L))
        z = 1.0 / (1.0 + s)
        cz = np.where(np.isfinite(s), s / (1.0 + s), 1.0)  # exact 1 - z
    fa, fb, fc = 0.5 - lam - mu - nu, 0.5 + lam - mu - nu, 1 - 2 * nu
    F = hyp2f1(fa, fb, fc, z, one_minus_z=cz)
    dF = (fa * fb / fc) * hyp2f1(fa + 1, fb + 1, fc + 1, z, one_minus_z=cz)
    pref = complex_power(z, -nu) * complex_power(cz, -mu)
    phi = coeffs.d1 * pref * F
    dphi = coeffs.d1 * (-a * z * cz) * pref * (
        (-nu / z) * F + (mu / cz) * F + dF)
    return phi, dphi


def spinor_eval(region: SpinorRegion, x, coeffs: MatchingCoefficients,
                params: ScatteringParams, spec: PotentialSpec) -> SpinorField:
    """Evaluate the spinor components of one scattering channel.

    IncidentLeft is the full left-side field minus the reflected plane wave,
    ReflectedLeft is the reflected plane wave B exp(-ik(x+L)), and
    TransmittedRight is the full right-side field.  For every channel
    phi2 = -phi1' and phi3 = -i (E - V(x)) phi1.
    """
    region = SpinorRegion(region)
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    k = params.k
    if region in (SpinorRegion.IncidentLeft, SpinorRegion.ReflectedLeft):
        if np.any(x_arr > 0):
            raise DomainError("left-channel evaluation requires x <= 0")
        refl = coeffs.B * np.exp(-1j * k * (x_arr + spec.L))
        drefl = -1j * k * refl
        if region is SpinorRegion.ReflectedLeft:
            phi, dphi = refl, drefl
        else:
            full, dfull = _left_field(x_arr, params, spec, coeffs)
            phi, dphi = full - refl, dfull - drefl
    else:
        if np.any(x_arr < 0):
            raise DomainError("right-channel evaluation requires x >= 0")
        phi, dphi = _right_field(x_arr, params, spec, coeffs)
    V = np.asarray(evaluate(spec, x_arr), dtype=float)
    phi2 = -dphi
    phi3 = -1j * (params.E - V) * phi
    return SpinorField(x=x_arr, phi1=phi, phi2=phi2, phi3=phi3)


def probability_current(field: SpinorField) -> np.ndarray:
    """Conserved current j = 2 Im(phi1* phi1') of a spinor field."""
    return 2.0 * np.imag(np.conjugate(field.phi1) * (-field.phi2))
