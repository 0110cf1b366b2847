"""Bound states of the spin-one DKP equation in a Woods-Saxon well.

The symmetric (even) eigenvalues in (-1, 1) are roots of a transcendental
residual built from Gauss hypergeometric values at the well edge; the same
condition governs the scalar Klein-Gordon problem.  On top of the root
solver this module provides charge-norm evaluation, particle/antiparticle
classification, continuation of spectra in the well depth V0, and location
of the critical depth where a particle and an antiparticle level merge and
the spectrum turns complex (the spectral signature of pair creation).

A square-well reference spectrum with the standard matching condition and a
closed-form norm shares the continuation machinery.
"""

from __future__ import annotations

import dataclasses
import enum
import math
import typing
import warnings

import numpy as np
from scipy.optimize import brentq

from .errors import (
    ContinuationStallError,
    DegenerateParameterError,
    DomainError,
    NoFoldError,
    NonConvergenceError,
    PoleError,
    SlowDecayWarning,
    SpuriousPoleError,
)
from .potentials import PotentialSpec, Shape, evaluate
from .specfun import complex_power, hyp2f1

# Scan window stays this far inside the continuum edges E = +/-1.
EDGE_PAD = 1e-9

# Points for the full-window bracketing scan of the eigenvalue residual.
SCAN_POINTS = 2000

# Absolute floor under which a denominator 2F1 counts as an exact pole.
POLE_TOL = 1e-14

# A sign change is accepted as a root only if the residual at the polished
# point drops below this fraction of the bracket-end magnitudes (the residual
# scale varies over many orders for steep wells) and the denominators keep at
# least this fraction of their bracket magnitude (pole crossings fail both).
_ROOT_DROP = 1e-3
_DEN_DROP = 1e-10

# Two roots closer than this count as a merged (critical) pair.
PAIR_GAP_TOL = 1e-5

_IM_TOL = 1e-6


class StateKind(str, enum.Enum):
    Particle = "Particle"
    Antiparticle = "Antiparticle"


@dataclasses.dataclass(frozen=True)
class BoundStateParams:
    """Derived solver parameters at a trial bound energy E.

    sigma = sqrt(1-E^2)/a is the (scaled) exterior decay rate, gamma =
    sqrt(1-(E+V0)^2)/a is real or positive-imaginary depending on whether
    the state sits below or inside the shifted interior band, and lam =
    sqrt(a^2-4 V0^2)/(2 a).
    """

    E: float
    sigma: float
    gamma: complex
    lam: complex


@dataclasses.dataclass(frozen=True)
class BoundState:
    V0: float
    E: float
    N: float
    kind: StateKind


@dataclasses.dataclass(frozen=True)
class SpectrumBranch:
    a: float
    L: float
    points: list
    turning_point: typing.Optional[tuple] = None


class CriticalPoint(typing.NamedTuple):
    V_cr: float
    E_cr: float
    residual_err: float


def bound_params(E: float, spec: PotentialSpec) -> BoundStateParams:
    """Solver parameters (sigma, gamma, lam) for a Woods-Saxon well."""
    if spec.shape is not Shape.WoodsSaxonWell:
        raise DomainError(
            f"closed-form bound states require a Woods-Saxon well, got {spec.shape}")
    E = float(E)
    if not abs(E) < 1.0:
        raise DomainError("bound energies must satisfy |E| < 1")
    a, V0 = spec.a, spec.V0
    sigma = math.sqrt(1.0 - E * E) / a
    gamma = complex(np.sqrt(complex(1.0 - (E + V0) ** 2))) / a
    lam = complex(np.sqrt(complex(a * a - 4.0 * V0 * V0))) / (2.0 * a)
    return BoundStateParams(E=E, sigma=sigma, gamma=gamma, lam=lam)


def _residual_parts(E, spec: PotentialSpec):
    """Residual and its two denominator 2F1 values, vectorized over E."""
    E = np.asarray(E, dtype=float)
    a, L, V0 = spec.a, spec.L, spec.V0
    sigma = np.sqrt(1.0 - E * E) / a
    gamma = np.sqrt((1.0 - (E + V0) ** 2).astype(complex)) / a
    lam = np.sqrt(complex(a * a - 4.0 * V0 * V0)) / (2.0 * a)
    eaL = np.exp(-a * L)
    t = 1.0 / (1.0 + eaL)
    ct = eaL / (1.0 + eaL)  # exact 1 - t, immune to rounding at large a*L
    resid = (2.0 * (1.0 + eaL) * sigma).astype(complex)
    dens = []
    for g in (gamma, -gamma):
        fa = 0.5 + g - lam + sigma
        fb = 0.5 + g + lam + sigma
        fc = 1.0 + 2.0 * sigma
        den = hyp2f1(fa, fb, fc, t, one_minus_z=ct)
        num = hyp2f1(fa + 1.0, fb + 1.0, fc + 1.0, t, one_minus_z=ct)
        resid = resid + (fa * fb / fc) * (num / den)
        dens.append(np.asarray(den))
    return np.asarray(resid), dens[0], dens[1]


def _residual_grid(E, spec: PotentialSpec):
    """NaN-tolerant vectorized residual for bracketing scans."""
    E = np.asarray(E, dtype=float)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        try:
            return _residual_parts(E, spec)
        except (DegenerateParameterError, PoleError, NonConvergenceError):
            pass
        resid = np.full(E.shape, np.nan, dtype=complex)
        d1 = np.full(E.shape, np.nan, dtype=complex)
        d2 = np.full(E.shape, np.nan, dtype=complex)
        for i in np.ndindex(E.shape):
            try:
                r, a1, a2 = _residual_parts(E[i], spec)
                resid[i], d1[i], d2[i] = r, a1, a2
            except (DegenerateParameterError, PoleError, NonConvergenceError):
                pass
        return resid, d1, d2


def eigen_residual(E: float, spec: PotentialSpec) -> complex:
    """Value of the even-state eigenvalue condition at energy E.

    Roots in (-1, 1) are the symmetric bound states; the residual has poles
    (flagged by SpuriousPoleError when hit head-on) whose sign changes must
    not be mistaken for eigenvalues.
    """
    bound_params(E, spec)  # validates shape and |E| < 1
    resid, d1, d2 = _residual_parts(float(E), spec)
    if min(abs(complex(d1)), abs(complex(d2))) <= POLE_TOL:
        raise SpuriousPoleError(
            f"denominator 2F1 vanishes at E = {E!r}; residual pole, not a root")
    return complex(resid)


def _roots_in_window(spec: PotentialSpec, lo: float, hi: float,
                     n: int = SCAN_POINTS, uniform: bool = False):
    """Roots of Re(residual) in (lo, hi) by bracketing scan + brentq.

    Chebyshev nodes (clustered at the window ends, where levels hug the
    continuum edges) by default; a uniform grid on request for resolving
    nearly merged pairs at the window center.  Acceptance is scale-aware:
    the polished point must beat the bracket-end residual magnitudes by
    _ROOT_DROP, keep both denominators above _DEN_DROP of their bracket
    scale (rejecting pole crossings), and pass the imaginary-part
    physicality check.
    """
    if hi <= lo:
        return []
    if uniform:
        Es = np.linspace(lo, hi, n)
    else:
        nodes = np.cos(np.pi * np.arange(n) / (n - 1))[::-1]
        Es = 0.5 * (lo + hi) + 0.5 * (hi - lo) * nodes
    resid, d1, d2 = _residual_grid(Es, spec)
    re = resid.real
    roots = []

    def f(e):
        r, _, _ = _residual_parts(e, spec)
        return float(r.real)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for i in range(n - 1):
            a_val, b_val = re[i], re[i + 1]
            if not (np.isfinite(a_val) and np.isfinite(b_val)):
                continue
            if a_val == 0.0 or a_val * b_val >= 0.0:
                continue
            try:
                root = brentq(f, Es[i], Es[i + 1], xtol=1e-13, rtol=8.9e-16,
                              maxiter=200)
            except (ValueError, DegenerateParameterError, PoleError,
                    NonConvergenceError):
                continue
            scale = max(abs(a_val), abs(b_val), 1e-30)
            rr, rd1, rd2 = _residual_parts(root, spec)
            den_scale_1 = max(abs(complex(d1[i])), abs(complex(d1[i + 1])), 1e-300)
            den_scale_2 = max(abs(complex(d2[i])), abs(complex(d2[i + 1])), 1e-300)
            if (abs(complex(rr)) < _ROOT_DROP * scale
                    and abs(complex(rd1)) > _DEN_DROP * den_scale_1
                    and abs(complex(rd2)) > _DEN_DROP * den_scale_2
                    and abs(complex(rr).imag) <= _IM_TOL * (1.0 + scale)):
                roots.append(float(root))
    roots.sort()
    out = []
    for r in roots:
        if not out or r - out[-1] > 1e-9:
            out.append(r)
    return out


def solve_bound_states(spec: PotentialSpec, E_guess: float = None):
    """All symmetric bound energies of the well, sorted ascending.

    Scans the full window (-1+EDGE_PAD, 1-EDGE_PAD) with SCAN_POINTS
    edge-clustered nodes; an optional E_guess adds a fine local scan so
    nearly merged pairs are resolved.
    """
    if spec.shape is not Shape.WoodsSaxonWell:
        raise DomainError(
            f"closed-form bound states require a Woods-Saxon well, got {spec.shape}")
    lo, hi = -1.0 + EDGE_PAD, 1.0 - EDGE_PAD
    roots = _roots_in_window(spec, lo, hi, SCAN_POINTS)
    if E_guess is not None:
        w = 0.01
        extra = _roots_in_window(spec, max(lo, E_guess - w),
                                 min(hi, E_guess + w), 600)
        roots = sorted(roots + extra)
    out = []
    for r in roots:
        if not out or r - out[-1] > 1e-9:
            out.append(r)
    return out


def bound_wavefunction(x, E: float, spec: PotentialSpec):
    """First spinor component of the symmetric bound state, amplitude 1.

    For x <= 0 this is y^sigma (1-y)^gamma F(1/2+gamma-lam+sigma,
    1/2+gamma+lam+sigma; 1+2 sigma; y) with y = 1/(1+exp(-a(x+L))); the
    right half is the mirror image.
    """
    p = bound_params(E, spec)
    a, L = spec.a, spec.L
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    xm = -np.abs(x_arr)
    with np.errstate(over="ignore", invalid="ignore"):
        u = np.exp(-a * (xm + L))
        y = 1.0 / (1.0 + u)
        cy = np.where(np.isfinite(u), u / (1.0 + u), 1.0)  # exact 1 - y
        # log-space y^sigma: y itself underflows far out in the tail while
        # y^sigma (true decay e^{-kappa |x|}) is still very much alive
        log_y = np.where(np.isfinite(u), -np.log1p(u), a * (xm + L))
    fa = 0.5 + p.gamma - p.lam + p.sigma
    fb = 0.5 + p.gamma + p.lam + p.sigma
    fc = 1.0 + 2.0 * p.sigma
    pref = np.exp(p.sigma * log_y) * complex_power(cy, p.gamma)
    out = pref * hyp2f1(fa, fb, fc, y, one_minus_z=cy)
    out = np.asarray(out).reshape(x_arr.shape)
    if np.isscalar(x) or np.asarray(x).ndim == 0:
        return complex(out[0])
    return out


def _square_q(E, V0):
    return np.sqrt(((np.asarray(E, float) + V0) ** 2 - 1.0).astype(complex))


def square_well_residual(E, L: float, V0: float):
    """Even-state matching condition q sin(qL) - kappa cos(qL) for the
    square well, complex-safe in the sub-band regime (q imaginary)."""
    E = np.asarray(E, dtype=float)
    kappa = np.sqrt(1.0 - E * E)
    q = _square_q(E, V0)
    g = q * np.sin(q * L) - kappa * np.cos(q * L)
    return g.real if g.ndim else float(g.real)


def square_well_roots(L: float, V0: float, lo: float = -1.0 + EDGE_PAD,
                      hi: float = 1.0 - EDGE_PAD, n: int = SCAN_POINTS,
                      uniform: bool = False):
    """Even bound energies of the square well in (lo, hi), sorted."""
    if V0 == 0.0 or hi <= lo:
        return []
    if uniform:
        Es = np.linspace(lo, hi, n)
    else:
        nodes = np.cos(np.pi * np.arange(n) / (n - 1))[::-1]
        Es = 0.5 * (lo + hi) + 0.5 * (hi - lo) * nodes
    g = square_well_residual(Es, L, V0)
    roots = []
    for i in range(n - 1):
        if g[i] == 0.0 or g[i] * g[i + 1] >= 0.0:
            continue
        roots.append(float(brentq(lambda e: square_well_residual(e, L, V0),
                                  Es[i], Es[i + 1], xtol=1e-13, rtol=8.9e-16)))
    out = []
    for r in sorted(roots):
        if not out or r - out[-1] > 1e-9:
            out.append(r)
    return out


def _square_norm(E: float, L: float, V0: float) -> float:
    """Closed-form charge norm of an even square-well state (amplitude 1
    inside: phi = cos(qx), matched decaying exponential outside)."""
    kappa = math.sqrt(1.0 - E * E)
    q = complex(_square_q(E, V0))
    half_sin = L * np.sinc(2.0 * q * L / np.pi)  # sin(2qL)/(2q)
    inner = (E + V0) * (L + half_sin)
    outer = E * np.cos(q * L) ** 2 / kappa
    return float(2.0 * (inner + outer).real)


def _norm_segments(L: float, a: float, kappa: float):
    """Panels covering [-L - 40/kappa, 0], sized to the local scales.

    Two scales need resolving: the Woods-Saxon shoulder varies on the wall
    scale 1/a (interior panels and the first stretch past the wall), and the
    bound tail decays on 1/kappa (covered by a geometric ladder of panels,
    each spanning a bounded number of decay lengths).
    """
    segs = []
    width = max(2, min(48, int(math.ceil(a * L / 4.0))))
    edges = np.linspace(-L, 0.0, width + 1)
    segs.extend(zip(edges[:-1], edges[1:]))
    s_max = 40.0 / kappa
    s_wall = min(12.0 / a, s_max)
    for j in range(3):
        segs.append((-L - (j + 1) * s_wall / 3.0, -L - j * s_wall / 3.0))
    s_lo, step = s_wall, 1.0 / kappa
    while s_lo < s_max:
        s_hi = min(s_lo + step, s_max)
        segs.append((-L - s_hi, -L - s_lo))
        s_lo, step = s_hi, 2.0 * step
    return segs


def norm(E: float, spec: PotentialSpec) -> float:
    """Charge norm N = 2 integral (E - V(x)) |phi1(x)|^2 dx of a symmetric
    bound state with unit hypergeometric amplitude.

    The Woods-Saxon integral is evaluated on the left half line (doubled by
    symmetry) with composite Gauss-Legendre panels, truncated at
    |x| = L + 40/kappa where the discarded tail is negligible; the square
    well uses the closed form.  N > 0 marks particle-like states, N < 0
    antiparticle-like ones.
    """
    E = float(E)
    if not abs(E) < 1.0:
        raise DomainError("bound energies must satisfy |E| < 1")
    kappa = math.sqrt(1.0 - E * E)
    if kappa < 1e-3:
        warnings.warn(
            f"state at the continuum edge (kappa = {kappa:.2e}); truncation "
            "length exceeds 4e4 and the quadrature may converge slowly",
            SlowDecayWarning, stacklevel=2)
    if spec.shape is Shape.SquareWell:
        return _square_norm(E, spec.L, spec.V0)
    if spec.shape is not Shape.WoodsSaxonWell:
        raise DomainError(f"norm is not available for shape {spec.shape}")

    nodes, weights = np.polynomial.legendre.leggauss(64)
    val = 0.0
    for lo, hi in _norm_segments(spec.L, spec.a, kappa):
        x = 0.5 * (hi - lo) * nodes + 0.5 * (hi + lo)
        phi = bound_wavefunction(x, E, spec)
        f = 2.0 * (E - evaluate(spec, x)) * np.abs(phi) ** 2
        val += 0.5 * (hi - lo) * float(weights @ f)
    return 2.0 * val


def _lowest_cluster(roots):
    """The lowest root plus its neighbour when they form a close pair."""
    if len(roots) >= 2 and roots[1] - roots[0] < 0.05:
        return [roots[0], roots[1]]
    return [roots[0]]


class _FoldTracker:
    """Window bookkeeping for the level(s) that vanish at the fold.

    Keeps the window centered on the tracked roots, wide enough to follow
    their drift between probes but narrow enough to exclude unrelated
    levels, shrinking as the pair tightens so nearly merged roots stay
    resolvable on the scan grid.
    """

    def __init__(self, roots, lo_full, hi_full):
        self.lo_full, self.hi_full = lo_full, hi_full
        self.c = 0.5 * (roots[0] + roots[-1])
        self.spread = roots[-1] - roots[0]
        self.motion = 0.01
        self.roots = list(roots)

    def update(self, roots):
        c_new = 0.5 * (roots[0] + roots[-1])
        self.motion = max(abs(c_new - self.c), 0.25 * self.motion, 1e-7)
        self.c = c_new
        self.spread = roots[-1] - roots[0]
        self.roots = list(roots)

    def window(self):
        half = min(max(5.0 * self.spread, 4.0 * self.motion, 1e-4), 0.05)
        return max(self.lo_full, self.c - half), min(self.hi_full, self.c + half)


def _fold_bisect(roots_fn, v_seed: float, v_tol: float = 5e-12,
                 lo_full: float = -1.0 + EDGE_PAD,
                 hi_full: float = 1.0 - EDGE_PAD):
    """Largest depth V0 at which the tracked level(s) still exist.

    roots_fn(V0, lo, hi, tight) must return sorted roots in the window
    (tight=True asks for a center-resolving grid).  Probes down from v_seed
    for a depth whose lowest level can be continued, then bisects on root
    presence inside the tracking window; the roots disappear above the fold.
    Works both when the merging partner is visible (a resolvable pair) and
    when it hides beyond the continuum edge until the last sliver of depth.
    Returns (V_cr, roots_at_V_cr).
    """
    last_err = None
    for delta in (0.0, 1e-3, 3e-3, 0.01, 0.03, 0.06, 0.12, 0.2, 0.3):
        v_lo = v_seed * (1.0 - delta)
        if v_lo <= 0:
            break
        roots = roots_fn(v_lo, lo_full, hi_full, False)
        if not roots:
            continue
        tracker = _FoldTracker(_lowest_cluster(roots), lo_full, hi_full)

        def probe(v):
            lo, hi = tracker.window()
            tight = (hi - lo) < 4e-3
            r = roots_fn(v, lo, hi, tight)
            if not r:
                # the level may have outrun the window between probes;
                # retry once with the drift allowance widened before
                # declaring it gone
                half = 0.5 * (hi - lo) + 6.0 * tracker.motion + 1e-3
                half = min(half, 0.3)
                wl = max(lo_full, tracker.c - half)
                wh = min(hi_full, tracker.c + half)
                r = roots_fn(v, wl, wh, (wh - wl) < 4e-3)
            return r

        v_hi = None
        for up in (1e-3, 3e-3, 0.01, 0.03, 0.08, 0.2):
            v = v_lo * (1.0 + up)
            r = probe(v)
            if r:
                v_lo = v
                tracker.update(r)
            else:
                v_hi = v
                break
        if v_hi is None:
            last_err = NoFoldError(
                f"level tracked from V0 = {v_lo!r} persists; no fold above")
            continue
        while v_hi - v_lo > v_tol:
            vm = 0.5 * (v_lo + v_hi)
            r = probe(vm)
            if r:
                v_lo = vm
                tracker.update(r)
            else:
                v_hi = vm
        if probe(v_hi):
            # the level survives just above the bracket: the coarse ascent
            # lost it and bisected onto a window artifact, not a fold
            last_err = NoFoldError(
                f"bracket at V0 = {v_hi!r} rejected; level still present above")
            continue
        return v_lo, list(tracker.roots)
    raise last_err or NoFoldError(
        f"no bound level found at or below V0 = {v_seed!r}")


def _fold_locate(a: float, L: float, V0_hint: float):
    """Woods-Saxon fold position and the roots present there."""

    def roots_fn(v, lo, hi, tight):
        spec = PotentialSpec(shape=Shape.WoodsSaxonWell, a=a, L=L, V0=v)
        if tight:
            return _roots_in_window(spec, lo, hi, 800, uniform=True)
        n = 600 if (hi - lo) < 0.5 else SCAN_POINTS
        return _roots_in_window(spec, lo, hi, n)

    return _fold_bisect(roots_fn, V0_hint)


def find_critical_potential(a: float, L: float, V0_hint: float) -> CriticalPoint:
    """Critical well depth where the particle and antiparticle levels merge.

    Bisects on survival of the merging level(s) down to a depth resolution
    ~1e-10 and returns the depth, the merged energy (pair midpoint when both
    roots are visible) and a residual certificate: the residual magnitude at
    (E_cr, V_cr) relative to its size a tick (1e-4) away in energy.  The raw
    residual scale varies by many orders of magnitude across steepness, so
    only this relative form is comparable; values well below 1 certify the
    merged level.  V0_hint should lie within roughly 30% below the fold.
    """
    v_cr, roots = _fold_locate(a, L, V0_hint)
    e_cr = 0.5 * (roots[0] + roots[-1])
    spec = PotentialSpec(shape=Shape.WoodsSaxonWell, a=a, L=L, V0=v_cr)
    try:
        r0 = abs(eigen_residual(e_cr, spec))
        de = 1e-4
        scale = max(
            abs(eigen_residual(min(e_cr + de, 1.0 - EDGE_PAD), spec)),
            abs(eigen_residual(max(e_cr - de, -1.0 + EDGE_PAD), spec)))
        residual_err = r0 / scale if scale > 0.0 else r0
    except SpuriousPoleError:
        residual_err = math.inf
    return CriticalPoint(V_cr=v_cr, E_cr=e_cr, residual_err=residual_err)


def _shallow_seed(a: float, L: float, V0: float) -> float:
    area = 2.0 * V0 * (L + math.log1p(math.exp(-a * L)) / a)
    return min(1.0 - 10.0 * EDGE_PAD, 1.0 - 0.5 * area * area)


def _trace_branch(roots_fn, norm_fn, v_start, v_stop, step0, e_seed,
                  direction=+1, e_floor=-1.0 + EDGE_PAD,
                  e_ceil=1.0 - EDGE_PAD):
    """Natural continuation of one root branch in V0.

    Follows the root nearest to the linear prediction, halving the step when
    the branch cannot be continued (and growing it back when the branch is
    tame).  Returns accepted (V0, E, N) triples plus the last good state for
    fold handling; stops at v_stop, at the energy window edges, or when the
    step underflows (reported to the caller as 'stalled')."""
    pts = []
    v, e_prev, slope = v_start, None, 0.0
    step = step0
    stalled = False
    while True:
        if direction > 0 and v > v_stop + 1e-15:
            break
        if direction < 0 and v < v_stop - 1e-15:
            break
        pred = e_seed if e_prev is None else e_prev + slope * step * direction
        if pred > e_ceil:
            break
        # a diverging fold slope can fling the linear prediction through the
        # continuum edge while the root itself is still above it
        pred = max(pred, e_floor + EDGE_PAD)
        half = max(0.02, 8.0 * abs(slope * step))
        lo, hi = max(e_floor, pred - half), min(e_ceil, pred + half)
        roots = roots_fn(v, lo, hi)
        if not roots and e_prev is None:
            # seed estimate missed; fall back to the full window once
            roots = roots_fn(v, e_floor, e_ceil)
        if not roots:
            step *= 0.5
            if step < 1e-12:
                stalled = True
                break
            v = (pts[-1][0] + direction * step) if pts else v_start
            continue
        e = min(roots, key=lambda r: abs(r - pred))
        if e_prev is not None:
            de = e - e_prev
            if abs(de) > 0.05 and step > 1e-10:
                # jumped to a different branch; refine the step instead
                step *= 0.5
                v = pts[-1][0] + direction * step
                continue
            slope = de / (step * direction) if step > 0 else 0.0
            if abs(de) > 4e-3:
                step = max(step * 0.5, 1e-12)
            elif abs(de) < 4e-4:
                step = min(step * 1.5, step0)
        pts.append((v, e, norm_fn(e, v)))
        e_prev = e
        if direction > 0 and v >= v_stop:
            break
        if direction < 0 and v <= v_stop:
            break
        v_next = v + direction * step
        v = min(v_next, v_stop) if direction > 0 else max(v_next, v_stop)
    return pts, stalled


def _classify(v, e, n):
    kind = StateKind.Particle if n > 0 else StateKind.Antiparticle
    return BoundState(V0=float(v), E=float(e), N=float(n), kind=kind)


def trace_spectrum(a: float, L: float, V0_min: float, V0_max: float,
                   step0: float = 0.02):
    """Continue the symmetric ground level in the well depth V0.

    Returns the particle branch and, when the trace runs into the fold at
    V_cr inside [V0_min, V0_max], the antiparticle branch traced back from
    the merge by decreasing V0; both carry the shared turning point
    (V_cr, E_cr).  The turning point is only reported when the branches
    meet with a gap below PAIR_GAP_TOL.
    """
    if not (0.0 <= V0_min < V0_max) or step0 <= 0:
        raise DomainError("need 0 <= V0_min < V0_max and step0 > 0")

    def roots_fn(v, lo, hi):
        spec = PotentialSpec(shape=Shape.WoodsSaxonWell, a=a, L=L, V0=v)
        return _roots_in_window(spec, lo, hi, 240)

    def norm_fn(e, v):
        return norm(e, PotentialSpec(shape=Shape.WoodsSaxonWell, a=a, L=L, V0=v))

    v_start = max(V0_min, 0.05)
    pts, stalled = _trace_branch(roots_fn, norm_fn, v_start, V0_max, step0,
                                 _shallow_seed(a, L, v_start))
    if not pts:
        raise ContinuationStallError(
            f"no bound level found from V0 = {v_start!r}")
    turning = None
    anti = []
    if stalled:
        if pts[-1][1] > -0.5:
            raise ContinuationStallError(
                "continuation step underflowed away from any fold")
        v_cr, fold_roots = _fold_locate(a, L, pts[-1][0])
        e_cr = 0.5 * (fold_roots[0] + fold_roots[-1])
        if fold_roots[-1] - fold_roots[0] < PAIR_GAP_TOL:
            turning = (v_cr, e_cr)
        # the antiparticle partner exits through E = -1 a fold-curvature
        # dependent sliver below V_cr; estimate the curvature from the last
        # particle point, E(V0) ~ E_cr + sqrt((V_cr - V0)/c), and back off
        # no farther than half the sliver
        dv_last = max(v_cr - pts[-1][0], 1e-12)
        c_fold = dv_last / max((pts[-1][1] - e_cr) ** 2, 1e-24)
        dv_room = 0.25 * c_fold * (1.0 + e_cr - EDGE_PAD) ** 2
        back = v_cr - min(max(step0, 1e-4), 0.5 * dv_room)
        if back > V0_min:
            seed = e_cr - math.sqrt((v_cr - back) / c_fold)
            anti, _ = _trace_branch(roots_fn, norm_fn, back, V0_min, step0,
                                    seed, direction=-1,
                                    e_ceil=e_cr)
    particle = SpectrumBranch(a=a, L=L,
                              points=[_classify(*p) for p in pts],
                              turning_point=turning)
    branches = [particle]
    if anti:
        anti_pts = [_classify(*p) for p in sorted(anti)]
        branches.append(SpectrumBranch(a=a, L=L, points=anti_pts,
                                       turning_point=turning))
    return branches


def square_well_spectrum(L: float, v0_range) -> SpectrumBranch:
    """Even square-well levels continued over v0_range = (V0_min, V0_max).

    Same continuation and norm machinery as the Woods-Saxon trace; when the
    fold lies inside the range the branch carries its turning point.
    """
    V0_min, V0_max = (float(v0_range[0]), float(v0_range[1]))
    if not (0.0 <= V0_min < V0_max):
        raise DomainError("need 0 <= V0_min < V0_max")

    def roots_fn(v, lo, hi):
        return square_well_roots(L, v, lo, hi, 800)

    def fold_roots_fn(v, lo, hi, tight):
        return square_well_roots(L, v, lo, hi, 800, uniform=tight)

    def norm_fn(e, v):
        return _square_norm(e, L, v)

    v_start = max(V0_min, 0.05)
    area = 2.0 * v_start * L
    seed = min(1.0 - 10.0 * EDGE_PAD, 1.0 - 0.5 * area * area)
    pts, stalled = _trace_branch(roots_fn, norm_fn, v_start, V0_max,
                                 0.02, seed)
    if not pts:
        return SpectrumBranch(a=math.inf, L=L, points=[], turning_point=None)
    turning = None
    if stalled and pts[-1][1] < -0.5:
        v_cr, pair = _fold_bisect(fold_roots_fn, pts[-1][0])
        if pair[-1] - pair[0] < PAIR_GAP_TOL:
            turning = (v_cr, 0.5 * (pair[0] + pair[-1]))
    return SpectrumBranch(a=math.inf, L=L,
                          points=[_classify(*p) for p in pts],
                          turning_point=turning)
