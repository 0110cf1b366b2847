"""Direct numerical integration of the reduced wave equation.

Everything here marches phi'' + [(E - V(x))^2 - 1] phi = 0 on a uniform
grid with no hypergeometric machinery involved, so the closed-form solver
and this module form two fully independent routes to the same numbers:
transmission by backward integration from a pure outgoing wave, bound
states by two-sided shooting, norms by quadrature of the marched profile.
Numerov is the default scheme (the equation has no first-derivative term,
which is exactly Numerov's form); classical RK4 on the equivalent first
order system is kept as a slower second check.

Energies are in units of the mass, lengths in units of 1/m.
"""

from __future__ import annotations

import dataclasses
import enum
import math

import numpy as np
from scipy.linalg import solve_banded
from scipy.optimize import brentq, minimize_scalar

from .errors import DomainError, NoFoldError, NoRootError, UnitarityViolationError
from .potentials import PotentialSpec, Shape, evaluate
from .scattering import TransmissionPoint

# |T + R - 1| above this is a hard failure (step too coarse, or the window
# clips the potential tail)
_UNITARITY_FAIL = 1e-6

# windows always extend ~40 decay lengths past the potential edge, so the
# largest value a marched solution can reach is ~exp(40 + kappa L): far from
# overflow, which keeps the marches free of rescaling logic
_TAIL_FOLDS = 40.0

_POLE_FACTOR = 1e-3


class Method(str, enum.Enum):
    Numerov = "Numerov"
    RK4 = "RK4"


@dataclasses.dataclass(frozen=True)
class IntegratorConfig:
    x_min: float
    x_max: float
    step: float
    method: Method = Method.Numerov

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if not (self.x_min < self.x_max) or not self.step > 0:
            raise DomainError("need x_min < x_max and step > 0")


def _tail_reach(spec: PotentialSpec) -> float:
    """Distance beyond which |V| is negligible (below ~1e-19 V0)."""
    if spec.shape in (Shape.WoodsSaxonBarrier, Shape.WoodsSaxonWell):
        return spec.L + 45.0 / spec.a
    if spec.shape in (Shape.SquareBarrier, Shape.SquareWell):
        return spec.L + 1.0
    return 45.0 * spec.a


def _window_floor(spec: PotentialSpec) -> float:
    """Smallest asymptotic reach a scattering window may use."""
    if spec.shape in (Shape.WoodsSaxonBarrier, Shape.WoodsSaxonWell):
        return spec.L + _TAIL_FOLDS / spec.a
    if spec.shape in (Shape.SquareBarrier, Shape.SquareWell):
        return spec.L
    return _TAIL_FOLDS * spec.a


def default_config(spec: PotentialSpec, E: float,
                   method: Method = Method.Numerov) -> IntegratorConfig:
    """A window and step adequate for the given potential and energy.

    The window clears both the potential reach and, for |E| < 1, the
    evanescent decay length 40/kappa; the step obeys
    step <= min(0.01, 0.1/k) and additionally resolves the Woods-Saxon
    wall scale 1/a.  An even node count keeps a grid point exactly at
    x = 0, where the cusp shapes have a kink.
    """
    reach = _tail_reach(spec)
    if abs(E) < 1.0:
        kappa = math.sqrt(1.0 - E * E)
        reach = max(reach, spec.L + _TAIL_FOLDS / kappa)
        k = 1.0
        step = 0.01
    else:
        k = math.sqrt(E * E - 1.0)
        # transmission windows are short, so a finer step is cheap and buys
        # comfortable margin against the 1e-6 cross-check gate
        step = 0.005
    step = min(step, 0.1 / max(k, 1e-12))
    if spec.shape in (Shape.WoodsSaxonBarrier, Shape.WoodsSaxonWell):
        step = min(step, 0.15 / spec.a)
    elif spec.shape in (Shape.SquareBarrier, Shape.SquareWell) and spec.L > 0:
        # shrink the step so the walls land exactly on grid nodes
        step = spec.L / math.ceil(spec.L / step)
    if method is Method.RK4:
        # RK4 has no dispersion-corrected decomposition, so its amplitude
        # drift must be pushed below the unitarity gate by brute force
        step /= 4.0
    n = int(math.ceil(2.0 * reach / step))
    n += n % 2
    half = 0.5 * n * step
    return IntegratorConfig(x_min=-half, x_max=half, step=step, method=method)


def _grid(cfg: IntegratorConfig):
    n = int(round((cfg.x_max - cfg.x_min) / cfg.step))
    if n < 8:
        raise DomainError("integration window shorter than 8 steps")
    return cfg.x_min + cfg.step * np.arange(n + 1)


def _f_values(E: float, spec: PotentialSpec, x):
    v = evaluate(spec, x)
    return 1.0 - (E - v) ** 2


def _kink_corrected(f, h: float, i0: int):
    """Cancel the Numerov defect from the |x| seam of the potential.

    The symmetric shapes have a derivative kink at x = 0, which leaves a
    one-time O(h^3) defect in the three-point identity at that node and
    degrades the marched amplitudes to O(h^2).  Bumping the single f
    sample there by h (f'+ - f'-) / 12 cancels the net defect (the sample
    carries weight 10 in its own equation plus 1 in each neighbour) and
    restores the smooth-case order; the jump is estimated from the second
    difference, so the correction vanishes to the order it matters on
    shapes that are smooth at 0.
    """
    if i0 < 1 or i0 > len(f) - 2:
        return f
    jump = (f[i0 + 1] - 2.0 * f[i0] + f[i0 - 1]) / h
    f = f.copy()
    f[i0] += h * jump / 12.0
    return f


def _f_on_grid(E: float, spec: PotentialSpec, cfg: IntegratorConfig, x):
    f = _f_values(E, spec, x)
    if spec.shape in (Shape.SquareBarrier, Shape.SquareWell):
        # a node sitting exactly on a wall must carry the average of the
        # two one-sided f values, otherwise the effective wall is displaced
        # by part of a cell
        on_wall = np.abs(np.abs(x) - spec.L) <= 1e-9 * max(1.0, spec.L)
        if np.any(on_wall):
            v_in = -spec.V0 if spec.is_well else spec.V0
            f_in = 1.0 - (E - v_in) ** 2
            f_out = 1.0 - E * E
            f = f.copy()
            f[on_wall] = 0.5 * (f_in + f_out)
        return f
    if cfg.method is not Method.Numerov:
        return f  # the cancellation below is specific to Numerov's quadrature
    i0 = int(round(-cfg.x_min / cfg.step))
    if 0 <= i0 < len(x) and abs(x[i0]) <= 1e-9 * max(1.0, abs(cfg.x_min)):
        f = _kink_corrected(f, cfg.step, i0)
    return f


def numerov_march(f, h: float, y0, y1):
    """Propagate y'' = f(x) y through the sampled f with Numerov's rule.

    y0, y1 seed the first two nodes.  The three-term recurrence
    t[i+1] = g[i] t[i] - t[i-1] in t = (1 - h^2 f / 12) y is lower
    triangular in the unknowns, so the whole trajectory comes out of one
    banded solve instead of a Python-level loop.
    """
    f = np.asarray(f)
    n = len(f) - 1
    if n < 2:
        raise DomainError("need at least 3 samples to march")
    c = h * h / 12.0
    w = 1.0 - c * f
    g = (12.0 / w) - 10.0
    ab = np.zeros((3, n + 1), dtype=complex)
    ab[0] = 1.0
    ab[1, 1:n] = -g[1:n]
    ab[2, : n - 1] = 1.0
    b = np.zeros(n + 1, dtype=complex)
    b[0] = w[0] * complex(y0)
    b[1] = w[1] * complex(y1)
    t = solve_banded((2, 0), ab, b)
    return t / w


def _rk4_march(f, h: float, y0, y1):
    """Same trajectory by RK4 on the first order system (y, y').

    The seed slope comes from the second order accurate difference of the
    two seed nodes; midpoint samples of f are approximated by averaging,
    which is adequate at fourth order for smooth potentials.
    """
    f = np.asarray(f)
    yv = complex(y0)
    yp = (complex(y1) - yv) / h - 0.5 * h * f[0] * yv
    y = np.empty(len(f), dtype=complex)
    y[0] = yv
    for i in range(len(f) - 1):
        fa, fb = f[i], f[i + 1]
        fm = 0.5 * (fa + fb)
        k1y, k1p = yp, fa * yv
        k2y, k2p = yp + 0.5 * h * k1p, fm * (yv + 0.5 * h * k1y)
        k3y, k3p = yp + 0.5 * h * k2p, fm * (yv + 0.5 * h * k2y)
        k4y, k4p = yp + h * k3p, fb * (yv + h * k3y)
        yv = yv + (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        yp = yp + (h / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        y[i + 1] = yv
    return y


def _march(f, cfg: IntegratorConfig, y0, y1):
    if cfg.method is Method.RK4:
        return _rk4_march(f, cfg.step, y0, y1)
    return numerov_march(f, cfg.step, y0, y1)


def lattice_wavenumber(k: float, h: float, method: Method = Method.Numerov) -> float:
    """Wavenumber of the plane wave the marching scheme actually supports.

    Numerov's recurrence propagates exp(i kt x) with
    cos(kt h) = (1 - 5 c k^2) / (1 + c k^2), c = h^2/12.  Decomposing the
    asymptotic field with kt instead of k removes the scheme's dispersion
    from the extracted amplitudes, which leaves T + R - 1 at the roundoff
    level.  RK4 phase error has no such closed form, so the continuum k is
    returned for it.
    """
    if method is not Method.Numerov:
        return k
    c = h * h / 12.0
    ck2 = c * k * k
    arg = (1.0 - 5.0 * ck2) / (1.0 + ck2)
    if abs(arg) >= 1.0:
        raise DomainError(f"step {h!r} cannot propagate wavenumber {k!r}")
    return math.acos(arg) / h


def ode_transmission(E: float, spec: PotentialSpec,
                     cfg: IntegratorConfig = None) -> TransmissionPoint:
    """Transmission and reflection by direct integration.

    A pure outgoing wave is seeded at x_max and marched backward to x_min,
    where the field is decomposed into incident and reflected plane waves;
    T = 1/|A|^2 and R = |B/A|^2.  Raises UnitarityViolationError when
    |T + R - 1| exceeds 1e-6.
    """
    E = float(E)
    if not E > 1.0:
        raise DomainError("transmission needs E > 1")
    if cfg is None:
        cfg = default_config(spec, E)
    k = math.sqrt(E * E - 1.0)
    if cfg.step > min(0.01, 0.1 / k) * (1.0 + 1e-12):
        raise DomainError(
            f"step {cfg.step!r} violates the <= min(0.01, 0.1/k) bound")
    floor = _window_floor(spec)
    if -cfg.x_min < floor or cfg.x_max < floor:
        raise DomainError(
            f"window must clear the potential tail (need both ends past {floor!r})")
    x = _grid(cfg)
    f = _f_on_grid(E, spec, cfg, x)
    kt = lattice_wavenumber(k, cfg.step, cfg.method)
    # marching the reversed samples is the backward integration: the
    # equation has no first derivative term, so it is direction blind
    y0 = np.exp(1j * kt * x[-1])
    y1 = np.exp(1j * kt * x[-2])
    y_rev = _march(f[::-1], cfg, y0, y1)
    phi0, phi1 = y_rev[-1], y_rev[-2]  # values at x[0], x[1]
    zp0, zp1 = np.exp(1j * kt * x[0]), np.exp(1j * kt * x[1])
    zm0, zm1 = np.exp(-1j * kt * x[0]), np.exp(-1j * kt * x[1])
    det = zp0 * zm1 - zp1 * zm0
    A = (phi0 * zm1 - phi1 * zm0) / det
    B = (zp0 * phi1 - zp1 * phi0) / det
    T = 1.0 / abs(A) ** 2
    R = abs(B / A) ** 2
    if abs(T + R - 1.0) > _UNITARITY_FAIL:
        raise UnitarityViolationError(
            f"|T + R - 1| = {abs(T + R - 1.0):.3e} at E = {E!r}")
    return TransmissionPoint(E=E, T=float(T), R=float(R))


def ode_resonance(spec: PotentialSpec, e_lo: float, e_hi: float) -> float:
    """Transmission peak inside (e_lo, e_hi) from the direct integration.

    Useful to confirm resonance positions independently of the closed-form
    route; the bracket must contain a single maximum of T.
    """
    if not 1.0 < e_lo < e_hi:
        raise DomainError("need 1 < e_lo < e_hi")
    res = minimize_scalar(lambda e: -ode_transmission(e, spec).T,
                          bounds=(e_lo, e_hi), method="bounded",
                          options={"xatol": 1e-7})
    return float(res.x)


def _mismatch(E: float, spec: PotentialSpec, cfg: IntegratorConfig) -> float:
    """Log-derivative mismatch at x = 0 of the two inward decaying marches.

    Vanishes at even-parity eigenvalues and has poles at odd-parity ones
    (the profile crosses zero at the origin there).
    """
    x = _grid(cfg)
    i0 = int(round(-cfg.x_min / cfg.step))
    if i0 < 2 or i0 > len(x) - 3 or abs(x[i0]) > 1e-9 * max(1.0, -cfg.x_min):
        raise DomainError("grid does not place a node at x = 0")
    f = _f_on_grid(E, spec, cfg, x)
    h = cfg.step
    kappa = math.sqrt(1.0 - E * E)
    seed = math.exp(-kappa * h)
    yl = _march(f[: i0 + 2], cfg, seed, 1.0)
    yr = _march(f[i0 - 1:][::-1], cfg, seed, 1.0)
    dl = (yl[i0 + 1] - yl[i0 - 1]) / (2.0 * h * yl[i0])
    dr = (yr[-3] - yr[-1]) / (2.0 * h * yr[-2])
    return float((dl - dr).real)


def shoot_bound_state(spec: PotentialSpec, E_bracket,
                      cfg: IntegratorConfig = None) -> float:
    """Eigenvalue inside (E_lo, E_hi) by two-sided shooting.

    Decaying solutions are integrated inward from both window ends and the
    log-derivative mismatch at x = 0 is driven to zero to 1e-10 in E.
    Raises NoRootError when the mismatch does not change sign over the
    bracket, or when the sign change is a mismatch pole (an odd state)
    rather than a root.
    """
    e_lo, e_hi = float(E_bracket[0]), float(E_bracket[1])
    if not (-1.0 < e_lo < e_hi < 1.0):
        raise DomainError("bracket must satisfy -1 < E_lo < E_hi < 1")
    if cfg is None:
        # the endpoint closest to the continuum edge has the slowest decay
        # and therefore dictates the window
        e_ref = e_lo if abs(e_lo) >= abs(e_hi) else e_hi
        cfg = default_config(spec, e_ref)
    m_lo = _mismatch(e_lo, spec, cfg)
    m_hi = _mismatch(e_hi, spec, cfg)
    if not (np.isfinite(m_lo) and np.isfinite(m_hi)) or m_lo * m_hi > 0:
        raise NoRootError(
            f"mismatch does not change sign over ({e_lo!r}, {e_hi!r})")
    root = brentq(lambda e: _mismatch(e, spec, cfg), e_lo, e_hi, xtol=1e-10)
    if abs(_mismatch(root, spec, cfg)) > _POLE_FACTOR * max(abs(m_lo), abs(m_hi)):
        raise NoRootError(
            f"bracket encloses a mismatch pole near E = {root!r}, not a root")
    return float(root)


def ode_norm(E: float, spec: PotentialSpec, cfg: IntegratorConfig = None) -> float:
    """Charge density integral of the marched profile.

    N = integral 2 (E - V) |phi|^2 dx over the line, evaluated on the left
    half and doubled (the shapes here are all even).  The profile is
    rescaled so phi(0) matches the closed-form convention: the
    hypergeometric amplitude for the Woods-Saxon well, phi(0) = 1
    otherwise, making the magnitude directly comparable with the
    closed-form norm.
    """
    E = float(E)
    if not abs(E) < 1.0:
        raise DomainError("bound energies must satisfy |E| < 1")
    if cfg is None:
        cfg = default_config(spec, E)
    x = _grid(cfg)
    i0 = int(round(-cfg.x_min / cfg.step))
    f = _f_on_grid(E, spec, cfg, x)
    h = cfg.step
    kappa = math.sqrt(1.0 - E * E)
    y = _march(f[: i0 + 1], cfg, math.exp(-kappa * h), 1.0)
    if spec.shape is Shape.WoodsSaxonWell:
        from .boundstates import bound_wavefunction
        phi0 = abs(bound_wavefunction(0.0, E, spec))
    else:
        phi0 = 1.0
    y *= phi0 / abs(y[-1])
    dens = 2.0 * (E - evaluate(spec, x[: i0 + 1])) * np.abs(y) ** 2
    return 2.0 * float(np.trapezoid(dens, dx=h))


def bound_energies_ode(spec: PotentialSpec, e_lo: float = -1.0 + 1e-6,
                       e_hi: float = 1.0 - 1e-6, n: int = 60,
                       cfg: IntegratorConfig = None) -> list:
    """Even eigenvalues in (e_lo, e_hi) found by scanning the shooter.

    Sign changes of the matching mismatch on an n-point energy grid are
    polished with shoot_bound_state; sign flips that turn out to be poles
    of the mismatch (odd states) are dropped.  Unless an explicit cfg is
    given, every scan energy gets its own window: a window sized for an
    edge-hugging energy would overflow the inward marches at interior
    energies, where the decay is much faster.
    """
    es = np.linspace(e_lo, e_hi, n)
    ms = np.array([_mismatch(e, spec, cfg if cfg is not None
                             else default_config(spec, e)) for e in es])
    roots = []
    for i in range(n - 1):
        if not (np.isfinite(ms[i]) and np.isfinite(ms[i + 1])):
            continue
        if ms[i] * ms[i + 1] < 0:
            try:
                roots.append(shoot_bound_state(spec, (es[i], es[i + 1]), cfg))
            except NoRootError:
                continue
    return roots


def bound_root_count(spec: PotentialSpec, e_lo: float, e_hi: float,
                     n: int = 60, cfg: IntegratorConfig = None) -> int:
    """Number of even eigenvalues in (e_lo, e_hi) seen by the shooter."""
    return len(bound_energies_ode(spec, e_lo, e_hi, n, cfg))


def critical_potential_ode(shape: Shape, a: float, V0_hint: float,
                           L: float = 1.0, v_tol: float = 1e-6):
    """Critical depth of a well found by shooting alone.

    The lowest even level is hunted in energy windows -1 + delta with delta
    swept down a geometric ladder (so edge-hugging levels stay resolved),
    and the largest V0 at which the level still exists is located by
    bisection on its presence.  Returns (V_cr, E_cr) where E_cr is the
    level at the last depth that still binds it.
    """
    spec0 = PotentialSpec(shape=shape, a=a, L=L, V0=V0_hint)
    if not spec0.is_well:
        raise DomainError("critical potentials are defined for wells")

    deltas = np.geomspace(8e-7, 0.25, 24)

    def lowest_root(v):
        spec = PotentialSpec(shape=shape, a=a, L=L, V0=v)
        # scan from the cheap wide windows down toward the edge
        for i in range(len(deltas) - 1, 0, -1):
            e_lo, e_hi = -1.0 + deltas[i - 1], -1.0 + deltas[i]
            kappa = math.sqrt(1.0 - e_lo * e_lo)
            reach = max(_tail_reach(spec), L + _TAIL_FOLDS / kappa)
            n = int(math.ceil(reach / 0.02))
            cfg = IntegratorConfig(x_min=-0.02 * n, x_max=0.02 * n, step=0.02)
            m_lo = _mismatch(e_lo, spec, cfg)
            m_hi = _mismatch(e_hi, spec, cfg)
            if np.isfinite(m_lo) and np.isfinite(m_hi) and m_lo * m_hi < 0:
                try:
                    return shoot_bound_state(spec, (e_lo, e_hi), cfg)
                except NoRootError:
                    continue
        return None

    v_lo, root = None, None
    for down in (0.0, 0.003, 0.01, 0.03, 0.1, 0.2):
        v = V0_hint * (1.0 - down)
        root = lowest_root(v)
        if root is not None:
            v_lo = v
            break
    if v_lo is None:
        raise NoFoldError(f"no bound level at or below V0 = {V0_hint!r}")
    v_hi = None
    for up in (0.003, 0.01, 0.03, 0.1, 0.3):
        v = v_lo * (1.0 + up)
        r = lowest_root(v)
        if r is None:
            v_hi = v
            break
        v_lo, root = v, r
    if v_hi is None:
        raise NoFoldError(f"level persists above V0 = {v_lo!r}; no fold found")
    while v_hi - v_lo > v_tol:
        vm = 0.5 * (v_lo + v_hi)
        r = lowest_root(vm)
        if r is None:
            v_hi = vm
        else:
            v_lo, root = vm, r
    return float(v_lo), float(root)
