"""Complex special functions used by the closed-form solver.

Gamma, Gauss hypergeometric 2F1, its regularized variant, and principal-branch
complex powers. Everything is vectorized over numpy arrays and deterministic:
each array element converges independently of how the caller chunks the work.
All branch choices (square roots, logs, powers) live here so the rest of the
package inherits one consistent convention.
"""

from __future__ import annotations

import contextlib
import contextvars
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateParameterError,
    DegenerateParameterWarning,
    DomainError,
    NonConvergenceError,
    PoleError,
)

__all__ = [
    "SeriesControl",
    "DEFAULT_SERIES",
    "gamma_c",
    "rgamma_c",
    "hyp2f1",
    "hyp2f1_regularized",
    "complex_power",
    "negative_axis_branch",
]

# Lanczos approximation, g = 7, nine coefficients. Good to ~1e-14 relative
# on the right half plane; the reflection formula covers Re(z) < 0.5.
_LANCZOS_G = 7.0
_LANCZOS_COEF = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])

_POLE_TOL = 1e-12
_DEGENERATE_TOL = 1e-9
_DEGENERATE_SHIFT = 1e-9 * (1.0 + 1.0j)
_REGULARIZED_POLE_TOL = 1e-5

_SQRT_2PI = np.sqrt(2.0 * np.pi)

# Sign of the imaginary part assigned to log(negative real); +1 is the
# principal branch Log(-t) = ln t + i*pi. Tests flip it to -1 to confirm
# that physical outputs do not depend on the convention.
_negative_axis_sign = contextvars.ContextVar("negative_axis_sign", default=1.0)


@contextlib.contextmanager
def negative_axis_branch(sign: float):
    """Temporarily select the branch of log on the negative real axis.

    sign=+1 keeps the principal choice ln|x| + i*pi, sign=-1 uses ln|x| - i*pi.
    """
    if sign not in (1.0, -1.0, 1, -1):
        raise DomainError("branch sign must be +1 or -1")
    token = _negative_axis_sign.set(float(sign))
    try:
        yield
    finally:
        _negative_axis_sign.reset(token)


@dataclass(frozen=True)
class SeriesControl:
    """Budget and tolerances for the hypergeometric power series."""

    max_terms: int = 20000
    abs_tol: float = 0.0
    rel_tol: float = 1e-16

    def __post_init__(self):
        if self.max_terms < 1:
            raise DomainError("max_terms must be >= 1")
        if self.abs_tol < 0 or self.rel_tol <= 0:
            raise DomainError("tolerances must be positive")


DEFAULT_SERIES = SeriesControl()


def _as_complex(*vals):
    arrs = np.broadcast_arrays(*[np.asarray(v, dtype=complex) for v in vals])
    return [np.array(a) for a in arrs]


def _maybe_scalar(out, *inputs):
    if all(np.isscalar(v) or np.asarray(v).ndim == 0 for v in inputs):
        return complex(out.reshape(()))
    return out


def _near_nonpositive_integer(z, tol):
    """Distance from each element to the nearest integer <= 0."""
    n = np.round(z.real)
    dist = np.abs(z - n)
    return (n <= 0) & (dist < tol)


def _lanczos(z):
    # assumes Re(z) >= 0.5 elementwise
    zm1 = z - 1.0
    acc = np.full(z.shape, _LANCZOS_COEF[0], dtype=complex)
    for i in range(1, len(_LANCZOS_COEF)):
        acc = acc + _LANCZOS_COEF[i] / (zm1 + i)
    t = zm1 + _LANCZOS_G + 0.5
    return _SQRT_2PI * np.exp((zm1 + 0.5) * np.log(t) - t) * acc


def gamma_c(z):
    """Complex Gamma function (Lanczos plus reflection), ~1e-13 relative."""
    (zz,) = _as_complex(z)
    if np.any(_near_nonpositive_integer(zz, _POLE_TOL)):
        raise PoleError("gamma_c evaluated at a non-positive integer")
    out = np.empty(zz.shape, dtype=complex)
    left = zz.real < 0.5
    if np.any(left):
        zl = zz[left]
        # reflection: Gamma(z) = pi / (sin(pi z) * Gamma(1 - z))
        out[left] = np.pi / (np.sin(np.pi * zl) * _lanczos(1.0 - zl))
    if np.any(~left):
        out[~left] = _lanczos(zz[~left])
    return _maybe_scalar(out, z)


def rgamma_c(z):
    """Reciprocal Gamma, entire; exactly zero at non-positive integers."""
    (zz,) = _as_complex(z)
    out = np.empty(zz.shape, dtype=complex)
    left = zz.real < 0.5
    if np.any(left):
        zl = zz[left]
        out[left] = np.sin(np.pi * zl) * _lanczos(1.0 - zl) / np.pi
    if np.any(~left):
        out[~left] = 1.0 / _lanczos(zz[~left])
    exact = (zz.imag == 0) & (zz.real <= 0) & (zz.real == np.round(zz.real))
    if np.any(exact):
        out[exact] = 0.0
    return _maybe_scalar(out, z)


def complex_power(base, exponent):
    """Principal-branch power exp(s * Log(z)); Log(-t) = ln t + i*pi for t > 0."""
    b, s = _as_complex(base, exponent)
    zero = b == 0
    if np.any(zero & (s.real <= 0)):
        raise DomainError("0 cannot be raised to an exponent with Re <= 0")
    log = np.zeros(b.shape, dtype=complex)
    on_axis = (b.imag == 0) & ~zero
    neg = on_axis & (b.real < 0)
    pos = on_axis & (b.real > 0)
    rest = ~on_axis & ~zero
    if np.any(neg):
        sign = _negative_axis_sign.get()
        log[neg] = np.log(-b[neg].real) + 1j * np.pi * sign
    if np.any(pos):
        log[pos] = np.log(b[pos].real)
    if np.any(rest):
        log[rest] = np.log(b[rest])
    out = np.exp(s * log)
    if np.any(zero):
        out[zero] = 0.0
    return _maybe_scalar(out, base, exponent)


def _series_sum(a, b, c, z, control, weight=None):
    """Sum the 2F1 series elementwise.

    With weight=None this is sum (a)_n (b)_n / ((c)_n n!) z^n. With
    weight="rgamma" the 1/(c)_n factor is replaced by 1/Gamma(c+n), giving
    the regularized series that stays finite for c at non-positive integers.
    """
    shape = z.shape
    if weight is None:
        term = np.ones(shape, dtype=complex)
        total = np.ones(shape, dtype=complex)
    else:
        term = np.ones(shape, dtype=complex)  # (a)_n (b)_n z^n / n!
        total = np.asarray(rgamma_c(c)).reshape(shape).copy()
    small = np.zeros(shape, dtype=np.int8)
    active = np.ones(shape, dtype=bool)
    # do not freeze while leading terms vanish identically (regularized case)
    n_min = np.zeros(shape)
    if weight is not None:
        n_min = np.maximum(0.0, np.ceil(-c.real) + 2)
    for n in range(control.max_terms):
        if not active.any():
            break
        if weight is None:
            ratio = (a + n) * (b + n) * z / ((c + n) * (n + 1.0))
            term = np.where(active, term * ratio, term)
            contrib = term
        else:
            ratio = (a + n) * (b + n) * z / (n + 1.0)
            term = np.where(active, term * ratio, term)
            contrib = term * np.asarray(rgamma_c(c + n + 1)).reshape(shape)
        total = np.where(active, total + contrib, total)
        tiny = np.abs(contrib) <= control.abs_tol + control.rel_tol * np.abs(total)
        counted = active & (n >= n_min)
        small = np.where(counted & tiny, small + 1, np.where(counted, 0, small))
        active = active & (small < 2)
    else:
        if active.any():
            raise NonConvergenceError(
                f"hypergeometric series did not settle in {control.max_terms} terms"
            )
    return total


def _connect_near_one(a, b, c, z, control, regularized, omz=None):
    """z -> 1-z linear transformation for real z in (0.5, 1).

    Valid when c-a-b is not an integer; near-degenerate parameter sets are
    nudged off the integer and a warning is issued, exactly degenerate ones
    raise (the caller can perturb the energy instead).  omz, when given, is
    an exact value of 1-z (callers whose argument sits within float rounding
    of 1 must supply it, or the dominant (1-z)^d factor inherits the
    cancellation error of the subtraction).
    """
    d = c - a - b
    near = np.round(d.real)
    dist = np.abs(d - near)
    degmask = dist < _DEGENERATE_TOL
    if np.any(degmask):
        if not regularized and np.any(degmask & (dist == 0.0)):
            raise DegenerateParameterError(
                "c - a - b is an exact integer; the z -> 1-z connection is degenerate"
            )
        warnings.warn(
            "c - a - b within 1e-9 of an integer; parameters perturbed",
            DegenerateParameterWarning,
            stacklevel=3,
        )
        c = np.where(degmask, c + _DEGENERATE_SHIFT, c)
        d = c - a - b
    if omz is None:
        omz = 1.0 - z
    f1 = _series_sum(a, b, 1.0 - d, omz, control)
    f2 = _series_sum(c - a, c - b, 1.0 + d, omz, control)
    pref2 = complex_power(omz, d)
    if regularized:
        term1 = gamma_c(d) * rgamma_c(c - a) * rgamma_c(c - b) * f1
        term2 = pref2 * gamma_c(-d) * rgamma_c(a) * rgamma_c(b) * f2
    else:
        gc = gamma_c(c)
        term1 = gc * gamma_c(d) * rgamma_c(c - a) * rgamma_c(c - b) * f1
        term2 = pref2 * gc * gamma_c(-d) * rgamma_c(a) * rgamma_c(b) * f2
    return term1 + term2


def _hyp2f1_array(a, b, c, z, control, regularized, omz=None):
    out = np.empty(z.shape, dtype=complex)
    done = np.zeros(z.shape, dtype=bool)

    at_zero = z == 0
    if np.any(at_zero):
        out[at_zero] = rgamma_c(c[at_zero]) if regularized else 1.0
        done |= at_zero

    real_z = z.imag == 0

    # far negative real axis: Pfaff map w = z/(z-1) lands in [1/3, 1); the
    # image complement 1-w = 1/(1-z) is formed directly so no precision is
    # lost when w hugs 1
    pfaff = ~done & real_z & (z.real <= -0.5)
    if np.any(pfaff):
        zp = z[pfaff]
        w = zp / (zp - 1.0)
        inner = _hyp2f1_array(
            a[pfaff], c[pfaff] - b[pfaff], c[pfaff], w, control, regularized,
            omz=1.0 / (1.0 - zp),
        )
        out[pfaff] = complex_power(1.0 - zp, -a[pfaff]) * inner
        done |= pfaff

    # an argument that merely rounds to 1.0 is recoverable when the caller
    # supplied a genuine positive complement: the connection formula below
    # runs entirely on 1-z and never touches z itself
    rescued = np.zeros(z.shape, dtype=bool)
    if omz is not None:
        rescued = (real_z & (z.real == 1.0)
                   & (omz.imag == 0.0) & (omz.real > 0.0))
    if np.any(~done & real_z & (z.real >= 1.0) & ~rescued):
        raise DomainError("2F1 is not evaluated for real z >= 1 (branch cut)")

    near_one = ~done & real_z & ((z.real > 0.5) & (z.real < 1.0) | rescued)
    if np.any(near_one):
        out[near_one] = _connect_near_one(
            a[near_one], b[near_one], c[near_one], z[near_one], control,
            regularized, omz=None if omz is None else omz[near_one]
        )
        done |= near_one

    series = ~done & (np.abs(z) <= 0.9)
    if np.any(series):
        idx = series
        if regularized:
            out[idx] = _series_sum(a[idx], b[idx], c[idx], z[idx], control, weight="rgamma")
        else:
            out[idx] = _series_sum(a[idx], b[idx], c[idx], z[idx], control)
        done |= series

    if np.any(~done):
        # last resort for complex arguments near the unit circle
        rem = ~done
        zr = z[rem]
        w = zr / (zr - 1.0)
        if np.any(np.abs(w) > 0.9):
            raise DomainError("2F1 argument outside the supported domain")
        inner = _hyp2f1_array(a[rem], c[rem] - b[rem], c[rem], w, control, regularized)
        out[rem] = complex_power(1.0 - zr, -a[rem]) * inner
    return out


def hyp2f1(a, b, c, z, control: SeriesControl = DEFAULT_SERIES,
           one_minus_z=None):
    """Gauss hypergeometric 2F1(a, b; c; z) for complex parameters.

    Direct series for small |z|, Pfaff transformation for z <= -0.5, and the
    z -> 1-z connection formula for real z in (0.5, 1). Real z >= 1 (the
    branch cut) is rejected.  Pass one_minus_z when the argument lies within
    float rounding of 1 and an exact complement is available (e.g. logistic
    arguments 1/(1+u) whose complement u/(1+u) is known analytically).
    """
    aa, bb, cc, zz = _as_complex(a, b, c, z)
    if np.any(_near_nonpositive_integer(cc, _POLE_TOL)):
        raise PoleError("2F1 lower parameter c at a non-positive integer")
    oo = None
    if one_minus_z is not None:
        oo = np.broadcast_to(np.asarray(one_minus_z, dtype=complex), zz.shape)
    out = _hyp2f1_array(aa, bb, cc, zz, control, regularized=False, omz=oo)
    return _maybe_scalar(out, a, b, c, z)


def hyp2f1_regularized(a, b, c, z,
                       control: SeriesControl = DEFAULT_SERIES,
                       one_minus_z=None):
    """Regularized hypergeometric 2F1(a, b; c; z) / Gamma(c), entire in c.

    Away from the poles of Gamma(c) this is the plain ratio; close to a
    non-positive integer c it switches to the termwise 1/Gamma(c+n) series
    (or the Gamma-free form of the connection formula), so the value stays
    finite and continuous across the pole.
    """
    aa, bb, cc, zz = _as_complex(a, b, c, z)
    oo = None
    if one_minus_z is not None:
        oo = np.broadcast_to(np.asarray(one_minus_z, dtype=complex), zz.shape)
    near_pole = _near_nonpositive_integer(cc, _REGULARIZED_POLE_TOL)
    if not np.any(near_pole):
        out = _hyp2f1_array(aa, bb, cc, zz, control, regularized=False, omz=oo)
        out = out * np.asarray(rgamma_c(cc)).reshape(out.shape)
    else:
        out = _hyp2f1_array(aa, bb, cc, zz, control, regularized=True, omz=oo)
    return _maybe_scalar(out, a, b, c, z)
