"""Sinc-type and sine-product kernels, stable at their removable singularities.

Every function here accepts real or complex arguments and is safe to call
from any number of threads. Real input yields real output. No argument
reduction is done beyond the C library's, so accuracy degrades past
|t| ~ 1e8.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

# Below this threshold on |pi*t| the quotient sin(pi t)/(pi t) is replaced
# by the series: the quotient loses up to a bit to cancellation there, the
# polynomial none.
_TAYLOR_CUTOFF = 2.0 ** -13

# sin(x)/x = 1 - x^2/6 + x^4/120 - ..., even terms through degree 10.
_SINC_COEFFS = (
    1.0,
    -1.0 / 6.0,
    1.0 / 120.0,
    -1.0 / 5040.0,
    1.0 / 362880.0,
    -1.0 / 39916800.0,
)


def _sinc_series(x):
    y = x * x
    acc = _SINC_COEFFS[-1]
    for c in reversed(_SINC_COEFFS[:-1]):
        acc = acc * y + c
    return acc


def _sinc_real(x: float) -> float:
    ax = abs(x)
    if ax == 0.0:
        return 1.0
    if ax == math.floor(ax):
        return 0.0
    px = math.pi * ax
    if px < _TAYLOR_CUTOFF:
        return _sinc_series(px)
    return math.sin(px) / px


def _sinc_complex(t: complex) -> complex:
    # Canonicalise into the closed upper half of the right half-plane so
    # that evenness and conjugate symmetry hold bit-exactly.
    if t.real < 0.0 or (t.real == 0.0 and t.imag < 0.0):
        t = -t
    if t.imag < 0.0:
        return _sinc_complex_core(t.conjugate()).conjugate()
    return _sinc_complex_core(t)


def _sinc_complex_core(t: complex) -> complex:
    x = math.pi * t
    if abs(x) < _TAYLOR_CUTOFF:
        return complex(_sinc_series(x))
    return cmath.sin(x) / x


def sinc1(t):
    """sin(pi t)/(pi t) with the singularity filled: sinc1(0) = 1.

    Even, conjugate-symmetric, and exactly zero at nonzero integers.
    Returns a float for real input, a complex for complex input.
    """
    if isinstance(t, complex):
        if t.imag == 0.0:
            return _sinc_real(t.real)
        return _sinc_complex(t)
    return _sinc_real(float(t))


def sinc1_deriv(t):
    """Derivative of sinc1: (cos(pi t) - sinc1(t))/t, with a series near 0."""
    if isinstance(t, complex) and t.imag != 0.0:
        px = math.pi * t
        if abs(px) < 0.01:
            return _sinc_deriv_series(t)
        return (cmath.cos(px) - sinc1(t)) / t
    x = t.real if isinstance(t, complex) else float(t)
    px = math.pi * x
    if abs(px) < 0.01:
        return _sinc_deriv_series(x)
    return (math.cos(px) - _sinc_real(x)) / x


def _sinc_deriv_series(x):
    # -(pi^2 x/3) * (1 - y/10 + y^2/280 - y^3/15120), y = (pi x)^2
    px = math.pi * x
    y = px * px
    return -(math.pi * math.pi / 3.0) * x * (1.0 - y / 10.0 + y * y / 280.0 - y * y * y / 15120.0)


def _point(z):
    """Coerce a scalar or 1-D collection into a list of float/complex coordinates."""
    arr = np.atleast_1d(np.asarray(z))
    if arr.ndim != 1:
        raise ValueError("expected a point (scalar or 1-D coordinate collection)")
    out = []
    for v in arr.tolist():
        if isinstance(v, complex) and v.imag == 0.0:
            out.append(v.real)
        else:
            out.append(v)
    return out


def sincn(z):
    """Product of sinc1 over the coordinates of z."""
    out = 1.0
    for zj in _point(z):
        out = out * sinc1(zj)
    return out


def _half_sin(w):
    """sin(w/2), exactly odd in w and conjugate-symmetric."""
    if isinstance(w, complex) and w.imag != 0.0:
        if w.real < 0.0 or (w.real == 0.0 and w.imag < 0.0):
            return -_half_sin(-w)
        if w.imag < 0.0:
            return _half_sin(w.conjugate()).conjugate()
        return cmath.sin(0.5 * w)
    x = w.real if isinstance(w, complex) else float(w)
    s = math.sin(0.5 * abs(x))
    return s if x >= 0.0 else -s


def sicn(z):
    """Product of sin(z_j/2) over the coordinates of z."""
    out = 1.0
    for zj in _point(z):
        out = out * _half_sin(zj)
    return out


def sinc_sq_node_kernel(z, sigma, u):
    """Squared-sinc kernel centred at node u: sincn(sigma*(z - u)/(2 pi))**2.

    Equals 1 at z = u and vanishes to second order at every other node of
    the lattice u + (2 pi/sigma) Z^n.
    """
    zz, ss, uu = _point(z), _point(sigma), _point(u)
    if not (len(zz) == len(ss) == len(uu)):
        raise ValueError("z, sigma and u must have equal length")
    prod = 1.0
    for zj, sj, uj in zip(zz, ss, uu):
        prod = prod * sinc1(sj * (zj - uj) / (2.0 * math.pi))
    return prod * prod


def sinc_array(x: np.ndarray) -> np.ndarray:
    """Vectorised sinc1 over an ndarray (real or complex dtype)."""
    x = np.asarray(x)
    px = np.pi * x
    denom = np.where(px == 0, 1.0, px)
    with np.errstate(invalid="ignore"):
        out = np.sin(px) / denom
    small = np.abs(px) < _TAYLOR_CUTOFF
    if np.any(small):
        out = np.where(small, _sinc_series(px), out)
    if np.iscomplexobj(x):
        ints = (x.imag == 0) & (x.real == np.floor(x.real)) & (x != 0)
    else:
        ints = (x == np.floor(x)) & (x != 0)
    if np.any(ints):
        out = np.where(ints, 0.0, out)
    return out
