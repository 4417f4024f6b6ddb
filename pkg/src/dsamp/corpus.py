"""Analytically known bandlimited test functions with exact mixed partials.

Every family here is a per-axis product, so its value and all 2**n mixed
first partials come from per-axis factor values and factor derivatives.
The bump-transform families need one 1-D quadrature per axis coordinate;
everything else is closed form.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass

import numpy as np

from .kernels import _point, sinc1, sinc1_deriv
from .lattice import (Bandwidth, MultiIndex, TruncationWindow, enum_multi_indices,
                      enum_window, lattice_coords)
from .sampleio import SampleSet

CORPUS_NAMES = ("sinc-sq-product", "shifted-sinc", "counterexample", "tilde-f")


class QuadratureError(RuntimeError):
    """The bump-transform quadrature refinements failed to agree."""


# ---------------------------------------------------------------------------
# Transform of the standard bump, by composite Gauss-Legendre quadrature.
#
# The bump b(t) = exp(-1/(1 - (t/a)^2)) on (-a, a) is even, so its Fourier
# transform and the transform of (-i t) b(t) reduce to the real integrals
#   bhat(zeta) = 2 int_0^a cos(zeta t) b(t) dt
#   chat(zeta) = -2 int_0^a t sin(zeta t) b(t) dt      (chat = d bhat / d zeta)
# Both extend to entire functions of zeta, which the same rule evaluates.
# ---------------------------------------------------------------------------

_GL_ORDER = 32
_MAX_AXIS_POINTS = 2 ** 14
_QUAD_RTOL = 1e-10


@functools.lru_cache(maxsize=None)
def _gl_rule(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


def _bump_values(x: np.ndarray) -> np.ndarray:
    q = 1.0 - x * x
    out = np.zeros_like(x)
    pos = q > 0
    out[pos] = np.exp(-1.0 / q[pos])
    return out


def _panel_quad(a: float, zeta, moment: bool, npanels: int):
    x0, w0 = _gl_rule(_GL_ORDER)
    total = 0.0
    for i in range(npanels):
        lo = a * i / npanels
        hi = a * (i + 1) / npanels
        t = lo + (hi - lo) * x0
        w = (hi - lo) * w0
        b = _bump_values(t / a)
        if moment:
            f = -2.0 * t * np.sin(zeta * t) * b
        else:
            f = 2.0 * np.cos(zeta * t) * b
        total = total + (w * f).sum()
    return total


def _refine(a: float, zeta, moment: bool, scale: float):
    prev = None
    npanels = 1
    while _GL_ORDER * npanels <= _MAX_AXIS_POINTS:
        val = _panel_quad(a, zeta, moment, npanels)
        if prev is not None and abs(val - prev) <= _QUAD_RTOL * scale:
            return val
        prev = val
        npanels *= 2
    raise QuadratureError(
        f"bump transform at zeta={zeta} did not converge to {_QUAD_RTOL} relative "
        f"within {_MAX_AXIS_POINTS} points per axis")


@functools.lru_cache(maxsize=None)
def _bump_mass(a: float) -> float:
    """Integral of the bump over [-a, a]; the transform's peak value."""
    prev = None
    npanels = 1
    while _GL_ORDER * npanels <= _MAX_AXIS_POINTS:
        val = float(_panel_quad(a, 0.0, False, npanels))
        if prev is not None and abs(val - prev) <= _QUAD_RTOL * abs(val):
            return val
        prev = val
        npanels *= 2
    raise QuadratureError("bump mass quadrature did not converge")


@functools.lru_cache(maxsize=None)
def _axis_transform(a: float, zeta: complex, moment: bool):
    """bhat (moment=False) or chat (moment=True) at one point, memoised.

    Convergence is judged relative to the transform's peak on the line
    Im zeta = const; a pointwise-relative test would never pass at the
    transform's zeros.
    """
    scale = _bump_mass(a) * max(1.0, math.exp(a * abs(zeta.imag)))
    if zeta.imag == 0.0:
        return float(_refine(a, zeta.real, moment, scale))
    return complex(_refine(a, zeta, moment, scale))


# ---------------------------------------------------------------------------
# Per-axis factors.
# ---------------------------------------------------------------------------


def _sin(w):
    return cmath.sin(w) if isinstance(w, complex) and w.imag != 0.0 else math.sin(
        w.real if isinstance(w, complex) else w)


def _cos(w):
    return cmath.cos(w) if isinstance(w, complex) and w.imag != 0.0 else math.cos(
        w.real if isinstance(w, complex) else w)


@dataclass(frozen=True)
class SincSqFactor:
    """sinc1(sigma t / (2 pi))**2, the squared-sinc cardinal factor."""

    sigma: float

    def value(self, t):
        s = sinc1(self.sigma * t / (2.0 * math.pi))
        return s * s

    def dvalue(self, t):
        r = self.sigma / (2.0 * math.pi)
        u = self.sigma * t / (2.0 * math.pi)
        return 2.0 * sinc1(u) * sinc1_deriv(u) * r


@dataclass(frozen=True)
class ShiftedSincFactor:
    """sinc1(sigma (t - shift) / pi), the plain cardinal factor."""

    sigma: float
    shift: float

    def value(self, t):
        return sinc1(self.sigma * (t - self.shift) / math.pi)

    def dvalue(self, t):
        return sinc1_deriv(self.sigma * (t - self.shift) / math.pi) * (self.sigma / math.pi)


@dataclass(frozen=True)
class BumpSicFactor:
    """bhat(t) times the sic_derivs-th derivative of sin(sigma t / 2)."""

    sigma: float
    half_width: float
    sic_derivs: int

    def _sic(self, t, order: int):
        h = 0.5 * self.sigma
        w = h * t
        if order == 0:
            return _sin(w)
        if order == 1:
            return h * _cos(w)
        return -(h * h) * _sin(w)

    def value(self, t):
        return _axis_transform(self.half_width, complex(t), False) * self._sic(t, self.sic_derivs)

    def dvalue(self, t):
        b = _axis_transform(self.half_width, complex(t), False)
        c = _axis_transform(self.half_width, complex(t), True)
        return c * self._sic(t, self.sic_derivs) + b * self._sic(t, self.sic_derivs + 1)


@dataclass(frozen=True)
class _RescaledFactor:
    """Argument-rescaled wrapper: value(t) = inner.value(ratio * t)."""

    inner: object
    ratio: float

    def value(self, t):
        return self.inner.value(self.ratio * t)

    def dvalue(self, t):
        return self.ratio * self.inner.dvalue(self.ratio * t)


# ---------------------------------------------------------------------------
# Corpus functions.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CorpusFunction:
    """A bandlimited function with closed-form values and mixed first partials.

    ``p_membership`` lists exponents p for which L^p membership is
    guaranteed (math.inf allowed); ``sup_norm`` is the exact supremum over
    the reals when known. Evaluation is pure and thread-safe.
    """

    name: str
    sigma: Bandwidth
    p_membership: tuple[float, ...]
    sup_norm: float | None
    factors: tuple
    scale: float = 1.0

    @property
    def dim(self) -> int:
        return self.sigma.dim

    def _coords(self, z):
        pts = _point(z)
        if len(pts) != self.dim:
            raise ValueError(f"point has {len(pts)} coordinates, function is {self.dim}-D")
        return pts

    def value(self, z):
        out = self.scale
        for fac, t in zip(self.factors, self._coords(z)):
            out = out * fac.value(t)
        return out

    def partial(self, k, z):
        """The mixed partial d^k f at z; k=0 axes use the plain factor value."""
        k = k if isinstance(k, MultiIndex) else MultiIndex(tuple(k))
        if k.dim != self.dim:
            raise ValueError(f"multi-index dimension {k.dim} != function dimension {self.dim}")
        out = self.scale
        for fac, bit, t in zip(self.factors, k.bits, self._coords(z)):
            out = out * (fac.dvalue(t) if bit else fac.value(t))
        return out

    def smallest_p(self) -> float:
        return min(p for p in self.p_membership if math.isfinite(p))


def _as_bandwidth(sigma) -> Bandwidth:
    return sigma if isinstance(sigma, Bandwidth) else Bandwidth(tuple(float(s) for s in np.atleast_1d(sigma)))


def make_sinc_sq_product(sigma) -> CorpusFunction:
    """Product of squared-sinc factors; in B^p for every p, peak value 1."""
    sig = _as_bandwidth(sigma)
    return CorpusFunction(
        name="sinc-sq-product",
        sigma=sig,
        p_membership=(1.0, 2.0, math.inf),
        sup_norm=1.0,
        factors=tuple(SincSqFactor(s) for s in sig),
    )


def make_shifted_sinc(sigma, shift) -> CorpusFunction:
    """Product of plain sinc factors centred at ``shift``; in B^p for p > 1."""
    sig = _as_bandwidth(sigma)
    sh = [float(c) for c in np.atleast_1d(shift)]
    if len(sh) != sig.dim:
        raise ValueError("shift length does not match sigma length")
    return CorpusFunction(
        name="shifted-sinc",
        sigma=sig,
        p_membership=(2.0, math.inf),
        sup_norm=1.0,
        factors=tuple(ShiftedSincFactor(s, c) for s, c in zip(sig, sh)),
    )


def _bump_half_widths(sig: Bandwidth, bump_sharpness: float) -> list[float]:
    if not (bump_sharpness > 0.0 and math.isfinite(bump_sharpness)):
        raise ValueError(f"bump sharpness must be positive, got {bump_sharpness}")
    s = min(float(bump_sharpness), 1.0)
    return [0.5 * sj * s for sj in sig]


def make_counterexample(sigma, bump_sharpness: float = 1.0) -> CorpusFunction:
    """Transform-of-bump times the sine product: nonzero, yet it and all its
    mixed first partials vanish on the whole theta=2 lattice."""
    sig = _as_bandwidth(sigma)
    widths = _bump_half_widths(sig, bump_sharpness)
    return CorpusFunction(
        name="counterexample",
        sigma=sig,
        p_membership=(1.0, 2.0, math.inf),
        sup_norm=None,
        factors=tuple(BumpSicFactor(s, a, 0) for s, a in zip(sig, widths)),
    )


def make_tilde_f(sigma, k_tilde, bump_sharpness: float = 1.0) -> CorpusFunction:
    """Exactness witness for channel k_tilde: every sampled channel other
    than k_tilde vanishes on the lattice, while k_tilde itself does not."""
    sig = _as_bandwidth(sigma)
    kt = k_tilde if isinstance(k_tilde, MultiIndex) else MultiIndex(tuple(k_tilde))
    if kt.dim != sig.dim:
        raise ValueError("k_tilde dimension does not match sigma")
    widths = _bump_half_widths(sig, bump_sharpness)
    return CorpusFunction(
        name="tilde-f",
        sigma=sig,
        p_membership=(1.0, 2.0, math.inf),
        sup_norm=None,
        factors=tuple(BumpSicFactor(s, a, 1 - b) for s, a, b in zip(sig, widths, kt.bits)),
    )


def normalize_to_pi(f: CorpusFunction) -> CorpusFunction:
    """Rescale onto the unit spectral box: g(z) = theta * f(pi z / sigma).

    theta = (prod sigma_j / pi^n)^(1/p) with p the smallest guaranteed
    finite membership exponent, so the map is an isometry for that p.
    """
    n = f.dim
    p = f.smallest_p()
    theta = (math.prod(f.sigma) / math.pi ** n) ** (1.0 / p)
    factors = tuple(_RescaledFactor(fac, math.pi / s) for fac, s in zip(f.factors, f.sigma))
    return CorpusFunction(
        name=f.name,
        sigma=Bandwidth((math.pi,) * n),
        p_membership=f.p_membership,
        sup_norm=None if f.sup_norm is None else theta * f.sup_norm,
        factors=factors,
        scale=theta * f.scale,
    )


def sample_function(f: CorpusFunction, spacing_theta: int, tau, which_k=None) -> SampleSet:
    """Evaluate the requested derivative channels on the truncated lattice.

    which_k defaults to all of E^n for theta=2 and to {0} for theta=1;
    theta=1 admits no derivative channels.
    """
    if spacing_theta not in (1, 2):
        raise ValueError(f"spacing_theta must be 1 or 2, got {spacing_theta}")
    tau = tau if isinstance(tau, TruncationWindow) else TruncationWindow(tuple(tau))
    if tau.dim != f.dim:
        raise ValueError("tau dimension does not match the function")
    if which_k is None:
        ks = enum_multi_indices(f.dim) if spacing_theta == 2 else [MultiIndex.zero(f.dim)]
    else:
        ks = [k if isinstance(k, MultiIndex) else MultiIndex(tuple(k)) for k in which_k]
        if not ks:
            raise ValueError("which_k must be nonempty")
        if any(k.dim != f.dim for k in ks):
            raise ValueError("which_k entries must match the function dimension")
    if spacing_theta == 1 and any(k.order != 0 for k in ks):
        raise ValueError("theta=1 lattices carry only plain function samples (k = 0)")

    window = enum_window(tau)
    records: dict[tuple[MultiIndex, tuple[int, ...]], complex] = {}
    all_real = True
    for k in ks:
        for m in window:
            u = lattice_coords(m, f.sigma, spacing_theta)
            v = complex(f.partial(k, u))
            if v.imag != 0.0:
                all_real = False
            records[(k, m)] = v
    return SampleSet(
        sigma=f.sigma,
        theta=spacing_theta,
        tau=tau,
        p=f.smallest_p(),
        value_kind="real" if all_real else "complex",
        records=records,
    )


def named_corpus(name: str, sigma, shift=None, bump_sharpness: float = 1.0,
                 k_tilde=None) -> CorpusFunction:
    """Build a corpus member from its CLI name."""
    sig = _as_bandwidth(sigma)
    if name == "sinc-sq-product":
        return make_sinc_sq_product(sig)
    if name == "shifted-sinc":
        return make_shifted_sinc(sig, shift if shift is not None else (0.0,) * sig.dim)
    if name == "counterexample":
        return make_counterexample(sig, bump_sharpness)
    if name == "tilde-f":
        if k_tilde is None:
            raise ValueError("tilde-f needs k_tilde")
        return make_tilde_f(sig, k_tilde, bump_sharpness)
    raise ValueError(f"unknown corpus family {name!r}; choose from {CORPUS_NAMES}")
