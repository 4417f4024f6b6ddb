"""Computable truncation-tail certificates and checks of the supporting inequalities."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .corpus import CorpusFunction
from .kernels import _point, sinc_array
from .lattice import MultiIndex, TruncationWindow, enum_window, window_coords
from .sampleio import SampleSet


@dataclass(frozen=True)
class TailBoundReport:
    """Holder-split certificate for the series mass outside an inner window.

    bound = sample_tail_norm * kernel_factor dominates the absolute value
    of the discarded partial series at every probed point. The kernel
    factor is a maximum over the caller's probe grid, so the certificate
    is exact for those points (a grid-free uniform alternative comes from
    kernel_sum_bound).
    """

    k: MultiIndex
    tau_inner: TruncationWindow
    p1: float
    q1: float
    sample_tail_norm: float
    kernel_factor: float
    bound: float


def kernel_sum_bound(r: float, n: int) -> float:
    """Uniform bound (1 + 1/(r-1))**n on the lattice sum of |sincn|^r, r > 1."""
    if not r > 1.0:
        raise ValueError(f"kernel sum bound needs r > 1, got {r}")
    if n < 1:
        raise ValueError(f"dimension must be positive, got {n}")
    return (1.0 + 1.0 / (r - 1.0)) ** n


def lp_sample_norm(samples: SampleSet, k, p: float) -> float:
    """(sum over stored nodes of |d^k f(u)|^p)^(1/p) for one channel."""
    if not (math.isfinite(p) and p >= 1.0):
        raise ValueError(f"p must be a finite real >= 1, got {p}")
    k = k if isinstance(k, MultiIndex) else MultiIndex(tuple(k))
    vals = [abs(v) for (kk, _), v in samples.records.items() if kk == k]
    if not vals:
        raise ValueError(f"channel k={k.to_string()} has no records")
    return math.fsum(a ** p for a in vals) ** (1.0 / p)


def _outside_nodes(samples: SampleSet, tau_inner: TruncationWindow) -> list[tuple[int, ...]]:
    return [m for m in enum_window(samples.tau) if not tau_inner.contains(m)]


def tail_bound(samples: SampleSet, k, tau_inner, p1: float, probe_grid) -> TailBoundReport:
    """Certify the series mass carried by nodes outside ``tau_inner``.

    Splits |sum of discarded terms| by Holder's inequality with exponents
    (p1, q1): an l^p1 norm of the discarded samples times the q1-root of
    the worst kernel tail sum over the probe grid. The per-axis monomial
    factors |x_j - u_j|^(k_j) are absorbed into a (2/sigma_j)^(k_j)
    constant against one power of the squared sinc.
    """
    k = k if isinstance(k, MultiIndex) else MultiIndex(tuple(k))
    tau_inner = tau_inner if isinstance(tau_inner, TruncationWindow) else TruncationWindow(tuple(tau_inner))
    if k.dim != samples.dim or tau_inner.dim != samples.dim:
        raise ValueError("k and tau_inner must match the sample dimension")
    if any(ti > ts for ti, ts in zip(tau_inner, samples.tau)):
        raise ValueError("tau_inner must lie inside the stored window")
    if not (math.isfinite(p1) and p1 > 1.0 and p1 >= samples.p):
        raise ValueError(f"p1 must satisfy p1 > 1 and p1 >= samples.p={samples.p}, got {p1}")
    q1 = p1 / (p1 - 1.0)

    outside = _outside_nodes(samples, tau_inner)
    if not outside:
        return TailBoundReport(k, tau_inner, p1, q1, 0.0, 0.0, 0.0)

    absvals = []
    for m in outside:
        v = samples.records.get((k, m))
        if v is None:
            raise ValueError(f"channel k={k.to_string()} is missing node m={m}")
        absvals.append(abs(v))
    sample_tail_norm = math.fsum(a ** p1 for a in absvals) ** (1.0 / p1)

    axes = [[float(g) for g in axis] for axis in probe_grid]
    if len(axes) != samples.dim or any(len(a) == 0 for a in axes):
        raise ValueError("probe grid must supply a nonempty point list per axis")
    sig = samples.sigma.as_array()
    coords = window_coords(np.array(outside, dtype=float).reshape(len(outside), samples.dim),
                           sig, samples.theta)
    best = 0.0
    for pt in itertools.product(*axes):
        x = np.array(pt, dtype=float)
        factors = np.abs(sinc_array(sig * (x[None, :] - coords) / (2.0 * math.pi)))
        sums = math.fsum(np.prod(factors ** q1, axis=1).tolist())
        best = max(best, sums)
    prefactor = 1.0
    for sj, bit in zip(samples.sigma, k.bits):
        if bit:
            prefactor *= 2.0 / sj
    kernel_factor = prefactor * best ** (1.0 / q1)
    return TailBoundReport(k, tau_inner, p1, q1, sample_tail_norm, kernel_factor,
                           sample_tail_norm * kernel_factor)


def growth_check(f: CorpusFunction, z) -> float:
    """Ratio |f(z)| / (sup_norm * exp(pi * sum |Im z_j|)); passing means <= 1.

    The function must already live on the unit spectral box (apply
    normalize_to_pi first) and carry a known sup norm.
    """
    if f.sup_norm is None:
        raise ValueError("growth check needs a function with a known sup norm")
    if any(abs(s - math.pi) > 1e-12 for s in f.sigma):
        raise ValueError("growth check needs sigma = (pi, ..., pi); apply normalize_to_pi")
    pts = _point(z)
    if len(pts) != f.dim:
        raise ValueError("point dimension mismatch")
    imag_sum = math.fsum(abs(t.imag) if isinstance(t, complex) else 0.0 for t in pts)
    envelope = f.sup_norm * math.exp(math.pi * imag_sum)
    return abs(f.value(z)) / envelope
