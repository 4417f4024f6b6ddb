"""Sampling-series engines.

Four series over a truncated lattice window: the classical sinc series
(theta=1 lattice, function values only), 1-D derivative sampling, the
n-D mixed-derivative series (all 2**n channels), and the three-channel
2-D formula the mixed series supersedes, kept verbatim so its failure is
demonstrable.

Every engine sums exactly the window stored in the sample set, in the
window's lexicographic order, with exact (Shewchuk) accumulation, so
results are bit-reproducible. Terms are never extrapolated beyond the
provided samples; tail control lives in the bounds module.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .kernels import _point, sinc_array
from .lattice import MultiIndex, enum_multi_indices, enum_window, window_coords
from .sampleio import SampleSet

METHODS = ("wks", "hermite1", "hermite-nd", "legacy2d")


class LatticeError(ValueError):
    """Sample set lattice (spacing or dimension) unsuitable for the method."""


class MissingChannelError(ValueError):
    """A derivative channel the method needs is absent from the sample set."""


def poly_term(deriv_value, k, lam):
    """deriv_value times the monomial prod_j lam_j^(k_j), k_j in {0,1}."""
    k = k if isinstance(k, MultiIndex) else MultiIndex(tuple(k))
    pts = _point(lam)
    if len(pts) != k.dim:
        raise ValueError("lambda length does not match multi-index length")
    out = deriv_value
    for bit, lj in zip(k.bits, pts):
        if bit:
            out = out * lj
    return out


@dataclass
class _Prepared:
    samples: SampleSet
    coords: np.ndarray                 # (W, n) node coordinates, window order
    channels: dict[MultiIndex, np.ndarray]


def _prepare(samples: SampleSet, needed: list[MultiIndex]) -> _Prepared:
    window = enum_window(samples.tau)
    ms = np.array(window, dtype=float).reshape(len(window), samples.dim)
    coords = window_coords(ms, samples.sigma.as_array(), samples.theta)
    channels: dict[MultiIndex, np.ndarray] = {}
    real = samples.value_kind == "real"
    for k in needed:
        vals = np.empty(len(window), dtype=float if real else complex)
        for i, m in enumerate(window):
            v = samples.records.get((k, m))
            if v is None:
                raise MissingChannelError(
                    f"channel k={k.to_string()} is missing (node m={m} has no record)")
            vals[i] = v.real if real else v
        channels[k] = vals
    return _Prepared(samples, coords, channels)


def _query_point(z, n: int) -> np.ndarray:
    pts = _point(z)
    if len(pts) != n:
        raise ValueError(f"query point has {len(pts)} coordinates, samples are {n}-D")
    if any(isinstance(t, complex) for t in pts):
        return np.array([complex(t) for t in pts])
    return np.array(pts, dtype=float)


def _fsum_complex(terms: np.ndarray) -> complex:
    if np.iscomplexobj(terms):
        return complex(math.fsum(terms.real.tolist()), math.fsum(terms.imag.tolist()))
    return complex(math.fsum(terms.tolist()))


def _eval(prep: _Prepared, z: np.ndarray, mode: str, drop: MultiIndex | None = None) -> complex:
    n = prep.samples.dim
    diffs = z[None, :] - prep.coords
    hits = np.nonzero(np.all(diffs == 0, axis=1))[0]
    if hits.size:
        # Exactly on a window node: all other terms carry an exact kernel
        # zero, so the series reduces to the stored function value.
        k0 = MultiIndex.zero(n)
        return complex(prep.channels[k0][hits[0]])
    sig = prep.samples.sigma.as_array()
    if mode == "wks":
        factors = sinc_array(sig * diffs / math.pi)
        kernel = np.prod(factors, axis=1)
        terms = prep.channels[MultiIndex.zero(n)] * kernel
        return _fsum_complex(terms)
    factors = sinc_array(sig * diffs / (2.0 * math.pi))
    prod = np.prod(factors, axis=1)
    kernel = prod * prod
    if mode == "legacy2d":
        inner = (prep.channels[MultiIndex((0, 0))]
                 + diffs[:, 0] * prep.channels[MultiIndex((1, 0))]
                 + diffs[:, 1] * prep.channels[MultiIndex((0, 1))])
    else:
        inner = None
        for k in enum_multi_indices(n):
            if drop is not None and k == drop:
                continue
            term = prep.channels[k]
            for j, bit in enumerate(k.bits):
                if bit:
                    term = term * diffs[:, j]
            inner = term if inner is None else inner + term
    return _fsum_complex(inner * kernel)


def _setup(samples: SampleSet, method: str, drop_channel=None):
    """Validate lattice/dimension preconditions, load the needed channels."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    if drop_channel is not None and method != "hermite-nd":
        raise ValueError("drop_channel applies only to the hermite-nd method")
    n = samples.dim
    want_theta = 1 if method == "wks" else 2
    if samples.theta != want_theta:
        raise LatticeError(
            f"{method} needs the theta={want_theta} lattice, got theta={samples.theta}")
    drop = None
    if method == "wks":
        needed, mode = [MultiIndex.zero(n)], "wks"
    elif method == "hermite1":
        if n != 1:
            raise LatticeError(f"hermite1 is 1-D only, got n={n}")
        needed, mode = enum_multi_indices(1), "hermite"
    elif method == "hermite-nd":
        if drop_channel is not None:
            drop = drop_channel if isinstance(drop_channel, MultiIndex) else MultiIndex(tuple(drop_channel))
            if drop.dim != n:
                raise ValueError("drop_channel dimension does not match the samples")
        needed, mode = enum_multi_indices(n), "hermite"
    else:
        if n != 2:
            raise LatticeError(f"legacy2d is 2-D only, got n={n}")
        needed, mode = [MultiIndex((0, 0)), MultiIndex((1, 0)), MultiIndex((0, 1))], "legacy2d"
    return _prepare(samples, needed), mode, drop


def wks_eval(samples: SampleSet, z) -> complex:
    """Classical sinc series on the theta=1 lattice (function values only)."""
    prep, mode, _ = _setup(samples, "wks")
    return _eval(prep, _query_point(z, samples.dim), mode)


def hermite1_eval(samples: SampleSet, z) -> complex:
    """1-D derivative sampling: f and f' on the theta=2 lattice."""
    prep, mode, _ = _setup(samples, "hermite1")
    return _eval(prep, _query_point(z, 1), mode)


def hermite_nd_eval(samples: SampleSet, z, drop_channel=None) -> complex:
    """The n-D mixed-derivative series over all 2**n channels.

    drop_channel, when given, zeroes that channel's polynomial out of the
    inner sum (the exactness experiment); the channel must still be present.
    """
    prep, mode, drop = _setup(samples, "hermite-nd", drop_channel)
    return _eval(prep, _query_point(z, samples.dim), mode, drop)


def legacy2d_eval(samples: SampleSet, z) -> complex:
    """The three-channel 2-D formula from the prior literature, verbatim.

    It omits the mixed (1,1) channel; the counterexample family shows it
    reconstructs the zero function from nonzero input.
    """
    prep, mode, _ = _setup(samples, "legacy2d")
    return _eval(prep, _query_point(z, 2), mode)


def reconstruct_grid(samples: SampleSet, method: str, grid, drop_channel=None) -> np.ndarray:
    """Evaluate the chosen series on a tensor grid of real points.

    Returns a dense array shaped like the grid (row-major over the axes in
    order); real dtype for real-kind samples, complex otherwise. The result
    is deterministic and independent of any parallelism.
    """
    prep, mode, drop = _setup(samples, method, drop_channel)
    axes = [[float(g) for g in axis] for axis in grid]
    if len(axes) != samples.dim:
        raise ValueError(f"grid has {len(axes)} axes, samples are {samples.dim}-D")
    if any(len(a) == 0 for a in axes):
        raise ValueError("empty grid axis")
    shape = tuple(len(a) for a in axes)
    real_out = samples.value_kind == "real"
    out = np.empty(shape, dtype=float if real_out else complex)
    for idx in itertools.product(*(range(s) for s in shape)):
        zpt = np.array([axes[j][i] for j, i in enumerate(idx)], dtype=float)
        v = _eval(prep, zpt, mode, drop)
        out[idx] = v.real if real_out else v
    return out
