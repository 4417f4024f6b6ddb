"""Bit-exact persistence of sample sets (DSAMP text format) and CSV field export."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np

from .lattice import Bandwidth, MultiIndex, TruncationWindow, enum_multi_indices, enum_window

FORMAT_VERSION = 1
VALUE_KINDS = ("real", "complex")


class DsampFormatError(ValueError):
    """Malformed DSAMP input; carries the offending 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True, eq=True)
class SampleSet:
    """Values of the mixed partials d^k f on a truncated sampling lattice.

    Nodes sit at u = theta*pi*m/sigma for integer vectors m inside the
    truncation window; ``records`` maps (k, m) to the sampled value. ``p``
    is metadata: the claimed L^p membership of the source function.
    """

    sigma: Bandwidth
    theta: int
    tau: TruncationWindow
    p: float
    value_kind: str
    records: Mapping[tuple[MultiIndex, tuple[int, ...]], complex]

    def __post_init__(self):
        if self.theta not in (1, 2):
            raise ValueError(f"theta must be 1 or 2, got {self.theta}")
        if self.tau.dim != self.sigma.dim:
            raise ValueError("sigma and tau dimension mismatch")
        if not (math.isfinite(self.p) and self.p >= 1.0):
            raise ValueError(f"p must be a finite real >= 1, got {self.p}")
        if self.value_kind not in VALUE_KINDS:
            raise ValueError(f"value_kind must be one of {VALUE_KINDS}")
        clean: dict[tuple[MultiIndex, tuple[int, ...]], complex] = {}
        for (k, m), v in self.records.items():
            if not isinstance(k, MultiIndex):
                k = MultiIndex(tuple(k))
            m = tuple(int(mj) for mj in m)
            if k.dim != self.dim:
                raise ValueError(f"record k={k.to_string()} has wrong dimension")
            if not self.tau.contains(m):
                raise ValueError(f"record m={m} lies outside the window {self.tau.tau}")
            if self.theta == 1 and k.order != 0:
                raise ValueError("theta=1 lattices admit only k=0 records")
            v = complex(v)
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ValueError(f"non-finite value at k={k.to_string()}, m={m}")
            if self.value_kind == "real" and v.imag != 0.0:
                raise ValueError(f"non-real value in a real-kind set at k={k.to_string()}, m={m}")
            clean[(k, m)] = v
        object.__setattr__(self, "records", MappingProxyType(clean))

    @property
    def dim(self) -> int:
        return self.sigma.dim

    def value(self, k: MultiIndex, m) -> complex:
        return self.records[(k, tuple(m))]

    def channel_complete(self, k: MultiIndex) -> bool:
        """True when every window node carries a record for channel k."""
        return all((k, m) in self.records for m in enum_window(self.tau))

    def channel_values(self, k: MultiIndex) -> np.ndarray:
        """Channel k values in window (lexicographic) order.

        Raises KeyError on the first missing node; callers wanting a
        friendlier error should test channel_complete first.
        """
        vals = [self.records[(k, m)] for m in enum_window(self.tau)]
        if self.value_kind == "real":
            return np.array([v.real for v in vals])
        return np.array(vals, dtype=complex)

    def __eq__(self, other):
        if not isinstance(other, SampleSet):
            return NotImplemented
        return (self.sigma == other.sigma and self.theta == other.theta
                and self.tau == other.tau and self.p == other.p
                and self.value_kind == other.value_kind
                and dict(self.records) == dict(other.records))


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _write_text(destination, text: str) -> None:
    if isinstance(destination, (str, Path)):
        with open(destination, "w", newline="\n") as fh:
            fh.write(text)
    else:
        destination.write(text)


def _read_text(source) -> str:
    if isinstance(source, (str, Path)):
        with open(source, "r", newline="") as fh:
            return fh.read()
    return source.read()


def write_samples(samples: SampleSet, destination) -> None:
    """Emit the DSAMP text form, 17 significant digits per value.

    Records go out in canonical order (k in binary-counting order, then m
    lexicographic) so equal sample sets produce byte-identical files.
    """
    lines = [
        f"dsamp {FORMAT_VERSION}",
        f"dim {samples.dim}",
        "sigma " + " ".join(_fmt(s) for s in samples.sigma),
        f"theta {samples.theta}",
        "tau " + " ".join(str(t) for t in samples.tau),
        f"p {_fmt(samples.p)}",
        f"kind {samples.value_kind}",
    ]
    for k in enum_multi_indices(samples.dim):
        for m in enum_window(samples.tau):
            v = samples.records.get((k, m))
            if v is None:
                continue
            lines.append(k.to_string() + " " + " ".join(str(mj) for mj in m)
                         + f" {_fmt(v.real)} {_fmt(v.imag)}")
    _write_text(destination, "\n".join(lines) + "\n")


def _header_tokens(lines: list[str], idx: int, key: str) -> list[str]:
    if idx >= len(lines):
        raise DsampFormatError(idx + 1, f"missing '{key}' header line")
    toks = lines[idx].split(" ")
    if not toks or toks[0] != key or "" in toks:
        raise DsampFormatError(idx + 1, f"expected '{key} ...', got {lines[idx]!r}")
    return toks[1:]


def read_samples(source) -> SampleSet:
    """Parse a DSAMP stream; malformed input raises a line-numbered error."""
    lines = _read_text(source).splitlines()

    version = _header_tokens(lines, 0, "dsamp")
    if version != [str(FORMAT_VERSION)]:
        raise DsampFormatError(1, f"unsupported format version {' '.join(version)!r}")
    dim_toks = _header_tokens(lines, 1, "dim")
    try:
        n = int(dim_toks[0]) if len(dim_toks) == 1 else None
    except ValueError:
        n = None
    if n is None or n < 1:
        raise DsampFormatError(2, "dim must be a single positive integer")
    sig_toks = _header_tokens(lines, 2, "sigma")
    if len(sig_toks) != n:
        raise DsampFormatError(3, f"expected {n} bandwidth entries, got {len(sig_toks)}")
    try:
        sigma = Bandwidth(tuple(float(t) for t in sig_toks))
    except ValueError as exc:
        raise DsampFormatError(3, str(exc)) from None
    theta_toks = _header_tokens(lines, 3, "theta")
    if theta_toks not in (["1"], ["2"]):
        raise DsampFormatError(4, "theta must be 1 or 2")
    theta = int(theta_toks[0])
    tau_toks = _header_tokens(lines, 4, "tau")
    if len(tau_toks) != n:
        raise DsampFormatError(5, f"expected {n} window radii, got {len(tau_toks)}")
    try:
        tau = TruncationWindow(tuple(int(t) for t in tau_toks))
    except ValueError as exc:
        raise DsampFormatError(5, str(exc)) from None
    p_toks = _header_tokens(lines, 5, "p")
    try:
        p = float(p_toks[0]) if len(p_toks) == 1 else math.nan
    except ValueError:
        p = math.nan
    if not (math.isfinite(p) and p >= 1.0):
        raise DsampFormatError(6, "p must be a finite real >= 1")
    kind_toks = _header_tokens(lines, 6, "kind")
    if len(kind_toks) != 1 or kind_toks[0] not in VALUE_KINDS:
        raise DsampFormatError(7, f"kind must be one of {VALUE_KINDS}")
    kind = kind_toks[0]

    records: dict[tuple[MultiIndex, tuple[int, ...]], complex] = {}
    for lineno, raw in enumerate(lines[7:], start=8):
        toks = raw.split(" ")
        if len(toks) != 1 + n + 2 or "" in toks:
            raise DsampFormatError(lineno, f"expected '<kbits> <m1..m{n}> <re> <im>', got {raw!r}")
        try:
            k = MultiIndex.from_string(toks[0])
        except ValueError as exc:
            raise DsampFormatError(lineno, str(exc)) from None
        if k.dim != n:
            raise DsampFormatError(lineno, f"multi-index {toks[0]!r} has wrong length")
        try:
            m = tuple(int(t) for t in toks[1:1 + n])
        except ValueError:
            raise DsampFormatError(lineno, f"node indices must be integers, got {raw!r}") from None
        if not tau.contains(m):
            raise DsampFormatError(lineno, f"node m={m} lies outside the window {tau.tau}")
        if theta == 1 and k.order != 0:
            raise DsampFormatError(lineno, "theta=1 sets admit only k=0 records")
        try:
            re, im = float(toks[1 + n]), float(toks[2 + n])
        except ValueError:
            raise DsampFormatError(lineno, f"malformed value fields in {raw!r}") from None
        if not (math.isfinite(re) and math.isfinite(im)):
            raise DsampFormatError(lineno, "non-finite sample value")
        if kind == "real" and im != 0.0:
            raise DsampFormatError(lineno, "nonzero imaginary part in a real-kind file")
        key = (k, m)
        if key in records:
            raise DsampFormatError(lineno, f"duplicate record for k={toks[0]}, m={m}")
        records[key] = complex(re, im)

    return SampleSet(sigma=sigma, theta=theta, tau=tau, p=p, value_kind=kind, records=records)


def write_field(values, grid: Sequence[Sequence[float]], destination) -> None:
    """CSV export of a dense tensor-grid field.

    One row per grid point in row-major order (first axis slowest):
    coordinates, then the value column ("value" for real arrays, "re,im"
    for complex ones). 17 significant digits throughout, so coordinates
    and values round-trip exactly.
    """
    vals = np.asarray(values)
    axes = [[float(g) for g in axis] for axis in grid]
    shape = tuple(len(a) for a in axes)
    if any(s == 0 for s in shape):
        raise ValueError("empty grid axis")
    if vals.shape != shape:
        raise ValueError(f"value shape {vals.shape} does not match grid shape {shape}")
    complex_out = bool(np.iscomplexobj(vals))
    n = len(axes)
    header = ",".join(f"x{j + 1}" for j in range(n))
    header += ",re,im" if complex_out else ",value"
    rows = [header]
    for idx in itertools.product(*(range(s) for s in shape)):
        coords = ",".join(_fmt(axes[j][i]) for j, i in enumerate(idx))
        v = vals[idx]
        if complex_out:
            v = complex(v)
            rows.append(f"{coords},{_fmt(v.real)},{_fmt(v.imag)}")
        else:
            rows.append(f"{coords},{_fmt(float(v))}")
    _write_text(destination, "\n".join(rows) + "\n")
