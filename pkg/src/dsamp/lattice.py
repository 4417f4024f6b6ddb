"""Multi-index set over {0,1}^n, truncated lattice windows, node coordinates."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

MAX_DIM = 16
_MAX_WINDOW = 2 ** 31


class DimensionError(ValueError):
    """Dimension outside the supported range 1..16."""


class WindowTooLargeError(ValueError):
    """Truncation window would enumerate more than 2**31 nodes."""


@dataclass(frozen=True)
class MultiIndex:
    """Element of {0,1}^n selecting which mixed first partial is meant."""

    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(self.bits)
        if len(bits) < 1:
            raise ValueError("MultiIndex needs at least one axis")
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"MultiIndex entries must be 0 or 1, got {bits}")
        object.__setattr__(self, "bits", tuple(int(b) for b in bits))

    @property
    def dim(self) -> int:
        return len(self.bits)

    @property
    def order(self) -> int:
        """|k|: number of axes carrying a derivative."""
        return sum(self.bits)

    @classmethod
    def zero(cls, n: int) -> "MultiIndex":
        return cls((0,) * n)

    @classmethod
    def from_string(cls, s: str) -> "MultiIndex":
        if not s or any(c not in "01" for c in s):
            raise ValueError(f"multi-index string must be nonempty 0/1 digits, got {s!r}")
        return cls(tuple(int(c) for c in s))

    def to_string(self) -> str:
        return "".join(str(b) for b in self.bits)

    def __iter__(self):
        return iter(self.bits)

    def __len__(self):
        return len(self.bits)


@dataclass(frozen=True)
class Bandwidth:
    """Per-axis spectral half-widths sigma_j > 0 (radians per unit length)."""

    sigma: tuple[float, ...]

    def __post_init__(self):
        sig = tuple(float(s) for s in self.sigma)
        if len(sig) < 1:
            raise ValueError("Bandwidth needs at least one axis")
        if any(not math.isfinite(s) or s <= 0.0 for s in sig):
            raise ValueError(f"bandwidths must be finite and positive, got {sig}")
        object.__setattr__(self, "sigma", sig)

    @property
    def dim(self) -> int:
        return len(self.sigma)

    def as_array(self) -> np.ndarray:
        return np.array(self.sigma)

    def __iter__(self):
        return iter(self.sigma)

    def __len__(self):
        return len(self.sigma)


@dataclass(frozen=True)
class TruncationWindow:
    """Per-axis node-index radii: the window holds all m with |m_j| <= tau_j."""

    tau: tuple[int, ...]

    def __post_init__(self):
        raw = tuple(self.tau)
        if len(raw) < 1:
            raise ValueError("TruncationWindow needs at least one axis")
        if any(t != int(t) or int(t) < 0 for t in raw):
            raise ValueError(f"window radii must be nonnegative integers, got {raw}")
        object.__setattr__(self, "tau", tuple(int(t) for t in raw))

    @property
    def dim(self) -> int:
        return len(self.tau)

    @property
    def cardinality(self) -> int:
        out = 1
        for t in self.tau:
            out *= 2 * t + 1
        return out

    def contains(self, m) -> bool:
        m = tuple(m)
        return len(m) == self.dim and all(abs(mj) <= tj for mj, tj in zip(m, self.tau))

    def __iter__(self):
        return iter(self.tau)

    def __len__(self):
        return len(self.tau)


def enum_multi_indices(n: int) -> list[MultiIndex]:
    """All 2**n multi-indices in binary-counting order, axis 1 = least significant bit."""
    if not isinstance(n, int) or not 1 <= n <= MAX_DIM:
        raise DimensionError(f"dimension must be an integer in 1..{MAX_DIM}, got {n}")
    return [MultiIndex(tuple((code >> j) & 1 for j in range(n))) for code in range(1 << n)]


def enum_window(tau: TruncationWindow) -> list[tuple[int, ...]]:
    """All integer vectors m with |m_j| <= tau_j, in lexicographic order.

    The order (m_1 slowest) is part of the contract: series summation
    follows it so results are reproducible.
    """
    if tau.cardinality > _MAX_WINDOW:
        raise WindowTooLargeError(
            f"window holds {tau.cardinality} nodes, more than the 2**31 limit")
    return list(itertools.product(*(range(-t, t + 1) for t in tau.tau)))


def lattice_coords(m, sigma, spacing_theta: int) -> np.ndarray:
    """Physical node coordinates u_j = spacing_theta * pi * m_j / sigma_j."""
    if spacing_theta not in (1, 2):
        raise ValueError(f"spacing_theta must be 1 or 2, got {spacing_theta}")
    mm = np.asarray(m, dtype=float)
    sig = sigma.as_array() if isinstance(sigma, Bandwidth) else np.asarray(sigma, dtype=float)
    if mm.shape != sig.shape:
        raise ValueError(f"index length {mm.shape} does not match bandwidth length {sig.shape}")
    return window_coords(mm, sig, spacing_theta)


def window_coords(ms: np.ndarray, sig: np.ndarray, spacing_theta: int) -> np.ndarray:
    """Vectorised lattice_coords: ms may be (n,) or (W, n); sig is (n,)."""
    return spacing_theta * math.pi * np.asarray(ms, dtype=float) / np.asarray(sig, dtype=float)
