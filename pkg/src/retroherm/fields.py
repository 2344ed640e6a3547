"""Uniformly sampled fields and sampled spectra."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

MIN_POINTS = 16


@dataclass(frozen=True, eq=False)
class SampledField:
    """Real values on the grid ``x0 + dx * arange(N)``.

    ``meta`` carries warning flags and solver diagnostics; it never affects
    the numbers.
    """

    x0: float
    dx: float
    values: np.ndarray
    time_tag: float = 0.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.array(self.values, dtype=float).ravel()
        if v.size < MIN_POINTS:
            raise ValueError(f"a sampled field needs at least {MIN_POINTS} points, got {v.size}")
        if not self.dx > 0:
            raise ValueError("dx must be positive")
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        if self.time_tag < 0:
            raise ValueError("time_tag must be non-negative")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def on_grid(cls, xmin, xmax, n, fn, time_tag=0.0):
        """Sample ``fn`` on ``n`` points of the half-open interval [xmin, xmax)."""
        dx = (xmax - xmin) / n
        x = xmin + dx * np.arange(n)
        return cls(float(xmin), float(dx), fn(x), time_tag)

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)

    def with_values(self, values, **changes) -> "SampledField":
        return replace(self, values=values, meta=dict(changes.pop("meta", {})), **changes)

    def decays(self, rel=1e-10) -> bool:
        """True when both end values are at most ``rel`` times the peak."""
        peak = float(np.max(np.abs(self.values)))
        if peak == 0.0:
            return True
        return max(abs(self.values[0]), abs(self.values[-1])) <= rel * peak

    def window(self, half_width, center=0.0) -> np.ndarray:
        return np.abs(self.x - center) <= half_width + 1e-12


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Complex amplitudes on a lambda grid symmetric about zero."""

    lam: np.ndarray
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        lam = np.array(self.lam, dtype=float).ravel()
        vals = np.array(self.values, dtype=complex).ravel()
        if lam.shape != vals.shape:
            raise ValueError("lambda grid and amplitudes differ in length")
        if not np.allclose(lam, -lam[::-1], atol=1e-12 * max(1.0, float(np.max(np.abs(lam))))):
            raise ValueError("spectrum lambda grid must be symmetric about 0")
        if not np.all(np.isfinite(vals)):
            raise ValueError("spectrum amplitudes must be finite")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "values", vals)


def symmetric_grid(cutoff: float, step: float) -> np.ndarray:
    """Odd-length lambda grid on [-cutoff, cutoff] with spacing at most ``step``."""
    m = max(1, int(np.ceil(cutoff / step)))
    return np.linspace(-cutoff, cutoff, 2 * m + 1)


def trapezoid_weights(grid: np.ndarray) -> np.ndarray:
    """Trapezoid weights for a uniformly spaced grid."""
    if grid.size < 2:
        return np.zeros_like(grid)
    h = grid[1] - grid[0]
    w = np.full(grid.size, h)
    w[0] = w[-1] = 0.5 * h
    return w


def rel_l2(approx, exact) -> float:
    approx, exact = np.asarray(approx), np.asarray(exact)
    den = float(np.linalg.norm(exact))
    num = float(np.linalg.norm(approx - exact))
    return num / den if den > 0 else num
