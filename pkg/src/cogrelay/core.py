"""Shared domain types and elementary rate helpers.

Conventions used throughout the package:

- All rates and entropies are in bits (logarithms base 2).
- Channel instances are described by three gains (a, b, c) and two transmit
  power budgets (P1, P2); noise variances are normalized to 1.
- Achievable regions are represented as point clouds together with the
  convex hull of their downward closure (any achieved pair dominates every
  pair with smaller coordinates, via time sharing with silence) and the
  Pareto-maximal frontier of the stored points.

Everything here is an immutable value; all functions are pure and safe to
call concurrently.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import region_ops


def gaussian_capacity(x: float) -> float:
    """Point-to-point Gaussian capacity C(x) = 0.5*log2(1 + x) in bits.

    `x` is a signal-to-noise ratio and must be nonnegative.
    """
    if x < 0:
        raise ValueError(f"SNR must be nonnegative, got {x}")
    return 0.5 * math.log2(1.0 + x)


def capacity_arr(x):
    """Vectorized 0.5*log2(1+x); caller guarantees x >= 0."""
    return 0.5 * np.log1p(x) / math.log(2.0)


def binary_entropy(p: float) -> float:
    """Entropy of a Bernoulli(p) source in bits, with 0*log2(0) = 0."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {p}")
    h = 0.0
    if p > 0.0:
        h -= p * math.log2(p)
    if p < 1.0:
        h -= (1.0 - p) * math.log2(1.0 - p)
    return h


@dataclass(frozen=True)
class ChannelGains:
    """Cross gains of the standardized channel.

    a: gain from sender 1 to receiver 2.
    b: gain from sender 2 to receiver 1.
    c: gain of the inter-sender (relay) link; only c**2 enters any rate
       expression, so the sign is dropped on construction.
    """

    a: float
    b: float
    c: float

    def __post_init__(self):
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"gain {name} must be finite, got {v}")
        object.__setattr__(self, "c", abs(self.c))


@dataclass(frozen=True)
class PowerBudget:
    """Transmit power constraints of the two senders."""

    p1: float
    p2: float

    def __post_init__(self):
        if not (self.p1 >= 0.0 and self.p2 >= 0.0):
            raise ValueError(f"powers must be nonnegative, got {self.p1}, {self.p2}")


@dataclass(frozen=True)
class RatePoint:
    """An achievable rate pair, in bits per channel use."""

    r1: float
    r2: float

    def __post_init__(self):
        if self.r1 < 0.0 or self.r2 < 0.0:
            raise ValueError(f"rates must be nonnegative, got ({self.r1}, {self.r2})")


@dataclass(frozen=True)
class GridSpec:
    """Search resolutions for the parameter sweeps.

    power:  resolution of each power-split simplex (fractions i/power).
    rho:    number of points on the correlation grid over [-1, 1]; an odd
            value makes the grid include 0 exactly.
    tau:    number of points on the phase-split grid over [0, 1] (half
            duplex only); endpoints are always included.
    refine: number of local refinement rounds around the current hull
            vertices, each halving the previous step.
    """

    power: int = 6
    rho: int = 9
    tau: int = 33
    refine: int = 1

    def __post_init__(self):
        if self.power < 1:
            raise ValueError("power resolution must be >= 1")
        if self.rho < 2 or self.tau < 2:
            raise ValueError("swept dimensions need at least 2 grid points")
        if self.refine < 0:
            raise ValueError("refinement rounds must be nonnegative")

    def rho_grid(self) -> np.ndarray:
        return np.linspace(-1.0, 1.0, self.rho)

    def tau_grid(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.tau)


@dataclass(frozen=True)
class RateRegion:
    """A set of achievable rate pairs with its convex closure.

    points:   the achieved pairs fed in (deduplicated, nonnegative).
    hull:     counterclockwise vertices of the convex hull of the downward
              closure (points plus their axis projections and the origin).
    frontier: Pareto-maximal subset of `points`, sorted by increasing r1.
    """

    points: np.ndarray
    hull: np.ndarray
    frontier: np.ndarray

    @classmethod
    def from_points(cls, pts) -> "RateRegion":
        arr = np.asarray(pts, dtype=float).reshape(-1, 2)
        arr = arr[np.all(np.isfinite(arr), axis=1)]
        if arr.size == 0:
            raise ValueError("a rate region needs at least one finite point")
        arr = np.unique(np.clip(arr, 0.0, None), axis=0)
        frontier = region_ops.pareto_frontier(arr)
        # Downward closure: every dominated point lies in the hull spanned by
        # the frontier points, their axis projections and the origin.
        zeros = np.zeros(len(frontier))
        closure = np.concatenate(
            [
                frontier,
                np.column_stack([frontier[:, 0], zeros]),
                np.column_stack([zeros, frontier[:, 1]]),
                [[0.0, 0.0]],
            ]
        )
        hull = region_ops.convex_hull(closure)
        return cls(points=arr, hull=hull, frontier=frontier)

    @property
    def max_r1(self) -> float:
        return float(self.hull[:, 0].max())

    @property
    def max_r2(self) -> float:
        return float(self.hull[:, 1].max())

    @property
    def max_sum_rate(self) -> float:
        return float(self.hull.sum(axis=1).max())


# ---------------------------------------------------------------------------
# Power-split grids shared by the Gaussian sweeps.
# ---------------------------------------------------------------------------

def simplex_fractions(parts: int, resolution: int) -> np.ndarray:
    """All fraction tuples (f1..fk), fi = ni/resolution, with sum <= 1.

    The leftover 1 - sum(f) is unallocated power; keeping it in the grid
    matters because several rate expressions decrease in some powers.
    """
    axes = [np.arange(resolution + 1)] * parts
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, parts)
    grid = grid[grid.sum(axis=1) <= resolution]
    return grid / float(resolution)


def refine_fractions(seeds: np.ndarray, step: float) -> np.ndarray:
    """Neighbors of each seed fraction tuple at +-step per coordinate.

    Results are clipped to the simplex (coordinates >= 0, sum <= 1, scaling
    down when the perturbed sum exceeds 1).
    """
    seeds = np.asarray(seeds, dtype=float).reshape(len(seeds), -1)
    k = seeds.shape[1]
    offsets = np.array(list(itertools.product((-step, 0.0, step), repeat=k)))
    out = (seeds[:, None, :] + offsets[None, :, :]).reshape(-1, k)
    out = np.clip(out, 0.0, None)
    total = out.sum(axis=1)
    over = total > 1.0
    out[over] /= total[over][:, None]
    return np.unique(out, axis=0)


def refine_scalars(seeds: np.ndarray, step: float, lo: float, hi: float) -> np.ndarray:
    """Neighbors of scalar seeds at +-step, clipped to [lo, hi]."""
    seeds = np.asarray(seeds, dtype=float).ravel()
    out = np.concatenate([seeds - step, seeds, seeds + step])
    return np.unique(np.clip(out, lo, hi))
