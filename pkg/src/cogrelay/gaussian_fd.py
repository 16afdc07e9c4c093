"""Full-duplex Gaussian schemes: closed-form rates, optimal binning, regions.

Channel model (unit noise variances):

    Y1 = X1 + b*X2 + Z1        received by destination 1
    Y2 = a*X1 + X2 + Z2        received by destination 2
    Y  = c*X1 + Z              received by sender 2 (the cognitive relay)

Two schemes are evaluated:

- Partial decode-forward binning ("pdf-bin"): sender 1 splits power over a
  forwarded part (alpha, beta) and a direct private part (gamma); sender 2
  re-encodes the decoded forwarded part with correlation rho against its own
  Gelfand-Pinsker-binned transmission of power mu**2.
- Han-Kobayashi PDF binning ("hk-pdf-bin"): additionally rate-splits both
  users into public/private parts (gamma public and delta private at sender
  1, theta public and mu private at sender 2), with conditional binning of
  sender 2's private part against the forwarded codeword.

The binning coefficient lambda combines transmit signal and decoded state in
the auxiliary variable U = X + lambda*S; its optimum has a closed form that
this module exposes together with the covariance-determinant objective it
minimizes, so the closed form can be checked against a 1-D numeric search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import region_ops
from .core import (
    ChannelGains,
    GridSpec,
    PowerBudget,
    RatePoint,
    RateRegion,
    capacity_arr,
    gaussian_capacity,
    refine_fractions,
    refine_scalars,
    simplex_fractions,
)

#: Order of the seven region bounds returned by the *_bounds functions:
#: R1, R2, three R1+R2 bounds, 2*R1+R2, R1+2*R2.
BOUND_LABELS = ("r1", "r2", "sum_a", "sum_b", "sum_c", "two_r1_r2", "r1_two_r2")

#: Constraint normals of the seven-bound polygon plus the two axes.
SEVEN_BOUND_NORMALS = np.array(
    [[1, 0], [0, 1], [1, 1], [1, 1], [1, 1], [2, 1], [1, 2], [-1, 0], [0, -1]],
    dtype=float,
)

_POWER_SLACK = 1e-9


@dataclass(frozen=True)
class BinningState:
    """Gelfand-Pinsker binning coefficient."""

    lam: float

    def __post_init__(self):
        if not math.isfinite(self.lam):
            raise ValueError("binning coefficient must be finite")


@dataclass(frozen=True)
class FdPdfBinAlloc:
    """Power allocation of the full-duplex PDF-binning scheme.

    alpha, beta, gamma: sender-1 amplitudes on the previous-block forwarded
    codeword, the current forwarded codeword and the private codeword.
    mu: sender-2 amplitude scale; rho in [-1, 1] correlates sender 2's
    transmission with the forwarded codeword it decoded.
    """

    alpha: float
    beta: float
    gamma: float
    mu: float
    rho: float

    def __post_init__(self):
        if abs(self.rho) > 1.0:
            raise ValueError(f"|rho| must be <= 1, got {self.rho}")

    def validate_against(self, budget: PowerBudget) -> None:
        if self.alpha**2 + self.beta**2 + self.gamma**2 > budget.p1 + _POWER_SLACK:
            raise ValueError("sender-1 power constraint violated")
        if self.mu**2 > budget.p2 + _POWER_SLACK:
            raise ValueError("sender-2 power constraint violated")


@dataclass(frozen=True)
class FdHkPdfBinAlloc:
    """Power allocation of the full-duplex Han-Kobayashi PDF-binning scheme.

    Sender 1: alpha (previous forwarded), beta (current forwarded), gamma
    (public), delta (private). Sender 2: theta (public), mu (private/binned),
    rho as in the PDF-binning scheme.
    """

    alpha: float
    beta: float
    gamma: float
    delta: float
    theta: float
    mu: float
    rho: float

    def __post_init__(self):
        if abs(self.rho) > 1.0:
            raise ValueError(f"|rho| must be <= 1, got {self.rho}")

    def validate_against(self, budget: PowerBudget) -> None:
        p1_used = self.alpha**2 + self.beta**2 + self.gamma**2 + self.delta**2
        if p1_used > budget.p1 + _POWER_SLACK:
            raise ValueError("sender-1 power constraint violated")
        if self.theta**2 + self.mu**2 > budget.p2 + _POWER_SLACK:
            raise ValueError("sender-2 power constraint violated")


# ---------------------------------------------------------------------------
# PDF-binning closed forms
# ---------------------------------------------------------------------------

def _pdf_bound_arrays(g: ChannelGains, al, be, ga, mu, rho):
    """The two R1 bounds and the R2 bound of the PDF-binning scheme."""
    a, b, c = g.a, g.b, g.c
    s = 1.0 - rho**2
    d1 = b * b * mu * mu * s + 1.0
    r1a = capacity_arr(c * c * be * be / (c * c * ga * ga + 1.0)) + capacity_arr(
        ga * ga / d1
    )
    r1b = capacity_arr(((al + b * mu * rho) ** 2 + be * be + ga * ga) / d1)
    r2 = capacity_arr(mu * mu * s / (a * a * be * be + a * a * ga * ga + 1.0))
    return r1a, r1b, r2


def fd_pdf_bin_rates(g: ChannelGains, alloc: FdPdfBinAlloc) -> RatePoint:
    """Corner point (min of the two R1 bounds, the R2 bound), clamped at 0."""
    r1a, r1b, r2 = _pdf_bound_arrays(
        g,
        np.float64(alloc.alpha),
        np.float64(alloc.beta),
        np.float64(alloc.gamma),
        np.float64(alloc.mu),
        np.float64(alloc.rho),
    )
    return RatePoint(max(0.0, float(min(r1a, r1b))), max(0.0, float(r2)))


def fd_pdf_bin_lambda_star(g: ChannelGains, alloc: FdPdfBinAlloc) -> BinningState:
    """Closed-form optimal binning coefficient for PDF binning.

    lambda* = (a*alpha*mu^2*(1-rho^2) - mu*rho*(a^2*beta^2 + a^2*gamma^2 + 1))
              / (a^2*beta^2 + a^2*gamma^2 + mu^2*(1-rho^2) + 1)

    At rho = 0 this is the classical dirty-paper coefficient
    a*alpha*mu^2 / (a^2*beta^2 + a^2*gamma^2 + mu^2 + 1).
    """
    a = g.a
    s = 1.0 - alloc.rho**2
    inter = a * a * alloc.beta**2 + a * a * alloc.gamma**2 + 1.0
    num = a * alloc.alpha * alloc.mu**2 * s - alloc.mu * alloc.rho * inter
    return BinningState(num / (inter + alloc.mu**2 * s))


def fd_bin_det_objective(g: ChannelGains, alloc: FdPdfBinAlloc, lam: float) -> float:
    """det cov(U2, Y2) as a function of the binning coefficient.

    U2 = X2 + lam*S where S is the decoded forwarded codeword; minimizing
    this determinant over lam maximizes the binned rate, and the minimizer
    is fd_pdf_bin_lambda_star.
    """
    a = g.a
    s = 1.0 - alloc.rho**2
    coh = a * alloc.alpha + alloc.mu * alloc.rho
    var_u = alloc.mu**2 + lam**2 + 2.0 * alloc.mu * alloc.rho * lam
    e_uy = (alloc.mu * alloc.rho + lam) * coh + alloc.mu**2 * s
    var_y = coh**2 + a * a * alloc.beta**2 + a * a * alloc.gamma**2 + alloc.mu**2 * s + 1.0
    return var_u * var_y - e_uy**2


# ---------------------------------------------------------------------------
# Han-Kobayashi PDF-binning closed forms
# ---------------------------------------------------------------------------

def _hk_bound_arrays(g: ChannelGains, al, be, ga, de, th, mu, rho):
    """Seven region bounds of the HK PDF-binning scheme, order BOUND_LABELS.

    Shapes broadcast; returns an array of shape (7,) + broadcast shape.
    """
    a, b, c = g.a, g.b, g.c
    s = 1.0 - rho**2
    dn = b * b * mu * mu * s + 1.0
    fwd = (al + b * mu * rho) ** 2
    t_fwd = capacity_arr(fwd / (be**2 + ga**2 + de**2 + b * b * th**2 + dn))
    i2 = capacity_arr(c * c * be**2 / (c * c * ga**2 + c * c * de**2 + 1.0))
    i3 = capacity_arr(de**2 / dn)
    i4 = capacity_arr((be**2 + de**2) / dn) + t_fwd
    i5 = capacity_arr((ga**2 + de**2) / dn)
    i6 = capacity_arr((be**2 + ga**2 + de**2) / dn) + t_fwd
    i7 = capacity_arr((de**2 + b * b * th**2) / dn)
    i8 = capacity_arr((be**2 + de**2 + b * b * th**2) / dn) + t_fwd
    i9 = capacity_arr((ga**2 + de**2 + b * b * th**2) / dn)
    i10 = capacity_arr((fwd + be**2 + ga**2 + de**2 + b * b * th**2) / dn)
    d2 = (a * al + mu * rho) ** 2 + a * a * be**2 + a * a * de**2 + mu * mu * s + 1.0
    binned = capacity_arr(mu * mu * s / (a * a * be**2 + a * a * de**2 + 1.0))
    i12m = binned + capacity_arr(th**2 / d2)
    i13m = binned + capacity_arr(a * a * ga**2 / d2)
    i14m = binned + capacity_arr((a * a * ga**2 + th**2) / d2)
    r1 = np.minimum(i2 + i5, i6)
    sum_a = np.minimum(i2 + i7, i8) + i13m
    sum_b = np.minimum(i2 + i3, i4) + i14m
    sum_c = np.minimum(i2 + i9, i10) + binned
    two_r1 = np.minimum(i2 + i3, i4) + np.minimum(i2 + i9, i10) + i13m
    two_r2 = np.minimum(i2 + i7, i8) + binned + i14m
    return np.stack(np.broadcast_arrays(r1, i12m, sum_a, sum_b, sum_c, two_r1, two_r2))


def fd_hk_pdf_bin_rates(g: ChannelGains, alloc: FdHkPdfBinAlloc) -> np.ndarray:
    """Right-hand sides of the seven region inequalities (order BOUND_LABELS)."""
    b = _hk_bound_arrays(
        g,
        np.float64(alloc.alpha),
        np.float64(alloc.beta),
        np.float64(alloc.gamma),
        np.float64(alloc.delta),
        np.float64(alloc.theta),
        np.float64(alloc.mu),
        np.float64(alloc.rho),
    )
    return np.maximum(b.reshape(7), 0.0)


def fd_hk_pdf_bin_lambda_star(g: ChannelGains, alloc: FdHkPdfBinAlloc) -> BinningState:
    """Optimal binning coefficient of the HK PDF-binning scheme.

    Same form as the PDF-binning optimum with the interference term
    a^2*beta^2 + a^2*delta^2 (current forwarded plus private codewords of
    sender 1, the parts receiver 2 cannot strip).
    """
    a = g.a
    s = 1.0 - alloc.rho**2
    inter = a * a * alloc.beta**2 + a * a * alloc.delta**2 + 1.0
    num = a * alloc.alpha * alloc.mu**2 * s - alloc.mu * alloc.rho * inter
    return BinningState(num / (inter + alloc.mu**2 * s))


def fd_hk_bin_det_objective(g: ChannelGains, alloc: FdHkPdfBinAlloc, lam: float) -> float:
    """det cov(U22', Y2') for the HK scheme (public parts conditioned away)."""
    a = g.a
    s = 1.0 - alloc.rho**2
    coh = a * alloc.alpha + alloc.mu * alloc.rho
    var_u = alloc.mu**2 + lam**2 + 2.0 * alloc.mu * alloc.rho * lam
    e_uy = (alloc.mu * alloc.rho + lam) * coh + alloc.mu**2 * s
    var_y = coh**2 + a * a * alloc.beta**2 + a * a * alloc.delta**2 + alloc.mu**2 * s + 1.0
    return var_u * var_y - e_uy**2


# ---------------------------------------------------------------------------
# Region sweeps
# ---------------------------------------------------------------------------

def _mesh(*arrays):
    """Cartesian product of 1-D or 2-D (rows) arrays, column-stacked."""
    parts = [a.reshape(len(a), -1) for a in arrays]
    out = parts[0]
    for p in parts[1:]:
        out = np.concatenate(
            [np.repeat(out, len(p), axis=0), np.tile(p, (len(out), 1))], axis=1
        )
    return out


def _frontier_seeds(pts: np.ndarray, cap: int = 40) -> np.ndarray:
    """Indices of up to `cap` evenly spaced Pareto points (refinement seeds)."""
    idx = region_ops.pareto_indices(pts)
    fro = pts[idx]
    order = np.argsort(fro[:, 0])
    idx = idx[order]
    if len(idx) > cap:
        pick = np.linspace(0, len(idx) - 1, cap).round().astype(int)
        idx = idx[np.unique(pick)]
    return idx


def _neighbor_rows(row_parts, steps):
    """Joint neighbor grid of one seed: each part jittered by +-step."""
    cand = []
    for part, step in zip(row_parts, steps):
        kind, value, lo, hi = part
        if kind == "simplex":
            cand.append(refine_fractions(value[None, :], step))
        else:
            cand.append(refine_scalars(np.array([value]), step, lo, hi)[:, None])
    return _mesh(*cand)


def _polygon_points(bounds: np.ndarray, chunk: int = 120_000):
    """Feasible polygon vertices for a (7, N) batch of bound vectors."""
    bounds = np.maximum(bounds, 0.0)
    n = bounds.shape[1]
    pts_out, col_out = [], []
    for lo in range(0, n, chunk):
        part = bounds[:, lo : lo + chunk]
        rhs = np.concatenate([part, np.zeros((2, part.shape[1]))], axis=0)
        pts, mask, col = region_ops.polygon_vertices(SEVEN_BOUND_NORMALS, rhs)
        pts_out.append(pts[mask])
        col_out.append(col[mask] + lo)
    return np.concatenate(pts_out), np.concatenate(col_out)


def fd_pdf_bin_region(
    g: ChannelGains,
    budget: PowerBudget,
    grid: GridSpec,
    rho_values: np.ndarray | None = None,
) -> RateRegion:
    """Hull of PDF-binning corner points over the power/correlation grid.

    `rho_values` replaces the default correlation grid (e.g. [0.0] evaluates
    the scheme without state correlation).
    """
    f1 = simplex_fractions(3, grid.power)
    fmu = np.linspace(0.0, 1.0, grid.power + 1)
    rho = grid.rho_grid() if rho_values is None else np.asarray(rho_values, float)
    params = _mesh(f1, fmu, rho)  # columns: fa, fb, fg, fmu, rho

    def corner(par):
        al = np.sqrt(par[:, 0] * budget.p1)
        be = np.sqrt(par[:, 1] * budget.p1)
        ga = np.sqrt(par[:, 2] * budget.p1)
        mu = np.sqrt(par[:, 3] * budget.p2)
        r1a, r1b, r2 = _pdf_bound_arrays(g, al, be, ga, mu, par[:, 4])
        return np.column_stack([np.minimum(r1a, r1b), r2])

    pts = corner(params)
    step_f = 0.5 / grid.power
    step_r = 1.0 / max(grid.rho - 1, 1) if len(rho) > 1 else 0.0
    for _ in range(grid.refine):
        seeds = params[_frontier_seeds(pts)]
        rows = [
            _neighbor_rows(
                [
                    ("simplex", s[0:3], None, None),
                    ("scalar", s[3], 0.0, 1.0),
                    ("scalar", s[4], -1.0, 1.0),
                ],
                [step_f, step_f, step_r],
            )
            for s in seeds
        ]
        extra = np.unique(np.concatenate(rows), axis=0)
        params = np.concatenate([params, extra])
        pts = np.concatenate([pts, corner(extra)])
        step_f *= 0.5
        step_r *= 0.5
    return RateRegion.from_points(pts)


def _hk_region_from_grids(g, budget, grid, f1, f2, rho_values):
    """Shared sweep for the HK PDF-binning region and its special cases."""

    def polygon(par):
        al = np.sqrt(par[:, 0] * budget.p1)
        be = np.sqrt(par[:, 1] * budget.p1)
        ga = np.sqrt(par[:, 2] * budget.p1)
        de = np.sqrt(par[:, 3] * budget.p1)
        th = np.sqrt(par[:, 4] * budget.p2)
        mu = np.sqrt(par[:, 5] * budget.p2)
        bounds = _hk_bound_arrays(g, al, be, ga, de, th, mu, par[:, 6])
        return _polygon_points(bounds)

    params = _mesh(f1, f2, rho_values)
    pts, col = polygon(params)
    step_f = 0.5 / grid.power
    step_r = 1.0 / max(grid.rho - 1, 1) if len(rho_values) > 1 else 0.0
    for _ in range(grid.refine):
        seeds = params[col[_frontier_seeds(pts)]]
        rows = [
            _neighbor_rows(
                [
                    ("simplex", s[0:4], None, None),
                    ("simplex", s[4:6], None, None),
                    ("scalar", s[6], -1.0, 1.0),
                ],
                [step_f, step_f, step_r],
            )
            for s in seeds
        ]
        extra = np.unique(np.concatenate(rows), axis=0)
        new_pts, new_col = polygon(extra)
        params = np.concatenate([params, extra])
        pts = np.concatenate([pts, new_pts])
        col = np.concatenate([col, new_col + len(params) - len(extra)])
        step_f *= 0.5
        step_r *= 0.5
    return RateRegion.from_points(pts)


def fd_hk_pdf_bin_region(
    g: ChannelGains,
    budget: PowerBudget,
    grid: GridSpec,
    rho_values: np.ndarray | None = None,
) -> RateRegion:
    """Hull of the per-allocation seven-bound polygons of the HK PDF scheme."""
    f1 = simplex_fractions(4, grid.power)
    f2 = simplex_fractions(2, grid.power)
    rho = grid.rho_grid() if rho_values is None else np.asarray(rho_values, float)
    return _hk_region_from_grids(g, budget, grid, f1, f2, rho)


def hk_region(g: ChannelGains, budget: PowerBudget, grid: GridSpec) -> RateRegion:
    """Plain Han-Kobayashi baseline: no forwarding, no state correlation.

    Equals the HK PDF-binning sweep restricted to alpha = beta = 0, rho = 0,
    so it is an exact sub-sweep of fd_hk_pdf_bin_region on matched grids.
    """
    f1_small = simplex_fractions(2, grid.power)
    f1 = np.zeros((len(f1_small), 4))
    f1[:, 2:] = f1_small
    f2 = simplex_fractions(2, grid.power)
    return _hk_region_from_grids(g, budget, grid, f1, f2, np.array([0.0]))


# ---------------------------------------------------------------------------
# Corner-point optimizers
# ---------------------------------------------------------------------------

def _refine_max(objective, fracs: np.ndarray, resolution: int, rounds: int = 20,
                starts: int = 8):
    """Maximize objective(fractions) by grid search plus local refinement."""
    vals = objective(fracs)
    order = np.argsort(vals)[::-1]
    seeds = fracs[order[:starts]]
    best_val = float(vals[order[0]])
    best = seeds[0]
    for seed in seeds:
        cur, cur_val, step = seed, float(objective(seed[None, :])[0]), 0.5 / resolution
        for _ in range(rounds):
            cand = refine_fractions(cur[None, :], step)
            cvals = objective(cand)
            k = int(np.argmax(cvals))
            if cvals[k] > cur_val:
                cur, cur_val = cand[k], float(cvals[k])
            step *= 0.5
        if cur_val > best_val:
            best, best_val = cur, cur_val
    return best_val, best


def fd_max_r1(g: ChannelGains, budget: PowerBudget, grid: GridSpec | None = None) -> float:
    """Maximum R1 of the PDF-binning scheme (rho = +-1 corner).

    Maximizes min{ C(c^2 b^2 / (c^2 g^2 + 1)) + C(g^2),
                   C((a + b*sqrt(P2))^2 + b^2 + g^2) }
    over alpha^2 + beta^2 + gamma^2 <= P1, with sender 2 fully coherent.
    """
    res = max(grid.power if grid is not None else 0, 16)
    b_amp = g.b * math.sqrt(budget.p2)

    def objective(fracs):
        al = np.sqrt(fracs[:, 0] * budget.p1)
        be2 = fracs[:, 1] * budget.p1
        ga2 = fracs[:, 2] * budget.p1
        relay = capacity_arr(g.c**2 * be2 / (g.c**2 * ga2 + 1.0)) + capacity_arr(ga2)
        direct = capacity_arr((al + b_amp) ** 2 + be2 + ga2)
        return np.minimum(relay, direct)

    val, _ = _refine_max(objective, simplex_fractions(3, res), res)
    return val


def fd_max_r2(budget: PowerBudget) -> float:
    """Maximum R2: the interference-free dirty-paper rate C(P2)."""
    return gaussian_capacity(budget.p2)
