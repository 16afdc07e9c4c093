"""Half-duplex Gaussian schemes: 2-phase rates, optimal binning, regions.

The transmission block is split into a listening phase of duration tau
(sender 1 transmits X11; sender 2, both destinations listen) and a
transmission phase of duration 1 - tau (both senders transmit):

    phase 1:  Y  = c*X11 + Z,  Y11 = X11 + Z11,  Y21 = a*X11 + Z21
    phase 2:  Y12 = X12 + b*X22 + Z12,  Y22 = a*X12 + X22 + Z22

Power pools across phases: tau*E[X11^2] + (1-tau)*E[X12^2] <= P1 and
(1-tau)*E[X22^2] <= P2, so per-phase amplitudes grow as the phase shrinks.
Every per-phase mutual-information term is weighted by its phase duration.

Note on the maximum-R1 corner: with full coherence (rho = +-1) sender 2
spends all of P2 on forwarding, which under the pooled constraint means an
amplitude of sqrt(P2 / (1 - tau)) during phase 2, and that is the amplitude
used here (the unscaled sqrt(P2) appears only if the pooling is ignored).
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
    refine_fractions,
    refine_scalars,
    simplex_fractions,
)
from .gaussian_fd import (
    SEVEN_BOUND_NORMALS,
    BinningState,
    _mesh,
    _frontier_seeds,
    _neighbor_rows,
    _polygon_points,
)

_POWER_SLACK = 1e-9


@dataclass(frozen=True)
class HdPdfBinAlloc:
    """Allocation of the half-duplex PDF-binning scheme.

    tau: phase-1 time fraction. alpha1: phase-1 amplitude of the forwarded
    codeword; alpha2, gamma2: phase-2 amplitudes of the forwarded and private
    codewords; mu, rho as in the full-duplex scheme.
    """

    tau: float
    alpha1: float
    alpha2: float
    gamma2: float
    mu: float
    rho: float

    def __post_init__(self):
        if not 0.0 <= self.tau <= 1.0:
            raise ValueError(f"tau must lie in [0, 1], got {self.tau}")
        if abs(self.rho) > 1.0:
            raise ValueError(f"|rho| must be <= 1, got {self.rho}")

    def validate_against(self, budget: PowerBudget) -> None:
        tb = 1.0 - self.tau
        p1_used = self.tau * self.alpha1**2 + tb * (self.alpha2**2 + self.gamma2**2)
        if p1_used > budget.p1 + _POWER_SLACK:
            raise ValueError("sender-1 pooled power constraint violated")
        if tb * self.mu**2 > budget.p2 + _POWER_SLACK:
            raise ValueError("sender-2 pooled power constraint violated")


@dataclass(frozen=True)
class HdHkPdfBinAlloc:
    """Allocation of the half-duplex Han-Kobayashi PDF-binning scheme.

    Adds the phase-2 public split: beta2 at sender 1 and theta at sender 2.
    """

    tau: float
    alpha1: float
    alpha2: float
    beta2: float
    gamma2: float
    theta: float
    mu: float
    rho: float

    def __post_init__(self):
        if not 0.0 <= self.tau <= 1.0:
            raise ValueError(f"tau must lie in [0, 1], got {self.tau}")
        if abs(self.rho) > 1.0:
            raise ValueError(f"|rho| must be <= 1, got {self.rho}")

    def validate_against(self, budget: PowerBudget) -> None:
        tb = 1.0 - self.tau
        p1_used = self.tau * self.alpha1**2 + tb * (
            self.alpha2**2 + self.beta2**2 + self.gamma2**2
        )
        if p1_used > budget.p1 + _POWER_SLACK:
            raise ValueError("sender-1 pooled power constraint violated")
        if tb * (self.mu**2 + self.theta**2) > budget.p2 + _POWER_SLACK:
            raise ValueError("sender-2 pooled power constraint violated")


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------

def _hd_pdf_bound_arrays(g: ChannelGains, tau, a1, a2, g2, mu, rho):
    a, b, c = g.a, g.b, g.c
    tb = 1.0 - tau
    s = 1.0 - rho**2
    d1 = b * b * mu * mu * s + 1.0
    r1a = tau * capacity_arr(c * c * a1 * a1) + tb * capacity_arr(g2 * g2 / d1)
    r1b = tau * capacity_arr(a1 * a1) + tb * capacity_arr(
        ((a2 + b * mu * rho) ** 2 + g2 * g2) / d1
    )
    r2 = tb * capacity_arr(mu * mu * s / (a * a * g2 * g2 + 1.0))
    return r1a, r1b, r2


def hd_pdf_bin_rates(g: ChannelGains, alloc: HdPdfBinAlloc) -> RatePoint:
    """Corner point (min of the two R1 bounds, the R2 bound), clamped at 0."""
    r1a, r1b, r2 = _hd_pdf_bound_arrays(
        g,
        np.float64(alloc.tau),
        np.float64(alloc.alpha1),
        np.float64(alloc.alpha2),
        np.float64(alloc.gamma2),
        np.float64(alloc.mu),
        np.float64(alloc.rho),
    )
    return RatePoint(max(0.0, float(min(r1a, r1b))), max(0.0, float(r2)))


def _hd_hk_bound_arrays(g: ChannelGains, tau, a1, a2, b2, g2, th, mu, rho):
    """Seven bounds of the half-duplex HK PDF-binning scheme."""
    a, b, c = g.a, g.b, g.c
    tb = 1.0 - tau
    s = 1.0 - rho**2
    dn = b * b * mu * mu * s + 1.0
    fwd = (a2 + b * mu * rho) ** 2
    p1_listen = tau * capacity_arr(a1 * a1)
    i2 = tau * capacity_arr(c * c * a1 * a1)
    i3 = tb * capacity_arr(g2**2 / dn)
    i4 = p1_listen + tb * capacity_arr((fwd + g2**2) / dn)
    i5 = tb * capacity_arr((b2**2 + g2**2) / dn)
    i6 = p1_listen + tb * capacity_arr((fwd + b2**2 + g2**2) / dn)
    i7 = tb * capacity_arr((g2**2 + b * b * th**2) / dn)
    i8 = p1_listen + tb * capacity_arr((fwd + g2**2 + b * b * th**2) / dn)
    i9 = tb * capacity_arr((b2**2 + g2**2 + b * b * th**2) / dn)
    i10 = p1_listen + tb * capacity_arr((fwd + b2**2 + g2**2 + b * b * th**2) / dn)
    d2 = (a * a2 + mu * rho) ** 2 + a * a * g2**2 + mu * mu * s + 1.0
    binned = tb * capacity_arr(mu * mu * s / (a * a * g2**2 + 1.0))
    i12m = binned + tb * capacity_arr(th**2 / d2)
    i13m = binned + tb * capacity_arr(a * a * b2**2 / d2)
    i14m = binned + tb * capacity_arr((a * a * b2**2 + th**2) / d2)
    r1 = np.minimum(i2 + i5, i6)
    sum_a = np.minimum(i2 + i7, i8) + i13m
    sum_b = np.minimum(i2 + i3, i4) + i14m
    sum_c = np.minimum(i2 + i9, i10) + binned
    two_r1 = np.minimum(i2 + i3, i4) + np.minimum(i2 + i9, i10) + i13m
    two_r2 = np.minimum(i2 + i7, i8) + binned + i14m
    return np.stack(np.broadcast_arrays(r1, i12m, sum_a, sum_b, sum_c, two_r1, two_r2))


def hd_hk_pdf_bin_rates(g: ChannelGains, alloc: HdHkPdfBinAlloc) -> np.ndarray:
    """Right-hand sides of the seven region inequalities (order as in
    gaussian_fd.BOUND_LABELS), clamped at 0."""
    b = _hd_hk_bound_arrays(
        g,
        np.float64(alloc.tau),
        np.float64(alloc.alpha1),
        np.float64(alloc.alpha2),
        np.float64(alloc.beta2),
        np.float64(alloc.gamma2),
        np.float64(alloc.theta),
        np.float64(alloc.mu),
        np.float64(alloc.rho),
    )
    return np.maximum(b.reshape(7), 0.0)


def hd_lambda_star(g: ChannelGains, alloc: HdHkPdfBinAlloc) -> BinningState:
    """Optimal binning coefficient, phase-2 symbols.

    lambda* = (a*alpha2*mu^2*(1-rho^2) - mu*rho*(a^2*gamma2^2 + 1))
              / (a^2*gamma2^2 + mu^2*(1-rho^2) + 1)
    """
    a = g.a
    s = 1.0 - alloc.rho**2
    inter = a * a * alloc.gamma2**2 + 1.0
    num = a * alloc.alpha2 * alloc.mu**2 * s - alloc.mu * alloc.rho * inter
    return BinningState(num / (inter + alloc.mu**2 * s))


def hd_bin_det_objective(g: ChannelGains, alloc: HdHkPdfBinAlloc, lam: float) -> float:
    """det cov(U22', Y22') with phase-2 symbols; minimized at hd_lambda_star."""
    a = g.a
    s = 1.0 - alloc.rho**2
    coh = a * alloc.alpha2 + alloc.mu * alloc.rho
    var_u = alloc.mu**2 + lam**2 + 2.0 * alloc.mu * alloc.rho * lam
    e_uy = (alloc.mu * alloc.rho + lam) * coh + alloc.mu**2 * s
    var_y = coh**2 + a * a * alloc.gamma2**2 + alloc.mu**2 * s + 1.0
    return var_u * var_y - e_uy**2


# ---------------------------------------------------------------------------
# Region sweeps
# ---------------------------------------------------------------------------

def _phase_amplitudes(frac, power, phase_len):
    """Amplitude sqrt(frac*power/phase_len), 0 when the phase has no length.

    Grid construction guarantees frac == 0 whenever phase_len == 0.
    """
    safe = np.maximum(phase_len, 1e-300)
    return np.sqrt(np.where(phase_len > 0.0, frac * power / safe, 0.0))


def _valid_phase_rows(tau, f_phase1, f_phase2_total):
    """Energy may only be assigned to phases of positive duration."""
    ok1 = (tau > 0.0) | (f_phase1 == 0.0)
    ok2 = (tau < 1.0) | (f_phase2_total == 0.0)
    return ok1 & ok2


def hd_pdf_bin_region(
    g: ChannelGains,
    budget: PowerBudget,
    grid: GridSpec,
    rho_values: np.ndarray | None = None,
) -> RateRegion:
    """Hull of half-duplex PDF-binning corner points over the sweep grid."""
    f1 = simplex_fractions(3, grid.power)  # energy shares of (a1, a2, g2)
    fmu = np.linspace(0.0, 1.0, grid.power + 1)
    rho = grid.rho_grid() if rho_values is None else np.asarray(rho_values, float)
    params = _mesh(f1, fmu, grid.tau_grid(), rho)

    def keep(par):
        return par[_valid_phase_rows(par[:, 4], par[:, 0], par[:, 1] + par[:, 2] + par[:, 3])]

    def corner(par):
        tau = par[:, 4]
        tb = 1.0 - tau
        a1 = _phase_amplitudes(par[:, 0], budget.p1, tau)
        a2 = _phase_amplitudes(par[:, 1], budget.p1, tb)
        g2 = _phase_amplitudes(par[:, 2], budget.p1, tb)
        mu = _phase_amplitudes(par[:, 3], budget.p2, tb)
        r1a, r1b, r2 = _hd_pdf_bound_arrays(g, tau, a1, a2, g2, mu, par[:, 5])
        return np.column_stack([np.minimum(r1a, r1b), r2])

    params = keep(params)
    pts = corner(params)
    step_f = 0.5 / grid.power
    step_t = 1.0 / max(grid.tau - 1, 1)
    step_r = 1.0 / max(grid.rho - 1, 1) if len(rho) > 1 else 0.0
    for _ in range(grid.refine):
        seeds = params[_frontier_seeds(pts)]
        rows = [
            _neighbor_rows(
                [
                    ("simplex", s[0:3], None, None),
                    ("scalar", s[3], 0.0, 1.0),
                    ("scalar", s[4], 0.0, 1.0),
                    ("scalar", s[5], -1.0, 1.0),
                ],
                [step_f, step_f, step_t, step_r],
            )
            for s in seeds
        ]
        extra = keep(np.unique(np.concatenate(rows), axis=0))
        if len(extra):
            params = np.concatenate([params, extra])
            pts = np.concatenate([pts, corner(extra)])
        step_f *= 0.5
        step_t *= 0.5
        step_r *= 0.5
    return RateRegion.from_points(pts)


def hd_hk_pdf_bin_region(
    g: ChannelGains,
    budget: PowerBudget,
    grid: GridSpec,
    rho_values: np.ndarray | None = None,
) -> RateRegion:
    """Hull of the per-allocation seven-bound polygons, half duplex."""
    f1 = simplex_fractions(4, grid.power)  # energy shares of (a1, a2, b2, g2)
    f2 = simplex_fractions(2, grid.power)  # energy shares of (theta, mu)
    rho = grid.rho_grid() if rho_values is None else np.asarray(rho_values, float)
    params = _mesh(f1, f2, grid.tau_grid(), rho)
    # columns: f_a1 f_a2 f_b2 f_g2 f_th f_mu tau rho

    def keep(par):
        phase2 = par[:, 1] + par[:, 2] + par[:, 3] + par[:, 4] + par[:, 5]
        return par[_valid_phase_rows(par[:, 6], par[:, 0], phase2)]

    def polygon(par):
        tau = par[:, 6]
        tb = 1.0 - tau
        a1 = _phase_amplitudes(par[:, 0], budget.p1, tau)
        a2 = _phase_amplitudes(par[:, 1], budget.p1, tb)
        b2 = _phase_amplitudes(par[:, 2], budget.p1, tb)
        g2 = _phase_amplitudes(par[:, 3], budget.p1, tb)
        th = _phase_amplitudes(par[:, 4], budget.p2, tb)
        mu = _phase_amplitudes(par[:, 5], budget.p2, tb)
        bounds = _hd_hk_bound_arrays(g, tau, a1, a2, b2, g2, th, mu, par[:, 7])
        return _polygon_points(bounds)

    params = keep(params)
    pts, col = polygon(params)
    step_f = 0.5 / grid.power
    step_t = 1.0 / max(grid.tau - 1, 1)
    step_r = 1.0 / max(grid.rho - 1, 1) if len(rho) > 1 else 0.0
    for _ in range(grid.refine):
        seeds = params[col[_frontier_seeds(pts)]]
        rows = [
            _neighbor_rows(
                [
                    ("simplex", s[0:4], None, None),
                    ("simplex", s[4:6], None, None),
                    ("scalar", s[6], 0.0, 1.0),
                    ("scalar", s[7], -1.0, 1.0),
                ],
                [step_f, step_f, step_t, step_r],
            )
            for s in seeds
        ]
        extra = keep(np.unique(np.concatenate(rows), axis=0))
        if len(extra):
            new_pts, new_col = polygon(extra)
            params = np.concatenate([params, extra])
            pts = np.concatenate([pts, new_pts])
            col = np.concatenate([col, new_col + len(params) - len(extra)])
        step_f *= 0.5
        step_t *= 0.5
        step_r *= 0.5
    return RateRegion.from_points(pts)


# ---------------------------------------------------------------------------
# Corner-point optimizer
# ---------------------------------------------------------------------------

def hd_max_r1(
    g: ChannelGains,
    budget: PowerBudget,
    grid: GridSpec | None = None,
    partial: bool = True,
) -> float:
    """Maximum R1 of the half-duplex PDF-binning scheme (rho = +-1 corner).

    Maximizes min{ tau*C(c^2 a1^2) + (1-tau)*C(g2^2),
                   tau*C(a1^2) + (1-tau)*C((a2 + b*sqrt(P2/(1-tau)))^2 + g2^2) }
    over the pooled power constraint tau*a1^2 + (1-tau)*(a2^2 + g2^2) <= P1.
    With partial=False the private stream is dropped (g2 = 0), which is pure
    decode-forward relaying.
    """
    res = max(grid.power if grid is not None else 0, 12)
    taus = np.linspace(0.0, 1.0, max(grid.tau if grid is not None else 0, 33))

    def objective(tau_arr, fracs):
        tau = tau_arr
        tb = 1.0 - tau
        a1 = _phase_amplitudes(fracs[:, 0], budget.p1, tau)
        a2 = _phase_amplitudes(fracs[:, 1], budget.p1, tb)
        g2 = _phase_amplitudes(fracs[:, 2], budget.p1, tb)
        mu_c = _phase_amplitudes(np.ones_like(tau), budget.p2, tb)
        relay = tau * capacity_arr(g.c**2 * a1**2) + tb * capacity_arr(g2**2)
        direct = tau * capacity_arr(a1**2) + tb * capacity_arr(
            (a2 + g.b * mu_c) ** 2 + g2**2
        )
        return np.minimum(relay, direct)

    fr = simplex_fractions(3, res)
    if not partial:
        fr = fr[fr[:, 2] == 0.0]
    best_val = 0.0
    best = (0.0, fr[0])
    for tau in taus:
        rows = fr
        if tau == 0.0:
            rows = fr[fr[:, 0] == 0.0]
        elif tau == 1.0:
            rows = fr[(fr[:, 1] == 0.0) & (fr[:, 2] == 0.0)]
        vals = objective(np.full(len(rows), tau), rows)
        k = int(np.argmax(vals))
        if vals[k] > best_val:
            best_val = float(vals[k])
            best = (float(tau), rows[k])
    # Local joint refinement of (tau, fractions) around the incumbent.
    tau0, f0 = best
    step_f = 0.5 / res
    step_t = 0.5 / max(len(taus) - 1, 1)
    for _ in range(22):
        f_cand = refine_fractions(f0[None, :], step_f)
        if not partial:
            f_cand = f_cand[f_cand[:, 2] == 0.0]
        t_cand = refine_scalars(np.array([tau0]), step_t, 0.0, 1.0)
        for tau in t_cand:
            rows = f_cand
            if tau == 0.0:
                rows = f_cand[f_cand[:, 0] == 0.0]
            elif tau == 1.0:
                rows = f_cand[(f_cand[:, 1] == 0.0) & (f_cand[:, 2] == 0.0)]
            if not len(rows):
                continue
            vals = objective(np.full(len(rows), tau), rows)
            k = int(np.argmax(vals))
            if vals[k] > best_val:
                best_val = float(vals[k])
                tau0, f0 = float(tau), rows[k]
        step_f *= 0.5
        step_t *= 0.5
    return best_val
