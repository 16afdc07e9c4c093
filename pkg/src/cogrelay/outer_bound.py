"""Gaussian 2x1 MISO broadcast outer bound for the cognitive relay channel.

Letting a genie share both messages between the two senders turns the
channel into a two-antenna broadcast channel

    Y1 = [1 b] X + Z1,    Y2 = [a 1] X + Z2,    X = U + V,

where U = (U1, V1) carries the message of user 1 and V = (U2, V2) the
message of user 2, with covariances

    K_U = [[alpha^2, rho1*alpha*beta], [rho1*alpha*beta, beta^2]]
    K_V = [[gamma^2, rho2*gamma*delta], [rho2*gamma*delta, delta^2]].

The physical budgets bind per antenna: antenna 1 is sender 1's amplifier
(alpha^2 + gamma^2 <= P1) and antenna 2 is sender 2's
(beta^2 + delta^2 <= P2). The dirty-paper region is the convex closure of
the two encoding orders; both corner-point families are swept here.
"""

from __future__ import annotations

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
from .gaussian_fd import _frontier_seeds, _mesh, _neighbor_rows

_POWER_SLACK = 1e-9

ORDERS = ("o1", "o2")


@dataclass(frozen=True)
class MisoBcAlloc:
    """Codeword powers and correlations of the genie-aided MISO broadcast.

    alpha, beta: user-1 codeword amplitudes on antennas 1 and 2.
    gamma, delta: user-2 codeword amplitudes on antennas 1 and 2.
    rho1, rho2: per-user correlation between the two antenna components.
    Per-antenna budgets: alpha^2 + gamma^2 <= P1, beta^2 + delta^2 <= P2.
    """

    alpha: float
    beta: float
    gamma: float
    delta: float
    rho1: float
    rho2: float

    def __post_init__(self):
        if abs(self.rho1) > 1.0 or abs(self.rho2) > 1.0:
            raise ValueError("correlation factors must lie in [-1, 1]")

    def validate_against(self, budget: PowerBudget) -> None:
        if self.alpha**2 + self.gamma**2 > budget.p1 + _POWER_SLACK:
            raise ValueError("antenna-1 power constraint violated")
        if self.beta**2 + self.delta**2 > budget.p2 + _POWER_SLACK:
            raise ValueError("antenna-2 power constraint violated")


def _corner_arrays(g: ChannelGains, al, be, ga, de, r1c, r2c, order: str):
    """Corner (R1, R2) of the chosen dirty-paper encoding order."""
    a, b = g.a, g.b
    q_u1 = al**2 + 2.0 * b * r1c * al * be + b * b * be**2  # user 1 power at Y1
    q_v1 = ga**2 + 2.0 * b * r2c * ga * de + b * b * de**2  # user 2 power at Y1
    q_u2 = a * a * al**2 + 2.0 * a * r1c * al * be + be**2  # user 1 power at Y2
    q_v2 = a * a * ga**2 + 2.0 * a * r2c * ga * de + de**2  # user 2 power at Y2
    if order == "o1":
        return capacity_arr(q_u1 / (q_v1 + 1.0)), capacity_arr(q_v2)
    if order == "o2":
        return capacity_arr(q_u1), capacity_arr(q_v2 / (q_u2 + 1.0))
    raise ValueError(f"unknown encoding order {order!r}")


def miso_bc_rates(g: ChannelGains, alloc: MisoBcAlloc, order: str = "o1") -> RatePoint:
    """Corner point of the chosen encoding order, clamped at 0."""
    r1, r2 = _corner_arrays(
        g,
        np.float64(alloc.alpha),
        np.float64(alloc.beta),
        np.float64(alloc.gamma),
        np.float64(alloc.delta),
        np.float64(alloc.rho1),
        np.float64(alloc.rho2),
    )
    return RatePoint(max(0.0, float(r1)), max(0.0, float(r2)))


def miso_bc_region(g: ChannelGains, budget: PowerBudget, grid: GridSpec) -> RateRegion:
    """Convex closure of both encoding orders over the allocation grid."""
    fa = simplex_fractions(2, grid.power)  # antenna-1 shares (alpha^2, gamma^2)
    fb = simplex_fractions(2, grid.power)  # antenna-2 shares (beta^2, delta^2)
    rho = grid.rho_grid()
    params = _mesh(fa, fb, rho, rho)  # columns: f_al f_ga f_be f_de rho1 rho2

    def corners(par):
        al = np.sqrt(par[:, 0] * budget.p1)
        ga = np.sqrt(par[:, 1] * budget.p1)
        be = np.sqrt(par[:, 2] * budget.p2)
        de = np.sqrt(par[:, 3] * budget.p2)
        pts = []
        for order in ORDERS:
            r1, r2 = _corner_arrays(g, al, be, ga, de, par[:, 4], par[:, 5], order)
            pts.append(np.column_stack([r1, r2]))
        return np.concatenate(pts)

    pts = corners(params)
    both = np.concatenate([params, params])
    step_f = 0.5 / grid.power
    step_r = 1.0 / max(grid.rho - 1, 1)
    for _ in range(grid.refine):
        seeds = both[_frontier_seeds(pts)]
        rows = [
            _neighbor_rows(
                [
                    ("simplex", s[0:2], None, None),
                    ("simplex", s[2:4], None, None),
                    ("scalar", s[4], -1.0, 1.0),
                    ("scalar", s[5], -1.0, 1.0),
                ],
                [step_f, step_f, step_r, step_r],
            )
            for s in seeds
        ]
        extra = np.unique(np.concatenate(rows), axis=0)
        pts = np.concatenate([pts, corners(extra)])
        both = np.concatenate([both, extra, extra])
        step_f *= 0.5
        step_r *= 0.5
    return RateRegion.from_points(pts)
