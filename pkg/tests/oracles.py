"""Independent oracles used by the test suite.

Everything here is deliberately written along a different path than the
library code it checks: Gaussian mutual informations come from covariance
log-determinants of the signal construction, discrete mutual informations
from entropy sums over dict-accumulated marginals, hulls from gift
wrapping, Pareto sets from all-pairs domination, and scalar minimization
from a plain golden-section loop.
"""

from __future__ import annotations

import math

import numpy as np

LOG2 = math.log(2.0)


# ---------------------------------------------------------------------------
# Gaussian mutual information from signal covariances
# ---------------------------------------------------------------------------

def gauss_mi(rows: dict, group_a, group_b, given=()):
    """I(A;B|C) in bits for jointly Gaussian signals.

    `rows` maps signal names to coefficient vectors over iid unit-variance
    sources; covariances are L L^T.
    """

    def logdet(names):
        if not names:
            return 0.0
        mat = np.stack([rows[n] for n in names])
        sign, val = np.linalg.slogdet(mat @ mat.T)
        if sign <= 0:
            raise ValueError(f"singular covariance for {names}")
        return val

    a, b, c = tuple(group_a), tuple(group_b), tuple(given)
    return 0.5 * (logdet(a + c) + logdet(b + c) - logdet(c) - logdet(a + b + c)) / LOG2


def fd_pdf_signals(g, alloc, lam):
    """Signal rows of the full-duplex PDF-binning construction.

    Sources: s10p, s10, s11, s22, z1, z2, z.
    """
    al, be, ga, mu, rho = alloc.alpha, alloc.beta, alloc.gamma, alloc.mu, alloc.rho
    sb = math.sqrt(max(0.0, 1.0 - rho**2))
    a, b, c = g.a, g.b, g.c
    x1 = np.array([al, be, ga, 0, 0, 0, 0], float)
    x2 = np.array([mu * rho, 0, 0, mu * sb, 0, 0, 0], float)
    z1 = np.array([0, 0, 0, 0, 1, 0, 0], float)
    z2 = np.array([0, 0, 0, 0, 0, 1, 0], float)
    z = np.array([0, 0, 0, 0, 0, 0, 1], float)
    return {
        "t10": np.array([al, 0, 0, 0, 0, 0, 0], float),
        "u10": np.array([al, be, 0, 0, 0, 0, 0], float),
        "x1": x1,
        "x2": x2,
        "u2": x2 + lam * np.array([1, 0, 0, 0, 0, 0, 0], float),
        "y1": x1 + b * x2 + z1,
        "y2": a * x1 + x2 + z2,
        "y": c * x1 + z,
    }


def fd_hk_signals(g, alloc, lam):
    """Signal rows of the full-duplex HK PDF-binning construction.

    Sources: s10p, s10, s11, s12, s21, s22, z1, z2, z.
    """
    al, be, ga, de = alloc.alpha, alloc.beta, alloc.gamma, alloc.delta
    th, mu, rho = alloc.theta, alloc.mu, alloc.rho
    sb = math.sqrt(max(0.0, 1.0 - rho**2))
    a, b, c = g.a, g.b, g.c
    e = lambda i: np.eye(9)[i]
    x1 = al * e(0) + be * e(1) + ga * e(2) + de * e(3)
    x2 = th * e(4) + mu * rho * e(0) + mu * sb * e(5)
    return {
        "t10": al * e(0),
        "u10": al * e(0) + be * e(1),
        "u11": ga * e(2),
        "u21": th * e(4),
        "x1": x1,
        "x2": x2,
        "u22": x2 + lam * e(0),
        "y1": x1 + b * x2 + e(6),
        "y2": a * x1 + x2 + e(7),
        "y": c * x1 + e(8),
    }


def hd_hk_signals(g, alloc, lam):
    """Per-phase signal rows of the half-duplex HK PDF-binning construction.

    Phase 1 sources: s10, z, z11, z21. Phase 2 sources: s10, s11, s12, s21,
    s22, z12, z22 (s10 is the codeword decoded by sender 2 in phase 1).
    """
    a, b, c = g.a, g.b, g.c
    sb = math.sqrt(max(0.0, 1.0 - alloc.rho**2))
    e4 = lambda i: np.eye(4)[i]
    phase1 = {
        "x11": alloc.alpha1 * e4(0),
        "y": c * alloc.alpha1 * e4(0) + e4(1),
        "y11": alloc.alpha1 * e4(0) + e4(2),
        "y21": a * alloc.alpha1 * e4(0) + e4(3),
    }
    e7 = lambda i: np.eye(7)[i]
    x12 = alloc.alpha2 * e7(0) + alloc.beta2 * e7(1) + alloc.gamma2 * e7(2)
    x22 = alloc.theta * e7(3) + alloc.mu * alloc.rho * e7(0) + alloc.mu * sb * e7(4)
    phase2 = {
        "s10": e7(0),
        "u11": alloc.beta2 * e7(1),
        "u21": alloc.theta * e7(3),
        "x12": x12,
        "x22": x22,
        "u22": x22 + lam * e7(0),
        "y12": x12 + b * x22 + e7(5),
        "y22": a * x12 + x22 + e7(6),
    }
    return phase1, phase2


def gauss_thm2_bounds(g, alloc, lam):
    """The seven FD HK region bounds evaluated as Gaussian MIs at `lam`."""
    rows = fd_hk_signals(g, alloc, lam)
    mi = lambda a, b, c=(): gauss_mi(rows, a, b, c)
    t_y1 = mi(("t10",), ("y1",))
    i = {
        1: mi(("u22",), ("t10",), ("u21",)),
        2: mi(("u10",), ("y",), ("t10",)),
        3: mi(("x1",), ("y1",), ("t10", "u10", "u11", "u21")),
        4: mi(("u10", "x1"), ("y1",), ("t10", "u11", "u21")) + t_y1,
        5: mi(("u11", "x1"), ("y1",), ("t10", "u10", "u21")),
        6: mi(("u10", "u11", "x1"), ("y1",), ("t10", "u21")) + t_y1,
        7: mi(("x1", "u21"), ("y1",), ("t10", "u10", "u11")),
        8: mi(("u10", "x1", "u21"), ("y1",), ("t10", "u11")) + t_y1,
        9: mi(("u11", "x1", "u21"), ("y1",), ("t10", "u10")),
        10: mi(("t10", "u10", "u11", "x1", "u21"), ("y1",)),
        11: mi(("u22",), ("y2",), ("u21", "u11")),
        12: mi(("u21", "u22"), ("y2",), ("u11",)),
        13: mi(("u11", "u22"), ("y2",), ("u21",)),
        14: mi(("u11", "u21", "u22"), ("y2",)),
    }
    return seven_bounds(i)


def gauss_thm4_bounds(g, alloc, lam):
    """The seven HD HK region bounds as tau-weighted per-phase Gaussian MIs."""
    p1, p2 = hd_hk_signals(g, alloc, lam)
    mi1 = lambda a, b, c=(): gauss_mi(p1, a, b, c)
    mi2 = lambda a, b, c=(): gauss_mi(p2, a, b, c)
    tau = alloc.tau
    tb = 1.0 - tau
    direct = mi1(("x11",), ("y11",))
    i = {
        1: tb * mi2(("u22",), ("s10",), ("u21",)),
        2: tau * mi1(("x11",), ("y",)),
        3: tb * mi2(("x12",), ("y12",), ("s10", "u11", "u21")),
        4: tau * direct + tb * mi2(("s10", "x12"), ("y12",), ("u11", "u21")),
        5: tb * mi2(("u11", "x12"), ("y12",), ("s10", "u21")),
        6: tau * direct + tb * mi2(("s10", "u11", "x12"), ("y12",), ("u21",)),
        7: tb * mi2(("x12", "u21"), ("y12",), ("s10", "u11")),
        8: tau * direct + tb * mi2(("s10", "x12", "u21"), ("y12",), ("u11",)),
        9: tb * mi2(("u11", "x12", "u21"), ("y12",), ("s10",)),
        10: tau * direct + tb * mi2(("s10", "u11", "x12", "u21"), ("y12",)),
        11: tb * mi2(("u22",), ("y22",), ("u21", "u11")),
        12: tb * mi2(("u21", "u22"), ("y22",), ("u11",)),
        13: tb * mi2(("u11", "u22"), ("y22",), ("u21",)),
        14: tb * mi2(("u11", "u21", "u22"), ("y22",)),
    }
    return seven_bounds(i)


def seven_bounds(i: dict) -> np.ndarray:
    b0 = min(i[2] + i[5], i[6])
    b1 = i[12] - i[1]
    b2 = min(i[2] + i[7], i[8]) + i[13] - i[1]
    b3 = min(i[2] + i[3], i[4]) + i[14] - i[1]
    b4 = min(i[2] + i[9], i[10]) + i[11] - i[1]
    b5 = min(i[2] + i[3], i[4]) + min(i[2] + i[9], i[10]) + i[13] - i[1]
    b6 = min(i[2] + i[7], i[8]) + (i[11] - i[1]) + (i[14] - i[1])
    return np.array([b0, b1, b2, b3, b4, b5, b6])


# ---------------------------------------------------------------------------
# Discrete mutual information from entropy sums
# ---------------------------------------------------------------------------

def _group_entropy(joint, names) -> float:
    idx = {n: i for i, n in enumerate(joint.names)}
    acc: dict = {}
    for cell in np.ndindex(*joint.table.shape):
        mass = float(joint.table[cell])
        if mass > 0.0:
            key = tuple(cell[idx[v]] for v in names)
            acc[key] = acc.get(key, 0.0) + mass
    return -sum(p * math.log2(p) for p in acc.values())


def dm_mi(joint, group_a, group_b, given=()) -> float:
    """I(A;B|C) = H(AC) + H(BC) - H(C) - H(ABC), entropies by summation."""
    a, b, c = tuple(group_a), tuple(group_b), tuple(given)
    h = lambda names: _group_entropy(joint, names)
    return h(a + c) + h(b + c) - (h(c) if c else 0.0) - h(a + b + c)


# ---------------------------------------------------------------------------
# Geometry oracles
# ---------------------------------------------------------------------------

def jarvis_hull(points) -> np.ndarray:
    """Gift-wrapping hull (counterclockwise vertex set), O(n*h)."""
    pts = np.unique(np.asarray(points, float).reshape(-1, 2), axis=0)
    if len(pts) <= 2:
        return pts
    start = int(np.lexsort((pts[:, 1], pts[:, 0]))[0])
    hull = [start]
    cur = start
    while True:
        q = (cur + 1) % len(pts)
        for p in range(len(pts)):
            if p == cur:
                continue
            cross = (pts[q, 0] - pts[cur, 0]) * (pts[p, 1] - pts[cur, 1]) - (
                pts[q, 1] - pts[cur, 1]
            ) * (pts[p, 0] - pts[cur, 0])
            if cross < 0.0:
                q = p
        if q == start:
            break
        hull.append(q)
        cur = q
    return pts[hull]


def pareto_oracle(points) -> np.ndarray:
    """All-pairs domination filter, O(n^2), chunked."""
    pts = np.unique(np.asarray(points, float).reshape(-1, 2), axis=0)
    n = len(pts)
    dominated = np.zeros(n, dtype=bool)
    for lo in range(0, n, 512):
        block = pts[lo : lo + 512]
        ge = (pts[:, None, 0] >= block[None, :, 0]) & (pts[:, None, 1] >= block[None, :, 1])
        eq = (pts[:, None, 0] == block[None, :, 0]) & (pts[:, None, 1] == block[None, :, 1])
        dominated[lo : lo + 512] = np.any(ge & ~eq, axis=0)
    return pts[~dominated]


def golden_min(f, lo: float, hi: float, iters: int = 90) -> float:
    """Plain scalar golden-section minimizer."""
    inv = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = float(lo), float(hi)
    for _ in range(iters):
        c = b - (b - a) * inv
        d = a + (b - a) * inv
        if f(c) < f(d):
            b = d
        else:
            a = c
    return 0.5 * (a + b)
