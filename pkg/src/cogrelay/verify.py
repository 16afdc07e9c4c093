"""Verification suites: binning-coefficient oracles, region derivations,
discrete-memoryless dual paths, and region inclusion chains.

Each suite returns a SuiteReport of named checks; the CLI renders them and
sets the exit code. Suites are deterministic given their seed.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import dm_eval, fme, gaussian_fd, gaussian_hd, outer_bound, region_ops
from .core import ChannelGains, GridSpec, PowerBudget

GAIN_RANGE = (0.2, 3.0)
POWER_RANGE = (0.5, 4.0)


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str


@dataclass
class SuiteReport:
    suite: str
    checks: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, name: str, ok: bool, detail: str) -> None:
        self.checks.append(Check(name, bool(ok), detail))

    def lines(self):
        for c in self.checks:
            yield f"[{'PASS' if c.ok else 'FAIL'}] {self.suite}/{c.name}: {c.detail}"


def golden_min_batch(f, lo: float, hi: float, size: int, iters: int = 90) -> np.ndarray:
    """Vectorized golden-section minimizer over [lo, hi] per batch element."""
    inv = (math.sqrt(5.0) - 1.0) / 2.0
    a = np.full(size, float(lo))
    b = np.full(size, float(hi))
    for _ in range(iters):
        c = b - (b - a) * inv
        d = a + (b - a) * inv
        better = f(c) < f(d)
        b = np.where(better, d, b)
        a = np.where(better, a, c)
    return 0.5 * (a + b)


def _random_instance(rng) -> tuple:
    g = ChannelGains(*rng.uniform(*GAIN_RANGE, size=3))
    budget = PowerBudget(*rng.uniform(*POWER_RANGE, size=2))
    return g, budget


# ---------------------------------------------------------------------------
# Binning-coefficient suite
# ---------------------------------------------------------------------------

def _det_batch(a, alpha, inter, mu, rho, lam):
    """Vectorized covariance determinant; `inter` is the residual
    interference power a^2*(...) seen by the binned decoder."""
    s = 1.0 - rho**2
    coh = a * alpha + mu * rho
    var_u = mu**2 + lam**2 + 2.0 * mu * rho * lam
    e_uy = (mu * rho + lam) * coh + mu**2 * s
    var_y = coh**2 + inter + mu**2 * s + 1.0
    return var_u * var_y - e_uy**2


def lambda_suite(draws: int = 1000, seed: int = 0) -> SuiteReport:
    """Closed-form binning coefficients vs golden-section minimizers."""
    t0 = time.monotonic()
    report = SuiteReport("lambda")
    rng = np.random.default_rng(seed)

    def fd_pdf(g, amp, mu, rho):
        alloc = gaussian_fd.FdPdfBinAlloc(amp[0], amp[1], amp[2], mu, rho)
        lam = gaussian_fd.fd_pdf_bin_lambda_star(g, alloc).lam
        return lam, amp[0], g.a**2 * (amp[1] ** 2 + amp[2] ** 2)

    def fd_hk(g, amp, mu, rho):
        alloc = gaussian_fd.FdHkPdfBinAlloc(amp[0], amp[1], amp[2], amp[3], 0.3, mu, rho)
        lam = gaussian_fd.fd_hk_pdf_bin_lambda_star(g, alloc).lam
        return lam, amp[0], g.a**2 * (amp[1] ** 2 + amp[3] ** 2)

    def hd_hk(g, amp, mu, rho):
        alloc = gaussian_hd.HdHkPdfBinAlloc(0.5, amp[0], amp[1], amp[2], amp[3], 0.3, mu, rho)
        lam = gaussian_hd.hd_lambda_star(g, alloc).lam
        return lam, amp[1], g.a**2 * amp[3] ** 2

    for name, closed in (("fd-pdf", fd_pdf), ("fd-hkpdf", fd_hk), ("hd-hkpdf", hd_hk)):
        a_arr = np.empty(draws)
        alpha_arr = np.empty(draws)
        inter_arr = np.empty(draws)
        mu_arr = np.empty(draws)
        rho_arr = np.empty(draws)
        stars = np.empty(draws)
        for k in range(draws):
            g, budget = _random_instance(rng)
            amp = rng.uniform(0.0, 1.0, size=4)
            amp *= math.sqrt(budget.p1) / max(float(np.linalg.norm(amp)), 1e-9)
            mu = float(rng.uniform(0.0, math.sqrt(budget.p2)))
            rho = float(rng.uniform(-1.0, 1.0))
            stars[k], alpha_arr[k], inter_arr[k] = closed(g, amp, mu, rho)
            a_arr[k], mu_arr[k], rho_arr[k] = g.a, mu, rho

        minimizer = golden_min_batch(
            lambda lam: _det_batch(a_arr, alpha_arr, inter_arr, mu_arr, rho_arr, lam),
            -50.0,
            50.0,
            size=draws,
        )
        worst = float(np.abs(minimizer - stars).max())
        report.add(name, worst <= 1e-6, f"max |closed-form - minimizer| = {worst:.3g}")

    # Dirty-paper reduction at rho = 0 and the interference-free corner.
    worst_dpc = 0.0
    for _ in range(200):
        g, budget = _random_instance(rng)
        amp = rng.uniform(0.1, 1.0, size=3)
        amp *= math.sqrt(budget.p1) / float(np.linalg.norm(amp))
        mu = float(rng.uniform(0.1, math.sqrt(budget.p2)))
        alloc = gaussian_fd.FdPdfBinAlloc(amp[0], amp[1], amp[2], mu, 0.0)
        lam = gaussian_fd.fd_pdf_bin_lambda_star(g, alloc).lam
        inter = g.a**2 * (amp[1] ** 2 + amp[2] ** 2)
        dpc = g.a * amp[0] * mu**2 / (inter + mu**2 + 1.0)
        worst_dpc = max(worst_dpc, abs(lam - dpc))
    report.add("dpc-reduction", worst_dpc <= 1e-12, f"max deviation = {worst_dpc:.3g}")

    g = ChannelGains(1.0, 1.0, 1.0)
    budget = PowerBudget(1.0, 2.5)
    alloc = gaussian_fd.FdPdfBinAlloc(math.sqrt(budget.p1), 0.0, 0.0, math.sqrt(budget.p2), 0.0)
    err = abs(gaussian_fd.fd_pdf_bin_rates(g, alloc).r2 - gaussian_fd.fd_max_r2(budget))
    report.add("interference-free-corner", err <= 1e-12, f"|R2 - C(P2)| = {err:.3g}")
    report.seconds = time.monotonic() - t0
    return report


# ---------------------------------------------------------------------------
# FME suite
# ---------------------------------------------------------------------------

def fme_suite(samples: int = 200, seed: int = 0) -> SuiteReport:
    """Certify the four shipped derivations against their published regions."""
    t0 = time.monotonic()
    report = SuiteReport("fme")
    for name in fme.DERIVATIONS:
        cert = fme.certify_derivation(name, samples=samples, seed=seed)
        detail = (
            f"equivalent at {cert.samples} assignments, "
            f"{cert.derived_rows} derived rows vs {cert.target_rows} published"
            f"{' (row-identical)' if cert.rows_match else ''}"
        )
        report.add(name, cert.equivalent, detail)
    report.seconds = time.monotonic() - t0
    return report


# ---------------------------------------------------------------------------
# Discrete-memoryless suite
# ---------------------------------------------------------------------------

def _mi_loops(joint: dm_eval.JointPmf, group_a, group_b, given=()) -> float:
    """Plain-loop mutual information, the suite's independent second path.

    Every joint cell contributes its mass times the log-ratio of its group
    marginals, which sums the standard expression by groups.
    """
    idx = {n: i for i, n in enumerate(joint.names)}
    pa: dict = {}
    pb: dict = {}
    pab: dict = {}
    pc: dict = {}
    table = joint.table
    cells = []
    for cell in np.ndindex(*table.shape):
        mass = float(table[cell])
        if mass == 0.0:
            continue
        ka = tuple(cell[idx[v]] for v in group_a)
        kb = tuple(cell[idx[v]] for v in group_b)
        kc = tuple(cell[idx[v]] for v in given)
        pa[ka + kc] = pa.get(ka + kc, 0.0) + mass
        pb[kb + kc] = pb.get(kb + kc, 0.0) + mass
        pab[ka + kb + kc] = pab.get(ka + kb + kc, 0.0) + mass
        pc[kc] = pc.get(kc, 0.0) + mass
        cells.append((mass, ka, kb, kc))
    total = 0.0
    for mass, ka, kb, kc in cells:
        num = pab[ka + kb + kc] * pc[kc]
        den = pa[ka + kc] * pb[kb + kc]
        total += mass * math.log2(num / den)
    return total


def _random_factors(pattern, cards, rng) -> list:
    factors = []
    for var, given in pattern:
        shape = tuple(cards[v] for v in given) + (cards[var],)
        raw = rng.dirichlet(np.ones(shape[-1]), size=shape[:-1] or (1,))
        factors.append(dm_eval.Factor(var, given, raw.reshape(shape)))
    return factors


def _random_channel(rng) -> dm_eval.DmChannel:
    table = rng.dirichlet(np.ones(8), size=(2, 2)).reshape(2, 2, 2, 2, 2)
    return dm_eval.DmChannel(("x1", "x2"), ("y1", "y2", "y"), table)


def _random_hd_channel(rng) -> dm_eval.HalfDuplexDmChannel:
    t1 = rng.dirichlet(np.ones(8), size=(2,)).reshape(2, 2, 2, 2)
    t2 = rng.dirichlet(np.ones(4), size=(2, 2)).reshape(2, 2, 2, 2)
    return dm_eval.HalfDuplexDmChannel(
        dm_eval.DmChannel(("x11",), ("y11", "y21", "y"), t1),
        dm_eval.DmChannel(("x12", "x22"), ("y12", "y22"), t2),
    )


def _oracle_thm2_bounds(p, tau=None) -> np.ndarray:
    t_y1 = _mi_loops(p, ("t10",), ("y1",))
    i = {
        1: _mi_loops(p, ("u22",), ("t10",), ("u21",)),
        2: _mi_loops(p, ("u10",), ("y",), ("t10",)),
        3: _mi_loops(p, ("x1",), ("y1",), ("t10", "u10", "u11", "u21")),
        4: _mi_loops(p, ("u10", "x1"), ("y1",), ("t10", "u11", "u21")) + t_y1,
        5: _mi_loops(p, ("u11", "x1"), ("y1",), ("t10", "u10", "u21")),
        6: _mi_loops(p, ("u10", "u11", "x1"), ("y1",), ("t10", "u21")) + t_y1,
        7: _mi_loops(p, ("x1", "u21"), ("y1",), ("t10", "u10", "u11")),
        8: _mi_loops(p, ("u10", "x1", "u21"), ("y1",), ("t10", "u11")) + t_y1,
        9: _mi_loops(p, ("u11", "x1", "u21"), ("y1",), ("t10", "u10")),
        10: _mi_loops(p, ("t10", "u10", "u11", "x1", "u21"), ("y1",)),
        11: _mi_loops(p, ("u22",), ("y2",), ("u21", "u11")),
        12: _mi_loops(p, ("u21", "u22"), ("y2",), ("u11",)),
        13: _mi_loops(p, ("u11", "u22"), ("y2",), ("u21",)),
        14: _mi_loops(p, ("u11", "u21", "u22"), ("y2",)),
    }
    return dm_eval._seven_bounds(i)


def _oracle_thm4_bounds(p, tau: float) -> np.ndarray:
    tb = 1.0 - tau
    direct = _mi_loops(p, ("x11",), ("y11",))
    i = {
        1: tb * _mi_loops(p, ("u22",), ("x11",), ("u21",)),
        2: tau * _mi_loops(p, ("x11",), ("y",)),
        3: tb * _mi_loops(p, ("x12",), ("y12",), ("x11", "u11", "u21")),
        4: tau * direct + tb * _mi_loops(p, ("x11", "x12"), ("y12",), ("u11", "u21")),
        5: tb * _mi_loops(p, ("u11", "x12"), ("y12",), ("x11", "u21")),
        6: tau * direct + tb * _mi_loops(p, ("x11", "u11", "x12"), ("y12",), ("u21",)),
        7: tb * _mi_loops(p, ("x12", "u21"), ("y12",), ("x11", "u11")),
        8: tau * direct + tb * _mi_loops(p, ("x11", "x12", "u21"), ("y12",), ("u11",)),
        9: tb * _mi_loops(p, ("u11", "x12", "u21"), ("y12",), ("x11",)),
        10: tau * direct + tb * _mi_loops(p, ("x11", "u11", "x12", "u21"), ("y12",)),
        11: tb * _mi_loops(p, ("u22",), ("y22",), ("u21", "u11")),
        12: tb * _mi_loops(p, ("u21", "u22"), ("y22",), ("u11",)),
        13: tb * _mi_loops(p, ("u11", "u22"), ("y22",), ("u21",)),
        14: tb * _mi_loops(p, ("u11", "u21", "u22"), ("y22",)),
    }
    return dm_eval._seven_bounds(i)


def dm_suite(instances: int = 100, seed: int = 0) -> SuiteReport:
    """Evaluators vs a plain-loop summation path on random binary instances."""
    t0 = time.monotonic()
    report = SuiteReport("dm")
    rng = np.random.default_rng(seed)
    cards2 = {v: 2 for v in ("t10", "u10", "u11", "x1", "u21", "u22", "x2",
                             "x11", "x12", "u2", "x22")}

    worst = {"fd-pdf": 0.0, "fd-hkpdf": 0.0, "hd-pdf": 0.0, "hd-hkpdf": 0.0}
    for _ in range(instances):
        chan = _random_channel(rng)
        factors = _random_factors(dm_eval.FD_PDF_PATTERN, cards2, rng)
        got = dm_eval.thm1_region_at(factors, chan)
        p = chan.extend(dm_eval.joint_from_factors(factors))
        want = np.array(
            [
                _mi_loops(p, ("u10",), ("y",), ("t10",))
                + _mi_loops(p, ("x1",), ("y1",), ("u10", "t10")),
                _mi_loops(p, ("t10", "u10", "x1"), ("y1",)),
                _mi_loops(p, ("u2",), ("y2",)) - _mi_loops(p, ("u2",), ("t10",)),
            ]
        )
        worst["fd-pdf"] = max(worst["fd-pdf"], float(np.abs(got - want).max()))

        factors = _random_factors(dm_eval.FD_HK_PATTERN, cards2, rng)
        got = dm_eval.thm2_region_at(factors, chan)
        p = chan.extend(dm_eval.joint_from_factors(factors))
        worst["fd-hkpdf"] = max(
            worst["fd-hkpdf"], float(np.abs(got - _oracle_thm2_bounds(p)).max())
        )

        hd_chan = _random_hd_channel(rng)
        tau = float(rng.uniform(0.0, 1.0))
        tb = 1.0 - tau
        factors = _random_factors(dm_eval.HD_PDF_PATTERN, cards2, rng)
        got = dm_eval.thm3_region_at(factors, hd_chan, tau)
        p = hd_chan.phase2.extend(hd_chan.phase1.extend(dm_eval.joint_from_factors(factors)))
        want = np.array(
            [
                tau * _mi_loops(p, ("x11",), ("y",))
                + tb * _mi_loops(p, ("x12",), ("y12",), ("x11",)),
                tau * _mi_loops(p, ("x11",), ("y11",))
                + tb * _mi_loops(p, ("x11", "x12"), ("y12",)),
                tb * (_mi_loops(p, ("u2",), ("y22",)) - _mi_loops(p, ("u2",), ("x11",))),
            ]
        )
        worst["hd-pdf"] = max(worst["hd-pdf"], float(np.abs(got - want).max()))

        factors = _random_factors(dm_eval.HD_HK_PATTERN, cards2, rng)
        got = dm_eval.thm4_region_at(factors, hd_chan, tau)
        p = hd_chan.phase2.extend(hd_chan.phase1.extend(dm_eval.joint_from_factors(factors)))
        worst["hd-hkpdf"] = max(
            worst["hd-hkpdf"], float(np.abs(got - _oracle_thm4_bounds(p, tau)).max())
        )

    for name, err in worst.items():
        report.add(
            f"dual-path-{name}", err <= 1e-10, f"max |diff| = {err:.3g} over {instances} draws"
        )

    # Degenerate-auxiliary reduction: the rate-split evaluator with trivial
    # public alphabets must reproduce the plain binning evaluator exactly.
    worst_red = 0.0
    for _ in range(20):
        chan = _random_channel(rng)
        cards = dict(cards2)
        cards["u11"] = 1
        cards["u21"] = 1
        hk_factors = _random_factors(dm_eval.FD_HK_PATTERN, cards, rng)
        by_var = {f.var: f for f in hk_factors}
        pdf_factors = [
            by_var["t10"],
            by_var["u10"],
            dm_eval.Factor("x1", ("t10", "u10"), by_var["x1"].table[:, :, 0, :]),
            dm_eval.Factor("u2", ("t10",), by_var["u22"].table[0]),
            dm_eval.Factor("x2", ("t10", "u2"), by_var["x2"].table[:, 0]),
        ]
        seven = dm_eval.thm2_region_at(hk_factors, chan)
        three = dm_eval.thm1_region_at(pdf_factors, chan)
        r1 = min(three[0], three[1])
        r2 = three[2]
        expect = np.array([r1, r2, r1 + r2, r1 + r2, r1 + r2, 2 * r1 + r2, r1 + 2 * r2])
        worst_red = max(worst_red, float(np.abs(seven - expect).max()))
    report.add("degenerate-reduction", worst_red <= 1e-10, f"max |diff| = {worst_red:.3g}")
    report.seconds = time.monotonic() - t0
    return report


# ---------------------------------------------------------------------------
# Inclusion suite
# ---------------------------------------------------------------------------

#: Matched sub-grid resolutions for the exact inclusion checks; refinement is
#: disabled so every inner sweep is literally a sub-sweep of the outer one,
#: which makes the containments exact up to float rounding.
INCLUSION_GRID = GridSpec(power=4, rho=5, tau=9, refine=0)
#: The sampled outer bound gets a generous grid plus refinement (enlarging
#: the outer region can only help the check).
OUTER_GRID = GridSpec(power=10, rho=11, tau=2, refine=2)


def inclusions_suite(
    instances: int = 20,
    seed: int = 0,
    grid: GridSpec = INCLUSION_GRID,
    outer_grid: GridSpec = OUTER_GRID,
) -> SuiteReport:
    """Scheme-inclusion chain and outer-bound containment on random draws."""
    t0 = time.monotonic()
    report = SuiteReport("inclusions")
    rng = np.random.default_rng(seed)
    slack_limit = -1e-6
    worst: dict = {}

    for _ in range(instances):
        g, budget = _random_instance(rng)
        hk = gaussian_fd.hk_region(g, budget, grid)
        fd_pdf = gaussian_fd.fd_pdf_bin_region(g, budget, grid)
        fd_hk = gaussian_fd.fd_hk_pdf_bin_region(g, budget, grid)
        hd_pdf = gaussian_hd.hd_pdf_bin_region(g, budget, grid)
        hd_hk = gaussian_hd.hd_hk_pdf_bin_region(g, budget, grid)
        miso = outer_bound.miso_bc_region(g, budget, outer_grid)
        pairs = {
            "hk-in-fd-hkpdf": (fd_hk, hk),
            "fd-pdf-in-fd-hkpdf": (fd_hk, fd_pdf),
            "hk-in-hd-hkpdf": (hd_hk, hk),
            "hd-pdf-in-hd-hkpdf": (hd_hk, hd_pdf),
            "hk-in-outer": (miso, hk),
            "fd-pdf-in-outer": (miso, fd_pdf),
            "fd-hkpdf-in-outer": (miso, fd_hk),
            "hd-pdf-in-outer": (miso, hd_pdf),
            "hd-hkpdf-in-outer": (miso, hd_hk),
        }
        for name, (outer, inner) in pairs.items():
            s = region_ops.containment_slack(outer, inner)
            worst[name] = min(worst.get(name, np.inf), s)

    for name, s in worst.items():
        report.add(name, s >= slack_limit, f"worst slack = {s:.3g} over {instances} instances")
    report.seconds = time.monotonic() - t0
    return report


SUITES = {
    "lambda": lambda_suite,
    "fme": fme_suite,
    "dm": dm_suite,
    "inclusions": inclusions_suite,
}
