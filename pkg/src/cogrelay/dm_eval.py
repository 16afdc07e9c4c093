"""Discrete-memoryless verification path for the coding-scheme regions.

The Gaussian modules evaluate closed forms; this module evaluates the same
rate regions directly as mutual informations of explicit small-alphabet
distributions, so the two paths can be checked against each other.

A scheme instance is described by a factored input distribution (a list of
conditional `Factor`s matching the scheme's factorization pattern) and a
channel:

- full duplex: one conditional table p(y1, y2, y | x1, x2);
- half duplex: a phase pair p(y11, y21, y | x11) and p(y12, y22 | x12, x22),
  with every phase-k information term weighted by that phase's duration.

Zero-probability conventions: terms with zero joint mass contribute zero,
and conditionals are floored at 1e-15 inside the logarithm only.

JSON layout for tables (documented external interface): an object with
"variables" (names in axis order), "cardinalities" (matching sizes) and
"table" (row-major flattened probabilities); channels additionally carry
"inputs" and "outputs", and half-duplex channels are {"phase1": ...,
"phase2": ...}.
"""

from __future__ import annotations

import itertools
import json
import string
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .core import GridSpec, RateRegion
from .gaussian_fd import _polygon_points

_MASS_TOL = 1e-12
_COND_FLOOR = 1e-15

#: Cap on auxiliary alphabet sizes in sweeps; exhaustive searches above it
#: are not desk-scale.
AUX_CARD_CAP = 3


class FactorizationError(ValueError):
    """The supplied factors do not match the scheme's factorization pattern."""


# ---------------------------------------------------------------------------
# Probability containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JointPmf:
    """A joint pmf over named finite-alphabet variables."""

    names: tuple
    table: np.ndarray

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        table = np.asarray(self.table, dtype=float)
        object.__setattr__(self, "table", table)
        if len(names) != table.ndim:
            raise ValueError("variable list does not match table dimensions")
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        if table.min() < -1e-15:
            raise ValueError("negative probability mass")
        if abs(table.sum() - 1.0) > _MASS_TOL:
            raise ValueError(f"total mass {table.sum()} is not 1")

    @property
    def cards(self) -> tuple:
        return self.table.shape

    def axis(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def marginal(self, keep: Sequence[str]) -> "JointPmf":
        keep = tuple(keep)
        axes = tuple(i for i, n in enumerate(self.names) if n not in keep)
        table = self.table.sum(axis=axes) if axes else self.table
        names = tuple(n for n in self.names if n in keep)
        return JointPmf(names, table)

    def ordered_table(self, order: Sequence[str]) -> np.ndarray:
        """Marginal table with axes in exactly the requested order."""
        m = self.marginal(order)
        src = [m.names.index(n) for n in order]
        return np.moveaxis(m.table, src, range(len(order)))

    def to_dict(self) -> dict:
        return {
            "variables": list(self.names),
            "cardinalities": [int(c) for c in self.cards],
            "table": self.table.ravel().tolist(),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "JointPmf":
        cards = tuple(int(c) for c in data["cardinalities"])
        table = np.asarray(data["table"], dtype=float).reshape(cards)
        return cls(tuple(data["variables"]), table)


@dataclass(frozen=True)
class Factor:
    """One conditional p(var | given) of a factored joint distribution.

    Table axes follow (given..., var); every conditional row sums to 1.
    """

    var: str
    given: tuple
    table: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "given", tuple(self.given))
        table = np.asarray(self.table, dtype=float)
        object.__setattr__(self, "table", table)
        if table.ndim != len(self.given) + 1:
            raise ValueError(f"factor p({self.var}|{self.given}) has wrong rank")
        if table.min() < -1e-15:
            raise ValueError("negative probability in factor")
        sums = table.sum(axis=-1)
        if np.abs(sums - 1.0).max() > _MASS_TOL:
            raise ValueError(f"conditional rows of p({self.var}|..) do not sum to 1")


def joint_from_factors(factors: Sequence[Factor]) -> JointPmf:
    """Multiply conditional factors (parents listed before children)."""
    names: list = []
    cards: dict = {}
    for f in factors:
        for g in f.given:
            if g not in names:
                raise FactorizationError(f"parent {g!r} of {f.var!r} not yet defined")
        if f.var in names:
            raise FactorizationError(f"variable {f.var!r} defined twice")
        for v, size in zip(f.given + (f.var,), f.table.shape):
            if cards.setdefault(v, size) != size:
                raise FactorizationError(f"inconsistent cardinality for {v!r}")
        names.append(f.var)
    letters = {v: string.ascii_letters[i] for i, v in enumerate(names)}
    subs = ",".join(
        "".join(letters[v] for v in f.given + (f.var,)) for f in factors
    )
    out = "".join(letters[v] for v in names)
    table = np.einsum(f"{subs}->{out}", *[f.table for f in factors])
    return JointPmf(tuple(names), table)


@dataclass(frozen=True)
class DmChannel:
    """A conditional table p(outputs | inputs); axes follow inputs+outputs."""

    inputs: tuple
    outputs: tuple
    table: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        table = np.asarray(self.table, dtype=float)
        object.__setattr__(self, "table", table)
        if table.ndim != len(self.inputs) + len(self.outputs):
            raise ValueError("channel table rank does not match variable lists")
        if table.min() < -1e-15:
            raise ValueError("negative probability in channel")
        out_axes = tuple(range(len(self.inputs), table.ndim))
        sums = table.sum(axis=out_axes)
        if np.abs(sums - 1.0).max() > _MASS_TOL:
            raise ValueError("channel conditional slices do not sum to 1")

    def input_cards(self) -> tuple:
        return self.table.shape[: len(self.inputs)]

    def extend(self, p: JointPmf) -> JointPmf:
        """Joint over p's variables and the channel outputs."""
        missing = [v for v in self.inputs if v not in p.names]
        if missing:
            raise FactorizationError(f"channel inputs {missing} absent from pmf")
        pool = list(p.names) + list(self.outputs)
        letters = {v: string.ascii_letters[i] for i, v in enumerate(pool)}
        p_sub = "".join(letters[v] for v in p.names)
        c_sub = "".join(letters[v] for v in self.inputs + self.outputs)
        out = "".join(letters[v] for v in pool)
        table = np.einsum(f"{p_sub},{c_sub}->{out}", p.table, self.table)
        return JointPmf(tuple(pool), table)

    def to_dict(self) -> dict:
        return {
            "variables": list(self.inputs + self.outputs),
            "cardinalities": [int(c) for c in self.table.shape],
            "inputs": list(self.inputs),
            "outputs": list(self.outputs),
            "table": self.table.ravel().tolist(),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "DmChannel":
        cards = tuple(int(c) for c in data["cardinalities"])
        table = np.asarray(data["table"], dtype=float).reshape(cards)
        return cls(tuple(data["inputs"]), tuple(data["outputs"]), table)


@dataclass(frozen=True)
class HalfDuplexDmChannel:
    """Phase-split channel: p(y11,y21,y|x11) then p(y12,y22|x12,x22)."""

    phase1: DmChannel
    phase2: DmChannel

    def to_dict(self) -> dict:
        return {"phase1": self.phase1.to_dict(), "phase2": self.phase2.to_dict()}

    @classmethod
    def from_dict(cls, data: Mapping) -> "HalfDuplexDmChannel":
        return cls(DmChannel.from_dict(data["phase1"]), DmChannel.from_dict(data["phase2"]))


def load_pmf(path) -> JointPmf:
    with open(path) as fh:
        return JointPmf.from_dict(json.load(fh))


def load_channel(path) -> DmChannel | HalfDuplexDmChannel:
    with open(path) as fh:
        data = json.load(fh)
    if "phase1" in data:
        return HalfDuplexDmChannel.from_dict(data)
    return DmChannel.from_dict(data)


# ---------------------------------------------------------------------------
# Mutual information
# ---------------------------------------------------------------------------

def mutual_information(
    p: JointPmf,
    group_a: Iterable[str],
    group_b: Iterable[str],
    given: Iterable[str] = (),
) -> float:
    """I(A; B | C) in bits for disjoint variable groups of the joint pmf."""
    a, b, c = tuple(group_a), tuple(group_b), tuple(given)
    overlap = (set(a) & set(b)) | (set(a) & set(c)) | (set(b) & set(c))
    if overlap:
        raise ValueError(f"variable groups overlap: {sorted(overlap)}")
    for v in a + b + c:
        p.axis(v)  # raises KeyError on unknown names

    order = a + b + c
    drop = tuple(i for i, n in enumerate(p.names) if n not in order)
    t = p.table.sum(axis=drop) if drop else p.table
    kept = [n for n in p.names if n in order]
    t = np.moveaxis(t, [kept.index(n) for n in order], range(len(order)))
    na = int(np.prod([p.cards[p.axis(v)] for v in a], initial=1))
    nb = int(np.prod([p.cards[p.axis(v)] for v in b], initial=1))
    t = t.reshape(na, nb, -1)
    pc = t.sum(axis=(0, 1))
    pac = t.sum(axis=1)
    pbc = t.sum(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        safe_pc = np.where(pc > 0.0, pc, 1.0)
        cond_ab = np.maximum(t / safe_pc, _COND_FLOOR)
        cond_a = np.maximum(pac / safe_pc, _COND_FLOOR)
        cond_b = np.maximum(pbc / safe_pc, _COND_FLOOR)
        logterm = np.log2(cond_ab) - np.log2(cond_a[:, None, :]) - np.log2(cond_b[None, :, :])
    return float(np.where(t > 0.0, t * logterm, 0.0).sum())


# ---------------------------------------------------------------------------
# Scheme factorization patterns
# ---------------------------------------------------------------------------

FD_PDF_PATTERN = (
    ("t10", ()),
    ("u10", ("t10",)),
    ("x1", ("t10", "u10")),
    ("u2", ("t10",)),
    ("x2", ("t10", "u2")),
)

FD_HK_PATTERN = (
    ("t10", ()),
    ("u10", ("t10",)),
    ("u11", ()),
    ("x1", ("t10", "u10", "u11")),
    ("u21", ()),
    ("u22", ("u21", "t10")),
    ("x2", ("t10", "u21", "u22")),
)

HD_PDF_PATTERN = (
    ("x11", ()),
    ("x12", ("x11",)),
    ("u2", ("x11",)),
    ("x22", ("x11", "u2")),
)

HD_HK_PATTERN = (
    ("x11", ()),
    ("u11", ()),
    ("x12", ("u11", "x11")),
    ("u21", ()),
    ("u22", ("u21", "x11")),
    ("x22", ("x11", "u21", "u22")),
)

FD_CHANNEL_INPUTS = ("x1", "x2")
FD_CHANNEL_OUTPUTS = ("y1", "y2", "y")


def _check_pattern(factors: Sequence[Factor], pattern) -> None:
    sig = tuple((f.var, tuple(f.given)) for f in factors)
    if sig != pattern:
        raise FactorizationError(
            f"factors {sig} do not match the required pattern {pattern}"
        )


def _fd_joint(factors, chan: DmChannel, pattern) -> JointPmf:
    _check_pattern(factors, pattern)
    if tuple(chan.inputs) != FD_CHANNEL_INPUTS:
        raise FactorizationError(f"full-duplex channel must have inputs {FD_CHANNEL_INPUTS}")
    return chan.extend(joint_from_factors(factors))


def _hd_joint(factors, chan: HalfDuplexDmChannel, pattern) -> JointPmf:
    _check_pattern(factors, pattern)
    joint = joint_from_factors(factors)
    return chan.phase2.extend(chan.phase1.extend(joint))


def _seven_bounds(i: Mapping[int, float]) -> np.ndarray:
    """Combine the fourteen information terms into the seven region bounds.

    Order: R1; R2; three R1+R2 bounds; 2*R1+R2; R1+2*R2.
    """
    b0 = min(i[2] + i[5], i[6])
    b1 = i[12] - i[1]
    b2 = min(i[2] + i[7], i[8]) + i[13] - i[1]
    b3 = min(i[2] + i[3], i[4]) + i[14] - i[1]
    b4 = min(i[2] + i[9], i[10]) + i[11] - i[1]
    b5 = min(i[2] + i[3], i[4]) + min(i[2] + i[9], i[10]) + i[13] - i[1]
    b6 = min(i[2] + i[7], i[8]) + (i[11] - i[1]) + (i[14] - i[1])
    return np.array([b0, b1, b2, b3, b4, b5, b6])


# ---------------------------------------------------------------------------
# Region evaluators
# ---------------------------------------------------------------------------

def thm1_region_at(factors: Sequence[Factor], chan: DmChannel) -> np.ndarray:
    """Full-duplex PDF-binning bounds [R1 relay-path, R1 joint, R2]."""
    p = _fd_joint(factors, chan, FD_PDF_PATTERN)
    mi = lambda a, b, c=(): mutual_information(p, a, b, c)
    r1a = mi(("u10",), ("y",), ("t10",)) + mi(("x1",), ("y1",), ("u10", "t10"))
    r1b = mi(("t10", "u10", "x1"), ("y1",))
    r2 = mi(("u2",), ("y2",)) - mi(("u2",), ("t10",))
    return np.array([r1a, r1b, r2])


def thm2_region_at(factors: Sequence[Factor], chan: DmChannel) -> np.ndarray:
    """Full-duplex HK PDF-binning: the seven region bounds."""
    p = _fd_joint(factors, chan, FD_HK_PATTERN)
    mi = lambda a, b, c=(): mutual_information(p, a, b, c)
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
    return _seven_bounds(i)


def _thm3_terms(p: JointPmf) -> dict:
    mi = lambda a, b, c=(): mutual_information(p, a, b, c)
    return {
        "p1_relay": mi(("x11",), ("y",)),
        "p2_private": mi(("x12",), ("y12",), ("x11",)),
        "p1_direct": mi(("x11",), ("y11",)),
        "p2_joint": mi(("x11", "x12"), ("y12",)),
        "p2_bin_rate": mi(("u2",), ("y22",)),
        "p2_bin_cost": mi(("u2",), ("x11",)),
    }


def thm3_region_at(
    factors: Sequence[Factor], chan: HalfDuplexDmChannel, tau: float
) -> np.ndarray:
    """Half-duplex PDF-binning bounds [R1 relay-path, R1 joint, R2] at tau."""
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"tau must lie in [0, 1], got {tau}")
    t = _thm3_terms(_hd_joint(factors, chan, HD_PDF_PATTERN))
    tb = 1.0 - tau
    r1a = tau * t["p1_relay"] + tb * t["p2_private"]
    r1b = tau * t["p1_direct"] + tb * t["p2_joint"]
    r2 = tb * (t["p2_bin_rate"] - t["p2_bin_cost"])
    return np.array([r1a, r1b, r2])


def _thm4_terms(p: JointPmf) -> dict:
    mi = lambda a, b, c=(): mutual_information(p, a, b, c)
    direct = mi(("x11",), ("y11",))
    return {
        "p1": {2: mi(("x11",), ("y",)), 4: direct, 6: direct, 8: direct, 10: direct},
        "p2": {
            1: mi(("u22",), ("x11",), ("u21",)),
            3: mi(("x12",), ("y12",), ("x11", "u11", "u21")),
            4: mi(("x11", "x12"), ("y12",), ("u11", "u21")),
            5: mi(("u11", "x12"), ("y12",), ("x11", "u21")),
            6: mi(("x11", "u11", "x12"), ("y12",), ("u21",)),
            7: mi(("x12", "u21"), ("y12",), ("x11", "u11")),
            8: mi(("x11", "x12", "u21"), ("y12",), ("u11",)),
            9: mi(("u11", "x12", "u21"), ("y12",), ("x11",)),
            10: mi(("x11", "u11", "x12", "u21"), ("y12",)),
            11: mi(("u22",), ("y22",), ("u21", "u11")),
            12: mi(("u21", "u22"), ("y22",), ("u11",)),
            13: mi(("u11", "u22"), ("y22",), ("u21",)),
            14: mi(("u11", "u21", "u22"), ("y22",)),
        },
    }


def _thm4_bounds(terms: dict, tau: float) -> np.ndarray:
    tb = 1.0 - tau
    i = {k: tb * v for k, v in terms["p2"].items()}
    for k, v in terms["p1"].items():
        i[k] = i.get(k, 0.0) + tau * v
    return _seven_bounds(i)


def thm4_region_at(
    factors: Sequence[Factor], chan: HalfDuplexDmChannel, tau: float
) -> np.ndarray:
    """Half-duplex HK PDF-binning: the seven region bounds at tau."""
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"tau must lie in [0, 1], got {tau}")
    return _thm4_bounds(_thm4_terms(_hd_joint(factors, chan, HD_HK_PATTERN)), tau)


# ---------------------------------------------------------------------------
# Distribution sweep
# ---------------------------------------------------------------------------

def _dist_grid(card: int, resolution: int) -> np.ndarray:
    """All pmfs over `card` symbols with masses i/resolution."""
    combos = [
        c for c in itertools.product(range(resolution + 1), repeat=card)
        if sum(c) == resolution
    ]
    return np.array(combos, dtype=float) / resolution


def dm_region_sweep(
    chan,
    cards: Mapping[str, int],
    grid: GridSpec,
    scheme: str = "pdf-bin",
    max_dists: int = 20_000,
    seed: int = 0,
) -> RateRegion:
    """Grid sweep over factored distributions; hull of the resulting points.

    `cards` assigns an alphabet size to every scheme variable; auxiliary
    alphabets are capped at AUX_CARD_CAP. When the full product grid exceeds
    `max_dists`, a seeded uniform subsample of it is evaluated instead.
    """
    half_duplex = isinstance(chan, HalfDuplexDmChannel)
    pattern = {
        (False, "pdf-bin"): FD_PDF_PATTERN,
        (False, "hk-pdf-bin"): FD_HK_PATTERN,
        (True, "pdf-bin"): HD_PDF_PATTERN,
        (True, "hk-pdf-bin"): HD_HK_PATTERN,
    }.get((half_duplex, scheme))
    if pattern is None:
        raise ValueError(f"unknown scheme {scheme!r}")

    if half_duplex:
        input_names = set(chan.phase1.inputs) | set(chan.phase2.inputs)
    else:
        input_names = set(chan.inputs)
    for var, _ in pattern:
        if var not in cards:
            raise ValueError(f"missing cardinality for {var!r}")
        if var not in input_names and cards[var] > AUX_CARD_CAP:
            raise ValueError(
                f"auxiliary {var!r} cardinality {cards[var]} exceeds cap {AUX_CARD_CAP}"
            )

    # Per-factor: number of conditional rows and the simplex grid per row.
    row_grids = []
    for var, given in pattern:
        n_rows = int(np.prod([cards[v] for v in given], initial=1))
        choices = _dist_grid(cards[var], grid.power)
        row_grids.extend([(var, given, n_rows, choices)] * 1)
    slot_sizes = []
    for var, given, n_rows, choices in row_grids:
        slot_sizes.extend([len(choices)] * n_rows)
    total = 1
    for s in slot_sizes:
        total *= s

    rng = np.random.default_rng(seed)
    if total <= max_dists:
        flat_indices = range(total)
    else:
        flat_indices = sorted({int(x) for x in rng.integers(0, total, size=max_dists)})

    taus = grid.tau_grid() if half_duplex else (None,)
    points = []
    hk = scheme == "hk-pdf-bin"
    bounds7 = []
    for flat in flat_indices:
        choice = []
        rem = flat
        for s in slot_sizes:
            choice.append(rem % s)
            rem //= s
        factors = []
        pos = 0
        for var, given, n_rows, choices in row_grids:
            rows = [choices[choice[pos + r]] for r in range(n_rows)]
            pos += n_rows
            shape = tuple(cards[v] for v in given) + (cards[var],)
            factors.append(Factor(var, given, np.array(rows).reshape(shape)))
        if half_duplex:
            joint = _hd_joint(factors, chan, pattern)
            if hk:
                terms = _thm4_terms(joint)
                for tau in taus:
                    bounds7.append(_thm4_bounds(terms, tau))
            else:
                terms = _thm3_terms(joint)
                for tau in taus:
                    tb = 1.0 - tau
                    r1 = min(
                        tau * terms["p1_relay"] + tb * terms["p2_private"],
                        tau * terms["p1_direct"] + tb * terms["p2_joint"],
                    )
                    r2 = tb * (terms["p2_bin_rate"] - terms["p2_bin_cost"])
                    points.append((max(0.0, r1), max(0.0, r2)))
        else:
            if hk:
                bounds7.append(thm2_region_at(factors, chan))
            else:
                r1a, r1b, r2 = thm1_region_at(factors, chan)
                points.append((max(0.0, min(r1a, r1b)), max(0.0, r2)))
    if hk:
        pts, _ = _polygon_points(np.array(bounds7).T)
        return RateRegion.from_points(pts)
    return RateRegion.from_points(np.array(points))
