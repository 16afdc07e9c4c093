"""Fourier-Motzkin elimination over rate variables with symbolic constants.

The decoding analysis of each coding scheme yields a list of linear
inequalities over per-message rates (R10, R11, ..., plus bin-index rates
like R2p) whose right-hand sides are information terms, treated here as
free nonnegative symbolic constants. Eliminating the split rates must
reproduce the published two-rate regions; this module provides the exact
machinery plus a sampling-based certification of that reduction.

Arithmetic is exact (fractions.Fraction); floating point enters only when a
numeric assignment is given to the constants.

Text format for constraint systems (one inequality per line):

    # comment
    rates: R10 R11 R2 R2p          declared rate variables
    define: R1 = R10 + R11         definitional sum; rewrites the last addend
    eliminate: R10 R11 R2p         victims, in elimination order
    R2p >= i_u2_t10                inequalities; identifiers that are not
    R10 + R11 <= i_t10_u10_x1_y1   declared rates are nonnegative constants
    2 R1 + R2 <= 3/2 i_a + i_b     integer or rational coefficients

The package ships the transcribed decoder-constraint systems of the four
schemes together with their published regions under fme_systems/.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Iterable, Mapping, Sequence

import numpy as np

#: Derivations shipped as data files: decoder constraints -> published region.
DERIVATIONS = ("fd_bin", "fd_hk_bin", "hd_bin", "hd_hk_bin")


@dataclass(frozen=True)
class SymbolicConstant:
    """A named constant (an information term); assumed nonnegative."""

    name: str
    nonnegative: bool = True


def _canonical_scale(coeffs: Iterable[Fraction]) -> Fraction:
    """Positive factor making the coefficient list integral with gcd 1."""
    nums = [abs(c.numerator) for c in coeffs if c != 0]
    dens = [c.denominator for c in coeffs if c != 0]
    if not nums:
        return Fraction(1)
    g = 0
    for n in nums:
        g = math.gcd(g, n)
    l = 1
    for d in dens:
        l = l * d // math.gcd(l, d)
    return Fraction(l, g)


@dataclass(frozen=True)
class LinearInequality:
    """Normalized inequality: sum(rates) <= sum(consts), exact rationals."""

    rates: tuple
    consts: tuple

    @classmethod
    def make(cls, rates: Mapping[str, Fraction], consts: Mapping[str, Fraction]):
        r = tuple(sorted((k, Fraction(v)) for k, v in rates.items() if v != 0))
        c = tuple(sorted((k, Fraction(v)) for k, v in consts.items() if v != 0))
        if not r and not c:
            raise ValueError("inequality with no nonzero coefficients")
        return cls(r, c)

    def rate_coeff(self, name: str) -> Fraction:
        for k, v in self.rates:
            if k == name:
                return v
        return Fraction(0)

    def scaled(self, factor: Fraction) -> "LinearInequality":
        if factor <= 0:
            raise ValueError("inequalities may only be scaled by positive factors")
        return LinearInequality(
            tuple((k, v * factor) for k, v in self.rates),
            tuple((k, v * factor) for k, v in self.consts),
        )

    def plus(self, other: "LinearInequality") -> "LinearInequality":
        rates = dict(self.rates)
        for k, v in other.rates:
            rates[k] = rates.get(k, Fraction(0)) + v
        consts = dict(self.consts)
        for k, v in other.consts:
            consts[k] = consts.get(k, Fraction(0)) + v
        r = tuple(sorted((k, v) for k, v in rates.items() if v != 0))
        c = tuple(sorted((k, v) for k, v in consts.items() if v != 0))
        return LinearInequality(r, c)

    def key(self):
        """Canonical form for duplicate detection (positive rescaling only)."""
        s = _canonical_scale([v for _, v in self.rates] + [v for _, v in self.consts])
        return (
            tuple((k, v * s) for k, v in self.rates),
            tuple((k, v * s) for k, v in self.consts),
        )

    def is_trivially_true(self) -> bool:
        """0 <= nonnegative combination of nonnegative constants."""
        return not self.rates and all(v >= 0 for _, v in self.consts)

    def __str__(self):
        def side(items):
            if not items:
                return "0"
            parts = []
            for k, v in items:
                coef = "" if v == 1 else ("-" if v == -1 else f"{v} ")
                parts.append(f"{coef}{k}")
            return " + ".join(parts).replace("+ -", "- ")

        return f"{side(self.rates)} <= {side(self.consts)}"


@dataclass(frozen=True)
class ConstraintSystem:
    """Linear inequalities over rate variables with symbolic constants.

    `substitutions` records applied definitional sums, e.g. ("R1", ("R10",
    "R11")); after normalization the defined variable replaces the last
    addend everywhere.
    """

    variables: tuple
    inequalities: tuple
    substitutions: tuple = field(default_factory=tuple)

    def constant_names(self) -> tuple:
        names = set()
        for ineq in self.inequalities:
            names.update(k for k, _ in ineq.consts)
        return tuple(sorted(names))

    def constants(self) -> tuple:
        return tuple(SymbolicConstant(n) for n in self.constant_names())

    def with_inequalities(self, rows) -> "ConstraintSystem":
        return ConstraintSystem(self.variables, tuple(rows), self.substitutions)

    def apply_definition(self, target: str, parts: Sequence[str]) -> "ConstraintSystem":
        """Introduce target = sum(parts), rewriting the last part everywhere."""
        parts = tuple(parts)
        victim = parts[-1]
        if victim not in self.variables:
            raise ValueError(f"defined part {victim!r} is not a system variable")
        rows = []
        for ineq in self.inequalities:
            c = ineq.rate_coeff(victim)
            rates = {k: v for k, v in ineq.rates if k != victim}
            if c != 0:
                rates[target] = rates.get(target, Fraction(0)) + c
                for other in parts[:-1]:
                    rates[other] = rates.get(other, Fraction(0)) - c
            rows.append(LinearInequality.make(rates, dict(ineq.consts)))
        variables = tuple(v for v in self.variables if v != victim) + (target,)
        subs = self.substitutions + ((target, parts),)
        return ConstraintSystem(variables, tuple(rows), subs)


def eliminate(system: ConstraintSystem, victim: str) -> ConstraintSystem:
    """Project out one rate variable by pairing its upper and lower bounds."""
    if victim not in system.variables:
        raise ValueError(f"{victim!r} is not a variable of the system")
    uppers, lowers, rest = [], [], []
    for ineq in system.inequalities:
        c = ineq.rate_coeff(victim)
        if c > 0:
            uppers.append((ineq, c))
        elif c < 0:
            lowers.append((ineq, c))
        else:
            rest.append(ineq)
    derived = []
    for up, cu in uppers:
        for low, cl in lowers:
            row = up.scaled(-cl).plus(low.scaled(cu))
            if row.rates or row.consts:
                if not row.is_trivially_true():
                    derived.append(row)
    seen = set()
    rows = []
    for row in rest + derived:
        k = row.key()
        if k not in seen:
            seen.add(k)
            rows.append(row)
    variables = tuple(v for v in system.variables if v != victim)
    return ConstraintSystem(variables, tuple(rows), system.substitutions)


def _dominance_prune(rows: Sequence[LinearInequality]) -> list:
    """Drop rows implied coefficient-wise by another row with the same
    rate part (their constant difference is a nonnegative combination)."""
    keep = list(rows)
    result = []
    for i, row in enumerate(keep):
        implied = False
        for j, other in enumerate(keep):
            if i == j:
                continue
            s_row = _canonical_scale([v for _, v in row.rates]) if row.rates else Fraction(1)
            s_oth = _canonical_scale([v for _, v in other.rates]) if other.rates else Fraction(1)
            a = row.scaled(s_row)
            b = other.scaled(s_oth)
            if a.rates != b.rates:
                continue
            diff = dict(a.consts)
            for k, v in b.consts:
                diff[k] = diff.get(k, Fraction(0)) - v
            if all(v >= 0 for v in diff.values()) and any(v != 0 for v in diff.values()):
                implied = True
                break
            if all(v == 0 for v in diff.values()) and j < i:
                implied = True  # exact duplicate; keep the first occurrence
                break
        if not implied:
            result.append(row)
    return result


def project(
    system: ConstraintSystem,
    keep: Sequence[str],
    samples: int = 200,
    seed: int = 0,
) -> ConstraintSystem:
    """Eliminate every variable outside `keep`, then prune redundant rows."""
    sys_ = system
    victims = [v for v in sys_.variables if v not in keep]
    while victims:
        # Fewest derived rows first keeps intermediate systems small.
        def cost(v):
            ups = sum(1 for i in sys_.inequalities if i.rate_coeff(v) > 0)
            downs = sum(1 for i in sys_.inequalities if i.rate_coeff(v) < 0)
            return ups * downs

        victim = min(victims, key=cost)
        sys_ = eliminate(sys_, victim)
        sys_ = sys_.with_inequalities(_dominance_prune(sys_.inequalities))
        victims.remove(victim)
    return prune_redundant(sys_, samples=samples, seed=seed)


# ---------------------------------------------------------------------------
# Numeric certification
# ---------------------------------------------------------------------------

def random_assignments(names: Sequence[str], count: int, seed: int = 0) -> list:
    """Log-uniform nonnegative assignments on [1e-3, 1e1] for each constant."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        vals = 10.0 ** rng.uniform(-3.0, 1.0, size=len(names))
        out.append(dict(zip(names, (float(v) for v in vals))))
    return out


def _numeric_rows(system: ConstraintSystem, assignment: Mapping[str, float]):
    var_index = {v: i for i, v in enumerate(system.variables)}
    a = np.zeros((len(system.inequalities), len(system.variables)))
    b = np.zeros(len(system.inequalities))
    for r, ineq in enumerate(system.inequalities):
        for k, v in ineq.rates:
            a[r, var_index[k]] = float(v)
        for k, v in ineq.consts:
            if k not in assignment:
                raise KeyError(f"constant {k!r} has no assigned value")
            b[r] += float(v) * assignment[k]
    return a, b


def _vertices(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Vertices of {x >= 0 : a @ x <= b} via basic-solution enumeration."""
    k = a.shape[1]
    a_full = np.concatenate([a, -np.eye(k)], axis=0)
    b_full = np.concatenate([b, np.zeros(k)])
    # Constant rows (all-zero coefficients) only decide feasibility.
    zero_rows = np.all(a_full == 0.0, axis=1)
    if np.any(b_full[zero_rows] < -tol):
        return np.empty((0, k))
    a_use = a_full[~zero_rows]
    b_use = b_full[~zero_rows]
    m = len(a_use)
    if m < k:
        return np.empty((0, k))
    combos = np.array(list(itertools.combinations(range(m), k)))
    mats = a_use[combos]
    dets = np.linalg.det(mats)
    ok = np.abs(dets) > 1e-12
    if not np.any(ok):
        return np.empty((0, k))
    sols = np.linalg.solve(mats[ok], b_use[combos[ok]][..., None])[..., 0]
    feas = np.all(a_use @ sols.T <= b_use[:, None] + tol, axis=0)
    pts = sols[feas]
    if not len(pts):
        return pts
    rounded = np.round(pts / max(tol, 1e-12)) * max(tol, 1e-12)
    _, idx = np.unique(rounded, axis=0, return_index=True)
    return pts[np.sort(idx)]


def polytope_equiv(
    a: ConstraintSystem,
    b: ConstraintSystem,
    assignment: Mapping[str, float],
    tol: float = 1e-9,
) -> bool:
    """Do the two systems cut the same polytope in the nonnegative orthant?

    Checked by mutual vertex containment at the given constant assignment.
    Intended for systems that bound every rate variable above (rate regions
    are); matching recession cones are not verified beyond that.
    """
    if set(a.variables) != set(b.variables):
        raise ValueError("systems must share the same rate variables")
    order = tuple(sorted(a.variables))
    a_sys = _reorder(a, order)
    b_sys = _reorder(b, order)
    a_mat, a_rhs = _numeric_rows(a_sys, assignment)
    b_mat, b_rhs = _numeric_rows(b_sys, assignment)
    va = _vertices(a_mat, a_rhs, tol)
    vb = _vertices(b_mat, b_rhs, tol)
    if len(va) == 0 or len(vb) == 0:
        return len(va) == len(vb)
    ok_ab = np.all(b_mat @ va.T <= b_rhs[:, None] + tol) and np.all(va >= -tol)
    ok_ba = np.all(a_mat @ vb.T <= a_rhs[:, None] + tol) and np.all(vb >= -tol)
    return bool(ok_ab and ok_ba)


def _reorder(system: ConstraintSystem, order: tuple) -> ConstraintSystem:
    return ConstraintSystem(order, system.inequalities, system.substitutions)


def _contrast_probes(row: LinearInequality, names: Sequence[str]) -> list:
    """Adversarial assignments that expose a row's facet if it has one.

    A facet cut by `row` alone appears when the row's own constants are
    small and every other constant is large; iid sampling hits such
    patterns too rarely for deep systems, so each drop candidate is also
    tested at these deterministic contrasts.
    """
    own = {k for k, _ in row.consts}
    probes = []
    for small, large in ((1e-2, 1e1), (1e-1, 2.0)):
        probes.append({n: (small if n in own else large) for n in names})
    return probes


def prune_redundant(
    system: ConstraintSystem, samples: int = 200, seed: int = 0
) -> ConstraintSystem:
    """Remove rows whose deletion leaves the polytope unchanged at every
    sampled nonnegative constant assignment.

    A row is dropped only if the polytope is unchanged at all `samples`
    random assignments and at per-row contrast probes. The certificate is
    probabilistic, not a proof.
    """
    names = system.constant_names()
    assignments = random_assignments(names, samples, seed=seed)
    rows = list(system.inequalities)
    # Try the most complex rows first: FME junk tends to be long.
    for row in sorted(system.inequalities, key=lambda r: -len(r.rates + r.consts)):
        if len(rows) == 1:
            break
        trial = [r for r in rows if r is not row]
        full = system.with_inequalities(rows)
        reduced = system.with_inequalities(trial)
        pool = _contrast_probes(row, names) + assignments
        if all(polytope_equiv(reduced, full, asg) for asg in pool):
            rows = trial
    return system.with_inequalities(rows)


# ---------------------------------------------------------------------------
# Parsing and shipped systems
# ---------------------------------------------------------------------------

_TERM_RE = re.compile(
    r"\s*(?P<sign>[+-])?\s*(?:(?P<coef>\d+(?:/\d+)?)\s*\*?\s*)?(?P<name>[A-Za-z_]\w*)"
)


def _parse_side(expr: str) -> dict:
    coeffs: dict = {}
    pos = 0
    expr = expr.strip()
    while pos < len(expr):
        m = _TERM_RE.match(expr, pos)
        if m is None:
            raise ValueError(f"cannot parse linear expression at: {expr[pos:]!r}")
        sign = -1 if m.group("sign") == "-" else 1
        coef = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
        name = m.group("name")
        coeffs[name] = coeffs.get(name, Fraction(0)) + sign * coef
        pos = m.end()
    if expr and not coeffs:
        raise ValueError(f"empty linear expression: {expr!r}")
    return coeffs


def parse_system(text: str):
    """Parse the documented text format.

    Returns (ConstraintSystem, eliminate_list); definitional sums are already
    applied. Identifiers not declared as rates are symbolic constants.
    """
    rates: list = []
    defines: list = []
    eliminate_list: list = []
    raw_rows: list = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("rates:"):
            rates.extend(line.split(":", 1)[1].split())
        elif line.startswith("define:"):
            target, _, rhs = line.split(":", 1)[1].partition("=")
            parts = [p.strip() for p in rhs.split("+")]
            defines.append((target.strip(), tuple(parts)))
        elif line.startswith("eliminate:"):
            eliminate_list.extend(line.split(":", 1)[1].split())
        else:
            raw_rows.append(line)
    if not rates:
        raise ValueError("missing 'rates:' declaration")
    known_rates = set(rates) | {t for t, _ in defines}
    rows = []
    for line in raw_rows:
        if "<=" in line:
            lhs, rhs = line.split("<=")
            flip = False
        elif ">=" in line:
            lhs, rhs = line.split(">=")
            flip = True
        else:
            raise ValueError(f"inequality needs <= or >=: {line!r}")
        left = _parse_side(lhs)
        right = _parse_side(rhs)
        rate_part: dict = {}
        const_part: dict = {}
        for name, v in left.items():
            (rate_part if name in known_rates else const_part).setdefault(name, Fraction(0))
            if name in known_rates:
                rate_part[name] += v
            else:
                const_part[name] -= v
        for name, v in right.items():
            (rate_part if name in known_rates else const_part).setdefault(name, Fraction(0))
            if name in known_rates:
                rate_part[name] -= v
            else:
                const_part[name] += v
        if flip:
            rate_part = {k: -v for k, v in rate_part.items()}
            const_part = {k: -v for k, v in const_part.items()}
        rows.append(LinearInequality.make(rate_part, const_part))
    system = ConstraintSystem(tuple(rates), tuple(rows))
    for target, parts in defines:
        system = system.apply_definition(target, parts)
    return system, eliminate_list


def _read_data(filename: str) -> str:
    return (resources.files("cogrelay") / "fme_systems" / filename).read_text()


def load_constraints(name: str):
    """Shipped decoder-constraint system and its elimination order."""
    if name not in DERIVATIONS:
        raise ValueError(f"unknown derivation {name!r}; choose from {DERIVATIONS}")
    return parse_system(_read_data(f"{name}_constraints.txt"))


def load_region(name: str) -> ConstraintSystem:
    """Shipped published-region system for the derivation."""
    if name not in DERIVATIONS:
        raise ValueError(f"unknown derivation {name!r}; choose from {DERIVATIONS}")
    system, _ = parse_system(_read_data(f"{name}_region.txt"))
    return system


@dataclass(frozen=True)
class Certification:
    name: str
    equivalent: bool
    covers_published: bool
    rows_match: bool
    samples: int
    derived_rows: int
    pruned_rows: int
    target_rows: int


def certify_derivation(name: str, samples: int = 200, seed: int = 0) -> Certification:
    """Eliminate the shipped constraints and compare with the shipped region.

    `equivalent`: the eliminated system (redundant rows and all) cuts the
    same polytope as the published region at `samples` fresh assignments.
    `covers_published`: every published row appears verbatim among the
    derived rows (exact rational comparison). `rows_match`: after the
    sampling prune the row sets coincide exactly.
    """
    constraints, elim_order = load_constraints(name)
    target = load_region(name)
    sys_ = constraints
    queue = [v for v in elim_order if v in sys_.variables]
    queue += [v for v in sys_.variables if v not in target.variables and v not in queue]
    for victim in queue:
        sys_ = eliminate(sys_, victim)
        sys_ = sys_.with_inequalities(_dominance_prune(sys_.inequalities))
    check = random_assignments(sys_.constant_names(), samples, seed=seed + 1)
    equivalent = all(polytope_equiv(sys_, target, asg) for asg in check)
    derived_keys = {r.key() for r in sys_.inequalities}
    target_keys = {r.key() for r in target.inequalities}
    pruned = prune_redundant(sys_, samples=samples, seed=seed)
    pruned_keys = {r.key() for r in pruned.inequalities}
    return Certification(
        name=name,
        equivalent=equivalent,
        covers_published=target_keys <= derived_keys,
        rows_match=pruned_keys == target_keys,
        samples=samples,
        derived_rows=len(sys_.inequalities),
        pruned_rows=len(pruned.inequalities),
        target_rows=len(target.inequalities),
    )
