"""Command-line interface: region computation, verification suites, sweeps.

Subcommands:

  region   compute one scheme's rate region for an instance; writes
           hull.csv and frontier.csv (columns r1,r2) plus manifest.json
  verify   run a verification suite; exit code 1 on any failed check
  sweep    sweep one instance parameter and write per-step region summaries

Exit codes: 0 success, 1 verification failure, 2 usage error. A JSON config
(--config) provides defaults that explicit flags override; the manifest
written by `region` is itself a valid config, so runs can be reproduced with
`cogrelay region --config manifest.json`.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import gaussian_fd, gaussian_hd, outer_bound, region_ops, verify
from .core import ChannelGains, GridSpec, PowerBudget

SCHEMES = ("fd-pdf", "fd-hkpdf", "hd-pdf", "hd-hkpdf", "hk", "miso-bc")

GRID_PRESETS = {
    "coarse": GridSpec(power=4, rho=5, tau=9, refine=0),
    "default": GridSpec(),
    "fine": GridSpec(power=8, rho=13, tau=49, refine=2),
}


class UsageError(Exception):
    pass


def parse_grid(text: str) -> GridSpec:
    """Accept a preset name or comma-separated key=value overrides."""
    if text in GRID_PRESETS:
        return GRID_PRESETS[text]
    fields = {}
    for part in text.split(","):
        if not part:
            continue
        key, _, value = part.partition("=")
        if key not in ("power", "rho", "tau", "refine") or not value:
            raise UsageError(f"bad grid spec {text!r} (use preset or key=value list)")
        fields[key] = int(value)
    try:
        return GridSpec(**fields)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _region_for(scheme: str, g: ChannelGains, budget: PowerBudget, grid: GridSpec,
                rho_fixed: float | None = None):
    rho_values = None if rho_fixed is None else np.array([rho_fixed])
    if scheme == "fd-pdf":
        return gaussian_fd.fd_pdf_bin_region(g, budget, grid, rho_values=rho_values)
    if scheme == "fd-hkpdf":
        return gaussian_fd.fd_hk_pdf_bin_region(g, budget, grid, rho_values=rho_values)
    if scheme == "hd-pdf":
        return gaussian_hd.hd_pdf_bin_region(g, budget, grid, rho_values=rho_values)
    if scheme == "hd-hkpdf":
        return gaussian_hd.hd_hk_pdf_bin_region(g, budget, grid, rho_values=rho_values)
    if scheme == "hk":
        return gaussian_fd.hk_region(g, budget, grid)
    if scheme == "miso-bc":
        return outer_bound.miso_bc_region(g, budget, grid)
    raise UsageError(f"unknown scheme {scheme!r}")


def _write_csv(path: Path, points: np.ndarray) -> None:
    lines = ["r1,r2"]
    for r1, r2 in points:
        lines.append(f"{r1:.12g},{r2:.12g}")
    path.write_text("\n".join(lines) + "\n")


def _merge_config(args, config: dict) -> dict:
    """Layer defaults <- config file <- explicit flags."""
    instance = dict(config.get("instance", {}))
    for key in ("a", "b", "c", "p1", "p2"):
        flag = getattr(args, key, None)
        if flag is not None:
            instance[key] = flag
    merged = {
        "instance": instance,
        "scheme": getattr(args, "scheme", None) or config.get("scheme"),
        "grid": config.get("grid", {}),
        "seed": config.get("seed", 0),
    }
    if getattr(args, "grid", None) is not None:
        spec = parse_grid(args.grid)
        merged["grid"] = {"power": spec.power, "rho": spec.rho, "tau": spec.tau,
                          "refine": spec.refine}
    if getattr(args, "seed", None) is not None:
        merged["seed"] = args.seed
    if getattr(args, "rho_fixed", None) is not None:
        merged["rho_fixed"] = args.rho_fixed
    elif "rho_fixed" in config:
        merged["rho_fixed"] = config["rho_fixed"]
    return merged


def _instance_from(merged: dict):
    inst = merged["instance"]
    missing = [k for k in ("a", "b", "c", "p1", "p2") if k not in inst]
    if missing:
        raise UsageError(f"missing instance parameters: {', '.join(missing)}")
    if inst["p1"] < 0 or inst["p2"] < 0:
        raise UsageError("powers must be nonnegative")
    g = ChannelGains(inst["a"], inst["b"], inst["c"])
    budget = PowerBudget(inst["p1"], inst["p2"])
    grid = GridSpec(**merged["grid"]) if merged["grid"] else GridSpec()
    return g, budget, grid


def cmd_region(args) -> int:
    config = json.loads(Path(args.config).read_text()) if args.config else {}
    merged = _merge_config(args, config)
    if merged["scheme"] not in SCHEMES:
        raise UsageError(f"scheme must be one of {SCHEMES}, got {merged['scheme']}")
    g, budget, grid = _instance_from(merged)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.monotonic()
    region = _region_for(merged["scheme"], g, budget, grid, merged.get("rho_fixed"))
    runtime = time.monotonic() - t0
    _write_csv(out / "hull.csv", region.hull)
    _write_csv(out / "frontier.csv", region.frontier)
    manifest = {
        "instance": {"a": g.a, "b": g.b, "c": g.c, "p1": budget.p1, "p2": budget.p2},
        "scheme": merged["scheme"],
        "grid": {"power": grid.power, "rho": grid.rho, "tau": grid.tau,
                 "refine": grid.refine},
        "seed": merged["seed"],
        "max_rates": {"r1": region.max_r1, "r2": region.max_r2},
        "runtime_seconds": runtime,
        "files": {"hull": "hull.csv", "frontier": "frontier.csv"},
    }
    if "rho_fixed" in merged:
        manifest["rho_fixed"] = merged["rho_fixed"]
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    print(f"{merged['scheme']}: max_r1={region.max_r1:.6f} max_r2={region.max_r2:.6f} "
          f"({len(region.hull)} hull vertices, {runtime:.2f}s) -> {out}")
    return 0


def cmd_verify(args) -> int:
    suite_fn = verify.SUITES[args.suite]
    kwargs = {}
    if args.seed is not None:
        kwargs["seed"] = args.seed
    if args.suite == "lambda" and args.count is not None:
        kwargs["draws"] = args.count
    if args.suite == "fme" and args.count is not None:
        kwargs["samples"] = args.count
    if args.suite in ("dm", "inclusions") and args.count is not None:
        kwargs["instances"] = args.count
    report = suite_fn(**kwargs)
    for line in report.lines():
        print(line)
    print(f"suite {args.suite}: {'PASS' if report.passed else 'FAIL'} "
          f"({len(report.checks)} checks, {report.seconds:.1f}s)")
    return 0 if report.passed else 1


def cmd_sweep(args) -> int:
    config = json.loads(Path(args.config).read_text()) if args.config else {}
    merged = _merge_config(args, config)
    if merged["scheme"] not in SCHEMES:
        raise UsageError(f"scheme must be one of {SCHEMES}, got {merged['scheme']}")
    if args.steps < 1:
        raise UsageError("sweep needs at least one step")
    merged["instance"].setdefault(args.param, float(args.start))
    g, budget, grid = _instance_from(merged)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    values = np.linspace(args.start, args.stop, args.steps)
    rows = ["value,max_r1,max_r2,sum_rate_peak,gap_to_outer"]
    for value in values:
        inst = {"a": g.a, "b": g.b, "c": g.c, "p1": budget.p1, "p2": budget.p2}
        inst[args.param] = float(value)
        if inst["p1"] < 0 or inst["p2"] < 0:
            raise UsageError("swept power became negative")
        gi = ChannelGains(inst["a"], inst["b"], inst["c"])
        bi = PowerBudget(inst["p1"], inst["p2"])
        region = _region_for(merged["scheme"], gi, bi, grid, merged.get("rho_fixed"))
        if merged["scheme"] == "miso-bc":
            gap = 0.0
        else:
            miso = outer_bound.miso_bc_region(gi, bi, grid)
            gap = region_ops.region_distance(miso, region)
        rows.append(
            f"{value:.12g},{region.max_r1:.12g},{region.max_r2:.12g},"
            f"{region.max_sum_rate:.12g},{gap:.12g}"
        )
    (out / "sweep.csv").write_text("\n".join(rows) + "\n")
    manifest = {
        "instance": {"a": g.a, "b": g.b, "c": g.c, "p1": budget.p1, "p2": budget.p2},
        "scheme": merged["scheme"],
        "grid": {"power": grid.power, "rho": grid.rho, "tau": grid.tau,
                 "refine": grid.refine},
        "seed": merged["seed"],
        "sweep": {"param": args.param, "start": args.start, "stop": args.stop,
                  "steps": args.steps},
        "files": {"sweep": "sweep.csv"},
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    print(f"swept {args.param} over {args.steps} steps -> {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cogrelay",
        description="Rate regions for the causal cognitive relay channel.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_instance_flags(p):
        p.add_argument("--a", type=float, help="cross gain sender1 -> receiver2")
        p.add_argument("--b", type=float, help="cross gain sender2 -> receiver1")
        p.add_argument("--c", type=float, help="relay-link gain sender1 -> sender2")
        p.add_argument("--p1", type=float, help="sender-1 power budget")
        p.add_argument("--p2", type=float, help="sender-2 power budget")
        p.add_argument("--grid", help="grid preset (coarse|default|fine) or key=value list")
        p.add_argument("--seed", type=int, help="seed recorded in the manifest")
        p.add_argument("--config", help="JSON config file; flags override its fields")

    p_region = sub.add_parser("region", help="compute one scheme's rate region")
    p_region.add_argument("--scheme", choices=SCHEMES)
    add_instance_flags(p_region)
    p_region.add_argument("--rho-fixed", dest="rho_fixed", type=float,
                          help="pin the state-correlation factor instead of sweeping")
    p_region.add_argument("--out", required=True, help="output directory")
    p_region.set_defaults(fn=cmd_region)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("--suite", choices=tuple(verify.SUITES), required=True)
    p_verify.add_argument("--seed", type=int)
    p_verify.add_argument("--count", type=int,
                          help="draws/samples/instances, depending on the suite")
    p_verify.set_defaults(fn=cmd_verify)

    p_sweep = sub.add_parser("sweep", help="sweep one instance parameter")
    p_sweep.add_argument("--scheme", choices=SCHEMES)
    add_instance_flags(p_sweep)
    p_sweep.add_argument("--param", choices=("a", "b", "c", "p1", "p2"), required=True)
    p_sweep.add_argument("--start", type=float, required=True)
    p_sweep.add_argument("--stop", type=float, required=True)
    p_sweep.add_argument("--steps", type=int, required=True)
    p_sweep.add_argument("--rho-fixed", dest="rho_fixed", type=float)
    p_sweep.add_argument("--out", required=True)
    p_sweep.set_defaults(fn=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
