"""Command-line orchestration: declarative experiment configs, deterministic reports.

Subcommands: ``describe`` (dependence coefficients and the martingale kernel),
``decompose`` (verified coboundary components), ``verify-clt`` (seeded Monte
Carlo checks of the Gaussian limit), ``counterexample`` (dependence-condition
separation table), and ``selftest`` (the exact-identity suites).  Reports are
pure functions of (config, seed, version); ``--threads`` only changes wall
time, never a byte of output.

Exit codes: 0 success, 1 invalid configuration, 2 enumeration cap exceeded,
3 statistical or identity check failed.
"""

from __future__ import annotations

import argparse
import itertools
import os
import sys
from dataclasses import dataclass
from math import sqrt

from . import __version__
from .coboundary import center, check_order, decompose
from .counterexample import comparison_report, embed_diagonal, truncated_martingale
from .dependence import dependence_profile, martingale_kernel
from .functional import FiniteRangeFunctional, from_terms, innovation_at
from .innovation import CapExceededError, InnovationLaw
from .lattice import unit
from .montecarlo import approximation_gap, sample_paths, uniform_grid
from .report import Report, config_digest, format_value
from .stats import ks_test, moment_summary, normal_cdf, sheet_covariance_check
from .suites import run_all

DEFAULT_SEED = 20260809


class ConfigError(ValueError):
    """Invalid experiment configuration; the message names the offending field."""


_KNOWN_KEYS = {
    "dimension",
    "law",
    "functional",
    "grids",
    "replicates",
    "seed",
    "t_resolution",
    "order",
    "auto_center",
    "ks_level",
    "truncations",
    "covariance_pairs",
}


@dataclass
class ExperimentConfig:
    dimension: int
    law: InnovationLaw
    functional: FiniteRangeFunctional
    grids: list[tuple[int, ...]]
    replicates: int
    seed: int
    t_resolution: int
    order: int
    auto_center: bool
    ks_level: float
    truncations: list[int]
    covariance_pairs: list[tuple[tuple[float, ...], tuple[float, ...]]]
    doc: dict


def _builtin_functional(name: str, params: dict, law: InnovationLaw, dim: int):
    if name.startswith("counterexample"):
        if ":" in name:
            n_max = int(name.split(":", 1)[1])
        else:
            n_max = int(params.get("n_max", 3))
        f = truncated_martingale(n_max, law)
        return embed_diagonal(f, dim) if dim > 1 else f
    origin = (0,) * dim
    if name == "identity":
        return innovation_at(law, origin)
    if name == "linear":
        a = float(params.get("a", 0.5))
        back = tuple(-c for c in unit(dim, 0))
        return innovation_at(law, origin) + a * innovation_at(law, back)
    if name == "telescope":
        back = tuple(-c for c in unit(dim, 0))
        return innovation_at(law, back) - innovation_at(law, origin)
    raise ConfigError(f"functional: unknown builtin {name!r}")


def resolve_config(raw: dict) -> ExperimentConfig:
    """Validate a raw config mapping and build the experiment objects."""
    unknown = set(raw) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    dim = int(raw.get("dimension", 1))
    if not 1 <= dim <= 6:
        raise ConfigError(f"dimension: must be between 1 and 6, got {dim}")

    law_doc = raw.get("law", {"values": [-1.0, 1.0], "probs": [0.5, 0.5]})
    try:
        law = InnovationLaw(tuple(law_doc["values"]), tuple(law_doc["probs"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"law: {exc}") from exc

    spec = raw.get("functional", "identity")
    try:
        if isinstance(spec, str):
            f = _builtin_functional(spec, {}, law, dim)
        elif isinstance(spec, dict) and "builtin" in spec:
            f = _builtin_functional(spec["builtin"], spec, law, dim)
        elif isinstance(spec, dict) and "terms" in spec:
            f = from_terms(law, dim, spec["terms"])
        else:
            raise ConfigError("functional: need a builtin name or a term list")
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"functional: {exc}") from exc

    grids_doc = raw.get("grids", [[64] * dim])
    grids = []
    for g in grids_doc:
        n = tuple(int(c) for c in (g if isinstance(g, (list, tuple)) else [g] * dim))
        if len(n) != dim or any(c < 1 for c in n):
            raise ConfigError(f"grids: bad grid {g} for dimension {dim}")
        grids.append(n)
    if not grids:
        raise ConfigError("grids: need at least one grid")

    replicates = int(raw.get("replicates", 500))
    if replicates < 1:
        raise ConfigError("replicates: must be positive")
    seed = int(raw.get("seed", DEFAULT_SEED))
    t_resolution = int(raw.get("t_resolution", 4))
    if t_resolution < 1:
        raise ConfigError("t_resolution: must be at least 1")
    order = int(raw.get("order", 2))
    if order < 1:
        raise ConfigError("order: must be a positive integer")
    auto_center = bool(raw.get("auto_center", False))
    ks_level = float(raw.get("ks_level", 0.01))
    truncations = [int(n) for n in raw.get("truncations", [2, 3, 4, 5])]

    pairs_doc = raw.get("covariance_pairs")
    if pairs_doc is None:
        half = (0.5,) + (1.0,) * (dim - 1)
        cross = (1.0, 0.5)[: min(dim, 2)] + (1.0,) * max(dim - 2, 0)
        pairs = [(half, cross), ((1.0,) * dim, (1.0,) * dim)]
    else:
        pairs = []
        for entry in pairs_doc:
            s, t = entry
            pairs.append((tuple(float(c) for c in s), tuple(float(c) for c in t)))
            if len(pairs[-1][0]) != dim or len(pairs[-1][1]) != dim:
                raise ConfigError(f"covariance_pairs: wrong dimension in {entry}")

    doc = {
        "dimension": dim,
        "law": {"values": list(law.values), "probs": list(law.probs)},
        "functional": spec,
        "grids": [list(g) for g in grids],
        "replicates": replicates,
        "seed": seed,
        "t_resolution": t_resolution,
        "order": order,
        "auto_center": auto_center,
        "ks_level": ks_level,
        "truncations": truncations,
        "covariance_pairs": [[list(s), list(t)] for s, t in pairs],
    }
    return ExperimentConfig(
        dimension=dim,
        law=law,
        functional=f,
        grids=grids,
        replicates=replicates,
        seed=seed,
        t_resolution=t_resolution,
        order=order,
        auto_center=auto_center,
        ks_level=ks_level,
        truncations=truncations,
        covariance_pairs=pairs,
        doc=doc,
    )


def _new_report(cfg: ExperimentConfig, command: str) -> Report:
    return Report(
        meta={
            "command": command,
            "config_sha256": config_digest(cfg.doc),
            "seed": cfg.seed,
            "version": __version__,
        }
    )


def _table_section(report: Report, name: str, f: FiniteRangeFunctional) -> None:
    """Emit the dense value table of a functional as one section."""
    table = f.materialize()
    columns = [f"site {format_value(s)}" for s in table.sites] + ["value"]
    sec = report.section(name, columns)
    if not table.sites:
        sec.add(float(table.values))
        return
    for idx in itertools.product(range(f.law.size), repeat=len(table.sites)):
        row = [f.law.values[j] for j in idx] + [float(table.values[idx])]
        sec.add(*row)


def cmd_describe(cfg: ExperimentConfig, threads: int = 1) -> tuple[Report, int]:
    profile = dependence_profile(cfg.functional)
    kernel = martingale_kernel(cfg.functional)
    report = _new_report(cfg, "describe")

    window = report.section("window", ["site"])
    for s in cfg.functional.window:
        window.add(s)

    for name, terms in (
        ("hannan", profile.hannan_terms),
        ("delta", profile.delta_terms),
        ("wm", profile.wm_terms),
    ):
        sec = report.section(name, ["index", "value"])
        for site in sorted(terms):
            sec.add(site, terms[site])

    totals = report.section("totals", ["name", "value"])
    totals.add("hannan_total", profile.hannan_total)
    totals.add("delta_total", profile.delta_total)
    totals.add("wm_total", profile.wm_total)
    totals.add("sigma2", profile.sigma2)

    _table_section(report, "kernel_table", kernel.d0)
    return report, 0


def cmd_decompose(cfg: ExperimentConfig, threads: int = 1) -> tuple[Report, int]:
    f = cfg.functional
    if cfg.auto_center and not check_order(f, cfg.order):
        f = center(f, cfg.order)
    parts = decompose(f, cfg.order)
    report = _new_report(cfg, "decompose")

    summary = report.section("summary", ["name", "value"])
    summary.add("order", parts.order)
    summary.add("residual", parts.residual)
    summary.add("kernel_residual", parts.kernel_residual)
    summary.add("martingale_violation", parts.martingale_violation)

    axes_sec = report.section("components", ["mask", "martingale_axes", "terms"])
    for mask in sorted(parts.components):
        axes = [q for q in range(parts.dim) if mask >> q & 1]
        axes_sec.add(mask, tuple(axes), len(parts.components[mask].terms))
        _table_section(report, f"component_{mask}", parts.components[mask])
    return report, 0


def cmd_verify_clt(cfg: ExperimentConfig, threads: int = 1) -> tuple[Report, int]:
    f = cfg.functional
    if cfg.replicates < 200:
        raise ConfigError("replicates: verify-clt needs at least 200 replicates")
    kernel = martingale_kernel(f)
    if kernel.sigma2 <= 0.0:
        raise ConfigError("functional: degenerate limit (sigma2 is zero); use describe")
    sigma = sqrt(kernel.sigma2)
    report = _new_report(cfg, "verify-clt")
    report.meta["sigma2"] = kernel.sigma2
    t_grid = uniform_grid(cfg.dimension, cfg.t_resolution)
    one = (1.0,) * cfg.dimension
    failed = False

    ks_sec = report.section(
        "ks", ["grid", "statistic", "critical_value", "level", "sample_size", "pass"]
    )
    var_sec = report.section(
        "variance", ["grid", "mean", "var", "target", "se_var", "pass"]
    )
    cov_sec = report.section(
        "covariance", ["grid", "s", "t", "empirical", "target", "se", "deviation_se", "pass"]
    )
    gap_sec = report.section("gap", ["grid", "mean", "median", "q75", "max"])

    gap_medians = []
    for n in cfg.grids:
        paths = sample_paths(f, n, t_grid, cfg.replicates, cfg.seed, threads)
        corner = [p.value_at(one) for p in paths]

        ks = ks_test([v / sigma for v in corner], normal_cdf, cfg.ks_level)
        ks_sec.add(n, ks.statistic, ks.critical_value, ks.level, ks.sample_size, ks.passed)
        failed |= not ks.passed

        moments = moment_summary(corner)
        var_ok = abs(moments.var - kernel.sigma2) <= 4.0 * moments.se_var
        var_sec.add(n, moments.mean, moments.var, kernel.sigma2, moments.se_var, var_ok)
        failed |= not var_ok

        for row in sheet_covariance_check(paths, cfg.covariance_pairs, kernel.sigma2):
            cov_sec.add(
                n, row.s, row.t, row.empirical, row.target, row.se, row.deviation_se, row.within
            )
            failed |= not row.within

        gap = approximation_gap(f, n, cfg.replicates, cfg.seed, threads)
        gap_sec.add(n, gap.mean, gap.median, gap.q75, gap.max)
        gap_medians.append(gap.median)

    trend = report.section("gap_trend", ["first_grid", "last_grid", "first_median", "last_median", "pass"])
    if len(cfg.grids) >= 2:
        ok = gap_medians[-1] < gap_medians[0] or gap_medians[0] == 0.0
        trend.add(cfg.grids[0], cfg.grids[-1], gap_medians[0], gap_medians[-1], ok)
        failed |= not ok
    return report, 3 if failed else 0


def cmd_counterexample(cfg: ExperimentConfig, threads: int = 1) -> tuple[Report, int]:
    if not cfg.truncations:
        raise ConfigError("truncations: need at least one truncation depth")
    rep = comparison_report(cfg.truncations)
    report = _new_report(cfg, "counterexample")
    sec = report.section(
        "truncations",
        [
            "n_max",
            "hannan_total",
            "hannan_bound",
            "delta_total",
            "delta_lower_bound",
            "mode",
            "lower_bound_ok",
        ],
    )
    failed = False
    for row in rep.rows:
        sec.add(
            row.n_max,
            row.hannan_total,
            row.hannan_bound,
            row.delta_total,
            row.delta_lower_bound,
            row.mode,
            row.lower_bound_ok,
        )
        failed |= row.lower_bound_ok is False
    growth = report.section("growth", ["n_max", "ratio"])
    for n in sorted(rep.growth_ratios):
        growth.add(n, rep.growth_ratios[n])
    return report, 3 if failed else 0


def cmd_selftest(
    cfg: ExperimentConfig, threads: int = 1, tolerance: float | None = None
) -> tuple[Report, int]:
    checks = run_all(cfg.seed)
    report = _new_report(cfg, "selftest")
    if tolerance is not None:
        report.meta["tolerance_override"] = tolerance
    sec = report.section("suites", ["suite", "check", "violation", "tolerance", "pass"])
    failed = False
    for c in checks:
        tol = tolerance if tolerance is not None else c.tolerance
        ok = c.violation <= tol
        sec.add(c.suite, c.label, c.violation, tol, ok)
        failed |= not ok
    return report, 3 if failed else 0


_COMMANDS = {
    "describe": cmd_describe,
    "decompose": cmd_decompose,
    "verify-clt": cmd_verify_clt,
    "counterexample": cmd_counterexample,
    "selftest": cmd_selftest,
}


def _load_raw_config(path: str | None) -> dict:
    if path is None:
        return {}
    import json

    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    return raw


def _resolve_threads(flag: int | None) -> int:
    if flag is not None:
        return max(1, flag)
    env = os.environ.get("ORTHOFIELD_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"ORTHOFIELD_THREADS is not an integer: {env!r}") from None
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orthofield",
        description="Exact projection algebra and Monte Carlo checks for stationary random fields.",
    )
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--config", help="JSON experiment configuration")
    parser.add_argument("--seed", type=int, help="override the config seed")
    parser.add_argument("--out", help="output directory (stdout when omitted)")
    parser.add_argument("--format", choices=("csv", "json"), default="json")
    parser.add_argument("--replicates", type=int, help="override the config replicate count")
    parser.add_argument("--threads", type=int, help="worker threads; never changes results")
    parser.add_argument(
        "--truncations", help="comma-separated truncation depths for counterexample"
    )
    parser.add_argument(
        "--tolerance", type=float, help="override suite tolerances in selftest"
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        raw = _load_raw_config(args.config)
        if args.seed is not None:
            raw["seed"] = args.seed
        if args.replicates is not None:
            raw["replicates"] = args.replicates
        if args.truncations is not None:
            raw["truncations"] = [int(v) for v in args.truncations.split(",") if v]
        threads = _resolve_threads(args.threads)
        cfg = resolve_config(raw)
        if args.command == "selftest":
            report, code = cmd_selftest(cfg, threads, tolerance=args.tolerance)
        else:
            report, code = _COMMANDS[args.command](cfg, threads)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    if args.out:
        report.write(args.out, args.format)
    else:
        if args.format == "csv":
            print("error: --format csv requires --out", file=sys.stderr)
            return 1
        sys.stdout.buffer.write(report.to_json_bytes())
    return code


if __name__ == "__main__":
    raise SystemExit(main())
