"""Command-line front end: config ingestion, subcommands, structured output.

One JSON config document drives every subcommand; the flags --seed,
--threads, --out, and --format override the matching config fields. Every
output CSV starts with a comment line carrying a digest of the effective
config and the seed; JSON reports carry the same two values as their first
fields so they stay parseable. The digest excludes the output directory,
format, and thread count, none of which affect the numbers.

Exit codes: 0 success, 2 config or input error, 3 quadrature non-convergence,
4 divergent moment.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import analytic, kernels, levy, simulate, verify
from .errors import (ConfigError, DivergentMomentError, EmptyTruncationError,
                     NonConvergenceError, NotAvailableError)

_DEFAULT_Z_GRID = [round(-5.0 + 0.25 * i, 2) for i in range(41)]

_ALLOWED_KEYS = {
    "measure", "kernel", "T", "T_grid", "ls", "zs_base", "z_grid", "t_grid",
    "eps", "N", "seed", "quad_tol", "conditions_budget", "threshold",
    "window_pad", "threads", "out", "format",
}


@dataclass
class RunConfig:
    measure_cfg: dict
    kernel_cfg: dict
    measure: object
    kernel: object
    T: float
    T_grid: list
    ls: list
    zs_base: list | None
    z_grid: list
    t_grid: list
    eps: float
    N: int
    seed: int
    quad_tol: float
    conditions_budget: int
    threshold: float
    window_pad: float | None
    threads: int
    out: str
    format: str
    digest: str = ""


def _as_float_list(value, name):
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{name} must be a non-empty list of numbers")
    out = []
    for v in value:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"{name} must contain only numbers")
        out.append(float(v))
    return out


def _as_points(value, name):
    # scalars give d=1 points; lists of lists give d>1 points
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{name} must be a non-empty list")
    if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        return [[float(v)] for v in value]
    if all(isinstance(v, list) for v in value):
        return [_as_float_list(v, name) for v in value]
    raise ConfigError(f"{name} must be all scalars or all lists")


def load_config(path: str, *, seed=None, threads=None, out=None,
                fmt=None) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - _ALLOWED_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for key in ("measure", "kernel"):
        if key not in raw:
            raise ConfigError(f"config needs a {key!r} entry")

    measure = levy.from_config(raw["measure"])
    kernel = kernels.from_config(raw["kernel"], base_dir=os.path.dirname(path) or ".")

    def num(key, default, lo=None, integer=False):
        v = raw.get(key, default)
        if v is None:
            return None
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"{key} must be a number")
        if lo is not None and v < lo:
            raise ConfigError(f"{key} must be >= {lo}")
        return int(v) if integer else float(v)

    cfg = RunConfig(
        measure_cfg=raw["measure"], kernel_cfg=raw["kernel"],
        measure=measure, kernel=kernel,
        T=num("T", 10.0, lo=0.0),
        T_grid=_as_float_list(raw.get("T_grid", [5.0, 10.0, 20.0, 40.0]), "T_grid"),
        ls=_as_points(raw.get("ls", [0.0]), "ls"),
        zs_base=(_as_float_list(raw["zs_base"], "zs_base")
                 if "zs_base" in raw else None),
        z_grid=_as_float_list(raw.get("z_grid", _DEFAULT_Z_GRID), "z_grid"),
        t_grid=_as_points(raw.get("t_grid", [0.0, 1.0, 2.0]), "t_grid"),
        eps=num("eps", 1e-3, lo=0.0),
        N=num("N", 10_000, lo=1, integer=True),
        seed=num("seed", 0, lo=0, integer=True),
        quad_tol=num("quad_tol", 1e-9, lo=0.0),
        conditions_budget=num("conditions_budget", 2_000_000, lo=1, integer=True),
        threshold=num("threshold", 1e-3, lo=0.0),
        window_pad=num("window_pad", None, lo=0.0),
        threads=num("threads", 1, lo=1, integer=True),
        out=str(raw.get("out", ".")),
        format=str(raw.get("format", "csv")),
    )
    if seed is not None:
        cfg.seed = int(seed)
    if threads is not None:
        cfg.threads = int(threads)
    if out is not None:
        cfg.out = out
    if fmt is not None:
        cfg.format = fmt
    if cfg.format not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {cfg.format!r}")
    if cfg.eps <= 0.0:
        raise ConfigError("eps must be positive")

    payload = {
        "measure": cfg.measure_cfg, "kernel": cfg.kernel_cfg, "T": cfg.T,
        "T_grid": cfg.T_grid, "ls": cfg.ls, "zs_base": cfg.zs_base,
        "z_grid": cfg.z_grid, "t_grid": cfg.t_grid, "eps": cfg.eps,
        "N": cfg.N, "seed": cfg.seed, "quad_tol": cfg.quad_tol,
        "conditions_budget": cfg.conditions_budget,
        "threshold": cfg.threshold, "window_pad": cfg.window_pad,
    }
    canon = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    cfg.digest = hashlib.sha256(canon.encode("utf-8")).hexdigest()
    return cfg


# -- output helpers ----------------------------------------------------------

def _out_path(cfg: RunConfig, stem: str, ext: str) -> str:
    os.makedirs(cfg.out, exist_ok=True)
    return os.path.join(cfg.out, f"{stem}.{ext}")


def _write_json(cfg: RunConfig, stem: str, data: dict) -> str:
    path = _out_path(cfg, stem, "json")
    doc = {"config_digest": cfg.digest, "seed": cfg.seed}
    doc.update(data)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    return path


def _write_csv(cfg: RunConfig, stem: str, columns: list, rows: list,
               extra_comments=()) -> str:
    path = _out_path(cfg, stem, "csv")
    lines = [f"# config_digest={cfg.digest} seed={cfg.seed}"]
    lines += [f"# {c}" for c in extra_comments]
    lines.append(",".join(columns))
    for row in rows:
        cells = []
        for v in row:
            if isinstance(v, bool):
                cells.append(str(v).lower())
            elif isinstance(v, (int, np.integer)):
                cells.append(str(int(v)))
            else:
                cells.append(f"{float(v):.17g}")
        lines.append(",".join(cells))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def _emit_table(cfg: RunConfig, stem: str, columns: list, rows: list,
                extra: dict | None = None) -> str:
    if cfg.format == "json":
        data = dict(extra or {})
        data["columns"] = columns
        data["rows"] = [[bool(v) if isinstance(v, bool) else float(v)
                         for v in row] for row in rows]
        return _write_json(cfg, stem, data)
    comments = [f"{k}={v}" for k, v in (extra or {}).items()]
    return _write_csv(cfg, stem, columns, rows, extra_comments=comments)


# -- subcommands -------------------------------------------------------------

def _cmd_conditions(cfg: RunConfig) -> list:
    rep = analytic.check_conditions(cfg.kernel, cfg.measure,
                                    quad_tol=cfg.quad_tol,
                                    budget=cfg.conditions_budget)
    if cfg.format == "json":
        return [_write_json(cfg, "conditions", rep.to_dict())]
    row = [rep.c1, rep.c2, rep.c3, rep.c1_pass, rep.c2_pass, rep.c3_pass]
    return [_write_csv(cfg, "conditions",
                       ["c1", "c2", "c3", "c1_pass", "c2_pass", "c3_pass"],
                       [row])]


def _cf_rows(cfg: RunConfig, log_fn) -> list:
    rows = []
    for u in cfg.z_grid:
        lc = log_fn(float(u))
        cf = np.exp(lc)
        rows.append([u, lc.real, lc.imag, cf.real, cf.imag])
    return rows


def _cmd_cf(cfg: RunConfig) -> list:
    cols = ["z", "log_re", "log_im", "cf_re", "cf_im"]
    pk = kernels.as_product(cfg.kernel)
    ls = np.asarray(cfg.ls, dtype=float)
    zs_base = (np.ones(ls.shape[0]) if cfg.zs_base is None
               else np.asarray(cfg.zs_base, dtype=float))

    def spec_at(u, T):
        return analytic.fdd_spec(ls, u * zs_base, T)

    paths = [
        _emit_table(cfg, "cf_stationary", cols, _cf_rows(
            cfg, lambda u: analytic.log_cf_stationary(
                pk, cfg.measure, u, tol=cfg.quad_tol))),
        _emit_table(cfg, "cf_window", cols, _cf_rows(
            cfg, lambda u: analytic.log_cf_window(
                pk, cfg.measure, spec_at(u, cfg.T), tol=cfg.quad_tol))),
        _emit_table(cfg, "cf_limit_claimed", cols, _cf_rows(
            cfg, lambda u: analytic.log_cf_limit(
                pk, cfg.measure, spec_at(u, 0.0), "claimed",
                tol=cfg.quad_tol))),
        _emit_table(cfg, "cf_limit_boundary", cols, _cf_rows(
            cfg, lambda u: analytic.log_cf_limit(
                pk, cfg.measure, spec_at(u, 0.0), "boundary_augmented",
                tol=cfg.quad_tol))),
    ]
    return paths


def _cmd_cov(cfg: RunConfig) -> list:
    pk = kernels.as_product(cfg.kernel)
    d = pk.d
    cols = ([f"t_{k}" for k in range(d)] if d > 1 else ["t"]) + ["C"]
    rows = []
    for t in cfg.t_grid:
        if len(t) != d:
            raise ConfigError(f"t_grid entries must have dimension {d}")
        c = analytic.covariance(pk, cfg.measure, t)
        rows.append(list(t) + [c])
    exact = analytic.covariance_integral(pk, cfg.measure)
    quad = analytic.covariance_integral_quadrature(pk, cfg.measure,
                                                   tol=cfg.quad_tol)
    extra = {"integral_exact": exact, "integral_quadrature": quad}
    return [_emit_table(cfg, "cov", cols, rows, extra=extra)]


def _cmd_simulate(cfg: RunConfig) -> list:
    sim_cfg = simulate.SimConfig(
        measure=cfg.measure, kernel=cfg.kernel, T=cfg.T, ls=cfg.ls,
        eps=cfg.eps, window_pad=cfg.window_pad, n_replicates=cfg.N,
        seed=cfg.seed)
    res = simulate.monte_carlo(sim_cfg, threads=cfg.threads)
    path = _out_path(cfg, "replicates", "csv")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        simulate.write_replicates_csv(fh, res, cfg.digest, cfg.seed)
    return [path]


def _cmd_converge(cfg: RunConfig) -> list:
    rep = verify.cf_convergence(
        cfg.kernel, cfg.measure, cfg.ls, cfg.T_grid, cfg.z_grid,
        zs_base=cfg.zs_base, threshold=cfg.threshold, tol=cfg.quad_tol)
    if cfg.format == "json":
        return [_write_json(cfg, "convergence", rep.to_dict())]
    rows = [[t, c, b] for t, c, b in
            zip(rep.T_grid, rep.dist_claimed, rep.dist_boundary)]
    comments = [f"winner={rep.winner}",
                f"monotone_claimed={rep.monotone_claimed}",
                f"monotone_boundary={rep.monotone_boundary}",
                f"threshold={rep.threshold:.17g}"]
    return [_write_csv(cfg, "convergence",
                       ["T", "dist_claimed", "dist_boundary"], rows,
                       extra_comments=comments)]


def _cmd_hyper(cfg: RunConfig) -> list:
    rep = verify.hyperuniformity(
        cfg.kernel, cfg.measure, cfg.T_grid, cfg.N, seed=cfg.seed,
        eps=cfg.eps, threads=cfg.threads)
    if cfg.format == "json":
        return [_write_json(cfg, "hyper", rep.to_dict())]
    rows = [[t, a, e, s, c] for t, a, e, s, c in
            zip(rep.T_grid, rep.var_analytic, rep.var_empirical, rep.var_se,
                rep.control_var)]
    comments = [f"classification={rep.classification}",
                f"control_slope={rep.control_slope:.17g}"]
    return [_write_csv(cfg, "hyper",
                       ["T", "var_analytic", "var_empirical", "var_se",
                        "control_var"], rows, extra_comments=comments)]


_COMMANDS = {
    "conditions": _cmd_conditions,
    "cf": _cmd_cf,
    "cov": _cmd_cov,
    "simulate": _cmd_simulate,
    "converge": _cmd_converge,
    "hyper": _cmd_hyper,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="idma",
        description="Infinitely divisible moving-average fields: analytics, "
                    "simulation, and verification reports")
    parser.add_argument("subcommand", choices=sorted(_COMMANDS))
    parser.add_argument("--config", required=True, help="path to a JSON config")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--threads", type=int, default=None)
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--format", dest="fmt", choices=["csv", "json"],
                        default=None)
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config, seed=args.seed, threads=args.threads,
                          out=args.out, fmt=args.fmt)
        paths = _COMMANDS[args.subcommand](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (NotAvailableError, EmptyTruncationError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NonConvergenceError as exc:
        print(f"quadrature did not converge: {exc}", file=sys.stderr)
        return 3
    except DivergentMomentError as exc:
        print(f"divergent moment: {exc}", file=sys.stderr)
        return 4
    for p in paths:
        print(p)
    return 0


if __name__ == "__main__":
    sys.exit(main())
