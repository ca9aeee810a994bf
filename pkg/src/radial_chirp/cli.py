"""Experiment driver: ``radial-chirp <experiment> --config <path> [--out dir] [--seed n]``.

Each run writes ``summary.json``, ``table.csv`` and the resolved
``config.json``.  Exit codes: 0 success, 1 a failed acceptance assertion or a
refused computation, 2 an invalid config.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import operator as op
import sys
import time
from pathlib import Path

import jsonschema
import numpy as np

from . import chirp, littlewood_paley as lp, operator as ops, sobolev, spectral
from .symbols import RadialSymbolSpec
from .trace import extract_trace

log = logging.getLogger("radial_chirp")

EXPERIMENTS = ("decay_table", "reconstruct", "oracle_check", "condition_check", "norm_probe", "lp_demo",
               "sobolev_62")

_num = {"type": "number"}
_int = {"type": "integer"}
_pair = {"type": "array", "items": _num, "minItems": 2, "maxItems": 2}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["experiment"],
    "properties": {
        "experiment": {"enum": list(EXPERIMENTS)},
        "seed": {"type": "integer", "minimum": 0},
        "out": {"type": "string"},
        "symbol": {
            "type": "object",
            "additionalProperties": False,
            "required": ["family", "m", "n"],
            "properties": {
                "family": {"enum": ["bochner_riesz", "modified_br", "custom"]},
                "m": {"type": "integer", "minimum": 1},
                "n": {"type": "integer", "minimum": 1},
                "R": {"type": "number", "exclusiveMinimum": 0},
                "scale": {"type": "number", "exclusiveMinimum": 0},
                "params": {"type": "object"},
                "samples": {"type": "array", "items": _pair},
            },
        },
        "params": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "K": {"type": "integer", "minimum": 0},
                "eps_tail": {"type": "number", "exclusiveMinimum": 0},
                "k_range": _pair,
                "block": {"type": "integer", "minimum": 1},
                "qs": {"type": "array", "items": _num},
                "c_sup": {"type": "number", "exclusiveMinimum": 1},
                "allow_unguarded": {"type": "boolean"},
                "n_points": {"type": "integer", "minimum": 3},
                "grid": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {"n": _int, "N": _int, "L": _num, "band": _num},
                },
                "budget": {"type": "integer", "minimum": 1},
                "trials": {"type": "integer", "minimum": 1},
                "applier": {"enum": ["direct", "fast"]},
                "eps": _num,
                "j_range": _pair,
                "resolution": {"type": "integer", "minimum": 1},
                "method": {"enum": list(sobolev.METHODS)},
                "variant": {"enum": list(lp.VARIANTS)},
                "functions": {"type": "integer", "minimum": 1},
                "lam": _num,
                "d": {"type": "integer", "minimum": 1},
                "order": {"type": "integer", "minimum": 0},
                "k": _int,
                "M": {"type": "integer", "minimum": 4},
            },
        },
        "acceptance": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["metric", "op", "value"],
                "properties": {"metric": {"type": "string"}, "op": {"enum": ["<=", "<", ">=", ">", "=="]},
                               "value": _num},
            },
        },
    },
}

DEFAULTS = {
    "decay_table": {"K": 4096, "k_range": [32, 2048], "block": 1, "qs": [1.0]},
    "reconstruct": {"eps_tail": 1e-6, "n_points": 10000},
    "oracle_check": {"eps_tail": 1e-6, "grid": {"n": 1, "N": 32, "L": 12.0, "band": 1.0}, "budget": 2 ** 24},
    "condition_check": {"eps": 0.4, "method": "fourier_weight"},
    "norm_probe": {"eps_tail": 1e-6, "grid": {"n": 1, "N": 32, "L": 12.0, "band": 1.0}, "trials": 100,
                   "applier": "fast", "budget": 2 ** 24},
    "lp_demo": {"variant": "1/4-4", "functions": 20, "grid": {"n": 1, "N": 256, "L": 64.0, "band": 1.9}},
    "sobolev_62": {"lam": 1.0, "d": 2, "order": 2, "k": 0, "M": 4096},
}

OPS = {"<=": op.le, "<": op.lt, ">=": op.ge, ">": op.gt, "==": op.eq}


class ConfigError(ValueError):
    pass


def validate(config: dict) -> None:
    try:
        jsonschema.validate(config, SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"{path}: {exc.message}") from None


def resolve(config: dict, experiment: str, seed: int | None, out: str | None) -> dict:
    """Defaults < config file < command line flags."""
    if config.get("experiment", experiment) != experiment:
        raise ConfigError(f"experiment: config says {config['experiment']!r}, command line says {experiment!r}")
    params = json.loads(json.dumps(DEFAULTS[experiment]))
    for key, val in config.get("params", {}).items():
        if isinstance(val, dict) and isinstance(params.get(key), dict):
            params[key].update(val)
        else:
            params[key] = val
    res = dict(config, experiment=experiment, params=params)
    res["seed"] = seed if seed is not None else config.get("seed", 0)
    if out is not None:
        res["out"] = out
    res.setdefault("out", f"runs/{experiment}")
    res.setdefault("acceptance", [])
    validate(res)
    return res


def _symbol(cfg):
    if "symbol" not in cfg:
        raise ConfigError(f"symbol: required for {cfg['experiment']}")
    try:
        return RadialSymbolSpec.from_dict(cfg["symbol"])
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"symbol: {exc}") from None


def _decomp(spec, p):
    kw = {"cutoff": chirp.BumpCutoff(p.get("c_sup", 1.2)), "allow_unguarded": p.get("allow_unguarded", False)}
    if "K" in p:
        return chirp.build_decomposition(spec, K=p["K"], **kw)
    return chirp.build_decomposition(spec, eps_tail=p["eps_tail"], **kw)


def _write_rows(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _f(x):
    return repr(float(x))


# -- experiments -----------------------------------------------------------

def run_decay_table(cfg, out):
    spec, p = _symbol(cfg), cfg["params"]
    table = spectral.fourier_coefficients(extract_trace(spec), p["K"])
    table.to_csv(out / "table.csv")
    summary = table.summary(k_range=p["k_range"], qs=p["qs"], block=p["block"])
    summary["alpha"] = summary.get("decay_fit", {}).get("alpha")
    return summary


def run_reconstruct(cfg, out):
    spec, p = _symbol(cfg), cfg["params"]
    dec = _decomp(spec, p)
    rng = np.random.default_rng(cfg["seed"])
    rows, errs = [], {}
    for region, pts in chirp.sample_regions(dec, p["n_points"], rng).items():
        _, err = chirp.reconstruct(dec, pts)
        errs[region] = err
        rows.append([region, len(pts), _f(err)])
    _write_rows(out / "table.csv", ["region", "points", "sup_error"], rows)
    bound = dec.tail.total + 1e-6
    return {"K": dec.K, "tail": dec.tail.total, "tail_method": dec.tail.method, "bound": bound,
            "sup_error": max(errs.values()), "region_errors": errs,
            "passed": bool(max(errs.values()) <= bound)}


def _grid_inputs(cfg, m):
    g = cfg["params"]["grid"]
    rng = np.random.default_rng(cfg["seed"])
    return [ops.random_bandlimited(rng, g["n"], g["N"], g["L"], g["band"]) for _ in range(m)]


def run_oracle_check(cfg, out):
    spec, p = _symbol(cfg), cfg["params"]
    fs = _grid_inputs(cfg, spec.m)
    ref = ops.apply_direct(spec, fs, budget=p["budget"])
    dec = _decomp(spec, p)
    fast = ops.apply_fast(dec, fs)
    diff = ops.GridFunction(fast.samples - ref.samples, ref.L)
    rel = diff.norm() / ref.norm() if ref.norm() else diff.norm()
    rows = [[i, _f(a.real), _f(a.imag), _f(b.real), _f(b.imag)]
            for i, (a, b) in enumerate(zip(ref.samples.ravel(), fast.samples.ravel()))]
    _write_rows(out / "table.csv", ["index", "direct_re", "direct_im", "fast_re", "fast_im"], rows)
    return {"K": dec.K, "tail": dec.tail.total, "rel_error": rel, "direct_norm": ref.norm()}


def run_condition_check(cfg, out):
    spec, p = _symbol(cfg), cfg["params"]
    rep = sobolev.condition_check(spec, p["eps"], j_range=p.get("j_range"), K=p.get("resolution"),
                                  method=p["method"])
    rep.to_csv(out / "table.csv")
    return rep.to_dict()


def run_norm_probe(cfg, out):
    spec, p = _symbol(cfg), cfg["params"]
    g = p["grid"]
    dec = _decomp(spec, p)
    if p["applier"] == "fast":
        def applier(fs):
            return ops.apply_fast(dec, fs)
    else:
        def applier(fs):
            return ops.apply_direct(spec, fs, budget=p["budget"])
    stats = ops.norm_probe(applier, spec.m, p["trials"], n=g["n"], N=g["N"], L=g["L"], band=g["band"],
                           seed=cfg["seed"])
    _write_rows(out / "table.csv", ["trial", "ratio"], [[i, _f(r)] for i, r in enumerate(stats.ratios)])
    bound = spectral.ell_q_norm(dec.table, 2.0 / spec.m)
    return {**stats.to_dict(), "ell_q": bound.value, "q": 2.0 / spec.m, "K": dec.K}


def run_lp_demo(cfg, out):
    p = cfg["params"]
    part = lp.build_partition(p["variant"])
    g = p["grid"]
    rng = np.random.default_rng(cfg["seed"])
    rows, worst = [], 0.0
    for i in range(p["functions"]):
        f = ops.random_bandlimited(rng, g["n"], g["N"], g["L"], g["band"])
        energies = lp.lp_energies(f, part)
        worst = max(worst, sum(energies.values()) / f.norm() ** 2)
        rows.extend([i, j, _f(e)] for j, e in sorted(energies.items()))
    _write_rows(out / "table.csv", ["function", "j", "energy"], rows)
    r = np.geomspace(2.0 ** -8, 2.0 ** 8, 10 ** 4)
    return {"partition_error": float(np.max(np.abs(part.total(r) - 1.0))), "max_overlap_ratio": worst,
            "max_terms": part.overlap(r)}


def run_sobolev_62(cfg, out):
    p = cfg["params"]
    res = sobolev.radial_integer_sobolev(sobolev.br_inner_profile(p["lam"]), p["d"], p["order"], k=p["k"],
                                         M=p["M"])
    _write_rows(out / "table.csv", ["j", "term"], [[j, _f(t)] for j, t in enumerate(res.terms)])
    return {"total": res.total, "terms": list(res.terms), "refinement_change": res.refinement_change}


RUNNERS = {name: globals()[f"run_{name}"] for name in EXPERIMENTS}


def _lookup(summary, metric):
    cur = summary
    for part in metric.split("."):
        cur = cur[part]
    return cur


def check_acceptance(summary, rules) -> list[tuple[str, bool, object]]:
    results = []
    for rule in rules:
        try:
            val = _lookup(summary, rule["metric"])
            ok = bool(OPS[rule["op"]](val, rule["value"]))
        except (KeyError, TypeError):
            val, ok = None, False
        results.append((f"{rule['metric']} {rule['op']} {rule['value']}", ok, val))
    return results


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


def run(config: dict, experiment: str, seed: int | None = None, out: str | None = None) -> int:
    cfg = resolve(config, experiment, seed, out)
    outdir = Path(cfg["out"])
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "config.json").write_text(json.dumps(cfg, indent=2, sort_keys=True) + "\n")
    t0 = time.perf_counter()
    try:
        summary = RUNNERS[experiment](cfg, outdir)
    except ops.BudgetError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 1
    checks = check_acceptance(summary, cfg["acceptance"])
    summary["acceptance"] = [{"check": c, "passed": ok, "value": v} for c, ok, v in checks]
    summary["seed"] = cfg["seed"]
    summary["elapsed_s"] = time.perf_counter() - t0
    (outdir / "summary.json").write_text(json.dumps(_jsonable(summary), indent=2, sort_keys=True) + "\n")
    for c, ok, v in checks:
        print(f"{'PASS' if ok else 'FAIL'} {c} (measured {v})")
    return 0 if all(ok for _, ok, _ in checks) else 1


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="radial-chirp", description=__doc__.splitlines()[0])
    ap.add_argument("experiment", choices=EXPERIMENTS)
    ap.add_argument("--config", required=True, help="JSON experiment config")
    ap.add_argument("--out", help="output directory (default runs/<experiment>)")
    ap.add_argument("--seed", type=int, help="overrides the config seed")
    ap.add_argument("-v", "--verbose", action="store_true")
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        config = json.loads(Path(args.config).read_text())
        if not isinstance(config, dict):
            raise ConfigError("<root>: config must be a JSON object")
        validate(config)
        return run(config, args.experiment, args.seed, args.out)
    except json.JSONDecodeError as exc:
        print(f"invalid config: <root>: malformed JSON ({exc})", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
