"""Command-line front end.

Examples
--------
  twistcodes construct ct5 --r 4 --m 8 --cond 3 --k 6 --t 1 --h 0 --eta-seed 7
  twistcodes construct tc1 --q 13 --k 5 --t 3 --h 0 --l 0
  twistcodes verify L32 --q 13 --all
  twistcodes verify oracle --q 16 --samples 200 --seed 1
  twistcodes search --q 13 --k 5 --t 3 --h 0 --n 13
  twistcodes report run.json --format csv --output run.csv

Exit codes: 0 when every verdict passes, 1 when a check produced a
counterexample, 2 for usage or configuration errors.

The worker count for grid commands comes from $TWISTCODES_WORKERS
(default 1).  Results are merged in grid order, so output does not
depend on it.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

from .codes import CodeSizeError, classify, dual, is_self_orthogonal, non_grs_certificate
from .constructions import (
    ConstructionSpec,
    WindowError,
    corollary41_predicate,
    corollary42_predicate,
    multipliers_from_witness,
    oracle_agreement,
    oracle_instances,
    support_witness_space,
    theorem41_check,
)
from .gf import FieldError, FieldSpec, field_from_order, make_field, subfield_elements
from .gtrs import (
    EvalConfig,
    admissible_params,
    gtrs_code,
    regime,
    rs_code,
    seeded_etas,
    verify_lemma31,
    verify_lemma32,
    verify_lemma34,
    verify_powersum,
)
from .linalg import gram, matrix_hash
from .poly import ParameterError, Poly, TwistParams, dual_space_basis

WORKERS_ENV = "TWISTCODES_WORKERS"
MAX_GRID_CELLS = 20000
MAX_FIELD_ORDER_FOR_GRIDS = 256
ENUMERATE_LIMIT = 4096
DEFAULT_SEED = 2024

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- run config and report ------------------------------------------------


@dataclass
class RunConfig:
    command: str
    target: str | None
    field: dict | None
    params: dict
    seed: int
    strategy: str = "auto"

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class Report:
    command: str
    config: dict
    results: list[dict]
    summary: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"command": self.command, "config": self.config, "results": self.results, "summary": self.summary}

    @classmethod
    def from_json(cls, d: dict) -> "Report":
        return cls(d["command"], d["config"], d["results"], d.get("summary", {}))

    @property
    def passed(self) -> bool:
        return all(r.get("verdict", True) is not False for r in self.results)


def _plain(obj):
    """numpy scalars/arrays and tuples to plain JSON values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, Poly):
        return obj.to_json()
    return obj


def dumps_report(report: Report) -> str:
    return json.dumps(_plain(report.to_json()), sort_keys=True, indent=2) + "\n"


def load_report(path: str | Path) -> Report:
    with open(path, encoding="utf-8") as fh:
        return Report.from_json(json.load(fh))


def report_csv(report: Report) -> str:
    """One row per result; nested values are JSON-encoded."""
    rows = []
    for res in report.results:
        row = {}
        for key, val in sorted(_plain(res).items()):
            if key == "params" and isinstance(val, dict):
                row.update({f"param_{k}": v for k, v in val.items()})
            elif isinstance(val, (dict, list)):
                row[key] = json.dumps(val, sort_keys=True)
            else:
                row[key] = val
        rows.append(row)
    columns = sorted({c for row in rows for c in row})
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def emit(report: Report, fmt: str, output: str | None) -> None:
    text = report_csv(report) if fmt == "csv" else dumps_report(report)
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# -- helpers ----------------------------------------------------------------


def _field(q: int | None, field_cfg: dict | None):
    if field_cfg:
        spec = FieldSpec.from_dict(field_cfg)
        ctx = make_field(spec.p, spec.m, spec.modulus)
        if q is not None and q != ctx.q:
            raise UsageError(f"--q {q} disagrees with the configured field GF({ctx.q})")
        return ctx
    if q is None:
        raise UsageError("--q is required")
    return field_from_order(q)


def _int_list(text: str | None) -> list[int] | None:
    """'3,5,7' or '3-6' or a mix like '3-5,9'."""
    if text is None:
        return None
    out: list[int] = []
    for part in str(text).split(","):
        part = part.strip()
        if "-" in part:
            a, b = part.split("-", 1)
            out.extend(range(int(a), int(b) + 1))
        elif part:
            out.append(int(part))
    return out


def _workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError as exc:
        raise UsageError(f"${WORKERS_ENV} must be an integer") from exc


def _map_cells(fn: Callable, tasks: list, timing: bool) -> list[dict]:
    """Run cells (in a pool when configured); output order is task order."""
    if len(tasks) > MAX_GRID_CELLS:
        raise UsageError(f"grid has {len(tasks)} cells, above the limit {MAX_GRID_CELLS}")
    workers = _workers()
    runner = _timed(fn) if timing else fn
    if workers == 1 or len(tasks) < 2:
        return [runner(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(runner, tasks, chunksize=max(1, len(tasks) // (4 * workers))))


class _timed:
    def __init__(self, fn):
        self.fn = fn

    def __call__(self, task):
        start = time.perf_counter()
        out = self.fn(task)
        out["timing_ms"] = round(1000 * (time.perf_counter() - start), 3)
        return out


def _summary(results: list[dict]) -> dict:
    verdicts = [r.get("verdict") for r in results]
    return {
        "total": len(results),
        "passed": sum(v is True for v in verdicts),
        "failed": sum(v is False for v in verdicts),
    }


def _classification(code, strategy: str) -> dict:
    try:
        return classify(code, strategy).to_json()
    except CodeSizeError as exc:
        return {"skipped": str(exc)}


# -- construct ------------------------------------------------------------


def cmd_construct(args, field_cfg: dict | None) -> Report:
    spec = ConstructionSpec(
        which=args.which.upper(), k=args.k, t=args.t, h=args.h, q=args.q, p=args.p, r=args.r, m=args.m,
        eta=args.eta, eta_seed=args.eta_seed, l=args.l, n=args.n, condition=args.cond,
    )
    ctx = None
    if field_cfg and spec.which in ("TC1", "TC2"):
        ctx = _field(spec.q, field_cfg)
        spec.q = ctx.q
    cfg, code = spec.build(ctx)
    ctx = cfg.ctx
    eta = spec.eta
    if eta is None:
        eta = _resolved_eta(spec, ctx)
    params = TwistParams(spec.k, spec.t, spec.h, int(eta))
    G = gram(ctx, code.gen)
    result: dict[str, Any] = {
        "params": {**spec.to_json(), "eta": int(eta)},
        "verdict": is_self_orthogonal(code),
        "self_orthogonal": is_self_orthogonal(code),
        "n": cfg.n,
        "k": code.k,
        "q": ctx.q,
        "points": cfg.points,
        "multipliers": cfg.multipliers,
        "generator": code.gen,
        "certificate": {"gram_hash": matrix_hash(G), "gram_zero": not G.any(), "rref_hash": matrix_hash(code.gen)},
        "classification": _classification(code, args.strategy),
    }
    try:
        result["regime"] = regime(ctx, spec.k, spec.t).to_json()
    except ParameterError as exc:
        result["regime"] = {"tag": None, "inequality": str(exc)}
    if 2 * code.k < code.n + 1:
        dim = non_grs_certificate(code)
        result["non_grs"] = {"square_dim": dim, "certified": dim is not None}
    if spec.which in ("CT4", "CT5"):
        sub = subfield_elements(ctx, spec.r)
        result["eta_outside_subfield"] = int(eta) not in set(sub.tolist())
    config = RunConfig("construct", spec.which, field_cfg, spec.to_json(), args.seed, args.strategy)
    return Report("construct", config.to_json(), [result], _summary([result]))


def _resolved_eta(spec: ConstructionSpec, ctx) -> int:
    from .constructions import _seeded_nonzero, sample_eta_outside_subfield

    if spec.which in ("CT4", "CT5"):
        return sample_eta_outside_subfield(ctx, spec.r, spec.eta_seed)
    return _seeded_nonzero(ctx, spec.eta_seed)


# -- verify -------------------------------------------------------------------


def _lemma_cell(task) -> dict:
    suite, fspec, (k, t, h, eta), literal = task
    ctx = make_field(**fspec)
    params = TwistParams(k, t, h, eta)
    if suite == "L31":
        rep = verify_lemma31(EvalConfig.standard(ctx), params)
    elif suite == "L32":
        rep = verify_lemma32(ctx, params)
    else:
        rep = verify_lemma34(ctx, params, literal=literal)
    return _plain(rep.to_json())


def _powersum_cell(task) -> dict:
    fspec, l = task
    return _plain(verify_powersum(make_field(**fspec), l).to_json())


def _rsdual_cell(task) -> dict:
    fspec, k = task
    ctx = make_field(**fspec)
    D, R = dual(rs_code(ctx, k)), rs_code(ctx, ctx.q - k)
    return {
        "params": {"q": ctx.q, "k": k},
        "verdict": D == R,
        "dims": {"dual": D.k, "expected": ctx.q - k},
        "certificate": {"dual_rref_hash": matrix_hash(D.gen), "expected_rref_hash": matrix_hash(R.gen)},
    }


def _oracle_cell(task) -> dict:
    fspec, points, mult, (k, t, h, eta) = task
    ctx = make_field(**fspec)
    cfg = EvalConfig(ctx, points, mult)
    params = TwistParams(k, t, h, eta)
    out = oracle_agreement(cfg, params)
    w = theorem41_check(cfg, params)
    return {
        "params": {"q": ctx.q, "n": cfg.n, **params.to_dict()},
        "points": cfg.points,
        "multipliers": cfg.multipliers,
        "verdict": out["agree"],
        "solver": out["solver"],
        "gram_zero": out["gram_zero"],
        "certificate": _plain(w.to_json()),
    }


def _fspec(ctx) -> dict:
    return {"p": ctx.p, "m": ctx.m, "modulus": tuple(ctx.spec.modulus)}


def cmd_verify(args, field_cfg: dict | None) -> Report:
    ctx = _field(args.q, field_cfg)
    fs = _fspec(ctx)
    suite = args.suite
    seed = args.seed
    if suite in ("L31", "L32", "L34"):
        if ctx.q > MAX_FIELD_ORDER_FOR_GRIDS:
            raise UsageError(f"lemma sweeps need q <= {MAX_FIELD_ORDER_FOR_GRIDS}")
        if args.all:
            cells = list(admissible_params(ctx.q))
        else:
            if None in (args.k, args.t, args.h):
                raise UsageError("give --k --t --h or --all")
            cells = [(args.k, args.t, args.h)]
        etas = [args.eta] if args.eta is not None else seeded_etas(ctx, args.etas, seed)
        tasks = [(suite, fs, (k, t, h, e), args.literal) for k, t, h in cells for e in etas]
        results = _map_cells(_lemma_cell, tasks, args.timing)
        params = {"q": ctx.q, "all": args.all, "k": args.k, "t": args.t, "h": args.h,
                  "etas": etas, "literal": args.literal}
    elif suite == "powersum":
        ls = [args.l] if args.l is not None else list(range(1, ctx.q - 1))
        results = _map_cells(_powersum_cell, [(fs, l) for l in ls], args.timing)
        params = {"q": ctx.q, "l": ls}
    elif suite == "rsdual":
        results = _map_cells(_rsdual_cell, [(fs, k) for k in range(1, ctx.q)], args.timing)
        params = {"q": ctx.q}
    elif suite == "oracle":
        inst = oracle_instances(ctx, args.samples, seed)
        tasks = [(fs, c.points, c.multipliers, (p.k, p.t, p.h, p.eta)) for c, p in inst]
        results = _map_cells(_oracle_cell, tasks, args.timing)
        params = {"q": ctx.q, "samples": args.samples}
    else:
        raise UsageError(f"unknown suite {suite}")
    config = RunConfig("verify", suite, field_cfg, params, seed, args.strategy)
    return Report("verify", config.to_json(), results, _summary(results))


# -- search -----------------------------------------------------------------


def _candidate_witnesses(ctx, W, rng, budget: int):
    """Every element of W when small, otherwise a seeded sample of it."""
    d = len(W)
    if d == 0:
        return
    if ctx.q**d <= ENUMERATE_LIMIT:
        for idx in range(1, ctx.q**d):
            coeffs = [(idx // ctx.q**i) % ctx.q for i in range(d)]
            yield W.combine(coeffs)
        return
    for _ in range(budget):
        yield W.combine(rng.integers(0, ctx.q, size=d))


def _search_cell(task) -> dict:
    fspec, (k, t, h, n), samples, seed, cell_index, strategy = task
    ctx = make_field(**fspec)
    q = ctx.q
    rng = np.random.default_rng([seed, cell_index])
    claimed = corollary41_predicate(ctx, k, t) or corollary42_predicate(ctx, n, k, t, h)
    base = {"params": {"q": q, "k": k, "t": t, "h": h, "n": n}, "claimed_nonexistent": claimed}
    if not dual_space_basis(ctx, TwistParams(k, t, h, 1)).polys:
        return {**base, "findings": 0, "samples": 0, "reason": "V-perp empty", "examples": [],
                "verdict": True}
    findings, examples, tried = 0, [], 0
    draws = 1 if n == q else samples
    for _ in range(draws):
        eta = int(rng.integers(1, q))
        points = ctx.elements if n == q else np.sort(rng.choice(q, size=n, replace=False))
        params = TwistParams(k, t, h, eta)
        W = support_witness_space(ctx, points, params)
        tried += 1
        for f in _candidate_witnesses(ctx, W, rng, budget=64):
            v = multipliers_from_witness(ctx, points, f)
            if v is None:
                continue
            cfg = EvalConfig(ctx, points, v)
            code = gtrs_code(cfg, params)
            w = theorem41_check(cfg, params)
            findings += 1
            if len(examples) < 3:
                examples.append({
                    "eta": eta,
                    "points": points,
                    "multipliers": v,
                    "witness": f.to_json(),
                    "gram_zero": is_self_orthogonal(code),
                    "solver": w.verdict,
                    "classification": _classification(code, strategy),
                })
            break
    reason = "found" if findings else "no witness with nonzero square values"
    # a finding inside a cell where non-existence is claimed is a counterexample
    return _plain({**base, "findings": findings, "samples": tried, "reason": reason, "examples": examples,
                   "verdict": not (claimed and findings)})


def cmd_search(args, field_cfg: dict | None) -> Report:
    ctx = _field(args.q, field_cfg)
    q = ctx.q
    if q > MAX_FIELD_ORDER_FOR_GRIDS:
        raise UsageError(f"search needs q <= {MAX_FIELD_ORDER_FOR_GRIDS}")
    ks = _int_list(args.k) or list(range(3, q // 2 + 1))
    cells = []
    for k in ks:
        for t in _int_list(args.t) or range(1, k):
            for h in _int_list(args.h) or range(0, k - t):
                if t < 1 or h < 0 or t + h > k - 1 or 2 * k > q:
                    continue
                for n in _int_list(args.n) or range(2 * k, q + 1):
                    if not 2 * k <= n <= q or k + t > n:
                        continue
                    if args.corollary42_only and not corollary42_predicate(ctx, n, k, t, h):
                        continue
                    cells.append((k, t, h, n))
    tasks = [(_fspec(ctx), c, args.samples, args.seed, i, args.strategy) for i, c in enumerate(cells)]
    results = _map_cells(_search_cell, tasks, args.timing)
    params = {"q": q, "k": args.k, "t": args.t, "h": args.h, "n": args.n, "samples": args.samples,
              "corollary42_only": args.corollary42_only}
    config = RunConfig("search", None, field_cfg, params, args.seed, args.strategy)
    summary = _summary(results)
    summary["cells_with_findings"] = sum(r["findings"] > 0 for r in results)
    return Report("search", config.to_json(), results, summary)


# -- report -------------------------------------------------------------------


def cmd_report(args) -> Report:
    try:
        return load_report(args.input)
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        raise UsageError(f"cannot read report {args.input}: {exc}") from exc


# -- argument parsing ---------------------------------------------------------


def build_parser(defaults: dict | None = None) -> argparse.ArgumentParser:
    """``defaults`` (from a config file) replace flag defaults; explicit flags still win."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with 'field' and 'defaults' entries")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--strategy", choices=["auto", "exhaustive", "minor-scan"], default="auto")
    common.add_argument("--timing", action="store_true", help="add timing_ms per result (breaks byte-stability)")

    p = argparse.ArgumentParser(prog="twistcodes", description="Twisted Reed-Solomon code toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("construct", parents=[common], help="build a self-orthogonal twisted code")
    pc.add_argument("which", choices=["tc1", "tc2", "ct4", "ct5"])
    for name in ("q", "p", "r", "m", "l", "n", "cond", "eta"):
        pc.add_argument(f"--{name}", type=int)
    for name in ("k", "t", "h"):
        pc.add_argument(f"--{name}", type=int, required=True)
    pc.add_argument("--eta-seed", type=int, default=0)

    pv = sub.add_parser("verify", parents=[common], help="run a verification suite")
    pv.add_argument("suite", choices=["L31", "L32", "L34", "powersum", "rsdual", "oracle"])
    pv.add_argument("--q", type=int)
    pv.add_argument("--all", action="store_true", help="sweep every admissible (k, t, h)")
    for name in ("k", "t", "h", "eta", "l"):
        pv.add_argument(f"--{name}", type=int)
    pv.add_argument("--etas", type=int, default=3, help="seeded eta values per cell")
    pv.add_argument("--samples", type=int, default=200)
    pv.add_argument("--literal", action="store_true", help="L34: compare against the printed closed forms")

    ps = sub.add_parser("search", parents=[common], help="look for self-orthogonal codes on a grid")
    ps.add_argument("--q", type=int)
    for name in ("k", "t", "h", "n"):
        ps.add_argument(f"--{name}", help="values like 3,4 or 3-6")
    ps.add_argument("--samples", type=int, default=20, help="(points, eta) draws per cell")
    ps.add_argument("--corollary42-only", action="store_true",
                    help="only short-length cells (n < 2k+t) where non-existence is predicted")

    pr = sub.add_parser("report", parents=[common], help="re-emit a saved JSON report")
    pr.add_argument("input")
    if defaults:
        clean = {key.replace("-", "_"): val for key, val in defaults.items()}
        for sp in (pc, pv, ps, pr):
            sp.set_defaults(**clean)
    return p


def _load_config(argv: list[str]) -> dict:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return {}
    try:
        return json.loads(Path(known.config).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {known.config}: {exc}") from exc


def run(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        config = _load_config(argv)
        field_cfg = config.get("field")
        args = build_parser(config.get("defaults")).parse_args(argv)
        if args.command == "construct":
            report = cmd_construct(args, field_cfg)
        elif args.command == "verify":
            report = cmd_verify(args, field_cfg)
        elif args.command == "search":
            report = cmd_search(args, field_cfg)
        else:
            report = cmd_report(args)
        emit(report, args.format, args.output)
    except WindowError as exc:
        sys.stderr.write(json.dumps(exc.to_json(), sort_keys=True) + "\n")
        return EXIT_USAGE
    except (UsageError, ParameterError, FieldError, CodeSizeError) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "detail": str(exc)}, sort_keys=True) + "\n")
        return EXIT_USAGE
    return EXIT_OK if report.passed else EXIT_COUNTEREXAMPLE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
