"""Command line entry point: ``pwcc <subcommand> [flags]``.

Every run writes its result file atomically plus ``<result>.manifest.json``
holding the resolved configuration (including the seed actually used), so
``pwcc --replay <manifest>`` recomputes the same numbers. Exit status is 0 on
success, 1 for domain errors and 2 for configuration or usage errors; errors
are also written to stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from . import __version__
from . import connective as cn
from . import gibbs as gb
from . import recursion as rc
from ._blocks import block_rng
from .config import RunConfig, parse_config
from .errors import ConfigError, NoResults, PWCCError
from .geometry import Norm
from .potentials import HardCube, HardSphere

COMMANDS = ("vk-estimate", "delta-bound", "threshold", "fixed-point", "contraction",
            "sample-gibbs", "verify", "report")
VK_CSV_HEADER = ("k", "mean", "std_error", "n_samples", "seed", "method")


# -- small parsers --------------------------------------------------------------------

def _count(text) -> int:
    """Integer that may be written in scientific notation (``1e6``)."""
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise ConfigError(f"expected a count, got {text!r}") from None
    if value != int(value) or value < 0:
        raise ConfigError(f"expected a non-negative integer count, got {text!r}")
    return int(value)


def _int_list(value) -> list:
    if isinstance(value, (list, tuple)):
        return [_count(v) for v in value]
    return [_count(v) for v in str(value).split(",") if v.strip()]


def _point(value) -> list:
    if isinstance(value, (list, tuple)):
        return [float(x) for x in value]
    return [float(x) for x in str(value).split(",")]


def _points(value) -> list:
    if isinstance(value, (list, tuple)) and value and isinstance(value[0], (list, tuple)):
        return [_point(v) for v in value]
    return [_point(v) for v in str(value).split(";")]


def _box_sides(value) -> tuple:
    if isinstance(value, (list, tuple)):
        return tuple(float(x) for x in value)
    try:
        return tuple(float(x) for x in str(value).lower().split("x"))
    except ValueError:
        raise ConfigError(f"box must look like '5x5', got {value!r}", field="run.box") from None


def _sweep(text):
    try:
        a, b, n = str(text).split(":")
        return np.linspace(float(a), float(b), int(n))
    except ValueError:
        raise ConfigError(f"sweep must be 'start:stop:count', got {text!r}", field="run.sweep") from None


# -- output -------------------------------------------------------------------------

def _atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _git_blob_hash(path: Path) -> str:
    data = path.read_bytes()
    return hashlib.sha1(b"blob %d\0" % len(data) + data).hexdigest()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, Path):
        return str(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return None if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    return obj


def _vk_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(VK_CSV_HEADER)
    for r in rows:
        writer.writerow([repr(r[h]) if isinstance(r[h], float) else r[h] for h in VK_CSV_HEADER])
    return buf.getvalue()


# -- shared pieces ------------------------------------------------------------------

def _need_model(cfg: RunConfig):
    if cfg.potential is None:
        raise ConfigError("a potential is required ([potential] or --potential)", field="potential")
    if cfg.space is None:
        raise ConfigError("a space is required ([space] or --d)", field="space")
    return cfg.potential, cfg.space


def _ball_label(cfg: RunConfig) -> str:
    p, space = cfg.potential, cfg.space
    if isinstance(p, HardCube) and space.norm is Norm.LINF:
        return f"(2r)^{space.dimension}"
    if type(p) is HardSphere and space.norm is Norm.L2:
        return f"v_{{{space.dimension},r}}"
    return "C_phi"


def _collect_estimates(cfg: RunConfig, timings: dict):
    """V_k estimates requested by ``run.method`` (``exact``, ``bound`` or ``mc``)."""
    p, space = _need_model(cfg)
    method = cfg.get("method")
    if method is None:
        if space.dimension == 2 and space.norm is Norm.L2 and p.kind in ("hard_sphere", "strauss"):
            method = "exact"
        elif isinstance(p, HardSphere) and p.natural_norm == space.norm and space.dimension >= 2:
            method = "bound"
        else:
            method = "mc"
    if method not in ("exact", "bound", "mc"):
        raise ConfigError(f"method must be exact, bound or mc, got {method!r}", field="run.method")
    t0 = time.perf_counter()
    if method == "exact":
        try:
            est = [cn.exact_v2(p, space)]
        except NotImplementedError as exc:
            raise ConfigError(str(exc), field="run.method") from None
    elif method == "bound":
        est = [cn.v2_bound_estimate(p, space)]
    else:
        ks = _int_list(cfg.get("k", "1,2"))
        samples = _count(cfg.get("samples", 10 ** 6))
        est = [cn.estimate_vk(p, space, k, samples, cfg.seed, cfg.workers) for k in ks]
    timings["estimates"] = time.perf_counter() - t0
    return est


# -- subcommands ----------------------------------------------------------------------

def cmd_vk_estimate(cfg: RunConfig, timings: dict):
    p, space = _need_model(cfg)
    ks = _int_list(cfg.get("k", 2))
    method = cfg.get("method", "mc")
    rows = []
    for k in ks:
        t0 = time.perf_counter()
        if method == "mc":
            est = cn.estimate_vk(p, space, k, _count(cfg.get("samples", 10 ** 6)), cfg.seed, cfg.workers)
        elif method == "exact":
            if k != 2:
                raise ConfigError("exact V_k is only available for k = 2", field="run.k")
            try:
                est = cn.exact_v2(p, space)
            except NotImplementedError as exc:
                raise ConfigError(str(exc), field="run.method") from None
        elif method == "bound":
            est = cn.v2_bound_estimate(p, space)
        else:
            raise ConfigError(f"method must be exact, bound or mc, got {method!r}", field="run.method")
        timings[f"k={k}"] = time.perf_counter() - t0
        rows.append(est.to_dict())
    lines = [f"V_{r['k']} = {r['mean']:.8g} +/- {r['std_error']:.3g}   "
             f"V_k^(1/k)/C_phi = {r['delta_root'] / r['c_phi']:.6f}   [{r['method']}]" for r in rows]
    return (rows[0] if len(rows) == 1 else rows), lines


def cmd_delta_bound(cfg: RunConfig, timings: dict):
    est = _collect_estimates(cfg, timings)
    db = cn.delta_bound(est, cfg.confidence)
    out = {"value": db.value, "ratio": db.ratio, "k_used": db.k_used, "confidence": db.confidence,
           "rigorous": db.rigorous, "c_phi": db.c_phi, "estimates": [e.to_dict() for e in est]}
    tag = "rigorous" if db.rigorous else "non-rigorous"
    return out, [f"Delta_phi <= {db.value:.8g} = {db.ratio:.6f} * C_phi  (k = {db.k_used}, {tag})"]


def cmd_threshold(cfg: RunConfig, timings: dict):
    est = _collect_estimates(cfg, timings)
    db = cn.delta_bound(est, cfg.confidence)
    th = cn.uniqueness_threshold(db)
    label = _ball_label(cfg)
    out = {"threshold": th.value, "threshold_times_c_phi": th.times_c_phi, "c_phi": th.c_phi,
           "unit": label, "rigorous": th.rigorous, "delta_bound": db.value, "k_used": db.k_used,
           "confidence": db.confidence, "exact": all(e.exact for e in est),
           "estimates": [e.to_dict() for e in est]}
    tag = "rigorous" if th.rigorous else "non-rigorous"
    return out, [f"threshold = {th.times_c_phi:.6f} / {label}",
                 f"lambda_c >= {th.value:.8g}  ({tag})"]


def _c_phi(cfg: RunConfig) -> float:
    c = cfg.get("c_phi")
    if c is not None:
        return float(c)
    if cfg.potential is not None and cfg.space is not None:
        return cfg.potential.temperedness_constant(cfg.space)
    raise ConfigError("need --c-phi or a potential and space", field="run.c_phi")


def cmd_fixed_point(cfg: RunConfig, timings: dict):
    c = _c_phi(cfg)
    if cfg.get("sweep") is not None:
        lams = _sweep(cfg.get("sweep"))
    elif cfg.get("lambda") is not None:
        lams = [float(cfg.get("lambda"))]
    else:
        raise ConfigError("need --lambda or --sweep", field="run.lambda")
    t0 = time.perf_counter()
    reports = [rc.classify(rc.ScalarRecursion(float(lam), c)).to_dict() for lam in lams]
    timings["classify"] = time.perf_counter() - t0
    lines = []
    for r in reports:
        cyc = "none" if r["cycle"] is None else f"({r['cycle'][0]:.10g}, {r['cycle'][1]:.10g})"
        lines.append(f"alpha = {r['alpha']:.6g}  z* = {r['z_star']:.12g}  cycle = {cyc}  "
                     f"{r['classification']}")
    return (reports[0] if len(reports) == 1 else reports), lines


def cmd_contraction(cfg: RunConfig, timings: dict):
    c = _c_phi(cfg)
    if cfg.get("lambda") is None:
        raise ConfigError("need --lambda", field="run.lambda")
    rec = rc.ScalarRecursion(float(cfg.get("lambda")), c)
    tau1 = float(cfg.get("tau1", 0.0))
    tau2 = float(cfg.get("tau2", rec.lam))
    rows = []
    for k in range(1, _count(cfg.get("kmax", 12)) + 1):
        lhs, rhs, ok = rc.contraction_check(rec, tau1, tau2, k)
        rows.append({"k": k, "lhs": lhs, "rhs": rhs, "ratio": lhs / rhs if rhs > 0 else 0.0, "ok": ok})
    out = {"lambda": rec.lam, "c_phi": c, "alpha": rec.alpha, "tau1": tau1, "tau2": tau2,
           "all_ok": all(r["ok"] for r in rows), "rows": rows, "exact": True}
    lines = [f"k = {r['k']:2d}  lhs = {r['lhs']:.6e}  rhs = {r['rhs']:.6e}  ok = {r['ok']}" for r in rows]
    return out, lines


def _box_from(cfg: RunConfig) -> gb.BoxRegion:
    if cfg.get("box") is None:
        raise ConfigError("need --box", field="run.box")
    sides = _box_sides(cfg.get("box"))
    if cfg.space is not None and cfg.space.dimension != len(sides):
        raise ConfigError(f"box has {len(sides)} sides but space has d = {cfg.space.dimension}",
                          field="run.box")
    norm = cfg.space.norm if cfg.space is not None else Norm.L2
    try:
        return gb.BoxRegion(sides, gb.Boundary(cfg.get("boundary", "free")), norm)
    except ValueError as exc:
        raise ConfigError(str(exc), field="run.boundary") from None


def _sample(cfg: RunConfig, timings: dict, seed=None):
    if cfg.potential is None:
        raise ConfigError("a potential is required", field="potential")
    if cfg.get("lambda") is None:
        raise ConfigError("need --lambda", field="run.lambda")
    box = _box_from(cfg)
    t0 = time.perf_counter()
    batch = gb.sample_gibbs(cfg.potential, box, float(cfg.get("lambda")),
                            _count(cfg.get("n", 10 ** 4)), cfg.seed if seed is None else seed,
                            cfg.workers)
    timings["sample"] = timings.get("sample", 0.0) + time.perf_counter() - t0
    return batch


def cmd_sample_gibbs(cfg: RunConfig, timings: dict):
    batch = _sample(cfg, timings)
    part = gb.estimate_partition(batch)
    mean_n = float(batch.counts.mean())
    se_n = float(batch.counts.std(ddof=1)) / math.sqrt(batch.n_accepted) if batch.n_accepted > 1 else math.inf
    summary = {"lambda": batch.lam, "box": list(batch.box.sides), "boundary": batch.box.boundary.value,
               "n_accepted": batch.n_accepted, "n_proposals": batch.n_proposals,
               "acceptance_rate": batch.acceptance_rate, "mean_count": mean_n, "mean_count_se": se_n,
               "log_z": part.log_z, "log_z_se": part.log_z_se, "log_pressure": part.log_pressure,
               "log_pressure_se": part.log_pressure_se, "seed": batch.seed}
    lines = [f"accepted {batch.n_accepted} of {batch.n_proposals} proposals",
             f"log Z = {part.log_z:.6g} +/- {part.log_z_se:.2g}"]
    return (batch, summary), lines


def _rep_seeds(seed: int, reps: int):
    if reps == 1:
        return [seed]
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(reps, dtype=np.uint64)]


def cmd_verify(cfg: RunConfig, timings: dict):
    identity = cfg.get("identity")
    if identity not in ("recursion", "kpoint", "domination", "ruelle"):
        raise ConfigError(f"identity must be recursion, kpoint, domination or ruelle, got {identity!r}",
                          field="run.identity")
    reps = _count(cfg.get("reps", 1))
    reports = []
    for seed in _rep_seeds(cfg.seed, max(reps, 1)):
        batch = _sample(cfg, timings, seed)
        box = batch.box
        t0 = time.perf_counter()
        if identity == "recursion":
            v = _point(cfg.get("v", [s / 2 for s in box.sides]))
            rep = gb.verify_recursion_identity(batch, v, n=_count(cfg.get("quad_nodes", 16)))
            reports.append({**rep.to_dict(), "seed": seed, "ok": rep.z <= 3})
        elif identity == "kpoint":
            rep = gb.verify_kpoint_product(batch, _points(cfg.get("points")))
            reports.append({**rep.to_dict(), "seed": seed, "ok": rep.z <= 3})
        elif identity == "domination":
            rep = gb.domination_check(batch)
            reports.append({**rep.to_dict(), "seed": seed})
        else:
            if cfg.get("v") is not None:
                vs = [_point(cfg.get("v"))]
            else:
                vs = block_rng(seed, 0, stream=3).random((20, box.dimension)) * np.asarray(box.sides)
            for v in vs:
                rep = gb.ruelle_check(batch, v)
                reports.append({**rep.to_dict(), "v": list(map(float, v)), "seed": seed})
        timings[identity] = timings.get(identity, 0.0) + time.perf_counter() - t0
    frac = sum(bool(r["ok"]) for r in reports) / len(reports)
    out = {"identity": identity, "reports": reports, "fraction_ok": frac, "n_reports": len(reports)}
    return out, [f"{identity}: {frac:.1%} of {len(reports)} checks within 3 SE"]


def _flatten(obj, prefix=""):
    out = {}
    for key, value in obj.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            out.update(_flatten(value, name + "."))
        elif isinstance(value, list):
            if all(not isinstance(v, (dict, list)) for v in value):
                out[name] = json.dumps(value)
        else:
            out[name] = value
    return out


def report(results_dir, out_dir=None) -> dict:
    """Aggregate prior JSON results into summary, ``V_k^{1/k}/C_phi`` and bifurcation CSVs."""
    results_dir = Path(results_dir)
    files = sorted(f for f in results_dir.glob("*.json") if not f.name.endswith(".manifest.json"))
    records = []
    for f in files:
        try:
            data = json.loads(f.read_text())
        except (OSError, json.JSONDecodeError):
            continue
        for item in (data if isinstance(data, list) else [data]):
            if isinstance(item, dict):
                records.append((f.name, item))
    if not records:
        raise NoResults(f"no JSON results in {results_dir}")
    out_dir = Path(out_dir) if out_dir is not None else results_dir
    rows = [{"file": name, **_flatten(rec)} for name, rec in records]
    fields = list(dict.fromkeys(k for r in rows for k in r))
    vk = sorted(((rec["k"], rec["delta_root"] / rec["c_phi"],
                  rec.get("delta_root_std_error", 0.0) / rec["c_phi"], rec["method"], name)
                 for name, rec in records if {"k", "mean", "c_phi", "delta_root"} <= rec.keys()),
                key=lambda r: (r[0], r[4]))
    bif = sorted(((rec["alpha"], rec["z_star"], *(rec["cycle"] or [math.nan, math.nan]),
                   rec["classification"]) for _, rec in records if "z_star" in rec),
                 key=lambda r: r[0])

    def table(header, body):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in body:
            w.writerow([repr(x) if isinstance(x, float) else x for x in r])
        return buf.getvalue()

    paths = {"summary": out_dir / "summary.csv", "vk_roots": out_dir / "vk_roots.csv",
             "bifurcation": out_dir / "bifurcation.csv"}
    _atomic_write(paths["summary"], table(fields, [[r.get(k, "") for k in fields] for r in rows]))
    _atomic_write(paths["vk_roots"], table(("k", "root_over_c_phi", "root_se_over_c_phi", "method", "file"), vk))
    _atomic_write(paths["bifurcation"], table(("alpha", "z_star", "z1", "z2", "classification"), bif))
    return {"n_results": len(rows), "files": {k: str(v) for k, v in paths.items()},
            "vk_roots": [list(r) for r in vk], "n_bifurcation_rows": len(bif)}


def cmd_report(cfg: RunConfig, timings: dict):
    results_dir = cfg.get("results_dir")
    out = report(results_dir, cfg.get("report_out"))
    return out, [f"aggregated {out['n_results']} results -> {out['files']['summary']}"]


HANDLERS = {
    "vk-estimate": cmd_vk_estimate,
    "delta-bound": cmd_delta_bound,
    "threshold": cmd_threshold,
    "fixed-point": cmd_fixed_point,
    "contraction": cmd_contraction,
    "sample-gibbs": cmd_sample_gibbs,
    "verify": cmd_verify,
    "report": cmd_report,
}


# -- argument parsing -----------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        _emit_error("UsageError", message, 2)
        self.print_usage(sys.stderr)
        raise SystemExit(2)


def _common(sp):
    sp.add_argument("--config", help="TOML config with [potential], [space], [run]")
    sp.add_argument("--potential", dest="kind", help="potential kind (hard_sphere, hard_cube, strauss)")
    sp.add_argument("--r", type=float, help="potential range")
    sp.add_argument("--a", type=float, help="Strauss strength")
    sp.add_argument("--d", type=int, help="space dimension")
    sp.add_argument("--norm", help="l2 or linf")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--workers", type=int)
    sp.add_argument("--confidence", type=float)
    sp.add_argument("--out", help="result path (.json, .csv or .jsonl)")
    sp.add_argument("--format", help="json, csv or jsonl (default: from --out suffix)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pwcc", description="Connective constants, uniqueness thresholds, "
                     "tree-recursion fixed points and exact Gibbs sampling.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--replay", metavar="MANIFEST", help="re-run the command recorded in a manifest")
    parser.add_argument("--replay-out", metavar="PATH", help="result path for --replay")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    sp = sub.add_parser("vk-estimate", help="estimate V_k")
    _common(sp)
    sp.add_argument("--k", help="k or comma list of k")
    sp.add_argument("--samples", help="number of chains (1e6 style allowed)")
    sp.add_argument("--method", help="mc (default), exact or bound")

    for name, text in (("delta-bound", "upper bound on the connective constant"),
                       ("threshold", "uniqueness threshold e / Delta")):
        sp = sub.add_parser(name, help=text)
        _common(sp)
        sp.add_argument("--k", help="comma list of k for Monte Carlo estimates")
        sp.add_argument("--samples")
        sp.add_argument("--method", help="exact, bound or mc (default: best available)")

    sp = sub.add_parser("fixed-point", help="fixed point and two-cycle of the scalar recursion")
    _common(sp)
    sp.add_argument("--lambda", dest="lam", type=float)
    sp.add_argument("--c-phi", dest="c_phi", type=float)
    sp.add_argument("--potential-config", dest="potential_config",
                    help="config whose potential and space determine C_phi")
    sp.add_argument("--sweep", help="lambda sweep start:stop:count")

    sp = sub.add_parser("contraction", help="contraction of the depth-k recursion")
    _common(sp)
    sp.add_argument("--lambda", dest="lam", type=float)
    sp.add_argument("--c-phi", dest="c_phi", type=float)
    sp.add_argument("--potential-config", dest="potential_config")
    sp.add_argument("--tau1", type=float)
    sp.add_argument("--tau2", type=float)
    sp.add_argument("--kmax", type=int)

    sp = sub.add_parser("sample-gibbs", help="exact finite-volume Gibbs samples")
    _common(sp)
    sp.add_argument("--lambda", dest="lam", type=float)
    sp.add_argument("--box", help="side lengths, e.g. 5x5")
    sp.add_argument("--boundary", help="free or periodic")
    sp.add_argument("--n", help="number of configurations")

    sp = sub.add_parser("verify", help="empirical checks of density identities")
    _common(sp)
    sp.add_argument("--identity", help="recursion, kpoint, domination or ruelle")
    sp.add_argument("--scenario", help="scenario config (same format as --config)")
    sp.add_argument("--lambda", dest="lam", type=float)
    sp.add_argument("--box")
    sp.add_argument("--boundary")
    sp.add_argument("--n")
    sp.add_argument("--reps")

    sp = sub.add_parser("report", help="aggregate prior JSON results")
    sp.add_argument("results_dir", nargs="?")
    sp.add_argument("--results", dest="results_opt")
    sp.add_argument("--out", help="directory for the CSV files (default: results dir)")
    return parser


def _overrides(command: str, ns: argparse.Namespace) -> dict:
    g = lambda name: getattr(ns, name, None)
    pot = {"kind": g("kind"), "r": g("r"), "a": g("a")}
    space = {"d": g("d"), "norm": g("norm")}
    run = {"seed": g("seed"), "workers": g("workers"), "confidence": g("confidence"),
           "out": g("out"), "format": g("format"), "k": g("k"), "samples": g("samples"),
           "method": g("method"), "lambda": g("lam"), "c_phi": g("c_phi"), "sweep": g("sweep"),
           "tau1": g("tau1"), "tau2": g("tau2"), "kmax": g("kmax"), "box": g("box"),
           "boundary": g("boundary"), "n": g("n"), "identity": g("identity"), "reps": g("reps")}
    if run["samples"] is not None:
        run["samples"] = _count(run["samples"])
    if run["k"] is not None:
        ks = _int_list(run["k"])
        run["k"] = ks[0] if len(ks) == 1 else ks
    if run["n"] is not None:
        run["n"] = _count(run["n"])
    if run["reps"] is not None:
        run["reps"] = _count(run["reps"])
    return {"potential": {k: v for k, v in pot.items() if v is not None},
            "space": {k: v for k, v in space.items() if v is not None},
            "run": {k: v for k, v in run.items() if v is not None}}


def _config_for(command: str, ns: argparse.Namespace) -> tuple[RunConfig, list]:
    path = getattr(ns, "config", None) or getattr(ns, "scenario", None) \
        or getattr(ns, "potential_config", None)
    cfg = parse_config(path, _overrides(command, ns))
    inputs = [Path(path).resolve()] if path else []
    csv_path = (cfg.raw.get("potential") or {}).get("csv")
    if csv_path:
        inputs.append((cfg.base_dir / csv_path).resolve())
    return cfg, inputs


# -- execution ----------------------------------------------------------------------

def _emit_error(kind: str, message: str, code: int, **extra):
    payload = {"error": kind, "message": message, "exit_code": code}
    payload.update({k: v for k, v in extra.items() if v is not None})
    sys.stderr.write(json.dumps(payload) + "\n")


def _default_out(command: str, cfg: RunConfig) -> Path:
    if cfg.out is not None:
        return cfg.out
    suffix = "jsonl" if command == "sample-gibbs" else cfg.format
    return Path.cwd() / f"{command}.{suffix}"


def execute(command: str, cfg: RunConfig, inputs=(), argv=None, out: Path | None = None) -> dict:
    """Run one subcommand, write result and manifest, return the manifest."""
    t0 = time.perf_counter()
    timings: dict = {}
    result, lines = HANDLERS[command](cfg, timings)
    out = Path(out) if out is not None else _default_out(command, cfg)
    if command == "sample-gibbs":
        batch, result = result
        gb.write_configs(batch, out)
        summary_path = out.with_name(out.name + ".summary.json")
        _atomic_write(summary_path, json.dumps(_jsonable(result), indent=2) + "\n")
    elif command == "report":
        out = Path(result["files"]["summary"])
    else:
        fmt = out.suffix.lstrip(".").lower() if out.suffix else cfg.format
        if fmt == "csv":
            if command != "vk-estimate":
                raise ConfigError("csv output is only available for vk-estimate", field="run.format")
            _atomic_write(out, _vk_csv(result if isinstance(result, list) else [result]))
        else:
            _atomic_write(out, json.dumps(_jsonable(result), indent=2) + "\n")
    for line in lines:
        print(line)
    manifest = {
        "tool": "pwcc", "version": __version__, "command": command,
        "argv": list(argv) if argv is not None else None,
        "config": cfg.echo(), "result_file": str(out),
        "result_sha256": hashlib.sha256(out.read_bytes()).hexdigest() if out.exists() else None,
        "inputs": {str(p): _git_blob_hash(p) for p in inputs if Path(p).exists()},
        "timings": timings, "wall_seconds": time.perf_counter() - t0,
    }
    _atomic_write(out.with_name(out.name + ".manifest.json"),
                  json.dumps(_jsonable(manifest), indent=2) + "\n")
    return manifest


def replay(manifest_path, out=None) -> dict:
    """Re-run a recorded command with its resolved configuration (seed included)."""
    manifest = json.loads(Path(manifest_path).read_text())
    echo = manifest["config"]
    run = dict(echo["run"])
    run.pop("out", None)
    overrides = {"potential": echo.get("potential") or {}, "space": echo.get("space") or {}, "run": run}
    cfg = parse_config(None, overrides, env={})
    cfg.seed_source = echo.get("seed_source", cfg.seed_source)
    target = Path(out) if out is not None else Path(manifest["result_file"])
    return execute(manifest["command"], cfg, argv=manifest.get("argv"), out=target)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        ns = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if ns.replay:
            replay(ns.replay, ns.replay_out)
            return 0
        if ns.command is None:
            _emit_error("UsageError", f"a subcommand is required: {', '.join(COMMANDS)}", 2)
            return 2
        if ns.command == "report":
            results = ns.results_dir or ns.results_opt
            if results is None:
                raise ConfigError("report needs a results directory", field="results_dir")
            cfg = parse_config(None, {"run": {}}, env={})
            cfg.params.update({"results_dir": results, "report_out": ns.out})
            execute("report", cfg, argv=argv)
            return 0
        cfg, inputs = _config_for(ns.command, ns)
        execute(ns.command, cfg, inputs, argv)
        return 0
    except ConfigError as exc:
        _emit_error("ConfigError", str(exc), 2, field=exc.field, line=exc.line)
        return 2
    except PWCCError as exc:
        _emit_error(type(exc).__name__, str(exc), 1)
        return 1
    except (ValueError, OSError) as exc:
        # validation failures inside the library (negative activity, bad radius, missing file)
        _emit_error(type(exc).__name__, str(exc), 2)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
