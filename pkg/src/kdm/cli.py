"""Command-line interface: dataset generation, kernel selection, fitting,
evaluation, and whole-table reproduction runs.

All artifacts are CSV (RFC 4180, LF endings, '.' decimal) or UTF-8 JSON,
and every command writes a manifest listing its outputs. Randomness is
routed through per-task stable seed streams, so rerunning a command with
the same master seed reproduces its CSV outputs byte for byte.

Exit codes: 0 success, 1 numerical failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .bench import BenchmarkDataset, gen_circle, gen_doublewell, gen_mdlike, gen_ou, make_benchmark
from .cv import CvConfig, RULES, run_cv
from .kernels import KernelSpec
from .metrics import subspace_r2
from .outer import ABLATIONS, VarRffConfig, VmklConfig
from .pipeline import (
    METHODS,
    default_p_rff,
    evaluate,
    fit_cv_rff,
    fit_rff,
    fit_uniform_nystrom,
    fit_uniform_rff,
    fit_varrff,
    fit_vmkl,
)

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_USAGE = 2

REPRO_SEEDS = (42, 43, 44)
TABLES = ("table1", "table3", "table5", "table7", "scaling")
SCALING_SIZES = (100, 250, 500, 1000, 2000)


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# serialization helpers


def _fmt(value) -> str:
    """Shortest round-trip decimal for floats; str() otherwise."""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(path: Path, header: list[str], rows) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


def append_csv(path: Path, header: list[str], rows) -> Path:
    fresh = not path.exists()
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "a", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        if fresh:
            w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


def write_json(path: Path, payload: dict) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, ensure_ascii=False, indent=2, sort_keys=True)
        f.write("\n")
    return path


def write_manifest(out_dir: Path, command: str, config: dict, seed, outputs: list[Path],
                   started: float, name: str = "manifest.json") -> Path:
    missing = [str(p) for p in outputs if not p.exists()]
    if missing:
        raise RuntimeError(f"manifest lists missing outputs: {missing}")
    return write_json(out_dir / name, {
        "command": command,
        "config": {k: v for k, v in config.items() if k != "fn"},
        "master_seed": seed,
        "version": __version__,
        "wall_clock_s": round(time.monotonic() - started, 3),
        "outputs": sorted(str(p) for p in outputs),
    })


def load_dataset_csv(path: Path) -> tuple[np.ndarray, np.ndarray | None]:
    """Read a generated dataset: x* columns, optional ref* columns."""
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader)
        body = np.array([[float(v) for v in row] for row in reader])
    x_cols = [i for i, h in enumerate(header) if h.startswith("x")]
    ref_cols = [i for i, h in enumerate(header) if h.startswith("ref")]
    if not x_cols:
        raise UsageError(f"{path} has no coordinate columns (x0, x1, ...)")
    refs = body[:, ref_cols] if ref_cols else None
    return body[:, x_cols], refs


def load_matrix_csv(path: Path, prefix: str) -> np.ndarray:
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader)
        body = np.array([[float(v) for v in row] for row in reader])
    cols = [i for i, h in enumerate(header) if h.startswith(prefix)]
    if not cols:
        raise UsageError(f"{path} has no {prefix}* columns")
    return body[:, cols]


# ---------------------------------------------------------------------------
# gen


def build_dataset(args) -> BenchmarkDataset:
    name = args.problem
    if name == "ou2d":
        return gen_ou([1.0, float(args.alpha_y)], args.n, args.seed)
    if name == "circle":
        return gen_circle(args.n, args.seed, noise=args.noise)
    if name == "mdlike":
        return gen_mdlike(args.d_slow, args.d_fast, args.n, args.seed)
    if name == "dw1d":
        return gen_doublewell(args.n, args.seed, asymmetric=False)
    if name == "dwasym":
        return gen_doublewell(args.n, args.seed, asymmetric=True)
    try:
        return make_benchmark(name, args.n, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_gen(args) -> int:
    started = time.monotonic()
    ds = build_dataset(args)
    out_dir = Path(args.out_dir)
    label = f"ou2d_a{args.alpha_y:g}" if args.problem == "ou2d" else args.problem
    stem = f"{label}_n{ds.n}_seed{args.seed}"
    header = [f"x{j}" for j in range(ds.d)] + [f"ref{k}" for k in range(ds.r)]
    rows = np.hstack([ds.X, ds.phistar])
    data_csv = write_csv(out_dir / f"{stem}.csv", header, rows)
    meta = write_json(out_dir / f"{stem}.meta.json", {
        "problem": ds.name,
        "params": ds.params,
        "n": ds.n, "d": ds.d, "r": ds.r,
        "seed": args.seed,
        "ref_eigenvalues": None if ds.ref_eigenvalues is None else ds.ref_eigenvalues.tolist(),
    })
    write_manifest(out_dir, "gen", vars(args), args.seed, [data_csv, meta], started,
                   name=f"{stem}.manifest.json")
    print(f"wrote {data_csv}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# cv


def cmd_cv(args) -> int:
    started = time.monotonic()
    X, _ = load_dataset_csv(Path(args.data))
    config = CvConfig(r=args.r, folds=args.folds, lam=args.lam,
                      p_rff=args.p_rff or default_p_rff(X.shape[1]))
    result = run_cv(X, config, args.seed, rule=args.rule)
    out_dir = Path(args.out_dir)
    stem = f"cv_{args.rule}_seed{args.seed}"
    grid_csv = write_csv(
        out_dir / f"{stem}_grid.csv",
        ["rule", "family", "sigma", "score", "failed"]
        + [f"fold{f}" for f in range(config.folds)],
        [[args.rule, c.spec.family, c.spec.sigma, c.score, int(c.failed), *c.fold_scores]
         for c in result.candidates],
    )
    selected = write_json(out_dir / f"{stem}_selected.json", {
        "rule": args.rule,
        "family": result.selected.family,
        "sigma": result.selected.sigma,
        "median_distance": result.median_distance,
        "r": config.r, "folds": config.folds, "lam": config.lam, "p_rff": config.p_rff,
        "seed": args.seed,
    })
    write_manifest(out_dir, "cv", vars(args), args.seed, [grid_csv, selected], started,
                   name=f"{stem}.manifest.json")
    print(f"selected {result.selected.family} sigma={result.selected.sigma:.6g}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# fit


def run_fit_method(X, refs, args):
    """Dispatch one fitting method; returns (report, extras_for_json)."""
    r = args.r if args.r is not None else (refs.shape[1] if refs is not None else 4)
    config = CvConfig(r=r, folds=args.folds, lam=args.lam,
                      p_rff=args.p_rff or default_p_rff(X.shape[1]))
    if args.method == "cv-rff":
        report, cv = fit_cv_rff(X, config, args.seed, rule=args.rule)
        return report, {"cv_rule": args.rule}
    if args.method == "uniform-nystrom":
        return fit_uniform_nystrom(X, config, args.seed), {}
    if args.method == "uniform-rff":
        return fit_uniform_rff(X, config, args.seed), {}
    if args.method == "vmkl":
        vconf = VmklConfig.for_ablation(args.ablation, r=r, lam=args.lam, iters=args.iters)
        return fit_vmkl(X, vconf, args.seed), {"ablation": args.ablation}
    if args.method == "varrff":
        sigma_cv = args.sigma_cv
        if sigma_cv is None and args.cv_json:
            sigma_cv = json.loads(Path(args.cv_json).read_text(encoding="utf-8"))["sigma"]
        if sigma_cv is None:
            raise UsageError("varrff needs --sigma-cv or --cv-json from a prior cv run")
        vconf = VarRffConfig(sigma_cv=float(sigma_cv), r=r, lam=args.lam,
                             p_rff=args.p_rff or default_p_rff(X.shape[1]),
                             iters=args.iters)
        return fit_varrff(X, float(sigma_cv), config=vconf, seed=args.seed), {}
    raise UsageError(f"unknown method {args.method!r}")


def cmd_fit(args) -> int:
    started = time.monotonic()
    X, refs = load_dataset_csv(Path(args.data))
    report, extras = run_fit_method(X, refs, args)
    sol = report.solution
    out_dir = Path(args.out_dir)
    stem = f"fit_{args.method}_seed{args.seed}"
    modes_csv = write_csv(out_dir / f"{stem}_modes.csv",
                          [f"phi{k}" for k in range(sol.phi.shape[1])], sol.phi)
    mu_csv = write_csv(out_dir / f"{stem}_mu.csv", ["mode", "mu"],
                       [[k, m] for k, m in enumerate(sol.mu)])
    details = write_json(out_dir / f"{stem}_details.json", {
        "method": report.method, "seed": args.seed, "lam": report.lam,
        **report.details, **extras,
    })
    write_manifest(out_dir, "fit", vars(args), args.seed, [modes_csv, mu_csv, details],
                   started, name=f"{stem}.manifest.json")
    print(f"fit {args.method}: wrote {modes_csv}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# eval


def cmd_eval(args) -> int:
    started = time.monotonic()
    phi = load_matrix_csv(Path(args.fit), "phi")
    _, refs = load_dataset_csv(Path(args.data))
    if refs is None:
        raise UsageError(f"{args.data} carries no reference columns")
    if phi.shape[0] != refs.shape[0]:
        raise UsageError(
            f"fit has {phi.shape[0]} rows but dataset has {refs.shape[0]}")
    r2, cosines = subspace_r2(phi, refs)
    out = Path(args.out)
    append_csv(out, ["fit", "data", "subr2"] + [f"cos2_{k}" for k in range(len(cosines))],
               [[args.fit, args.data, r2, *cosines]])
    write_manifest(out.parent if out.parent != Path("") else Path("."),
                   "eval", vars(args), None, [out], started,
                   name=f"{out.stem}.manifest.json")
    print(f"subr2={r2:.6f}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# reproduce


def _agg(values):
    arr = np.array(values, dtype=float)
    return float(arr.mean()), float(arr.std())


def _cell(fn, row, errors):
    """Run one reproduction cell; on failure record and carry on."""
    try:
        return fn()
    except (np.linalg.LinAlgError, ValueError, RuntimeError) as exc:
        errors.append({"row": row, "error": f"{type(exc).__name__}: {exc}"})
        return None


def repro_table1(seeds, out_dir: Path) -> tuple[Path, list]:
    problems = ("ou2d_a4", "ou2d_a16", "ou3d", "dw1d", "dwasym", "circle")
    rows, errors = [], []
    for problem in problems:
        lam = 0.005 if problem == "circle" else 0.01
        per_method = {m: [] for m in ("cv-rff", "uniform-rff", "uniform-nystrom")}
        sel_family, sel_sigma = "", ""
        for seed in seeds:
            ds = make_benchmark(problem, 500, seed)
            config = CvConfig(r=ds.r, lam=lam, p_rff=default_p_rff(ds.d))

            def cv_cell(ds=ds, config=config, seed=seed):
                report, _ = fit_cv_rff(ds.X, config, seed)
                return report

            report = _cell(cv_cell, f"{problem}/cv-rff/{seed}", errors)
            if report is not None:
                per_method["cv-rff"].append(evaluate(report.solution, ds.phistar)["subr2"])
                if seed == seeds[0]:
                    sel_family = report.details["family"]
                    sel_sigma = report.details["sigma"]
            for method, fn in (("uniform-rff", fit_uniform_rff),
                               ("uniform-nystrom", fit_uniform_nystrom)):
                rep = _cell(lambda fn=fn, ds=ds, config=config, seed=seed: fn(ds.X, config, seed),
                            f"{problem}/{method}/{seed}", errors)
                if rep is not None:
                    per_method[method].append(evaluate(rep.solution, ds.phistar)["subr2"])
        for method, vals in per_method.items():
            mean, std = _agg(vals) if vals else (float("nan"), float("nan"))
            rows.append([problem, method,
                         sel_family if method == "cv-rff" else "",
                         sel_sigma if method == "cv-rff" else "",
                         mean, std, *vals])
    path = write_csv(out_dir / "table1.csv",
                     ["problem", "method", "family", "sigma", "subr2_mean", "subr2_std"]
                     + [f"subr2_seed{s}" for s in seeds], rows)
    return path, errors


def repro_table3(seeds, out_dir: Path) -> tuple[Path, list]:
    problems = ("dw1d", "ou2d_a16", "circle")
    rows, errors = [], []
    for problem in problems:
        lam = 0.005 if problem == "circle" else 0.01
        cells = {}
        for seed in seeds:
            ds = make_benchmark(problem, 500, seed)
            config = CvConfig(r=ds.r, lam=lam, p_rff=default_p_rff(ds.d))
            variants = {"uniform": lambda: fit_uniform_nystrom(ds.X, config, seed)}
            for abl in ABLATIONS:
                variants[abl] = (lambda abl=abl: fit_vmkl(
                    ds.X, VmklConfig.for_ablation(abl, r=ds.r, lam=lam), seed))
            variants["cv-rff"] = lambda: fit_cv_rff(ds.X, config, seed)[0]
            for name, fn in variants.items():
                rep = _cell(fn, f"{problem}/{name}/{seed}", errors)
                if rep is not None:
                    cells.setdefault(name, []).append(
                        evaluate(rep.solution, ds.phistar)["subr2"])
        for name in ("uniform", *ABLATIONS, "cv-rff"):
            vals = cells.get(name, [])
            mean, std = _agg(vals) if vals else (float("nan"), float("nan"))
            rows.append([problem, name, mean, std, *vals])
    path = write_csv(out_dir / "table3.csv",
                     ["problem", "variant", "subr2_mean", "subr2_std"]
                     + [f"subr2_seed{s}" for s in seeds], rows)
    return path, errors


def repro_table5(seeds, out_dir: Path) -> tuple[Path, list]:
    problems = ("ou2d_a4", "ou2d_a16", "ou3d")
    rows, errors = [], []
    for problem in problems:
        cv_vals, var_vals, sigma_learned = [], [], ""
        for seed in seeds:
            ds = make_benchmark(problem, 500, seed)
            config = CvConfig(r=ds.r, lam=0.01, p_rff=default_p_rff(ds.d))

            def pair_cell(ds=ds, config=config, seed=seed):
                cv_report, _ = fit_cv_rff(ds.X, config, seed)
                var_report = fit_varrff(ds.X, cv_report.details["sigma"],
                                        seed=seed, r=config.r, lam=config.lam)
                return cv_report, var_report

            out = _cell(pair_cell, f"{problem}/varrff/{seed}", errors)
            if out is None:
                continue
            cv_report, var_report = out
            cv_vals.append(evaluate(cv_report.solution, ds.phistar)["subr2"])
            var_vals.append(evaluate(var_report.solution, ds.phistar)["subr2"])
            if seed == seeds[0]:
                sigma_learned = " ".join(_fmt(s) for s in var_report.details["sigma"])
        cv_mean, cv_std = _agg(cv_vals) if cv_vals else (float("nan"),) * 2
        var_mean, var_std = _agg(var_vals) if var_vals else (float("nan"),) * 2
        rows.append([problem, cv_mean, cv_std, var_mean, var_std, sigma_learned])
    path = write_csv(out_dir / "table5.csv",
                     ["problem", "cv_rff_mean", "cv_rff_std",
                      "varrff_mean", "varrff_std", "sigma_learned_first_seed"], rows)
    return path, errors


def repro_table7(seeds, out_dir: Path) -> tuple[Path, list]:
    configs = (("mdlike6d", 6), ("mdlike10d", 10), ("mdlike20d", 20))
    rows, errors = [], []
    for problem, d in configs:
        cells, sigmas = {}, {}
        for seed in seeds:
            ds = make_benchmark(problem, 500, seed)
            config = CvConfig(r=ds.r, lam=0.01, p_rff=default_p_rff(ds.d))
            for rule in ("eigsum", "gap"):
                def rule_cell(rule=rule, ds=ds, config=config, seed=seed):
                    report, _ = fit_cv_rff(ds.X, config, seed, rule=rule)
                    return report
                rep = _cell(rule_cell, f"{problem}/{rule}/{seed}", errors)
                if rep is not None:
                    cells.setdefault(rule, []).append(
                        evaluate(rep.solution, ds.phistar)["subr2"])
                    if seed == seeds[0]:
                        sigmas[rule] = rep.details["sigma"]
            rep = _cell(lambda ds=ds, config=config, seed=seed:
                        fit_uniform_rff(ds.X, config, seed),
                        f"{problem}/uniform-rff/{seed}", errors)
            if rep is not None:
                cells.setdefault("uniform-rff", []).append(
                    evaluate(rep.solution, ds.phistar)["subr2"])
        row = [problem, d]
        for name in ("eigsum", "gap", "uniform-rff"):
            vals = cells.get(name, [])
            mean, std = _agg(vals) if vals else (float("nan"), float("nan"))
            row += [mean, std]
        row += [sigmas.get("eigsum", ""), sigmas.get("gap", "")]
        rows.append(row)
    path = write_csv(out_dir / "table7.csv",
                     ["problem", "d", "eigsum_mean", "eigsum_std", "gap_mean", "gap_std",
                      "uniform_rff_mean", "uniform_rff_std",
                      "sigma_eigsum_first_seed", "sigma_gap_first_seed"], rows)
    return path, errors


def repro_scaling(seeds, out_dir: Path) -> tuple[Path, list]:
    rows, errors = [], []
    for n in SCALING_SIZES:
        vals = []
        for seed in seeds:
            ds = make_benchmark("ou2d_a4", n, seed)
            config = CvConfig(r=ds.r, lam=0.01, p_rff=default_p_rff(ds.d))
            rep = _cell(lambda ds=ds, config=config, seed=seed:
                        fit_cv_rff(ds.X, config, seed)[0],
                        f"scaling/n{n}/{seed}", errors)
            if rep is not None:
                vals.append(evaluate(rep.solution, ds.phistar)["subr2"])
        mean, std = _agg(vals) if vals else (float("nan"), float("nan"))
        rows.append([n, mean, std, *vals])
    path = write_csv(out_dir / "scaling.csv",
                     ["n", "subr2_mean", "subr2_std"]
                     + [f"subr2_seed{s}" for s in seeds], rows)
    return path, errors


REPRO = {
    "table1": repro_table1,
    "table3": repro_table3,
    "table5": repro_table5,
    "table7": repro_table7,
    "scaling": repro_scaling,
}


def cmd_reproduce(args) -> int:
    started = time.monotonic()
    out_dir = Path(args.out_dir)
    seeds = tuple(int(s) for s in args.seeds.split(","))
    path, errors = REPRO[args.table](seeds, out_dir)
    outputs = [path]
    if errors:
        outputs.append(write_json(out_dir / f"{args.table}_errors.json", {"errors": errors}))
        print(f"{len(errors)} cell(s) failed; recorded alongside the table", file=sys.stderr)
    write_manifest(out_dir, "reproduce", vars(args), list(seeds), outputs, started,
                   name=f"{args.table}.manifest.json")
    print(f"wrote {path}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kdm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a benchmark dataset")
    p.add_argument("--problem", required=True,
                   help="ou2d | ou3d | dw1d | dwasym | circle | mdlike | "
                        "ou2d_a4 | ou2d_a16 | mdlike6d | ouhd10d | ...")
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--alpha-y", type=float, default=4.0, help="ou2d only")
    p.add_argument("--noise", type=float, default=0.05, help="circle only")
    p.add_argument("--d-slow", type=int, default=2, help="mdlike only")
    p.add_argument("--d-fast", type=int, default=4, help="mdlike only")
    p.add_argument("--out-dir", default="out")
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("cv", help="cross-validated kernel selection")
    p.add_argument("--data", required=True)
    p.add_argument("--rule", choices=RULES, default="eigsum")
    p.add_argument("--folds", type=int, default=3)
    p.add_argument("--r", type=int, default=4)
    p.add_argument("--lam", type=float, default=0.01)
    p.add_argument("--p-rff", type=int, default=None)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out-dir", default="out")
    p.set_defaults(fn=cmd_cv)

    p = sub.add_parser("fit", help="fit eigenfunctions with one method")
    p.add_argument("--data", required=True)
    p.add_argument("--method", choices=METHODS, required=True)
    p.add_argument("--rule", choices=RULES, default="eigsum", help="cv-rff only")
    p.add_argument("--ablation", choices=ABLATIONS, default="Combined", help="vmkl only")
    p.add_argument("--sigma-cv", type=float, default=None, help="varrff anchor")
    p.add_argument("--cv-json", default=None, help="varrff: selected.json from a cv run")
    p.add_argument("--iters", type=int, default=None)
    p.add_argument("--folds", type=int, default=3)
    p.add_argument("--r", type=int, default=None,
                   help="default: number of ref columns in the data")
    p.add_argument("--lam", type=float, default=0.01)
    p.add_argument("--p-rff", type=int, default=None)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out-dir", default="out")
    p.set_defaults(fn=cmd_fit)

    p = sub.add_parser("eval", help="score a fit against dataset references")
    p.add_argument("--fit", required=True, help="modes CSV from a fit run")
    p.add_argument("--data", required=True)
    p.add_argument("--out", default="out/metrics.csv")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("reproduce", help="run a whole benchmark table")
    p.add_argument("--table", choices=TABLES, required=True)
    p.add_argument("--seeds", default=",".join(str(s) for s in REPRO_SEEDS))
    p.add_argument("--out-dir", default="out")
    p.set_defaults(fn=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "iters", None) is None and args.command == "fit":
        args.iters = 200 if args.method == "vmkl" else 100
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (np.linalg.LinAlgError, RuntimeError, ValueError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
