"""Command-line harness: solve, sweep, gen, and diagnostics.

The sweep command reproduces the reduction/approximation experiments:
one CSV row per (family, n, eta, seed) plus aggregate mean/std rows.
Approximation ratios use the exhaustive oracle up to 30 variables and the
eta = 1 run on the same instance beyond that. Sweep points are independent
and seeded; DC_REDUCE_THREADS > 1 dispatches them to a process pool.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .benchgen import family_by_label, generate, parse_spec_string
from .driver import (
    RunConfig,
    approximation_ratio,
    brute_force_reference,
    run,
    shift_diagnostics,
    write_trace,
)
from .errors import DomainError, FormatError, ParameterError
from .hamiltonian import format_edge_list, load_problem

ORACLE_VARS = 30

_ROW_FIELDS = ("kind", "family", "n", "eta", "seed", "r", "alpha", "n_it", "n_q", "energy", "wall_ms")


@dataclass(frozen=True)
class SweepSpec:
    families: tuple[str, ...]
    sizes: tuple[int, ...]
    etas: tuple[float, ...]
    instances: int = 32
    seed0: int = 0
    optimizer: str = "auto"
    padding: str = "repeat"
    compute_chi: bool = True
    max_iterations: int = 10
    out: str | None = None

    def __post_init__(self):
        if self.instances < 1:
            raise ParameterError("instances_per_point must be at least 1")


def _run_config(eta: float, seed: int, optimizer: str, padding: str, chi: bool, max_iters: int) -> RunConfig:
    return RunConfig(
        eta=eta,
        seed=seed,
        optimizer_o1=optimizer,
        optimizer_o2=optimizer,
        padding_mode=padding,
        compute_chi=chi,
        max_iterations=max_iters,
    )


def _sweep_task(task: tuple) -> list[dict]:
    """All rows for one (family, n, seed) instance across the eta grid."""
    label, n, seed, etas, optimizer, padding, chi, max_iters = task
    config = family_by_label(label)
    h = generate(config.spec_for(n, seed))
    rows: list[dict] = []
    results: dict[float, tuple] = {}
    for eta in etas:
        cfg = _run_config(eta, seed, optimizer, padding, chi, max_iters)
        start = time.perf_counter()
        result = run(h, cfg)
        wall_ms = 1000.0 * (time.perf_counter() - start)
        results[eta] = (result, wall_ms)
    if n <= ORACLE_VARS:
        reference = brute_force_reference(h)
    elif 1.0 in results:
        reference = results[1.0][0].best_energy
    else:
        cfg = _run_config(1.0, seed, optimizer, padding, chi, max_iters)
        reference = run(h, cfg).best_energy
    for eta in etas:
        result, wall_ms = results[eta]
        try:
            alpha = approximation_ratio(result.best_energy, reference)
        except DomainError:
            alpha = None
        rows.append(
            {
                "kind": "row",
                "family": label,
                "n": n,
                "eta": eta,
                "seed": seed,
                "r": result.r,
                "alpha": alpha,
                "n_it": result.iterations_used,
                "n_q": result.n_q,
                "energy": result.best_energy,
                "wall_ms": wall_ms,
            }
        )
    return rows


def run_sweep(spec: SweepSpec, log=None) -> list[dict]:
    """Execute a sweep; returns row dicts (aggregates included at the end)."""
    log = log if log is not None else (lambda msg: print(msg, file=sys.stderr))
    tasks = [
        (label, n, spec.seed0 + i, tuple(spec.etas), spec.optimizer,
         spec.padding, spec.compute_chi, spec.max_iterations)
        for label in spec.families
        for n in spec.sizes
        for i in range(spec.instances)
    ]
    workers = int(os.environ.get("DC_REDUCE_THREADS", "1"))
    rows: list[dict] = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_sweep_task, task) for task in tasks]
            for task, future in zip(tasks, futures):
                try:
                    rows.extend(future.result())
                except Exception as exc:  # a failed point must not kill the sweep
                    log(f"sweep point {task[:3]} failed: {exc}")
    else:
        for task in tasks:
            try:
                rows.extend(_sweep_task(task))
            except Exception as exc:
                log(f"sweep point {task[:3]} failed: {exc}")
    rows.extend(_aggregate(rows))
    if spec.out:
        write_rows(rows, spec.out)
    return rows


def _aggregate(rows: list[dict]) -> list[dict]:
    groups: dict[tuple, list[dict]] = {}
    for row in rows:
        if row["kind"] != "row":
            continue
        groups.setdefault((row["family"], row["n"], row["eta"]), []).append(row)
    out: list[dict] = []
    for (family, n, eta), members in sorted(groups.items()):
        for kind, fn in (("mean", np.mean), ("std", np.std)):
            alphas = [m["alpha"] for m in members if m["alpha"] is not None]
            out.append(
                {
                    "kind": kind,
                    "family": family,
                    "n": n,
                    "eta": eta,
                    "seed": None,
                    "r": float(fn([m["r"] for m in members])),
                    "alpha": float(fn(alphas)) if alphas else None,
                    "n_it": float(fn([m["n_it"] for m in members])),
                    "n_q": float(fn([m["n_q"] for m in members])),
                    "energy": float(fn([m["energy"] for m in members])),
                    "wall_ms": float(fn([m["wall_ms"] for m in members])),
                }
            )
    return out


def write_rows(rows: list[dict], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_ROW_FIELDS)
        for row in rows:
            writer.writerow(["" if row.get(f) is None else repr(row[f]) if isinstance(row[f], float) else row[f] for f in _ROW_FIELDS])


def read_rows(path: str) -> list[dict]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        return [dict(r) for r in reader]


# -- commands -----------------------------------------------------------------


def _cmd_solve(args) -> int:
    try:
        h = load_problem(args.problem)
    except (FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        cfg = _run_config(args.eta, args.seed, args.optimizer, args.padding,
                          args.chi == "full", args.max_iters)
        result = run(h, cfg)
    except (DomainError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"energy {result.best_energy!r}")
    print(f"config {''.join(str(b) for b in result.best_config)}")
    print(f"n_q {result.n_q}")
    print(f"r {result.r:.6f}")
    print(f"n_it {result.iterations_used}")
    print(f"criterion {result.criterion}")
    if args.out:
        write_trace(result, args.out)
        print(f"trace {args.out}")
    return 0


def _cmd_gen(args) -> int:
    try:
        spec = parse_spec_string(args.spec)
        h = generate(spec)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = format_edge_list(h)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _parse_float_list(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(",") if x.strip())


def _parse_int_list(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x.strip())


def _cmd_sweep(args) -> int:
    families = tuple(x.strip() for x in args.family.split(",") if x.strip())
    try:
        spec = SweepSpec(
            families=families,
            sizes=_parse_int_list(args.n),
            etas=_parse_float_list(args.eta),
            instances=args.instances,
            seed0=args.seeds,
            optimizer=args.optimizer,
            padding=args.padding,
            compute_chi=args.chi == "full",
            max_iterations=args.max_iters,
            out=args.out,
        )
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rows = run_sweep(spec)
    if not args.out:
        writer = csv.writer(sys.stdout)
        writer.writerow(_ROW_FIELDS)
        for row in rows:
            writer.writerow([row.get(f) for f in _ROW_FIELDS])
    return 0


def _cmd_diagnostics(args) -> int:
    try:
        config = family_by_label(args.family)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    records = []
    for i in range(args.instances):
        seed = args.seeds + i
        h = generate(config.spec_for(args.n, seed))
        cfg = _run_config(args.eta, seed, args.optimizer, args.padding, True, args.max_iters)
        result = run(h, cfg)
        for diag in shift_diagnostics(h, result):
            records.append((seed, diag))
    rows = diagnostics_rows(records, args.family, args.n, args.eta, args.bins)
    out = args.out
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            _write_diagnostics(rows, fh)
    else:
        _write_diagnostics(rows, sys.stdout)
    return 0


def diagnostics_rows(records, family, n, eta, bins=20) -> list[list]:
    """Community rows, histogram bins, and medians for the shift ratios.

    Sign convention: energies near the optimum are negative, so ratio_a is
    reported signed and the histogram is taken over -ratio_a (larger means
    a stronger favorable shift); ratio_b divides two negative quantities,
    so values above 1 mean the local-plus-interaction energy undercuts the
    retained-window floor.
    """
    rows: list[list] = [
        ["kind", "family", "n", "eta", "seed", "community",
         "delta", "e0", "interaction_energy", "local_energy", "ratio_a", "ratio_b"]
    ]
    neg_a: list[float] = []
    ratio_b: list[float] = []
    for seed, diag in records:
        rows.append([
            "community", family, n, eta, seed, diag.community,
            repr(diag.delta), repr(diag.e0), repr(diag.interaction_energy),
            repr(diag.local_energy), repr(diag.ratio_a),
            "" if diag.ratio_b is None else repr(diag.ratio_b),
        ])
        neg_a.append(-diag.ratio_a)
        if diag.ratio_b is not None:
            ratio_b.append(diag.ratio_b)
    for name, data in (("neg_ratio_a", neg_a), ("ratio_b", ratio_b)):
        if not data:
            continue
        counts, edges = np.histogram(data, bins=bins)
        for b in range(len(counts)):
            rows.append(["hist_" + name, family, n, eta, "", "",
                         repr(float(edges[b])), repr(float(edges[b + 1])),
                         int(counts[b]), "", "", ""])
        rows.append(["median_" + name, family, n, eta, "", "",
                     repr(float(np.median(data))), "", "", "", "", ""])
    return rows


def _write_diagnostics(rows, fh) -> None:
    fh.write("# ratio_a signed; histograms over -ratio_a; ratio_b > 1 means deeper than the window floor\n")
    writer = csv.writer(fh)
    for row in rows:
        writer.writerow(row)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dcreduce",
        description="Divide-and-conquer reduction and solving of QUBO/PUBO problems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common_opt(p):
        p.add_argument("--eta", type=float, default=1.0, help="retained fraction of the certified window")
        p.add_argument("--optimizer", choices=("auto", "exhaustive", "annealing"), default="auto")
        p.add_argument("--padding", choices=("repeat", "penalty"), default="repeat")
        p.add_argument("--chi", choices=("full", "bound"), default="full")
        p.add_argument("--max-iters", type=int, default=10, dest="max_iters")

    p_solve = sub.add_parser("solve", help="solve one problem file (.json or edge list)")
    p_solve.add_argument("problem")
    common_opt(p_solve)
    p_solve.add_argument("--seed", type=int, default=0)
    p_solve.add_argument("--out", default=None, help="write the JSON run trace here")
    p_solve.set_defaults(func=_cmd_solve)

    p_gen = sub.add_parser("gen", help="generate a random instance as an edge list")
    p_gen.add_argument("--spec", required=True, help="e.g. 3reg:n=40:seed=7 or ws:k=4:p=0.3:n=24:seed=1")
    p_gen.add_argument("--out", default=None)
    p_gen.set_defaults(func=_cmd_gen)

    p_sweep = sub.add_parser("sweep", help="R/alpha/N_it sweep over families, sizes, and eta")
    p_sweep.add_argument("--family", required=True, help="comma-separated family labels")
    p_sweep.add_argument("--n", required=True, help="comma-separated sizes")
    p_sweep.add_argument("--eta", default="1.0", help="comma-separated eta values")
    p_sweep.add_argument("--instances", type=int, default=32)
    p_sweep.add_argument("--seeds", type=int, default=0, help="first instance seed")
    p_sweep.add_argument("--optimizer", choices=("auto", "exhaustive", "annealing"), default="auto")
    p_sweep.add_argument("--padding", choices=("repeat", "penalty"), default="repeat")
    p_sweep.add_argument("--chi", choices=("full", "bound"), default="full")
    p_sweep.add_argument("--max-iters", type=int, default=10, dest="max_iters")
    p_sweep.add_argument("--out", default=None)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_diag = sub.add_parser("diagnostics", help="first-iteration interaction-shift histograms")
    p_diag.add_argument("--family", default="3reg")
    p_diag.add_argument("--n", type=int, default=24)
    common_opt(p_diag)
    p_diag.add_argument("--instances", type=int, default=8)
    p_diag.add_argument("--seeds", type=int, default=0)
    p_diag.add_argument("--bins", type=int, default=20)
    p_diag.add_argument("--out", default=None)
    p_diag.set_defaults(func=_cmd_diagnostics)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
