"""Command-line front end: ``ttpk <command> ...``.

JSON reports go to stdout and logs to stderr. Exit status is 0 on success,
1 on a domain error or failed check, 2 on a usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Optional

from . import kernels
from .bounds import bounds, certify
from .construction import cons, flawed_cons, solve
from .errors import TTPError
from .instance import FORMATS, KINDS, DistanceMatrix, generate, load, save
from .labeling import candidate_ls, enumerate_labelings, select_hub, shortcut
from .oracle import exact_ttp
from .schedule import from_json, itinerary_csv, to_json, validate
from .tsp_tour import christofides, exact_tour

log = logging.getLogger("ttpk")

KIND_ALIASES = {"euclidean": "euclidean-random"}
BENCH_FIELDS = ["n", "k", "kind", "cost", "lb", "ub", "ratio", "feasible",
                "flaw_predicate", "flaw_observed"]


def _num(x):
    if x is None or isinstance(x, int):
        return x
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else str(x)


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _kind(name: str) -> str:
    kind = KIND_ALIASES.get(name, name)
    if kind not in KINDS:
        raise argparse.ArgumentTypeError(f"unknown kind {name!r}")
    return kind


def _read_instance(args) -> DistanceMatrix:
    with open(args.inp, encoding="utf-8") as fh:
        return load(fh, format=args.format)


def _clamp_k(k: int, n: int) -> int:
    if k >= n:
        log.warning("k=%d >= n=%d; clamping to k=%d", k, n, n - 1)
        return n - 1
    return k


def flaw_predicate(n: int, k: int) -> bool:
    """Whether the construction without the day-1 hub reversal breaks the streak cap."""
    return (n - 1) % (2 * k) <= k < n - 1


# ---------------------------------------------------------------- commands

def cmd_gen(args) -> int:
    m = generate(args.kind, args.n, args.seed)
    text = save(m)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        log.info("wrote %s (n=%d, kind=%s, seed=%d)", args.out, args.n, args.kind, args.seed)
    else:
        sys.stdout.write(text)
    return 0


def cmd_tour(args) -> int:
    m = _read_instance(args)
    t = exact_tour(m) if args.exact else christofides(m)
    out = t.to_json()
    out["method"] = "held-karp" if args.exact else "christofides"
    _emit(out)
    return 0


def cmd_solve(args) -> int:
    m = _read_instance(args)
    k = _clamp_k(args.k, m.n)
    res = solve(m, k)
    out = to_json(res.schedule, k)
    out["cost"] = _num(res.cost)
    out["provenance"] = res.provenance()
    if args.emit_candidates:
        out["candidates"] = [{"start": c.start, "l": c.l, "cost": _num(c.cost)}
                             for c in res.candidates]
    if args.itinerary:
        Path(args.itinerary).write_text(itinerary_csv(res.schedule, m), encoding="utf-8")
    _emit(out)
    return 0


def cmd_validate(args) -> int:
    with open(args.schedule, encoding="utf-8") as fh:
        s = from_json(json.load(fh))
    report = validate(s, args.k)
    _emit(report.to_json())
    if not report.ok:
        log.error("schedule violates TTP-%d constraints", args.k)
        return 1
    return 0


def cmd_bounds(args) -> int:
    m = _read_instance(args)
    k = _clamp_k(args.k, m.n)
    _emit(bounds(m, k).to_json())
    return 0


def cmd_certify(args) -> int:
    m = _read_instance(args)
    k = _clamp_k(args.k, m.n)
    report = certify(m, k, solve(m, k))
    _emit(report.to_json())
    if not report.ok:
        log.error("certificate failed")
        return 1
    return 0


def flaw_report(m: DistanceMatrix, k: int) -> dict:
    n = m.n
    t = christofides(m)
    hub = select_hub(m, t)
    labeling = enumerate_labelings(shortcut(t, hub), hub)[0]
    rows = []
    for l in candidate_ls(n, k):
        good = validate(cons(m, labeling, k, l), k)
        bad = validate(flawed_cons(m, labeling, k, l), k)
        rows.append({
            "l": l,
            "cons_feasible": good.ok,
            "flawed_feasible": bad.ok,
            "flawed_violating_teams": sorted(x + 1 for x in bad.streak_teams()),
            "flawed_violations": bad.to_json()["bounded_by_k"]["violations"],
        })
    observed = any(not r["flawed_feasible"] for r in rows)
    predicate = flaw_predicate(n, k)
    return {
        "n": n, "k": k, "r": (n - 1) % (2 * k), "hub": hub + 1,
        "predicate": predicate, "observed": observed,
        "matches": predicate == observed,
        "cons_feasible": all(r["cons_feasible"] for r in rows),
        "per_l": rows,
    }


def cmd_flaw(args) -> int:
    m = _read_instance(args) if args.inp else generate("unit", args.n)
    if m.n != args.n:
        raise TTPError(f"--n {args.n} does not match the instance (n={m.n})")
    report = flaw_report(m, _clamp_k(args.k, m.n))
    _emit(report)
    return 0 if report["matches"] and report["cons_feasible"] else 1


def cmd_oracle(args) -> int:
    m = _read_instance(args)
    res = exact_ttp(m, args.k, budget=args.budget)
    out = to_json(res.schedule, args.k) if res.schedule is not None else {"n": m.n, "k": args.k}
    out.update(status=res.status, cost=_num(res.cost), lower_bound=_num(res.lower_bound),
               nodes=res.nodes, elapsed=round(res.elapsed, 3), kernel_backend=kernels.BACKEND)
    _emit(out)
    return 0


# ------------------------------------------------------------------ bench

def _range_end(token: str, n: Optional[int]) -> int:
    token = token.strip()
    mt = re.fullmatch(r"n\s*([-+])\s*(\d+)", token)
    if mt and n is not None:
        return n + int(mt.group(2)) * (1 if mt.group(1) == "+" else -1)
    if token == "n" and n is not None:
        return n
    if token == "n/2" and n is not None:
        return n // 2
    return int(token)


def parse_grid(text: str) -> list[tuple[int, int]]:
    """``"n=4..30,k=2..n-1"`` to sorted (n, k) cells; odd n are skipped."""
    parts = dict(p.split("=", 1) for p in re.split(r",\s*(?=[nk]\s*=)", text.strip()))
    parts = {key.strip(): val for key, val in parts.items()}
    if set(parts) != {"n", "k"}:
        raise ValueError(f"grid needs n= and k= ranges, got {text!r}")

    def span(rng, n=None):
        lo, _, hi = rng.partition("..")
        return _range_end(lo, n), _range_end(hi or lo, n)

    n_lo, n_hi = span(parts["n"])
    cells = []
    for n in range(n_lo, n_hi + 1):
        if n < 4 or n % 2:
            continue
        k_lo, k_hi = span(parts["k"], n)
        cells.extend((n, k) for k in range(max(k_lo, 2), min(k_hi, n - 1) + 1))
    return cells


@lru_cache(maxsize=None)
def _bench_instance(kind: str, n: int, seed: int):
    m = generate(kind, n, seed)
    return m, christofides(m)


def bench_row(n: int, k: int, kind: str, seed: int = 0) -> dict:
    m, t = _bench_instance(kind, n, seed)
    res = solve(m, k, tour=t)
    report = certify(m, k, res)
    feasible = validate(res.schedule, k).ok
    observed = not validate(flawed_cons(m, res.labeling, k, res.l), k).ok
    return {
        "n": n, "k": k, "kind": kind,
        "cost": _num(report.realized_cost), "lb": _num(report.lb), "ub": _num(report.ub_analyzed),
        "ratio": f"{float(report.certified_ratio):.6f}",
        "feasible": int(feasible and report.ok),
        "flaw_predicate": int(flaw_predicate(n, k)), "flaw_observed": int(observed),
    }


def _bench_chunk(job):
    kind, n, ks, seed = job
    return [bench_row(n, k, kind, seed) for k in ks]


def cmd_bench(args) -> int:
    cells = parse_grid(args.grid)
    kinds = [_kind(x.strip()) for x in args.kinds.split(",") if x.strip()]
    by_n: dict[int, list[int]] = {}
    for n, k in cells:
        by_n.setdefault(n, []).append(k)
    jobs = [(kind, n, ks, args.seed) for kind in kinds for n, ks in by_n.items()]
    log.info("bench: %d cells x %d kinds, %d jobs", len(cells), len(kinds), args.jobs)
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            chunks = list(pool.map(_bench_chunk, jobs))
    else:
        chunks = [_bench_chunk(j) for j in jobs]
    order = {kind: i for i, kind in enumerate(kinds)}
    rows = sorted((r for c in chunks for r in c), key=lambda r: (order[r["kind"]], r["n"], r["k"]))
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=BENCH_FIELDS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    if args.out:
        Path(args.out).write_text(buf.getvalue(), encoding="utf-8")
    else:
        sys.stdout.write(buf.getvalue())
    bad = [r for r in rows if not r["feasible"] or r["flaw_predicate"] != r["flaw_observed"]]
    for r in bad:
        log.error("check failed: n=%d k=%d kind=%s", r["n"], r["k"], r["kind"])
    return 1 if bad else 0


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ttpk", description="TTP-k schedule construction and certification")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def instance_args(sp, required=True):
        sp.add_argument("--in", dest="inp", required=required, help="instance file")
        sp.add_argument("--format", choices=FORMATS, default="plain")

    sp = sub.add_parser("gen", help="write a generated instance")
    sp.add_argument("--kind", type=_kind, required=True, help="unit, circle or euclidean-random")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", help="output path (default: stdout)")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("tour", help="Christofides tour, or Held-Karp with --exact")
    instance_args(sp)
    sp.add_argument("--exact", action="store_true")
    sp.set_defaults(func=cmd_tour)

    sp = sub.add_parser("solve", help="construct the best rotation schedule")
    instance_args(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--emit-candidates", action="store_true",
                    help="include the cost of every (labeling, l) candidate")
    sp.add_argument("--itinerary", help="also write a per-team itinerary CSV here")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("validate", help="check a schedule JSON against TTP-k")
    sp.add_argument("--schedule", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.set_defaults(func=cmd_validate)

    for name, func, text in (("bounds", cmd_bounds, "lower bounds and analyzed upper bound"),
                             ("certify", cmd_certify, "solve and certify cost and ratio")):
        sp = sub.add_parser(name, help=text)
        instance_args(sp)
        sp.add_argument("--k", type=int, required=True)
        sp.set_defaults(func=func)

    sp = sub.add_parser("flaw", help="compare the construction with its flawed predecessor")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    instance_args(sp, required=False)
    sp.set_defaults(func=cmd_flaw)

    sp = sub.add_parser("oracle", help="exact optimum for n = 4 or 6")
    instance_args(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--budget", type=float, default=60.0, help="seconds")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("bench", help="run the grid and emit a CSV")
    sp.add_argument("--grid", default="n=4..30,k=2..n-1")
    sp.add_argument("--kinds", default="unit,circle,euclidean")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--out", help="CSV path (default: stdout)")
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    if args.command == "bench":
        try:
            parse_grid(args.grid)
        except ValueError as exc:
            parser.error(f"bad --grid: {exc}")
    try:
        return args.func(args)
    except (TTPError, ValueError, OSError) as exc:
        log.error("%s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
