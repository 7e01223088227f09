"""Command-line front end: ``entrocount {entropy,bound,family,shearer,verify}``.

Exit codes: 0 success, 1 inequality violation, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from . import bounds, campaign, entropy, families, permanent, shearer

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2
SEED_ENV = "ENTROCOUNT_SEED"
PERMANENT_MAX_N = 26


class InputError(ValueError):
    pass


def _read_input(arg: str) -> str:
    """File path, ``-`` for stdin, or the literal text itself."""
    if arg == "-":
        return sys.stdin.read()
    path = Path(arg)
    if path.is_file():
        return path.read_text()
    stripped = arg.strip()
    if stripped[:1] in "[{" or set(stripped) <= set("01 ;\n\t"):
        return stripped.replace(";", "\n")
    raise InputError(f"{arg}: no such file")


def _load_json(arg: str):
    try:
        return json.loads(_read_input(arg))
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None


def _coords(text: str | None) -> list:
    if text is None:
        return []
    try:
        return [int(c) for c in text.split(",") if c.strip()]
    except ValueError:
        raise InputError(f"coordinates must be comma-separated integers, got {text!r}") from None


def _num(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return x


def _emit(args, obj, rows=None, header=None):
    if args.format == "json":
        print(json.dumps(obj, sort_keys=True, indent=2))
        return
    if rows is None:
        for k, v in obj.items():
            print(f"{k}: {v}")
        return
    table = [header] + [[_fmt(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in table) for i in range(len(header))]
    for r in table:
        print("  ".join(c.rjust(w) for c, w in zip(r, widths)))


def _fmt(v) -> str:
    if isinstance(v, float):
        return "inf" if math.isinf(v) else f"{v:.12g}"
    if v is None:
        return "-"
    return str(v)


# ------------------------------------------------------------------ commands

def cmd_entropy(args) -> int:
    data = entropy.parse_distribution(_load_json(args.input), renormalize=args.renormalize)
    target, given = _coords(args.target), _coords(args.given)
    results = []
    for a in args.alpha or [1.0]:
        if isinstance(data, entropy.DiscreteDistribution):
            row = {"alpha": a, "entropy": entropy.thc_entropy(data, a)}
        else:
            coords = target + given if target else list(range(data.ndim))
            row = {"alpha": a, "entropy": entropy.joint_entropy(data, coords, a)}
            if target:
                row["conditional_daroczy"] = entropy.conditional_entropy_daroczy(data, target, given, a)
                row["conditional_weighted"] = entropy.conditional_entropy_weighted(data, target, given, a)
        results.append(row)
    keys = list(results[0])
    _emit(args, {"results": results}, [[r[k] for k in keys] for r in results], keys)
    return EXIT_OK


def _load_matrix(args) -> permanent.BinaryMatrix:
    if args.edges:
        obj = _load_json(args.input)
        try:
            return permanent.from_bipartite_graph(obj["edges"], int(obj["n"]))
        except (KeyError, TypeError):
            raise InputError('edge list JSON needs "n" and "edges"') from None
    return permanent.parse_matrix(_read_input(args.input))


def cmd_bound(args) -> int:
    m = _load_matrix(args)
    out = {"n": m.n, "row_sums": list(m.row_sums)}
    if m.n <= args.permanent_max_n:
        workers = os.cpu_count() if m.n > 18 else None
        out["permanent"] = permanent.permanent_ryser(m, chunks=(os.cpu_count() or 1) if workers else 1,
                                                     workers=workers)
    else:
        out["permanent"] = None
    out["bregman"] = bounds.bregman_bound(m.row_sums) if 0 not in m.row_sums else 0.0
    if args.optimize:
        res = bounds.optimize_alpha(m, args.grid_lo, args.grid_hi, args.grid_points)
        out["optimization"] = res.to_json_obj()
        if args.format == "json":
            _emit(args, out)
        else:
            print(f"n = {m.n}, permanent = {_fmt(out['permanent'])}, bregman = {_fmt(out['bregman'])}")
            print(f"best alpha = {res.best_alpha.value:.9g}, best ceiling = {_fmt(res.best_ceiling)}"
                  f" ({len(res.trace)} evaluations)")
        return EXIT_OK
    reports = [bounds.alpha_bound(m, a) for a in (args.alpha or [1.0, 2.0])]
    out["reports"] = [r.to_json_obj() for r in reports]
    if args.format == "json":
        _emit(args, out)
    else:
        print(f"n = {m.n}, permanent = {_fmt(out['permanent'])}, bregman = {_fmt(out['bregman'])}")
        _emit(args, out, [[r.alpha.value, r.rhs_entropy_space, r.ceiling, r.integer_ceiling, r.vacuous]
                          for r in reports], ["alpha", "rhs", "ceiling", "integer", "vacuous"])
    return EXIT_OK


def _family_scan(args, f) -> int:
    base = families.check_intersection_family_bound(f, args.k, 1.0)
    k = args.k or f.masks[0].bit_count()
    alphas = args.alpha or campaign.INTERSECTION_ALPHAS
    rows = [{"alpha": a, "max_m": _num(m)} for a, m in families.scan_alpha_family_size(k, base.lam, alphas)]
    out = {"exploratory": True, "k": k, "lambda": base.lam, "m": f.m,
           "precondition_met": base.precondition_met, "scan": rows}
    if args.format == "json":
        _emit(args, out)
    else:
        print(f"exploratory scan: k = {k}, lambda = {base.lam:.9g}, |family| = {f.m}")
        _emit(args, out, [[r["alpha"], r["max_m"]] for r in rows], ["alpha", "max_m"])
    return EXIT_OK


def cmd_family(args) -> int:
    f = families.SetFamily.from_json(_load_json(args.input))
    if args.scan:
        return _family_scan(args, f)
    checks = ["cardinality", "intersection"] if args.check == "both" else [args.check]
    results, ok = [], True
    for a in args.alpha or [1.0]:
        for check in checks:
            if check == "cardinality":
                r = families.check_cardinality_bound(f, a)
                row = {"check": check, "alpha": a, **r.to_json_obj()}
                ok &= r.holds
            else:
                r = families.check_intersection_family_bound(f, args.k, a)
                row = {"check": check, "alpha": a, **r.to_json_obj()}
                ok &= r.holds or not r.precondition_met
            results.append(row)
    keys = ["check", "alpha", "lhs", "rhs", "slack", "holds", "precondition_met"]
    _emit(args, {"results": results}, [[r.get(k) for k in keys] for r in results], keys)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_shearer(args) -> int:
    t = entropy.JointTable.from_json(_load_json(args.input), renormalize=args.renormalize)
    cover = (shearer.CoverFamily.from_json(_load_json(args.cover)) if args.cover
             else shearer.CoverFamily.singletons(t.ndim))
    results, ok = [], True
    for a in args.alpha or [1.0]:
        r = shearer.check_shearer(t, cover, a)
        ok &= r.holds
        results.append({"alpha": a, "k": cover.k, **r.to_json_obj()})
    keys = ["alpha", "k", "lhs", "rhs", "slack", "holds"]
    _emit(args, {"results": results}, [[r[k] for k in keys] for r in results], keys)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_verify(args) -> int:
    if args.replay:
        records = _load_json(args.replay)
        records = records if isinstance(records, list) else [records]
        out = []
        for rec in records:
            r = campaign.replay(rec, args.tolerance)
            out.append({"suite": rec["suite"], "check": rec["check"], "alpha": rec["alpha"], **r.to_json_obj()})
        _emit(args, {"replayed": out}, [[o["suite"], o["check"], o["alpha"], o["lhs"], o["rhs"], o["holds"]]
                                        for o in out], ["suite", "check", "alpha", "lhs", "rhs", "holds"])
        return EXIT_OK if all(o["holds"] for o in out) else EXIT_VIOLATION
    seed = args.seed
    if os.environ.get(SEED_ENV):
        try:
            seed = int(os.environ[SEED_ENV])
        except ValueError:
            raise InputError(f"{SEED_ENV} must be an integer") from None
    if args.instances is not None and args.instances < 1:
        raise InputError("--instances must be >= 1")
    cfg = campaign.RunConfig(seed=seed, tolerance=args.tolerance if args.tolerance is not None else 1e-10,
                             alpha_list=tuple(args.alpha or ()), instances=args.instances,
                             output_format=args.format, max_n=args.max_n, density=args.density)
    suites = campaign.SUITES if args.suite == "all" else (args.suite,)
    reports = [campaign.run_suite(s, cfg) for s in suites]
    violations = [v for r in reports for v in r.violations]
    if args.dump and violations:
        Path(args.dump).write_text(json.dumps(violations, sort_keys=True, indent=2))
    if args.format == "json":
        print(json.dumps({"seed": seed, "suites": [r.to_json_obj() for r in reports],
                          "ok": not violations}, sort_keys=True, indent=2))
    else:
        rows = []
        for r in reports:
            for name, st in sorted(r.stats.items()):
                rows.append([r.suite, name, st.evaluated, st.violations, st.worst_slack,
                             r.excluded.get(name, 0)])
        print(f"seed = {seed}")
        _emit(args, {}, rows, ["suite", "check", "evaluated", "violations", "worst_slack", "excluded"])
        for v in violations:
            print("VIOLATION " + json.dumps(v, sort_keys=True))
        print("PASS" if not violations else f"FAIL ({len(violations)} violations)")
    return EXIT_OK if not violations else EXIT_VIOLATION


# -------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--alpha", type=float, action="append",
                        help="entropic order; repeat for several values")
    common.add_argument("--tolerance", type=float, default=None)

    p = argparse.ArgumentParser(prog="entrocount", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("entropy", parents=[common], help="THC entropies of a distribution or joint table")
    e.add_argument("input", help="file, '-' or inline JSON: array = distribution, object = joint table")
    e.add_argument("--target", help="comma-separated 0-based table coordinates")
    e.add_argument("--given", help="comma-separated 0-based conditioning coordinates")
    e.add_argument("--renormalize", action="store_true")
    e.set_defaults(func=cmd_entropy)

    b = sub.add_parser("bound", parents=[common], help="permanent bounds for a (0,1)-matrix")
    b.add_argument("input", help="matrix text file (or inline rows joined by ';'), or edge list JSON with --edges")
    b.add_argument("--edges", action="store_true", help='input is {"n": N, "edges": [[left, right], ...]}')
    b.add_argument("--optimize", action="store_true")
    b.add_argument("--grid-lo", type=float, default=bounds.DEFAULT_GRID[0])
    b.add_argument("--grid-hi", type=float, default=bounds.DEFAULT_GRID[1])
    b.add_argument("--grid-points", type=int, default=bounds.DEFAULT_GRID[2])
    b.add_argument("--permanent-max-n", type=int, default=PERMANENT_MAX_N)
    b.set_defaults(func=cmd_bound)

    f = sub.add_parser("family", parents=[common], help="cardinality bounds for a set family")
    f.add_argument("input", help='file or inline JSON {"n": N, "sets": [[...], ...]}')
    f.add_argument("--check", choices=("cardinality", "intersection", "both"), default="both")
    f.add_argument("--k", type=int, default=None, help="member size (default: inferred)")
    f.add_argument("--scan", action="store_true",
                   help="exploratory: largest family size the intersection bound allows at each alpha")
    f.set_defaults(func=cmd_family)

    s = sub.add_parser("shearer", parents=[common], help="Shearer inequality for a joint table and cover")
    s.add_argument("input", help="joint table JSON")
    s.add_argument("--cover", help='cover JSON {"n": N, "groups": [[...], ...]} (default: singletons)')
    s.add_argument("--renormalize", action="store_true")
    s.set_defaults(func=cmd_shearer)

    v = sub.add_parser("verify", parents=[common], help="seeded randomized verification campaigns")
    v.add_argument("suite", nargs="?", default="all", choices=campaign.SUITES + ("all",))
    v.add_argument("--seed", type=int, default=0, help=f"overridden by ${SEED_ENV}")
    v.add_argument("--instances", type=int, default=None)
    v.add_argument("--max-n", type=int, default=10)
    v.add_argument("--density", type=float, default=0.5)
    v.add_argument("--dump", help="write violation records here for --replay")
    v.add_argument("--replay", help="re-evaluate violation records from a file")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"entrocount: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
