"""Command-line front end: ``qreduce {verify,norms,branching,patterns}``."""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from importlib import resources

import jsonschema

from . import __version__
from .qfield import QFieldError, classical_limit, eval_at

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


# -- argument parsing ---------------------------------------------------------

def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _bounds(text: str) -> tuple[tuple[int, int], ...]:
    out = []
    for part in text.split(","):
        lo, sep, hi = part.partition(":")
        try:
            out.append((int(lo), int(hi)) if sep else (int(lo), int(lo)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected lo:hi[,lo:hi...], got {text!r}")
    return tuple(out)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational like 1/2, got {text!r}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qreduce", description=__doc__)
    p.add_argument("--version", action="version", version=f"qreduce {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--format", choices=("table", "json", "csv"), default="table")
        sp.add_argument("--omit-timing", action="store_true",
                        help="leave the timing field out of JSON output")
        sp.add_argument("--n", type=int, required=True)

    v = sub.add_parser("verify", help="run an oracle suite")
    common(v)
    v.add_argument("--suite", choices=("algebra", "projector", "zalg", "shapovalov"), required=True)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--weights", type=int, default=3, help="number of sampled weights")

    for name, helptext in (("norms", "Shapovalov norm table"),
                           ("branching", "gl(n) content inside a box"),
                           ("patterns", "Gelfand-Graev-Tsetlin patterns")):
        sp = sub.add_parser(name, help=helptext)
        common(sp)
        sp.add_argument("--alpha", type=int, required=True)
        sp.add_argument("--extremal", type=_int_list, required=True)
        if name == "norms":
            sp.add_argument("--rmax", type=int, required=True)
            sp.add_argument("--q-eval", type=_fraction, action="append", default=[])
            sp.add_argument("--classical", action="store_true")
        elif name == "branching":
            sp.add_argument("--bounds", type=_bounds, required=True)
        else:
            sp.add_argument("--depth", type=int, required=True)
    return p


def _params(args) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in ("command", "format", "omit_timing"):
            continue
        if isinstance(v, Fraction):
            v = str(v)
        elif isinstance(v, (list, tuple)):
            v = [[*x] if isinstance(x, tuple) else (str(x) if isinstance(x, Fraction) else x)
                 for x in v]
        out[k] = v
    return out


# -- parallel map ---------------------------------------------------------------

def threads() -> int:
    raw = os.environ.get("QREDUCE_THREADS", "1")
    try:
        val = int(raw)
    except ValueError:
        raise UsageError(f"QREDUCE_THREADS must be a positive integer, got {raw!r}")
    if val < 1:
        raise UsageError(f"QREDUCE_THREADS must be a positive integer, got {raw!r}")
    return val


def pmap(fn, items) -> list:
    """Order-preserving map, fanned out over processes when QREDUCE_THREADS > 1."""
    items = list(items)
    workers = min(threads(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# -- verify suites ----------------------------------------------------------------

def _weights(N: int, seed: int, count: int) -> list[tuple[int, ...]]:
    from .verma import generic_weight
    rng = random.Random(seed)
    return [generic_weight(N, rng) for _ in range(count)]


def _extremal_weights(n: int, seed: int, count: int) -> list[tuple[int, ...]]:
    # spaced components keep every bracket in the norm formulas away from zero
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        gaps = [rng.randint(6, 12) for _ in range(n)]
        top = rng.randint(-5, 5)
        lam = [top]
        for g in gaps:
            lam.append(lam[-1] - g)
        out.append(tuple(lam))
    return out


def _suite_algebra(item):
    from .pbw import verify_algebra
    N, seed = item
    rep = verify_algebra(N, random.Random(seed))
    return [{"check": "algebra", "N": N, "checks": rep.checks, "failures": rep.failures}]


def _suite_projector(item):
    from .pbw import make_algebra
    from .projector import ProjectorSpec, verify_projector_properties
    N, lam = item
    maxdeg = 4 if N == 2 else 3 if N == 3 else 2
    rep = verify_projector_properties(ProjectorSpec(make_algebra(N), N), [lam], maxdeg)
    return [{"check": "projector", "weight": list(lam), "maxdeg": maxdeg, "checks": rep.checks,
             "failures": rep.failures + rep.errors}]


def _suite_zalg(item):
    from .zalg import verify_z_relations
    n, alpha, lam = item
    rep = verify_z_relations(n, alpha, [lam])
    return [{"check": "z-relations", "alpha": alpha, "weight": list(lam), "checks": rep.checks,
             "families": {k: {"checks": v[0], "failures": v[1]} for k, v in sorted(rep.by_family.items())},
             "failures": rep.failures + rep.errors}]


def _suite_inversion(item):
    from .zalg import ZCoefficientTable, inversion_residuals
    n, alpha = item
    res = inversion_residuals(ZCoefficientTable(n, alpha))
    bad = [i for i, x in enumerate(res) if not x.is_zero()]
    return [{"check": "inversion", "alpha": alpha, "checks": len(res),
             "failures": [{"residual": i} for i in bad]}]


def _suite_shapovalov(item):
    from . import repbuilder as rb
    n, alpha, lam, rmax = item
    xw = rb.ExtremalWeight(n, alpha, lam)
    rs = [r for r in itertools.product(range(rmax + 1), repeat=n) if sum(r) <= rmax]
    checks, failures = 0, []

    def rec(ok, what, **ctx):
        nonlocal checks
        checks += 1
        if not ok:
            failures.append({"check": what, **ctx})

    for r in rs:
        rec(rb.shapovalov_norm(xw, r) == rb.shapovalov_norm_recursive(xw, r), "closed-vs-recursive",
            r=list(r))
        row = _row_from_r(xw, r)
        if rb.satisfies_branching(xw, row):
            rec((rb.normalization_factor(xw, row) * rb.shapovalov_norm(xw, r)).is_one(),
                "normalization", r=list(r))
        for r2 in rs:
            if r2 != r and sum(r2) == sum(r):
                rec(rb.shapovalov_cross(xw, r, r2).is_zero(), "orthogonality", r=list(r), r2=list(r2))
    return [{"check": "shapovalov", "alpha": alpha, "extremal": list(lam), "checks": checks,
             "failures": failures}]


def _row_from_r(xw, r) -> tuple[int, ...]:
    a, lam = xw.alpha, xw.lam
    return tuple([lam[i] + r[i] for i in range(a)] + [lam[l] - r[l - 1] for l in range(a + 1, xw.n + 1)])


def run_verify(args) -> tuple[list, dict]:
    n = args.n
    if args.weights < 1:
        raise UsageError("--weights must be >= 1")
    if args.suite == "algebra":
        if not 1 <= n <= 3:
            raise UsageError("algebra suite supports 1 <= n <= 3 (gl(n+1))")
        items, fn = [(n + 1, args.seed)], _suite_algebra
    elif args.suite == "projector":
        if not 1 <= n <= 2:
            raise UsageError("projector suite supports 1 <= n <= 2 (gl(n+1))")
        items, fn = [(n + 1, lam) for lam in _weights(n + 1, args.seed, args.weights)], _suite_projector
    elif args.suite == "zalg":
        if not 1 <= n <= 2:
            raise UsageError("zalg suite supports 1 <= n <= 2")
        lams = _weights(n + 1, args.seed, args.weights)
        items = [(n, a, lam) for a in range(n + 1) for lam in lams]
        fn = _suite_zalg
    else:
        if not 1 <= n <= 2:
            raise UsageError("shapovalov suite supports 1 <= n <= 2")
        lams = _extremal_weights(n, args.seed, args.weights)
        items = [(n, a, lam, 3) for a in range(n + 1) for lam in lams]
        fn = _suite_shapovalov
    results = [x for chunk in pmap(fn, items) for x in chunk]
    if args.suite == "zalg":
        results += [x for chunk in pmap(_suite_inversion, [(n, a) for a in range(n + 1)]) for x in chunk]
    nfail = sum(len(x["failures"]) for x in results)
    summary = {"passed": nfail == 0, "checks": sum(x["checks"] for x in results), "failures": nfail}
    return results, summary


# -- data commands ----------------------------------------------------------------

def _xw(args):
    from .repbuilder import ExtremalWeight
    try:
        return ExtremalWeight(args.n, args.alpha, args.extremal)
    except ValueError as exc:
        raise UsageError(str(exc))


def _qrat_fields(value, args) -> dict:
    out = {"value": value.to_string()}
    for x in args.q_eval:
        try:
            out.setdefault("at", {})[str(x)] = str(eval_at(value, x))
        except (ZeroDivisionError, QFieldError) as exc:
            out.setdefault("at", {})[str(x)] = None
            out.setdefault("errors", []).append(f"q={x}: {exc}")
    if args.classical:
        out["classical"] = str(classical_limit(value))
    return out


def run_norms(args) -> tuple[list, dict]:
    from . import repbuilder as rb
    xw = _xw(args)
    if args.rmax < 0:
        raise UsageError("--rmax must be >= 0")
    for x in args.q_eval:
        if x in (0, 1, -1):
            raise UsageError(f"--q-eval {x} is not allowed")
    rs = sorted((r for r in itertools.product(range(args.rmax + 1), repeat=xw.n) if sum(r) <= args.rmax),
                key=lambda r: (sum(r), tuple(-x for x in r)))
    results = []
    for r in rs:
        entry = {"r": list(r), "weight": list(_row_from_r(xw, r))}
        try:
            entry.update(_qrat_fields(rb.shapovalov_norm(xw, r), args))
        except QFieldError as exc:
            entry.update(value=None, errors=[str(exc)])
        results.append(entry)
    return results, {"count": len(results), "mu": list(xw.mu)}


def _box(args, n):
    if len(args.bounds) != n:
        raise UsageError(f"--bounds needs {n} ranges, got {len(args.bounds)}")
    return args.bounds


def run_branching(args) -> tuple[list, dict]:
    from . import repbuilder as rb
    xw = _xw(args)
    box = _box(args, xw.n)
    try:
        rows = rb.branching(xw, box)
    except rb.EmptyBox as exc:
        raise UsageError(str(exc))
    results = [{"row": list(row.lam), "r": list(rb.exponents(xw, row).r)} for row in rows]
    return results, {"count": len(results), "box": [list(b) for b in box]}


def _pattern_entry(p) -> dict:
    entry = {"rows": [list(r.lam) for r in p.rows], "r": list(p.exponents.r)}
    try:
        entry["normalization2"] = p.normalization().to_string()
    except QFieldError as exc:
        entry["normalization2"] = None
        entry["errors"] = [str(exc)]
    entry["gt_norms2"] = [x.to_string() for x in p.gt_norms()]
    return entry


def run_patterns(args) -> tuple[list, dict]:
    from . import repbuilder as rb
    xw = _xw(args)
    if args.depth < 0:
        raise UsageError("--depth must be >= 0")
    pats = rb.enumerate_patterns(xw, args.depth)
    results = pmap(_pattern_entry, pats)
    return results, {"count": len(results), "box": [[-args.depth, args.depth]] * xw.n}


COMMANDS = {"verify": run_verify, "norms": run_norms, "branching": run_branching, "patterns": run_patterns}


# -- output ---------------------------------------------------------------------

def load_schema() -> dict:
    text = resources.files("qreduce").joinpath(f"schema/result-v{SCHEMA_VERSION}.json").read_text()
    return json.loads(text)


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _flat(entry: dict) -> dict:
    out = {}
    for k, v in entry.items():
        if isinstance(v, dict):
            for k2, v2 in v.items():
                out[f"{k}.{k2}"] = v2 if not isinstance(v2, (list, dict)) else json.dumps(v2)
        elif isinstance(v, list):
            out[k] = json.dumps(v, separators=(",", ":"))
        else:
            out[k] = v
    return out


def to_csv(results: list) -> str:
    rows = [_flat(e) for e in results]
    keys: list[str] = []
    for r in rows:
        keys += [k for k in r if k not in keys]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def to_table(doc: dict) -> str:
    rows = [_flat(e) for e in doc["results"]]
    for r in rows:
        if isinstance(r.get("failures"), str):
            r["failures"] = len(json.loads(r["failures"]))
    keys: list[str] = []
    for r in rows:
        keys += [k for k in r if k not in keys]
    cells = [keys] + [["" if r.get(k) is None else str(r.get(k)) for k in keys] for r in rows]
    widths = [max(len(c[i]) for c in cells) for i in range(len(keys))]
    lines = ["  ".join(c[i].ljust(widths[i]) for i in range(len(keys))).rstrip() for c in cells]
    if keys:
        lines.insert(1, "  ".join("-" * w for w in widths))
    lines.append("")
    lines.append("summary: " + ", ".join(f"{k}={v}" for k, v in sorted(doc["summary"].items())))
    return "\n".join(lines) + "\n"


def run(argv=None):
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    results, summary = COMMANDS[args.command](args)
    doc = {"schema_version": SCHEMA_VERSION, "command": args.command, "params": _params(args),
           "engine_version": __version__, "results": results, "summary": summary}
    if not args.omit_timing:
        doc["timing"] = {"seconds": round(time.perf_counter() - t0, 3)}
    jsonschema.validate(doc, load_schema())
    code = EXIT_FAIL if summary.get("passed") is False else EXIT_OK
    return doc, code, args


def main(argv=None) -> int:
    try:
        doc, code, args = run(argv)
    except UsageError as exc:
        print(f"qreduce: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)
    except QFieldError as exc:
        print(f"qreduce: engine error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.format == "json":
        sys.stdout.write(dumps(doc))
    elif args.format == "csv":
        sys.stdout.write(to_csv(doc["results"]))
    else:
        sys.stdout.write(to_table(doc))
    return code


if __name__ == "__main__":
    sys.exit(main())
