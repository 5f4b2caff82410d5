"""Command-line entry point.

Exit codes: 0 success or pass, 1 falsifier or configuration not found,
2 usage or validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

from . import counting, harness, linalg
from .field import FieldDescriptor, FieldError, construct_field, prime_power
from .harness import DEFAULT_SEED
from .serialize import FormatError, load_pointset, save_report

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


def _field(args) -> FieldDescriptor:
    if args.q is not None:
        if args.p is not None:
            raise UsageError("give either --q or --p/--n, not both")
        p, n = prime_power(args.q)
        return construct_field(p, n)
    if args.p is None:
        raise UsageError("a field is required: --q or --p [--n]")
    return construct_field(args.p, args.n)


def _element(f: FieldDescriptor, text: str) -> int:
    """An int (residue for prime fields, index otherwise) or a JSON coefficient list."""
    text = text.strip()
    if text.startswith("["):
        return f.decode(json.loads(text))
    value = int(text)
    if f.n > 1 and not 0 <= value < f.q:
        raise UsageError(f"element index {value} out of range for q = {f.q}")
    return f(value).value


def _ratios(f: FieldDescriptor, args, default_all: bool = True, nonzero: bool = False) -> list[int]:
    raw = args.r or (["all"] if default_all else [])
    if not raw:
        raise UsageError("--r is required")
    if any(x == "all" for x in raw):
        rs = list(range(1 if nonzero else 0, f.q))
    else:
        rs = [_element(f, x) for x in raw]
    if nonzero and 0 in rs:
        raise UsageError("r must be nonzero")
    return rs


def _pointset(args, f: FieldDescriptor | None = None, d: int | None = None) -> counting.PointSet:
    if args.input:
        return load_pointset(args.input)
    f = f or _field(args)
    d = d or args.d
    if args.size is None:
        raise UsageError("give --in FILE or --size N to draw a random point set")
    return harness.gen_random_pointset(f, d, args.size, args.seed)


def cmd_field_info(args):
    f = _field(args)
    return {
        "field": f.to_json(),
        "q": f.q,
        "q_mod_4": f.q % 4,
        "nonzero_squares": len(f.squares) - 1,
        "minus_one_is_square": f.is_square(f.neg(1)),
        "elements": [f.encode(x) for x in range(f.q)] if f.q <= 64 else None,
    }, True


def cmd_sum2sq(args):
    f = _field(args)
    out = []
    for r in _ratios(f, args, default_all=False):
        a, b = linalg.sum_of_two_squares(f, r)
        out.append({"r": f.encode(r), "a": f.encode(a.value), "b": f.encode(b.value)})
    return {"field": f.to_json(), "results": out}, True


def cmd_o2_enum(args):
    f = _field(args)
    group = linalg.enumerate_O2(f)
    return {
        "field": f.to_json(),
        "order": len(group),
        "rotations": len(group.rotation_subgroup),
        "matrices": [m.to_json()["entries"] for m in group.elements],
    }, True


def cmd_sphere(args):
    f = _field(args)
    t = _element(f, args.t)
    pts = linalg.sphere_points(f, args.d, t)
    return {"field": f.to_json(), "d": args.d, "t": f.encode(t), "size": len(pts),
            "points": [p.to_json() for p in pts]}, True


def cmd_distances(args):
    E = _pointset(args)
    hist = counting.distance_histogram(E)
    return {"field": E.field.to_json(), "size": len(E), "delta_size": len(hist.support()),
            "rows": hist.rows()}, True


def cmd_quotient(args):
    E = _pointset(args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        quot = counting.quotient_set(E)
    enc = E.field.encode
    return {"field": E.field.to_json(), "size": len(E), "quotient_size": len(quot),
            "quotient": [enc(x) for x in sorted(quot)],
            "warning": str(caught[0].message) if caught else None}, True


def cmd_vr(args):
    E = _pointset(args)
    table = counting.vr_table(E, _ratios(E.field, args), method=args.method)
    return {"field": E.field.to_json(), "size": len(E), "method": table.method,
            "rows": table.rows()}, True


def cmd_eta_check(args):
    E = _pointset(args, d=2)
    out, ok = [], True
    for r in _ratios(E.field, args, nonzero=True):
        tally = counting.eta_tally(E, r)
        n, order, q = len(E), len(tally.group), E.field.q
        total_ok = tally.total == n * n * order
        cs_ok = tally.energy * q * q * order >= tally.total**2
        ok = ok and total_ok and cs_ok
        out.append({"r": E.field.encode(r), "total": tally.total, "energy": tally.energy,
                    "support": tally.support_size, "total_ok": total_ok, "cauchy_schwarz": cs_ok})
    return {"field": E.field.to_json(), "size": len(E), "group_order": len(tally.group),
            "results": out, "pass": ok}, ok


def cmd_energy_identity(args):
    E = _pointset(args, d=2)
    reports = [counting.energy_identity_check(E, r) for r in _ratios(E.field, args, nonzero=True)]
    ok = all(rep.passed for rep in reports)
    return {"pass": ok, "reports": [_strip(rep, args) for rep in reports]}, ok


def cmd_verify_main(args):
    if args.q is None:
        raise UsageError("verify-main needs --q")
    rep = harness.verify_main_theorem(args.q, trials=args.trials, seed=args.seed, size=args.size,
                                      workers=args.workers)
    return _strip(rep, args), rep.passed


def cmd_verify_quotient(args):
    rep = harness.verify_quotient_coverage(_pointset(args))
    return _strip(rep, args), rep.passed


def cmd_sharpness(args):
    if args.p is None:
        raise UsageError("sharpness needs --p")
    rep = harness.verify_sharpness(args.p)
    return _strip(rep, args), rep.passed


def cmd_find_config(args):
    E = _pointset(args)
    rs = _ratios(E.field, args, default_all=False, nonzero=True)
    if len(rs) != 1:
        raise UsageError("find-config takes a single --r")
    pairs = harness.parse_pairs(args.pairs) if args.pairs else None
    try:
        config = harness.find_similar_configuration(E, rs[0], args.k, pairs)
    except harness.ConfigurationNotFound as exc:
        return {"found": False, "best_multiplicity": exc.best_multiplicity, "needed": exc.needed}, False
    out = config.to_json()
    out.update(found=True, averaging_ok=config.averaging_ok)
    return out, config.averaging_ok


def cmd_verify_bhowmik(args):
    if args.q is None:
        raise UsageError("verify-bhowmik needs --q")
    f = construct_field(*prime_power(args.q))
    rs = _ratios(f, args, nonzero=True)
    rep = harness.verify_bhowmik(args.q, args.d, args.k, rs, trials=args.trials, seed=args.seed)
    return _strip(rep, args), rep.passed


def _strip(rep, args):
    obj = rep.to_json()
    if args.no_timing:
        obj.pop("elapsed_ms", None)
    return obj


COMMANDS = {
    "field-info": (cmd_field_info, "field parameters and square statistics"),
    "sum2sq": (cmd_sum2sq, "write r as a^2 + b^2"),
    "o2-enum": (cmd_o2_enum, "enumerate O(2, q)"),
    "sphere": (cmd_sphere, "points v with ||v||^2 = t"),
    "distances": (cmd_distances, "distance histogram of a point set"),
    "quotient": (cmd_quotient, "quotient set Delta(E)/Delta(E)"),
    "vr": (cmd_vr, "quadruple counts V(r)"),
    "eta-check": (cmd_eta_check, "eta tally totals and the Cauchy-Schwarz inequality"),
    "energy-identity": (cmd_energy_identity, "exact energy identity check"),
    "verify-main": (cmd_verify_main, "V(r) >= |E|^4/(4q) on random sets with |E| >= sqrt(2) q"),
    "verify-quotient": (cmd_verify_quotient, "quotient-set coverage"),
    "sharpness": (cmd_sharpness, "subfield example with |Delta(E)| = p"),
    "find-config": (cmd_find_config, "find a configuration similar with ratio r"),
    "verify-bhowmik": (cmd_verify_bhowmik, "similar configurations at the hypothesis size"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, help="characteristic")
    common.add_argument("--n", type=int, default=1, help="extension degree (default 1)")
    common.add_argument("--q", type=int, help="field order, shorthand for --p/--n")
    common.add_argument("--d", type=int, default=2, help="dimension (default 2)")
    common.add_argument("--size", type=int, help="random point-set size")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--r", action="append", help='ratio; repeatable, or "all"')
    common.add_argument("--t", default="0", help="sphere radius (squared)")
    common.add_argument("--trials", type=int, default=20)
    common.add_argument("--k", type=int, default=1)
    common.add_argument("--pairs", help='pair set such as "1-2,2-3" (default: all pairs)')
    common.add_argument("--method", choices=["fast", "brute"], default="fast")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--in", dest="input", help="point-set JSON file")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--no-timing", action="store_true", help="omit elapsed_ms from reports")

    parser = argparse.ArgumentParser(prog="ffdist", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = COMMANDS[args.command][0]
    try:
        result, ok = handler(args)
        text = save_report(result, args.out, args.format)
    except (UsageError, FieldError, FormatError, ValueError, OSError) as exc:
        print(f"ffdist {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out is None:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
