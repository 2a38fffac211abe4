"""kleinian: command-line entry point.

Exit codes: 0 ok, 2 mathematical failure, 3 parse/config error,
4 out-of-family input, 5 window exhaustion.
"""
import argparse
import hashlib
import itertools
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .crossed_algebra import AlgebraContext
from .dgmodel import build_lambda
from .errors import (BoundError, ContextError, GenerationError, KleinianError, NotDimOneFamilyError, NotInFamilyError,
                     ParseError, ShapeError, StabilityError, WindowError)
from .gaction import Automorphism, act_on_point, equivariance_check, validate_automorphism
from .ideals import build_ideal_My, ideal_from_json, ideal_to_json, theta1, transition_lambda
from .ktheory import class_of_ideal
from .quiver import (QuiverPoint, cartan_dimension, check_stability, expected_dimension, gauge_equivalent,
                     random_point, tangent_dimension, validate_point)
from .scalars import scalar_to_json

EXIT_OK, EXIT_MATH, EXIT_PARSE, EXIT_FAMILY, EXIT_WINDOW = 0, 2, 3, 4, 5


class Failure(Exception):
    """A command finished but its mathematical check failed (exit 2)."""

    def __init__(self, result):
        super().__init__("check failed")
        self.result = result


def _read(path):
    """JSON from a file (or stdin for '-'); command envelopes are unwrapped."""
    try:
        if path == "-":
            obj = json.load(sys.stdin)
        else:
            with open(path, encoding="utf-8") as fh:
                obj = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc
    if isinstance(obj, dict) and obj.get("tool") == "kleinian" and "result" in obj:
        obj = obj["result"]
    return obj


def _load_point(path):
    try:
        return QuiverPoint.from_json(_read(path))
    except (ShapeError, ContextError) as exc:
        raise ParseError(f"{path}: {exc}") from exc


def _matrix_json(M):
    return [[scalar_to_json(M[r, c]) for c in range(M.ncols)] for r in range(M.nrows)]


def _config(args):
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "pretty", "output")}


def config_hash(cfg):
    return hashlib.sha256(json.dumps(cfg, sort_keys=True).encode()).hexdigest()[:16]


def _emit(args, result, status):
    cfg = _config(args)
    doc = {"tool": "kleinian", "version": __version__, "config": cfg, "config_hash": config_hash(cfg),
           "status": status, "result": result}
    text = json.dumps(doc, indent=2 if args.pretty else None, sort_keys=True,
                      separators=None if args.pretty else (",", ":"))
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


# ---------------------------------------------------------------------------
# commands

def cmd_validate(args):
    p = _load_point(args.point)
    errors = validate_point(p)
    stable = not errors and check_stability(p)
    if not errors and not stable:
        errors = ["stability: ibar does not generate U under Xbar, Ybar"]
    res = {"valid": not errors, "stable": bool(stable), "errors": errors, "m": p.m, "n": p.n,
           "dims": list(p.dims)}
    if errors:
        raise Failure(res)
    return res


def cmd_point_to_ideal(args):
    p = _load_point(args.point)
    I = build_ideal_My(p)
    bound = args.bound if args.bound is not None else 2 * p.N + 4
    out = ideal_to_json(I)
    out["meta"] = {"lambda": build_lambda(p, bound).to_json(), "N": p.N, "dims": list(p.dims)}
    return out


def cmd_ideal_to_point(args):
    try:
        I = ideal_from_json(_read(args.ideal))
    except (ShapeError, ContextError) as exc:
        raise ParseError(f"{args.ideal}: {exc}") from exc
    q = theta1(I)
    out = q.to_json()
    out["meta"] = {"ladder": [[scalar_to_json(c) for c in poly.c] for poly in I.analysis.ladder.chain],
                   "class": list(class_of_ideal(I).comps)}
    return out


def cmd_roundtrip(args):
    p = _load_point(args.point)
    I = build_ideal_My(p)
    q = theta1(I)
    g = gauge_equivalent(q, p)
    lam = build_lambda(p, args.bound)
    window = lam.bound if args.window is None else args.window
    if window > lam.bound:
        raise WindowError(f"window {window} exceeds the lambda bound {lam.bound}")
    lam_ok = transition_lambda(I, lam.bound).agrees(lam, window)
    res = {"gauge_equivalent": g is not None, "witness": _matrix_json(g) if g is not None else None,
           "lambda_agrees": lam_ok, "bound": lam.bound, "window": window, "point": q.to_json()}
    if g is None or not lam_ok:
        raise Failure(res)
    return res


def _dim_row(m, n, dims, seed, tau):
    row = {"n": n, "dims": list(dims), "formula": expected_dimension(m, n, dims),
           "cartan": cartan_dimension(m, n, dims)}
    row["empty"] = row["formula"] < 0
    try:
        ctx = AlgebraContext(m, tau)
        p = random_point(ctx, n, dims, seed=seed, check_formula=False)
        row["point_found"] = True
        row["tangent"] = tangent_dimension(p)
    except (GenerationError, StabilityError):
        row["point_found"] = False
        row["tangent"] = None
    row["consistent"] = (row["point_found"] != row["empty"]) and (
        row["tangent"] is None or row["tangent"] == row["formula"])
    return row


def cmd_dim_table(args):
    m = args.m
    tau = tuple(args.tau) if args.tau else ("1",) * m
    if len(tau) != m:
        raise ParseError(f"--tau needs {m} entries")
    rows = []
    for total in range(args.max_n + 1):
        for dims in itertools.product(range(total + 1), repeat=m):
            if sum(dims) != total:
                continue
            for n in range(m):
                rows.append(_dim_row(m, n, dims, args.seed, tau))
    res = {"m": m, "max_n": args.max_n, "rows": rows}
    if not all(r["consistent"] for r in rows):
        raise Failure(res)
    return res


def cmd_orbit(args):
    p = _load_point(args.point)
    sigma = Automorphism.from_json(_read(args.automorphism), p.ctx)
    report = validate_automorphism(sigma, p.m)
    if not report["valid"]:
        raise Failure({"automorphism": report})
    q = act_on_point(sigma, p)
    ok = equivariance_check(sigma, p)
    res = {"point": q.to_json(), "automorphism": report, "equivariant": ok}
    if not ok:
        raise Failure(res)
    return res


def _run_criterion(args):
    from . import acceptance
    number, seed = args
    fn = acceptance.CRITERIA[number]
    r = fn() if number == 9 else fn(seed=seed)
    return r


def cmd_selfcheck(args):
    numbers = args.only or list(range(1, 11))
    jobs = max(1, args.jobs)
    if jobs == 1:
        results = [_run_criterion((i, args.seed)) for i in numbers]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_criterion, [(i, args.seed) for i in numbers]))
    for r in results:
        print(r.line(), file=sys.stderr)
    res = {"criteria": [r.to_json() for r in results], "passed": all(r.passed for r in results)}
    if not res["passed"]:
        raise Failure(res)
    return res


# ---------------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(prog="kleinian", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"kleinian {__version__}")
    fmt = ap.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="pretty", action="store_false", help="compact JSON (default)")
    fmt.add_argument("--pretty", dest="pretty", action="store_true", help="indented JSON")
    ap.set_defaults(pretty=False)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--window", type=int, default=None, help="basis window for windowed checks")
    ap.add_argument("--bound", type=int, default=None, help="lambda bound (default 2N + 4)")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("-o", "--output", default=None, help="write the result here instead of stdout")
    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("-o", "--output", default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[out], help="check a point against the variety and stability")
    s.add_argument("point")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("point-to-ideal", parents=[out], help="Omega: point -> ideal")
    s.add_argument("point")
    s.set_defaults(func=cmd_point_to_ideal)

    s = sub.add_parser("ideal-to-point", parents=[out], help="theta_1: ideal -> point")
    s.add_argument("ideal")
    s.set_defaults(func=cmd_ideal_to_point)

    s = sub.add_parser("roundtrip", parents=[out], help="theta_1(Omega(p)) ~ p with a gauge witness")
    s.add_argument("point")
    s.set_defaults(func=cmd_roundtrip)

    s = sub.add_parser("dim-table", parents=[out], help="closed-form and tangent dimensions of strata")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--max-n", type=int, required=True)
    s.add_argument("--tau", nargs="+", default=None)
    s.set_defaults(func=cmd_dim_table)

    s = sub.add_parser("orbit", parents=[out], help="act on a point and check equivariance")
    s.add_argument("point")
    s.add_argument("automorphism")
    s.set_defaults(func=cmd_orbit)

    s = sub.add_parser("selfcheck", parents=[out], help="run the acceptance criteria")
    s.add_argument("--only", type=int, nargs="+", choices=range(1, 11), default=None)
    s.set_defaults(func=cmd_selfcheck)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code not in (0, None) else EXIT_OK
    try:
        result = args.func(args)
    except Failure as f:
        _emit(args, f.result, "failed")
        return EXIT_MATH
    except ParseError as exc:
        return _error(args, "ParseError", exc, EXIT_PARSE)
    except (NotInFamilyError, NotDimOneFamilyError) as exc:
        return _error(args, type(exc).__name__, exc, EXIT_FAMILY)
    except (WindowError, BoundError) as exc:
        return _error(args, type(exc).__name__, exc, EXIT_WINDOW)
    except KleinianError as exc:
        return _error(args, type(exc).__name__, exc, EXIT_MATH)
    _emit(args, result, "ok")
    return EXIT_OK


def _error(args, kind, exc, code):
    _emit(args, {"error": kind, "message": str(exc)}, "error")
    print(f"kleinian: {kind}: {exc}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
