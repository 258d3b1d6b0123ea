"""Command-line front end: build, cornacchia, tables, verify, selfcheck.

Exit codes: 0 success, 1 usage error or failed check, 2 no applicable
method, 3 no representation 4p = U^2 + D V^2.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .classdata import ClassPolyTable, builtin_table, load_table_file
from .cmbuild import build_curve_with_cm
from .ecore import order_check
from .errors import CMError, InvalidModulus, NoApplicableMethod, NoRepresentation, TableFormatError
from .modarith import CMInstance, cornacchia, is_probable_prime
from .modcurves import MODULAR_EQUATIONS
from .selfcheck import run_selfcheck

EXIT_OK, EXIT_USAGE, EXIT_NO_METHOD, EXIT_NO_REPRESENTATION = 0, 1, 2, 3

TABLE_ENV = "CM_CARDINAL_TABLE"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="cmtorsion", description="Elliptic curves with prescribed CM and their orders.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, need_dp=True):
        if need_dp:
            sp.add_argument("--d", type=int, required=True, help="D, with -D the CM discriminant")
            sp.add_argument("--p", type=int, required=True, help="an odd prime")
        sp.add_argument("--format", choices=("text", "json"), default="text")

    def tabled(sp):
        sp.add_argument("--table", default=os.environ.get(TABLE_ENV),
                        help=f"class polynomial file merged over the builtins (default ${TABLE_ENV})")
        sp.add_argument("--seed", type=int, default=0)

    b = sub.add_parser("build", help="build E and certify its order")
    common(b)
    tabled(b)
    b.add_argument("--j", type=int, default=None, help="use this root of the class polynomial")
    b.add_argument("--trials", type=int, default=8)

    c = sub.add_parser("cornacchia", help="solve 4p = U^2 + D V^2")
    common(c)

    t = sub.add_parser("tables", help="print the builtin class polynomials and modular equations")
    common(t, need_dp=False)

    v = sub.add_parser("verify", help="check #E = p + 1 - U on the constructed curve")
    common(v)
    tabled(v)
    v.add_argument("--u", type=int, required=True, help="signed trace to test")
    v.add_argument("--j", type=int, default=None)
    v.add_argument("--trials", type=int, default=8)

    s = sub.add_parser("selfcheck", help="rerun the worked instances and property checks")
    common(s, need_dp=False)
    tabled(s)
    return ap


def _load(path) -> ClassPolyTable:
    if not path:
        return builtin_table()
    return load_table_file(path)


def _check_dp(args):
    if args.d <= 0:
        raise _UsageError("--d must be positive")
    if args.p < 5 or not is_probable_prime(args.p):
        raise _UsageError(f"--p must be a prime >= 5, got {args.p}")


def _emit(args, record: dict, text_lines: list[str]):
    if args.format == "json":
        print(json.dumps({k: (None if v is None else str(v)) for k, v in record.items()}))
    else:
        for line in text_lines:
            print(line)


def _cmd_build(args) -> int:
    _check_dp(args)
    if args.trials < 2:
        raise _UsageError("--trials must be at least 2")
    table = _load(args.table)
    cert = build_curve_with_cm(args.d, args.p, table=table, seed=args.seed, j=args.j, trials=args.trials)
    E = cert.curve
    record = {
        "D": args.d, "p": args.p, "U": cert.U_signed, "V": cert.instance.V, "m": cert.m,
        "method": cert.method, "j": cert.j, "a4": E.a4, "a6": E.a6, "invariant_root": cert.invariant_root,
    }
    _emit(args, record, [f"{k} = {'-' if v is None else v}" for k, v in record.items()])
    return EXIT_OK


def _cmd_cornacchia(args) -> int:
    _check_dp(args)
    uv = cornacchia(args.d, args.p)
    if uv is None:
        print(f"no representation 4*{args.p} = U^2 + {args.d} V^2", file=sys.stderr)
        return EXIT_NO_REPRESENTATION
    U, V = uv
    _emit(args, {"D": args.d, "p": args.p, "U": U, "V": V}, [f"U = {U}", f"V = {V}"])
    return EXIT_OK


def _cmd_tables(args) -> int:
    table = builtin_table()
    if args.format == "json":
        for key in table:
            e = table[key]
            print(json.dumps({"D": str(e.D), "inv": e.invariant, "line": e.to_line()}))
        for ell, eq in sorted(MODULAR_EQUATIONS.items()):
            print(json.dumps({"ell": str(ell), "modular_equation": eq.display}))
        return EXIT_OK
    print("# class polynomials (load_table format)")
    print(table.dumps(), end="")
    print("# modular equations Phi_l(X, J) for gamma_{1,l}")
    for ell, eq in sorted(MODULAR_EQUATIONS.items()):
        print(f"# l={ell}: {eq.display}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    _check_dp(args)
    if args.trials < 1:
        raise _UsageError("--trials must be positive")
    table = _load(args.table)
    inst = CMInstance.from_prime(args.d, args.p)
    cert = build_curve_with_cm(args.d, args.p, table=table, seed=args.seed, j=args.j)
    m = args.p + 1 - args.u
    ok = abs(args.u) == inst.U and order_check(cert.curve, m, trials=args.trials, seed=args.seed)
    _emit(args, {"D": args.d, "p": args.p, "U": args.u, "m": m, "ok": ok},
          [f"{'OK' if ok else 'FAIL'}: #E = {m} on {cert.curve}"])
    return EXIT_OK if ok else EXIT_USAGE


def _cmd_selfcheck(args) -> int:
    results = run_selfcheck(seed=args.seed, table=_load(args.table))
    for r in results:
        if args.format == "json":
            print(json.dumps({"check": r.name, "ok": r.ok, "detail": r.detail}))
        else:
            print(r.line())
    return EXIT_OK if all(r.ok for r in results) else EXIT_USAGE


_COMMANDS = {
    "build": _cmd_build,
    "cornacchia": _cmd_cornacchia,
    "tables": _cmd_tables,
    "verify": _cmd_verify,
    "selfcheck": _cmd_selfcheck,
}


def main(argv: list[str] | None = None) -> int:
    try:
        args = _parser().parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TableFormatError as exc:
        print(f"table error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"cannot read table: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NoRepresentation as exc:
        print(f"no representation: {exc}", file=sys.stderr)
        return EXIT_NO_REPRESENTATION
    except NoApplicableMethod as exc:
        print(f"no applicable method: {exc}", file=sys.stderr)
        return EXIT_NO_METHOD
    except (InvalidModulus, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CMError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_METHOD


if __name__ == "__main__":
    sys.exit(main())
