"""Command-line interface: ``hecke-massey <subcommand> ...``.

Exit codes: 0 success, 2 input error, 3 mathematical precondition failure,
4 verification failure, 5 cap exhaustion.  All rational arguments are given
as ``p/q`` strings; JSON output has sorted keys and is byte-deterministic.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import List, Optional

from . import jsonio
from .geometry import (
    DegreeTriple,
    ModuliParams,
    NotIntegralError,
    QuadForm,
    ZERO_PARAMS,
    delta_index_period,
    delta_plane_period,
    gamma_lattice,
    gamma_tilde,
    lambda_lattice,
    lambda_tilde,
    necessary_condition,
    quad_form_of,
    slice_period,
)
from .indeftheta import check_f_condition, theta_indef, theta_indef_shifted, DegenerateShiftError
from .inversion import PreconditionError, ScaleNotFound, antisymmetrize, thm2_pipeline
from .lattice import Lattice
from .massey import (
    PERIOD_INDEX_CAP,
    PeriodCapError,
    universal_massey_kernel_exact,
    universal_massey_kernel_truncated,
    verify_thm1,
)
from .numeric import CycloOrderError

EXIT_OK, EXIT_INPUT, EXIT_PRECONDITION, EXIT_VERIFY, EXIT_CAP = 0, 2, 3, 4, 5


class CliError(Exception):
    def __init__(self, code: int, message: str, payload: Optional[dict] = None):
        super().__init__(message)
        self.code = code
        self.payload = payload


def _rat(s: str) -> Fraction:
    try:
        return jsonio.parse_rat(s)
    except jsonio.InputError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as e:
        raise jsonio.InputError(f"cannot read {path}: {e.strerror}") from None
    return jsonio.loads(text)


def _degrees(vals) -> DegreeTriple:
    try:
        return DegreeTriple.of(*vals)
    except ValueError as e:
        raise jsonio.InputError(f"bad degree triple: {e}") from None


def _params(vals) -> ModuliParams:
    return ZERO_PARAMS if vals is None else ModuliParams.of(*vals)


def _emit(args, obj, text: str) -> None:
    if args.output == "json":
        print(jsonio.dumps(obj))
    else:
        print(text)


def _series_text(s) -> str:
    return "0" if not s.terms else str(s)


# -- subcommands ---------------------------------------------------------------


def cmd_series(args) -> int:
    if args.form:
        q = QuadForm.of(*args.form)
    elif args.degrees:
        q = quad_form_of(_degrees(args.degrees))
    else:
        raise jsonio.InputError("series needs --form or --degrees")
    f = jsonio.cosetfn_from_json(_read_json(args.f))
    if args.check_f_condition and not check_f_condition(q, f):
        raise CliError(EXIT_PRECONDITION, "f violates the f-condition")
    if args.shift:
        s = theta_indef_shifted(q, f, args.shift[0], args.shift[1], args.truncation)
    else:
        s = theta_indef(q, f, args.truncation)
    _emit(args, s, _series_text(s))
    return EXIT_OK


def cmd_solve(args) -> int:
    t = _degrees(args.degrees)
    if args.params is None:
        rep = universal_massey_kernel_exact(t, delta_periodic=args.delta_periodic)
    else:
        s, v = args.orders
        rep = universal_massey_kernel_truncated(t, _params(args.params), s, v)
    lines = [f"degrees {t}  method {rep.to_json()['method']}  dimension {rep.dimension}"]
    lines += [f"note: {n}" for n in rep.notes]
    for i, b in enumerate(rep.basis):
        ent = ", ".join(f"{k}: {v}" for k, v in sorted(b.entries.items()))
        lines.append(f"  [{i}] {{{ent}}}")
    _emit(args, rep, "\n".join(lines))
    return EXIT_OK


def _thm1_table(rep) -> List[str]:
    out = ["   l  series  f-cond  terms"]
    for r in rep.per_l:
        out.append(f"{r['l']:4d}  {'ok' if r['series_equal'] else 'FAIL':>6}  "
                   f"{'ok' if r['f_condition'] else 'FAIL':>6}  {r['terms']:5d}")
    return out


def cmd_verify_thm1(args) -> int:
    if args.tensor:
        c = jsonio.tensor_from_json(_read_json(args.tensor))
        tensors = [c]
        t = c.degrees
    else:
        if not args.degrees:
            raise jsonio.InputError("verify-thm1 needs --tensor or --degrees")
        t = _degrees(args.degrees)
        tensors = universal_massey_kernel_exact(t).basis
        if args.basis is not None:
            if not 0 <= args.basis < len(tensors):
                raise jsonio.InputError(f"basis index {args.basis} out of range (dimension {len(tensors)})")
            tensors = [tensors[args.basis]]
    params = _params(args.params)
    reports = [verify_thm1(t, params, c, args.trunc, cap=args.cap) for c in tensors]
    ok = all(r.passed and all(x["massey_system"] is not False for x in r.per_l) for r in reports)
    lines = []
    for i, r in enumerate(reports):
        massey = r.per_l[0]["massey_system"] if r.per_l else None
        lines.append(f"tensor {i}: {'PASS' if r.passed else 'FAIL'}  massey_system={massey}")
        if not r.passed or args.verbose:
            lines += _thm1_table(r)
        if r.failing_l:
            lines.append(f"failing l: {r.failing_l}")
    _emit(args, {"passed": ok, "reports": reports}, "\n".join(lines))
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_invert(args) -> int:
    q = QuadForm.of(*args.form)
    if args.f:
        f = jsonio.cosetfn_from_json(_read_json(args.f))
    elif args.antisymmetrize:
        n, sx, sy = args.antisymmetrize
        if n.denominator != 1 or n <= 0:
            raise jsonio.InputError("--antisymmetrize period must be a positive integer")
        f = antisymmetrize(q, Lattice.standard(2), Lattice.standard(2, n), (sx, sy))
    else:
        raise jsonio.InputError("invert needs --f or --antisymmetrize")
    rep = thm2_pipeline(q, f, args.trunc, args.cap, workers=args.workers)
    text = "\n".join([
        f"rescaled form {rep.rescaled} (x = {rep.x}, y = {rep.y})",
        f"rational degrees {rep.rational_degrees}",
        f"N = {rep.N}, integral degrees {rep.degrees}",
        f"tensor entries: {len(rep.tensor.entries)}",
        f"massey system: {rep.massey_system}",
        f"Theta_Q,f   = {_series_text(rep.lhs)}",
        f"sum_l MP_l  = {_series_text(rep.rhs)}",
        f"equality: {rep.equality}",
    ])
    _emit(args, rep, text)
    return EXIT_OK if rep.passed else EXIT_VERIFY


def cmd_lattice_info(args) -> int:
    t = _degrees(args.degrees)
    q = quad_form_of(t)
    info = {"degrees": t.to_json(), "quad_form": q.to_json(), "necessary_condition": necessary_condition(t)}
    if t.is_integral:
        gam, lam = gamma_lattice(t), lambda_lattice(t)
        info.update(
            gamma=gam.to_json(),
            lambda_=lam.to_json(),
            gamma_tilde=gamma_tilde(t).to_json(),
            lambda_tilde=lambda_tilde(t).to_json(),
            slice_period=slice_period(t).to_json(),
            index_gamma_lambda=lam.index_in(gam),
        )
        if info["necessary_condition"]:
            info.update(delta_index_period=delta_index_period(t).to_json(),
                        delta_plane_period=delta_plane_period(t).to_json())
    info = {k.rstrip("_"): v for k, v in info.items()}
    text = "\n".join(f"{k}: {jsonio.dumps(v, indent=None)}" for k, v in sorted(info.items()))
    _emit(args, info, text)
    return EXIT_OK


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hecke-massey", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("json", "text"), default="text")

    s = sub.add_parser("series", parents=[common], help="indefinite theta series of (Q, f)")
    s.add_argument("--form", nargs=3, type=_rat, metavar=("A", "B", "C"))
    s.add_argument("--degrees", nargs=3, type=_rat, metavar=("D1", "D2", "D"))
    s.add_argument("--f", required=True, metavar="FILE", help="CosetFunction2 JSON ('-' = stdin)")
    s.add_argument("--truncation", "--trunc", type=_rat, default=Fraction(6))
    s.add_argument("--shift", nargs=2, type=_rat, metavar=("R1", "R2"))
    s.add_argument("--check-f-condition", action="store_true")
    s.set_defaults(func=cmd_series)

    s = sub.add_parser("solve", parents=[common], help="universal Massey kernel")
    s.add_argument("--degrees", nargs=3, type=_rat, required=True, metavar=("D1", "D2", "D"))
    s.add_argument("--params", nargs=4, type=_rat, metavar=("V1", "V2", "W1", "W2"))
    s.add_argument("--orders", nargs=2, type=_rat, default=(Fraction(4), Fraction(8)), metavar=("S", "V"))
    s.add_argument("--delta-periodic", action="store_true")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("verify-thm1", parents=[common], help="MP(c)_l == Theta_{Q, f_{c,l}} for all l")
    s.add_argument("--tensor", metavar="FILE")
    s.add_argument("--degrees", nargs=3, type=_rat, metavar=("D1", "D2", "D"))
    s.add_argument("--basis", type=int, help="kernel basis index (default: all)")
    s.add_argument("--params", nargs=4, type=_rat, metavar=("V1", "V2", "W1", "W2"))
    s.add_argument("--trunc", type=_rat, default=Fraction(6))
    s.add_argument("--cap", type=int, default=PERIOD_INDEX_CAP, help="max classes when tabulating f_{c,l}")
    s.add_argument("--verbose", action="store_true")
    s.set_defaults(func=cmd_verify_thm1)

    s = sub.add_parser("invert", parents=[common], help="Theorem 2: Massey system from (Q, f)")
    s.add_argument("--form", nargs=3, type=_rat, required=True, metavar=("A", "B", "C"))
    s.add_argument("--f", metavar="FILE")
    s.add_argument("--antisymmetrize", nargs=3, type=_rat, metavar=("N", "X", "Y"),
                   help="f = signed orbit of the seed (X, Y) on Z^2 mod N Z^2")
    s.add_argument("--trunc", type=_rat, default=Fraction(6))
    s.add_argument("--cap", type=int, default=1000)
    s.add_argument("--workers", type=int, default=1, help="processes for the per-l sum")
    s.set_defaults(func=cmd_invert)

    s = sub.add_parser("lattice-info", parents=[common], help="lattices attached to a degree triple")
    s.add_argument("--degrees", nargs=3, type=_rat, required=True, metavar=("D1", "D2", "D"))
    s.set_defaults(func=cmd_lattice_info)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except (jsonio.InputError, NotIntegralError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ScaleNotFound as e:
        print(f"NOT-FOUND: {e}", file=sys.stderr)
        print(jsonio.dumps({"not_found": str(e), "diagnostics": e.diagnostics}))
        return EXIT_CAP
    except (CycloOrderError, PeriodCapError) as e:
        print(f"cap exhausted: {e}", file=sys.stderr)
        return EXIT_CAP
    except (PreconditionError, DegenerateShiftError) as e:
        print(f"precondition failed: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ValueError as e:
        # remaining ValueErrors come from validating user-supplied objects
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
