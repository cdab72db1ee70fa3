"""``kappa`` command line.

Exit codes: 0 all checks pass (or the command succeeded), 1 some check failed,
2 usage/parse/type error or an exceeded resource bound.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional

from . import __version__
from .cyclic import (CECochain, ce_b_wedge, ce_coinvariance_check, ce_partial_wedge,
                     certify_cyclic_cocycle)
from .exact import InsufficientOrderError, KappaError
from .fdb import FdB
from .interp import as_cochain, evaluate, format_value
from .jets import CrossedElement
from .jettext import parse_jet, parse_series
from .kn_algebra import Kn, apply_element
from .kn_hopf import KnTensor, antipode, coproduct
from .parser import Apply, ParseError, kind_of, parse, to_text
from .suites import DEFAULT_SEED, SUITE_NAMES, SUITES, Check, Config, report, run_suite

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class UsageError(KappaError):
    pass


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("-n", type=int, default=1, metavar="DIM", help="dimension n of K_n (default 1)")
    p.add_argument("--order", type=int, default=5, metavar="N", help="jet order (default 5)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"RNG seed (default {DEFAULT_SEED})")
    p.add_argument("--json", action="store_true", help="machine-readable output")


def _expr_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("expr", nargs="?", help="expression (read from stdin when omitted or '-')")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kappa", description="Exact computations in the Hopf algebra K_n.")
    ap.add_argument("--version", action="version", version=f"kappa {__version__}")
    sub = ap.add_subparsers(dest="cmd", required=True)

    for name, hlp in [("normalize", "PBW normal form of an expression"),
                      ("cop", "coproduct"),
                      ("antipode", "antipode"),
                      ("parse", "parse and print the canonical form and kind"),
                      ("certify", "certify a Hopf cyclic or CE cochain as a cocycle")]:
        p = sub.add_parser(name, help=hlp)
        _expr_arg(p)
        _common(p)

    p = sub.add_parser("act", help="act with k on f U*_psi")
    _expr_arg(p)
    p.add_argument("--jet", help="jet text, e.g. 'phi := x + (1/2)x^2 + O(6)'")
    p.add_argument("--coeff", default="1", help="coefficient series f (default 1)")
    _common(p)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", help="one of: " + ", ".join(SUITE_NAMES))
    p.add_argument("-j", "--jobs", type=int, default=1, help="worker processes for 'all' (default 1)")
    _common(p)
    return ap


def _read_expr(args) -> str:
    text = args.expr
    if text is None or text == "-":
        text = sys.stdin.read()
    if not text.strip():
        raise UsageError("empty expression")
    return text


def _emit(args, payload: dict, text: str) -> None:
    print(json.dumps(payload, sort_keys=False) if args.json else text)


def _value(args):
    node = parse(_read_expr(args))
    return node, evaluate(node, args.n, args.order)


def cmd_normalize(args) -> int:
    node, v = _value(args)
    out = format_value(v)
    _emit(args, {"input": to_text(node), "kind": kind_of(node), "result": out}, out)
    return EXIT_OK


def cmd_parse(args) -> int:
    node = parse(_read_expr(args))
    k = kind_of(node)
    _emit(args, {"canonical": to_text(node), "kind": k}, f"{to_text(node)}\t: {k}")
    return EXIT_OK


def _hopf_map(args, kn_map, fdb_map, what: str) -> int:
    node, v = _value(args)
    if isinstance(v, Kn):
        r = kn_map(v)
    elif isinstance(v, FdB):
        r = fdb_map(v)
    else:
        raise UsageError(f"{what} needs an element of K_n or of a function algebra, got {kind_of(node)}")
    out = format_value(r)
    _emit(args, {"input": to_text(node), "result": out}, out)
    return EXIT_OK


def cmd_cop(args) -> int:
    from .fdb import fdb_coproduct
    return _hopf_map(args, coproduct, fdb_coproduct, "cop")


def cmd_antipode(args) -> int:
    from .fdb import fdb_antipode
    return _hopf_map(args, antipode, fdb_antipode, "antipode")


def _act_once(args, order: int):
    node = parse(_read_expr(args)) if not hasattr(args, "_node") else args._node
    args._node = node
    if isinstance(node, Apply):
        if args.jet:
            raise UsageError("give the jet either with '|>' or with --jet, not both")
        return node, evaluate(node, args.n, order)
    k = evaluate(node, args.n, order)
    if isinstance(k, type(None)) or not isinstance(k, (Kn,)) and not _is_scalar(k):
        raise UsageError(f"act needs an element of K_n, got {kind_of(node)}")
    if not args.jet:
        raise UsageError("act needs a jet: use 'k |> jet(c1, ..)' or --jet")
    psi = parse_jet(args.jet, order)
    if psi.n != args.n:
        raise UsageError(f"jet has {psi.n} components but -n is {args.n}")
    f = parse_series(args.coeff, args.n, psi.order)
    if not isinstance(k, Kn):
        k = Kn.scalar(args.n, k)
    return node, apply_element(k, CrossedElement.single(f, psi))


def _is_scalar(v) -> bool:
    from fractions import Fraction
    return isinstance(v, Fraction)


def cmd_act(args) -> int:
    try:
        node, r = _act_once(args, args.order)
    except InsufficientOrderError as exc:
        need = None
        for extra in range(1, 11):
            try:
                _act_once(args, args.order + extra)
                need = args.order + extra
                break
            except InsufficientOrderError:
                continue
        hint = f"; requires --order {need}" if need is not None else ""
        raise InsufficientOrderError(f"{exc}{hint}") from None
    out = format_value(r)
    _emit(args, {"input": to_text(node), "result": out}, out)
    return EXIT_OK


def _ce_certificate(c: CECochain) -> List[Check]:
    checks = [Check("coinvariant", ce_coinvariance_check(c), "")]
    for name, op in (("b_wedge", ce_b_wedge), ("partial_wedge", ce_partial_wedge)):
        r = op(c)
        ok = r.is_zero()
        checks.append(Check(f"{name}=0", ok, "" if ok else format_value(r)))
    return checks


def cmd_certify(args) -> int:
    node, v = _value(args)
    if isinstance(v, CECochain):
        checks = _ce_certificate(v)
    else:
        phi = as_cochain(v)
        checks = [Check(nm, ok, det) for nm, ok, det in certify_cyclic_cocycle(phi)]
    rep = report("certify", checks)
    rep["input"] = to_text(node)
    _emit(args, rep, _text_report(checks))
    return EXIT_OK if rep["pass"] else EXIT_FAIL


def _text_report(checks) -> str:
    lines = []
    for c in sorted(checks, key=lambda c: c.name):
        extra = f" [{c.cases} cases]" if c.cases > 1 else ""
        tail = f": {c.detail}" if c.detail and not c.passed else ""
        lines.append(f"{'PASS' if c.passed else 'FAIL'} {c.name}{extra}{tail}")
    ok = sum(c.passed for c in checks)
    lines.append(f"{ok}/{len(checks)} checks passed")
    return "\n".join(lines)


def _run_one(payload):
    name, n, order, seed = payload
    return run_suite(name, Config(n=n, order=order, seed=seed))


def cmd_verify(args) -> int:
    if args.suite not in SUITE_NAMES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITE_NAMES)}")
    cfg = Config(n=args.n, order=args.order, seed=args.seed)
    if args.suite == "all" and args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            parts = ex.map(_run_one, [(nm, cfg.n, cfg.order, cfg.seed) for nm in SUITES])
            checks = sorted((c for part in parts for c in part), key=lambda c: c.name)
    else:
        checks = run_suite(args.suite, cfg)
    rep = report(args.suite, checks)
    _emit(args, rep, _text_report(checks))
    return EXIT_OK if rep["pass"] else EXIT_FAIL


COMMANDS = {"normalize": cmd_normalize, "cop": cmd_cop, "antipode": cmd_antipode, "act": cmd_act,
            "verify": cmd_verify, "parse": cmd_parse, "certify": cmd_certify}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.n < 1:
        print("kappa: error: -n must be at least 1", file=sys.stderr)
        return EXIT_ERROR
    if args.order < 1:
        print("kappa: error: --order must be at least 1", file=sys.stderr)
        return EXIT_ERROR
    try:
        return COMMANDS[args.cmd](args)
    except ParseError as exc:
        print(f"kappa: {exc}", file=sys.stderr)
    except InsufficientOrderError as exc:
        print(f"kappa: insufficient jet order: {exc}", file=sys.stderr)
    except KappaError as exc:
        print(f"kappa: {exc}", file=sys.stderr)
    except (ValueError, ZeroDivisionError) as exc:
        print(f"kappa: error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
