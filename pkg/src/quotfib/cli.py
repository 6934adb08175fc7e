"""Command-line front door. Every subcommand writes one JSON report.

Exit codes: 0 when every entry passes, 1 when any entry fails or errors,
2 when the input cannot be parsed (no report is written).
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .acceptance import AcceptanceConfig, run_all
from .canon import (
    canonical_commuting_pair,
    canonical_cyclic_pgl2,
    canonical_involutions_pgl3,
    canonical_klein_pgl2,
    reversal,
)
from .classify import DeltaSubgroup, FibrationClass, PairSpec, classify, verify_class
from .errors import ParseError, QuotfibError
from .fiberprod import build_model, check_universal_property, combined_classes, model_spec_from_json
from .projlin import Mat, ProjMap, proj_eq
from .schemas import FORMAT_VERSION, load_json, validate
from .torsion import TorsionPoint, fix_divisors, is_single_cycle, translation_permutation

COMMANDS = ("canonicalize", "classify", "verify-case", "fix-divisors", "fiber-product-check", "suite")

_INTERNAL = (QuotfibError, ArithmeticError, ValueError)


def entry(check_id: str, ok: bool, detail: str = "") -> dict:
    return {"check_id": check_id, "status": "pass" if ok else "fail", "detail": detail}


def error_entry(check_id: str, exc: Exception) -> dict:
    return {"check_id": check_id, "status": "error", "detail": f"{type(exc).__name__}: {exc}"}


def build_report(args, entries: list[dict], result) -> dict:
    entries = sorted(entries, key=lambda e: e["check_id"])
    summary = {k: sum(e["status"] == k for e in entries) for k in ("pass", "fail", "error")}
    summary["total"] = len(entries)
    return {
        "format_version": FORMAT_VERSION,
        "tool_version": __version__,
        "config": {"command": args.command, "seed": args.seed, "samples": args.samples,
                   "input": args.input, "level": args.level},
        "entries": entries,
        "summary": summary,
        "result": result,
    }


def _need_input(args, name: str):
    if args.input is None:
        raise ParseError(f"{args.command} needs --in")
    return load_json(args.input, name)


def _maps(obj) -> list[ProjMap]:
    try:
        return [ProjMap(Mat.from_json(m)) for m in obj["maps"]]
    except QuotfibError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"bad map: {exc}") from None


# subcommands: each returns (entries, result)

def cmd_canonicalize(args):
    obj = _need_input(args, "canonicalize_input")
    kind, maps = obj["kind"], _maps(obj)
    arity = {"commuting_pair": 2, "cyclic_pgl2": 1, "klein_pgl2": 2}.get(kind)
    if arity is not None and len(maps) != arity:
        raise ParseError(f"{kind} takes {arity} map(s), got {len(maps)}")
    if kind == "commuting_pair":
        res = canonical_commuting_pair(*maps)
        ok = proj_eq(res.xi @ maps[0] @ res.xi.inverse(), res.phi_canon) and \
            proj_eq(res.xi @ maps[1] @ res.xi.inverse(), res.psi_canon)
        out = res.to_json()
        return [entry("canonicalize.conjugation", ok, "xi conjugates the pair to its normal form")], out
    if kind == "cyclic_pgl2":
        xi = canonical_cyclic_pgl2(maps[0])
        forms = [xi @ maps[0].embed(xi.conductor) @ xi.inverse()]
    elif kind == "klein_pgl2":
        xi = canonical_klein_pgl2(*maps)
        L = xi.conductor
        maps = [m.embed(L) for m in maps]
        expected = [ProjMap(Mat.diag([-1, 1], L)), reversal(2, L)]
        forms = [xi @ m @ xi.inverse() for m in maps]
        ok = all(proj_eq(f, e) for f, e in zip(forms, expected))
        return [entry("canonicalize.conjugation", ok, "xi conjugates to diag(-1, 1) and the swap")], \
            {"xi": xi.to_json(), "canonical": [f.to_json() for f in forms]}
    else:
        xi = canonical_involutions_pgl3(maps)
        L = xi.conductor
        maps = [m.embed(L) for m in maps]
        expected = [ProjMap(Mat.diag([1, -1, 1], L)), reversal(3, L)][: len(maps)]
        forms = [xi @ m @ xi.inverse() for m in maps]
        ok = all(proj_eq(f, e) for f, e in zip(forms, expected))
        return [entry("canonicalize.conjugation", ok, "xi conjugates to the diagonal and reversal forms")], \
            {"xi": xi.to_json(), "canonical": [f.to_json() for f in forms]}
    form = forms[0]
    lam = form.lift[1, 1] / form.lift[0, 0]
    ok = form.lift[0, 1] == 0 and form.lift[1, 0] == 0
    return [entry("canonicalize.conjugation", ok, "xi conjugates to a diagonal form")], \
        {"xi": xi.to_json(), "canonical": [form.to_json()], "lambda": lam.to_json()}


def _pair_delta(args):
    obj = _need_input(args, "classify_input")
    pair = PairSpec.from_json(obj["pair"])
    delta = DeltaSubgroup.from_json(obj["delta"])
    cls = FibrationClass.from_json(obj["class"]) if "class" in obj else None
    return pair, delta, cls


def cmd_classify(args):
    pair, delta, _ = _pair_delta(args)
    cls = classify(pair, delta)
    validate(cls.to_json(), "fibration_class")
    return [entry("classify.case", True, f"case {cls.case}")], cls.to_json()


def cmd_verify_case(args):
    pair, delta, cls = _pair_delta(args)
    entries = []
    if cls is None:
        cls = classify(pair, delta)
    else:
        try:
            computed = classify(pair, delta)
            entries.append(entry("verify.matches_classification", computed == cls,
                                 f"computed case {computed.case}, supplied case {cls.case}"))
        except _INTERNAL as exc:
            entries.append(error_entry("verify.matches_classification", exc))
    entries += verify_class(pair, cls, samples=args.samples, seed=args.seed)
    return entries, cls.to_json()


def cmd_fix_divisors(args):
    obj = _need_input(args, "fix_divisors_input")
    n = obj["n"]
    x, y = TorsionPoint.from_json(obj["x"]), TorsionPoint.from_json(obj["y"])
    divs = fix_divisors(n, x, y)
    perm = translation_permutation(n, x, y)
    entries = [
        entry("fix.count", len(divs) == n + 1, f"{len(divs)} divisors"),
        entry("fix.distinct", len(set(divs)) == len(divs), "divisors are pairwise distinct"),
        entry("fix.degree_and_sum", all(d.degree == n + 1 and d.point_sum() == TorsionPoint.zero()
                                        for d in divs), "degree n+1 and point-sum zero"),
        entry("fix.single_cycle", is_single_cycle(perm), f"translation permutation {list(perm)}"),
    ]
    return entries, {"divisors": [d.to_json() for d in divs], "permutation": list(perm)}


def cmd_fiber_product_check(args):
    if args.level is None:
        raise ParseError("fiber-product-check needs --level")
    obj = _need_input(args, "finite_model")
    rank, factors, delta0 = model_spec_from_json(obj)
    model = build_model(args.level, factors, delta0, rank=rank)
    entries = check_universal_property(model)
    return entries, {"combined_classes": len(combined_classes(model)), "level": args.level}


def cmd_suite(args):
    entries = run_all(AcceptanceConfig(seed=args.seed, commutation_samples=args.samples))
    return entries, {"criteria": len(entries)}


HANDLERS = {
    "canonicalize": cmd_canonicalize,
    "classify": cmd_classify,
    "verify-case": cmd_verify_case,
    "fix-divisors": cmd_fix_divisors,
    "fiber-product-check": cmd_fiber_product_check,
    "suite": cmd_suite,
}


def parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quotfib", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--samples", type=int, default=50)
        s.add_argument("--in", "--factors", dest="input", default=None, help="input JSON file")
        s.add_argument("--out", default=None, help="report path (default stdout)")
        s.add_argument("--level", type=int, default=None)
    return p


def run(args) -> tuple[dict, int]:
    """Run one subcommand; ParseError propagates to the caller."""
    if args.seed < 0 or args.samples < 1:
        raise ParseError("--seed must be >= 0 and --samples >= 1")
    try:
        entries, result = HANDLERS[args.command](args)
    except ParseError:
        raise
    except _INTERNAL as exc:
        entries, result = [error_entry(f"{args.command}.run", exc)], None
    report = build_report(args, entries, result)
    code = 0 if report["summary"]["pass"] == report["summary"]["total"] else 1
    return report, code


def main(argv=None) -> int:
    args = parser().parse_args(argv)
    try:
        report, code = run(args)
    except ParseError as exc:
        print(f"quotfib: parse error: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
