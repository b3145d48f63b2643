"""Command-line entry point: basis dumps, dimension tables, checks, probes, acceptance."""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys

from . import __version__
from .scalars import CharacteristicError, is_prime, prime_power, require_p_gt_3

log = logging.getLogger("drinfeld")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3
LOG_ENV = "DRINFELD_LOG"


class UsageError(ValueError):
    pass


# --- validation --------------------------------------------------------------------------

def _prime(p: int) -> int:
    if not is_prime(p):
        raise UsageError(f"p = {p} is not prime")
    return p


def _prime_power(q: int) -> int:
    try:
        prime_power(q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return q


def _dj(d: int, j: int) -> None:
    if d < 1 or not 0 <= j <= d - 1:
        raise UsageError(f"need d >= 1 and 0 <= j <= d-1, got d={d}, j={j}")


def _window(W: int) -> int:
    if W <= 0:
        raise UsageError("the window W must be positive")
    return W


def _require_large_p(p: int, what: str) -> None:
    _prime(p)
    try:
        require_p_gt_3(p, what)
    except CharacteristicError as exc:
        raise UsageError(str(exc)) from None


def _subset(text: str | None, d: int) -> frozenset[int]:
    if not text:
        return frozenset()
    try:
        sub = frozenset(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"bad subset {text!r}: expected comma-separated simple root indices")
    if not sub <= set(range(d)):
        raise UsageError(f"simple root indices must lie in 0..{d - 1}")
    return sub


# --- report emission --------------------------------------------------------------------

def emit_report(results: dict, fmt: str = "json", config: dict | None = None) -> str:
    """Serialize with stable key order, a version stamp and the config echo."""
    if fmt == "json":
        body = {"version": __version__, "config": config or {}, "results": results}
        return json.dumps(body, sort_keys=True, indent=1) + "\n"
    if fmt == "csv":
        rows = results.get("rows") if isinstance(results, dict) else None
        if not rows:
            return ""
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    if isinstance(results, dict) and "text" in results:
        return results["text"].rstrip("\n") + "\n"
    return "\n".join(f"{k}: {v}" for k, v in sorted(results.items())) + "\n"


def _write(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- subcommands ------------------------------------------------------------------------

def cmd_basis(a) -> tuple[dict, bool]:
    from .functor import BaseModule
    from .monomod import LOCAL, REDUCED, MonomialModule
    _dj(a.d, a.j)
    _window(a.W)
    _prime(a.p)
    if a.flavor == "simple":
        M = BaseModule(a.d, a.j, a.p, a.W, simple=True)
        basis = M.basis
        text = f"# d={a.d} j={a.j} W={a.W} p={a.p} simple\n" + "".join(
            " ".join(map(str, m)) + "\n" for m in basis)
    else:
        M = MonomialModule(REDUCED if a.flavor == "reduced" else LOCAL, a.d, a.p, a.W, a.j,
                           a.twist)
        basis = M.basis
        text = M.dump()
    return {"count": len(basis), "basis": [list(m) for m in basis], "text": text}, True


def cmd_dims(a) -> tuple[dict, bool]:
    _prime_power(a.q)
    if a.kind == "sections":
        from .halfspace import sections_dims
        dims = sections_dims(a.d, a.q, a.m, a.k)
        rows = [{"k": k, "dim": v} for k, v in enumerate(dims)]
    else:
        from .fingrp import induce_graded
        from .functor import BaseModule
        _dj(a.d, a.j)
        _window(a.W)
        M = BaseModule(a.d, a.j, a.p, a.W)
        sub = _subset(a.subset, a.d)
        dims = induce_graded(M.graded_dims(), sub, a.d, a.q)
        rows = [{"degree": k, "dim": v} for k, v in dims.items()]
    text = "\n".join(" ".join(str(v) for v in r.values()) for r in rows)
    return {"rows": rows, "text": text}, True


def cmd_check_binom(a) -> tuple[dict, bool]:
    from .dops import check_binom_identity
    _prime(a.p)
    ok = check_binom_identity(a.n, a.p, a.window)
    return {"n": a.n, "p": a.p, "window": a.window, "passed": ok,
            "text": f"check-binom n={a.n} p={a.p} window={a.window}: "
                    f"{'pass' if ok else 'FAIL'}"}, ok


def cmd_check_membership(a) -> tuple[dict, bool]:
    from .dops import format_operator, membership_D, parse_operator, two_chart_oracle
    _prime(a.p)
    try:
        op = parse_operator(a.op, a.p)
    except ValueError as exc:
        raise UsageError(f"cannot parse operator: {exc}") from None
    verdict = membership_D(op)
    res = {"operator": format_operator(op), "accepted": verdict.accepted, "q": verdict.q,
           "reason": verdict.reason}
    ok = True
    if len(op.variables) <= 1:
        res["two_chart"] = two_chart_oracle(op)
        ok = res["two_chart"] == verdict.accepted
    if a.expect:
        ok = ok and verdict.accepted == (a.expect == "accept")
    res["passed"] = ok
    res["text"] = f"{res['operator']}: {'in D' if verdict.accepted else 'not in D'}"
    return res, ok


def cmd_check_generation(a) -> tuple[dict, bool]:
    from .dops import check_generation
    _dj(a.d, a.j)
    _window(a.W)
    _require_large_p(a.p, "the generation check")
    r = check_generation(a.d, a.j, a.p, a.W)
    res = {"span": len(r.span), "region": len(r.region), "censored": r.censored,
           "missing": [list(m) for m in r.missing], "passed": r.complete}
    res["text"] = f"generated {res['span']} of {res['region']} basis monomials"
    return res, r.complete


def cmd_probe(a) -> tuple[dict, bool]:
    _require_large_p(a.p, "the simplicity probe")
    _window(a.W)
    if a.target == "dops":
        from .dops import full_ops, simplicity_probe
        from .monomod import local_cohomology, highest_weight_vector
        _dj(a.d, a.j)
        M = local_cohomology(a.d, a.j, a.W, a.p)
        r = simplicity_probe(M, full_ops(a.d, a.p, a.W), highest_weight_vector(a.d, a.j),
                             a.trials, a.seed)
        res = r.as_dict()
        return res, r.passed
    from .functor import BaseModule, build_fgp_dual, simplicity_probe_fgp
    if a.j != 0:
        raise UsageError("the induced-module probe uses the simple quotient along a point (j=0)")
    M = BaseModule(a.d, 0, a.p, a.W, simple=True)
    sub = _subset(a.subset, a.d) if a.subset is not None else frozenset(range(1, a.d))
    F = build_fgp_dual(M, None, sub, a.d, a.p)
    rep = simplicity_probe_fgp(F, a.trials, a.seed)
    return rep.as_dict(), rep.passed


def cmd_check_functor(a) -> tuple[dict, bool]:
    from .functor import (BaseModule, build_fgp_dual, exact_triples, exactness_dims_check,
                          pairwise_noniso_check, transitivity_check)
    _prime_power(a.q)
    res: dict = {}
    if a.check in ("exactness", "all"):
        res["exactness"] = {k: exactness_dims_check(t, set(), 1, a.q)["passed"]
                            for k, t in exact_triples().items()}
    if a.check in ("transitivity", "all"):
        M = BaseModule(2, 0, 5, a.W)
        t = transitivity_check(2, a.q, set(), {1}, M.graded_dims())
        res["transitivity"] = {k: t[k] for k in ("index_P", "index_Q", "bijection", "passed")}
    if a.check in ("noniso", "all"):
        _require_large_p(a.p, "the non-isomorphism check")
        M = BaseModule(a.d, 0, a.p, a.W, simple=True)
        sub = frozenset(range(1, a.d))
        r = pairwise_noniso_check(build_fgp_dual(M, None, sub, a.d, a.p))
        res["noniso"] = {"passed": r.passed, "summands": r.summands,
                         "witness": list(r.witness) if r.witness else None}
    ok = all((v if isinstance(v, bool) else v.get("passed", all(v.values())))
             for v in res.values())
    res["passed"] = ok
    return res, ok


def cmd_reconcile(a) -> tuple[dict, bool]:
    from .halfspace import reconcile_filtration
    qs = a.q or [2]
    for q in qs:
        _prime_power(q)
    ms = a.m if a.m is not None else [0]
    r = reconcile_filtration(a.d, qs, ms, a.k)
    res = r.as_dict()
    res["text"] = r.to_csv() + f"winner: {r.winner}\n"
    ok = r.winner is not None or a.d > 1
    return res, ok


def cmd_accept(a) -> tuple[dict, bool]:
    from .acceptance import report_json, run_suite, summary_table
    only = set(a.only.split(",")) if a.only else None
    report, times = run_suite(a.seed, only)
    sys.stderr.write(summary_table(report, times) + "\n")
    return {"report": report, "json": report_json(report)}, report["passed"]


# --- parser -----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    from .acceptance import DEFAULT_SEED
    ap = argparse.ArgumentParser(prog="drinfeld", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p, fmt="json"):
        p.add_argument("--format", choices=("json", "csv", "text"), default=fmt)
        p.add_argument("--output", "-o")
        return p

    b = common(sub.add_parser("basis", help="monomial basis dumps"), "text")
    b.add_argument("-d", type=int, default=1)
    b.add_argument("-j", type=int, default=0)
    b.add_argument("-p", type=int, default=5)
    b.add_argument("-W", "--window", dest="W", type=int, default=5)
    b.add_argument("--twist", type=int, default=0)
    b.add_argument("--flavor", choices=("reduced", "local", "simple"), default="reduced")
    b.set_defaults(fn=cmd_basis)

    dm = common(sub.add_parser("dims", help="section or induced dimension tables"), "text")
    dm.add_argument("--kind", choices=("sections", "induced"), default="sections")
    dm.add_argument("-d", type=int, default=1)
    dm.add_argument("-q", type=int, default=2)
    dm.add_argument("-p", type=int, default=5)
    dm.add_argument("-m", type=int, default=0)
    dm.add_argument("-j", type=int, default=0)
    dm.add_argument("-k", type=int, default=5)
    dm.add_argument("-W", "--window", dest="W", type=int, default=8)
    dm.add_argument("--subset", help="simple roots of the Levi, e.g. 1 or 0,2")
    dm.set_defaults(fn=cmd_dims)

    cb = common(sub.add_parser("check-binom", help="binomial operator identity"), "text")
    cb.add_argument("-n", type=int, required=True)
    cb.add_argument("-p", type=int, default=5)
    cb.add_argument("--window", type=int, default=30)
    cb.set_defaults(fn=cmd_check_binom)

    cm = common(sub.add_parser("check-membership", help="membership of an operator in D"),
                "text")
    cm.add_argument("--op", required=True, help='e.g. "1 * T{(0,1)}^4 * y{(0,1)}^[5]"')
    cm.add_argument("-p", type=int, default=5)
    cm.add_argument("--expect", choices=("accept", "reject"))
    cm.set_defaults(fn=cmd_check_membership)

    cg = common(sub.add_parser("check-generation", help="finite generation closure"))
    cg.add_argument("-d", type=int, default=2)
    cg.add_argument("-j", type=int, default=0)
    cg.add_argument("-p", type=int, default=5)
    cg.add_argument("-W", "--window", dest="W", type=int, default=25)
    cg.set_defaults(fn=cmd_check_generation)

    pr = common(sub.add_parser("probe-simplicity", help="seeded simplicity probes"))
    pr.add_argument("--target", choices=("dops", "functor"), default="functor")
    pr.add_argument("-d", type=int, default=1)
    pr.add_argument("-j", type=int, default=0)
    pr.add_argument("-p", type=int, default=5)
    pr.add_argument("-W", "--window", dest="W", type=int, default=20)
    pr.add_argument("--subset")
    pr.add_argument("--trials", type=int, default=50)
    pr.add_argument("--seed", type=int, default=DEFAULT_SEED)
    pr.set_defaults(fn=cmd_probe)

    cf = common(sub.add_parser("check-functor", help="exactness, transitivity, non-isomorphism"))
    cf.add_argument("--check", choices=("exactness", "transitivity", "noniso", "all"),
                    default="all")
    cf.add_argument("-d", type=int, default=1)
    cf.add_argument("-q", type=int, default=2)
    cf.add_argument("-p", type=int, default=5)
    cf.add_argument("-W", "--window", dest="W", type=int, default=8)
    cf.set_defaults(fn=cmd_check_functor)

    rc = common(sub.add_parser("reconcile", help="filtration reconciliation report"), "csv")
    rc.add_argument("-d", type=int, default=1)
    rc.add_argument("-q", type=int, action="append")
    rc.add_argument("-m", type=int, action="append")
    rc.add_argument("-k", type=int, default=10)
    rc.set_defaults(fn=cmd_reconcile)

    ac = sub.add_parser("accept", help="run the acceptance suite")
    ac.add_argument("--profile", choices=("desk",), default="desk")
    ac.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ac.add_argument("--only", help="comma-separated criterion numbers")
    ac.add_argument("--output", "-o")
    ac.set_defaults(fn=cmd_accept, format="json")
    return ap


def _configure_logging() -> None:
    level = os.environ.get(LOG_ENV, "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def dispatch(argv: list[str] | None = None) -> int:
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("fn", "output")}
    try:
        results, ok = args.fn(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except Exception:  # noqa: BLE001
        log.exception("internal error")
        return EXIT_INTERNAL
    if args.cmd == "accept":
        text = results["json"]
    else:
        if args.format == "json":
            results.pop("text", None)
        text = emit_report(results, args.format, config)
    try:
        _write(text, args.output)
    except OSError as exc:
        sys.stderr.write(f"error: cannot write report: {exc}\n")
        return EXIT_INTERNAL
    return EXIT_OK if ok else EXIT_FAIL


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
