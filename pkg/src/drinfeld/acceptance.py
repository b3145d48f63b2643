"""Desk-scale acceptance suite: ten criteria, each a deterministic dict with "passed"."""
from __future__ import annotations

import json
import time
from typing import Callable

from . import __version__
from .dops import check_binom_identity, check_generation, membership_agreement
from .fingrp import bruhat_count, coset_key, coset_table, enumerate_group, group_order
from .functor import (BaseModule, CharacterSum, build_fgp_dual, diagonal_control,
                      exact_triples, exactness_dims_check, height_one_check,
                      pairwise_noniso_check, reducible_control, simplicity_probe_fgp,
                      transitivity_check, with_duplicate_summand)
from .halfspace import reconcile_filtration
from .monomod import act_divided, iterate_oracle, local_cohomology_basis, torus_basis
from .rootsys import ParabolicData
from .scalars import GF

DEFAULT_SEED = 20240101


def criterion_divided_powers(seed: int = 0) -> dict:
    """act_divided against iterate-then-divide on torus and local cohomology windows."""
    windows = {1: 10, 2: 10, 3: 6}
    checked, bad = 0, []
    for d, W in windows.items():
        monos = set(torus_basis(d, W))
        for j in range(d):
            monos.update(local_cohomology_basis(d, j, W))
        for p in (5, 7):
            for m in sorted(monos):
                for a in range(d + 1):
                    for b in range(d + 1):
                        if a == b:
                            continue
                        for n in range(1, 13):
                            checked += 1
                            if act_divided((a, b), n, m, p) != iterate_oracle((a, b), n, m, p):
                                bad.append([d, p, list(m), [a, b], n])
    return {"windows": {str(k): v for k, v in windows.items()}, "checked": checked,
            "mismatches": bad[:20], "passed": not bad}


def criterion_binomial(seed: int = 0) -> dict:
    results = {f"p={p},n={n}": check_binom_identity(n, p, 50)
               for p in (5, 7) for n in range(11)}
    return {"window": 50, "results": results, "passed": all(results.values())}


def criterion_membership(seed: int = 0) -> dict:
    runs = [membership_agreement(p, seed=seed) for p in (5, 7)]
    return {"runs": runs, "passed": all(r["passed"] for r in runs)}


def criterion_generation(seed: int = 0) -> dict:
    r = check_generation(2, 0, 5, 25)
    return {"d": 2, "j": 0, "p": 5, "W": 25, "span": len(r.span), "region": len(r.region),
            "missing": [list(m) for m in r.missing[:20]], "censored": r.censored,
            "passed": set(r.span) == set(r.region)}


def criterion_simplicity(seed: int = DEFAULT_SEED, trials: int = 50) -> dict:
    out: dict = {}
    M1 = BaseModule(1, 0, 5, 20, simple=True)
    F1 = build_fgp_dual(M1, None, set(), 1, 5)
    out["d1"] = simplicity_probe_fgp(F1, trials, seed).as_dict()
    M2 = BaseModule(2, 0, 5, 12, simple=True)
    F2 = build_fgp_dual(M2, None, {1}, 2, 5)
    out["d2"] = simplicity_probe_fgp(F2, trials, seed).as_dict()
    red = build_fgp_dual(M1, CharacterSum(ParabolicData(1, (1, 1)), ((0, 0), (1, 0))),
                         set(), 1, 5)
    out["reducible_V"] = reducible_control(red, 10, seed)
    FB = build_fgp_dual(M2, None, set(), 2, 5)
    out["non_maximal_P"] = diagonal_control(FB, ParabolicData(2, (1, 2)))
    out["noniso"] = {"d1": pairwise_noniso_check(F1).passed,
                     "d2": pairwise_noniso_check(F2).passed,
                     "duplicate_control": pairwise_noniso_check(
                         with_duplicate_summand(F1)).witness is not None}
    out["passed"] = (out["d1"]["passed"] and out["d2"]["passed"]
                     and out["reducible_V"]["control_ok"]
                     and out["non_maximal_P"]["control_ok"] and all(out["noniso"].values()))
    return out


def criterion_height_one(seed: int = 0) -> dict:
    runs = [height_one_check(1, p) for p in (5, 7)]
    return {"runs": runs, "passed": all(r["match"] for r in runs)}


def criterion_functor_laws(seed: int = 0) -> dict:
    exact = {k: exactness_dims_check(t, set(), 1, 2)["passed"]
             for k, t in exact_triples().items()}
    M = BaseModule(2, 0, 5, 8)
    trans = transitivity_check(2, 2, set(), {1}, M.graded_dims())
    return {"exact": exact, "transitivity": {k: trans[k] for k in
                                             ("index_P", "index_Q", "index_Q_over_P",
                                              "bijection", "passed")},
            "passed": all(exact.values()) and trans["passed"]}


def criterion_reconcile(seed: int = 0) -> dict:
    r = reconcile_filtration(1, (2, 3, 5), (0, 1), 10)
    a = all(row["match_conventionA"] for row in r.rows)
    b = all(row["match_conventionB"] for row in r.rows)
    return {"winner": r.winner, "rows": len(r.rows), "all_match_A": a, "all_match_B": b,
            "passed": r.winner is not None}


def criterion_groups(seed: int = 0) -> dict:
    orders, cosets, ok = {}, [], True
    for d, q, want in ((1, 2, 6), (1, 3, 48), (2, 2, 168)):
        G = enumerate_group(d, q)
        orders[f"GL{d + 1}(F{q})"] = len(G)
        ok &= len(G) == want == group_order(d, q)
        F = GF(q)
        for bits in range(2 ** d):
            sub = frozenset(k for k in range(d) if bits >> k & 1)
            par = ParabolicData.from_subset(sub, d)
            n = len({coset_key(F, g, par) for g in G})
            row = {"d": d, "q": q, "composition": list(par.composition), "enumerated": n,
                   "bruhat": bruhat_count(par, q), "table": len(coset_table(d, q, sub))}
            ok &= row["enumerated"] == row["bruhat"] == row["table"]
            cosets.append(row)
    return {"orders": orders, "cosets": cosets, "passed": bool(ok)}


def criterion_determinism(seed: int = DEFAULT_SEED) -> dict:
    """Seeded probe and reconcile outputs serialize identically on a second run."""
    M = BaseModule(1, 0, 5, 20, simple=True)
    F = build_fgp_dual(M, None, set(), 1, 5)
    a = simplicity_probe_fgp(F, 10, seed).to_json()
    b = simplicity_probe_fgp(F, 10, seed).to_json()
    c = reconcile_filtration(1, (2, 3), (0,), 5).to_csv()
    e = reconcile_filtration(1, (2, 3), (0,), 5).to_csv()
    return {"probe_identical": a == b, "csv_identical": c == e, "passed": a == b and c == e}


CRITERIA: list[tuple[str, str, Callable[..., dict], float]] = [
    ("1", "divided-power oracle equivalence", criterion_divided_powers, 10),
    ("2", "binomial operator identity", criterion_binomial, 1),
    ("3", "membership vs two-chart oracle", criterion_membership, 30),
    ("4", "finite generation", criterion_generation, 60),
    ("5", "simplicity probes and controls", criterion_simplicity, 120),
    ("6", "height-one Lucas pattern", criterion_height_one, 5),
    ("7", "functor laws", criterion_functor_laws, 30),
    ("8", "filtration reconciliation", criterion_reconcile, 30),
    ("9", "group and coset sanity", criterion_groups, 10),
    ("10", "determinism", criterion_determinism, 60),
]


def run_suite(seed: int = DEFAULT_SEED, only: set[str] | None = None,
              ) -> tuple[dict, dict[str, float]]:
    """(deterministic report, wall-clock seconds per criterion)."""
    results, times = {}, {}
    for key, name, fn, _ in CRITERIA:
        if only and key not in only:
            continue
        t = time.perf_counter()
        res = fn(seed)
        times[key] = time.perf_counter() - t
        results[key] = {"name": name, "passed": bool(res["passed"]), "details": res}
    report = {"profile": "desk", "seed": seed, "version": __version__, "criteria": results,
              "passed": all(r["passed"] for r in results.values())}
    return report, times


def report_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=1) + "\n"


def summary_table(report: dict, times: dict[str, float]) -> str:
    budgets = {k: b for k, _, _, b in CRITERIA}
    lines = [f"{'#':>3}  {'criterion':<36} {'result':<6} {'seconds':>8} {'budget':>7}"]
    for key, r in report["criteria"].items():
        lines.append(f"{key:>3}  {r['name']:<36} {'PASS' if r['passed'] else 'FAIL':<6} "
                     f"{times.get(key, 0.0):>8.2f} {budgets[key]:>7.0f}")
    lines.append(f"overall: {'PASS' if report['passed'] else 'FAIL'}")
    return "\n".join(lines)
