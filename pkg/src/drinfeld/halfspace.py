"""Sections of O(m) on the complement of all F_q-rational hyperplanes in P^d.

Stage k of H^0 is the space F / (prod l)^k with F a form of degree m + kN,
where l runs over the N rational linear forms. The filtration pieces are
predicted from local cohomology along rational subspaces, parabolic indices
and Steinberg dimensions; reconcile_filtration compares both sides.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from itertools import product
from math import comb
from typing import Sequence

from .fingrp import (Matrix, bruhat_count, generalized_steinberg_dim, mat_mul, rref,
                     steinberg_dim)
from .rootsys import ParabolicData
from .scalars import GF

CONVENTIONS = {"A": "St_(d-j)", "B": "St_(d+1-j)"}


@dataclass(frozen=True)
class Arrangement:
    d: int
    q: int
    normals: tuple[tuple[int, ...], ...]

    @property
    def N(self) -> int:
        return len(self.normals)


def _normalize(F: GF, a: Sequence[int]) -> tuple[int, ...]:
    lead = next(x for x in a if x)
    inv = F.inv(lead)
    return tuple(F.mul(inv, x) for x in a)


def arrangement(d: int, q: int) -> Arrangement:
    """All rational hyperplanes sum a_i X_i = 0, normals scaled to leading entry 1."""
    F = GF(q)
    normals = sorted({_normalize(F, a) for a in product(range(q), repeat=d + 1) if any(a)})
    expected = (q ** (d + 1) - 1) // (q - 1)
    assert len(normals) == expected
    return Arrangement(d, q, tuple(normals))


def act_on_arrangement(arr: Arrangement, g: Matrix) -> tuple[tuple[int, ...], ...]:
    """Normals of the hyperplanes pulled back along X -> X g, i.e. a -> g a."""
    F = GF(arr.q)
    out = []
    for a in arr.normals:
        ga = mat_mul(F, g, tuple((x,) for x in a))
        out.append(_normalize(F, [r[0] for r in ga]))
    return tuple(sorted(out))


# --- forms over F_q ---------------------------------------------------------------------------

Form = dict[tuple[int, ...], int]


def form_mul(F: GF, a: Form, b: Form) -> Form:
    out: Form = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = F.add(out.get(e, 0), F.mul(ca, cb))
    return {e: c for e, c in out.items() if c}


def form_pow(F: GF, a: Form, n: int, d: int) -> Form:
    out: Form = {(0,) * (d + 1): 1}
    for _ in range(n):
        out = form_mul(F, out, a)
    return out


def linear_form(a: Sequence[int]) -> Form:
    d = len(a) - 1
    return {tuple(int(i == k) for i in range(d + 1)): c for k, c in enumerate(a) if c}


def monomials(d: int, degree: int) -> list[tuple[int, ...]]:
    if degree < 0:
        return []
    if d == 0:
        return [(degree,)]
    return [(a,) + rest for a in range(degree, -1, -1) for rest in monomials(d - 1, degree - a)]


def _coords(f: Form, basis_index: dict) -> list[int]:
    v = [0] * len(basis_index)
    for e, c in f.items():
        v[basis_index[e]] = c
    return v


def product_of_forms(arr: Arrangement) -> Form:
    F = GF(arr.q)
    out: Form = {(0,) * (arr.d + 1): 1}
    for a in arr.normals:
        out = form_mul(F, out, linear_form(a))
    return out


# --- section dimensions ---------------------------------------------------------------------

def sections_formula(d: int, N: int, m: int, k: int) -> int:
    deg = m + k * N
    return comb(deg + d, d) if deg >= 0 else 0


def sections_rank_oracle(q: int, m: int, k: int) -> int:
    """dim of stage k on the line, as the rank of the partial-fraction spanning set:
    global sections plus G / l^r (deg G = m + r, r <= k) for each rational point,
    all brought to the common denominator (prod l)^k."""
    arr = arrangement(1, q)
    F = GF(q)
    deg = m + k * arr.N
    if deg < 0:
        return 0
    index = {e: i for i, e in enumerate(monomials(1, deg))}
    lines = [linear_form(a) for a in arr.normals]
    rows = []
    full = form_pow(F, product_of_forms(arr), k, 1)
    rows += [_coords(form_mul(F, {e: 1}, full), index) for e in monomials(1, m)]
    for i, ell in enumerate(lines):
        others: Form = {(0, 0): 1}
        for i2, ell2 in enumerate(lines):
            if i2 != i:
                others = form_mul(F, others, form_pow(F, ell2, k, 1))
        for r in range(1, k + 1):
            base = form_mul(F, others, form_pow(F, ell, k - r, 1))
            rows += [_coords(form_mul(F, {e: 1}, base), index) for e in monomials(1, m + r)]
    return len(rref(F, rows)) if rows else 0


def sections_dims(d: int, q: int, m: int, k_max: int, oracle: str = "auto") -> list[int]:
    """Dimensions of stages k = 0..k_max of H^0 of O(m) on the complement.

    oracle "rank" (d = 1, m >= -1) computes ranks; "formula" uses C(m + kN + d, d).
    "auto" picks the rank oracle where it applies.
    """
    N = (q ** (d + 1) - 1) // (q - 1)
    use_rank = oracle == "rank" or (oracle == "auto" and d == 1 and m >= -1)
    if use_rank and (d != 1 or m < -1):
        raise ValueError("the rank oracle needs d = 1 and m >= -1 (partial fractions)")
    if use_rank:
        return [sections_rank_oracle(q, m, k) for k in range(k_max + 1)]
    return [sections_formula(d, N, m, k) for k in range(k_max + 1)]


def multiplication_injective(d: int, q: int, m: int, k: int) -> bool:
    """Rank check that multiplying stage-k numerators by prod l is injective."""
    arr = arrangement(d, q)
    F = GF(q)
    pi = product_of_forms(arr)
    src = monomials(d, m + k * arr.N)
    if not src:
        return True
    index = {e: i for i, e in enumerate(monomials(d, m + (k + 1) * arr.N))}
    rows = [_coords(form_mul(F, {e: 1}, pi), index) for e in src]
    return len(rref(F, rows)) == len(src)


# --- predictions from the filtration --------------------------------------------------------

def serre_h(d: int, i: int, m: int) -> int:
    """dim H^i(P^d, O(m))."""
    if i == 0:
        return comb(m + d, d) if m >= 0 else 0
    if i == d:
        return comb(-m - 1, d) if m <= -d - 1 else 0
    return 0


def pole_order(e: Sequence[int], j: int) -> int:
    """Largest pole order along the coordinate hyperplanes X_(j+1), ..., X_d."""
    return max(-x for x in e[j + 1:])


def reduced_lc_count(d: int, j: int, m: int, k: int) -> int:
    """Monomials of the reduced local cohomology along P^j of O(m) with pole order <= k."""
    if k < 1:
        return 0
    count = 0
    for tail in product(range(-k, 0), repeat=d - j):
        s = m - sum(tail)
        if s < 0:
            continue
        count += comb(s + j, j)
    return count


def steinberg_factor(d: int, j: int, q: int, convention: str) -> int:
    if convention == "A":
        return steinberg_dim(d - j, q)
    if convention == "B":
        return steinberg_dim(d + 1 - j, q)
    raise ValueError(f"unknown convention {convention!r}")


def predicted_graded_dims(d: int, q: int, m: int, j: int, k_max: int, convention: str
                          ) -> list[int]:
    """Stage dimensions of the j-th graded piece: Ind(reduced LC (x) St) plus
    v^G (x) H^(d-j)(P^d, O(m)); the latter counts from pole order 1 on."""
    if not 0 <= j <= d - 1:
        raise ValueError(f"need 0 <= j <= d-1, got j={j}")
    index = bruhat_count(ParabolicData(d, (j + 1, d - j)), q)
    st = steinberg_factor(d, j, q, convention)
    top = serre_h(d, d - j, m)
    vg = generalized_steinberg_dim((j + 1,) + (1,) * (d - j), q) if top else 0
    out = []
    for k in range(k_max + 1):
        out.append(index * st * reduced_lc_count(d, j, m, k) + (vg * top if k >= 1 else 0))
    return out


def predicted_total(d: int, q: int, m: int, k_max: int, convention: str) -> list[int]:
    bottom = serre_h(d, 0, m)
    pieces = [predicted_graded_dims(d, q, m, j, k_max, convention) for j in range(d)]
    return [bottom + sum(p[k] for p in pieces) for k in range(k_max + 1)]


@dataclass
class ReconcileReport:
    rows: list[dict]
    winner: str | None

    def to_csv(self) -> str:
        buf = io.StringIO()
        cols = ["d", "q", "m", "k", "lhs_dim", "rhs_dim_conventionA", "rhs_dim_conventionB",
                "match_conventionA", "match_conventionB"]
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in self.rows:
            w.writerow(r)
        return buf.getvalue()

    def as_dict(self) -> dict:
        return {"winner": self.winner, "conventions": CONVENTIONS, "rows": self.rows}


def reconcile_filtration(d: int, qs: Sequence[int], ms: Sequence[int], k_max: int
                         ) -> ReconcileReport:
    """Compare section dimensions with the predictions under both conventions; the
    winner is the unique convention matching every row, if any."""
    rows = []
    for q in qs:
        for m in ms:
            lhs = sections_dims(d, q, m, k_max)
            a = predicted_total(d, q, m, k_max, "A")
            b = predicted_total(d, q, m, k_max, "B")
            for k in range(k_max + 1):
                rows.append({"d": d, "q": q, "m": m, "k": k, "lhs_dim": lhs[k],
                             "rhs_dim_conventionA": a[k], "rhs_dim_conventionB": b[k],
                             "match_conventionA": lhs[k] == a[k],
                             "match_conventionB": lhs[k] == b[k]})
    ok = [c for c in "AB" if all(r[f"match_convention{c}"] for r in rows)]
    return ReconcileReport(rows, ok[0] if len(ok) == 1 else None)
