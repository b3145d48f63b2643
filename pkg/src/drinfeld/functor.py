"""Induction from a parabolic: twisted sums over G/P with the smash-product action.

The dual module is realized as the direct sum over cosets g_i P of copies
delta_i (x) M (x) V'. The group permutes the copies through the coset table;
the hyperalgebra acts on copy i through Ad(g_i^-1), which turns a root
vector E into the rank-one matrix g_i^-1 E g_i and acts on functions by
l^n d_w^[n] (see rank_one_apply).
"""
from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping, Sequence

from . import __version__
from .fingrp import (CosetTable, GF, Matrix, coset_table, elementary, induce_graded,
                     identity_matrix, in_parabolic, mat_inv, mat_mul,
                     parabolic_action_on_localcohomology)
from .monomod import (LOCAL, REDUCED, MonomialModule, reduced_part, TruncationOverflow, highest_weight_vector,
                      in_local_cohomology, shift_exps)
from .rootsys import ParabolicData, coroot_pairing
from .scalars import divided_multinomial, inv_mod, is_prime, lucas_binom, require_p_gt_3

log = logging.getLogger(__name__)

Exps = tuple[int, ...]
Vec = dict[Exps, int]


# --- rank-one operators ------------------------------------------------------------------

def rank_one_factors(A: Matrix, p: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(v, w) with A = v w^T over F_p."""
    n = len(A)
    r = next((i for i in range(n) if any(x % p for x in A[i])), None)
    if r is None:
        raise ValueError("zero matrix")
    w = tuple(x % p for x in A[r])
    c = next(k for k in range(n) if w[k])
    v = tuple(A[i][c] * inv_mod(w[c], p) % p for i in range(n))
    if any((v[i] * w[k] - A[i][k]) % p for i in range(n) for k in range(n)):
        raise ValueError("matrix does not have rank one")
    return v, w


def _power_terms(coeffs: Sequence[int], n: int, p: int, divided: bool):
    """Terms (coef, exponents) of (sum_i c_i Z_i)^n, or of its n-th divided power.

    The divided power of a sum of commuting derivations has no multinomial:
    (sum c_i d_i)^[n] = sum over |k| = n of prod c_i^k_i d_i^[k_i].
    """
    idx = [i for i, c in enumerate(coeffs) if c % p]
    for ks in _comp(n, len(idx)):
        c = 1 if divided else divided_multinomial(ks, p)
        for i, k in zip(idx, ks):
            c = c * pow(coeffs[i], k, p) % p
        if c:
            e = [0] * len(coeffs)
            for i, k in zip(idx, ks):
                e[i] = k
            yield c, tuple(e)


@lru_cache(maxsize=None)
def _comp_cached(n: int, k: int) -> tuple:
    if k == 0:
        return ((),) if n == 0 else ()
    if k == 1:
        return ((n,),)
    return tuple((a,) + rest for a in range(n + 1) for rest in _comp_cached(n - a, k - 1))


def _comp(n: int, k: int):
    return _comp_cached(n, k)


def rank_one_apply(v: Sequence[int], w: Sequence[int], n: int, m: Sequence[int], p: int,
                   ) -> Vec:
    """(l d_w)^[n] X^m = l^n d_w^[n] X^m with l = sum v_i X_i, d_w = sum w_j d_j.

    Valid when w . v = 0 (then l and d_w commute). When w . v = 1 the same
    expression is the binomial C(l d_w, n).
    """
    out: Vec = {}
    for cw, ks in _power_terms(w, n, p, divided=True):
        c = cw
        for mj, kj in zip(m, ks):
            c = c * lucas_binom(mj, kj, p) % p
            if not c:
                break
        if not c:
            continue
        base = tuple(a - b for a, b in zip(m, ks))
        for cv, ev in _power_terms(v, n, p, divided=False):
            e = tuple(a + b for a, b in zip(base, ev))
            out[e] = (out.get(e, 0) + c * cv) % p
    return {e: c for e, c in out.items() if c}


# --- base modules ------------------------------------------------------------------------

def _digits(x: int, p: int) -> list[int]:
    out = []
    while x:
        out.append(x % p)
        x //= p
    return out


def simple_quotient_keep(m: Sequence[int], p: int) -> bool:
    """Is X^m nonzero in the simple quotient of the reduced local cohomology along a point?

    With t_b = -n_b - 1 for the pole variables, the surviving monomials are
    those whose base-p digits add without carry, the lowest digits summing
    to at most p - d - 1 (tensor product of a restricted part and Frobenius
    twists). The rule is checked against reachability of the extremal vector.
    """
    d = len(m) - 1
    tails = [-e - 1 for e in m[1:]]
    if any(t < 0 for t in tails):
        return False
    ds = [_digits(t, p) for t in tails]
    depth = max((len(x) for x in ds), default=0)
    for k in range(max(depth, 1)):
        s = sum(x[k] if k < len(x) else 0 for x in ds)
        if s > (p - d - 1 if k == 0 else p - 1):
            return False
    return True


@dataclass(frozen=True)
class BaseModule:
    """Reduced local cohomology along P^j, or its simple quotient (j = 0).

    Provides the hyperalgebra action, the substitution action of
    P_(j+1, d-j) and the rank-one twisted operators, all inside a window.
    """

    d: int
    j: int
    p: int
    W: int
    simple: bool = False

    def __post_init__(self):
        if self.simple and self.j != 0:
            raise ValueError("the simple quotient is implemented along a point (j = 0)")

    @property
    def lc(self) -> MonomialModule:
        return MonomialModule(REDUCED, self.d, self.p, self.W, self.j)

    def support(self, m: Sequence[int]) -> bool:
        if not in_local_cohomology(m, self.j):
            return False
        return simple_quotient_keep(m, self.p) if self.simple else True

    def in_window(self, m: Sequence[int]) -> bool:
        return all(-self.W <= e <= self.W for e in m)

    def contains(self, m: Sequence[int]) -> bool:
        return self.support(m) and self.in_window(m)

    @property
    def basis(self) -> list[Exps]:
        return [m for m in self.lc.basis if self.support(m)]

    @property
    def extremal(self) -> Exps:
        return highest_weight_vector(self.d, self.j)

    @property
    def parabolic(self) -> ParabolicData:
        return ParabolicData(self.d, (self.j + 1, self.d - self.j))

    def degree(self, m: Sequence[int]) -> int:
        """Pole order, the grading by U_P^- degree."""
        return -sum(m[self.j + 1:]) - (self.d - self.j)

    def graded_dims(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for m in self.basis:
            out[self.degree(m)] = out.get(self.degree(m), 0) + 1
        return dict(sorted(out.items()))

    def _clean(self, vec: Mapping[Exps, int], window: bool) -> Vec:
        out: Vec = {}
        for e, c in vec.items():
            if not c % self.p or not self.support(e):
                continue
            if window and not self.in_window(e):
                raise TruncationOverflow(e, self.W)
            out[e] = c % self.p
        return out

    def act_rank_one(self, v, w, n: int, vec: Mapping[Exps, int], window: bool = True) -> Vec:
        out: Vec = {}
        for m, c in vec.items():
            for e, a in rank_one_apply(v, w, n, m, self.p).items():
                out[e] = (out.get(e, 0) + a * c) % self.p
        return self._clean(out, window)

    def act_root(self, root, n: int, vec, window: bool = True) -> Vec:
        v = [0] * (self.d + 1)
        w = [0] * (self.d + 1)
        v[root[0]] = 1
        w[root[1]] = 1
        return self.act_rank_one(v, w, n, vec, window)

    def act_group(self, g: Matrix, vec, window: bool = True) -> Vec:
        out = parabolic_action_on_localcohomology(g, dict(vec), self.d, self.j, self.p)
        return self._clean(out, window)


# --- coefficient modules: sums of characters of P -------------------------------------------

@dataclass(frozen=True)
class CharacterSum:
    """V = sum of characters p -> prod_b det(p_b)^a_b over the Levi blocks of P."""

    par: ParabolicData
    exponents: tuple[tuple[int, ...], ...] = ((0,),)

    def __post_init__(self):
        exps = tuple(tuple(e) + (0,) * (len(self.par.composition) - len(e))
                     for e in self.exponents)
        object.__setattr__(self, "exponents", exps)

    @property
    def dim(self) -> int:
        return len(self.exponents)

    def value(self, g: Matrix, c: int, p: int, dual: bool = False) -> int:
        F = GF(p)
        out = 1
        for blk, a in zip(self.par.blocks, self.exponents[c]):
            sub = tuple(tuple(g[r][k] for k in blk) for r in blk)
            out = out * pow(_det(F, sub), a % (p - 1), p) % p
        return inv_mod(out, p) if dual else out


def _det(F: GF, m: Matrix) -> int:
    n = len(m)
    a = [list(r) for r in m]
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = F.neg(det)
        det = F.mul(det, a[c][c])
        inv = F.inv(a[c][c])
        for r in range(c + 1, n):
            if a[r][c]:
                f = F.mul(a[r][c], inv)
                a[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(a[r], a[c])]
    return det


def trivial(par: ParabolicData) -> CharacterSum:
    return CharacterSum(par, ((0,) * len(par.composition),))


# --- the induced module ---------------------------------------------------------------------

Key = tuple[int, Exps, int]  # (coset index, monomial, character index)


@dataclass
class FGPModule:
    base: BaseModule | None
    V: CharacterSum
    table: CosetTable
    reps: list[Matrix] = field(default_factory=list)

    def __post_init__(self):
        if not self.reps:
            self.reps = list(self.table.reps)

    @property
    def p(self) -> int:
        return self.base.p

    def __len__(self) -> int:
        return len(self.reps)

    @property
    def num_summands(self) -> int:
        return len(self.reps)

    def graded_dims(self, base_dims: Mapping[int, int] | None = None) -> dict[int, int]:
        dims = base_dims if base_dims is not None else self.base.graded_dims()
        k = len(self.reps) * self.V.dim
        return {deg: k * n for deg, n in sorted(dims.items()) if n}

    def twisted_matrix(self, i: int, root) -> Matrix:
        """g_i^-1 E_root g_i."""
        F = GF(self.p)
        n = self.base.d + 1
        E = tuple(tuple(int((r, c) == tuple(root)) for c in range(n)) for r in range(n))
        g = self.reps[i]
        return mat_mul(F, mat_mul(F, mat_inv(F, g), E), g)

    def twisted_act(self, root, n: int, i: int, vec: Mapping[Exps, int], window: bool = True
                    ) -> Vec:
        """L_root^[n] acting on summand i through Ad(g_i^-1)."""
        v, w = rank_one_factors(self.twisted_matrix(i, root), self.p)
        return self.base.act_rank_one(v, w, n, vec, window)

    def act_hyper(self, root, n: int, vec: Mapping[Key, int], window: bool = True
                  ) -> dict[Key, int]:
        parts: dict[tuple[int, int], Vec] = {}
        for (i, m, c), a in vec.items():
            parts.setdefault((i, c), {})[m] = a
        out: dict[Key, int] = {}
        for (i, c), x in parts.items():
            for m, a in self.twisted_act(root, n, i, x, window).items():
                out[(i, m, c)] = a
        return out

    def act_group(self, g: Matrix, vec: Mapping[Key, int], window: bool = True
                  ) -> dict[Key, int]:
        """g (delta_i x) = delta_k (p x) where g g_i = g_k p."""
        p = self.p
        out: dict[Key, int] = {}
        for (i, m, c), a in vec.items():
            k, pe = self._coset_act(g, i)
            chi = self.V.value(pe, c, p, dual=True)
            for m2, b in self.base.act_group(pe, {m: a}, window).items():
                key = (k, m2, c)
                out[key] = (out.get(key, 0) + b * chi) % p
        return {k: v for k, v in out.items() if v}

    def _coset_act(self, g: Matrix, i: int) -> tuple[int, Matrix]:
        F = GF(self.table.q)
        h = mat_mul(F, g, self.reps[i])
        k = self.table.locate(h)
        return k, mat_mul(F, mat_inv(F, self.reps[k]), h)


def build_fgp_dual(M: BaseModule | None, V: CharacterSum | None, subset, d: int, q: int,
                   ) -> FGPModule:
    """The twisted sum over G/P_I of copies of M (x) V'."""
    par = ParabolicData.from_subset(subset, d)
    if M is not None:
        if M.d != d:
            raise ValueError(f"module lives on P^{M.d}, group is GL_{d + 1}")
        if q != M.p:
            raise ValueError("module-level actions need q = p")
        if not set(M.parabolic.subset) >= set(par.subset):
            raise ValueError("M is not a module for this parabolic")
    V = V if V is not None else trivial(par)
    if V.par != par:
        raise ValueError("V is a module for a different parabolic")
    return FGPModule(M, V, coset_table(d, q, par.subset))


# --- local finiteness and the height-one certificate ----------------------------------------

@dataclass
class LocallyFiniteResult:
    nonvanishing: list[int]
    bound: int
    certified: int
    certificate: dict | None = None

    @property
    def finite(self) -> bool:
        """No nonzero power in the upper half of the certified range."""
        return not any(n > self.certified // 2 for n in self.nonvanishing)


def _root_unit(d: int, root) -> tuple[list[int], list[int]]:
    v, w = [0] * (d + 1), [0] * (d + 1)
    v[root[0]], w[root[1]] = 1, 1
    return v, w


def locally_finite_test(M: BaseModule, root, vec: Mapping[Exps, int], bound: int,
                        certify: bool = False) -> LocallyFiniteResult:
    """The set of n <= bound with L_root^[n] vec nonzero.

    With certify, also checks x^[n] y^[n] v = C(<lambda, gamma>, n) v where
    y = L_root, x = L_-root and v = vec is a weight vector of weight lambda.
    """
    seen, cert_bad, certified = [], [], bound
    (mono,) = vec if certify else (None,)
    gamma = (root[1], root[0])
    for n in range(1, bound + 1):
        try:
            out = M.act_root(root, n, vec, window=True)
        except TruncationOverflow:
            certified = n - 1
            break
        if out:
            seen.append(n)
        if certify:
            back = M.act_root(gamma, n, out, window=False) if out else {}
            c = vec[mono] * lucas_binom(coroot_pairing(mono, gamma), n, M.p) % M.p
            want = {mono: c} if c else {}
            if back != want:
                cert_bad.append(n)
    cert = None
    if certify:
        cert = {"pairing": coroot_pairing(mono, gamma), "mismatches": cert_bad}
    return LocallyFiniteResult(seen, bound, certified, cert)


def lucas_pattern(pairing: int, bound: int, p: int) -> list[int]:
    """{1 <= n <= bound : C(pairing, n) != 0 mod p}."""
    return [n for n in range(1, bound + 1) if lucas_binom(pairing, n, p)]


def height_one_check(d: int, p: int, bound: int | None = None, gamma=(1, 0)) -> dict:
    """Compare the observed nonvanishing set of x^[n] y^[n] v+ with the Lucas prediction."""
    bound = 2 * p * p if bound is None else bound
    M = BaseModule(d, 0, p, W=bound + d + 2)
    v = highest_weight_vector(d, 0)
    y = (gamma[1], gamma[0])
    observed = []
    for n in range(1, bound + 1):
        out = M.act_root(gamma, n, M.act_root(y, n, {v: 1}, window=False), window=False)
        if out:
            observed.append(n)
    predicted = lucas_pattern(coroot_pairing(v, gamma), bound, p)
    return {"d": d, "p": p, "bound": bound, "gamma": list(gamma),
            "pairing": coroot_pairing(v, gamma), "observed": observed,
            "predicted": predicted, "match": observed == predicted}


# --- divided-power commutator expansion -------------------------------------------------------

AD_CUTOFF = 4


def _bracket(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    ab = [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    ba = [[sum(b[i][k] * a[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    return tuple(tuple(ab[i][j] - ba[i][j] for j in range(n)) for i in range(n))


def _is_zero(a: Matrix) -> bool:
    return not any(any(r) for r in a)


def divided_ad(x: Matrix, z: Matrix, i: int) -> Matrix:
    """ad(x)^i(z) / i!, exact over the integers."""
    out = z
    for _ in range(i):
        out = _bracket(x, out)
    f = 1
    for k in range(2, i + 1):
        f *= k
    if any(c % f for r in out for c in r):
        raise ArithmeticError("ad(x)^i(z) / i! is not integral")
    return tuple(tuple(c // f for c in r) for r in out)


@dataclass(frozen=True)
class ExpansionTerm:
    """factors[0] ... factors[-1] x^[x_power], with factors = ad(x)^(i_r)(z_r)."""

    shifts: tuple[int, ...]
    factors: tuple[Matrix, ...]
    x_power: int


def divided_commutator_expand(x: Matrix, zs: Sequence[Matrix], k: int, p: int
                              ) -> list[ExpansionTerm]:
    """x^[k] z_1 ... z_n = sum over i_1 + ... + i_(n+1) = k of
    ad(x)^(i_1)(z_1) ... ad(x)^(i_n)(z_n) x^[i_(n+1)], where ad(x)^(i) = ad(x)^i / i!.

    Terms with some ad(x)^i(z_r) = 0 are dropped; ad(x)^i vanishes for i >= 4
    on root vectors, which bounds the sum.
    """
    require_p_gt_3(p, "the divided commutator expansion")
    table = []
    for z in zs:
        row = []
        for i in range(AD_CUTOFF):
            a = divided_ad(x, z, i)
            if _is_zero(a):
                break
            row.append(a)
        if not _is_zero(divided_ad(x, z, AD_CUTOFF)):
            raise ValueError("ad(x) is not nilpotent of order 4 on this element")
        table.append(row)
    out = []
    for shifts in product(*(range(len(r)) for r in table)):
        rest = k - sum(shifts)
        if rest < 0:
            continue
        out.append(ExpansionTerm(shifts, tuple(table[r][i] for r, i in enumerate(shifts)), rest))
    return out


def apply_matrix(A: Matrix, vec: Mapping[Exps, int], p: int) -> Vec:
    """L_A = sum A_ab X_a d_b on Laurent monomials."""
    out: Vec = {}
    n = len(A)
    for m, c in vec.items():
        for a in range(n):
            for b in range(n):
                coef = A[a][b] * m[b] * c % p
                if coef:
                    e = shift_exps(m, a, b, 1)
                    out[e] = (out.get(e, 0) + coef) % p
    return {e: c for e, c in out.items() if c}


def _root_of(A: Matrix) -> tuple[tuple[int, int], int]:
    """(root, c) with A = c E_root."""
    nz = [(i, j) for i, r in enumerate(A) for j, c in enumerate(r) if c]
    if len(nz) != 1 or nz[0][0] == nz[0][1]:
        raise ValueError("not a multiple of a root vector")
    i, j = nz[0]
    return (i, j), A[i][j]


def apply_divided_root(A: Matrix, n: int, vec: Mapping[Exps, int], p: int) -> Vec:
    """(c E)^[n] = c^n E^[n] on monomials, without support truncation."""
    root, c = _root_of(A)
    v, w = _root_unit(len(A) - 1, root)
    out: Vec = {}
    for m, a in vec.items():
        for e, b in rank_one_apply(v, w, n, m, p).items():
            out[e] = (out.get(e, 0) + a * b * pow(c, n, p)) % p
    return {e: c for e, c in out.items() if c}


def check_expansion(x_root, z_roots, k: int, vec: Mapping[Exps, int], p: int) -> bool:
    """Both sides of divided_commutator_expand on a Laurent polynomial."""
    d = len(next(iter(vec))) - 1
    x = unit_matrix(d, x_root)
    zs = [unit_matrix(d, r) for r in z_roots]
    lhs = dict(vec)
    for z in reversed(zs):
        lhs = apply_matrix(z, lhs, p)
    lhs = apply_divided_root(x, k, lhs, p)
    rhs: Vec = {}
    for t in divided_commutator_expand(x, zs, k, p):
        part = apply_divided_root(x, t.x_power, vec, p) if t.x_power else dict(vec)
        for f in reversed(t.factors):
            part = apply_matrix(f, part, p)
        for e, c in part.items():
            rhs[e] = (rhs.get(e, 0) + c) % p
    return lhs == {e: c for e, c in rhs.items() if c}


def unit_matrix(d: int, root) -> Matrix:
    return tuple(tuple(int((r, c) == tuple(root)) for c in range(d + 1)) for r in range(d + 1))


def commutator_power_check(M: BaseModule, x_root, y_root, n_max: int, vec=None) -> dict:
    """x^[n k0] y^[n] v = (ad(x)^(k0) y)^[n] v for n <= n_max, k0 maximal with ad(x)^k0 y != 0.

    Needs x v = 0; with k0 = 1 this is x^[n] y^[n] v = [x, y]^[n] v.
    """
    p = M.p
    require_p_gt_3(p, "the commutator power identity")
    vec = {M.extremal: 1} if vec is None else dict(vec)
    d = M.d
    x, y = unit_matrix(d, x_root), unit_matrix(d, y_root)
    k0 = max(i for i in range(AD_CUTOFF) if not _is_zero(divided_ad(x, y, i)))
    if k0 == 0:
        raise ValueError("x and y commute")
    if M.act_root(x_root, 1, vec, window=False):
        raise ValueError("x does not annihilate the vector")
    z = divided_ad(x, y, k0)
    bad = []
    for n in range(1, n_max + 1):
        lhs = M.act_root(y_root, n, vec, window=False)
        lhs = M.act_root(x_root, n * k0, lhs, window=False) if lhs else {}
        rhs = M._clean(apply_divided_root(z, n, vec, p), window=False)
        if lhs != rhs:
            bad.append(n)
    return {"x": list(x_root), "y": list(y_root), "k0": k0, "n_max": n_max,
            "mismatches": bad, "passed": not bad}


# --- pairwise non-isomorphism ----------------------------------------------------------------

def _normalize(A: Matrix, p: int) -> Matrix:
    c = next(x for r in A for x in r if x % p)
    inv = inv_mod(c, p)
    return tuple(tuple(x * inv % p for x in r) for r in A)


def rank_one_nilpotents(d: int, p: int) -> list[Matrix]:
    """Rank-one nilpotent matrices v w^T (w . v = 0) up to scalar."""
    lines = []
    for v in product(range(p), repeat=d + 1):
        first = next((x for x in v if x), 0)
        if first == 1:
            lines.append(v)
    out = set()
    for v in lines:
        for w in lines:
            if sum(a * b for a, b in zip(v, w)) % p == 0:
                out.add(tuple(tuple(a * b % p for b in w) for a in v))
    return sorted(out)


def locally_finite_directions(M: BaseModule, lo: int | None = None, hi: int | None = None
                              ) -> frozenset:
    """Rank-one nilpotents A with A^[n] v+ = 0 for every n in [lo, hi] (default [p, 2p+1])."""
    p = M.p
    lo = p if lo is None else lo
    hi = 2 * p + 1 if hi is None else hi
    v = M.extremal
    out = set()
    for A in rank_one_nilpotents(M.d, p):
        a, b = rank_one_factors(A, p)
        if all(not M.act_rank_one(a, b, n, {v: 1}, window=False) for n in range(lo, hi + 1)):
            out.add(A)
    return frozenset(out)


def summand_fingerprint(F: FGPModule, i: int, lf: frozenset) -> frozenset:
    """{E : g_i^-1 E g_i acts locally finitely on v+}, i.e. g_i LF(M) g_i^-1."""
    G = GF(F.p)
    g = F.reps[i]
    gi = mat_inv(G, g)
    return frozenset(_normalize(mat_mul(G, mat_mul(G, g, A), gi), F.p) for A in lf)


@dataclass
class NonIsoResult:
    passed: bool
    summands: int
    witness: tuple[int, int] | None
    lf_size: int


def pairwise_noniso_check(F: FGPModule, lf: frozenset | None = None) -> NonIsoResult:
    """Distinct annihilation fingerprints of the extremal vectors of all summands."""
    lf = locally_finite_directions(F.base) if lf is None else lf
    seen: dict[frozenset, int] = {}
    for i in range(len(F.reps)):
        fp = summand_fingerprint(F, i, lf)
        if fp in seen:
            return NonIsoResult(False, len(F.reps), (seen[fp], i), len(lf))
        seen[fp] = i
    return NonIsoResult(True, len(F.reps), None, len(lf))


def with_duplicate_summand(F: FGPModule, i: int = 0) -> FGPModule:
    """Negative control: the same twisted copy inserted twice."""
    return FGPModule(F.base, F.V, F.table, list(F.reps) + [F.reps[i]])


# --- simplicity probe ---------------------------------------------------------------------

class Echelon:
    """Sparse row echelon form over F_p; the pivot of a row is its largest key."""

    def __init__(self, p: int, order=lambda k: k):
        self.p = p
        self.order = order
        self.rows: dict = {}

    def reduce(self, vec: Mapping) -> dict:
        v = {k: c % self.p for k, c in vec.items() if c % self.p}
        while v:
            k = max(v, key=self.order)
            row = self.rows.get(k)
            if row is None:
                break
            f = v[k]
            for key, c in row.items():
                x = (v.get(key, 0) - f * c) % self.p
                if x:
                    v[key] = x
                else:
                    v.pop(key, None)
        return v

    def add(self, vec: Mapping) -> dict | None:
        """Insert vec; returns the new row, or None if vec was dependent."""
        v = self.reduce(vec)
        if not v:
            return None
        k = max(v, key=self.order)
        inv = inv_mod(v[k], self.p)
        row = {key: c * inv % self.p for key, c in v.items()}
        self.rows[k] = row
        return row

    def __len__(self) -> int:
        return len(self.rows)


def twisted_closure(F: FGPModule, vec: Mapping[Key, int], ns: Sequence[int],
                    max_dim: int = 4000) -> tuple[list[dict], int]:
    """Span of the hyperalgebra orbit of vec inside the window; applications
    leaving the window are censored. Returns (spanning rows, censored count)."""
    ech = Echelon(F.p)
    roots = [(a, b) for a in range(F.base.d + 1) for b in range(F.base.d + 1) if a != b]
    queue = [ech.add(vec)]
    censored = 0
    while queue:
        u = queue.pop()
        if u is None:
            continue
        for r in roots:
            for n in ns:
                try:
                    w = F.act_hyper(r, n, u)
                except TruncationOverflow:
                    censored += 1
                    continue
                if w:
                    row = ech.add(w)
                    if row is not None:
                        if len(ech) > max_dim:
                            raise RuntimeError("closure exceeds the dimension cap")
                        queue.append(row)
    return list(ech.rows.values()), censored


def single_summand_vector(rows: Sequence[dict], p: int, summand: int) -> dict | None:
    """A nonzero vector of the span supported in one summand, if any."""
    ech = Echelon(p, order=lambda k: (k[0] != summand, k))
    for r in rows:
        ech.add(r)
    for k, row in ech.rows.items():
        if k[0] == summand:
            return row
    return None


@dataclass
class ProbeReport:
    config: dict
    verified_window: dict
    trials: int
    failures: list
    negative_control: dict | None = None
    version: str = __version__

    @property
    def passed(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        return {"config": self.config, "verified_window": self.verified_window,
                "trials": self.trials, "failures": self.failures,
                "negative_control": self.negative_control, "passed": self.passed,
                "version": self.version}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


def _monomial_graph(M: BaseModule) -> tuple[set, set]:
    """(monomials reaching v+, monomials reached from v+) under root divided powers."""
    p = M.p
    ns = sorted(set(range(1, p + 1)) | {p ** e for e in range(1, 8) if p ** e <= 2 * M.W})
    roots = [(a, b) for a in range(M.d + 1) for b in range(M.d + 1) if a != b]
    basis = set(M.basis)
    succ: dict = {m: set() for m in basis}
    pred: dict = {m: set() for m in basis}
    for m in basis:
        for r in roots:
            for n in ns:
                try:
                    out = M.act_root(r, n, {m: 1})
                except TruncationOverflow:
                    continue
                for e in out:
                    succ[m].add(e)
                    pred[e].add(m)

    def bfs(start, edges):
        seen, stack = {start}, [start]
        while stack:
            for e in edges[stack.pop()]:
                if e not in seen:
                    seen.add(e)
                    stack.append(e)
        return seen

    v = M.extremal
    return bfs(v, pred), bfs(v, succ)


def _levi_generators(par: ParabolicData, p: int) -> list[Matrix]:
    """Generators of P(F_p) as seen by characters: torus with a primitive root, elementary
    unipotents of P, simple transpositions inside Levi blocks."""
    n = par.d + 1
    prim = primitive_root(p)
    gens = []
    for k in range(n):
        gens.append(tuple(tuple(prim if (r == c == k) else int(r == c) for c in range(n))
                          for r in range(n)))
    for a in range(n):
        for b in range(n):
            if a != b and in_parabolic(elementary(n, a, b, 1), par):
                gens.append(elementary(n, a, b, 1))
    for k in range(n - 1):
        if par.block_of[k] == par.block_of[k + 1]:
            w = list(range(n))
            w[k], w[k + 1] = k + 1, k
            gens.append(tuple(tuple(int(w[c] == r) for c in range(n)) for r in range(n)))
    return gens


def primitive_root(p: int) -> int:
    """Smallest generator of F_p^*."""
    factors = [r for r in range(2, p) if (p - 1) % r == 0 and is_prime(r)]
    return next(a for a in range(1, p) if all(pow(a, (p - 1) // r, p) != 1 for r in factors))


def _identity_summand(F: FGPModule) -> int:
    n = len(F.reps[0])
    return F.table.locate(identity_matrix(n))


def _to_identity(F: FGPModule, vec: Mapping[Key, int], i: int) -> dict[Key, int]:
    """g_i^-1 (delta_i x) = delta_e x, exactly."""
    G = GF(F.p)
    k, pe = F._coset_act(mat_inv(G, F.reps[i]), i)
    if pe != identity_matrix(len(pe)):
        raise AssertionError("coset representative of the identity coset is not 1")
    return {(k, m, c): a for (_, m, c), a in vec.items()}


class FGPProbe:
    """Simplicity probe for the induced module; caches facts about M and V."""

    def __init__(self, F: FGPModule, inner: int | None = None):
        self.F = F
        M = F.base
        self.p = M.p
        self.inner = max(2, M.W // 3) if inner is None else inner
        self.reach, self.reached = _monomial_graph(M)
        self.pool = [m for m in M.basis if all(abs(e) <= self.inner for e in m)]
        self.ident = _identity_summand(F)
        v = M.extremal
        self.gens = [g for g in _levi_generators(F.V.par, self.p)
                     if M.act_group(g, {v: 1}, window=False).get(v)]
        self.ns = list(range(1, self.p + 1))

    def span_E(self, vec: Mapping[Key, int]) -> Echelon:
        """Coefficient vectors e with delta_e v+ (x) e in the closure of an identity-summand vector."""
        ech = Echelon(self.p)
        comps: dict[Exps, dict[int, int]] = {}
        for (_, m, c), a in vec.items():
            comps.setdefault(m, {})[c] = a
        for m, e in comps.items():
            if m in self.reach:
                ech.add(e)
        changed = True
        while changed:
            changed = False
            for g in self.gens:
                for row in list(ech.rows.values()):
                    moved = {c: a * self.F.V.value(g, c, self.p, dual=True) % self.p
                             for c, a in row.items()}
                    if ech.add(moved) is not None:
                        changed = True
        return ech

    def run_trial(self, vec: Mapping[Key, int]) -> tuple[bool, int]:
        """(passed, censored applications)."""
        F = self.F
        summands = sorted({k[0] for k in vec})
        censored = 0
        if len(summands) == 1:
            single, i = dict(vec), summands[0]
        else:
            rows, censored = twisted_closure(F, vec, self.ns)
            single, i = None, None
            for s in summands:
                single = single_summand_vector(rows, self.p, s)
                if single:
                    i = s
                    break
            if not single:
                return False, censored
        ech = self.span_E(_to_identity(F, single, i))
        return len(ech) == F.V.dim, censored

    def random_vector(self, rng: random.Random, max_terms: int = 3,
                      chars: Sequence[int] | None = None) -> dict[Key, int]:
        chars = list(range(self.F.V.dim)) if chars is None else list(chars)
        out: dict[Key, int] = {}
        for _ in range(rng.randint(1, max_terms)):
            key = (rng.randrange(len(self.F.reps)), rng.choice(self.pool), rng.choice(chars))
            out[key] = rng.randrange(1, self.p)
        return out


def _witness(vec: Mapping[Key, int]) -> list:
    return [[i, list(m), c, a] for (i, m, c), a in sorted(vec.items())]


def simplicity_probe_fgp(F: FGPModule, trials: int, seed: int, max_terms: int = 3,
                         chars: Sequence[int] | None = None, inner: int | None = None
                         ) -> ProbeReport:
    """Deterministic randomized probe: every trial vector must generate, inside the
    window, the extremal vector of every summand tensored with all of V'.

    Trial t draws from random.Random(f"{seed}:{t}"), so verdicts do not depend on order.
    """
    require_p_gt_3(F.p, "the simplicity probe")
    probe = FGPProbe(F, inner)
    M = F.base
    failures, censored = [], 0
    for t in range(trials):
        rng = random.Random(f"{seed}:{t}")
        vec = probe.random_vector(rng, max_terms, chars)
        ok, cens = probe.run_trial(vec)
        censored += cens
        if not ok:
            failures.append(_witness(vec))
    basis = set(M.basis)
    config = {"d": M.d, "j": M.j, "p": M.p, "q": F.table.q, "W": M.W,
              "composition": list(F.V.par.composition), "simple_quotient": M.simple,
              "V": [list(e) for e in F.V.exponents], "summands": len(F.reps),
              "seed": seed, "max_terms": max_terms, "inner": probe.inner}
    window = {"W": M.W, "inner": probe.inner, "basis": len(basis),
              "reach_extremal": len(probe.reach & basis),
              "reached_from_extremal": len(probe.reached & basis),
              "censored": censored}
    return ProbeReport(config, window, trials, failures)


def reducible_control(F: FGPModule, trials: int, seed: int) -> dict:
    """Run the probe on vectors in the first character only: the submodule
    F(M, chi_0) is proper, so every trial must fail."""
    if F.V.dim < 2:
        raise ValueError("the control needs a reducible V")
    rep = simplicity_probe_fgp(F, trials, seed, chars=[0])
    return {"trials": trials, "failed": len(rep.failures),
            "submodule": {"character": list(F.V.exponents[0]),
                          "description": "sum over all summands of M tensor the first character"},
            "control_ok": len(rep.failures) == trials}


def diagonal_control(F: FGPModule, larger: ParabolicData) -> dict:
    """Negative control for a non-maximal parabolic.

    If a summand representative g_k lies in a larger parabolic under which M is
    still a module, delta_e v+ + delta_k g_k^-1 v+ spans a diagonal copy of M and
    no single-summand vector is reachable: the trial must fail.
    """
    G = GF(F.p)
    e = _identity_summand(F)
    ks = [k for k, g in enumerate(F.reps)
          if k != e and in_parabolic(g, larger) and all(sum(map(bool, r)) == 1 for r in g)]
    if not ks:
        raise ValueError("no summand representative inside the larger parabolic")
    k = ks[0]
    v = F.base.extremal
    moved = F.base.act_group(mat_inv(G, F.reps[k]), {v: 1}, window=False)
    vec = {(e, v, 0): 1}
    vec.update({(k, m, 0): c for m, c in moved.items()})
    ok, _ = FGPProbe(F).run_trial(vec)
    return {"vector": _witness(vec), "summands": [e, k], "trial_passed": ok,
            "control_ok": not ok, "representative": [list(r) for r in F.reps[k]]}


def kept_part_is_stable(M: BaseModule, gens: Sequence[Matrix] | None = None) -> list:
    """Check that the dropped monomials span a P-submodule (so the quotient action
    by truncation is well defined). Returns the offending (g, m) pairs."""
    if not M.simple:
        return []
    gens = _levi_generators(M.parabolic, M.p) if gens is None else gens
    full = BaseModule(M.d, M.j, M.p, M.W)
    bad = []
    for m in full.basis:
        if M.support(m):
            continue
        for g in gens:
            out = full.act_group(g, {m: 1}, window=False)
            if any(M.support(e) for e in out):
                bad.append((g, m))
    return bad


# --- smash-product compatibility ---------------------------------------------------------

def act_matrix_on(F: FGPModule, A: Matrix, n: int, vec: Mapping[Key, int],
                  window: bool = False) -> dict[Key, int]:
    """A^[n] for a rank-one nilpotent A, acting on summand i through g_i^-1 A g_i."""
    G = GF(F.p)
    out: dict[Key, int] = {}
    parts: dict[tuple[int, int], Vec] = {}
    for (i, m, c), a in vec.items():
        parts.setdefault((i, c), {})[m] = a
    for (i, c), x in parts.items():
        g = F.reps[i]
        v, w = rank_one_factors(mat_mul(G, mat_mul(G, mat_inv(G, g), A), g), F.p)
        for m, a in F.base.act_rank_one(v, w, n, x, window).items():
            out[(i, m, c)] = a
    return out


def group_generators(d: int, p: int) -> list[Matrix]:
    """Elementary unipotents, a primitive-root torus and the simple transpositions of GL_(d+1)."""
    n = d + 1
    prim = primitive_root(p)
    gens = [elementary(n, a, b, 1) for a in range(n) for b in range(n) if a != b]
    gens += [tuple(tuple(prim if r == c == k else int(r == c) for c in range(n))
                   for r in range(n)) for k in range(n)]
    for k in range(d):
        w = list(range(n))
        w[k], w[k + 1] = k + 1, k
        gens.append(tuple(tuple(int(w[c] == r) for c in range(n)) for r in range(n)))
    return gens


def smash_compatibility_check(F: FGPModule, ns: Sequence[int], basis: Sequence[Key],
                              gens: Sequence[Matrix] | None = None) -> list:
    """g (z m) = (Ad(g) z)(g m) for root divided powers z; returns mismatches."""
    G = GF(F.p)
    d = F.base.d
    gens = group_generators(d, F.p) if gens is None else gens
    bad = []
    for g in gens:
        gi = mat_inv(G, g)
        for root in [(a, b) for a in range(d + 1) for b in range(d + 1) if a != b]:
            E = unit_matrix(d, root)
            adE = mat_mul(G, mat_mul(G, g, E), gi)
            for n in ns:
                for key in basis:
                    lhs = F.act_group(g, act_matrix_on(F, E, n, {key: 1}), window=False)
                    rhs = act_matrix_on(F, adE, n, F.act_group(g, {key: 1}, window=False))
                    if lhs != {k: c for k, c in rhs.items() if c}:
                        bad.append((g, root, n, key))
    return bad


# --- exactness and transitivity -------------------------------------------------------------

def pole_graded_dims(basis: Iterable[Exps], j: int) -> dict[int, int]:
    """Dimensions by pole order -sum of the exponents X_(j+1..d), shifted to start at the
    minimal pole order d - j."""
    out: dict[int, int] = {}
    for m in basis:
        deg = -sum(m[j + 1:]) - (len(m) - 1 - j)
        out[deg] = out.get(deg, 0) + 1
    return dict(sorted(out.items()))


@dataclass
class Piece:
    """A term of an exact triple: graded dimensions of M and a coefficient module V."""

    dims: Mapping[int, int]
    V: CharacterSum


def _add(a: Mapping[int, int], b: Mapping[int, int]) -> dict[int, int]:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
    return {k: v for k, v in sorted(out.items()) if v}


def _scaled(piece: Piece) -> dict[int, int]:
    return {k: v * piece.V.dim for k, v in sorted(piece.dims.items()) if v}


def exactness_dims_check(triple: Sequence[Piece], subset, d: int, q: int) -> dict:
    """dims F(middle) = dims F(left) + dims F(right), degree by degree."""
    left, mid, right = triple
    if _scaled(mid) != _add(_scaled(left), _scaled(right)):
        raise ValueError("the source triple is not exact on dimensions")
    table = coset_table(d, q, ParabolicData.from_subset(subset, d).subset)
    out = []
    for piece in triple:
        F = FGPModule(None, piece.V, table)
        out.append(F.graded_dims(piece.dims))
    return {"left": out[0], "middle": out[1], "right": out[2], "summands": len(table),
            "passed": out[1] == _add(out[0], out[2])}


def exact_triples(d: int = 1, W: int = 12, p: int = 5) -> dict[str, tuple[Piece, ...]]:
    """The three desk triples: degenerate, split on V, and the reduced part of local
    cohomology with quotient H^d(P^d, O(-d-1)) along a point."""
    par = ParabolicData.from_subset(set(), d)
    triv = trivial(par)
    lc = BaseModule(d, 0, p, W).graded_dims()
    nblocks = len(par.composition)
    chi1 = CharacterSum(par, ((0,) * nblocks,))
    chi2 = CharacterSum(par, ((1,) + (0,) * (nblocks - 1),))
    both = CharacterSum(par, chi1.exponents + chi2.exponents)
    twist = -d - 1
    full = MonomialModule(LOCAL, d, p, W, 0, twist)
    red = reduced_part(full)
    top = [m for m in full.basis if not red.contains(m)]
    return {
        "degenerate": (Piece(lc, triv), Piece(lc, triv), Piece({}, triv)),
        "characters": (Piece(lc, chi1), Piece(lc, both), Piece(lc, chi2)),
        "reduced": (Piece(pole_graded_dims(red.basis, 0), triv),
                    Piece(pole_graded_dims(full.basis, 0), triv),
                    Piece(pole_graded_dims(top, 0), triv)),
    }


def transitivity_check(d: int, q: int, small, large, dims: Mapping[int, int]) -> dict:
    """F^G_P = F^G_Q F^Q_P on graded dimensions, plus the coset bijection
    gP -> (gQ, the P-coset of g_Q^-1 g in Q/P)."""
    Pp = ParabolicData.from_subset(small, d)
    Qp = ParabolicData.from_subset(large, d)
    if not Pp.subset <= Qp.subset:
        raise ValueError("P is not contained in Q")
    F = GF(q)
    tP = coset_table(d, q, Pp.subset)
    tQ = coset_table(d, q, Qp.subset)
    inner = [k for k, g in enumerate(tP.reps) if in_parabolic(g, Qp)]
    pairs = set()
    for g in tP.reps:
        i = tQ.locate(g)
        h = mat_mul(F, mat_inv(F, tQ.reps[i]), g)
        pairs.add((i, tP.locate(h)))
    direct = induce_graded(dims, Pp.subset, d, q)
    via = {k: v * len(tQ) for k, v in sorted(
        {k: v * len(inner) for k, v in dims.items()}.items()) if v}
    bijective = (len(pairs) == len(tP) == len(tQ) * len(inner)
                 and {b for _, b in pairs} <= set(inner))
    return {"index_P": len(tP), "index_Q": len(tQ), "index_Q_over_P": len(inner),
            "dims_direct": direct, "dims_composite": via, "bijection": bijective,
            "passed": bijective and direct == via}
