"""Divided-power differential operators on the big cell and their action.

An operator is a finite sum of terms c * prod T_r^a_r * prod y_r^[n_r], with
coefficient monomials always to the left of the derivatives. Variables are
labelled by negative roots (i, j), i < j.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import factorial
from typing import Iterable, Mapping, Sequence

from .rootsys import ParabolicData
from .scalars import binom_int, lucas_binom

Var = tuple[int, int]
Mono = tuple[tuple[Var, int], ...]  # sorted (variable, exponent) pairs, no zeros
Term = tuple[Mono, Mono]  # (coefficient monomial, derivative orders)
Poly = dict[Mono, int]


def mono(pairs: Mapping[Var, int] | Iterable[tuple[Var, int]]) -> Mono:
    items = pairs.items() if isinstance(pairs, Mapping) else pairs
    acc: dict[Var, int] = {}
    for v, e in items:
        acc[tuple(v)] = acc.get(tuple(v), 0) + e
    return tuple(sorted((v, e) for v, e in acc.items() if e))


def mono_mul(a: Mono, b: Mono) -> Mono:
    return mono(list(a) + list(b))


class QLevelError(ValueError):
    """No p-power up to the bound makes the operator linear."""


@dataclass(frozen=True)
class WeylOperator:
    p: int
    terms: tuple[tuple[Term, int], ...]  # sorted, coefficients in 1..p-1

    @classmethod
    def from_dict(cls, p: int, d: Mapping[Term, int]) -> "WeylOperator":
        return cls(p, tuple(sorted((t, c % p) for t, c in d.items() if c % p)))

    @classmethod
    def term(cls, p: int, T: Mapping[Var, int] | None = None,
             y: Mapping[Var, int] | None = None, c: int = 1) -> "WeylOperator":
        return cls.from_dict(p, {(mono(T or {}), mono(y or {})): c})

    @classmethod
    def zero(cls, p: int) -> "WeylOperator":
        return cls(p, ())

    def as_dict(self) -> dict[Term, int]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def order(self) -> int:
        return max((sum(n for _, n in y) for (_, y), _ in self.terms), default=0)

    @property
    def variables(self) -> list[Var]:
        vs = set()
        for (T, y), _ in self.terms:
            vs.update(v for v, _ in T)
            vs.update(v for v, _ in y)
        return sorted(vs)

    def __add__(self, other: "WeylOperator") -> "WeylOperator":
        d = self.as_dict()
        for t, c in other.terms:
            d[t] = d.get(t, 0) + c
        return WeylOperator.from_dict(self.p, d)

    def scale(self, c: int) -> "WeylOperator":
        return WeylOperator.from_dict(self.p, {t: c * a for t, a in self.terms})

    def __sub__(self, other: "WeylOperator") -> "WeylOperator":
        return self + other.scale(-1)

    def __matmul__(self, other: "WeylOperator") -> "WeylOperator":
        """Composition self o other, brought back to normal order."""
        p = self.p
        out: dict[Term, int] = {}
        for (T1, y1), c1 in self.terms:
            for (T2, y2), c2 in other.terms:
                for (Tm, ym), c in _commute(y1, T2, p):
                    t = (mono_mul(T1, Tm), mono_mul(ym, y2))
                    out[t] = out.get(t, 0) + c1 * c2 * c
        return WeylOperator.from_dict(p, out)

    def apply(self, f: Mapping[Mono, int]) -> Poly:
        out: Poly = {}
        for m, a in f.items():
            for t, c in self.terms:
                coef, m2 = apply_term(t, m, self.p)
                if coef:
                    out[m2] = (out.get(m2, 0) + a * c * coef) % self.p
        return {m: c for m, c in out.items() if c}

    def __str__(self) -> str:
        return format_operator(self)


def _commute(y: Mono, T: Mono, p: int) -> list[tuple[Term, int]]:
    """y^[n] T^a = sum_k C(a, k) T^(a-k) y^[n-k], one variable at a time."""
    ydict, Tdict = dict(y), dict(T)
    factors = []
    for v in sorted(set(ydict) | set(Tdict)):
        n, a = ydict.get(v, 0), Tdict.get(v, 0)
        opts = []
        for k in range(n + 1):
            c = lucas_binom(a, k, p)
            if c:
                opts.append(((v, a - k), (v, n - k), c))
        factors.append(opts)
    out = []
    for choice in product(*factors):
        c = 1
        for _, _, ck in choice:
            c = c * ck % p
        out.append(((mono([x[0] for x in choice]), mono([x[1] for x in choice])), c))
    return out


def apply_term(t: Term, m: Mono, p: int) -> tuple[int, Mono]:
    T, y = t
    md = dict(m)
    coef = 1
    for v, n in y:
        e = md.get(v, 0)
        coef = coef * lucas_binom(e, n, p) % p
        if not coef:
            return 0, m
        md[v] = e - n
    for v, a in T:
        md[v] = md.get(v, 0) + a
    return coef, mono(md)


def single(var: Var, e: int) -> Mono:
    return mono({var: e})


def laurent(var: Var, exps: Mapping[int, int]) -> Poly:
    return {single(var, e): c for e, c in exps.items() if c}


# --- text grammar -------------------------------------------------------------

_TERM_FACTOR = re.compile(r"^(T|y)\{\((\d+),\s*(\d+)\)\}(?:\^(\[?)(\d+)(\]?))?$")


def format_operator(op: WeylOperator) -> str:
    if op.is_zero():
        return "0"
    parts = []
    for (T, y), c in op.terms:
        fs = [str(c)]
        fs += [f"T{{({i},{j})}}^{a}" for (i, j), a in T]
        fs += [f"y{{({i},{j})}}^[{n}]" for (i, j), n in y]
        parts.append(" * ".join(fs))
    return " + ".join(parts)


def parse_operator(text: str, p: int) -> WeylOperator:
    """Parse 'c * T{(i,j)}^a * y{(i,j)}^[n] + ...'; factors compose left to right."""
    text = text.strip()
    if not text:
        raise ValueError("empty operator")
    total = WeylOperator.zero(p)
    for raw in _split_terms(text):
        op = WeylOperator.term(p)
        for f in (s.strip() for s in raw.split("*")):
            if re.fullmatch(r"[+-]?\d+", f):
                op = op.scale(int(f))
                continue
            m = _TERM_FACTOR.match(f)
            if not m:
                raise ValueError(f"cannot parse factor {f!r}")
            kind, i, j, br, e, br2 = m.groups()
            var = (int(i), int(j))
            if var[0] == var[1]:
                raise ValueError(f"({i},{j}) is not a root")
            e = 1 if e is None else int(e)
            if kind == "T":
                if br or br2:
                    raise ValueError(f"coefficient powers are plain: {f!r}")
                op = op @ WeylOperator.term(p, T={var: e})
            else:
                if bool(br) != bool(br2) or (e != 1 and not br):
                    raise ValueError(f"derivatives are divided powers y^[n]: {f!r}")
                op = op @ WeylOperator.term(p, y={var: e})
        total = total + op
    return total


def _split_terms(text: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch in "({[":
            depth += 1
        elif ch in ")}]":
            depth -= 1
        if ch == "+" and depth == 0 and cur.strip() and not cur.rstrip().endswith("*"):
            out.append(cur)
            cur = ""
        else:
            cur += ch
    out.append(cur)
    return out


# --- linearity level and membership -------------------------------------------

def commutes_with_power(op: WeylOperator, q: int) -> bool:
    for v in op.variables:
        mult = WeylOperator.term(op.p, T={v: q})
        if not ((op @ mult) - (mult @ op)).is_zero():
            return False
    return True


def q_linearity_level(op: WeylOperator, max_exp: int = 6) -> int:
    """Smallest q = p^s with op linear over F[T_r^q]."""
    q = 1
    for _ in range(max_exp + 1):
        if commutes_with_power(op, q):
            return q
        q *= op.p
    raise QLevelError(f"no q <= p^{max_exp} makes {op} linear")


@dataclass(frozen=True)
class Membership:
    accepted: bool
    q: int
    witness: tuple[Mono, Poly] | None = None
    reason: str = ""


def membership_D(op: WeylOperator, max_exp: int = 6) -> Membership:
    """Global-regularity test: constants go to constants and the box
    0 <= i < q lands in the box 0 <= j <= q."""
    q = q_linearity_level(op, max_exp)
    img = op.apply({(): 1})
    if any(m for m in img):
        return Membership(False, q, ((), img), "image of 1 is not constant")
    vs = op.variables
    for exps in product(range(q), repeat=len(vs)):
        m = mono(zip(vs, exps))
        img = op.apply({m: 1})
        for out in img:
            if any(not 0 <= e <= q for _, e in out):
                return Membership(False, q, (m, img), "image leaves the box")
    return Membership(True, q)


def two_chart_oracle(op: WeylOperator, bound: int | None = None) -> bool:
    """One-variable regularity: F[T] and F[T^-1] are both preserved."""
    vs = op.variables
    if len(vs) > 1:
        raise ValueError("the two-chart oracle handles a single variable")
    if not vs:
        return True
    v = vs[0]
    bound = bound if bound is not None else 2 * op.p ** 3
    for i in range(bound + 1):
        for m in op.apply({single(v, i): 1}):
            if dict(m).get(v, 0) < 0:
                return False
        for m in op.apply({single(v, -i): 1}):
            if dict(m).get(v, 0) > 0:
                return False
    return True


def membership_agreement(p: int, max_m: int | None = None, max_n: int | None = None,
                         random_sums: int = 200, seed: int = 0, var: Var = (0, 1)) -> dict:
    """Compare membership_D with the two-chart oracle on every one-variable term
    c T^m y^[n] (m <= p^2, n <= p) and on seeded random sums of such terms."""
    import random
    max_m = p * p if max_m is None else max_m
    max_n = p if max_n is None else max_n
    ops = [WeylOperator.term(p, T={var: m}, y={var: n})
           for m in range(max_m + 1) for n in range(max_n + 1)]
    rng = random.Random(f"{seed}:{p}")
    for _ in range(random_sums):
        op = WeylOperator.zero(p)
        for _ in range(rng.randint(2, 4)):
            op = op + WeylOperator.term(p, T={var: rng.randint(0, max_m)},
                                        y={var: rng.randint(0, max_n)}, c=rng.randint(1, p - 1))
        ops.append(op)
    disagree = [format_operator(op) for op in ops
                if membership_D(op).accepted != two_chart_oracle(op)]
    probes = {
        "T^(p-1) y^[p]": WeylOperator.term(p, T={var: p - 1}, y={var: p}),
        "T^2 y": WeylOperator.term(p, T={var: 2}, y={var: 1}),
        "T^p y": WeylOperator.term(p, T={var: p}, y={var: 1}),
    }
    verdicts = {k: membership_D(op).accepted for k, op in probes.items()}
    return {"p": p, "operators": len(ops), "disagreements": disagree, "named": verdicts,
            "passed": not disagree and verdicts == {"T^(p-1) y^[p]": True, "T^2 y": True,
                                                    "T^p y": False}}


# --- binomial identity ----------------------------------------------------------

def _euler_binomial_char0(n: int) -> dict[tuple[int, int], Fraction]:
    """C(T d/dT, n) = prod_{i<n} (T d - i) / n! as {(a, b): c} for c T^a d^b."""
    cur = {(0, 0): Fraction(1)}
    for i in range(n):
        nxt: dict[tuple[int, int], Fraction] = {}
        for (a, b), c in cur.items():
            # T^a d^b T d = T^(a+1) d^(b+1) + b T^a d^b
            nxt[(a + 1, b + 1)] = nxt.get((a + 1, b + 1), 0) + c
            nxt[(a, b)] = nxt.get((a, b), 0) + c * (b - i)
        cur = {k: c for k, c in nxt.items() if c}
    return {k: c / factorial(n) for k, c in cur.items()}


def euler_binomial(n: int, p: int, var: Var = (0, 1)) -> WeylOperator:
    """C(T y, n) reduced mod p, after checking the divided-power lift is integral."""
    out = {}
    for (a, b), c in _euler_binomial_char0(n).items():
        dp = c * factorial(b)  # d^b = b! y^[b]
        if dp.denominator != 1:
            raise ArithmeticError(f"non-integral coefficient {dp} at T^{a} y^[{b}]")
        out[(single(var, a), single(var, b))] = int(dp)
    return WeylOperator.from_dict(p, out)


def check_binom_identity(n: int, p: int, window: int, var: Var = (0, 1)) -> bool:
    lhs = euler_binomial(n, p, var)
    rhs = WeylOperator.term(p, T={var: n}, y={var: n})
    for m in range(-window, window + 1):
        f = {single(var, m): 1}
        if lhs.apply(f) != rhs.apply(f):
            return False
        expect = binom_int(m, n) % p
        if rhs.apply(f) != ({single(var, m): expect} if expect else {}):
            return False
    return True


# --- subalgebra families ----------------------------------------------------------

FAMILIES = ("D(P)", "D(U_P)", "D(U_P^-)", "D(L_P)", "D(T)")


@dataclass(frozen=True)
class SubalgebraFamily:
    label: str
    par: ParabolicData
    max_m: int
    max_n: int

    def __post_init__(self):
        if self.label not in FAMILIES:
            raise ValueError(f"unknown family {self.label!r}; expected one of {FAMILIES}")

    def pattern(self, var: Var, m: int, n: int) -> bool:
        """Literal generator conditions for T_var^m y_var^[n]."""
        levi = self.par.in_levi(var)
        if self.label == "D(P)":
            return (levi and m <= n) or m >= n
        if self.label == "D(U_P)":
            return not levi and m > n
        if self.label == "D(U_P^-)":
            return not levi and m < n
        if self.label == "D(L_P)":
            return levi and (m <= n or m > n)
        return m == n and var[1] == var[0] + 1


def negative_roots(d: int) -> list[Var]:
    return [(i, j) for i in range(d + 1) for j in range(i + 1, d + 1)]


def subalgebra_generators(family: SubalgebraFamily, p: int) -> list[WeylOperator]:
    """Pattern-matching T^m y^[n] within the bounds that pass membership_D.

    The identity (m = n = 0) is left out.
    """
    out = []
    for var in negative_roots(family.par.d):
        for n in range(family.max_n + 1):
            for m in range(family.max_m + 1):
                if (m, n) == (0, 0) or not family.pattern(var, m, n):
                    continue
                op = WeylOperator.term(p, T={var: m}, y={var: n})
                if membership_D(op).accepted:
                    out.append(op)
    return out


# --- realization on monomial modules ----------------------------------------------

@dataclass(frozen=True)
class MonomialOp:
    """X^m -> C(form . m, n) X^(m + delta): every generator used on P^d."""

    label: str
    form: tuple[int, ...]
    n: int
    delta: tuple[int, ...]

    def __call__(self, m: Sequence[int], p: int) -> tuple[int, tuple[int, ...]]:
        c = lucas_binom(sum(a * b for a, b in zip(self.form, m)), self.n, p)
        return c, tuple(a + b for a, b in zip(m, self.delta))


def _unit(d: int, k: int) -> list[int]:
    v = [0] * (d + 1)
    v[k] = 1
    return v


def root_op(d: int, root: Var, n: int) -> MonomialOp:
    """L_(i,j)^[n] = (X_i d/dX_j)^n / n!."""
    i, j = root
    delta = [0] * (d + 1)
    delta[i] += n
    delta[j] -= n
    return MonomialOp(f"L{{({i},{j})}}^[{n}]", tuple(_unit(d, j)), n, tuple(delta))


def torus_op(d: int, root: Var, n: int) -> MonomialOp:
    i, j = root
    form = _unit(d, i)
    form[j] -= 1
    return MonomialOp(f"C(h{{({i},{j})}},{n})", tuple(form), n, (0,) * (d + 1))


def realize(op: WeylOperator, d: int) -> MonomialOp:
    """A single term c T_(a,b)^t y_(a,b)^[n] acting on P^d monomials.

    T_(a,b) multiplies by X_b / X_a and y_(a,b) is L_(a,b); the scalar c
    must be 1.
    """
    if len(op.terms) != 1:
        raise ValueError("only single-term operators are realized on monomials")
    ((T, y), c), = op.terms
    vs = op.variables
    if c != 1 or len(vs) != 1:
        raise ValueError("realization needs a monic operator in one variable")
    a, b = vs[0]
    if not a < b:
        raise ValueError(f"coefficient variables are negative roots, got {(a, b)}")
    t, n = dict(T).get((a, b), 0), dict(y).get((a, b), 0)
    base = root_op(d, (a, b), n)
    delta = list(base.delta)
    delta[a] -= t
    delta[b] += t
    return MonomialOp(str(op), base.form, n, tuple(delta))


def p_powers(p: int, bound: int) -> list[int]:
    out, q = [], 1
    while q <= bound:
        out.append(q)
        q *= p
    return out


def hyperalgebra_ops(d: int, p: int, W: int) -> list[MonomialOp]:
    """Root divided powers L^[p^e] for every root and torus binomials."""
    ops = []
    for n in p_powers(p, 2 * W):
        for i in range(d + 1):
            for j in range(d + 1):
                if i != j:
                    ops.append(root_op(d, (i, j), n))
        for k in range(d):
            ops.append(torus_op(d, (k + 1, k), n))
    return ops


def downward_ops(d: int, p: int, W: int) -> list[MonomialOp]:
    """Accepted T^(n+1) y^[n] for every coefficient variable, n a power of p."""
    ops = []
    for var in negative_roots(d):
        for n in p_powers(p, 2 * W):
            op = WeylOperator.term(p, T={var: n + 1}, y={var: n})
            if membership_D(op).accepted:
                ops.append(realize(op, d))
    return ops


def full_ops(d: int, p: int, W: int) -> list[MonomialOp]:
    return hyperalgebra_ops(d, p, W) + downward_ops(d, p, W)


# --- closure -------------------------------------------------------------------------

@dataclass(frozen=True)
class ClosureResult:
    span: tuple[tuple[int, ...], ...]
    censored: int
    region: tuple[tuple[int, ...], ...]

    @property
    def missing(self) -> list[tuple[int, ...]]:
        s = set(self.span)
        return [m for m in self.region if m not in s]

    @property
    def complete(self) -> bool:
        return not self.missing


def weight_components(v) -> list[tuple[int, ...]]:
    """Monomials in the support of v.

    Weight spaces are lines spanned by monomials, and the torus binomials
    C(h, p^e) separate weights, so each component lies in the submodule
    generated by v.
    """
    if isinstance(v, Mapping):
        return sorted(m for m, c in v.items() if c)
    return [tuple(v)]


def generate_submodule(M, ops: Sequence[MonomialOp], seeds: Iterable,
                       region: Iterable | None = None) -> ClosureResult:
    """Fixed-point closure of the seeds under ops inside M's window.

    Applications that leave the window are counted as censored rather than
    followed, so the span is always a subset of the true submodule.
    """
    p = M.p
    start = []
    for s in seeds:
        for m in weight_components(s):
            if not M.contains(m):
                raise ValueError(f"seed {m} is not in the truncated module")
            start.append(m)
    seen = set(start)
    todo = sorted(seen)
    censored = 0
    while todo:
        m = todo.pop()
        for op in ops:
            c, m2 = op(m, p)
            if not c or m2 in seen or not M.support(m2):
                continue
            if not M.in_window(m2):
                censored += 1
                continue
            seen.add(m2)
            todo.append(m2)
    reg = M.basis if region is None else list(region)
    return ClosureResult(tuple(sorted(seen)), censored, tuple(sorted(reg)))


def generation_seeds(d: int, j: int) -> list[tuple[int, ...]]:
    from .monomod import _compositions
    return [head + (-1,) * (d - j) for head in _compositions(d - j, j + 1, d - j)]


def generation_ops(d: int, j: int, p: int) -> list[MonomialOp]:
    """L_a for a in the opposite radical, y^[p] and T^(p-1) L^[p] on every variable."""
    ops = [root_op(d, (a, b), 1) for a in range(j + 1) for b in range(j + 1, d + 1)]
    for var in negative_roots(d):
        ops.append(root_op(d, var, p))
        op = WeylOperator.term(p, T={var: p - 1}, y={var: p})
        if membership_D(op).accepted:
            ops.append(realize(op, d))
    return ops


def check_generation(d: int, j: int, p: int, W: int) -> ClosureResult:
    from .monomod import local_cohomology
    M = local_cohomology(d, j, W, p)
    return generate_submodule(M, generation_ops(d, j, p), generation_seeds(d, j))


# --- simplicity probe ------------------------------------------------------------------

@dataclass(frozen=True)
class ProbeResult:
    passed: bool
    trials: int
    failures: tuple
    censored: int

    def as_dict(self) -> dict:
        return {"passed": self.passed, "trials": self.trials,
                "failures": [list(map(list, f)) for f in self.failures],
                "censored": self.censored}


def random_vector(rng, pool: Sequence[tuple[int, ...]], p: int, max_terms: int = 3) -> dict:
    k = rng.randint(1, min(max_terms, len(pool)))
    return {m: rng.randint(1, p - 1) for m in rng.sample(list(pool), k)}


def simplicity_probe(M, ops: Sequence[MonomialOp], target: Sequence[int], trials: int,
                     seed: int = 0, pool: Sequence | None = None) -> ProbeResult:
    """Every random nonzero vector must generate the target monomial.

    Trial t draws from random.Random(f"{seed}:{t}"), independent of the other trials.
    """
    import random
    pool = sorted(pool if pool is not None else M.basis)
    target = tuple(target)
    cache: dict[tuple[int, ...], tuple[bool, int]] = {}
    failures, censored = [], 0
    for t in range(trials):
        v = random_vector(random.Random(f"{seed}:{t}"), pool, M.p)
        ok = False
        for m in weight_components(v):
            if m not in cache:
                res = generate_submodule(M, ops, [m])
                cache[m] = (target in set(res.span), res.censored)
            hit, cens = cache[m]
            censored += cens
            ok = ok or hit
        if not ok:
            failures.append(tuple(sorted(v)))
    return ProbeResult(not failures, trials, tuple(failures), censored)
