"""GL_{d+1}(F_q): enumeration, parabolic cosets, Steinberg dimensions and
the substitution action on local cohomology."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from itertools import product
from typing import Mapping, Sequence

from .monomod import TruncationOverflow, in_local_cohomology
from .rootsys import ParabolicData, inversion_roots, minimal_coset_reps
from .scalars import GF, divided_multinomial, lucas_binom, prime_power

Matrix = tuple[tuple[int, ...], ...]
DEFAULT_CEILING = 10 ** 6


class CeilingExceeded(RuntimeError):
    pass


# --- matrices over GF(q) -----------------------------------------------------------

def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def mat_mul(F: GF, a: Matrix, b: Matrix) -> Matrix:
    n, m, k = len(a), len(b[0]), len(b)
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            s = 0
            for t in range(k):
                if a[i][t] and b[t][j]:
                    s = F.add(s, F.mul(a[i][t], b[t][j]))
            row.append(s)
        out.append(tuple(row))
    return tuple(out)


def mat_inv(F: GF, a: Matrix) -> Matrix:
    n = len(a)
    rows = [list(a[i]) + list(identity_matrix(n)[i]) for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if rows[r][c]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        rows[c], rows[piv] = rows[piv], rows[c]
        inv = F.inv(rows[c][c])
        rows[c] = [F.mul(inv, x) for x in rows[c]]
        for r in range(n):
            if r != c and rows[r][c]:
                f = rows[r][c]
                rows[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[r], rows[c])]
    return tuple(tuple(r[n:]) for r in rows)


def rref(F: GF, vecs: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """Reduced row echelon form of the span, zero rows dropped."""
    rows = [list(v) for v in vecs]
    out, col = [], 0
    width = len(rows[0]) if rows else 0
    for col in range(width):
        piv = next((r for r in range(len(rows)) if rows[r][col]), None)
        if piv is None:
            continue
        pr = rows.pop(piv)
        inv = F.inv(pr[col])
        pr = [F.mul(inv, x) for x in pr]
        for r in range(len(rows)):
            if rows[r][col]:
                f = rows[r][col]
                rows[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[r], pr)]
        for k in range(len(out)):
            if out[k][col]:
                f = out[k][col]
                out[k] = [F.sub(x, F.mul(f, y)) for x, y in zip(out[k], pr)]
        out.append(pr)
    return tuple(tuple(r) for r in out)


def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    return len(rref(GF(p), [[x % p for x in r] for r in rows])) if rows else 0


def is_invertible(F: GF, a: Matrix) -> bool:
    return len(rref(F, a)) == len(a)


def permutation_matrix(w: Sequence[int]) -> Matrix:
    """Sends e_k to e_{w[k]}."""
    n = len(w)
    return tuple(tuple(int(w[k] == i) for k in range(n)) for i in range(n))


def elementary(n: int, i: int, j: int, a: int) -> Matrix:
    """1 + a E_ij."""
    return tuple(tuple(int(r == c) + (a if (r, c) == (i, j) else 0) for c in range(n))
                 for r in range(n))


@dataclass(frozen=True)
class GroupElement:
    q: int
    rows: Matrix

    def __post_init__(self):
        if not is_invertible(GF(self.q), self.rows):
            raise ValueError("matrix is not invertible")

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.q, mat_mul(GF(self.q), self.rows, other.rows))

    def inverse(self) -> "GroupElement":
        return GroupElement(self.q, mat_inv(GF(self.q), self.rows))

    def encode(self) -> bytes:
        return bytes(x for r in self.rows for x in r)


# --- orders and enumeration -----------------------------------------------------------

def group_order(d: int, q: int) -> int:
    n, out = d + 1, 1
    for i in range(n):
        out *= q ** n - q ** i
    return out


def enumerate_group(d: int, q: int, ceiling: int = DEFAULT_CEILING) -> list[Matrix]:
    if group_order(d, q) > ceiling:
        raise CeilingExceeded(f"|GL_{d + 1}(F_{q})| exceeds {ceiling}")
    F, n = GF(q), d + 1
    out = []
    for entries in product(range(q), repeat=n * n):
        m = tuple(tuple(entries[i * n:(i + 1) * n]) for i in range(n))
        if is_invertible(F, m):
            out.append(m)
    return out


def in_parabolic(m: Matrix, par: ParabolicData) -> bool:
    """Block lower triangular: entry (r, c) vanishes when block(r) < block(c)."""
    b = par.block_of
    return all(not m[r][c] for r in range(len(m)) for c in range(len(m)) if b[r] < b[c])


def bruhat_count(par: ParabolicData, q: int) -> int:
    return sum(q ** len(inversion_roots(w)) for w in minimal_coset_reps(par))


# --- cosets -----------------------------------------------------------------------------

def coset_key(F: GF, m: Matrix, par: ParabolicData) -> tuple:
    """gP is determined by the spans of the columns in blocks >= r, r >= 1."""
    cols = list(zip(*m))
    key = []
    for blk in par.blocks[1:]:
        key.append(rref(F, cols[blk.start:]))
    return tuple(key)


@dataclass
class CosetTable:
    d: int
    q: int
    par: ParabolicData
    reps: list[Matrix]
    index: dict[tuple, int]

    def __len__(self) -> int:
        return len(self.reps)

    def locate(self, g: Matrix) -> int:
        return self.index[coset_key(GF(self.q), g, self.par)]

    def act(self, g: Matrix, i: int) -> tuple[int, Matrix]:
        """g g_i = g_k p; returns (k, p) with p in P."""
        F = GF(self.q)
        h = mat_mul(F, g, self.reps[i])
        k = self.locate(h)
        return k, mat_mul(F, mat_inv(F, self.reps[k]), h)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        n = self.d + 1
        w.writerow(["index"] + [f"g{r}{c}" for r in range(n) for c in range(n)])
        for i, m in enumerate(self.reps):
            w.writerow([i] + [x for r in m for x in r])
        return buf.getvalue()


def coset_table(d: int, q: int, subset, ceiling: int = DEFAULT_CEILING) -> CosetTable:
    """Representatives u w of G/P_I with u running over U cap w U^- w^-1."""
    F = GF(q)
    par = ParabolicData.from_subset(subset, d)
    if bruhat_count(par, q) > ceiling:
        raise CeilingExceeded(f"|G/P| exceeds {ceiling}")
    n = d + 1
    reps, index = [], {}
    for w in minimal_coset_reps(par):
        roots = inversion_roots(w)
        pw = permutation_matrix(w)
        for vals in product(range(q), repeat=len(roots)):
            u = identity_matrix(n)
            for (i, j), a in zip(roots, vals):
                if a:
                    u = mat_mul(F, u, elementary(n, i, j, a))
            g = mat_mul(F, u, pw)
            key = coset_key(F, g, par)
            if key in index:
                raise AssertionError("Bruhat representatives collide")
            index[key] = len(reps)
            reps.append(g)
    return CosetTable(d, q, par, reps, index)


# --- Steinberg dimensions ---------------------------------------------------------------

def steinberg_dim(n: int, q: int) -> int:
    return q ** (n * (n - 1) // 2)


def steinberg_alternating(n: int, q: int) -> int:
    """sum over I of (-1)^|I| [G : P_I], from Bruhat counts."""
    d = n - 1
    total = 0
    for bits in product((0, 1), repeat=d):
        sub = {k for k in range(d) if bits[k]}
        total += (-1) ** len(sub) * bruhat_count(ParabolicData.from_subset(sub, d), q)
    return total


def generalized_steinberg_dim(composition: Sequence[int], q: int,
                              ceiling: int = DEFAULT_CEILING) -> int:
    """dim of Ind_P(1) / sum_{Q > P} Ind_Q(1), by a rank over F_p."""
    p, _ = prime_power(q)
    d = sum(composition) - 1
    par = ParabolicData(d, tuple(composition))
    table = coset_table(d, q, par.subset, ceiling)
    F = GF(q)
    rows = []
    for k in range(d):
        if k in par.subset:
            continue
        big = ParabolicData.from_subset(par.subset | {k}, d)
        labels: dict[tuple, int] = {}
        col = [labels.setdefault(coset_key(F, g, big), len(labels)) for g in table.reps]
        for lab in range(len(labels)):
            rows.append([int(c == lab) for c in col])
    return len(table) - rank_mod_p(rows, p)


def induce_graded(dims: Mapping[int, int], subset, d: int, q: int) -> dict[int, int]:
    index = bruhat_count(ParabolicData.from_subset(subset, d), q)
    return {k: index * v for k, v in sorted(dims.items()) if v}


# --- substitution action on local cohomology --------------------------------------------

Vector = dict[tuple[int, ...], int]


def _power_of_form(col: Sequence[int], e: int, pivot: int, p: int, budget: Mapping[int, int]
                   ) -> list[tuple[int, tuple[int, ...]]]:
    """(sum_i col[i] X_i)^e expanded around X_pivot, as (coef, exps) pairs.

    budget[i] caps the power of X_i (higher powers would kill the term).
    A negative e needs a cap on every other variable.
    """
    n = len(col)
    a = col[pivot] % p
    if not a:
        raise ValueError("expansion pivot has a zero coefficient")
    others = [i for i in range(n) if i != pivot and col[i] % p]
    if e < 0 and any(i not in budget for i in others):
        raise ValueError("negative power of a form with an uncapped variable")
    caps = [min(budget.get(i, e), e) if e >= 0 else budget[i] for i in others]
    inv_a = pow(a, p - 2, p)
    ratios = [col[i] * inv_a % p for i in others]
    base = pow(a, e, p) if e >= 0 else pow(inv_a, -e, p)
    out = []
    for ks in product(*(range(c + 1) for c in caps)):
        s = sum(ks)
        if e >= 0 and s > e:
            continue
        c = lucas_binom(e, s, p) * divided_multinomial(ks, p) % p
        if not c:
            continue
        c = c * base % p
        for r, k in zip(ratios, ks):
            c = c * pow(r, k, p) % p
        if not c:
            continue
        exps = [0] * n
        exps[pivot] = e - s
        for i, k in zip(others, ks):
            exps[i] += k
        out.append((c, tuple(exps)))
    return out


def act_lower_triangular(g: Matrix, v: Mapping[tuple[int, ...], int], j: int, p: int,
                         W: int | None = None, twist: int = 0, reduced: bool = True) -> Vector:
    """f(X) -> f(X g) for lower triangular g on H^{d-j}_{P^j}(O(twist)) over F_p.

    Column k of g gives the form sum_{i >= k} g_ik X_i, expanded around X_k.
    Pole columns go first, from the last one down, so a pole variable that
    has received its own factor only gains powers; once its exponent is
    >= 0 the term is zero and is dropped.
    """
    d = len(g) - 1
    if any(g[r][c] % p for r in range(d + 1) for c in range(r + 1, d + 1)):
        raise ValueError("matrix is not lower triangular")
    cols = list(zip(*g))
    order = list(range(d, j, -1)) + list(range(j, -1, -1))
    out: Vector = {}
    for m, c0 in v.items():
        terms = {(0,) * (d + 1): c0 % p}
        done: list[int] = []
        for k in order:
            if k > j:
                done.append(k)
            nxt: dict = {}
            for exps, c in terms.items():
                budget = {i: -exps[i] - 1 for i in done if i != k}
                for c2, e2 in _power_of_form(cols[k], m[k], k, p, budget):
                    new = tuple(x + y for x, y in zip(exps, e2))
                    if any(new[i] >= 0 for i in done):
                        continue
                    nxt[new] = (nxt.get(new, 0) + c * c2) % p
            terms = {e: x for e, x in nxt.items() if x}
        for exps, c in terms.items():
            if not in_local_cohomology(exps, j, twist, reduced):
                continue
            if W is not None and any(abs(e) > W for e in exps):
                raise TruncationOverflow(exps, W)
            out[exps] = (out.get(exps, 0) + c) % p
    return {e: c for e, c in out.items() if c}


def lower_monomial_lower(F: GF, g: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """g = L1 M L2 with L1, L2 lower unitriangular and M monomial."""
    n = len(g)
    a = [list(r) for r in g]
    left, right = identity_matrix(n), identity_matrix(n)
    used: set[int] = set()
    for r in range(n):
        c = max(k for k in range(n) if a[r][k] and k not in used)
        used.add(c)
        inv = F.inv(a[r][c])
        for s in range(r + 1, n):
            if a[s][c]:
                f = F.neg(F.mul(a[s][c], inv))
                a[s] = [F.add(x, F.mul(f, y)) for x, y in zip(a[s], a[r])]
                left = mat_mul(F, elementary(n, s, r, f), left)
        for k in range(c):
            if a[r][k]:
                f = F.neg(F.mul(a[r][k], inv))
                for t in range(n):
                    a[t][k] = F.add(a[t][k], F.mul(f, a[t][c]))
                right = mat_mul(F, right, elementary(n, c, k, f))
    M = tuple(tuple(r) for r in a)
    return mat_inv(F, left), M, mat_inv(F, right)


def act_monomial_matrix(g: Matrix, v: Mapping[tuple[int, ...], int], p: int,
                        poles: Sequence[int] = ()) -> Vector:
    """f(X g) for g with one nonzero entry per column.

    Local cohomology classes are alternating in the pole variables, so a
    permutation of the pole block contributes its sign.
    """
    n = len(g)
    image = [next(r for r in range(n) if g[r][k] % p) for k in range(n)]
    sign = _perm_sign([image[k] for k in poles]) if poles else 1
    out: Vector = {}
    for m, c in v.items():
        exps = [0] * n
        coef = c * sign % p
        for k in range(n):
            i = image[k]
            exps[i] += m[k]
            a = g[i][k] % p
            coef = coef * (pow(a, m[k], p) if m[k] >= 0 else pow(pow(a, p - 2, p), -m[k], p)) % p
        key = tuple(exps)
        out[key] = (out.get(key, 0) + coef) % p
    return {e: c for e, c in out.items() if c}


def parabolic_action_on_localcohomology(g: Matrix, v, d: int, j: int, p: int,
                                        W: int | None = None, twist: int = 0,
                                        reduced: bool = True) -> Vector:
    """The substitution action f(X) -> f(X g) of g in P_(j+1, d-j) over F_p."""
    if isinstance(v, tuple):
        v = {v: 1}
    par = ParabolicData(d, (j + 1, d - j))
    g = tuple(tuple(x % p for x in r) for r in g)
    if not in_parabolic(g, par):
        raise ValueError(f"element does not lie in P_{par.composition}")
    F = GF(p)
    L1, M, L2 = lower_monomial_lower(F, g)
    kw = dict(W=W, twist=twist, reduced=reduced)
    w = act_lower_triangular(L2, v, j, p, **kw)
    w = {e: c for e, c in act_monomial_matrix(M, w, p, range(j + 1, d + 1)).items()
         if in_local_cohomology(e, j, twist, reduced)}
    return act_lower_triangular(L1, w, j, p, **kw)


def _perm_sign(seq: Sequence[int]) -> int:
    inv = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
    return -1 if inv % 2 else 1
