"""Laurent-monomial weight modules over F_p with the divided-power action.

A monomial X_0^n_0 ... X_d^n_d is stored as its exponent tuple, which is
also its weight. Vectors are sparse dicts exponent -> residue mod p.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from . import conventions as cv
from .rootsys import ParabolicData, Root
from .scalars import lucas_binom

Exps = tuple[int, ...]
Vector = dict[Exps, int]

TORUS = "torus"
LOCAL = "local_cohomology"
REDUCED = "reduced_local_cohomology"
POLY = "polynomial"
FLAVORS = (TORUS, LOCAL, REDUCED, POLY)


class TruncationOverflow(Exception):
    """An action produced a nonzero term outside the truncation window."""

    def __init__(self, exps: Exps, window: int):
        super().__init__(f"monomial {exps} leaves the window W={window}")
        self.exps = exps
        self.window = window


class DividedPowerGenerator(NamedTuple):
    """kind 'x' (raising), 'y' (lowering) or 'h' (torus binomial C(h_root, n)).

    For 'x' and 'y' the root is the weight of the operator, so ('y', (0, 1), n)
    is L_(0,1)^[n].
    """

    kind: str
    root: tuple[int, int]
    n: int

    def check(self) -> None:
        if self.n < 0:
            raise ValueError("divided-power order must be >= 0")
        i, j = self.root
        if i == j:
            raise ValueError(f"{self.root} is not a root")
        if self.kind == "x" and not cv.is_positive(self.root):
            raise ValueError(f"raising generator needs a positive root, got {self.root}")
        if self.kind == "y" and cv.is_positive(self.root):
            raise ValueError(f"lowering generator needs a negative root, got {self.root}")
        if self.kind not in ("x", "y", "h"):
            raise ValueError(f"unknown generator kind {self.kind!r}")

    @property
    def shift(self) -> tuple[int, int, int]:
        """(i, j, n): the weight moves by n (e_i - e_j); zero for torus generators."""
        if self.kind == "h":
            return (0, 0, 0)
        return (self.root[0], self.root[1], self.n)


def root_operator(root: Sequence[int], n: int = 1) -> DividedPowerGenerator:
    """The generator L_root^[n] with kind read off from the Borel convention."""
    r = (int(root[0]), int(root[1]))
    return DividedPowerGenerator("x" if cv.is_positive(r) else "y", r, n)


def torus_binom(root: Sequence[int], n: int) -> DividedPowerGenerator:
    return DividedPowerGenerator("h", (int(root[0]), int(root[1])), n)


# --- single-monomial actions (no window) ------------------------------------

def shift_exps(m: Sequence[int], i: int, j: int, n: int) -> Exps:
    out = list(m)
    out[i] += n
    out[j] -= n
    return tuple(out)


def act_root(gamma: Sequence[int], m: Sequence[int], p: int) -> tuple[int, Exps]:
    """L_(i,j) X^m = m_j X^(m + e_i - e_j); coefficient reduced mod p."""
    i, j = gamma
    return m[j] % p, shift_exps(m, i, j, 1)


def act_divided(gamma: Sequence[int], n: int, m: Sequence[int], p: int) -> tuple[int, Exps]:
    i, j = gamma
    return lucas_binom(m[j], n, p), shift_exps(m, i, j, n)


def act_torus(t: Sequence[int], m: Sequence[int], p: int) -> int:
    """Scalar of the Lie-algebra torus element diag(t) on X^m."""
    return sum(a * b for a, b in zip(t, m)) % p


def act_torus_binom(alpha: Sequence[int], n: int, m: Sequence[int], p: int) -> int:
    i, j = alpha
    return lucas_binom(m[i] - m[j], n, p)


def act_generator(g: DividedPowerGenerator, m: Sequence[int], p: int) -> tuple[int, Exps]:
    if g.kind == "h":
        return act_torus_binom(g.root, g.n, m, p), tuple(m)
    return act_divided(g.root, g.n, m, p)


def iterate_oracle(gamma: Sequence[int], n: int, m: Sequence[int], p: int) -> tuple[int, Exps]:
    """Apply L_gamma n times over Z, divide by n!, reduce: the slow reference."""
    i, j = gamma
    coeff, cur = 1, tuple(m)
    for _ in range(n):
        coeff *= cur[j]
        cur = shift_exps(cur, i, j, 1)
    fact = 1
    for k in range(2, n + 1):
        fact *= k
    assert coeff % fact == 0
    return (coeff // fact) % p, cur


# --- bases --------------------------------------------------------------------

def _check_dj(d: int, j: int) -> None:
    if d < 1 or not 0 <= j <= d - 1:
        raise ValueError(f"need d >= 1 and 0 <= j <= d-1, got d={d}, j={j}")


def in_local_cohomology(m: Sequence[int], j: int, twist: int = 0, reduced: bool = True) -> bool:
    """Support test for H^{d-j}_{P^j}(O(twist)) (or its reduced part).

    The first block X_0..X_j carries no poles, the second block only poles.
    For j = 0 with a twist the unreduced module lets n_0 go negative.
    """
    if sum(m) != twist:
        return False
    if any(e >= 0 for e in m[j + 1:]):
        return False
    if j == 0 and not reduced:
        return True
    return all(e >= 0 for e in m[:j + 1])


def _box(d: int, W: int) -> Iterator[Exps]:
    return product(range(-W, W + 1), repeat=d + 1)


def local_cohomology_basis(d: int, j: int, W: int, twist: int = 0, reduced: bool = True
                           ) -> list[Exps]:
    """Monomials of H^{d-j}_{P^j}(O(twist)) with every |n_i| <= W, sorted."""
    _check_dj(d, j)
    if W < 0:
        raise ValueError("window must be >= 0")
    if twist < 0 and j > 0:
        raise ValueError("negative twists are only supported along a point (j = 0)")
    out = []
    # enumerate the pole block and solve for the last free exponent
    for tail in product(range(-W, 0), repeat=d - j):
        s = twist - sum(tail)
        for head in _compositions(s, j + 1, W, allow_negative=(j == 0 and not reduced)):
            out.append(head + tail)
    out.sort()
    return out


def _compositions(total: int, parts: int, W: int, allow_negative: bool = False
                  ) -> Iterator[tuple[int, ...]]:
    lo = -W if allow_negative else 0
    if parts == 1:
        if lo <= total <= W:
            yield (total,)
        return
    for first in range(lo, W + 1):
        for rest in _compositions(total - first, parts - 1, W, allow_negative):
            yield (first,) + rest


def torus_basis(d: int, W: int, degree: int = 0) -> list[Exps]:
    return sorted(m for m in _box(d, W) if sum(m) == degree)


def polynomial_basis(d: int, degree: int) -> list[Exps]:
    return sorted(_compositions(degree, d + 1, degree)) if degree >= 0 else []


def serre_dual_basis(d: int, twist: int) -> list[Exps]:
    """Monomials of H^d(P^d, O(twist)): all exponents negative."""
    return sorted(tuple(-e - 1 for e in c) for c in polynomial_basis(d, -twist - d - 1))


def highest_weight_vector(d: int, j: int) -> Exps:
    """X_j^(d-j) X_{j+1}^-1 ... X_d^-1, the extremal vector along P^j."""
    _check_dj(d, j)
    return tuple([0] * j + [d - j] + [-1] * (d - j))


# --- modules ------------------------------------------------------------------

@dataclass(frozen=True)
class MonomialModule:
    """A truncated monomial module: a flavor plus a window.

    Elements are sparse vectors supported on `basis`. Monomials that fall
    outside the support condition are zero (quotient relations); monomials
    that satisfy it but leave the window raise TruncationOverflow.
    """

    flavor: str
    d: int
    p: int
    W: int
    j: int = 0
    twist: int = 0

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {self.flavor!r}")
        if self.flavor in (LOCAL, REDUCED):
            _check_dj(self.d, self.j)

    def support(self, m: Sequence[int]) -> bool:
        if self.flavor == TORUS:
            return sum(m) == self.twist
        if self.flavor == POLY:
            return sum(m) == self.twist and all(e >= 0 for e in m)
        return in_local_cohomology(m, self.j, self.twist, reduced=self.flavor == REDUCED)

    def in_window(self, m: Sequence[int]) -> bool:
        return all(-self.W <= e <= self.W for e in m)

    @property
    def basis(self) -> list[Exps]:
        return _basis_cached(self)

    def contains(self, m: Sequence[int]) -> bool:
        return self.support(m) and self.in_window(m)

    def apply(self, g: DividedPowerGenerator, v: Mapping[Exps, int]) -> Vector:
        p = self.p
        out: Vector = {}
        for m, c in v.items():
            a, m2 = act_generator(g, m, p)
            if not a or not self.support(m2):
                continue
            if not self.in_window(m2):
                raise TruncationOverflow(m2, self.W)
            val = (out.get(m2, 0) + a * c) % p
            if val:
                out[m2] = val
            else:
                out.pop(m2, None)
        return out

    def apply_word(self, gens: Iterable[DividedPowerGenerator], v: Mapping[Exps, int]) -> Vector:
        """Apply gens right to left, as an operator product is written."""
        out = dict(v)
        for g in reversed(list(gens)):
            out = self.apply(g, out)
        return out

    def weight_spaces(self) -> dict[Exps, int]:
        return {m: 1 for m in self.basis}

    def dump(self) -> str:
        lines = [f"# d={self.d} j={self.j} W={self.W} p={self.p}"]
        lines += [" ".join(str(e) for e in m) for m in self.basis]
        return "\n".join(lines) + "\n"


_BASIS_CACHE: dict[MonomialModule, list[Exps]] = {}


def _basis_cached(M: MonomialModule) -> list[Exps]:
    if M not in _BASIS_CACHE:
        if M.flavor in (LOCAL, REDUCED):
            if M.twist < 0 and M.j > 0:
                raise ValueError("negative twists are only supported along a point (j = 0)")
            b = local_cohomology_basis(M.d, M.j, M.W, M.twist, reduced=M.flavor == REDUCED)
        elif M.flavor == TORUS:
            b = torus_basis(M.d, M.W, M.twist)
        else:
            b = [m for m in polynomial_basis(M.d, M.twist) if M.in_window(m)]
        _BASIS_CACHE[M] = b
    return _BASIS_CACHE[M]


def local_cohomology(d: int, j: int, W: int, p: int, twist: int = 0) -> MonomialModule:
    return MonomialModule(LOCAL, d, p, W, j, twist)


def reduced_part(M: MonomialModule) -> MonomialModule:
    """Kernel of H^{d-j}_{P^j}(O(m)) -> H^{d-j}(P^d, O(m)).

    The target only survives for j = 0, where it is spanned by the monomials
    with every exponent negative; the kernel drops exactly those.
    """
    if M.flavor == REDUCED:
        return M
    if M.flavor != LOCAL:
        raise ValueError(f"reduced part is defined for local cohomology, not {M.flavor}")
    return MonomialModule(REDUCED, M.d, M.p, M.W, M.j, M.twist)


def reduced_cokernel_dim(M: MonomialModule) -> int:
    """How many window monomials reduced_part drops."""
    return len(M.basis) - len(reduced_part(M).basis)


# --- pairing and graded duals -------------------------------------------------

def pairing(u: Mapping[Sequence[int], int], f: Mapping[Sequence[int], int],
            par: ParabolicData | None = None) -> int:
    """<prod y_g^[n_g], prod t_g^m_g> in the dual-basis normalization.

    Both arguments map roots of the opposite radical to exponents.
    """
    u = {tuple(r): n for r, n in u.items() if n}
    f = {tuple(r): n for r, n in f.items() if n}
    if par is not None:
        allowed = {tuple(r) for r in par.opposite_radical_roots()}
        bad = (set(u) | set(f)) - allowed
        if bad:
            raise ValueError(f"roots {sorted(bad)} are not in the opposite radical")
    return 1 if u == f else 0


def radical_monomials(par: ParabolicData, degree: int) -> list[dict[Root, int]]:
    """Exponent assignments on the opposite radical with total order <= degree."""
    roots = sorted(par.opposite_radical_roots())
    out = []
    for exps in product(range(degree + 1), repeat=len(roots)):
        if sum(exps) <= degree:
            out.append(dict(zip(roots, exps)))
    return out


def gram_matrix(par: ParabolicData, degree: int) -> list[list[int]]:
    mons = radical_monomials(par, degree)
    return [[pairing(u, f, par) for f in mons] for u in mons]


@dataclass(frozen=True)
class GradedDual:
    """Weight-space-wise dual of a monomial module, labelled by the source weight.

    The dual vector phi_m sits in weight -m; generators act through the
    antipode: x^[n] -> (-1)^n x^[n], C(h, n) -> C(-h, n).
    """

    source: MonomialModule

    @property
    def basis(self) -> list[Exps]:
        return self.source.basis

    @staticmethod
    def weight(label: Sequence[int]) -> Exps:
        return tuple(-e for e in label)

    def apply(self, g: DividedPowerGenerator, v: Mapping[Exps, int]) -> Vector:
        M, p = self.source, self.source.p
        out: Vector = {}
        for m, c in v.items():
            if g.kind == "h":
                i, j = g.root
                a = lucas_binom(-(m[i] - m[j]), g.n, p)
                src = m
            else:
                i, j, n = g.shift
                src = shift_exps(m, i, j, -n)
                if not M.support(src):
                    continue
                if not M.in_window(src):
                    raise TruncationOverflow(src, M.W)
                a, _ = act_divided(g.root, n, src, p)
                a = a * (-1) ** n
            a = a * c % p
            if a:
                out[src] = (out.get(src, 0) + a) % p
        return {k: x for k, x in out.items() if x}

    def dual(self) -> MonomialModule:
        return self.source


def graded_dual(M):
    if isinstance(M, GradedDual):
        return M.dual()
    return GradedDual(M)

