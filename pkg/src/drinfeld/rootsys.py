"""Root data of GL_{d+1}: roots, weights, parabolics, Weyl cosets."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import NamedTuple, Sequence

from . import conventions as cv


class Root(NamedTuple):
    """alpha_(i,j) = e_i - e_j; a plain (i, j) tuple works wherever a Root does."""

    i: int
    j: int

    @property
    def positive(self) -> bool:
        return cv.is_positive((self.i, self.j))

    @property
    def height(self) -> int:
        """Signed height: number of simple roots, negative for negative roots."""
        return self.i - self.j

    def negate(self) -> "Root":
        return Root(self.j, self.i)

    def vector(self, d: int) -> tuple[int, ...]:
        v = [0] * (d + 1)
        v[self.i] += 1
        v[self.j] -= 1
        return tuple(v)


class Weight(tuple):
    """Integer vector (m_0, ..., m_d)."""

    def __new__(cls, coeffs: Sequence[int]):
        return super().__new__(cls, (int(c) for c in coeffs))

    @property
    def d(self) -> int:
        return len(self) - 1

    def __add__(self, other):
        return Weight(a + b for a, b in zip(self, other, strict=True))

    def __sub__(self, other):
        return Weight(a - b for a, b in zip(self, other, strict=True))

    def scale(self, k: int) -> "Weight":
        return Weight(k * a for a in self)

    def is_adjoint(self) -> bool:
        return sum(self) == 0


def all_roots(d: int) -> list[Root]:
    return [Root(i, j) for i in range(d + 1) for j in range(d + 1) if i != j]


def positive_roots(d: int) -> list[Root]:
    return [r for r in all_roots(d) if r.positive]


def simple_roots(d: int) -> list[Root]:
    return [Root(*cv.simple_root(k)) for k in range(d)]


def coroot_pairing(lam: Sequence[int], gamma: Sequence[int]) -> int:
    i, j = gamma
    return lam[i] - lam[j]


# --- Weyl group as permutations -------------------------------------------

Perm = tuple[int, ...]


def identity(d: int) -> Perm:
    return tuple(range(d + 1))


def compose(u: Perm, v: Perm) -> Perm:
    """(u v)(k) = u(v(k))."""
    return tuple(u[k] for k in v)


def inverse(w: Perm) -> Perm:
    out = [0] * len(w)
    for k, wk in enumerate(w):
        out[wk] = k
    return tuple(out)


def length(w: Perm) -> int:
    n = len(w)
    return sum(1 for a in range(n) for b in range(a + 1, n) if w[a] > w[b])


def simple_reflection(k: int, d: int) -> Perm:
    a, b = cv.reflection_swap(k, d)
    w = list(range(d + 1))
    w[a], w[b] = b, a
    return tuple(w)


def word(ks: Sequence[int], d: int) -> Perm:
    """s_{k1} s_{k2} ... as a permutation."""
    w = identity(d)
    for k in ks:
        w = compose(w, simple_reflection(k, d))
    return w


def act(w: Perm, lam: Sequence[int]) -> Weight:
    out = [0] * len(lam)
    for k, m in enumerate(lam):
        out[w[k]] = m
    return Weight(out)


def act_root(w: Perm, gamma: Sequence[int]) -> Root:
    return Root(w[gamma[0]], w[gamma[1]])


def dot_action(w: Perm, lam: Sequence[int]) -> Weight:
    r = cv.rho(len(lam) - 1)
    shifted = act(w, [m + s for m, s in zip(lam, r)])
    return Weight(m - s for m, s in zip(shifted, r))


def local_cohomology_highest_weight(d: int, j: int) -> Weight:
    """s_{d-j} ... s_1 . 0, the highest weight along P^j."""
    return dot_action(word(range(d - j, 0, -1), d), [0] * (d + 1))


# --- parabolics -------------------------------------------------------------

def composition_to_subset(comp: Sequence[int]) -> frozenset[int]:
    """Indices k of simple roots (k+1, k) lying inside a Levi block."""
    out, start = set(), 0
    for size in comp:
        if size < 1:
            raise ValueError(f"bad composition {tuple(comp)}")
        out.update(range(start, start + size - 1))
        start += size
    return frozenset(out)


def subset_to_composition(subset, d: int) -> tuple[int, ...]:
    subset = frozenset(subset)
    if not subset <= frozenset(range(d)):
        raise ValueError(f"simple root indices must lie in 0..{d - 1}")
    comp, size = [], 1
    for k in range(d):
        if k in subset:
            size += 1
        else:
            comp.append(size)
            size = 1
    comp.append(size)
    return tuple(comp)


@dataclass(frozen=True)
class ParabolicData:
    d: int
    composition: tuple[int, ...]
    subset: frozenset[int] = field(init=False)
    block_of: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        comp = tuple(self.composition)
        if sum(comp) != self.d + 1 or any(c < 1 for c in comp):
            raise ValueError(f"{comp} is not a composition of {self.d + 1}")
        object.__setattr__(self, "composition", comp)
        object.__setattr__(self, "subset", composition_to_subset(comp))
        blocks = []
        for b, size in enumerate(comp):
            blocks += [b] * size
        object.__setattr__(self, "block_of", tuple(blocks))

    @classmethod
    def from_subset(cls, subset, d: int) -> "ParabolicData":
        return cls(d, subset_to_composition(subset, d))

    @property
    def blocks(self) -> list[range]:
        out, start = [], 0
        for size in self.composition:
            out.append(range(start, start + size))
            start += size
        return out

    def in_levi(self, root: Sequence[int]) -> bool:
        return self.block_of[root[0]] == self.block_of[root[1]]

    def levi_roots(self) -> list[Root]:
        return [r for r in all_roots(self.d) if self.in_levi(r)]

    def radical_roots(self) -> list[Root]:
        """Roots of U_P: positive and outside the Levi."""
        return [r for r in all_roots(self.d) if r.positive and not self.in_levi(r)]

    def opposite_radical_roots(self) -> list[Root]:
        return [r.negate() for r in self.radical_roots()]

    def contains(self, root: Sequence[int]) -> bool:
        """Is the root space in Lie(P)?"""
        return self.in_levi(root) or cv.is_positive(tuple(root))


def maximal_parabolic_for(lam: Sequence[int]) -> ParabolicData:
    d = len(lam) - 1
    subset = {k for k in range(d) if coroot_pairing(lam, cv.simple_root(k)) >= 0}
    return ParabolicData.from_subset(subset, d)


def minimal_coset_reps(par: ParabolicData) -> list[Perm]:
    """Minimal-length representatives of W / W_I: increasing on each block."""
    out = []
    for w in permutations(range(par.d + 1)):
        if all(w[k + 1] > w[k] for k in par.subset):
            out.append(w)
    out.sort(key=lambda w: (length(w), w))
    return out


def inversion_roots(w: Perm) -> list[Root]:
    """Positive roots beta with w^{-1}(beta) negative: the roots of U cap w U^- w^{-1}."""
    winv = inverse(w)
    d = len(w) - 1
    return [r for r in positive_roots(d) if not act_root(winv, r).positive]


def weyl_coset_data(subset, d: int) -> list[tuple[Perm, list[Root]]]:
    par = ParabolicData.from_subset(subset, d)
    return [(w, inversion_roots(w)) for w in minimal_coset_reps(par)]


class Generator(NamedTuple):
    """x_gamma^[n] or y_gamma^[n] for a positive root gamma."""

    kind: str
    gamma: Root
    n: int

    def matrix_unit(self) -> Root:
        g = Root(*self.gamma)
        return g if self.kind == "x" else g.negate()


def generator_for(root: Sequence[int], n: int) -> Generator:
    r = Root(*root)
    return Generator("x", r, n) if r.positive else Generator("y", r.negate(), n)


def ad_weyl_on_generator(w: Perm, kind: str, gamma: Sequence[int], n: int
                         ) -> tuple[int, Generator]:
    """Ad(w) of a divided-power root generator, as (sign, generator)."""
    if kind not in ("x", "y"):
        raise ValueError(f"generator kind must be 'x' or 'y', got {kind!r}")
    if not Root(*gamma).positive:
        raise ValueError(f"{tuple(gamma)} is not a positive root")
    unit = Generator(kind, Root(*gamma), n).matrix_unit()
    # permutation matrices conjugate E_ij to E_w(i)w(j) with no sign
    return 1, generator_for(act_root(w, unit), n)
