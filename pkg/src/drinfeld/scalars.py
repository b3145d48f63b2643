"""Finite-field arithmetic and divided-power coefficients mod p."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

log = logging.getLogger(__name__)

# Conway polynomials, low degree first: x^2+x+1 is (1, 1, 1).
CONWAY = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (3, 2): (2, 2, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (5, 2): (2, 4, 1),
    (3, 3): (1, 2, 0, 1),
}


class CharacteristicError(ValueError):
    """Raised when a check needs p > 3 and gets p in {2, 3}."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, n) with q = p**n, or raise ValueError."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = 2
    while q % p:
        p += 1
    n, r = 0, q
    while r % p == 0:
        r //= p
        n += 1
    if r != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, n


def require_p_gt_3(p: int, what: str = "this check") -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p <= 3:
        raise CharacteristicError(
            f"{what} needs the hypothesis p > 3 (got p = {p})")


def warn_small_p(p: int) -> None:
    if p <= 3:
        log.warning("p = %d: dimension count only, the p > 3 results do not apply", p)


def binom_int(m: int, n: int) -> int:
    """Exact C(m, n) for any integer m and n >= 0."""
    if n < 0:
        return 0
    if m < 0:
        return (-1) ** n * comb(n - m - 1, n)
    return comb(m, n)


def lucas_binom(m: int, n: int, p: int) -> int:
    """C(m, n) mod p, digit by digit in base p.

    Negative m goes through C(m, n) = (-1)^n C(n - m - 1, n) first.
    """
    if n < 0:
        return 0
    sign = 1
    if m < 0:
        sign = -1 if n % 2 else 1
        m = n - m - 1
    out = 1
    while n:
        md, nd = m % p, n % p
        if nd > md:
            return 0
        out = out * _small_binom(md, nd, p) % p
        m //= p
        n //= p
    return sign * out % p


@lru_cache(maxsize=None)
def _small_binom(m: int, n: int, p: int) -> int:
    return comb(m, n) % p


def divided_multinomial(parts: Iterable[int], p: int) -> int:
    """(sum parts)! / prod(parts!) mod p, as a product of Lucas binomials."""
    total, out = 0, 1
    for k in parts:
        if k < 0:
            raise ValueError("multinomial parts must be nonnegative")
        total += k
        out = out * lucas_binom(total, k, p) % p
        if not out:
            return 0
    return out


def inv_mod(a: int, p: int) -> int:
    a %= p
    if not a:
        raise ZeroDivisionError("inverse of 0 mod p")
    return pow(a, p - 2, p)


class GF:
    """The field with q = p^n elements.

    Elements are the integers 0..q-1; for n > 1 the integer encodes the
    coefficient vector of a polynomial in the Conway generator, base p,
    lowest degree first.
    """

    _cache: dict[int, "GF"] = {}

    def __new__(cls, q: int) -> "GF":
        if q in cls._cache:
            return cls._cache[q]
        self = super().__new__(cls)
        self._setup(q)
        cls._cache[q] = self
        return self

    def _setup(self, q: int) -> None:
        p, n = prime_power(q)
        self.q, self.p, self.n = q, p, n
        if n == 1:
            self.modulus = (0, 1)
            self._mul = None
            return
        if (p, n) not in CONWAY:
            raise ValueError(f"no Conway polynomial tabulated for q = {q}")
        self.modulus = CONWAY[(p, n)]
        mul = [[0] * q for _ in range(q)]
        for a in range(q):
            for b in range(a, q):
                mul[a][b] = mul[b][a] = self._poly_mul(a, b)
        self._mul = mul

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.n):
            out.append(a % self.p)
            a //= self.p
        return out

    def _undigits(self, ds: Sequence[int]) -> int:
        a = 0
        for d in reversed(ds):
            a = a * self.p + d % self.p
        return a

    def _poly_mul(self, a: int, b: int) -> int:
        p, n = self.p, self.n
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k]
            if c:
                for i in range(n + 1):
                    prod[k - n + i] = (prod[k - n + i] - c * self.modulus[i]) % p
        return self._undigits(prod[:n])

    def add(self, a: int, b: int) -> int:
        if self.n == 1:
            return (a + b) % self.p
        return self._undigits([x + y for x, y in zip(self._digits(a), self._digits(b))])

    def neg(self, a: int) -> int:
        if self.n == 1:
            return -a % self.p
        return self._undigits([-x for x in self._digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.n == 1:
            return a * b % self.p
        return self._mul[a][b]

    def inv(self, a: int) -> int:
        if self.n == 1:
            return inv_mod(a, self.p)
        if not a:
            raise ZeroDivisionError("inverse of 0")
        return pow_gf(self, a, self.q - 2)

    def from_int(self, k: int) -> int:
        """Image of the integer k (lands in the prime field)."""
        return k % self.p

    def elements(self) -> range:
        return range(self.q)

    def __repr__(self) -> str:
        return f"GF({self.q})"


def pow_gf(F: GF, a: int, e: int) -> int:
    out = 1
    while e:
        if e & 1:
            out = F.mul(out, a)
        a = F.mul(a, a)
        e >>= 1
    return out


@dataclass(frozen=True)
class FieldElement:
    """A value of GF(q) with operator overloads; canonical and hashable."""

    residue: int
    q: int

    def __post_init__(self):
        if not 0 <= self.residue < self.q:
            raise ValueError(f"residue {self.residue} out of range for q = {self.q}")

    @property
    def field(self) -> GF:
        return GF(self.q)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.q != self.q:
                raise ValueError("mixed fields")
            return other.residue
        return self.field.from_int(other)

    def __add__(self, other):
        return FieldElement(self.field.add(self.residue, self._other(other)), self.q)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field.sub(self.residue, self._other(other)), self.q)

    def __rsub__(self, other):
        return FieldElement(self.field.sub(self._other(other), self.residue), self.q)

    def __mul__(self, other):
        return FieldElement(self.field.mul(self.residue, self._other(other)), self.q)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(self.field.neg(self.residue), self.q)

    def __truediv__(self, other):
        return self * FieldElement(self.field.inv(self._other(other)), self.q)

    def __pow__(self, e: int):
        if e < 0:
            return FieldElement(self.field.inv(self.residue), self.q) ** (-e)
        return FieldElement(pow_gf(self.field, self.residue, e), self.q)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.q == other.q and self.residue == other.residue
        if isinstance(other, int):
            return self.residue == self.field.from_int(other) and (
                self.field.n == 1 or self.residue < self.field.p)
        return NotImplemented

    def __hash__(self):
        return hash((self.residue, self.q))

    def __bool__(self):
        return self.residue != 0

    def __int__(self):
        return self.residue

    def __repr__(self):
        return f"{self.residue} (mod {self.q})" if self.field.n == 1 else f"GF({self.q})[{self.residue}]"


def fe(k: int, q: int) -> FieldElement:
    return FieldElement(GF(q).from_int(k), q)


def binom_fe(m: int, n: int, p: int) -> FieldElement:
    return FieldElement(lucas_binom(m, n, p), p)


def multinomial_fe(parts: Iterable[int], p: int) -> FieldElement:
    return FieldElement(divided_multinomial(parts, p), p)
