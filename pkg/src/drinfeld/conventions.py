"""Sign and indexing conventions shared by every module.

Coordinates are X_0..X_d, the torus is diagonal, and the root
alpha_(i,j) = e_i - e_j is the weight of the matrix unit E_ij; the operator
L_(i,j) = X_i d/dX_j realizes E_ij on functions.

* Borel: lower triangular. Positive roots are (i, j) with i > j, so the
  raising operators x_alpha are the L_(i,j) with i > j and the lowering
  operators y_alpha are the L_(i,j) with i < j.
* Simple roots: (k+1, k) for k = 0..d-1; the simple root with index k is
  SIMPLE[k].
* Simple reflections are numbered from the bottom corner: s_1 swaps the
  coordinates d-1 and d, s_k swaps d-k and d-k+1. With this numbering the
  highest weight of the reduced local cohomology along P^j is
  s_{d-j} ... s_1 . 0.
* rho = (0, 1, ..., d), the integral shift of the half sum of positive roots.
* Big-cell coordinate T_(a,b) for a < b acts on monomials as X_b / X_a, so
  T_(a,b)^m L_(a,b)^[n] shifts the exponent vector by (n - m) alpha_(a,b).
* Weyl elements are permutations w with w[k] the image of k; the matrix
  representative sends e_k to e_{w[k]} and every Ad-sign is +1.
"""
from __future__ import annotations

Root = tuple[int, int]


def is_positive(root: Root) -> bool:
    i, j = root
    return i > j


def simple_root(k: int) -> Root:
    return (k + 1, k)


def rho(d: int) -> tuple[int, ...]:
    return tuple(range(d + 1))


def reflection_swap(k: int, d: int) -> tuple[int, int]:
    """Coordinates exchanged by the simple reflection s_k (1 <= k <= d)."""
    if not 1 <= k <= d:
        raise ValueError(f"s_{k} does not exist for d = {d}")
    return (d - k, d - k + 1)


def t_shift(root: Root) -> tuple[int, int]:
    """(numerator, denominator) variable of the big-cell coordinate T_root."""
    a, b = root
    return (b, a)
