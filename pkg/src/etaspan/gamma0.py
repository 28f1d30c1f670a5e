"""Invariants of Gamma0(N) and X0(N)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .arith import divisors, factor, phi
from .errors import InvalidArgument

__all__ = ["LevelInvariants", "level_invariants", "dim_modular_forms", "sturm_bound", "cusp_multiplicity"]


@dataclass(frozen=True)
class LevelInvariants:
    level: int
    index: int
    divisors: tuple[int, ...]
    eps2: int
    eps3: int
    cusp_classes: tuple[tuple[int, int], ...]  # (denominator d, number of cusps with that denominator)
    num_cusps: int
    genus: int

    @property
    def elliptic_free(self) -> bool:
        return self.eps2 == 0 and self.eps3 == 0

    def multiplicity(self, d: int) -> int:
        for dd, m in self.cusp_classes:
            if dd == d:
                return m
        raise InvalidArgument(f"{d} does not divide {self.level}")


def cusp_multiplicity(N: int, d: int) -> int:
    """Number of cusps of X0(N) with denominator ``d``."""
    return phi(gcd(d, N // d))


def _kronecker_minus1(p: int) -> int:
    if p == 2:
        return 0
    return 1 if p % 4 == 1 else -1


def _kronecker_minus3(p: int) -> int:
    if p == 2:
        return -1
    if p == 3:
        return 0
    return 1 if p % 3 == 1 else -1


def _check_level(N) -> None:
    if not isinstance(N, int) or isinstance(N, bool) or N < 1:
        raise InvalidArgument(f"level must be a positive integer, got {N!r}")


@lru_cache(maxsize=None)
def level_invariants(N: int) -> LevelInvariants:
    _check_level(N)
    fac = factor(N)
    index = N
    for p, _ in fac:
        index = index // p * (p + 1)
    eps2 = 0
    if N % 4:
        eps2 = 1
        for p, _ in fac:
            eps2 *= 1 + _kronecker_minus1(p)
    eps3 = 0
    if N % 9:
        eps3 = 1
        for p, _ in fac:
            eps3 *= 1 + _kronecker_minus3(p)
    divs = divisors(N)
    classes = tuple((d, cusp_multiplicity(N, d)) for d in divs)
    cusps = sum(m for _, m in classes)
    # Riemann-Hurwitz for X0(N) -> X0(1)
    twelve_g = 12 + index - 3 * eps2 - 4 * eps3 - 6 * cusps
    if twelve_g % 12:
        raise ArithmeticError(f"genus formula does not balance at N={N}")
    return LevelInvariants(N, index, divs, eps2, eps3, classes, cusps, twelve_g // 12)


def _check_weight(k) -> None:
    if not isinstance(k, int) or isinstance(k, bool) or k < 2 or k % 2:
        raise InvalidArgument(f"weight must be an even integer >= 2, got {k!r}")


def dim_modular_forms(N: int, k: int) -> int:
    """dim M_k(Gamma0(N)) for even k >= 2."""
    _check_weight(k)
    inv = level_invariants(N)
    if k == 2:
        return inv.genus + inv.num_cusps - 1
    return ((k - 1) * (inv.genus - 1) + (k // 4) * inv.eps2 + (k // 3) * inv.eps3
            + (k // 2) * inv.num_cusps)


def sturm_bound(N: int, k: int) -> int:
    """Number of coefficients, starting at q^0, that determine a form in M_k(Gamma0(N))."""
    _check_weight(k)
    return k * level_invariants(N).index // 12 + 1


def valence(N: int, k) -> Fraction:
    """Weighted number of zeros (k/12)[SL2(Z):Gamma0(N)] of a nonzero weight-k form."""
    return Fraction(k) * level_invariants(N).index / 12
