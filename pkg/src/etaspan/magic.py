"""Holomorphic eta-quotients E_{d,N} whose zeros all lie at the cusps of one denominator d.

The construction runs prime by prime in ascending order, starting from
``Delta = eta(z)^24`` at level 1.  Write ``F`` for the quotient built so
far, ``m = ord_p(N)`` and ``s = ord_p(d)``:

* ``s = 0``:        ``F^p / F|V(p)``
* ``0 < s < m``:    ``(F|V(p^s))^(p^2+1) / ((F|V(p^(s-1)))^p (F|V(p^(s+1)))^p)``
* ``s = m``:        ``(F|V(p^m))^p / F|V(p^(m-1))``

The first and last steps multiply the weight by ``p - 1`` and the sum of
absolute exponents by ``p + 1``; the middle step squares both factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import factor, ord_p
from .errors import InvalidArgument, InvariantViolation
from .etaquot import EtaQuotient, cusp_orders, is_holomorphic
from .gamma0 import level_invariants

__all__ = ["MagicEta", "magic_eta", "magic_weight", "bound_factor"]


def bound_factor(N: int) -> Fraction:
    """prod_{p | N} ((p+1)/(p-1))^min(2, ord_p N); the exponent bound divided by 2k."""
    b = Fraction(1)
    for p, e in factor(N):
        b *= Fraction(p + 1, p - 1) ** min(2, e)
    return b


@dataclass(frozen=True)
class MagicEta:
    base: EtaQuotient
    target_denominator: int
    weight: int

    @property
    def level(self) -> int:
        return self.base.level

    @property
    def exponent_ratio(self) -> Fraction:
        """sum |r_delta| / (2 * weight)."""
        return Fraction(self.base.abs_exponent_sum, 2 * self.weight)


def _check(d, N) -> None:
    level_invariants(N)
    if not isinstance(d, int) or d < 1 or N % d:
        raise InvalidArgument(f"{d!r} is not a divisor of {N}")


def _scaled(ex: dict[int, int], m: int, power: int) -> dict[int, int]:
    return {m * delta: power * r for delta, r in ex.items()}


def _combine(*parts: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for part in parts:
        for delta, r in part.items():
            out[delta] = out.get(delta, 0) + r
    return {delta: r for delta, r in out.items() if r}


def magic_weight(d: int, N: int) -> int:
    _check(d, N)
    w = 12
    for p, m in factor(N):
        s = ord_p(p, d)
        w *= (p - 1) ** 2 if 0 < s < m else p - 1
    return w


@lru_cache(maxsize=None)
def magic_eta(d: int, N: int) -> MagicEta:
    """E_{d,N}, checked after construction against every defining property."""
    _check(d, N)
    ex = {1: 24}
    for p, m in factor(N):
        s = ord_p(p, d)
        if s == 0:
            ex = _combine(_scaled(ex, 1, p), _scaled(ex, p, -1))
        elif s < m:
            ex = _combine(
                _scaled(ex, p ** s, p * p + 1),
                _scaled(ex, p ** (s - 1), -p),
                _scaled(ex, p ** (s + 1), -p),
            )
        else:
            ex = _combine(_scaled(ex, p ** m, p), _scaled(ex, p ** (m - 1), -1))
    q = EtaQuotient(N, ex)
    weight = magic_weight(d, N)
    if q.doubled_weight != 2 * weight:
        raise InvariantViolation(f"E_{{{d},{N}}} has weight {q.weight}, expected {weight}")
    orders = cusp_orders(q)
    for dd, o in orders.items():
        if (o > 0) != (dd == d) or o < 0:
            raise InvariantViolation(f"E_{{{d},{N}}} has order {o} at denominator {dd}")
    if not is_holomorphic(q):
        raise InvariantViolation(f"E_{{{d},{N}}} is not a holomorphic eta-quotient")
    result = MagicEta(q, d, weight)
    if result.exponent_ratio > bound_factor(N):
        raise InvariantViolation(f"E_{{{d},{N}}} exceeds the exponent bound")
    return result
