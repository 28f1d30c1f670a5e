"""Small number-theoretic helpers (thin wrappers around sympy.ntheory)."""

from __future__ import annotations

from functools import lru_cache
from math import gcd

from sympy.ntheory import factorint, isprime
from sympy.ntheory import divisors as _divisors
from sympy import totient as _totient

__all__ = ["divisors", "factor", "prime_factors", "ord_p", "phi", "is_prime", "lcm"]


@lru_cache(maxsize=4096)
def divisors(n: int) -> tuple[int, ...]:
    return tuple(int(d) for d in _divisors(n))


@lru_cache(maxsize=4096)
def factor(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorisation as ascending ``((p, e), ...)``."""
    return tuple(sorted((int(p), int(e)) for p, e in factorint(n).items()))


def prime_factors(n: int) -> tuple[int, ...]:
    return tuple(p for p, _ in factor(n))


def ord_p(p: int, n: int) -> int:
    if n == 0:
        raise ValueError("ord_p(0) is undefined")
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def phi(n: int) -> int:
    return int(_totient(n))


def is_prime(n: int) -> bool:
    return n > 1 and bool(isprime(n))


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b if a and b else 0
