"""Eta-quotients prod_{delta | N} eta(delta z)^{r_delta} on Gamma0(N)."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping

from .arith import divisors, ord_p, prime_factors
import numpy as np

from .errors import FractionalValuationError, InvalidArgument, RecognitionFailure
from .gamma0 import level_invariants
from .qseries import QSeries, _mul_lists, eta_body, series_power

__all__ = [
    "EtaQuotient",
    "newman_is_valid",
    "ligozat_order",
    "cusp_orders",
    "is_holomorphic",
    "q_expansion",
    "expansion_coefficients",
    "expansion_coefficients_mod",
    "apply_V",
    "existence_weight",
    "recognize",
    "parse_quotient",
    "format_quotient",
]


@dataclass(frozen=True, init=False)
class EtaQuotient:
    """Level plus exponents ``((delta, r_delta), ...)``, ascending, zeros dropped."""

    level: int
    exponents: tuple[tuple[int, int], ...]

    def __init__(self, level: int, exponents: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        if not isinstance(level, int) or level < 1:
            raise InvalidArgument(f"level must be a positive integer, got {level!r}")
        items = exponents.items() if isinstance(exponents, Mapping) else exponents
        acc: dict[int, int] = {}
        for delta, r in items:
            delta, r = int(delta), int(r)
            if delta < 1 or level % delta:
                raise InvalidArgument(f"{delta} is not a divisor of the level {level}")
            if delta in acc:
                raise InvalidArgument(f"divisor {delta} given twice")
            acc[delta] = r
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "exponents", tuple(sorted((d, r) for d, r in acc.items() if r)))

    @classmethod
    def from_vector(cls, level: int, divs: Iterable[int], rs: Iterable[int]) -> "EtaQuotient":
        return cls(level, zip(divs, rs))

    def exponent(self, delta: int) -> int:
        for d, r in self.exponents:
            if d == delta:
                return r
        return 0

    def as_dict(self) -> dict[int, int]:
        return dict(self.exponents)

    def vector(self, divs: Iterable[int] | None = None) -> tuple[int, ...]:
        ex = self.as_dict()
        return tuple(ex.get(d, 0) for d in (divisors(self.level) if divs is None else divs))

    @property
    def doubled_weight(self) -> int:
        return sum(r for _, r in self.exponents)

    @property
    def weight(self) -> Fraction:
        return Fraction(self.doubled_weight, 2)

    @property
    def twentyfourths(self) -> int:
        """Sum of delta * r_delta: the q-exponent of the prefactor, in units of 1/24."""
        return sum(d * r for d, r in self.exponents)

    @property
    def abs_exponent_sum(self) -> int:
        return sum(abs(r) for _, r in self.exponents)

    def __mul__(self, other: "EtaQuotient") -> "EtaQuotient":
        if other.level != self.level:
            raise InvalidArgument("eta-quotients must share a level to be multiplied")
        ex = self.as_dict()
        for d, r in other.exponents:
            ex[d] = ex.get(d, 0) + r
        return EtaQuotient(self.level, ex)

    def __pow__(self, e: int) -> "EtaQuotient":
        return EtaQuotient(self.level, {d: r * e for d, r in self.exponents})

    def __truediv__(self, other: "EtaQuotient") -> "EtaQuotient":
        return self * other ** -1

    def at_level(self, M: int) -> "EtaQuotient":
        """The same function viewed at a multiple ``M`` of the level."""
        if M % self.level:
            raise InvalidArgument(f"{M} is not a multiple of {self.level}")
        return EtaQuotient(M, self.exponents)

    def to_text(self) -> str:
        return format_quotient(self)

    def to_json(self) -> dict:
        return {"level": self.level, "exponents": {str(d): r for d, r in self.exponents}}

    @classmethod
    def from_json(cls, obj) -> "EtaQuotient":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(int(obj["level"]), {int(k): int(v) for k, v in obj["exponents"].items()})

    def __str__(self):
        return f"level {self.level}: {format_quotient(self) or '1'}"


def format_quotient(q: EtaQuotient) -> str:
    return ",".join(f"{d}:{r}" for d, r in q.exponents)


def parse_quotient(level: int, text: str) -> EtaQuotient:
    """Parse ``"<delta>:<r>,<delta>:<r>,..."``."""
    pairs = []
    text = text.strip()
    if text:
        for chunk in text.split(","):
            try:
                d, r = chunk.split(":")
                pairs.append((int(d), int(r)))
            except ValueError:
                raise InvalidArgument(f"malformed eta-quotient term {chunk!r}") from None
    return EtaQuotient(level, pairs)


def newman_is_valid(q: EtaQuotient) -> bool:
    N = q.level
    if q.twentyfourths % 24:
        return False
    if sum((N // d) * r for d, r in q.exponents) % 24:
        return False
    # prod delta^r_delta is a rational square iff every prime occurs to an even power
    return all(sum(r * ord_p(p, d) for d, r in q.exponents) % 2 == 0 for p in prime_factors(N))


def _check_divisor(N: int, d: int) -> None:
    if not isinstance(d, int) or d < 1 or N % d:
        raise InvalidArgument(f"{d!r} is not a divisor of {N}")


def ligozat_order(q: EtaQuotient, d: int) -> Fraction:
    """Order of vanishing at the cusps with denominator ``d`` (any c/d, gcd(c,d)=1)."""
    N = q.level
    _check_divisor(N, d)
    g = gcd(d, N // d)
    s = Fraction(0)
    for delta, r in q.exponents:
        s += Fraction(gcd(d, delta) ** 2 * r, g * d * delta)
    return s * N / 24


def cusp_orders(q: EtaQuotient) -> dict[int, Fraction]:
    return {d: ligozat_order(q, d) for d in divisors(q.level)}


def is_holomorphic(q: EtaQuotient) -> bool:
    return newman_is_valid(q) and all(o >= 0 for o in cusp_orders(q).values())


@lru_cache(maxsize=4096)
def _body_power(delta: int, r: int, n: int) -> tuple[int, ...]:
    return tuple(series_power(eta_body(delta, n).coeffs, r, n))


def _body_coefficients(q: EtaQuotient, n: int) -> list[int]:
    """First ``n`` coefficients of prod_delta prod_m (1 - q^(delta m))^r_delta."""
    out = [1] + [0] * (n - 1)
    for delta, r in q.exponents:
        if delta < n:
            out = _mul_lists(out, _body_power(delta, r, n), n)
    return out


def _valuation(q: EtaQuotient) -> int:
    t = q.twentyfourths
    if t % 24:
        raise FractionalValuationError(
            f"sum of delta*r_delta = {t} is not divisible by 24; the expansion is not a Laurent series in q"
        )
    return t // 24


def q_expansion(q: EtaQuotient, precision: int) -> QSeries:
    """Fourier expansion at infinity, exact below ``q^precision``."""
    v = _valuation(q)
    if precision <= v:
        return QSeries.zero(precision)
    return QSeries.from_coefficients(_body_coefficients(q, precision - v), v, precision)


def expansion_coefficients(q: EtaQuotient, start: int, stop: int) -> list[int]:
    """Integer coefficients of ``q^start .. q^(stop-1)`` of the expansion."""
    v = _valuation(q)
    if stop <= v:
        return [0] * (stop - start)
    body = _body_coefficients(q, stop - v)
    return [body[n - v] if n >= v else 0 for n in range(start, stop)]


def _conv_mod(a, b, n: int, p: int):
    return np.convolve(a[:n], b[:n])[:n] % p


@lru_cache(maxsize=1024)
def _body_squares_mod(delta: int, sign: int, n: int, p: int, i: int):
    """(prod (1 - q^(delta m)))^(sign * 2^i) mod p, first n coefficients."""
    if i == 0:
        base = series_power(eta_body(delta, n).coeffs, sign, n)
        out = np.asarray([int(x) % p for x in base], dtype=np.int64)
    else:
        prev = _body_squares_mod(delta, sign, n, p, i - 1)
        out = _conv_mod(prev, prev, n, p)
    out.flags.writeable = False
    return out


@lru_cache(maxsize=8192)
def _body_power_mod(delta: int, r: int, n: int, p: int):
    sign = 1 if r > 0 else -1
    out = None
    e, i = abs(r), 0
    while e:
        if e & 1:
            sq = _body_squares_mod(delta, sign, n, p, i)
            out = sq if out is None else _conv_mod(out, sq, n, p)
        e >>= 1
        i += 1
    return out


def expansion_coefficients_mod(q: EtaQuotient, start: int, stop: int, p: int):
    """Coefficients of ``q^start .. q^(stop-1)`` reduced mod the prime ``p``, as an int64 array."""
    v = _valuation(q)
    out = np.zeros(stop - start, dtype=np.int64)
    n = stop - v
    if n <= 0:
        return out
    if n * (p - 1) ** 2 >= 2 ** 63:
        raise InvalidArgument("prime too large for exact int64 convolution at this length")
    body = np.zeros(n, dtype=np.int64)
    body[0] = 1
    for delta, r in q.exponents:
        if delta < n and r:
            body = _conv_mod(body, _body_power_mod(delta, r, n, p), n, p)
    lo = max(start, v)
    out[lo - start:] = body[lo - v: stop - v]
    return out


def apply_V(q: EtaQuotient, m: int) -> EtaQuotient:
    """``f(z) -> f(mz)``, as an eta-quotient of level ``m * N``."""
    if not isinstance(m, int) or m < 1:
        raise InvalidArgument("V(m) needs a positive integer m")
    return EtaQuotient(q.level * m, {m * d: r for d, r in q.exponents})


def existence_weight(N: int) -> tuple[int, EtaQuotient]:
    """Least weight carrying a holomorphic eta-quotient of level N, with a witness.

    The weight is 12, 6, 4 or 2 according to which of eps2, eps3 vanish; the
    witnesses are the classical ones (Delta, eta(z)^8/eta(2z)^4, ...).
    """
    inv = level_invariants(N)
    ps = prime_factors(N)
    if inv.eps2 == 0 and inv.eps3 == 0:
        if N % 4 == 0:
            ex = {1: 8, 2: -4}
        elif N % 9 == 0:
            ex = {1: 6, 3: -2}
        else:
            p = min(p for p in ps if p % 4 == 3)
            if p % 3 == 2:
                ex = {1: 2, p: 2}
            else:
                q = min(q for q in ps if q % 3 == 2)
                if q > 2:
                    ex = {1: 1, p: 1, q: 1, p * q: 1}
                else:
                    ex = {1: 4, p: 4, 2: -2, 2 * p: -2}
        k = 2
    elif inv.eps2 == 0:
        # eps3 > 0 forces N odd, so some prime 3 mod 4 divides N
        p = min(p for p in ps if p % 4 == 3)
        ex, k = {1: 6, p: 6}, 6
    elif inv.eps3 == 0:
        q = min(q for q in ps if q % 3 == 2)
        ex = {1: 16, 2: -8} if q == 2 else {1: 4, q: 4}
        k = 4
    else:
        ex, k = {1: 24}, 12
    return k, EtaQuotient(N, ex)


def recognize(series: QSeries, N: int, check_precision: int | None = None) -> tuple[int, EtaQuotient]:
    """Write an integral q-series as ``c * (eta-quotient of level N)``.

    The exponents are solved one divisor at a time in ascending order: once
    the factors for smaller divisors are divided off, the coefficient of
    ``q^(v + d)`` determines ``s_d``.  The product is then compared with the
    input below ``check_precision`` (default ``valuation + 4N``).  Only
    agreement up to that horizon is certified.
    """
    if series.is_zero():
        raise InvalidArgument("cannot recognise the zero series")
    if not isinstance(N, int) or N < 1:
        raise InvalidArgument("level must be a positive integer")
    v = series.valuation
    if check_precision is None:
        check_precision = v + 4 * N
    if check_precision <= v + N:
        raise InvalidArgument("check_precision must exceed valuation + N")
    if check_precision > series.precision:
        raise InvalidArgument(
            f"check_precision {check_precision} exceeds the series precision {series.precision}"
        )
    L = check_precision - v
    coeffs = list(series.coeffs[:L])
    for i, a in enumerate(coeffs):
        if not isinstance(a, int):
            raise RecognitionFailure(f"coefficient of q^{v + i} is not an integer", v + i)
    c = coeffs[0]
    for i, a in enumerate(coeffs):
        if a % c:
            raise RecognitionFailure(
                f"coefficient of q^{v + i} is not divisible by the leading coefficient {c}", v + i
            )
    h = [a // c for a in coeffs]
    prod = [1] + [0] * (L - 1)
    solved: dict[int, int] = {}
    for idx, d in enumerate(divisors(N)):
        s = prod[d] - h[d]
        if s:
            solved[d] = s
            prod = _mul_lists(prod, series_power(eta_body(d, L).coeffs, s, L), L)
    for i in range(L):
        if prod[i] != h[i]:
            raise RecognitionFailure(
                f"product of the solved eta factors disagrees with the series at q^{v + i}", v + i
            )
    quotient = EtaQuotient(N, solved)
    if quotient.twentyfourths != 24 * v:
        raise RecognitionFailure(
            f"solved exponents give q-prefactor {quotient.twentyfourths}/24, but the valuation is {v}"
        )
    return c, quotient
