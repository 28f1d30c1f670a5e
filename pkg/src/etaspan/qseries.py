"""Truncated Laurent series in q with exact rational coefficients.

A :class:`QSeries` stores the coefficients of ``q^v, q^(v+1), ..., q^(H-1)``
densely, where ``v`` is the valuation and ``H`` the precision horizon: every
term with exponent below ``H`` is known exactly and nothing at or beyond ``H``
is claimed.  Coefficients are Python ``int`` whenever they are integral and
``Fraction`` otherwise.

The eta product ``prod_{n>=1} (1 - q^(delta*n))`` is produced sparsely from
Euler's pentagonal number theorem; the ``q^(delta/24)`` prefactor never
enters this module (see :mod:`etaspan.etaquot`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Sequence

from .errors import InvalidArgument

__all__ = [
    "QSeries",
    "eta_body",
    "mul",
    "pow",
    "invert",
    "truncate",
    "series_power",
]


def _norm(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, int):
        return x
    if isinstance(x, Rational):
        return _norm(Fraction(x))
    raise TypeError(f"coefficients must be exact rationals, got {type(x).__name__}")


@dataclass(frozen=True)
class QSeries:
    valuation: int
    coeffs: tuple
    precision: int

    def __post_init__(self):
        if self.precision < self.valuation:
            raise InvalidArgument("precision must not be below the valuation")
        if len(self.coeffs) != self.precision - self.valuation:
            raise InvalidArgument("coefficients must cover [valuation, precision) densely")
        if self.coeffs and self.coeffs[0] == 0:
            raise InvalidArgument("leading coefficient of a nonzero series must be nonzero")

    @classmethod
    def from_coefficients(cls, coeffs: Iterable, valuation: int = 0, precision: int | None = None) -> "QSeries":
        """Build a series from ``coeffs[i]`` = coefficient of ``q^(valuation+i)``.

        ``precision`` defaults to ``valuation + len(coeffs)``; missing trailing
        coefficients are zero.  Leading zeros are absorbed into the valuation.
        """
        cs = [_norm(c) for c in coeffs]
        if precision is None:
            precision = valuation + len(cs)
        cs = cs[: max(precision - valuation, 0)]
        cs.extend([0] * (precision - valuation - len(cs)))
        lead = 0
        while lead < len(cs) and cs[lead] == 0:
            lead += 1
        if lead == len(cs):
            return cls.zero(precision)
        return cls(valuation + lead, tuple(cs[lead:]), precision)

    @classmethod
    def zero(cls, precision: int) -> "QSeries":
        return cls(precision, (), precision)

    @classmethod
    def one(cls, precision: int) -> "QSeries":
        if precision < 1:
            raise InvalidArgument("precision must be positive")
        return cls(0, (1,) + (0,) * (precision - 1), precision)

    @classmethod
    def monomial(cls, exponent: int, precision: int, coefficient=1) -> "QSeries":
        if exponent >= precision or coefficient == 0:
            return cls.zero(precision)
        n = precision - exponent
        return cls(exponent, (_norm(coefficient),) + (0,) * (n - 1), precision)

    # -- inspection -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, n: int):
        """Coefficient of ``q^n``; raises if ``n`` is beyond the horizon."""
        if n >= self.precision:
            raise IndexError(f"coefficient of q^{n} is beyond precision {self.precision}")
        if n < self.valuation:
            return 0
        return self.coeffs[n - self.valuation]

    def coefficients(self, start: int, stop: int) -> list:
        """Coefficients of ``q^start .. q^(stop-1)``."""
        if stop > self.precision:
            raise IndexError(f"requested q^{stop - 1} beyond precision {self.precision}")
        return [self[n] for n in range(start, stop)]

    def leading_coefficient(self):
        if self.is_zero():
            raise ZeroDivisionError("the zero series has no leading coefficient")
        return self.coeffs[0]

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.coeffs)

    def __repr__(self):
        return f"QSeries({self.to_string(8)})"

    def to_string(self, terms: int = 10) -> str:
        parts = []
        for i, c in enumerate(self.coeffs):
            if len(parts) >= terms:
                break
            if c == 0:
                continue
            e = self.valuation + i
            mono = "" if e == 0 else ("q" if e == 1 else f"q^{e}")
            if mono and c in (1, -1):
                s = mono if c == 1 else "-" + mono
            else:
                s = f"{c}" if not mono else f"{c}*{mono}"
            parts.append(s)
        body = " + ".join(parts).replace("+ -", "- ") or "0"
        return f"{body} + O(q^{self.precision})"

    # -- arithmetic -------------------------------------------------------

    def __neg__(self):
        return QSeries(self.valuation, tuple(-c for c in self.coeffs), self.precision)

    def __add__(self, other):
        if not isinstance(other, QSeries):
            other = QSeries.monomial(0, self.precision, other) if self.precision > 0 else QSeries.zero(self.precision)
        h = min(self.precision, other.precision)
        v = min(self.valuation, other.valuation, h)
        return QSeries.from_coefficients([self._get(n) + other._get(n) for n in range(v, h)], v, h)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other if isinstance(other, QSeries) else -_norm(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return mul(self, other)
        c = _norm(other)
        if c == 0:
            return QSeries.zero(self.precision)
        return QSeries(self.valuation, tuple(_norm(x * c) for x in self.coeffs), self.precision)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return mul(self, invert(other))
        c = _norm(other)
        if c == 0:
            raise ZeroDivisionError("division of a series by zero")
        return QSeries(self.valuation, tuple(_norm(Fraction(x) / c) for x in self.coeffs), self.precision)

    def __pow__(self, e: int):
        return pow(self, e)

    def _get(self, n):
        if n < self.valuation or n >= self.precision:
            return 0
        return self.coeffs[n - self.valuation]

    def shift(self, k: int) -> "QSeries":
        """Multiply by ``q^k``."""
        return QSeries(self.valuation + k, self.coeffs, self.precision + k)

    def substitute(self, m: int) -> "QSeries":
        """The series in ``q^m`` (the operator ``f(z) -> f(mz)``)."""
        if m < 1:
            raise InvalidArgument("substitution exponent must be positive")
        if self.is_zero():
            return QSeries.zero(self.precision * m)
        out = [0] * ((self.precision - self.valuation) * m)
        for i, c in enumerate(self.coeffs):
            out[i * m] = c
        return QSeries.from_coefficients(out, self.valuation * m, self.precision * m)


def truncate(a: QSeries, h: int) -> QSeries:
    """Forget all terms at or beyond ``q^h``."""
    if h >= a.precision:
        return a
    if h <= a.valuation:
        return QSeries.zero(h)
    return QSeries(a.valuation, a.coeffs[: h - a.valuation], h)


def _mul_lists(x: Sequence, y: Sequence, n: int) -> list:
    """First ``n`` coefficients of the product of two dense coefficient lists."""
    out = [0] * n
    ynz = [(j, c) for j, c in enumerate(y[:n]) if c]
    for i, a in enumerate(x[:n]):
        if not a:
            continue
        lim = n - i
        for j, b in ynz:
            if j >= lim:
                break
            out[i + j] += a * b
    return out


def mul(a: QSeries, b: QSeries) -> QSeries:
    h = min(a.precision + b.valuation, b.precision + a.valuation)
    if a.is_zero() or b.is_zero():
        return QSeries.zero(h)
    v = a.valuation + b.valuation
    if h <= v:
        return QSeries.zero(h)
    out = _mul_lists(a.coeffs, b.coeffs, h - v)
    return QSeries.from_coefficients([_norm(c) for c in out], v, h)


def series_power(u: Sequence, e: int, n: int) -> list:
    """First ``n`` coefficients of ``u^e`` for a dense list ``u`` with ``u[0] != 0``.

    Uses the recurrence ``k u0 b_k = sum_{j=1..k} ((e+1) j - k) u_j b_{k-j}``
    obtained from ``u b' = e u' b``; only the nonzero ``u_j`` are visited, so
    sparse inputs such as pentagonal expansions are cheap.  Negative ``e`` is
    allowed.
    """
    if n <= 0:
        return []
    u0 = u[0]
    if u0 == 0:
        raise ZeroDivisionError("power of a series with zero constant term")
    nz = [(j, u[j]) for j in range(1, min(len(u), n)) if u[j]]
    integral = u0 in (1, -1) and all(isinstance(c, int) for _, c in nz) and isinstance(u0, int)
    if integral:
        b0 = u0 ** e if e >= 0 else u0 ** (-e)  # u0 = +-1 is its own inverse
        b = [b0] + [0] * (n - 1)
        for k in range(1, n):
            s = 0
            for j, c in nz:
                if j > k:
                    break
                bk = b[k - j]
                if bk:
                    s += ((e + 1) * j - k) * c * bk
            q, r = divmod(s, k)
            if r:
                raise ArithmeticError("non-integral coefficient in an integral power")
            b[k] = q * u0
        return b
    u0f = Fraction(u0)
    b = [_norm(u0f ** e)] + [0] * (n - 1)
    for k in range(1, n):
        s = 0
        for j, c in nz:
            if j > k:
                break
            bk = b[k - j]
            if bk:
                s += ((e + 1) * j - k) * c * bk
        b[k] = _norm(Fraction(s) / (k * u0f))
    return b


def pow(a: QSeries, e: int) -> QSeries:
    """``a**e`` for any integer ``e`` (negative exponents need a nonzero series)."""
    if a.is_zero():
        if e < 0:
            raise ZeroDivisionError("negative power of the zero series")
        if e == 0:
            raise InvalidArgument("0**0 of a truncated zero series is ambiguous")
        return QSeries.zero(a.precision)
    rel = a.precision - a.valuation
    v = a.valuation * e
    return QSeries.from_coefficients(series_power(a.coeffs, e, rel), v, v + rel)


def invert(a: QSeries) -> QSeries:
    if a.is_zero():
        raise ZeroDivisionError("cannot invert the zero series")
    return pow(a, -1)


@lru_cache(maxsize=256)
def _pentagonal(n: int) -> tuple[tuple[int, int], ...]:
    """Nonzero terms ``(exponent, sign)`` of prod (1 - q^m) below ``q^n``."""
    terms = [(0, 1)]
    k = 1
    while True:
        sign = -1 if k % 2 else 1
        e1 = k * (3 * k - 1) // 2
        e2 = k * (3 * k + 1) // 2
        if e1 >= n:
            break
        terms.append((e1, sign))
        if e2 < n:
            terms.append((e2, sign))
        k += 1
    return tuple(sorted(terms))


def eta_body(scale: int, precision: int) -> QSeries:
    """``prod_{n>=1} (1 - q^(scale*n))`` up to (excluding) ``q^precision``."""
    if not isinstance(scale, int) or scale < 1:
        raise InvalidArgument("scale must be a positive integer")
    if not isinstance(precision, int) or precision < 1:
        raise InvalidArgument("precision must be a positive integer")
    out = [0] * precision
    for e, s in _pentagonal((precision - 1) // scale + 1):
        out[e * scale] = s
    return QSeries(0, tuple(out), precision)
