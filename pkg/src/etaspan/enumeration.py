"""Enumeration and counting of holomorphic eta-quotients in M_k(Gamma0(N)).

The search runs in cusp-order space rather than exponent space.  Ligozat's
formula is an invertible linear map ``r -> c`` from exponent vectors to
vectors of cusp orders ``c_d``.  A Newman-valid quotient has integral
orders, so the Newman lattice maps onto a full-rank lattice ``Lam`` in
``Z^{d(N)}``.  The holomorphic quotients of weight k are exactly the points
of ``Lam`` in the simplex ``{c >= 0, sum_d phi(gcd(d, N/d)) c_d = k [SL2:Gamma0(N)]/12}``.

* Listing walks that simplex depth first, one cusp denominator at a time,
  using a Hermite basis of the section lattice so that every coordinate steps
  by its lattice stride and every leaf is a genuine quotient.
* Counting runs a knapsack dynamic programme over the quotient group
  ``Z^n / Lam`` (read off a Smith form) and never materialises a quotient.

Every emitted exponent vector is checked against the exponent bound
``sum |r_delta| <= exponent_bound(N, k)``.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd
from typing import Iterator, Literal

import numpy as np

from .arith import divisors, factor, ord_p, prime_factors
from .errors import InvalidArgument, InvariantViolation, PreconditionViolation
from .etaquot import EtaQuotient, existence_weight
from .gamma0 import level_invariants
from .intmat import hermite_normal_form, integer_kernel, inverse, kernel_mod, smith_normal_form

__all__ = [
    "EnumerationSpec",
    "exponent_bound",
    "enumerate_eta_quotients",
    "eta_quotients",
    "count_eta_quotients",
    "iter_eta_quotients",
    "count_genus_zero",
    "CuspLattice",
]

Mode = Literal["collect", "count", "stream"]


def exponent_bound(N: int, k: int) -> Fraction:
    """Upper bound for sum |r_delta| over eta-quotients in M_k(Gamma0(N))."""
    if not isinstance(k, int) or k < 1:
        raise InvalidArgument("weight must be a positive integer")
    b = Fraction(2 * k)
    for p, e in factor(N):
        b *= Fraction(p + 1, p - 1) ** min(2, e)
    return b


@dataclass(frozen=True)
class EnumerationSpec:
    level: int
    doubled_weight: int
    mode: Mode = "collect"
    bound: Fraction = field(default=None)
    divisor_order: tuple[int, ...] = field(default=None)
    threads: int = 1

    def __post_init__(self):
        level_invariants(self.level)
        if self.doubled_weight < 4 or self.doubled_weight % 4:
            raise InvalidArgument("enumeration needs an even weight k >= 2 (doubled weight divisible by 4)")
        if self.mode not in ("collect", "count", "stream"):
            raise InvalidArgument(f"unknown mode {self.mode!r}")
        expected = exponent_bound(self.level, self.weight)
        if self.bound is None:
            object.__setattr__(self, "bound", expected)
        elif self.bound != expected:
            raise InvalidArgument("bound must equal exponent_bound(N, k)")
        if self.divisor_order is None:
            object.__setattr__(self, "divisor_order", tuple(sorted(divisors(self.level), reverse=True)))
        elif sorted(self.divisor_order) != list(divisors(self.level)):
            raise InvalidArgument("divisor_order must be a permutation of the divisors of N")

    @classmethod
    def create(cls, N: int, k: int, mode: Mode = "collect", **kw) -> "EnumerationSpec":
        return cls(N, 2 * k, mode, **kw)

    @property
    def weight(self) -> int:
        return self.doubled_weight // 2


@lru_cache(maxsize=None)
def _ligozat_data(N: int):
    """Ligozat matrix (cusp d x divisor delta), scaled integral inverse, and a basis of Lam."""
    divs = divisors(N)
    A = [[Fraction(N * gcd(d, dl) ** 2, 24 * gcd(d, N // d) * d * dl) for dl in divs] for d in divs]
    Ainv = inverse(A)
    den = 1
    for row in Ainv:
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
    Bint = [[int(x * den) for x in row] for row in Ainv]
    ps = prime_factors(N)
    # Newman's conditions plus even weight (sum r = 2k with k even)
    C = [list(divs), [N // d for d in divs], [1] * len(divs)] + [[ord_p(p, d) for d in divs] for p in ps]
    L = kernel_mod(C, [24, 24, 4] + [2] * len(ps), len(divs))
    lam = []
    for r in L:
        c = [sum(a * x for a, x in zip(row, r)) for row in A]
        if any(x.denominator != 1 for x in c):
            raise InvariantViolation(f"a Newman-valid exponent vector at level {N} has non-integral cusp orders")
        lam.append([int(x) for x in c])
    return divs, A, Bint, den, hermite_normal_form(lam)


class CuspLattice:
    """Lattice-point machinery for holomorphic eta-quotients of one level.

    ``cusp_order`` is the order in which cusp denominators are branched on;
    it only affects traversal order, never the resulting set.
    """

    def __init__(self, N: int, cusp_order: tuple[int, ...] | None = None):
        self.level = N
        inv = level_invariants(N)
        self.index = inv.index
        self.divisors, self.A, self._B, self._den, lam = _ligozat_data(N)
        if cusp_order is None:
            cusp_order = tuple(sorted(self.divisors, reverse=True))
        if sorted(cusp_order) != list(self.divisors):
            raise InvalidArgument("cusp_order must be a permutation of the divisors")
        self.cusp_order = tuple(cusp_order)
        pos = {d: i for i, d in enumerate(self.divisors)}
        self._perm = [pos[d] for d in self.cusp_order]
        self.weights = [inv.multiplicity(d) for d in self.cusp_order]
        self.basis = hermite_normal_form([[row[i] for i in self._perm] for row in lam])
        self._residues = None
        self._reach_cache: dict = {}

    # -- conversions ----------------------------------------------------

    def exponents_from_orders(self, c_perm) -> tuple[int, ...]:
        """Exponent vector (ascending divisors) of the quotient with cusp orders ``c``."""
        c = [0] * len(c_perm)
        for i, x in zip(self._perm, c_perm):
            c[i] = x
        out = []
        den = self._den
        for row in self._B:
            s = sum(a * x for a, x in zip(row, c) if x)
            if s % den:
                raise InvariantViolation("cusp-order vector does not come from an integral exponent vector")
            out.append(s // den)
        return tuple(out)

    def target(self, k: int) -> int | None:
        t = Fraction(k * self.index, 12)
        return int(t) if t.denominator == 1 else None

    # -- traversal ------------------------------------------------------

    def _section(self, T: int):
        """Particular point and Hermite basis for Lam /\\ {weights . c = T}, last coordinate dropped."""
        n = len(self.weights)
        w = [sum(a * b for a, b in zip(row, self.weights)) for row in self.basis]
        g = 0
        for x in w:
            g = gcd(g, x)
        if g == 0 or T % g:
            return None
        # extended gcd over w: coefficients x with x . w = g
        coef = [0] * n
        acc = 0
        for i, wi in enumerate(w):
            if wi == 0:
                continue
            if acc == 0:
                coef[i] = 1 if wi > 0 else -1
                acc = abs(wi)
                continue
            a, b = _xgcd(acc, wi)
            acc2 = gcd(acc, wi)
            coef = [a * x for x in coef]
            coef[i] = b
            acc = acc2
        if acc != g:
            raise InvariantViolation("extended gcd mismatch")
        x = [cf * (T // g) for cf in coef]
        p = [sum(xi * row[j] for xi, row in zip(x, self.basis)) for j in range(n)]
        ker = integer_kernel([w], n)
        sec = [[sum(ki * row[j] for ki, row in zip(kv, self.basis)) for j in range(n)] for kv in ker]
        H = hermite_normal_form([row[:-1] for row in sec])
        if len(H) != n - 1 or any(H[i][i] <= 0 for i in range(n - 1)):
            raise InvariantViolation("section lattice is not of full rank in the leading coordinates")
        return p, H

    def _walk(self, k: int, first=None, rng=None, node_budget=None):
        """Depth-first walk over the section lattice, pruned by reachability.

        Yields cusp-order vectors.  With ``rng`` the children of every node
        are visited nearest-first to a random share of the remaining budget
        (used for sampling), otherwise in increasing order.  ``node_budget``
        stops the walk after that many nodes.
        """
        T = self.target(k)
        if T is None:
            return
        n = len(self.weights)
        if n == 1:
            if T % self.weights[0] == 0:
                c = (T // self.weights[0],)
                if self._in_lattice(c):
                    yield c
            return
        sec = self._section(T)
        if sec is None:
            return
        p, H = sec
        wts = self.weights
        m = n - 1
        c = [0] * n
        allowed = None if first is None else set(first)
        mods, gens, radix, reach = self._reach_tables(T)
        nm = len(mods)
        budget = [node_budget]

        def completable(j, g, rem):
            # is -g reachable by coordinates j.. with weighted sum rem?
            idx = 0
            for i in range(nm):
                idx += (-g[i] % mods[i]) * radix[i]
            return reach[j][rem, idx]

        def rec(j, offs, rem, g):
            h = H[j][j]
            o = offs[j]
            lo, hi = _ceil_div(-o, h), (rem // wts[j] - o) // h
            xs = range(lo, hi + 1)
            if rng is not None and lo < hi:
                aim = ((1 - rng.random() ** (1 / (m - j))) * rem / wts[j] - o) / h
                xs = sorted(xs, key=lambda x: abs(x - aim))
            row = H[j]
            gj = gens[j]
            for x in xs:
                if budget[0] is not None:
                    budget[0] -= 1
                    if budget[0] < 0:
                        return
                cj = o + h * x
                if j == 0 and allowed is not None and cj not in allowed:
                    continue
                c[j] = cj
                r2 = rem - wts[j] * cj
                g2 = [(a + cj * b) % t for a, b, t in zip(g, gj, mods)]
                if j + 1 == m:
                    q, rr = divmod(r2, wts[m])
                    if rr:
                        raise InvariantViolation("last cusp order is not integral")
                    c[m] = q
                    yield tuple(c)
                elif completable(j + 1, g2, r2):
                    new = offs[:]
                    for l in range(j + 1, m):
                        new[l] += x * row[l]
                    yield from rec(j + 1, new, r2, g2)

        if completable(0, [0] * nm, T):
            yield from rec(0, list(p[:m]), T, [0] * nm)

    def iter_orders(self, k: int, first: tuple[int, ...] | None = None) -> Iterator[tuple[int, ...]]:
        """Yield cusp-order vectors (in ``cusp_order``) of all holomorphic quotients of weight k.

        Lexicographic in the branching order.  ``first`` restricts the walk
        to the given values of the first coordinate (used for parallel splits).
        """
        return self._walk(k, first)

    def sample_orders(self, k: int, count: int, seed: int = 0, node_budget: int = 2000) -> Iterator[tuple[int, ...]]:
        """Lazily yield up to ``count`` distinct cusp-order vectors found by randomised descents.

        Every descent picks each coordinate near a draw from the marginal of
        the uniform distribution on the simplex.  Deterministic for a given
        seed, but in general not the full set.
        """
        rng = random.Random(seed)
        found: set[tuple[int, ...]] = set()
        for _ in range(4 * count):
            if len(found) >= count:
                return
            leaf = next(self._walk(k, rng=rng, node_budget=node_budget), None)
            if leaf is not None and leaf not in found:
                found.add(leaf)
                yield leaf

    def _in_lattice(self, c) -> bool:
        try:
            r = self.exponents_from_orders(c)
        except InvariantViolation:
            return False
        return _newman_vec(self.level, self.divisors, r)

    def first_coordinate_values(self, k: int) -> list[int]:
        T = self.target(k)
        if T is None or len(self.weights) == 1:
            return []
        sec = self._section(T)
        if sec is None:
            return []
        p, H = sec
        h, o = H[0][0], p[0]
        hi = T // self.weights[0]
        return [o + h * x for x in range(_ceil_div(-o, h), (hi - o) // h + 1)]

    # -- residues -------------------------------------------------------

    def residue_group(self):
        """Invariant factors s_i > 1 of Z^n / Lam and the residue of each unit vector."""
        if self._residues is None:
            diag, U, V = smith_normal_form(self.basis)
            keep = [i for i, s in enumerate(diag) if s != 1]
            if any(diag[i] == 0 for i in keep):
                raise InvariantViolation("cusp-order lattice is not of full rank")
            mods = [diag[i] for i in keep]
            gens = [[V[j][i] % diag[i] for i in keep] for j in range(len(self.weights))]
            self._residues = (mods, gens)
        return self._residues

    def coarse_group(self, limit: int):
        """A quotient of Z^n / Lam of order at most ``limit``.

        Prime-power parts of the invariant factors are kept smallest first.
        Any quotient gives a necessary condition for lying in Lam.
        """
        mods, gens = self.residue_group()
        parts = sorted((q ** e, q, e, i) for i, s in enumerate(mods) for q, e in factor(s))
        keep: dict[int, int] = {}
        size = 1
        for _, q, e, i in parts:
            while e and size * q ** e > limit:
                e -= 1
            if e:
                keep[i] = keep.get(i, 1) * q ** e
                size *= q ** e
        idx = sorted(keep)
        return [keep[i] for i in idx], [[g[i] % keep[i] for i in idx] for g in gens]

    def _reach_tables(self, T: int):
        """Coarse residues and, per suffix j, which residues suffixes of weighted sum s reach."""
        key = T
        if key not in self._reach_cache:
            n = len(self.weights)
            limit = max(1, TABLE_LIMIT // ((n + 1) * (T + 1)))
            mods, gens = self.coarse_group(limit)
            radix, digits = _mixed_radix(mods)
            size = len(digits)
            reach = [None] * (n + 1)
            R = np.zeros((T + 1, size), dtype=bool)
            R[0, 0] = True
            reach[n] = R
            for j in range(n - 1, -1, -1):
                R = reach[j + 1].copy()
                perm = _shift(digits, radix, mods, gens[j])
                wt = self.weights[j]
                for s in range(wt, T + 1):
                    R[s, perm] |= R[s - wt]
                reach[j] = R
            self._reach_cache[key] = (mods, gens, [int(x) for x in radix], reach)
        return self._reach_cache[key]

    # -- counting -------------------------------------------------------

    def count(self, k: int) -> int:
        """Exact number of lattice points, by dynamic programming over Z^n / Lam."""
        T = self.target(k)
        if T is None:
            return 0
        mods, gens = self.residue_group()
        return _knapsack_count(T, self.weights, mods, gens)

    def count_upper_bound(self, k: int, limit: int = 200_000) -> int:
        """Number of points of a coarser lattice containing Lam: an upper bound for the count."""
        T = self.target(k)
        if T is None:
            return 0
        mods, gens = self.coarse_group(limit)
        return _knapsack_count(T, self.weights, mods, gens)

    def dp_size(self, k: int) -> int:
        """Number of table-cell updates the counting programme performs."""
        T = self.target(k) or 0
        size = 1
        for i, row in enumerate(self.basis):
            size *= row[i]  # |Z^n / Lam| is the Hermite determinant
        return size * (T + 1) * len(self.weights)


TABLE_LIMIT = 40_000_000  # cells in the reachability tables of one walk


def _mixed_radix(mods):
    size = 1
    for s in mods:
        size *= s
    radix = np.ones(len(mods), dtype=np.int64)
    for i in range(len(mods) - 2, -1, -1):
        radix[i] = radix[i + 1] * mods[i + 1]
    digits = np.zeros((size, len(mods)), dtype=np.int64)
    idx = np.arange(size, dtype=np.int64)
    for i, s in enumerate(mods):
        digits[:, i] = (idx // radix[i]) % s
    return radix, digits


def _shift(digits, radix, mods, g):
    """Index permutation for adding the residue ``g``."""
    if not len(mods):
        return np.zeros(1, dtype=np.int64)
    return ((digits + np.asarray(g, dtype=np.int64)) % np.asarray(mods, dtype=np.int64)) @ radix


def _knapsack_count(T, weights, mods, gens) -> int:
    n = len(weights)
    radix, digits = _mixed_radix(mods)
    dtype = np.int64 if comb(T + n - 1, n - 1) < 2 ** 62 else object
    dp = np.zeros((T + 1, len(digits)), dtype=dtype)
    dp[0, 0] = 1
    for wt, g in zip(weights, gens):
        perm = _shift(digits, radix, mods, g)
        for s in range(wt, T + 1):
            dp[s, perm] += dp[s - wt]
    return int(dp[T, 0])


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _xgcd(a: int, b: int) -> tuple[int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        x0, y0 = -x0, -y0
    return x0, y0


def _newman_vec(N, divs, r) -> bool:
    if sum(d * x for d, x in zip(divs, r)) % 24:
        return False
    if sum((N // d) * x for d, x in zip(divs, r)) % 24:
        return False
    return all(sum(x * ord_p(p, d) for d, x in zip(divs, r)) % 2 == 0 for p in prime_factors(N))


def _resolve_threads(threads: int | None) -> int:
    if threads is None:
        env = os.environ.get("ETASPAN_THREADS")
        threads = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(threads))


def _orders_chunk(args):
    N, k, cusp_order, firsts = args
    lat = CuspLattice(N, cusp_order)
    return [lat.exponents_from_orders(c) for c in lat.iter_orders(k, tuple(firsts))]


def _exponent_vectors(lat: CuspLattice, k: int, threads: int = 1) -> Iterator[tuple[int, ...]]:
    if threads > 1:
        firsts = lat.first_coordinate_values(k)
        if len(firsts) > 1:
            chunks = [firsts[i::threads] for i in range(threads)]
            chunks = [ch for ch in chunks if ch]
            with ProcessPoolExecutor(max_workers=len(chunks)) as ex:
                parts = list(ex.map(_orders_chunk, [(lat.level, k, lat.cusp_order, ch) for ch in chunks]))
            merged = []
            for part in parts:
                merged.extend(part)
            yield from merged
            return
    for c in lat.iter_orders(k):
        yield lat.exponents_from_orders(c)


def _checked(spec: EnumerationSpec, vectors) -> Iterator[tuple[int, ...]]:
    twok = spec.doubled_weight
    B = spec.bound
    for r in vectors:
        if sum(r) != twok:
            raise InvariantViolation(f"enumerated vector {r} has the wrong weight")
        if sum(abs(x) for x in r) > B:
            raise InvariantViolation(f"enumerated vector {r} violates the exponent bound {B}")
        yield r


def _sort_key(spec: EnumerationSpec, divs):
    pos = {d: i for i, d in enumerate(divs)}
    order = [pos[d] for d in spec.divisor_order]
    return lambda r: tuple(r[i] for i in order)


def enumerate_eta_quotients(spec: EnumerationSpec):
    """All holomorphic eta-quotients in M_k(Gamma0(N)).

    ``collect`` returns a list sorted lexicographically by the exponents read
    in ``spec.divisor_order``; ``stream`` yields the same sequence; ``count``
    returns the number without building any quotient.
    """
    N, k = spec.level, spec.weight
    lat = CuspLattice(N, spec.divisor_order)
    if spec.mode == "count":
        return count_eta_quotients(N, k)
    divs = lat.divisors
    vecs = sorted(_checked(spec, _exponent_vectors(lat, k, spec.threads)), key=_sort_key(spec, divs))
    quotients = [EtaQuotient.from_vector(N, divs, r) for r in vecs]
    if spec.mode == "collect":
        return quotients
    return iter(quotients)


def eta_quotients(N: int, k: int, threads: int = 1) -> list[EtaQuotient]:
    return enumerate_eta_quotients(EnumerationSpec.create(N, k, "collect", threads=threads))


def iter_eta_quotients(N: int, k: int, cusp_order: tuple[int, ...] | None = None) -> Iterator[EtaQuotient]:
    """Lazily yield the quotients in traversal order (no sorting, no buffering).

    The order is deterministic for a given ``cusp_order``; this is the
    stream used by the spanning checks.
    """
    spec = EnumerationSpec.create(N, k, "stream")
    lat = CuspLattice(N, cusp_order)
    for r in _checked(spec, (lat.exponents_from_orders(c) for c in lat.iter_orders(k))):
        yield EtaQuotient.from_vector(N, lat.divisors, r)


DP_LIMIT = 20_000_000


def count_eta_quotients(N: int, k: int, method: str = "auto", threads: int = 1) -> int:
    """Number of holomorphic eta-quotients in M_k(Gamma0(N)).

    ``method="dp"`` counts residues in Z^n/Lam by dynamic programming,
    ``"dfs"`` walks the lattice without materialising quotients; ``"auto"``
    picks the dynamic programme unless its table would be too large.
    """
    EnumerationSpec.create(N, k, "count")
    lat = CuspLattice(N)
    if method == "auto":
        method = "dp" if lat.dp_size(k) <= DP_LIMIT else "dfs"
    if method == "dp":
        return lat.count(k)
    if method == "dfs":
        if threads > 1:
            firsts = lat.first_coordinate_values(k)
            chunks = [firsts[i::threads] for i in range(threads) if firsts[i::threads]]
            if len(chunks) > 1:
                with ProcessPoolExecutor(max_workers=len(chunks)) as ex:
                    return sum(ex.map(_count_chunk, [(N, k, ch) for ch in chunks]))
        return sum(1 for _ in lat.iter_orders(k))
    raise InvalidArgument(f"unknown counting method {method!r}")


def _count_chunk(args):
    N, k, firsts = args
    return sum(1 for _ in CuspLattice(N).iter_orders(k, tuple(firsts)))


def count_genus_zero(N: int, k: int) -> int:
    """Number of tuples c_d >= 0 with sum_d c_d phi(gcd(d, N/d)) = (k/12)[SL2(Z):Gamma0(N)].

    On a genus-zero level carrying weight-k eta-quotients this is the number
    of eta-quotients in M_k(Gamma0(N)).
    """
    inv = level_invariants(N)
    if not isinstance(k, int) or k < 2 or k % 2:
        raise InvalidArgument("weight must be an even integer >= 2")
    if inv.genus != 0:
        raise PreconditionViolation(f"X0({N}) has genus {inv.genus}, not 0")
    w0, _ = existence_weight(N)
    if k % w0:
        raise PreconditionViolation(
            f"no holomorphic eta-quotient of weight {k} on Gamma0({N}): weights must be multiples of {w0}"
        )
    T = Fraction(k * inv.index, 12)
    if T.denominator != 1:
        raise PreconditionViolation("(k/12) * index is not an integer")
    T = int(T)
    ways = [1] + [0] * T
    for _, m in inv.cusp_classes:
        for s in range(m, T + 1):
            ways[s] += ways[s - m]
    return ways[T]
