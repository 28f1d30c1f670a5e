"""Rational cuspidal subgroup of J0(2^k).

Cusps of X0(2^k) are grouped by denominator 2^t (t = 0..k), with
phi_t = phi(gcd(2^t, 2^(k-t))) cusps in class t.  Galois-stable cuspidal
divisors are constant on each class, so a degree-zero rational cuspidal
divisor is an integer vector x with sum_t phi_t x_t = 0.  Modular units with
integral coefficients are (up to sign) weight-0 eta-quotients, and the group
is the quotient of the degree-zero lattice by their divisors.  Its invariant
factors come out of a Smith normal form.

Exponent vectors in this module are indexed by t: entry t belongs to
eta(2^t z).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidArgument, InvariantViolation
from .etaquot import EtaQuotient, ligozat_order, newman_is_valid
from .gamma0 import level_invariants
from .intmat import hermite_normal_form, kernel_mod, smith_normal_form

__all__ = [
    "CuspClassLattice",
    "UnitLattice",
    "CuspidalGroupReport",
    "cusp_class_lattice",
    "unit_lattice",
    "printed_generators",
    "divisor_of_unit",
    "relation_matrix",
    "cuspidal_group",
    "closed_form_Ik",
    "relation_divisor",
    "divisor_relations",
]


def _check_k(k) -> None:
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise InvalidArgument(f"k must be a positive integer, got {k!r}")


@dataclass(frozen=True)
class CuspClassLattice:
    k: int
    multiplicities: tuple[int, ...]  # phi_t for t = 0..k

    @property
    def classes(self) -> tuple[int, ...]:
        return tuple(2 ** t for t in range(self.k + 1))

    def degree(self, x) -> int:
        return sum(a * b for a, b in zip(x, self.multiplicities))


def cusp_class_lattice(k: int) -> CuspClassLattice:
    _check_k(k)
    inv = level_invariants(2 ** k)
    phis = tuple(inv.multiplicity(2 ** t) for t in range(k + 1))
    return CuspClassLattice(k, phis)


@dataclass(frozen=True)
class UnitLattice:
    k: int
    basis: tuple[tuple[int, ...], ...]  # Hermite normal form rows
    generators: tuple[tuple[int, ...], ...] | None  # the explicit f_{l,k}, when defined

    def contains(self, r) -> bool:
        return hermite_normal_form(list(self.basis) + [list(r)]) == [list(b) for b in self.basis]


def _constraints(k: int):
    n = k + 1
    C = [
        [1] * n,
        [2 ** i for i in range(n)],
        [2 ** (k - i) for i in range(n)],
        list(range(n)),
    ]
    return C, [0, 24, 24, 2]


def printed_generators(k: int) -> tuple[tuple[int, ...], ...]:
    """The explicit generators f_{0,k}, ..., f_{k-1,k} of the unit group (k >= 7)."""
    if not isinstance(k, int) or k < 7:
        raise InvalidArgument("the explicit generators are defined for k >= 7")
    gens = [_acc(k, [(k - 1, 24), (k, -24)])]
    for l in range(1, 4):
        if (l - k) % 2 == 0:
            gens.append(_acc(k, [(l - 1, -2), (l, 5), (l + 1, -2), (k - 2, -1), (k - 1, 4), (k, -4)]))
        else:
            gens.append(_acc(k, [(l - 1, -2), (l, 5), (l + 1, -2), (k - 1, 1), (k, -2)]))
    for l in range(4, k - 1):
        if (l - k) % 2 == 0:
            gens.append(_acc(k, [(l - 1, -1), (l, 2), (k - 1, 1), (k, -2)]))
        else:
            gens.append(_acc(k, [(l - 1, -1), (l, 2), (k - 2, -1), (k - 1, 4), (k, -4)]))
    gens.append(_acc(k, [(k - 2, -2), (k - 1, 6), (k, -4)]))
    return tuple(gens)


def _acc(k: int, terms) -> tuple[int, ...]:
    v = [0] * (k + 1)
    for i, r in terms:
        v[i] += r
    return tuple(v)


def unit_lattice(k: int) -> UnitLattice:
    """Weight-0 eta-quotient exponent vectors of level 2^k, in Hermite form.

    For k >= 7 the explicit generators are built as well and must span the
    same lattice.
    """
    _check_k(k)
    C, mods = _constraints(k)
    basis = kernel_mod(C, mods, k + 1)
    if len(basis) != k:
        raise InvariantViolation(f"unit lattice for k={k} has rank {len(basis)}, expected {k}")
    gens = None
    if k >= 7:
        gens = printed_generators(k)
        if hermite_normal_form(gens) != basis:
            raise InvariantViolation(f"explicit generators do not span the unit lattice for k={k}")
    return UnitLattice(k, tuple(map(tuple, basis)), gens)


def divisor_of_unit(r, k: int) -> tuple[int, ...]:
    """Orders of the weight-0 eta-quotient ``r`` at the cusp classes 2^0..2^k."""
    _check_k(k)
    r = list(r)
    if len(r) != k + 1:
        raise InvalidArgument(f"exponent vector must have {k + 1} entries")
    N = 2 ** k
    q = EtaQuotient(N, {2 ** t: x for t, x in enumerate(r)})
    if q.doubled_weight != 0 or not newman_is_valid(q):
        raise InvalidArgument("not a weight-0 eta-quotient satisfying the congruence conditions")
    out = []
    for t in range(k + 1):
        o = ligozat_order(q, 2 ** t)
        if o.denominator != 1:
            raise InvariantViolation(f"non-integral order {o} at denominator 2^{t}")
        out.append(int(o))
    if cusp_class_lattice(k).degree(out) != 0:
        raise InvariantViolation("unit divisor does not have degree zero")
    return tuple(out)


def relation_matrix(k: int) -> list[list[int]]:
    """Unit divisors written in the degree-zero basis e_t - phi_t e_0 (t = 1..k)."""
    return [list(divisor_of_unit(r, k)[1:]) for r in unit_lattice(k).basis]


@dataclass(frozen=True)
class CuspidalGroupReport:
    k: int
    invariant_factors: tuple[int, ...]
    matches_closed_form: bool

    @property
    def order(self) -> int:
        out = 1
        for f in self.invariant_factors:
            out *= f
        return out


def cuspidal_group(k: int) -> CuspidalGroupReport:
    _check_k(k)
    diag, _, _ = smith_normal_form(relation_matrix(k))
    if len(diag) != k or 0 in diag:
        raise InvariantViolation("unit divisors do not have full rank in the degree-zero lattice")
    factors = tuple(sorted(d for d in diag if d > 1))
    expected = tuple(sorted(2 ** i for i in closed_form_Ik(k) if i > 0))
    return CuspidalGroupReport(k, factors, factors == expected)


def closed_form_Ik(k: int) -> tuple[int, ...]:
    """Exponents i of the cyclic factors Z/2^i, ascending."""
    _check_k(k)
    if k <= 4:
        return ()
    if k == 5:
        return (2,)
    if k == 6:
        return (1, 2, 2)
    out = []
    for t in range(1, k - 1):
        if k % 2:
            out.append(k - 3 if t == k - 2 else (t - 1) // 2 + (k - 1) // 2 - 2)
        else:
            out.append(k - 4 if t >= k - 3 else t // 2 + k // 2 - 3)
    return tuple(sorted(out))


def relation_divisor(l: int, k: int) -> tuple[int, ...]:
    """The cuspidal divisor d_{l,k}, as coefficients per cusp class t = 0..k."""
    _check_k(k)
    if not 1 <= l <= k - 1 or 2 * l == k:
        raise InvalidArgument(f"d_{{l,k}} is not defined for l={l}, k={k}")
    n = [0] * (k + 1)
    if l == k - 1:
        n[k - 1], n[k] = 1, -1
    elif l == 1:
        n[1], n[k] = 1, -1
    elif l == 2:
        n[2], n[k - 1], n[k] = 1, 1, -3
    elif l == 3:
        n[3], n[k] = 1, -4
    elif 2 * l < k:
        n[l] = 1
        if l % 2:
            n[k - 1], n[k] = 2 ** (l - 1), -(2 ** l)
        else:
            n[k - 1], n[k] = -(2 ** (l - 2)), -(2 ** (l - 2))
    elif l % 2:
        if l > k - 3:
            raise InvalidArgument(f"d_{{l,k}} is not defined for l={l}, k={k}")
        for t in range(l, k - 1):
            n[t] = 1
        n[k - 1] = 1 + 2 ** (k - l - 1)
        n[k] = -3 * 2 ** (k - l - 1) + 1
    else:
        for t in range(l, k):
            n[t] = 1
        n[k] = -(2 ** (k - l)) + 1
    return tuple(n)


def divisor_relations(k: int) -> list[tuple[int, str, bool]]:
    """Check the stated relations between d_{l,k} and the divisors of f_{l,k}.

    Returns ``(l, form, holds)`` for every l where a relation is stated and
    both sides are defined.
    """
    gens = printed_generators(k)
    div = [divisor_of_unit(g, k) for g in gens]
    out = []
    for l in range(1, k):
        try:
            d = relation_divisor(l, k)
        except InvalidArgument:
            continue
        if l <= 3:
            c, rhs, form = 2 ** (k - l - 3), div[l], "2^(k-l-3) d = Div f_l"
        elif 2 * l < k:
            c = 2 ** (k - l - 3)
            rhs = tuple(2 * a - b for a, b in zip(div[l], div[l + 1]))
            form = "2^(k-l-3) d = 2 Div f_l - Div f_(l+1)"
        elif l <= k - 2:
            c, rhs, form = 2 ** (l - 4), div[l], "2^(l-4) d = Div f_l"
        else:
            c, rhs, form = 2 ** (k - 4), div[k - 1], "2^(k-4) d = Div f_(k-1)"
        out.append((l, form, tuple(c * x for x in d) == rhs))
    return out
