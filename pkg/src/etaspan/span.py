"""Exact spanning verdicts for spaces of modular forms by eta-quotients.

Candidates are streamed from the enumeration engine and their q-expansions
up to the Sturm bound are row-reduced into a growing basis.  In early-stop
mode a deterministic random sample of candidates is tried first, because
the depth-first stream starts with quotients that share their leading cusp
orders and so span only a subspace; any spanning subset is a proof.  Elimination is
done modulo a large prime first because it is fast.  A set of rows that is
independent mod p is independent over Q, so reaching ``rank == dim`` mod p
is already an exact proof of spanning.  Whenever the stream runs out short
of ``dim``, the rank is recomputed exactly with fraction-free integer
elimination over every candidate, and then re-checked with five extra
coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Literal

from .arith import is_prime
from .enumeration import CuspLattice, iter_eta_quotients
from .errors import InvalidArgument, InvariantViolation
from .etaquot import EtaQuotient, expansion_coefficients, expansion_coefficients_mod
from .gamma0 import dim_modular_forms, level_invariants, sturm_bound
from .intmat import DEFAULT_PRIME, IntegerEchelon, ModularEchelon, bareiss_rank, modular_rank
from .magic import magic_weight

__all__ = [
    "SpanReport",
    "span_check",
    "GradedRingVerdict",
    "graded_ring_check",
    "WeakSpanVerdict",
    "weak_span_check",
    "prime_level_obstruction",
    "UNCERTIFIED_WEAK_LEVELS",
]

Mode = Literal["early-stop", "exhaustive"]

CERTIFY_PRIME = 1048573  # second prime for re-verifying certificates
SAMPLE_SEED = 0
UNCERTIFIED_WEAK_LEVELS = frozenset({121, 209})


@dataclass(frozen=True)
class SpanReport:
    level: int
    weight: int
    dim: int
    candidates_examined: int
    rank: int
    spanned: bool
    basis: tuple[EtaQuotient, ...]
    mode: str
    horizon: int
    exact_fallback: bool = False

    def __post_init__(self):
        if self.rank > self.dim or self.spanned != (self.rank == self.dim) or len(self.basis) != self.rank:
            raise InvariantViolation("inconsistent span report")


def _exact_rank(quotients, horizon: int, seed=()) -> tuple[int, list[EtaQuotient]]:
    ech = IntegerEchelon(horizon)
    basis = []
    for q in list(seed) + [q for q in quotients if q not in seed]:
        if ech.add(expansion_coefficients(q, 0, horizon)):
            basis.append(q)
    return ech.rank, basis


def _certify(basis, horizon: int) -> None:
    """Independent second elimination of the certificate rows."""
    rows = [expansion_coefficients(q, 0, horizon) for q in basis]
    if len(rows) <= 40:
        r = bareiss_rank(rows)
    else:
        r = modular_rank(rows, CERTIFY_PRIME)
        if r != len(rows):
            r = bareiss_rank(rows)
    if r != len(rows):
        raise InvariantViolation("basis certificate failed re-verification")


def span_check(
    N: int,
    k: int,
    mode: Mode = "early-stop",
    cusp_order: tuple[int, ...] | None = None,
    horizon: int | None = None,
) -> SpanReport:
    """Is M_k(Gamma0(N)) spanned by holomorphic eta-quotients?

    ``early-stop`` stops as soon as the rank reaches the dimension;
    ``exhaustive`` walks every candidate.  ``cusp_order`` changes the
    candidate order (not the verdict).
    """
    if mode not in ("early-stop", "exhaustive"):
        raise InvalidArgument(f"unknown span mode {mode!r}")
    dim = dim_modular_forms(N, k)
    H = sturm_bound(N, k) if horizon is None else horizon
    if H < sturm_bound(N, k):
        raise InvalidArgument("horizon must be at least the Sturm bound")
    ech = ModularEchelon(H, DEFAULT_PRIME)
    basis: list[EtaQuotient] = []
    seen: list[EtaQuotient] = []
    sampled: set[EtaQuotient] = set()

    def feed(q) -> None:
        seen.append(q)
        if ech.add(expansion_coefficients_mod(q, 0, H, DEFAULT_PRIME)):
            basis.append(q)

    if mode == "early-stop" and dim:
        lat = CuspLattice(N, cusp_order)
        for c in lat.sample_orders(k, 20 * dim + 50, SAMPLE_SEED):
            q = EtaQuotient.from_vector(N, lat.divisors, lat.exponents_from_orders(c))
            sampled.add(q)
            feed(q)
            if ech.rank == dim:
                break
    examined = len(seen)
    stream = iter_eta_quotients(N, k, cusp_order)
    if not (mode == "early-stop" and ech.rank == dim):
        for q in stream:
            if q in sampled:
                continue
            examined += 1
            if ech.rank < dim:
                feed(q)
            if ech.rank == dim and mode == "early-stop":
                break
    if mode == "exhaustive" and ech.rank == dim:
        examined += sum(1 for _ in stream)
    fallback = False
    if ech.rank < dim:
        fallback = True
        rank, basis = _exact_rank(seen, H, seed=basis)
        if rank < dim:
            again, _ = _exact_rank(seen, H + 5, seed=basis)
            if again != rank:
                raise InvariantViolation(
                    f"rank {rank} at {H} coefficients but {again} at {H + 5}"
                )
    _certify(basis, H)
    return SpanReport(
        N, k, dim, examined, len(basis), len(basis) == dim, tuple(basis),
        "prove-spanned" if mode == "early-stop" else "prove-not-spanned", H, fallback,
    )


@dataclass(frozen=True)
class GradedRingVerdict:
    level: int
    elliptic_free: bool
    weight2_spanned: bool | None
    generated_by_eta: bool
    reason: str  # elliptic | level-one | prime | weight2-spanned | weight2-not-spanned
    candidates: int | None = None
    dim: int | None = None

    def __post_init__(self):
        if self.generated_by_eta and not self.elliptic_free:
            raise InvariantViolation("generation by eta-quotients needs an elliptic-free level")


def graded_ring_check(N: int) -> GradedRingVerdict:
    """Is the graded ring of modular forms on Gamma0(N) generated by eta-quotients?"""
    inv = level_invariants(N)
    free = inv.elliptic_free
    if not free:
        return GradedRingVerdict(N, False, None, False, "elliptic")
    if N == 1:
        return GradedRingVerdict(N, free, None, False, "level-one")
    if is_prime(N):
        return GradedRingVerdict(N, free, None, False, "prime")
    rep = span_check(N, 2)
    reason = "weight2-spanned" if rep.spanned else "weight2-not-spanned"
    return GradedRingVerdict(N, True, rep.spanned, rep.spanned, reason, rep.candidates_examined, rep.dim)


@dataclass(frozen=True)
class WeakSpanVerdict:
    level: int
    status: str  # certified | false | not-certified
    reason: str
    certificate_weight: int | None = None
    report: SpanReport | None = None

    @property
    def certified(self) -> bool:
        return self.status == "certified"


def weak_span_check(N: int) -> WeakSpanVerdict:
    """Certify that weakly holomorphic forms with poles only at infinity are spanned by eta-quotients.

    The certificate is a spanning of M_{r+2}(Gamma0(N)) by holomorphic
    eta-quotients, where r is the weight of the quotient E_{N,N} vanishing
    only at infinity.  Only the positive direction is ever certified.
    """
    inv = level_invariants(N)
    if N == 1 or is_prime(N):
        return WeakSpanVerdict(N, "false", "not composite")
    if not inv.elliptic_free:
        return WeakSpanVerdict(N, "false", "elliptic points bar weight-2 eta-quotients")
    r = magic_weight(N, N)
    if N in UNCERTIFIED_WEAK_LEVELS:
        return WeakSpanVerdict(N, "not-certified", "level known to resist the certificate", r + 2)
    rep = span_check(N, r + 2, "early-stop")
    if rep.spanned:
        return WeakSpanVerdict(N, "certified", "eta-quotients span the certificate weight", r + 2, rep)
    return WeakSpanVerdict(N, "not-certified", "eta-quotients do not span the certificate weight", r + 2, rep)


def prime_level_obstruction(p: int) -> int:
    """(p - 1) / gcd(24, p - 1): the power of the order-at-zero obstruction at prime level p."""
    if not isinstance(p, int) or not is_prime(p):
        raise InvalidArgument(f"{p!r} is not prime")
    return (p - 1) // gcd(24, p - 1)
