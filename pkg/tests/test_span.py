import pytest

from etaspan.arith import divisors, is_prime
from etaspan.enumeration import count_eta_quotients
from etaspan.errors import InvalidArgument, InvariantViolation
from etaspan.etaquot import EtaQuotient, existence_weight, q_expansion
from etaspan.gamma0 import dim_modular_forms, level_invariants, sturm_bound
from etaspan.intmat import bareiss_rank
from etaspan.span import (
    SpanReport,
    graded_ring_check,
    prime_level_obstruction,
    span_check,
    weak_span_check,
)

WEIGHT2_LEVELS = [N for N in range(2, 41) if existence_weight(N)[0] == 2]


def independent_rank(basis, H):
    rows = [q_expansion(q, H).coefficients(0, H) for q in basis]
    return bareiss_rank(rows) if rows else 0


def test_level_22():
    rep = span_check(22, 2, "exhaustive")
    assert (rep.dim, rep.rank, rep.spanned, rep.candidates_examined) == (5, 4, False, 4)
    assert rep.mode == "prove-not-spanned" and rep.exact_fallback
    assert set(rep.basis) == {
        EtaQuotient(22, e)
        for e in ({2: 4, 22: 4, 1: -2, 11: -2}, {1: 2, 11: 2}, {2: 2, 22: 2}, {1: 4, 11: 4, 2: -2, 22: -2})
    }


def test_level_36_spanned():
    rep = span_check(36, 2)
    assert rep.spanned and rep.rank == rep.dim == 12
    assert rep.mode == "prove-spanned" and rep.candidates_examined <= 4988
    full = span_check(36, 2, "exhaustive")
    assert full.spanned and full.candidates_examined == 4988


def test_level_one_weight_12():
    rep = span_check(1, 12, "exhaustive")
    assert (rep.dim, rep.rank, rep.spanned) == (2, 1, False)


def test_bad_arguments():
    with pytest.raises(InvalidArgument):
        span_check(12, 2, "sometimes")
    with pytest.raises(InvalidArgument):
        span_check(12, 2, horizon=1)


def test_report_invariants():
    with pytest.raises(InvariantViolation):
        SpanReport(4, 2, 2, 3, 2, False, (), "prove-spanned", 2)


@pytest.mark.parametrize("N", WEIGHT2_LEVELS)
def test_rank_is_independent_of_candidate_order(N):
    asc = tuple(divisors(N))
    a = span_check(N, 2, "exhaustive")
    b = span_check(N, 2, "exhaustive", cusp_order=asc[1::2] + asc[::2])
    assert a.rank == b.rank and a.spanned == b.spanned
    assert a.candidates_examined == b.candidates_examined == count_eta_quotients(N, 2)
    assert a.rank <= a.dim == dim_modular_forms(N, 2)


@pytest.mark.parametrize("N,k", [(12, 2), (22, 2), (28, 2), (36, 2), (20, 4), (1, 12)])
def test_certificates_re_verify(N, k):
    rep = span_check(N, k, "exhaustive")
    H = sturm_bound(N, k)
    assert rep.horizon == H
    assert independent_rank(rep.basis, H) == rep.rank == len(rep.basis)


def test_larger_horizon_gives_same_rank():
    rep = span_check(22, 2, "exhaustive", horizon=40)
    assert rep.rank == 4


@pytest.mark.parametrize(
    "p,count", [(2, 10), (3, 126), (5, 76), (7, 45), (11, 28), (13, 15), (17, 16), (19, 18), (23, 37), (31, 21)]
)
def test_levels_four_p(p, count):
    rep = span_check(4 * p, 2, "early-stop")
    assert count_eta_quotients(4 * p, 2) == count
    assert rep.spanned == (p <= 13)


# -- graded ring ----------------------------------------------------------


def test_graded_ring_examples():
    v = graded_ring_check(11)
    assert not v.generated_by_eta and v.reason == "prime"
    v = graded_ring_check(5)
    assert not v.generated_by_eta and v.reason == "elliptic" and not v.elliptic_free
    assert graded_ring_check(1).reason == "elliptic"  # SL2(Z) itself has elliptic points
    assert graded_ring_check(36).generated_by_eta
    v = graded_ring_check(22)
    assert v.elliptic_free and v.weight2_spanned is False and not v.generated_by_eta


@pytest.mark.parametrize("N", range(1, 61))
def test_graded_ring_consistency(N):
    v = graded_ring_check(N)
    L = level_invariants(N)
    assert v.elliptic_free == (L.eps2 + L.eps3 == 0)
    if is_prime(N) or N == 1 or not v.elliptic_free:
        assert not v.generated_by_eta
    else:
        assert v.generated_by_eta == v.weight2_spanned == span_check(N, 2).spanned


# -- weakly holomorphic ---------------------------------------------------


def test_prime_level_obstruction():
    assert prime_level_obstruction(13) == 1
    assert prime_level_obstruction(11) == 5
    assert prime_level_obstruction(17) == 2
    assert [p for p in range(2, 200) if is_prime(p) and prime_level_obstruction(p) == 1] == [2, 3, 5, 7, 13]
    with pytest.raises(InvalidArgument):
        prime_level_obstruction(15)


def test_weak_span_structural_verdicts():
    assert weak_span_check(11).status == "false"
    assert weak_span_check(1).status == "false"
    assert weak_span_check(10).status == "false"  # elliptic points
    v = weak_span_check(121)
    assert v.status == "not-certified" and v.report is None


def test_weak_span_small_level():
    v = weak_span_check(4)
    assert v.certified and v.certificate_weight == 14
    assert v.report.spanned


def test_weak_span_level_22():
    v = weak_span_check(22)
    assert v.certified and v.certificate_weight == 122
    assert v.report.rank == v.report.dim
