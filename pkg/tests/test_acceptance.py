"""One test per acceptance criterion, at the stated tolerances and time limits."""

import io
import json
import random
import time
from fractions import Fraction
from math import gcd

import pytest

from etaspan import (
    EtaQuotient,
    apply_V,
    closed_form_Ik,
    count_eta_quotients,
    count_genus_zero,
    cuspidal_group,
    eta_quotients,
    exponent_bound,
    graded_ring_check,
    is_holomorphic,
    level_invariants,
    ligozat_order,
    magic_eta,
    q_expansion,
    recognize,
    span_check,
)
from etaspan.arith import divisors, is_prime
from etaspan.cli import run
from etaspan.etaquot import parse_quotient
from etaspan.magic import bound_factor
from oracles import box_scan, genus_zero_polynomial, ligozat_naive


def cli_payload(*argv):
    out, err = io.StringIO(), io.StringIO()
    assert run([*argv, "--json", "--no-timing"], out, err) == 0, err.getvalue()
    return json.loads(out.getvalue())["payload"]


def vectors(qs, N):
    return sorted(tuple(q.as_dict().get(d, 0) for d in divisors(N)) for q in qs)


def test_criterion_1_level_22():
    t = time.perf_counter()
    p = cli_payload("enumerate", "--level", "22", "--weight", "2")
    expected = {
        EtaQuotient(22, {2: 4, 22: 4, 1: -2, 11: -2}),
        EtaQuotient(22, {1: 2, 11: 2}),
        EtaQuotient(22, {2: 2, 22: 2}),
        EtaQuotient(22, {1: 4, 11: 4, 2: -2, 22: -2}),
    }
    assert p["count"] == 4 and {parse_quotient(22, s) for s in p["quotients"]} == expected
    s = cli_payload("span", "--level", "22", "--weight", "2", "--exhaustive")
    assert s["dim"] == 5 and s["spanned"] is False
    assert time.perf_counter() - t < 1


def test_criterion_2_level_36_count():
    t = time.perf_counter()
    assert len(eta_quotients(36, 2)) == 4988
    assert cli_payload("enumerate", "--level", "36", "--weight", "2", "--count-only") == {"count": 4988}
    assert time.perf_counter() - t < 30


def test_criterion_3_four_p_table():
    t = time.perf_counter()
    table = {2: 10, 3: 126, 5: 76, 7: 45, 11: 28, 13: 15, 17: 16, 19: 18, 23: 37, 31: 21, 73: 9}
    for p, n in table.items():
        assert count_eta_quotients(4 * p, 2) == n
    for p in filter(is_prime, range(2, 74)):
        assert span_check(4 * p, 2).spanned == (p <= 13), p
    assert time.perf_counter() - t < 300


def _graded_ring_desk(max_level):
    verdicts = [graded_ring_check(N) for N in range(1, max_level + 1)]
    positives = []
    for v in verdicts:
        inv = level_invariants(v.level)
        if is_prime(v.level) or not inv.elliptic_free:
            assert not v.generated_by_eta
        if v.generated_by_eta:
            assert v.level > 1 and not is_prime(v.level) and inv.elliptic_free
            positives.append(v.level)
    return positives


def test_criterion_4_graded_ring_desk():
    positives = _graded_ring_desk(100)
    assert positives  # level 4 at least
    assert 4 in positives and 22 not in positives


@pytest.mark.extended
def test_criterion_4_graded_ring_500():
    assert len(_graded_ring_desk(500)) == 121


def test_criterion_5_genus_zero():
    t = time.perf_counter()
    for N in (4, 8, 16):
        for k in (2, 4, 6, 8, 10, 12):
            n = count_genus_zero(N, k)
            assert n == genus_zero_polynomial(N, k) == count_eta_quotients(N, k)
            if k <= 6:
                assert n == len(eta_quotients(N, k))
    assert time.perf_counter() - t < 120


def test_criterion_6_cuspidal_groups():
    t = time.perf_counter()
    for k in range(1, 13):
        rep = cuspidal_group(k)
        assert rep.matches_closed_form
        assert rep.invariant_factors == tuple(sorted(2 ** i for i in closed_form_Ik(k) if i > 0))
    assert [cuspidal_group(k).invariant_factors for k in (1, 2, 3, 4, 5, 6)] == [(), (), (), (), (4,), (2, 4, 4)]
    assert time.perf_counter() - t < 10


def test_criterion_7_property_suites(holomorphic_pool):
    t = time.perf_counter()
    rng = random.Random(7)

    # valence identity
    for q in rng.sample(holomorphic_pool, 500):
        inv = level_invariants(q.level)
        assert sum(ligozat_order(q, d) * m for d, m in inv.cusp_classes) == Fraction(q.doubled_weight, 24) * inv.index

    # exponent bound holds for every enumerated quotient and is reached by magic etas
    for q in holomorphic_pool:
        assert q.abs_exponent_sum <= exponent_bound(q.level, q.doubled_weight // 2)
    for N in (1, 2, 3, 4, 6, 9):
        best = max((magic_eta(d, N) for d in divisors(N)), key=lambda m: m.exponent_ratio)
        top = max(Fraction(q.abs_exponent_sum, 2 * best.weight) for q in eta_quotients(N, best.weight))
        assert top == best.exponent_ratio == bound_factor(N)

    # order transform under V(r) when the level grows by a coprime e
    for _ in range(200):
        N = rng.randint(1, 30)
        q = EtaQuotient(N, {d: rng.randint(-12, 12) for d in divisors(N)})
        e = rng.choice([e for e in range(1, 31) if gcd(e, N) == 1])
        r, d2 = rng.choice(divisors(e)), rng.choice(divisors(e))
        d1 = rng.choice(divisors(N))
        lifted = apply_V(q, r).at_level(e * N)
        factor = Fraction(e * gcd(d2 * d2, r * r), r * gcd(d2 * d2, e))
        assert ligozat_order(lifted, d1 * d2) == factor * ligozat_order(q, d1)

    # recognition round trip, including an integer multiple
    for q in rng.sample(holomorphic_pool, 200):
        c = rng.choice([1, -1, 2, 3, -6, 10])
        s = q_expansion(q, q.twentyfourths // 24 + 4 * q.level) * c
        assert recognize(s, q.level) == (c, q)

    # magic eta vanishing pattern
    for N in range(1, 61):
        for d in divisors(N):
            m = magic_eta(d, N)
            ex = m.base.as_dict()
            for dd in divisors(N):
                o = ligozat_naive(N, ex, dd)
                assert (o > 0) if dd == d else (o == 0)
            assert is_holomorphic(m.base)

    # enumeration against a brute-force box scan
    for N, k in [(4, 2), (6, 2), (8, 2), (9, 2), (4, 4)]:
        assert vectors(eta_quotients(N, k), N) == box_scan(N, k, int(exponent_bound(N, k)))
    assert time.perf_counter() - t < 300


def test_criterion_8_level_36_weight_12():
    assert count_eta_quotients(36, 12) == 703_060_312
