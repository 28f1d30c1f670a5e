from fractions import Fraction
from math import gcd

import pytest
from hypothesis import assume, given, settings, strategies as st

from etaspan.arith import divisors
from etaspan.errors import FractionalValuationError, InvalidArgument, RecognitionFailure
from etaspan.etaquot import (
    EtaQuotient,
    apply_V,
    cusp_orders,
    existence_weight,
    expansion_coefficients,
    format_quotient,
    is_holomorphic,
    ligozat_order,
    newman_is_valid,
    parse_quotient,
    q_expansion,
    recognize,
)
from etaspan.gamma0 import level_invariants
from etaspan.qseries import QSeries

DELTA = EtaQuotient(1, {1: 24})
THETA = EtaQuotient(4, {1: -2, 2: 5, 4: -2})
SIGMA_ODD = EtaQuotient(4, {2: -4, 4: 8})


def test_newman_examples():
    assert newman_is_valid(DELTA)
    assert not newman_is_valid(EtaQuotient(1, {1: 1}))
    assert newman_is_valid(SIGMA_ODD)


def test_theta_quotient_has_half_integral_weight():
    # prod delta^r = 2 is not a square; the theta function has weight 1/2
    assert THETA.weight == Fraction(1, 2)
    assert not newman_is_valid(THETA)


def test_ligozat_examples():
    assert ligozat_order(DELTA, 1) == 1
    assert cusp_orders(SIGMA_ODD) == {1: 0, 2: 0, 4: 1}


def test_level_two_orders():
    f = EtaQuotient(2, {1: 48, 2: -24})
    assert cusp_orders(f) == {1: 3, 2: 0}
    assert is_holomorphic(f)
    g = EtaQuotient(2, {1: -24, 2: 24})
    assert newman_is_valid(g) and ligozat_order(g, 1) < 0 and not is_holomorphic(g)


def test_ligozat_rejects_non_divisor():
    with pytest.raises(InvalidArgument):
        ligozat_order(SIGMA_ODD, 3)


def test_expansions():
    assert q_expansion(DELTA, 3).coefficients(1, 3) == [1, -24]
    s = q_expansion(EtaQuotient(4, {1: -2, 2: 5, 4: -2}), 17)
    assert s.coefficients(0, 17) == [1, 2, 0, 0, 2, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 2]
    sig = q_expansion(SIGMA_ODD, 12)
    assert sig.coefficients(0, 12) == [0, 1, 0, 4, 0, 6, 0, 8, 0, 13, 0, 12]


def test_fractional_valuation():
    with pytest.raises(FractionalValuationError):
        q_expansion(EtaQuotient(1, {1: 1}), 5)


def test_apply_V():
    d2 = apply_V(DELTA, 2)
    assert d2 == EtaQuotient(2, {2: 24})
    assert q_expansion(d2, 20) == q_expansion(DELTA, 10).substitute(2)
    # order at d=2 predicted by the V(r) transform with e = r = 2, d2 = 2
    predicted = Fraction(2 * gcd(4, 4), 2 * gcd(4, 2)) * ligozat_order(DELTA, 1)
    assert ligozat_order(d2, 2) == predicted == 2


@pytest.mark.parametrize(
    "N,k,ex",
    [(1, 12, {1: 24}), (4, 2, {1: 8, 2: -4}), (5, 4, {1: 4, 5: 4}), (9, 2, {1: 6, 3: -2}),
     (7, 6, {1: 6, 7: 6}), (11, 2, {1: 2, 11: 2}), (35, 2, {1: 1, 5: 1, 7: 1, 35: 1}),
     (14, 2, {1: 4, 7: 4, 2: -2, 14: -2}), (2, 4, {1: 16, 2: -8})],
)
def test_existence_weight(N, k, ex):
    w, q = existence_weight(N)
    assert (w, q.as_dict()) == (k, ex)


def test_existence_witnesses_holomorphic():
    for N in range(1, 400):
        w, q = existence_weight(N)
        assert q.doubled_weight == 2 * w and is_holomorphic(q)


def test_existence_weight_cases():
    for N in range(1, 400):
        L = level_invariants(N)
        w, _ = existence_weight(N)
        if L.eps2 and L.eps3:
            assert w == 12
        elif L.eps3:
            assert w == 6
        elif L.eps2:
            assert w == 4
        else:
            assert w == 2


def test_recognize_examples():
    d = q_expansion(DELTA, 31)
    assert recognize(d, 1) == (1, DELTA)
    assert recognize(d * 2, 1) == (2, DELTA)
    with pytest.raises(RecognitionFailure) as e:
        recognize(QSeries.from_coefficients([1, 1], 0, 10), 1)
    assert e.value.index == 2


def test_recognize_checks_horizon():
    with pytest.raises(InvalidArgument):
        recognize(q_expansion(DELTA, 5), 1, check_precision=30)
    with pytest.raises(InvalidArgument):
        recognize(q_expansion(DELTA, 31), 4, check_precision=4)


def test_text_round_trip():
    q = EtaQuotient(22, {1: -2, 2: 4, 11: -2, 22: 4})
    assert parse_quotient(22, format_quotient(q)) == q
    assert EtaQuotient.from_json(q.to_json()) == q
    with pytest.raises(InvalidArgument):
        parse_quotient(22, "1:2,x")
    with pytest.raises(InvalidArgument):
        EtaQuotient(22, {3: 1})
    with pytest.raises(InvalidArgument):
        EtaQuotient(22, [(1, 1), (1, 2)])


# -- property suites ------------------------------------------------------


def test_valence_identity(holomorphic_pool):
    import random

    rng = random.Random(1)
    sample = rng.sample(holomorphic_pool, 500)
    for q in sample:
        L = level_invariants(q.level)
        total = sum(ligozat_order(q, d) * m for d, m in L.cusp_classes)
        assert total == Fraction(q.doubled_weight, 24) * L.index


def test_order_at_infinity_is_valuation(holomorphic_pool):
    for q in holomorphic_pool[::7][:200]:
        v = ligozat_order(q, q.level)
        assert q_expansion(q, int(v) + 3).valuation == v


@st.composite
def quotient_and_twist(draw):
    N = draw(st.integers(1, 30))
    divs = divisors(N)
    ex = {d: draw(st.integers(-12, 12)) for d in divs}
    e = draw(st.integers(1, 30).filter(lambda e: gcd(e, N) == 1))
    r = draw(st.sampled_from(divisors(e)))
    d1 = draw(st.sampled_from(divs))
    d2 = draw(st.sampled_from(divisors(e)))
    return EtaQuotient(N, ex), e, r, d1, d2


@settings(max_examples=200)
@given(quotient_and_twist())
def test_V_order_transform(case):
    q, e, r, d1, d2 = case
    lifted = apply_V(q, r).at_level(e * q.level)
    factor = Fraction(e * gcd(d2 * d2, r * r), r * gcd(d2 * d2, e))
    assert ligozat_order(lifted, d1 * d2) == factor * ligozat_order(q, d1)


@settings(max_examples=200)
@given(st.data())
def test_recognition_round_trip(holomorphic_pool, data):
    q = data.draw(st.sampled_from(holomorphic_pool))
    c = data.draw(st.sampled_from([1, -1, 2, 3, -6, 10]))
    v = q.twentyfourths // 24
    s = q_expansion(q, v + 4 * q.level) * c
    assert recognize(s, q.level) == (c, q)


@settings(max_examples=50)
@given(st.data())
def test_expansion_coefficients_agree(holomorphic_pool, data):
    q = data.draw(st.sampled_from(holomorphic_pool))
    H = 20
    assert expansion_coefficients(q, 0, H) == q_expansion(q, H).coefficients(0, H)
