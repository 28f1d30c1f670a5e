from fractions import Fraction

import pytest

from etaspan.arith import divisors, factor, ord_p
from etaspan.errors import InvalidArgument
from etaspan.etaquot import EtaQuotient, cusp_orders, is_holomorphic, ligozat_order
from etaspan.gamma0 import level_invariants
from etaspan.magic import bound_factor, magic_eta, magic_weight
from oracles import ligozat_naive

PAIRS = [(d, N) for N in range(1, 61) for d in divisors(N)]


def test_examples():
    assert magic_eta(1, 1).base == EtaQuotient(1, {1: 24})
    e12 = magic_eta(1, 2)
    assert e12.base == EtaQuotient(2, {1: 48, 2: -24}) and e12.weight == 12
    assert cusp_orders(e12.base) == {1: 3, 2: 0}
    e22 = magic_eta(2, 2)
    assert e22.base == EtaQuotient(2, {1: -24, 2: 48})
    assert cusp_orders(e22.base) == {1: 0, 2: 3}


def test_weights():
    assert magic_weight(1, 1) == 12
    assert magic_weight(2, 4) == 12
    assert magic_weight(3, 9) == 48
    assert magic_weight(22, 22) == 120


def test_bad_divisor():
    with pytest.raises(InvalidArgument):
        magic_eta(3, 10)
    with pytest.raises(InvalidArgument):
        magic_weight(0, 10)


@pytest.mark.parametrize("d,N", PAIRS)
def test_vanishing_pattern(d, N):
    m = magic_eta(d, N)
    ex = m.base.as_dict()
    assert m.base.doubled_weight == 2 * m.weight == 2 * magic_weight(d, N)
    for dd in divisors(N):
        o = ligozat_naive(N, ex, dd)
        assert o == ligozat_order(m.base, dd)
        assert (o > 0) if dd == d else (o == 0)
    assert is_holomorphic(m.base)
    assert m.exponent_ratio <= bound_factor(N)


@pytest.mark.parametrize("d,N", PAIRS)
def test_ratio_hits_bound_exactly_on_the_deep_path(d, N):
    deep = all(m == 1 or 0 < ord_p(p, d) < m for p, m in factor(N))
    assert (magic_eta(d, N).exponent_ratio == bound_factor(N)) == deep


def test_square_of_prime_with_middle_divisor_is_sharp():
    for p in (2, 3, 5, 7):
        assert magic_eta(p, p * p).exponent_ratio == Fraction(p + 1, p - 1) ** 2


@pytest.mark.parametrize("N", [6, 12, 22, 30, 36, 60])
def test_product_of_all_magic_etas_is_positive_everywhere(N):
    total = {}
    for d in divisors(N):
        for delta, r in magic_eta(d, N).base.as_dict().items():
            total[delta] = total.get(delta, 0) + r
    prod = EtaQuotient(N, total)
    assert is_holomorphic(prod)
    assert all(o > 0 for o in cusp_orders(prod).values())


def test_infinity_concentrator_valence():
    # E_{N,N} vanishes only at infinity, so the valence identity pins its order there
    for N in (4, 10, 22, 36):
        m = magic_eta(N, N)
        L = level_invariants(N)
        assert ligozat_order(m.base, N) == Fraction(m.weight, 12) * L.index
