import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from laminatron.exactnum import (ESequence, LogReal, growth_certificate, log_of_int,
                                 make_esequence)


def test_geometric_doubling():
    seq = make_esequence(2, 1, 3, "geometric")
    assert seq.values == (1, 2, 4, 8)
    assert not seq.g1


def test_g1_minimal_recurrence():
    # e_1 = max(4, e_0^2) = 4, e_2 = max(8, (2*4)^2) = 64
    seq = make_esequence(2, 2, 2, "g1-minimal")
    assert seq.values == (2, 4, 64)
    assert seq.g1


def test_explicit_rejects_growth_violation():
    with pytest.raises(ValueError):
        make_esequence(2, 1, 1, "explicit", explicit=[3, 5])


def test_rejects_base_at_most_one():
    with pytest.raises(ValueError):
        make_esequence(1, 1, 3)
    with pytest.raises(ValueError):
        make_esequence(Fraction(1, 2), 1, 3)


def test_growth_certificate_scan():
    seq = make_esequence(2, 1, 3, "geometric")  # (1,2,4,8)
    rep = growth_certificate(seq)
    assert rep.a_growth and not rep.g1
    assert rep.g1_violation == 2  # 8 < (1*2*4)^2

    seq2 = make_esequence(2, 2, 2, "g1-minimal")
    rep2 = growth_certificate(seq2)
    assert rep2.a_growth and rep2.g1

    one = ESequence(a=Fraction(2), values=(5,))
    rep3 = growth_certificate(one)
    assert rep3.a_growth and rep3.g1  # vacuous on a single term


def test_power_inequality_prefix():
    # e_k >= a^{k-l} e_l exhaustively on a stored prefix
    seq = make_esequence(Fraction(5, 2), 3, 8, "geometric")
    a = seq.a
    for l in range(len(seq)):
        for k in range(l, len(seq)):
            assert Fraction(seq[k]) >= a ** (k - l) * seq[l]


def test_json_round_trip():
    seq = make_esequence(Fraction(5, 2), 3, 4, "geometric")
    back = ESequence.from_json(seq.to_json())
    assert back == seq


@given(st.integers(min_value=1, max_value=10**60), st.integers(min_value=1, max_value=10**60))
@settings(max_examples=200, deadline=None)
def test_logreal_multiplicative(x, y):
    lx, ly, lxy = LogReal(x), LogReal(y), LogReal(x * y)
    assert math.isclose(lx.log + ly.log, lxy.log, rel_tol=1e-12, abs_tol=1e-12)


def test_logreal_huge_int():
    n = 7 ** (10**5)  # about 84k digits
    approx = LogReal(n).log
    assert math.isclose(approx, 10**5 * math.log(7), rel_tol=1e-12)


def test_logreal_signed_sums():
    a, b = LogReal(12), LogReal(5)
    assert math.isclose((a - b).to_float(), 7.0, rel_tol=1e-12)
    assert (b - a).sign == -1
    assert (a - a).sign == 0
    assert (a + b) > a


def test_log_of_int_matches_math():
    for n in (1, 2, 17, 10**15):
        assert math.isclose(log_of_int(n), math.log(n), rel_tol=1e-14)
