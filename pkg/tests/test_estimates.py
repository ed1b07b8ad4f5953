"""The product-estimate ledger: constants, envelopes, and exact-table checks."""

from fractions import Fraction

import mpmath
import pytest

from laminatron.estimates import (EstimateLedger, a_ratio_bound_holds, admissible_a,
                                  compute_A, compute_K1, measure_B, twist_row_inequality,
                                  verify_sandwich)
from laminatron.exactnum import make_esequence
from laminatron.surface import S05


def test_A_values_direct():
    eseq = make_esequence(2, 1, 6, "geometric")  # 1,2,4,8,16,32,64
    assert compute_A(eseq, 2, 2, 0, 2) == 1
    assert compute_A(eseq, 2, 2, 0, 4) == 2 * 4          # b e_2
    assert compute_A(eseq, 2, 2, 0, 6) == (2 * 4) * (2 * 16)
    # the worked example: m=2, b=2, e=(1,2,4,8,16,32): A(0, 3m) = 2*4*2*16
    assert compute_A(eseq, 2, 2, 0, 6) == 256
    assert compute_A(eseq, 2, 2, 1, 3) == 1
    # recursion A(i,k) = b e_{k-m} A(i, k-m)
    for i in range(0, 2):
        for k in range(i + 4, 7):
            assert compute_A(eseq, 2, 2, i, k) == 2 * eseq[k - 2] * compute_A(eseq, 2, 2, i, k - 2)


def test_K1_against_mpmath():
    """Independent высоко-precision evaluation of the infinite product."""
    m, B, b2 = 2, 8, 2
    lo, hi = compute_K1(Fraction(128), m, B, b2)
    mpmath.mp.dps = 60
    prod = mpmath.mpf(b2)
    for l in range(0, 4000):
        prod *= 1 + 4 * m * B * mpmath.mpf(128) ** -(int((l + 1) / m))
    assert float(lo) <= float(prod) * (1 + 1e-15)
    assert float(hi) >= float(prod) * (1 - 1e-15)
    assert (hi - lo) / lo < Fraction(1, 10**10)


def test_K1_decreasing_and_limit():
    m, B, b2 = 2, 8, 2
    vals = [compute_K1(Fraction(a), m, B, b2)[0] for a in (16, 64, 128, 1024, 10**6)]
    assert all(vals[t] > vals[t + 1] for t in range(len(vals) - 1))
    # a -> infinity limit: b2 * (1 + 4mB)^{m-1}
    assert abs(float(vals[-1]) - 2 * 65) < 0.01 * 130


def test_admissible_a_s05():
    B = measure_B(S05, [S05.side_curve_word(i) for i in (0, 2, 4, 1)],
                  [S05.side_curve_word(3)])
    assert B == 2
    a = admissible_a(2, B, 2, 2)
    assert a >= 16  # the convention bound; the true value is much larger
    led_pass = EstimateLedger(2, 2, 2, 2, B, make_esequence(a, 1, 4))
    led_fail = EstimateLedger(2, 2, 2, 2, B, make_esequence(a - 1, 1, 4))
    assert led_pass.admissible and not led_fail.admissible


def test_ledger_rejects_bad_arc_bound():
    with pytest.raises(ValueError):
        EstimateLedger(2, 2, 2, 2, 9, make_esequence(2, 1, 4))  # 9 > 2*m*b2


def test_a_ratio_bound(small_seq):
    led = EstimateLedger(2, 2, 2, 2, 2, small_seq.spec.eseq)
    for i in range(3):
        for k in range(i + 2, 9):
            for l in range(i, k):
                assert a_ratio_bound_holds(led, i, l, k)


def test_K_prime_above_K2_when_admissible():
    B = 2
    a = admissible_a(2, B, 2, 2)
    led = EstimateLedger(2, 2, 2, 2, B, make_esequence(a, 1, 12))
    assert led.admissible
    for i in range(3):
        for k in range(i + 2, 12):
            assert led.Kp(i, k) >= led.K2


def test_K_monotone_bound(small_seq):
    """K(i,k) stays below its closed-form envelope."""
    led = EstimateLedger(2, 2, 2, 2, 2, small_seq.spec.eseq)
    a = Fraction(2)
    for i in range(2):
        for k in range(i + 2, 10):
            env = Fraction(2)
            for j in range(i + 2, k):
                expo = (j - i + 1) // 2 - 1
                env *= 1 + 4 * 2 * 2 * (Fraction(1) / a**expo if expo >= 0 else a**-expo)
            assert led.K(i, k) <= env


def test_sandwich_small_table(small_seq, small_table):
    """Upper envelope exact on the doubling table; lower trivial (small a)."""
    led = EstimateLedger(2, 2, 2, 2, 2, small_seq.spec.eseq)
    rows, ok, skipped = verify_sandwich(small_table, led)
    assert not skipped
    for r in rows:
        assert r.value <= r.upper_fine, (r.i, r.k, r.value, float(r.upper_fine))
        assert Fraction(r.value) <= r.upper_K1


def test_twist_row_inequality_exact(small_seq, small_table):
    led = EstimateLedger(2, 2, 2, 2, 2, small_seq.spec.eseq)
    checked = 0
    for i in range(4):
        for k in range(i + 4, 10):
            res = twist_row_inequality(small_table, led, i, k)
            if res is not None:
                assert res, (i, k)
                checked += 1
    assert checked >= 10
