#!/usr/bin/env python3
"""Print the certified constant ledger for the five-punctured-sphere family.

Reports the measured arc bound from the base configuration, the smallest
certified growth base for both the measured and ceiling arc bounds, and the
resulting sandwich constants.
"""

from fractions import Fraction

from laminatron.estimates import EstimateLedger, admissible_a, compute_K1, measure_B
from laminatron.exactnum import make_esequence
from laminatron.surface import S05


def main():
    sides = [S05.side_curve_word(i) for i in range(5)]
    B = measure_B(S05, [sides[0], sides[2], sides[4], sides[1]], [sides[3]])
    print(f"measured arc bound B = {B} (ceiling 2*m*b2 = 8)")
    for Bv in (B, 8):
        a = admissible_a(2, Bv, 2, 2)
        led = EstimateLedger(2, 2, 2, 2, Bv, make_esequence(a, 1, 4))
        print(f"B = {Bv}: smallest certified base a = {a}")
        print(f"   K1 in [{float(led.K1_lower):.9f}, {float(led.K1_upper):.9f}]")
        print(f"   C  in [{float(led.C_lower):.9f}, {float(led.C_upper):.9f}] < b1 = 2")
        print(f"   K2 = {float(led.K2):.9f}, kappa = {float(led.kappa):.3f}")
    lo, hi = compute_K1(Fraction(128), 2, 8, 2)
    print(f"reference: K1(a=128, m=2, B=8, b2=2) = {float(lo):.12f} "
          f"(certified upper {float(hi):.12f})")


if __name__ == "__main__":
    main()
