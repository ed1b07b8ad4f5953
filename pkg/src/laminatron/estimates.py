"""The product-estimate ledger for intersection numbers along the sequence.

All quantities are exact: the model products A(i,k) are integers, the
recursive envelopes K(i,k), K'(i,k) and the constants are rationals.  The
only truncation is the infinite product defining K1, which is returned with
a certified rational upper bound (log(1+x) <= x and a geometric tail).

  A(i,k)   = prod of b*e_j over i+m <= j < k, j = k mod m   (empty = 1)
  K(i,k)   = b2 for i+m <= k < i+2m,
             K(i,k-m) + 2B sum_{l=k-2m}^{k-1} (A(i,l)/A(i,k)) K(i,l)
  K'(i,k)  = C for i+m <= k < i+2m,
             K'(i,k-m) - 2B sum_{l=k-2m}^{k-1} (A(i,l)/A(i,k)) K(i,l)
  K1(a)    = b2 * (1+4mB)^{m-1} * prod_{s>=1} (1+4mB a^{-s})^m
  C(a)     = 8mB K1(a) / (a-1), admissible iff C(a) < b1
  K2       = C/2,  kappa = max(K1, 1/K2)

The sandwich certified on exact tables is K2*A <= i(.,.) <= K1*A together
with the finer per-pair envelopes K'(i,k)*A <= i <= K(i,k)*A.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .exactnum import ESequence

__all__ = [
    "EstimateLedger",
    "compute_A",
    "compute_K1",
    "admissible_a",
    "measure_B",
    "verify_sandwich",
    "SandwichRow",
    "twist_row_inequality",
    "a_ratio_bound_holds",
]


def compute_A(eseq: ESequence, m: int, b: int, i: int, k: int) -> int:
    if k < i:
        raise ValueError("need k >= i")
    out = 1
    for j in range(i + m, k):
        if (k - j) % m == 0:
            out *= b * eseq[j]
    return out


def compute_K1(a: Fraction, m: int, B: int, b2: int,
               tail_eps: Fraction = Fraction(1, 10**12)) -> tuple[Fraction, Fraction]:
    """Truncated K1 product and a certified upper bound.

    The tail past s = S multiplies the product by at most
    exp(m c a^{-S} / (a-1)) <= 1/(1 - x) for x = m c a^{-S}/(a-1) < 1.
    """
    a = Fraction(a)
    if a <= 1:
        raise ValueError("need a > 1")
    c = 4 * m * B
    val = Fraction(b2) * (1 + c) ** (m - 1)
    s = 0
    apow = Fraction(1)
    while True:
        s += 1
        apow /= a
        val *= (1 + c * apow) ** m
        x = Fraction(m * c) * apow / (a - 1)  # bounds the log of the tail
        if x < 1 and x / (1 - x) <= tail_eps:
            upper = val * (1 + x / (1 - x))
            return val, upper


def _C_of(a: Fraction, m: int, B: int, b2: int, tail_eps: Fraction) -> tuple[Fraction, Fraction]:
    k1_lo, k1_hi = compute_K1(a, m, B, b2, tail_eps)
    geo = Fraction(1) / (a - 1)  # sum_{j>=1} a^{-j} in closed form
    return 8 * m * B * k1_lo * geo, 8 * m * B * k1_hi * geo


def admissible_a(m: int, B: int, b1: int, b2: int,
                 tail_eps: Fraction = Fraction(1, 10**12)) -> int:
    """Smallest integer a with C(a) < b1, certified on both sides.

    The pass test uses the certified upper bound for C(a); minimality is
    certified by checking C(a-1) >= b1 with the truncated (lower) value.
    """
    lo, hi = 2, 4
    while True:
        _, c_hi = _C_of(Fraction(hi), m, B, b2, tail_eps)
        if c_hi < b1:
            break
        lo, hi = hi, hi * 2
    while lo < hi:
        mid = (lo + hi) // 2
        _, c_hi = _C_of(Fraction(mid), m, B, b2, tail_eps)
        if c_hi < b1:
            hi = mid
        else:
            lo = mid + 1
    a = hi
    if a > 2:
        c_lo, _ = _C_of(Fraction(a - 1), m, B, b2, tail_eps)
        if c_lo < b1:
            raise ArithmeticError("admissibility boundary not certified; shrink tail_eps")
    return a


def measure_B(model, window_words, probe_words) -> int:
    """Sharp arc bound: max probe arcs in one complementary region of the window."""
    from .arrange import max_arcs_in_complement

    return max(max_arcs_in_complement(model, window_words, p) for p in probe_words)


class EstimateLedger:
    def __init__(self, m: int, b: int, b1: int, b2: int, B: int, eseq: ESequence,
                 tail_eps: Fraction = Fraction(1, 10**12)):
        if not (b1 <= b <= b2):
            raise ValueError("need b1 <= b <= b2")
        if B > 2 * m * b2:
            raise ValueError("arc bound exceeds its combinatorial ceiling 2*m*b2")
        self.m, self.b, self.b1, self.b2, self.B = m, b, b1, b2, B
        self.eseq = eseq
        self.a = eseq.a
        self.K1_lower, self.K1_upper = compute_K1(self.a, m, B, b2, tail_eps)
        geo = Fraction(1) / (self.a - 1)
        self.C_lower = 8 * m * B * self.K1_lower * geo
        self.C_upper = 8 * m * B * self.K1_upper * geo
        self.admissible = self.C_upper < b1
        self.K2 = self.C_lower / 2
        self.kappa = max(self.K1_upper, 1 / self.K2) if self.K2 > 0 else None
        self._A: dict[tuple[int, int], int] = {}
        self._K: dict[tuple[int, int], Fraction] = {}
        self._Kp: dict[tuple[int, int], Fraction] = {}

    def A(self, i: int, k: int) -> int:
        if (i, k) not in self._A:
            self._A[(i, k)] = compute_A(self.eseq, self.m, self.b, i, k)
        return self._A[(i, k)]

    def K(self, i: int, k: int) -> Fraction:
        m = self.m
        if k < i + m:
            return Fraction(0)
        if (i, k) in self._K:
            return self._K[(i, k)]
        if k < i + 2 * m:
            v = Fraction(self.b2)
        else:
            s = sum(
                Fraction(self.A(i, l), self.A(i, k)) * self.K(i, l)
                for l in range(k - 2 * m, k)
            )
            v = self.K(i, k - m) + 2 * self.B * s
        self._K[(i, k)] = v
        return v

    def Kp(self, i: int, k: int) -> Fraction:
        m = self.m
        if k < i + m:
            raise ValueError("K' starts at k = i + m")
        if (i, k) in self._Kp:
            return self._Kp[(i, k)]
        if k < i + 2 * m:
            v = self.C_lower
        else:
            s = sum(
                Fraction(self.A(i, l), self.A(i, k)) * self.K(i, l)
                for l in range(k - 2 * m, k)
            )
            v = self.Kp(i, k - m) - 2 * self.B * s
        self._Kp[(i, k)] = v
        return v

    def to_json(self) -> str:
        def frac(x):
            return f"{x.numerator}/{x.denominator}"

        return json.dumps(
            {
                "m": self.m, "b": self.b, "b1": self.b1, "b2": self.b2, "B": self.B,
                "a": frac(Fraction(self.a)),
                "K1_lower": frac(self.K1_lower), "K1_upper": frac(self.K1_upper),
                "C_lower": frac(self.C_lower), "C_upper": frac(self.C_upper),
                "K2": frac(self.K2),
                "kappa": frac(self.kappa) if self.kappa is not None else None,
                "admissible": self.admissible,
            },
            sort_keys=True,
        )


def a_ratio_bound_holds(led: EstimateLedger, i: int, l: int, k: int) -> bool:
    """A(i,l)/A(i,k) <= a^{1 - floor((k-i)/m)}, exactly in rationals."""
    lhs = Fraction(led.A(i, l), led.A(i, k))
    expo = 1 - (k - i) // led.m
    a = Fraction(led.a)
    rhs = a**expo if expo >= 0 else Fraction(1) / a ** (-expo)
    return lhs <= rhs


@dataclass
class SandwichRow:
    i: int
    k: int
    value: int
    A: int
    lower_K2: Fraction
    upper_K1: Fraction
    lower_fine: Fraction
    upper_fine: Fraction
    ok_outer: bool
    ok_fine: bool


def verify_sandwich(table: dict[tuple[int, int], int | None], led: EstimateLedger):
    """Check K2*A <= i(g_i,g_k) <= K1*A and the per-pair envelopes on a table.

    Entries with k < i+m must be zero; None entries (over budget) are skipped.
    Returns (rows, all_ok, skipped).
    """
    rows: list[SandwichRow] = []
    ok_all = True
    skipped = []
    for (i, k), v in sorted(table.items()):
        if v is None:
            skipped.append((i, k))
            continue
        if k < i + led.m:
            if v != 0:
                ok_all = False
                rows.append(SandwichRow(i, k, v, 1, Fraction(0), Fraction(0),
                                        Fraction(0), Fraction(0), False, False))
            continue
        A = led.A(i, k)
        lo = led.K2 * A
        hi = led.K1_upper * A
        fine_lo = led.Kp(i, k) * A
        fine_hi = led.K(i, k) * A
        ok_outer = lo <= v <= hi
        ok_fine = v <= fine_hi and (Fraction(v) >= fine_lo)
        ok_all = ok_all and ok_outer and ok_fine
        rows.append(SandwichRow(i, k, v, A, lo, hi, fine_lo, fine_hi, ok_outer, ok_fine))
    return rows, ok_all, skipped


def sandwich_csv(rows: list[SandwichRow]) -> str:
    lines = ["i,k,value,A,K2A,K1A,KpA,KA,ok_outer,ok_fine"]
    for r in rows:
        lines.append(
            f"{r.i},{r.k},{r.value},{r.A},{float(r.lower_K2):.6g},{float(r.upper_K1):.6g},"
            f"{float(r.lower_fine):.6g},{float(r.upper_fine):.6g},{r.ok_outer},{r.ok_fine}"
        )
    return "\n".join(lines) + "\n"


def twist_row_inequality(table, led: EstimateLedger, i: int, k: int) -> bool | None:
    """|i(d,g_k) - b e_{k-m} i(d,g_{k-m})| <= 2B sum_{l=k-2m}^{k-1} i(d,g_l), d = g_i.

    Returns None when any required entry is missing from the table.
    """
    m = led.m

    def look(x, y):
        if x == y:
            return 0
        key = (min(x, y), max(x, y))
        return table.get(key)

    v_k = look(i, k)
    v_km = look(i, k - m)
    if v_k is None or v_km is None:
        return None
    rhs = 0
    for l in range(k - 2 * m, k):
        t = look(i, l)
        if t is None:
            return None
        rhs += t
    return abs(v_k - led.b * led.eseq[k - m] * v_km) <= 2 * led.B * rhs
