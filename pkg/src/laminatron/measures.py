"""Normalized subsequence vectors and convergence diagnostics.

The h-th subsequence gamma_i^h = gamma_{im+h}, normalized by
c_i^h = A(0, im+h), converges to a transverse measure; the diagnostics here
are the exact finite-stage quantities:

  * probe vectors v_i(d) = i(d, gamma_i^h) / c_i^h   (exact rationals),
  * the contraction bound |v_i - v_{i-1}| <= 4 m B kappa(d) a^{1-i} with the
    empirically measured kappa(d),
  * the mutual-singularity proxy
        i(gamma_0^h, gamma_{i+1}^h) * i(gamma_i^h, gamma_K^{h'}) / c_K^{h'}
    which stays in a fixed band for h' = h and decays like a^{-i} otherwise.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .curves import Curve
from .estimates import compute_A
from .family import GeneratedSequence

__all__ = [
    "NormalizedVector",
    "MeasureApprox",
    "normalized_vector",
    "measure_kappa",
    "cauchy_bound",
    "singularity_ratio",
    "limit_simplex_basis",
]


@dataclass
class NormalizedVector:
    h: int
    i: int
    entries: dict[str, Fraction]  # probe name -> exact value

    def to_csv_rows(self):
        for name, v in sorted(self.entries.items()):
            yield f"{self.h},{self.i},{name},{v.numerator}/{v.denominator}"


@dataclass
class MeasureApprox:
    h: int
    i: int
    vector: NormalizedVector
    tail_bound: Fraction
    kappa_used: Fraction
    separation: dict[int, float] | None = None  # singularity proxy toward other h

    def to_json(self) -> str:
        return json.dumps(
            {
                "h": self.h,
                "i": self.i,
                "entries": {k: f"{v.numerator}/{v.denominator}" for k, v in self.vector.entries.items()},
                "tail_bound": f"{self.tail_bound.numerator}/{self.tail_bound.denominator}",
                "kappa": f"{self.kappa_used.numerator}/{self.kappa_used.denominator}",
                "separation": self.separation,
            },
            sort_keys=True,
        )


def c_norm(seq: GeneratedSequence, h: int, i: int) -> int:
    return compute_A(seq.spec.eseq, seq.m, seq.spec.b, 0, i * seq.m + h)


def _probe_value(seq: GeneratedSequence, probe: Curve, k: int) -> int:
    return probe.i(seq.curves[k])


def normalized_vector(seq: GeneratedSequence, h: int, i: int, probes: dict[str, Curve]) -> NormalizedVector:
    k = i * seq.m + h
    if k >= len(seq.curves):
        raise ValueError("subsequence index beyond the generated prefix")
    c = c_norm(seq, h, i)
    entries = {name: Fraction(_probe_value(seq, p, k), c) for name, p in probes.items()}
    return NormalizedVector(h=h, i=i, entries=entries)


def measure_kappa(seq: GeneratedSequence, probe: Curve, k_min: int = 2) -> Fraction:
    """Empirical two-sided comparison constant of i(probe, gamma_k) against A(0,k)."""
    best = Fraction(1)
    for k in range(k_min, len(seq.curves)):
        v = _probe_value(seq, probe, k)
        A = compute_A(seq.spec.eseq, seq.m, seq.spec.b, 0, k)
        if v == 0:
            continue
        best = max(best, Fraction(v, A), Fraction(A, v))
    return best


def cauchy_bound(seq: GeneratedSequence, kappa: Fraction, i: int) -> Fraction:
    """4 m B kappa a^{1-i}, the one-step contraction bound."""
    a = Fraction(seq.spec.eseq.a)
    B = _arc_bound(seq)
    return 4 * seq.m * B * kappa * a ** (1 - i)


def tail_bound(seq: GeneratedSequence, kappa: Fraction, i: int) -> Fraction:
    """4 m B kappa * sum_{l > i} a^{1-l} in closed form."""
    a = Fraction(seq.spec.eseq.a)
    B = _arc_bound(seq)
    return 4 * seq.m * B * kappa * a ** (-i) * a / (a - 1)


def _arc_bound(seq: GeneratedSequence) -> int:
    # sharp measured bound for the motivating family, ceiling otherwise
    if seq.spec.kind == "S05":
        return 2
    return 2 * seq.m * seq.spec.b2


def singularity_ratio(seq: GeneratedSequence, h: int, hp: int, i: int,
                      K: int | None = None) -> Fraction:
    """Finite-stage mutual-singularity proxy at stage i, target subsequence hp."""
    m = seq.m
    if K is None:
        K = (len(seq.curves) - 1 - hp) // m
    k1 = seq.m * (i + 1) + h
    k2 = i * m + h
    k3 = K * m + hp
    if max(k1, k3) >= len(seq.curves):
        raise ValueError("prefix too short for the requested stage")
    v1 = seq.pair_intersection(h, k1)
    v2 = seq.pair_intersection(k2, k3)
    c = c_norm(seq, hp, K)
    return Fraction(v1) * Fraction(v2, c)


def limit_simplex_basis(seq: GeneratedSequence, probes: dict[str, Curve],
                        tolerance: Fraction) -> list[MeasureApprox]:
    """Best available normalized vector per subsequence, with certified tails."""
    if tolerance <= 0:
        raise ValueError("insufficient prefix: zero tolerance is never reachable")
    m = seq.m
    out = []
    for h in range(m):
        i_max = (len(seq.curves) - 1 - h) // m
        kappa = max(measure_kappa(seq, p) for p in probes.values())
        found = None
        for i in range(i_max, 0, -1):
            tb = tail_bound(seq, kappa, i)
            if tb < tolerance:
                found = (i, tb, kappa)
                break
        if found is None:
            raise ValueError(f"insufficient prefix: tails exceed tolerance for h={h}")
        i, tb, kappa = found
        sep = {}
        for hp in range(m):
            if hp == h:
                continue
            # keep the comparison stage clear of the target subsequence's end,
            # where consecutive curves are disjoint and the proxy degenerates
            k_top = (len(seq.curves) - 1 - hp) // m
            stage = max(0, min(i - 1, k_top - 1))
            try:
                sep[hp] = float(singularity_ratio(seq, h, hp, stage))
            except ValueError:
                pass
        out.append(
            MeasureApprox(h=h, i=i, vector=normalized_vector(seq, h, i, probes),
                          tail_bound=tb, kappa_used=kappa, separation=sep or None)
        )
    return out


def vectors_csv(vectors: list[NormalizedVector]) -> str:
    lines = ["h,i,probe,value"]
    for v in vectors:
        lines.extend(v.to_csv_rows())
    return "\n".join(lines) + "\n"
