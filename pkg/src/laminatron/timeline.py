"""Model of the geodesic timeline: active intervals and coarse profiles.

Every coarse statement about the timeline (interval endpoints, widths,
twists, moduli) is adopted as an exact model equality with the additive
constants set to zero, in log domain:

  a_k    = sum_{j<i} log(b e_j^h) + log(e_i^h)/2 - log(x_h)/2,  k = im+h
  lo_k   = a_k - log(e_k)/2
  hi_k   = a_k + log(e_k)/2          (so |J_k| = log e_k)

  width:   w_t = 4 (t - lo_k) on [lo_k, a_k], then 2 log(mod_t) decaying
  modulus: mod_t = e_k / cosh^2(t - a_k)
  twist:   tw_t = 0 for t <= a_k, e_k after
  length:  l_t = exp(-w_t / 2)

Consequences asserted exactly in the model: hi_k + log b = lo_{k+m}, and for
strongly growing power sequences the full interval ordering chain.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .exactnum import ESequence, log_of_int

__all__ = ["TimelineModel", "ProfileSample", "build_timeline", "check_ordering", "profile"]


@dataclass
class IntervalRecord:
    k: int
    lo: float
    mid: float
    hi: float


@dataclass
class TimelineModel:
    eseq: ESequence
    m: int
    b: int
    weights: tuple[float, ...]
    records: list[IntervalRecord] = field(default_factory=list)

    def rec(self, k: int) -> IntervalRecord:
        return self.records[k]

    def log_e(self, k: int) -> float:
        return log_of_int(self.eseq[k])

    def span(self) -> tuple[float, float]:
        return self.records[0].lo, self.records[-1].hi

    def to_csv(self) -> str:
        lines = ["k,lo,mid,hi"]
        for r in self.records:
            lines.append(f"{r.k},{r.lo:.9f},{r.mid:.9f},{r.hi:.9f}")
        return "\n".join(lines) + "\n"


def build_timeline(eseq: ESequence, m: int, b: int, weights, n: int | None = None) -> TimelineModel:
    """Fill interval records for indices 0..n from the model formulas."""
    if m < 2:
        raise ValueError("subsequence counter must be at least 2")
    weights = tuple(float(x) for x in weights)
    if len(weights) != m:
        raise ValueError("need one weight per subsequence")
    if any(x <= 0 for x in weights):
        raise ValueError("weights must be positive")
    if n is None:
        n = len(eseq) - 1
    if n >= len(eseq):
        raise ValueError("power sequence too short")
    model = TimelineModel(eseq=eseq, m=m, b=b, weights=weights)
    logb = math.log(b)
    # prefix sums per residue: sum_{j<i} log(b e_{jm+h})
    acc = [0.0] * m
    for k in range(n + 1):
        h = k % m
        i = k // m
        half = 0.5 * log_of_int(eseq[k])
        mid = acc[h] + half - 0.5 * math.log(weights[h])
        model.records.append(IntervalRecord(k=k, lo=mid - half, mid=mid, hi=mid + half))
        acc[h] += logb + log_of_int(eseq[k])
    return model


@dataclass
class OrderingReport:
    threshold: int | None
    verdict: bool
    first_violation: tuple[int, str] | None
    gaps_growing: bool
    requires_g1: bool
    skipped_g1_checks: bool

    def to_json(self) -> str:
        return json.dumps(
            {
                "threshold": self.threshold,
                "verdict": self.verdict,
                "first_violation": self.first_violation,
                "gaps_growing": self.gaps_growing,
                "skipped_g1_checks": self.skipped_g1_checks,
            },
            sort_keys=True,
        )


def check_ordering(model: TimelineModel) -> OrderingReport:
    """Verify the interval ordering chain for all pairs k < l < k+m.

    The chain   lo_k < lo_l < a_k < hi_k < lo_{k+m} < a_l < hi_l < lo_{l+m} < a_{k+m}
    needs the strong growth condition for the hi_k << a_l step; without the
    g1 flag that comparison is skipped and reported as such.
    """
    m = model.m
    n = len(model.records) - 1
    g1 = model.eseq.g1
    first_violation = None
    chain_ok_from = None
    for k in range(0, n - 2 * m + 1):
        ok = True
        for l in range(k + 1, min(k + m, n + 1)):
            r_k, r_l = model.rec(k), model.rec(l)
            checks = [
                (r_k.lo < r_l.lo, "lo_k < lo_l"),
                (r_l.lo < r_k.mid, "lo_l < a_k"),
                (r_k.mid < r_k.hi, "a_k < hi_k"),
            ]
            if k + m <= n:
                checks.append((r_k.hi < model.rec(k + m).lo, "hi_k < lo_{k+m}"))
                if g1:
                    checks.append((model.rec(k + m).lo < r_l.mid, "lo_{k+m} < a_l"))
            if g1:
                checks.append((r_k.hi < r_l.mid, "hi_k < a_l"))
            checks.append((r_l.mid < r_l.hi, "a_l < hi_l"))
            if l + m <= n:
                checks.append((r_l.hi < model.rec(l + m).lo, "hi_l < lo_{l+m}"))
                if g1 and k + m <= n:
                    checks.append((model.rec(l + m).lo < model.rec(k + m).mid, "lo_{l+m} < a_{k+m}"))
            for val, name in checks:
                if not val:
                    ok = False
                    if first_violation is None or k < first_violation[0]:
                        first_violation = (k, name)
        if ok and chain_ok_from is None:
            chain_ok_from = k
        if not ok:
            chain_ok_from = None
    # growth of the strict gaps in k (checked on the g1-only comparisons)
    gaps_growing = True
    if g1:
        prev = None
        for k in range(0, n - m):
            l = k + 1
            if l >= k + m or l > n:
                continue
            gap = model.rec(l).mid - model.rec(k).hi
            if prev is not None and gap <= prev:
                gaps_growing = False
                break
            prev = gap
    verdict = chain_ok_from is not None
    return OrderingReport(
        threshold=chain_ok_from,
        verdict=verdict,
        first_violation=first_violation,
        gaps_growing=gaps_growing,
        requires_g1=True,
        skipped_g1_checks=not g1,
    )


@dataclass
class ProfileSample:
    t: float
    k: int
    width: float
    length_proxy: float
    twist: int
    modulus_proxy: float


def profile(model: TimelineModel, t: float, k: int) -> ProfileSample:
    r = model.rec(k)
    le = model.log_e(k)
    log_mod = le - 2.0 * _logcosh(t - r.mid)
    mod = math.exp(log_mod) if log_mod < 700.0 else math.inf
    if t <= r.mid:
        w = max(0.0, min(4.0 * (t - r.lo), 2.0 * le))
    else:
        w = 2.0 * max(0.0, log_mod)
    tw = 0 if t <= r.mid else model.eseq[k]
    return ProfileSample(
        t=t, k=k, width=w, length_proxy=math.exp(-0.5 * w), twist=tw, modulus_proxy=mod
    )


def _logcosh(x: float) -> float:
    ax = abs(x)
    return ax + math.log1p(math.exp(-2.0 * ax)) - math.log(2.0)


def g1_divergence_products(model: TimelineModel, h: int, d: int, i_max: int):
    """Log values of the two divergence products for residues h < d resp. h > d.

    For h < d (same block):   log[(e_i^d)^{1/2} / e_i^h] + sum_{j<i} log(e_j^d/e_j^h)
    For h > d (next block):   log[(e_{i+1}^d)^{1/2}] + sum_{j<=i} log(e_j^d/e_j^h)
    Both must increase without bound under strong growth.
    """
    m = model.m
    e = model.eseq

    def le(j, r):
        return log_of_int(e[j * m + r])

    out = []
    acc = 0.0
    for i in range(i_max + 1):
        if h < d:
            val = 0.5 * le(i, d) - le(i, h) + acc
            acc += le(i, d) - le(i, h)
        else:
            acc += le(i, d) - le(i, h)
            val = 0.5 * le(i + 1, d) + acc
        out.append(val)
    return out
