"""Exact arithmetic layer: big rationals, a log-domain real, and twist-power sequences.

Integers are plain python ints (arbitrary precision), rationals are
``fractions.Fraction``.  Nothing here ever rounds; the only inexact type is
``LogReal``, which stores the natural log of a positive quantity in a double
and is used for timeline coordinates where all statements are coarse anyway.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

__all__ = [
    "LogReal",
    "ESequence",
    "GrowthReport",
    "make_esequence",
    "growth_certificate",
    "log_of_int",
    "ceil_frac",
]


def ceil_frac(x: Fraction) -> int:
    """Ceiling of an exact rational."""
    return -((-x.numerator) // x.denominator)


def log_of_int(n: int) -> float:
    """Natural log of a positive int, accurate to double precision for any size.

    math.log overflows float conversion past ~1e308, so split off the bit
    length first: n = m * 2**s with m renormalized into float range.
    """
    if n <= 0:
        raise ValueError("log_of_int needs a positive integer")
    s = n.bit_length() - 53
    if s <= 0:
        return math.log(n)
    m = n >> s
    return math.log(m) + s * math.log(2.0)


def log_of_fraction(x: Fraction) -> float:
    if x <= 0:
        raise ValueError("log of a nonpositive rational")
    return log_of_int(x.numerator) - log_of_int(x.denominator)


class LogReal:
    """A positive real stored as its natural logarithm, with a sign flag.

    Multiplication is exact in log space; addition uses log-sum-exp and is
    monotone.  Signed values only occur as sums/differences of logs, never as
    inputs to another log.
    """

    __slots__ = ("log", "sign")

    def __init__(self, value=None, *, log: float | None = None, sign: int = 1):
        if log is not None:
            self.log = float(log)
            self.sign = 0 if sign == 0 else (1 if sign > 0 else -1)
            return
        if value is None:
            raise ValueError("LogReal needs a value or a log")
        if isinstance(value, LogReal):
            self.log, self.sign = value.log, value.sign
            return
        if isinstance(value, int):
            if value == 0:
                self.log, self.sign = float("-inf"), 0
                return
            self.log = log_of_int(abs(value))
            self.sign = 1 if value > 0 else -1
            return
        if isinstance(value, Fraction):
            if value == 0:
                self.log, self.sign = float("-inf"), 0
                return
            self.log = log_of_fraction(abs(value))
            self.sign = 1 if value > 0 else -1
            return
        v = float(value)
        if v == 0.0:
            self.log, self.sign = float("-inf"), 0
            return
        self.log = math.log(abs(v))
        self.sign = 1 if v > 0 else -1

    @staticmethod
    def from_log(log: float, sign: int = 1) -> "LogReal":
        return LogReal(log=log, sign=sign)

    def to_float(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log)

    def __mul__(self, other: "LogReal") -> "LogReal":
        other = other if isinstance(other, LogReal) else LogReal(other)
        if self.sign == 0 or other.sign == 0:
            return LogReal(0)
        return LogReal(log=self.log + other.log, sign=self.sign * other.sign)

    def __truediv__(self, other: "LogReal") -> "LogReal":
        other = other if isinstance(other, LogReal) else LogReal(other)
        if other.sign == 0:
            raise ZeroDivisionError
        if self.sign == 0:
            return LogReal(0)
        return LogReal(log=self.log - other.log, sign=self.sign * other.sign)

    def __add__(self, other: "LogReal") -> "LogReal":
        other = other if isinstance(other, LogReal) else LogReal(other)
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        a, b = self, other
        if b.log > a.log:
            a, b = b, a
        d = b.log - a.log  # <= 0
        if a.sign == b.sign:
            return LogReal(log=a.log + math.log1p(math.exp(d)), sign=a.sign)
        if d == 0.0:
            return LogReal(0)
        return LogReal(log=a.log + math.log1p(-math.exp(d)), sign=a.sign)

    def __sub__(self, other: "LogReal") -> "LogReal":
        other = other if isinstance(other, LogReal) else LogReal(other)
        return self + LogReal(log=other.log, sign=-other.sign)

    def __neg__(self) -> "LogReal":
        return LogReal(log=self.log, sign=-self.sign)

    def _cmp(self, other) -> int:
        other = other if isinstance(other, LogReal) else LogReal(other)
        d = self - other
        return d.sign

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __repr__(self):
        if self.sign == 0:
            return "LogReal(0)"
        s = "-" if self.sign < 0 else ""
        return f"LogReal({s}exp({self.log:.12g}))"


@dataclass(frozen=True)
class ESequence:
    """Twist powers e_0..e_N with growth base a: requires e_{k+1} >= a*e_k.

    ``g1`` records whether the stronger growth e_{k+1} >= (prod_{j<=k} e_j)^2
    holds at every index.
    """

    a: Fraction
    values: tuple[int, ...]
    g1: bool = field(default=False)

    def __post_init__(self):
        if self.a <= 1:
            raise ValueError("growth base a must be > 1")
        if len(self.values) == 0:
            raise ValueError("empty twist-power sequence")
        if any(v < 1 for v in self.values):
            raise ValueError("twist powers must be positive integers")
        for k in range(len(self.values) - 1):
            if Fraction(self.values[k + 1]) < self.a * self.values[k]:
                raise ValueError(
                    f"growth violated at index {k}: "
                    f"{self.values[k + 1]} < {self.a} * {self.values[k]}"
                )

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, k: int) -> int:
        return self.values[k]

    def log(self, k: int) -> float:
        return log_of_int(self.values[k])

    def to_json(self) -> str:
        return json.dumps(
            {
                "a": f"{self.a.numerator}/{self.a.denominator}",
                "values": [str(v) for v in self.values],
                "g1": self.g1,
            },
            sort_keys=True,
        )

    @staticmethod
    def from_json(text: str) -> "ESequence":
        d = json.loads(text)
        num, _, den = d["a"].partition("/")
        a = Fraction(int(num), int(den or "1"))
        return ESequence(a=a, values=tuple(int(v) for v in d["values"]), g1=bool(d["g1"]))


@dataclass(frozen=True)
class GrowthReport:
    a_growth: bool
    g1: bool
    a_violation: int | None
    g1_violation: int | None


def _g1_holds(values, k) -> bool:
    # e_{k+1} >= (prod_{j<=k} e_j)^2
    prod = 1
    for v in values[: k + 1]:
        prod *= v
    return values[k + 1] >= prod * prod


def make_esequence(a: Fraction | int, e0: int, n: int, mode: str = "geometric",
                   explicit: list[int] | None = None) -> ESequence:
    """Build a twist-power sequence of length n+1.

    Modes:
      geometric   e_{k+1} = ceil(a * e_k), the smallest legal step
      g1-minimal  e_{k+1} = max(ceil(a * e_k), (prod_{j<=k} e_j)^2)
      explicit    validate a caller-supplied list against the growth bound
    """
    a = Fraction(a)
    if a <= 1:
        raise ValueError("growth base a must be > 1")
    if n < 1:
        raise ValueError("need n >= 1")
    if mode == "explicit":
        if not explicit:
            raise ValueError("explicit mode needs a value list")
        values = [int(v) for v in explicit]
    else:
        if e0 < 1:
            raise ValueError("e0 must be >= 1")
        values = [int(e0)]
        prod = int(e0)
        for _ in range(n):
            nxt = ceil_frac(a * values[-1])
            if mode == "g1-minimal":
                nxt = max(nxt, prod * prod)
            elif mode != "geometric":
                raise ValueError(f"unknown mode {mode!r}")
            values.append(nxt)
            prod *= nxt
    seq = ESequence(a=a, values=tuple(values))
    rep = growth_certificate(seq)
    if rep.g1:
        seq = ESequence(a=a, values=tuple(values), g1=True)
    return seq


def growth_certificate(seq: ESequence) -> GrowthReport:
    """Exhaustively re-check both growth conditions on a stored sequence."""
    values = seq.values
    a_violation = None
    for k in range(len(values) - 1):
        if Fraction(values[k + 1]) < seq.a * values[k]:
            a_violation = k  # index of the failed step condition
            break
    g1_violation = None
    for k in range(len(values) - 1):
        if not _g1_holds(values, k):
            g1_violation = k
            break
    return GrowthReport(
        a_growth=a_violation is None,
        g1=g1_violation is None,
        a_violation=a_violation,
        g1_violation=g1_violation,
    )
