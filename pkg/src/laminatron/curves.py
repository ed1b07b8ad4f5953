"""Curves on the surface and the mapping classes acting on them.

A ``Curve`` is an essential simple closed curve, stored as an oriented
cyclically reduced word; simplicity is certified at construction by a
vanishing self-intersection count.  Curves produced by applying a mapping
class to a certified curve inherit the certificate (homeomorphisms preserve
simplicity), which is what makes huge generated curves affordable.

A ``MappingClassWord`` is a composition of steps, rightmost acting first,
matching the composition-of-twists notation used throughout.  Twists about
non-round curves act through the curve's provenance: if alpha = phi(c) for a
round curve c, then a twist about alpha is phi . twist(c) . phi^{-1}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .intersect import intersection_count, self_intersection_count
from .surface import SurfaceModel
from .words import (
    Substitution,
    WordBudgetExceeded,
    cyclic_reduce,
    format_word,
    invert,
    is_primitive,
    parse_word,
    unoriented_key,
    word,
)

__all__ = [
    "Curve",
    "MappingClassWord",
    "MultiCurve",
    "RelativeTwist",
    "relative_twisting",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 10**7

# words longer than this need an inherited certificate instead of a direct
# self-intersection run
_DIRECT_CERT_CAP = 20_000


class Curve:
    def __init__(self, model: SurfaceModel, w: np.ndarray, *, provenance=None,
                 _certified: bool = False):
        self.model = model
        w = cyclic_reduce(np.asarray(w))
        if w.shape[0] == 0 or model.is_peripheral(w):
            raise ValueError("not an essential curve")
        if not is_primitive(w):
            raise ValueError("word is a proper power")
        self.w = w
        self.provenance = provenance  # (MappingClassWord, base Curve) or None
        if not _certified:
            if w.shape[0] > _DIRECT_CERT_CAP:
                raise ValueError(
                    "word too long for direct simplicity certification; "
                    "construct it as the image of a certified curve"
                )
            if self_intersection_count(model, w) != 0:
                raise ValueError("word is not a simple closed curve")

    @staticmethod
    def from_text(model: SurfaceModel, text: str) -> "Curve":
        return Curve(model, parse_word(text))

    @staticmethod
    def side(model: SurfaceModel, i: int) -> "Curve":
        return Curve(model, model.side_curve_word(i), _certified=True)

    def key(self) -> bytes:
        return unoriented_key(self.w)

    def __eq__(self, other) -> bool:
        return isinstance(other, Curve) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __len__(self):
        return int(self.w.shape[0])

    def i(self, other: "Curve") -> int:
        if self.model is not other.model:
            raise ValueError("curves live on different surface models")
        if self == other:
            return 0
        return intersection_count(self.model, self.w, other.w)

    def reversed(self) -> "Curve":
        return Curve(self.model, invert(self.w), provenance=self.provenance, _certified=True)

    def to_text(self) -> str:
        return format_word(self.w)

    def __repr__(self):
        if len(self) <= 24:
            return f"Curve({self.to_text()})"
        return f"Curve(<{len(self)} letters>)"


# -- mapping class steps -------------------------------------------------------


class _SubStep:
    """An elementary substitution with a known inverse."""

    def __init__(self, fwd: Substitution, bwd: Substitution, name: str):
        self.fwd = fwd
        self.bwd = bwd
        self.name = name

    def forward(self, w, budget):
        return self.fwd.apply(w, budget=budget)

    def backward(self, w, budget):
        return self.bwd.apply(w, budget=budget)

    def __repr__(self):
        return self.name


class _BlockTwistStep:
    """Dehn twist about a round curve (a puncture-block boundary).

    The twist conjugates the enclosed generators by the block product V, so a
    maximal run of enclosed letters picks up a single V^e ... V^{-e} wrapper:
    the output length is |w| + 2|V||e| * (number of runs), not per letter.
    """

    def __init__(self, model: SurfaceModel, block: tuple[int, ...], power: int):
        self.model = model
        self.block = tuple(t % 5 for t in block)
        self.power = int(power)
        blk = self.block
        if 4 in blk:
            blk = tuple(t for t in range(5) if t not in blk)
        self._gens = np.array(sorted(t + 1 for t in blk), dtype=np.int64)
        from .words import word as _word

        self._V = _word(list(self._gens))

    def _apply(self, w, e, budget):
        if e == 0 or w.shape[0] == 0:
            return w
        mask = np.isin(np.abs(w.astype(np.int64)), self._gens)
        if not mask.any():
            return w
        if mask.all():
            # a cyclically reduced word entirely in the enclosed generators is
            # isotopic into the enclosed side, so the twist fixes its class
            return w
        # rotate so the word starts outside the block: runs stay contiguous
        start = int(np.argmin(mask))
        w = np.concatenate([w[start:], w[:start]])
        mask = np.concatenate([mask[start:], mask[:start]])
        n_runs = int(np.count_nonzero(mask[1:] & ~mask[:-1])) + int(mask[0])
        lv = self._V.shape[0]
        need = w.shape[0] + 2 * abs(e) * lv * n_runs
        if budget is not None and need > budget:
            raise WordBudgetExceeded(need, budget)
        Ve = np.tile(self._V if e > 0 else invert(self._V), abs(e))
        Vinv = invert(Ve)
        pieces = []
        idx = np.flatnonzero(np.diff(mask.astype(np.int8)))
        bounds = [0] + [int(x) + 1 for x in idx] + [w.shape[0]]
        inside = bool(mask[0])
        for t in range(len(bounds) - 1):
            seg = w[bounds[t] : bounds[t + 1]]
            if inside:
                pieces.extend((Ve, seg, Vinv))
            else:
                pieces.append(seg)
            inside = not inside
        from .words import free_reduce

        return free_reduce(np.concatenate(pieces))

    def forward(self, w, budget):
        return self._apply(w, self.power, budget)

    def backward(self, w, budget):
        return self._apply(w, -self.power, budget)

    def __repr__(self):
        return f"T{self.block}^{self.power}"


class _CurveTwistStep:
    """Twist about an arbitrary certified curve, through its provenance."""

    def __init__(self, curve: Curve, power: int):
        if curve.provenance is None:
            raise ValueError(
                "twisting about this curve needs provenance "
                "(it was not built as the image of a round curve)"
            )
        self.curve = curve
        self.power = int(power)

    def _steps(self, invert_power: bool):
        phi, base = self.curve.provenance
        e = -self.power if invert_power else self.power
        inner = MappingClassWord.twist(base, e)
        return phi * inner * phi.inverse()

    def forward(self, w, budget):
        return self._steps(False).apply_word(w, budget)

    def backward(self, w, budget):
        return self._steps(True).apply_word(w, budget)

    def __repr__(self):
        return f"T(curve)^{self.power}"


class MappingClassWord:
    """Composition of mapping-class steps; the rightmost factor acts first."""

    def __init__(self, steps=(), model: SurfaceModel | None = None):
        self.steps = list(steps)
        self.model = model

    # constructors

    @staticmethod
    def named(model: SurfaceModel, name: str) -> "MappingClassWord":
        table = {
            "r": (model.rotation_step(), model.rotation_step_inv()),
            "s1": (model.half_twist(1), model.half_twist_inv(1)),
            "s2": (model.half_twist(2), model.half_twist_inv(2)),
            "s3": (model.half_twist(3), model.half_twist_inv(3)),
            "s4": (model.half_twist(4), model.half_twist_inv(4)),
        }
        if name == "rho":
            r = MappingClassWord.named(model, "r")
            return r * r
        if name not in table:
            raise ValueError(f"unknown mapping class name {name!r}")
        f, b = table[name]
        return MappingClassWord([_SubStep(f, b, name)], model)

    @staticmethod
    def block_twist(model: SurfaceModel, block: tuple[int, ...], power: int) -> "MappingClassWord":
        return MappingClassWord([_BlockTwistStep(model, block, power)], model)

    @staticmethod
    def twist(curve: Curve, power: int) -> "MappingClassWord":
        """Twist about any certified curve (round curves twist directly)."""
        if power == 0:
            return MappingClassWord([], curve.model)
        blk = _round_block_of(curve)
        if blk is not None:
            return MappingClassWord.block_twist(curve.model, blk, power)
        return MappingClassWord([_CurveTwistStep(curve, power)], curve.model)

    @staticmethod
    def from_substitution(model: SurfaceModel, fwd: Substitution, bwd: Substitution,
                          name: str = "user") -> "MappingClassWord":
        for im in bwd.images:
            pass  # images validated lazily by the involution check below
        mc = MappingClassWord([_SubStep(fwd, bwd, name)], model)
        probe = model.side_curve_word(0)
        back = bwd.apply(fwd.apply(probe))
        if unoriented_key(cyclic_reduce(back)) != unoriented_key(probe):
            raise ValueError("substitution pair is not mutually inverse")
        return mc

    # algebra

    def __mul__(self, other: "MappingClassWord") -> "MappingClassWord":
        return MappingClassWord(self.steps + other.steps, self.model or other.model)

    def inverse(self) -> "MappingClassWord":
        inv = MappingClassWord([], self.model)
        inv.steps = [_Inverted(s) for s in reversed(self.steps)]
        return inv

    def __pow__(self, e: int) -> "MappingClassWord":
        if e == 0:
            return MappingClassWord([], self.model)
        base = self if e > 0 else self.inverse()
        out = MappingClassWord([], self.model)
        for _ in range(abs(e)):
            out = out * base
        return out

    # action

    def apply_word(self, w: np.ndarray, budget: int | None = DEFAULT_BUDGET) -> np.ndarray:
        # cyclic reduction after every step: words stand for conjugacy
        # classes, and twist steps wrap their output in conjugation junk that
        # would otherwise compound through the composition
        for step in reversed(self.steps):
            w = cyclic_reduce(step.forward(w, budget))
        return w

    def apply(self, c: Curve, budget: int | None = DEFAULT_BUDGET) -> Curve:
        w = self.apply_word(c.w, budget)
        prov_self = self if c.provenance is None else self * c.provenance[0]
        base = c if c.provenance is None else c.provenance[1]
        return Curve(c.model, w, provenance=(prov_self, base), _certified=True)

    def __repr__(self):
        return " ".join(repr(s) for s in self.steps) or "id"

    def to_json(self) -> str:
        import json

        return json.dumps({"generators": [repr(s) for s in self.steps]})


class _Inverted:
    def __init__(self, step):
        self.step = step

    def forward(self, w, budget):
        return self.step.backward(w, budget)

    def backward(self, w, budget):
        return self.step.forward(w, budget)

    def __repr__(self):
        return f"({self.step!r})^-1"


def _round_block_of(curve: Curve):
    """The puncture block if this curve is one of the ten round curves."""
    model = curve.model
    key = curve.key()
    for s in range(5):
        for size in (2, 3):
            blk = tuple((s + t) % 5 for t in range(size))
            if unoriented_key(model.block_curve_word(blk)) == key:
                return blk
    return None


@dataclass
class MultiCurve:
    curves: list[Curve]

    def __post_init__(self):
        for a in range(len(self.curves)):
            for b in range(a + 1, len(self.curves)):
                if self.curves[a] == self.curves[b]:
                    raise ValueError("multicurve components must be non-isotopic")
                if self.curves[a].i(self.curves[b]) != 0:
                    raise ValueError("multicurve components must be disjoint")

    def __iter__(self):
        return iter(self.curves)

    def __len__(self):
        return len(self.curves)


@dataclass
class RelativeTwist:
    """Argmin of n -> i(twist_alpha^n(beta), beta2), with its uncertainty."""

    n_star: int
    min_value: int
    slack: int
    profile: dict[int, int]


def relative_twisting(alpha: Curve, beta: Curve, beta2: Curve,
                      budget: int | None = DEFAULT_BUDGET,
                      max_steps: int = 64) -> RelativeTwist:
    """Annular coefficient estimate: unimodal descent on i(T_a^n b, b2)."""
    iab = alpha.i(beta)
    iab2 = alpha.i(beta2)
    if iab == 0 or iab2 == 0:
        raise ValueError("relative twisting needs both curves to cross alpha")
    ibb2 = beta.i(beta2)
    cache: dict[int, int] = {}

    def f(n: int) -> int:
        if n not in cache:
            tw = MappingClassWord.twist(alpha, n) if n else MappingClassWord([], alpha.model)
            img = tw.apply(beta, budget=budget)
            cache[n] = img.i(beta2)
        return cache[n]

    # descend from 0 with doubling steps, then contract the bracket
    lo, hi = 0, 0
    best = 0
    step = 1
    for _ in range(max_steps):
        if f(best - step) < f(best):
            best -= step
            step *= 2
        elif f(best + step) < f(best):
            best += step
            step *= 2
        elif step > 1:
            step = max(1, step // 2)
        else:
            break
    lo, hi = best - 2, best + 2
    for n in range(lo, hi + 1):
        f(n)
    n_star = min(cache, key=lambda n: (cache[n], abs(n)))
    # unimodality sanity check on everything evaluated
    ns = sorted(cache)
    vals = [cache[n] for n in ns]
    k = vals.index(min(vals))
    descending = all(vals[t] >= vals[t + 1] for t in range(k))
    ascending = all(vals[t] <= vals[t + 1] for t in range(k, len(vals) - 1))
    if not (descending and ascending):
        raise ArithmeticError("non-unimodal twisting profile")
    slack = ibb2 // max(1, iab * iab2) + 1
    return RelativeTwist(n_star=n_star, min_value=cache[n_star], slack=slack, profile=dict(cache))
