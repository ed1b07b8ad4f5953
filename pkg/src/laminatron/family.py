"""Generation of the twist-power curve sequences.

The motivating family lives on the five-punctured sphere: with D the positive
twist about gamma = rho^2(gamma_0) and rho the two-step rotation,

    gamma_k = D^{e_2} rho D^{e_3} rho ... D^{e_{k+1}} rho (gamma_0).

The first four curves are side curves (all twists act trivially on them), and
the recursion gamma_{k+2} = T_{gamma_k}^{e_k}(gamma'_{k+2}) holds with
gamma'_{k+2} the image of rho(gamma_3) under the prefix word; that exact
relation is what the verifier certifies.

The general framework builds sequences from user-supplied base curves and
automorphisms f_k via phi_k = T_{gamma_{k mod m}}^{e_{k-m}} f_{k mod m}; the
dynamical hypotheses on the f_k (translation distance on the subsurface arc
graph) are recorded as user assertions, not certified here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .curves import Curve, MappingClassWord, DEFAULT_BUDGET
from .exactnum import ESequence
from .surface import S05, SurfaceModel
from .words import WordBudgetExceeded

__all__ = ["FamilySpec", "GeneratedSequence", "generate_s05", "generate_general"]


@dataclass
class FamilySpec:
    m: int
    b: int
    b1: int
    b2: int
    eseq: ESequence
    kind: str = "S05"  # or "General"
    base_curves: list[Curve] = field(default_factory=list)
    f_maps: list[MappingClassWord] = field(default_factory=list)

    def __post_init__(self):
        if not (self.b1 <= self.b <= self.b2):
            raise ValueError("need b1 <= b <= b2")
        if self.kind == "S05" and self.m != 2:
            raise ValueError("the motivating family has subsequence counter 2")


class GeneratedSequence:
    """A generated prefix gamma_0..gamma_N with its twist certificates."""

    def __init__(self, model: SurfaceModel, spec: FamilySpec, budget: int):
        self.model = model
        self.spec = spec
        self.budget = budget
        self.curves: list[Curve] = []
        self.gamma_primes: dict[int, Curve] = {}
        self.truncated_at: int | None = None  # first index that blew the budget

    @property
    def m(self) -> int:
        return self.spec.m

    def e(self, k: int) -> int:
        return self.spec.eseq[k]

    def __len__(self) -> int:
        return len(self.curves)

    def pair_intersection(self, i: int, k: int, budget: int | None = None,
                          prefer_stored: bool = False) -> int:
        """i(gamma_i, gamma_k), keeping one operand short via conjugation.

        For the motivating family, Psi_i^{-1} Psi_k telescopes to the chain
        with powers e_{i+2}..e_{k+1}, so the pair reduces to gamma_0 against a
        single generated word.  ``prefer_stored`` computes from the stored
        words instead when they are small enough, which is what integrity
        checks of a possibly corrupted artifact want.
        """
        if i > k:
            i, k = k, i
        if i == k:
            return 0
        budget = budget if budget is not None else self.budget
        if prefer_stored and max(len(self.curves[i]), len(self.curves[k])) < 10**5:
            return self.curves[i].i(self.curves[k])
        if self.spec.kind == "S05":
            w = _chain_word(self.model, self.spec.eseq, i + 2, k + 1, budget)
            g0 = self.curves[0]
            from .intersect import intersection_count
            from .words import unoriented_key

            if unoriented_key(w) == unoriented_key(g0.w):
                return 0
            return intersection_count(self.model, g0.w, w)
        return self.curves[i].i(self.curves[k])

    def intersection_table(self, upto: int | None = None, budget: int | None = None):
        """Exact table of i(gamma_i, gamma_k); entries None when over budget."""
        n = (upto if upto is not None else len(self.curves) - 1) + 1
        table: dict[tuple[int, int], int | None] = {}
        for i in range(n):
            for k in range(i + 1, n):
                try:
                    table[(i, k)] = self.pair_intersection(i, k, budget)
                except WordBudgetExceeded:
                    table[(i, k)] = None
        return table

    def to_json(self) -> str:
        return json.dumps(
            {
                "kind": self.spec.kind,
                "m": self.spec.m,
                "b": self.spec.b,
                "b1": self.spec.b1,
                "b2": self.spec.b2,
                "eseq": json.loads(self.spec.eseq.to_json()),
                "curves": [c.to_text() for c in self.curves],
                "gamma_primes": {str(k): c.to_text() for k, c in self.gamma_primes.items()},
                "truncated_at": self.truncated_at,
            },
            sort_keys=True,
        )


def _rho(model: SurfaceModel) -> MappingClassWord:
    return MappingClassWord.named(model, "rho")


def _twist_D(model: SurfaceModel, e: int) -> MappingClassWord:
    # twist about gamma = rho^2(gamma_0), the curve around punctures {4, 0}
    return MappingClassWord.block_twist(model, (4, 0), e)


def _chain(model: SurfaceModel, eseq: ESequence, j_lo: int, j_hi: int) -> MappingClassWord:
    """D^{e_{j_lo}} rho D^{e_{j_lo+1}} rho ... D^{e_{j_hi}} rho."""
    mc = MappingClassWord([], model)
    for j in range(j_lo, j_hi + 1):
        mc = mc * _twist_D(model, eseq[j]) * _rho(model)
    return mc


def _chain_word(model, eseq, j_lo, j_hi, budget):
    from .words import cyclic_reduce

    w = model.side_curve_word(0)
    for j in range(j_hi, j_lo - 1, -1):
        w = _rho(model).apply_word(w, budget)
        w = _twist_D(model, eseq[j]).apply_word(w, budget)
    return cyclic_reduce(w)


def generate_s05(eseq: ESequence, n: int, model: SurfaceModel = S05,
                 budget: int = DEFAULT_BUDGET, on_budget: str = "truncate") -> GeneratedSequence:
    """Generate gamma_0..gamma_n of the motivating family.

    ``on_budget``: "truncate" stops at the last curve within the word-length
    budget (recording ``truncated_at``); "raise" propagates the overflow.
    """
    if n < 4:
        raise ValueError("need at least five curves (n >= 4)")
    if len(eseq) < n + 2:
        raise ValueError("twist-power sequence too short for the requested prefix")
    spec = FamilySpec(m=2, b=2, b1=2, b2=2, eseq=eseq, kind="S05")
    seq = GeneratedSequence(model, spec, budget)
    g0 = Curve.side(model, 0)
    seq.curves.append(MappingClassWord([], model).apply(g0))
    for k in range(1, n + 1):
        try:
            psi = _chain(model, eseq, 2, k + 1)
            seq.curves.append(psi.apply(g0, budget=budget))
        except WordBudgetExceeded:
            if on_budget == "raise":
                raise
            seq.truncated_at = k
            break
    # twist certificates gamma'_k for every generated index k >= 2
    rho = _rho(model)
    g3_img = rho.apply(seq.curves[3]) if len(seq.curves) > 3 else None
    for k in range(2, len(seq.curves)):
        try:
            if k == 2:
                gp = MappingClassWord.twist(seq.curves[0], -eseq[0]).apply(seq.curves[2], budget=budget)
            elif k == 3:
                gp = MappingClassWord.twist(seq.curves[1], -eseq[1]).apply(seq.curves[3], budget=budget)
            else:
                # gamma_k = T_{gamma_{k-2}}^{e_{k-2}}(gamma'_k) with
                # gamma'_k the image of rho(gamma_3) under the prefix chain
                psi = _chain(model, eseq, 2, k - 3)
                gp = psi.apply(g3_img, budget=budget)
            seq.gamma_primes[k] = gp
        except WordBudgetExceeded:
            if on_budget == "raise":
                raise
            break
    return seq


def generate_general(spec: FamilySpec, n: int, model: SurfaceModel = S05,
                     budget: int = DEFAULT_BUDGET) -> GeneratedSequence:
    """Generate a sequence from the pluggable framework.

    The caller supplies base curves gamma_0..gamma_{m-1} and automorphisms
    f_0..f_{m-1}; the twist powers e_{k-m} enter at step k.  The map
    hypotheses are the caller's assertion; downstream certification of the
    intersection conditions is the practical substitute.
    """
    if spec.kind != "General":
        raise ValueError("spec.kind must be 'General'")
    m = spec.m
    if len(spec.base_curves) != m or len(spec.f_maps) != m:
        raise ValueError("need m base curves and m maps")
    if n < m:
        raise ValueError("need n >= m")
    if len(spec.eseq) < n - m + 1:
        raise ValueError("twist-power sequence too short")
    b_vals = {spec.base_curves[h].i(spec.f_maps[h].apply(spec.base_curves[h])) for h in range(m)}
    if len(b_vals) != 1:
        raise ValueError(f"i(gamma_k, f_k(gamma_k)) values disagree across k: {sorted(b_vals)}")
    if b_vals != {spec.b}:
        raise ValueError(f"i(gamma_k, f_k(gamma_k)) = {b_vals.pop()} but spec.b = {spec.b}")
    seq = GeneratedSequence(model, spec, budget)
    seq.curves.extend(spec.base_curves)

    def phi(k: int) -> MappingClassWord:
        h = k % m
        tw = MappingClassWord.twist(spec.base_curves[h], spec.eseq[k - m])
        return tw * spec.f_maps[h]

    chain = MappingClassWord([], model)
    chains = {m - 1: chain}
    for k in range(m, n + 1):
        chain = chain * phi(k)
        chains[k] = chain
        try:
            seq.curves.append(chain.apply(spec.base_curves[k % m], budget=budget))
        except WordBudgetExceeded:
            seq.truncated_at = k
            break
    for k in range(m, len(seq.curves)):
        # gamma'_k = phi_m ... phi_{k-1} f_{k mod m}(gamma_{k mod m}); for
        # degenerate user maps the twist relation then genuinely fails and the
        # verifier reports it, rather than being true by construction
        h = k % m
        try:
            gp = chains[k - 1].apply(spec.f_maps[h].apply(spec.base_curves[h]), budget=budget)
            seq.gamma_primes[k] = gp
        except WordBudgetExceeded:
            break
    return seq
