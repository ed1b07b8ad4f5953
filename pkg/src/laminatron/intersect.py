"""Exact geometric intersection numbers from the ribbon boundary order.

Conjugacy classes are realized by geodesics; lifts to the Cayley tree are
bi-infinite periodic words, and two lifts cross iff their four endpoints
alternate in the circular order on the space of ends determined by the spider
ribbon structure.  Crossings of the two closed geodesics biject with
equivalence classes of anchored pass pairs (i, j): the pair is counted at the
start of the maximal shared band, which gives the rules

    skip (i, j)   iff  u[i-1] == v[j-1]  or  u[i-1] == v[j]^{-1}
    count (i, j)  iff  the endpoint pairs of the two anchored lifts alternate.

Endpoint comparison is a lazy walk down the tree: a ray is compared against
the two axis rays of the u-lift, and the first divergence decides which side
of the axis it lies on via the local circular order of slots.

Everything is vectorized over the passes of the longer word, so one operand
may have tens of millions of letters.

Only essential (non-peripheral) primitive classes are legal input: peripheral
classes have parabolic ends, for which the endpoint-alternation test does not
compute a geometric crossing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .surface import SurfaceModel
from .words import cyclic_reduce, invert, is_primitive, unoriented_key

__all__ = [
    "intersection_count",
    "self_intersection_count",
    "is_simple",
    "Crossing",
    "crossings_detail",
    "Ray",
    "ccw_rays",
]


def _check_operand(model: SurfaceModel, w: np.ndarray, what: str) -> np.ndarray:
    w = cyclic_reduce(w)
    if w.shape[0] == 0:
        raise ValueError(f"{what} is trivial")
    if model.is_peripheral(w):
        raise ValueError(f"{what} is peripheral; intersection undefined in C(S)")
    if not is_primitive(w):
        raise ValueError(f"{what} is a proper power")
    return w


class _AxisFrame:
    """Side-of-axis classifier for the lift of u anchored at pass i."""

    def __init__(self, model: SurfaceModel, u: np.ndarray, i: int, depth: int):
        self.model = model
        n = model.n_gen
        p = u.shape[0]
        self.depth = depth
        idx = (i + np.arange(depth + 1)) % p
        self.Pp = u[idx]  # forward axis ray letters
        idx_m = (i - 1 - np.arange(depth + 1)) % p
        self.Pm = (-u[idx_m]).astype(u.dtype)  # backward axis ray letters
        slot_of = model.slot_of
        m = 2 * n
        sa = int(slot_of[self.Pp[0] + n])
        sc = int(slot_of[self.Pm[0] + n])
        # side of a ray splitting at the root, by its first letter
        letters = np.arange(-n, n + 1)
        sl = slot_of[letters + n]
        self.root_side = ((sl - sa) % m) < ((sc - sa) % m)
        # per-depth data for rays that shadow the forward/backward axis ray
        rank = model.rank_after
        t = np.arange(1, depth + 1)
        cP = slot_of[(-self.Pp[t - 1]).astype(np.int64) + n]
        self.rankP_axis = rank[cP, slot_of[self.Pp[t] + n]]
        self.cP = cP
        cM = slot_of[(-self.Pm[t - 1]).astype(np.int64) + n]
        self.rankM_axis = rank[cM, slot_of[self.Pm[t] + n]]
        self.cM = cM

    def sides(self, v: np.ndarray, base: np.ndarray, direction: int, sign: int):
        """Classify the rays t -> sign * v[(base + direction*t) mod q].

        Returns (side bool array, equal bool array); ``equal`` marks rays that
        coincide with an axis ray through the full comparison depth (same
        geodesic), which never count as crossings.
        """
        model = self.model
        n = model.n_gen
        q = v.shape[0]
        N = base.shape[0]
        side = np.zeros(N, dtype=bool)
        equal = np.zeros(N, dtype=bool)
        l0 = sign * v[base % q].astype(np.int64)
        mp = l0 == int(self.Pp[0])
        mm = l0 == int(self.Pm[0])
        mroot = ~(mp | mm)
        side[mroot] = self.root_side[l0[mroot] + n]
        slot_of = model.slot_of
        rank = model.rank_after
        for axis_letters, axis_rank, cs, flip, m0 in (
            (self.Pp, self.rankP_axis, self.cP, False, mp),
            (self.Pm, self.rankM_axis, self.cM, True, mm),
        ):
            idx = np.nonzero(m0)[0]
            t = 1
            while idx.size and t <= self.depth:
                lt = sign * v[(base[idx] + direction * t) % q].astype(np.int64)
                stay = lt == int(axis_letters[t])
                div = ~stay
                if div.any():
                    jd = idx[div]
                    rl = rank[cs[t - 1], slot_of[lt[div] + n]]
                    if flip:
                        # ray shadows the backward axis ray: ccw = (ray before axis)
                        side[jd] = rl < axis_rank[t - 1]
                    else:
                        # ray shadows the forward axis ray: ccw = (axis before ray)
                        side[jd] = axis_rank[t - 1] < rl
                idx = idx[stay]
                t += 1
            equal[idx] = True
        return side, equal


def _pair_counts(model: SurfaceModel, u: np.ndarray, v: np.ndarray, self_mode: bool) -> int:
    p, q = u.shape[0], v.shape[0]
    depth = p + q + 2
    anchors = np.arange(q, dtype=np.int64)
    a_prev = np.roll(v, 1)  # v[j-1]
    total = 0
    for i in range(p):
        frame = _AxisFrame(model, u, i, depth)
        side_f, eq_f = frame.sides(v, anchors, +1, +1)
        side_b, eq_b = frame.sides(v, anchors - 1, -1, -1)
        linked = (side_f != side_b) & ~eq_f & ~eq_b
        ui_prev = int(u[(i - 1) % p])
        initial = (a_prev != ui_prev) & (v != -ui_prev)
        linked &= initial
        if self_mode:
            linked[i] = False
        total += int(np.count_nonzero(linked))
    return total


def intersection_count(model: SurfaceModel, u: np.ndarray, v: np.ndarray) -> int:
    """Geometric intersection number of two distinct essential primitive classes."""
    u = _check_operand(model, u, "first class")
    v = _check_operand(model, v, "second class")
    if unoriented_key(u) == unoriented_key(v):
        return 0
    if u.shape[0] > v.shape[0]:
        u, v = v, u
    return _pair_counts(model, u, v, self_mode=False)


def self_intersection_count(model: SurfaceModel, u: np.ndarray) -> int:
    """Self-intersection number of an essential primitive class."""
    u = _check_operand(model, u, "class")
    return _pair_counts(model, u, u, self_mode=True) // 2


def is_simple(model: SurfaceModel, u: np.ndarray) -> bool:
    return self_intersection_count(model, u) == 0


# -- detailed crossings for arrangements --------------------------------------


@dataclass
class Crossing:
    """One geometric crossing of two classes, anchored at its band start.

    i, j       anchored pass indices on u and v
    band       shared-band length in edges (0 = transverse at a vertex)
    same_dir   True if the strands run the band in the same direction
    side_fwd   side of the axis of the u-lift taken by the forward v-ray
    """

    i: int
    j: int
    band: int
    same_dir: bool
    side_fwd: bool

    def u_halfpos(self, p: int) -> int:
        # crossing sits at the middle of its band along u, in half-steps
        return (2 * self.i + self.band) % (2 * p)

    def v_halfpos(self, q: int) -> int:
        if self.same_dir:
            return (2 * self.j + self.band) % (2 * q)
        return (2 * self.j - self.band) % (2 * q)


def _band_length(u, v, i, j):
    """Length of the maximal shared band starting at anchored pair (i, j)."""
    p, q = u.shape[0], v.shape[0]
    if u[i] == v[j]:
        o = 0
        while o < p + q and u[(i + o) % p] == v[(j + o) % q]:
            o += 1
        return o, True
    if u[i] == -v[(j - 1) % q]:
        o = 0
        while o < p + q and u[(i + o) % p] == -v[(j - 1 - o) % q]:
            o += 1
        return o, False
    return 0, True


def crossings_detail(model: SurfaceModel, u: np.ndarray, v: np.ndarray) -> list[Crossing]:
    """All crossings of two distinct classes with band/side data (small-word path)."""
    u = _check_operand(model, u, "first class")
    v = _check_operand(model, v, "second class")
    if unoriented_key(u) == unoriented_key(v):
        return []
    p, q = u.shape[0], v.shape[0]
    depth = p + q + 2
    anchors = np.arange(q, dtype=np.int64)
    a_prev = np.roll(v, 1)
    out = []
    for i in range(p):
        frame = _AxisFrame(model, u, i, depth)
        side_f, eq_f = frame.sides(v, anchors, +1, +1)
        side_b, eq_b = frame.sides(v, anchors - 1, -1, -1)
        linked = (side_f != side_b) & ~eq_f & ~eq_b
        ui_prev = int(u[(i - 1) % p])
        initial = (a_prev != ui_prev) & (v != -ui_prev)
        linked &= initial
        for j in np.nonzero(linked)[0]:
            band, same_dir = _band_length(u, v, i, int(j))
            out.append(
                Crossing(i=i, j=int(j), band=band, same_dir=same_dir, side_fwd=bool(side_f[j]))
            )
    return out


# -- circular order of arbitrary rays (arrangement support) -------------------


class Ray:
    """A materialized prefix of an end of the Cayley tree."""

    __slots__ = ("letters",)

    def __init__(self, letters: np.ndarray):
        self.letters = np.asarray(letters, dtype=np.int64)

    @staticmethod
    def forward(v: np.ndarray, j: int, depth: int) -> "Ray":
        q = v.shape[0]
        idx = (j + np.arange(depth)) % q
        return Ray(v[idx])

    @staticmethod
    def backward(v: np.ndarray, j: int, depth: int) -> "Ray":
        q = v.shape[0]
        idx = (j - 1 - np.arange(depth)) % q
        return Ray(-v[idx])


def _common_prefix(a: Ray, b: Ray) -> int:
    n = min(a.letters.shape[0], b.letters.shape[0])
    neq = np.nonzero(a.letters[:n] != b.letters[:n])[0]
    if neq.size == 0:
        raise ValueError("rays agree through full depth; increase depth")
    return int(neq[0])


def _linord(model: SurfaceModel, a: Ray, b: Ray, d: int) -> bool:
    """True iff ray a comes before ray b in the linear order of their arc."""
    n = model.n_gen
    slot_of, rank = model.slot_of, model.rank_after
    if d == 0:
        sa = int(slot_of[a.letters[0] + n])
        sb = int(slot_of[b.letters[0] + n])
        return sa < sb
    c = int(slot_of[-a.letters[d - 1] + n])
    ra = int(rank[c, slot_of[a.letters[d] + n]])
    rb = int(rank[c, slot_of[b.letters[d] + n]])
    return ra < rb


def ccw_rays(model: SurfaceModel, A: Ray, B: Ray, C: Ray) -> bool:
    """Circular-order predicate: True iff (A, B, C) is positively ordered."""
    dab = _common_prefix(A, B)
    dbc = _common_prefix(B, C)
    dac = _common_prefix(A, C)
    lo = min(dab, dbc, dac)
    if dab > lo:
        return _linord(model, A, B, dab)
    if dbc > lo:
        return _linord(model, B, C, dbc)
    if dac > lo:
        return _linord(model, C, A, dac)
    # all three split at one vertex: compare slot ranks there
    n = model.n_gen
    slot_of = model.slot_of
    m = 2 * n
    if lo == 0:
        ra = int(slot_of[A.letters[0] + n])
        rb = int(slot_of[B.letters[0] + n])
        rc = int(slot_of[C.letters[0] + n])
    else:
        c = int(slot_of[-A.letters[lo - 1] + n])
        rank = model.rank_after
        ra = int(rank[c, slot_of[A.letters[lo] + n]])
        rb = int(rank[c, slot_of[B.letters[lo] + n]])
        rc = int(rank[c, slot_of[C.letters[lo] + n]])
    return (ra < rb < rc) or (rb < rc < ra) or (rc < ra < rb)
