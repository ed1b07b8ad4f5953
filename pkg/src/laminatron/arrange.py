"""Arrangements of simple closed geodesics and the filling test.

The curves are realized as geodesics of the exact matrix model (minimal
position for free, no bigons).  The combinatorial engine supplies the
crossing set; the matrix model supplies, for each crossing, an exact-geometry
position along each of the two curves, which fixes the cyclic order of
crossings along every curve and the local rotation at every crossing.  Face
tracing then reads off complementary regions together with a boundary word
for each, and the filling verdict is simply:

    the union is connected, the traced surface closes up to a sphere, and
    every face word is trivial or a puncture loop
    (or boundary-parallel, for the relative/subsurface variant).

A trivial face word means the region is an unpunctured disk and a peripheral
word means a once-punctured disk: the word abelianizes to the puncture
content of the region, so no separate multiplicity bookkeeping is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import oracle
from .intersect import crossings_detail
from .surface import SurfaceModel
from .words import cyclic_key, cyclic_reduce, invert, word

__all__ = ["fills", "FillReport", "RealizationError", "max_arcs_in_complement"]


class RealizationError(RuntimeError):
    """The geometric realization could not be certified (degenerate numerics)."""


# -- projective float helpers ---------------------------------------------------


def _mob(m, p):
    a, b, c, d = m
    x, y = p
    nx, ny = a * x + b * y, c * x + d * y
    s = max(abs(nx), abs(ny))
    if s == 0.0 or not math.isfinite(s):
        raise RealizationError("projective point degenerated")
    return (nx / s, ny / s)


# matrix entries grow exponentially in word length; past this cap the float
# chart arithmetic overflows doubles and the realization cannot be certified
GEOMETRY_WORD_CAP = 220


def _matf(m):
    out = tuple(float(x) for x in m)
    if not all(math.isfinite(x) for x in out):
        raise RealizationError("matrix entries overflow double precision")
    return out


class _AxisChart:
    """Orientation-preserving chart taking the axis of M to the imaginary axis.

    The repelling endpoint goes to 0, the attracting one to infinity, and the
    chart matrix is normalized to positive determinant so that it maps the
    upper half-plane to itself: the +Re side of the imaginary axis is the same
    geometric side of every oriented axis.
    """

    def __init__(self, m):
        (pax, pay), (prx, pry) = oracle.fixed_points(m)
        # rows of the chart matrix: C(z) = (y_r z - x_r) / (y_a z - x_a)
        r1 = (pry, -prx)
        r2 = (pay, -pax)
        det = r1[0] * r2[1] - r1[1] * r2[0]
        if det == 0.0 or not math.isfinite(det):
            raise RealizationError("degenerate axis chart")
        if det < 0.0:
            r2 = (-r2[0], -r2[1])
        self.c = (r1[0], r1[1], r2[0], r2[1])

    def value(self, p) -> float:
        x, y = p
        a, b, c, d = self.c
        num = a * x + b * y
        den = c * x + d * y
        if den == 0.0:
            raise RealizationError("axis chart hit the attracting endpoint")
        return num / den

    def cross_position(self, q1, q2) -> tuple[float, float]:
        """(s, side-of-forward-endpoint) for the axis through boundary points q1, q2."""
        v1, v2 = self.value(q1), self.value(q2)
        prod = -v1 * v2
        if not (prod > 0.0) or not math.isfinite(prod):
            raise RealizationError("axes do not cross in the chart")
        return 0.5 * math.log(prod), v1

    def project(self, z) -> float:
        """s-coordinate of the axis projection of an interior point (x + iy)."""
        x, y = z
        a, b, c, d = self.c
        den = complex(x, y) * c + d
        if den == 0:
            raise RealizationError("projection hit the chart pole")
        w = (complex(x, y) * a + b) / den
        r = abs(w)
        if r == 0.0 or not math.isfinite(r):
            raise RealizationError("projection degenerated")
        return math.log(r)


@dataclass
class _Event:
    anchor: int  # pass vertex the crossing is slid to (isotopy + triangle moves)
    s: float  # chart position of the true geodesic crossing
    delta: float  # signed offset from the slot vertex, in the lift's own frame
    xid: int
    other: int
    out_is_pos_side: bool  # the other curve's forward ray exits on the +Re side

    @property
    def letter_pos(self) -> int:
        return self.anchor


@dataclass
class FillReport:
    verdict: bool
    reason: str
    face_words: list[str] = field(default_factory=list)
    n_crossings: int = 0


class _CurveGeom:
    def __init__(self, w: np.ndarray):
        if w.shape[0] > GEOMETRY_WORD_CAP:
            raise RealizationError(
                f"word of {w.shape[0]} letters exceeds the geometric realization cap"
            )
        self.w = w
        self.mat = oracle.mat_of_word(w)
        self.chart = _AxisChart(self.mat)
        tr = abs(self.mat[0] + self.mat[3])
        self.period = 2.0 * math.log((tr + math.sqrt(tr * tr - 4)) / 2.0)
        self.prefix = [(1, 0, 0, 1)]
        for t in range(w.shape[0]):
            self.prefix.append(oracle._mul(self.prefix[-1], oracle._GENS_PM[int(w[t])]))
        self.vertex_s = self._vertex_projections()
        self.events: list[_Event] = []

    def _vertex_projections(self):
        """Axis projections of the pass-vertex lifts P_t(z0), t = 0..p.

        The base point z0 only fixes a convention for slicing the word at the
        passes, but the slicing needs strictly increasing projections; some
        base points are degenerate for particular words, so try several.
        """
        last_err = None
        for z0 in (1j, 2j, 0.5 + 1.5j, -0.7 + 2.3j, 0.31 + 0.83j):
            out = []
            try:
                for t in range(self.w.shape[0] + 1):
                    a, b, c, d = _matf(self.prefix[t])
                    den = c * z0 + d
                    if den == 0:
                        raise RealizationError("vertex lift hit the chart pole")
                    z = (a * z0 + b) / den
                    out.append(self.chart.project((z.real, z.imag)))
            except RealizationError as ex:
                last_err = str(ex)
                continue
            gaps = [out[t + 1] - out[t] for t in range(len(out) - 1)]
            if min(gaps) > 1e-9:
                return out
            last_err = f"min gap {min(gaps)}"
        raise RealizationError(
            f"vertex projections are not certifiable along the axis ({last_err})"
        )

    def vertex_s_unrolled(self, t: int) -> float:
        p = self.w.shape[0]
        k, r = divmod(t, p)
        return self.vertex_s[r] + k * self.period


def _build_events(model: SurfaceModel, geoms: list[_CurveGeom]):
    """Compute all crossings and slide each to its anchor vertex.

    Every crossing of two lifts lies in the shared band starting at the
    anchored pass pair (i, j), whose start vertex is common to both curves;
    sliding the crossing there is an isotopy combined with triangle moves,
    neither of which changes complementary-region words.  Within one anchor
    vertex the true geodesic positions order the crossings.
    """
    n = len(geoms)
    xid = 0
    xid_curves = []
    for a in range(n):
        for b in range(a + 1, n):
            ga, gb = geoms[a], geoms[b]
            p, q = ga.w.shape[0], gb.w.shape[0]
            crossings = crossings_detail(model, ga.w, gb.w)
            for c in crossings:
                pa = ga.prefix[c.i]
                rot = np.concatenate([gb.w[c.j :], gb.w[: c.j]])
                nb = oracle.mat_of_word(rot)
                att, rep = oracle.fixed_points(nb)
                paf = _matf(pa)
                s_a, v_att = ga.chart.cross_position(_mob(paf, att), _mob(paf, rep))
                pb = gb.prefix[c.j]
                rot_u = np.concatenate([ga.w[c.i :], ga.w[: c.i]])
                na = oracle.mat_of_word(rot_u)
                att_u, rep_u = oracle.fixed_points(na)
                pbf = _matf(pb)
                s_b, v_att_u = gb.chart.cross_position(_mob(pbf, att_u), _mob(pbf, rep_u))
                # slide the crossing to a band vertex: offset t within the
                # shared band, the same t on both curves (opposite-direction
                # bands reverse the offset on b); choose t nearest to the true
                # crossing position as seen by BOTH charts, so that boundary
                # fuzz in one chart cannot produce an inconsistent cell
                def _vdist(g, vertex, s):
                    d = (s - g.vertex_s_unrolled(vertex % g.w.shape[0])) % g.period
                    return min(d, g.period - d)

                best_t, best_d = 0, float("inf")
                for t in range(c.band + 1):
                    vb = (c.j + t) if c.same_dir else (c.j - t)
                    d = _vdist(ga, c.i + t, s_a) + _vdist(gb, vb, s_b)
                    if d < best_d:
                        best_t, best_d = t, d
                vtx_a = c.i + best_t
                vtx_b = (c.j + best_t) if c.same_dir else (c.j - best_t)
                ga.events.append(
                    _Event(anchor=vtx_a % p, s=s_a, delta=s_a - ga.vertex_s_unrolled(vtx_a),
                           xid=xid, other=b, out_is_pos_side=v_att > 0)
                )
                gb.events.append(
                    _Event(anchor=vtx_b % q, s=s_b, delta=s_b - gb.vertex_s_unrolled(vtx_b),
                           xid=xid, other=a, out_is_pos_side=v_att_u > 0)
                )
                xid_curves.append((a, b))
                xid += 1
    for g in geoms:
        g.events.sort(key=lambda e: (e.anchor, e.delta))
        for t in range(len(g.events) - 1):
            e1, e2 = g.events[t], g.events[t + 1]
            if e1.anchor == e2.anchor and abs(e1.delta - e2.delta) < 1e-9 * max(1.0, g.period):
                raise RealizationError("crossing positions not separable at double precision")
        # the slot order must refine the true geodesic cyclic order along the
        # curve: sorted by position, the slot sequence may descend at most once
        # around the cycle (the wrap), else some slide was illegal
        if len(g.events) > 1:
            qpos = sorted(
                ((g.vertex_s_unrolled(e.anchor) + e.delta) % g.period, e.anchor) for e in g.events
            )
            slots = [a for _, a in qpos]
            descents = sum(
                1 for t in range(len(slots)) if slots[(t + 1) % len(slots)] < slots[t]
            )
            if descents > 1:
                raise RealizationError("slot assignment conflicts with geodesic order")
    return xid, xid_curves


def _arc_spans(g: _CurveGeom) -> list[int]:
    """Letter spans of the arcs between consecutive events (cyclic, sums to p)."""
    p = g.w.shape[0]
    ne = len(g.events)
    if ne == 0:
        return []
    if ne == 1:
        return [p]
    spans = []
    for t in range(ne - 1):
        spans.append((g.events[t + 1].letter_pos - g.events[t].letter_pos) % p)
    spans.append(p - sum(spans))
    if spans[-1] < 0:
        raise RealizationError("letter slicing inconsistent with crossing order")
    return spans


def _trace_faces(model: SurfaceModel, geoms: list[_CurveGeom], n_cross: int):
    """Trace complementary faces; returns list of face words (letter lists)."""
    # darts: (curve, event_index, forward?) — the directed arc leaving event
    # toward the next (forward) or previous (backward) event along the curve.
    darts = {}
    for ci, g in enumerate(geoms):
        ne = len(g.events)
        spans = _arc_spans(g)
        for t in range(ne):
            nxt = (t + 1) % ne
            l1 = g.events[t].letter_pos
            p = g.w.shape[0]
            lab_f = [int(g.w[(l1 + k) % p]) for k in range(spans[t])]
            darts[(ci, t, True)] = {
                "to": (ci, nxt),
                "rev": (ci, nxt, False),
                "letters": lab_f,
            }
            darts[(ci, nxt, False)] = {
                "to": (ci, t),
                "rev": (ci, t, True),
                "letters": [-l for l in reversed(lab_f)],
            }
    # rotation at each crossing: ccw order of the four emanating darts
    rotations: dict[int, list] = {}
    for ci, g in enumerate(geoms):
        for t, e in enumerate(g.events):
            rotations.setdefault(e.xid, {})[ci] = (t, e.out_is_pos_side)
    rot_order: dict[int, list] = {}
    for x, info in rotations.items():
        # side flag stored on the a-event says where b's forward ray exits in
        # a's chart; that fixes the ccw order of the four darts
        (ca, (ta, b_side_in_a)), (cb, (tb, _)) = sorted(info.items())
        a_out = (ca, ta, True)
        a_in = (ca, ta, False)
        b_out = (cb, tb, True)
        b_in = (cb, tb, False)
        if b_side_in_a:
            rot_order[x] = [b_out, a_out, b_in, a_in]
        else:
            rot_order[x] = [b_in, a_out, b_out, a_in]
    # face tracing: next dart = ccw-successor of the reversal of the current dart
    dart_ids = list(darts.keys())
    succ = {}
    for ci, g in enumerate(geoms):
        for t, e in enumerate(g.events):
            order = rot_order[e.xid]
            for k, d in enumerate(order):
                succ[d] = order[(k + 1) % 4]
    visited = set()
    faces = []
    for d0 in dart_ids:
        if d0 in visited:
            continue
        letters = []
        d = d0
        guard = 0
        while d not in visited:
            visited.add(d)
            letters.extend(darts[d]["letters"])
            d = succ[darts[d]["rev"]]
            guard += 1
            if guard > 8 * len(dart_ids) + 16:
                raise RealizationError("face tracing did not close up")
        faces.append(letters)
    v = n_cross
    e = len(dart_ids) // 2
    f = len(faces)
    if v - e + f != 2:
        raise RealizationError(f"arrangement does not close to a sphere (V-E+F={v - e + f})")
    return faces


def _classify_word(model: SurfaceModel, letters, delta_keys) -> str:
    w = cyclic_reduce(word(letters)) if letters else np.zeros(0, dtype=np.int8)
    if w.shape[0] == 0:
        return "disk"
    k = cyclic_key(w)
    ki = cyclic_key(invert(w))
    for t, pw in enumerate(model.puncture_words):
        if k == cyclic_key(pw) or ki == cyclic_key(pw):
            return f"puncture:{t}"
    if k in delta_keys or ki in delta_keys:
        return "boundary"
    return "essential"


def fills(model: SurfaceModel, curve_words, delta_words=()) -> FillReport:
    """Do the curves fill the surface (or the subsurface bounded by delta)?

    ``curve_words``: cyclically reduced words of essential simple closed
    curves, pairwise non-isotopic.  ``delta_words``: boundary multicurve of
    the target subsurface; each must be disjoint from every input curve.
    """
    ws = [cyclic_reduce(np.asarray(getattr(w, "w", w))) for w in curve_words]
    if not ws:
        raise ValueError("need at least one curve")
    delta = [cyclic_reduce(np.asarray(getattr(d, "w", d))) for d in delta_words]
    from .intersect import intersection_count  # local import to avoid cycle

    for d in delta:
        for w in ws:
            if intersection_count(model, d, w) != 0:
                return FillReport(False, "boundary crosses a curve")
    geoms = [_CurveGeom(w) for w in ws]
    n_cross, _pairs = _build_events(model, geoms)
    # connectivity of the union via crossings
    parent = list(range(len(ws)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g_i, g in enumerate(geoms):
        for e in g.events:
            ra, rb = find(g_i), find(e.other)
            if ra != rb:
                parent[ra] = rb
    roots = {find(i) for i in range(len(ws))}
    if len(roots) > 1:
        return FillReport(False, "union is disconnected", n_crossings=n_cross)
    if len(ws) == 1 and n_cross == 0:
        return FillReport(False, "a single curve never fills", n_crossings=0)
    faces = _trace_faces(model, geoms, n_cross)
    delta_keys = {cyclic_key(d) for d in delta}
    kinds = [_classify_word(model, f, delta_keys) for f in faces]
    words_txt = []
    for f, kind in zip(faces, kinds):
        red = cyclic_reduce(word(f)) if f else np.zeros(0, dtype=np.int8)
        words_txt.append(kind + ":" + ".".join(str(int(l)) for l in red))
    bad = [k for k in kinds if k == "essential"]
    if bad:
        return FillReport(False, f"{len(bad)} complementary regions are essential",
                          face_words=words_txt, n_crossings=n_cross)
    if not delta:
        n_punct = sum(1 for k in kinds if k.startswith("puncture"))
        if n_punct != model.punctures:
            return FillReport(False, "puncture accounting failed",
                              face_words=words_txt, n_crossings=n_cross)
    return FillReport(True, "all complementary regions are disks or once-punctured disks",
                      face_words=words_txt, n_crossings=n_cross)


def max_arcs_in_complement(model: SurfaceModel, union_words, probe_word) -> int:
    """Max number of probe arcs inside one complementary region of the union.

    Builds the arrangement of union + probe, then merges faces across probe
    edges; the largest number of probe edges in a merged region is the bound
    used by the product estimates.
    """
    ws = [cyclic_reduce(np.asarray(w)) for w in union_words]
    probe = cyclic_reduce(np.asarray(probe_word))
    all_ws = ws + [probe]
    geoms = [_CurveGeom(w) for w in all_ws]
    n_cross, _ = _build_events(model, geoms)
    probe_idx = len(all_ws) - 1
    # probe must not cross itself through events of union-union crossings only
    faces = _trace_faces(model, geoms, n_cross)
    # recover face adjacency across probe arcs by retracing with dart ownership
    # each probe arc (edge) lies between two faces; union-find those faces
    darts = {}
    for ci, g in enumerate(geoms):
        ne = len(g.events)
        for t in range(ne):
            nxt = (t + 1) % ne
            darts[(ci, t, True)] = (ci, nxt)
            darts[(ci, nxt, False)] = (ci, t)
    rotations: dict[int, dict] = {}
    for ci, g in enumerate(geoms):
        for t, e in enumerate(g.events):
            rotations.setdefault(e.xid, {})[ci] = (t, e.out_is_pos_side)
    rot_order = {}
    for x, info in rotations.items():
        (ca, (ta, b_side_in_a)), (cb, (tb, _)) = sorted(info.items())
        if b_side_in_a:
            rot_order[x] = [(cb, tb, True), (ca, ta, True), (cb, tb, False), (ca, ta, False)]
        else:
            rot_order[x] = [(cb, tb, False), (ca, ta, True), (cb, tb, True), (ca, ta, False)]
    succ = {}
    for ci, g in enumerate(geoms):
        for t, e in enumerate(g.events):
            order = rot_order[e.xid]
            for k, d in enumerate(order):
                succ[d] = order[(k + 1) % 4]
    visited = {}
    face_id = 0
    for d0 in list(succ.keys()):
        if d0 in visited:
            continue
        d = d0
        while d not in visited:
            visited[d] = face_id
            ci, t = darts[d]
            rev = (ci, t, False) if d[2] else (ci, t, True)
            d = succ[rev]
        face_id += 1
    parent = list(range(face_id))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    probe_edges = []
    g = geoms[probe_idx]
    ne = len(g.events)
    for t in range(ne):
        d_f = (probe_idx, t, True)
        d_b = (probe_idx, (t + 1) % ne, False)
        f1, f2 = visited[d_f], visited[d_b]
        probe_edges.append((f1, f2))
        r1, r2 = find(f1), find(f2)
        if r1 != r2:
            parent[r1] = r2
    counts: dict[int, int] = {}
    for f1, _f2 in probe_edges:
        counts[find(f1)] = counts.get(find(f1), 0) + 1
    return max(counts.values()) if counts else 0
