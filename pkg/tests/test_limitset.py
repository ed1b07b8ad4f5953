"""Length-vector reconstruction and the limit cycle, synthetic and exact."""

import math

import numpy as np

from laminatron.exactnum import make_esequence
from laminatron.limitset import length_vector, trace_limit_cycle, uterm, uterm_window_form
from laminatron.timeline import build_timeline


def _model(m=3, a=16, n=40):
    eseq = make_esequence(a, 1, n, "geometric")
    return build_timeline(eseq, m, 2, tuple([1.0] * m)), eseq


def test_uterm_profile_vs_window_form_case1():
    """At t = hi_i^0 the role-0 term equals e_i^0 up to the model's bounded parts."""
    tm, eseq = _model()
    i = 8
    k = i * 3
    t = tm.rec(k).hi
    u = uterm(tm, k, t)
    formula = uterm_window_form(tm, i, 0, t, case=1)
    # profile value = width + e * length; at the interval end length ~ 1/4
    direct = u.width + eseq[k] * math.exp(-u.width / 2)
    assert abs(u.value - direct) <= 1e-12 * direct
    assert 0.1 * formula <= u.value <= 4.0 * formula


def test_uterm_profile_vs_window_form_other_roles():
    """Rising-phase roles match the displayed window formula up to the dropped
    constants; needs the strong growth condition, which keeps every other role
    in its rising phase throughout the window."""
    eseq = make_esequence(2, 2, 16, "g1-minimal")
    assert eseq.g1
    tm = build_timeline(eseq, 3, 2, (1.0, 1.0, 1.0))
    i = 3
    for h in (1, 2):
        k = i * 3 + h
        t = tm.rec(i * 3).hi + 0.25
        assert t < tm.rec(k).mid  # rising phase, guaranteed by g1
        u = uterm(tm, k, t)
        formula = uterm_window_form(tm, i, h, t, case=2)
        const = 4 * (math.log(eseq[0]) if eseq[0] > 1 else 0.0)
        assert abs(u.value - formula - const) < 4 * math.log(eseq[h]) + 1e-6


def test_case2_next_vertex_rate():
    tm, eseq = _model()
    i = 8
    t0 = tm.rec(i * 3).hi
    for s in (1.0, 3.0, 7.0):
        u = uterm(tm, (i + 1) * 3, t0 + s)
        formula = uterm_window_form(tm, i + 1, 0, t0 + s, case=2)
        # U_{i+1}^0 = 4(t - hi_i^0) up to the log b interval offset
        assert abs(u.value - 4 * s) <= 4 * math.log(2) + 1e-9
        assert abs(formula - 4 * (s + (t0 - tm.rec((i + 1) * 3).hi))) >= 0  # smoke


def test_case1_domination_ratio_decreases():
    """U_i^h c_i^h / (U_i^0 c_i^0) must fall to zero along the windows."""
    tm, _ = _model()
    ratios = []
    for i in range(6, 11):
        t = tm.rec(i * 3).hi
        vec = length_vector(tm, 2, t, i * 3)
        top = vec.max()
        second = sorted(vec)[-2]
        ratios.append(second / top)
    assert all(ratios[t + 1] < ratios[t] for t in range(len(ratios) - 1))
    assert ratios[-1] < 1e-6


def test_trace_cyclic_and_converging():
    tm, _ = _model()
    tr = trace_limit_cycle(tm, 2, windows=6, samples_per_window=5, start_index=24)
    edges = tr.edge_labels()
    for t in range(len(edges) - 1):
        assert edges[t + 1][0] == edges[t][1]  # consecutive edges share a vertex
    last = max(s.window for s in tr.samples)
    lastw = [s for s in tr.samples if s.window == last]
    start = lastw[0]
    unit = np.zeros(3)
    unit[start.edge[0]] = 1.0
    assert np.abs(np.array(start.bary) - unit).sum() <= 0.05
    assert min(min(s.bary) for s in lastw) <= 0.02


def test_trace_m2_sweeps_edge():
    tm, _ = _model(m=2, a=16, n=30)
    tr = trace_limit_cycle(tm, 2, windows=4, samples_per_window=9, start_index=18)
    for s in tr.samples:
        assert abs(sum(s.bary) - 1.0) < 1e-9
    # interior samples in each window move off the start vertex monotonically
    w0 = [s for s in tr.samples if s.window == 0]
    h0 = w0[0].edge[0]
    vals = [s.bary[h0] for s in w0]
    assert vals[0] > 0.9 and vals[-1] < 0.1


def test_synthetic_projective_invariance():
    tm, _ = _model()
    t = tm.rec(27).hi + 0.5
    v1 = length_vector(tm, 2, t, 27)
    v2 = v1 * 37.0
    b1 = v1 / v1.sum()
    b2 = v2 / v2.sum()
    assert np.allclose(b1, b2)
