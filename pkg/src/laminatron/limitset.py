"""Length-vector reconstruction and the projectivized limit cycle.

The contribution of a short curve to the length of a probe at time t is

    U_k(t) = w_t(gamma_k) + tw_t(gamma_k) * l_t(gamma_k),

read off the timeline profiles, and the length of a probe is reconstructed
over the active window of m+1 consecutive short curves:

    hyp_t(delta) ~ sum_{j=k..k+m} U_j(t) i(delta, gamma_j).

Within the window t in [hi_k, hi_{k+1}] the term of gamma_k dominates at the
left endpoint and the terms of gamma_{k+1} (and gamma_{k+m}) take over as t
grows, so the projectivized vector sweeps the edge between consecutive vertex
measures; concatenating windows traces the cycle through all m vertices.

In synthetic mode the probe pairings i(delta_p, gamma_{im+h}) are replaced by
c_i^h for p = h (and 0 otherwise), which makes the vertex basis the unit
coordinate vectors; exact mode uses real probe curves and expresses samples
in the basis of the best available normalized vectors.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .estimates import compute_A
from .exactnum import log_of_int
from .timeline import TimelineModel, profile

__all__ = ["UTerm", "SimplexTrace", "uterm", "uterm_window_form", "length_vector",
           "trace_limit_cycle"]


@dataclass
class UTerm:
    k: int
    t: float
    value: float
    width: float
    twist_part: float


def uterm(model: TimelineModel, k: int, t: float) -> UTerm:
    """Width-plus-twist contribution of gamma_k at time t, from the profile."""
    p = profile(model, t, k)
    if p.twist == 0:
        tw_part = 0.0
    else:
        # e_k * l_t in log domain: the powers can be astronomically large
        log_tw = model.log_e(k) - 0.5 * p.width
        tw_part = math.exp(log_tw) if log_tw < 700.0 else math.inf
    val = p.width + tw_part
    return UTerm(k=k, t=t, value=val, width=p.width, twist_part=tw_part)


def uterm_window_form(model: TimelineModel, i: int, h: int, t: float, case: int) -> float:
    """The displayed window formulas, for cross-checking against the profile.

    case 1, h = 0:        U = e_i^0
    case 2, role h = 0:   U_{i+1}^0 = 4 (t - hi_i^0)
    other h:              U = 4 (sum_{j=1}^i log(e_j^0 / e_{j-1}^h) + t - hi_i^0)
    """
    m = model.m
    e = model.eseq
    if h == 0 and case == 1:
        return float(e[i * m])
    hi_i0 = model.rec(i * m).hi
    if h == 0 and case == 2:
        return 4.0 * (t - hi_i0)
    s = sum(log_of_int(e[j * m]) - log_of_int(e[(j - 1) * m + h]) for j in range(1, i + 1))
    return 4.0 * (s + t - hi_i0)


def uterm_log(model: TimelineModel, k: int, t: float) -> float | None:
    """log U_k(t), stable for astronomically large twist powers."""
    p = profile(model, t, k)
    parts = []
    if p.width > 0:
        parts.append(math.log(p.width))
    if p.twist != 0:
        parts.append(model.log_e(k) - 0.5 * p.width)
    if not parts:
        return None
    top = max(parts)
    return top + math.log(sum(math.exp(x - top) for x in parts))


def _c_val(model: TimelineModel, b: int, k: int) -> float:
    # log-domain c_k = A(0, k) to avoid giant integers in float work
    m = model.m
    out = 0.0
    for j in range(m, k):
        if (k - j) % m == 0:
            out += math.log(b) + log_of_int(model.eseq[j])
    return out


@dataclass
class TraceSample:
    t: float
    window: int
    case: int
    bary: tuple[float, ...]
    residual: float
    edge: tuple[int, int]


@dataclass
class SimplexTrace:
    m: int
    samples: list[TraceSample] = field(default_factory=list)

    def to_csv(self) -> str:
        m = self.m
        head = "t," + ",".join(f"beta_{h}" for h in range(m)) + ",residual,window,case,edge"
        lines = [head]
        for s in self.samples:
            bs = ",".join(f"{b:.9f}" for b in s.bary)
            lines.append(f"{s.t:.9f},{bs},{s.residual:.3e},{s.window},{s.case},{s.edge[0]}-{s.edge[1]}")
        return "\n".join(lines) + "\n"

    def edge_labels(self):
        seen = []
        for s in self.samples:
            if not seen or seen[-1] != s.edge:
                seen.append(s.edge)
        return seen


def length_vector(model: TimelineModel, b: int, t: float, k_window: int,
                  probe_matrix: np.ndarray | None = None,
                  probe_assign=None) -> np.ndarray:
    """Log-safe probe vector at time t over the window gamma_k..gamma_{k+m}.

    ``probe_matrix[p, j]`` gives i(probe_p, gamma_{k_window+j}); synthetic
    mode (None) uses unit assignment by residue with weights c_{k}.
    Entries are returned rescaled by the largest term (projective vector).
    """
    m = model.m
    ks = list(range(k_window, k_window + m + 1))
    log_u = [uterm_log(model, k, t) for k in ks]
    nprobe = m if probe_matrix is None else probe_matrix.shape[0]
    comp_logs = [None] * nprobe
    for p in range(nprobe):
        acc = None
        for j, k in enumerate(ks):
            if log_u[j] is None:
                continue
            if probe_matrix is None:
                if k % m != p:
                    continue
                term = log_u[j] + _c_val(model, b, k)
            else:
                w = float(probe_matrix[p, j])
                if w <= 0:
                    continue
                term = log_u[j] + math.log(w)
            acc = term if acc is None else max(acc, term) + math.log1p(math.exp(-abs(acc - term)))
        comp_logs[p] = acc
    top = max(c for c in comp_logs if c is not None)
    return np.array([0.0 if c is None else math.exp(c - top) for c in comp_logs])


def trace_limit_cycle(model: TimelineModel, b: int, windows: int, samples_per_window: int,
                      start_index: int | None = None, case1_w: float = 0.0,
                      basis: np.ndarray | None = None,
                      probe_matrix_fn=None) -> SimplexTrace:
    """Sample the projectivized length vector across consecutive windows.

    Window j covers t in [hi_k, hi_{k+1}] for k = start_index + j; the edge
    label is (k mod m, (k+1) mod m), advancing cyclically.  Barycentric
    coordinates come from the unit vertex basis (synthetic) or a supplied
    basis matrix of vertex approximants (exact mode).
    """
    m = model.m
    n = len(model.records) - 1
    if start_index is None:
        start_index = max(m, n - m - windows)
    trace = SimplexTrace(m=m)
    for wdx in range(windows):
        k = start_index + wdx
        if k + m + 1 > n:
            break
        t_lo = model.rec(k).hi
        t_hi = model.rec(k + 1).hi
        for s in range(samples_per_window):
            frac = s / max(1, samples_per_window - 1)
            t = t_lo + frac * (t_hi - t_lo)
            case = 1 if (t - t_lo) <= case1_w else 2
            pm = probe_matrix_fn(k) if probe_matrix_fn is not None else None
            vec = length_vector(model, b, t, k, probe_matrix=pm)
            if basis is None:
                total = float(vec.sum())
                bary = tuple(float(x) / total for x in vec)
                residual = 0.0
            else:
                coef, res, _, _ = np.linalg.lstsq(basis.T, vec, rcond=None)
                coef = np.clip(coef, 0.0, None)
                tot = float(coef.sum())
                if tot <= 0:
                    raise ArithmeticError("ill-conditioned vertex basis")
                bary = tuple(float(x) / tot for x in coef)
                fit = basis.T @ coef
                residual = float(np.linalg.norm(fit - vec) / max(1e-300, np.linalg.norm(vec)))
            trace.samples.append(
                TraceSample(t=t, window=wdx, case=case, bary=bary, residual=residual,
                            edge=(k % m, (k + 1) % m))
            )
    return trace
