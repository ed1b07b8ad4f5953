"""Command-line front end: reproducible runs from a JSON config.

Subcommands: generate, verify, estimates, measures, timeline, trace, all.
Artifacts are JSON for structured data and CSV for tables, with big integers
as decimal strings; runs from the same config are byte-identical.

Config keys (all optional except where noted):

  {
    "a": "2" or "5/2",          growth base (rational string)
    "e0": 1,                    first twist power
    "n_powers": 12,             number of growth steps
    "mode": "geometric" | "g1-minimal" | {"explicit": [..]}
    "prefix": 7,                curves gamma_0..gamma_prefix
    "budget": 10000000,         word-length budget
    "m": 2, "b": 2, "b1": 2, "b2": 2,
    "probes": ["x1.x2", ...],   probe curve words (defaults: first 2m curves)
    "weights": [1.0, 1.0],      timeline weights
    "windows": 6, "samples_per_window": 7, "synthetic": false,
    "trace_m": 3                subsequence counter for synthetic traces
  }
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from .curves import Curve, DEFAULT_BUDGET
from .exactnum import ESequence, make_esequence
from .estimates import EstimateLedger, measure_B, sandwich_csv, verify_sandwich
from .family import generate_s05
from .measures import (limit_simplex_basis, measure_kappa, normalized_vector,
                       singularity_ratio, vectors_csv)
from .surface import S05
from .timeline import build_timeline, check_ordering
from .limitset import trace_limit_cycle
from .verify import check_P, check_P4, subsurface_coefficient_report
from .words import parse_word


def _threads_cap():
    cap = os.environ.get("LAMINATRON_THREADS")
    if cap:
        try:
            import numba

            numba.set_num_threads(max(1, int(cap)))
        except Exception:
            pass


def _load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as ex:
        raise SystemExit(f"config parse error at line {ex.lineno}, column {ex.colno}: {ex.msg}")


def _eseq_from(cfg: dict) -> ESequence:
    a = Fraction(cfg.get("a", "2"))
    mode = cfg.get("mode", "geometric")
    n = int(cfg.get("n_powers", 12))
    if isinstance(mode, dict) and "explicit" in mode:
        return make_esequence(a, 1, n, "explicit", explicit=[int(x) for x in mode["explicit"]])
    return make_esequence(a, int(cfg.get("e0", 1)), n, str(mode))


def _sequence_from(cfg: dict):
    eseq = _eseq_from(cfg)
    prefix = int(cfg.get("prefix", 7))
    budget = int(cfg.get("budget", DEFAULT_BUDGET))
    return generate_s05(eseq, prefix, budget=budget)


def _probes_from(cfg: dict, seq) -> dict[str, Curve]:
    words = cfg.get("probes")
    if words:
        return {w: Curve(S05, parse_word(w)) for w in words}
    return {f"gamma_{j}": seq.curves[j] for j in range(2 * seq.m)}


def _write(out: Path, name: str, text: str):
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_text(text)
    print(f"wrote {out / name}")


def cmd_generate(cfg, out: Path) -> int:
    seq = _sequence_from(cfg)
    _write(out, "sequence.json", seq.to_json())
    upto = len(seq.curves) - 1
    table = seq.intersection_table(upto)
    lines = ["i,k,value"]
    for (i, k), v in sorted(table.items()):
        lines.append(f"{i},{k},{'' if v is None else v}")
    _write(out, "intersections.csv", "\n".join(lines) + "\n")
    return 0


def cmd_verify(cfg, out: Path) -> int:
    seq = _sequence_from(cfg)
    upto = min(len(seq.curves) - 1, int(cfg.get("check_upto", len(seq.curves) - 1)))
    rep = check_P(seq, upto)
    p4 = check_P4(seq)
    tw = subsurface_coefficient_report(seq)
    doc = {
        "P": json.loads(rep.to_json()),
        "P4": {"status": p4.status, "value": p4.value, "detail": p4.detail},
        "twisting": [
            {"k": r.k, "expected": r.expected, "measured": r.measured,
             "slack_bound": r.slack_bound, "skipped": r.skipped}
            for r in tw
        ],
    }
    _write(out, "verify.json", json.dumps(doc, sort_keys=True, indent=1))
    return 0 if rep.verdict else 1


def cmd_estimates(cfg, out: Path) -> int:
    seq = _sequence_from(cfg)
    sides = [S05.side_curve_word(i) for i in range(5)]
    B = measure_B(S05, [sides[0], sides[2], sides[4], sides[1]], [sides[3]])
    led = EstimateLedger(seq.m, seq.spec.b, seq.spec.b1, seq.spec.b2, B, seq.spec.eseq)
    _write(out, "ledger.json", led.to_json())
    table = seq.intersection_table(len(seq.curves) - 1)
    rows, ok, skipped = verify_sandwich(table, led)
    _write(out, "sandwich.csv", sandwich_csv(rows))
    print(f"sandwich: {len(rows)} rows, all_ok={ok}, skipped={len(skipped)}")
    return 0 if ok else 1


def cmd_measures(cfg, out: Path) -> int:
    seq = _sequence_from(cfg)
    probes = _probes_from(cfg, seq)
    m = seq.m
    vecs = []
    for h in range(m):
        i_max = (len(seq.curves) - 1 - h) // m
        for i in range(1, i_max + 1):
            vecs.append(normalized_vector(seq, h, i, probes))
    _write(out, "vectors.csv", vectors_csv(vecs))
    rows = ["h,hp,i,proxy"]
    ok = True
    for h in range(m):
        for hp in range(m):
            i_top = (len(seq.curves) - 2 - m) // m - 1
            for i in range(0, max(1, i_top)):
                try:
                    v = singularity_ratio(seq, h, hp, i)
                except ValueError:
                    continue
                rows.append(f"{h},{hp},{i},{float(v):.6e}")
    _write(out, "singularity.csv", "\n".join(rows) + "\n")
    return 0 if ok else 1


def cmd_timeline(cfg, out: Path) -> int:
    eseq = _eseq_from(cfg)
    m = int(cfg.get("trace_m", cfg.get("m", 2)))
    b = int(cfg.get("b", 2))
    weights = cfg.get("weights") or [1.0] * m
    tm = build_timeline(eseq, m, b, weights)
    _write(out, "timeline.csv", tm.to_csv())
    rep = check_ordering(tm)
    _write(out, "ordering.json", rep.to_json())
    times = cfg.get("times")
    grid = cfg.get("grid")
    if times or grid:
        from .timeline import profile

        ts = [float(x) for x in times] if times else []
        if grid:
            start, stop, step = (float(x) for x in str(grid).split(":"))
            t = start
            while t <= stop:
                ts.append(t)
                t += step
        lines = ["t,k,width,length_proxy,twist,modulus_proxy"]
        for t in ts:
            for k in range(len(tm.records)):
                if tm.rec(k).lo <= t <= tm.rec(k).hi:
                    p = profile(tm, t, k)
                    lines.append(
                        f"{t:.6f},{k},{p.width:.9f},{p.length_proxy:.6e},{p.twist},{p.modulus_proxy:.6e}"
                    )
        _write(out, "profiles.csv", "\n".join(lines) + "\n")
    return 0 if rep.verdict else 1


def cmd_trace(cfg, out: Path) -> int:
    eseq = _eseq_from(cfg)
    m = int(cfg.get("trace_m", cfg.get("m", 3)))
    b = int(cfg.get("b", 2))
    weights = cfg.get("weights") or [1.0] * m
    tm = build_timeline(eseq, m, b, weights)
    windows = int(cfg.get("windows", 6))
    spw = int(cfg.get("samples_per_window", 7))
    tr = trace_limit_cycle(tm, b, windows=windows, samples_per_window=spw)
    _write(out, "trace.csv", tr.to_csv())
    return 0


def cmd_all(cfg, out: Path) -> int:
    rc = 0
    for fn, sub in [
        (cmd_generate, "generate"),
        (cmd_verify, "verify"),
        (cmd_estimates, "estimates"),
        (cmd_measures, "measures"),
        (cmd_timeline, "timeline"),
        (cmd_trace, "trace"),
    ]:
        print(f"== {sub}")
        rc = max(rc, fn(cfg, out / sub))
    return rc


def main(argv=None) -> int:
    _threads_cap()
    ap = argparse.ArgumentParser(prog="laminatron",
                                 description="curve-sequence certification toolkit")
    ap.add_argument("command",
                    choices=["generate", "verify", "estimates", "measures", "timeline",
                             "trace", "all"])
    ap.add_argument("--config", default=None, help="JSON config path")
    ap.add_argument("--out", default="out", help="output directory")
    ap.add_argument("--max-index", type=int, default=None, help="override prefix length")
    ap.add_argument("--probes", default=None, help="comma-separated probe words")
    ap.add_argument("--synthetic", action="store_true", help="synthetic trace pairings")
    ap.add_argument("--times", default=None, help="profile sample times t1,t2,...")
    ap.add_argument("--grid", default=None, help="profile sample grid start:stop:step")
    args = ap.parse_args(argv)
    cfg = _load_config(args.config) if args.config else {}
    if args.max_index is not None:
        cfg["prefix"] = args.max_index
    if args.probes:
        cfg["probes"] = args.probes.split(",")
    if args.synthetic:
        cfg["synthetic"] = True
    if args.times:
        cfg["times"] = [float(x) for x in args.times.split(",")]
    if args.grid:
        cfg["grid"] = args.grid
    out = Path(args.out)
    fn = {
        "generate": cmd_generate,
        "verify": cmd_verify,
        "estimates": cmd_estimates,
        "measures": cmd_measures,
        "timeline": cmd_timeline,
        "trace": cmd_trace,
        "all": cmd_all,
    }[args.command]
    return fn(cfg, out)


if __name__ == "__main__":
    sys.exit(main())
