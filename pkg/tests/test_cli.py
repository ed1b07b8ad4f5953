import json
import subprocess
import sys
from pathlib import Path

import pytest

from laminatron.cli import main


def _cfg(tmp_path, **kw):
    cfg = {"a": "2", "e0": 1, "n_powers": 10, "prefix": 6}
    cfg.update(kw)
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(cfg))
    return str(p)


def test_generate_deterministic(tmp_path):
    cfg = _cfg(tmp_path)
    rc1 = main(["generate", "--config", cfg, "--out", str(tmp_path / "o1")])
    rc2 = main(["generate", "--config", cfg, "--out", str(tmp_path / "o2")])
    assert rc1 == rc2 == 0
    for name in ("sequence.json", "intersections.csv"):
        b1 = (tmp_path / "o1" / name).read_bytes()
        b2 = (tmp_path / "o2" / name).read_bytes()
        assert b1 == b2


def test_verify_exit_zero(tmp_path):
    cfg = _cfg(tmp_path, prefix=6, check_upto=6)
    rc = main(["verify", "--config", cfg, "--out", str(tmp_path / "v")])
    assert rc == 0
    doc = json.loads((tmp_path / "v" / "verify.json").read_text())
    assert doc["P"]["verdict"] is True
    assert doc["P4"]["status"] == "vacuous"


def test_corrupt_config_reports_position(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"a": "2",\n  "prefix": }')
    with pytest.raises(SystemExit) as exc:
        main(["generate", "--config", str(bad), "--out", str(tmp_path / "x")])
    assert "line" in str(exc.value) and "column" in str(exc.value)


def test_trace_csv_schema(tmp_path):
    cfg = _cfg(tmp_path, a="16", n_powers=40, trace_m=3, windows=6, samples_per_window=5)
    rc = main(["trace", "--config", cfg, "--out", str(tmp_path / "t")])
    assert rc == 0
    lines = (tmp_path / "t" / "trace.csv").read_text().splitlines()
    assert lines[0] == "t,beta_0,beta_1,beta_2,residual,window,case,edge"
    assert len(lines) > 6


def test_timeline_profiles(tmp_path):
    cfg = _cfg(tmp_path, a="2", e0=16, n_powers=10, m=2,
               mode="g1-minimal", grid="2.0:8.0:2.0")
    rc = main(["timeline", "--config", cfg, "--out", str(tmp_path / "tl")])
    assert rc == 0
    assert (tmp_path / "tl" / "timeline.csv").exists()
    assert (tmp_path / "tl" / "profiles.csv").exists()
