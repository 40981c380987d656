"""Scripted end-to-end checks of the command line front end."""

import json
import shutil
import subprocess
import sys

import numpy as np
import pytest

from dtcwtfuse.cli import BENCH_COMBOS, BENCH_HEADER, main

FAST_PSO = ["--pso-pop", "8", "--pso-iters", "10"]


def _gen(tmp_path, size=64, seed=3):
    a = tmp_path / "a.pgm"
    b = tmp_path / "b.pgm"
    assert main(["gen", "--size", str(size), "--seed", str(seed),
                 "--out-a", str(a), "--out-b", str(b)]) == 0
    return a, b


def test_gen_writes_reproducible_pair(tmp_path):
    a, b = _gen(tmp_path)
    a2 = tmp_path / "a2.pgm"
    b2 = tmp_path / "b2.pgm"
    assert main(["gen", "--size", "64", "--seed", "3",
                 "--out-a", str(a2), "--out-b", str(b2)]) == 0
    assert a.read_bytes() == a2.read_bytes()
    assert b.read_bytes() == b2.read_bytes()
    assert a.read_bytes() != b.read_bytes()


def test_fuse_identity_reproduces_input(tmp_path):
    a, _ = _gen(tmp_path)
    out = tmp_path / "out.pgm"
    assert main(["fuse", "--a", str(a), "--b", str(a), "--method", "none",
                 "--lfc", "avg", "--hfc", "avg", "--out", str(out)]) == 0
    assert out.read_bytes() == a.read_bytes()


def test_fuse_deterministic_across_runs(tmp_path):
    a, b = _gen(tmp_path)
    outs = []
    for name in ("o1.pgm", "o2.pgm"):
        out = tmp_path / name
        argv = ["fuse", "--a", str(a), "--b", str(b), "--method", "pso",
                "--seed", "5", "--out", str(out)] + FAST_PSO
        assert main(argv) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_fuse_report_json(tmp_path, capsys):
    a, b = _gen(tmp_path)
    out = tmp_path / "out.pgm"
    assert main(["fuse", "--a", str(a), "--b", str(b), "--out", str(out),
                 "--report", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert set(doc) == {"a", "b"}
    for side in doc.values():
        assert list(side) == ["en", "sd", "ssim", "cc", "psnr"]
        assert side["ssim"] <= 1.0


def test_fuse_dump_pyramid(tmp_path):
    a, b = _gen(tmp_path)
    out = tmp_path / "out.pgm"
    dump = tmp_path / "pyr"
    assert main(["fuse", "--a", str(a), "--b", str(b), "--out", str(out),
                 "--dump-pyramid", str(dump)]) == 0
    names = sorted(p.name for p in dump.iterdir())
    want = sorted(["lowpass_%s.pgm" % t for t in ("aa", "ab", "ba", "bb")]
                  + ["L%d_O%d.pgm" % (l, o)
                     for l in (1, 2) for o in range(6)])
    assert names == want


def test_metrics_identical_pair(tmp_path, capsys):
    a, _ = _gen(tmp_path)
    assert main(["metrics", "--ref", str(a), "--fused", str(a)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["ssim"] == 1.0 and doc["cc"] == 1.0 and doc["psnr"] == "inf"

    assert main(["metrics", "--ref", str(a), "--fused", str(a),
                 "--format", "csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "en,sd,ssim,cc,psnr"
    fields = lines[1].split(",")
    assert len(fields) == 5 and fields[4] == "inf"
    float(fields[0]), float(fields[1])


def test_runtime_errors_exit_1(tmp_path, capsys):
    a, _ = _gen(tmp_path)
    # size mismatch between ref and fused
    c = tmp_path / "c.pgm"
    c.write_bytes(b"P5\n2 2\n255\n" + bytes(4))
    assert main(["metrics", "--ref", str(a), "--fused", str(c)]) == 1
    assert "dtcwtfuse: error:" in capsys.readouterr().err
    # unreadable input
    assert main(["fuse", "--a", str(tmp_path / "missing.pgm"),
                 "--b", str(a), "--out", str(tmp_path / "x.pgm")]) == 1
    # invalid phantom size
    assert main(["gen", "--size", "50", "--out-a", str(tmp_path / "x"),
                 "--out-b", str(tmp_path / "y")]) == 1


def test_usage_errors_exit_2(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["fuse", "--a", "x", "--b", "y"])  # --out missing
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["fuse", "--a", "x", "--b", "y", "--out", "z",
              "--method", "median"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_bench_csv_contract(tmp_path, capsys):
    a, b = _gen(tmp_path)
    csv1 = tmp_path / "r1.csv"
    argv = ["bench", "--a", str(a), "--b", str(b)] + FAST_PSO
    assert main(argv + ["--out", str(csv1)]) == 0
    summary = capsys.readouterr().out.strip()

    lines = csv1.read_text().strip().splitlines()
    assert lines[0] == BENCH_HEADER
    rows = [ln.split(",") for ln in lines[1:]]
    assert len(rows) == 12
    assert [r[0] for r in rows] == ["pca"] * 6 + ["pso"] * 6
    assert [(r[1], r[2]) for r in rows[:6]] == list(BENCH_COMBOS)
    assert [(r[1], r[2]) for r in rows[6:]] == list(BENCH_COMBOS)
    for r in rows:
        for field in r[3:]:
            float(field)  # parseable, "inf" included

    m = summary
    assert m.startswith("pca >= pso on ssim in ")
    n_ssim = int(m.split("ssim in ")[1].split("/")[0])
    n_cc = int(m.split("cc in ")[1].split("/")[0])
    assert 0 <= n_ssim <= 6 and 0 <= n_cc <= 6

    # deterministic apart from the timing column
    csv2 = tmp_path / "r2.csv"
    assert main(argv + ["--out", str(csv2)]) == 0
    capsys.readouterr()
    rows2 = [ln.split(",") for ln in csv2.read_text().strip().splitlines()[1:]]
    assert [r[:8] for r in rows] == [r[:8] for r in rows2]


def test_bench_verbose_lines(tmp_path, capsys):
    a, b = _gen(tmp_path, size=32)
    csv = tmp_path / "r.csv"
    assert main(["bench", "--a", str(a), "--b", str(b), "--out", str(csv),
                 "--verbose"] + FAST_PSO) == 0
    out = capsys.readouterr().out.splitlines()
    per_source = [ln for ln in out if ln.startswith("# ")]
    assert len(per_source) == 24  # 12 rows x 2 sources
    assert all("ssim=" in ln and "cc=" in ln and "psnr=" in ln
               for ln in per_source)


def test_bench_failure_leaves_no_csv(tmp_path):
    a, b = _gen(tmp_path)
    out = tmp_path / "no" / "such" / "dir" / "r.csv"
    assert main(["bench", "--a", str(a), "--b", str(b),
                 "--out", str(out)] + FAST_PSO) == 1
    assert not out.exists()


def test_module_entry_point(tmp_path):
    a, _ = _gen(tmp_path)
    proc = subprocess.run(
        [sys.executable, "-m", "dtcwtfuse.cli", "metrics",
         "--ref", str(a), "--fused", str(a)],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["cc"] == 1.0

    exe = shutil.which("dtcwtfuse")
    if exe:
        proc = subprocess.run([exe, "metrics", "--ref", str(a),
                               "--fused", str(a)],
                              capture_output=True, text=True)
        assert proc.returncode == 0
