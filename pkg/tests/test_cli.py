from __future__ import annotations

import json

import numpy as np
import pytest

from convlayers.cli import main, run_sweep
from convlayers.constructions import recursive_family
from convlayers.formats import parse_sweep, read_layers, read_pset
from convlayers.peeling import peel


def test_generate_and_peel_round_trip(tmp_path, capsys):
    out = tmp_path / "r.pset"
    assert main(["generate", "recursive", "--dim", "2", "--n", "256", "--out", str(out)]) == 0
    X = read_pset(out)
    trace = json.loads((tmp_path / "r.pset.json").read_text())
    top = trace["levels"][0]
    assert len(X) == top["N"] * top["net_size"] * 9 + 1 == top["size"]
    assert np.array_equal(X, recursive_family(2, 256)[0])
    manifest = json.loads((tmp_path / "r.pset.manifest.json").read_text())
    assert manifest["spec"]["kind"] == "recursive" and manifest["seed"] == 0

    layers_path = tmp_path / "r.layers"
    assert main(["peel", str(out), "--out", str(layers_path)]) == 0
    assert "L=21" in capsys.readouterr().out
    layers, n = read_layers(layers_path)
    assert n == len(X)
    assert [a.tolist() for a in layers] == [a.tolist() for a in peel(X).layers]
    assert (tmp_path / "r.layers.manifest.json").exists()


def test_base_line_and_shell_peel(tmp_path, capsys):
    out = tmp_path / "b.pset"
    assert main(["generate", "base_line", "--dim", "1", "--n", "4", "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 10  # header plus nine points
    main(["peel", str(out)])
    assert "n=9 L=5" in capsys.readouterr().out
    out = tmp_path / "s.pset"
    main(["generate", "shell_family", "--n", "6", "--out", str(out)])
    main(["peel", str(out)])
    assert "L=6 " in capsys.readouterr().out
    one = tmp_path / "one.pset"
    one.write_text("2 1\n0.25 0.5\n")
    main(["peel", str(one)])
    assert "L=1 " in capsys.readouterr().out


def test_usage_errors(tmp_path, capsys):
    assert main(["generate", "grid", "--n", "10", "--out", str(tmp_path / "g")]) == 2
    assert main(["generate", "recursive", "--dim", "3", "--n", "100",
                 "--out", str(tmp_path / "r")]) == 2
    assert "4096" in capsys.readouterr().err
    bad = tmp_path / "bad.pset"
    bad.write_text("2 2\n0 0\n1 x\n")
    assert main(["peel", str(bad)]) == 2
    assert "line 3" in capsys.readouterr().err
    assert main(["sweep", "grid", "--sizes", "--out", str(tmp_path / "e.csv")]) == 2
    with pytest.raises(SystemExit) as info:
        main(["verify", "bogus"])
    assert info.value.code == 2


def test_sweep_fit_and_plot(tmp_path, capsys):
    csv = tmp_path / "sw.csv"
    args = ["sweep", "recursive", "--sizes", "4096", "10", "256", "1024", "64",
            "--out", str(csv), "--loglog", str(tmp_path / "ll.txt"), "--plot", str(tmp_path / "sw.png")]
    assert main(args) == 0
    rows = parse_sweep(csv.read_text())
    assert [r.size_param for r in rows] == [10, 64, 256, 1024, 4096]
    assert rows[0].layers == -1 and "16" in rows[0].note
    assert (tmp_path / "sw.png").stat().st_size > 0
    assert (tmp_path / "ll.txt").read_text().splitlines()[0] == "log_n log_L"
    assert main(["fit", str(csv), "--out", str(tmp_path / "fit.json")]) == 0
    fit = json.loads((tmp_path / "fit.json").read_text())
    assert set(fit) == {"slope", "intercept", "r2", "count", "discarded_prefix"}
    assert 0.5 < fit["slope"] < 1.0


def test_sweep_rows_are_deterministic_and_parallel_safe():
    a = run_sweep("random_ball", 2, [500, 200], [1, 0])
    b = run_sweep("random_ball", 2, [200, 500], [0, 1], jobs=2)
    assert [(r.size_param, r.seed) for r in a] == [(200, 0), (200, 1), (500, 0), (500, 1)]
    assert [(r.n, r.layers, r.mu) for r in a] == [(r.n, r.layers, r.mu) for r in b]


def test_verify_suites(tmp_path, capsys):
    assert main(["verify", "tangent", "--dim", "3", "--delta", "0.3"]) == 0
    assert main(["verify", "shells", "--dim", "2", "--n", "256",
                 "--out", str(tmp_path / "s.json")]) == 0
    report = json.loads((tmp_path / "s.json").read_text())
    assert report["pass"] and report["checks"][0]["value"] == 21
    assert main(["verify", "push", "--random", "10"]) == 0
    assert main(["verify", "nets", "--dim", "2", "--delta", "0.3", "0.1"]) == 0
    assert main(["verify", "bounds", "--kind", "grid", "--sizes", "100", "400", "900"]) == 0
    capsys.readouterr()
