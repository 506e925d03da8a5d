import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from samplebench.cli import RunConfig, cmd_run, default_mh_config, main
from samplebench.harness import metric
from samplebench.samples import read_csv


def test_list(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    assert "Normal-3D-Uncorrelated" in out and "Eight-Schools" in out
    assert main(["list"]) == 0
    assert capsys.readouterr().out == out


def test_sample(tmp_path):
    p = tmp_path / "s.csv"
    assert main(["sample", "Normal-2D-Correlated-r0.9", "-n", "37", "--seed", "4", "-o", str(p)]) == 0
    b = read_csv(p)
    assert b.n == 37 and b.dim == 2
    q = tmp_path / "t.csv"
    main(["sample", "Normal-2D-Correlated-r0.9", "-n", "37", "--seed", "4", "-o", str(q)])
    assert p.read_bytes() == q.read_bytes()


def test_run_file_input_and_plot(tmp_path, capsys):
    data = tmp_path / "in.csv"
    main(["sample", "Normal-1D", "-n", "4000", "--seed", "9", "-o", str(data)])
    out = tmp_path / "out"
    code = main(["run", "Normal-1D", "--input", str(data), "-m", "8", "-n", "500", "--metric", "mean",
                 "--metric", "chi2:bins=10", "--metric", "swd:L=20", "--out", str(out)])
    assert code == 0
    doc = json.loads((out / "report.json").read_text())
    assert doc["sampler"] == "file:in.csv"
    ET.parse(out / "overview.svg")
    assert "chi_square[0]" in capsys.readouterr().out

    svg = tmp_path / "h.svg"
    assert main(["plot", str(out / "report.json"), "swd(p=1,L=20)", "-o", str(svg)]) == 0
    assert len(ET.parse(svg).getroot().findall(".//{http://www.w3.org/2000/svg}rect[@class='bar ref']")) == 20
    assert main(["plot", str(out / "report.json"), "nope", "-o", str(svg)]) == 1
    assert "available: marginal_mean[0]" in capsys.readouterr().err


def test_run_mh_normal_3d_passes(tmp_path):
    code = main(["run", "Normal-3D-Uncorrelated", "--mh", "-m", "20", "-n", "500", "--out", str(tmp_path)])
    assert code == 0


def test_run_mh_mixture_deviates(tmp_path):
    code = main(["run", "Mixture-Normal-3D-r0.9", "--mh", "-m", "20", "-n", "500", "--out", str(tmp_path)])
    assert code == 2


def test_exit_codes(tmp_path, capsys):
    assert main(["run", "Normal-1D", "--input", str(tmp_path / "missing.csv")]) == 3
    assert "missing.csv" in capsys.readouterr().err
    bad = tmp_path / "bad.csv"
    bad.write_text("x_1\n1\nabc\n")
    assert main(["run", "Normal-1D", "--input", str(bad)]) == 3
    assert "row 3" in capsys.readouterr().err
    assert main(["run", "Nope", "--mh"]) == 1
    small = tmp_path / "small.csv"
    main(["sample", "Normal-1D", "-n", "50", "-o", str(small)])
    assert main(["run", "Normal-1D", "--input", str(small), "-m", "10", "-n", "10"]) == 4
    es = tmp_path / "es.csv"
    main(["sample", "Eight-Schools", "-n", "20", "-o", str(es)])
    assert main(["run", "Eight-Schools", "--input", str(es), "-m", "2", "-n", "10", "--metric", "chi2"]) == 5
    assert main(["run", "Normal-1D", "--mh", "--metric", "bogus"]) == 1
    with pytest.raises(SystemExit) as exc:
        main(["run", "Normal-1D"])
    assert exc.value.code == 1


def test_cmd_run_deterministic(tmp_path):
    def cfg(d):
        return RunConfig("Normal-2D-Uncorrelated", [metric("mean"), metric("mmd")], 5, 300, 7,
                         mh=default_mh_config(5, 300, 7), out_dir=str(tmp_path / d))
    assert cmd_run(cfg("a")) == cmd_run(cfg("b"))
    for name in ("report.json", "overview.svg"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_config_env_var(tmp_path, monkeypatch, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"eight_schools": {"y": [0, 0, 0, 0, 0, 0, 0, 0]}}))
    monkeypatch.setenv("SAMPLEBENCH_CONFIG", str(cfg))
    out = tmp_path / "e.csv"
    assert main(["sample", "Eight-Schools", "-n", "200", "-o", str(out)]) == 0
    # with all effects observed at zero the school means stay near zero
    assert abs(read_csv(out).points[:, 2:].mean()) < 3


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "samplebench", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and "samplebench" in r.stdout
