import json

import pytest

from matchnet import cli


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_generate_emits_graph_json(capsys):
    code, out, _ = run(["generate", "--graph", "mesh:3,3"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["n"] == 9
    assert len(data["edges"]) == 12


def test_generate_to_file_then_build_from_file(tmp_path, capsys):
    gpath = tmp_path / "g.json"
    code, _, _ = run(["generate", "--graph", "path:6",
                      "--out", str(gpath)], capsys)
    assert code == 0
    code, out, _ = run(["build", "--construction", "odd_even",
                        "--graph", str(gpath)], capsys)
    assert code == 0
    data = json.loads(out)
    assert len(data["stages"]) == 6


def test_build_verify_roundtrip(tmp_path, capsys):
    npath = tmp_path / "net.json"
    code, _, _ = run(["build", "--construction", "odd_even",
                      "--graph", "path:8", "--out", str(npath)], capsys)
    assert code == 0
    code, out, _ = run(["verify", "--net", str(npath)], capsys)
    assert code == 0
    assert "pass" in out.lower()


def test_verify_detects_broken_net(tmp_path, capsys):
    npath = tmp_path / "net.json"
    run(["build", "--construction", "odd_even", "--graph", "path:6",
         "--out", str(npath)], capsys)
    data = json.loads(npath.read_text())
    data["stages"] = data["stages"][:2]  # truncated, no longer sorts
    npath.write_text(json.dumps(data))
    code, out, _ = run(["verify", "--net", str(npath)], capsys)
    assert code == 1
    assert "fail" in out.lower()


def test_verify_cap_refusal_exit_2(tmp_path, capsys):
    npath = tmp_path / "net.json"
    run(["build", "--construction", "odd_even", "--graph", "path:10",
         "--out", str(npath)], capsys)
    code, _, err = run(["verify", "--net", str(npath),
                        "--method", "exhaustive"], capsys)
    assert code == 2
    assert "cap" in err.lower()


def test_cap_override_env_clamped(tmp_path, capsys, monkeypatch):
    npath = tmp_path / "net.json"
    run(["build", "--construction", "batcher", "--graph", "complete:22",
         "--out", str(npath)], capsys)
    # without the override the 0-1 check refuses n = 22
    code, _, _ = run(["verify", "--net", str(npath),
                      "--method", "zero_one"], capsys)
    assert code == 2
    monkeypatch.setenv("MATCHNET_CAP_OVERRIDE", "22")
    code, out, _ = run(["verify", "--net", str(npath),
                        "--method", "zero_one"], capsys)
    assert code == 0
    # values past the hard limit are clamped with a warning
    monkeypatch.setenv("MATCHNET_CAP_OVERRIDE", "40")
    code, _, err = run(["verify", "--net", str(npath),
                        "--method", "zero_one"], capsys)
    assert code == 0
    assert "clamp" in err.lower()


def test_route_realizes_order(tmp_path, capsys):
    ppath = tmp_path / "plan.json"
    code, out, _ = run(["route", "--graph", "path:5",
                        "--order", "5,4,3,2,1", "--out", str(ppath)], capsys)
    assert code == 0
    assert "depth=" in out
    data = json.loads(ppath.read_text())
    assert data["plan"] is True
    assert data["order"] == [5, 4, 3, 2, 1]
    assert len(data["stages"]) <= 5


def test_route_rejects_bad_order(capsys):
    code, _, err = run(["route", "--graph", "path:4",
                        "--order", "1,1,2,3"], capsys)
    assert code == 1
    assert err


def test_oracle_st_value(capsys):
    code, out, _ = run(["oracle", "--kind", "st", "--graph", "path:3"],
                       capsys)
    assert code == 0
    assert "st=3" in out


def test_oracle_rt_p(capsys):
    code, out, _ = run(["oracle", "--kind", "rt_p", "--graph", "complete:4",
                        "--p", "2"], capsys)
    assert code == 0
    assert "rt_p=1" in out


def test_oracle_sandwich(capsys):
    code, out, _ = run(["oracle", "--kind", "sandwich", "--graph", "path:3"],
                       capsys)
    assert code == 0
    assert "holds" in out


def test_oracle_cap_exit_2(capsys):
    code, _, err = run(["oracle", "--kind", "st", "--graph", "path:9"],
                       capsys)
    assert code == 2
    assert "cap" in err.lower()


def test_export_dot(tmp_path, capsys):
    npath = tmp_path / "net.json"
    run(["build", "--construction", "odd_even", "--graph", "path:4",
         "--out", str(npath)], capsys)
    code, out, _ = run(["export", "--net", str(npath), "--format", "dot"],
                       capsys)
    assert code == 0
    assert out.startswith("graph")
    assert out.count(" -- ") == 3


def test_export_json_roundtrips(tmp_path, capsys):
    npath = tmp_path / "net.json"
    run(["build", "--construction", "bitonic", "--graph", "hypercube:3",
         "--out", str(npath)], capsys)
    code, out, _ = run(["export", "--net", str(npath), "--format", "json"],
                       capsys)
    assert code == 0
    assert json.loads(out) == json.loads(npath.read_text())


def test_bench_mini_suite_csv(tmp_path, capsys):
    csv1 = tmp_path / "a.csv"
    code, _, _ = run(["bench", "--suite", "hypercubes", "--seed", "0",
                      "--out", str(csv1), "--format", "csv"], capsys)
    assert code == 0
    lines = csv1.read_text().strip().splitlines()
    assert lines[0].startswith("suite,")
    assert len(lines) == 5  # header + dims 1..4
    assert all(",pass," in ln or ln.endswith("pass") or ",pass" in ln
               for ln in lines[1:])


def test_bench_table_output(capsys):
    code, out, _ = run(["bench", "--suite", "paths"], capsys)
    assert code == 0
    assert "odd_even" in out
    assert "pass" in out


def test_usage_error_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["build", "--construction", "odd_even"])
    assert exc.value.code == 2


def test_unknown_construction_exit_1(capsys):
    code, _, err = run(["build", "--construction", "nope",
                        "--graph", "path:4"], capsys)
    assert code == 1
    assert "construction" in err.lower()
