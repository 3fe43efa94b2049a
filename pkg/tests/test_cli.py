import json

import pytest

from reebmin import cli
from reebmin.errors import SchemaError

CONIFOLD_PAYLOAD = {
    "cone": {"n": 3, "normals": [[1, 0, 0], [1, 1, 0], [1, 1, 1], [1, 0, 1]]}
}


def render(report):
    return json.dumps(cli._jsonable(report), sort_keys=True, indent=2)


def test_run_cone_minimize():
    spec = {
        "command": "cone-minimize",
        "payload": dict(CONIFOLD_PAYLOAD, exact_certify=True),
    }
    report = cli.run(spec)
    res = report["results"]
    assert res["xi_star"] == [3.0, 1.5, 1.5]
    assert res["normalized_volume"] == pytest.approx(16 / 27, abs=1e-9)
    assert res["normalized_volume_exact"] == pytest.approx(16 / 27)
    assert res["regularity"] == "quasi-regular"
    assert report["tolerances"]["gradient_norm"] == 1e-10
    assert report["input"] == spec["payload"]  # verbatim echo


def test_run_is_deterministic_bytes():
    spec = {"command": "cone-minimize", "payload": dict(CONIFOLD_PAYLOAD)}
    assert render(cli.run(spec)) == render(cli.run(spec))
    spec = {"command": "link-check", "payload": {"exponents": [2, 3, 7, 5]}}
    assert render(cli.run(spec)) == render(cli.run(spec))


def test_run_link_check():
    report = cli.run({"command": "link-check", "payload": {"exponents": [2, 3, 7, 5]}})
    assert report["results"]["bgk"] == "pass"
    assert report["results"]["outcome"] == "exists"
    assert not report["strict_fail"]


def test_run_obstruct_strict_fail():
    report = cli.run(
        {
            "command": "obstruct-hs",
            "payload": {"weights": [21, 21, 21, 2], "degree": 42},
        }
    )
    assert report["results"]["bishop"] == "obstructed"
    assert report["strict_fail"]


def test_run_rejects_bad_specs():
    with pytest.raises(SchemaError):
        cli.run({"command": "does-not-exist", "payload": {}})
    with pytest.raises(SchemaError):
        cli.run({"command": "link-check", "payload": {}})
    with pytest.raises(SchemaError):
        cli.run({"command": "link-check", "payload": {"exponents": [2, "x"]}})
    with pytest.raises(SchemaError):
        cli.run({"command": "join", "payload": {"ord": [1], "index": [1], "n": [2]}})


def test_main_minimize_json(capsys, tmp_path):
    cone_file = tmp_path / "conifold.json"
    cone_file.write_text(json.dumps(CONIFOLD_PAYLOAD["cone"]))
    code = cli.main(["cone", "minimize", "--input", str(cone_file), "--exact-certify"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["results"]["xi_star_exact"] == ["3/1", "3/2", "3/2"]
    assert out["results"]["normalized_volume_exact"] == "16/27"


def test_main_inline_normals(capsys):
    code = cli.main(["cone", "topology", "--normals", "1,0,0;1,1,0;1,1,1;1,0,1"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["results"]["pi2_rank"] == 1
    assert out["results"]["smale"]["label"] == "#1(S^2xS^3)"


def test_main_link_enumerate_csv(capsys):
    code = cli.main(
        [
            "link", "enumerate",
            "--template", "2,3,5,_",
            "--range", "6..59",
            "--predicate", "gk+bgk-fail",
            "--format", "csv",
        ]
    )
    lines = capsys.readouterr().out.strip().splitlines()
    assert code == 0
    assert len(lines) == 13  # header + 12 rows
    assert "exponents" in lines[0]


def test_main_strict_exit_codes(capsys):
    code = cli.main(
        ["obstruct", "hs", "--weights", "21,21,21,2", "--degree", "42", "--strict"]
    )
    capsys.readouterr()
    assert code == 2
    code = cli.main(
        ["obstruct", "hs", "--weights", "1,1,1,1", "--degree", "2", "--strict"]
    )
    capsys.readouterr()
    assert code == 0


def test_main_error_exit_code(capsys):
    code = cli.main(["cone", "topology", "--normals", "1,0;-1,0"])
    out = json.loads(capsys.readouterr().out)
    assert code == 1
    assert out["error"]["code"] == "NotStrictlyConvex"


def test_main_ypq_einstein(capsys):
    code = cli.main(
        ["ypq", "--p", "2", "--q", "1", "--check-einstein", "--samples", "3"]
    )
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    e = out["results"]["einstein"]
    assert e["pass"] and e["max_residual"] <= 1e-4
    assert out["tolerances"]["einstein"] == 1e-4


def test_main_gale_dual(capsys):
    code = cli.main(["gale-dual", "--charges", "2,2,-1,-3"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["results"]["rays"] == [[1, 0, 0], [0, 1, 0], [2, 2, 3], [0, 0, -1]]


def test_batch_order_errors_and_counts(tmp_path, capsys):
    lines = []
    for k in range(5, 42):
        lines.append(
            json.dumps({"command": "link-check", "payload": {"exponents": [2, 3, 7, k]}})
        )
    lines.insert(10, "this is not json")
    batch = tmp_path / "jobs.ndjson"
    batch.write_text("\n".join(lines) + "\n")
    code = cli.main(["batch", str(batch)])
    out_lines = capsys.readouterr().out.strip().splitlines()
    assert code == 1  # the malformed line surfaces as an error report
    assert len(out_lines) == 38
    reports = [json.loads(line) for line in out_lines]
    assert "error" in reports[10]
    passes = [
        r for r in reports
        if "results" in r
        and r["results"].get("bgk") == "pass"
        and r["results"].get("homology_type") == "integral_sphere"
    ]
    assert len(passes) == 27
    # order preserved: exponent slots ascend around the error line
    ks = [r["input"]["exponents"][3] for r in reports if "input" in r]
    assert ks == sorted(ks)


def test_batch_empty_file(tmp_path, capsys):
    batch = tmp_path / "empty.ndjson"
    batch.write_text("")
    code = cli.main(["batch", str(batch)])
    assert code == 0
    assert capsys.readouterr().out == ""


def test_batch_strict(tmp_path, capsys):
    batch = tmp_path / "jobs.ndjson"
    batch.write_text(
        json.dumps(
            {"command": "obstruct-hs", "payload": {"weights": [21, 21, 21, 2], "degree": 42}}
        )
        + "\n"
    )
    code = cli.main(["batch", str(batch), "--strict"])
    capsys.readouterr()
    assert code == 2


def test_report_round_trip():
    spec = {"command": "labc", "payload": {"a": 1, "b": 3, "c": 2, "to_cone": True}}
    report = cli.run(spec)
    again = cli.run({"command": report["command"], "payload": report["input"]})
    assert render(again) == render(report)


def test_timing_flag_controls_field():
    spec = {"command": "link-check", "payload": {"exponents": [2, 3, 7, 5]}}
    assert "timing_ms" not in cli.run(spec)
    assert "timing_ms" in cli.run(spec, timing=True)


def test_cross_process_byte_determinism(tmp_path):
    import subprocess
    import sys

    cone_file = tmp_path / "conifold.json"
    cone_file.write_text(json.dumps(CONIFOLD_PAYLOAD["cone"]))
    cmd = [
        sys.executable, "-m", "reebmin.cli",
        "cone", "minimize", "--input", str(cone_file), "--exact-certify",
    ]
    outs = set()
    for seed in ("0", "12345"):
        proc = subprocess.run(
            cmd, capture_output=True, text=True,
            env={"PYTHONHASHSEED": seed, "PATH": "/usr/bin:/bin"},
        )
        assert proc.returncode == 0, proc.stderr
        outs.add(proc.stdout)
    assert len(outs) == 1
