import json
import subprocess
import sys

import pytest

from relqc import cli, conformance


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def report(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 0, err
    return json.loads(out)


def test_run_bc(capsys):
    r = report(["run", "--protocol", "bc", "--seed", "7", "--trials", "200"], capsys)
    assert r["schema"] == "report/v1"
    assert r["results"]["verdicts"] == {"accept": 200, "abort": 0}
    assert r["results"]["binding_matches"] == 200
    assert r["config"]["seed"] == 7 and r["config"]["geometry"]["x_a"] == 1.0


def test_run_worked_example(capsys):
    r = report(["run", "--protocol", "core", "--forced-alpha", "00", "--forced-beta", "11", "--sigma-a", "I",
                "--sigma-b", "I", "--pairs", "00,00"], capsys)
    assert r["results"]["transcript"]["outputs"]["sigma_i"] == "ZX"


def test_run_coin_frequencies(capsys):
    r = report(["run", "--protocol", "coin", "--trials", "500"], capsys)
    g = r["results"]["gamma"]
    assert g["invalid"] == 0 and g["+"] + g["-"] == 500


@pytest.mark.parametrize("proto", ["ot", "tpsc", "core"])
def test_run_other_protocols(proto, capsys):
    r = report(["run", "--protocol", proto, "--trials", "50"], capsys)
    assert r["results"]["accept_rate"] == 1.0


def test_run_transcripts_flag(capsys):
    r = report(["run", "--trials", "3", "--transcripts"], capsys)
    assert len(r["results"]["transcripts"]) == 3


def test_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert cli.main(["run", "--protocol", "ot", "--seed", "3", "--trials", "50", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_jobs_do_not_change_report(tmp_path):
    paths = [tmp_path / f"{j}.json" for j in (1, 2)]
    for j, p in zip((1, 2), paths):
        cli.main(["attack", "--strategy", "eve-set", "--trials", "60", "--jobs", str(j), "--out", str(p)])
    a, b = (json.loads(p.read_text()) for p in paths)
    assert a["results"] == b["results"]


def test_config_file_and_precedence(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"protocol": "coin", "seed": 5, "trials": 20,
                               "inputs": {"sigma_a": "X", "sigma_b": "Z"}}))
    r = report(["run", "--config", str(cfg), "--trials", "10", "--sigma-b", "I"], capsys)
    assert r["config"]["protocol"] == "coin"
    assert r["config"]["trials"] == 10
    assert r["config"]["inputs"] == {"sigma_a": "X", "sigma_b": "I"}
    assert r["results"]["gamma"]["+"] == 10


def test_geometry_file(tmp_path, capsys):
    g = tmp_path / "g.json"
    g.write_text(json.dumps({"d": 2.5, "colocated_bob_agent": True}))
    r = report(["run", "--protocol", "bc", "--geometry", str(g)], capsys)
    assert r["results"]["phases"] == [{"commit": 2.5, "reveal": 5.0, "open": 5.0}]


@pytest.mark.parametrize(
    "argv, field",
    [
        (["run", "--sigma-a", "Q"], "inputs.sigma_a"),
        (["run", "--pairs", "00"], "inputs.pairs"),
        (["run", "--forced-alpha", "2"], "forced_outcomes.alpha"),
        (["run", "--trials", "-1"], "trials"),
        (["run", "--jobs", "0"], "jobs"),
        (["attack"], "adversary.strategy"),
        (["attack", "--strategy", "position-spoof"], "offset"),
        (["attack", "--strategy", "wrong-basis", "--protocol", "bc"], "adversary.strategy"),
        (["attack", "--strategy", "eve-set", "--available", "alpha,zeta"], "available"),
    ],
)
def test_config_errors_name_the_field(argv, field, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2
    assert field in err


def test_bad_config_file(tmp_path, capsys):
    p = tmp_path / "c.json"
    p.write_text("{not json")
    code, _, err = run(["run", "--config", str(p)], capsys)
    assert code == 2 and "config" in err
    p.write_text(json.dumps({"bogus": 1}))
    code, _, err = run(["run", "--config", str(p)], capsys)
    assert code == 2 and "bogus" in err


def test_geometry_error(tmp_path, capsys):
    p = tmp_path / "g.json"
    p.write_text(json.dumps({"x_b": 0, "x_a": 1, "x_bp": 5}))
    code, _, err = run(["run", "--geometry", str(p)], capsys)
    assert code == 2 and "geometry" in err


def test_verify_tables(capsys):
    code, out, _ = run(["verify-tables"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[-1] == "80/80 pass"
    assert sum(l.startswith("PASS") for l in lines) == 80


def test_verify_tables_oracle_only(tmp_path, capsys):
    out_path = tmp_path / "t.json"
    code, out, _ = run(["verify-tables", "--oracle-only", "--out", str(out_path)], capsys)
    assert code == 0 and "closed=" not in out
    rep = json.loads(out_path.read_text())
    assert rep["results"]["passed"] == 80


def test_verify_tables_corrupted_fixture(tmp_path, capsys):
    fx = conformance.fixtures_to_json()
    fx["swap"][5]["result"] = "11" if fx["swap"][5]["result"] != "11" else "00"
    p = tmp_path / "fx.json"
    p.write_text(json.dumps(fx))
    code, out, _ = run(["verify-tables", "--fixtures", str(p)], capsys)
    assert code == 1
    bad = [l for l in out.splitlines() if l.startswith("FAIL")]
    assert len(bad) == 1
    e = fx["swap"][5]
    assert f"swap {e['left']}/{e['right']}/{e['bsm']}" in bad[0]
    assert "79/80 pass" in out


def test_attack_input_alteration(capsys):
    r = report(["attack", "--strategy", "input-alteration", "--trials", "300"], capsys)
    assert r["results"]["detected"] == 300


def test_attack_eve_partial(capsys):
    r = report(["attack", "--strategy", "eve-set", "--available", "state_b,state_psi,alpha", "--trials", "200"],
               capsys)
    assert r["results"]["posterior"] == {"0": 0.5, "1": 0.5}


def test_attack_eve_gate(capsys):
    r = report(["attack", "--strategy", "eve-set", "--at-time", "2.5", "--trials", "5"], capsys)
    assert r["results"]["status"] == "not_assemblable"


def test_attack_spoof(capsys):
    r = report(["attack", "--strategy", "position-spoof", "--offset", "0.3", "--trials", "100"], capsys)
    assert r["results"]["detected"] == 100


@pytest.mark.parametrize(
    "extra",
    [
        ["--strategy", "wrong-basis"],
        ["--strategy", "mlc-delayed-alice", "--desired-bit", "1"],
        ["--strategy", "entangled-bprime"],
        ["--strategy", "coin-fairness", "--coin-strategy", "alice-mlc"],
    ],
)
def test_attack_other_strategies(extra, capsys):
    r = report(["attack", "--trials", "40"] + extra, capsys)
    assert r["results"]["trials"] == 40


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "relqc", "verify-tables"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip().endswith("80/80 pass")
