import json
import math

import pytest

from reinhardt.cli import main, parse_alpha, parse_domain, run
from reinhardt.domains import MultiIndex
from reinhardt.errors import InvalidInputError


def test_parse_domain_variants():
    assert parse_domain("polydisc").describe() == "polydisc(radius2=1)"
    assert parse_domain("polydisc:2").describe() == "polydisc(radius2=2)"
    assert parse_domain("polydisc:radius=0.5").radius2 == 0.5
    assert parse_domain("ball").kind == "ball"
    assert parse_domain("omega0").kind == "omega0"
    assert parse_domain("omega_k:3").k == 3
    assert parse_domain("profile:zero").profile.name == "zero"
    spec = parse_domain("profile:inv_one_minus_pow:p=1")
    assert spec.profile.params == (("p", 1.0),)


def test_parse_domain_errors():
    for bad in ("torus", "profile", "profile:bogus", "polydisc:radius=-1", "omega_k"):
        with pytest.raises(InvalidInputError):
            parse_domain(bad)


def test_parse_alpha():
    assert parse_alpha("1,0") == MultiIndex(1, 0)
    with pytest.raises(InvalidInputError):
        parse_alpha("1")
    with pytest.raises(InvalidInputError):
        parse_alpha("1,-2")


def test_main_exit_codes(tmp_path, capsys):
    assert main(["salpha", "--domain", "polydisc", "--alpha", "1,0", "--n-max", "2",
                 "--out", str(tmp_path / "out.csv")]) == 0
    assert main(["salpha", "--domain", "torus", "--alpha", "1,0", "--n-max", "2"]) == 1
    assert main(["salpha", "--domain", "polydisc", "--alpha", "0,0", "--n-max", "2"]) == 1
    assert main(["wiegerinck"]) == 1
    assert main(["nonsense"]) == 1
    capsys.readouterr()


def test_numerical_failure_exit_code(tmp_path, capsys):
    config = {
        "task": "moments",
        "domain": "profile:inv_one_minus_pow:p=1",
        "n_max": 6,
        "tol": {"rel_tol": 1e-12, "max_subdivisions": 1, "endpoint_split": 0.5},
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config))
    assert main(["report", "--config", str(path)]) == 2
    capsys.readouterr()


def test_salpha_csv_contents(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert main(["salpha", "--domain", "polydisc", "--alpha", "1,0", "--n-max", "2",
                 "--format", "csv", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "N,S_alpha,shell_bound,cert_bound"
    last = lines[-1].split(",")
    assert last[0] == "2"
    assert float(last[1]) == pytest.approx(23.0 / 12.0, abs=1e-9)
    assert out.read_text().endswith("\n")
    capsys.readouterr()


def test_moments_csv_marks_divergent_rows(tmp_path, capsys):
    out = tmp_path / "m.csv"
    assert main(["moments", "--domain", "omega0", "--n-max", "1",
                 "--format", "csv", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "g1,g2,status,log_c_sq"
    rows = {tuple(line.split(",")[:2]): line.split(",")[2] for line in lines[1:]}
    assert rows[("0", "0")] == "ok"
    assert rows[("1", "0")] == "divergent"
    capsys.readouterr()


def test_wiegerinck_json_report(tmp_path, capsys):
    out = tmp_path / "w.json"
    assert main(["wiegerinck", "--n-max", "1000", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["classification"]["kind"] == "Convergent"
    assert data["limit_estimate"] == pytest.approx(math.exp(4.0), abs=1e-3)
    assert data["partials"][-1]["M"] == 1000
    capsys.readouterr()


def test_wiegerinck_k_report(tmp_path, capsys):
    out = tmp_path / "wk.json"
    assert main(["wiegerinck", "--k", "2", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["dimension"] == 3
    assert data["basis_indices"] == [0, 1, 2]
    capsys.readouterr()


def test_certify_json_report(tmp_path, capsys):
    out = tmp_path / "c.json"
    code = main(["certify", "--domain", "profile:neg_log_one_minus_r2", "--alpha", "1,1",
                 "--n-max", "100", "--n-step", "25", "--out", str(out)])
    assert code == 0
    data = json.loads(out.read_text())
    assert set(data["window"]) == {"a", "b", "A", "B"}
    assert data["lambda"] > 0
    for entry in data["entries"]:
        assert entry["cert_bound"] <= entry["S_alpha"] + 1e-9
        assert entry["min_mass"] >= 0.5 - 1e-6
    capsys.readouterr()


def test_certify_rejects_non_profile_domains(capsys):
    assert main(["certify", "--domain", "ball", "--alpha", "1,0", "--n-max", "50"]) == 1
    capsys.readouterr()


def test_dbar_json_report(tmp_path, capsys):
    out = tmp_path / "d.json"
    assert main(["dbar", "--domain", "omega0", "--n-max", "32", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["verdict"] == "symbols not in Bergman space"
    statuses = [c["status"] for c in data["coordinates"]]
    assert statuses == ["symbol-not-in-space", "symbol-not-in-space"]
    capsys.readouterr()


def test_report_config_with_flag_overrides(tmp_path, capsys):
    config = {
        "task": "salpha",
        "domain": {"kind": "polydisc", "radius": 1},
        "alpha": [1, 0],
        "n_max": 2,
        "output": {"path": str(tmp_path / "ignored.csv"), "format": "csv"},
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config))
    out = tmp_path / "actual.json"
    assert main(["report", "--config", str(path), "--format", "json",
                 "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["task"] == "salpha"
    assert data["rows"][-1]["S_alpha"] == pytest.approx(23.0 / 12.0, abs=1e-9)
    assert not (tmp_path / "ignored.csv").exists()
    capsys.readouterr()


def test_config_task_must_be_concrete():
    with pytest.raises(InvalidInputError):
        run({"task": "report", "output": {}})
    with pytest.raises(InvalidInputError):
        run({"task": "salpha", "domain": "polydisc", "output": {"format": "yaml"}})


def test_json_round_trip_under_schema(tmp_path, capsys):
    out = tmp_path / "s.json"
    assert main(["salpha", "--domain", "ball", "--alpha", "1,1", "--n-max", "12",
                 "--format", "json", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["alpha"] == [1, 1]
    assert all(set(row) == {"N", "S_alpha", "shell_bound", "cert_bound"} for row in data["rows"])
    capsys.readouterr()
