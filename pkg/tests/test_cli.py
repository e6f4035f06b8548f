"""CLI surface: output formats, exit codes, determinism, config files."""
import json

import pytest

from ecalg.cli import main

EC2_CANONICAL = (
    "2*q^1 + -1*t^1*z2^1 + -1*t^1*z1^1 + 2*q^2 + -2*q^1*t^1*z2^1 + "
    "-2*q^1*t^1*z1^1 + -1*t^1*r^1*z2^2 + 2*t^1*r^1*z1^1*z2^1 + "
    "-1*t^1*r^1*z1^2 + 2*t^2*z1^1*z2^1"
)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_compute_canonical(capsys):
    code, out, _ = run(capsys, "compute", "--n", "2")
    assert code == 0
    assert out.strip() == EC2_CANONICAL


def test_compute_guard_refuses_without_force(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["compute", "--n", "9"])
    assert exc.value.code == 2


def test_expand_json_schema_and_determinism(capsys):
    code, out1, _ = run(capsys, "expand", "--n", "3", "--basis", "schur", "--format", "json")
    assert code == 0
    code, out2, _ = run(capsys, "expand", "--n", "3", "--basis", "schur", "--format", "json")
    assert out1 == out2  # byte-stable
    payload = json.loads(out1)
    assert payload["n"] == 3
    assert payload["basis"] == "s"
    assert payload["verdict"]["coherent"] is True
    assert payload["verdict"]["parity_map"] == {"even": "nonpos", "odd": "nonneg"}
    entries = {tuple(e["partition"]): e for e in payload["entries"]}
    assert entries[(3,)]["coeff"] == "2*t^1*r^2"
    assert entries[(3,)]["sign"] == "nonneg"


def test_expand_elementary_violation_exits_one(capsys):
    # the recorded finding: the elementary basis fails the
    # parity-of-length sign rule at n = 2, and that is a check failure
    code, out, _ = run(capsys, "expand", "--n", "2", "--basis", "elementary")
    assert code == 1
    assert "VIOLATED" in out


def test_expand_csv(capsys):
    code, out, _ = run(capsys, "expand", "--n", "2", "--basis", "m", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "partition,coeff,sign"
    assert any(line.startswith("2,") for line in lines)


def test_verify_symmetry_text_and_exit(capsys):
    code, out, _ = run(capsys, "verify-symmetry", "--max-n", "3")
    assert code == 0
    assert out.count("PASS") == 3
    assert "summary: 3 pass, 0 fail" in out


def test_verify_symmetry_json(capsys):
    code, out, _ = run(capsys, "verify-symmetry", "--max-n", "2", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["summary"] == {"pass": 2, "fail": 0, "observation": 0}
    assert all("wall_time_s" not in r for r in payload["records"])


def test_verify_symmetry_timings_flag(capsys):
    code, out, _ = run(
        capsys, "verify-symmetry", "--max-n", "1", "--format", "json", "--timings"
    )
    payload = json.loads(out)
    assert "wall_time_s" in payload["records"][0]


def test_cluster_xvar_routes(capsys):
    code, out_rec, _ = run(capsys, "cluster", "xvar", "--n", "5", "--c", "2")
    assert code == 0
    code, out_closed, _ = run(
        capsys, "cluster", "xvar", "--n", "5", "--c", "2", "--route", "closed"
    )
    assert code == 0
    assert out_rec == out_closed


def test_cluster_xvar_negative_index(capsys):
    code, out, _ = run(capsys, "cluster", "xvar", "--n", "0", "--c", "2")
    assert code == 0
    assert out.strip() == "1*x2^-1 + 1*x1^2*x2^-1"


def test_cluster_chi_cell(capsys):
    code, out, _ = run(
        capsys, "cluster", "chi", "--n", "4", "--c", "2", "--e1", "1", "--e2", "1",
        "--format", "json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["agree"] is True
    assert payload["routes"] == {
        "recurrence": 2, "closed": 2, "small-e1": 2, "expanded": 2, "bridge": 2
    }


def test_cluster_chi_grid(capsys):
    code, out, _ = run(capsys, "cluster", "chi", "--n", "4", "--c", "2")
    assert code == 0
    assert out.splitlines()[0].startswith("e2\\e1")


def test_cross_check_json(capsys):
    code, out, _ = run(
        capsys, "cluster", "cross-check", "--max-n", "4", "--c", "2", "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    assert [r["n"] for r in payload] == [3, 4]
    assert payload[1]["dim_vector"] == [2, 1]
    cell = payload[1]["cells"][0]
    assert set(cell) == {"e1", "e2", "routes", "agree"}


def test_identities_sweep(capsys):
    code, out, _ = run(
        capsys, "cluster", "identities", "--eq12-count", "20", "--stfact-count", "5",
        "--seed", "3", "--format", "json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["summary"]["fail"] == 0
    assert payload["summary"]["pass"] == 25


def test_identities_deterministic_output(capsys):
    args = ("cluster", "identities", "--eq12-count", "10", "--stfact-count", "3",
            "--seed", "11", "--format", "csv")
    _, out1, _ = run(capsys, *args)
    _, out2, _ = run(capsys, *args)
    assert out1 == out2
    assert out1.splitlines()[0] == "check,inputs,status,witness"


def test_output_file(tmp_path, capsys):
    target = tmp_path / "out.json"
    code, out, _ = run(
        capsys, "expand", "--n", "2", "--basis", "schur", "--format", "json",
        "--output", str(target),
    )
    assert code == 0
    assert out == ""
    assert json.loads(target.read_text())["n"] == 2


def test_config_file_defaults(tmp_path, capsys):
    cfg = tmp_path / "ec.conf"
    cfg.write_text("format=json\n# comment line\n")
    code, out, _ = run(capsys, "verify-symmetry", "--max-n", "1", "--config", str(cfg))
    assert code == 0
    json.loads(out)  # format came from the config file
    # the command line wins over the config
    code, out, _ = run(
        capsys, "verify-symmetry", "--max-n", "1", "--config", str(cfg),
        "--format", "text",
    )
    assert "PASS" in out


def test_usage_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["expand", "--n", "2", "--basis", "nosuch"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["cluster", "chi", "--n", "2", "--c", "2"])
    assert exc.value.code == 2
