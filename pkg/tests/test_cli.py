import json

import pytest

from pigeonsim import cli
from pigeonsim.qphe import EXPECTED_PARITY, LABEL_KEYS, SchemeId, build_scheme_circuit
from pigeonsim.qasm import parse_qasm


def run_cli(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_run_exact_table(capsys):
    code, out, _ = run_cli(["run", "--scheme", "direct"], capsys)
    assert code == 0
    assert "scheme: direct" in out
    for key in LABEL_KEYS:
        assert key in out
    # spot-check one row: +i-i+i -> 0 0 1
    row = next(ln for ln in out.splitlines() if ln.startswith("+i-i+i"))
    assert row.split()[1:4] == ["0", "0", "1"]


def test_run_exact_json(capsys):
    code, out, _ = run_cli(
        ["run", "--scheme", "distillation", "--output", "json"], capsys
    )
    assert code == 0
    payload = json.loads(out)  # stdout must be pure JSON
    assert payload["scheme"] == "distillation"
    for row in payload["rows"]:
        assert (row["w12"], row["w23"], row["w13"]) == EXPECTED_PARITY[row["label"]]
        assert abs(row["prob"] - 0.125) < 1e-9


def test_run_single_pair_exact_json(capsys):
    code, out, _ = run_cli(
        ["run", "--scheme", "common_target", "--pair", "13", "--output", "json"],
        capsys,
    )
    assert code == 0
    payload = json.loads(out)
    (block,) = payload["pairs"]
    assert block["pair"] == "13"
    for row in block["rows"]:
        assert row["w"] == EXPECTED_PARITY[row["label"]][2]


def test_run_shots_byte_identical(capsys):
    def argv(seed):
        return ["run", "--scheme", "direct", "--pair", "12", "--mode", "shots",
                "--shots", "3000", "--seed", str(seed), "--output", "json"]

    code1, out1, _ = run_cli(argv(11), capsys)
    code2, out2, _ = run_cli(argv(11), capsys)
    assert code1 == code2 == 0
    assert out1 == out2
    assert run_cli(argv(12), capsys)[1] != out1  # seed changes the counts


def test_seed_env_variable(capsys, monkeypatch):
    argv = ["run", "--scheme", "direct", "--pair", "23", "--mode", "shots",
            "--shots", "500", "--output", "json"]
    monkeypatch.setenv("PIGEONSIM_SEED", "123")
    _, from_env, _ = run_cli(argv, capsys)
    monkeypatch.delenv("PIGEONSIM_SEED")
    _, explicit, _ = run_cli(argv + ["--seed", "123"], capsys)
    assert from_env == explicit


def test_bad_seed_env_is_an_error(capsys, monkeypatch):
    monkeypatch.setenv("PIGEONSIM_SEED", "about-seven")
    code, _, err = run_cli(
        ["run", "--scheme", "direct", "--mode", "shots", "--shots", "10"], capsys
    )
    assert code == 1
    assert "PIGEONSIM_SEED" in err


def test_shots_zero_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["run", "--scheme", "direct", "--mode", "shots", "--shots", "0"])
    assert info.value.code == 2


def test_scheme_and_qasm_are_mutually_exclusive(capsys, tmp_path):
    f = tmp_path / "c.qasm"
    f.write_text("OPENQASM 2.0;\nqreg q[1];\n")
    with pytest.raises(SystemExit) as info:
        cli.main(["run", "--scheme", "direct", "--from-qasm", str(f)])
    assert info.value.code == 2


def test_run_requires_a_source(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["run"])
    assert info.value.code == 2


def test_feed_forward_needs_common_target(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["run", "--scheme", "direct", "--feed-forward"])
    assert info.value.code == 2


def test_unknown_scheme_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["run", "--scheme", "sideways"])
    assert info.value.code == 2


def test_export_then_run_from_qasm(capsys, tmp_path):
    path = tmp_path / "direct23.qasm"
    code, _, _ = run_cli(["export", "direct", "23", str(path)], capsys)
    assert code == 0
    assert parse_qasm(path.read_text()) == build_scheme_circuit(SchemeId.DIRECT, "23")

    code, out, _ = run_cli(
        ["run", "--from-qasm", str(path), "--output", "json"], capsys
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["mode"] == "exact"
    assert payload["circuit"] == "direct23"
    # grouping branches by label reproduces the (2,3) parity column
    from pigeonsim.qphe import branch_label, branch_parity

    got = {}
    for branch in payload["branches"]:
        assert abs(branch["prob"] - 0.125) < 1e-12
        label = "".join(branch_label(branch["clbits"]))
        got[label] = branch_parity(SchemeId.DIRECT, branch["clbits"])
    assert got == {key: EXPECTED_PARITY[key][1] for key in LABEL_KEYS}


def test_run_from_qasm_shots(capsys, tmp_path):
    path = tmp_path / "bell.qasm"
    path.write_text(
        "OPENQASM 2.0;\nqreg q[2];\ncreg c[2];\nh q[0];\ncx q[0],q[1];\n"
        "measure q[0] -> c[0];\nmeasure q[1] -> c[1];\n"
    )
    code, out, _ = run_cli(
        ["run", "--from-qasm", str(path), "--mode", "shots", "--shots", "1000",
         "--seed", "4", "--output", "json"],
        capsys,
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["shots"] == 1000
    assert set(payload["counts"]) == {"00", "11"}
    assert sum(payload["counts"].values()) == 1000


def test_run_from_missing_file(capsys, tmp_path):
    code, _, err = run_cli(["run", "--from-qasm", str(tmp_path / "nope.qasm")], capsys)
    assert code == 1
    assert "error:" in err


def test_run_from_bad_qasm_reports_position(capsys, tmp_path):
    path = tmp_path / "bad.qasm"
    path.write_text("OPENQASM 2.0;\nqreg q[1];\nt q[0];\n")
    code, _, err = run_cli(["run", "--from-qasm", str(path)], capsys)
    assert code == 1
    assert "3:1" in err and "t" in err


def test_out_flag_writes_the_report(capsys, tmp_path):
    argv = ["run", "--scheme", "direct", "--output", "json"]
    _, direct_out, _ = run_cli(argv, capsys)
    target = tmp_path / "report.json"
    code, out, _ = run_cli(argv + ["--out", str(target)], capsys)
    assert code == 0
    assert out == ""  # report went to the file instead
    assert target.read_text() == direct_out


def test_verify_passes(capsys):
    code, out, _ = run_cli(["verify"], capsys)
    assert code == 0
    assert "verify: OK" in out
    assert out.count("PASS") == 8
    assert "FAIL" not in out


def test_verify_json(capsys):
    code, out, _ = run_cli(["verify", "--json"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["ok"] is True
    names = {c["name"] for c in payload["checks"]}
    assert {"postselect-mapping", "parity-table-direct", "scheme-equivalence"} <= names
    assert all(c["ok"] for c in payload["checks"])


def test_verify_corrupted_build_fails_with_row_permutation(capsys):
    code, out, _ = run_cli(["verify", "--corrupt", "sdg-for-s"], capsys)
    assert code == 1
    assert "verify: FAILED" in out
    assert "+i and -i are swapped" in out
    # the parity table itself is conjugation-symmetric, so those checks pass;
    # the defect shows up in the label mapping and the amplitudes
    assert "PASS parity-table-direct" in out
    assert "FAIL postselect-mapping" in out
    assert "FAIL final-state-amplitudes" in out


def test_verify_corrupted_json(capsys):
    code, out, _ = run_cli(["verify", "--corrupt", "sdg-for-s", "--json"], capsys)
    assert code == 1
    payload = json.loads(out)
    assert payload["ok"] is False
    failing = {c["name"] for c in payload["checks"] if not c["ok"]}
    assert failing == {"postselect-mapping", "final-state-amplitudes"}


def test_export_feed_forward(capsys, tmp_path):
    path = tmp_path / "ff.qasm"
    code, _, _ = run_cli(
        ["export", "common_target", "12", str(path), "--feed-forward"], capsys
    )
    assert code == 0
    circ = build_scheme_circuit(SchemeId.COMMON_TARGET, "12", feed_forward=True)
    assert parse_qasm(path.read_text()) == circ


def test_export_to_unwritable_path(capsys, tmp_path):
    code, _, err = run_cli(
        ["export", "direct", "12", str(tmp_path / "no" / "dir" / "x.qasm")], capsys
    )
    assert code == 1
    assert "error:" in err
