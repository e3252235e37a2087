from pathlib import Path

import pytest

from semired.cli import main

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_lfactor_on_a_builtin(capsys):
    code, out, err = run(capsys, "lfactor", "builtin:c2", "--place", "v7")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "command: lfactor" and lines[1].startswith("inputs: ")
    assert lines[2] == "v7: root(2,1; 0; 7)"
    assert err.startswith("time: ")


def test_output_is_deterministic(capsys):
    first = run(capsys, "bc", FIXTURES / "s3.gd")
    second = run(capsys, "bc", FIXTURES / "s3.gd")
    assert first[:2] == second[:2]
    assert first[0] == 0 and "pass restriction path equals character-product path" in first[1]


def test_gw_solve(capsys):
    code, out, _ = run(capsys, "gw-solve", "--at", "5 unram order 2 value -1", "--order", "2")
    assert code == 0
    assert "character: dirichlet(3; 2:-1)" in out.splitlines()


def test_gw_solve_order_eight_is_infeasible(capsys):
    code, out, err = run(capsys, "gw-solve", "--at", "2 unram order 8 value e(1/8)", "--order", "8")
    assert code == 1 and out == ""
    assert err.startswith("error[infeasible]: ") and "order 16 is feasible" in err


def test_parse_errors_exit_two(capsys):
    assert run(capsys, "lfactor", FIXTURES / "missing.gd")[0] == 2
    code, _, err = run(capsys, "lfactor", FIXTURES / "broken-assoc.gd")
    assert code == 2 and err.startswith("error[parse]: line ")
    assert run(capsys, "lfactor", FIXTURES / "dangling-place.gd")[0] == 2
    assert run(capsys, "gw-solve", "--at", "5 sideways", "--order", "2")[0] == 2
    assert run(capsys, "lfactor", "builtin:nope")[0] == 2
    assert run(capsys, "gw-solve")[0] == 2


def test_domain_errors_exit_one(capsys):
    code, _, err = run(capsys, "lfactor", "builtin:c2", "--place", "v999")
    assert code == 1 and err.startswith("error[")
    code, _, err = run(capsys, "complete", FIXTURES / "pair-bad-epsilon.gd")
    assert code == 1 and err.startswith("error[inconsistent-fe]: ")


def test_reduce_then_replay(tmp_path, capsys):
    cert = tmp_path / "cert.txt"
    code, out, _ = run(capsys, "reduce", FIXTURES / "c2.gd", "--probes", 3, "--out", cert)
    assert code == 0 and "FAIL" not in out
    code, out, _ = run(capsys, "replay", cert)
    assert code == 0
    assert "pass replay is byte-identical" in out.splitlines()
    tampered = tmp_path / "bad.txt"
    tampered.write_text(cert.read_text().replace("coverage: equal", "coverage: differs"))
    code, out, _ = run(capsys, "replay", tampered)
    assert code == 1
    assert "FAIL replay is byte-identical" in out and "first difference: line 4" in out


def test_descend(capsys):
    code, out, _ = run(capsys, "descend", "builtin:s3")
    assert code == 0 and "matched twist: " in out
    assert out.splitlines()[-1] == "pass descended object matches the Artin factors at good places"


def test_complete_and_verify(capsys):
    code, out, _ = run(capsys, "complete", FIXTURES / "pair.gd")
    assert code == 0 and "completed: side 2 at v11" in out
    code, out, _ = run(capsys, "verify", FIXTURES / "pair.gd")
    assert code == 0
    assert "place v11: unknown" in out and "verdict: weak-only" in out


def test_twist_and_base_change_of_formal_data(capsys):
    code, out, _ = run(capsys, "twist", FIXTURES / "formal.gd", "--place", "v7")
    assert code == 0 and "twist by dirichlet(3; 2:-1)" in out
    code, out, _ = run(capsys, "bc", FIXTURES / "formal.gd", "--place", "v11")
    assert code == 0 and "v11: " in out  # 11 is inert in Q(sqrt-3)


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest", "--seed", 1)
    assert code == 0 and "FAIL" not in out
    assert any(line.startswith("pass gw fuzz 1/") for line in out.splitlines())


def test_unknown_command_is_a_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2
