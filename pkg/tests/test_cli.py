import csv
import io
import json

import pytest

from u3slopes import cli, lemmas


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_expand_text(capsys):
    assert run(capsys, "expand", "theta", "--terms", "5")[1] == "1, 6, 0, 6, 6\n"
    assert run(capsys, "expand", "y", "--terms", "5")[1] == "0, 1, 0, 0, -5\n"
    assert run(capsys, "expand", "E_kappa", "--conductor", "9", "--terms", "3")[1] == "1, 1 - w, 3\n"


def test_expand_y_coordinates(capsys):
    code, out, _ = run(capsys, "expand", "f", "--coords", "y", "--terms", "4")
    assert code == 0 and out == "0, 1, 12, 90\n"


def test_expand_csv(capsys):
    code, out, _ = run(capsys, "expand", "delta", "--terms", "4", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["exponent", "coefficient", "precision"]
    assert rows[2] == ["1", "1", "exact"]
    assert rows[3] == ["2", "-24", "exact"]


def test_expand_json_is_deterministic(capsys, tmp_path):
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "expand", "E_kappa", "--terms", "6", "--format", "json", "--output", str(p1))
    run(capsys, "expand", "E_kappa", "--terms", "6", "--format", "json", "--output", str(p2))
    assert p1.read_bytes() == p2.read_bytes()
    data = json.loads(p1.read_text())
    assert data["coefficients"][1]["coefficient"] == "1 - w"
    assert 0 < data["coefficients"][1]["precision"] <= 48


def test_config_errors_exit_2(capsys):
    code, _, err = run(capsys, "slopes", "--conductor", "3")
    assert code == 2 and "1/3 < |w0| < 1" in err
    assert run(capsys, "slopes", "--beta", "25")[0] == 2
    assert run(capsys, "slopes", "--alpha-max", "9", "--beta", "27")[0] == 2
    assert run(capsys, "expand", "theta", "--q-prec", "10", "--y-prec", "20")[0] == 2
    assert run(capsys, "expand", "E_classical", "--terms", "3")[0] == 2


def test_unknown_form_rejected(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["expand", "eta"])
    assert info.value.code == 2


def test_precision_error_exit_2(capsys):
    code, _, err = run(capsys, "slopes", "--precision-N", "20")
    assert code == 2 and "retry with N >=" in err


def test_verify_residue(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "residue")
    assert code == 0
    assert out.strip().endswith("PASS")
    assert "det(T_alpha) != 0 for 1 <= alpha <= 24" in out


def test_verify_fund_lemma_json(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "fund-lemma", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["passed"] and data["suites"][0]["suite"] == "fund-lemma"


def test_verify_member_single_k(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "member-lemma", "--k", "3", "--y-prec", "40")
    assert code == 0 and "k=3" in out


def test_verify_all_on_corrupted_build(capsys, monkeypatch):
    def broken_u(g):
        out = lemmas.PowSeries(g.coeffs[::3], g.var, g.ring)
        return out + 1

    monkeypatch.setattr(lemmas, "u_op", broken_u)
    code, out, _ = run(capsys, "verify", "--suite", "all")
    assert code == 1
    assert "first failure" in out and out.strip().endswith("FAIL")


def test_matrix_command(capsys):
    code, out, _ = run(capsys, "matrix", "--beta", "9", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["zero_pattern_ok"] and data["valuation_floor_ok"]
    assert data["entries"][0][0]["coefficient"] == "1"
    assert data["valuations"][0][1] is None
    code, out, _ = run(capsys, "matrix", "--beta", "6", "--route", "qspace")
    assert code == 0 and "zero pattern: ok" in out


def test_slopes_json_schema(capsys):
    code, out, _ = run(capsys, "slopes", "--conductor", "27", "--generator-exponent", "1", "--alpha-max", "3", "--beta", "12", "--format", "json")
    data = json.loads(out)
    assert data["kappa"] == {"conductor": 27, "generator_exponent": 1}
    assert data["v"] == {"num": 1, "den": 6}
    assert [s["mult"] for s in data["slopes"]] == [1, 1, 1]
    assert data["stable"] is True
    # exit code mirrors the progression check
    assert code == (0 if data["progression_ok"] and data["valuations_ok"] else 1)


def test_slopes_csv(capsys):
    _, out, _ = run(capsys, "slopes", "--alpha-max", "2", "--beta", "9", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["alpha", "valuation", "slope"]
    assert len(rows) == 4
