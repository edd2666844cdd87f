import csv
import io
import json
import math

import pytest

from rnsalu.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def fields(text):
    return dict(line.split(": ", 1) for line in text.splitlines() if ": " in line)


class TestSystem:
    def test_q9_natural(self, capsys):
        code, out, _ = run(capsys, "system", "--Q", "9", "--format", "json")
        info = json.loads(out)
        assert code == 0
        assert (info["p"], info["P"]) == (97, 509)
        assert info["E_R"] == pytest.approx(80.5, abs=0.05)

    def test_q9_top_selection(self, capsys):
        _, out, _ = run(capsys, "system", "--Q", "9", "--select", "power-augmented-top", "--format", "json")
        info = json.loads(out)
        assert info["p"] == 43 and info["E_R"] > 95

    def test_explicit_moduli(self, capsys):
        _, out, _ = run(capsys, "system", "--moduli", "2,3,5,7")
        f = {k.strip(): v for k, v in fields(out).items()}
        assert f["R"] == "210"
        assert float(f["n_e"]) == pytest.approx(7.714, abs=5e-4)

    def test_non_coprime_names_pair(self, capsys):
        code, _, err = run(capsys, "system", "--moduli", "4,6")
        assert code == 2
        assert "4" in err and "6" in err

    def test_csv(self, capsys):
        _, out, _ = run(capsys, "system", "--p", "4", "--format", "csv")
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0][:3] == ["p", "P", "Q"] and rows[1][:3] == ["4", "7", "3"]


class TestTables:
    def test_table3(self, capsys):
        _, out, _ = run(capsys, "tables", "--id", "3", "--q", "4..14", "--format", "csv")
        rows = list(csv.reader(io.StringIO(out)))[1:]
        assert len(rows) == 11
        assert rows[5] == ["9", "97", "79", "702.60", "509"]

    def test_table5_csv(self, capsys):
        _, out, _ = run(capsys, "tables", "--id", "5", "--q", "6..14", "--format", "csv")
        rows = list(csv.reader(io.StringIO(out)))
        assert len(rows) == 10
        assert rows[-1][5] == "0.7780"

    def test_table2_text(self, capsys):
        _, out, _ = run(capsys, "tables", "--id", "2", "--q", "8..14")
        lines = out.splitlines()
        assert len(lines) == 8
        assert lines[1].split() == ["8", "54", "101", "335", "0.16"]

    def test_byte_stable(self, capsys):
        a = run(capsys, "tables", "--id", "5", "--q", "6..14", "--format", "json")[1]
        b = run(capsys, "tables", "--id", "5", "--q", "6..14", "--format", "json")[1]
        assert a == b

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "t2.csv"
        code, _, _ = run(capsys, "tables", "--id", "2", "--out", str(target), "--format", "csv")
        assert code == 0 and target.read_text().startswith("Q,p,")

    def test_unwritable_path(self, capsys, tmp_path):
        code, _, err = run(capsys, "tables", "--id", "2", "--out", str(tmp_path / "missing" / "x.csv"))
        assert code == 4
        assert "missing" in err

    def test_bad_range(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["tables", "--id", "2", "--q", "14..8"])
        assert info.value.code == 2


class TestGraph:
    def test_graph3(self, capsys):
        _, out, _ = run(capsys, "graph", "--id", "3", "--range", "14..14")
        assert list(csv.reader(io.StringIO(out)))[1][1] == "0.7780"

    def test_graph1_default_range(self, capsys):
        _, out, _ = run(capsys, "graph", "--id", "1")
        assert len(out.splitlines()) == 33


class TestConvert:
    def test_forward_int(self, capsys):
        _, out, _ = run(capsys, "convert", "--moduli", "2,3,5,7", "--int", "100")
        assert fields(out)["digits"] == "0,1,0,2"

    def test_reverse(self, capsys):
        _, out, _ = run(capsys, "convert", "--reverse", "--moduli", "2,3,5", "--digits", "1,2,3")
        f = fields(out)
        assert f["unsigned"] == "23"
        assert f["mixed_radix"] == "1,2,3"
        # 23 lies above R/2 = 15, so its signed reading is 23 - 30
        assert f["value"] == "-7"

    def test_forward_frac(self, capsys):
        _, out, _ = run(capsys, "convert", "--moduli", "2,3,5,7", "--frac-moduli", "3,5", "--frac", "1/3")
        f = fields(out)
        assert (f["F"], f["payload"]) == ("15", "5")

    def test_reverse_frac(self, capsys):
        _, out, _ = run(
            capsys, "convert", "--reverse", "--moduli", "2,3,5,7", "--frac-moduli", "3,5", "--digits", "1,1,0,2",
            "--places", "4",
        )
        f = fields(out)
        assert f["value"] == "-1/3" and f["decimal"] == "-0.3333"  # payload -5

    def test_out_of_range(self, capsys):
        code, _, err = run(capsys, "convert", "--moduli", "2,3,5,7", "--int", "105")
        assert code == 3 and "range" in err

    def test_bad_digits(self, capsys):
        code, _, _ = run(capsys, "convert", "--reverse", "--moduli", "2,3,5", "--digits", "1,2,9")
        assert code == 2


class TestEval:
    def test_product(self, capsys):
        code, out, _ = run(capsys, "eval", "--frac-moduli", "3,5", "1/3 * 3/5", "--format", "json")
        doc = json.loads(out)
        assert code == 0 and doc["value"] == "1/5"
        mul_steps = [o["steps"] for o in doc["ops"] if o["op"] == "*"]
        assert mul_steps and all(n <= 2 * doc["p"] for n in mul_steps)

    def test_precedence_and_parentheses(self, capsys):
        _, out, _ = run(capsys, "eval", "--p", "12", "--frac-moduli", "17,19", "(1 + 2) * 3 - 4 / 2")
        assert fields(out)["value"] == "7"

    def test_division(self, capsys):
        _, out, _ = run(capsys, "eval", "--frac-moduli", "3,5", "6/15 / 3/15")
        assert fields(out)["value"] == "2"

    def test_division_by_zero(self, capsys):
        code, _, _ = run(capsys, "eval", "--frac-moduli", "3,5", "1 / 0")
        assert code == 3

    def test_parse_error_position(self, capsys):
        code, _, err = run(capsys, "eval", "--frac-moduli", "3,5", "1 + * 2")
        assert code == 2
        assert "4" in err

    def test_needs_a_system(self, capsys):
        code, _, _ = run(capsys, "eval", "1 + 1")
        assert code == 2


class TestMatmul:
    def test_random_q9(self, capsys):
        _, out, _ = run(capsys, "matmul", "--random", "8", "--Q", "9", "--seed", "42")
        f = fields(out)
        assert f["normalizations"] == "64"
        assert f["within_bound"] == "True"
        assert float(f["max_error_ulp"]) <= 0.5

    def test_deterministic(self, capsys):
        a = run(capsys, "matmul", "--random", "4", "--p", "12", "--seed", "7")[1]
        b = run(capsys, "matmul", "--random", "4", "--p", "12", "--seed", "7")[1]
        c = run(capsys, "matmul", "--random", "4", "--p", "12", "--seed", "8")[1]
        assert a == b != c

    def test_csv_worked_example(self, capsys, tmp_path):
        (tmp_path / "a.csv").write_text("1/3,3/5\n0,1/15\n")
        (tmp_path / "b.csv").write_text("3/5,0\n1/3,1/15\n")
        _, out, _ = run(
            capsys, "matmul", "--moduli", "2,3,5,7", "--frac-moduli", "3,5",
            "--a", str(tmp_path / "a.csv"), "--b", str(tmp_path / "b.csv"), "--format", "json", "--places", "4",
        )
        doc = json.loads(out)
        assert doc["result"][0][0] == "0.4000"
        assert doc["normalizations"] == 4

    def test_identity(self, capsys, tmp_path):
        (tmp_path / "i.csv").write_text("1,0\n0,1\n")
        (tmp_path / "a.csv").write_text("1/3,-2/5\n7/15,0\n")
        _, out, _ = run(
            capsys, "matmul", "--p", "8", "--frac-moduli", "3,5",
            "--a", str(tmp_path / "i.csv"), "--b", str(tmp_path / "a.csv"), "--format", "json", "--places", "6",
        )
        assert json.loads(out)["result"] == [["0.333333", "-0.400000"], ["0.466667", "0.000000"]]

    def test_budget_violation(self, capsys, tmp_path):
        (tmp_path / "a.csv").write_text("6,6\n6,6\n")
        code, _, err = run(
            capsys, "matmul", "--moduli", "2,3,5,7", "--frac-moduli", "3,5",
            "--a", str(tmp_path / "a.csv"), "--b", str(tmp_path / "a.csv"),
        )
        assert code == 3 and "(0, 0)" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run(capsys, "matmul", "--a", str(tmp_path / "nope.csv"), "--b", str(tmp_path / "nope.csv"))
        assert code == 4

    def test_model_clocks_reported(self, capsys):
        _, out, _ = run(capsys, "matmul", "--random", "2", "--p", "8", "--seed", "1")
        f = fields(out)
        assert int(f["model_rns_delayed"]) == 8 + 4 * 16
        assert math.isfinite(float(f["model_binary_standard"]))
