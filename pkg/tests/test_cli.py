import json
from fractions import Fraction

import pytest
from hypothesis import given, settings

from nilderiv.cli import main, run_classify
from nilderiv.parser import ParseError, parse_scalar, parse_vector_field

from conftest import d, derivations, x

HEIS = ["d1", "x3*d1 + d2", "d3"]


class TestParser:
    def test_examples(self):
        assert parse_vector_field("x3*d1 + d2", 3) == x(3) * d(1) + d(2)
        assert parse_vector_field("(1/2)*x2^2*d1", 3).to_str() == "(1/2)*x2^2*d1"
        assert parse_vector_field("d1 + d1", 3) == d(1) * 2

    def test_whitespace_and_grouping(self):
        assert parse_vector_field("  x1 *( d1-x2*d2 )", 3) == x(1) * d(1) - x(1) * x(2) * d(2)
        assert parse_vector_field("(x1+x2)^2*d3", 3) == (x(1) + x(2)) ** 2 * d(3)

    def test_leading_minus(self):
        assert parse_vector_field("-2*x3*d1 + d3", 3) == x(3) * d(1) * -2 + d(3)

    def test_zero(self):
        assert not parse_vector_field("d1 - d1", 3)
        assert not parse_vector_field("0", 3)

    def test_scalar(self):
        assert parse_scalar("x1^2 - 3/2", 2) == x(1, 2) ** 2 - Fraction(3, 2)
        with pytest.raises(ParseError):
            parse_scalar("x1*d1", 2)

    @pytest.mark.parametrize("text, col", [
        ("d1*d2", 3), ("x4*d1", 1), ("d1 +", 5), ("d1^2", 3), ("x1 + d1", 4),
        ("d1 &", 4), ("(d1", 4), ("x1", 1), ("x1^1/2*d1", 4),
    ])
    def test_errors_have_positions(self, text, col):
        with pytest.raises(ParseError) as err:
            parse_vector_field(text, 3)
        assert err.value.line == 1 and err.value.col == col

    def test_error_on_second_line(self):
        with pytest.raises(ParseError) as err:
            parse_vector_field("d1 +\n  )", 3)
        assert (err.value.line, err.value.col) == (2, 3)

    def test_nvars_mismatch(self):
        with pytest.raises(ParseError):
            parse_vector_field("d3", 2)

    @given(derivations(max_degree=4))
    @settings(max_examples=100)
    def test_round_trip(self, D):
        assert parse_vector_field(D.to_str(), 3) == D


class TestRunClassify:
    def test_report_fields(self):
        rep = run_classify([parse_vector_field(t, 3) for t in HEIS], HEIS)
        out = rep.to_dict()
        assert list(out) == ["input", "rank", "nilpotent", "class", "center_dim",
                             "normal_form", "embedding", "verified"]
        assert out["normal_form"]["tag"] == "Heisenberg3"
        assert out["class"] == 2 and out["center_dim"] == 1 and out["rank"] == 3
        assert all(out["verified"].values())


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def fields(*texts):
    out = []
    for t in texts:
        out += ["--field", t]
    return out


class TestMain:
    def test_classify_heisenberg(self, capsys, tmp_path):
        path = tmp_path / "r.json"
        code, out, _ = run(capsys, "classify", "--nvars", "3", *fields(*HEIS), "--json", str(path))
        assert code == 0 and "Heisenberg3" in out
        data = json.loads(path.read_text())
        assert data["embedding"] == HEIS

    def test_classify_abelian(self, capsys):
        code, out, _ = run(capsys, "classify", "--nvars", "3", *fields("x1*d1", "x2*d2", "x3*d3"))
        assert code == 0 and "Abelian3" in out

    @pytest.mark.parametrize("nvars, texts, code", [
        (1, ["d1", "x1*d1"], 4),
        (4, ["d1", "d2", "d3", "d4"], 5),
        (3, ["d1", "x2*d1"], 6),
        (2, ["d1", "x1*d2", "x1^2*d2"], 3),
        (2, ["d1", "x1*"], 2),
    ])
    def test_exit_codes(self, capsys, tmp_path, nvars, texts, code):
        path = tmp_path / "e.json"
        got, _, err = run(capsys, "classify", "--nvars", str(nvars), *fields(*texts),
                          "--json", str(path))
        assert got == code and "error" in err
        assert json.loads(path.read_text())["error"]["code"] == code

    def test_json_is_deterministic(self, tmp_path, capsys):
        texts = ["d3", "d2", "d1", "x3*d1", "x2*d1", "x2*x3*d1"]
        blobs = []
        for k in range(2):
            path = tmp_path / f"{k}.json"
            assert run(capsys, "classify", "--nvars", "3", *fields(*texts), "--json", str(path))[0] == 0
            blobs.append(path.read_bytes())
        assert blobs[0] == blobs[1]

    def test_other_commands(self, capsys):
        assert run(capsys, "bracket", "--nvars", "3", "d3", "x3*d1")[1].strip() == "d1"
        assert run(capsys, "rank", "--nvars", "3", *fields("d1", "x2*d1"))[1].strip() == "1"
        code, out, _ = run(capsys, "center", "--nvars", "3", *fields(*HEIS))
        assert code == 0 and out.splitlines() == ["dim 1", "  d1"]
        code, out, _ = run(capsys, "nilpotency", "--nvars", "3", *fields(*HEIS))
        assert code == 0 and "class 2" in out
        code, out, _ = run(capsys, "nilpotency", "--nvars", "1", *fields("d1", "x1*d1"))
        assert code == 4 and "not nilpotent" in out
