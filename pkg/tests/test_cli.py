import json
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from chowcalc import cli, dsl
from chowcalc.errors import InvariantViolation

FIXTURES = Path(__file__).parent / "fixtures"
PROGRAMS = sorted(FIXTURES.glob("*.chow"))
INVALID = sorted((FIXTURES / "invalid").glob("*.chow"))

ITEM_KEYS = ["name", "status", "sign", "flags", "output", "witness", "millis"]


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def check_schema(items):
    assert isinstance(items, list) and items
    for item in items:
        keys = list(item)
        assert keys == [k for k in ITEM_KEYS if k in item]
        assert {"name", "status", "millis"} <= set(keys)
        assert item["status"] in ("pass", "fail", "error")
        assert isinstance(item["name"], str)
        assert isinstance(item["millis"], int) and item["millis"] >= 0
        if "sign" in item:
            assert item["sign"] in (-1, 1)
        if "witness" in item:
            assert isinstance(item["witness"], dict)


def test_corpus_is_large_enough():
    assert len(PROGRAMS) >= 10


@pytest.mark.parametrize("path", PROGRAMS, ids=lambda p: p.name)
def test_fixture_round_trip(path):
    program = dsl.parse(path.read_text())
    printed = dsl.format_program(program)
    assert dsl.parse(printed) == program
    assert dsl.format_program(dsl.parse(printed)) == printed


_NAMES = st.sampled_from(["a", "b"])
_LEAVES = st.one_of(
    st.builds(dsl.Num, st.integers(0, 40)),
    st.builds(dsl.Name, _NAMES),
    st.just(dsl.Zeta("X")),
    st.builds(dsl.Chern, st.integers(0, 3), st.just("L")),
    st.builds(dsl.Segre, st.integers(0, 3), st.just("L")),
)


def _compound(children):
    return st.one_of(
        st.builds(dsl.BinOp, st.sampled_from(["+", "-", "*"]), children, children),
        st.builds(dsl.Neg, children),
        st.builds(dsl.Pow, children, st.integers(0, 5)),
        st.builds(dsl.Integrate, children),
        st.builds(dsl.Pullback, st.just("X"), st.just("X"), children),
        st.builds(dsl.Pushforward, st.just("X"), st.just("X"), children),
    )


CLASS_EXPRS = st.recursive(_LEAVES, _compound, max_leaves=12)

PRELUDE = [
    dsl.SpaceStmt("X", dsl.ProjSpace(2)),
    dsl.BundleStmt("L", "X", dsl.SumBundle((dsl.Zeta("X"), dsl.Num(0)))),
    dsl.ClassStmt("a", dsl.Num(1)),
    dsl.ClassStmt("b", dsl.Zeta("X")),
]


@given(CLASS_EXPRS, CLASS_EXPRS)
def test_random_program_round_trip(left, right):
    program = dsl.Program(tuple(PRELUDE + [dsl.PrintStmt(left), dsl.AssertEqStmt(left, right)]))
    assert dsl.parse(dsl.format_program(program)) == program


def test_parser_keeps_precedence():
    program = dsl.parse("space X = proj 2\nprint -zeta(X)^2 - 3*zeta(X)\n")
    expr = program.statements[1].expr
    assert expr == dsl.BinOp(
        "-", dsl.Neg(dsl.Pow(dsl.Zeta("X"), 2)), dsl.BinOp("*", dsl.Num(3), dsl.Zeta("X"))
    )


@pytest.mark.parametrize("text,line,col,expected", [
    ("space X = proj\n", 2, 1, ("INT",)),
    ("space X = proj 2\nprint zeta(X\n", 3, 1, (")",)),
    ("space = proj 2\n", 1, 7, ("ID",)),
    ("space X = proj 2\nprint zeta(X) +\n", 3, 1, None),
])
def test_parse_error_positions(text, line, col, expected):
    with pytest.raises(dsl.DslError) as info:
        dsl.parse(text)
    assert (info.value.line, info.value.col) == (line, col)
    if expected is not None:
        assert info.value.expected == expected


def test_unknown_identifier_is_reported_where_used():
    with pytest.raises(dsl.DslError, match="unknown identifier 'Y'") as info:
        dsl.parse("space X = proj 2\nprint zeta(Y)\n")
    assert (info.value.line, info.value.col) == (2, 12)


def test_kind_mismatch():
    with pytest.raises(dsl.DslError, match="is a class, but a bundle is expected"):
        dsl.parse("space X = proj 2\nclass h = zeta(X)\nspace P = projbundle(X, h)\n")


def test_redefinition_is_rejected():
    with pytest.raises(dsl.DslError, match="already defined"):
        dsl.parse("space X = proj 2\nspace X = proj 3\n")


def test_keywords_are_reserved():
    with pytest.raises(dsl.DslError):
        dsl.parse("space zeta = proj 2\n")


@pytest.mark.parametrize("path", INVALID, ids=lambda p: p.name)
def test_invalid_fixtures_exit_2(capsys, path):
    code, out, err = run_cli(capsys, "run", str(path))
    assert code == 2
    assert out == ""
    assert err.startswith("chowcalc: error: ")


def test_missing_file_exits_2(capsys, tmp_path):
    code, _, err = run_cli(capsys, "run", str(tmp_path / "absent.chow"))
    assert code == 2 and "cannot read" in err


def test_passing_program_exits_0(capsys):
    code, out, _ = run_cli(capsys, "run", str(FIXTURES / "plane.chow"))
    assert code == 0
    assert out.splitlines()[0] == "PASS  print integrate(h^2) => 1"


def test_failing_assert_exits_1(capsys):
    code, out, _ = run_cli(capsys, "run", str(FIXTURES / "failing_assert.chow"), "--json")
    assert code == 1
    items = json.loads(out)
    check_schema(items)
    assert items[0]["status"] == "fail"
    assert items[0]["witness"] == {"expected": 2, "actual": 1}
    assert items[1]["status"] == "pass"


def test_runtime_usage_error_exits_2_and_continues(capsys):
    code, out, _ = run_cli(capsys, "run", str(FIXTURES / "runtime_error.chow"), "--json")
    assert code == 2
    items = json.loads(out)
    assert items[0]["status"] == "error"
    assert items[0]["witness"]["kind"] == "usage"
    assert items[0]["witness"]["line"] == 2
    assert items[1]["output"] == "2"


def test_invariant_violation_exits_3(capsys, monkeypatch):
    from chowcalc import runner

    def broken(self, stmt):
        raise InvariantViolation("normal form drifted", {"codim": 1})

    monkeypatch.setattr(runner.Interpreter, "execute", broken)
    code, out, _ = run_cli(capsys, "run", str(FIXTURES / "plane.chow"), "--json")
    assert code == 3
    items = json.loads(out)
    assert items[0]["witness"]["kind"] == "invariant"
    assert items[0]["witness"]["codim"] == 1


def test_internal_error_exits_3(capsys, monkeypatch):
    from chowcalc import runner

    def broken(self, stmt):
        raise ZeroDivisionError("division by zero")

    monkeypatch.setattr(runner.Interpreter, "execute", broken)
    code, out, _ = run_cli(capsys, "run", str(FIXTURES / "plane.chow"))
    assert code == 3
    assert "ZeroDivisionError" in out


@pytest.mark.parametrize("argv", [
    ("verify", "no_such_suite"),
    ("verify", "cayley_gamma", "--param", "q=1"),
    ("verify", "all", "--param", "r=2"),
])
def test_verify_usage_errors_exit_2(capsys, argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 2 and out == "" and err.startswith("chowcalc: error: ")


def test_malformed_param_exits_2(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["verify", "cayley_gamma", "--param", "r"])
    assert info.value.code == 2


def test_verify_cayley_carries_sign_and_flag(capsys):
    code, out, _ = run_cli(capsys, "verify", "cayley_gamma", "--param", "r=4", "--json")
    assert code == 0
    [item] = json.loads(out)
    check_schema([item])
    assert item["sign"] == -1
    assert item["flags"] == {"equals_(-1)^(r-1)_Id": True, "equals_(-1)^r_Id": False}


def test_verify_with_params(capsys):
    code, out, _ = run_cli(capsys, "verify", "projector_orthogonality", "--param", "r=2", "--param", "m=1")
    assert code == 0
    assert out.startswith("PASS  projector_orthogonality(r=2,m=1,D=7)")


def test_text_reports_are_byte_identical(capsys):
    path = str(FIXTURES / "verify_suites.chow")
    first = run_cli(capsys, "run", path)
    second = run_cli(capsys, "run", path)
    assert first == second


def test_json_report_of_corpus(capsys):
    for path in PROGRAMS:
        code, out, _ = run_cli(capsys, "run", str(path), "--json")
        check_schema(json.loads(out))
        assert code in (0, 1, 2)


def test_fmt_prints_canonical_form(capsys, tmp_path):
    messy = tmp_path / "messy.chow"
    messy.write_text("space   X=proj 2 # plane\nprint (zeta(X))^2+1\n")
    code, out, _ = run_cli(capsys, "fmt", str(messy))
    assert code == 0
    assert out == "space X = proj 2\nprint zeta(X)^2 + 1\n"


def test_suites_listing(capsys):
    code, out, _ = run_cli(capsys, "suites")
    assert code == 0
    assert "cayley_gamma" in out and "projector_orthogonality" in out
