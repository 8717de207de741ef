import io
import json
import subprocess
import sys

import pytest
from programs import PQR, VISIT

from slp.cli import EXIT_CODES, RunConfig, format_table, main, repl, run

SMALL = PQR + "#monitor not p.\n? not p.\n? q.\n"

DEFIX_TABLES = """\
% DefFix
| not p | not q | not r |
|-------|-------|-------|
|   1   |   1   |   1   |
|   1   |   0   |   0   |
% objective parts
| p | q | r |
|---|---|---|
| 0 | 0 | 0 |
| 0 | 1 | 1 |
"""


@pytest.fixture
def write(tmp_path):
    def _write(text, name="prog.slp"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return _write


def cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_solve_prints_tables_and_answers(write, capsys):
    code, out, err = cli(capsys, "solve", write(SMALL), "--dump-defix")
    assert code == 0 and err == ""
    assert out == DEFIX_TABLES + "? not p.\nyes\n? q.\nno\n"


def test_defix_printed_when_nothing_else(write, capsys):
    code, out, _ = cli(capsys, "solve", write(PQR), "--monitor", "not p")
    assert code == 0
    assert out == DEFIX_TABLES


def test_query_subcommand(write, capsys):
    code, out, _ = cli(capsys, "query", write(VISIT), "not bankrupt, happy")
    assert code == 0
    assert out.splitlines() == ["? not bankrupt, happy.", "yes"]


def test_nonground_bindings(write, capsys):
    code, out, _ = cli(capsys, "query", write("p(a). p(b). q(b) <- not r."), "p(X), not q(X)")
    assert out.splitlines() == ["? p(X), not q(X).", "X = a"]


def test_possible_answers(write, capsys):
    path = write("p(a) | p(b).")
    _, out, _ = cli(capsys, "query", path, "p(X)")
    assert out.splitlines() == ["? p(X).", "no"]
    _, out, _ = cli(capsys, "query", path, "p(X)", "--possible")
    assert "possible: X = a | X = b" in out


@pytest.mark.parametrize(
    "text, status",
    [
        ("p. q <- p.", "ok"),
        ("p. <- p.", "inconsistent-program"),
        ("p <- not q. <- p.", "inconsistent-completion"),
        ("p <- .", "syntax-error"),
        ("p(X) <- not q(X).", "syntax-error"),
    ],
)
def test_exit_codes(write, capsys, text, status):
    code, out, err = cli(capsys, "solve", write(text))
    assert code == EXIT_CODES[status]
    if status not in ("ok", "inconsistent-completion"):
        assert f"status: {status}" in out
        assert err.startswith("slp: ")


def test_guard_exit_code(write, capsys):
    text = " ".join(f"a{i} <- not b{i}. b{i} <- not a{i}." for i in range(4))
    code, out, err = cli(capsys, "solve", write(text), "--max-critneg", "3")
    assert code == EXIT_CODES["guard-exceeded"] == 3
    assert "status: guard-exceeded" in out


def test_exit_code_values():
    assert EXIT_CODES == {
        "ok": 0,
        "inconsistent-program": 1,
        "inconsistent-completion": 1,
        "syntax-error": 2,
        "guard-exceeded": 3,
    }


def test_missing_file(capsys):
    code, _, err = cli(capsys, "solve", "/nonexistent/prog.slp")
    assert code == EXIT_CODES["syntax-error"]
    assert err.startswith("slp: ")


def test_json_output(write, capsys):
    code, out, _ = cli(capsys, "solve", write(SMALL), "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert set(data) == {"status", "defix", "residual", "answers", "timings"}
    assert data["status"] == "ok"
    assert data["defix"]["columns"] == ["not p", "not q", "not r"]
    assert data["defix"]["rows"] == [[1, 1, 1], [1, 0, 0]]
    assert data["defix"]["objective_rows"] == [[0, 0, 0], [0, 1, 1]]
    assert data["residual"] == ["p | q <- not r.", "p | r <- not r.", "q <- not q.", "r <- not q."]
    assert [a["query"] for a in data["answers"]] == ["? not p.", "? q."]
    assert data["answers"][0]["definite"] == [{}]
    assert data["answers"][1]["definite"] == []
    assert set(data["timings"]) >= {"ground", "reduce", "solve"}


def test_json_is_deterministic_apart_from_timings(write, capsys):
    path = write(VISIT + "? happy. ? not visit_europe.")
    outs = []
    for _ in range(2):
        _, out, _ = cli(capsys, "solve", path, "--format", "json")
        data = json.loads(out)
        data.pop("timings")
        outs.append(data)
    assert outs[0] == outs[1]


def test_text_output_is_byte_identical(write):
    path = write(VISIT + "? happy. ? not visit_europe. ? bankrupt.")
    runs = [
        subprocess.run(
            [sys.executable, "-m", "slp.cli", "solve", path, "--dump-ground", "--dump-residual", "--dump-defix"],
            capture_output=True,
        ).stdout
        for _ in range(2)
    ]
    assert runs[0] == runs[1] and runs[0]


def test_dumps(write, capsys):
    _, out, _ = cli(capsys, "solve", write(PQR), "--dump-ground", "--dump-residual")
    lines = out.splitlines()
    assert lines[0] == "% ground"
    assert "% residual" in lines
    assert "q <- not q." in lines


def test_oracle_goes_to_stderr(write, capsys):
    code, out, err = cli(capsys, "solve", write(SMALL), "--oracle", "--format", "json")
    json.loads(out)
    assert code == 0
    assert "oracle" in err


def test_format_table():
    assert format_table(["a", "bb"], [(1, 0)]) == ["| a | bb |", "|---|----|", "| 1 | 0  |"]
    assert format_table([], [(), ()])[0].startswith("(no columns)")


def test_run_config_validates():
    with pytest.raises(ValueError):
        RunConfig(format="xml")
    with pytest.raises(ValueError):
        RunConfig(max_critneg=0)


def test_run_with_text():
    report = run(RunConfig(queries=["happy"]), text=VISIT)
    assert report.status == "ok"
    assert report.lines[-2:] == ["? happy.", "yes"]


def test_repl(write, capsys):
    stdin = io.StringIO("happy\nnot visit_europe\n:defix\np(X\n:quit\nhappy\n")
    out = io.StringIO()
    assert repl(RunConfig(path=write(VISIT)), stdin, out) == 0
    lines = out.getvalue().splitlines()
    assert lines[0] == "yes" and lines[1] == "no"
    assert "% DefFix" in lines
    assert lines[-1].startswith("error:")


def test_repl_reports_load_errors(write):
    assert repl(RunConfig(path=write("p <- .")), io.StringIO(""), io.StringIO()) == 2
