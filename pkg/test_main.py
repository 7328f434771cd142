#!/usr/bin/env python3
"""
Tests for the command-line front end: JSON lines on stdout and exit codes.
"""
import json

import pytest

from algebra import boolean_square, chain, eval_core
from duality import dual_algebra
from formula import build_corpus, parse, to_text
from main import EXIT_INPUT, EXIT_OK, EXIT_REFUTED, Workbench, main, render
from team import Frame


CHAIN_MODEL = {"worlds": ["w1", "w2"], "order": [["w1", "w2"]], "valuation": {"w2": ["p"]}}


@pytest.fixture
def run(tmp_path, capsys):
    """Run the CLI without a config file; return (exit code, stdout lines)."""
    config = str(tmp_path / "missing.json")

    def invoke(*argv):
        code = main(["--config", config, *argv])
        out = capsys.readouterr().out
        return code, out.splitlines()

    return invoke


@pytest.fixture
def write_json(tmp_path):
    def write(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return str(path)

    return write


def test_parse_verb(run):
    code, lines = run("parse", "--formula", "p -> (q \\/ r)")
    assert code == EXIT_OK
    assert lines == [render({"formula": "p -> q \\/ r", "atoms": ["p", "q", "r"], "size": 5,
                             "standard": False})]


def test_dnf_verb(run):
    code, lines = run("dnf", "--formula", "p -> q \\/ r")
    assert code == EXIT_OK
    assert json.loads(lines[0]) == {"dnf": ["p -> q", "p -> r"]}


def test_syntax_error_exits_with_input_code(run):
    code, lines = run("parse", "--formula", "p + q")
    assert code == EXIT_INPUT
    assert lines == []


def test_missing_formula(run):
    assert run("parse")[0] == EXIT_INPUT


def test_nested_formulas(run):
    deep = "(" * 14 + "p" + " -> q)" * 14
    code, lines = run("parse", "--formula", deep)
    assert code == EXIT_OK
    assert json.loads(lines[0])["size"] == 29
    assert run("parse", "--formula", "(" * 3000 + "p" + ")" * 3000) == (EXIT_INPUT, [])


def test_unknown_verb_is_a_usage_error(tmp_path):
    with pytest.raises(SystemExit) as info:
        main(["--config", str(tmp_path / "missing.json"), "prove"])
    assert info.value.code == 2


def test_eval_on_model(run, write_json):
    model = write_json("model.json", CHAIN_MODEL)
    code, lines = run("eval", "--formula", "~~p -> p", "--model", model)
    assert (code, lines) == (EXIT_OK, [render({"supports": False})])
    code, lines = run("eval", "--formula", "~~p -> p", "--model", model, "--classical")
    assert lines == [render({"supports": True})]
    code, lines = run("eval", "--formula", "p", "--model", model, "--team", "w2")
    assert lines == [render({"supports": True})]


def test_eval_unknown_world(run, write_json):
    model = write_json("model.json", CHAIN_MODEL)
    assert run("eval", "--formula", "p", "--model", model, "--team", "w7")[0] == EXIT_INPUT


def test_eval_on_algebra(run, write_json):
    square = boolean_square()
    path = write_json("square.json", square.to_dict())
    code, lines = run("eval", "--formula", "p \\/ ~p", "--algebra", path, "--valuation", "p=a")
    expected = eval_core(square, {"p": square.index("a")}, parse("p \\/ ~p"))
    assert code == EXIT_OK
    assert lines == [render({"value": square.label(expected)})]
    assert run("eval", "--formula", "p", "--algebra", path, "--valuation", "p")[0] == EXIT_INPUT


def test_valid_team_verb(run, write_json):
    model = write_json("model.json", CHAIN_MODEL)
    assert run("valid-team", "--formula", "~~p -> p", "--model", model) == (
        EXIT_REFUTED, [render({"valid": False})])
    frame = write_json("frame.json", Frame.discrete(2).to_dict())
    assert run("valid-team", "--formula", "~~p -> p", "--frame", frame) == (
        EXIT_OK, [render({"valid": True})])


def test_valid_alg_verb(run, write_json):
    c3 = write_json("chain3.json", chain(["0", "s", "1"]).to_dict())
    code, lines = run("valid-alg", "--formula", "~~p -> p", "--algebra", c3)
    assert code == EXIT_REFUTED
    assert json.loads(lines[0]) == {"valid": False, "refuting_valuation": {"p": "s"}}
    code, lines = run("valid-alg", "--formula", "p -> p", "--algebra", c3)
    assert (code, json.loads(lines[0])) == (EXIT_OK, {"valid": True, "refuting_valuation": None})


def test_countermodel_verb(run):
    code, lines = run("countermodel", "--formula", "~~p -> p", "--max-worlds", "2")
    assert code == EXIT_REFUTED
    assert lines == [render({"countermodel": CHAIN_MODEL, "team": ["w1", "w2"]})]
    code, lines = run("countermodel", "--formula", "p -> p", "--max-worlds", "2", "--no-dedup-iso")
    assert (code, lines) == (EXIT_OK, [render({"countermodel": None, "valid_up_to": 2})])


def test_countermodel_uses_configured_bound(tmp_path, capsys, write_json):
    config = write_json("config.json", {"search": {"max_worlds": 1}})
    code = main(["--config", config, "countermodel", "--formula", "~~p -> p"])
    assert code == EXIT_OK
    assert json.loads(capsys.readouterr().out) == {"countermodel": None, "valid_up_to": 1}


def test_check_algebra_verb(run, write_json):
    path = write_json("square.json", boolean_square().to_dict())
    code, lines = run("check-algebra", "--algebra", path)
    assert code == EXIT_OK
    assert json.loads(lines[0]) == {"check": {"ok": True}, "core_generated": True,
                                    "well_connected": False}
    code, lines = run("check-algebra", "--algebra", path, "--flavour", "dep")
    assert code == EXIT_REFUTED
    assert json.loads(lines[0])["check"]["law"] == "tensor-missing"


def test_dualize_and_back(run, write_json):
    frame = write_json("frame.json", Frame.chain(2).to_dict())
    code, lines = run("dualize", "--frame", frame)
    assert code == EXIT_OK
    assert lines == [render(dual_algebra(Frame.chain(2)).to_dict())]
    algebra = write_json("dual.json", json.loads(lines[0]))
    code, lines = run("dualize-back", "--algebra", algebra)
    assert code == EXIT_OK
    assert json.loads(lines[0]) == {"worlds": ["w1", "w2"], "order": [["w2", "w1"]]}


def test_dualize_back_rejects_non_fcgw(run, write_json):
    path = write_json("square.json", boolean_square().to_dict())
    assert run("dualize-back", "--algebra", path) == (EXIT_INPUT, [])


def test_cross_check_verb(run, write_json):
    model = write_json("model.json", CHAIN_MODEL)
    code, lines = run("cross-check", "--formula", "~~p -> p", "--model", model)
    assert code == EXIT_OK
    assert lines == [render({"team": False, "algebra": False, "agree": True})]


def test_reduce_verb(run, write_json):
    path = write_json("chain3.json", chain(["0", "s", "1"]).to_dict())
    code, lines = run("reduce", "--formula", "~~p -> p", "--algebra", path)
    assert code == EXIT_OK
    assert json.loads(lines[0])["elements"] == ["0", "s", "1"]
    assert run("reduce", "--formula", "p -> p", "--algebra", path)[0] == EXIT_INPUT


def test_reduce_picks_dependence_flavour_for_tensor(run, write_json):
    path = write_json("chain3.json", chain(["0", "s", "1"], tensor=True).to_dict())
    code, lines = run("reduce", "--formula", "p (*) q -> p", "--algebra", path)
    assert code == EXIT_OK
    reduced = json.loads(lines[0])
    assert reduced["elements"] == ["0", "s"]
    assert "tensor" in reduced
    assert run("reduce", "--formula", "p (*) q -> p", "--algebra", path, "--flavour", "inq")[0] == EXIT_INPUT


def test_axiom_verb(run):
    code, lines = run("axiom", "--schema", "A10", "--args", "p", "q", "r")
    assert (code, lines) == (EXIT_OK, [render({"axiom": "(p -> q \\/ r) -> (p -> q) \\/ (p -> r)"})])
    assert run("axiom", "--schema", "A10", "--args", "p \\/ q", "q", "r")[0] == EXIT_INPUT


def test_corpus_verb(run):
    code, lines = run("corpus")
    expected = [render({"formula": to_text(phi)}) for phi in build_corpus(("p", "q"), 110, 3, 7)]
    assert code == EXIT_OK
    assert lines == expected
    assert run("corpus", "--seed", "7")[1] == expected


def test_workbench_config_merge(tmp_path, write_json):
    path = write_json("config.json", {"corpus": {"seed": 3}, "logging": {"log_level": "DEBUG"}})
    workbench = Workbench(path)
    assert workbench.config["corpus"]["seed"] == 3
    assert workbench.config["corpus"]["atoms"] == ["p", "q"]
    assert workbench.config["search"]["max_worlds"] == 3
    defaults = Workbench(str(tmp_path / "missing.json"))
    assert defaults.config["corpus"]["seed"] == 7


def test_broken_config_file(tmp_path):
    path = tmp_path / "config.json"
    path.write_text("{not json", encoding="utf-8")
    assert main(["--config", str(path), "parse", "--formula", "p"]) == EXIT_INPUT


def test_model_file_errors(run, write_json):
    broken = write_json("broken.json", {"worlds": ["w1", "w2"], "order": [["w1", "w2"]],
                                        "valuation": {"w1": ["p"]}})
    assert run("eval", "--formula", "p", "--model", broken)[0] == EXIT_INPUT
    assert run("eval", "--formula", "p", "--model", "does/not/exist.json")[0] == EXIT_INPUT
