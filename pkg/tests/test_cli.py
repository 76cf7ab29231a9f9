import json

import pytest

from realfano.cli import EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_OK, EXIT_USAGE, build_parser, run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_atlas_lookup_json(capsys):
    code, out, _ = call(capsys, "atlas", "lookup", "9.1", "--json")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert doc["schema"] == "realfano/1"
    assert doc["record"]["s_lower"] == doc["record"]["s_upper"] == 4


def test_atlas_decide(capsys):
    code, out, _ = call(capsys, "atlas", "decide", "1.14", "--evidence", "nonempty", "--json")
    v = json.loads(out)["verdict"]
    assert code == EXIT_OK and v["status"] == "NeedsCertificate" and v["missing"] == ["RealLine"]
    code, out, _ = call(capsys, "atlas", "decide", "1.14", "--evidence", "nonempty,line")
    assert code == EXIT_OK and out.startswith("1.14: Rational")
    code, _, err = call(capsys, "atlas", "decide", "1.14", "--evidence", "nonempty", "--negative", "nonempty")
    assert code == EXIT_INPUT and "InconsistentEvidence" in err
    code, _, err = call(capsys, "atlas", "decide", "1.14", "--evidence", "unicorn")
    assert code == EXIT_INPUT


def test_atlas_table_and_check(capsys):
    code, out, _ = call(capsys, "atlas", "table", "--s-gt", "1", "--json")
    assert code == EXIT_OK and len(json.loads(out)["rows"]) == 13
    code, out, _ = call(capsys, "atlas", "check", "--json")
    assert code == EXIT_OK and json.loads(out)["violations"] == []


def test_unknown_family(capsys):
    code, out, err = call(capsys, "atlas", "lookup", "11.1")
    assert code == EXIT_INPUT and out == "" and "unknown family" in err


def test_bounds(capsys):
    code, out, _ = call(capsys, "bounds", "--rho-c", "4", "--h12", "1", "--lambda", "2", "--json")
    doc = json.loads(out)
    assert code == EXIT_OK and (doc["bound1"], doc["bound2"], doc["best"]) == (6, 2, 2)
    code, _, _ = call(capsys, "bounds", "--rho-c", "0", "--h12", "1")
    assert code == EXIT_INPUT


def test_usage_errors(capsys):
    assert call(capsys)[0] == EXIT_USAGE
    assert call(capsys, "atlas")[0] == EXIT_USAGE
    assert call(capsys, "bounds", "--h12", "1")[0] == EXIT_USAGE
    assert call(capsys, "locus", "count", "--system", "e1", "--depths", "a,b")[0] == EXIT_USAGE
    assert call(capsys, "--help")[0] == EXIT_OK


def test_every_subcommand_has_help(capsys):
    for argv in (["pencil", "classify"], ["pencil", "random"], ["bounds"], ["locus", "count"], ["locus", "path"],
                 ["atlas", "lookup"], ["atlas", "decide"], ["atlas", "table"], ["atlas", "check"]):
        code, out, _ = call(capsys, *argv, "--help")
        assert code == EXIT_OK and len(out) > 100


def test_pencil_classify(tmp_path, capsys):
    code, out, _ = call(capsys, "pencil", "random", "--seed", "4")
    assert code == EXIT_OK
    path = tmp_path / "p.json"
    path.write_text(out)
    code, out, _ = call(capsys, "pencil", "classify", "--input", str(path), "--json")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["k"] == sum(doc["class"])


def test_pencil_random_is_seeded(capsys):
    a = call(capsys, "pencil", "random", "--seed", "9")[1]
    b = call(capsys, "pencil", "random", "--seed", "9")[1]
    c = call(capsys, "pencil", "random", "--seed", "10")[1]
    assert a == b != c


def test_degenerate_pencil_is_inconclusive(tmp_path, capsys):
    eye = [["1" if i == j else "0" for j in range(6)] for i in range(6)]
    two = [["2" if i == j else "0" for j in range(6)] for i in range(6)]
    path = tmp_path / "degenerate.json"
    path.write_text(json.dumps({"n": 6, "q0": eye, "q1": two}))
    code, out, err = call(capsys, "pencil", "classify", "--input", str(path))
    assert code == EXIT_INCONCLUSIVE and "NotGeneric" in err and out == ""


def test_missing_and_malformed_input(tmp_path, capsys):
    assert call(capsys, "pencil", "classify", "--input", str(tmp_path / "nope.json"))[0] == EXIT_INPUT
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert call(capsys, "pencil", "classify", "--input", str(bad))[0] == EXIT_INPUT
    assert call(capsys, "locus", "count", "--system", str(bad), "--depths", "2")[0] == EXIT_INPUT
    assert call(capsys, "locus", "count", "--system", "e99", "--depths", "2")[0] == EXIT_INPUT


def test_locus_count_and_export(tmp_path, capsys):
    svg = tmp_path / "e1_eps.svg"
    code, out, _ = call(capsys, "locus", "count", "--system", "e1_eps.json", "--depths", "8,9", "--json", "--export", str(svg))
    doc = json.loads(out)
    assert code == EXIT_OK and doc["component_estimate"] == 4 and doc["stable"]
    assert svg.read_text().count("<rect") > 0


def test_locus_budget_is_inconclusive(capsys):
    code, _, err = call(capsys, "locus", "count", "--system", "e2", "--depths", "6", "--budget", "1000")
    assert code == EXIT_INCONCLUSIVE and "BudgetExceeded" in err


def test_unstable_estimate_warns(capsys):
    code, out, err = call(capsys, "locus", "count", "--system", "e1_eps", "--depths", "6,8", "--json")
    assert code == EXIT_OK and not json.loads(out)["stable"] and "not stable" in err


def test_locus_path(capsys):
    code, out, _ = call(capsys, "locus", "path", "--point", "0.1,0.1,0.1", "--from-b", "--t", "0,0.5,1", "--json")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert doc["path"][-1]["point"] == [0.0] * 6
    for step in doc["path"]:
        assert all(lo <= 0 <= hi for lo, hi in step["residual_enclosures"])
    assert call(capsys, "locus", "path", "--point", "1,0,0,0,0,0", "--t", "0.5")[0] == EXIT_INPUT


def test_json_output_is_byte_deterministic(capsys):
    a = call(capsys, "atlas", "table", "--json")[1]
    b = call(capsys, "atlas", "table", "--json")[1]
    assert a == b


def test_parser_builds():
    assert build_parser().prog == "realfano"
