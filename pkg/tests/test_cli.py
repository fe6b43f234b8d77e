"""Command-line behavior: exit codes, determinism, config handling."""

import json
import subprocess
import sys

import pytest

from coarseends.cli import (
    EXIT_ERROR,
    EXIT_INCONCLUSIVE,
    EXIT_OK,
    main,
    parse_radii,
    parse_schedule,
    UsageError,
)
from coarseends.ends_tree import build_component_tree
from coarseends.groups import builtin_groups
from coarseends.report import render_report, to_jsonable, tree_level_table, tree_to_dot
from coarseends.errors import Exceeds


def run_cli(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr().out


def payload_of(out: str) -> dict:
    return json.loads(out)


def test_radii_parser_forms():
    assert parse_radii("1..5") == [1, 2, 3, 4, 5]
    assert parse_radii("1,4,9") == [1, 4, 9]
    assert parse_radii("auto") is None
    assert parse_radii(None) is None
    assert parse_radii([2, 3]) == [2, 3]
    with pytest.raises(UsageError):
        parse_radii("bogus")


def test_schedule_parser():
    assert parse_schedule("24,28,32") == (24, 28, 32)
    assert parse_schedule([4, 5, 6]) == (4, 5, 6)
    with pytest.raises(UsageError):
        parse_schedule("one,two")


def test_ends_z_definitive(capsys):
    code, out = run_cli(["ends", "--group", "Z", "--radii", "1..8"], capsys)
    assert code == EXIT_OK
    payload = payload_of(out)
    assert payload["verdict"]["label"] == "Exactly(2)"
    assert payload["verdict"]["counts"] == [2] * 8
    assert payload["ncc"]["count"] == 2
    assert payload["ncc"]["certified"] is True
    assert payload["parameters"]["seed"] == 11
    assert payload["window"]["truncated"] is False


def test_ends_auto_radii_uses_group_defaults(capsys):
    code, out = run_cli(["ends", "--group", "Z/5"], capsys)
    assert code == EXIT_OK
    payload = payload_of(out)
    assert payload["parameters"]["radii"] == list(range(1, 13))
    assert payload["verdict"]["label"] == "Exactly(0)"


def test_ends_memory_cap_inconclusive(capsys):
    code, out = run_cli(
        ["ends", "--group", "F2", "--radii", "1..6", "--memory-cap", "4"], capsys
    )
    assert code == EXIT_INCONCLUSIVE
    payload = payload_of(out)
    assert payload["verdict"]["kind"] == "inconclusive"
    assert "memory cap" in payload["verdict"]["reason"]


def test_ends_unknown_group_is_error(capsys):
    assert main(["ends", "--group", "nope"]) == EXIT_ERROR
    assert main(["ends"]) == EXIT_ERROR
    assert main(["ends", "--group", "Z", "--radii", "x..y"]) == EXIT_ERROR


def test_bad_subcommand_exits_one():
    with pytest.raises(SystemExit) as info:
        main(["no-such-command"])
    assert info.value.code == EXIT_ERROR


def test_report_bytes_identical_across_runs(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        code, _ = run_cli(
            ["ends", "--group", "Z", "--radii", "1..8", "--out", str(path)], capsys
        )
        assert code == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_coarse_cross_bytes_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        code, _ = run_cli(
            ["coarse", "--space", "cross", "--trials", "50", "--out", str(path)],
            capsys,
        )
        assert code == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    payload = json.loads(a.read_text())
    assert payload["atoms"]["count"] == 4
    assert payload["boundary_selftest"] == {"trials": 50, "violations": 0}
    assert "finite" in payload["caveat"]


def test_coarse_z_atoms_match_end_count(capsys):
    code, out = run_cli(["coarse", "--space", "Z", "--trials", "20"], capsys)
    assert code == EXIT_OK
    payload = payload_of(out)
    assert payload["atoms"]["count"] == 2
    assert all(c["accepted_at_deepest"] for c in payload["candidates"])


def test_coarse_unknown_space(capsys):
    assert main(["coarse", "--space", "moebius"]) == EXIT_ERROR


def test_glacial_subset(capsys):
    code, out = run_cli(
        ["glacial", "--fixtures", "z-positives,z-evens,z-empty"], capsys
    )
    assert code == EXIT_OK
    payload = payload_of(out)
    assert payload["summary"]["fixtures"] == 3
    assert payload["summary"]["all_agree"] is True
    assert payload["summary"]["inconclusive_cells"] == 0
    rows = {r["name"]: r for r in payload["rows"]}
    assert rows["z-positives"]["matches_expected"] is True
    assert rows["z-evens"]["grid"] is False


def test_glacial_unknown_fixture(capsys):
    assert main(["glacial", "--fixtures", "z-positives,wat"]) == EXIT_ERROR


def test_glacial_bytes_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        code, _ = run_cli(
            [
                "glacial",
                "--fixtures",
                "z-positives,z-finite-block,free-initial-a",
                "--out",
                str(path),
            ],
            capsys,
        )
        assert code == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_almost_invariant_fixture(capsys):
    code, out = run_cli(["almost-invariant", "--set", "z-evens"], capsys)
    assert code == EXIT_OK
    payload = payload_of(out)
    assert payload["verdict"]["kind"] == "NotAlmostInvariant"
    assert payload["verdict"]["witness"] in {"-1", "1"}
    assert payload["parameters"]["schedule"] == [24, 28, 32, 36, 40]
    assert len(payload["traces"]) >= 2


def test_almost_invariant_schedule_override(capsys):
    code, out = run_cli(
        ["almost-invariant", "--set", "z-positives", "--schedule", "20,24,28,32,36"],
        capsys,
    )
    assert code == EXIT_OK
    payload = payload_of(out)
    assert payload["parameters"]["schedule"] == [20, 24, 28, 32, 36]
    assert payload["verdict"]["kind"] == "AlmostInvariant"


def test_almost_invariant_bad_set_and_group(capsys):
    assert main(["almost-invariant", "--set", "wat"]) == EXIT_ERROR
    assert main(["almost-invariant"]) == EXIT_ERROR
    assert (
        main(["almost-invariant", "--set", "z-positives", "--group", "F2"])
        == EXIT_ERROR
    )


def test_almost_invariant_memory_cap_inconclusive(capsys):
    code, out = run_cli(
        ["almost-invariant", "--set", "z-positives", "--memory-cap", "10"], capsys
    )
    assert code == EXIT_INCONCLUSIVE
    assert "memory cap" in payload_of(out)["verdict"]["reason"]


def test_selftest_passes(capsys):
    code, out = run_cli(["selftest"], capsys)
    assert code == EXIT_OK
    payload = payload_of(out)
    assert payload["all_passed"] is True
    assert all(c["passed"] for c in payload["checks"])


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"group": "Z", "radii": "1..8", "seed": 7}))
    code, out = run_cli(["ends", "--config", str(cfg)], capsys)
    assert code == EXIT_OK
    payload = payload_of(out)
    assert payload["parameters"]["radii"] == list(range(1, 9))
    assert payload["parameters"]["seed"] == 7

    code, out = run_cli(["ends", "--config", str(cfg), "--radii", "1..6"], capsys)
    assert code == EXIT_OK
    assert payload_of(out)["parameters"]["radii"] == list(range(1, 7))


def test_config_errors(tmp_path, capsys):
    missing = tmp_path / "missing.json"
    assert main(["ends", "--group", "Z", "--config", str(missing)]) == EXIT_ERROR
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2]")
    assert main(["ends", "--group", "Z", "--config", str(bad)]) == EXIT_ERROR


def test_dot_written_for_small_tree(tmp_path, capsys):
    dot = tmp_path / "tree.dot"
    code, out = run_cli(
        ["ends", "--group", "Z", "--radii", "1..6", "--dot", str(dot)], capsys
    )
    assert code == EXIT_OK
    assert payload_of(out)["tree_rendering"] == "dot"
    text = dot.read_text()
    assert text.startswith("digraph")
    assert text.count("->") > 0


def test_level_table_for_large_tree(tmp_path, capsys, monkeypatch):
    monkeypatch.setattr("coarseends.cli.DOT_NODE_LIMIT", 1)
    dot = tmp_path / "tree.txt"
    code, out = run_cli(
        ["ends", "--group", "Z", "--radii", "1..6", "--dot", str(dot)], capsys
    )
    assert code == EXIT_OK
    assert payload_of(out)["tree_rendering"] == "level-table"
    lines = dot.read_text().splitlines()
    assert lines[1].startswith("cut\t")
    assert len(lines) == 2 + 6


def test_module_invocation_smoke():
    proc = subprocess.run(
        [sys.executable, "-m", "coarseends.cli", "ends", "--group", "Z", "--radii", "1..6"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdict"]["label"] == "Exactly(2)"
    proc = subprocess.run(
        [sys.executable, "-m", "coarseends", "ends", "--group", "Z/5", "--radii", "1..6"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0


def test_tree_to_dot_shape():
    tree = build_component_tree(builtin_groups()["Z"], [1, 2, 3])
    text = tree_to_dot(tree)
    assert text.startswith("digraph")
    assert text.count("shape=box") == tree.total_nodes()
    table = tree_level_table(tree)
    assert str(tree.total_nodes()) in table.splitlines()[0]


def test_to_jsonable_handles_special_values():
    assert to_jsonable({"b": 1, "a": 2}) == {"a": 2, "b": 1}
    assert to_jsonable(frozenset({3, 1, 2})) == [1, 2, 3]
    assert to_jsonable(Exceeds(9)) == {"exceeds": 9}
    assert to_jsonable((1, "x")) == [1, "x"]
    assert to_jsonable({1: "a"}) == {"1": "a"}

    class Odd:
        def __str__(self):
            return "odd"

    assert to_jsonable(Odd()) == "odd"


def test_render_report_is_stable():
    payload = {"z": [3, 1], "a": {"nested": frozenset({2, 1})}}
    first = render_report(payload)
    second = render_report(payload)
    assert first == second
    assert first.endswith("\n")
    assert json.loads(first) == {"z": [3, 1], "a": {"nested": [1, 2]}}
