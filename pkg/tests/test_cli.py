"""Tests for the command-line interface."""

from __future__ import annotations

import json
import subprocess
import sys

import pytest
from click.testing import CliRunner

from prx.cli import main
from prx.semantics import BOX, DIAMOND, membership
from prx.syntax import Alphabet, parse

AB = Alphabet("01")


@pytest.fixture()
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(main, list(args))


class TestMember:
    def test_diamond_true(self, runner):
        res = invoke(runner, "member", "--alphabet", "01", "--semantics", "diamond",
                     "--expr", "(0$x)*1($x$y)*", "--word", "01110")
        assert res.exit_code == 0
        assert res.output == "true\n"

    def test_box_false(self, runner):
        res = invoke(runner, "member", "--alphabet", "01", "--semantics", "box",
                     "--expr", "(0|1)*$x$y(0|1)*", "--word", "1001")
        assert res.exit_code == 1
        assert res.output == "false\n"

    def test_empty_word_underscore(self, runner):
        res = invoke(runner, "member", "--alphabet", "01", "--expr", "_", "--word", "_")
        assert res.exit_code == 0
        assert res.output == "true\n"

    def test_json_report(self, runner):
        res = invoke(runner, "member", "--alphabet", "01", "--semantics", "diamond",
                     "--expr", "(0$x)*1($x$y)*", "--word", "01110", "--output", "json")
        assert res.exit_code == 0
        data = json.loads(res.output)
        assert set(data) == {"answer", "witness", "valuation", "stats"}
        assert data["answer"] is True
        assert data["valuation"] == {"x": "1", "y": "0"}
        assert set(data["stats"]) == {"valuations", "states"}

    def test_witness_flag_prints_valuation(self, runner):
        res = invoke(runner, "member", "--alphabet", "01", "--semantics", "diamond",
                     "--expr", "(0$x)*1($x$y)*", "--word", "01110", "--witness")
        assert res.exit_code == 0
        assert res.output == "true\nx=1,y=0\n"

    def test_parse_error_exits_2(self, runner):
        res = invoke(runner, "member", "--alphabet", "01", "--expr", "$x(", "--word", "0")
        assert res.exit_code == 2
        assert "error:" in res.output

    def test_valuation_cap_exits_2(self, runner):
        res = invoke(runner, "member", "--alphabet", "01", "--expr", "$x$y$z",
                     "--word", "000", "--max-valuations", "4")
        assert res.exit_code == 2

    def test_parallel_matches_sequential(self, runner):
        args = ("member", "--alphabet", "01", "--semantics", "box",
                "--expr", "(0|1)*$x$y(0|1)*", "--word", "10011", "--output", "json")
        seq = invoke(runner, *args)
        par = invoke(runner, *args, "--parallel", "3")
        assert seq.output == par.output
        assert seq.exit_code == par.exit_code == 0


class TestMemberFast:
    def test_box_simple(self, runner):
        res = invoke(runner, "member", "--alphabet", "01", "--semantics", "box",
                     "--expr", "$x$y", "--word", "10", "--fast")
        assert res.exit_code == 1
        assert res.output == "false\n"

    def test_box_not_simple_exits_2(self, runner):
        res = invoke(runner, "member", "--alphabet", "01", "--semantics", "box",
                     "--expr", "$x$x", "--word", "00", "--fast")
        assert res.exit_code == 2

    def test_diamond_star_free(self, runner):
        res = invoke(runner, "member", "--alphabet", "01", "--semantics", "diamond",
                     "--expr", "0$x 1", "--word", "011", "--fast")
        assert res.exit_code == 0

    def test_diamond_with_star_reports_valuation(self, runner):
        res = invoke(runner, "member", "--alphabet", "01", "--semantics", "diamond",
                     "--expr", "($x$x)*", "--word", "1111", "--fast", "--output", "json")
        assert res.exit_code == 0
        assert json.loads(res.output)["valuation"] == {"x": "1"}

    def test_agrees_with_general_path(self, runner):
        for expr, word in (("$x$y|01", "01"), ("($x|1)(0|$y)", "10"), ("(0|1)*", "0")):
            for sem in ("box", "diamond"):
                fast = invoke(runner, "member", "--alphabet", "01", "--semantics", sem,
                              "--expr", expr, "--word", word, "--fast")
                slow = invoke(runner, "member", "--alphabet", "01", "--semantics", sem,
                              "--expr", expr, "--word", word)
                assert fast.output.splitlines()[0] == slow.output.splitlines()[0]


class TestNonempty:
    def test_box_variable(self, runner):
        res = invoke(runner, "nonempty", "--alphabet", "01", "--semantics", "box",
                     "--expr", "$x")
        assert res.exit_code == 1
        assert res.output == "false\n"

    def test_witness_line(self, runner):
        res = invoke(runner, "nonempty", "--alphabet", "01", "--semantics", "box",
                     "--expr", "(0|1)*$x1$x2(0|1)*", "--witness")
        assert res.exit_code == 0
        assert res.output == "true\n00110\n"

    def test_fast_star_free(self, runner):
        res = invoke(runner, "nonempty", "--alphabet", "01", "--semantics", "box",
                     "--expr", "($x|0)($y|1)", "--fast", "--witness")
        assert res.exit_code == 0
        assert res.output == "true\n01\n"

    def test_fast_rejects_stars(self, runner):
        res = invoke(runner, "nonempty", "--alphabet", "01", "--semantics", "box",
                     "--expr", "(0|1)*", "--fast")
        assert res.exit_code == 2

    def test_fast_rejects_diamond(self, runner):
        res = invoke(runner, "nonempty", "--alphabet", "01", "--semantics", "diamond",
                     "--expr", "$x", "--fast")
        assert res.exit_code == 2


class TestUniversalContainsIntersect:
    def test_universal_diamond(self, runner):
        res = invoke(runner, "universal", "--alphabet", "01", "--semantics", "diamond",
                     "--expr", "($x(0|1)*)|_")
        assert res.exit_code == 0

    def test_universal_counterexample_epsilon(self, runner):
        res = invoke(runner, "universal", "--alphabet", "01", "--semantics", "box",
                     "--expr", "$x(0|1)*", "--witness")
        assert res.exit_code == 1
        lines = res.output.splitlines()
        assert lines[0] == "false"
        assert lines[1] == "_"

    def test_contains_counterexample(self, runner):
        res = invoke(runner, "contains", "--alphabet", "01", "--semantics", "diamond",
                     "--lhs", "$x$y", "--rhs", "$x$x", "--witness")
        assert res.exit_code == 1
        assert res.output == "false\n01\n"

    def test_contains_empty_lhs(self, runner):
        res = invoke(runner, "contains", "--alphabet", "01", "--semantics", "box",
                     "--lhs", "$x$x", "--rhs", "@")
        assert res.exit_code == 0

    def test_intersect(self, runner):
        res = invoke(runner, "intersect", "--alphabet", "01", "--semantics", "box",
                     "--expr", "(0|1)*$x1$x2(0|1)*", "--regular", "1*")
        assert res.exit_code == 1
        res = invoke(runner, "intersect", "--alphabet", "01", "--semantics", "diamond",
                     "--expr", "$x", "--regular", "1")
        assert res.exit_code == 0

    def test_intersect_rejects_variables_in_regular(self, runner):
        res = invoke(runner, "intersect", "--alphabet", "01", "--expr", "$x",
                     "--regular", "$y")
        assert res.exit_code == 2


class TestDomains:
    def test_member_box_infinite_domain(self, runner, tmp_path):
        spec = tmp_path / "domains.json"
        spec.write_text('{"x": "0*"}')
        res = invoke(runner, "member", "--alphabet", "01", "--semantics", "box",
                     "--expr", "$x 1", "--word", "01", "--domains", str(spec))
        assert res.exit_code == 1

    def test_nonempty_epsilon_witness(self, runner, tmp_path):
        spec = tmp_path / "domains.json"
        spec.write_text('{"x": "0*"}')
        res = invoke(runner, "nonempty", "--alphabet", "01", "--semantics", "box",
                     "--expr", "($x|_)1*", "--domains", str(spec), "--witness")
        assert res.exit_code == 0
        assert res.output == "true\n_\n"

    def test_diamond_infinite_domain_exits_2(self, runner, tmp_path):
        spec = tmp_path / "domains.json"
        spec.write_text('{"x": "0*"}')
        res = invoke(runner, "nonempty", "--alphabet", "01", "--semantics", "diamond",
                     "--expr", "$x", "--domains", str(spec))
        assert res.exit_code == 2

    def test_bad_domains_json_exits_2(self, runner, tmp_path):
        spec = tmp_path / "domains.json"
        spec.write_text('["not", "a", "mapping"]')
        res = invoke(runner, "nonempty", "--alphabet", "01", "--expr", "$x",
                     "--domains", str(spec))
        assert res.exit_code == 2

    def test_fast_with_domains_exits_2(self, runner, tmp_path):
        spec = tmp_path / "domains.json"
        spec.write_text('{"x": "0|1"}')
        res = invoke(runner, "member", "--alphabet", "01", "--expr", "$x",
                     "--word", "0", "--domains", str(spec), "--fast")
        assert res.exit_code == 2


class TestBuildNfa:
    def test_dot_output(self, runner):
        res = invoke(runner, "build-nfa", "--alphabet", "01", "--semantics", "diamond",
                     "--expr", "$x")
        assert res.exit_code == 0
        assert res.output.startswith("digraph")
        assert "doublecircle" in res.output

    def test_json_output(self, runner):
        res = invoke(runner, "build-nfa", "--alphabet", "01", "--semantics", "box",
                     "--expr", "(0|1)*$x$y(0|1)*", "--format", "json")
        assert res.exit_code == 0
        data = json.loads(res.output)
        assert set(data) == {"states", "initial", "finals", "transitions"}

    def test_out_file(self, runner, tmp_path):
        target = tmp_path / "nfa.dot"
        res = invoke(runner, "build-nfa", "--alphabet", "01", "--expr", "0|1",
                     "--out", str(target))
        assert res.exit_code == 0
        assert target.read_text().startswith("digraph")

    def test_state_cap_exits_2(self, runner):
        res = invoke(runner, "build-nfa", "--alphabet", "01", "--semantics", "box",
                     "--expr", "(0|1)*$x$y(0|1)*", "--max-states", "4")
        assert res.exit_code == 2

    def test_domains_construction(self, runner, tmp_path):
        spec = tmp_path / "domains.json"
        spec.write_text('{"x": "00|01"}')
        res = invoke(runner, "build-nfa", "--alphabet", "01", "--semantics", "diamond",
                     "--expr", "$x", "--domains", str(spec), "--format", "json")
        assert res.exit_code == 0
        data = json.loads(res.output)
        assert any(t[1] == {"letter": "0"} for t in data["transitions"])


class TestFamilyAndFooling:
    def test_family_output(self, runner):
        res = invoke(runner, "family", "--kind", "box-subword", "--n", "1")
        assert res.output == "(0|1)*$x1(0|1)*\n"
        res = invoke(runner, "family", "--kind", "diamond-power", "--n", "2")
        assert res.output == "($x1$x2)*\n"
        res = invoke(runner, "family", "--kind", "box-doubleexp", "--n", "1")
        assert res.output == "((0|1)(0|1))*$x1$x2((0|1)(0|1))*\n"

    def test_fooling_generate(self, runner):
        res = invoke(runner, "fooling", "generate", "--kind", "diamond", "--n", "1")
        assert res.exit_code == 0
        assert res.output == "0\t0\n1\t1\n"

    def test_fooling_generate_to_file(self, runner, tmp_path):
        target = tmp_path / "pairs.tsv"
        res = invoke(runner, "fooling", "generate", "--kind", "box", "--n", "1",
                     "--out", str(target))
        assert res.exit_code == 0
        assert len(target.read_text().splitlines()) == 6

    def test_fooling_verify(self, runner):
        res = invoke(runner, "fooling", "verify", "--kind", "diamond", "--n", "2")
        assert res.exit_code == 0
        assert "at least 4 states" in res.output

    def test_fooling_verify_rejects_wrong_pairs(self, runner, tmp_path):
        bad = tmp_path / "bad.tsv"
        bad.write_text("00\t00\n00\t11\n")
        res = invoke(runner, "fooling", "verify", "--kind", "diamond", "--n", "2",
                     "--pairs", str(bad))
        assert res.exit_code == 1
        assert "not verified" in res.output

    def test_fooling_box_verify(self, runner):
        res = invoke(runner, "fooling", "verify", "--kind", "box", "--n", "1")
        assert res.exit_code == 0
        assert "at least 6 states" in res.output


class TestDeterminismAndAgreement:
    def test_identical_invocations_identical_bytes(self, runner):
        args = ("universal", "--alphabet", "01", "--semantics", "box",
                "--expr", "($x|_)(0|1)*", "--witness", "--output", "json")
        first = invoke(runner, *args)
        second = invoke(runner, *args)
        assert first.output == second.output

    def test_cli_matches_library(self, runner):
        cases = [("box", "(0$x)*1($x$y)*", "1"), ("diamond", "$x$y", "01"),
                 ("box", "$x|0", "0"), ("diamond", "(00)*", "000")]
        for sem, expr, word in cases:
            res = invoke(runner, "member", "--alphabet", "01", "--semantics", sem,
                         "--expr", expr, "--word", word)
            want = membership(parse(expr, AB), word, AB,
                              BOX if sem == "box" else DIAMOND).answer
            assert (res.exit_code == 0) == want


def test_console_script_smoke():
    proc = subprocess.run(
        [sys.executable, "-m", "prx.cli", "member", "--alphabet", "01",
         "--semantics", "diamond", "--expr", "(0$x)*1($x$y)*", "--word", "01110"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == "true\n"
