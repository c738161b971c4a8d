import json
import subprocess
import sys

import pytest
from click.testing import CliRunner

from classical_skein.cli import EXIT_FAILED, EXIT_INPUT, EXIT_RESOURCE, EXIT_UNSUPPORTED, main

SOLID = "{n:2, generators:1, markings:1}"


def run(*args):
    result = CliRunner().invoke(main, list(args))
    return result.exit_code, result.output


def test_normalize_turnback_prints_minus_one():
    code, out = run("normalize", "--manifold", SOLID, "--web", "arc(e0->e0; w=; s=(1,2))")
    assert code == 0
    assert out == "-1\n"


def test_normalize_structured():
    code, out = run("normalize", "--manifold", SOLID, "--web", "knot(w=g1)", "--format", "structured")
    assert code == 0
    data = json.loads(out)
    assert data["normal_form"] == "g1[1][1] + g1[2][2]"
    assert data["web"] == "knot(w=g1)"


def test_files_are_accepted(tmp_path):
    m = tmp_path / "torus.mfd"
    m.write_text("# solid torus\n" + SOLID + "\n")
    w = tmp_path / "web.txt"
    w.write_text("knot(w=g1),\nknot(w=g1)\n")
    code, out = run("normalize", "--manifold", str(m), "--web", str(w))
    assert code == 0
    assert out.startswith("g1[1][1]^2")


def test_check_all_green():
    code, out = run("check", "--manifold", SOLID)
    assert code == 0
    lines = out.strip().splitlines()
    assert all(line.startswith("PASS") for line in lines)
    assert any("route consistency" in line for line in lines)


def test_nilpotent_scratch_ring():
    code, out = run("nilpotent", "--poly", "x", "--ideal", "x^2")
    assert (code, out) == (0, "true\n")
    code, out = run("nilpotent", "--poly", "x + 1", "--ideal", "x^2")
    assert (code, out) == (0, "false\n")


def test_nilpotent_in_manifold_ring():
    code, out = run("nilpotent", "--manifold", '{n:2, generators:1, relators:["g1*g1"]}', "--poly", "g1[1][2]")
    assert (code, out) == (0, "true\n")


def test_eval_and_split():
    code, out = run("eval", "--manifold", SOLID, "--web", "sink((w= -> e0:1),(w=g1 -> e0:2))", "--trials", "3")
    assert code == 0 and out.count("trial") == 3 and "PASS" in out
    code, out = run("split", "--manifold", SOLID, "--web", "knot(w=g1*g1)", "--trials", "3")
    assert code == 0
    assert "cut manifold: {n:2, generators:0, markings:3}" in out
    assert "PASS" in out


def test_eval_with_given_representation(tmp_path):
    rep = tmp_path / "rep.json"
    rep.write_text(json.dumps({"g1": [[[1, 0], [1, 0]], [[0, 0], [1, 0]]]}))
    code, out = run("eval", "--manifold", SOLID, "--web", "arc(e0->e0; w=g1; s=(1,1))", "--rep", str(rep))
    assert code == 0
    assert out.startswith("trial given: -1+0j")


def test_parse_error_exit_code_and_location():
    result = CliRunner().invoke(main, ["normalize", "--manifold", SOLID, "--web", "arc(e0->e0; w=; s=(1,3))"])
    assert result.exit_code == EXIT_INPUT
    assert "1:22" in result.output


def test_resource_exit_code():
    code, out = run(
        "normalize", "--manifold", '{n:2, generators:1, relators:["g1^31"]}', "--web", "knot(w=g1)", "--budget", "2"
    )
    assert code == EXIT_RESOURCE
    assert "budget" in out


def test_unsupported_exit_code():
    code, _ = run("split", "--manifold", '{n:2, generators:1, relators:["g1*g1"]}', "--web", "knot(w=g1)")
    assert code == EXIT_UNSUPPORTED


def test_failed_check_exit_code(tmp_path):
    # a representation violating the constraints is rejected as input
    rep = tmp_path / "rep.json"
    rep.write_text(json.dumps({"g1": [[[2, 0], [0, 0]], [[0, 0], [2, 0]]]}))
    code, _ = run("eval", "--manifold", SOLID, "--web", "knot(w=g1)", "--rep", str(rep))
    assert code == EXIT_INPUT
    # an absurd tolerance makes the deviation check fail
    code, out = run("eval", "--manifold", SOLID, "--web", "knot(w=g1*g1*g1)", "--trials", "2", "--tol", "-1")
    assert code == EXIT_FAILED and "FAIL" in out


def test_missing_option_is_usage_error():
    code, _ = run("normalize", "--web", "knot(w=)")
    assert code == 2


@pytest.mark.parametrize("fmt", ["text", "structured"])
def test_output_is_byte_identical_across_processes(fmt):
    args = [sys.executable, "-m", "classical_skein", "eval", "--manifold", "{n:3, generators:2, markings:2}",
            "--web", "knot(w=g1*g2^-1), arc(e1->e0; w=g2; s=(1,3))", "--seed", "5", "--trials", "4", "--format", fmt]
    first = subprocess.run(args, capture_output=True, check=True).stdout
    second = subprocess.run(args, capture_output=True, check=True).stdout
    assert first == second and first
