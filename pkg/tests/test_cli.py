import json

import pytest

from widthcert.cli import EXIT_MATH_FAIL, EXIT_OK, EXIT_USAGE, main
from widthcert.polyfile import (
    PolytopeFileError,
    format_polytope_file,
    parse_polytope_file,
    parse_scalar,
)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


MODEL_FILE = """
# the extremal tetrahedron and its lattice
vertices:
2 + 1*sqrt2, 1*sqrt2, 2 + 1*sqrt2
-1*sqrt2, 2 + 1*sqrt2, -2 - 1*sqrt2
-2 - 1*sqrt2, -1*sqrt2, 2 + 1*sqrt2
1*sqrt2, -2 - 1*sqrt2, -2 - 1*sqrt2
lattice origin:
-1, -1, -1
lattice basis:
0, 2, 2
2, 0, 2
2, 2, 0
"""

CUBE_FILE = """
vertices:
0, 0, 0
1, 0, 0
0, 1, 0
0, 0, 1
1, 1, 0
1, 0, 1
0, 1, 1
1, 1, 1
"""


# -- scalar and file parsing -------------------------------------------------------


def test_parse_scalar_forms():
    from fractions import Fraction as Fr

    from widthcert.exactnum import QSqrt2

    assert parse_scalar("3/4 + 1/2*sqrt2") == QSqrt2(Fr(3, 4), Fr(1, 2))
    assert parse_scalar("-2") == QSqrt2(-2)
    assert parse_scalar("sqrt2") == QSqrt2(0, 1)
    assert parse_scalar("-sqrt2") == QSqrt2(0, -1)
    assert parse_scalar("2 - 1*sqrt2") == QSqrt2(2, -1)


def test_parse_scalar_rejects_floats():
    with pytest.raises(PolytopeFileError):
        parse_scalar("0.5")
    with pytest.raises(PolytopeFileError):
        parse_scalar("1e-3")


def test_polytope_file_round_trip():
    polytope, lattice = parse_polytope_file(MODEL_FILE)
    text = format_polytope_file(polytope, lattice)
    polytope2, lattice2 = parse_polytope_file(text)
    assert polytope.vertices == polytope2.vertices
    assert lattice.origin == lattice2.origin
    assert lattice.basis == lattice2.basis


def test_polytope_file_reports_line_numbers():
    bad = "vertices:\n1, 2\n"
    with pytest.raises(PolytopeFileError) as err:
        parse_polytope_file(bad)
    assert "line 2" in str(err.value)


# -- subcommands ------------------------------------------------------------------------


def test_verify_delta_text(capsys):
    code, out, err = run_cli(capsys, "verify-delta")
    assert code == EXIT_OK
    assert "width: 2 + 1*sqrt2" in out
    assert "minimizers: 7" in out
    assert "hollow: True" in out
    assert out.count("interior") >= 4


def test_verify_delta_json_round_trips(capsys):
    code, out, _ = run_cli(capsys, "--format", "json", "verify-delta")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["width"] == "2 + 1*sqrt2"
    assert data["minimizer_count"] == 7
    assert data["hollow"] is True
    assert len(data["facet_points"]) == 4


def test_certify_local_default(capsys):
    code, out, _ = run_cli(capsys, "certify-local", "--c", "39/4")
    assert code == EXIT_OK
    assert "verdict: pass" in out
    assert "gradient rank" in out


def test_certify_local_fails_above_definiteness_range(capsys):
    code, out, _ = run_cli(capsys, "certify-local", "--c", "14")
    assert code == EXIT_MATH_FAIL
    assert "verdict: fail" in out


def test_certify_local_rejects_zero_c(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["certify-local", "--c", "0"])
    assert exc.value.code == EXIT_USAGE


def test_certify_neighborhood_row(capsys):
    code, out, _ = run_cli(capsys, "certify-neighborhood", "--c", "39/4")
    assert code == EXIT_OK
    assert "0.10355" in out
    assert "0.02614" in out
    assert "0.04423" in out
    assert "skipped (long-running)" in out
    assert "0.01307" in out


def test_certify_neighborhood_decimal_c(capsys):
    code, out, _ = run_cli(capsys, "certify-neighborhood", "--c", "9.75")
    assert code == EXIT_OK
    assert "0.02614" in out


def test_certify_neighborhood_sweep(capsys):
    code, out, _ = run_cli(capsys, "--format", "json", "certify-neighborhood",
                           "--sweep", "7,8,9")
    assert code == EXIT_OK
    data = json.loads(out)
    displays = [row["bounds"]["ii"]["display"] for row in data["rows"]]
    assert displays == ["0.01877", "0.02145", "0.02413"]
    for row in data["rows"]:
        assert row["bounds"]["i"]["display"] == "0.10355"
        assert row["bounds"]["iii"]["display"] == "0.04423"


def test_certify_neighborhood_smoke_hessian(capsys):
    code, out, _ = run_cli(capsys, "certify-neighborhood", "--c", "39/4",
                           "--smoke-hessian")
    assert code == EXIT_OK
    assert "NON-CERTIFYING" in out


def test_width_subcommand_on_model_file(tmp_path, capsys):
    path = tmp_path / "model.poly"
    path.write_text(MODEL_FILE)
    code, out, _ = run_cli(capsys, "width", "--polytope", str(path))
    assert code == EXIT_OK
    assert "width: 2 + 1*sqrt2" in out
    assert "minimizers: 7" in out


def test_width_subcommand_on_cube(tmp_path, capsys):
    path = tmp_path / "cube.poly"
    path.write_text(CUBE_FILE)
    code, out, _ = run_cli(capsys, "width", "--polytope", str(path))
    assert code == EXIT_OK
    assert "width: 1" in out
    assert "minimizers: 3" in out


def test_width_subcommand_rejects_floats(tmp_path, capsys):
    path = tmp_path / "bad.poly"
    path.write_text("vertices:\n0.5, 0, 0\n1, 0, 0\n0, 1, 0\n0, 0, 1\n")
    code, out, err = run_cli(capsys, "width", "--polytope", str(path))
    assert code == EXIT_USAGE
    assert "line 2" in err


def test_width_subcommand_missing_file(capsys):
    code, _, err = run_cli(capsys, "width", "--polytope", "/nonexistent.poly")
    assert code == EXIT_USAGE


def test_width_matches_oracle_on_random_tetrahedron(tmp_path, capsys):
    import random

    from test_widthlab import random_tetrahedron_oracle_check

    assert random_tetrahedron_oracle_check(random.Random(77))


def test_global_bounds(capsys):
    code, out, _ = run_cli(capsys, "global-bounds")
    assert code == EXIT_OK
    assert "verdict: pass" in out
    assert "lam1_floor" in out
    assert out.count("certified") >= 6


def test_global_bounds_precision_flag(capsys):
    code1, out1, _ = run_cli(capsys, "--format", "json", "global-bounds")
    code2, out2, _ = run_cli(capsys, "--format", "json", "global-bounds",
                             "--precision", "1/1000000000000")
    assert code1 == code2 == EXIT_OK
    verdicts1 = [r["verdict"] for r in json.loads(out1)["reports"]]
    verdicts2 = [r["verdict"] for r in json.loads(out2)["reports"]]
    assert verdicts1 == verdicts2


# -- determinism ------------------------------------------------------------------------------


@pytest.mark.parametrize("argv", [
    ("--format", "kv", "verify-delta"),
    ("--format", "kv", "certify-local", "--c", "39/4"),
    ("--format", "kv", "certify-neighborhood", "--c", "39/4"),
    ("--format", "json", "global-bounds"),
])
def test_machine_output_is_deterministic(argv, capsys):
    code1, out1, _ = run_cli(capsys, *argv)
    code2, out2, _ = run_cli(capsys, *argv)
    assert code1 == code2 == EXIT_OK
    assert out1 == out2


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == EXIT_USAGE
