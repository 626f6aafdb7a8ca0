import json
import math

import pytest

from cmvwalk.cli import EXIT_CONFIG, EXIT_FAIL, EXIT_OK, EXIT_OVERFLOW, main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def rows(text):
    out = []
    for line in text.splitlines()[1:]:
        if line.startswith("#"):
            continue
        x, *vals = line.split(",")
        out.append((int(x), *map(float, vals)))
    return out


def test_simulate_hadamard_one_step(capsys):
    code, out = run(capsys, "simulate", "--walk-type", "1", "--coin", "hadamard", "--init", "1,0", "--steps", "1")
    assert code == EXIT_OK
    assert out.out.splitlines()[0] == "x,probability"
    assert rows(out.out) == [(0, pytest.approx(0.5)), (1, pytest.approx(0.5))]


def test_simulate_free_motion(capsys):
    code, out = run(capsys, "simulate", "--walk-type", "2", "--coin", "real:0", "--steps", "7")
    assert code == EXIT_OK
    assert rows(out.out) == [(7, pytest.approx(1.0))]


def test_simulate_tree_coin(capsys):
    code, out = run(capsys, "simulate", "--walk-type", "2", "--coin", "real:-1/3",
                    "--gamma", "180", "--degrees", "--steps", "400", "--xmax", "0")
    assert code == EXIT_OK
    assert rows(out.out)[0][1] == pytest.approx(0.25, abs=2e-2)


def test_simulate_overflow_exit_code(capsys):
    code, out = run(capsys, "simulate", "--steps", "10", "--sites", "3")
    assert code == EXIT_OVERFLOW
    assert out.out == ""


@pytest.mark.parametrize("argv", [
    ["simulate", "--coin", "bogus", "--steps", "1"],
    ["simulate", "--coin", "matrix:1,0;1,0;0,0;1,0", "--steps", "1"],
    ["simulate", "--init", "1,1", "--steps", "1"],
    ["simulate", "--steps", "-1"],
    ["spectrum", "--family", "1", "--alpha", "1.5"],
    ["limit", "--tree", "1"],
])
def test_config_errors_exit_two(capsys, argv):
    code, out = run(capsys, *argv)
    assert code == EXIT_CONFIG
    assert out.err.startswith("cmvwalk:")


def test_no_partial_file_on_error(tmp_path, capsys):
    target = tmp_path / "out.csv"
    assert main(["simulate", "--steps", "10", "--sites", "3", "-o", str(target)]) == EXIT_OVERFLOW
    assert list(tmp_path.iterdir()) == []


def test_output_is_byte_identical(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert main(["simulate", "--coin", "real:0.3+0.4i", "--init", "0.6,0.8i", "--steps", "60", "-o", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert paths[0].read_bytes().count(b"\n") > 10


def test_numbers_carry_twelve_digits(capsys):
    _, out = run(capsys, "limit", "--coin", "real:0.6", "--xmax", "12")
    p12 = rows(out.out)[12][1]
    assert p12 == pytest.approx(0.45 * 0.25 ** 12, rel=1e-11)


def spectrum(capsys, family, alpha):
    code, out = run(capsys, "spectrum", "--family", str(family), "--alpha", alpha)
    assert code == EXIT_OK
    return json.loads(out.out)


def test_spectrum_real_coin(capsys):
    data = spectrum(capsys, 1, "0.6")
    assert len(data["atoms"]) == 1
    assert data["atoms"][0]["theta"] == pytest.approx(0.0, abs=1e-14)
    assert data["atoms"][0]["mass"] == pytest.approx(0.6)
    assert data["total_mass"] == pytest.approx(1.0, abs=1e-6)
    thetas = [s["theta"] for s in data["ac"]]
    assert thetas == sorted(thetas)
    assert all(s["w"] >= 0 for s in data["ac"])


def test_spectrum_no_atoms(capsys):
    data = spectrum(capsys, 1, "0.5i")
    assert data["atoms"] == []
    assert data["total_mass"] == pytest.approx(1.0, abs=1e-6)


def test_spectrum_two_atoms(capsys):
    data = spectrum(capsys, 2, "1/3")
    assert [a["mass"] for a in data["atoms"]] == pytest.approx([0.25, 0.25])
    assert data["total_mass"] == pytest.approx(1.0, abs=1e-6)


def test_spectrum_from_coin(capsys):
    code, out = run(capsys, "spectrum", "--walk-type", "2", "--coin", "real:1/3")
    assert code == EXIT_OK
    assert [a["mass"] for a in json.loads(out.out)["atoms"]] == pytest.approx([0.25, 0.25])


def test_limit_type1(capsys):
    code, out = run(capsys, "limit", "--walk-type", "1", "--coin", "real:0.6", "--init", "1,0", "--xmax", "3")
    assert code == EXIT_OK
    assert [r[1] for r in rows(out.out)] == pytest.approx([0.45, 0.1125, 0.028125, 0.00703125])
    assert "# escape_mass=0.4" in out.out


def test_limit_type2_outside_region(capsys):
    code, out = run(capsys, "limit", "--walk-type", "2", "--coin", "real:-1/3")
    assert code == EXIT_OK
    assert all(r[1] == 0 for r in rows(out.out))
    assert "# escape_mass=1" in out.out


def test_limit_tree(capsys):
    code, out = run(capsys, "limit", "--tree", "3", "--case", "B", "--xmax", "1")
    assert code == EXIT_OK
    assert rows(out.out) == [(0, pytest.approx(0.25)), (1, pytest.approx(0.375))]
    assert "parity_resolved=true" in out.out


def test_tree_subcommand(capsys):
    code, out = run(capsys, "tree", "--kappa", "4", "--case", "B", "--steps", "400", "--xmax", "2")
    assert code == EXIT_OK
    assert out.out.splitlines()[0] == "x,simulated,limit"
    x0 = rows(out.out)[0]
    assert x0[2] == pytest.approx(4 / 9)
    assert x0[1] == pytest.approx(4 / 9, abs=2e-2)


@pytest.mark.parametrize("argv", [["--suite", "conjugation"], ["--suite", "moments"],
                                  ["--suite", "oracle", "--tol", "2e-2"]])
def test_verify_suites_pass(capsys, argv):
    code, out = run(capsys, "verify", *argv)
    assert code == EXIT_OK
    assert "FAIL" not in out.out


def test_verify_failure_exit_code(capsys):
    code, out = run(capsys, "verify", "--suite", "oracle", "--tol", "1e-12")
    assert code == EXIT_FAIL
    assert "FAIL" in out.out


def test_degrees_flag_matches_radians(capsys):
    _, a = run(capsys, "simulate", "--walk-type", "2", "--coin", "hadamard", "--gamma", "90", "--degrees", "--steps", "20")
    _, b = run(capsys, "simulate", "--walk-type", "2", "--coin", "hadamard", "--gamma", str(math.pi / 2), "--steps", "20")
    assert a.out == b.out
