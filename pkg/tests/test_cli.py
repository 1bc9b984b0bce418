"""End-to-end checks of the ruin command-line interface."""
import csv
import json

import pytest

from persistent_ruin.cli import main

SMALL = ["--a", "1/3", "--b", "3/5", "--f", "3", "--N", "5"]


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_kn_csv_output(capsys):
    code, out, _ = run(capsys, ["kn", *SMALL, "--lmax", "8"])
    assert code == 0
    rows = list(csv.DictReader(out.splitlines()))
    assert rows
    assert set(rows[0]) == {"runs", "short_runs", "long_runs", "steps", "coeff"}
    first = rows[0]
    assert first["runs"] == "2" and first["steps"] == "2"
    # rationals are rendered exactly, as p/q or an integer
    assert all("/" in r["coeff"] or r["coeff"].lstrip("-").isdigit()
               for r in rows)


def test_exact_dist_verify_passes(capsys):
    code, _, err = run(capsys, ["exact-dist", *SMALL, "--lmax", "10", "--verify"])
    assert code == 0
    assert "match" in err


def test_first_passage_verify_passes(capsys):
    code, _, _ = run(capsys, ["first-passage", *SMALL, "--m", "1", "--n", "4",
                              "--lmax", "10", "--verify"])
    assert code == 0


def test_k_infinity_json(capsys):
    code, out, _ = run(capsys, ["k-infinity", "--a", "1/2", "--r", "1",
                                "--y", "1", "--z", "1", "--format", "json"])
    assert code == 0
    payload = json.loads(out)
    assert payload[0]["re"] == 1.0 and payload[0]["im"] == 0.0


def test_simulate_reproducible(capsys):
    argv = ["simulate", *SMALL, "--samples", "500", "--seed", "9",
            "--stat", "X", "--t", "1,-1,0.5"]
    code1, out1, _ = run(capsys, argv)
    code2, out2, _ = run(capsys, argv)
    assert code1 == code2 == 0
    assert out1 == out2
    rows = list(csv.DictReader(out1.splitlines()))
    assert [r["t"] for r in rows] == ["1.0", "-1.0", "0.5"]
    assert all(abs(float(r["re"])) <= 1 for r in rows)


def test_simulate_step_cap_exit_code(capsys):
    code, _, err = run(capsys, ["simulate", *SMALL, "--samples", "50",
                                "--seed", "0", "--step-cap", "8"])
    assert code == 3
    assert "guard" in err


def test_usage_error_exit_code(capsys):
    code, _, err = run(capsys, ["kn", "--a", "3/2", "--b", "1/2",
                                "--f", "3", "--N", "5"])
    assert code == 2
    assert "usage error" in err


def test_unknown_flag_is_argparse_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["kn", "--bogus"])
    assert exc.value.code == 2


def test_verify_rho_suite_json(capsys):
    code, out, _ = run(capsys, ["verify", "--suite", "rho",
                                "--a", "1/3", "--b", "3/5", "--f", "3", "--N", "6"])
    assert code == 0
    report = json.loads(out)
    assert report["passed"] is True
    assert report["suite"] == "rho"


def test_verify_symmetry_suite(capsys):
    code, out, _ = run(capsys, ["verify", "--suite", "symmetry",
                                "--a", "1/3", "--nmax", "4"])
    assert code == 0
    assert json.loads(out)["passed"] is True


def test_density_csv(capsys, tmp_path):
    out_file = tmp_path / "density.csv"
    code, _, err = run(capsys, ["density", "--cf", "sech", "--xmin", "-3",
                                "--xmax", "3", "--points", "61", "--T", "40",
                                "--out", str(out_file)])
    assert code == 0
    rows = list(csv.DictReader(out_file.read_text().splitlines()))
    assert len(rows) == 61
    assert "mean=" in err
    # peak of the sech^2 law sits at the origin
    peak = max(rows, key=lambda r: float(r["density"]))
    assert abs(float(peak["x"])) < 0.2
    assert abs(float(peak["density"]) - 0.7853981) < 1e-4


def test_eta_places_boundary(capsys):
    code, out, _ = run(capsys, ["kn", "--a", "1/4", "--b", "3/4",
                                "--eta", "0.4", "--N", "10", "--lmax", "6"])
    assert code == 0
    assert out.startswith("runs,")
