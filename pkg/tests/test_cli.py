import json
import math

import numpy as np
import pytest

from bellpair.cli import main
from bellpair.dataset import PUBLISHED_CASE1


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def state_file(tmp_path, doc, name="state.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_analyze_werner_table(tmp_path, capsys):
    path = state_file(tmp_path, {"kind": "werner", "gamma": 0.9})
    code, out, _ = run(capsys, "analyze", "--state", path)
    assert code == 0
    assert "max_violation  2.546" in out
    assert "tangle         0.85" in out
    assert "purity         0.8575" in out
    assert "violates_chsh  yes" in out


def test_analyze_singlet_json(tmp_path, capsys):
    path = state_file(tmp_path, {"kind": "named", "name": "singlet"})
    code, out, _ = run(capsys, "analyze", "--state", path, "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["manifest"]["command"] == "analyze"
    assert doc["manifest"]["version"]
    assert doc["max_violation"] == pytest.approx(2 * math.sqrt(2), abs=1e-9)
    assert doc["tangle"] == pytest.approx(1.0, abs=1e-9)
    assert doc["purity"] == pytest.approx(1.0, abs=1e-12)
    assert doc["violates"] is True
    assert len(doc["optimal"]["a"]) == 3


def test_analyze_unpolarized_has_no_optimal(tmp_path, capsys):
    path = state_file(tmp_path, {"kind": "named", "name": "unpolarized"})
    code, out, _ = run(capsys, "analyze", "--state", path, "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["tangle"] == 0.0
    assert doc["M"] == pytest.approx(0.0, abs=1e-12)
    assert doc["max_violation"] == pytest.approx(0.0, abs=1e-12)
    assert doc["purity"] == pytest.approx(0.25, abs=1e-12)
    assert doc["violates"] is False
    assert doc["optimal"] is None


def test_analyze_csv_embeds_manifest(tmp_path, capsys):
    path = state_file(tmp_path, {"kind": "werner", "gamma": 0.5})
    code, out, _ = run(capsys, "analyze", "--state", path, "--format", "csv")
    assert code == 0
    assert out.startswith("# command: analyze")
    header = next(line for line in out.splitlines() if not line.startswith("#"))
    assert header.split(",")[:4] == ["tangle", "M", "max_violation", "purity"]


def test_analyze_exit_codes(tmp_path, capsys):
    garbage = tmp_path / "garbage.json"
    garbage.write_text("{nope")
    code, _, err = run(capsys, "analyze", "--state", str(garbage))
    assert code == 2 and "error" in err

    bad = state_file(
        tmp_path,
        {
            "kind": "matrix",
            "re": np.diag([1.2, -0.2, 0.0, 0.0]).tolist(),
            "im": np.zeros((4, 4)).tolist(),
        },
        name="bad.json",
    )
    code, _, err = run(capsys, "analyze", "--state", bad)
    assert code == 3 and "invalid state" in err


def test_sweep_endpoints_and_crossing(capsys):
    code, out, _ = run(capsys, "sweep", "--min", "0", "--max", "1", "--step", "0.01",
                       "--format", "json")
    assert code == 0
    doc = json.loads(out)
    rows = doc["rows"]
    assert rows[0]["gamma"] == 0.0
    assert rows[0]["max_violation"] == pytest.approx(0.0, abs=1e-12)
    assert rows[0]["purity"] == pytest.approx(0.25, abs=1e-12)
    assert rows[-1]["gamma"] == pytest.approx(1.0, abs=1e-12)
    assert rows[-1]["max_violation"] == pytest.approx(2.8284, abs=5e-5)
    assert rows[-1]["tangle"] == pytest.approx(1.0, abs=1e-9)
    crossing = doc["bell_limit_crossing"]
    assert crossing["below"] == pytest.approx(0.70, abs=1e-9)
    assert crossing["above"] == pytest.approx(0.71, abs=1e-9)
    marked = [r["gamma"] for r in rows if "gamma~0.9" in r["marker"]]
    assert len(marked) == 1 and marked[0] == pytest.approx(0.9, abs=1e-9)
    assert any("bell-limit" in r["marker"] for r in rows)


def test_sweep_rejects_bad_range(capsys):
    code, _, err = run(capsys, "sweep", "--min", "0.5", "--max", "0.1")
    assert code == 2 and "error" in err
    code, _, _ = run(capsys, "sweep", "--min", "0", "--max", "1", "--step", "-0.1")
    assert code == 2


def test_table1_matches_published_case1(capsys):
    code, out, _ = run(capsys, "table1", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["rows"]) == 8
    for row, published in zip(doc["rows"], PUBLISHED_CASE1):
        assert float(f"{row['case1']:.2f}") == published
        assert not row["case1_flag"]
    flagged = [i for i, row in enumerate(doc["rows"]) if row["case2_flag"]]
    assert flagged == [2, 6]  # the double-rounded cell and the transcription slip
    assert doc["chi2_case1"] == pytest.approx(1.26, abs=0.01)
    assert doc["chi2_case2_published_column"] == pytest.approx(0.85, abs=0.01)
    assert doc["chi2_case2"] == pytest.approx(0.85, abs=0.01)


def test_table1_table_format_mentions_flags(capsys):
    code, out, _ = run(capsys, "table1")
    assert code == 0
    assert "chi2 case 1 (recomputed)        : 1.26" in out
    assert "chi2 case 2 (published column)  : 0.85" in out
    assert "case2:2.4180!=2.34" in out


def test_fit_embedded(capsys):
    code, out, _ = run(capsys, "fit", "--embedded", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["chi2_case1"] == pytest.approx(1.26, abs=0.01)
    assert doc["chi2_case2"] == pytest.approx(0.85, abs=0.01)
    assert doc["gamma_hat"] == pytest.approx(0.6919, abs=2e-4)
    assert len(doc["residuals"]) == 8
    assert len(doc["chi2_curve"]) == 101
    curve_min = min(pt["chi2"] for pt in doc["chi2_curve"])
    assert doc["chi2_at_min"] <= curve_min + 1e-12


def test_fit_synthetic_exact(tmp_path, capsys):
    s = 3 * math.cos(math.radians(45)) - math.cos(math.radians(135))
    data = tmp_path / "data.txt"
    data.write_text(f"90, 0, 45, 135, {0.5 * s}, 0.1\n")
    code, out, _ = run(capsys, "fit", "--data", str(data), "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["gamma_hat"] == pytest.approx(0.5, abs=1e-9)
    assert doc["chi2_at_min"] == pytest.approx(0.0, abs=1e-12)


def test_fit_single_row_clamps(tmp_path, capsys):
    data = tmp_path / "data.txt"
    data.write_text("90, 0, 45, 135, 2.83, 0.01\n")
    code, out, _ = run(capsys, "fit", "--data", str(data), "--format", "json")
    assert code == 0
    assert json.loads(out)["gamma_hat"] == 1.0


def test_fit_empty_dataset_exit_4(tmp_path, capsys):
    data = tmp_path / "data.txt"
    data.write_text("# only comments\n")
    code, _, err = run(capsys, "fit", "--data", str(data))
    assert code == 4 and "error" in err


def test_fit_unparseable_exit_2(tmp_path, capsys):
    data = tmp_path / "data.txt"
    data.write_text("1, 2, 3\n")
    code, _, _ = run(capsys, "fit", "--data", str(data))
    assert code == 2


def test_simulate_deterministic_and_round_trip(tmp_path, capsys):
    state = state_file(tmp_path, {"kind": "werner", "gamma": 0.9})
    settings = tmp_path / "settings.txt"
    settings.write_text("90, 0, 45, 135\n")
    out_a = tmp_path / "a.txt"
    out_b = tmp_path / "b.txt"
    for out_file in (out_a, out_b):
        code, _, _ = run(
            capsys,
            "simulate", "--state", state, "--settings", str(settings),
            "--events", "100000", "--seed", "42", "--out", str(out_file),
        )
        assert code == 0
    assert out_a.read_bytes() == out_b.read_bytes()

    code, out, _ = run(capsys, "fit", "--data", str(out_a), "--format", "json")
    assert code == 0
    doc = json.loads(out)
    sigma_gamma = doc["residuals"][0]["dr_exp"] / doc["residuals"][0]["singlet_value"]
    assert abs(doc["gamma_hat"] - 0.9) <= 3 * sigma_gamma


def test_simulate_full_reference_settings_recovers_gamma(tmp_path, capsys):
    state = state_file(tmp_path, {"kind": "werner", "gamma": 0.9})
    settings = tmp_path / "settings.txt"
    settings.write_text(
        "\n".join(
            f"{10 * (k + 5)}, 0, {5 * (k + 5)}, {15 * (k + 5)}" for k in range(8)
        )
        + "\n"
    )
    counts = tmp_path / "counts.txt"
    code, _, _ = run(
        capsys,
        "simulate", "--state", state, "--settings", str(settings),
        "--events", "1000000", "--seed", "42", "--out", str(counts),
    )
    assert code == 0
    code, out, _ = run(capsys, "fit", "--data", str(counts), "--format", "json")
    assert code == 0
    assert 0.89 <= json.loads(out)["gamma_hat"] <= 0.91


def test_simulate_counts_are_zero_for_aligned_singlet(tmp_path, capsys):
    state = state_file(tmp_path, {"kind": "named", "name": "singlet"})
    settings = tmp_path / "settings.txt"
    settings.write_text("33, 33\n")
    code, out, _ = run(
        capsys, "simulate", "--state", state, "--settings", str(settings),
        "--events", "1000", "--seed", "1",
    )
    assert code == 0
    row = [line for line in out.splitlines() if not line.startswith("#")][0]
    fields = [f.strip() for f in row.split(",")]
    assert fields[2] == "0" and fields[5] == "0"


def test_simulate_rejects_bad_events(tmp_path, capsys):
    state = state_file(tmp_path, {"kind": "named", "name": "singlet"})
    settings = tmp_path / "settings.txt"
    settings.write_text("0, 0\n")
    code, _, _ = run(
        capsys, "simulate", "--state", state, "--settings", str(settings),
        "--events", "0", "--seed", "1",
    )
    assert code == 2


def test_out_writes_identical_text(tmp_path, capsys):
    out_file = tmp_path / "sweep.csv"
    code, _, _ = run(capsys, "sweep", "--min", "0", "--max", "0.2", "--step", "0.1",
                     "--format", "csv", "--out", str(out_file))
    assert code == 0
    code, stdout, _ = run(capsys, "sweep", "--min", "0", "--max", "0.2", "--step", "0.1",
                          "--format", "csv")
    assert code == 0
    assert out_file.read_text() == stdout


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
