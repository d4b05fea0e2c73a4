"""End-to-end checks of the command-line front end: output formats, exit
codes, and the append-only result cache.  Everything runs in-process through
cli.main() with the cache redirected into a temp directory.
"""

import csv
import io
import json
import shutil
import subprocess

import pytest

from commucount import __version__
from commucount.cli import main


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("COMMUCOUNT_CACHE_DIR", str(tmp_path / "cache"))
    return tmp_path / "cache"


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def json_lines(out):
    return [json.loads(line) for line in out.splitlines() if line]


def test_count2_basics(capsys):
    code, out, err = run_cli(capsys, "count2", "--n", "1")
    assert code == 0
    (res,) = json_lines(out)
    assert res["value"] == "817"
    assert res["command"] == "count2"
    assert res["params"] == {"n": 1, "split": False}
    assert res["diagnostics"]["limit_constant"] == pytest.approx(4.5614425920673529)


def test_count2_split_partitions(capsys):
    code, out, _ = run_cli(capsys, "count2", "--n", "3", "--split")
    (res,) = json_lines(out)
    assert code == 0
    deg = int(res["diagnostics"]["degenerate"])
    nondeg = int(res["diagnostics"]["nondegenerate"])
    assert deg + nondeg == int(res["value"]) == 68673


def test_count2_huge_value_roundtrips_as_string(capsys):
    _, out, _ = run_cli(capsys, "count2", "--n", "100000", "--no-cache")
    (res,) = json_lines(out)
    assert isinstance(res["value"], str)
    assert int(res["value"]) > 10**27


def test_count3_brute_and_classify_agree(capsys):
    code, out, _ = run_cli(capsys, "count3", "--n", "1")
    assert code == 0
    (plain,) = json_lines(out)
    code, out, _ = run_cli(capsys, "count3", "--n", "1", "--classify")
    assert code == 0
    (classified,) = json_lines(out)
    assert plain["value"] == classified["value"] == "375417"
    assert classified["diagnostics"]["s0"] == "729"


def test_padic_fast_vs_brute(capsys):
    _, out, _ = run_cli(capsys, "padic", "--p", "3", "--n", "1")
    (fast,) = json_lines(out)
    _, out, _ = run_cli(capsys, "padic", "--p", "3", "--n", "1", "--method", "brute")
    (brute,) = json_lines(out)
    assert fast["value"] == brute["value"] == "945"
    assert fast["diagnostics"]["sigma_p"] == "13/9"
    assert fast["diagnostics"]["main_term"] == "104/81"


def test_padic_classes(capsys):
    _, out, _ = run_cli(capsys, "padic", "--p", "2", "--n", "3", "--method", "classes")
    (res,) = json_lines(out)
    assert res["diagnostics"]["class_0"] == "5376"
    assert res["diagnostics"]["class_1"] == "1344"
    assert res["diagnostics"]["residual"] == "64"
    assert int(res["value"]) == 5376 + 1344 + 64


def test_divisor_single_h(capsys):
    code, out, _ = run_cli(capsys, "divisor", "--n", "2", "--h", "1")
    assert code == 0
    (res,) = json_lines(out)
    assert res["params"] == {"n": 2, "h": 1}
    assert "divisor_bound_ratio" in res["diagnostics"]


def test_divisor_zero_routes(capsys):
    _, out_flag, _ = run_cli(capsys, "divisor", "--n", "50", "--zero")
    _, out_h0, _ = run_cli(capsys, "divisor", "--n", "50", "--h", "0")
    v1 = json_lines(out_flag)[0]
    v2 = json_lines(out_h0)[0]
    assert v1["value"] == v2["value"]
    assert "central_gap_per_n2" in v1["diagnostics"]


def test_divisor_all_streams_every_h(capsys):
    code, out, _ = run_cli(capsys, "divisor", "--n", "2", "--all")
    assert code == 0
    lines = json_lines(out)
    # products of [-2, 2] can never differ by exactly 7, so the support of
    # r_2 is -8..8 minus {-7, 7}: fifteen points.
    assert len(lines) == 15
    assert sum(int(line["value"]) for line in lines) == 5**4
    hs = [line["params"]["h"] for line in lines]
    assert hs == sorted(hs)
    assert 7 not in hs and -7 not in hs


def test_moments_and_dx(capsys):
    _, out, _ = run_cli(capsys, "moments", "--n", "1", "--k", "2")
    assert json_lines(out)[0]["value"] == "1921"
    _, out, _ = run_cli(capsys, "dx", "--x", "100", "--h", "2")
    res = json_lines(out)[0]
    assert int(res["value"]) > 0
    assert res["diagnostics"]["per_x_log2x"] > 0


def test_doubling_with_lemma61(capsys, tmp_path):
    setfile = tmp_path / "ap.txt"
    setfile.write_text("1\n2\n3\n5/2\n")
    code, out, _ = run_cli(capsys, "doubling", "--set-file", str(setfile), "--lemma61")
    assert code == 0
    (res,) = json_lines(out)
    assert res["value"] == "2"  # |A+A| = 8 over |A| = 4
    assert res["diagnostics"]["set_size"] == 4
    assert res["diagnostics"]["sup_autocorrelation"] == res["diagnostics"][
        "autocorrelation_at_zero"
    ]


def test_lowerbound(capsys):
    _, out, _ = run_cli(capsys, "lowerbound", "--d", "2", "--n", "1")
    (res,) = json_lines(out)
    assert res["value"] == "553"
    assert res["diagnostics"]["e_d"] == "19"


def test_demo4x4_canonical(capsys):
    code, out, _ = run_cli(capsys, "demo4x4")
    assert code == 0
    (res,) = json_lines(out)
    assert res["value"] == "1"  # the witness Y entry on the zero row
    assert res["diagnostics"]["all_infeasible"] == 1
    assert res["diagnostics"]["first_six_determinant"] == -2
    assert res["diagnostics"]["samples"] == 1


def test_demo4x4_seeded_samples(capsys):
    _, out, _ = run_cli(capsys, "demo4x4", "--seed", "99")
    (res,) = json_lines(out)
    assert res["diagnostics"]["samples"] == 100
    assert res["diagnostics"]["all_diagonals_vanish"] == 1


# --- exit codes -------------------------------------------------------------------


def test_usage_errors_exit_2(capsys):
    assert run_cli(capsys, "count2")[0] == 2  # missing --n
    assert run_cli(capsys, "count2", "--n", "-3")[0] == 2
    assert run_cli(capsys, "nonsense")[0] == 2
    code, _, err = run_cli(capsys, "padic", "--p", "6", "--n", "1")
    assert code == 2 and "not prime" in err
    code, _, err = run_cli(capsys, "doubling", "--set-file", "/does/not/exist")
    assert code == 2


def test_budget_refusal_exits_3(capsys):
    code, _, err = run_cli(capsys, "count3", "--n", "2", "--budget", "100")
    assert code == 3
    assert "budget" in err


def test_help_and_version_exit_0(capsys):
    assert run_cli(capsys, "--help")[0] == 0
    code, out, _ = run_cli(capsys, "--version")
    assert code == 0


# --- formats ----------------------------------------------------------------------


def test_csv_format_matches_json(capsys):
    _, json_out, _ = run_cli(capsys, "count2", "--n", "4")
    _, csv_out, _ = run_cli(capsys, "count2", "--n", "4", "--format", "csv")
    res = json_lines(json_out)[0]
    rows = list(csv.DictReader(io.StringIO(csv_out)))
    assert rows
    assert all(r["value"] == "254657" == res["value"] for r in rows)
    assert {r["diagnostic_name"] for r in rows} == set(res["diagnostics"])
    assert all(r["param_string"] == "n=4;split=False" for r in rows)


def test_csv_handles_diagnostic_free_results(capsys):
    _, csv_out, _ = run_cli(capsys, "divisor", "--n", "2", "--all", "--format", "csv")
    rows = list(csv.reader(io.StringIO(csv_out)))
    assert rows[0][0] == "command"
    assert len(rows) == 16  # header + 15 support points


# --- the cache --------------------------------------------------------------------


def test_cache_replays_byte_identical(capsys, isolated_cache):
    _, first, _ = run_cli(capsys, "count2", "--n", "1000")
    _, second, _ = run_cli(capsys, "count2", "--n", "1000")
    assert first == second  # including runtime_ms, replayed verbatim
    cache_file = isolated_cache / "results.jsonl"
    assert cache_file.exists()
    assert len(cache_file.read_text().splitlines()) == 1  # hit did not re-store


def test_cache_distinguishes_params_and_version(capsys, isolated_cache):
    run_cli(capsys, "count2", "--n", "5")
    run_cli(capsys, "count2", "--n", "6")
    lines = (isolated_cache / "results.jsonl").read_text().splitlines()
    assert len(lines) == 2
    keys = [json.loads(json.loads(line)["key"]) for line in lines]
    assert [k["params"]["n"] for k in keys] == [5, 6]
    assert all(k["version"] == __version__ for k in keys)


def test_no_cache_skips_storing(capsys, isolated_cache):
    run_cli(capsys, "count2", "--n", "7", "--no-cache")
    assert not (isolated_cache / "results.jsonl").exists()


def test_divisor_all_is_never_cached(capsys, isolated_cache):
    run_cli(capsys, "divisor", "--n", "2", "--all")
    assert not (isolated_cache / "results.jsonl").exists()


def test_corrupt_cache_lines_are_skipped_with_warning(capsys, isolated_cache):
    run_cli(capsys, "count2", "--n", "9")
    cache_file = isolated_cache / "results.jsonl"
    cache_file.write_text("this is not json\n" + cache_file.read_text())
    code, out, err = run_cli(capsys, "count2", "--n", "9")
    assert code == 0
    assert "corrupt" in err
    from commucount import count_commuting_2x2

    assert json_lines(out)[0]["value"] == str(count_commuting_2x2(9))


def test_cache_last_write_wins(capsys, isolated_cache):
    run_cli(capsys, "count2", "--n", "11")
    cache_file = isolated_cache / "results.jsonl"
    line = json.loads(cache_file.read_text())
    line["result"]["value"] = "tampered"
    with open(cache_file, "a", encoding="utf-8") as fh:
        fh.write(json.dumps(line) + "\n")
    _, out, _ = run_cli(capsys, "count2", "--n", "11")
    assert json_lines(out)[0]["value"] == "tampered"  # documented: last entry wins


def test_verify_is_exercised_through_acceptance():
    """The verify subcommand runs the full criterion battery; its CLI path is
    covered by tests/test_acceptance.py (quick suite, exit code 0), so this
    file only pins the wiring."""
    from commucount.cli import build_parser

    args = build_parser().parse_args(["verify", "--suite", "quick"])
    assert args.suite == "quick"


@pytest.mark.skipif(shutil.which("commucount") is None, reason="script not on PATH")
def test_console_script_smoke():
    out = subprocess.run(
        ["commucount", "--version"], capture_output=True, text=True, check=True
    )
    assert __version__ in out.stdout
