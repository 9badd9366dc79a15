import json
import subprocess
import sys
from pathlib import Path

import pytest

from baergeom.cli import main
from baergeom.varieties import make_ruled_cubic_surface
from baergeom.verify import SUITES, UsageError, make_setup, random_sigma, replay, run_suite

GOLDEN = Path(__file__).parent / "golden"
REPORT_KEYS = {
    "suite", "q", "modulus", "omega", "sigma", "seed", "histograms",
    "violations", "passed", "report_only", "elapsed_ms",
}


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# --------------------------------------------------------------------------
# setup


def test_unsupported_q():
    with pytest.raises(UsageError):
        make_setup(6)
    with pytest.raises(UsageError):
        make_setup(11)


def test_random_sigma_is_seeded_and_invertible():
    s1 = make_setup(5, sigma="random", seed=7)
    s2 = make_setup(5, sigma="random", seed=7)
    assert s1.sigma_matrix == s2.sigma_matrix
    F = s1.field
    (a, b), (c, d) = s1.sigma_matrix
    assert F.sub[F.mul[a][d]][F.mul[b][c]] != 0
    assert random_sigma(F, 7) == s1.sigma_matrix


# --------------------------------------------------------------------------
# reports


@pytest.mark.parametrize("suite", SUITES)
def test_report_shape(suite):
    rep = run_suite(suite, make_setup(3), trials=2)
    d = json.loads(rep.to_json())
    assert set(d) == REPORT_KEYS
    assert d["passed"] is True and d["violations"] == []
    assert d["elapsed_ms"] is None
    assert d["q"] == 3 and d["seed"] == 0
    assert d["modulus"]["extension"] == [1, 0, 1]
    assert rep.to_json() == json.dumps(d, sort_keys=True, indent=2) + "\n"


def test_timing_only_on_request():
    rep = run_suite("char1-forward", make_setup(3), timing=True)
    assert isinstance(rep.to_dict()["elapsed_ms"], int)


def test_char1_histogram_total():
    for q in (3, 4):
        d = run_suite("char1-forward", make_setup(q)).to_dict()
        assert d["histograms"]["hyperplanes"] == (q**5 - 1) // (q - 1)
        assert sum(d["histograms"]["section_types"].values()) == (q**5 - 1) // (q - 1)


@pytest.mark.parametrize("q", [3, 4, 5])
@pytest.mark.parametrize("kind,seed", [("identity", 0), ("random", 1), ("random", 2), ("random", 3)])
def test_char1_matches_golden(q, kind, seed):
    golden = json.loads((GOLDEN / "char1_forward.json").read_text())
    rep = run_suite("char1-forward", make_setup(q, None, kind, seed))
    assert rep.histograms["section_types"] == golden[f"q={q},sigma={kind},seed={seed}"]


@pytest.mark.parametrize("q", [3, 4])
def test_inter1_matches_golden(q):
    golden = json.loads((GOLDEN / "inter1_forward.json").read_text())
    assert run_suite("inter1-forward", make_setup(q)).histograms == golden[f"q={q}"]


def test_lemma_chain_counts_q3():
    c = run_suite("lemma-chain", make_setup(3)).histograms["counts"]
    assert c["conics"] == 9 and c["conics_meeting_baseline"] == 0
    assert c["contained_lines"] == 5 and c["sticks"] == 4 and c["round_trip"] == 1


def test_low_q_case_table_is_report_only():
    d = run_suite("inter1-forward", make_setup(3)).to_dict()
    assert "case-table" in d["report_only"]
    d5 = run_suite("inter1-forward", make_setup(5)).to_dict()
    assert "case-table" not in d5["report_only"]


@pytest.mark.parametrize("suite,q,trials", [("char1-forward", 4, 1), ("inter1-forward", 3, 1), ("mutation", 3, 4)])
def test_jobs_do_not_change_report(suite, q, trials):
    setup = make_setup(q, sigma="random", seed=2)
    a = run_suite(suite, setup, trials=trials, jobs=1).to_json()
    b = run_suite(suite, setup, trials=trials, jobs=3).to_json()
    assert a == b


# --------------------------------------------------------------------------
# CLI


def test_cli_pass_writes_report(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _, err = run_cli(capsys, "verify", "--q", "3", "--suite", "char1-forward", "--out", str(out))
    assert code == 0
    assert "PASS" in err
    assert json.loads(out.read_text())["passed"] is True


def test_cli_stdout(capsys):
    code, out, _ = run_cli(capsys, "verify", "--q", "3", "--suite", "corollary-bb")
    assert code == 0
    assert json.loads(out)["suite"] == "corollary-bb"


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--q", "6", "--suite", "char1-forward"],
        ["verify", "--q", "9", "--poly", "2,0,1", "--suite", "char1-forward"],
        ["verify", "--q", "5", "--poly", "1,1,1", "--suite", "char1-forward"],
        ["verify", "--q", "3", "--jobs", "0", "--suite", "char1-forward"],
    ],
)
def test_cli_usage_errors(capsys, argv):
    code, _, err = run_cli(capsys, *argv)
    assert code == 2
    assert err.startswith("error:")


def test_cli_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["verify", "--q", "3", "--suite", "nope"])
    assert info.value.code == 2


def test_cli_custom_modulus(capsys):
    code, out, _ = run_cli(capsys, "verify", "--q", "9", "--poly", "2,2,1", "--suite", "corollary-bb")
    d = json.loads(out)
    assert code == 0
    assert d["modulus"]["base"] == [2, 2, 1]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "baergeom", "verify", "--q", "3", "--suite", "lemma-chain"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["passed"] is True


# --------------------------------------------------------------------------
# replay


def _mutant_points():
    setup = make_setup(3)
    K = set(make_ruled_cubic_surface(setup.field).points)
    K.remove(sorted(K)[0])
    K.add((1, 1, 1, 1, 1))
    return setup, sorted(map(list, K))


def test_replay_reconstruction_witness(tmp_path, capsys):
    setup, pts = _mutant_points()
    w = {"kind": "reconstruction", "q": 3, "modulus": list(setup.base_modulus), "points": pts}
    res = replay(w)
    assert res[0]["failed"] is True
    path = tmp_path / "w.json"
    path.write_text(json.dumps(w))
    code, out, _ = run_cli(capsys, "replay", "--witness", str(path))
    assert code == 1
    assert json.loads(out)[0]["step"]


def test_replay_clean_surface_passes(tmp_path, capsys):
    setup = make_setup(3)
    pts = sorted(map(list, make_ruled_cubic_surface(setup.field).points))
    w = {"kind": "reconstruction", "q": 3, "modulus": list(setup.base_modulus), "points": pts}
    path = tmp_path / "w.json"
    path.write_text(json.dumps(w))
    code, _, _ = run_cli(capsys, "replay", "--witness", str(path))
    assert code == 0


def test_replay_section_witness():
    setup, pts = _mutant_points()
    res = replay({"kind": "surface-mutant", "q": 3, "modulus": list(setup.base_modulus), "points": pts})[0]
    h = res["section_witness"][0]
    w = {"kind": "section-type", "q": 3, "modulus": list(setup.base_modulus), "points": pts,
         "hyperplane": h, "allowed": ["T1", "T2", "T3", "T4", "T5"]}
    out = replay(w)[0]
    assert out["failed"] is True and out["section_type"] not in w["allowed"]
    clean = sorted(map(list, make_ruled_cubic_surface(setup.field).points))
    assert replay({**w, "points": clean})[0]["failed"] is False


def test_replay_surface_mutant():
    setup, pts = _mutant_points()
    res = replay({"kind": "surface-mutant", "q": 3, "modulus": list(setup.base_modulus), "points": pts})[0]
    assert res["failed"] is False
    assert res["reconstruction_step"] and res["section_witness"]


def test_replay_report_without_violations(tmp_path, capsys):
    out = tmp_path / "r.json"
    main(["verify", "--q", "3", "--suite", "char1-forward", "--out", str(out)])
    capsys.readouterr()
    code, stdout, _ = run_cli(capsys, "replay", "--witness", str(out))
    assert code == 0 and json.loads(stdout) == []


def test_replay_bad_file(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, _, _ = run_cli(capsys, "replay", "--witness", str(path))
    assert code == 2
    path.write_text(json.dumps({"kind": "mystery", "q": 3, "modulus": [0, 1]}))
    code, _, _ = run_cli(capsys, "replay", "--witness", str(path))
    assert code == 2
