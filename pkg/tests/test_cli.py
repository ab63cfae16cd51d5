import json
import os
import subprocess
import sys

import pytest

from conftest import fixture_path
from frobforge.cli import cached_run, main, run
from frobforge.report import FormatError, Report, emit, to_json
from frobforge.specfile import parse_ring_spec


def spec(name):
    return parse_ring_spec(fixture_path(name).read_text())


def test_fedder_report():
    rep = run("fedder", spec("cusp_p5"))
    assert rep.verdict == "not F-pure"
    obj = json.loads(emit(rep, "json"))
    assert {"command", "label", "p", "result", "version"} <= set(obj)
    assert obj["result"] == {"fpure": False}
    assert obj["schema"] == 1


def test_decompose_report_regular():
    rep = run("decompose", spec("poly1_p2"), {"e": 1})
    assert rep.result == {"summands": 2, "free": 2, "classes": 1}


def test_witness_csv():
    rep = run("witness", spec("cusp_p5"), {"e_max": 2})
    text = emit(rep, "csv")
    lines = text.strip().splitlines()
    assert lines[0] == "e,summands,distinct,cumulative_classes"
    assert lines[1:] == ["1,5,1,1", "2,25,1,1"]


def test_csv_rejected_for_non_tabular():
    with pytest.raises(FormatError):
        emit(run("fedder", spec("cusp_p5")), "csv")


def test_absence_claims_carry_bounds():
    rep = run("minop", spec("fermat_cubic_p7"), {"e_max": 1, "d_min": -2, "domain": True})
    human = emit(rep, "human")
    assert "up to" in human
    assert rep.verdict.endswith("none up to (e_max=1, d_min=-2)")
    assert rep.bounds["e_max"] == 1 and rep.bounds["d_min"] == -2
    loc = run("locgen", spec("fermat_cubic_p7"))
    assert loc.result == {"generates": False}
    assert "up to (e=1)" in loc.verdict


def test_verdict_elliptic_cone():
    rep = run("verdict", spec("fermat_cubic_p7"), {"e_max": 1, "d_min": -2, "m_max": 2, "domain": True})
    assert rep.result["sections_all_zero"] and rep.result["operators_absent"]
    assert rep.result["consistent"]
    assert "sections all-zero up to (m_max=2" in rep.verdict
    assert "none up to (e_max=1, d_min=-2)" in rep.verdict
    assert "no negative-degree operators possible for the computed range" in rep.verdict


def test_report_json_round_trip():
    rep = run("sections", spec("quadric_p3"), {"m_max": 2})
    again = Report.from_json(to_json(rep))
    assert to_json(again) == to_json(rep)
    assert emit(again, "csv") == emit(rep, "csv")


def test_cache_soundness(tmp_path):
    s = spec("quadric_p3")
    flags = {"e": 1, "cache_dir": str(tmp_path)}
    fresh = cached_run("decompose", s, flags)
    assert fresh.timing is not None
    cached = cached_run("decompose", s, flags)
    assert cached.timing is None
    assert to_json(cached) == to_json(fresh)
    assert len(list(tmp_path.glob("*.json"))) == 1
    assert "time: (cached)" in emit(cached, "human")
    # different bounds, different entry
    cached_run("decompose", s, {"e": 1, "degree_bound": 3, "cache_dir": str(tmp_path)})
    assert len(list(tmp_path.glob("*.json"))) == 2


def test_corrupt_cache_entry_is_recomputed(tmp_path):
    s = spec("cusp_p5")
    rep = cached_run("free-rank", s, {"cache_dir": str(tmp_path)})
    (entry,) = tmp_path.glob("*.json")
    entry.write_text("{not json")
    again = cached_run("free-rank", s, {"cache_dir": str(tmp_path)})
    assert to_json(again) == to_json(rep)


def _cli(args, env=None, stdin=None):
    e = dict(os.environ, **(env or {}))
    return subprocess.run([sys.executable, "-m", "frobforge.cli", *args], capture_output=True, text=True, env=e, input=stdin)


def test_exit_codes(tmp_path, capsys):
    cusp = str(fixture_path("cusp_p5"))
    assert main(["fedder", cusp, "--no-cache"]) == 0  # "not F-pure" is a result, not a failure
    bad = tmp_path / "bad.ring"
    bad.write_text("p=4\nvars=x\n")
    assert main(["fedder", str(bad)]) == 4
    assert main(["free-rank", str(fixture_path("poly3_p3")), "--e", "4", "--no-cache"]) == 3
    assert main(["fedder", cusp, "--format", "csv", "--no-cache"]) == 5
    assert main(["bogus", cusp]) == 2
    assert main(["fedder", str(tmp_path / "missing.ring")]) == 2
    assert main(["fedder", str(fixture_path("poly2_p2")), "--no-cache"]) == 2
    assert main(["minop", cusp, "--d-min", "1", "--no-cache"]) == 2
    err = capsys.readouterr().err
    assert "p must be prime" in err and "budget exceeded" in err


def test_stdin_spec():
    r = _cli(["fedder", "-", "--no-cache", "--format", "json"], stdin="p=7; vars=x,y,z; ideal=x^3+y^3+z^3")
    assert r.returncode == 0
    assert json.loads(r.stdout)["result"]["fpure"] is True


def test_thread_count_independence(tmp_path):
    outs = []
    for threads in ("1", "3"):
        r = _cli(["decompose", str(fixture_path("quadric_p3")), "--format", "json", "--no-cache"],
                 env={"FROBFORGE_THREADS": threads})
        assert r.returncode == 0, r.stderr
        outs.append(r.stdout)
        r = _cli(["sections", str(fixture_path("cusp_p5")), "--format", "json", "--no-cache"],
                 env={"FROBFORGE_THREADS": threads})
        outs.append(r.stdout)
    assert outs[0] == outs[2] and outs[1] == outs[3]


def test_cache_env_location(tmp_path):
    r = _cli(["fsig", str(fixture_path("quadric_p3")), "--format", "json"], env={"FROBFORGE_CACHE": str(tmp_path)})
    assert r.returncode == 0
    assert len(list(tmp_path.glob("*.json"))) == 1
    again = _cli(["fsig", str(fixture_path("quadric_p3")), "--format", "json"], env={"FROBFORGE_CACHE": str(tmp_path)})
    assert again.stdout == r.stdout
