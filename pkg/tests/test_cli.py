import json

import pytest

from latticeforge.cli import main
from latticeforge.polytope import from_json, normalized_volume


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out.splitlines()
    return code, out[-2] if len(out) >= 2 else "", json.loads(out[-1]) if out else None


def test_decompose(capsys):
    code, summary, obj = run(capsys, "decompose", "--d", "3", "--m", "500")
    assert code == 0 and "xs=(3, 3, 1)" in summary and "remainder 20" in summary
    assert obj["result"]["trace"] == [500, 284, 68, 20]
    assert obj["manifest"]["subcommand"] == "decompose"
    code, _, obj = run(capsys, "decompose", "--poly", "1,1,1,0", "--m", "100")
    assert code == 0 and obj["result"]["remainder"] <= 6


def test_construct_emit_round_trip(capsys, tmp_path):
    path = tmp_path / "p.json"
    code, summary, obj = run(capsys, "construct", "--d", "3", "--r", "60", "--m", "500",
                             "--emit", str(path), "--trace")
    assert code == 0 and "v=215500" in summary
    poly = from_json(path.read_text())
    assert normalized_volume(poly) == 215500
    assert [s["claimed"] for s in obj["result"]["steps"]] == [216, 216, 48, 20]


@pytest.mark.parametrize("argv,code", [
    (["construct", "--d", "3", "--r", "60", "--m", "1729"], 2),
    (["decompose", "--poly", "1,-1,0", "--m", "3"], 2),
    (["hull-lab", "--shape", "ball", "--d", "3", "--r", "60", "--budget", "100"], 4),
    (["arnold", "--d", "2", "--r", "20"], 2),
    (["arnold", "--d", "2", "--r", "100", "--budget", "10"], 4),
    (["frobnicate"], 1),
    (["construct", "--d", "3"], 1),
    ([], 1),
])
def test_exit_codes(capsys, argv, code):
    assert main(argv) == code
    capsys.readouterr()


def test_hull_lab_csv(capsys, tmp_path):
    path = tmp_path / "h.csv"
    code, _, obj = run(capsys, "hull-lab", "--shape", "orthant", "--d", "2",
                       "--scan", "64,128,256,512,1024", "--csv", str(path))
    assert code == 0
    lines = path.read_text().splitlines()
    assert lines[0] == ("shape,d,r,f0,|X|,max_closeness_num,max_closeness_den_or_float,"
                        "hull_volume,gap_volume")
    assert len(lines) == 6
    code, _, obj = run(capsys, "hull-lab", "--shape", "paraboloid", "--d", "2", "--r", "7/2")
    assert code == 0 and obj["result"]["vertex_claim"] == {"7/2": True}


def test_arnold_csv_deterministic(capsys, tmp_path):
    outs = []
    for k in range(2):
        path = tmp_path / f"a{k}.csv"
        code, _, obj = run(capsys, "arnold", "--d", "2", "--r", "100", "--markers",
                           "--sample", "40", "--seed", "5", "--jobs", "1", "--csv", str(path))
        assert code == 0 and obj["result"]["distinct"] == 40
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    assert outs[0].decode().splitlines()[0] == "Z_bitmask,m_Z,f0,distinct_flag"


def test_gaps(capsys, tmp_path):
    path = tmp_path / "cert.json"
    code, summary, obj = run(capsys, "gaps", "--d", "3", "--r", "6", "--strategy", "layered",
                             "--jobs", "1", "--emit", str(path))
    assert code == 0
    for span in ("[37,41] empty", "[44,47] empty", "[53,53] empty", "[48,52] achieved"):
        assert span in summary
    cert = json.loads(path.read_text())
    assert cert["ok"] and len(cert["intervals"]) == 4
    code, summary, obj = run(capsys, "gaps", "--d", "2", "--r", "5", "--strategy", "exhaustive")
    assert code == 0 and obj["result"]["gaps"] == [[1, 4]]


def test_verify_all_subset(capsys):
    assert main(["verify-all", "--only", "4,8", "--jobs", "1"]) == 0
    out = capsys.readouterr().out
    assert out.count("[PASS]") == 2
