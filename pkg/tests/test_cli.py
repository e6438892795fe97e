import json
import re
import subprocess
import sys

import pytest

from rinfty import char_sphere as cs
from rinfty import perm_core as pc
from rinfty import thompson as th
from rinfty.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def table_rows(text):
    lines = text.splitlines()
    sep = next(i for i, l in enumerate(lines) if set(l.replace(" ", "")) == {"-"})
    rows = []
    for line in lines[sep + 1:]:
        if not re.match(r"^\S+\s{2}", line):
            break
        rows.append(line.split())
    return rows


def test_sinf_witness_from_file(tmp_path, capsys):
    path = tmp_path / "f.json"
    path.write_text(json.dumps(pc.shift_pair(2, 1, 2).to_json()))
    code, out, _ = run(capsys, "sinf", "witness", "--input", str(path), "--count", "10")
    assert code == 0 and out.rstrip().endswith("PASS")
    rows = table_rows(out)
    assert len(rows) == 10
    certs = [r[3] for r in rows]
    assert len(set(certs)) == 10


@pytest.mark.parametrize("example", ["shift", "cycles", "pairs", "finitary"])
def test_sinf_examples_pass(example, capsys):
    code, out, _ = run(capsys, "sinf", "witness", "--example", example, "--count", "6", "--emit", "json")
    data = json.loads(out)
    assert code == 0 and data["passed"] and len(data["rows"]) == 6


def test_oracle_sweep_line(capsys):
    code, out, _ = run(capsys, "oracle", "sweep", "--max-order", "8")
    assert code == 0
    m = re.search(r"invariant normal subgroup triples (\d+)", out)
    line = re.search(r"addition formula verified on (\d+) instances, hypothesis violated on (\d+)", out)
    assert m and line
    assert int(line.group(1)) + int(line.group(2)) == int(m.group(1))


def test_oracle_sweep_report_file(tmp_path, capsys):
    path = tmp_path / "sweep.json"
    code, _, _ = run(capsys, "oracle", "sweep", "--max-order", "6", "--report", str(path))
    data = json.loads(path.read_text())
    assert code == 0 and data["discrepancies"] == [] and data["verified"] > 0


def test_reidemeister(capsys):
    code, out, _ = run(capsys, "oracle", "reidemeister", "--group", "S3", "--check-inner", "--emit", "json")
    assert code == 0 and json.loads(out)["passed"]
    code, _, err = run(capsys, "oracle", "reidemeister", "--group", "nonsense")
    assert code == 2 and "error" in err


def test_thompson_family(capsys):
    code, out, _ = run(capsys, "thompson", "family", "--count", "5")
    assert code == 0
    rows = table_rows(out)
    assert [int(r[0]) for r in rows] == [1, 2, 3, 4, 5]
    for r in rows:
        k = int(r[0])
        assert (int(r[2]), r[3], int(r[4])) == (2 * k, "True", 2 * k)


def test_thompson_power_check(tmp_path, capsys):
    code, out, _ = run(capsys, "thompson", "power-check", "--trials", "5")
    assert code == 0
    path = tmp_path / "rot.json"
    path.write_text(th.rotation("1/4").dumps())
    code, out, _ = run(capsys, "thompson", "power-check", "--input", str(path), "--powers", "2")
    assert code == 0 and "unsupported" in out
    code, _, _ = run(capsys, "thompson", "power-check", "--powers", "0,2")
    assert code == 2


def test_houghton_commands(capsys):
    code, out, _ = run(capsys, "houghton", "witness", "--n", "3", "--sigma", "(1 2)", "--count", "4")
    assert code == 0 and len(table_rows(out)) == 4
    code, out, _ = run(capsys, "houghton", "aut-decompose", "--n", "3", "--trials", "3")
    assert code == 0
    code, _, _ = run(capsys, "houghton", "witness", "--n", "3", "--sigma", "1,1,2")
    assert code == 2


def test_sigma_witness_exit_codes(tmp_path, capsys):
    code, out, _ = run(capsys, "sigma", "witness", "--n", "3", "--trials", "30")
    assert code == 0
    # a 4-cycle with every pair-cycle product -1 has no witness at all
    idx = cs.pair_index(4)
    sigma = (2, 3, 4, 1)
    signs = [1] * 12
    for (i, j) in [(1, 2), (1, 3), (1, 4)]:
        signs[idx[(i, j)]] = -1
    M = cs.from_signed_pairs(sigma, signs)
    assert all(M.cycle_sign(c) == -1 for c in M.cycles())
    path = tmp_path / "m.json"
    path.write_text(json.dumps(M.to_json(4)))
    code, out, _ = run(capsys, "sigma", "witness", "--matrix", str(path))
    assert code == 1 and out.rstrip().endswith("FAIL")
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 2, "matrix": [[1, 1], [0, 1]]}))
    code, _, err = run(capsys, "sigma", "witness", "--matrix", str(bad))
    assert code == 2 and "signed permutation" in err


def test_sigma_orbit_sum(tmp_path, capsys):
    pts = cs.SpherePointSet(("a", "b"), {"X": (0, 1)},
                            (cs.SpherePoint((1, 2), "X", "D_Q"), cs.SpherePoint((2, 1), "X", "D_Q")),
                            {"X": (1, 1)})
    data = pts.to_json()
    data["action"] = [[0, 1], [1, 0]]
    path = tmp_path / "p.json"
    path.write_text(json.dumps(data))
    code, out, _ = run(capsys, "sigma", "orbit-sum", "--points", str(path))
    assert code == 0 and [r[1] for r in table_rows(out)] == ["1", "1"]
    data["action"] = [[-1, 0], [0, -1]]
    data["points"] = [{"coords": ["1", "2"], "factor": "X", "tag": "D_Q"},
                      {"coords": ["-1", "-2"], "factor": "X", "tag": "D_Q"}]
    data["certificates"] = {"X": ["1", "0"]}
    path.write_text(json.dumps(data))
    code, out, _ = run(capsys, "sigma", "orbit-sum", "--points", str(path))
    assert code == 1 and "may vanish" in out


def test_usage_errors(tmp_path, capsys):
    assert run(capsys, "thompson", "family", "--bogus")[0] == 2
    assert run(capsys, "nothing")[0] == 2
    assert run(capsys, "thompson", "family", "--count", "0")[0] == 2
    missing = tmp_path / "missing.json"
    code, _, err = run(capsys, "sinf", "witness", "--input", str(missing))
    assert code == 2 and "cannot read" in err
    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    assert run(capsys, "sinf", "witness", "--input", str(junk))[0] == 2


def test_output_is_deterministic():
    cmd = [sys.executable, "-m", "rinfty", "sigma", "witness", "--n", "3", "--trials", "15",
           "--seed", "7", "--emit", "json"]
    a = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    assert a == b and json.loads(a)["passed"]
