import csv
import json
import subprocess
import sys

import pytest

from resolvent.cli import emit_plot_data, main
from resolvent.monodromy import general_family, power_family, track_loop, petal_loops
from resolvent.poly import Polynomial


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        p = tmp_path / name
        p.write_text(json.dumps(obj))
        return str(p)

    return write


def test_disc(capsys, files):
    f = files("x2m1.json", {"kind": "rational", "coeffs": ["-1/1", "0/1", "1/1"]})
    assert run(capsys, "disc", "--in", f)[:2] == (0, {"discriminant": "4/1"})


def test_chain_bound(capsys):
    code, out, _ = run(capsys, "chain-bound", "--n", "7", "--even-only")
    assert code == 0
    assert out["n"] == 7 and out["bound"] == 3 and len(out["witness"]) == 3


def test_table(capsys):
    code, out, _ = run(capsys, "table")
    assert code == 0
    formula, hilbert = out["rows"]
    assert formula["values"] == [2, 2, 3, 3, 4] and formula["consistent"]
    assert hilbert["values"] == [1, 2, 3, 4, 4]
    assert hilbert["source"] == "Hilbert (per paper table)"


def test_roots_and_round_trip(capsys, files):
    f = files("f.json", (Polynomial.from_roots([1, 1, 2])).to_json())
    code, out, _ = run(capsys, "roots", "--in", f)
    assert code == 0 and out["multiplicities"] == [2, 1]


def test_tschirnhaus(capsys, files):
    f = files("f.json", {"kind": "rational", "coeffs": ["-2/1", "0/1", "0/1", "1/1"]})
    phi = files("phi.json", {"kind": "rational", "coeffs": ["0/1", "0/1", "1/1"]})
    code, out, _ = run(capsys, "tschirnhaus", "--in", f, "--phi", phi)
    assert out["polynomial"]["coeffs"] == ["-4/1", "0/1", "0/1", "1/1"]
    assert Polynomial.from_json(out["polynomial"]) == Polynomial([-4, 0, 0, 1])


def test_bring_jerrard_and_normalize(capsys, files):
    f = files("q.json", {"kind": "rational", "coeffs": ["2/1", "0/1", "-1/1", "0/1", "3/1", "1/1"]})
    code, out, _ = run(capsys, "bring-jerrard", "--in", f)
    assert code == 0 and out["residuals"] < 1e-9
    assert set(out) == {"p", "q", "phi", "residuals"}
    code, out, _ = run(capsys, "normalize", "--p", "1", "--q", "1")
    assert out == {"c": [1.0, 0.0], "scale": [1.0, 0.0]}
    code, out, _ = run(capsys, "klein", "--gamma", "1+2i")
    assert len(out["polynomial"]["coeffs"]) == 6


def test_monodromy_and_trace(capsys, files, tmp_path):
    fam = files("fam.json", power_family(2).to_json())
    trace = tmp_path / "trace.csv"
    code, out, _ = run(capsys, "monodromy", "--family", fam, "--seed", "7", "--trace", str(trace))
    assert code == 0 and out["order"] == 2 and out["generators"] == ["(1 2)"]
    rows = list(csv.reader(trace.open()))
    assert rows[0] == ["step", "a1_re", "a1_im", "x1_re", "x1_im", "x2_re", "x2_im"]
    first = [float(v) for v in rows[1][3:]]
    last = [float(v) for v in rows[-1][3:]]
    assert abs(last[0] - first[2]) < 1e-9 and abs(last[2] - first[0]) < 1e-9


def test_inertia(capsys, files):
    fam = files("fam.json", general_family(3).to_json())
    pt = files("pt.json", [[-1, 0], [0, 0], [0, 0]])
    code, out, _ = run(capsys, "inertia", "--family", fam, "--point", pt, "--radius", "1e-3")
    assert code == 0 and out["order"] == 2


def test_phi(capsys, files):
    g = files("g.json", {"n": 3, "generators": ["(1 2)", "(1 2 3)"]})
    r = files("r.json", [[1, 0], [1, 0], [2, 0]])
    code, out, _ = run(capsys, "phi", "--group", g, "--roots", r, "--partition", "{1,2}{3}", "--check-vanish")
    assert code == 0 and out["vanishes"] and out["restricted_vanishes"]
    code, out, _ = run(capsys, "phi", "--group", g, "--roots", r, "--partition", "{1}{2}{3}", "--check-vanish")
    assert out["vanishes"] and "warning" in out


def test_bound(capsys, files):
    fam = files("fam.json", general_family(5).to_json())
    code, out, _ = run(capsys, "bound", "--family", fam, "--even-only")
    assert code == 0 and out["q1"] == 2 and out["group_order"] == 120
    assert [c["partition"] for c in out["chain"]] == ["{1,2,3}{4}{5}", "{1,2,3,4,5}"]
    assert "chain_length_unconstrained" in out


def test_exit_codes(capsys, files):
    with pytest.raises(SystemExit) as info:
        main(["bogus"])
    assert info.value.code == 1
    assert run(capsys, "disc", "--in", "/nonexistent.json")[0] == 1
    bad = files("bad.json", {"coeffs": "nope"})
    assert run(capsys, "disc", "--in", bad)[0] == 1
    dbl = files("dbl.json", {"kind": "rational", "coeffs": ["1/1", "-1/1", "-1/1", "2/1", "-2/1", "1/1"]})
    code, _, err = run(capsys, "bring-jerrard", "--in", dbl)
    assert code == 2 and "degenerate" in err
    assert run(capsys, "normalize", "--p", "1", "--q", "0")[0] == 2


def test_determinism(capsys, files):
    fam = files("fam.json", general_family(4).to_json())
    outputs = []
    for _ in range(2):
        main(["monodromy", "--family", fam, "--seed", "11"])
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1]


def test_emit_plot_data_empty(tmp_path):
    path = tmp_path / "empty.csv"
    emit_plot_data([], path, n=2, m=1)
    assert path.read_text().strip() == "step,a1_re,a1_im,x1_re,x1_im,x2_re,x2_im"


def test_emit_plot_data_quintic(tmp_path):
    fam = general_family(5)
    loop = petal_loops(fam, [0.5, 0.1j, -0.3, 0.2, 1.0])[0]
    trace = []
    track_loop(fam, loop, trace=trace)
    path = tmp_path / "q.csv"
    emit_plot_data(trace, path)
    rows = list(csv.reader(path.open()))
    assert len(rows[0]) == 1 + 10 + 10
    steps = [int(r[0]) for r in rows[1:]]
    assert steps == sorted(steps)


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "resolvent", "chain-bound", "--n", "5"], capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["bound"] == 2
