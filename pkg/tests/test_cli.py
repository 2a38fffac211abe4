import json
import shutil
import subprocess

import pytest

from kleinian import __version__
from kleinian.cli import main
from kleinian.crossed_algebra import AlgebraContext
from kleinian.ideals import FractionalIdeal, LocX, LocY, ideal_to_json
from kleinian.quiver import QuiverPoint, make_point, random_point, zero_point
from kleinian.scalars import ONE, Poly, Q, RatFunc


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(path)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


@pytest.fixture
def point_file(tmp_path):
    p = random_point(AlgebraContext(2, (Q(1), Q(3))), 0, (1, 2), seed=5)
    return write(tmp_path, "p.json", p.to_json())


def test_validate_ok(point_file, capsys):
    code, doc = run(["validate", point_file], capsys)
    assert code == 0
    assert doc["status"] == "ok" and doc["result"]["valid"]
    assert doc["tool"] == "kleinian" and doc["version"] == __version__ and doc["config_hash"]


def test_validate_moment_violation(tmp_path, capsys):
    bad = make_point(AlgebraContext(1, (ONE,)), 0, (1,), [[[0]]], [[[0]]], [1], [2], check=False)
    code, doc = run(["validate", write(tmp_path, "bad.json", bad.to_json())], capsys)
    assert code == 2
    assert doc["status"] == "failed" and not doc["result"]["valid"] and doc["result"]["errors"]


def test_validate_malformed_json(tmp_path, capsys):
    code, _ = run(["validate", write(tmp_path, "x.json", "{not json")], capsys)
    assert code == 3
    code, _ = run(["validate", write(tmp_path, "y.json", {"m": 1})], capsys)
    assert code == 3
    assert main(["no-such-command"]) == 3


def test_point_to_ideal_empty_point(tmp_path, capsys):
    ctx = AlgebraContext(3, (ONE,) * 3)
    p = make_point(ctx, 2, (0, 0, 0), [[], [], []], [[], [], []], [], [], check=False)
    code, doc = run(["point-to-ideal", write(tmp_path, "p0.json", p.to_json())], capsys)
    assert code == 0
    res = doc["result"]
    assert res["n"] == 2 and len(res["generators"]) == 2
    assert res["generators"][0] == res["generators"][1]
    assert res["meta"]["N"] == 0


def test_point_to_ideal_zero_point_and_back(tmp_path, capsys):
    pf = write(tmp_path, "z.json", zero_point().to_json())
    out = str(tmp_path / "ideal.json")
    assert main(["point-to-ideal", pf, "-o", out]) == 0
    meta = json.loads(open(out).read())["result"]["meta"]
    assert meta["lambda"]["values"] == [[0, 0, "1"]]
    code, doc = run(["ideal-to-point", out], capsys)
    assert code == 0
    q = QuiverPoint.from_json({k: v for k, v in doc["result"].items() if k != "meta"})
    assert q.N == 1 and q.dims == (1,)


def test_ideal_to_point_out_of_family(tmp_path, capsys):
    ctx = AlgebraContext(1, (ONE,))
    f = RatFunc(Poly([ONE]), Poly([Q(0), ONE]))
    I = FractionalIdeal(ctx, 0, [LocX(ctx, 0, {0: f}), LocY.make(ctx, 0, {0: f})])
    code, doc = run(["ideal-to-point", write(tmp_path, "i.json", ideal_to_json(I))], capsys)
    assert code == 4
    assert doc["result"]["error"] == "NotInFamilyError"


def test_roundtrip_witness(point_file, capsys):
    code, doc = run(["roundtrip", point_file], capsys)
    assert code == 0
    assert doc["result"]["gauge_equivalent"] and doc["result"]["witness"]
    assert doc["result"]["lambda_agrees"]


def test_roundtrip_window_too_large(point_file, capsys):
    code, doc = run(["--bound", "6", "--window", "9", "roundtrip", point_file], capsys)
    assert code == 5
    assert doc["result"]["error"] == "WindowError"


def test_dim_table_m2(capsys):
    code, doc = run(["dim-table", "--m", "2", "--max-n", "2"], capsys)
    assert code == 0
    rows = doc["result"]["rows"]
    row = next(r for r in rows if r["n"] == 0 and r["dims"] == [1, 0])
    assert row["formula"] == 0 and row["point_found"] and row["tangent"] == 0
    empty = next(r for r in rows if r["n"] == 0 and r["dims"] == [0, 1])
    assert empty["empty"] and not empty["point_found"]
    assert all(r["consistent"] for r in rows)


def test_orbit(tmp_path, point_file, capsys):
    good = write(tmp_path, "s.json", [{"shearX": "-2 y"}, {"scale": "3"}])
    code, doc = run(["orbit", point_file, good], capsys)
    assert code == 0 and doc["result"]["equivariant"]
    bad = write(tmp_path, "b.json", [{"shearX": "y^2"}])
    code, doc = run(["orbit", point_file, bad], capsys)
    assert code == 2 and not doc["result"]["automorphism"]["valid"]


def test_outputs_are_byte_identical(point_file, capsys):
    main(["--seed", "3", "point-to-ideal", point_file])
    a = capsys.readouterr().out
    main(["--seed", "3", "point-to-ideal", point_file])
    b = capsys.readouterr().out
    assert a == b
    main(["--pretty", "--seed", "3", "point-to-ideal", point_file])
    c = capsys.readouterr().out
    assert json.loads(c) == json.loads(a) and c != a


def test_selfcheck_subset(capsys):
    code = main(["selfcheck", "--only", "1", "10"])
    captured = capsys.readouterr()
    assert code == 0
    assert json.loads(captured.out)["result"]["passed"]
    assert "[PASS] criterion 1" in captured.err


@pytest.mark.skipif(shutil.which("kleinian") is None, reason="console script not installed")
def test_console_script():
    out = subprocess.run(["kleinian", "--version"], capture_output=True, text=True, check=True)
    assert out.stdout.strip() == f"kleinian {__version__}"
