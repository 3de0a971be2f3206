import json

import numpy as np
import pytest

from bjpreserve import jsonio
from bjpreserve.cli import RunConfig, main
from bjpreserve.core import AlgebraElement
from bjpreserve.gallery import c2_embed_map, transpose_map
from bjpreserve.preservers import RealLinearMap, from_canonical, random_canonical


def write(path, obj):
    path.write_text(jsonio.dumps(obj))
    return str(path)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def elem_file(tmp_path, name, a):
    return write(tmp_path / name, jsonio.element_to_json(a))


def test_check_c_plus_c_pair(tmp_path, capsys):
    a = elem_file(tmp_path, "a.json", AlgebraElement.from_scalars([1, 0]))
    b = elem_file(tmp_path, "b.json", AlgebraElement.from_scalars([0, 5]))
    code, out, _ = run(capsys, "check", a, b)
    assert code == 0
    res = json.loads(out)
    assert res["mutual"] is True and res["witness"]["block"] == 0


def test_check_equal_elements(tmp_path, capsys):
    x = AlgebraElement((2,), [np.array([[1, 2], [0, 1j]])])
    a = elem_file(tmp_path, "a.json", x)
    code, out, _ = run(capsys, "check", a, a)
    assert code == 0 and json.loads(out)["mutual"] is False


def test_check_zero_b(tmp_path, capsys):
    a = elem_file(tmp_path, "a.json", AlgebraElement.identity((2,)))
    b = elem_file(tmp_path, "b.json", AlgebraElement.zeros((2,)))
    code, out, _ = run(capsys, "check", a, b)
    res = json.loads(out)
    assert code == 0 and res["strong_ab"] is True and res["dist_ab"] == 1.0


def test_check_errors(tmp_path, capsys):
    a = elem_file(tmp_path, "a.json", AlgebraElement.identity((2,)))
    b = elem_file(tmp_path, "b.json", AlgebraElement.identity((1, 1)))
    assert run(capsys, "check", a, b)[0] == 3
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "check", a, str(bad))[0] == 2
    assert run(capsys, "check", a, str(tmp_path / "missing.json"))[0] == 2
    schema = write(tmp_path / "schema.json", {"shape": [2], "blocks": []})
    assert run(capsys, "check", a, schema)[0] == 2


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["gallery", "nope"])
    assert e.value.code == 2


def test_dist(tmp_path, capsys):
    a = elem_file(tmp_path, "a.json", AlgebraElement((2,), [np.diag([1, 0])]))
    b = elem_file(tmp_path, "b.json", AlgebraElement((2,), [np.diag([0, 1])]))
    code, out, _ = run(capsys, "dist", a, b)
    assert code == 0 and json.loads(out)["dist_ab"] == pytest.approx(1)


def test_decompose_canonical(tmp_path, capsys):
    c = random_canonical((2, 3), 1)
    f = write(tmp_path / "m.json", jsonio.map_to_json(from_canonical(c)))
    code, out, _ = run(capsys, "decompose", f)
    res = json.loads(out)
    assert code == 0 and res["status"] == "ok"
    assert res["reconstruction_error"] <= 1e-8
    got = jsonio.canonical_from_json(res["canonical"])
    assert got.pi == c.pi and got.J == c.J and got.gamma == pytest.approx(c.gamma, rel=1e-9)


def test_decompose_transpose_exit_4(tmp_path, capsys):
    f = write(tmp_path / "t.json", jsonio.map_to_json(transpose_map((3,))))
    code, out, _ = run(capsys, "decompose", f, "--trials", 100)
    res = json.loads(out)
    assert code == 4 and res["status"] == "failed" and res["step"] == 7
    assert res["violation"]["image_strong_ab"] is False or res["violation"]["image_strong_ba"] is False


def test_decompose_m2_exit_5(tmp_path, capsys):
    f = write(tmp_path / "m.json", jsonio.map_to_json(RealLinearMap.identity((2,))))
    code, out, _ = run(capsys, "decompose", f)
    assert code == 5 and json.loads(out)["status"] == "exceptional-shape"


def test_factor(tmp_path, capsys):
    f = write(tmp_path / "t.json", jsonio.map_to_json(transpose_map((3,))))
    code, out, _ = run(capsys, "factor", f)
    res = json.loads(out)
    assert code == 0 and res["factorization"]["blocks"][0]["transpose"] is True
    g = write(tmp_path / "g.json", jsonio.map_to_json(c2_embed_map()))
    code, out, _ = run(capsys, "factor", g)
    res = json.loads(out)
    assert code == 4 and res["singularity_witness"]["kind"] == "singular-to-invertible"


def test_verify(tmp_path, capsys):
    f = write(tmp_path / "m.json", jsonio.map_to_json(from_canonical(random_canonical((3,), 2))))
    code, out, _ = run(capsys, "verify", f, "--trials", 200)
    res = json.loads(out)
    assert code == 0 and res["mutual_preserver"] and res["singularity_preserver"]
    g = write(tmp_path / "e.json", jsonio.map_to_json(c2_embed_map()))
    assert run(capsys, "verify", g)[0] == 4
    code, out, _ = run(capsys, "verify", g, "--skip-surjectivity")
    res = json.loads(out)
    assert code == 0 and res["mutual_preserver"] and not res["singularity_preserver"]


@pytest.mark.parametrize("name,preserver,decomp", [
    ("c", True, "exceptional-shape"),
    ("c2-scale", True, "exceptional-shape"),
    ("c2-embed", True, None),
    ("m2-general", True, "exceptional-shape"),
    ("transpose", False, "failed at step 7"),
])
def test_gallery(capsys, name, preserver, decomp):
    code, out, _ = run(capsys, "gallery", name, "--trials", 200)
    res = json.loads(out)
    assert code == 0 and res["mutual_preserver"] is preserver
    if decomp:
        assert res["decompose"] == decomp
    if not preserver:
        assert res["violation"] is not None


@pytest.mark.parametrize("kind", ["element", "unitary", "canonical", "canonical-map", "factorization-map"])
def test_gen_kinds(tmp_path, capsys, kind):
    out_file = tmp_path / f"{kind}.json"
    code, out, _ = run(capsys, "gen", kind, "--shape", "1,2", "--seed", 4, "--out", out_file)
    assert code == 0 and out_file.read_text() == out


def test_gen_pair_files(tmp_path, capsys):
    stem = tmp_path / "pair.json"
    code, out, _ = run(capsys, "gen", "pair", "--shape", "2x3", "--seed", 42, "--out", stem)
    assert code == 0
    a, b = tmp_path / "pair_a.json", tmp_path / "pair_b.json"
    code, out, _ = run(capsys, "check", a, b)
    assert json.loads(out)["mutual"] is True


def test_gen_needs_shape(capsys):
    assert run(capsys, "gen", "element")[0] == 2
    assert run(capsys, "gen", "element", "--shape", "2,,3")[0] == 2
    assert run(capsys, "gen", "element", "--shape", "2,0")[0] == 2
    assert run(capsys, "gen", "element", "--shape", "2x3")[0] == 0


def test_orthograph_files(tmp_path, capsys):
    code, out, _ = run(capsys, "orthograph", "--shape", "1,1", "--samples", 3, "--seed", 2, "--out", tmp_path)
    res = json.loads(out)
    assert code == 0
    dot = (tmp_path / "orthograph_1x1_seed2.dot").read_text()
    assert dot.startswith("graph G {")
    data = json.loads((tmp_path / "orthograph_1x1_seed2.json").read_text())
    assert len(data["edges"]) == res["edges"]


def test_cli_determinism(tmp_path, capsys):
    outs = []
    for _ in range(2):
        run(capsys, "gen", "canonical-map", "--shape", "2,3", "--seed", 9, "--out", tmp_path / "m.json")
        outs.append(run(capsys, "verify", tmp_path / "m.json", "--trials", 100, "--seed", 3)[1])
        run(capsys, "orthograph", "--shape", "3", "--seed", 1, "--out", tmp_path / "g")
        outs.append((tmp_path / "g" / "orthograph_3_seed1.dot").read_bytes())
    assert outs[0] == outs[2] and outs[1] == outs[3]


def test_run_config_rejects_unknown_fields():
    with pytest.raises(ValueError, match="unknown"):
        RunConfig.from_dict({"command": "check", "bogus": 1})
    with pytest.raises(ValueError):
        RunConfig.from_dict({"command": "verify", "trials": -1})
    with pytest.raises(ValueError):
        RunConfig.from_dict({"command": "verify", "tol": 2.0})
