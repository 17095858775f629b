import json
from pathlib import Path

import pytest

from acnielsen.cli import main

DATA = Path(__file__).resolve().parent.parent / "data" / "groups"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def _json(out):
    return json.loads(out)


def test_components_z5(capsys):
    code, out, _ = run(capsys, "components", "--group", DATA / "z5.json", "--n", 1, "--mode", "nielsen")
    assert code == 0 and _json(out)["component_count"] == 2


def test_components_builtin(capsys):
    code, out, _ = run(capsys, "components", "--group", "builtin:Q8", "--n", 2, "--mode", "ac")
    assert code == 0 and _json(out)["component_count"] == 1


def test_predict(capsys):
    code, out, _ = run(capsys, "predict", "--group", DATA / "z2x4.json", "--n", 2)
    assert code == 0 and _json(out)["components"] == 1


def test_certify_then_verify(capsys, tmp_path):
    code, out, _ = run(capsys, "certify", "--group", DATA / "h1.json", "--mode", "nielsen", "--tuple", "(1,0,5);(0,1,-3)")
    assert code == 0
    doc = _json(out)
    assert doc["replay"] is True
    path = tmp_path / "cert.json"
    path.write_text(out)
    code, out, _ = run(capsys, "verify", "--group", DATA / "h1.json", "--certificate", path)
    assert code == 0 and _json(out)["replay"] is True


def test_tampered_certificate_is_rejected(capsys, tmp_path):
    code, out, _ = run(capsys, "certify", "--group", DATA / "h1.json", "--tuple", "(1,0,5);(0,1,-3)")
    doc = _json(out)
    doc["target"] = [[1, 0, 1], [0, 1, 0]]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "verify", "--group", DATA / "h1.json", "--certificate", path)
    assert code == 2 and _json(err)["message"]


def test_path_and_no_path(capsys):
    code, out, _ = run(capsys, "path", "--group", DATA / "q8.json", "--mode", "ac", "--from", "i;j", "--to", "j;i")
    assert code == 0
    code, _, err = run(capsys, "path", "--group", DATA / "z5.json", "--from", "(1)", "--to", "(2)")
    assert code == 4 and _json(err)["message"]


def test_budget_exit_code(capsys):
    code, _, err = run(capsys, "components", "--group", DATA / "q8.json", "--n", 3, "--budget", 10)
    assert code == 3
    assert _json(err)["context"]["required"] == 512


def test_validation_errors(capsys):
    code, _, err = run(capsys, "components", "--group", "builtin:nope", "--n", 1)
    assert code == 2 and _json(err)["message"]
    code, _, _ = run(capsys, "components", "--group", "/does/not/exist.json", "--n", 1)
    assert code == 2
    code, _, _ = run(capsys, "certify", "--group", DATA / "h1.json", "--tuple", "(2,0,0);(0,1,0)")
    assert code == 2


def test_canonicalize_residue(capsys):
    code, out, _ = run(capsys, "canonicalize", "--group", DATA / "z5x5.json", "--tuple", "(2,0);(0,1)")
    assert code == 0
    assert "2" in json.dumps(_json(out))


def test_export_formats(capsys):
    code, out, _ = run(capsys, "export", "--group", "builtin:Z2", "--n", 1, "--format", "json")
    assert code == 0 and _json(out)["vertex_count"] == 1
    code, out, _ = run(capsys, "export", "--group", DATA / "z5.json", "--n", 1, "--format", "dot")
    assert code == 0 and out.startswith("graph nielsen {")


def test_output_file(capsys, tmp_path):
    target = tmp_path / "out.json"
    code, _, _ = run(capsys, "components", "--group", DATA / "z5.json", "--n", 1, "-o", target)
    assert code == 0 and json.loads(target.read_text())["component_count"] == 2


def test_verify_harnesses(capsys):
    code, out, _ = run(capsys, "verify", "preimage", "--group", DATA / "q8.json", "--n", 2)
    assert code == 0 and _json(out)["holds"] is True
    code, out, _ = run(capsys, "verify", "abelian-count", "--group", DATA / "z5x5.json", "--n", 2)
    assert code == 0


def test_inspect(capsys):
    code, out, _ = run(capsys, "inspect", "--group", DATA / "q8.json")
    assert code == 0
    doc = _json(out)
    assert doc["order"] == 8


def test_deterministic_across_backends(capsys):
    outs = []
    for backend in ("numpy", "numba"):
        code, out, _ = run(capsys, "components", "--group", DATA / "d4.json", "--n", 2, "--mode", "ac", "--backend", backend)
        assert code == 0
        doc = _json(out)
        doc["metadata"].pop("backend", None)
        outs.append(doc)
    assert outs[0] == outs[1]


def test_deterministic_across_workers(capsys):
    a = run(capsys, "components", "--group", DATA / "q8.json", "--n", 2, "--workers", 1)[1]
    b = run(capsys, "components", "--group", DATA / "q8.json", "--n", 2, "--workers", 2)[1]
    assert a == b


def test_byte_identical_output(capsys):
    argv = ("certify", "--group", DATA / "heis3.json", "--mode", "ac", "--words", "x1*[x1,x2];x2")
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first[0] == 0 and first[1] == second[1]
