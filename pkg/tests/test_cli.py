import json
from fractions import Fraction as F
from pathlib import Path

import pytest

from isoflat import cli

from conftest import DATA, SQRT2, lho13, q


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def dump(tmp_path: Path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return path


def test_enumerate_counts(capsys):
    code, out, _ = run(capsys, "enumerate", "--chords", 4, "--cycles", 3, "--count")
    assert code == 0 and out.strip() == "2"
    code, out, _ = run(capsys, "enumerate", "--chords", 4, "--cycles", 3, "--count", "--signed")
    assert out.strip() == "4"
    code, out, _ = run(capsys, "enumerate", "-k", 1, "--count")
    assert code == 0 and out.strip() == "1"
    code, out, _ = run(capsys, "enumerate", "-k", 3, "--format", "json", "--jobs", 1)
    assert code == 0 and len(json.loads(out)) == 3


def test_enumerate_bad_input(capsys):
    assert run(capsys, "enumerate", "--chords", 9)[0] == 2
    assert run(capsys, "enumerate")[0] == 2
    assert run(capsys, "nonsense")[0] == 2


def test_classify_worked(capsys):
    code, out, _ = run(capsys, "classify", DATA / "worked_lho.json", "--format", "json")
    info = json.loads(out)
    assert code == 0 and info["kind"] == "LargeHeadOctopus" and info["genus"] == 1
    code, out, _ = run(capsys, "classify", DATA / "worked_butterfly.json")
    assert code == 0 and "Butterfly" in out
    code, out, _ = run(capsys, "classify", DATA / "worked_lho.json", "--format", "dot")
    assert code == 0 and "graph" in out


def test_invariants_worked(capsys):
    code, out, _ = run(capsys, "invariants", DATA / "worked_period.json", "--format", "json")
    info = json.loads(out)
    assert code == 0 and info["case"] == "3a"
    assert any("hypothesis" in n and "holds" in n for n in info["notes"])


def test_closure_file(capsys):
    code, out, _ = run(capsys, "closure", DATA / "dense_line.json", "--format", "json")
    assert code == 0 and json.loads(out)["tag"] == "DenseLine"


def test_connect_and_verify(capsys, tmp_path):
    cert = tmp_path / "cert.json"
    code, out, _ = run(capsys, "connect", DATA / "worked_lho.json", DATA / "worked_lho_next.json", "-o", cert)
    assert code == 0 and "verified = true" in out
    code, out, _ = run(capsys, "verify", cert)
    assert code == 0
    obj = json.loads(cert.read_text())
    obj["steps"][0]["short"] = obj["steps"][0]["long"]
    code, out, _ = run(capsys, "verify", dump(tmp_path, "bad.json", obj))
    assert code == 1 and "step 0" in out
    obj["schema"] = 99
    assert run(capsys, "verify", dump(tmp_path, "schema.json", obj))[0] == 2


def test_connect_butterfly_json(capsys):
    code, out, err = run(capsys, "connect", DATA / "worked_butterfly.json", DATA / "worked_lho.json", "--format", "json")
    assert code == 0 and json.loads(out)["schema"] == 1 and "verified = true" in err


def test_input_errors(capsys, tmp_path):
    assert run(capsys, "classify", tmp_path / "missing.json")[0] == 2
    assert run(capsys, "classify", dump(tmp_path, "junk.json", {"d": 2}))[0] == 2
    (tmp_path / "broken.json").write_text("{")
    assert run(capsys, "verify", tmp_path / "broken.json")[0] == 2
    code, _, err = run(capsys, "classify", DATA / "worked_lho.json", "--d", 3)
    assert code == 2 and "d=2" in err


def test_env_d(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("ISOFLAT_D", "3")
    # the file's d governs; ISOFLAT_D only sets the default field
    assert run(capsys, "classify", DATA / "worked_lho.json")[0] == 0
    monkeypatch.setenv("ISOFLAT_D", "x")
    assert run(capsys, "enumerate", "-k", 2, "--count")[0] == 2


def test_connect_unsupported_and_mismatch(capsys, tmp_path):
    rat = cli.decorated_to_json(lho13(q(F(1, 3)), q(F(1, 5))).dec)
    path = dump(tmp_path, "rat.json", rat)
    code, _, err = run(capsys, "connect", path, path)
    assert code == 3 and err.startswith("unsupported")
    other = dump(tmp_path, "other.json", cli.decorated_to_json(lho13(SQRT2 * F(1, 4), q(F(1, 5))).dec))
    code, _, err = run(capsys, "connect", DATA / "worked_lho.json", other)
    assert code == 2 and "periods differ at class" in err


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest", "--seed", 3)
    assert code == 0


@pytest.mark.parametrize("name", ["worked_lho.json", "worked_lho_next.json", "worked_butterfly.json"])
def test_data_files_are_worked_period(name):
    obj = json.loads((DATA / name).read_text())
    ref = json.loads((DATA / "worked_period.json").read_text())
    assert obj["values"] == ref["values"]
