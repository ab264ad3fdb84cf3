import json
from fractions import Fraction

import numpy as np
import pytest

from conftest import random_ela
from elastica.cli import (
    EXIT_DIFFERENT,
    EXIT_MISMATCH,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_SCOPE,
    DocumentError,
    dump_document,
    load_document,
    main,
)
from elastica.harmonic import decompose
from elastica.normal_forms import NormalFormParams, build, ela_from_parts


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def run(capsys, argv):
    code = main(argv)
    return code, capsys.readouterr().out


def cubic_voigt():
    return [[5, 3, 3, 0, 0, 0], [3, 5, 3, 0, 0, 0], [3, 3, 5, 0, 0, 0],
            [0, 0, 0, 2, 0, 0], [0, 0, 0, 0, 2, 0], [0, 0, 0, 0, 0, 2]]


def test_classify_text(tmp_path, capsys):
    path = write(tmp_path, "c.json", {"format": "voigt6", "data": cubic_voigt()})
    code, out = run(capsys, ["classify", path])
    assert code == EXIT_OK
    assert out.splitlines()[0] == "cubic"


def test_classify_json_exact(tmp_path, capsys):
    path = write(tmp_path, "c.json", {"format": "voigt6", "data": cubic_voigt()})
    code, out = run(capsys, ["classify", path, "--exact", "--json"])
    rep = json.loads(out)
    assert code == EXIT_OK and rep["label"] == "cubic" and rep["kind"] == "ela"
    assert all("threshold" in c for c in rep["checks"])


def test_classify_format_flag(tmp_path, capsys):
    path = write(tmp_path, "raw.json", cubic_voigt())
    assert run(capsys, ["classify", path])[0] == EXIT_PARSE
    code, out = run(capsys, ["classify", path, "--format", "voigt6"])
    assert code == EXIT_OK and out.startswith("cubic")


def test_classify_h4_and_sym2(tmp_path, capsys):
    h = write(tmp_path, "h.json", dump_document("h4", build(NormalFormParams.h4_trigonal(1, 2)), exact=True))
    assert run(capsys, ["classify", h, "--exact"])[1].startswith("trigonal")
    s = write(tmp_path, "s.json", {"format": "sym2", "data": [1, 1, 3, 0, 0, 0]})
    assert run(capsys, ["classify", s])[1].startswith("transversely_isotropic")


def test_env_tolerance(tmp_path, capsys, monkeypatch):
    noisy = np.array(cubic_voigt(), dtype=float)
    noisy[0, 3] = noisy[3, 0] = 1e-7
    path = write(tmp_path, "n.json", {"format": "voigt6", "data": noisy.tolist()})
    assert run(capsys, ["classify", path])[1].startswith("lower_than_tetragonal_trigonal")
    monkeypatch.setenv("ELASTICA_TOL", "1e-5")
    assert run(capsys, ["classify", path])[1].startswith("cubic")
    assert run(capsys, ["classify", path, "--tol", "1e-9"])[1].startswith("lower_than_tetragonal_trigonal")
    monkeypatch.setenv("ELASTICA_TOL", "abc")
    assert run(capsys, ["classify", path])[0] == EXIT_PARSE


def test_invariants(tmp_path, capsys):
    E = ela_from_parts(3, 4, h=build(NormalFormParams.h4_cubic(1)))
    path = write(tmp_path, "e.json", dump_document("ela", E, exact=True, fmt="voigt6"))
    code, out = run(capsys, ["invariants", path, "--exact"])
    rep = json.loads(out)
    assert code == EXIT_OK
    assert set(rep) == {"ela", "h4", "d", "v"}
    assert rep["h4"]["i2"] == "480" and rep["h4"]["i3"] == "1920"
    assert rep["ela"]["k1"] == "3"


def test_basis(tmp_path, capsys):
    E = ela_from_parts(3, 4, h=build(NormalFormParams.h4_cubic(2)))
    path = write(tmp_path, "e.json", dump_document("ela", E, exact=True, fmt="harmonic_parts"))
    code, out = run(capsys, ["basis", path, "--exact"])
    assert code == EXIT_OK
    assert json.loads(out)["values"] == {"tr_d": "3", "tr_v": "4", "I3/I2": "8"}
    assert run(capsys, ["basis", path, "--stratum", "tetragonal"])[0] == EXIT_MISMATCH


def test_basis_out_of_scope_is_mismatch(tmp_path, capsys, rng):
    path = write(tmp_path, "r.json", dump_document("ela", random_ela(rng), exact=False, fmt="voigt6"))
    assert run(capsys, ["basis", path])[0] == EXIT_MISMATCH


def test_separate_exit_codes(tmp_path, capsys, rng):
    a = write(tmp_path, "a.json", {"format": "harmonic_parts", "kind": "h4",
                                   "data": dump_document("h4", build(NormalFormParams.h4_trigonal(0, 1)),
                                                         exact=True, fmt="harmonic_parts")["data"]})
    main(["normal-form", "--class", "h4-tetragonal", "--params", "0,sqrt(1/2)", "--exact"])
    b = write(tmp_path, "b.json", json.loads(capsys.readouterr().out))
    code, out = run(capsys, ["separate", a, b, "--exact"])
    assert code == EXIT_DIFFERENT and json.loads(out)["witness"] == "K10"
    main(["normal-form", "--class", "h4-trigonal", "--params", "0,1", "--rotate", "3"])
    c = write(tmp_path, "c.json", json.loads(capsys.readouterr().out))
    code, out = run(capsys, ["separate", a, c])
    assert code == EXIT_OK and json.loads(out)["verdict"] == "same_orbit"
    r1 = write(tmp_path, "r1.json", dump_document("ela", random_ela(rng), exact=False, fmt="voigt6"))
    assert run(capsys, ["separate", r1, r1])[0] == EXIT_SCOPE


def test_normal_form_rotate_keeps_invariants(tmp_path, capsys):
    main(["normal-form", "--class", "h4-tetragonal", "--params", "1,2"])
    plain = write(tmp_path, "p.json", json.loads(capsys.readouterr().out))
    main(["normal-form", "--class", "h4-tetragonal", "--params", "1,2", "--rotate", "5"])
    rotated = write(tmp_path, "r.json", json.loads(capsys.readouterr().out))
    i1 = json.loads(run(capsys, ["invariants", plain])[1])["h4"]
    i2 = json.loads(run(capsys, ["invariants", rotated])[1])["h4"]
    for k in i1:
        assert abs(i1[k] - i2[k]) <= 1e-9 * max(1.0, abs(i1[k]))
    main(["normal-form", "--class", "h4-tetragonal", "--params", "1,2", "--rotate", "5", "--exact"])
    doc = json.loads(capsys.readouterr().out)
    assert all(isinstance(v, str) for row in doc["data"] for v in row)


def test_normal_form_sym2(capsys):
    code, out = run(capsys, ["normal-form", "--class", "sym2-ti", "--params", "2,1", "--exact"])
    assert code == EXIT_OK and json.loads(out)["data"][:3] == ["1", "1", "4"]


def test_parse_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, ["classify", str(bad)])[0] == EXIT_PARSE
    assert run(capsys, ["classify", str(tmp_path / "missing.json")])[0] == EXIT_PARSE
    short = write(tmp_path, "s.json", {"format": "voigt6", "data": [[1, 2], [3, 4]]})
    assert run(capsys, ["classify", short])[0] == EXIT_PARSE
    asym = np.array(cubic_voigt())
    asym[0, 1] = 7
    path = write(tmp_path, "k.json", {"format": "kelvin6", "data": asym.tolist()})
    assert run(capsys, ["classify", path])[0] == EXIT_PARSE
    word = write(tmp_path, "w.json", {"format": "sym2", "data": ["x", 0, 0, 0, 0, 0]})
    assert run(capsys, ["invariants", word, "--exact"])[0] == EXIT_PARSE
    assert run(capsys, ["normal-form", "--class", "h4-cubic", "--params", "1,2"])[0] == EXIT_PARSE
    assert run(capsys, ["frobnicate"])[0] == EXIT_PARSE


def test_h4_document_rejects_traces(tmp_path, capsys):
    path = write(tmp_path, "h.json", {"format": "voigt6", "kind": "h4", "data": cubic_voigt()})
    assert run(capsys, ["classify", path])[0] == EXIT_PARSE


def test_exact_round_trip_voigt_kelvin(rng):
    E = random_ela(rng, exact=True) * Fraction(1, 7)
    for fmt in ("voigt6", "kelvin6", "harmonic_parts"):
        doc = json.loads(json.dumps(dump_document("ela", E, exact=True, fmt=fmt)))
        kind, back = load_document(doc, exact=True)
        assert kind == "ela" and back == E
        again = dump_document("ela", back, exact=True, fmt=fmt)
        assert again == doc


def test_float_round_trip(rng):
    E = random_ela(rng)
    kind, back = load_document(dump_document("ela", E, exact=False, fmt="kelvin6"))
    assert np.allclose(np.asarray(back.voigt, float), np.asarray(E.voigt, float), rtol=1e-14, atol=0)


def test_upper_triangle_payload():
    data = [1, 2, 3, 0, 0, 0, 4, 5, 0, 0, 0, 6, 0, 0, 0, 7, 0, 0, 8, 0, 9]
    kind, E = load_document({"format": "voigt6", "data": data}, exact=True)
    assert E.voigt[1, 2] == 5 and E.voigt[2, 1] == 5 and E.voigt[5, 5] == 9


def test_h4_harmonic_parts_document():
    H = build(NormalFormParams.h4_orthotropic(0, 1, 3))
    doc = dump_document("h4", H, exact=True, fmt="harmonic_parts")
    kind, back = load_document({**doc, "kind": "h4"}, exact=True)
    assert kind == "h4" and back == H
    kind, E = load_document(doc, exact=True)
    assert kind == "h4"
    with pytest.raises(DocumentError):
        load_document({"format": "harmonic_parts", "data": {"tr_d": 1}}, exact=True)


def test_decimal_literal_in_exact_mode():
    kind, E = load_document({"format": "voigt6", "data": np.full((6, 6), 0.1).tolist()}, exact=True)
    assert E.voigt[0, 0] == Fraction(1, 10)
    # tr d sums the normal 3x3 block
    assert decompose(E).tr_d == Fraction(9, 10)
