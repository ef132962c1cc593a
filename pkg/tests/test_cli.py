import json

import pytest

from plovlab.cli import main
from plovlab.io import InputError, load_model, parse_auto, parse_model


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj), encoding="utf-8")
    return str(p)


E2_SPARSE = {
    "complex_dim": 1,
    "h": 3,
    "basis": ["e0", "e1", "e2"],
    "intersection": [{"idx": [0], "val": "1"}],
    "kahler": ["1", "0", "1"],
}
ODD_AUTO = {"matrix": [["1", "0", "0"], ["0", "1", "1"], ["0", "0", "1"]]}


def test_sparse_model_roundtrip(tmp_path):
    m, a = load_model(write(tmp_path, "m.json", E2_SPARSE))
    assert a is None and m.kind == "sparse" and not m.geometric
    assert m.volume() == 1


def test_torus_shorthand():
    m, a = parse_model({"type": "torus", "h10_matrix": [[1, 0], [1, 1]]})
    assert m.kind == "torus" and a.cert.k == 2


def test_fujiki_shorthand():
    m, a = parse_model({"type": "fujiki", "q": [[0, 0, 1], [0, -1, 0], [1, 0, 0]], "c": "1", "half_dim": 1, "omega": ["1", "0", "1"]})
    assert m.kind == "fujiki" and a is None and m.volume() == 2


@pytest.mark.parametrize(
    "obj, key",
    [
        ({**E2_SPARSE, "extra": 1}, "extra"),
        ({k: v for k, v in E2_SPARSE.items() if k != "kahler"}, "kahler"),
        ({**E2_SPARSE, "kahler": [0.5, "0", "1"]}, "kahler[0]"),
        ({**E2_SPARSE, "intersection": [{"idx": [5], "val": "1"}]}, "intersection[0].idx"),
        ({**E2_SPARSE, "intersection": [{"idx": [0], "val": "x"}]}, "intersection[0].val"),
        ({**E2_SPARSE, "basis": ["a"]}, "basis"),
        ({"type": "torus", "h10_matrix": [[2, 0], [0, 1]]}, "torus"),
        ({"type": "torus", "h10_matrix": [["1/2", 0], [0, 2]]}, "h10_matrix"),
        ({"type": "klein"}, "type"),
    ],
)
def test_malformed_models_name_the_key(obj, key):
    with pytest.raises(InputError) as err:
        parse_model(obj, "file.json")
    assert err.value.key == key
    assert "file.json" in str(err.value)


def test_automorphism_checks():
    m, _ = parse_model(E2_SPARSE)
    with pytest.raises(InputError):
        parse_auto({"matrix": [["1"]]}, m)
    with pytest.raises(InputError):
        parse_auto({"matrix": [["0", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]}, m)
    with pytest.raises(InputError):
        parse_auto({"matrix": ODD_AUTO["matrix"], "note": "x"}, m)


def test_gallery_run_e3(capsys):
    assert main(["gallery", "run", "torus-jordan-d3"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert (rep["plov"], rep["gkdim"], rep["k"]) == (9, 10, 4)
    assert all(c["pass"] is not False for c in rep["checks"])
    assert rep["findings"] == []


def test_gallery_run_fujiki(tmp_path):
    out = tmp_path / "r.json"
    assert main(["gallery", "run", "fujiki-parabolic", "--report", str(out)]) == 0
    assert json.loads(out.read_text())["plov"] == 4


def test_gallery_list(capsys):
    assert main(["gallery", "list"]) == 0
    names = [line.split()[0] for line in capsys.readouterr().out.splitlines()]
    for want in ("identity-d1", "identity-d5", "rotation-order4", "torus-jordan-d5", "torus-j21", "torus-j22", "product-j2xj2", "fujiki-parabolic"):
        assert want in names


def test_unknown_gallery_entry(capsys):
    assert main(["gallery", "run", "nope"]) == 1
    assert "unknown gallery entry" in capsys.readouterr().err


def test_golden_torus_is_rejected(capsys):
    assert main(["torus", "--h10-matrix", "[[2,1],[1,1]]"]) == 1
    err = capsys.readouterr().err
    assert "not quasi-unipotent; Plov = infinity; witness x^2 - 3*x + 1" in err


def test_torus_flags_and_determinism(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["torus", "--h10-matrix", "[[1,0,0],[1,1,0],[0,1,1]]", "--filtration", "--diagnostics", "--oracle"]
    assert main(args + ["--report", str(a)]) == 0
    assert main(args + ["--report", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["plov"] == 9 and rep["oracle"]["agreed"] is True
    assert rep["filtration"]["s_sequence"] == [2, 1]
    assert all(d["pass"] for d in rep["diagnostics"])


def test_h10_matrix_from_file(tmp_path, capsys):
    path = write(tmp_path, "a.json", [[1, 0], [1, 1]])
    assert main(["torus", "--h10-matrix", path]) == 0
    assert json.loads(capsys.readouterr().out)["plov"] == 4


def test_user_sequences(tmp_path, capsys):
    seqs = write(tmp_path, "s.json", {"sequences": [[["2", "0", "0", "0"], ["1", "0", "0", "1"]], [["0", "0", "0", "1"], ["1", "0", "0", "1"]]]})
    assert main(["torus", "--h10-matrix", "[[1,0],[1,1]]", "--filtration", "--sequence", seqs]) == 0
    rep = json.loads(capsys.readouterr().out)
    statuses = [f["status"] for f in rep["user_filtrations"]]
    assert statuses == ["verified", "failed"]


def test_synthetic_violations_do_not_fail_the_run(tmp_path, capsys):
    model = write(tmp_path, "m.json", E2_SPARSE)
    auto = write(tmp_path, "a.json", ODD_AUTO)
    assert main(["analyze", "--model", model, "--auto", auto, "--diagnostics"]) == 0
    cap = capsys.readouterr()
    rep = json.loads(cap.out)
    assert rep["k"] == 1
    assert "hypothesis-violation" in cap.err


def test_analyze_rejects_non_preserving_action(tmp_path, capsys):
    model = write(tmp_path, "m.json", E2_SPARSE)
    auto = write(tmp_path, "a.json", {"matrix": [["1", "1", "0"], ["0", "1", "0"], ["0", "0", "1"]]})
    assert main(["analyze", "--model", model, "--auto", auto]) == 1
    assert "preservation" in capsys.readouterr().err


def test_analyze_needs_auto_for_sparse(tmp_path, capsys):
    model = write(tmp_path, "m.json", E2_SPARSE)
    assert main(["analyze", "--model", model]) == 1
    assert "--auto" in capsys.readouterr().err


def test_bad_json_reports_location(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{\n  'x': 1\n}")
    assert main(["analyze", "--model", str(p)]) == 1
    err = capsys.readouterr().err
    assert "bad.json" in err and "line 2" in err


def test_hilbert_command(tmp_path, capsys):
    model = write(tmp_path, "t.json", {"type": "torus", "h10_matrix": [[1, 0], [0, 1]]})
    csv_path = tmp_path / "h.csv"
    assert main(["hilbert", "--model", model, "--n-max", "4", "--csv", str(csv_path)]) == 0
    assert csv_path.read_text().splitlines() == ["m,dim", "0,1", "1,1", "2,4", "3,9", "4,16"]


def test_hilbert_refusal(tmp_path, capsys):
    model = write(tmp_path, "t.json", {"type": "torus", "h10_matrix": [[1, 0], [1, 1]], "kahler": ["1", "0", "0", "0"]})
    assert main(["hilbert", "--model", model, "--n-max", "3"]) == 1
    assert "dim B_1" in capsys.readouterr().err


def test_oracle_command(tmp_path, capsys):
    model = write(tmp_path, "t.json", {"type": "torus", "h10_matrix": [[1, 0], [1, 1]]})
    assert main(["oracle", "--model", model]) == 0
    out = capsys.readouterr().out
    assert "agreed: true" in out


def test_fuzz_command(capsys):
    assert main(["fuzz", "--dim", "3", "--count", "4", "--seed", "1"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 4 and all(line.startswith("ok") for line in lines)


def test_fuzz_is_deterministic(capsys):
    main(["fuzz", "--dim", "4", "--count", "3", "--seed", "7"])
    first = capsys.readouterr().out
    main(["fuzz", "--dim", "4", "--count", "3", "--seed", "7"])
    assert capsys.readouterr().out == first


def test_threads_do_not_change_output(monkeypatch, capsys):
    main(["fuzz", "--dim", "3", "--count", "5", "--seed", "3"])
    serial = capsys.readouterr().out
    monkeypatch.setenv("PLOVLAB_THREADS", "4")
    main(["fuzz", "--dim", "3", "--count", "5", "--seed", "3"])
    assert capsys.readouterr().out == serial


@pytest.mark.slow
def test_gallery_run_all(tmp_path, capsys):
    out = tmp_path / "all.json"
    assert main(["gallery", "run-all", "--report", str(out)]) == 0
    stdout = capsys.readouterr().out
    assert "FAIL" not in stdout
    data = json.loads(out.read_text())
    assert all(rep["findings"] == [] for rep in data.values())
