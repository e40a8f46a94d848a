import json

import numpy as np
import pytest

from isotropy import io
from isotropy.canonical import CanonicalSpec, EigenClass
from isotropy.cli import main

POS_SPEC = {"eigen": {"class": "positive_real", "lambda": 1.0}, "alpha": [3, 2],
            "mu": [1, 1], "eps": [[1], [1]]}


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def run(capsys, argv):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out else None), (json.loads(err) if err else None)


def test_spec_roundtrip():
    spec = CanonicalSpec(EigenClass.nonreal(0.5 + 2j), (2, 1), (1, 3))
    assert io.spec_from_json(io.spec_to_json(spec)) == spec
    spec = CanonicalSpec(EigenClass.zero(), (2,), (2,), ((1, -1),))
    assert io.spec_from_json(json.loads(io.dumps(io.spec_to_json(spec)))) == spec


def test_matrix_roundtrip():
    a = np.array([[1 + 2j, 0], [3, -1j]])
    assert np.array_equal(io.matrix_from_json(io.matrix_to_json(a)), a)
    with pytest.raises(io.InvalidDocument):
        io.matrix_from_json([[1, 2], [3]])
    with pytest.raises(io.InvalidDocument):
        io.complex_from_json([1, 2, 3])


def test_eigen_documents():
    e = io.eigen_from_json({"class": "nonreal", "rho": [0.0, 2.0]})
    assert abs(e.rho - 2j) < 1e-12
    with pytest.raises(io.InvalidDocument):
        io.eigen_from_json({"class": "imaginary"})
    with pytest.raises(io.InvalidDocument):
        io.eigen_from_json({"class": "positive_real", "lambda": -1})
    with pytest.raises(io.InvalidDocument):
        io.eigen_from_json({"class": "nonreal", "xi": [1, 1], "rho": [0, 2]})


def test_problem_file_validation():
    with pytest.raises(io.InvalidDocument):
        io.load_problem_file({"spec": POS_SPEC, "seed": 1, "params": {"theta": []}})
    with pytest.raises(io.InvalidDocument):
        io.load_problem_file({"spec": POS_SPEC, "seed": -1})
    with pytest.raises(io.InvalidDocument):
        io.load_problem_file({"spec": POS_SPEC, "generators": [{"type": "shear"}]})
    pf = io.load_problem_file(POS_SPEC)
    assert pf.spec.alpha == (3, 2)


def test_dumps_is_deterministic():
    assert io.dumps({"b": 1, "a": np.float64(0.5)}) == '{\n  "a": 0.5,\n  "b": 1\n}\n'


def test_cmd_dim(tmp_path, capsys):
    code, out, _ = run(capsys, ["dim", "--spec", write(tmp_path, "s.json", POS_SPEC)])
    assert code == 0 and out["dimension"] == 2


def test_cmd_oracle(tmp_path, capsys):
    code, out, _ = run(capsys, ["oracle", "--spec", write(tmp_path, "s.json", POS_SPEC)])
    assert code == 0
    assert out["tangent_dim"] == out["formula_dim"] == 2 and out["match"]


def test_cmd_canonical(tmp_path, capsys):
    spec = {"eigen": {"class": "positive_real", "lambda": 2.0}, "alpha": [1], "mu": [1]}
    code, out, _ = run(capsys, ["canonical", "--spec", write(tmp_path, "s.json", spec)])
    assert code == 0
    assert np.allclose(io.matrix_from_json(out["matrix"]), [[np.sqrt(2)]])


def test_generate_then_verify(tmp_path, capsys):
    spec = {"eigen": {"class": "negative_real", "mu": 0.8}, "alpha": [2, 1], "mu": [1, 1]}
    sp = write(tmp_path, "s.json", spec)
    out_path = str(tmp_path / "g.json")
    assert main(["generate", "--spec", sp, "--seed", "5", "--count", "3",
                 "--out", out_path]) == 0
    doc = json.loads(open(out_path).read())
    assert doc["seed"] == 5 and len(doc["elements"]) == 3 and doc["pass"]
    code, out, _ = run(capsys, ["verify", "--spec", sp, out_path])
    assert code == 0 and all(r["pass"] for r in out["reports"])


def test_generate_is_reproducible(tmp_path, capsys):
    sp = write(tmp_path, "s.json", {"spec": POS_SPEC, "seed": 9})
    _, first, _ = run(capsys, ["generate", "--spec", sp])
    _, second, _ = run(capsys, ["generate", "--spec", sp])
    assert first == second


def test_generate_with_theta(tmp_path, capsys):
    spec = {"eigen": {"class": "zero"}, "alpha": [1], "mu": [2]}
    sp = write(tmp_path, "s.json", spec)
    pp = write(tmp_path, "p.json", {"theta": [0.1, 0.2]})
    code, out, _ = run(capsys, ["generate", "--spec", sp, "--params", pp])
    assert code == 0 and out["seed"] is None and out["elements"][0]["source"] == "params"
    pp = write(tmp_path, "bad.json", {"theta": [0.1]})
    code, _, err = run(capsys, ["generate", "--spec", sp, "--params", pp])
    assert code == 2 and err["error"] == "invalid input"


def test_generate_with_requests(tmp_path, capsys):
    F = [[[0.5, 0.1], [0.0, -0.3]]]
    doc = {"spec": {"eigen": {"class": "zero"}, "alpha": [3, 2], "mu": [1, 2],
                    "eps": [[1], [1, -1]]},
           "generators": [{"type": "corner-alt", "p": 0, "t": 1, "k": 1,
                           "F": [[[0.5, 0.1]], [[0.0, -0.3]]]},
                          {"type": "asZ2", "Z": {"1,1": [[[0, 0], [0.4, 0]],
                                                         [[-0.4, 0], [0, 0]]]}}]}
    code, out, _ = run(capsys, ["generate", "--spec", write(tmp_path, "s.json", doc),
                                "--count", "0"])
    assert code == 0
    assert [e["source"] for e in out["elements"]] == ["corner-alt", "asZ2"]


def test_verify_identity_and_failure(tmp_path, capsys):
    sp = write(tmp_path, "s.json", POS_SPEC)
    ident = write(tmp_path, "i.json", io.matrix_to_json(np.eye(5)))
    code, out, _ = run(capsys, ["verify", "--spec", sp, ident])
    assert code == 0 and out["pass"]
    double = write(tmp_path, "d.json", io.matrix_to_json(2 * np.eye(5)))
    code, out, _ = run(capsys, ["verify", "--spec", sp, double])
    assert code == 1 and not out["pass"]
    small = write(tmp_path, "x.json", io.matrix_to_json(np.eye(2)))
    code, _, err = run(capsys, ["verify", "--spec", sp, small])
    assert code == 2


def test_invalid_documents(tmp_path, capsys):
    bad = write(tmp_path, "b.json", {"eigen": {"class": "nope"}, "alpha": [1], "mu": [1]})
    code, out, err = run(capsys, ["dim", "--spec", bad])
    assert code == 2 and out is None and err["error"] == "invalid input"
    code, _, err = run(capsys, ["dim", "--spec", str(tmp_path / "missing.json")])
    assert code == 2
    (tmp_path / "junk.json").write_text("{not json")
    code, _, _ = run(capsys, ["dim", "--spec", str(tmp_path / "junk.json")])
    assert code == 2


def test_unsolvable_problem(tmp_path, capsys):
    doc = {"problem": {"alpha": [2], "mu": [1], "flavor": "alternating",
                       "B": [[[[1]], [[0]]]], "C": [[[[-1]], [[0]]]]}}
    code, out, _ = run(capsys, ["generate", "--spec", write(tmp_path, "p.json", doc)])
    assert code == 1 and out["error"] == "unsolvable"


def test_problem_generation(tmp_path, capsys):
    doc = {"problem": {"alpha": [2, 1], "mu": [1, 1], "flavor": "plain",
                       "B": [[[[1]], [[0]]], [[[2]]]],
                       "C": [[[[1]], [[0.5]]], [[[2]]]]}, "seed": 3}
    code, out, _ = run(capsys, ["generate", "--spec", write(tmp_path, "p.json", doc),
                                "--count", "2"])
    assert code == 0 and len(out["families"]) == 2 and out["seed"] == 3
