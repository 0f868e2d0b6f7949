"""Command line interface: spec files, exit codes, output determinism."""

from __future__ import annotations

import json

import numpy as np
import pytest

from leibrack import catalog
from leibrack.cli import (EXIT_AXIOM, EXIT_CAPABILITY, EXIT_PASS,
                          EXIT_STRUCTURAL, main)

NONABELIAN2 = {
    "dim": 2,
    "labels": ["a", "b"],
    "structure_constants": [[0, 1, 1, 1.0], [1, 0, 1, -1.0]],
}


def scaling_doc(lam: float, **extra) -> dict:
    doc = {
        "lie_algebra": dict(NONABELIAN2),
        "module": {"dim_v": 1,
                   "action_matrices": [[[float(lam)]], [[0.0]]]},
        "theta": {"matrix": [[0.0], [1.0]]},
    }
    doc.update(extra)
    return doc


def write_doc(tmp_path, name: str, doc: dict) -> str:
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def rack_doc() -> dict:
    s3 = catalog.symmetric3()
    from leibrack import conjugation_triple
    triple = conjugation_triple(s3)
    return {
        "group": {"size": 6, "mul_table": np.asarray(s3.mul_table).tolist()},
        "x_size": 6,
        "action_table": np.asarray(triple.action_table).tolist(),
        "theta_table": np.asarray(triple.theta_table).tolist(),
        "basepoint": 0,
    }


def test_verify_valid_triple_spec(tmp_path, capsys):
    path = write_doc(tmp_path, "good.json", scaling_doc(2.0))
    assert main(["verify", path]) == EXIT_PASS
    out = capsys.readouterr().out
    assert "overall: PASS" in out
    assert "strict: no" in out
    assert "dim 1 of 2" in out


def test_verify_invalid_triple_spec(tmp_path, capsys):
    doc = scaling_doc(1.5)
    doc["theta"]["matrix"] = [[0.1], [1.0]]
    path = write_doc(tmp_path, "bad.json", doc)
    assert main(["verify", path]) == EXIT_AXIOM
    out = capsys.readouterr().out
    assert "embedding-intertwines-brackets" in out
    assert "overall: FAIL" in out


def test_verify_malformed_json(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"lie_algebra": [1, 2,')
    assert main(["verify", str(path)]) == EXIT_STRUCTURAL
    err = capsys.readouterr().err
    assert "line" in err and "column" in err


def test_verify_missing_file_and_missing_keys(tmp_path):
    assert main(["verify", str(tmp_path / "absent.json")]) == EXIT_STRUCTURAL
    path = write_doc(tmp_path, "nokeys.json", {"something": 1})
    assert main(["verify", path]) == EXIT_STRUCTURAL
    path = write_doc(tmp_path, "nomodule.json",
                     {"lie_algebra": dict(NONABELIAN2)})
    assert main(["verify", path]) == EXIT_STRUCTURAL


def test_structure_constants_validation(tmp_path):
    doc = scaling_doc(1.0)
    doc["lie_algebra"]["structure_constants"] = [[0, 1, 1, 1.0], [0, 1, 1, 2.0]]
    assert main(["verify", write_doc(tmp_path, "dup.json", doc)]) == \
        EXIT_STRUCTURAL
    doc = scaling_doc(1.0)
    doc["lie_algebra"]["structure_constants"] = [[0, 1, 5, 1.0]]
    assert main(["verify", write_doc(tmp_path, "oob.json", doc)]) == \
        EXIT_STRUCTURAL
    doc = scaling_doc(1.0)
    doc["lie_algebra"]["structure_constants"] = [[0, 1, 1.0]]
    assert main(["verify", write_doc(tmp_path, "short.json", doc)]) == \
        EXIT_STRUCTURAL


def test_asymmetric_constants_are_not_silently_fixed(tmp_path, capsys):
    # one-sided entry: stored as given, then rejected by the axiom checker
    doc = scaling_doc(1.0)
    doc["lie_algebra"]["structure_constants"] = [[0, 1, 1, 1.0]]
    path = write_doc(tmp_path, "asym.json", doc)
    assert main(["verify", path]) == EXIT_AXIOM
    assert "antisymmetry" in capsys.readouterr().out


def test_verify_rack_spec(tmp_path, capsys):
    path = write_doc(tmp_path, "rack.json", rack_doc())
    assert main(["verify", path]) == EXIT_PASS
    out = capsys.readouterr().out
    assert "strict: yes" in out


def test_verify_corrupted_rack_spec(tmp_path, capsys):
    doc = rack_doc()
    doc["theta_table"][2] = 3
    path = write_doc(tmp_path, "badrack.json", doc)
    assert main(["verify", path]) == EXIT_AXIOM
    assert "embedding-conjugation" in capsys.readouterr().out


def test_verify_h_basis_block(tmp_path, capsys):
    doc = scaling_doc(2.0, h_basis={"vectors": [[0.0, 1.0]]})
    assert main(["verify", write_doc(tmp_path, "aug.json", doc)]) == EXIT_PASS
    assert "relaxed augmentation" in capsys.readouterr().out
    doc = scaling_doc(2.0, h_basis={"vectors": [[1.0, 0.0], [0.0, 1.0]]})
    assert main(["verify", write_doc(tmp_path, "badaug.json", doc)]) == \
        EXIT_AXIOM
    assert "defect-vanishes" in capsys.readouterr().out


def test_verify_morphism_block(tmp_path, capsys):
    target = scaling_doc(2.0)
    doc = scaling_doc(2.0, morphism={"target": target,
                                     "phi": [[1.0, 0.0], [0.0, 1.0]],
                                     "psi": [[1.0]]})
    assert main(["verify", write_doc(tmp_path, "mor.json", doc)]) == EXIT_PASS
    assert "morphism laws" in capsys.readouterr().out
    doc = scaling_doc(2.0, morphism={"target": target,
                                     "phi": [[1.0, 0.0], [0.0, 2.0]],
                                     "psi": [[1.0]]})
    assert main(["verify", write_doc(tmp_path, "badmor.json", doc)]) == \
        EXIT_AXIOM
    assert "embedding-intertwined" in capsys.readouterr().out


@pytest.mark.parametrize("name", ["sl2-adjoint", "scaling:1.0", "scaling:2.5",
                                  "heisenberg-ideal", "s3-conjugation"])
def test_verify_builtins(name):
    assert main(["verify", "--builtin", name]) == EXIT_PASS


def test_builtin_argument_errors(tmp_path):
    assert main(["verify", "--builtin", "no-such-system"]) == EXIT_STRUCTURAL
    assert main(["verify", "--builtin", "scaling:xyz"]) == EXIT_STRUCTURAL
    path = write_doc(tmp_path, "g.json", scaling_doc(1.0))
    assert main(["verify", path, "--builtin", "sl2-adjoint"]) == \
        EXIT_STRUCTURAL
    assert main(["verify"]) == EXIT_STRUCTURAL


def test_integrate_builtin_passes(capsys):
    assert main(["integrate", "--builtin", "scaling:1.0",
                 "--samples", "30"]) == EXIT_PASS
    out = capsys.readouterr().out
    assert "tensor round trip" in out
    assert "defect recovery" in out
    assert "overall: PASS" in out


def test_integrate_spec_file_with_config(tmp_path, capsys):
    doc = scaling_doc(2.0, config={"samples": 25, "seed": 3,
                                   "scheme": "richardson", "step": 2e-3})
    path = write_doc(tmp_path, "cfg.json", doc)
    assert main(["integrate", path, "--format", "json"]) == EXIT_PASS
    payload = json.loads(capsys.readouterr().out)
    assert payload["scheme"] == "richardson"
    assert payload["step"] == pytest.approx(2e-3)
    assert payload["passed"] is True
    assert payload["strict"] is False


def test_integrate_flags_override_config(tmp_path, capsys):
    doc = scaling_doc(2.0, config={"scheme": "richardson", "samples": 25})
    path = write_doc(tmp_path, "cfg2.json", doc)
    assert main(["integrate", path, "--scheme", "central",
                 "--format", "json"]) == EXIT_PASS
    payload = json.loads(capsys.readouterr().out)
    assert payload["scheme"] == "central"


def test_integrate_rejects_rack_specs(tmp_path, capsys):
    path = write_doc(tmp_path, "rack.json", rack_doc())
    assert main(["integrate", path]) == EXIT_STRUCTURAL
    assert "verify" in capsys.readouterr().err


def test_integrate_capability_gap(tmp_path):
    # Heisenberg triple without a supplied representation: the adjoint one
    # is not faithful, so integration reports a capability gap
    heis = {
        "dim": 3,
        "structure_constants": [[0, 1, 2, 1.0], [1, 0, 2, -1.0]],
    }
    doc = {
        "lie_algebra": heis,
        "module": {"dim_v": 3,
                   "action_matrices": np.stack(
                       [catalog.heisenberg().ad(e)
                        for e in np.eye(3)]).tolist()},
        "theta": {"matrix": np.eye(3).tolist()},
    }
    path = write_doc(tmp_path, "heis.json", doc)
    assert main(["integrate", path]) == EXIT_CAPABILITY


def test_integrate_with_supplied_rep(tmp_path):
    heis = {
        "dim": 3,
        "structure_constants": [[0, 1, 2, 1.0], [1, 0, 2, -1.0]],
    }
    mats = catalog.faithful_rep_matrices("heisenberg")
    doc = {
        "lie_algebra": heis,
        "module": {"dim_v": 3,
                   "action_matrices": np.stack(
                       [catalog.heisenberg().ad(e)
                        for e in np.eye(3)]).tolist()},
        "theta": {"matrix": np.eye(3).tolist()},
        "faithful_rep": {"matrices": np.asarray(mats).tolist()},
        "config": {"samples": 25},
    }
    path = write_doc(tmp_path, "heisrep.json", doc)
    assert main(["integrate", path]) == EXIT_PASS


def test_integrate_invalid_triple_is_axiom_error(tmp_path):
    doc = scaling_doc(1.5)
    doc["theta"]["matrix"] = [[0.1], [1.0]]
    path = write_doc(tmp_path, "badint.json", doc)
    assert main(["integrate", path]) == EXIT_AXIOM


def test_json_output_is_deterministic(capsys):
    args = ["integrate", "--builtin", "sl2-adjoint", "--samples", "20",
            "--format", "json"]
    assert main(args) == EXIT_PASS
    first = capsys.readouterr().out
    assert main(args) == EXIT_PASS
    second = capsys.readouterr().out
    assert first == second
    payload = json.loads(first)
    assert list(payload) == sorted(payload)


def test_verify_json_output(tmp_path, capsys):
    path = write_doc(tmp_path, "good.json", scaling_doc(0.5))
    assert main(["verify", path, "--format", "json"]) == EXIT_PASS
    payload = json.loads(capsys.readouterr().out)
    assert payload["kind"] == "triple"
    assert payload["passed"] is True
    assert payload["h_dim"] == 1
    assert payload["triple"]["info"]["strict"] is False


def test_corpus_small_run(capsys):
    assert main(["corpus", "--count", "2", "--samples", "20"]) == EXIT_PASS
    out = capsys.readouterr().out
    assert "UNEXPECTED" not in out
    assert "overall: PASS" in out


def test_corpus_json(capsys):
    assert main(["corpus", "--count", "1", "--samples", "15",
                 "--format", "json"]) == EXIT_PASS
    payload = json.loads(capsys.readouterr().out)
    assert payload["passed"] is True
    kinds = {row["case"].split("[")[0] for row in payload["cases"]}
    assert "strict_from_ideal" in kinds
    assert any("perturbed" in k for k in kinds)
    assert any("conjugation" in row["case"] for row in payload["cases"])
