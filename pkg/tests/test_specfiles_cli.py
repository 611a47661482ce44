import json

import numpy as np
import pytest

from opspectra import ParseError, ValidationError, Verdict, right_shift
from opspectra.cli import main
from opspectra.classify import ClassificationReport
from opspectra.specfiles import (BUNDLED, load_bundled, parse_spec,
                                 parse_spec_text, serialize_spec)


def test_bundled_right_shift_parses_to_shift():
    spec = load_bundled("right_shift")
    assert spec.operator == right_shift()
    assert spec.name == "right_shift"


def test_bundled_defect_shift_matches_defining_formula():
    t = load_bundled("defect_shift").operator
    np.testing.assert_array_equal(t.apply([1]), [0.5])
    np.testing.assert_array_equal(t.apply([0, 1]), [0, 0, 0.5])
    np.testing.assert_array_equal(t.apply([0, 0, 1]), [0, 0, 0, 1])


def test_all_bundled_specs_load():
    for name in BUNDLED:
        spec = load_bundled(name)
        assert spec.operator.bands or spec.operator.rank_terms


def test_unknown_bundled_name():
    with pytest.raises(ParseError):
        load_bundled("nope")


def test_malformed_offset():
    text = json.dumps({"name": "x",
                       "bands": [{"offset": "a", "prefix": [], "tail": [1, 0]}]})
    with pytest.raises(ParseError):
        parse_spec_text(text)


def test_unknown_field_rejected():
    text = json.dumps({"name": "x", "bands": [], "extra": 1})
    with pytest.raises(ParseError):
        parse_spec_text(text)
    text = json.dumps({"name": "x",
                       "bands": [{"offset": 0, "tail": [1, 0], "color": "red"}]})
    with pytest.raises(ParseError):
        parse_spec_text(text)


def test_nonfinite_rejected():
    text = '{"name": "x", "bands": [{"offset": 0, "prefix": [], "tail": [Infinity, 0]}]}'
    with pytest.raises(ValidationError):
        parse_spec_text(text)


def test_noncanonical_prefix_rejected():
    text = json.dumps({"name": "x",
                       "bands": [{"offset": 0, "prefix": [[1, 0]], "tail": [1, 0]}]})
    with pytest.raises(ValidationError):
        parse_spec_text(text)


def test_zero_rank_vector_rejected():
    text = json.dumps({"name": "x", "bands": [],
                       "rank_terms": [{"left": [[0, 0]], "right": [[1, 0]]}]})
    with pytest.raises(ValidationError):
        parse_spec_text(text)


def test_bad_param_key_rejected():
    text = json.dumps({"name": "x", "bands": [], "params": {"speed": 3}})
    with pytest.raises(ParseError):
        parse_spec_text(text)


def test_round_trip_identity():
    for name in BUNDLED:
        spec = load_bundled(name)
        again = parse_spec_text(serialize_spec(spec))
        assert again.operator == spec.operator
        assert again.name == spec.name
        assert again.params == spec.params


def test_round_trip_with_rank_terms_and_params(tmp_path):
    text = json.dumps({
        "name": "custom",
        "bands": [{"offset": 1, "prefix": [[0.25, -0.5]], "tail": [1.0, 0.0]}],
        "rank_terms": [{"left": [[1, 0], [0, 2]], "right": [[0, -1]]}],
        "params": {"trunc": 96, "tol": 1e-9},
    })
    path = tmp_path / "custom.json"
    path.write_text(text)
    spec = parse_spec(path)
    assert spec.params == {"trunc": 96, "tol": 1e-9}
    again = parse_spec_text(serialize_spec(spec))
    assert again.operator == spec.operator and again.params == spec.params


# -- command line -----------------------------------------------------------------

def test_cli_classify_exit_code_and_structured_output(capsys):
    code = main(["classify", "right_shift", "--format", "structured",
                 "--resolution", "128", "--samples", "256", "--trunc", "64"])
    out = capsys.readouterr().out
    doc = json.loads(out)
    assert code == 0
    assert doc["classification"]["is_AN"] == "yes"
    assert doc["classification"]["is_normal"] == "no"
    assert doc["classification"]["alpha"] == 1.0
    assert doc["spectral"]["ess_is_circle"] == pytest.approx(1.0, abs=1e-12)
    assert doc["provenance"]["tool"] == "opspectra"
    assert "timestamps" in doc["provenance"]
    assert doc["classification"]["tolerances"]


def test_cli_classify_text_output(capsys):
    code = main(["classify", "unitary_diag", "--trunc", "64",
                 "--resolution", "128", "--samples", "256"])
    out = capsys.readouterr().out
    assert code == 0
    assert "normal" in out and "yes" in out


def test_cli_determinism_modulo_timestamps(capsys):
    args = ["classify", "defect_shift", "--format", "structured",
            "--trunc", "64", "--resolution", "128", "--samples", "256"]
    main(args)
    first = json.loads(capsys.readouterr().out)
    main(args)
    second = json.loads(capsys.readouterr().out)
    first["provenance"].pop("timestamps")
    second["provenance"].pop("timestamps")
    assert first == second


def test_cli_spectrum_writes_curve_csv(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code = main(["spectrum", "defect_shift", "--samples", "256",
                 "--resolution", "128", "--trunc", "64"])
    out = capsys.readouterr().out
    assert code == 0
    path = tmp_path / "defect_shift_curve.csv"
    lines = path.read_text().splitlines()
    assert lines[0] == "theta,re,im"
    assert len(lines) == 257
    theta, re, im = (float(v) for v in lines[1].split(","))
    assert theta == 0.0 and re == pytest.approx(1.0, abs=1e-12)
    thetas = [float(line.split(",")[0]) for line in lines[1:]]
    assert all(0 <= t < 2 * np.pi for t in thetas)
    assert "singular levels < essential 0.5 (x2)" in out


def test_cli_decompose(capsys):
    code = main(["decompose", "defect_shift", "--trunc", "64"])
    out = capsys.readouterr().out
    assert code == 0
    assert "delta=0.5 dim=2" in out
    assert "||A|| = 0.5" in out


def test_cli_decompose_structured_matrices(capsys):
    code = main(["decompose", "defect_shift", "--trunc", "64",
                 "--format", "structured"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 0
    dec = doc["decomposition"]
    assert dec["alpha"] == 1.0
    assert dec["h1_dim"] == 62
    assert dec["S1"]["shape"] == [62, 62]
    assert len(dec["S1"]["entries"]) == 62 * 62
    assert dec["h2_blocks"] == [{"delta": 0.5, "dim": 2}]
    assert doc["verification"]["ok"] is True


def test_cli_decompose_rejects_non_hyponormal(capsys):
    code = main(["decompose", "selfadjoint_band", "--trunc", "64"])
    err = capsys.readouterr().err
    assert code == 1
    assert "norm-attaining" in err or "attaining" in err


def test_cli_usage_error_is_exit_one(capsys):
    assert main(["classify"]) == 1
    assert main(["classify", "no_such_spec_anywhere"]) == 1


def test_cli_undetermined_maps_to_exit_two(capsys, monkeypatch):
    undetermined = ClassificationReport(
        Verdict.YES, Verdict.YES, Verdict.YES, Verdict.UNDETERMINED,
        Verdict.YES, Verdict.YES, 1.0, (), {})
    import opspectra.cli as cli_module
    monkeypatch.setattr(cli_module, "classify",
                        lambda *a, **k: undetermined)
    code = main(["classify", "unitary_diag", "--trunc", "64",
                 "--resolution", "128", "--samples", "256"])
    assert code == 2


def test_cli_out_file(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["classify", "right_shift", "--trunc", "64",
                 "--resolution", "128", "--samples", "256",
                 "--out", str(out)])
    capsys.readouterr()
    assert code == 0
    doc = json.loads(out.read_text())
    assert set(doc) == {"provenance", "classification", "spectral"}


def test_cli_verify_suite_passes_and_is_deterministic(capsys):
    code = main(["verify-suite", "--seed", "3"])
    first = capsys.readouterr().out
    assert code == 0
    assert "[pass]" in first and "[FAIL]" not in first

    code = main(["verify-suite", "--seed", "3"])
    second = capsys.readouterr().out
    assert code == 0
    assert first == second


def test_cli_verify_suite_flags_corrupted_golden(capsys, monkeypatch):
    import opspectra.suites as suites_module
    true_loader = suites_module.load_bundled

    def corrupted(name):
        if name == "unitary_diag":
            return true_loader("right_shift")  # wrong operator under the name
        return true_loader(name)

    monkeypatch.setattr(suites_module, "load_bundled", corrupted)
    code = main(["verify-suite", "--seed", "3"])
    out = capsys.readouterr().out
    assert code == 1
    assert "[FAIL] golden:unitary_diag" in out
