import csv
import json
from pathlib import Path

import numpy as np
import pytest

import thetafock as tf
from thetafock.cli import RunConfig, main, run

FIXTURE = str(Path(__file__).resolve().parent.parent / "fixtures" / "spec_d2_r1.json")

BASE_DOC = {
    "dimension": 2,
    "basis": [[1.0, 0.0]],
    "alpha": [0.5],
    "nu": 1.0,
}


def write_doc(tmp_path, doc, name="doc.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


class TestDocumentLoading:
    def test_fixture_loads(self):
        doc = tf.load_document(FIXTURE)
        assert doc.space.lattice.rank == 1
        assert doc.space.nu == pytest.approx(2.0 * np.pi)

    def test_missing_fields(self, tmp_path):
        with pytest.raises(tf.SpecError):
            tf.load_document(write_doc(tmp_path, {"basis": [[1.0]]}))

    def test_rank_deficient_basis(self, tmp_path):
        doc = dict(BASE_DOC, basis=[[1.0, 0.0], [2.0, 0.0]], alpha=[0.0, 0.0])
        with pytest.raises(tf.RankDeficient):
            tf.load_document(write_doc(tmp_path, doc))

    def test_character_gate_accepts_table(self, tmp_path):
        doc = dict(BASE_DOC)
        doc.pop("alpha")
        doc["phase_table"] = [
            {"coords": [1], "phase": 0.25},
            {"coords": [2], "phase": 0.5},
            {"coords": [-1], "phase": 0.75},
        ]
        loaded = tf.load_document(write_doc(tmp_path, doc))
        np.testing.assert_allclose(loaded.space.chi.alpha, [0.25])

    def test_character_gate_rejects_non_character(self, tmp_path):
        doc = dict(BASE_DOC)
        doc.pop("alpha")
        doc["phase_table"] = [
            {"coords": [1], "phase": 0.25},
            {"coords": [2], "phase": 0.9},
        ]
        with pytest.raises(tf.NotACharacter):
            tf.load_document(write_doc(tmp_path, doc))


class TestErrorReporting:
    def test_rank_deficient_exit_code_and_payload(self, tmp_path):
        spec = write_doc(tmp_path, dict(BASE_DOC, basis=[[1.0, 0.0], [2.0, 0.0]], alpha=[0.0, 0.0]))
        out = str(tmp_path / "report.json")
        code = run(RunConfig(command="verify", input_path=spec, output_path=out))
        assert code == 2
        payload = json.loads(Path(out).read_text())
        assert payload["error"]["code"] == "RankDeficient"

    def test_non_character_error_code(self, tmp_path):
        doc = dict(BASE_DOC)
        doc.pop("alpha")
        doc["phase_table"] = [{"coords": [1], "phase": 0.3}, {"coords": [2], "phase": 0.7}]
        spec = write_doc(tmp_path, doc)
        out = str(tmp_path / "report.json")
        code = run(RunConfig(command="eval-basis", input_path=spec, output_path=out))
        assert code == 2
        assert json.loads(Path(out).read_text())["error"]["code"] == "NotACharacter"


class TestEvalTheta:
    def test_reference_row(self, tmp_path):
        doc = dict(
            BASE_DOC,
            theta={"omega": {"re": [[0.0]], "im": [[1.0]]}, "points": [{"re": [0.0], "im": [0.0]}]},
        )
        spec = write_doc(tmp_path, doc)
        out = str(tmp_path / "theta.csv")
        assert run(RunConfig(command="eval-theta", input_path=spec, output_path=out)) == 0
        rows = list(csv.DictReader(open(out)))
        assert len(rows) == 1
        assert abs(float(rows[0]["re"]) - 1.0864348112) < 1e-9
        assert float(rows[0]["im"]) == 0.0

    def test_missing_section(self, tmp_path):
        spec = write_doc(tmp_path, dict(BASE_DOC))
        code = run(RunConfig(command="eval-theta", input_path=spec, output_path=str(tmp_path / "o.csv")))
        assert code == 2


class TestEvalBasis:
    def test_values_match_library(self, tmp_path):
        doc = dict(
            BASE_DOC,
            basis_eval={
                "indices": [{"gamma_star": [1], "k": [1]}],
                "points": [[0.5, 0.3]],
            },
        )
        spec = write_doc(tmp_path, doc)
        out = str(tmp_path / "basis.csv")
        assert run(RunConfig(command="eval-basis", input_path=spec, output_path=out)) == 0
        row = next(csv.DictReader(open(out)))
        space = tf.load_document(spec).space
        expected = tf.basis_e_eval(space, tf.DualIndex((1,), (1,)), np.array([0.5, 0.3]))
        assert float(row["re"]) == pytest.approx(expected.real, abs=1e-12)
        assert float(row["im"]) == pytest.approx(expected.imag, abs=1e-12)


class TestBargmannCommand:
    def test_matches_library_value(self, tmp_path):
        doc = dict(
            BASE_DOC,
            nu=6.283185307179586,
            bargmann={
                "indices": [{"gamma_star": [0], "k": [0]}],
                "points": [{"re": [0.1, 0.0], "im": [0.0, 0.2]}],
            },
        )
        spec = write_doc(tmp_path, doc)
        out = str(tmp_path / "barg.csv")
        assert run(RunConfig(command="bargmann", input_path=spec, output_path=out)) == 0
        row = next(csv.DictReader(open(out)))
        space = tf.load_document(spec).space
        cfg = tf.TransformConfig.build(space, tolerance=1e-9)
        f = lambda pts: tf.basis_e_eval(space, tf.DualIndex((0,), (0,)), pts)
        expected, _ = tf.bargmann_theta(cfg, f, np.array([0.1, 0.2j]))
        assert float(row["re"]) == pytest.approx(expected.real, rel=1e-9)
        assert float(row["im"]) == pytest.approx(expected.imag, rel=1e-9)


class TestGramTable:
    def test_table_content(self, tmp_path):
        spec = write_doc(tmp_path, dict(BASE_DOC, nu=2.0))
        out = str(tmp_path / "gram.csv")
        assert run(RunConfig(command="gram-table", input_path=spec, output_path=out, figures=False)) == 0
        rows = list(csv.DictReader(open(out)))
        # 5 dual coords x 4 hermite orders
        assert len(rows) == 20 * 20
        space = tf.load_document(spec).space
        for row in rows:
            if row["gamma_a"] == row["gamma_b"] and row["k_a"] == row["k_b"]:
                idx = tf.DualIndex((int(row["gamma_a"]),), (int(row["k_a"]),))
                assert float(row["analytic"]) == pytest.approx(tf.basis_e_norm_sq(space, idx), rel=1e-12)
                assert float(row["abs_error"]) < 1e-7
            else:
                assert abs(complex(float(row["numeric_re"]), float(row["numeric_im"]))) < 1e-7

    def test_figure_rendered(self, tmp_path):
        spec = write_doc(tmp_path, dict(BASE_DOC, nu=2.0))
        out = str(tmp_path / "gram.csv")
        assert run(RunConfig(command="gram-table", input_path=spec, output_path=out, figures=True)) == 0
        assert (tmp_path / "gram_gram.png").exists()


@pytest.mark.slow
class TestVerifyCommand:
    def test_shipped_document_passes_and_is_deterministic(self, tmp_path):
        out1 = str(tmp_path / "v1.json")
        out2 = str(tmp_path / "v2.json")
        assert run(RunConfig(command="verify", input_path=FIXTURE, output_path=out1, seed=7, figures=True)) == 0
        assert run(RunConfig(command="verify", input_path=FIXTURE, output_path=out2, seed=7, figures=False)) == 0
        payload = json.loads(Path(out1).read_text())
        assert payload["schema_version"] == 1
        assert payload["all_pass"] is True
        assert all(c["status"] == "pass" for c in payload["checks"])
        assert Path(out1).read_bytes() == Path(out2).read_bytes()
        assert (tmp_path / "v1_residuals.png").exists()

    def test_exit_status_reflects_failures(self, tmp_path, monkeypatch):
        import thetafock.report as rpt

        def failing(*args, **kwargs):
            return [rpt.CheckResult("forced", False, 1.0, 1e-9)]

        monkeypatch.setattr(rpt, "run_verification", failing)
        out = str(tmp_path / "fail.json")
        assert run(RunConfig(command="verify", input_path=FIXTURE, output_path=out, figures=False)) == 1
        assert json.loads(Path(out).read_text())["all_pass"] is False


class TestMainEntry:
    def test_main_eval_theta(self, tmp_path, capsys):
        doc = dict(
            BASE_DOC,
            theta={"omega": {"re": [[0.0]], "im": [[2.0]]}, "points": [{"re": [0.3], "im": [0.0]}]},
        )
        spec = write_doc(tmp_path, doc)
        out = str(tmp_path / "t.csv")
        assert main(["--command", "eval-theta", "--spec", spec, "--out", out, "--tol", "1e-10"]) == 0
        rows = list(csv.DictReader(open(out)))
        got = complex(float(rows[0]["re"]), float(rows[0]["im"]))
        expected = tf.theta_eval(tf.ThetaParams([0.0], [0.0], [0.3], [[2j]]))
        assert got == pytest.approx(expected, rel=1e-9)
