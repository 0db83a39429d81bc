import io
import json
from contextlib import redirect_stdout

import pytest

from srcfdim.cli import main


def run_cli(args):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(args)
    return code, buf.getvalue()


def write_instance(tmp_path, doc, name="inst.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


GOLDEN_BCF = {
    "schema": "srcf-instance/1",
    "sigma": {"kind": "constant", "value": -1},
    "x": {"kind": "surd", "p": -1, "q": 1, "r": 2, "d": 5},
    "params": {"depth": 10},
}


class TestExpandCommand:
    def test_golden_backward_digits(self, tmp_path):
        path = write_instance(tmp_path, GOLDEN_BCF)
        code, out = run_cli(["expand", path])
        assert code == 0
        doc = json.loads(out)
        assert doc["result"]["digits"] == [2, 3, 3, 3, 3, 3, 3, 3, 3, 3]
        assert doc["status"] == "ok"
        assert doc["instance_hash"]
        assert doc["tool"]["name"] == "srcfdim"

    def test_depth_flag_overrides(self, tmp_path):
        path = write_instance(tmp_path, GOLDEN_BCF)
        code, out = run_cli(["expand", path, "--depth", "4"])
        assert json.loads(out)["result"]["digits"] == [2, 3, 3, 3]

    def test_uncertified_ball_exits_indeterminate(self, tmp_path):
        doc = {
            "schema": "srcf-instance/1",
            "sigma": {"kind": "constant", "value": 1},
            "x": {"kind": "decimal", "value": "0.333", "radius": "0.01"},
            "params": {"depth": 30},
        }
        code, out = run_cli(["expand", write_instance(tmp_path, doc)])
        assert code == 2
        assert json.loads(out)["status"] == "indeterminate"


class TestEvalAndInterval:
    def test_backward_truncation_value(self, tmp_path):
        doc = {
            "schema": "srcf-instance/1",
            "sigma": {"kind": "constant", "value": -1},
            "digits": [2, 2, 2, 2, 2],
        }
        code, out = run_cli(["eval", write_instance(tmp_path, doc)])
        assert code == 0
        assert json.loads(out)["result"]["value"] == "5/6"

    def test_interval_lengths(self, tmp_path):
        doc = {
            "schema": "srcf-instance/1",
            "sigma": {"kind": "constant", "value": 1},
            "digits": [1, 2],
        }
        code, out = run_cli(["interval", write_instance(tmp_path, doc)])
        res = json.loads(out)["result"]
        assert (res["lo"], res["hi"], res["length"]) == ("2/3", "3/4", "1/12")


class TestTauAndBlocks:
    def test_tau_cubes(self, tmp_path):
        doc = {"schema": "srcf-instance/1", "digit_set": {"kind": "powers", "exponent": 3}}
        code, out = run_cli(["tau", write_instance(tmp_path, doc)])
        res = json.loads(out)["result"]
        assert code == 0
        assert res["lower"] == res["upper"] == "1/3"
        assert res["method"] == "closed-form"

    def test_blocks_document(self, tmp_path):
        doc = {
            "schema": "srcf-instance/1",
            "digit_set": {"kind": "powers", "exponent": 2},
            "growth": {"kind": "power", "scale": "1", "exponent": 1},
            "params": {"epsilon": "1/10", "horizon": 6},
        }
        code, out = run_cli(["blocks", write_instance(tmp_path, doc)])
        scheme = json.loads(out)["result"]["scheme"]
        assert scheme["b"][:3] == [1, 4, 25]
        assert scheme["t"][0] == 24
        assert all(scheme["audit"].values())


class TestPressureCommand:
    def test_solve_rcf_pair(self, tmp_path):
        doc = {
            "schema": "srcf-instance/1",
            "sigma": {"kind": "constant", "value": 1},
            "alphabets": [1, 2],
            "params": {"horizon": 18, "solve": True, "depths": [8, 12, 15, 18],
                       "tolerance": 0.01},
        }
        code, out = run_cli(["pressure", write_instance(tmp_path, doc)])
        assert code == 0
        res = json.loads(out)["result"]["critical_exponent"]
        lo, hi = float(res["bracket"][0]), float(res["bracket"][1])
        assert lo <= 0.5312805 <= hi
        assert res["status"] == "converged"

    def test_bracket_output_has_provenance(self, tmp_path):
        doc = {
            "schema": "srcf-instance/1",
            "sigma": {"kind": "constant", "value": 1},
            "alphabets": [2, 3],
            "params": {"horizon": 8, "s": 0.5, "depths": [4, 8]},
        }
        code, out = run_cli(["pressure", write_instance(tmp_path, doc)])
        res = json.loads(out)["result"]
        assert code == 0
        assert "gamma" in res["provenance"]
        assert len(res["partition_brackets"]) == 2
        for b in res["partition_brackets"]:
            assert float(b["log_Z"][0]) <= float(b["log_Z"][1])


class TestCertificateCommands:
    def test_dim_upper(self, tmp_path):
        doc = {
            "schema": "srcf-instance/1",
            "sigma": {"kind": "constant", "value": 1},
            "digit_set": {"kind": "naturals"},
            "params": {"epsilon": "1/2"},
        }
        code, out = run_cli(["dim-upper", write_instance(tmp_path, doc)])
        assert code == 0
        cert = json.loads(out)["result"]["upper_certificate"]
        assert cert["certified"] is True
        assert cert["bound"] == "3/4"
        assert 1500 <= cert["cutoff_L"] <= 1800

    def test_dim_lower(self, tmp_path):
        doc = {
            "schema": "srcf-instance/1",
            "sigma": {"kind": "periodic", "pattern": [1, -1]},
            "digit_set": {"kind": "powers", "exponent": 2},
            "growth": {"kind": "power", "scale": "1", "exponent": 1},
            "params": {"epsilon": "1/10", "delta": "1/10"},
        }
        code, out = run_cli(["dim-lower", write_instance(tmp_path, doc)])
        assert code == 0
        cert = json.loads(out)["result"]["lower_certificate"]
        assert cert["certified"] is True
        assert cert["s_lower"] == "4/21"
        assert cert["constants"]["N"] == 16


class TestVerifyCommand:
    def test_default_suite_passes(self, tmp_path):
        doc = {"schema": "srcf-instance/1"}
        code, out = run_cli(["verify", write_instance(tmp_path, doc)])
        assert code == 0
        res = json.loads(out)["result"]
        assert res["passed"] == res["total"]

    def test_csv_table(self, tmp_path):
        doc = {"schema": "srcf-instance/1"}
        csv_path = tmp_path / "checks.csv"
        code, _ = run_cli(["verify", write_instance(tmp_path, doc), "--csv", str(csv_path)])
        assert code == 0
        header = csv_path.read_text().splitlines()[0]
        assert "name" in header and "passed" in header


class TestErrorsAndDeterminism:
    def test_parse_error_reports_position(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text('{"schema": "srcf-instance/1",,}')
        code = main(["expand", str(path)])
        assert code == 1
        err = capsys.readouterr().err
        assert "line 1" in err and "column" in err

    def test_unknown_field_rejected(self, tmp_path, capsys):
        path = write_instance(tmp_path, {"schema": "srcf-instance/1", "bogus": 1})
        assert main(["tau", str(path)]) == 1

    def test_unknown_param_rejected(self, tmp_path):
        path = write_instance(tmp_path, {"schema": "srcf-instance/1",
                                         "params": {"nonsense": True}})
        assert main(["tau", str(path)]) == 1

    def test_missing_file(self, capsys):
        assert main(["tau", "/nonexistent/inst.json"]) == 1

    def test_byte_identical_across_thread_counts(self, tmp_path):
        doc = {
            "schema": "srcf-instance/1",
            "sigma": {"kind": "constant", "value": 1},
            "alphabets": [100000, 100001, 100002],
            "params": {"horizon": 5, "s": 0.4, "depths": [3, 4, 5],
                       "mode": "exact-enumeration", "seed": 7},
        }
        path = write_instance(tmp_path, doc)
        outputs = []
        for threads in (1, 4, 8):
            code, out = run_cli(["pressure", path, "--threads", str(threads),
                                 "--deterministic"])
            assert code == 0
            outputs.append(out)
        assert outputs[0] == outputs[1] == outputs[2]
