import io
import json
import os
import sys

import pytest

from twistcert.cli import EXIT_FAILURE, EXIT_INVALID, EXIT_OK, main, parse_curve
from twistcert.curve import QuadField, make_curve
from twistcert.forge import forge
from twistcert.ledger import certificate_to_json


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    so, se = sys.stdout, sys.stderr
    sys.stdout, sys.stderr = out, err
    try:
        code = main(argv)
    except SystemExit as exc:  # argparse's own exit path
        code = exc.code
    finally:
        sys.stdout, sys.stderr = so, se
    return code, out.getvalue(), err.getvalue()


class TestParseCurve:
    def test_pair(self):
        assert parse_curve("0,-2") == make_curve(0, -2)

    def test_json(self):
        assert parse_curve('{"A": 0, "B": -2}') == make_curve(0, -2)

    def test_garbage(self):
        with pytest.raises(ValueError):
            parse_curve("0;2")


class TestClassifyCommand:
    def test_table(self):
        code, out, err = run(["classify", "--curve", "0,-2", "--D", "5", "--bound", "50"])
        assert code == EXIT_OK
        doc = json.loads(out)
        rows = {r["prime"]: r for r in doc["rows"]}
        assert rows["5"]["torsion_dim"] == "1"
        assert rows["5"]["splitting_in_K"] == "Ramified"
        assert rows["7"]["torsion_dim"] == "0"
        assert rows["43"]["torsion_dim"] == "2"
        assert rows["43"]["splitting_in_K"] == "Inert"
        assert rows["3"]["good_for_E"] is False

    def test_singular_curve_exit_2(self):
        code, _, _ = run(["classify", "--curve", "0,0", "--D", "5"])
        assert code == EXIT_INVALID

    def test_torsion_warning_still_emits(self):
        code, out, err = run(["classify", "--curve", "-1,0", "--D", "5", "--bound", "20"])
        assert code == EXIT_OK
        assert "no_rational_2_torsion=false" in err
        assert json.loads(out)["rows"]

    def test_nonsquarefree_D_normalized_with_warning(self):
        code, out, err = run(["classify", "--curve", "0,-2", "--D", "20", "--bound", "20"])
        assert code == EXIT_OK
        assert "squarefree" in err
        assert json.loads(out)["D"] == "5"

    def test_threads_flag_gives_same_rows(self):
        _, out1, _ = run(["classify", "--curve", "0,-2", "--D", "5", "--bound", "200"])
        _, out4, _ = run(["classify", "--curve", "0,-2", "--D", "5", "--bound", "200",
                          "--threads", "4"])
        assert out1 == out4


class TestForgeCommand:
    def test_flagship(self):
        code, out, _ = run(["forge", "--curve", "0,-2", "--D", "5", "--r", "10",
                            "--bound", "1000000"])
        assert code == EXIT_OK
        cert = json.loads(out)
        assert int(cert["sel_K_lower"]) >= 12
        assert sum(1 for m in cert["a_set"] if m["member"]) >= 6
        assert all(cert["hypothesis_checklist"].values())

    def test_output_matches_library_bytes(self):
        code, out, _ = run(["forge", "--curve", "0,-2", "--D", "5", "--r", "0",
                            "--bound", "1000000"])
        lib = certificate_to_json(forge(make_curve(0, -2), QuadField(D=5), 0, 10**6))
        assert out.strip() == lib

    def test_hypothesis_exit_2(self):
        code, _, _ = run(["forge", "--curve", "0,-2", "--D", "-3", "--r", "4"])
        assert code == EXIT_INVALID

    def test_exhausted_exit_1(self):
        code, _, _ = run(["forge", "--curve", "0,-2", "--D", "5", "--r", "100",
                          "--bound", "50"])
        assert code == EXIT_FAILURE

    def test_rank_flags_must_pair(self):
        code, _, _ = run(["forge", "--curve", "0,-2", "--D", "5", "--r", "0",
                          "--rank-d", "0"])
        assert code == EXIT_INVALID

    def test_out_file(self, tmp_path):
        path = tmp_path / "cert.json"
        code, out, _ = run(["forge", "--curve", "0,-2", "--D", "5", "--r", "0",
                            "--bound", "1000000", "--out", str(path)])
        assert code == EXIT_OK and out == ""
        assert json.loads(path.read_text())["d"] == "2881"


class TestVerifyCommand:
    @pytest.fixture()
    def cert_path(self, tmp_path):
        path = tmp_path / "cert.json"
        run(["forge", "--curve", "0,-2", "--D", "5", "--r", "0",
             "--bound", "1000000", "--out", str(path)])
        return path

    def test_fresh_certificate_verifies(self, cert_path):
        assert run(["verify", str(cert_path)])[0] == EXIT_OK

    def test_edited_bound_exit_1(self, cert_path):
        doc = json.loads(cert_path.read_text())
        doc["sel_K_lower"] = "12"
        cert_path.write_text(json.dumps(doc))
        code, _, err = run(["verify", str(cert_path)])
        assert code == EXIT_FAILURE
        assert "sel_K_lower" in err

    def test_edited_membership_exit_1(self, cert_path):
        doc = json.loads(cert_path.read_text())
        doc["a_set"][0]["inert_in_K"] = False
        doc["a_set"][0]["member"] = False
        cert_path.write_text(json.dumps(doc))
        assert run(["verify", str(cert_path)])[0] == EXIT_FAILURE

    def test_truncated_exit_2(self, cert_path):
        cert_path.write_text(cert_path.read_text()[:40])
        assert run(["verify", str(cert_path)])[0] == EXIT_INVALID

    def test_wrong_schema_exit_2(self, cert_path):
        doc = json.loads(cert_path.read_text())
        doc["schema_version"] = "2"
        cert_path.write_text(json.dumps(doc))
        assert run(["verify", str(cert_path)])[0] == EXIT_INVALID

    def test_missing_file_exit_2(self, tmp_path):
        assert run(["verify", str(tmp_path / "nope.json")])[0] == EXIT_INVALID


class TestLocalCommand:
    def test_pairing_report(self):
        code, out, _ = run(["local", "--curve", "0,-2", "--q", "43", "--D", "5"])
        assert code == EXIT_OK
        doc = json.loads(out)
        assert doc["gram_rank"] == "4"
        assert doc["w_subspace"]["dim"] == "2"
        assert doc["w_equals_alpha_1"] is True

    def test_ramified_intersection(self):
        code, out, _ = run(["local", "--curve", "0,-2", "--q", "43",
                            "--twist-class", "ramified-u"])
        doc = json.loads(out)
        assert doc["alpha_twist"]["dim"] == "2"
        assert doc["intersection_dim_with_alpha_1"] == "0"

    def test_no_full_torsion_exit_2(self):
        assert run(["local", "--curve", "0,-2", "--q", "7"])[0] == EXIT_INVALID

    def test_text_format(self):
        code, out, _ = run(["local", "--curve", "0,-2", "--q", "43",
                            "--format", "text"])
        assert code == EXIT_OK
        assert "gram_rank: 4" in out


def test_exit_codes_are_exhaustive():
    # 0 success / 1 search or verification failure / 2 invalid input
    assert EXIT_OK == 0 and EXIT_FAILURE == 1 and EXIT_INVALID == 2


GOLDEN = os.path.join(os.path.dirname(__file__), "golden", "cert_r0.json")


def test_golden_certificate(request):
    """CLI output is pinned byte-for-byte; regenerate only with
    `pytest --update-golden` after an intentional schema change."""
    code, out, _ = run(["forge", "--curve", "0,-2", "--D", "5", "--r", "0",
                        "--bound", "1000000"])
    assert code == EXIT_OK
    if request.config.getoption("--update-golden"):
        os.makedirs(os.path.dirname(GOLDEN), exist_ok=True)
        with open(GOLDEN, "w") as fh:
            fh.write(out)
        pytest.skip("golden file regenerated")
    with open(GOLDEN) as fh:
        assert out == fh.read()
