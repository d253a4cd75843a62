import json

import numpy as np
import pytest

from qkzkit.cli import main, parse_complex


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


class TestParsing:
    def test_parse_complex(self):
        assert parse_complex("0.7") == 0.7
        assert parse_complex("0.5,-0.25") == 0.5 - 0.25j

    def test_unknown_check_exits_2(self, capsys):
        assert main(["verify", "nosuchcheck"]) == 2

    def test_bad_q_exits_2(self):
        assert main(["suite", "--q", "1.5"]) == 2

    def test_root_unity_proxy_exits_2(self):
        q = 0.9999999999999999 * np.exp(2j * np.pi / 3)
        assert main(["suite", f"--q={q.real},{q.imag}"]) == 2


class TestVerify:
    def test_single_group(self, capsys):
        code, out = run_cli(["verify", "reps", "--format", "json"], capsys)
        assert code == 0
        data = json.loads(out)
        assert all(rec["passed"] for rec in data)
        assert all(rec["wall_ms"] is None for rec in data)

    def test_unachievable_tolerance_exits_1(self, capsys):
        code, out = run_cli(["verify", "reps", "--tol", "1e-30"], capsys)
        assert code == 1
        data = json.loads(out)
        assert any(not rec["passed"] for rec in data)
        # reports still emitted with actual residuals
        assert all("residual" in rec for rec in data)


class TestRmat:
    def test_identity_at_equal_arguments(self, capsys):
        code, out = run_cli(["rmat", "--zeta1", "1.4", "--zeta2", "1.4", "--m", "1"],
                            capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["site_dims_out"] == [2, 2]
        data = np.array([complex(re, im) for re, im in payload["data"]]).reshape(4, 4)
        # Rcheck(z|z) = id means the dump equals the permutation matrix
        P = np.zeros((4, 4))
        for a in range(2):
            for b in range(2):
                P[b * 2 + a, a * 2 + b] = 1.0
        assert np.abs(data - P).max() < 1e-12

    def test_mixed_kind_dump(self, capsys):
        code, out = run_cli(["rmat", "--kinds", "VsV", "--zeta1", "1.5",
                             "--zeta2", "0.8", "--m", "2"], capsys)
        assert code == 0
        payload = json.loads(out)
        assert len(payload["data"]) == 81


class TestScalarsCmd:
    def test_kappa_one_row(self, capsys):
        code, out = run_cli(["scalars", "--samples", "1"], capsys)
        assert code == 0
        payload = json.loads(out)
        last = payload["rows"][-1]
        assert last["z"] == [1.0, 0.0]
        assert last["kappa_sl2"][0] == pytest.approx(1.0, abs=1e-12)
        assert last["kappa_sllpo"][0] == pytest.approx(1.0, abs=1e-12)


class TestDeterminism:
    def test_byte_identical_reports(self, tmp_path):
        out1 = tmp_path / "a.json"
        out2 = tmp_path / "b.json"
        args = ["verify", "crossing", "--seed", "11", "--samples", "2"]
        assert main(args + ["--out", str(out1)]) == 0
        assert main(args + ["--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_seed_changes_samples(self, tmp_path):
        out1 = tmp_path / "a.json"
        out2 = tmp_path / "b.json"
        assert main(["verify", "ybe", "--seed", "1", "--out", str(out1)]) == 0
        assert main(["verify", "ybe", "--seed", "2", "--out", str(out2)]) == 0
        assert out1.read_bytes() != out2.read_bytes()

    def test_text_format_runs(self, capsys):
        code, out = run_cli(["verify", "scalars", "--format", "text"], capsys)
        assert code == 0
        assert "checks passed" in out

    def test_parallel_matches_sequential(self, tmp_path):
        seq = tmp_path / "seq.json"
        par = tmp_path / "par.json"
        assert main(["suite", "--seed", "3", "--samples", "1", "--out", str(seq)]) == 0
        assert main(["suite", "--seed", "3", "--samples", "1", "--jobs", "4",
                     "--out", str(par)]) == 0
        assert seq.read_bytes() == par.read_bytes()
