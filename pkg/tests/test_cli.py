from __future__ import annotations

import json

import pytest

from ttckit.cli import main
from ttckit.serialize import dumps_instance, dumps_preferences_csv, load_allocation
from ttckit.reference import EXAMPLE1, EXAMPLE2


@pytest.fixture
def example1_path(tmp_path, example1):
    path = tmp_path / "example1.json"
    path.write_text(dumps_instance(example1))
    return path


@pytest.fixture
def example2_path(tmp_path, example2):
    path = tmp_path / "example2.json"
    path.write_text(dumps_instance(example2))
    return path


class TestSolve:
    def test_classical_prints_assignment(self, capsys, example1_path):
        assert main(["solve", str(example1_path), "--method", "classical"]) == 0
        out = capsys.readouterr().out
        assert "1→1 2→3 3→2 4→4" in out

    def test_spectral_prints_assignment(self, capsys, example2_path):
        assert main(["solve", str(example2_path), "--method", "spectral"]) == 0
        out = capsys.readouterr().out
        assert "1→1 2→5 3→3 4→4 5→2" in out

    def test_verbose_prints_rounds(self, capsys, example2_path):
        main(["solve", str(example2_path), "--verbose"])
        out = capsys.readouterr().out
        assert "round 1: (1) (2,5)" in out
        assert "round 3: (3)" in out

    def test_verbose_spectral_prints_order_and_coefficients(self, capsys, example1_path):
        main(["solve", str(example1_path), "--method", "spectral", "--verbose"])
        out = capsys.readouterr().out
        assert "pick order: 1 4 2 3" in out
        assert "0.67952481" in out  # 8-decimal printing

    def test_writes_allocation_file(self, tmp_path, example1_path):
        out = tmp_path / "alloc.json"
        assert main(["solve", str(example1_path), "--out", str(out)]) == 0
        allocation = load_allocation(out)
        assert allocation.assignment == (0, 2, 1, 3)

    def test_reads_preference_csv(self, capsys, tmp_path, example2):
        path = tmp_path / "prefs.csv"
        path.write_text(dumps_preferences_csv(example2.profile))
        assert main(["solve", str(path), "--method", "spectral"]) == 0
        assert "1→1" in capsys.readouterr().out

    def test_malformed_file_exits_2_naming_agent(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"preferences": [[1, 1], [2, 1]]}')
        assert main(["solve", str(path)]) == 2
        assert "agent 1" in capsys.readouterr().err

    def test_missing_file_exits_2(self, capsys, tmp_path):
        assert main(["solve", str(tmp_path / "nope.json")]) == 2

    def test_convergence_failure_exits_3(self, capsys, example1_path):
        code = main(
            ["solve", str(example1_path), "--method", "spectral",
             "--max-iter", "1", "--tol", "1e-15"]
        )
        assert code == 3
        assert "max-iter" in capsys.readouterr().err


class TestGen:
    def test_writes_requested_count(self, capsys, tmp_path):
        out = tmp_path / "batch"
        assert main(["gen", "--n", "4", "--count", "2", "--seed", "1", "--out", str(out)]) == 0
        files = sorted(out.glob("*.json"))
        assert len(files) == 2
        assert "wrote 2 instance files" in capsys.readouterr().out

    def test_bad_model_exits_2(self, tmp_path):
        with pytest.raises(SystemExit) as info:
            main(["gen", "--n", "4", "--model", "zipf", "--out", str(tmp_path)])
        assert info.value.code == 2


class TestCompareAndAudit:
    def test_compare_prints_agreement_rate(self, capsys):
        assert main(["compare", "--n", "5", "--count", "20", "--seed", "3"]) == 0
        assert "agreement rate" in capsys.readouterr().out

    def test_compare_writes_report_and_counterexample(self, capsys, tmp_path):
        report = tmp_path / "report.jsonl"
        counter = tmp_path / "counter.json"
        code = main(
            ["compare", "--n", "4", "--count", "50", "--seed", "12345",
             "--out", str(report), "--counterexample", str(counter)]
        )
        assert code == 0
        lines = report.read_text().splitlines()
        assert len(lines) == 50
        assert all("agreement" in json.loads(line) for line in lines)
        assert counter.exists()

    def test_audit_runs_small_oracles(self, capsys):
        assert main(["audit", "--n", "3", "--count", "10", "--seed", "1"]) == 0
        out = capsys.readouterr().out
        assert "misreport violations" in out
        assert "(10 checked)" in out

    def test_invalid_thread_cap_exits_2(self, monkeypatch, capsys):
        monkeypatch.setenv("TTC_THREADS", "lots")
        assert main(["compare", "--n", "3", "--count", "2", "--seed", "1"]) == 2
        assert "TTC_THREADS" in capsys.readouterr().err

    def test_thread_cap_respected(self, monkeypatch, capsys):
        monkeypatch.setenv("TTC_THREADS", "2")
        assert main(["compare", "--n", "3", "--count", "8", "--seed", "1"]) == 0


class TestBench:
    def test_writes_csv_and_prints_exponents(self, capsys, tmp_path):
        out = tmp_path / "bench.csv"
        code = main(["bench", "--sizes", "10,20", "--count", "3", "--out", str(out)])
        assert code == 0
        assert "scaling exponents" in capsys.readouterr().out
        lines = out.read_text().splitlines()
        assert lines[0].startswith("n,method,median_ms")
        assert len(lines) == 1 + 4  # 2 sizes x 2 methods

    def test_append_then_overwrite(self, tmp_path):
        out = tmp_path / "bench.csv"
        argv = ["bench", "--sizes", "10", "--count", "3", "--methods", "classical",
                "--out", str(out)]
        main(argv)
        main(argv)
        assert len(out.read_text().splitlines()) == 3  # header + 2 appended rows
        main(argv + ["--overwrite"])
        assert len(out.read_text().splitlines()) == 2

    def test_bad_sizes_exit_2(self, capsys):
        assert main(["bench", "--sizes", "ten"]) == 2
        assert "--sizes" in capsys.readouterr().err


class TestRepro:
    def test_passes_on_healthy_build(self, capsys):
        assert main(["repro"]) == 0
        out = capsys.readouterr().out
        assert "[3.5 2.25 1.75 2.5]" in out
        assert "FAIL" not in out
        assert out.count("PASS") == 18

    def test_degraded_tolerance_fails(self, capsys):
        assert main(["repro", "--tol", "1e-2"]) == 1
        out = capsys.readouterr().out
        assert "FAIL" in out
        assert "singular magnitudes" in out


class TestParsing:
    def test_requires_subcommand(self):
        with pytest.raises(SystemExit) as info:
            main([])
        assert info.value.code == 2

    def test_reference_constants_are_self_consistent(self):
        # the CLI embeds these; a size mismatch would break repro quietly
        assert len(EXAMPLE1.preferences) == len(EXAMPLE1.v0_magnitudes) == 4
        assert len(EXAMPLE2.preferences) == len(EXAMPLE2.v0_magnitudes) == 5
