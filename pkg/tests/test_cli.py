"""Harness and CLI: end-to-end runs, sweeps, the independent verifier,
serialization formats, and exit codes."""
import csv
import json

from hamdecomp.cli import main
from hamdecomp.graph import Graph
from hamdecomp.harness import CSV_HEADER, run, sweep, verify_result
from hamdecomp.sampler import Params


class TestRun:
    def test_dense_small_sanity(self, tmp_path):
        out = tmp_path / "r.json"
        graph_out = tmp_path / "g.txt"
        result = run(Params(n=50, p0=0.9, eta=0.3, seed=1),
                     out_path=str(out), graph_out=str(graph_out))
        assert result.achieved_cycles >= 1
        assert result.phase_failed is None
        doc = json.loads(out.read_text())
        assert doc["schema"] == 1
        assert doc["achieved_cycles"] == result.achieved_cycles
        g0 = Graph.from_text(graph_out.read_text())
        for cyc in result.hamilton_cycles:
            assert g0.verify_hamilton_cycle(cyc)

    def test_reproducible(self):
        p = Params(n=60, p0=0.5, eta=0.3, seed=7)
        a = run(p)
        b = run(p)
        assert a.hamilton_cycles == b.hamilton_cycles
        assert a.csv_row()[:-1] == b.csv_row()[:-1]  # all but wall_ms

    def test_phase_failure_records_partial_result(self, tmp_path):
        out = tmp_path / "fail.json"
        # p0=0 gives an empty graph: extraction must fail but a result is
        # still written
        result = run(Params(n=20, p0=0.0, eta=0.3, seed=0), out_path=str(out))
        assert result.phase_failed == "extract"
        doc = json.loads(out.read_text())
        assert doc["phase_failed"] == "extract"
        assert doc["achieved_cycles"] == 0


class TestSweep:
    def test_csv_shape(self, tmp_path):
        out = tmp_path / "sweep.csv"
        rows = sweep([Params(n=40, p0=0.8, eta=0.3, seed=0)], 2, str(out))
        assert len(rows) == 2
        with open(out) as fh:
            reader = csv.reader(fh)
            header = next(reader)
            body = list(reader)
        assert header == CSV_HEADER
        assert len(body) == 2
        assert body[0][0] == "40"

    def test_empty_grid_rejected(self, tmp_path):
        import pytest

        with pytest.raises(ValueError):
            sweep([], 1, str(tmp_path / "x.csv"))


class TestVerify:
    def _fixture(self, tmp_path):
        out = tmp_path / "r.json"
        graph_out = tmp_path / "g.txt"
        run(Params(n=40, p0=0.9, eta=0.3, seed=2),
            out_path=str(out), graph_out=str(graph_out))
        return out, graph_out

    def test_valid_result_passes(self, tmp_path):
        out, graph_out = self._fixture(tmp_path)
        verdict = verify_result(str(out), str(graph_out))
        assert verdict["ok"]
        assert verdict["cycles"] >= 1

    def test_detects_shared_edge(self, tmp_path):
        out, graph_out = self._fixture(tmp_path)
        doc = json.loads(out.read_text())
        if len(doc["hamilton_cycles"]) < 2:
            doc["hamilton_cycles"].append(doc["hamilton_cycles"][0])
        else:
            doc["hamilton_cycles"][1] = doc["hamilton_cycles"][0]
        out.write_text(json.dumps(doc))
        verdict = verify_result(str(out), str(graph_out))
        assert not verdict["ok"]
        assert "reused" in verdict["reason"]

    def test_detects_missing_vertex(self, tmp_path):
        out, graph_out = self._fixture(tmp_path)
        doc = json.loads(out.read_text())
        cyc = doc["hamilton_cycles"][0]
        doc["hamilton_cycles"][0] = cyc[:-1]
        out.write_text(json.dumps(doc))
        verdict = verify_result(str(out), str(graph_out))
        assert not verdict["ok"]
        assert "missing" in verdict["reason"]

    def test_detects_non_edge(self, tmp_path):
        out, graph_out = self._fixture(tmp_path)
        g0 = Graph.from_text(graph_out.read_text())
        non_edge = next(
            (u, v)
            for u in range(g0.n)
            for v in range(u + 1, g0.n)
            if not g0.has_edge(u, v)
        )
        u, v = non_edge
        rest = [x for x in range(g0.n) if x not in non_edge]
        doc = json.loads(out.read_text())
        doc["hamilton_cycles"] = [[u, v] + rest]
        out.write_text(json.dumps(doc))
        verdict = verify_result(str(out), str(graph_out))
        assert not verdict["ok"]


class TestCliExitCodes:
    def test_run_ok(self, tmp_path, capsys):
        code = main(["run", "--n", "40", "--p0", "0.9", "--eta", "0.3",
                     "--seed", "1", "--out", str(tmp_path / "r.json")])
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["achieved_cycles"] >= 1

    def test_param_error(self, capsys):
        assert main(["run", "--n", "10", "--p0", "1.5", "--eta", "0.3"]) == 2

    def test_phase_failure(self, tmp_path):
        code = main(["run", "--n", "10", "--p0", "0.0", "--eta", "0.3",
                     "--out", str(tmp_path / "r.json")])
        assert code == 3

    def test_max_retries_flag(self, tmp_path):
        # a huge retry budget behaves like the default floor
        code = main(["run", "--n", "40", "--p0", "0.9", "--eta", "0.3",
                     "--max-retries", "50", "--out", str(tmp_path / "r.json")])
        assert code == 0
        assert main(["run", "--n", "10", "--p0", "0.5", "--eta", "0.3",
                     "--max-retries", "-1"]) == 2

    def test_verify_roundtrip(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        assert main(["run", "--n", "40", "--p0", "0.9", "--eta", "0.3",
                     "--out", str(out)]) == 0
        capsys.readouterr()
        assert main(["verify", str(out), str(out) + ".graph.txt"]) == 0
        verdict = json.loads(capsys.readouterr().out)
        assert verdict["ok"]

    def test_verify_failure_exit_code(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        main(["run", "--n", "40", "--p0", "0.9", "--eta", "0.3", "--out", str(out)])
        doc = json.loads(out.read_text())
        doc["hamilton_cycles"][0] = doc["hamilton_cycles"][0][:-1]
        out.write_text(json.dumps(doc))
        capsys.readouterr()
        assert main(["verify", str(out), str(out) + ".graph.txt"]) == 1

    def test_sweep_cli(self, tmp_path, capsys):
        out = tmp_path / "s.csv"
        grid = json.dumps([{"n": 40, "p0": 0.8, "eta": 0.3, "seed": 0}])
        assert main(["sweep", "--grid", grid, "--seeds", "1", "--out", str(out)]) == 0
        with open(out) as fh:
            assert next(csv.reader(fh)) == CSV_HEADER

    def test_sweep_empty_grid(self, tmp_path):
        assert main(["sweep", "--grid", "[]", "--out", str(tmp_path / "s.csv")]) == 2

    def test_oracle_suite(self, capsys):
        assert main(["oracle"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["census_k5"]["total"] == 12
        assert report["census_k6"]["total"] == 70
        assert report["fracsum_bound"]["ok"]
        assert report["perm_bound"]["ok"]

    def test_diag(self, capsys):
        assert main(["diag", "--n", "100", "--p0", "0.3", "--eta", "0.25",
                     "--trials", "50"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert "degrees" in report and "deviation" in report and "budgets" in report
