"""
리포트, 스윕 실행기, 입력 파서, 시나리오 설정 테스트
"""
import json

import pytest
from pydantic import ValidationError

from app.core.config import load_scenario_config
from app.core.parsers import NO_EDGE, parse_edge_list, parse_predicate, parse_table, parse_tree
from app.core.report import (
    emit_figures,
    emit_report,
    figure_tables,
    load_report,
    markdown_table,
    to_report_row,
)
from app.core.runner import app_specs, first_failure, run_sweep, workload_specs
from app.core.workloads import run_workload
from app.core.apps import And, Cmp, demo_query
from app.domain.errors import InputParseError, UnknownFormat
from app.domain.schemas import (
    AppKind,
    Calibration,
    Method,
    ReportFormat,
    ReportRow,
    ScenarioConfig,
    WorkloadKind,
    WorkloadSpec,
)


def row(name: str = "w1", method: Method = Method.TFHE, b: int = 8, size: int = 1, ms: float = 1.5,
        rep: int = 0, oracle_pass: bool = True) -> ReportRow:
    return ReportRow(
        scenario_id=f"{name}-{method.value}-b{b:02d}-s{size:04d}-r{rep:03d}",
        method=method, b=b, slot_count=size, name=name, size=size, seed=1,
        oracle_pass=oracle_pass, gate_bootstraps=10, model_estimated_ms=ms,
    )


class TestEmit:
    def test_empty_csv_is_header_only(self):
        data = emit_report([], ReportFormat.CSV)
        assert data.decode("utf-8") == ",".join(ReportRow.field_names()) + "\n"

    def test_empty_jsonl(self):
        assert emit_report([], "jsonl") == b""

    def test_jsonl_round_trip(self, tmp_path):
        rows = [row(b=8), row(b=6, ms=0.25)]
        path = tmp_path / "report.jsonl"
        path.write_bytes(emit_report(rows, ReportFormat.JSONL))
        loaded = load_report(path)
        # 시나리오 키 순으로 정렬되어 기록
        assert [r.b for r in loaded] == [6, 8]
        assert loaded[1] == rows[0]

    def test_field_order_fixed(self):
        line = emit_report([row()], "jsonl").decode("utf-8").strip()
        assert list(json.loads(line).keys()) == ReportRow.field_names()

    def test_csv_rows(self):
        lines = emit_report([row(), row(name="w2")], "csv").decode("utf-8").splitlines()
        assert len(lines) == 3
        assert lines[1].startswith("w1-tfhe-b08")

    def test_markdown(self):
        text = emit_report([row(), row(method=Method.SCHEME)], "markdown").decode("utf-8")
        assert text.startswith("# fhe-gen report (2 scenarios)")
        assert "## w1 / tfhe" in text
        assert "cost_vs_bits" in text

    def test_deterministic_bytes(self):
        rows = [row(b=8), row(b=6)]
        assert emit_report(rows, "csv") == emit_report(list(reversed(rows)), "csv")

    def test_unknown_format(self):
        with pytest.raises(UnknownFormat):
            emit_report([row()], "xml")


class TestFigures:
    def test_cost_vs_bits(self):
        rows = [row(b=6, ms=1.0), row(b=8, ms=3.0), row(b=8, ms=5.0, rep=1)]
        tables = figure_tables(rows)
        bits = tables["cost_vs_bits"]
        assert list(bits.columns) == ["name", "method", "size", "b=6", "b=8"]
        assert bits.loc[0, "b=8"] == 4.0

    def test_cost_vs_size(self):
        rows = [row(size=1), row(size=8, ms=2.0)]
        sizes = figure_tables(rows, "gate_bootstraps")["cost_vs_size"]
        assert "size=8" in sizes.columns

    def test_unknown_metric(self):
        with pytest.raises(ValueError):
            figure_tables([row()], "nope")

    def test_empty_figures(self):
        assert "(no rows)" in emit_figures([]).decode("utf-8")

    def test_markdown_table(self):
        tables = figure_tables([row(b=6, ms=1.0)])
        lines = markdown_table(tables["cost_vs_bits"]).splitlines()
        assert lines[0] == "| name | method | size | b=6 |"
        assert lines[1] == "|---|---|---|---|"
        assert lines[2] == "| w1 | tfhe | 1 | 1.0 |"


class TestLoad:
    def test_missing_file(self, tmp_path):
        with pytest.raises(InputParseError):
            load_report(tmp_path / "none.jsonl")

    def test_bad_line(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"scenario_id": "x"}\n', encoding="utf-8")
        with pytest.raises(InputParseError):
            load_report(path)


class TestReportRow:
    def test_from_workload(self):
        spec = WorkloadSpec(kind=WorkloadKind.W1, method=Method.ENCODING, b=8, slot_count=4)
        r = to_report_row(run_workload(spec), Calibration())
        assert r.scenario_id == spec.scenario_id
        assert r.oracle_pass
        assert r.reconcile in ("pass", "warn")
        assert r.model_estimated_amortized_ms == pytest.approx(r.model_estimated_ms / 4, abs=1e-3)

    def test_tfhe_not_amortized(self):
        spec = WorkloadSpec(kind=WorkloadKind.W2, method=Method.TFHE, b=6, slot_count=3)
        r = to_report_row(run_workload(spec), Calibration())
        assert r.model_estimated_amortized_ms == r.model_estimated_ms


class TestRunner:
    def test_spec_counts(self):
        specs = workload_specs(list(WorkloadKind), list(Method), [6, 8], [1, 4], seed=1, repeat=2)
        assert len(specs) == 3 * 3 * 2 * 2 * 2
        apps = app_specs(AppKind.SORT, [Method.TFHE], [8], [2, 3], seed=1, repeat=1)
        assert [a.size for a in apps] == [2, 3]

    def test_repeat_zero(self):
        assert workload_specs([WorkloadKind.W1], [Method.TFHE], [8], [1], seed=1, repeat=0) == []
        assert run_sweep([], ScenarioConfig()) == []

    def test_parallel_matches_serial(self):
        specs = workload_specs([WorkloadKind.W1, WorkloadKind.W2], list(Method), [6], [2], seed=3, repeat=1)
        serial = run_sweep(specs, ScenarioConfig(), workers=1)
        parallel = run_sweep(specs, ScenarioConfig(), workers=4)
        assert serial == parallel
        assert [r.scenario_id for r in serial] == sorted(r.scenario_id for r in serial)

    def test_first_failure(self):
        assert first_failure([row()]) is None
        assert first_failure([row(), row(name="w2", oracle_pass=False)]) == "w2-tfhe-b08-s0001-r000"


class TestParsers:
    def test_edge_list(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("# u v w\n0 1 4\n1,2,1\n0 2 10\n0 1 3\n", encoding="utf-8")
        adj = parse_edge_list(path)
        assert adj.shape == (3, 3)
        assert adj[0, 1] == 3
        assert adj[1, 0] == NO_EDGE
        assert adj[2, 2] == 0

    def test_edge_list_node_count(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("0 1 4\n", encoding="utf-8")
        assert parse_edge_list(path, nodes=5).shape == (5, 5)

    @pytest.mark.parametrize("text", ["0 1\n", "0 1 x\n", "0 1 -3\n", "-1 0 2\n"])
    def test_edge_list_errors(self, tmp_path, text):
        path = tmp_path / "g.txt"
        path.write_text(text, encoding="utf-8")
        with pytest.raises(InputParseError):
            parse_edge_list(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(InputParseError):
            parse_edge_list(tmp_path / "none.txt")

    def test_tree(self, tmp_path):
        path = tmp_path / "t.txt"
        path.write_text("0:5\n0:3 0:7\n10 20 30 40\n", encoding="utf-8")
        tree = parse_tree(path)
        assert tree.depth == 2
        assert tree.thresholds == [[5], [3, 7]]
        assert tree.labels == [10, 20, 30, 40]

    @pytest.mark.parametrize("text", ["0:5\n", "0-5\n1 2\n", "0:5\n0:3\n1 2 3 4\n", "a:5\n1 2\n"])
    def test_tree_errors(self, tmp_path, text):
        path = tmp_path / "t.txt"
        path.write_text(text, encoding="utf-8")
        with pytest.raises(InputParseError):
            parse_tree(path)

    def test_table(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("id,salary,bonus\n7,10,9000\n8,100,10000\n", encoding="utf-8")
        columns, ids = parse_table(path)
        assert ids.tolist() == [7, 8]
        assert sorted(columns) == ["bonus", "salary"]
        assert columns["salary"].tolist() == [10, 100]

    @pytest.mark.parametrize("text", ["a,b\n", "a,b\n1,x\n", "a,b\n1,-2\n"])
    def test_table_errors(self, tmp_path, text):
        path = tmp_path / "t.csv"
        path.write_text(text, encoding="utf-8")
        with pytest.raises(InputParseError):
            parse_table(path)

    def test_predicate(self):
        pred = parse_predicate(demo_query(16).model_dump_json())
        assert isinstance(pred, And)
        assert pred == demo_query(16)
        cmp = parse_predicate('{"kind": "cmp", "expr": {"kind": "column", "name": "bonus"}, "op": ">=", "value": 10}')
        assert isinstance(cmp, Cmp)

    @pytest.mark.parametrize("text", ["{", '{"kind": "cmp", "op": "!="}'])
    def test_predicate_errors(self, text):
        with pytest.raises(InputParseError):
            parse_predicate(text)


class TestScenarioConfig:
    def test_defaults_without_file(self, monkeypatch):
        monkeypatch.delenv("FHEGEN_CONFIG", raising=False)
        config = load_scenario_config(None)
        assert config.report_format is ReportFormat.JSONL
        assert config.profile(Method.TFHE).allow_refresh

    def test_load_ini(self, tmp_path):
        path = tmp_path / "fhegen.ini"
        path.write_text(
            "[profile.encoding]\nallow_refresh = false\nms_per_refresh = 1.0\n"
            "[calibration]\nms_per_gate_bootstrap = 20.0\n"
            "[rng]\nseed = 7\n"
            "[report]\nformat = csv\n",
            encoding="utf-8",
        )
        config = load_scenario_config(str(path))
        enc = config.profile(Method.ENCODING)
        assert enc.allow_refresh is False
        assert enc.calibration.ms_per_refresh == 1.0
        assert enc.calibration.ms_per_gate_bootstrap == 20.0
        assert config.profile(Method.TFHE).calibration.ms_per_gate_bootstrap == 20.0
        assert config.rng.seed == 7
        assert config.report_format is ReportFormat.CSV

    def test_bad_rng_algorithm(self, tmp_path):
        path = tmp_path / "fhegen.ini"
        path.write_text("[rng]\nalgorithm = MT19937\n", encoding="utf-8")
        with pytest.raises(ValidationError):
            load_scenario_config(str(path))

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_scenario_config(str(tmp_path / "none.ini"))
