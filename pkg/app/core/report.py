"""
모듈 설명:
    - 시나리오 결과를 ReportRow 로 정규화하고 jsonl / csv / markdown 으로 출력
주요 기능:
    - to_report_row : WorkloadResult / AppResult + 예측 + reconcile -> ReportRow
    - emit_report : 고정 필드 순서, 로캘 무관 숫자 표기, 바이트 단위 결정성
    - figure_tables : 비용-비트 폭, 비용-크기 표 (markdown)
    - load_report : jsonl 리포트 재적재
"""
import io
import json
import sys
from pathlib import Path
from typing import Iterable, Optional, Union

import numpy as np
import pandas as pd

from app.core.costmodel import estimate_ms, reconcile
from app.core.logger import get_logger
from app.domain.errors import InputParseError, UnknownFormat
from app.domain.schemas import (
    AppResult,
    Calibration,
    ReportFormat,
    ReportRow,
    ScenarioPrediction,
    WorkloadResult,
)

logger = get_logger(__name__)

FLOAT_DIGITS = 3
"""리포트 실수 반올림 자릿수"""

FIGURE_METRICS = ("model_estimated_ms", "nonscalar_mults", "gate_bootstraps", "comparisons")
"""figure 표에 싣는 지표"""


def to_report_row(result: Union[WorkloadResult, AppResult], calibration: Calibration) -> ReportRow:
    """결과 하나를 리포트 행으로 (reconcile 포함)"""
    spec = result.spec
    if isinstance(result, WorkloadResult):
        name, size, slot_count = spec.kind.value, spec.slot_count, spec.slot_count
    else:
        name, size, slot_count = spec.kind.value, spec.size, result.slot_count

    prediction = ScenarioPrediction(scenario_id=spec.scenario_id, method=spec.method, b=spec.b,
                                    **result.predicted)
    check = reconcile(prediction, result.ledger, spec.scenario_id)
    if not check.depth_ok:
        verdict = "depth-fail"
    elif check.warnings:
        verdict = "warn"
    else:
        verdict = "pass"

    total_ms = estimate_ms(result.ledger, calibration)
    amortized = total_ms / slot_count if spec.method.is_simd else total_ms
    return ReportRow(
        scenario_id=spec.scenario_id,
        method=spec.method,
        b=spec.b,
        slot_count=slot_count,
        name=name,
        size=size,
        seed=spec.seed,
        oracle_pass=result.oracle_match,
        **result.ledger.counters(),
        pred_nonscalar_mults=round(prediction.nonscalar_mults, FLOAT_DIGITS),
        pred_gate_bootstraps=round(prediction.gate_bootstraps, FLOAT_DIGITS),
        pred_switches=round(prediction.switches, FLOAT_DIGITS),
        pred_max_depth=round(prediction.max_depth, FLOAT_DIGITS),
        reconcile=verdict,
        model_estimated_ms=round(total_ms, FLOAT_DIGITS),
        model_estimated_amortized_ms=round(amortized, FLOAT_DIGITS),
    )


def sort_rows(rows: Iterable[ReportRow]) -> list[ReportRow]:
    """병렬 스윕 병합 순서: 시나리오 키"""
    return sorted(rows, key=lambda row: row.scenario_id)


def _frame(rows: list[ReportRow]) -> pd.DataFrame:
    records = [row.model_dump(mode="json") for row in rows]
    return pd.DataFrame.from_records(records, columns=ReportRow.field_names())


def _cell(value) -> str:
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(round(value, FLOAT_DIGITS))
    return str(value)


def markdown_table(df: pd.DataFrame) -> str:
    """파이프 표 (인덱스 제외, 헤더 + 구분선 + 본문)"""
    header = "| " + " | ".join(str(c) for c in df.columns) + " |"
    rule = "|" + "|".join("---" for _ in df.columns) + "|"
    body = ["| " + " | ".join(_cell(v) for v in record) + " |"
            for record in df.itertuples(index=False, name=None)]
    return "\n".join([header, rule, *body])


def figure_tables(rows: list[ReportRow], metric: str = "model_estimated_ms") -> dict[str, pd.DataFrame]:
    """
    그림 형태 표 두 개

    - cost_vs_bits : (name, method, size) 행 x 비트 폭 열
    - cost_vs_size : (name, method, b) 행 x 크기 열
    같은 칸의 반복 실행은 평균한다.
    """
    if metric not in ReportRow.field_names():
        raise ValueError(f"알 수 없는 지표입니다: {metric}")
    df = _frame(rows)
    if df.empty:
        return {"cost_vs_bits": df, "cost_vs_size": df}

    def pivot(index: list[str], column: str) -> pd.DataFrame:
        table = df.pivot_table(index=index, columns=column, values=metric, aggfunc="mean")
        table = table.round(FLOAT_DIGITS)
        table.columns = [f"{column}={c}" for c in table.columns]
        return table.reset_index()

    return {
        "cost_vs_bits": pivot(["name", "method", "size"], "b"),
        "cost_vs_size": pivot(["name", "method", "b"], "size"),
    }


def _markdown_report(rows: list[ReportRow]) -> str:
    df = _frame(rows)
    sections = [f"# fhe-gen report ({len(rows)} scenarios)", ""]
    for (name, method), group in df.groupby(["name", "method"], sort=True):
        sections += [f"## {name} / {method}", "", markdown_table(group.reset_index(drop=True)), ""]
    tables = figure_tables(rows)
    for title, table in tables.items():
        if not table.empty:
            sections += [f"## {title} (model_estimated_ms)", "", markdown_table(table), ""]
    return "\n".join(sections)


def emit_report(rows: Iterable[ReportRow], fmt: Union[ReportFormat, str] = ReportFormat.JSONL) -> bytes:
    """
    리포트 직렬화

    Raises:
        UnknownFormat: 지원하지 않는 형식
    """
    try:
        fmt = ReportFormat(fmt)
    except ValueError:
        raise UnknownFormat(f"지원하지 않는 리포트 형식입니다: {fmt}")

    rows = sort_rows(rows)
    if fmt is ReportFormat.JSONL:
        text = "".join(row.model_dump_json() + "\n" for row in rows)
    elif fmt is ReportFormat.CSV:
        buffer = io.StringIO()
        _frame(rows).to_csv(buffer, index=False, lineterminator="\n")
        text = buffer.getvalue()
    else:
        text = _markdown_report(rows)
    return text.encode("utf-8")


def emit_figures(rows: Iterable[ReportRow], metric: str = "model_estimated_ms") -> bytes:
    """report --figure 출력"""
    rows = sort_rows(rows)
    sections = []
    for title, table in figure_tables(rows, metric).items():
        sections += [f"## {title} ({metric})", ""]
        sections.append(markdown_table(table) if not table.empty else "(no rows)")
        sections.append("")
    return "\n".join(sections).encode("utf-8")


def load_report(path: Union[str, Path]) -> list[ReportRow]:
    """
    jsonl 리포트 읽기

    Raises:
        InputParseError: 파일이 없거나 행이 ReportRow 형식이 아닐 때
    """
    path = Path(path)
    if not path.is_file():
        raise InputParseError(f"리포트 파일이 존재하지 않습니다: {path}")
    rows = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rows.append(ReportRow.model_validate(json.loads(line)))
        except ValueError as e:
            raise InputParseError(f"{path}:{lineno} 행을 읽을 수 없습니다: {e}")
    logger.info(f"📄 리포트 적재: {path} ({len(rows)} rows)")
    return rows


def write_report(data: bytes, out: Optional[str] = None):
    """리포트를 파일 또는 stdout 으로 (로그는 섞지 않음)"""
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)
        logger.info(f"💾 리포트 저장: {path} ({len(data)} bytes)")
        return
    sys.stdout.buffer.write(data)
    sys.stdout.flush()
