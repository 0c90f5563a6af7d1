"""
시나리오 스윕 실행기

시나리오마다 EvalContext 하나, 워커 스레드로 분산하고
결과는 시나리오 키 순으로 한 곳에서 병합한다.
"""
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Optional, Sequence, Union

from app.core.apps import run_app
from app.core.logger import get_logger
from app.core.report import sort_rows, to_report_row
from app.core.sys_info import default_workers
from app.core.workloads import run_workload
from app.domain.schemas import (
    AppKind,
    AppSpec,
    Method,
    ReportRow,
    ScenarioConfig,
    WorkloadKind,
    WorkloadSpec,
)

logger = get_logger(__name__)

Spec = Union[WorkloadSpec, AppSpec]


def workload_specs(
    kinds: Sequence[WorkloadKind],
    methods: Sequence[Method],
    bits: Sequence[int],
    slots: Sequence[int],
    seed: int,
    repeat: int,
) -> list[WorkloadSpec]:
    """flag 조합의 데카르트 곱 (repeat = 0 이면 빈 목록)"""
    return [
        WorkloadSpec(kind=kind, method=method, b=b, slot_count=n, seed=seed, rep=rep)
        for kind in kinds
        for method in methods
        for b in bits
        for n in slots
        for rep in range(repeat)
    ]


def app_specs(
    kind: AppKind,
    methods: Sequence[Method],
    bits: Sequence[int],
    sizes: Sequence[int],
    seed: int,
    repeat: int,
) -> list[AppSpec]:
    return [
        AppSpec(kind=kind, method=method, b=b, size=size, seed=seed, rep=rep)
        for method in methods
        for b in bits
        for size in sizes
        for rep in range(repeat)
    ]


def run_one(spec: Spec, config: ScenarioConfig, **inputs) -> ReportRow:
    profile = config.profile(spec.method)
    if isinstance(spec, WorkloadSpec):
        result = run_workload(spec, inputs.get("inputs"), profile)
    else:
        result = run_app(spec, profile=profile, **inputs)
    return to_report_row(result, profile.calibration)


def run_sweep(specs: Iterable[Spec], config: ScenarioConfig, workers: int = 0,
              **inputs) -> list[ReportRow]:
    """
    스윕 실행

    입력 파일(inputs)은 모든 시나리오에 그대로 전달된다.
    예외는 해당 시나리오 키와 함께 그대로 전파된다.
    """
    specs = list(specs)
    if not specs:
        return []
    workers = min(default_workers(workers), len(specs))
    logger.info(f"🚀 스윕 시작: {len(specs)} scenarios, workers={workers}")
    if workers == 1:
        rows = [run_one(spec, config, **inputs) for spec in specs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda s: run_one(s, config, **inputs), specs))
    rows = sort_rows(rows)
    failed = [row.scenario_id for row in rows if not row.oracle_pass]
    logger.info(f"🏁 스윕 완료: {len(rows)} rows, oracle 실패 {len(failed)}")
    return rows


def first_failure(rows: Sequence[ReportRow]) -> Optional[str]:
    for row in rows:
        if not row.oracle_pass:
            return row.scenario_id
    return None
