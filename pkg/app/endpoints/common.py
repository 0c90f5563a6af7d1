"""
서브커맨드 공통 인자와 리포트 마무리
"""
from typing import Sequence

from app.core.logger import get_logger
from app.core.report import emit_report, write_report
from app.core.runner import first_failure
from app.domain.errors import OracleMismatch
from app.domain.param_definition import BIT_WIDTHS
from app.domain.schemas import Method, ReportRow, ScenarioConfig

logger = get_logger(__name__)


def add_sweep_arguments(parser, default_bits: Sequence[int] = (8,)):
    parser.add_argument("--method", nargs="+", default=[m.value for m in Method],
                        choices=[m.value for m in Method], help="방식 (여러 개 가능)")
    parser.add_argument("--bits", nargs="+", type=int, default=list(default_bits),
                        choices=list(BIT_WIDTHS), help="비트 폭 (여러 개 가능)")
    parser.add_argument("--seed", type=int, default=None, help="RNG 시드 (기본: 설정 파일 [rng] seed)")
    parser.add_argument("--repeat", type=int, default=1, help="반복 횟수 (0 이면 빈 리포트)")


def finish(rows: list[ReportRow], args, config: ScenarioConfig) -> int:
    """
    리포트 출력 후 종료 코드 결정

    Raises:
        OracleMismatch: 오라클이 실패한 시나리오가 하나라도 있을 때 (리포트는 먼저 기록)
    """
    fmt = args.report_format or config.report_format
    write_report(emit_report(rows, fmt), args.out)
    failed = first_failure(rows)
    if failed:
        raise OracleMismatch(failed)
    return 0
