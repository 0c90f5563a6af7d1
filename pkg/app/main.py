"""
fhe-gen: 일반 연산 FHE 에뮬레이터 / 벤치마크 CLI
서브커맨드: bench, app, advise, report
종료 코드: 0 통과, 1 오라클 실패 또는 시나리오 오류, 2 사용 오류
"""

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

# 프로젝트 루트 디렉토리를 sys.path에 추가 (python ./app/main.py 실행을 위해)
project_root = Path(__file__).parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from pydantic import ValidationError

from app.core.config import load_scenario_config, settings
from app.core.logger import get_logger
from app.core.sys_info import get_environment_summary
from app.domain.errors import (
    DepthExceeded,
    FheGenError,
    OracleMismatch,
    RangeViolation,
)
from app.endpoints import advise_routes, app_routes, bench_routes, report_routes

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def create_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fhegen",
        description="General-computation FHE emulator and benchmark suite",
    )
    parser.add_argument("--config", default=None,
                        help="시나리오 설정 INI 경로 (FHEGEN_CONFIG 보다 우선)")
    parser.add_argument("--format", dest="report_format", default=None,
                        choices=["jsonl", "csv", "markdown"], help="리포트 형식 (기본: 설정 파일 값)")
    parser.add_argument("--out", default=None, help="리포트 파일 경로 (기본: stdout)")
    parser.add_argument("--workers", type=int, default=settings.WORKERS,
                        help="스윕 워커 수 (0 = CPU 수 기준)")
    subparsers = parser.add_subparsers(dest="command", required=True)
    add_routes(subparsers)
    return parser


def add_routes(subparsers):
    bench_routes.register(subparsers)
    app_routes.register(subparsers)
    advise_routes.register(subparsers)
    report_routes.register(subparsers)


def startup_banner(command: str):
    logger.info("------------------------------------------------")
    logger.info(f"✳️ 시작: {settings.APP_NAME} v{settings.VERSION} profile: {settings.PROFILE_NAME}")
    logger.info("------------------------------------------------")
    logger.info(f"🔴 실행 위치 : {get_environment_summary()}")
    logger.info(f"✔️ 명령: {command}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = create_parser()
    args = parser.parse_args(argv)
    startup_banner(args.command)

    try:
        config = load_scenario_config(args.config)
        code = args.handler(args, config)
    except OracleMismatch as e:
        logger.error(f"❌ {e}")
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_FAILURE
    except (DepthExceeded, RangeViolation) as e:
        logger.error(f"❌ 시나리오 오류: {e}")
        print(f"❌ 시나리오 오류: {e}", file=sys.stderr)
        return EXIT_FAILURE
    except (ValidationError, FheGenError, FileNotFoundError, ValueError) as e:
        logger.error(f"❌ 사용 오류: {e}")
        print(f"❌ 사용 오류: {e}", file=sys.stderr)
        return EXIT_USAGE

    logger.info(f"✅ {settings.APP_NAME} 종료 (exit={code})")
    return code


if __name__ == "__main__":
    sys.exit(main())
