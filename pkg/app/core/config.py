"""
fhe-gen 설정 클래스
프로세스 설정은 환경변수(.env.{FHEGEN_MODE}), 시나리오 설정은 INI 파일로 관리
"""

import configparser
import os
import sys
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

from app.domain.schemas import (
    Calibration,
    Method,
    MethodProfile,
    ReportFormat,
    RngConfig,
    ScenarioConfig,
)


class Config:
    def __init__(self):
        # 환경 구분
        self.PROFILE_NAME = os.getenv('FHEGEN_MODE', 'local')
        load_dotenv(dotenv_path=f'.env.{self.PROFILE_NAME}', override=True)

        # 애플리케이션 기본 설정
        self.APP_NAME = os.getenv('APP_NAME', 'fhe-gen')
        self.VERSION = os.getenv('VERSION', '0.1.0')
        self.DEBUG = os.getenv('DEBUG', 'false').lower() == 'true'

        # 작업 디렉토리
        self.BASE_DIR = os.getenv('BASE_DIR', str(Path.cwd() / '.fhegen'))
        self.REPORT_DIR = os.getenv('REPORT_DIR', f'{self.BASE_DIR}/reports')

        # 시나리오 설정 파일 (CLI --config 가 우선)
        self.FHEGEN_CONFIG = os.getenv('FHEGEN_CONFIG', None)

        # 스윕 병렬도 (0 이면 CPU 수 기준)
        self.WORKERS = int(os.getenv('WORKERS', '0'))

        # 로그 설정
        self.LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
        self.LOG_DIR = os.getenv('LOG_DIR', f'{self.BASE_DIR}/logs')
        self.LOG_FILE = os.getenv('LOG_FILE', f'{self.LOG_DIR}/fhegen.log')
        self.LOG_MAX_SIZE = int(os.getenv('LOG_MAX_SIZE', str(5 * 1024 * 1024)))  # 5MB
        self.LOG_BACKUP_COUNT = int(os.getenv('LOG_BACKUP_COUNT', '7'))

        # 디렉토리 생성
        self._create_directories()

    def _create_directories(self):
        """필요한 디렉토리들을 생성"""
        for directory in (self.BASE_DIR, self.LOG_DIR):
            if not os.path.exists(directory):
                os.makedirs(directory, exist_ok=True)
                # stdout은 리포트 전용
                print(f"📁 디렉토리 생성: {directory}", file=sys.stderr)

    @property
    def is_development(self):
        """개발 환경인지 확인"""
        return self.DEBUG or self.PROFILE_NAME in ['local', 'dev', 'development']

    def print_config(self):
        """설정 정보 출력 (stderr)"""
        lines = [
            "=" * 50,
            f"🚀 {self.APP_NAME} v{self.VERSION}",
            "=" * 50,
            f"📍 Environment: {self.PROFILE_NAME}",
            f"🐛 Debug Mode: {self.DEBUG}",
            f"⚙️ Scenario Config: {self.FHEGEN_CONFIG or '(기본값)'}",
            f"📝 Log Level: {self.LOG_LEVEL}",
            f"📄 Log File: {self.LOG_FILE}",
            "=" * 50,
        ]
        print("\n".join(lines), file=sys.stderr)


def _section(parser: configparser.ConfigParser, name: str) -> dict[str, str]:
    return dict(parser.items(name)) if parser.has_section(name) else {}


def load_scenario_config(path: Optional[str] = None) -> ScenarioConfig:
    """
    시나리오 설정 파일 로드

    경로 우선순위: 인자 > FHEGEN_CONFIG > 기본값(파일 없음)
    섹션: [profile.tfhe] [profile.scheme] [profile.encoding] [calibration] [rng] [report]

    Raises:
        FileNotFoundError: 지정한 파일이 없을 때
        pydantic.ValidationError: 값 검증 실패
    """
    path = path or os.getenv('FHEGEN_CONFIG') or settings.FHEGEN_CONFIG
    if not path:
        return ScenarioConfig()

    if not Path(path).is_file():
        raise FileNotFoundError(f"설정 파일이 존재하지 않습니다: {path}")

    parser = configparser.ConfigParser()
    parser.read(path, encoding='utf-8')

    calibration = Calibration(**_section(parser, 'calibration'))
    profiles = {}
    for method in Method:
        values = _section(parser, f'profile.{method.value}')
        # 프로파일 섹션의 보정 상수는 [calibration] 값을 덮어씀
        cal_keys = set(Calibration.model_fields) & set(values)
        cal = calibration.model_copy(update={k: float(values.pop(k)) for k in cal_keys})
        profiles[method] = MethodProfile(method=method, calibration=cal, **values)

    rng = RngConfig(**_section(parser, 'rng'))
    report = _section(parser, 'report')
    report_format = ReportFormat(report.get('format', ReportFormat.JSONL.value))

    return ScenarioConfig(
        profiles=profiles,
        calibration=calibration,
        rng=rng,
        report_format=report_format,
    )


# 전역 설정 인스턴스
settings = Config()
