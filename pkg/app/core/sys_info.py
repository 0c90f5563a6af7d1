"""
실행 환경 요약과 스윕 병렬도 기본값

리포트 본문에는 들어가지 않고 시작 배너와 로그에만 쓰인다.
"""
import os
import platform
from pathlib import Path
from typing import Any, Dict

import psutil


class SystemInfo:
    def __init__(self):
        self._cache: Dict[str, Any] = {}

    def get_system_info(self, force_refresh: bool = False) -> Dict[str, Any]:
        """실행 환경 정보 (프로세스 수명 동안 캐시)"""
        if self._cache and not force_refresh:
            return self._cache

        self._cache = {
            "environment": self._detect_environment(),
            "basic": self._get_basic_info(),
            "hardware": self._get_hardware_info(),
        }
        return self._cache

    def _detect_environment(self) -> str:
        """환경 타입 감지"""
        if Path("/.dockerenv").exists():
            return "docker"

        if os.path.exists("/proc/1/cgroup"):
            try:
                with open("/proc/1/cgroup", "r") as f:
                    content = f.read()
                if "docker" in content:
                    return "docker"
                if "kubepods" in content:
                    return "kubernetes"
            except OSError:
                pass

        if platform.system() == "Windows":
            return "windows_local"
        return "local"

    def _get_basic_info(self) -> Dict[str, Any]:
        return {
            "os": platform.system(),
            "platform": platform.platform(),
            "architecture": platform.machine(),
            "python_version": platform.python_version(),
        }

    def _get_hardware_info(self) -> Dict[str, Any]:
        """CPU / 메모리 (psutil)"""
        try:
            memory = psutil.virtual_memory()
            return {
                "cpu_cores": psutil.cpu_count(logical=False),
                "cpu_threads": psutil.cpu_count(logical=True),
                "memory_total_gb": round(memory.total / (1024 ** 3), 2),
                "memory_available_gb": round(memory.available / (1024 ** 3), 2),
            }
        except (OSError, RuntimeError):
            return {
                "cpu_cores": None,
                "cpu_threads": None,
                "memory_total_gb": None,
                "memory_available_gb": None,
            }

    def get_environment_summary(self) -> str:
        """환경 요약 문자열"""
        info = self.get_system_info()
        hw = info["hardware"]
        basic = info["basic"]
        return (f"{info['environment']} - {basic['os']} {basic['architecture']}, "
                f"Python {basic['python_version']}, threads={hw['cpu_threads']}, "
                f"mem={hw['memory_total_gb']}GB")

    def default_workers(self, requested: int = 0) -> int:
        """
        스윕 워커 수

        requested > 0 이면 그대로, 아니면 논리 CPU 수 (최대 8)
        """
        if requested > 0:
            return requested
        threads = self.get_system_info()["hardware"]["cpu_threads"] or 1
        return max(1, min(8, threads))


# 전역 인스턴스
system_info = SystemInfo()


def get_system_info():
    return system_info.get_system_info()


def get_environment_summary():
    return system_info.get_environment_summary()


def default_workers(requested: int = 0) -> int:
    return system_info.default_workers(requested)
