"""
공통 픽스처

- ctx_for : (방식, 비트 폭, 슬롯 수) 로 EvalContext 생성
- rng : 고정 시드 PCG64
- full_sweep 마커는 FHEGEN_FULL_SWEEP=1 일 때만 실행
"""
import os
import sys
from pathlib import Path

import numpy as np
import pytest

# 프로젝트 루트를 sys.path에 추가
project_root = Path(__file__).parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from tests.helpers import make_ctx


@pytest.fixture
def ctx_for():
    return make_ctx


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(20240601))


def pytest_collection_modifyitems(config, items):
    if os.getenv("FHEGEN_FULL_SWEEP") == "1":
        return
    skip = pytest.mark.skip(reason="FHEGEN_FULL_SWEEP=1 일 때만 실행")
    for item in items:
        if "full_sweep" in item.keywords:
            item.add_marker(skip)
