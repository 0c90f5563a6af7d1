"""
fhe-gen 예외 정의
모든 도메인 예외는 FheGenError를 상속한다.
CLI 계층은 OracleMismatch -> exit 1, 나머지 사용 오류 -> exit 2 로 매핑한다.
"""

from typing import Optional


class FheGenError(Exception):
    """fhe-gen 공통 예외"""


# modmath / negaring
class NotInvertible(FheGenError):
    """모듈러 역원이 존재하지 않음"""


class InvalidModulus(FheGenError):
    """짝수 또는 합성수 모듈러스"""


class MismatchedRing(FheGenError):
    """서로 다른 (p, n) 링의 다항식 연산"""


class ExponentOutOfRange(FheGenError):
    """|e| >= n 인 단항식 지수"""


# emulator
class ContextMismatch(FheGenError):
    """다른 EvalContext 또는 모듈러스의 암호문 혼용"""


class DepthExceeded(FheGenError):
    """레벨 예산 초과"""

    def __init__(self, needed: int, budget: int, where: Optional[str] = None):
        self.needed = needed
        self.budget = budget
        self.where = where
        msg = f"곱셈 깊이 예산 초과: 필요 {needed} > 예산 {budget}"
        if where:
            msg += f" ({where})"
        super().__init__(msg)

    def at(self, where: str) -> "DepthExceeded":
        """위치 정보(예: k-iteration)를 덧붙인 새 예외"""
        return DepthExceeded(self.needed, self.budget, where)


class WidthMismatch(FheGenError):
    """비트 폭이 다른 BitCipher 연산"""


class ProfileMismatch(FheGenError):
    """현재 MethodProfile에서 허용되지 않는 연산"""


# compare
class RangeViolation(FheGenError):
    """비교 입력이 허용 구간을 벗어날 수 있음"""


class DomainTooLarge(FheGenError):
    """XCMP 정의역(n) 초과"""


# costmodel / bench-cli
class UnsupportedMethod(FheGenError):
    """예측식이 없는 방식"""


class ScenarioMismatch(FheGenError):
    """예측과 원장의 시나리오 키 불일치"""


class UnknownFormat(FheGenError):
    """지원하지 않는 리포트 형식"""


class InputParseError(FheGenError):
    """그래프/트리/테이블 입력 파일 파싱 실패"""


class OracleMismatch(FheGenError):
    """평문 오라클과 복호 결과 불일치"""

    def __init__(self, scenario_id: str, detail: str = ""):
        self.scenario_id = scenario_id
        super().__init__(f"오라클 불일치: {scenario_id} {detail}".strip())
