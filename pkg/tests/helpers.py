"""
테스트 공용 헬퍼
"""
from app.core.emulator import EvalContext
from app.domain.param_definition import pair_for_bits
from app.domain.schemas import Method, MethodProfile

WORD_METHODS = (Method.SCHEME, Method.ENCODING)
ALL_METHODS = tuple(Method)


def make_ctx(method: Method, b: int = 8, slot_count: int = 1, **profile) -> EvalContext:
    """(방식, 비트 폭, 슬롯 수) 컨텍스트, profile 은 MethodProfile 필드 덮어쓰기"""
    p, r = pair_for_bits(b)
    return EvalContext(MethodProfile(method=method, **profile), p, r, b, slot_count=slot_count)
