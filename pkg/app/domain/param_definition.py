"""
파라미터 정의
벤치마크에서 사용하는 비트 폭, (p, r) 쌍, 모듈러스 크기 등을 체계적으로 정의
"""

# 벤치마크 비트 폭
BIT_WIDTHS = (6, 8, 12, 16)
"""워크로드/앱 스윕에 사용하는 입력 비트 폭"""

TFHE_WIDTHS = (6, 8, 12, 16, 24, 32)
"""BitCipher가 허용하는 폭 (TFHE 정수 타입 폭)"""

# 비트 폭별 (p, r) 쌍 - 모두 소수 p, p^r >= 2^b
PARAM_PAIRS = {
    6: (3, 4),      # 81 >= 64, 공개된 (4, 4)는 p가 합성수라 대체
    8: (5, 4),      # 625 >= 256
    12: (7, 5),     # 16807 >= 4096
    16: (17, 4),    # 83521 >= 65536
}

PUBLISHED_PAIRS = ((4, 4), (5, 4), (7, 5), (17, 4))
"""공개된 파라미터 쌍 (참고용, (4, 4)는 사용 불가)"""

# 비트 폭별 log2 q
LOG_Q = {
    6: 256,
    8: 320,
    12: 488,
    16: 648,
}

BITS_PER_LEVEL = 30
"""레벨당 모듈러스 비트 (기본 깊이 예산 = floor(log2 q / 30))"""

# 보정 상수
MS_PER_GATE_BOOTSTRAP = 15.0
"""게이트 부트스트래핑 1회 추정 시간 (ms)"""

SWITCH_ANCHORS = ((6, 43.8), (8, 162.7))
"""스킴 전환 비교 측정점 (비트, 초)"""

DEFAULT_SWITCH_CONSTANT = 0.66
"""스킴 전환 비용 상수 c (초 / 2^b 단위)"""

W1_B8_SECONDS = {"EncodingSwitching": 15.5, "SchemeSwitching": 32.1}
"""8 비트 Compare(A * B, C) 측정 시간 (초)"""

# 난수 생성기
RNG_ALGORITHM = "PCG64"
DEFAULT_SEED = 20240601


def default_depth_budget(b: int, bits_per_level: int = BITS_PER_LEVEL) -> int:
    """비트 폭에 대응하는 기본 레벨 예산"""
    log_q = LOG_Q.get(b)
    if log_q is None:
        # 표에 없는 폭은 가장 가까운 상위 폭을 사용
        larger = [w for w in sorted(LOG_Q) if w >= b]
        log_q = LOG_Q[larger[0]] if larger else LOG_Q[max(LOG_Q)]
    return log_q // bits_per_level


def pair_for_bits(b: int) -> tuple[int, int]:
    """비트 폭에 대응하는 (p, r)"""
    if b in PARAM_PAIRS:
        return PARAM_PAIRS[b]
    for width in sorted(PARAM_PAIRS):
        if width >= b:
            return PARAM_PAIRS[width]
    raise ValueError(f"지원하지 않는 비트 폭입니다: {b}")


def tfhe_width_for(value_max: int) -> int:
    """value_max를 담을 수 있는 가장 작은 TFHE 폭"""
    need = max(1, int(value_max).bit_length())
    for width in TFHE_WIDTHS:
        if width >= need:
            return width
    raise ValueError(f"TFHE 폭을 초과하는 값입니다: {value_max}")
