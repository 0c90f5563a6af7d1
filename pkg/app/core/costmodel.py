"""
모듈 설명:
    - 방식별 복잡도 표를 단위 상수로 구체화한 예측기
    - 예측과 원장 카운터의 대조(reconcile), 방식 선택 조언(advise)
주요 기능:
    - predict : (method, b, p, r, d) 단위 예측
    - predict_scenario : 연산 구성(ScenarioMix)으로 시나리오 카운터 예측
    - reconcile : 측정/예측 비율, 깊이 초과는 실패, 곱셈 4배 초과는 경고
    - advise : 12 칸 결정표
    - calibrate_switch_constant, estimate_ms : 보고용 시간 추정

모든 함수는 순수 함수이며 스레드 안전하다.
"""
from math import ceil, log, log2, sqrt
from typing import Optional, Sequence

from app.core.logger import get_logger
from app.domain.errors import ScenarioMismatch, UnsupportedMethod
from app.domain.param_definition import (
    SWITCH_ANCHORS,
    W1_B8_SECONDS,
    default_depth_budget,
    pair_for_bits,
    tfhe_width_for,
)
from app.domain.schemas import (
    AdvisorQuery,
    Calibration,
    ComplexityRow,
    CostLedger,
    Method,
    OpMix,
    Prediction,
    ReconcileRow,
    Recommendation,
    ScenarioMix,
    ScenarioPrediction,
)

logger = get_logger(__name__)

MULT_WARN_FACTOR = 4.0
"""측정 곱셈 수가 예측의 이 배수를 넘으면 경고"""

RECONCILE_KEYS = ("nonscalar_mults", "gate_bootstraps", "switches", "max_depth")

COMPLEXITY_TABLE: tuple[ComplexityRow, ...] = (
    ComplexityRow(method="BitwiseTFHE", nonlinear_depth="-", nonlinear_complexity="O(b)",
                  linear_depth="-", linear_complexity="O(b^2)", simd=False, exact=True, general=True),
    ComplexityRow(method="Lagrange interpolation", nonlinear_depth="O(log2 p)", nonlinear_complexity="O(sqrt(p))",
                  linear_depth="O(1)", linear_complexity="O(1)", simd=True, exact=True, general=False),
    ComplexityRow(method="Digit decomposition", nonlinear_depth="O(log2 log_p 2^b + log2 p)",
                  nonlinear_complexity="O(d^2 sqrt(p))", linear_depth="-", linear_complexity="-",
                  simd=True, exact=True, general=False),
    ComplexityRow(method="XCMP", nonlinear_depth="O(1)", nonlinear_complexity="O(1)",
                  linear_depth="-", linear_complexity="-", simd=True, exact=True, general=False),
    ComplexityRow(method="CKKS approximation", nonlinear_depth="O(log2 b)", nonlinear_complexity="O(b)",
                  linear_depth="O(1)", linear_complexity="O(1)", simd=True, exact=False, general=True),
    ComplexityRow(method="SchemeSwitching", nonlinear_depth="-", nonlinear_complexity="O(2^b)",
                  linear_depth="O(1)", linear_complexity="O(1)", simd=True, exact=True, general=True),
    ComplexityRow(method="EncodingSwitching", nonlinear_depth="O(log2 log_p 2^b + log2 p)",
                  nonlinear_complexity="O(d^2 sqrt(p))", linear_depth="O(log2 d + log2 p)",
                  linear_complexity="O(1)", simd=True, exact=True, general=True),
)


def digit_count(b: int, p: int) -> int:
    """ceil(log_p 2^b)"""
    return max(1, ceil(b / log2(p) - 1e-12))


def decomposition_depth(b: int, p: int) -> float:
    """log2(log_p 2^b) + log2(p - 1) + 4"""
    return log2(max(b * log(2) / log(p), 1.0)) + log2(p - 1) + 4


def _ceil_log2(x: float) -> int:
    return max(0, ceil(log2(x) - 1e-12)) if x > 1 else 0


def equality_depth(p: int, value_max: int) -> int:
    """자릿수별 Fermat 동등 + AND 트리 깊이"""
    digits = 1
    while p ** digits <= value_max:
        digits += 1
    return _ceil_log2(p - 1) + _ceil_log2(digits)


def predict(
    method: Method,
    b: int,
    p: Optional[int] = None,
    r: Optional[int] = None,
    d: Optional[int] = None,
    calibration: Optional[Calibration] = None,
) -> Prediction:
    """
    비교 1회와 곱셈 1회의 예측 비용

    Raises:
        UnsupportedMethod: 예측식이 없는 방식
    """
    try:
        method = Method(method)
    except ValueError:
        raise UnsupportedMethod(f"예측식이 없는 방식입니다: {method}")
    if p is None or r is None:
        p, r = pair_for_bits(b)
    d = d or digit_count(b, p)
    calibration = calibration or Calibration()

    zero = dict(nonlinear_depth=0.0, nonlinear_depth_levels=0, nonlinear_mults=0.0, nonlinear_gates=0.0,
                switch_units=0.0, switch_seconds=0.0, linear_depth=0, linear_mults=0.0, linear_gates=0.0,
                conversion_depth=0.0)
    values = dict(zero)
    if method is Method.TFHE:
        values.update(nonlinear_gates=float(b), linear_gates=float(b * b))
    elif method is Method.SCHEME:
        units = float(2 ** b)
        values.update(
            nonlinear_gates=float(tfhe_width_for(p ** r - 1)),
            switch_units=units,
            switch_seconds=calibration.s_per_switch_unit * units,
            linear_depth=1,
            linear_mults=1.0,
        )
    else:
        depth = decomposition_depth(b, p)
        values.update(
            nonlinear_depth=depth,
            nonlinear_depth_levels=ceil(depth - 1e-9),
            nonlinear_mults=d * d * sqrt(p),
            linear_depth=1,
            linear_mults=1.0,
            # 리프팅 1회 깊이 (변환 카운터용, 레벨 미터와 별개)
            conversion_depth=log2(max(d, 1)) + log2(p),
        )
    return Prediction(method=method, b=b, p=p, r=r, d=d, **values)


def predict_xcmp_depth(domain: int, n: int, p: int) -> int:
    """XCMP 비교 깊이: 정의역 n 이하는 1, n^2 이하는 두 자리 결합"""
    if domain <= n:
        return 1
    return max(1, _ceil_log2(p - 1)) + 1


def predict_scenario(
    scenario_id: str,
    method: Method,
    b: int,
    mix: ScenarioMix,
    calibration: Optional[Calibration] = None,
    depth_budget: Optional[int] = None,
) -> ScenarioPrediction:
    """연산 구성별 예측 합산"""
    unit = predict(method, b, calibration=calibration)
    nonlinear = mix.compares + mix.equalities

    if method is Method.TFHE:
        counters = dict(
            gate_bootstraps=mix.lanes * (nonlinear * unit.nonlinear_gates
                                         + mix.muls * unit.linear_gates
                                         + mix.masked * b),
        )
    elif method is Method.SCHEME:
        counters = dict(
            nonscalar_mults=float(mix.muls + mix.masked),
            gate_bootstraps=mix.lanes * nonlinear * unit.nonlinear_gates,
            switches=float(nonlinear),
            max_depth=float(mix.mul_chain),
        )
    else:
        eq_levels = equality_depth(unit.p, mix.equal_value_max or unit.p ** unit.r - 1)
        depth = (mix.mul_chain + mix.compare_chain * unit.nonlinear_depth_levels
                 + mix.equal_chain * eq_levels)
        counters = dict(
            nonscalar_mults=mix.muls + mix.masked + nonlinear * unit.nonlinear_mults,
            max_depth=float(depth),
        )

    if mix.capped and "max_depth" in counters:
        budget = depth_budget or default_depth_budget(b)
        counters["max_depth"] = float(min(counters["max_depth"], budget))
    return ScenarioPrediction(scenario_id=scenario_id, method=method, b=b, **counters)


def reconcile(predicted: ScenarioPrediction, ledger: CostLedger, scenario_id: str) -> ReconcileRow:
    """
    측정/예측 비율 계산

    깊이가 예측을 넘으면 실패, 곱셈 수가 예측의 4배를 넘으면 경고.
    예측과 측정이 모두 0 인 카운터의 비율은 0.

    Raises:
        ScenarioMismatch: 시나리오 키 불일치
    """
    if predicted.scenario_id != scenario_id:
        raise ScenarioMismatch(f"시나리오 키 불일치: {predicted.scenario_id} != {scenario_id}")

    expected = predicted.counters()
    ratios: dict[str, float] = {}
    warnings: list[str] = []
    for key in RECONCILE_KEYS:
        measured = float(getattr(ledger, key))
        want = expected[key]
        if want > 0:
            ratios[key] = round(measured / want, 3)
        else:
            ratios[key] = 0.0
            if measured > 0 and key != "max_depth":
                warnings.append(f"{key}: 예측 0, 측정 {int(measured)}")

    depth_ok = ledger.max_depth <= expected["max_depth"]
    mults_want = expected["nonscalar_mults"]
    if mults_want > 0 and ledger.nonscalar_mults > MULT_WARN_FACTOR * mults_want:
        warnings.append(f"nonscalar_mults {ledger.nonscalar_mults} > {MULT_WARN_FACTOR:g}x 예측 {mults_want:.1f}")

    row = ReconcileRow(scenario_id=scenario_id, ratios=ratios, depth_ok=depth_ok, warnings=warnings)
    if not depth_ok:
        logger.error(f"❌ 깊이 초과: {scenario_id} 측정 {ledger.max_depth} > 예측 {expected['max_depth']:g}")
    for w in warnings:
        logger.warning(f"⚠️ reconcile 경고 [{scenario_id}]: {w}")
    return row


_WORD_WISE = ["BGV", "BFV", "CKKS"]
_COMPARISON_FAMILY = ["Lagrange interpolation", "Digit decomposition", "XCMP"]


def _encoding_note() -> str:
    enc, sch = W1_B8_SECONDS["EncodingSwitching"], W1_B8_SECONDS["SchemeSwitching"]
    return (f"Encoding Switching preferred at b ≥ 8 (measured W1 at b=8: {enc:g} s vs {sch:g} s, "
            f"{sch / enc:.1f}x faster than Scheme Switching)")


def advise(q: AdvisorQuery) -> Recommendation:
    """연산 구성, SIMD 유용성, 정확성 요구로 방식 계열 추천"""
    if q.op_mix is OpMix.LINEAR:
        methods = ["BGV", "BFV"] if q.exact_required else _WORD_WISE
        return Recommendation(family="word-wise", methods=methods,
                              text="선형 연산만 있으면 word-wise FHE 가 가장 효율적입니다")
    if not q.simd_useful:
        text = ("비선형 연산만 있고 SIMD 가 필요 없으면 bit-wise TFHE 를 사용합니다"
                if q.op_mix is OpMix.NONLINEAR else
                "SIMD 이점이 없는 혼합 연산은 TFHE 가 가장 실용적입니다")
        return Recommendation(family="bit-wise", methods=["TFHE"], text=text)
    if q.op_mix is OpMix.NONLINEAR:
        return Recommendation(family="word-wise comparison", methods=list(_COMPARISON_FAMILY),
                              text="SIMD 비선형 연산은 보간/자릿수 분해/XCMP 비교 계열을 사용합니다")
    if not q.exact_required:
        return Recommendation(family="approximate", methods=["CKKS"],
                              text="근사가 허용되면 CKKS 다항식 근사 비교를 사용합니다")
    return Recommendation(
        family="general",
        methods=["EncodingSwitching", "SchemeSwitching"],
        text="정확한 SIMD 혼합 연산은 Encoding Switching 또는 Scheme Switching 을 사용합니다",
        note=_encoding_note(),
    )


def advise_table() -> list[tuple[AdvisorQuery, Recommendation]]:
    """12 칸 전체 결정표"""
    out = []
    for mix in OpMix:
        for simd in (False, True):
            for exact in (False, True):
                q = AdvisorQuery(op_mix=mix, simd_useful=simd, exact_required=exact)
                out.append((q, advise(q)))
    return out


def calibrate_switch_constant(points: Sequence[tuple[int, float]] = SWITCH_ANCHORS) -> float:
    """(비트, 초) 측정점으로 seconds = c * 2^b 의 최소제곱 c"""
    if not points:
        raise ValueError("보정 측정점이 없습니다")
    num = sum(seconds * 2 ** bits for bits, seconds in points)
    den = sum(4 ** bits for bits, _ in points)
    return num / den


def estimate_ms(ledger: CostLedger, calibration: Calibration) -> float:
    """원장 카운터의 보고용 시간 추정 (모델 추정치)"""
    return (
        ledger.gate_bootstraps * calibration.ms_per_gate_bootstrap
        + ledger.switch_cost_units * calibration.s_per_switch_unit * 1000.0
        + ledger.nonscalar_mults * calibration.ms_per_nonscalar_mult
        + ledger.rotations * calibration.ms_per_rotation
        + ledger.refreshes * calibration.ms_per_refresh
    )
