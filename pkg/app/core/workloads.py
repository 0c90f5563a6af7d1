"""
모듈 설명:
    - 선형/비선형 혼합 마이크로 워크로드 세 가지를 방식, 비트 폭, 슬롯 수별로 실행
주요 기능:
    - run_w1 : Compare(A*B, C)
    - run_w2 : Compare(A, B) * C
    - run_w3 : Compare(A*B, C) * D
    - run_minmax : Compare(A, B) * A + (1 - Compare(A, B)) * B
    - amortize : 슬롯당 비용 (SIMD 방식만 나눔)

입력은 비교 전에 모듈러 감김이 없도록 뽑는다 (W1/W3 의 A, B < 2^{floor(b/2)}).
"""
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from app.core.costmodel import estimate_ms, predict_scenario
from app.core.emulator import EvalContext
from app.core.evaluator import Evaluator
from app.core.logger import get_logger
from app.domain.param_definition import pair_for_bits
from app.domain.schemas import (
    CostLedger,
    LEDGER_FIELDS,
    MethodProfile,
    ScenarioMix,
    WorkloadKind,
    WorkloadResult,
    WorkloadSpec,
)

logger = get_logger(__name__)

Inputs = Mapping[str, Sequence[int]]


def make_rng(seed: int, rep: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed + rep))


def draw_inputs(spec: WorkloadSpec) -> dict[str, np.ndarray]:
    """감김 없는 균등 난수 입력"""
    rng = make_rng(spec.seed, spec.rep)
    n, b = spec.slot_count, spec.b
    half = 1 << (b // 2)
    full = 1 << b
    if spec.kind is WorkloadKind.W2:
        return {
            "A": rng.integers(0, full, n),
            "B": rng.integers(0, full, n),
            "C": rng.integers(0, full, n),
        }
    out = {
        "A": rng.integers(0, half, n),
        "B": rng.integers(0, half, n),
        "C": rng.integers(0, full, n),
    }
    if spec.kind is WorkloadKind.W3:
        out["D"] = rng.integers(0, full, n)
    return out


def _context(spec: WorkloadSpec, profile: Optional[MethodProfile]) -> EvalContext:
    p, r = pair_for_bits(spec.b)
    profile = profile or MethodProfile(method=spec.method)
    return EvalContext(profile, p, r, spec.b, slot_count=spec.slot_count)


def input_bounds(spec: WorkloadSpec) -> dict[str, int]:
    """입력별 배타적 상한 (곱의 피연산자는 2^{floor(b/2)})"""
    full = 1 << spec.b
    if spec.kind is WorkloadKind.W2:
        return {"A": full, "B": full, "C": full}
    bounds = {"A": 1 << (spec.b // 2), "B": 1 << (spec.b // 2), "C": full}
    if spec.kind is WorkloadKind.W3:
        bounds["D"] = full
    return bounds


def _prepare(spec: WorkloadSpec, inputs: Optional[Inputs], names: str,
             bounds: Optional[dict[str, int]] = None) -> dict[str, np.ndarray]:
    if inputs is None:
        inputs = draw_inputs(spec)
    bounds = bounds or input_bounds(spec)
    values = {k: np.asarray(inputs[k], dtype=np.int64) for k in names}
    for k, v in values.items():
        if v.shape != (spec.slot_count,):
            raise ValueError(f"입력 {k} 의 레인 수({v.shape})가 slot_count({spec.slot_count})와 다릅니다")
        if v.min() < 0 or v.max() >= bounds[k]:
            raise ValueError(f"입력 {k} 가 [0, {bounds[k]}) 범위를 벗어납니다")
    return values


def _encrypt_all(ev: Evaluator, values: dict[str, np.ndarray], bounds: dict[str, int]) -> dict:
    return {k: ev.encrypt(v, lo=0, hi=bounds[k] - 1) for k, v in values.items()}


def _finish(
    spec: WorkloadSpec,
    ctx: EvalContext,
    outputs: np.ndarray,
    expected: np.ndarray,
    mix: ScenarioMix,
) -> WorkloadResult:
    prediction = predict_scenario(spec.scenario_id, spec.method, spec.b, mix,
                                  calibration=ctx.profile.calibration, depth_budget=ctx.budget)
    match = bool(np.array_equal(outputs, expected))
    if not match:
        logger.error(f"❌ 오라클 불일치: {spec.scenario_id}")
    return WorkloadResult(
        spec=spec,
        outputs=[int(v) for v in outputs],
        expected=[int(v) for v in expected],
        ledger=ctx.ledger.snapshot(),
        oracle_match=match,
        predicted=prediction.counters(),
    )


def run_w1(spec: WorkloadSpec, inputs: Optional[Inputs] = None,
           profile: Optional[MethodProfile] = None) -> WorkloadResult:
    """Compare(A * B, C)"""
    values = _prepare(spec, inputs, "ABC")
    ctx = _context(spec, profile)
    ev = Evaluator(ctx)
    ct = _encrypt_all(ev, values, input_bounds(spec))
    product = ev.mul(ct["A"], ct["B"])
    mask = ev.less_than(product, ct["C"])
    expected = (values["A"] * values["B"] < values["C"]).astype(np.int64)
    mix = ScenarioMix(muls=1, compares=1, mul_chain=1, compare_chain=1, lanes=spec.slot_count)
    return _finish(spec, ctx, ev.decrypt(mask), expected, mix)


def run_w2(spec: WorkloadSpec, inputs: Optional[Inputs] = None,
           profile: Optional[MethodProfile] = None) -> WorkloadResult:
    """Compare(A, B) * C (비트 방식의 0/1 곱은 AND 팬아웃)"""
    values = _prepare(spec, inputs, "ABC")
    ctx = _context(spec, profile)
    ev = Evaluator(ctx)
    ct = _encrypt_all(ev, values, input_bounds(spec))
    mask = ev.less_than(ct["A"], ct["B"])
    out = ev.mask_mul(mask, ct["C"])
    expected = (values["A"] < values["B"]).astype(np.int64) * values["C"]
    mix = ScenarioMix(compares=1, masked=1, mul_chain=1, compare_chain=1, lanes=spec.slot_count)
    return _finish(spec, ctx, ev.decrypt(out), expected, mix)


def run_w3(spec: WorkloadSpec, inputs: Optional[Inputs] = None,
           profile: Optional[MethodProfile] = None) -> WorkloadResult:
    """Compare(A * B, C) * D"""
    values = _prepare(spec, inputs, "ABCD")
    ctx = _context(spec, profile)
    ev = Evaluator(ctx)
    ct = _encrypt_all(ev, values, input_bounds(spec))
    product = ev.mul(ct["A"], ct["B"])
    mask = ev.less_than(product, ct["C"])
    out = ev.mask_mul(mask, ct["D"])
    expected = (values["A"] * values["B"] < values["C"]).astype(np.int64) * values["D"]
    mix = ScenarioMix(muls=1, compares=1, masked=1, mul_chain=2, compare_chain=1, lanes=spec.slot_count)
    return _finish(spec, ctx, ev.decrypt(out), expected, mix)


def run_minmax(spec: WorkloadSpec, inputs: Optional[Inputs] = None,
               profile: Optional[MethodProfile] = None) -> WorkloadResult:
    """W2 패턴의 최소값: Compare(A, B) * A + (1 - Compare(A, B)) * B"""
    bounds = {"A": 1 << spec.b, "B": 1 << spec.b}
    values = _prepare(spec, inputs, "AB", bounds)
    ctx = _context(spec, profile)
    ev = Evaluator(ctx)
    ct = _encrypt_all(ev, values, bounds)
    mask = ev.less_than(ct["A"], ct["B"])
    out = ev.select_min(mask, ct["A"], ct["B"])
    expected = np.minimum(values["A"], values["B"])
    mix = ScenarioMix(compares=1, masked=1, mul_chain=1, compare_chain=1, lanes=spec.slot_count)
    return _finish(spec, ctx, ev.decrypt(out), expected, mix)


RUNNERS: dict[WorkloadKind, Callable[..., WorkloadResult]] = {
    WorkloadKind.W1: run_w1,
    WorkloadKind.W2: run_w2,
    WorkloadKind.W3: run_w3,
}


def run_workload(spec: WorkloadSpec, inputs: Optional[Inputs] = None,
                 profile: Optional[MethodProfile] = None) -> WorkloadResult:
    logger.info(f"▶️ workload 시작: {spec.scenario_id}")
    result = RUNNERS[spec.kind](spec, inputs, profile)
    logger.info(f"✅ workload 완료: {spec.scenario_id} (oracle={result.oracle_match})")
    return result


def amortize(result: WorkloadResult, slot_count: int, calibration=None) -> dict[str, float]:
    """
    슬롯당 비용: 모든 카운터와 추정 시간을 slot_count 로 나눔

    비트 방식은 SIMD 가 없으므로 총량을 그대로 반환한다.
    """
    if slot_count < 1:
        raise ValueError(f"slot_count는 1 이상이어야 합니다: {slot_count}")
    ledger: CostLedger = result.ledger
    cal = calibration or MethodProfile(method=result.spec.method).calibration
    totals = {name: float(getattr(ledger, name)) for name in LEDGER_FIELDS}
    totals["model_estimated_ms"] = estimate_ms(ledger, cal)
    divisor = slot_count if result.spec.method.is_simd else 1
    return {name: value / divisor for name, value in totals.items()}
