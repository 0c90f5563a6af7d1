from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.domain.param_definition import (
    BIT_WIDTHS,
    BITS_PER_LEVEL,
    DEFAULT_SEED,
    DEFAULT_SWITCH_CONSTANT,
    MS_PER_GATE_BOOTSTRAP,
    RNG_ALGORITHM,
)


class Method(str, Enum):
    """일반 연산이 가능한 FHE 방식"""
    TFHE = "tfhe"
    SCHEME = "scheme"
    ENCODING = "encoding"

    @property
    def label(self) -> str:
        return {
            Method.TFHE: "BitwiseTFHE",
            Method.SCHEME: "SchemeSwitching",
            Method.ENCODING: "EncodingSwitching",
        }[self]

    @property
    def is_simd(self) -> bool:
        """SIMD 슬롯 사용 가능 여부 (TFHE는 불가)"""
        return self is not Method.TFHE


class ReportFormat(str, Enum):
    """지원하는 리포트 형식"""
    JSONL = "jsonl"
    CSV = "csv"
    MARKDOWN = "markdown"


class WorkloadKind(str, Enum):
    W1 = "w1"   # Compare(A*B, C)
    W2 = "w2"   # Compare(A, B) * C
    W3 = "w3"   # Compare(A*B, C) * D


class AppKind(str, Enum):
    FLOYD = "floyd"
    TREE = "tree"
    SORT = "sort"
    DB = "db"


class OpMix(str, Enum):
    LINEAR = "linear-only"
    NONLINEAR = "nonlinear-only"
    MIXED = "mixed"


class GateOp(str, Enum):
    AND = "AND"
    OR = "OR"
    XOR = "XOR"
    MUX = "MUX"
    NOT = "NOT"


class EvalCount(BaseModel):
    """다항식 평가 연산 카운트"""
    nonscalar_mults: int = Field(default=0, ge=0)
    scalar_mults: int = Field(default=0, ge=0)
    additions: int = Field(default=0, ge=0)
    depth: int = Field(default=0, ge=0)

    @model_validator(mode='after')
    def validate_depth(self):
        if self.depth > self.nonscalar_mults:
            raise ValueError(f'depth({self.depth})가 비스칼라 곱셈 수({self.nonscalar_mults})보다 클 수 없습니다')
        return self


class SignPoly(BaseModel):
    """F_p 위의 부호 보간 다항식 (오름차순 계수)"""
    model_config = ConfigDict(frozen=True)

    p: int
    coeffs: tuple[int, ...]

    @model_validator(mode='after')
    def validate_coeffs(self):
        if len(self.coeffs) > self.p:
            raise ValueError(f'계수 개수는 p({self.p}) 이하여야 합니다')
        if any(c < 0 or c >= self.p for c in self.coeffs):
            raise ValueError('계수는 [0, p) 범위여야 합니다')
        return self

    @property
    def degree(self) -> int:
        for i in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[i]:
                return i
        return 0


class NegaPoly(BaseModel):
    """Z_p[x]/(x^n + 1) 원소"""
    model_config = ConfigDict(frozen=True)

    p: int
    n: int
    coeffs: tuple[int, ...]

    @model_validator(mode='after')
    def validate_ring(self):
        if self.n < 1 or self.n & (self.n - 1):
            raise ValueError(f'n은 2의 거듭제곱이어야 합니다: {self.n}')
        if len(self.coeffs) != self.n:
            raise ValueError(f'계수 길이({len(self.coeffs)})가 n({self.n})과 다릅니다')
        if any(c < 0 or c >= self.p for c in self.coeffs):
            raise ValueError('계수는 [0, p) 범위여야 합니다')
        return self


LEDGER_FIELDS = (
    "nonscalar_mults",
    "scalar_mults",
    "additions",
    "rotations",
    "comparisons",
    "equalities",
    "gate_bootstraps",
    "switches",
    "switch_cost_units",
    "max_depth",
    "masked_mults",
    "range_overflows",
    "conversions",
    "conversion_mults",
    "conversion_depth",
    "refreshes",
)
"""CostLedger 필드 순서 (리포트 컬럼 순서와 동일)"""


class CostLedger(BaseModel):
    """동형 연산 비용 원장"""
    nonscalar_mults: int = 0
    scalar_mults: int = 0
    additions: int = 0
    rotations: int = 0
    comparisons: int = 0
    equalities: int = 0
    gate_bootstraps: int = 0
    switches: int = 0
    switch_cost_units: int = 0
    max_depth: int = 0
    masked_mults: int = 0
    range_overflows: int = 0
    conversions: int = 0
    conversion_mults: int = 0
    conversion_depth: int = 0
    refreshes: int = 0

    def snapshot(self) -> "CostLedger":
        return self.model_copy()

    def counters(self) -> dict[str, int]:
        return {name: getattr(self, name) for name in LEDGER_FIELDS}

    def total_ops(self) -> int:
        return sum(v for k, v in self.counters().items() if k != "max_depth")


class Calibration(BaseModel):
    """보고용 시간 추정 상수 (모델 추정치)"""
    ms_per_gate_bootstrap: float = Field(default=MS_PER_GATE_BOOTSTRAP, ge=0)
    s_per_switch_unit: float = Field(default=DEFAULT_SWITCH_CONSTANT, ge=0)
    ms_per_nonscalar_mult: float = Field(default=10.0, ge=0)
    ms_per_rotation: float = Field(default=8.0, ge=0)
    ms_per_refresh: float = Field(default=5000.0, ge=0)


class MethodProfile(BaseModel):
    """방식별 비용 규칙과 깊이 예산"""
    method: Method
    depth_budget: Optional[int] = Field(default=None, gt=0)
    bits_per_level: int = Field(default=BITS_PER_LEVEL, gt=0)
    allow_refresh: bool = True
    calibration: Calibration = Field(default_factory=Calibration)

    @property
    def comparison_rule(self) -> str:
        return {
            Method.TFHE: "bit_lt: 4b-3 gate bootstraps per lane",
            Method.SCHEME: "switch to bits + bit_lt, c*2^b per switch",
            Method.ENCODING: "reduce to base-p digits + lt_digits + lift",
        }[self.method]

    @property
    def switch_rule(self) -> str:
        if self.method is Method.SCHEME:
            return "switch_cost_units += 2^b"
        return "none"


class RngConfig(BaseModel):
    algorithm: str = RNG_ALGORITHM
    seed: int = DEFAULT_SEED

    @field_validator('algorithm')
    def validate_algorithm(cls, v):
        if v.upper() != RNG_ALGORITHM:
            raise ValueError(f'지원하는 난수 생성기는 {RNG_ALGORITHM} 뿐입니다: {v}')
        return RNG_ALGORITHM


class ScenarioConfig(BaseModel):
    """시나리오 설정 파일 내용"""
    profiles: dict[Method, MethodProfile] = Field(default_factory=dict)
    calibration: Calibration = Field(default_factory=Calibration)
    rng: RngConfig = Field(default_factory=RngConfig)
    report_format: ReportFormat = ReportFormat.JSONL

    def profile(self, method: Method) -> MethodProfile:
        if method in self.profiles:
            return self.profiles[method]
        return MethodProfile(method=method, calibration=self.calibration)


def scenario_key(name: str, method: "Method", b: int, size: int, rep: int) -> str:
    """정렬 가능한 시나리오 키"""
    return f"{name}-{Method(method).value}-b{b:02d}-s{size:04d}-r{rep:03d}"


class WorkloadSpec(BaseModel):
    """마이크로 벤치마크 워크로드 정의"""
    kind: WorkloadKind
    b: int
    slot_count: int = Field(default=1, ge=1)
    method: Method
    seed: int = DEFAULT_SEED
    rep: int = Field(default=0, ge=0)

    @field_validator('b')
    def validate_bits(cls, v):
        if v not in BIT_WIDTHS:
            raise ValueError(f'지원하지 않는 비트 폭입니다: {v} (지원: {BIT_WIDTHS})')
        return v

    @property
    def scenario_id(self) -> str:
        return scenario_key(self.kind.value, self.method, self.b, self.slot_count, self.rep)


class WorkloadResult(BaseModel):
    spec: WorkloadSpec
    outputs: list[int]
    expected: list[int]
    ledger: CostLedger
    oracle_match: bool
    predicted: dict[str, float] = Field(default_factory=dict)


class AppSpec(BaseModel):
    """
    응용 시나리오 정의

    size 의 의미는 응용마다 다르다: floyd = 노드 수, tree = 깊이, sort = 길이, db = 행 수
    """
    kind: AppKind
    b: int
    size: int = Field(ge=1)
    method: Method
    seed: int = DEFAULT_SEED
    rep: int = Field(default=0, ge=0)

    @field_validator('b')
    def validate_bits(cls, v):
        if v not in BIT_WIDTHS:
            raise ValueError(f'지원하지 않는 비트 폭입니다: {v} (지원: {BIT_WIDTHS})')
        return v

    @property
    def scenario_id(self) -> str:
        return scenario_key(self.kind.value, self.method, self.b, self.size, self.rep)


class AppResult(BaseModel):
    spec: AppSpec
    slot_count: int
    ledger: CostLedger
    oracle_match: bool
    detail: str = ""
    predicted: dict[str, float] = Field(default_factory=dict)


class AdvisorQuery(BaseModel):
    op_mix: OpMix
    simd_useful: bool
    exact_required: bool


class Recommendation(BaseModel):
    family: str
    methods: list[str]
    text: str
    note: Optional[str] = None


class ComplexityRow(BaseModel):
    """방식별 복잡도 표 한 행"""
    method: str
    nonlinear_depth: str
    nonlinear_complexity: str
    linear_depth: str
    linear_complexity: str
    simd: bool
    exact: bool
    general: bool


class Prediction(BaseModel):
    """예측 카운터 (단위 상수로 구체화한 점근식)"""
    method: Method
    b: int
    p: int
    r: int
    d: int
    nonlinear_depth: float
    nonlinear_depth_levels: int
    nonlinear_mults: float
    nonlinear_gates: float
    switch_units: float
    switch_seconds: float
    linear_depth: int
    linear_mults: float
    linear_gates: float
    conversion_depth: float


class ReconcileRow(BaseModel):
    scenario_id: str
    ratios: dict[str, float]
    depth_ok: bool
    warnings: list[str] = Field(default_factory=list)

    @property
    def status(self) -> str:
        if not self.depth_ok:
            return "fail"
        return "warn" if self.warnings else "pass"


class ReportRow(BaseModel):
    """리포트 한 행 (필드 순서 고정)"""
    scenario_id: str
    method: Method
    b: int
    slot_count: int
    name: str
    size: int
    seed: int
    oracle_pass: bool
    nonscalar_mults: int = 0
    scalar_mults: int = 0
    additions: int = 0
    rotations: int = 0
    comparisons: int = 0
    equalities: int = 0
    gate_bootstraps: int = 0
    switches: int = 0
    switch_cost_units: int = 0
    max_depth: int = 0
    masked_mults: int = 0
    range_overflows: int = 0
    conversions: int = 0
    conversion_mults: int = 0
    conversion_depth: int = 0
    refreshes: int = 0
    pred_nonscalar_mults: float = 0.0
    pred_gate_bootstraps: float = 0.0
    pred_switches: float = 0.0
    pred_max_depth: float = 0.0
    reconcile: str = "pass"
    model_estimated_ms: float = 0.0
    model_estimated_amortized_ms: float = 0.0

    @classmethod
    def field_names(cls) -> list[str]:
        return list(cls.model_fields.keys())


class ScenarioMix(BaseModel):
    """시나리오의 연산 구성 (예측 입력)"""
    muls: int = Field(default=0, ge=0)
    compares: int = Field(default=0, ge=0)
    equalities: int = Field(default=0, ge=0)
    masked: int = Field(default=0, ge=0)
    mul_chain: int = Field(default=0, ge=0)        # 임계 경로의 곱셈 단계 수
    compare_chain: int = Field(default=0, ge=0)    # 임계 경로의 비교 단계 수
    equal_chain: int = Field(default=0, ge=0)
    equal_value_max: Optional[int] = None          # 동등 판정 피연산자 상한 (자릿수 결정)
    capped: bool = False                           # refresh 허용 시 예측 깊이를 예산으로 제한
    lanes: int = Field(default=1, ge=1)            # 비트 방식은 레인마다 게이트를 따로 계상


class ScenarioPrediction(BaseModel):
    """시나리오 단위 예측 카운터"""
    scenario_id: str
    method: Method
    b: int
    nonscalar_mults: float = 0.0
    gate_bootstraps: float = 0.0
    switches: float = 0.0
    max_depth: float = 0.0

    def counters(self) -> dict[str, float]:
        return {
            "nonscalar_mults": self.nonscalar_mults,
            "gate_bootstraps": self.gate_bootstraps,
            "switches": self.switches,
            "max_depth": self.max_depth,
        }
