"""
모듈 설명:
    - 세 가지 일반 연산 FHE 방식(BitwiseTFHE, SchemeSwitching, EncodingSwitching)의 암호문 에뮬레이션
    - 실제 암호화 없이 평문 의미를 정확히 재현하고, 모든 동형 연산을 CostLedger에 기록
주요 기능:
    - WordCipher / BitCipher / EvalContext
    - ct_add, ct_sub, ct_add_plain, ct_mul, ct_mul_plain, ct_rotate, ct_broadcast, ct_sum_slots
    - ct_refresh, ensure_headroom : 레벨 예산 관리 (부트스트래핑을 계측 이벤트로 취급)
    - bit_gate, bit_add, bit_sub, bit_mul, bit_select, bit_mask_mul
    - bit_bound : 비트 암호문 상한 추적과 범위 초과 진단
    - charge_switch, switch_to_bits, switch_to_word : 스킴 전환
    - reduce_to_digits, lift_from_digit : 인코딩 전환

EvalContext 하나는 단일 스레드에서만 사용한다. 서로 다른 컨텍스트는 독립적이다.
"""
import itertools
from math import isqrt
from contextlib import contextmanager
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from app.core.logger import get_logger
from app.domain.errors import (
    ContextMismatch,
    DepthExceeded,
    ProfileMismatch,
    WidthMismatch,
)
from app.domain.param_definition import TFHE_WIDTHS, default_depth_budget, tfhe_width_for
from app.domain.schemas import CostLedger, GateOp, Method, MethodProfile

logger = get_logger(__name__)

_context_ids = itertools.count(1)

PlainVector = Union[int, Sequence[int], np.ndarray]


def _as_array(values) -> np.ndarray:
    if not isinstance(values, (np.ndarray, list, tuple)) and not np.isscalar(values):
        values = list(values)
    return np.asarray(values, dtype=np.int64)


class WordCipher(BaseModel):
    """워드 단위 암호문: Z_{p^r} 슬롯 벡터 + 깊이/범위 미터"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    slots: np.ndarray
    modulus: int
    p: int
    r: int
    depth_used: int = 0
    lo: int = 0             # 평문 정수값 구간 하한
    hi: int = 0             # 평문 정수값 구간 상한
    overflow: bool = False
    ctx_id: int

    @property
    def slot_count(self) -> int:
        return int(self.slots.shape[0])

    @property
    def range_bound(self) -> int:
        return min(max(abs(self.lo), abs(self.hi)), self.modulus - 1)

    def with_interval(self, lo: int, hi: int) -> "WordCipher":
        """구조적으로 알려진 값 구간으로 교체 (마스크, 선택 결과 등)"""
        return self.model_copy(update={"lo": int(lo), "hi": int(hi)})


class BitCipher(BaseModel):
    """비트 단위 암호문 묶음: lanes 개의 독립 암호문, 각 폭 b (LSB 먼저)"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    bits: np.ndarray        # shape (lanes, width), uint8
    width: int
    ctx_id: int
    hi: Optional[int] = None    # 알려진 평문 상한, None 이면 추적 안 함
    overflow: bool = False

    @field_validator('width')
    def validate_width(cls, v):
        if v not in TFHE_WIDTHS:
            raise ValueError(f'지원하지 않는 TFHE 폭입니다: {v} (지원: {TFHE_WIDTHS})')
        return v

    @property
    def lanes(self) -> int:
        return int(self.bits.shape[0])

    def with_bound(self, hi: Optional[int]) -> "BitCipher":
        """구조적으로 알려진 상한으로 교체"""
        return self.model_copy(update={"hi": None if hi is None else int(hi)})

    def values(self) -> np.ndarray:
        weights = (1 << np.arange(self.width, dtype=np.int64))
        return (self.bits.astype(np.int64) * weights).sum(axis=1)


Cipher = Union[WordCipher, BitCipher]


class EvalContext:
    """
    평가 컨텍스트: 프로파일, 파라미터 (p, r, b), 슬롯 수, 원장

    워드 방식은 p^r >= 2^b 이어야 하고, 비트 방식은 slot_count = 1 로 고정된다.
    """

    def __init__(
        self,
        profile: MethodProfile,
        p: int,
        r: int,
        b: int,
        slot_count: int = 1,
        ledger: Optional[CostLedger] = None,
    ):
        if slot_count < 1:
            raise ValueError(f"slot_count는 1 이상이어야 합니다: {slot_count}")
        if profile.method.is_simd and p ** r < 2 ** b:
            raise ValueError(f"p^r({p ** r}) < 2^b({2 ** b}) 입니다")
        self.uid = next(_context_ids)
        self.profile = profile
        self.method = profile.method
        self.p = p
        self.r = r
        self.b = b
        self.modulus = p ** r
        self.slot_count = 1 if profile.method is Method.TFHE else slot_count
        self.budget = profile.depth_budget or default_depth_budget(b, profile.bits_per_level)
        self.ledger = ledger or CostLedger()
        self._nesting = 0

    def __repr__(self):
        return (f"EvalContext(method={self.method.value}, p={self.p}, r={self.r}, b={self.b}, "
                f"slots={self.slot_count}, budget={self.budget})")

    # 암호화 / 복호화 (에뮬레이션)
    def encrypt(
        self,
        values: Iterable[int],
        modulus: Optional[int] = None,
        lo: Optional[int] = None,
        hi: Optional[int] = None,
    ) -> WordCipher:
        modulus = modulus or self.modulus
        if modulus not in (self.p, self.modulus):
            raise ContextMismatch(f"컨텍스트에 없는 모듈러스입니다: {modulus}")
        raw = _as_array(values)
        if raw.ndim == 0:
            raw = np.full(self.slot_count, int(raw), dtype=np.int64)
        if raw.shape[0] != self.slot_count:
            raise ContextMismatch(f"슬롯 수 불일치: {raw.shape[0]} != {self.slot_count}")
        lo = int(raw.min()) if lo is None else lo
        hi = int(raw.max()) if hi is None else hi
        return WordCipher(
            slots=raw % modulus,
            modulus=modulus,
            p=self.p,
            r=self.r if modulus == self.modulus else 1,
            lo=lo,
            hi=hi,
            ctx_id=self.uid,
        )

    def encrypt_bits(self, values: Iterable[int], width: Optional[int] = None,
                     hi: Optional[int] = None) -> BitCipher:
        width = width or self.b
        raw = np.atleast_1d(_as_array(values)) % (1 << width)
        bits = ((raw[:, None] >> np.arange(width, dtype=np.int64)) & 1).astype(np.uint8)
        hi = (int(raw.max()) if raw.size else 0) if hi is None else hi
        return BitCipher(bits=bits, width=width, ctx_id=self.uid, hi=hi)

    def decrypt(self, c: Cipher) -> np.ndarray:
        self.check(c)
        if isinstance(c, BitCipher):
            return c.values()
        return c.slots.copy()

    def check(self, *ciphers: Cipher):
        for c in ciphers:
            if c.ctx_id != self.uid:
                raise ContextMismatch("다른 컨텍스트에서 생성된 암호문입니다")

    # 원장 관리
    def note_depth(self, depth: int):
        if depth > self.budget:
            raise DepthExceeded(depth, self.budget)
        if depth > self.ledger.max_depth:
            self.ledger.max_depth = depth

    @contextmanager
    def counted(self, counter: str):
        """중첩 호출 중 가장 바깥 호출만 counter 를 1 증가"""
        outer = self._nesting == 0
        self._nesting += 1
        try:
            yield outer
        finally:
            self._nesting -= 1
        if outer:
            setattr(self.ledger, counter, getattr(self.ledger, counter) + 1)


def _same_ring(ctx: EvalContext, a: WordCipher, b: WordCipher):
    ctx.check(a, b)
    if a.modulus != b.modulus:
        raise ContextMismatch(f"모듈러스 불일치: {a.modulus} != {b.modulus}")


def _plain(ctx: EvalContext, k: PlainVector) -> np.ndarray:
    vec = np.asarray(k, dtype=np.int64)
    if vec.ndim == 0:
        vec = np.full(ctx.slot_count, int(vec), dtype=np.int64)
    if vec.shape[0] != ctx.slot_count:
        raise ContextMismatch(f"평문 벡터 길이 불일치: {vec.shape[0]} != {ctx.slot_count}")
    return vec


def _result(
    ctx: EvalContext,
    like: WordCipher,
    slots: np.ndarray,
    depth: int,
    lo: int,
    hi: int,
    modular: bool,
) -> WordCipher:
    m = like.modulus
    if modular:
        # 체 원소로서의 연산: 정수 구간 의미가 없음
        lo, hi, overflow = 0, m - 1, False
    else:
        overflow = max(abs(lo), abs(hi)) > m - 1
        if overflow:
            ctx.ledger.range_overflows += 1
            logger.warning(f"⚠️ 범위 초과 가능: 구간 [{lo}, {hi}] 이 모듈러스 {m} 를 넘음")
    ctx.note_depth(depth)
    return WordCipher(
        slots=slots % m,
        modulus=m,
        p=like.p,
        r=like.r,
        depth_used=depth,
        lo=lo,
        hi=hi,
        overflow=overflow or like.overflow,
        ctx_id=ctx.uid,
    )


def ct_add(ctx: EvalContext, a: WordCipher, b: WordCipher, modular: bool = False) -> WordCipher:
    _same_ring(ctx, a, b)
    ctx.ledger.additions += 1
    return _result(ctx, a, a.slots + b.slots, max(a.depth_used, b.depth_used),
                   a.lo + b.lo, a.hi + b.hi, modular)


def ct_sub(ctx: EvalContext, a: WordCipher, b: WordCipher, modular: bool = False) -> WordCipher:
    _same_ring(ctx, a, b)
    ctx.ledger.additions += 1
    return _result(ctx, a, a.slots - b.slots, max(a.depth_used, b.depth_used),
                   a.lo - b.hi, a.hi - b.lo, modular)


def ct_add_plain(ctx: EvalContext, a: WordCipher, k: PlainVector, modular: bool = False) -> WordCipher:
    ctx.check(a)
    vec = _plain(ctx, k)
    ctx.ledger.additions += 1
    return _result(ctx, a, a.slots + vec, a.depth_used,
                   a.lo + int(vec.min()), a.hi + int(vec.max()), modular)


def _interval_mul(lo1: int, hi1: int, lo2: int, hi2: int) -> tuple[int, int]:
    products = (lo1 * lo2, lo1 * hi2, hi1 * lo2, hi1 * hi2)
    return min(products), max(products)


def ct_mul(ctx: EvalContext, a: WordCipher, b: WordCipher, modular: bool = False) -> WordCipher:
    """암호문-암호문 곱 (깊이 +1)"""
    _same_ring(ctx, a, b)
    depth = max(a.depth_used, b.depth_used) + 1
    if depth > ctx.budget:
        raise DepthExceeded(depth, ctx.budget)
    ctx.ledger.nonscalar_mults += 1
    lo, hi = _interval_mul(a.lo, a.hi, b.lo, b.hi)
    return _result(ctx, a, a.slots * b.slots, depth, lo, hi, modular)


def ct_mul_plain(ctx: EvalContext, a: WordCipher, k: PlainVector, modular: bool = False) -> WordCipher:
    """평문 곱 (레벨 소모 0, 부호 있는 상수 허용)"""
    ctx.check(a)
    vec = _plain(ctx, k)
    ctx.ledger.scalar_mults += 1
    lo, hi = _interval_mul(a.lo, a.hi, int(vec.min()), int(vec.max()))
    return _result(ctx, a, a.slots * (vec % a.modulus), a.depth_used, lo, hi, modular)


def ct_rotate(ctx: EvalContext, a: WordCipher, k: int) -> WordCipher:
    """왼쪽 순환 회전"""
    ctx.check(a)
    ctx.ledger.rotations += 1
    return a.model_copy(update={"slots": np.roll(a.slots, -(k % a.slot_count))})


def ct_sum_slots(ctx: EvalContext, a: WordCipher) -> WordCipher:
    """
    모든 슬롯의 합을 모든 슬롯에 복제 (회전-덧셈)

    n = 2^t 이면 정확히 t 번 회전, 일반 n 은 이진 분해로 창 크기를 맞춘다.
    결과 구간은 호출자가 의미에 맞게 지정한다.
    """
    n = a.slot_count
    window, size = a, 1
    acc, offset = None, 0
    for i in range(n.bit_length()):
        if n >> i & 1:
            term = ct_rotate(ctx, window, offset) if offset else window
            acc = term if acc is None else ct_add(ctx, acc, term, modular=True)
            offset += size
        if i < n.bit_length() - 1:
            window = ct_add(ctx, window, ct_rotate(ctx, window, size), modular=True)
            size *= 2
    return acc


def ct_broadcast(ctx: EvalContext, a: WordCipher, idx: int) -> WordCipher:
    """슬롯 idx 값을 모든 슬롯으로 복제: 마스크 곱 1회 + 회전-덧셈"""
    ctx.check(a)
    if not 0 <= idx < a.slot_count:
        raise ValueError(f"슬롯 인덱스 범위 초과: {idx}")
    mask = np.zeros(a.slot_count, dtype=np.int64)
    mask[idx] = 1
    masked = ct_mul_plain(ctx, a, mask)
    spread = ct_sum_slots(ctx, masked)
    return spread.with_interval(a.lo, a.hi)


def ct_relabel(ctx: EvalContext, a: WordCipher, lo: int, hi: int) -> WordCipher:
    """의미상 알려진 정수 구간으로 교체하고 모듈러스 초과 여부를 진단"""
    ctx.check(a)
    if max(abs(lo), abs(hi)) > a.modulus - 1:
        ctx.ledger.range_overflows += 1
        logger.warning(f"⚠️ 범위 초과 가능: 구간 [{lo}, {hi}] 이 모듈러스 {a.modulus} 를 넘음")
        return a.model_copy(update={"lo": int(lo), "hi": int(hi), "overflow": True})
    return a.with_interval(lo, hi)


def ct_refresh(ctx: EvalContext, a: WordCipher) -> WordCipher:
    """워드 단위 부트스트래핑: 소모 레벨을 0 으로 되돌림"""
    ctx.check(a)
    if not ctx.profile.allow_refresh:
        raise DepthExceeded(a.depth_used + 1, ctx.budget)
    ctx.ledger.refreshes += 1
    logger.debug(f"🔄 refresh: depth {a.depth_used} -> 0")
    return a.model_copy(update={"depth_used": 0})


def ensure_headroom(ctx: EvalContext, a: Cipher, levels: int) -> Cipher:
    """다음 단계가 levels 만큼 소모해도 예산 안에 들도록 필요할 때만 refresh"""
    if isinstance(a, BitCipher):
        return a
    if a.depth_used + levels <= ctx.budget:
        return a
    if levels > ctx.budget or not ctx.profile.allow_refresh:
        raise DepthExceeded(a.depth_used + levels, ctx.budget)
    return ct_refresh(ctx, a)


# 비트 단위 게이트
def _lanes_of(inputs) -> int:
    return max((np.size(x) for x in inputs), default=1)


def bit_gate(ctx: EvalContext, op: GateOp, *inputs):
    """
    불리언 게이트 (입력은 0/1 스칼라 또는 레인 배열)

    AND/OR/XOR/MUX 는 레인당 부트스트래핑 1회, NOT 은 무료
    MUX 입력 순서: (s, a, b) -> s ? a : b
    """
    op = GateOp(op)
    if op is GateOp.NOT:
        (x,) = inputs
        return 1 - x
    ctx.ledger.gate_bootstraps += _lanes_of(inputs)
    if op is GateOp.AND:
        x, y = inputs
        return x & y
    if op is GateOp.OR:
        x, y = inputs
        return x | y
    if op is GateOp.XOR:
        x, y = inputs
        return x ^ y
    s, x, y = inputs
    return np.where(s == 1, x, y) if isinstance(s, np.ndarray) else (x if s == 1 else y)


def _same_width(ctx: EvalContext, a: BitCipher, b: BitCipher):
    ctx.check(a, b)
    if a.width != b.width:
        raise WidthMismatch(f"비트 폭 불일치: {a.width} != {b.width}")
    if a.lanes != b.lanes:
        raise WidthMismatch(f"레인 수 불일치: {a.lanes} != {b.lanes}")


def _bits(ctx: EvalContext, columns: list[np.ndarray], width: int, hi: Optional[int] = None,
          overflow: bool = False) -> BitCipher:
    return BitCipher(bits=np.stack(columns, axis=1).astype(np.uint8), width=width, ctx_id=ctx.uid,
                     hi=hi, overflow=overflow)


def bit_bound(ctx: EvalContext, hi: Optional[int], width: int) -> tuple[Optional[int], bool]:
    """비트 결과 상한 검사: 2^w - 1 을 넘으면 mod 2^w 로 감길 수 있음"""
    if hi is None or hi <= (1 << width) - 1:
        return hi, False
    ctx.ledger.range_overflows += 1
    logger.warning(f"⚠️ 범위 초과 가능: 상한 {hi} 이 비트 폭 {width} ({(1 << width) - 1}) 를 넘음")
    return None, True


def _known(a: BitCipher, b: BitCipher, op) -> Optional[int]:
    return None if a.hi is None or b.hi is None else op(a.hi, b.hi)


def _ripple(ctx: EvalContext, xs: list[np.ndarray], ys: list[np.ndarray], carry=None) -> list[np.ndarray]:
    """리플 캐리 덧셈 열: carry 없으면 반가산기로 시작 (5w-3 게이트)"""
    out = []
    for i, (x, y) in enumerate(zip(xs, ys)):
        if i == 0 and carry is None:
            out.append(bit_gate(ctx, GateOp.XOR, x, y))
            carry = bit_gate(ctx, GateOp.AND, x, y)
            continue
        t = bit_gate(ctx, GateOp.XOR, x, y)
        out.append(bit_gate(ctx, GateOp.XOR, t, carry))
        carry = bit_gate(ctx, GateOp.OR,
                         bit_gate(ctx, GateOp.AND, x, y),
                         bit_gate(ctx, GateOp.AND, t, carry))
    return out


def bit_add(ctx: EvalContext, a: BitCipher, b: BitCipher) -> BitCipher:
    """리플 캐리 덧셈 mod 2^b, 정확히 5b-3 게이트"""
    _same_width(ctx, a, b)
    xs = [a.bits[:, i] for i in range(a.width)]
    ys = [b.bits[:, i] for i in range(b.width)]
    hi, overflow = bit_bound(ctx, _known(a, b, lambda x, y: x + y), a.width)
    return _bits(ctx, _ripple(ctx, xs, ys), a.width, hi, overflow or a.overflow or b.overflow)


def bit_sub(ctx: EvalContext, a: BitCipher, b: BitCipher) -> BitCipher:
    """a + NOT(b) + 1 mod 2^b, 5b-3 게이트"""
    _same_width(ctx, a, b)
    xs = [a.bits[:, i] for i in range(a.width)]
    ys = [bit_gate(ctx, GateOp.NOT, b.bits[:, i]) for i in range(b.width)]
    # 첫 비트는 carry-in 1: 합 = NOT(x XOR y), carry = x OR y
    t = bit_gate(ctx, GateOp.XOR, xs[0], ys[0])
    first = bit_gate(ctx, GateOp.NOT, t)
    carry = bit_gate(ctx, GateOp.OR, xs[0], ys[0])
    rest = _ripple(ctx, xs[1:], ys[1:], carry=carry) if a.width > 1 else []
    return _bits(ctx, [first] + rest, a.width)


def bit_mul(ctx: EvalContext, a: BitCipher, b: BitCipher) -> BitCipher:
    """schoolbook 곱 mod 2^b: 부분곱 AND b(b+1)/2 + 폭 b-i 덧셈기"""
    _same_width(ctx, a, b)
    w = a.width
    acc = [bit_gate(ctx, GateOp.AND, a.bits[:, j], b.bits[:, 0]) for j in range(w)]
    for i in range(1, w):
        row = [bit_gate(ctx, GateOp.AND, a.bits[:, j], b.bits[:, i]) for j in range(w - i)]
        acc = acc[:i] + _ripple(ctx, acc[i:], row)
    hi, overflow = bit_bound(ctx, _known(a, b, lambda x, y: x * y), w)
    return _bits(ctx, acc, w, hi, overflow or a.overflow or b.overflow)


def bit_select(ctx: EvalContext, mask: BitCipher, x: BitCipher, y: BitCipher) -> BitCipher:
    """mask ? x : y, 비트당 MUX 1 (b 게이트)"""
    _same_width(ctx, x, y)
    ctx.check(mask)
    s = mask.bits[:, 0]
    return _bits(ctx, [bit_gate(ctx, GateOp.MUX, s, x.bits[:, i], y.bits[:, i]) for i in range(x.width)], x.width,
                 _known(x, y, max))


def bit_mask_mul(ctx: EvalContext, mask: BitCipher, x: BitCipher) -> BitCipher:
    """0/1 마스크 곱: 비트당 AND 1 (b 게이트)"""
    ctx.check(mask, x)
    s = mask.bits[:, 0]
    return _bits(ctx, [bit_gate(ctx, GateOp.AND, s, x.bits[:, i]) for i in range(x.width)], x.width, x.hi)


def bit_mask(ctx: EvalContext, column: np.ndarray, width: int) -> BitCipher:
    """0/1 레인 값을 LSB 에 담은 마스크 (상위 비트는 자명한 0 암호문)"""
    zeros = np.zeros_like(column, dtype=np.uint8)
    return _bits(ctx, [column.astype(np.uint8)] + [zeros] * (width - 1), width, 1)


# 스킴 전환
def charge_switch(ctx: EvalContext, b: Optional[int] = None):
    """스킴 전환 1회: switches += 1, switch_cost_units += 2^b"""
    if ctx.method is not Method.SCHEME:
        raise ProfileMismatch(f"스킴 전환은 SchemeSwitching 프로파일에서만 가능합니다: {ctx.method.value}")
    b = ctx.b if b is None else b
    ctx.ledger.switches += 1
    ctx.ledger.switch_cost_units += 2 ** b


def switch_width(ctx: EvalContext) -> int:
    """Z_{p^r} 값을 담는 비트 폭"""
    return tfhe_width_for(ctx.modulus - 1)


def switch_to_bits(ctx: EvalContext, *ciphers: WordCipher) -> list[BitCipher]:
    """워드 암호문들을 슬롯별 비트 암호문으로 전환 (전환 1회로 계상)"""
    charge_switch(ctx)
    width = switch_width(ctx)
    out = []
    for c in ciphers:
        ctx.check(c)
        raw = c.slots
        bits = ((raw[:, None] >> np.arange(width, dtype=np.int64)) & 1).astype(np.uint8)
        out.append(BitCipher(bits=bits, width=width, ctx_id=ctx.uid))
    return out


def switch_to_word(ctx: EvalContext, mask: BitCipher, like: WordCipher) -> WordCipher:
    """비트 마스크를 워드 암호문으로 되돌림 (같은 전환 이벤트의 귀환)"""
    ctx.check(mask)
    return WordCipher(
        slots=mask.bits[:, 0].astype(np.int64),
        modulus=like.modulus,
        p=like.p,
        r=like.r,
        depth_used=like.depth_used,
        lo=0,
        hi=1,
        ctx_id=ctx.uid,
    )


# 인코딩 전환
def _ceil_log2(x: int) -> int:
    return max(0, (x - 1).bit_length())


def _ceil_sqrt(x: int) -> int:
    root = isqrt(x)
    return root if root * root == x else root + 1


def reduce_to_digits(ctx: EvalContext, a: WordCipher, count: Optional[int] = None) -> list[WordCipher]:
    """
    Z_{p^r} -> base-p 자릿수 암호문 (최상위 먼저)

    count 가 주어지면 하위 count 자리만 (상위 자리가 0 임을 구간이 보장할 때)
    비용: 곱셈 count^2 * ceil(sqrt(p)), 깊이 count*ceil(log2 p) 를 전환 카운터에 기록
    """
    ctx.check(a)
    if ctx.method is not Method.ENCODING:
        raise ProfileMismatch(f"인코딩 전환은 EncodingSwitching 프로파일에서만 가능합니다: {ctx.method.value}")
    count = count or ctx.r
    p = ctx.p
    ctx.ledger.conversions += 1
    ctx.ledger.conversion_mults += count * count * _ceil_sqrt(p)
    ctx.ledger.conversion_depth = max(ctx.ledger.conversion_depth, count * _ceil_log2(p))
    digits = []
    for i in range(count - 1, -1, -1):
        values = (a.slots // (p ** i)) % p
        digits.append(WordCipher(
            slots=values,
            modulus=p,
            p=p,
            r=1,
            depth_used=a.depth_used,
            lo=0,
            hi=p - 1,
            ctx_id=ctx.uid,
        ))
    return digits


def lift_from_digit(ctx: EvalContext, digit: WordCipher) -> WordCipher:
    """F_p 값(0/1 마스크)을 Z_{p^r} 로 리프팅: 곱셈 ceil(sqrt(rp)), 깊이 ceil(log2 r)+ceil(log2 p)"""
    ctx.check(digit)
    ctx.ledger.conversions += 1
    ctx.ledger.conversion_mults += _ceil_sqrt(ctx.r * ctx.p)
    ctx.ledger.conversion_depth = max(ctx.ledger.conversion_depth, _ceil_log2(ctx.r) + _ceil_log2(ctx.p))
    return WordCipher(
        slots=digit.slots % ctx.modulus,
        modulus=ctx.modulus,
        p=ctx.p,
        r=ctx.r,
        depth_used=digit.depth_used,
        lo=digit.lo,
        hi=digit.hi,
        ctx_id=ctx.uid,
    )
