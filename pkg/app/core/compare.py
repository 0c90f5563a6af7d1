"""
모듈 설명:
    - 정확한 비교(less-than)와 동등(equality) 연산을 세 가지 인코딩 위에서 구현
주요 기능:
    - lt_interp : F_p 위 부호 보간 다항식 (Paterson-Stockmeyer)
    - eq_fermat : 1 - (a-b)^{p-1}
    - lt_digits / lt_digits_plain : Z_{p^r} 값을 base-p 자릿수로 나눈 사전식 비교
    - lt_xcmp / lt_xcmp_wide : 음순환 환의 단항식 인코딩 비교
    - bit_lt / bit_eq : 비트 단위 비교 회로
    - compare / compare_plain / equal / equal_plain : 방식 디스패치 파사드
"""
from functools import lru_cache
from typing import Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from app.core.emulator import (
    BitCipher,
    EvalContext,
    PlainVector,
    WordCipher,
    bit_gate,
    bit_mask,
    ct_add,
    ct_add_plain,
    ct_mul,
    ct_mul_plain,
    ct_sub,
    lift_from_digit,
    reduce_to_digits,
    switch_to_bits,
    switch_to_word,
    switch_width,
)
from app.core.modmath import (
    ScalarOps,
    centered,
    from_digits,
    is_prime,
    lagrange_sign_poly,
    paterson_stockmeyer,
    power,
    to_digits,
)
from app.core.negaring import monomial, nega_mul, nega_poly
from app.domain.errors import (
    DomainTooLarge,
    InvalidModulus,
    RangeViolation,
    UnsupportedMethod,
    WidthMismatch,
)
from app.domain.schemas import EvalCount, GateOp, Method, MethodProfile

Mask = Union[WordCipher, BitCipher]


class DigitVec(BaseModel):
    """평문 base-p 자릿수 벡터 (최상위 먼저)"""
    model_config = ConfigDict(frozen=True)

    digits: tuple[int, ...]
    p: int

    @model_validator(mode='after')
    def validate_digits(self):
        if any(d < 0 or d >= self.p for d in self.digits):
            raise ValueError(f'자릿수는 [0, {self.p}) 범위여야 합니다: {self.digits}')
        return self

    @property
    def r(self) -> int:
        return len(self.digits)

    @property
    def value(self) -> int:
        return from_digits(self.digits, self.p)

    @classmethod
    def of(cls, value: int, p: int, r: int) -> "DigitVec":
        if not 0 <= value < p ** r:
            raise RangeViolation(f"{value} 는 [0, {p}^{r}) 범위 밖입니다")
        return cls(digits=tuple(to_digits(value, p, r)), p=p)


class DigitCipher(BaseModel):
    """자릿수별 F_p 암호문 (최상위 먼저)"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    digits: list[WordCipher]
    p: int

    @property
    def r(self) -> int:
        return len(self.digits)


class CmpResult(BaseModel):
    """레인별 0/1 마스크"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    mask: Mask

    @property
    def depth(self) -> int:
        return self.mask.depth_used if isinstance(self.mask, WordCipher) else 0

    def bits(self, ctx: EvalContext) -> np.ndarray:
        ctx.check(self.mask)
        if isinstance(self.mask, BitCipher):
            return self.mask.bits[:, 0].astype(np.int64)
        return self.mask.slots.copy()


class _CipherOps:
    """PolyOps 백엔드: F_p 암호문 위 모듈러 연산"""

    def __init__(self, ctx: EvalContext):
        self.ctx = ctx

    def mul(self, a, b):
        return ct_mul(self.ctx, a, b, modular=True)

    def scale(self, a, c):
        return ct_mul_plain(self.ctx, a, c, modular=True)

    def add(self, a, b):
        return ct_add(self.ctx, a, b, modular=True)

    def add_const(self, a, c):
        return ct_add_plain(self.ctx, a, c, modular=True)


def _constant(ctx: EvalContext, like: WordCipher, value: int) -> WordCipher:
    # 자명한 암호문 (값이 상수인 다항식 결과)
    return ctx.encrypt(value, modulus=like.modulus).model_copy(update={"depth_used": like.depth_used})


def _eval_sign(ctx: EvalContext, x: WordCipher) -> WordCipher:
    """P(x): centered(x) < 0 이면 1"""
    poly = lagrange_sign_poly(x.p)
    part = paterson_stockmeyer(poly.coeffs, x, _CipherOps(ctx))
    if part.value is None:
        return _constant(ctx, x, part.const)
    if part.const:
        return ct_add_plain(ctx, part.value, part.const, modular=True)
    return part.value


def _one_minus(ctx: EvalContext, x: WordCipher, modular: bool = True) -> WordCipher:
    return ct_add_plain(ctx, ct_mul_plain(ctx, x, -1, modular=modular), 1, modular=modular)


def _mask01(c: WordCipher) -> WordCipher:
    return c.with_interval(0, 1)


def _check_field(*ciphers: WordCipher):
    for c in ciphers:
        if c.modulus != c.p or not is_prime(c.p) or c.p < 3:
            raise InvalidModulus(f"F_p 암호문이 필요합니다: modulus={c.modulus}")


def _is_zero_fermat(ctx: EvalContext, diff: WordCipher) -> WordCipher:
    """1 - diff^{p-1}: 깊이 ceil(log2(p-1))"""
    raised = power(diff, diff.p - 1, _CipherOps(ctx))
    return _mask01(_one_minus(ctx, raised))


def lt_interp(ctx: EvalContext, a: WordCipher, b: WordCipher) -> CmpResult:
    """
    F_p 위 a < b (a - b 의 중심 대표값이 음수인지)

    Raises:
        RangeViolation: 차이가 중심 창 [-(p-1)/2, (p-1)/2] 을 벗어날 수 있을 때
    """
    ctx.check(a, b)
    _check_field(a, b)
    half = (a.p - 1) // 2
    lo, hi = a.lo - b.hi, a.hi - b.lo
    if lo < -half or hi > half:
        raise RangeViolation(f"차이 구간 [{lo}, {hi}] 이 중심 창 ±{half} 을 벗어납니다")
    with ctx.counted("comparisons"):
        diff = ct_sub(ctx, a, b, modular=True)
        return CmpResult(mask=_mask01(_eval_sign(ctx, diff)))


def eq_fermat(ctx: EvalContext, a: WordCipher, b: WordCipher) -> CmpResult:
    """1 - (a-b)^{p-1} mod p (a = b 이면 1)"""
    ctx.check(a, b)
    _check_field(a, b)
    with ctx.counted("equalities"):
        diff = ct_sub(ctx, a, b, modular=True)
        return CmpResult(mask=_is_zero_fermat(ctx, diff))


# 자릿수 비교기
def _digit_lt(ctx: EvalContext, x: WordCipher, y: WordCipher) -> WordCipher:
    """
    전체 범위 [0, p) 자릿수의 x < y

    상위 절반 지시자 hx = P(x), hy = P(y) 로 두 값이 같은 절반에 있는지 판정하고,
    같은 절반이면 z = P(x - y) 가 정답이다. 깊이 dP + 2
    """
    hx = _eval_sign(ctx, x)
    hy = _eval_sign(ctx, y)
    z = _eval_sign(ctx, ct_sub(ctx, x, y, modular=True))
    hxy = ct_mul(ctx, hx, hy, modular=True)
    # e = 서로 다른 절반 = hx + hy - 2 hx hy
    e = ct_add(ctx, ct_add(ctx, hx, hy, modular=True), ct_mul_plain(ctx, hxy, -2, modular=True), modular=True)
    same = ct_mul(ctx, _one_minus(ctx, e), z, modular=True)
    # 다른 절반이면 y 가 상위 절반일 때만 x < y
    return ct_sub(ctx, ct_add(ctx, same, hy, modular=True), hxy, modular=True)


def _digit_lt_plain(ctx: EvalContext, x: WordCipher, y: np.ndarray) -> WordCipher:
    """y 가 평문인 자릿수 비교: hy 가 평문이라 깊이 dP + 1"""
    half = (x.p - 1) // 2
    hy = (y > half).astype(np.int64)
    hx = _eval_sign(ctx, x)
    z = _eval_sign(ctx, ct_add_plain(ctx, x, -y, modular=True))
    # e = hy ? 1 - hx : hx
    e = ct_add_plain(ctx, ct_mul_plain(ctx, hx, 1 - 2 * hy, modular=True), hy, modular=True)
    same = ct_mul(ctx, _one_minus(ctx, e), z, modular=True)
    # + hy * (1 - hx)
    cross = ct_add_plain(ctx, ct_mul_plain(ctx, hx, -hy, modular=True), hy, modular=True)
    return ct_add(ctx, same, cross, modular=True)


def _digit_eq(ctx: EvalContext, x: WordCipher, y: WordCipher) -> WordCipher:
    return _is_zero_fermat(ctx, ct_sub(ctx, x, y, modular=True))


def _digit_eq_plain(ctx: EvalContext, x: WordCipher, y: np.ndarray) -> WordCipher:
    return _is_zero_fermat(ctx, ct_add_plain(ctx, x, -y, modular=True))


def _lexicographic(ctx: EvalContext, n: int, lt_at, eq_at) -> WordCipher:
    """
    최상위 먼저 사전식 결합: LT = LT_hi + EQ_hi * LT_lo, EQ = EQ_hi * EQ_lo

    상위 묶음을 크게 나누는 이진 트리. 필요한 자릿수 동등만 계산한다.
    """
    eq_cache: dict[int, WordCipher] = {}

    def eq(i: int) -> WordCipher:
        if i not in eq_cache:
            eq_cache[i] = eq_at(i)
        return eq_cache[i]

    def merge(lo: int, hi: int, need_eq: bool):
        if hi - lo == 1:
            return lt_at(lo), (eq(lo) if need_eq else None)
        mid = lo + (hi - lo + 1) // 2
        lt_h, eq_h = merge(lo, mid, True)
        lt_l, eq_l = merge(mid, hi, need_eq)
        lt = ct_add(ctx, lt_h, ct_mul(ctx, eq_h, lt_l, modular=True), modular=True)
        return lt, (ct_mul(ctx, eq_h, eq_l, modular=True) if need_eq else None)

    lt, _ = merge(0, n, False)
    return _mask01(lt)


def _check_digits(ctx: EvalContext, a: DigitCipher, b: Optional[DigitCipher] = None):
    if b is not None and (a.p != b.p or a.r != b.r):
        raise RangeViolation(f"자릿수 파라미터 불일치: (p={a.p}, r={a.r}) vs (p={b.p}, r={b.r})")
    for d in a.digits + (b.digits if b is not None else []):
        ctx.check(d)
        if d.modulus != a.p:
            raise InvalidModulus(f"자릿수 암호문의 모듈러스가 p 가 아닙니다: {d.modulus}")


def lt_digits(ctx: EvalContext, a: DigitCipher, b: DigitCipher) -> CmpResult:
    """자릿수 암호문의 부호 없는 정수 비교 value(a) < value(b)"""
    _check_digits(ctx, a, b)
    with ctx.counted("comparisons"):
        mask = _lexicographic(
            ctx, a.r,
            lambda i: _digit_lt(ctx, a.digits[i], b.digits[i]),
            lambda i: _digit_eq(ctx, a.digits[i], b.digits[i]),
        )
        return CmpResult(mask=mask)


def _plain_digit_columns(ctx: EvalContext, k: PlainVector, p: int, r: int) -> list[np.ndarray]:
    vec = np.asarray(k, dtype=np.int64)
    if vec.ndim == 0:
        vec = np.full(ctx.slot_count, int(vec), dtype=np.int64)
    return [(vec // p ** i) % p for i in range(r - 1, -1, -1)]


def lt_digits_plain(ctx: EvalContext, a: DigitCipher, k: PlainVector) -> CmpResult:
    """value(a) < k (k 는 레인별 평문)"""
    _check_digits(ctx, a)
    cols = _plain_digit_columns(ctx, k, a.p, a.r)
    with ctx.counted("comparisons"):
        mask = _lexicographic(
            ctx, a.r,
            lambda i: _digit_lt_plain(ctx, a.digits[i], cols[i]),
            lambda i: _digit_eq_plain(ctx, a.digits[i], cols[i]),
        )
        return CmpResult(mask=mask)


def _and_tree(ctx: EvalContext, items: list[WordCipher]) -> WordCipher:
    while len(items) > 1:
        nxt = [ct_mul(ctx, items[i], items[i + 1], modular=True) for i in range(0, len(items) - 1, 2)]
        if len(items) % 2:
            nxt.append(items[-1])
        items = nxt
    return _mask01(items[0])


def eq_digits(ctx: EvalContext, a: DigitCipher, b: DigitCipher) -> CmpResult:
    _check_digits(ctx, a, b)
    with ctx.counted("equalities"):
        return CmpResult(mask=_and_tree(ctx, [_digit_eq(ctx, x, y) for x, y in zip(a.digits, b.digits)]))


def eq_digits_plain(ctx: EvalContext, a: DigitCipher, k: PlainVector) -> CmpResult:
    _check_digits(ctx, a)
    cols = _plain_digit_columns(ctx, k, a.p, a.r)
    with ctx.counted("equalities"):
        return CmpResult(mask=_and_tree(ctx, [_digit_eq_plain(ctx, x, y) for x, y in zip(a.digits, cols)]))


# XCMP (음순환 환의 단항식 인코딩)
def _ones(n: int, p: int):
    return nega_poly([1] * n, p)


def lt_xcmp(a: int, b: int, n: int, p: int) -> int:
    """
    T(X) * X^a * X^{-b} mod (X^n + 1) 의 상수항 부호

    Returns:
        +1 (a <= b) 또는 -1 (a > b)
    """
    if not (0 <= a < n and 0 <= b < n):
        raise DomainTooLarge(f"XCMP 입력은 [0, {n}) 범위여야 합니다: a={a}, b={b}")
    # 암호문끼리 곱 1회, T 와의 곱은 평문 곱
    ct = nega_mul(monomial(a, n, p), monomial(-b, n, p))
    c = nega_mul(_ones(n, p), ct)
    return 1 if centered(c.coeffs[0], p) > 0 else -1


def xcmp_le(a: int, b: int, n: int, p: int) -> int:
    """XCMP 결과를 a <= b 비트로 변환"""
    return 1 if lt_xcmp(a, b, n, p) == 1 else 0


def lt_xcmp_wide(a: int, b: int, n: int, p: int) -> tuple[int, EvalCount]:
    """
    [0, n^2) 정의역 비교: 두 자리 (n 진법) 사전식 결합

    LT = [a1 < b1] + EQ(a1, b1) * [a0 < b0], 동등은 eq_fermat 로 계산
    반환: (a < b 비트, 연산 카운트)
    """
    if not (0 <= a < n * n and 0 <= b < n * n):
        raise DomainTooLarge(f"확장 XCMP 입력은 [0, {n * n}) 범위여야 합니다: a={a}, b={b}")
    if p <= n or not is_prime(p):
        raise InvalidModulus(f"자릿수 동등 판정에는 n({n}) 보다 큰 소수 p 가 필요합니다: {p}")
    a1, a0 = divmod(a, n)
    b1, b0 = divmod(b, n)
    ops = ScalarOps(p)
    # XCMP 한 번 = 환 곱셈 1회 (깊이 1); a < b 는 1 - [b <= a]
    lt_hi = (1 - xcmp_le(b1, a1, n, p), 1)
    lt_lo = (1 - xcmp_le(b0, a0, n, p), 1)
    ops.nonscalar_mults += 2
    ops.additions += 2
    eq_raised = power(((a1 - b1) % p, 0), p - 1, ops)
    eq_hi = ops.add_const(ops.scale(eq_raised, -1), 1)
    guarded = ops.mul(eq_hi, lt_lo)
    value, depth = ops.add(lt_hi, guarded)
    count = EvalCount(
        nonscalar_mults=ops.nonscalar_mults,
        scalar_mults=ops.scalar_mults,
        additions=ops.additions,
        depth=depth,
    )
    return value % p, count


# 비트 단위 비교 회로
def _bit_lt_column(ctx: EvalContext, a: BitCipher, b: BitCipher) -> np.ndarray:
    """LSB 부터 누적: lt_i = (~a_i & b_i) | (eq_i & lt_{i-1}), 4w-3 게이트"""
    lt = bit_gate(ctx, GateOp.AND, bit_gate(ctx, GateOp.NOT, a.bits[:, 0]), b.bits[:, 0])
    for i in range(1, a.width):
        x, y = a.bits[:, i], b.bits[:, i]
        gt = bit_gate(ctx, GateOp.AND, bit_gate(ctx, GateOp.NOT, x), y)
        same = bit_gate(ctx, GateOp.NOT, bit_gate(ctx, GateOp.XOR, x, y))
        lt = bit_gate(ctx, GateOp.OR, gt, bit_gate(ctx, GateOp.AND, same, lt))
    return lt


def _bit_eq_column(ctx: EvalContext, a: BitCipher, b: BitCipher) -> np.ndarray:
    """XNOR 후 AND 트리, 2w-1 게이트"""
    items = [bit_gate(ctx, GateOp.NOT, bit_gate(ctx, GateOp.XOR, a.bits[:, i], b.bits[:, i]))
             for i in range(a.width)]
    while len(items) > 1:
        nxt = [bit_gate(ctx, GateOp.AND, items[i], items[i + 1]) for i in range(0, len(items) - 1, 2)]
        if len(items) % 2:
            nxt.append(items[-1])
        items = nxt
    return items[0]


def _check_bits(ctx: EvalContext, a: BitCipher, b: BitCipher):
    ctx.check(a, b)
    if a.width != b.width:
        raise WidthMismatch(f"비트 폭 불일치: {a.width} != {b.width}")
    if a.lanes != b.lanes:
        raise WidthMismatch(f"레인 수 불일치: {a.lanes} != {b.lanes}")


def bit_lt(ctx: EvalContext, a: BitCipher, b: BitCipher) -> CmpResult:
    _check_bits(ctx, a, b)
    with ctx.counted("comparisons"):
        return CmpResult(mask=bit_mask(ctx, _bit_lt_column(ctx, a, b), a.width))


def bit_eq(ctx: EvalContext, a: BitCipher, b: BitCipher) -> CmpResult:
    _check_bits(ctx, a, b)
    with ctx.counted("equalities"):
        return CmpResult(mask=bit_mask(ctx, _bit_eq_column(ctx, a, b), a.width))


# 방식 디스패치 파사드
def _check_unsigned(ctx: EvalContext, *ciphers: WordCipher):
    """비교 피연산자 구간이 [0, M-1] 안에 있어야 정수 비교가 의미를 가짐"""
    for c in ciphers:
        if c.lo < 0 or c.hi > c.modulus - 1:
            raise RangeViolation(
                f"비교 피연산자 구간 [{c.lo}, {c.hi}] 이 [0, {c.modulus - 1}] 을 벗어납니다"
            )


def _check_plain_unsigned(ctx: EvalContext, k: PlainVector, bound: int) -> np.ndarray:
    vec = np.asarray(k, dtype=np.int64)
    if vec.ndim == 0:
        vec = np.full(ctx.slot_count, int(vec), dtype=np.int64)
    if vec.size and (vec.min() < 0 or vec.max() > bound):
        raise RangeViolation(f"평문 피연산자가 [0, {bound}] 을 벗어납니다")
    return vec


def _digit_count(c: WordCipher, ctx: EvalContext, *others: int) -> int:
    """구간이 보장하는 최소 자릿수"""
    top = max([c.hi, *others, 1])
    count = 1
    while ctx.p ** count <= top:
        count += 1
    return min(count, ctx.r)


def _switched_mask(ctx: EvalContext, column: np.ndarray, like: WordCipher) -> WordCipher:
    return switch_to_word(ctx, bit_mask(ctx, column, switch_width(ctx)), like)


def compare(ctx: EvalContext, a: Mask, b: Mask) -> CmpResult:
    """레인별 a < b (부호 없는 정수), 방식별 경로로 디스패치"""
    with ctx.counted("comparisons"):
        if ctx.method is Method.TFHE:
            return bit_lt(ctx, a, b)
        _check_unsigned(ctx, a, b)
        if ctx.method is Method.SCHEME:
            xa, xb = switch_to_bits(ctx, a, b)
            like = a if a.depth_used >= b.depth_used else b
            return CmpResult(mask=_switched_mask(ctx, _bit_lt_column(ctx, xa, xb), like))
        if ctx.method is Method.ENCODING:
            count = _digit_count(a, ctx, b.hi)
            da = DigitCipher(digits=reduce_to_digits(ctx, a, count), p=ctx.p)
            db = DigitCipher(digits=reduce_to_digits(ctx, b, count), p=ctx.p)
            return CmpResult(mask=_mask01(lift_from_digit(ctx, lt_digits(ctx, da, db).mask)))
    raise UnsupportedMethod(f"지원하지 않는 방식입니다: {ctx.method}")


def compare_plain(ctx: EvalContext, a: Mask, k: PlainVector) -> CmpResult:
    """레인별 a < k (k 는 평문)"""
    with ctx.counted("comparisons"):
        if ctx.method is Method.TFHE:
            vec = _check_plain_unsigned(ctx, np.broadcast_to(k, (a.lanes,)), (1 << a.width) - 1)
            return bit_lt(ctx, a, ctx.encrypt_bits(vec, a.width))
        _check_unsigned(ctx, a)
        vec = _check_plain_unsigned(ctx, k, ctx.modulus - 1)
        if ctx.method is Method.SCHEME:
            (xa,) = switch_to_bits(ctx, a)
            kb = ctx.encrypt_bits(vec, xa.width)
            return CmpResult(mask=_switched_mask(ctx, _bit_lt_column(ctx, xa, kb), a))
        if ctx.method is Method.ENCODING:
            count = _digit_count(a, ctx, int(vec.max()))
            da = DigitCipher(digits=reduce_to_digits(ctx, a, count), p=ctx.p)
            return CmpResult(mask=_mask01(lift_from_digit(ctx, lt_digits_plain(ctx, da, vec).mask)))
    raise UnsupportedMethod(f"지원하지 않는 방식입니다: {ctx.method}")


def equal(ctx: EvalContext, a: Mask, b: Mask) -> CmpResult:
    """레인별 a == b"""
    with ctx.counted("equalities"):
        if ctx.method is Method.TFHE:
            return bit_eq(ctx, a, b)
        _check_unsigned(ctx, a, b)
        if ctx.method is Method.SCHEME:
            xa, xb = switch_to_bits(ctx, a, b)
            like = a if a.depth_used >= b.depth_used else b
            return CmpResult(mask=_switched_mask(ctx, _bit_eq_column(ctx, xa, xb), like))
        if ctx.method is Method.ENCODING:
            count = _digit_count(a, ctx, b.hi)
            da = DigitCipher(digits=reduce_to_digits(ctx, a, count), p=ctx.p)
            db = DigitCipher(digits=reduce_to_digits(ctx, b, count), p=ctx.p)
            return CmpResult(mask=_mask01(lift_from_digit(ctx, eq_digits(ctx, da, db).mask)))
    raise UnsupportedMethod(f"지원하지 않는 방식입니다: {ctx.method}")


def equal_plain(ctx: EvalContext, a: Mask, k: PlainVector) -> CmpResult:
    """레인별 a == k (k 는 평문)"""
    with ctx.counted("equalities"):
        if ctx.method is Method.TFHE:
            vec = _check_plain_unsigned(ctx, np.broadcast_to(k, (a.lanes,)), (1 << a.width) - 1)
            return bit_eq(ctx, a, ctx.encrypt_bits(vec, a.width))
        _check_unsigned(ctx, a)
        vec = _check_plain_unsigned(ctx, k, ctx.modulus - 1)
        if ctx.method is Method.SCHEME:
            (xa,) = switch_to_bits(ctx, a)
            kb = ctx.encrypt_bits(vec, xa.width)
            return CmpResult(mask=_switched_mask(ctx, _bit_eq_column(ctx, xa, kb), a))
        if ctx.method is Method.ENCODING:
            count = _digit_count(a, ctx, int(vec.max()))
            da = DigitCipher(digits=reduce_to_digits(ctx, a, count), p=ctx.p)
            return CmpResult(mask=_mask01(lift_from_digit(ctx, eq_digits_plain(ctx, da, vec).mask)))
    raise UnsupportedMethod(f"지원하지 않는 방식입니다: {ctx.method}")


def is_zero(ctx: EvalContext, a: Mask) -> CmpResult:
    """레인별 a == 0 (비트 방식은 OR 트리 + NOT, w-1 게이트)"""
    if ctx.method is not Method.TFHE:
        return equal_plain(ctx, a, 0)
    ctx.check(a)
    with ctx.counted("equalities"):
        items = [a.bits[:, i] for i in range(a.width)]
        while len(items) > 1:
            nxt = [bit_gate(ctx, GateOp.OR, items[i], items[i + 1]) for i in range(0, len(items) - 1, 2)]
            if len(items) % 2:
                nxt.append(items[-1])
            items = nxt
        return CmpResult(mask=bit_mask(ctx, bit_gate(ctx, GateOp.NOT, items[0]), a.width))


def mask_not(ctx: EvalContext, m: CmpResult) -> CmpResult:
    """1 - m (비트 방식은 NOT 이라 무료)"""
    if isinstance(m.mask, BitCipher):
        column = bit_gate(ctx, GateOp.NOT, m.mask.bits[:, 0])
        return CmpResult(mask=bit_mask(ctx, column, m.mask.width))
    return CmpResult(mask=_mask01(_one_minus(ctx, m.mask, modular=False)))


def less_equal(ctx: EvalContext, a: Mask, b: Mask) -> CmpResult:
    return mask_not(ctx, compare(ctx, b, a))


def greater(ctx: EvalContext, a: Mask, b: Mask) -> CmpResult:
    return compare(ctx, b, a)


def greater_equal(ctx: EvalContext, a: Mask, b: Mask) -> CmpResult:
    return mask_not(ctx, compare(ctx, a, b))


def _scratch(method: Method, p: int, r: int, b: int) -> EvalContext:
    profile = MethodProfile(method=method, depth_budget=10_000, allow_refresh=False)
    return EvalContext(profile, p, r, b, slot_count=1)


@lru_cache(maxsize=64)
def measure_compare_depth(method: Method, p: int, r: int, b: int, plain: bool = False) -> int:
    """
    입력 깊이 0 에서 비교 한 번이 소모하는 레벨 (별도 컨텍스트에서 측정)

    인코딩 전환의 변환 깊이는 레벨 미터에 포함하지 않는다.
    """
    if method is Method.TFHE:
        return 0
    ctx = _scratch(method, p, r, b)
    top = p ** r - 1
    a = ctx.encrypt(0, lo=0, hi=top)
    if plain:
        return compare_plain(ctx, a, top).depth
    return compare(ctx, a, ctx.encrypt(0, lo=0, hi=top)).depth


@lru_cache(maxsize=64)
def measure_equal_depth(method: Method, p: int, r: int, b: int, value_max: Optional[int] = None) -> int:
    """입력 깊이 0 에서 평문 동등 판정 한 번이 소모하는 레벨"""
    if method is Method.TFHE:
        return 0
    ctx = _scratch(method, p, r, b)
    top = p ** r - 1 if value_max is None else value_max
    return equal_plain(ctx, ctx.encrypt(0, lo=0, hi=top), 0).depth


def lt_digits_depth_bound(p: int, r: int, b: int) -> int:
    """사전식 자릿수 비교 깊이 상한: ceil(log2 log_p 2^b) + ceil(log2(p-1)) + 4"""
    digits = int(np.ceil(b / np.log2(p)))
    return max(0, (digits - 1).bit_length()) + max(0, (p - 2).bit_length()) + 4


def plain_digits(values: Sequence[int], p: int, r: int) -> list[DigitVec]:
    return [DigitVec.of(int(v), p, r) for v in values]
