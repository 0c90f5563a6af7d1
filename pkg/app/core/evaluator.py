"""
방식 독립 레인 벡터 연산

워크로드와 응용은 Evaluator 만 사용한다. 워드 방식은 레인 = SIMD 슬롯,
비트 방식은 레인 = 독립 암호문 묶음(BitCipher 의 행)이다.
"""
from typing import Optional

import numpy as np

from app.core import compare as cmp
from app.core.emulator import (
    BitCipher,
    Cipher,
    EvalContext,
    PlainVector,
    bit_add,
    bit_bound,
    bit_gate,
    bit_mask,
    bit_mask_mul,
    bit_mul,
    bit_select,
    bit_sub,
    ct_add,
    ct_add_plain,
    ct_broadcast,
    ct_mul,
    ct_mul_plain,
    ct_relabel,
    ct_sub,
    ct_sum_slots,
    ensure_headroom,
)
from app.domain.schemas import GateOp, Method


def _hull(*pairs: tuple[int, int]) -> tuple[int, int]:
    return min(lo for lo, _ in pairs), max(hi for _, hi in pairs)


class Evaluator:
    """EvalContext 위의 방식 독립 연산 집합"""

    def __init__(self, ctx: EvalContext):
        self.ctx = ctx
        self.bitwise = ctx.method is Method.TFHE

    @property
    def method(self) -> Method:
        return self.ctx.method

    @property
    def value_max(self) -> int:
        """정수 의미가 유지되는 최대 평문 값"""
        return (1 << self.ctx.b) - 1 if self.bitwise else self.ctx.modulus - 1

    @property
    def inf(self) -> int:
        """INF 센티널: 두 INF 의 합도 감기지 않는 값"""
        return self.value_max // 2

    @property
    def compare_depth(self) -> int:
        return cmp.measure_compare_depth(self.method, self.ctx.p, self.ctx.r, self.ctx.b)

    def _bits_of(self, c: BitCipher, column: np.ndarray) -> BitCipher:
        return bit_mask(self.ctx, column, c.width)

    # 암호화 / 복호화
    def encrypt(self, values: PlainVector, lo: Optional[int] = None, hi: Optional[int] = None) -> Cipher:
        if self.bitwise:
            return self.ctx.encrypt_bits(values, hi=hi)
        return self.ctx.encrypt(values, lo=lo, hi=hi)

    def decrypt(self, c: Cipher) -> np.ndarray:
        return self.ctx.decrypt(c)

    def lanes(self, c: Cipher) -> int:
        return c.lanes if isinstance(c, BitCipher) else c.slot_count

    # 선형 연산
    def add(self, a: Cipher, b: Cipher) -> Cipher:
        if self.bitwise:
            return bit_add(self.ctx, a, b)
        return ct_add(self.ctx, a, b)

    def sub(self, a: Cipher, b: Cipher) -> Cipher:
        if self.bitwise:
            return bit_sub(self.ctx, a, b)
        return ct_sub(self.ctx, a, b)

    def mul(self, a: Cipher, b: Cipher) -> Cipher:
        if self.bitwise:
            return bit_mul(self.ctx, a, b)
        return ct_mul(self.ctx, a, b)

    def add_disjoint(self, a: Cipher, b: Cipher, lo: int, hi: int) -> Cipher:
        """레인마다 한쪽만 0 이 아닌 두 값의 합: 결과 구간을 [lo, hi] 로 지정"""
        if self.bitwise:
            return bit_add(self.ctx, a.with_bound(None), b.with_bound(None)).with_bound(hi)
        return ct_relabel(self.ctx, ct_add(self.ctx, a, b, modular=True), lo, hi)

    def add_plain(self, a: Cipher, k: PlainVector) -> Cipher:
        if self.bitwise:
            # 자명한 암호문과의 덧셈도 게이트를 거친다
            vec = np.broadcast_to(np.asarray(k, dtype=np.int64), (a.lanes,))
            return bit_add(self.ctx, a, self.ctx.encrypt_bits(vec, a.width))
        return ct_add_plain(self.ctx, a, k)

    def mul_plain(self, a: Cipher, k: PlainVector) -> Cipher:
        if self.bitwise:
            vec = np.broadcast_to(np.asarray(k, dtype=np.int64), (a.lanes,))
            return bit_mul(self.ctx, a, self.ctx.encrypt_bits(vec, a.width))
        return ct_mul_plain(self.ctx, a, k)

    # 비선형 연산 (0/1 마스크 반환)
    def less_than(self, a: Cipher, b: Cipher) -> Cipher:
        return cmp.compare(self.ctx, a, b).mask

    def less_than_plain(self, a: Cipher, k: PlainVector) -> Cipher:
        return cmp.compare_plain(self.ctx, a, k).mask

    def equal(self, a: Cipher, b: Cipher) -> Cipher:
        return cmp.equal(self.ctx, a, b).mask

    def equal_plain(self, a: Cipher, k: PlainVector) -> Cipher:
        return cmp.equal_plain(self.ctx, a, k).mask

    def is_zero(self, a: Cipher) -> Cipher:
        return cmp.is_zero(self.ctx, a).mask

    # 마스크 연산
    def mask_mul(self, m: Cipher, x: Cipher) -> Cipher:
        """m * x (m 은 0/1)"""
        self.ctx.ledger.masked_mults += 1
        if self.bitwise:
            return bit_mask_mul(self.ctx, m, x)
        out = ct_mul(self.ctx, m, x)
        return out.with_interval(*_hull((0, 0), (x.lo, x.hi)))

    def select(self, m: Cipher, x: Cipher, y: Cipher) -> Cipher:
        """m ? x : y = y + m * (x - y)"""
        self.ctx.ledger.masked_mults += 1
        if self.bitwise:
            return bit_select(self.ctx, m, x, y)
        out = ct_add(self.ctx, y, ct_mul(self.ctx, m, ct_sub(self.ctx, x, y, modular=True), modular=True),
                     modular=True)
        return out.with_interval(*_hull((x.lo, x.hi), (y.lo, y.hi)))

    def select_min(self, m: Cipher, x: Cipher, y: Cipher) -> Cipher:
        """m = [x < y] 일 때 min(x, y): 구간은 [min lo, min hi]"""
        out = self.select(m, x, y)
        if self.bitwise:
            return out.with_bound(None if x.hi is None or y.hi is None else min(x.hi, y.hi))
        return out.with_interval(min(x.lo, y.lo), min(x.hi, y.hi))

    def mask_and(self, m1: Cipher, m2: Cipher) -> Cipher:
        if self.bitwise:
            return self._bits_of(m1, bit_gate(self.ctx, GateOp.AND, m1.bits[:, 0], m2.bits[:, 0]))
        return ct_mul(self.ctx, m1, m2).with_interval(0, 1)

    def mask_or(self, m1: Cipher, m2: Cipher) -> Cipher:
        if self.bitwise:
            return self._bits_of(m1, bit_gate(self.ctx, GateOp.OR, m1.bits[:, 0], m2.bits[:, 0]))
        both = ct_mul(self.ctx, m1, m2, modular=True)
        return ct_sub(self.ctx, ct_add(self.ctx, m1, m2, modular=True), both, modular=True).with_interval(0, 1)

    def mask_not(self, m: Cipher) -> Cipher:
        return cmp.mask_not(self.ctx, cmp.CmpResult(mask=m)).mask

    def mask_flip(self, m: Cipher, flip: PlainVector) -> Cipher:
        """평문 0/1 벡터 flip 이 1 인 레인만 반전 (레벨 소모 없음)"""
        vec = np.asarray(flip, dtype=np.int64)
        if self.bitwise:
            vec = np.broadcast_to(vec, (m.lanes,))
            column = np.where(vec == 1, bit_gate(self.ctx, GateOp.NOT, m.bits[:, 0]), m.bits[:, 0])
            return self._bits_of(m, column)
        flipped = ct_add_plain(self.ctx, ct_mul_plain(self.ctx, m, 1 - 2 * vec, modular=True), vec, modular=True)
        return flipped.with_interval(0, 1)

    def mask_scale(self, m: Cipher, k: PlainVector) -> Cipher:
        """0/1 마스크 * 평문 (비트 방식은 배선만 바뀌므로 무료)"""
        vec = np.asarray(k, dtype=np.int64)
        if self.bitwise:
            vec = np.broadcast_to(vec, (m.lanes,))
            bits = (m.bits[:, :1] & ((vec[:, None] >> np.arange(m.width, dtype=np.int64)) & 1)).astype(np.uint8)
            return BitCipher(bits=bits, width=m.width, ctx_id=self.ctx.uid, hi=max(0, int(vec.max())))
        out = ct_mul_plain(self.ctx, m, vec)
        return out.with_interval(min(0, int(vec.min())), max(0, int(vec.max())))

    # 슬롯 / 레인 이동
    def broadcast(self, a: Cipher, idx: int) -> Cipher:
        """레인 idx 값을 모든 레인으로 복제"""
        if self.bitwise:
            # 암호문 복사는 게이트가 필요 없음
            return BitCipher(bits=np.repeat(a.bits[idx:idx + 1], a.lanes, axis=0), width=a.width, ctx_id=a.ctx_id,
                             hi=a.hi)
        return ct_broadcast(self.ctx, a, idx)

    def sum_lanes(self, a: Cipher, lo: Optional[int] = None, hi: Optional[int] = None) -> Cipher:
        """전체 레인 합을 모든 레인에 (워드: 회전-덧셈, 비트: 덧셈기 트리)"""
        if self.bitwise:
            rows = [BitCipher(bits=a.bits[i:i + 1], width=a.width, ctx_id=a.ctx_id) for i in range(a.lanes)]
            while len(rows) > 1:
                nxt = [bit_add(self.ctx, rows[i], rows[i + 1]) for i in range(0, len(rows) - 1, 2)]
                if len(rows) % 2:
                    nxt.append(rows[-1])
                rows = nxt
            if hi is None and a.hi is not None:
                hi = a.lanes * a.hi
            hi, overflow = bit_bound(self.ctx, hi, a.width)
            return BitCipher(bits=np.repeat(rows[0].bits, a.lanes, axis=0), width=a.width, ctx_id=a.ctx_id,
                             hi=hi, overflow=overflow or a.overflow)
        n = a.slot_count
        out = ct_sum_slots(self.ctx, a)
        lo = n * a.lo if lo is None else lo
        hi = n * a.hi if hi is None else hi
        return ct_relabel(self.ctx, out, lo, hi)

    def ensure_headroom(self, a: Cipher, levels: int) -> Cipher:
        return ensure_headroom(self.ctx, a, levels)
