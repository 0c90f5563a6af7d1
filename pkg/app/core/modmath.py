"""
모듈 설명:
    - F_p / Z_{p^r} 정수 연산, 라그랑주 보간, Paterson-Stockmeyer 다항식 평가
주요 기능:
    - mod_inv, centered : 역원과 중심 대표값
    - lagrange_interpolate, lagrange_sign_poly, eq_poly : 비교용 보간 다항식
    - paterson_stockmeyer, power : 연산 백엔드(PolyOps)에 독립적인 평가 스케줄
    - eval_poly_ps : 스칼라 백엔드로 평가하고 EvalCount 반환

모든 함수는 불변 값만 다루므로 스레드 안전하다.
"""
from functools import lru_cache
from math import gcd, isqrt
from typing import Generic, Optional, Protocol, Sequence, TypeVar

from app.domain.errors import InvalidModulus, NotInvertible
from app.domain.schemas import EvalCount, SignPoly

V = TypeVar("V")


class PolyOps(Protocol[V]):
    """다항식 평가에 필요한 최소 연산 집합"""

    def mul(self, a: V, b: V) -> V: ...          # 비스칼라 곱셈 (깊이 +1)
    def scale(self, a: V, c: int) -> V: ...      # 평문 상수 곱
    def add(self, a: V, b: V) -> V: ...
    def add_const(self, a: V, c: int) -> V: ...


def is_prime(n: int) -> bool:
    """결정적 소수 판정 (작은 범위 시행 나눗셈)"""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def mod_inv(a: int, p: int) -> int:
    """a^{-1} mod p"""
    a %= p
    if a == 0 or gcd(a, p) != 1:
        raise NotInvertible(f"{a}는 mod {p}에서 역원이 없습니다")
    return pow(a, -1, p)


def centered(x: int, m: int) -> int:
    """[0, m) 원소의 중심 대표값 (-(m-1)/2 .. (m-1)/2)"""
    return x if x <= (m - 1) // 2 else x - m


def to_digits(value: int, p: int, r: int) -> list[int]:
    """base-p 자릿수 (최상위 자리 먼저)"""
    digits = []
    for _ in range(r):
        digits.append(value % p)
        value //= p
    return digits[::-1]


def from_digits(digits: Sequence[int], p: int) -> int:
    value = 0
    for d in digits:
        value = value * p + d
    return value


def _check_prime_field(p: int):
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise InvalidModulus(f"홀수 소수 모듈러스가 필요합니다: {p}")


def lagrange_interpolate(points: Sequence[tuple[int, int]], p: int) -> tuple[int, ...]:
    """
    주어진 (x, y) 점들을 지나는 F_p 위 다항식 계수 (오름차순)

    마스터 다항식 M(x) = Π(x - x_i)를 한 번 만들고 (x - x_i)로 조립제법 나눗셈
    """
    _check_prime_field(p)
    xs = [x % p for x, _ in points]
    if len(set(xs)) != len(xs):
        raise ValueError("보간 노드가 중복되었습니다")

    master = [1]
    for xi in xs:
        nxt = [0] * (len(master) + 1)
        for i, c in enumerate(master):
            nxt[i + 1] = (nxt[i + 1] + c) % p
            nxt[i] = (nxt[i] - xi * c) % p
        master = nxt

    coeffs = [0] * len(xs)
    for xi, yi in zip(xs, (y % p for _, y in points)):
        if yi == 0:
            continue
        # M(x) / (x - xi), 최고차부터
        quotient = [0] * (len(master) - 1)
        carry = 0
        for deg in range(len(master) - 1, 0, -1):
            carry = (master[deg] + carry * xi) % p
            quotient[deg - 1] = carry
        denom = 0
        for c in reversed(quotient):
            denom = (denom * xi + c) % p
        factor = yi * mod_inv(denom, p) % p
        for i, c in enumerate(quotient):
            coeffs[i] = (coeffs[i] + factor * c) % p

    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@lru_cache(maxsize=64)
def lagrange_sign_poly(p: int) -> SignPoly:
    """P(x) = 1 (centered(x) < 0), 0 (그 외)"""
    _check_prime_field(p)
    points = [(x, 1 if centered(x, p) < 0 else 0) for x in range(p)]
    return SignPoly(p=p, coeffs=lagrange_interpolate(points, p))


@lru_cache(maxsize=64)
def eq_poly(p: int) -> SignPoly:
    """x = 0 지시 다항식 (= 1 - x^{p-1})"""
    _check_prime_field(p)
    points = [(x, 1 if x == 0 else 0) for x in range(p)]
    return SignPoly(p=p, coeffs=lagrange_interpolate(points, p))


def eval_poly_horner(poly: SignPoly, x: int) -> int:
    acc = 0
    for c in reversed(poly.coeffs):
        acc = (acc * x + c) % poly.p
    return acc


class Partial(Generic[V]):
    """부분 결과: value(암호문 부분, 없으면 None) + const"""
    __slots__ = ("value", "const")

    def __init__(self, value: Optional[V], const: int):
        self.value = value
        self.const = const


def _baby_powers(x: V, k: int, ops: PolyOps[V]) -> dict[int, V]:
    # x^j = x^{j//2} * x^{(j+1)//2} : 깊이 ceil(log2 j)
    pw = {1: x}
    for j in range(2, k + 1):
        pw[j] = ops.mul(pw[j // 2], pw[(j + 1) // 2])
    return pw


def paterson_stockmeyer(coeffs: Sequence[int], x: V, ops: PolyOps[V]) -> Partial[V]:
    """
    baby-step k = ceil(sqrt(deg+1)), 블록을 2의 거듭제곱 단위로 재귀 분할

    비스칼라 곱셈 <= 2k + ceil(log2(deg+1)), 깊이 <= ceil(log2 k) + ceil(log2 m)
    """
    coeffs = list(coeffs)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    n_coeffs = len(coeffs)
    if n_coeffs == 1:
        return Partial(None, coeffs[0])

    k = isqrt(n_coeffs - 1) + 1     # ceil(sqrt(n_coeffs))
    blocks_raw = [coeffs[i:i + k] for i in range(0, n_coeffs, k)]
    top = k if len(blocks_raw) > 1 else n_coeffs - 1
    pw = _baby_powers(x, top, ops)

    def block(cs: list[int]) -> Partial[V]:
        acc = None
        for i, c in enumerate(cs[1:], start=1):
            if c == 0:
                continue
            term = pw[i] if c == 1 else ops.scale(pw[i], c)
            acc = term if acc is None else ops.add(acc, term)
        return Partial(acc, cs[0])

    giants: dict[int, V] = {}

    def giant(t: int) -> V:
        # x^{k * 2^t}
        if t not in giants:
            giants[t] = pw[k] if t == 0 else ops.mul(giant(t - 1), giant(t - 1))
        return giants[t]

    def combine(parts: list[Partial[V]]) -> Partial[V]:
        if len(parts) == 1:
            return parts[0]
        h = 1 << ((len(parts) - 1).bit_length() - 1)
        low, high = combine(parts[:h]), combine(parts[h:])
        g = giant(h.bit_length() - 1)
        prod = None
        if high.value is not None:
            prod = ops.mul(g, high.value)
        if high.const:
            term = g if high.const == 1 else ops.scale(g, high.const)
            prod = term if prod is None else ops.add(prod, term)
        if prod is None:
            return low
        value = prod if low.value is None else ops.add(low.value, prod)
        return Partial(value, low.const)

    return combine([block(cs) for cs in blocks_raw])


def power(x: V, e: int, ops: PolyOps[V]) -> V:
    """x^e (e >= 1), 제곱 연쇄 후 하위 비트 누적: 깊이 ceil(log2 e)"""
    if e < 1:
        raise ValueError(f"지수는 1 이상이어야 합니다: {e}")
    squares = [x]
    for _ in range(e.bit_length() - 1):
        squares.append(ops.mul(squares[-1], squares[-1]))
    acc = None
    for i in range(e.bit_length() - 1):
        if e >> i & 1:
            acc = squares[i] if acc is None else ops.mul(acc, squares[i])
    top = squares[-1]
    return top if acc is None else ops.mul(acc, top)


class ScalarOps:
    """평문 스칼라 백엔드: 값 (v, depth) 와 연산 카운트"""

    def __init__(self, p: int):
        self.p = p
        self.nonscalar_mults = 0
        self.scalar_mults = 0
        self.additions = 0

    def mul(self, a, b):
        self.nonscalar_mults += 1
        return (a[0] * b[0] % self.p, max(a[1], b[1]) + 1)

    def scale(self, a, c):
        self.scalar_mults += 1
        return (a[0] * c % self.p, a[1])

    def add(self, a, b):
        self.additions += 1
        return ((a[0] + b[0]) % self.p, max(a[1], b[1]))

    def add_const(self, a, c):
        self.additions += 1
        return ((a[0] + c) % self.p, a[1])


def eval_poly_ps(poly: SignPoly, x: int) -> tuple[int, EvalCount]:
    """Paterson-Stockmeyer 스케줄로 poly(x) mod p 평가"""
    ops = ScalarOps(poly.p)
    part = paterson_stockmeyer(poly.coeffs, (x % poly.p, 0), ops)
    if part.value is None:
        value, depth = part.const % poly.p, 0
    elif part.const:
        value, depth = ops.add_const(part.value, part.const)
    else:
        value, depth = part.value
    count = EvalCount(
        nonscalar_mults=ops.nonscalar_mults,
        scalar_mults=ops.scalar_mults,
        additions=ops.additions,
        depth=depth,
    )
    return value, count
