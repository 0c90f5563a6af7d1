"""
음순환 다항식 환 Z_p[x]/(x^n + 1) 연산
XCMP 비교(단항식 인코딩)에서 평문 수학으로 사용한다.

schoolbook 곱셈이 기준 구현이고, p ≡ 1 (mod 2n) 일 때만 NTT 경로를 사용한다.
두 경로는 코드를 공유하지 않는다.
"""
from functools import lru_cache

from app.domain.errors import ExponentOutOfRange, MismatchedRing
from app.domain.schemas import NegaPoly


def nega_poly(coeffs, p: int) -> NegaPoly:
    """정수 계수(음수 허용)로 NegaPoly 생성"""
    coeffs = tuple(int(c) % p for c in coeffs)
    return NegaPoly(p=p, n=len(coeffs), coeffs=coeffs)


def one(n: int, p: int) -> NegaPoly:
    return nega_poly([1] + [0] * (n - 1), p)


def _check_ring(a: NegaPoly, b: NegaPoly):
    if a.p != b.p or a.n != b.n:
        raise MismatchedRing(f"링 불일치: (p={a.p}, n={a.n}) vs (p={b.p}, n={b.n})")


def monomial(e: int, n: int, p: int) -> NegaPoly:
    """X^e, 음수 지수는 X^{-b} = -X^{n-b}"""
    if abs(e) >= n:
        raise ExponentOutOfRange(f"|{e}| >= n({n})")
    coeffs = [0] * n
    if e >= 0:
        coeffs[e] = 1
    else:
        coeffs[n + e] = p - 1
    return NegaPoly(p=p, n=n, coeffs=tuple(coeffs))


def nega_add(a: NegaPoly, b: NegaPoly) -> NegaPoly:
    _check_ring(a, b)
    return NegaPoly(p=a.p, n=a.n, coeffs=tuple((x + y) % a.p for x, y in zip(a.coeffs, b.coeffs)))


def nega_mul_schoolbook(a: NegaPoly, b: NegaPoly) -> NegaPoly:
    """기준 구현: x^n = -1 로 감기는 schoolbook 합성곱"""
    _check_ring(a, b)
    n, p = a.n, a.p
    out = [0] * n
    for i, ai in enumerate(a.coeffs):
        if ai == 0:
            continue
        for j, bj in enumerate(b.coeffs):
            k = i + j
            if k < n:
                out[k] += ai * bj
            else:
                out[k - n] -= ai * bj
    return NegaPoly(p=p, n=n, coeffs=tuple(c % p for c in out))


def ntt_supported(n: int, p: int) -> bool:
    return (p - 1) % (2 * n) == 0


@lru_cache(maxsize=32)
def _psi(n: int, p: int) -> int:
    """원시 2n차 단위근 (psi^n = -1)"""
    for g in range(2, p):
        psi = pow(g, (p - 1) // (2 * n), p)
        if pow(psi, n, p) == p - 1:
            return psi
    raise ValueError(f"2n차 단위근이 없습니다: n={n}, p={p}")


@lru_cache(maxsize=32)
def _ntt_tables(n: int, p: int):
    psi = _psi(n, p)
    fwd = [[pow(psi, (2 * i + 1) * j, p) for j in range(n)] for i in range(n)]
    psi_inv = pow(psi, -1, p)
    inv = [[pow(psi_inv, (2 * i + 1) * j, p) for i in range(n)] for j in range(n)]
    return fwd, inv, pow(n, -1, p)


def nega_mul_ntt(a: NegaPoly, b: NegaPoly) -> NegaPoly:
    """홀수 거듭제곱 psi^{2i+1} 에서의 평가/보간 (O(n^2) 변환)"""
    _check_ring(a, b)
    n, p = a.n, a.p
    if not ntt_supported(n, p):
        raise ValueError(f"NTT 조건(p ≡ 1 mod 2n) 불만족: n={n}, p={p}")
    fwd, inv, n_inv = _ntt_tables(n, p)
    a_hat = [sum(w * c for w, c in zip(row, a.coeffs)) % p for row in fwd]
    b_hat = [sum(w * c for w, c in zip(row, b.coeffs)) % p for row in fwd]
    c_hat = [x * y % p for x, y in zip(a_hat, b_hat)]
    coeffs = tuple(sum(w * c for w, c in zip(row, c_hat)) * n_inv % p for row in inv)
    return NegaPoly(p=p, n=n, coeffs=coeffs)


def nega_mul(a: NegaPoly, b: NegaPoly, use_ntt: bool = True) -> NegaPoly:
    _check_ring(a, b)
    if use_ntt and ntt_supported(a.n, a.p):
        return nega_mul_ntt(a, b)
    return nega_mul_schoolbook(a, b)
