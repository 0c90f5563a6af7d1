"""
모듈 설명:
    - 일반 연산 응용 네 가지를 에뮬레이션 암호문 위에서 끝까지 실행
주요 기능:
    - floyd_warshall_plain / floyd_warshall_enc : 행 단위 SIMD 최단 경로
    - pdte_infer / pdte_leaf_indicators / pdte_plain : 결정 트리 추론 (경로 합의 is-zero 판정)
    - sort_ranks / direct_sort : less-than 행렬 + 순위 + 동등 기반 배치
    - db_filter / db_select_ids : 열 단위 SIMD 조건 검색

응용 실행마다 컨텍스트 하나를 사용한다. 반복마다 레벨이 모자라면 refresh 한다.
"""
from typing import Callable, Literal, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.core.compare import measure_equal_depth
from app.core.costmodel import predict_scenario
from app.core.emulator import BitCipher, Cipher, EvalContext
from app.core.evaluator import Evaluator
from app.core.logger import get_logger
from app.core.workloads import make_rng
from app.domain.errors import DepthExceeded, RangeViolation
from app.domain.param_definition import pair_for_bits
from app.domain.schemas import AppKind, AppResult, AppSpec, CostLedger, MethodProfile, ScenarioMix

logger = get_logger(__name__)


# 그래프 (Floyd-Warshall)
class EncGraph(BaseModel):
    """행 단위로 묶은 거리 행렬과 선행자 행렬"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    n: int = Field(ge=1)
    rows: list[Cipher]
    preds: list[Cipher]
    inf: int


def floyd_warshall_plain(adj: Sequence[Sequence[int]], inf: int) -> tuple[np.ndarray, np.ndarray]:
    """
    평문 Floyd-Warshall (기준 오라클)

    adj[i][j] >= inf 는 간선 없음. 선행자 P[i][j] 는 i -> j 경로에서 j 직전 노드,
    경로가 없으면 n.
    """
    d = np.array(adj, dtype=np.int64)
    n = d.shape[0]
    if d.shape != (n, n):
        raise ValueError(f"정방 행렬이 아닙니다: {d.shape}")
    if (d < 0).any():
        raise ValueError("음수 가중치는 지원하지 않습니다")
    d = np.minimum(d, inf)
    np.fill_diagonal(d, 0)
    p = initial_predecessors(d, inf)
    for k in range(n):
        for i in range(n):
            through = d[i, k] + d[k, :]
            better = through < d[i, :]
            d[i, better] = through[better]
            p[i, better] = p[k, better]
    return d, p


def initial_predecessors(d: np.ndarray, inf: int) -> np.ndarray:
    """간선 i -> j 가 있으면 i, 없으면 n, 대각은 i"""
    n = d.shape[0]
    rows = np.repeat(np.arange(n, dtype=np.int64)[:, None], n, axis=1)
    p = np.where(d < inf, rows, n)
    np.fill_diagonal(p, np.arange(n))
    return p


def max_path_bound(adj: Sequence[Sequence[int]], inf: int) -> int:
    """탐색 가능한 경로 길이 상한 (n-1) * 최대 가중치"""
    d = np.array(adj, dtype=np.int64)
    finite = d[(d < inf) & (d > 0)]
    wmax = int(finite.max()) if finite.size else 0
    return (d.shape[0] - 1) * wmax


def encrypt_graph(ctx: EvalContext, adj: Sequence[Sequence[int]]) -> EncGraph:
    """
    인접 행렬을 행 단위 암호문으로

    Raises:
        RangeViolation: (n-1) * 최대 가중치 >= INF 이면 경로 합이 센티널과 섞임
    """
    ev = Evaluator(ctx)
    inf = ev.inf
    d = np.minimum(np.array(adj, dtype=np.int64), inf)
    n = d.shape[0]
    if d.shape != (n, n):
        raise ValueError(f"정방 행렬이 아닙니다: {d.shape}")
    if ctx.method.is_simd and n > ctx.slot_count:
        raise ValueError(f"노드 수({n})가 slot_count({ctx.slot_count})보다 큽니다")
    np.fill_diagonal(d, 0)
    if max_path_bound(d, inf) >= inf:
        raise RangeViolation(f"경로 합 상한 {max_path_bound(d, inf)} 이 INF({inf}) 이상입니다")
    p = initial_predecessors(d, inf)
    rows = [ev.encrypt(_pad(d[i], ctx), lo=0, hi=inf) for i in range(n)]
    preds = [ev.encrypt(_pad(p[i], ctx), lo=0, hi=n) for i in range(n)]
    return EncGraph(n=n, rows=rows, preds=preds, inf=inf)


def _pad(values: np.ndarray, ctx: EvalContext) -> np.ndarray:
    # 워드 방식은 슬롯 수에 맞춰 0 으로 채움
    if ctx.method.is_simd and values.shape[0] < ctx.slot_count:
        return np.concatenate([values, np.zeros(ctx.slot_count - values.shape[0], dtype=np.int64)])
    return values


def floyd_warshall_enc(ctx: EvalContext, g: EncGraph) -> EncGraph:
    """
    (k, i) 마다 D_new = D[i][k] + D[k], M = [D_new < D[i]],
    D[i] = M ? D_new : D[i], P[i] = M ? P[k] : P[i]

    비교 n^2 회, 마스크 곱 2n^2 회.

    Raises:
        DepthExceeded: refresh 가 금지된 프로파일에서 예산 초과 (k 표시)
    """
    ev = Evaluator(ctx)
    rows, preds = list(g.rows), list(g.preds)
    cmp_levels = ev.compare_depth + 1
    for k in range(g.n):
        try:
            for i in range(g.n):
                rows[i] = ev.ensure_headroom(rows[i], cmp_levels)
                rows[k] = ev.ensure_headroom(rows[k], cmp_levels)
                preds[i] = ev.ensure_headroom(preds[i], 1)
                preds[k] = ev.ensure_headroom(preds[k], 1)
                relaxed = ev.add(ev.broadcast(rows[i], k), rows[k])
                mask = ev.less_than(relaxed, rows[i])
                rows[i] = ev.select_min(mask, relaxed, rows[i])
                preds[i] = ev.select(mask, preds[k], preds[i])
        except DepthExceeded as e:
            raise e.at(f"k={k}") from e
    logger.debug(f"🧭 floyd-warshall 완료: n={g.n}, comparisons={ctx.ledger.comparisons}")
    return g.model_copy(update={"rows": rows, "preds": preds})


def decrypt_graph(ctx: EvalContext, g: EncGraph) -> tuple[np.ndarray, np.ndarray]:
    d = np.stack([ctx.decrypt(c)[:g.n] for c in g.rows])
    p = np.stack([ctx.decrypt(c)[:g.n] for c in g.preds])
    return d, p


# 결정 트리 (PDTE)
class EncTree(BaseModel):
    """
    완전 이진 트리: 층별 임계값과 특성 인덱스 (평문), 리프 라벨 2^d 개

    x[feature] < threshold 이면 왼쪽 자식으로 간다.
    """
    depth: int = Field(ge=1)
    thresholds: list[list[int]]
    features: list[list[int]]
    labels: list[int]

    @model_validator(mode='after')
    def validate_shape(self):
        if len(self.thresholds) != self.depth or len(self.features) != self.depth:
            raise ValueError(f'층 수가 depth({self.depth})와 다릅니다')
        for level in range(self.depth):
            if len(self.thresholds[level]) != 2 ** level or len(self.features[level]) != 2 ** level:
                raise ValueError(f'{level} 층의 노드 수는 {2 ** level} 이어야 합니다')
        if len(self.labels) != 2 ** self.depth:
            raise ValueError(f'리프 라벨은 {2 ** self.depth} 개여야 합니다')
        if any(t < 0 for level in self.thresholds for t in level):
            raise ValueError('임계값은 0 이상이어야 합니다')
        return self

    @property
    def leaves(self) -> int:
        return 2 ** self.depth

    @property
    def feature_count(self) -> int:
        return max(f for level in self.features for f in level) + 1

    def leaf_view(self, level: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """리프 해상도로 펼친 (특성, 임계값, 방향) 벡터; 방향 0 = 왼쪽"""
        leaf = np.arange(self.leaves)
        node = leaf >> (self.depth - level)
        direction = (leaf >> (self.depth - level - 1)) & 1
        feats = np.asarray(self.features[level], dtype=np.int64)[node]
        thr = np.asarray(self.thresholds[level], dtype=np.int64)[node]
        return feats, thr, direction


def pdte_plain(tree: EncTree, x: Sequence[int]) -> int:
    node = 0
    for level in range(tree.depth):
        go_left = x[tree.features[level][node]] < tree.thresholds[level][node]
        node = 2 * node + (0 if go_left else 1)
    return tree.labels[node]


def pdte_slots(tree: EncTree, feature_count: Optional[int] = None) -> int:
    """필요한 슬롯 수 max(F, 2^d)"""
    return max(feature_count or tree.feature_count, tree.leaves)


def _gather(ev: Evaluator, x: Cipher, index: np.ndarray, lanes: int) -> Cipher:
    """레인 j 에 x[index[j]] 를 모음 (워드: 브로드캐스트 + 평문 마스크)"""
    if ev.bitwise:
        return BitCipher(bits=x.bits[index], width=x.width, ctx_id=x.ctx_id, hi=x.hi)
    acc = None
    for f in np.unique(index):
        keep = np.zeros(lanes, dtype=np.int64)
        keep[:index.shape[0]] = (index == f)
        part = ev.mul_plain(ev.broadcast(x, int(f)), keep).with_interval(0, x.hi)
        acc = part if acc is None else ev.add_disjoint(acc, part, 0, x.hi)
    return acc


def _leaf_lanes(ctx: EvalContext, tree: EncTree) -> int:
    if not ctx.method.is_simd:
        return tree.leaves
    if ctx.slot_count < tree.leaves:
        raise ValueError(f"slot_count({ctx.slot_count})가 리프 수({tree.leaves})보다 작습니다")
    return ctx.slot_count


def _wrong_turns(ev: Evaluator, tree: EncTree, features: Cipher, lanes: int) -> Cipher:
    """리프마다 경로에서 틀린 방향으로 간 층의 수 (구간 [0, d])"""
    pad = np.zeros(lanes - tree.leaves, dtype=np.int64)
    total = None
    for level in range(tree.depth):
        feats, thr, direction = tree.leaf_view(level)
        gathered = ev.ensure_headroom(_gather(ev, features, feats, lanes), ev.compare_depth)
        goes_left = ev.less_than_plain(gathered, np.concatenate([thr, pad]))
        # 왼쪽 리프(direction 0)는 goes_left = 0 일 때 틀림
        wrong = ev.mask_flip(goes_left, np.concatenate([1 - direction, pad]))
        if total is None:
            total = wrong
            continue
        total = ev.add(total, wrong)
        if not ev.bitwise:
            total = total.with_interval(0, level + 1)
    return total


def pdte_leaf_indicators(ev: Evaluator, tree: EncTree, features: Cipher) -> Cipher:
    """리프 지시자 암호문: 틀린 방향 수가 0 인 리프 레인만 1"""
    lanes = _leaf_lanes(ev.ctx, tree)
    wrong = _wrong_turns(ev, tree, features, lanes)
    eq_levels = measure_equal_depth(ev.method, ev.ctx.p, ev.ctx.r, ev.ctx.b, tree.depth)
    return ev.is_zero(ev.ensure_headroom(wrong, eq_levels))


def pdte_infer(ctx: EvalContext, tree: EncTree, features: Cipher) -> Cipher:
    """
    리프마다 '틀린 방향' 비트의 합이 0 인지로 지시자를 구하고
    라벨과의 내적을 모든 레인에 복제한다.

    층마다 평문 임계값과 비교 1회 (리프 해상도로 묶음), 동등 1회.
    """
    ev = Evaluator(ctx)
    indicator = pdte_leaf_indicators(ev, tree, features)
    labels = np.zeros(ev.lanes(indicator), dtype=np.int64)
    labels[:tree.leaves] = tree.labels
    weighted = ev.mask_scale(indicator, labels)
    return ev.sum_lanes(weighted, lo=0, hi=max(tree.labels))


def pdte_indicators(ctx: EvalContext, tree: EncTree, features: Cipher) -> np.ndarray:
    """복호화한 리프 지시자 벡터 (검증용, 정확히 하나가 1)"""
    return ctx.decrypt(pdte_leaf_indicators(Evaluator(ctx), tree, features))[:tree.leaves]


def encrypt_features(ctx: EvalContext, x: Sequence[int]) -> Cipher:
    """특성 벡터를 레인에 싣는다 (워드: 슬롯 수까지 0 채움)"""
    ev = Evaluator(ctx)
    vec = np.asarray(x, dtype=np.int64)
    if vec.size and (vec.min() < 0 or vec.max() > ev.value_max):
        raise RangeViolation(f"특성 값이 [0, {ev.value_max}] 를 벗어납니다")
    if ctx.method.is_simd and vec.shape[0] > ctx.slot_count:
        raise ValueError(f"특성 수({vec.shape[0]})가 slot_count({ctx.slot_count})보다 큽니다")
    return ev.encrypt(_pad(vec, ctx), lo=0, hi=int(vec.max()) if vec.size else 0)


# 정렬
def sort_ranks(ctx: EvalContext, xs: Sequence[Cipher]) -> list[Cipher]:
    """
    L[i][j] = LT(x_i, x_j) (i<j), 0 (i=j), 1 - LT(x_j, x_i) (i>j)
    sigma_i = sum_j L[i][j] (동률은 인덱스로 깨지므로 sigma 는 0..m-1 의 순열)

    비교 m(m-1)/2 회.
    """
    ev = Evaluator(ctx)
    m = len(xs)
    if m <= 1:
        return [ev.encrypt(np.zeros(ev.lanes(x), dtype=np.int64), lo=0, hi=0) for x in xs]
    upper: dict[tuple[int, int], Cipher] = {}
    for i in range(m):
        for j in range(i + 1, m):
            upper[(i, j)] = ev.less_than(xs[i], xs[j])

    eq_levels = measure_equal_depth(ctx.method, ctx.p, ctx.r, ctx.b, m - 1)
    sigma = []
    for i in range(m):
        terms = [upper[(i, j)] if i < j else ev.mask_not(upper[(j, i)]) for j in range(m) if j != i]
        acc = terms[0]
        for t in terms[1:]:
            acc = ev.add(acc, t)
        if not ev.bitwise:
            acc = acc.with_interval(0, m - 1)
        sigma.append(ev.ensure_headroom(acc, eq_levels + 1))
    return sigma


def direct_sort(ctx: EvalContext, xs: Sequence[Cipher], ascending: bool = False) -> list[Cipher]:
    """
    S[k] = sum_j EQ(sigma_j, k) * x_j

    비교 m(m-1)/2 회, 동등 m^2 회. 기본 출력은 내림차순.
    """
    ev = Evaluator(ctx)
    m = len(xs)
    if m == 0:
        return []
    if m == 1:
        return list(xs)
    xs = [ev.ensure_headroom(x, ev.compare_depth) for x in xs]
    sigma = sort_ranks(ctx, xs)

    bounds = [c.hi for c in xs]
    hi = None if None in bounds else max(bounds)
    out = []
    for k in range(m):
        acc = None
        for j in range(m):
            hit = ev.equal_plain(sigma[j], k)
            term = ev.mask_mul(hit, ev.ensure_headroom(xs[j], 1))
            # 순위는 순열이므로 k 마다 정확히 한 항만 0 이 아님
            acc = term if acc is None else ev.add_disjoint(acc, term, 0, hi)
        out.append(acc)
    return out[::-1] if ascending else out


# 데이터베이스
class EncTable(BaseModel):
    """열 단위로 묶은 테이블 (ID 열 포함)"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    columns: dict[str, Cipher]
    ids: Cipher
    rows: int = Field(ge=1)


class Column(BaseModel):
    kind: Literal["column"] = "column"
    name: str


class Const(BaseModel):
    kind: Literal["const"] = "const"
    value: int


class BinOp(BaseModel):
    kind: Literal["binop"] = "binop"
    op: Literal["+", "*"]
    left: "Expr"
    right: "Expr"


Expr = Union[Column, Const, BinOp]


class Between(BaseModel):
    kind: Literal["between"] = "between"
    expr: Expr
    lo: int
    hi: int


class Cmp(BaseModel):
    kind: Literal["cmp"] = "cmp"
    expr: Expr
    op: Literal["<", "<=", ">", ">=", "=="]
    value: int


class And(BaseModel):
    kind: Literal["and"] = "and"
    left: "Predicate"
    right: "Predicate"


class Or(BaseModel):
    kind: Literal["or"] = "or"
    left: "Predicate"
    right: "Predicate"


Predicate = Union[Between, Cmp, And, Or]

BinOp.model_rebuild()
And.model_rebuild()
Or.model_rebuild()


def encrypt_table(ctx: EvalContext, columns: dict[str, Sequence[int]], ids: Sequence[int]) -> EncTable:
    ev = Evaluator(ctx)
    rows = len(ids)
    enc = {}
    for name, values in columns.items():
        vec = np.asarray(values, dtype=np.int64)
        if vec.shape != (rows,):
            raise ValueError(f"열 {name} 의 길이({vec.shape[0]})가 행 수({rows})와 다릅니다")
        if vec.size and (vec.min() < 0 or vec.max() > ev.value_max):
            raise RangeViolation(f"열 {name} 값이 [0, {ev.value_max}] 를 벗어납니다")
        enc[name] = ev.encrypt(_pad(vec, ctx), lo=0, hi=int(vec.max()) if vec.size else 0)
    id_vec = np.asarray(ids, dtype=np.int64)
    if id_vec.size and (id_vec.min() < 0 or id_vec.max() > ev.value_max):
        raise RangeViolation(f"ID 가 [0, {ev.value_max}] 를 벗어납니다")
    return EncTable(columns=enc, ids=ev.encrypt(_pad(id_vec, ctx), lo=0, hi=int(id_vec.max())), rows=rows)


def _eval_expr(ev: Evaluator, t: EncTable, e: Expr) -> Cipher:
    if isinstance(e, Column):
        if e.name not in t.columns:
            raise KeyError(f"존재하지 않는 열입니다: {e.name}")
        return t.columns[e.name]
    if isinstance(e, Const):
        raise ValueError("상수만으로 된 식은 지원하지 않습니다")
    if isinstance(e.right, Const):
        x = _eval_expr(ev, t, e.left)
        return ev.add_plain(x, e.right.value) if e.op == "+" else ev.mul_plain(x, e.right.value)
    if isinstance(e.left, Const):
        return _eval_expr(ev, t, BinOp(op=e.op, left=e.right, right=e.left))
    x, y = _eval_expr(ev, t, e.left), _eval_expr(ev, t, e.right)
    if e.op == "+":
        return ev.add(x, y)
    x, y = ev.ensure_headroom(x, 1), ev.ensure_headroom(y, 1)
    return ev.mul(x, y)


def _const_mask(ev: Evaluator, lanes: int, value: int) -> Cipher:
    # 자명한 암호문
    return ev.encrypt(np.full(lanes, value, dtype=np.int64), lo=value, hi=value)


def _lt_const(ev: Evaluator, x: Cipher, k: int, lanes: int) -> Cipher:
    """[x < k], 값 범위 밖 상수는 상수 마스크"""
    if k <= 0:
        return _const_mask(ev, lanes, 0)
    if k > ev.value_max:
        return _const_mask(ev, lanes, 1)
    x = ev.ensure_headroom(x, ev.compare_depth)
    return ev.less_than_plain(x, k)


def _eval_pred(ev: Evaluator, t: EncTable, pred: Predicate, lanes: int) -> Cipher:
    if isinstance(pred, (And, Or)):
        left = ev.ensure_headroom(_eval_pred(ev, t, pred.left, lanes), 1)
        right = ev.ensure_headroom(_eval_pred(ev, t, pred.right, lanes), 1)
        return ev.mask_and(left, right) if isinstance(pred, And) else ev.mask_or(left, right)
    x = _eval_expr(ev, t, pred.expr)
    if isinstance(pred, Between):
        # [x >= lo] * [x <= hi]
        if pred.lo > pred.hi:
            return _const_mask(ev, lanes, 0)
        ge_lo = ev.mask_not(_lt_const(ev, x, pred.lo, lanes)) if pred.lo > 0 else None
        le_hi = _lt_const(ev, x, pred.hi + 1, lanes) if pred.hi < ev.value_max else None
        if ge_lo is None and le_hi is None:
            return _const_mask(ev, lanes, 1)
        if ge_lo is None or le_hi is None:
            return ge_lo if le_hi is None else le_hi
        return ev.mask_and(ev.ensure_headroom(ge_lo, 1), ev.ensure_headroom(le_hi, 1))
    if pred.op == "<":
        return _lt_const(ev, x, pred.value, lanes)
    if pred.op == "<=":
        return _lt_const(ev, x, pred.value + 1, lanes)
    if pred.op == ">":
        return ev.mask_not(_lt_const(ev, x, pred.value + 1, lanes))
    if pred.op == ">=":
        return ev.mask_not(_lt_const(ev, x, pred.value, lanes))
    if pred.value < 0 or pred.value > ev.value_max:
        return _const_mask(ev, lanes, 0)
    return ev.equal_plain(ev.ensure_headroom(x, ev.compare_depth), pred.value)


def db_filter(ctx: EvalContext, t: EncTable, pred: Predicate) -> Cipher:
    """레인별 0/1 행 마스크"""
    ev = Evaluator(ctx)
    lanes = ev.lanes(t.ids)
    return _eval_pred(ev, t, pred, lanes)


def db_select_ids(ctx: EvalContext, t: EncTable, mask: Cipher) -> Cipher:
    """일치하는 행은 ID, 아니면 0"""
    ev = Evaluator(ctx)
    ids = ev.ensure_headroom(t.ids, 1)
    mask = ev.ensure_headroom(mask, 1)
    return ev.mask_mul(mask, ids)


def db_filter_plain(columns: dict[str, Sequence[int]], pred: Predicate) -> np.ndarray:
    """평문 SQL 의미의 기준 오라클"""
    cols = {k: np.asarray(v, dtype=np.int64) for k, v in columns.items()}

    def expr(e: Expr) -> np.ndarray:
        if isinstance(e, Column):
            return cols[e.name]
        if isinstance(e, Const):
            return np.int64(e.value)
        left, right = expr(e.left), expr(e.right)
        return left + right if e.op == "+" else left * right

    def run(p: Predicate) -> np.ndarray:
        if isinstance(p, And):
            return run(p.left) & run(p.right)
        if isinstance(p, Or):
            return run(p.left) | run(p.right)
        x = expr(p.expr)
        if isinstance(p, Between):
            return ((x >= p.lo) & (x <= p.hi)).astype(np.int64)
        ops = {"<": np.less, "<=": np.less_equal, ">": np.greater, ">=": np.greater_equal, "==": np.equal}
        return ops[p.op](x, p.value).astype(np.int64)

    return run(pred)


def predicate_mix(pred: Predicate, value_max: int) -> ScenarioMix:
    """
    db_filter + db_select_ids 의 연산 구성 (상수 단축 규칙을 그대로 따름)
    """
    totals = {"muls": 0, "compares": 0, "equalities": 0}

    def expr_chain(e: Expr) -> int:
        if not isinstance(e, BinOp):
            return 0
        left, right = expr_chain(e.left), expr_chain(e.right)
        if e.op == "*" and not isinstance(e.left, Const) and not isinstance(e.right, Const):
            totals["muls"] += 1
            return max(left, right) + 1
        return max(left, right)

    def lt_live(k: int) -> bool:
        return 0 < k <= value_max

    def walk(p: Predicate) -> tuple[int, int]:
        # (곱셈 단계, 비교 단계)
        if isinstance(p, (And, Or)):
            lm, lc = walk(p.left)
            rm, rc = walk(p.right)
            totals["muls"] += 1
            return max(lm, rm) + 1, max(lc, rc)
        chain = expr_chain(p.expr)
        if isinstance(p, Between):
            live = int(p.lo <= p.hi and p.lo > 0) + int(p.lo <= p.hi and p.hi < value_max)
            totals["compares"] += live
            if live == 2:
                totals["muls"] += 1
                return chain + 1, 1
            return chain, int(live > 0)
        if p.op == "==":
            live = 0 <= p.value <= value_max
            totals["equalities"] += int(live)
            return chain, 0
        k = p.value + (1 if p.op in ("<=", ">") else 0)
        totals["compares"] += int(lt_live(k))
        return chain, int(lt_live(k))

    mul_chain, compare_chain = walk(pred)
    return ScenarioMix(
        muls=totals["muls"],
        compares=totals["compares"],
        equalities=totals["equalities"],
        masked=1,
        mul_chain=mul_chain + 1,
        compare_chain=compare_chain,
        equal_chain=int(totals["equalities"] > 0),
        capped=True,
    )


# 시나리오 실행 (오라클 포함)
DB_COLUMNS = ("salary", "work_hours", "bonus")


def demo_query(b: int) -> Predicate:
    """
    salary * work_hours BETWEEN 5000 AND 6000 AND bonus BETWEEN 2^{b-3} AND 2^{b-1}

    16 비트 미만에서는 곱 범위 상수를 2^{b-16} 배로 줄인다.
    """
    shift = max(0, 16 - b)
    product = BinOp(op="*", left=Column(name="salary"), right=Column(name="work_hours"))
    return And(
        left=Between(expr=product, lo=5000 >> shift, hi=6000 >> shift),
        right=Between(expr=Column(name="bonus"), lo=1 << (b - 3), hi=1 << (b - 1)),
    )


def random_graph(rng: np.random.Generator, n: int, inf: int, density: float = 0.5) -> np.ndarray:
    """(n-1) * 최대 가중치 < INF 를 만족하는 무작위 방향 그래프"""
    wmax = max(1, min(15, (inf - 1) // max(1, n - 1)))
    weights = rng.integers(1, wmax + 1, size=(n, n))
    edges = rng.random((n, n)) < density
    adj = np.where(edges, weights, inf)
    np.fill_diagonal(adj, 0)
    return adj


def random_tree(rng: np.random.Generator, depth: int, b: int, feature_count: Optional[int] = None) -> EncTree:
    count = feature_count or max(2, depth)
    top = 1 << b
    return EncTree(
        depth=depth,
        thresholds=[rng.integers(0, top, 2 ** level).tolist() for level in range(depth)],
        features=[rng.integers(0, count, 2 ** level).tolist() for level in range(depth)],
        labels=rng.integers(1, top, 2 ** depth).tolist(),
    )


def random_table(rng: np.random.Generator, rows: int, b: int) -> dict[str, np.ndarray]:
    """곱이 감기지 않도록 salary, work_hours < 2^{floor(b/2)}"""
    half = 1 << (b // 2)
    return {
        "salary": rng.integers(0, half, rows),
        "work_hours": rng.integers(0, half, rows),
        "bonus": rng.integers(0, 1 << b, rows),
    }


def _app_context(spec: AppSpec, slot_count: int, profile: Optional[MethodProfile]) -> EvalContext:
    p, r = pair_for_bits(spec.b)
    profile = profile or MethodProfile(method=spec.method)
    return EvalContext(profile, p, r, spec.b, slot_count=slot_count)


def _app_result(spec: AppSpec, ctx: EvalContext, mix: ScenarioMix, mismatches: list[str],
                ledger: Optional[CostLedger] = None) -> AppResult:
    prediction = predict_scenario(spec.scenario_id, spec.method, spec.b, mix,
                                  calibration=ctx.profile.calibration, depth_budget=ctx.budget)
    if mismatches:
        logger.error(f"❌ 오라클 불일치: {spec.scenario_id} ({'; '.join(mismatches)})")
    return AppResult(
        spec=spec,
        slot_count=ctx.slot_count,
        ledger=ledger or ctx.ledger.snapshot(),
        oracle_match=not mismatches,
        detail="; ".join(mismatches),
        predicted=prediction.counters(),
    )


def run_floyd(spec: AppSpec, adj: Optional[np.ndarray] = None,
              profile: Optional[MethodProfile] = None) -> AppResult:
    n = spec.size if adj is None else len(adj)
    ctx = _app_context(spec, n, profile)
    inf = Evaluator(ctx).inf
    if adj is None:
        adj = random_graph(make_rng(spec.seed, spec.rep), n, inf)
    g = floyd_warshall_enc(ctx, encrypt_graph(ctx, adj))
    d, p = decrypt_graph(ctx, g)
    want_d, want_p = floyd_warshall_plain(adj, inf)
    mismatches = []
    if not np.array_equal(d, want_d):
        mismatches.append("distance")
    if not np.array_equal(p, want_p):
        mismatches.append("predecessor")
    if ctx.ledger.comparisons != n * n:
        mismatches.append(f"comparisons {ctx.ledger.comparisons} != {n * n}")
    mix = ScenarioMix(compares=n * n, masked=2 * n * n, mul_chain=2 * n, compare_chain=2 * n,
                      capped=True, lanes=n)
    return _app_result(spec, ctx, mix, mismatches)


def run_tree(spec: AppSpec, tree: Optional[EncTree] = None, x: Optional[Sequence[int]] = None,
             profile: Optional[MethodProfile] = None) -> AppResult:
    rng = make_rng(spec.seed, spec.rep)
    tree = tree or random_tree(rng, spec.size, spec.b)
    if x is None:
        x = rng.integers(0, 1 << spec.b, tree.feature_count).tolist()
    ctx = _app_context(spec, pdte_slots(tree, len(x)), profile)
    features = encrypt_features(ctx, x)
    label = ctx.decrypt(pdte_infer(ctx, tree, features))
    ledger = ctx.ledger.snapshot()
    mismatches = []
    want = pdte_plain(tree, x)
    if not (label == want).all():
        mismatches.append(f"label {int(label[0])} != {want}")
    # 검증용 재계산은 원장에 넣지 않음
    indicators = pdte_indicators(ctx, tree, features)
    if int(indicators.sum()) != 1:
        mismatches.append(f"indicator sum {int(indicators.sum())}")
    mix = ScenarioMix(compares=tree.depth, equalities=1, compare_chain=1, equal_chain=1,
                      equal_value_max=tree.depth, capped=True, lanes=tree.leaves)
    return _app_result(spec, ctx, mix, mismatches, ledger)


def run_sort(spec: AppSpec, values: Optional[Sequence[int]] = None,
             profile: Optional[MethodProfile] = None) -> AppResult:
    if values is None:
        values = make_rng(spec.seed, spec.rep).integers(0, 1 << spec.b, spec.size).tolist()
    m = len(values)
    ctx = _app_context(spec, 1, profile)
    ev = Evaluator(ctx)
    xs = [ev.encrypt([v], lo=0, hi=(1 << spec.b) - 1) for v in values]
    out = [int(ev.decrypt(c)[0]) for c in direct_sort(ctx, xs)]
    mismatches = []
    if out != sorted(values, reverse=True):
        mismatches.append("order")
    if m > 1 and (ctx.ledger.comparisons, ctx.ledger.equalities) != (m * (m - 1) // 2, m * m):
        mismatches.append(f"counts {ctx.ledger.comparisons}/{ctx.ledger.equalities}")
    mix = ScenarioMix(compares=m * (m - 1) // 2, equalities=m * m, masked=m * m,
                      mul_chain=1, compare_chain=1, equal_chain=1,
                      equal_value_max=max(1, m - 1), capped=True)
    if m == 1:
        mix = ScenarioMix()
    return _app_result(spec, ctx, mix, mismatches)


def run_db(spec: AppSpec, columns: Optional[dict[str, Sequence[int]]] = None,
           pred: Optional[Predicate] = None, ids: Optional[Sequence[int]] = None,
           profile: Optional[MethodProfile] = None) -> AppResult:
    if columns is None:
        columns = random_table(make_rng(spec.seed, spec.rep), spec.size, spec.b)
    pred = pred or demo_query(spec.b)
    rows = len(next(iter(columns.values())))
    ids = np.arange(1, rows + 1) if ids is None else np.asarray(ids, dtype=np.int64)
    ctx = _app_context(spec, rows, profile)
    t = encrypt_table(ctx, columns, ids)
    mask = db_filter(ctx, t, pred)
    selected = ctx.decrypt(db_select_ids(ctx, t, mask))[:rows]
    want = db_filter_plain(columns, pred)
    mismatches = []
    if not np.array_equal(ctx.decrypt(mask)[:rows], want):
        mismatches.append("mask")
    if not np.array_equal(selected, ids * want):
        mismatches.append("ids")
    mix = predicate_mix(pred, Evaluator(ctx).value_max).model_copy(update={"lanes": rows})
    return _app_result(spec, ctx, mix, mismatches)


APP_RUNNERS: dict[AppKind, Callable[..., AppResult]] = {
    AppKind.FLOYD: run_floyd,
    AppKind.TREE: run_tree,
    AppKind.SORT: run_sort,
    AppKind.DB: run_db,
}


def run_app(spec: AppSpec, profile: Optional[MethodProfile] = None, **inputs) -> AppResult:
    logger.info(f"▶️ app 시작: {spec.scenario_id}")
    result = APP_RUNNERS[spec.kind](spec, profile=profile, **inputs)
    logger.info(f"✅ app 완료: {spec.scenario_id} (oracle={result.oracle_match})")
    return result
