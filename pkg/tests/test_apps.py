"""
응용 테스트: Floyd-Warshall, 결정 트리, 정렬, DB 조건 검색
"""
import itertools
from collections import Counter

import numpy as np
import pytest

from app.core.apps import (
    And,
    Between,
    BinOp,
    Cmp,
    Column,
    Const,
    EncTree,
    Or,
    db_filter,
    db_filter_plain,
    db_select_ids,
    decrypt_graph,
    demo_query,
    direct_sort,
    encrypt_features,
    encrypt_graph,
    encrypt_table,
    floyd_warshall_enc,
    floyd_warshall_plain,
    pdte_indicators,
    pdte_infer,
    pdte_leaf_indicators,
    pdte_plain,
    pdte_slots,
    predicate_mix,
    random_graph,
    run_app,
    sort_ranks,
)
from app.core.evaluator import Evaluator
from app.domain.errors import DepthExceeded, RangeViolation
from app.domain.schemas import AppKind, AppSpec, Method
from tests.helpers import ALL_METHODS, make_ctx

INF = 127


def three_node() -> list[list[int]]:
    """0->1 (4), 1->2 (1), 0->2 (10)"""
    return [
        [0, 4, 10],
        [INF, 0, 1],
        [INF, INF, 0],
    ]


def relax_oracle(adj, inf: int) -> np.ndarray:
    """Bellman-Ford 식 반복 완화 (독립 기준)"""
    d = np.minimum(np.array(adj, dtype=np.int64), inf)
    n = d.shape[0]
    np.fill_diagonal(d, 0)
    for _ in range(n):
        for u in range(n):
            for v in range(n):
                if d[u, v] >= inf:
                    continue
                for s in range(n):
                    if d[s, u] < inf and d[s, u] + d[u, v] < d[s, v]:
                        d[s, v] = d[s, u] + d[u, v]
    return d


class TestFloydPlain:
    def test_three_node(self):
        d, p = floyd_warshall_plain(three_node(), INF)
        assert d[0, 2] == 5
        assert p[0, 2] == 1
        assert p[0, 1] == 0
        assert p[2, 0] == 3

    def test_edgeless(self):
        adj = np.full((4, 4), INF)
        d, _ = floyd_warshall_plain(adj, INF)
        assert (np.diag(d) == 0).all()
        assert (d[~np.eye(4, dtype=bool)] == INF).all()

    def test_random_vs_relaxation(self, rng):
        for n in (3, 5, 6):
            adj = random_graph(rng, n, INF)
            d, _ = floyd_warshall_plain(adj, INF)
            assert (d == relax_oracle(adj, INF)).all()

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            floyd_warshall_plain([[0, -1], [1, 0]], INF)


@pytest.mark.parametrize("method", ALL_METHODS)
class TestFloydEncrypted:
    def test_three_node(self, method):
        ctx = make_ctx(method, 8, slot_count=3)
        inf = Evaluator(ctx).inf
        adj = np.minimum(np.array(three_node()), inf)
        adj[adj == INF] = inf
        d, p = decrypt_graph(ctx, floyd_warshall_enc(ctx, encrypt_graph(ctx, adj)))
        want_d, want_p = floyd_warshall_plain(adj, inf)
        assert d[0, 2] == 5
        assert (d == want_d).all()
        assert (p == want_p).all()

    def test_comparison_count(self, method, rng):
        ctx = make_ctx(method, 8, slot_count=4)
        adj = random_graph(rng, 4, Evaluator(ctx).inf)
        floyd_warshall_enc(ctx, encrypt_graph(ctx, adj))
        assert ctx.ledger.comparisons == 16
        assert ctx.ledger.masked_mults == 32


@pytest.mark.parametrize("method", ALL_METHODS)
@pytest.mark.parametrize("n", [
    4,
    8,
    pytest.param(16, marks=pytest.mark.full_sweep),
    pytest.param(32, marks=pytest.mark.full_sweep),
])
def test_floyd_random_graphs(method, n):
    for rep in range(20):
        result = run_app(AppSpec(kind=AppKind.FLOYD, method=method, b=8, size=n, rep=rep))
        assert result.oracle_match, result.detail
        assert result.ledger.comparisons == n * n


class TestFloydLimits:
    def test_depth_exceeded_names_iteration(self):
        ctx = make_ctx(Method.ENCODING, 8, slot_count=3, allow_refresh=False)
        g = encrypt_graph(ctx, random_graph(np.random.default_rng(1), 3, Evaluator(ctx).inf))
        with pytest.raises(DepthExceeded) as exc:
            floyd_warshall_enc(ctx, g)
        assert exc.value.where.startswith("k=")

    def test_refresh_keeps_results(self, rng):
        ctx = make_ctx(Method.ENCODING, 8, slot_count=4)
        inf = Evaluator(ctx).inf
        adj = random_graph(rng, 4, inf)
        d, p = decrypt_graph(ctx, floyd_warshall_enc(ctx, encrypt_graph(ctx, adj)))
        want_d, want_p = floyd_warshall_plain(adj, inf)
        assert (d == want_d).all() and (p == want_p).all()
        assert ctx.ledger.refreshes > 0

    def test_path_bound_guard(self):
        ctx = make_ctx(Method.TFHE, 8)
        adj = [[0, 100, INF], [INF, 0, 100], [INF, INF, 0]]
        with pytest.raises(RangeViolation):
            encrypt_graph(ctx, adj)

    def test_too_many_nodes_for_slots(self):
        ctx = make_ctx(Method.SCHEME, 8, slot_count=2)
        with pytest.raises(ValueError):
            encrypt_graph(ctx, three_node())


def example_tree() -> EncTree:
    return EncTree(depth=2, thresholds=[[5], [3, 7]], features=[[0], [0, 0]], labels=[10, 20, 30, 40])


class TestTreePlain:
    def test_example(self):
        assert pdte_plain(example_tree(), [4]) == 20

    def test_zero_thresholds_go_right(self):
        tree = EncTree(depth=2, thresholds=[[0], [0, 0]], features=[[0], [1, 0]], labels=[1, 2, 3, 4])
        assert pdte_plain(tree, [0, 9]) == 4

    def test_shape_validation(self):
        with pytest.raises(ValueError):
            EncTree(depth=2, thresholds=[[5], [3]], features=[[0], [0]], labels=[1, 2, 3, 4])
        with pytest.raises(ValueError):
            EncTree(depth=1, thresholds=[[5]], features=[[0]], labels=[1, 2, 3])

    def test_slots(self):
        assert pdte_slots(example_tree(), 1) == 4
        assert pdte_slots(example_tree(), 9) == 9


@pytest.mark.parametrize("method", ALL_METHODS)
class TestTreeEncrypted:
    def test_example(self, method):
        tree = example_tree()
        ctx = make_ctx(method, 8, slot_count=pdte_slots(tree, 1))
        features = encrypt_features(ctx, [4])
        label = ctx.decrypt(pdte_infer(ctx, tree, features))
        assert (label == 20).all()
        assert pdte_indicators(ctx, tree, features).tolist() == [0, 1, 0, 0]

    def test_encrypted_indicator(self, method):
        tree = example_tree()
        ctx = make_ctx(method, 8, slot_count=pdte_slots(tree, 1))
        ev = Evaluator(ctx)
        indicator = pdte_leaf_indicators(ev, tree, encrypt_features(ctx, [4]))
        values = ev.decrypt(indicator)[:tree.leaves]
        assert values.tolist() == [0, 1, 0, 0]
        assert int(values.sum()) == 1
        assert ctx.ledger.equalities == 1

    def test_counts(self, method):
        tree = example_tree()
        ctx = make_ctx(method, 8, slot_count=4)
        pdte_infer(ctx, tree, encrypt_features(ctx, [9]))
        assert ctx.ledger.comparisons == tree.depth
        assert ctx.ledger.equalities == 1

    def test_zero_thresholds(self, method):
        tree = EncTree(depth=2, thresholds=[[0], [0, 0]], features=[[0], [1, 0]], labels=[1, 2, 3, 4])
        ctx = make_ctx(method, 8, slot_count=4)
        label = ctx.decrypt(pdte_infer(ctx, tree, encrypt_features(ctx, [0, 9])))
        assert (label == 4).all()

    @pytest.mark.parametrize("depth", [1, 2, 3])
    def test_random_trees(self, method, depth):
        for rep in range(3):
            result = run_app(AppSpec(kind=AppKind.TREE, method=method, b=8, size=depth, rep=rep))
            assert result.oracle_match, result.detail


@pytest.mark.parametrize("method", ALL_METHODS)
@pytest.mark.parametrize("depth,cases", [
    (2, 100),
    (4, 100),
    pytest.param(2, 1000, marks=pytest.mark.full_sweep),
    pytest.param(4, 1000, marks=pytest.mark.full_sweep),
    pytest.param(6, 1000, marks=pytest.mark.full_sweep),
    pytest.param(8, 1000, marks=pytest.mark.full_sweep),
])
def test_tree_random_cases(method, depth, cases):
    for rep in range(cases):
        result = run_app(AppSpec(kind=AppKind.TREE, method=method, b=8, size=depth, rep=rep))
        assert result.oracle_match, result.detail
        assert result.ledger.comparisons == depth
        assert result.ledger.equalities == 1


@pytest.mark.parametrize("method", ALL_METHODS)
class TestSort:
    def _sort(self, method, values, ascending=False):
        ctx = make_ctx(method, 8)
        ev = Evaluator(ctx)
        xs = [ev.encrypt([v], lo=0, hi=255) for v in values]
        out = [int(ev.decrypt(c)[0]) for c in direct_sort(ctx, xs, ascending=ascending)]
        return out, ctx

    def test_descending(self, method):
        out, ctx = self._sort(method, [3, 1, 2])
        assert out == [3, 2, 1]
        assert ctx.ledger.comparisons == 3
        assert ctx.ledger.equalities == 9

    def test_ascending(self, method):
        out, _ = self._sort(method, [3, 1, 2], ascending=True)
        assert out == [1, 2, 3]

    def test_ties(self, method):
        out, _ = self._sort(method, [2, 2, 1])
        assert out == [2, 2, 1]

    def test_singleton_and_empty(self, method):
        out, ctx = self._sort(method, [7])
        assert out == [7]
        assert ctx.ledger.comparisons == 0
        assert direct_sort(ctx, []) == []

    def test_run_app(self, method):
        result = run_app(AppSpec(kind=AppKind.SORT, method=method, b=8, size=4))
        assert result.oracle_match, result.detail

    def test_ranks_are_permutation(self, method):
        ctx = make_ctx(method, 8)
        ev = Evaluator(ctx)
        values = [2, 0, 2, 1]
        ranks = [int(ev.decrypt(c)[0]) for c in sort_ranks(ctx, [ev.encrypt([v], lo=0, hi=255) for v in values])]
        # 내림차순 자리, 동률은 앞선 인덱스가 먼저
        assert ranks == [0, 3, 1, 2]


@pytest.mark.parametrize("method", ALL_METHODS)
@pytest.mark.parametrize("length", [
    1, 2, 3, 4,
    pytest.param(5, marks=pytest.mark.full_sweep),
    pytest.param(6, marks=pytest.mark.full_sweep),
])
def test_sort_exhaustive_small_alphabet(method, length):
    """{0, 1, 2} 위 길이 length 인 모든 배열"""
    for values in itertools.product(range(3), repeat=length):
        ctx = make_ctx(method, 8)
        ev = Evaluator(ctx)
        xs = [ev.encrypt([v], lo=0, hi=255) for v in values]
        out = [int(ev.decrypt(c)[0]) for c in direct_sort(ctx, xs)]
        ranks = [int(ev.decrypt(c)[0]) for c in sort_ranks(ctx, xs)]
        assert out == sorted(values, reverse=True)
        assert Counter(out) == Counter(values)
        assert sorted(ranks) == list(range(length))
        assert all(out[ranks[j]] == v for j, v in enumerate(values))


def toy_table() -> dict[str, list[int]]:
    """데모 질의 (b=16) 에 정확히 1 번 행만 일치"""
    return {
        "salary": [10, 100, 50, 200],
        "work_hours": [10, 55, 90, 30],
        "bonus": [9000, 10000, 20000, 5000],
    }


@pytest.mark.parametrize("method", ALL_METHODS)
class TestDatabase:
    def test_demo_query(self, method):
        columns = toy_table()
        ctx = make_ctx(method, 16, slot_count=4)
        t = encrypt_table(ctx, columns, [7, 8, 9, 10])
        mask = db_filter(ctx, t, demo_query(16))
        assert ctx.decrypt(mask).tolist() == [0, 1, 0, 0]
        assert db_filter_plain(columns, demo_query(16)).tolist() == [0, 1, 0, 0]
        assert ctx.decrypt(db_select_ids(ctx, t, mask)).tolist() == [0, 8, 0, 0]

    def test_tautology(self, method):
        ctx = make_ctx(method, 8, slot_count=4)
        t = encrypt_table(ctx, {"bonus": [0, 1, 2, 3]}, [1, 2, 3, 4])
        mask = db_filter(ctx, t, Cmp(expr=Column(name="bonus"), op=">=", value=0))
        assert ctx.decrypt(mask).tolist() == [1, 1, 1, 1]
        none = db_filter(ctx, t, Cmp(expr=Column(name="bonus"), op="<", value=0))
        assert ctx.decrypt(db_select_ids(ctx, t, none)).tolist() == [0, 0, 0, 0]

    def test_idempotent_and(self, method):
        ctx = make_ctx(method, 8, slot_count=4)
        t = encrypt_table(ctx, {"bonus": [5, 50, 150, 250]}, [1, 2, 3, 4])
        pred = Between(expr=Column(name="bonus"), lo=40, hi=200)
        once = ctx.decrypt(db_filter(ctx, t, pred))
        twice = ctx.decrypt(db_filter(ctx, t, And(left=pred, right=pred)))
        assert once.tolist() == twice.tolist() == [0, 1, 1, 0]

    def test_or_and_equality(self, method):
        columns = {"a": [1, 2, 3, 4], "b": [9, 9, 0, 0]}
        ctx = make_ctx(method, 8, slot_count=4)
        t = encrypt_table(ctx, columns, [1, 2, 3, 4])
        pred = Or(
            left=Cmp(expr=Column(name="a"), op="==", value=3),
            right=Cmp(expr=BinOp(op="+", left=Column(name="a"), right=Column(name="b")), op=">", value=10),
        )
        assert ctx.decrypt(db_filter(ctx, t, pred)).tolist() == [0, 1, 1, 0]
        assert db_filter_plain(columns, pred).tolist() == [0, 1, 1, 0]

    def test_const_on_left(self, method):
        columns = {"a": [1, 2, 3, 4]}
        ctx = make_ctx(method, 8, slot_count=4)
        t = encrypt_table(ctx, columns, [1, 2, 3, 4])
        pred = Cmp(expr=BinOp(op="*", left=Const(value=3), right=Column(name="a")), op="<=", value=6)
        assert ctx.decrypt(db_filter(ctx, t, pred)).tolist() == [1, 1, 0, 0]

    def test_select_sum(self, method):
        ctx = make_ctx(method, 8, slot_count=4)
        t = encrypt_table(ctx, {"a": [1, 2, 3, 4]}, [7, 8, 9, 10])
        mask = db_filter(ctx, t, Cmp(expr=Column(name="a"), op=">", value=2))
        assert int(ctx.decrypt(db_select_ids(ctx, t, mask)).sum()) == 9 + 10

    def test_unknown_column(self, method):
        ctx = make_ctx(method, 8, slot_count=4)
        t = encrypt_table(ctx, {"a": [1, 2, 3, 4]}, [1, 2, 3, 4])
        with pytest.raises(KeyError):
            db_filter(ctx, t, Cmp(expr=Column(name="nope"), op="<", value=3))

    def test_random_tables(self, method):
        for rep in range(2):
            result = run_app(AppSpec(kind=AppKind.DB, method=method, b=8, size=16, rep=rep))
            assert result.oracle_match, result.detail


def test_predicate_mix_demo():
    mix = predicate_mix(demo_query(16), 83520)
    assert mix.compares == 4
    assert mix.muls == 4
    assert mix.masked == 1
    assert mix.mul_chain == 4
    assert mix.compare_chain == 1


def test_table_range_guard():
    ctx = make_ctx(Method.TFHE, 8)
    with pytest.raises(RangeViolation):
        encrypt_table(ctx, {"a": [1, 300]}, [1, 2])


@pytest.mark.parametrize("method", ALL_METHODS)
def test_product_range_meter(method):
    """a * a 가 2^8 을 넘는 행: 비트 방식은 감기고 원장에 기록, 워드 방식(Z_625)은 정확"""
    pred = Cmp(expr=BinOp(op="*", left=Column(name="a"), right=Column(name="a")), op=">", value=100)
    result = run_app(AppSpec(kind=AppKind.DB, method=method, b=8, size=2), columns={"a": [17, 3]}, pred=pred)
    if method is Method.TFHE:
        assert result.ledger.range_overflows >= 1
        assert not result.oracle_match
    else:
        assert result.ledger.range_overflows == 0
        assert result.oracle_match, result.detail


@pytest.mark.full_sweep
@pytest.mark.parametrize("method", ALL_METHODS)
@pytest.mark.parametrize("kind,size", [(AppKind.FLOYD, 32), (AppKind.TREE, 8), (AppKind.SORT, 16), (AppKind.DB, 512)])
def test_full_size(method, kind, size):
    result = run_app(AppSpec(kind=kind, method=method, b=8, size=size))
    assert result.oracle_match, result.detail
