# app_routes.py
"""
모듈 설명:
    - app 서브커맨드: 응용 시나리오 (floyd, tree, sort, db)
주요 기능:
    - fhegen app floyd --nodes 16 --method tfhe --bits 8
    - fhegen app tree --depth 4 [--tree FILE --features 3,9]
    - fhegen app sort --len 8
    - fhegen app db --rows 512 [--table FILE --where JSON]
"""
from app.core.logger import get_logger
from app.core.parsers import parse_edge_list, parse_predicate, parse_table, parse_tree
from app.core.runner import app_specs, run_sweep
from app.domain.schemas import AppKind, Method, ScenarioConfig
from app.endpoints.common import add_sweep_arguments, finish

logger = get_logger(__name__)

DEFAULT_SIZE = {
    AppKind.FLOYD: 4,
    AppKind.TREE: 2,
    AppKind.SORT: 4,
    AppKind.DB: 16,
}


def register(subparsers):
    parser = subparsers.add_parser("app", help="응용 시나리오 실행")
    parser.add_argument("kind", choices=[k.value for k in AppKind], help="응용 종류")
    parser.add_argument("--nodes", "--depth", "--len", "--rows", "--size", dest="size", nargs="+",
                        type=int, default=None, help="인스턴스 크기 (노드 수 / 트리 깊이 / 길이 / 행 수)")
    parser.add_argument("--graph", default=None, help="간선 목록 파일 (floyd)")
    parser.add_argument("--tree", dest="tree_file", default=None, help="레벨 순서 트리 파일 (tree)")
    parser.add_argument("--features", default=None, help="특성 벡터, 쉼표 구분 (tree)")
    parser.add_argument("--table", default=None, help="CSV 테이블 (db)")
    parser.add_argument("--where", default=None, help="Predicate JSON (db, 기본: 데모 질의)")
    add_sweep_arguments(parser)
    parser.set_defaults(handler=handle)


def _inputs(kind: AppKind, args) -> tuple[dict, list[int]]:
    """입력 파일이 있으면 (인자, 크기) 를 파일에서 결정"""
    if kind is AppKind.FLOYD and args.graph:
        adj = parse_edge_list(args.graph)
        return {"adj": adj}, [len(adj)]
    if kind is AppKind.TREE and args.tree_file:
        tree = parse_tree(args.tree_file)
        inputs = {"tree": tree}
        if args.features:
            inputs["x"] = [int(v) for v in args.features.split(",")]
            if len(inputs["x"]) < tree.feature_count:
                raise ValueError(f"특성 수({len(inputs['x'])})가 트리가 읽는 특성 수({tree.feature_count})보다 적습니다")
        return inputs, [tree.depth]
    if kind is AppKind.DB and (args.table or args.where):
        inputs = {}
        sizes = args.size or [DEFAULT_SIZE[kind]]
        if args.table:
            columns, ids = parse_table(args.table)
            inputs.update(columns=columns, ids=ids)
            sizes = [len(next(iter(columns.values())))]
        if args.where:
            inputs["pred"] = parse_predicate(args.where)
        return inputs, sizes
    return {}, args.size or [DEFAULT_SIZE[kind]]


def handle(args, config: ScenarioConfig) -> int:
    kind = AppKind(args.kind)
    if args.repeat < 0:
        raise ValueError(f"repeat 는 0 이상이어야 합니다: {args.repeat}")
    inputs, sizes = _inputs(kind, args)
    seed = config.rng.seed if args.seed is None else args.seed
    specs = app_specs(kind, [Method(m) for m in args.method], args.bits, sizes, seed, args.repeat)
    logger.info(f"📊 app {kind.value}: {len(specs)} scenarios (seed={seed})")
    rows = run_sweep(specs, config, workers=args.workers, **inputs)
    return finish(rows, args, config)
