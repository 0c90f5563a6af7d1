# bench_routes.py
"""
모듈 설명:
    - bench 서브커맨드: 마이크로 워크로드 W1-W3 스윕
주요 기능:
    - fhegen bench --workload w1 --method encoding --bits 8 --slots 100
"""
from app.core.logger import get_logger
from app.core.runner import run_sweep, workload_specs
from app.domain.schemas import Method, ScenarioConfig, WorkloadKind
from app.endpoints.common import add_sweep_arguments, finish

logger = get_logger(__name__)


def register(subparsers):
    parser = subparsers.add_parser("bench", help="마이크로 워크로드 벤치마크")
    parser.add_argument("--workload", nargs="+", default=[k.value for k in WorkloadKind],
                        choices=[k.value for k in WorkloadKind], help="워크로드 (여러 개 가능)")
    parser.add_argument("--slots", nargs="+", type=int, default=[1], help="슬롯 수 (여러 개 가능)")
    add_sweep_arguments(parser)
    parser.set_defaults(handler=handle)


def handle(args, config: ScenarioConfig) -> int:
    if any(n < 1 for n in args.slots):
        raise ValueError(f"슬롯 수는 1 이상이어야 합니다: {args.slots}")
    if args.repeat < 0:
        raise ValueError(f"repeat 는 0 이상이어야 합니다: {args.repeat}")
    seed = config.rng.seed if args.seed is None else args.seed
    specs = workload_specs(
        kinds=[WorkloadKind(k) for k in args.workload],
        methods=[Method(m) for m in args.method],
        bits=args.bits,
        slots=args.slots,
        seed=seed,
        repeat=args.repeat,
    )
    logger.info(f"📊 bench: {len(specs)} scenarios (seed={seed})")
    rows = run_sweep(specs, config, workers=args.workers)
    return finish(rows, args, config)
