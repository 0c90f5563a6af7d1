# report_routes.py
"""
모듈 설명:
    - report 서브커맨드: jsonl 리포트를 다른 형식 또는 figure 표로 변환
주요 기능:
    - fhegen --format csv report results.jsonl
    - fhegen report results.jsonl --figure --metric nonscalar_mults
"""
from app.core.report import FIGURE_METRICS, emit_figures, emit_report, load_report, write_report
from app.domain.schemas import ScenarioConfig


def register(subparsers):
    parser = subparsers.add_parser("report", help="리포트 변환 / figure 표")
    parser.add_argument("path", help="jsonl 리포트 파일")
    parser.add_argument("--figure", action="store_true", help="비용-비트 폭, 비용-크기 표 출력")
    parser.add_argument("--metric", default=FIGURE_METRICS[0], choices=list(FIGURE_METRICS))
    parser.set_defaults(handler=handle)


def handle(args, config: ScenarioConfig) -> int:
    rows = load_report(args.path)
    if args.figure:
        data = emit_figures(rows, args.metric)
    else:
        data = emit_report(rows, args.report_format or config.report_format)
    write_report(data, args.out)
    return 0
