# advise_routes.py
"""
모듈 설명:
    - advise 서브커맨드: 방식 선택 조언과 비용 예측
주요 기능:
    - fhegen advise --op-mix mixed --simd --exact : 한 칸 추천
    - fhegen advise --table : 12 칸 결정표
    - fhegen advise --predict --bits 6 8 12 16 : 방식별 비교 비용 예측
"""
import argparse
import json

from app.core.costmodel import advise, advise_table, predict
from app.core.report import write_report
from app.domain.param_definition import BIT_WIDTHS
from app.domain.schemas import AdvisorQuery, Method, OpMix, ScenarioConfig


def register(subparsers):
    parser = subparsers.add_parser("advise", help="방식 선택 조언")
    parser.add_argument("--op-mix", default=OpMix.MIXED.value, choices=[m.value for m in OpMix])
    parser.add_argument("--simd", action=argparse.BooleanOptionalAction, default=True, help="SIMD 유용 여부 (--no-simd)")
    parser.add_argument("--exact", action=argparse.BooleanOptionalAction, default=True, help="정확한 결과 필요 여부 (--no-exact)")
    parser.add_argument("--table", action="store_true", help="12 칸 결정표 전체 출력")
    parser.add_argument("--predict", action="store_true", help="방식별 비교 비용 예측 출력")
    parser.add_argument("--bits", nargs="+", type=int, default=list(BIT_WIDTHS), choices=list(BIT_WIDTHS))
    parser.set_defaults(handler=handle)


def _line(payload: dict) -> str:
    return json.dumps(payload, ensure_ascii=False, sort_keys=True) + "\n"


def handle(args, config: ScenarioConfig) -> int:
    lines = []
    if args.predict:
        for method in Method:
            for b in args.bits:
                p = predict(method, b, calibration=config.profile(method).calibration)
                lines.append(_line(p.model_dump(mode="json")))
    elif args.table:
        for q, rec in advise_table():
            lines.append(_line({"query": q.model_dump(mode="json"), "recommendation": rec.model_dump(mode="json")}))
    else:
        q = AdvisorQuery(op_mix=OpMix(args.op_mix), simd_useful=args.simd, exact_required=args.exact)
        lines.append(_line({"query": q.model_dump(mode="json"), "recommendation": advise(q).model_dump(mode="json")}))
    write_report("".join(lines).encode("utf-8"), args.out)
    return 0
