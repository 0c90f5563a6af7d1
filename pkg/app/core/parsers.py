"""
응용 입력 파일 파서

- 그래프 : 간선 목록 텍스트 (한 줄에 u v w, 쉼표 또는 공백 구분, # 주석)
- 트리   : 층마다 한 줄 'feature:threshold' 토큰 2^level 개, 마지막 줄은 리프 라벨
- 테이블 : 헤더가 있는 CSV (id 열이 있으면 ID 로 사용)
- 조건식 : Predicate JSON
"""
import re
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd
from pydantic import TypeAdapter, ValidationError

from app.core.apps import EncTree, Predicate
from app.core.logger import get_logger
from app.domain.errors import InputParseError

logger = get_logger(__name__)

NO_EDGE = 1 << 62
"""간선 없음 표시 (응용 쪽에서 INF 로 잘림)"""

_SPLIT = re.compile(r"[,\s]+")

PathLike = Union[str, Path]


def _lines(path: PathLike) -> list[tuple[int, str]]:
    path = Path(path)
    if not path.is_file():
        raise InputParseError(f"입력 파일이 존재하지 않습니다: {path}")
    out = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((lineno, line))
    return out


def parse_edge_list(path: PathLike, nodes: Optional[int] = None) -> np.ndarray:
    """
    간선 목록 -> 인접 행렬 (대각 0, 간선 없음 NO_EDGE)

    Raises:
        InputParseError: 형식 오류, 음수 가중치, 노드 범위 초과
    """
    edges = []
    for lineno, line in _lines(path):
        tokens = _SPLIT.split(line)
        if len(tokens) != 3:
            raise InputParseError(f"{path}:{lineno} 'u v w' 형식이 아닙니다: {line}")
        try:
            u, v, w = (int(t) for t in tokens)
        except ValueError:
            raise InputParseError(f"{path}:{lineno} 정수가 아닙니다: {line}")
        if u < 0 or v < 0:
            raise InputParseError(f"{path}:{lineno} 노드 번호는 0 이상이어야 합니다")
        if w < 0:
            raise InputParseError(f"{path}:{lineno} 음수 가중치는 지원하지 않습니다: {w}")
        edges.append((u, v, w))

    n = nodes or (max(max(u, v) for u, v, _ in edges) + 1 if edges else 0)
    if n < 1:
        raise InputParseError(f"{path}: 간선이 없고 노드 수도 지정되지 않았습니다")
    adj = np.full((n, n), NO_EDGE, dtype=np.int64)
    np.fill_diagonal(adj, 0)
    for u, v, w in edges:
        if u >= n or v >= n:
            raise InputParseError(f"{path}: 노드 번호 {max(u, v)} 가 노드 수 {n} 을 넘습니다")
        if u != v:
            adj[u, v] = min(adj[u, v], w)
    logger.info(f"📄 그래프 적재: {path} (n={n}, edges={len(edges)})")
    return adj


def parse_tree(path: PathLike) -> EncTree:
    """
    레벨 순서 트리 파일

    Raises:
        InputParseError: 토큰 형식 오류 또는 완전 이진 트리가 아닐 때
    """
    lines = _lines(path)
    if len(lines) < 2:
        raise InputParseError(f"{path}: 노드 층과 라벨 줄이 필요합니다")
    thresholds, features = [], []
    for lineno, line in lines[:-1]:
        level_thr, level_feat = [], []
        for token in _SPLIT.split(line):
            feat, sep, thr = token.partition(":")
            if not sep:
                raise InputParseError(f"{path}:{lineno} 'feature:threshold' 형식이 아닙니다: {token}")
            try:
                level_feat.append(int(feat))
                level_thr.append(int(thr))
            except ValueError:
                raise InputParseError(f"{path}:{lineno} 정수가 아닙니다: {token}")
        thresholds.append(level_thr)
        features.append(level_feat)
    lineno, label_line = lines[-1]
    try:
        labels = [int(t) for t in _SPLIT.split(label_line)]
        return EncTree(depth=len(thresholds), thresholds=thresholds, features=features, labels=labels)
    except ValueError as e:
        raise InputParseError(f"{path}:{lineno} 트리 구성 오류: {e}")


def parse_table(path: PathLike) -> tuple[dict[str, np.ndarray], Optional[np.ndarray]]:
    """
    CSV 테이블 -> (열 dict, id 열 또는 None)

    Raises:
        InputParseError: 읽기 실패, 비정수 또는 음수 값
    """
    path = Path(path)
    if not path.is_file():
        raise InputParseError(f"입력 파일이 존재하지 않습니다: {path}")
    try:
        df = pd.read_csv(path, skipinitialspace=True)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise InputParseError(f"{path}: CSV 를 읽을 수 없습니다: {e}")
    if df.empty:
        raise InputParseError(f"{path}: 데이터 행이 없습니다")
    for name in df.columns:
        if not pd.api.types.is_integer_dtype(df[name]):
            raise InputParseError(f"{path}: 열 {name} 에 정수가 아닌 값이 있습니다")
        if (df[name] < 0).any():
            raise InputParseError(f"{path}: 열 {name} 에 음수가 있습니다")
    ids = df.pop("id").to_numpy(dtype=np.int64) if "id" in df.columns else None
    columns = {str(name): df[name].to_numpy(dtype=np.int64) for name in df.columns}
    logger.info(f"📄 테이블 적재: {path} (rows={len(df)}, columns={list(columns)})")
    return columns, ids


_PREDICATE = TypeAdapter(Predicate)


def parse_predicate(text: str) -> Predicate:
    """
    Predicate JSON 예:
        {"kind": "cmp", "expr": {"kind": "column", "name": "bonus"}, "op": ">=", "value": 10}

    Raises:
        InputParseError: JSON 또는 스키마 오류
    """
    try:
        return _PREDICATE.validate_json(text)
    except ValidationError as e:
        raise InputParseError(f"조건식을 해석할 수 없습니다: {e}")
