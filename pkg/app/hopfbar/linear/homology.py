"""以模 p 消去計算鏈複形的同調維度。"""

from __future__ import annotations

from typing import Iterable, List, Tuple

import numpy as np

from app.hopfbar.linear.elimination import DENSE_LIMIT, rank_mod_p, sparse_rank
from app.hopfbar.linear.modules import ChainComplex
from app.hopfbar.utils.logging import get_logger

logger = get_logger(__name__)


def differential_rank(cx: ChainComplex, degree: int) -> int:
    """d_degree : C_degree → C_{degree-1} 的秩。"""

    source = cx.module.basis(degree)
    target = cx.module.basis(degree - 1)
    if not source or not target:
        return 0
    p = cx.field.p
    if len(source) * len(target) <= DENSE_LIMIT:
        index = {label: k for k, label in enumerate(target)}
        matrix = np.zeros((len(source), len(target)), dtype=np.int64)
        for row, label in enumerate(source):
            for image, coef in cx.differential.entries.get(label, {}).items():
                matrix[row, index[image]] = coef
        return rank_mod_p(matrix, p)
    logger.debug("度數 %s 的矩陣過大，改用稀疏消去（%s × %s）", degree, len(source), len(target))
    return sparse_rank([cx.differential.entries.get(label, {}) for label in source], p)


def homology_ranks(cx: ChainComplex, degree_range: Iterable[int]) -> List[Tuple[int, int]]:
    """回傳各度數的同調維度 [(degree, rank), …]。"""

    degrees = sorted(set(degree_range))
    if not degrees:
        return []
    cx.check_square_zero(range(degrees[0], degrees[-1] + 2))
    ranks: List[Tuple[int, int]] = []
    cache = {}

    def rank_at(n: int) -> int:
        if n not in cache:
            cache[n] = differential_rank(cx, n)
        return cache[n]

    for n in degrees:
        dim = cx.module.dimension(n)
        ranks.append((n, dim - rank_at(n) - rank_at(n + 1)))
    logger.info("同調維度計算完成：%s", ranks)
    return ranks
