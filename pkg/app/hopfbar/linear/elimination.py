"""模 p 高斯消去：numpy 稠密版與字典稀疏版。"""

from __future__ import annotations

from typing import Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np

# 稠密矩陣元素個數上限，超過改用稀疏消去
DENSE_LIMIT = 2_000_000


def row_reduce_mod_p(matrix: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    """回傳簡化列梯形矩陣與主元欄位。"""

    work = np.array(matrix, dtype=np.int64) % p
    rows, cols = work.shape
    pivots: List[int] = []
    row = 0
    for col in range(cols):
        if row >= rows:
            break
        candidates = np.nonzero(work[row:, col])[0]
        if candidates.size == 0:
            continue
        pivot = row + int(candidates[0])
        if pivot != row:
            work[[row, pivot]] = work[[pivot, row]]
        inv = pow(int(work[row, col]), p - 2, p)
        work[row] = (work[row] * inv) % p
        others = np.nonzero(work[:, col])[0]
        for other in others:
            if other != row:
                work[other] = (work[other] - work[other, col] * work[row]) % p
        pivots.append(col)
        row += 1
    return work, pivots


def rank_mod_p(matrix: np.ndarray, p: int) -> int:
    """稠密矩陣在 F_p 上的秩。"""

    if matrix.size == 0:
        return 0
    _, pivots = row_reduce_mod_p(matrix, p)
    return len(pivots)


def nullspace_mod_p(matrix: np.ndarray, p: int) -> List[np.ndarray]:
    """右零空間 {v : Mv = 0} 的一組基底。"""

    rows, cols = matrix.shape
    if rows == 0:
        return [np.eye(cols, dtype=np.int64)[k] for k in range(cols)]
    reduced, pivots = row_reduce_mod_p(matrix, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        vector = np.zeros(cols, dtype=np.int64)
        vector[f] = 1
        for r, pc in enumerate(pivots):
            vector[pc] = (-reduced[r, f]) % p
        basis.append(vector)
    return basis


class SparseEchelon:
    """逐列加入的稀疏半梯形基底，可用於求秩與商空間約化。"""

    def __init__(self, p: int, order: Optional[Dict[Hashable, int]] = None) -> None:
        self.p = p
        self.order = order
        self.rows: Dict[Hashable, Dict[Hashable, int]] = {}
        self._keys: Dict[Hashable, object] = {}

    def _key(self, column: Hashable) -> object:
        if self.order is not None:
            return self.order[column]
        key = self._keys.get(column)
        if key is None:
            key = self._keys[column] = repr(column)
        return key

    def reduce(self, vector: Dict[Hashable, int]) -> Dict[Hashable, int]:
        """以主元列消去所有主元欄位，餘項唯一。"""

        p = self.p
        work = {k: v % p for k, v in vector.items() if v % p}
        while True:
            columns = [c for c in work if c in self.rows]
            if not columns:
                return work
            column = min(columns, key=self._key)
            factor = work[column]
            for key, coef in self.rows[column].items():
                value = (work.get(key, 0) - factor * coef) % p
                if value:
                    work[key] = value
                else:
                    work.pop(key, None)

    def add(self, vector: Dict[Hashable, int]) -> bool:
        """加入一列；若線性獨立回傳 True。"""

        rest = self.reduce(vector)
        if not rest:
            return False
        lead = min(rest, key=self._key)
        inv = pow(rest[lead], self.p - 2, self.p)
        self.rows[lead] = {k: (v * inv) % self.p for k, v in rest.items()}
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)

    def pivots(self) -> List[Hashable]:
        return list(self.rows)


def sparse_rank(columns: Sequence[Dict[Hashable, int]], p: int) -> int:
    """一組稀疏向量張成空間的維度。"""

    echelon = SparseEchelon(p)
    for vector in columns:
        echelon.add(vector)
    return echelon.rank
