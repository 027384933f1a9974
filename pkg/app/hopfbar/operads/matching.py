"""Λ*-模結構：單射的逆變作用、匹配模與 PrimOp 權重索引。"""

from __future__ import annotations

from itertools import product
from typing import Dict, Iterable, List, Tuple

import numpy as np

from app.hopfbar.combinatorics.permutations import InjectiveMap, lambda_decompose
from app.hopfbar.linear.combination import merge
from app.hopfbar.linear.elimination import nullspace_mod_p, row_reduce_mod_p
from app.hopfbar.linear.modules import GradedBasedModule, SparseGradedMap
from app.hopfbar.operads.base import Combo, DgOperad

WeightVector = Tuple[int, ...]


def lambda_action(M: DgOperad, u: InjectiveMap, x: Combo) -> Combo:
    """u* = σ*∘α*：α* 依補集由大到小套用 ∂_i，σ*(p) = σ⁻¹·p。"""

    alpha, sigma = lambda_decompose(u)
    current = dict(x)
    for index in reversed(alpha.complement()):
        current = M.partial_combo(current, index)
    return M.act_combo(sigma.inverse(), current)


def _matching_columns(M: DgOperad, r: int, degree: int) -> List[Tuple[int, object]]:
    return [(i, y) for i in range(1, r + 1) for y in M.basis(r - 1, degree)]


def lambda_matching(M: DgOperad, r: int, degrees: Iterable[int]) -> Tuple[GradedBasedModule, SparseGradedMap]:
    """匹配模 Match(r) = ker(d⁰ − d¹) ⊆ ∏_i M(r−1) 與 μ(x) = (∂_i x)_i。

    Match(r) 的基底標籤為 (degree, k)，對應零空間的第 k 個基底向量。
    """

    p = M.p
    kernels: Dict[int, Tuple[List[Tuple[int, object]], List[np.ndarray], List[int]]] = {}
    for degree in degrees:
        columns = _matching_columns(M, r, degree)
        if not columns:
            continue
        rows: List[Tuple[int, int, object]] = []
        if r >= 2:
            rows = [(a, b, z) for a in range(1, r + 1) for b in range(a + 1, r + 1) for z in M.basis(r - 2, degree)]
        row_index = {row: k for k, row in enumerate(rows)}
        matrix = np.zeros((len(rows), len(columns)), dtype=np.int64)
        for col, (i, y) in enumerate(columns):
            for a in range(1, i):
                for z, c in M.partial(y, a).items():
                    matrix[row_index[(a, i, z)], col] += c
            for b in range(i + 1, r + 1):
                for z, c in M.partial(y, b - 1).items():
                    matrix[row_index[(i, b, z)], col] -= c
        basis = nullspace_mod_p(matrix % p, p)
        pivots = row_reduce_mod_p(matrix % p, p)[1] if rows else []
        free = [c for c in range(len(columns)) if c not in pivots]
        kernels[degree] = (columns, basis, free)
    module = GradedBasedModule(
        {degree: [(degree, k) for k in range(len(kernels[degree][1]))] for degree in kernels},
        formatter=lambda label: f"match{label[0]}.{label[1]}",
    )

    def matching_map(x: object) -> Combo:
        degree = M.degree(x)
        if degree not in kernels:
            return {}
        columns, _, free = kernels[degree]
        vector: Combo = {}
        for i in range(1, r + 1):
            for z, c in M.partial(x, i).items():
                merge(vector, {(i, z): 1}, c, p)
        image: Combo = {}
        # 零空間基底在自由欄位上是單位向量，故座標即自由欄位上的值
        for k, column in enumerate(free):
            coef = vector.get(columns[column], 0)
            if coef % p:
                image[(degree, k)] = coef % p
        return image

    source = GradedBasedModule({d: M.basis(r, d) for d in kernels}, formatter=M.format_label)
    return module, SparseGradedMap.from_function(source, module, 0, matching_map, M.field)


def prim_op_weights(r: int, weight_max: int) -> List[WeightVector]:
    """PrimOp(r) 的截斷指標：0 < Σm ≤ weight_max 的非負權重向量。"""

    found = [m for m in product(range(weight_max + 1), repeat=r) if 0 < sum(m) <= weight_max]
    return sorted(found, key=lambda m: (sum(m), m))


def prim_op_matching(r: int, weight_max: int) -> Dict[int, List[WeightVector]]:
    """匹配物件的受限乘積：含 0 分量的權重向量，依第一個 0 的位置分組。"""

    groups: Dict[int, List[WeightVector]] = {}
    for m in prim_op_weights(r, weight_max):
        if 0 in m:
            groups.setdefault(m.index(0) + 1, []).append(m)
    return groups
