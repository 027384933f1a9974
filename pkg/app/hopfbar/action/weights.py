"""權重向量 (m₁,…,m_r) 與作用的有限截斷界限。"""

from __future__ import annotations

from itertools import product
from typing import Iterator, List, Sequence, Tuple

from pydantic import BaseModel, model_validator

from app.hopfbar.combinatorics.permutations import Permutation, block_order, shuffle_index

WeightVector = Tuple[int, ...]


class ActionBounds(BaseModel):
    """ρ 表格的截斷：元數、總權重、胞腔度數、總度數與 bar 長度。"""

    r_max: int = 3
    weight_max: int = 4
    cell_degree_max: int = 1
    degree_max: int = 2
    bar_length: int = 4

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def _check(self) -> "ActionBounds":
        if min(self.r_max, self.weight_max, self.bar_length) < 1:
            raise ValueError("元數、權重與 bar 長度上限必須為正")
        if min(self.cell_degree_max, self.degree_max) < 0:
            raise ValueError("度數上限必須非負")
        if self.weight_max > self.bar_length:
            raise ValueError(f"weight_max ({self.weight_max}) 不可超過 bar_length ({self.bar_length})")
        return self

    def header(self) -> str:
        return (
            f"r_max={self.r_max} weight_max={self.weight_max} cell_degree_max={self.cell_degree_max} "
            f"degree_max={self.degree_max} bar_length={self.bar_length}"
        )

    @classmethod
    def from_header(cls, text: str) -> "ActionBounds":
        values = dict(item.split("=", 1) for item in text.split())
        return cls.model_validate({key: int(value) for key, value in values.items()})


def format_weights(m: Sequence[int]) -> str:
    return "(" + ",".join(str(k) for k in m) + ")"


def parse_weights(text: str) -> WeightVector:
    text = text.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise ValueError(f"權重向量須以括號包住：{text}")
    body = text[1:-1].strip()
    if not body:
        return ()
    m = tuple(int(part) for part in body.split(","))
    if any(k < 0 for k in m):
        raise ValueError(f"權重必須非負：{text}")
    return m


def positive_weights(r: int, weight_max: int) -> List[WeightVector]:
    """每個分量皆為正、總和 ≤ weight_max 的權重向量，依 (總和, 字典序) 排序。"""

    found = [m for m in product(range(1, weight_max + 1), repeat=r) if sum(m) <= weight_max]
    return sorted(found, key=lambda m: (sum(m), m))


def weight_splittings(m: Sequence[int], n: int) -> Iterator[Tuple[WeightVector, ...]]:
    """把 m 拆成 n 個權重向量之和，每一份的總和都為正。"""

    r = len(m)

    def compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
        if parts == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in compositions(total - first, parts - 1):
                yield (first,) + rest

    per_entry = [list(compositions(mk, n)) for mk in m]
    for choice in product(*per_entry):
        pieces = tuple(tuple(choice[k][j] for k in range(r)) for j in range(n))
        if all(sum(piece) > 0 for piece in pieces):
            yield pieces


def permuted_weights(m: Sequence[int], perm: Permutation) -> WeightVector:
    """(m∘σ)_j = m_{σ(j)}。"""

    return tuple(m[perm(j) - 1] for j in range(1, perm.arity + 1))


def block_shuffle(before: Sequence[int], pieces: Sequence[Sequence[int]], after: Sequence[int]) -> Permutation:
    """把「第 j 份、第 k 個輸入」的排列換成「第 k 個輸入、第 j 份」，前後區塊不動。

    pieces[j][k] 為第 j 份在第 k 個輸入上的字母數；回傳序列形式的置換。
    """

    n = len(pieces)
    s = len(pieces[0]) if pieces else 0
    flat = list(before) + [pieces[j][k] for k in range(s) for j in range(n)] + list(after)
    head = len(before)
    order = list(range(1, head + 1))
    order.extend(head + index for index in shuffle_index(s, n).images)
    order.extend(range(head + n * s + 1, head + n * s + len(after) + 1))
    return block_order(flat, order)
