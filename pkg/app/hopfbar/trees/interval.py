"""鏈區間 I：邊長 x0、x1（0 度）與 x01（1 度）。"""

from __future__ import annotations

from enum import Enum
from typing import Dict, List, Optional, Tuple


class EdgeLength(str, Enum):
    X0 = "x0"
    X1 = "x1"
    X01 = "x01"

    @property
    def degree(self) -> int:
        return 1 if self is EdgeLength.X01 else 0


_PRODUCT = {
    (EdgeLength.X0, EdgeLength.X0): EdgeLength.X0,
    (EdgeLength.X01, EdgeLength.X0): EdgeLength.X01,
    (EdgeLength.X0, EdgeLength.X01): EdgeLength.X01,
    (EdgeLength.X0, EdgeLength.X1): EdgeLength.X1,
    (EdgeLength.X1, EdgeLength.X0): EdgeLength.X1,
    (EdgeLength.X1, EdgeLength.X1): EdgeLength.X1,
}


def interval_product(left: EdgeLength, right: EdgeLength) -> Optional[EdgeLength]:
    """由 (s,t) ↦ max(s,t) 誘導的乘積；其餘配對為 0（回傳 None）。"""

    return _PRODUCT.get((left, right))


def interval_differential(length: EdgeLength) -> List[Tuple[EdgeLength, int]]:
    """δ(x01) = x1 − x0。"""

    if length is EdgeLength.X01:
        return [(EdgeLength.X1, 1), (EdgeLength.X0, -1)]
    return []


def interval_diagonal(length: EdgeLength) -> List[Tuple[EdgeLength, EdgeLength]]:
    """Δ(x01) = x0⊗x01 + x01⊗x1，頂點元素為類群元。"""

    if length is EdgeLength.X01:
        return [(EdgeLength.X0, EdgeLength.X01), (EdgeLength.X01, EdgeLength.X1)]
    return [(length, length)]


def interval_counit(length: EdgeLength) -> int:
    return 0 if length is EdgeLength.X01 else 1


def interval_table() -> Dict[Tuple[str, str], str]:
    """乘積表的文字形式，0 以 "0" 表示。"""

    table = {}
    for left in EdgeLength:
        for right in EdgeLength:
            value = interval_product(left, right)
            table[(left.value, right.value)] = value.value if value else "0"
    return table
