"""交換算子 C：每個元數都是 F，集中在 0 度。"""

from __future__ import annotations

from typing import Dict, List, Tuple

from app.hopfbar.combinatorics.permutations import Permutation
from app.hopfbar.operads.base import DgOperad


class CommutativeOperad(DgOperad):
    """標籤就是元數 r，代表 1_r。"""

    name = "C"

    def __init__(self, p: int = 2, arity_max: int = 6, degree_max: int = 0) -> None:
        super().__init__(p, arity_max, degree_max)

    def arity(self, label: int) -> int:
        return label

    def degree(self, label: int) -> int:
        return 0

    def _enumerate(self, r: int, d: int) -> List[int]:
        return [r] if d == 0 else []

    def act(self, perm: Permutation, label: int) -> Dict[int, int]:
        return {label: 1}

    def compose(self, x: int, i: int, y: int) -> Dict[int, int]:
        return {x + y - 1: 1}

    def differential(self, label: int) -> Dict[int, int]:
        return {}

    def unit(self) -> int:
        return 1

    def star(self) -> int:
        return 0

    @property
    def is_hopf(self) -> bool:
        return True

    def diagonal(self, label: int) -> Dict[Tuple[int, int], int]:
        return {(label, label): 1}

    def counit(self, label: int) -> int:
        return 1

    def format_label(self, label: int) -> str:
        return f"c{label}"

    def parse_label(self, text: str) -> int:
        if not text.startswith("c"):
            raise ValueError(f"交換算子標籤格式錯誤：{text}")
        return int(text[1:])
