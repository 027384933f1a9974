"""dg 算子的共同介面與算子元素。"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from app.hopfbar.combinatorics.permutations import Permutation
from app.hopfbar.errors import OutOfTruncationError, ShapeMismatchError
from app.hopfbar.linear.combination import format_combination, merge
from app.hopfbar.linear.field import PrimeField, get_field
from app.hopfbar.linear.modules import ChainComplex, GradedBasedModule
from app.hopfbar.utils.logging import get_logger

logger = get_logger(__name__)

Label = Hashable
Combo = Dict[Label, int]


class DgOperad(ABC):
    """以基底標籤外延儲存的 dg 算子（有限截斷）。

    合成、作用與微分以逐基底的公式計算；截斷只限制基底枚舉。
    """

    name: str = "operad"

    def __init__(self, p: int, arity_max: int, degree_max: int) -> None:
        self.field: PrimeField = get_field(p)
        self.p = p
        self.arity_max = arity_max
        self.degree_max = degree_max

    # ------------------------------------------------------------------
    # 基底
    # ------------------------------------------------------------------

    @abstractmethod
    def arity(self, label: Label) -> int:
        """標籤所在的元數。"""

    @abstractmethod
    def degree(self, label: Label) -> int:
        """標籤的度數。"""

    @abstractmethod
    def _enumerate(self, r: int, d: int) -> List[Label]:
        """元數 r、度數 d 的基底（不檢查截斷）。"""

    def basis(self, r: int, d: int) -> List[Label]:
        """截斷範圍內的基底標籤；超出範圍時拋出 OutOfTruncationError。"""

        if r > self.arity_max:
            raise OutOfTruncationError(f"{self.name} 元數上限 {self.arity_max}", r)
        if d > self.degree_max:
            raise OutOfTruncationError(f"{self.name} 度數上限 {self.degree_max}", d)
        return self._enumerate(r, d)

    def basis_upto(self, r: int, degree_max: Optional[int] = None) -> List[Label]:
        top = self.degree_max if degree_max is None else degree_max
        return [label for d in range(self.min_degree(r), top + 1) for label in self.basis(r, d)]

    def min_degree(self, r: int) -> int:
        return 0

    # ------------------------------------------------------------------
    # 結構
    # ------------------------------------------------------------------

    @abstractmethod
    def act(self, perm: Permutation, label: Label) -> Combo:
        """左作用 σ·x。"""

    @abstractmethod
    def compose(self, x: Label, i: int, y: Label) -> Combo:
        """部分合成 x ∘_i y。"""

    @abstractmethod
    def differential(self, label: Label) -> Combo:
        """內部微分。"""

    @abstractmethod
    def unit(self) -> Label:
        """P(1) 中的單位元。"""

    def star(self) -> Optional[Label]:
        """P(0) 的生成元；非單位算子回傳 None。"""

        return None

    @property
    def is_unital(self) -> bool:
        return self.star() is not None

    def partial(self, x: Label, i: int) -> Combo:
        """x ∘_i *。"""

        star = self.star()
        if star is None:
            raise NotImplementedError(f"{self.name} 沒有 0 元操作")
        return self.compose(x, i, star)

    @property
    def is_hopf(self) -> bool:
        return False

    def diagonal(self, label: Label) -> Dict[Tuple[Label, Label], int]:
        raise NotImplementedError(f"{self.name} 沒有 Hopf 對角")

    def counit(self, label: Label) -> int:
        raise NotImplementedError(f"{self.name} 沒有餘單位")

    def format_label(self, label: Label) -> str:
        return str(label)

    def parse_label(self, text: str) -> Label:
        raise NotImplementedError(f"{self.name} 不支援標籤解析")

    # ------------------------------------------------------------------
    # 線性延拓
    # ------------------------------------------------------------------

    def compose_combo(self, x: Combo, i: int, y: Combo) -> Combo:
        result: Combo = {}
        for a, ca in x.items():
            for b, cb in y.items():
                merge(result, self.compose(a, i, b), ca * cb, self.p)
        return result

    def act_combo(self, perm: Permutation, x: Combo) -> Combo:
        result: Combo = {}
        for label, coef in x.items():
            merge(result, self.act(perm, label), coef, self.p)
        return result

    def differential_combo(self, x: Combo) -> Combo:
        result: Combo = {}
        for label, coef in x.items():
            merge(result, self.differential(label), coef, self.p)
        return result

    def partial_combo(self, x: Combo, i: int) -> Combo:
        result: Combo = {}
        for label, coef in x.items():
            merge(result, self.partial(label, i), coef, self.p)
        return result

    def diagonal_combo(self, x: Combo) -> Dict[Tuple[Label, Label], int]:
        result: Dict[Tuple[Label, Label], int] = {}
        for label, coef in x.items():
            merge(result, self.diagonal(label), coef, self.p)
        return result

    def compose_many(self, x: Combo, inputs: Sequence[Combo]) -> Combo:
        """完整合成 x(y₁,…,y_n)，由左至右逐一以 ∘_pos 代入。"""

        current = dict(x)
        position = 1
        for y in inputs:
            arity = None
            for label in y:
                arity = self.arity(label)
                break
            if arity is None:
                return {}
            current = self.compose_combo(current, position, y)
            position += arity
        return current

    def format_combo(self, combo: Combo) -> str:
        return format_combination(combo, self.format_label, self.p)

    # ------------------------------------------------------------------
    # 鏈複形
    # ------------------------------------------------------------------

    def module(self, r: int, degrees: Iterable[int]) -> GradedBasedModule:
        return GradedBasedModule({d: self.basis(r, d) for d in degrees}, formatter=self.format_label)

    def chain_complex(self, r: int, degree_max: Optional[int] = None) -> ChainComplex:
        """元數 r 的鏈複形 P(r)，截到 degree_max。"""

        top = self.degree_max if degree_max is None else degree_max
        module = self.module(r, range(self.min_degree(r), top + 1))
        return ChainComplex.from_function(module, self.differential, self.field)


@dataclass
class OperadElement:
    """算子中某元數的有限線性組合。"""

    operad: DgOperad
    arity: int
    terms: Combo = field(default_factory=dict)

    @classmethod
    def basis_element(cls, operad: DgOperad, label: Label, coef: int = 1) -> "OperadElement":
        return cls(operad, operad.arity(label), {label: coef % operad.p} if coef % operad.p else {})

    def __post_init__(self) -> None:
        for label in self.terms:
            if self.operad.arity(label) != self.arity:
                raise ShapeMismatchError(f"元數不符：{self.operad.format_label(label)} 不在元數 {self.arity}")

    def degrees(self) -> List[int]:
        return sorted({self.operad.degree(label) for label in self.terms})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "OperadElement") -> "OperadElement":
        if other.arity != self.arity:
            raise ShapeMismatchError("相加的算子元素元數不同", [self.arity, other.arity])
        terms = dict(self.terms)
        merge(terms, other.terms, 1, self.operad.p)
        return OperadElement(self.operad, self.arity, terms)

    def scale(self, factor: int) -> "OperadElement":
        terms: Combo = {}
        merge(terms, self.terms, factor, self.operad.p)
        return OperadElement(self.operad, self.arity, terms)

    def act(self, perm: Permutation) -> "OperadElement":
        return OperadElement(self.operad, self.arity, self.operad.act_combo(perm, self.terms))

    def differential(self) -> "OperadElement":
        return OperadElement(self.operad, self.arity, self.operad.differential_combo(self.terms))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, OperadElement) and other.arity == self.arity and other.terms == self.terms

    def __str__(self) -> str:
        return self.operad.format_combo(self.terms)


def operad_compose(p: OperadElement, i: int, q: OperadElement) -> OperadElement:
    """p ∘_i q 的雙線性延拓。"""

    if p.operad is not q.operad:
        raise ShapeMismatchError("兩個元素必須屬於同一個算子")
    if not 1 <= i <= p.arity:
        raise ShapeMismatchError(f"合成位置 {i} 超出元數 {p.arity}", [i, p.arity])
    return OperadElement(p.operad, p.arity + q.arity - 1, p.operad.compose_combo(p.terms, i, q.terms))

