"""結構化例外類別。"""

from __future__ import annotations

from typing import Any, Iterable


class ShapeMismatchError(ValueError):
    """線性映射的來源、目標或度數不相容。"""

    def __init__(self, message: str, degrees: Iterable[int] = ()) -> None:
        self.degrees = tuple(degrees)
        suffix = f"（度數：{list(self.degrees)}）" if self.degrees else ""
        super().__init__(f"{message}{suffix}")


class NotAChainComplexError(ValueError):
    """微分平方不為零，附上見證基底元素。"""

    def __init__(self, witness: Any, degree: int) -> None:
        self.witness = witness
        self.degree = degree
        super().__init__(f"d∘d ≠ 0：度數 {degree} 的基底元素 {witness!r}")


class OutOfTruncationError(LookupError):
    """查詢超出已建立的有限截斷範圍。"""

    def __init__(self, what: str, key: Any = None) -> None:
        self.what = what
        self.key = key
        detail = f"：{key}" if key is not None else ""
        super().__init__(f"超出截斷範圍（{what}）{detail}")


class RecursionCycleError(RuntimeError):
    """遞迴建構時偵測到循環相依。"""

    def __init__(self, key: Any) -> None:
        self.key = key
        super().__init__(f"遞迴建構出現循環：{key}")


class UnsupportedFixtureError(ValueError):
    """不支援的測試代數種類。"""

    def __init__(self, kind: str) -> None:
        self.kind = kind
        super().__init__(f"不支援的代數種類：{kind}")


class LiftObstructionError(RuntimeError):
    """ν 的輸入不是增廣核中的循環，無法提升。"""

    def __init__(self, key: Any, weights: Any, defect: str) -> None:
        self.key = key
        self.weights = weights
        self.defect = defect
        super().__init__(f"無法提升 {key} {weights}：{defect}")
