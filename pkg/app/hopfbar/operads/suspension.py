"""算子懸置 ΛP(r) = Σ^{1−r}P(r) ⊗ sgn(r)。"""

from __future__ import annotations

from typing import Dict, List, Optional

from app.hopfbar.combinatorics.permutations import Permutation
from app.hopfbar.operads.base import Combo, DgOperad, Label


class SuspendedOperad(DgOperad):
    """與 P 共用基底標籤，度數位移 1−r、作用乘上置換符號。"""

    def __init__(self, inner: DgOperad) -> None:
        super().__init__(inner.p, inner.arity_max, inner.degree_max)
        self.inner = inner
        self.name = f"Λ{inner.name}"

    def arity(self, label: Label) -> int:
        return self.inner.arity(label)

    def degree(self, label: Label) -> int:
        return self.inner.degree(label) + 1 - self.inner.arity(label)

    def min_degree(self, r: int) -> int:
        return self.inner.min_degree(r) + 1 - r

    def _enumerate(self, r: int, d: int) -> List[Label]:
        return self.inner._enumerate(r, d + r - 1)

    def basis_upto(self, r: int, degree_max: Optional[int] = None) -> List[Label]:
        """degree_max 以 P 的度數計。"""

        return self.inner.basis_upto(r, degree_max)

    def act(self, perm: Permutation, label: Label) -> Combo:
        factor = self.field.sign(perm.sign())
        return {key: coef * factor % self.p for key, coef in self.inner.act(perm, label).items()}

    def compose(self, x: Label, i: int, y: Label) -> Combo:
        s = self.inner.arity(x)
        t = self.inner.arity(y)
        exponent = (1 - s) * self.inner.degree(y) + (t - 1) * (i - 1)
        factor = self.field.sign(exponent)
        return {key: coef * factor % self.p for key, coef in self.inner.compose(x, i, y).items()}

    def differential(self, label: Label) -> Combo:
        return self.inner.differential(label)

    def unit(self) -> Label:
        return self.inner.unit()

    def star(self) -> Optional[Label]:
        return self.inner.star()

    def format_label(self, label: Label) -> str:
        return self.inner.format_label(label)

    def parse_label(self, text: str) -> Label:
        return self.inner.parse_label(text)


def operadic_suspension(inner: DgOperad) -> SuspendedOperad:
    return SuspendedOperad(inner)
