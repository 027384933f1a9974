"""Stasheff 的 A∞ 鏈算子 K：由 μ_n（度數 n−2）自由生成的擬自由算子。"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, List, Tuple

from app.hopfbar.combinatorics.permutations import (
    Images,
    Permutation,
    all_permutations,
    compose_images,
    format_images,
    parse_images,
)
from app.hopfbar.errors import NotAChainComplexError
from app.hopfbar.linear.combination import accumulate
from app.hopfbar.operads.base import Combo
from app.hopfbar.operads.free import FreeOperad, GeneratorModule
from app.hopfbar.trees.labeled import Key
from app.hopfbar.utils.logging import get_logger

logger = get_logger(__name__)

Generator = Tuple[int, Images]


class AInfGenerators(GeneratorModule):
    """生成元 σ·μ_n，以 (n, σ 的像) 表示。"""

    name = "μ"

    def __init__(self, arity_max: int) -> None:
        self.arity_max = arity_max

    def generators(self, r: int) -> List[Generator]:
        if r < 2 or r > self.arity_max:
            return []
        return [(r, perm.images) for perm in all_permutations(r)]

    def arity(self, label: Generator) -> int:
        return label[0]

    def degree(self, label: Generator) -> int:
        return label[0] - 2

    def act(self, perm: Permutation, label: Generator) -> Dict[Generator, int]:
        n, images = label
        return {(n, compose_images(perm.images, images)): 1}

    def format_label(self, label: Generator) -> str:
        n, images = label
        if images == tuple(range(1, n + 1)):
            return f"m{n}"
        return f"m{n}:{format_images(images)}"

    def parse_label(self, text: str) -> Generator:
        head, _, tail = text.partition(":")
        n = int(head[1:])
        images = parse_images(tail) if tail else tuple(range(1, n + 1))
        return (n, images)

    def max_arity(self) -> int:
        return self.arity_max


class AInfinityOperad(FreeOperad):
    """dμ_n = Σ_{r+s+t=n, s≥2, r+t≥1} (−1)^{r+st} μ_{r+1+t} ∘_{r+1} μ_s。"""

    name = "K"

    def __init__(self, p: int = 2, arity_max: int = 6) -> None:
        super().__init__(AInfGenerators(arity_max), p, arity_max, max(arity_max - 2, 0))
        self._mu_differential = lru_cache(maxsize=None)(self._compute_mu_differential)

    def mu(self, n: int) -> Key:
        return self.corolla((n, tuple(range(1, n + 1))))

    def _compute_mu_differential(self, n: int) -> Dict[Key, int]:
        result: Combo = {}
        for s in range(2, n + 1):
            for r in range(0, n - s + 1):
                t = n - s - r
                if r + t < 1:
                    continue
                composite = self.compose(self.mu(r + 1 + t), r + 1, self.mu(s))
                sign = self.field.sign(r + s * t)
                for key, coef in composite.items():
                    accumulate(result, key, sign * coef, self.p)
        return result

    def generator_differential(self, label: Generator) -> Combo:
        n, images = label
        base = self._mu_differential(n)
        if images == tuple(range(1, n + 1)):
            return dict(base)
        return self.act_combo(Permutation(images), base)


def build_ainf(p: int = 2, arity_bound: int = 6) -> AInfinityOperad:
    """建立 K 並在建構時驗證 d²μ_n = 0。"""

    operad = AInfinityOperad(p, arity_bound)
    for n in range(2, arity_bound + 1):
        mu = operad.mu(n)
        if operad.differential_combo(operad.differential(mu)):
            raise NotAChainComplexError(operad.format_label(mu), n - 2)
    logger.info("已建立 A∞ 算子 K：p=%s 元數≤%s", p, arity_bound)
    return operad
