"""固定的算子態射 K → E：φ(μ₂) = (id₂)，φ(μ_n) = ν(φ(dμ_n))。"""

from __future__ import annotations

import random
from typing import Dict, Hashable

from app.hopfbar.combinatorics.permutations import Permutation
from app.hopfbar.linear.combination import merge
from app.hopfbar.models.reports import CheckReport
from app.hopfbar.operads.base import Combo
from app.hopfbar.operads.checks import draw_samples
from app.hopfbar.operads.free import evaluate_tree
from app.hopfbar.trees.labeled import Key
from app.hopfbar.utils.logging import get_logger
from app.hopfbar.zoo.ainfinity import AInfinityOperad
from app.hopfbar.zoo.barratt_eccles import BarrattEcclesOperad, DeformationRetract

logger = get_logger(__name__)


class KToEMorphism:
    """以收縮 ν 遞迴提升的態射。"""

    def __init__(self, source: AInfinityOperad, target: BarrattEcclesOperad, retract: DeformationRetract) -> None:
        self.source = source
        self.target = target
        self.retract = retract
        self._generators: Dict[int, Combo] = {}

    def mu_image(self, n: int) -> Combo:
        """φ(μ_n) ∈ E(n)_{n−2}。"""

        if n not in self._generators:
            if n == 2:
                self._generators[n] = {((1, 2),): 1}
            else:
                lifted = self.apply(self.source.generator_differential((n, tuple(range(1, n + 1)))))
                self._generators[n] = self.retract.contract_combo(lifted)
            logger.debug("φ(μ%s) = %s", n, self.target.format_combo(self._generators[n]))
        return self._generators[n]

    def generator_image(self, label: Hashable) -> Combo:
        n, images = label
        return self.target.act_combo(Permutation(images), self.mu_image(n))

    def apply_key(self, key: Key) -> Combo:
        return evaluate_tree(self.source, self.target, key, self.generator_image)

    def apply(self, combo: Combo) -> Combo:
        result: Combo = {}
        for key, coef in combo.items():
            merge(result, self.apply_key(key), coef, self.target.p)
        return result

    def check(self, arity_bound: int, sample: int = 200, seed: int = 0) -> CheckReport:
        """檢查鏈映射性質與合成相容性。"""

        report = CheckReport(name="K→E")
        K, E = self.source, self.target
        rng = random.Random(seed)
        basis = {r: K.basis_upto(r) for r in range(1, arity_bound + 1)}
        for r in range(1, arity_bound + 1):
            for x in basis[r]:
                left = E.differential_combo(self.apply_key(x))
                right = self.apply(K.differential(x))
                diff = dict(left)
                merge(diff, right, -1, E.p)
                report.record("chain-map", not diff, K.format_label(x), E.format_combo(diff))
        for s in range(2, arity_bound + 1):
            for t in range(2, arity_bound - s + 2):
                for x, y in draw_samples([basis[s], basis[t]], sample, rng, report):
                    for i in range(1, s + 1):
                        left = self.apply(K.compose(x, i, y))
                        right = E.compose_combo(self.apply_key(x), i, self.apply_key(y))
                        diff = dict(left)
                        merge(diff, right, -1, E.p)
                        report.record("morphism", not diff, f"{K.format_label(x)} ∘_{i} {K.format_label(y)}")
        for n in range(2, arity_bound + 1):
            augmented = sum(self.retract.augmentation(w) * c for w, c in self.mu_image(n).items()) % E.p
            report.record("augmentation", augmented == (1 if n == 2 else 0), f"m{n}")
        logger.info("K→E 檢查：%s 項，失敗 %s 項", report.checked, len(report.failures))
        return report


def build_k_to_e(source: AInfinityOperad, target: BarrattEcclesOperad, retract: DeformationRetract) -> KToEMorphism:
    return KToEMorphism(source, target, retract)
