"""鏈層級的 Barratt–Eccles 算子 E 與其強形變收縮。

E(r)_d 的基底是非退化字 (w₀,…,w_d)（相鄰置換相異）。
合成以 Eilenberg–Zilber 洗牌組合兩個字；對角為 Alexander–Whitney 分割。
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Dict, List, Tuple

from app.hopfbar.combinatorics.permutations import (
    Images,
    Permutation,
    compose_images,
    format_images,
    lattice_paths,
    parse_images,
    substitute_images,
)
from app.hopfbar.linear.combination import accumulate
from app.hopfbar.models.reports import CheckReport
from app.hopfbar.operads.base import DgOperad
from app.hopfbar.utils.logging import get_logger

logger = get_logger(__name__)

Word = Tuple[Images, ...]


def is_nondegenerate(word: Word) -> bool:
    return all(a != b for a, b in zip(word, word[1:]))


@lru_cache(maxsize=None)
def _words(r: int, d: int) -> Tuple[Word, ...]:
    perms = [tuple(images) for images in permutations(range(1, r + 1))]
    found: List[Word] = [(w,) for w in perms]
    for _ in range(d):
        found = [word + (w,) for word in found for w in perms if w != word[-1]]
    return tuple(found)


class BarrattEcclesOperad(DgOperad):
    """標籤為置換字（tuple of tuple）。"""

    name = "E"

    def __init__(self, p: int = 2, arity_max: int = 4, degree_max: int = 4) -> None:
        super().__init__(p, arity_max, degree_max)

    def arity(self, label: Word) -> int:
        return len(label[0])

    def degree(self, label: Word) -> int:
        return len(label) - 1

    def _enumerate(self, r: int, d: int) -> List[Word]:
        if r == 0:
            return [((),)] if d == 0 else []
        return list(_words(r, d))

    def act(self, perm: Permutation, label: Word) -> Dict[Word, int]:
        return {tuple(compose_images(perm.images, w) for w in label): 1}

    def compose(self, x: Word, i: int, y: Word) -> Dict[Word, int]:
        result: Dict[Word, int] = {}
        for path, parity in lattice_paths(len(x) - 1, len(y) - 1):
            word = tuple(substitute_images(x[a], i, y[b]) for a, b in path)
            if is_nondegenerate(word):
                accumulate(result, word, self.field.sign(parity), self.p)
        return result

    def differential(self, label: Word) -> Dict[Word, int]:
        result: Dict[Word, int] = {}
        if len(label) == 1:
            return result
        for k in range(len(label)):
            face = label[:k] + label[k + 1 :]
            if is_nondegenerate(face):
                accumulate(result, face, self.field.sign(k), self.p)
        return result

    def unit(self) -> Word:
        return ((1,),)

    def star(self) -> Word:
        return ((),)

    @property
    def is_hopf(self) -> bool:
        return True

    def diagonal(self, label: Word) -> Dict[Tuple[Word, Word], int]:
        """Δ(w₀…w_d) = Σ_i (w₀…w_i)⊗(w_i…w_d)。"""

        return {(label[: k + 1], label[k:]): 1 for k in range(len(label))}

    def counit(self, label: Word) -> int:
        return 1 if len(label) == 1 else 0

    def format_label(self, label: Word) -> str:
        return "[" + "|".join(format_images(w) for w in label) + "]"

    def parse_label(self, text: str) -> Word:
        text = text.strip()
        if not (text.startswith("[") and text.endswith("]")):
            raise ValueError(f"Barratt–Eccles 字格式錯誤：{text}")
        word = tuple(parse_images(part) for part in text[1:-1].split("|"))
        if len({len(w) for w in word}) != 1 or not is_nondegenerate(word):
            raise ValueError(f"不是非退化字：{text}")
        return word


@dataclass(frozen=True)
class DeformationRetract:
    """E(r) 到 F 的強形變收縮 (ε, η, ν)。"""

    operad: BarrattEcclesOperad

    def augmentation(self, label: Word) -> int:
        """ε：0 度字送到 1，其餘為 0。"""

        return 1 if len(label) == 1 else 0

    def section(self, r: int) -> Word:
        """η(1) = (id_r)。"""

        return (tuple(range(1, r + 1)),)

    def contraction(self, label: Word) -> Dict[Word, int]:
        """ν(w₀…w_d) = (id, w₀, …, w_d)，若 w₀ = id 則為 0。"""

        identity = tuple(range(1, len(label[0]) + 1))
        if label[0] == identity:
            return {}
        return {(identity,) + label: 1}

    def contract_combo(self, combo: Dict[Word, int]) -> Dict[Word, int]:
        result: Dict[Word, int] = {}
        for label, coef in combo.items():
            for image, c in self.contraction(label).items():
                accumulate(result, image, coef * c, self.operad.p)
        return result

    def homotopy_defect(self, label: Word) -> Dict[Word, int]:
        """(dν + νd − id + ηε)(label)；收縮成立時為 0。"""

        E = self.operad
        p = E.p
        result: Dict[Word, int] = {}
        for image, c in self.contraction(label).items():
            for face, cf in E.differential(image).items():
                accumulate(result, face, c * cf, p)
        for image, c in self.contract_combo(E.differential(label)).items():
            accumulate(result, image, c, p)
        accumulate(result, label, -1, p)
        if self.augmentation(label):
            accumulate(result, self.section(E.arity(label)), 1, p)
        return result


def build_barratt_eccles(p: int = 2, arity_bound: int = 4, degree_bound: int = 4) -> Tuple[BarrattEcclesOperad, DeformationRetract]:
    """建立截斷的 E 與其收縮資料。"""

    operad = BarrattEcclesOperad(p, arity_bound, degree_bound)
    logger.info("已建立 Barratt–Eccles 算子：p=%s 元數≤%s 度數≤%s", p, arity_bound, degree_bound)
    return operad, DeformationRetract(operad)


def check_retract(retract: DeformationRetract, arity_bound: int, degree_bound: int) -> CheckReport:
    """逐一基底元素檢查 dν + νd = id − ηε 與 εη = id。"""

    E = retract.operad
    report = CheckReport(name="E-retract")
    for r in range(1, arity_bound + 1):
        report.record("section", retract.augmentation(retract.section(r)) == 1, f"r={r}")
        for d in range(degree_bound + 1):
            for label in E.basis(r, d):
                defect = retract.homotopy_defect(label)
                report.record("homotopy", not defect, E.format_label(label), E.format_combo(defect))
    logger.info("E 收縮檢查：%s 項，失敗 %s 項", report.checked, len(report.failures))
    return report
