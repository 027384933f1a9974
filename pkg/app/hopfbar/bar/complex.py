"""截斷 bar 複形 B(A) = T^c(ΣĀ)：微分、解連接對角與洗牌積。"""

from __future__ import annotations

import random
from itertools import combinations, product
from typing import Dict, List, Optional, Sequence, Tuple

from app.hopfbar.errors import OutOfTruncationError
from app.hopfbar.linear.combination import accumulate, format_combination, merge
from app.hopfbar.linear.modules import ChainComplex, GradedBasedModule
from app.hopfbar.models.reports import CheckReport
from app.hopfbar.operads.checks import draw_samples
from app.hopfbar.bar.algebras import Letter, PAlgebra
from app.hopfbar.utils.logging import get_logger

logger = get_logger(__name__)

BarWord = Tuple[Letter, ...]
BarCombo = Dict[BarWord, int]
TensorCombo = Dict[Tuple[BarWord, ...], int]

EMPTY_WORD: BarWord = ()


def word_degree(algebra: PAlgebra, word: BarWord) -> int:
    return sum(algebra.degree(a) + 1 for a in word)


def format_word(algebra: PAlgebra, word: BarWord) -> str:
    return "[" + "|".join(algebra.format_letter(a) for a in word) + "]"


def parse_word(algebra: PAlgebra, text: str) -> BarWord:
    """`[a1|a2|…]` 的反函式；`[]` 為單位。"""

    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ValueError(f"bar 字須以方括號包住：{text}")
    body = text[1:-1].strip()
    if not body:
        return EMPTY_WORD
    return tuple(algebra.parse_letter(part) for part in body.split("|"))


def bar_filtration(word: BarWord) -> int:
    """骨架濾過指標：張量長度。"""

    return len(word)


def bar_diagonal(word: BarWord, n: int = 2) -> TensorCombo:
    """切成 n 段連續（可為空）子字的全部方式。"""

    if n < 1:
        raise ValueError(f"對角的份數必須為正：{n}")
    result: TensorCombo = {}
    length = len(word)
    for cuts in combinations(range(length + n - 1), n - 1):
        bounds = [0]
        previous = -1
        for position in cuts:
            bounds.append(bounds[-1] + position - previous - 1)
            previous = position
        bounds.append(length)
        pieces = tuple(word[bounds[k] : bounds[k + 1]] for k in range(n))
        result[pieces] = 1
    return result


def shuffle_sign(degrees: Sequence[int], images: Sequence[int]) -> int:
    """把 degrees（原順序）放到 images 指定的新位置時，奇數度元素交錯的次數。"""

    exponent = 0
    for a in range(len(degrees)):
        for b in range(a + 1, len(degrees)):
            if images[a] > images[b] and degrees[a] % 2 and degrees[b] % 2:
                exponent += 1
    return exponent


def shuffle_product(algebra: PAlgebra, left: BarWord, right: BarWord) -> BarCombo:
    """洗牌積，Koszul 符號依懸置後的度數。"""

    total = len(left) + len(right)
    letters = left + right
    degrees = [algebra.degree(a) + 1 for a in letters]
    result: BarCombo = {}
    for positions in combinations(range(1, total + 1), len(left)):
        rest = [k for k in range(1, total + 1) if k not in positions]
        images = list(positions) + rest
        word: List[Letter] = [None] * total
        for source, target in enumerate(images):
            word[target - 1] = letters[source]
        accumulate(result, tuple(word), algebra.field.sign(shuffle_sign(degrees, images)), algebra.p)
    return result


class TruncatedBar:
    """張量長度 ≤ length 的 B(A)。"""

    def __init__(self, algebra: PAlgebra, length: int = 4) -> None:
        if length < 0:
            raise ValueError(f"bar 長度上限必須非負：{length}")
        self.algebra = algebra
        self.length = length
        self.p = algebra.p
        self.field = algebra.field

    # ------------------------------------------------------------------
    # 基底
    # ------------------------------------------------------------------

    def words(self, length: Optional[int] = None) -> List[BarWord]:
        top = self.length if length is None else length
        letters = self.algebra.letters()
        found: List[BarWord] = []
        for n in range(top + 1):
            found.extend(product(letters, repeat=n))
        return found

    def _require(self, word: BarWord) -> None:
        if len(word) > self.length:
            raise OutOfTruncationError(f"bar 長度上限 {self.length}", self.format_word(word))

    def format_word(self, word: BarWord) -> str:
        return format_word(self.algebra, word)

    def parse_word(self, text: str) -> BarWord:
        word = parse_word(self.algebra, text)
        self._require(word)
        return word

    def format_combo(self, combo: BarCombo) -> str:
        return format_combination(combo, self.format_word, self.p)

    def degree(self, word: BarWord) -> int:
        return word_degree(self.algebra, word)

    # ------------------------------------------------------------------
    # 微分
    # ------------------------------------------------------------------

    def bar_differential(self, word: BarWord) -> BarCombo:
        """內部微分加上由 μ_n 給出的餘導子。"""

        self._require(word)
        algebra = self.algebra
        result: BarCombo = {}
        prefix = 0
        for k, letter in enumerate(word):
            sign = self.field.sign(prefix + 1)
            for image, coef in algebra.differential(letter).items():
                accumulate(result, word[:k] + (image,) + word[k + 1 :], sign * coef, self.p)
            for n in range(2, len(word) - k + 1):
                block = word[k : k + n]
                for image, coef in algebra.evaluate_suspended(algebra.morphism.mu_image(n), block).items():
                    accumulate(result, word[:k] + (image,) + word[k + n :], self.field.sign(prefix) * coef, self.p)
            prefix += algebra.degree(letter) + 1
        return result

    def differential_combo(self, combo: BarCombo) -> BarCombo:
        result: BarCombo = {}
        for word, coef in combo.items():
            merge(result, self.bar_differential(word), coef, self.p)
        return result

    def diagonal_combo(self, combo: BarCombo, n: int = 2) -> TensorCombo:
        result: TensorCombo = {}
        for word, coef in combo.items():
            merge(result, bar_diagonal(word, n), coef, self.p)
        return result

    def tensor_differential(self, combo: TensorCombo) -> TensorCombo:
        """d 在 B(A)^{⊗n} 上依 Koszul 規則作用。"""

        result: TensorCombo = {}
        for pieces, coef in combo.items():
            prefix = 0
            for k, piece in enumerate(pieces):
                sign = self.field.sign(prefix)
                for image, c in self.bar_differential(piece).items():
                    accumulate(result, pieces[:k] + (image,) + pieces[k + 1 :], coef * c * sign, self.p)
                prefix += self.degree(piece)
        return result

    def chain_complex(self, length: Optional[int] = None) -> ChainComplex:
        """張量長度 ≤ length 的子複形（微分不增加長度）。"""

        words = self.words(length)
        module = GradedBasedModule.from_pairs(((self.degree(w), w) for w in words), formatter=self.format_word)
        return ChainComplex.from_function(module, self.bar_differential, self.field)

    # ------------------------------------------------------------------
    # 性質檢查
    # ------------------------------------------------------------------

    def check(self, length: Optional[int] = None, sample: int = 400, seed: int = 0) -> CheckReport:
        """逐字檢查 d² = 0、餘導子、濾過、餘結合與餘單位；交換代數另以抽樣檢查洗牌積。"""

        top = self.length if length is None else min(length, self.length)
        report = CheckReport(name=f"B({self.algebra.name})")
        words = self.words(top)
        for word in words:
            text = self.format_word(word)
            dw = self.bar_differential(word)
            square = self.differential_combo(dw)
            report.record("d-square", not square, text, self.format_combo(square))
            report.record("filtration", all(bar_filtration(w) <= bar_filtration(word) for w in dw), text)
            left = self.diagonal_combo(dw)
            right = self.tensor_differential(bar_diagonal(word))
            diff = dict(left)
            merge(diff, right, -1, self.p)
            report.record("coderivation", not diff, text)
            triple = bar_diagonal(word, 3)
            for outer in (0, 1):
                expanded: TensorCombo = {}
                for (a, b), c in bar_diagonal(word).items():
                    split = a if outer == 0 else b
                    for (x, y), c2 in bar_diagonal(split).items():
                        pieces = (x, y, b) if outer == 0 else (a, x, y)
                        accumulate(expanded, pieces, c * c2, self.p)
                report.record("coassociative", expanded == triple, text)
            counit = {a: c for (a, b), c in bar_diagonal(word).items() if b == EMPTY_WORD}
            report.record("counit", counit == {word: 1}, text)
        if self.algebra.commutative:
            report.merge(self.check_shuffle(top, sample, random.Random(seed)))
        logger.info("bar 複形檢查 %s：%s 項，失敗 %s 項", self.algebra.name, report.checked, len(report.failures))
        return report

    def shuffle_combo(self, left: BarCombo, right: BarCombo) -> BarCombo:
        result: BarCombo = {}
        for u, cu in left.items():
            for v, cv in right.items():
                merge(result, shuffle_product(self.algebra, u, v), cu * cv, self.p)
        return result

    def check_shuffle(self, length: int, sample: int, rng: random.Random) -> CheckReport:
        """洗牌積的結合、交換、單位與 Leibniz 規則。"""

        report = CheckReport(name=f"shuffle({self.algebra.name})")
        words = self.words(length)
        for u, v in draw_samples([words, words], sample, rng, report):
            if len(u) + len(v) > length:
                continue
            text = f"{self.format_word(u)} , {self.format_word(v)}"
            uv = shuffle_product(self.algebra, u, v)
            swapped = shuffle_product(self.algebra, v, u)
            exponent = self.degree(u) * self.degree(v)
            report.record("commutative", uv == {k: c * self.field.sign(exponent) % self.p for k, c in swapped.items()}, text)
            report.record("unit", shuffle_product(self.algebra, u, EMPTY_WORD) == {u: 1}, text)
            left = self.differential_combo(uv)
            right = self.shuffle_combo(self.bar_differential(u), {v: 1})
            merge(right, self.shuffle_combo({u: 1}, self.bar_differential(v)), self.field.sign(self.degree(u)), self.p)
            report.record("leibniz", left == right, text)
        for u, v, w in draw_samples([words, words, words], sample, rng, report):
            if len(u) + len(v) + len(w) > length:
                continue
            first = self.shuffle_combo(shuffle_product(self.algebra, u, v), {w: 1})
            second = self.shuffle_combo({u: 1}, shuffle_product(self.algebra, v, w))
            report.record("associative", first == second, f"{self.format_word(u)} , {self.format_word(v)} , {self.format_word(w)}")
        return report


def build_bar(algebra: PAlgebra, length: int) -> TruncatedBar:
    bar = TruncatedBar(algebra, length)
    logger.info("已建立 B(%s)，長度上限 %s", algebra.name, length)
    return bar
