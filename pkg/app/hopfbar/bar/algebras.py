"""E 代數測試夾具：截斷多項式、外代數與截斷的自由 E 代數。

代數以增廣理想 Ā 表示（無單位）；E 的作用透過 ``evaluate`` 給出，
A∞ 乘積 μ_n 沿固定的 K → E 由 μ_n 的像求值。
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

from app.hopfbar.combinatorics.permutations import Permutation, format_images, parse_images
from app.hopfbar.errors import ShapeMismatchError, UnsupportedFixtureError
from app.hopfbar.linear.combination import accumulate, merge
from app.hopfbar.linear.elimination import SparseEchelon
from app.hopfbar.linear.modules import GradedBasedModule
from app.hopfbar.utils.logging import get_logger
from app.hopfbar.zoo.barratt_eccles import BarrattEcclesOperad, Word
from app.hopfbar.zoo.k_to_e import KToEMorphism

logger = get_logger(__name__)

Letter = Hashable
LetterCombo = Dict[Letter, int]


class PAlgebra(ABC):
    """有限維 E 代數的增廣理想 Ā。"""

    name: str = "algebra"
    commutative: bool = False

    def __init__(self, morphism: KToEMorphism) -> None:
        self.morphism = morphism
        self.operad: BarrattEcclesOperad = morphism.target
        self.p = self.operad.p
        self.field = self.operad.field
        self._module: Optional[GradedBasedModule] = None

    @abstractmethod
    def letters(self) -> List[Letter]:
        """Ā 的基底。"""

    @abstractmethod
    def degree(self, letter: Letter) -> int:
        """Ā 中的度數（未懸置）。"""

    @abstractmethod
    def evaluate(self, label: Word, letters: Sequence[Letter]) -> LetterCombo:
        """E 的基底元素作用在一串字母上。"""

    def differential(self, letter: Letter) -> LetterCombo:
        return {}

    @abstractmethod
    def format_letter(self, letter: Letter) -> str:
        ...

    @abstractmethod
    def parse_letter(self, text: str) -> Letter:
        ...

    @property
    def module(self) -> GradedBasedModule:
        if self._module is None:
            self._module = GradedBasedModule.from_pairs(
                ((self.degree(a), a) for a in self.letters()), formatter=self.format_letter
            )
        return self._module

    def _require_arity(self, label: Word, letters: Sequence[Letter]) -> None:
        if self.operad.arity(label) != len(letters):
            raise ShapeMismatchError(
                f"元數不符：{self.operad.format_label(label)} 作用在 {len(letters)} 個字母上",
                [self.operad.arity(label), len(letters)],
            )

    def evaluate_combo(self, combo: Mapping[Word, int], letters: Sequence[Letter]) -> LetterCombo:
        result: LetterCombo = {}
        for label, coef in combo.items():
            merge(result, self.evaluate(label, letters), coef, self.p)
        return result

    def evaluate_suspended(self, combo: Mapping[Word, int], letters: Sequence[Letter]) -> LetterCombo:
        """ΛE 的元素作用在 ΣĀ 上：s∘x∘(s⁻¹)^{⊗n}。"""

        n = len(letters)
        exponent = sum((n - k) * (self.degree(a) + 1) for k, a in enumerate(letters, start=1))
        result: LetterCombo = {}
        merge(result, self.evaluate_combo(combo, letters), self.field.sign(exponent), self.p)
        return result

    def product(self, n: int, letters: Sequence[Letter]) -> LetterCombo:
        """μ_n 沿 K → E 的像在 Ā 上的求值（未懸置）。"""

        return self.evaluate_combo(self.morphism.mu_image(n), letters)

    def describe(self) -> str:
        dims = {d: self.module.dimension(d) for d in self.module.degrees()}
        return f"{self.name} dims={dims}"


# ------------------------------------------------------------------
# 交換夾具
# ------------------------------------------------------------------


class CommutativeAlgebra(PAlgebra):
    """E 透過 ε: E → C 作用：0 度字給出乘積，其餘為 0。"""

    commutative = True

    @abstractmethod
    def multiply(self, left: Letter, right: Letter) -> LetterCombo:
        """兩個字母的乘積。"""

    def evaluate(self, label: Word, letters: Sequence[Letter]) -> LetterCombo:
        self._require_arity(label, letters)
        if self.operad.degree(label) > 0:
            return {}
        if not letters:
            raise ShapeMismatchError("增廣理想中沒有單位元，不能以 0 元操作求值")
        current: LetterCombo = {letters[0]: 1}
        for letter in letters[1:]:
            step: LetterCombo = {}
            for a, coef in current.items():
                merge(step, self.multiply(a, letter), coef, self.p)
            current = step
            if not current:
                break
        return current


class TruncatedPolynomial(CommutativeAlgebra):
    """F_p[x]/(x^n)，字母為指數 1..n−1。"""

    def __init__(self, morphism: KToEMorphism, n: int = 3, generator_degree: int = 0) -> None:
        super().__init__(morphism)
        if n < 2:
            raise ValueError(f"截斷次數必須至少為 2：{n}")
        if self.p != 2 and generator_degree % 2:
            raise ValueError("奇特徵下多項式生成元的度數必須為偶數")
        self.n = n
        self.generator_degree = generator_degree
        self.name = f"F{self.p}[x]/(x^{n})"

    def letters(self) -> List[int]:
        return list(range(1, self.n))

    def degree(self, letter: int) -> int:
        return letter * self.generator_degree

    def multiply(self, left: int, right: int) -> LetterCombo:
        total = left + right
        return {total: 1} if total < self.n else {}

    def format_letter(self, letter: int) -> str:
        return "x" if letter == 1 else f"x^{letter}"

    def parse_letter(self, text: str) -> int:
        text = text.strip()
        if text == "x":
            return 1
        if not text.startswith("x^") or not text[2:].isdigit():
            raise ValueError(f"無法解析字母：{text}")
        letter = int(text[2:])
        if not 1 <= letter < self.n:
            raise ValueError(f"指數超出範圍：{text}")
        return letter


class ExteriorAlgebra(CommutativeAlgebra):
    """Λ(e₁,…,e_k)，生成元為 1 度；字母為非空的遞增指標組。"""

    def __init__(self, morphism: KToEMorphism, generators: int = 2) -> None:
        super().__init__(morphism)
        if generators < 1:
            raise ValueError(f"生成元個數必須為正：{generators}")
        self.generators = generators
        self.name = f"Λ(e1..e{generators})"

    def letters(self) -> List[Tuple[int, ...]]:
        found: List[Tuple[int, ...]] = []
        for mask in range(1, 2**self.generators):
            found.append(tuple(k + 1 for k in range(self.generators) if mask >> k & 1))
        return found

    def degree(self, letter: Tuple[int, ...]) -> int:
        return len(letter)

    def multiply(self, left: Tuple[int, ...], right: Tuple[int, ...]) -> LetterCombo:
        if set(left) & set(right):
            return {}
        inversions = sum(1 for a in left for b in right if a > b)
        return {tuple(sorted(left + right)): self.field.sign(inversions)}

    def format_letter(self, letter: Tuple[int, ...]) -> str:
        return "".join(f"e{k}" for k in letter)

    def parse_letter(self, text: str) -> Tuple[int, ...]:
        parts = [part for part in text.strip().split("e") if part]
        if not parts or not all(part.isdigit() for part in parts):
            raise ValueError(f"無法解析字母：{text}")
        letter = tuple(int(part) for part in parts)
        if list(letter) != sorted(set(letter)) or letter[-1] > self.generators:
            raise ValueError(f"外代數字母必須是遞增且在範圍內的指標：{text}")
        return letter


# ------------------------------------------------------------------
# 自由 E 代數
# ------------------------------------------------------------------


class FreeEAlgebra(PAlgebra):
    """E(V) 的截斷，V = F·v（0 度）。

    字母是 E(n) 在 Σ_n 下的軌道代表（第一個置換為恆等）；權重 > W 或度數 > D 的部分為 0，
    度數 D 再模去 D+1 度元素的邊界，使截斷成為 E 理想的商。
    """

    def __init__(self, morphism: KToEMorphism, weight_max: int = 2, degree_max: int = 1) -> None:
        super().__init__(morphism)
        if weight_max < 1 or degree_max < 0:
            raise ValueError(f"自由代數截斷參數無效：W={weight_max} D={degree_max}")
        self.weight_max = weight_max
        self.degree_max = degree_max
        self.name = f"free_E(v; W={weight_max}, D={degree_max})"
        self._enumerator = BarrattEcclesOperad(self.p, arity_max=weight_max, degree_max=degree_max + 1)
        self._boundaries: Dict[int, SparseEchelon] = {}
        for n in range(1, weight_max + 1):
            echelon = SparseEchelon(self.p)
            for word in self._orbit_reps(n, degree_max + 1):
                echelon.add(self._to_reps(self.operad.differential(word)))
            self._boundaries[n] = echelon

    def _orbit_reps(self, n: int, d: int) -> List[Word]:
        identity = tuple(range(1, n + 1))
        return [word for word in self._enumerator.basis(n, d) if word[0] == identity]

    def _rep(self, word: Word) -> Word:
        first = Permutation(word[0])
        (rep, _), = self.operad.act(first.inverse(), word).items()
        return rep

    def _to_reps(self, combo: Mapping[Word, int]) -> LetterCombo:
        result: LetterCombo = {}
        for word, coef in combo.items():
            accumulate(result, self._rep(word), coef, self.p)
        return result

    def reduce(self, combo: Mapping[Word, int]) -> LetterCombo:
        """歸入軌道代表並套用截斷。"""

        result: LetterCombo = {}
        top: Dict[int, LetterCombo] = {}
        for word, coef in self._to_reps(combo).items():
            n = self.operad.arity(word)
            d = self.operad.degree(word)
            if n > self.weight_max or d > self.degree_max:
                continue
            if d == self.degree_max:
                accumulate(top.setdefault(n, {}), word, coef, self.p)
            else:
                accumulate(result, word, coef, self.p)
        for n, vector in top.items():
            merge(result, self._boundaries[n].reduce(vector), 1, self.p)
        return result

    def letters(self) -> List[Word]:
        found: List[Word] = []
        for n in range(1, self.weight_max + 1):
            pivots = set(self._boundaries[n].pivots())
            for d in range(self.degree_max + 1):
                found.extend(w for w in self._orbit_reps(n, d) if d < self.degree_max or w not in pivots)
        return found

    def degree(self, letter: Word) -> int:
        return self.operad.degree(letter)

    def weight(self, letter: Word) -> int:
        return self.operad.arity(letter)

    def differential(self, letter: Word) -> LetterCombo:
        return self.reduce(self.operad.differential(letter))

    def evaluate(self, label: Word, letters: Sequence[Letter]) -> LetterCombo:
        """形式算子合成 γ(label; u₁,…,u_k)，由右至左代入。"""

        self._require_arity(label, letters)
        if not letters:
            raise ShapeMismatchError("增廣理想中沒有單位元，不能以 0 元操作求值")
        if sum(self.weight(u) for u in letters) > self.weight_max:
            return {}
        current: Dict[Word, int] = {label: 1}
        for position in range(len(letters), 0, -1):
            current = self.operad.compose_combo(current, position, {letters[position - 1]: 1})
        return self.reduce(current)

    def format_letter(self, letter: Word) -> str:
        return "w:" + "/".join(format_images(perm) for perm in letter)

    def parse_letter(self, text: str) -> Word:
        text = text.strip()
        if not text.startswith("w:"):
            raise ValueError(f"無法解析字母：{text}")
        word = tuple(parse_images(part) for part in text[2:].split("/"))
        if word not in set(self.letters()):
            raise ValueError(f"不是截斷自由代數的基底字母：{text}")
        return word


FIXTURE_KINDS = ("poly", "exterior", "free_E")


def fixtures(kind: str, params: Mapping[str, int], morphism: KToEMorphism) -> PAlgebra:
    """依種類建立測試代數。"""

    if kind == "poly":
        algebra: PAlgebra = TruncatedPolynomial(morphism, int(params.get("n", 3)), int(params.get("x_degree", 0)))
    elif kind == "exterior":
        algebra = ExteriorAlgebra(morphism, int(params.get("k", 2)))
    elif kind == "free_E":
        algebra = FreeEAlgebra(morphism, int(params.get("weight", 2)), int(params.get("degree", 1)))
    else:
        raise UnsupportedFixtureError(kind)
    logger.info("已建立測試代數：%s", algebra.describe())
    return algebra
