"""Σ*-模上的自由算子：以帶標籤的約化樹為基底，合成即嫁接。"""

from __future__ import annotations

from abc import ABC, abstractmethod
from itertools import product
from typing import Callable, Dict, Hashable, List, Tuple

from app.hopfbar.combinatorics.permutations import Permutation
from app.hopfbar.linear.combination import accumulate
from app.hopfbar.operads.base import Combo, DgOperad
from app.hopfbar.trees import labeled
from app.hopfbar.trees.labeled import UNIT_KEY, Key
from app.hopfbar.trees.rtree import Shape, enumerate_reduced_trees


class GeneratorModule(ABC):
    """元數 ≥ 2 的生成元 Σ*-模；作用必須是單項式。"""

    name: str = "M"

    @abstractmethod
    def generators(self, r: int) -> List[Hashable]:
        """元數 r 的生成元標籤。"""

    @abstractmethod
    def arity(self, label: Hashable) -> int: ...

    @abstractmethod
    def degree(self, label: Hashable) -> int: ...

    @abstractmethod
    def act(self, perm: Permutation, label: Hashable) -> Dict[Hashable, int]: ...

    def format_label(self, label: Hashable) -> str:
        return str(label)

    def parse_label(self, text: str) -> Hashable:
        raise NotImplementedError

    def max_arity(self) -> int:
        return 0


class TrivialGenerators(GeneratorModule):
    """每個列出的元數有一個 Σ 作用平凡的生成元。"""

    def __init__(self, arities: Dict[int, int]) -> None:
        self.spec = dict(arities)
        if any(r < 2 for r in self.spec):
            raise ValueError("自由算子的生成元元數必須 ≥ 2")

    def generators(self, r: int) -> List[str]:
        return [f"g{r}"] if r in self.spec else []

    def arity(self, label: str) -> int:
        return int(label[1:])

    def degree(self, label: str) -> int:
        return self.spec[self.arity(label)]

    def act(self, perm: Permutation, label: str) -> Dict[str, int]:
        return {label: 1}

    def format_label(self, label: str) -> str:
        return label

    def parse_label(self, text: str) -> str:
        return text

    def max_arity(self) -> int:
        return max(self.spec, default=0)


class FreeOperad(DgOperad):
    """F(M)：頂點以 M 的生成元標記的約化樹。微分由 generator_differential 決定。"""

    name = "F"

    def __init__(self, generators: GeneratorModule, p: int = 2, arity_max: int = 4, degree_max: int = 4) -> None:
        super().__init__(p, arity_max, degree_max)
        self.generators = generators

    # 生成元層級的微分（預設為 0），值為本算子中的組合
    def generator_differential(self, label: Hashable) -> Combo:
        return {}

    def arity(self, label: Key) -> int:
        return labeled.key_arity(label)

    def degree(self, label: Key) -> int:
        return labeled.key_label_degree(label, self.generators)

    def _enumerate(self, r: int, d: int) -> List[Key]:
        if r == 1:
            return [UNIT_KEY] if d == 0 else []
        found: List[Key] = []
        for tree in enumerate_reduced_trees(r):
            vertices = tree.vertices()
            options = [self.generators.generators(len(tree.subtree(path))) for path in vertices]
            for choice in product(*options):
                if sum(self.generators.degree(g) for g in choice) != d:
                    continue
                found.append(self._build(tree.shape, dict(zip(vertices, choice)), ()))
        return found

    def _build(self, shape: Shape, labels: Dict, path: tuple) -> Key:
        children = []
        for index, child in enumerate(shape):
            if isinstance(child, int):
                children.append(child)
            else:
                children.append((None, self._build(child, labels, path + (index,))))
        return (labels[path], tuple(children))

    def corolla(self, label: Hashable) -> Key:
        return (label, tuple(range(1, self.generators.arity(label) + 1)))

    def act(self, perm: Permutation, label: Key) -> Combo:
        if label == UNIT_KEY:
            return {label: 1}
        raw = labeled.to_raw(label)
        labeled.relabel_leaves(raw, {k: perm(k) for k in range(1, perm.arity + 1)})
        coef, key = labeled.canonicalize(raw, self.generators)
        return {key: coef % self.p} if coef % self.p else {}

    def compose(self, x: Key, i: int, y: Key) -> Combo:
        raw = labeled.graft(labeled.to_raw(x), i, labeled.to_raw(y), None)
        coef, key = labeled.canonicalize(raw, self.generators)
        return {key: coef % self.p} if coef % self.p else {}

    def differential(self, label: Key) -> Combo:
        result: Combo = {}
        if label == UNIT_KEY:
            return result
        raw = labeled.to_raw(label)
        prefix = 0
        for _, vid in list(raw.order):
            generator = raw.vertices[vid][0]
            sign = self.field.sign(prefix)
            for tree_key, coef in self.generator_differential(generator).items():
                replaced = labeled.substitute(raw, vid, labeled.to_raw(tree_key))
                c, key = labeled.canonicalize(replaced, self.generators)
                accumulate(result, key, sign * coef * c, self.p)
            prefix += self.generators.degree(generator)
        return result

    def unit(self) -> Key:
        return UNIT_KEY

    def format_label(self, label: Key) -> str:
        return labeled.key_text(label, self.generators)

    def parse_label(self, text: str) -> Key:
        raw = labeled.to_raw(labeled.parse_key_text(text, self.generators))
        coef, key = labeled.canonicalize(raw, self.generators)
        if coef % self.p != 1:
            raise ValueError(f"樹鍵不是標準形：{text}")
        return key


def free_operad(generators: GeneratorModule, p: int = 2, arity_bound: int = 4, degree_bound: int = 4) -> FreeOperad:
    """建立自由算子（無微分）。"""

    return FreeOperad(generators, p, arity_bound, degree_bound)


def evaluate_tree(
    source: FreeOperad,
    target: DgOperad,
    key: Key,
    image: Callable[[Hashable], Combo],
) -> Combo:
    """把自由算子中的樹送到 target：頂點以生成元像代入，再依樹結構合成。"""

    if key == UNIT_KEY:
        return {target.unit(): 1}

    def positional(node: tuple) -> Tuple[Combo, List[int]]:
        label, children = node
        current = dict(image(label))
        leaves: List[int] = []
        position = 1
        for child in children:
            if isinstance(child, int):
                leaves.append(child)
                position += 1
                continue
            sub, sub_leaves = positional(child[1])
            current = target.compose_combo(current, position, sub)
            leaves.extend(sub_leaves)
            position += len(sub_leaves)
        return current, leaves

    combo, leaves = positional(key)
    # 第 k 個輸入位置接的是葉 leaves[k]
    return target.act_combo(Permutation(tuple(leaves)), combo)
