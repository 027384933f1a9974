"""連通單位算子 P 的 dg Boardman–Vogt 構造 W(P)。

元素一律保持正規形：內部邊長只有 x1 或 x01，沒有 0 元頂點，也沒有以單位標記的 1 元頂點。
W(P)(0) 與 W(P)(1) 都是 F，分別以鍵 ``"*"`` 與 ``1`` 表示。
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Dict, Hashable, List, Optional, Tuple, Union

from app.hopfbar.combinatorics.permutations import Permutation
from app.hopfbar.linear.combination import accumulate, difference, merge
from app.hopfbar.models.reports import CheckReport
from app.hopfbar.operads.base import Combo, DgOperad
from app.hopfbar.operads.checks import draw_samples
from app.hopfbar.trees import labeled
from app.hopfbar.trees.interval import (
    EdgeLength,
    interval_counit,
    interval_diagonal,
    interval_product,
)
from app.hopfbar.trees.labeled import STAR_KEY, UNIT_KEY, Key, RawTree
from app.hopfbar.trees.rtree import RTree, Shape, enumerate_reduced_trees, to_dot
from app.hopfbar.utils.logging import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class EdgeSplit:
    """x = coef · σ·(outer ∘_slot inner)，在第一條 x1 邊切開。"""

    coef: int
    perm: Permutation
    outer: Key
    slot: int
    inner: Key


@dataclass(frozen=True)
class SplitTree:
    """以生成元為頂點的合成樹。"""

    coef: int
    perm: Permutation
    outer: Union["SplitTree", Key]
    slot: int
    inner: Union["SplitTree", Key]


class WOperad(DgOperad):
    """W(P)：標籤為正規形樹鍵。"""

    def __init__(self, inner: DgOperad, arity_max: int = 3, edge_max: int = 2, label_degree_max: int = 2) -> None:
        if not inner.is_unital:
            raise ValueError("W 構造需要單位算子（含 0 元操作）")
        super().__init__(inner.p, arity_max, label_degree_max + edge_max)
        self.inner = inner
        self.edge_max = edge_max
        self.label_degree_max = label_degree_max
        self.name = f"W({inner.name})"
        self._diagonals: Dict[Tuple[Key, int], Dict[Tuple[Key, ...], int]] = {}

    # ------------------------------------------------------------------
    # 基底
    # ------------------------------------------------------------------

    def arity(self, label: Key) -> int:
        return labeled.key_arity(label)

    def degree(self, label: Key) -> int:
        if label in (UNIT_KEY, STAR_KEY):
            return 0
        return labeled.key_degree(label, self.inner)

    def _enumerate(self, r: int, d: int) -> List[Key]:
        if r == 0:
            return [STAR_KEY] if d == 0 else []
        if r == 1:
            return [UNIT_KEY] if d == 0 else []
        found: List[Key] = []
        for tree in enumerate_reduced_trees(r, self.edge_max):
            found.extend(self._decorations(tree, d, lengths=(EdgeLength.X1, EdgeLength.X01)))
        return found

    def _decorations(self, tree: RTree, d: int, lengths: Tuple[EdgeLength, ...]) -> List[Key]:
        vertices = tree.vertices()
        edges = tree.internal_edges()
        label_options = [self.inner.basis_upto(len(tree.subtree(path)), self.label_degree_max) for path in vertices]
        found: List[Key] = []
        for edge_choice in product(lengths, repeat=len(edges)):
            label_degree = d - sum(length.degree for length in edge_choice)
            if label_degree < 0 or label_degree > self.label_degree_max:
                continue
            edge_map = dict(zip(edges, edge_choice))
            for choice in product(*label_options):
                if sum(self.inner.degree(label) for label in choice) != label_degree:
                    continue
                found.append(self._build(tree.shape, dict(zip(vertices, choice)), edge_map, ()))
        return found

    def _build(self, shape: Shape, labels: Dict, lengths: Dict, path: tuple) -> Key:
        children = []
        for index, child in enumerate(shape):
            if isinstance(child, int):
                children.append(child)
            else:
                child_path = path + (index,)
                children.append((lengths[child_path].value, self._build(child, labels, lengths, child_path)))
        return (labels[path], tuple(children))

    def cells(self, d: int, r: int) -> List[Key]:
        """E^d：恰有 d 條內部邊且全為 x01 的生成元。"""

        if r < 2:
            return []
        found: List[Key] = []
        for tree in enumerate_reduced_trees(r, d):
            if len(tree.internal_edges()) != d:
                continue
            for label_degree in range(self.label_degree_max + 1):
                found.extend(self._decorations(tree, label_degree + d, lengths=(EdgeLength.X01,)))
        return found

    # ------------------------------------------------------------------
    # 正規化
    # ------------------------------------------------------------------

    def _raw(self, key: Key) -> RawTree:
        return labeled.to_raw(key, self.inner.star())

    def _reduce_once(self, raw: RawTree) -> Optional[List[RawTree]]:
        """套用一條改寫規則；已是正規形時回傳 None。"""

        unit = self.inner.unit()
        for vid in raw.preorder():
            label, children = raw.vertices[vid]
            if not children and vid != raw.root:
                return self._remove_nullary(raw, vid)
            if vid != raw.root and raw.lengths.get(vid) is EdgeLength.X0:
                return labeled.contract(raw, vid, self.inner)
            if len(children) == 1:
                if label != unit:
                    raise ValueError(f"P(1) 的標籤必須是單位：{self.inner.format_label(label)}")
                return self._remove_unit(raw, vid)
        return None

    def _remove_nullary(self, raw: RawTree, vid: int) -> List[RawTree]:
        parent, slot = raw.parent_of(vid)
        if not interval_counit(raw.lengths[vid]):
            return []
        results = []
        for label, coef in self.inner.partial(raw.vertices[parent][0], slot + 1).items():
            tree = raw.copy()
            children = tree.vertices[parent][1]
            tree.vertices[parent] = [label, children[:slot] + children[slot + 1 :]]
            del tree.vertices[vid]
            del tree.lengths[vid]
            labeled.remove_factor(tree, ("v", vid))
            labeled.remove_factor(tree, ("e", vid))
            tree.coef *= coef
            results.append(tree)
        return results

    def _remove_unit(self, raw: RawTree, vid: int) -> List[RawTree]:
        tree = raw.copy()
        kind, child = tree.vertices[vid][1][0]
        upper = tree.lengths.get(vid, EdgeLength.X1) if vid != tree.root else EdgeLength.X1
        lower = tree.lengths[child] if kind == "vertex" else EdgeLength.X1
        merged = interval_product(upper, lower)
        if merged is None:
            return []
        labeled.remove_factor(tree, ("v", vid))
        del tree.vertices[vid]
        if vid == tree.root:
            if kind == "leaf":
                return [RawTree(coef=tree.coef)]
            tree.root = child
            del tree.lengths[child]
            labeled.remove_factor(tree, ("e", child))
            return [tree]
        parent, slot = raw.parent_of(vid)
        tree.vertices[parent][1][slot] = (kind, child)
        if kind == "leaf":
            del tree.lengths[vid]
            labeled.remove_factor(tree, ("e", vid))
            return [tree] if merged is EdgeLength.X1 else []
        if upper is EdgeLength.X01:
            labeled.remove_factor(tree, ("e", child))
            tree.order = [("e", child) if f == ("e", vid) else f for f in tree.order]
        else:
            labeled.remove_factor(tree, ("e", vid))
        del tree.lengths[vid]
        tree.lengths[child] = merged
        return [tree]

    def normalize(self, raw: RawTree) -> Combo:
        """x0 收縮、0 元頂點移除與單位頂點移除，直到正規形。"""

        result: Combo = {}
        stack = [raw]
        while stack:
            tree = stack.pop()
            if tree.coef % self.p == 0:
                continue
            step = self._reduce_once(tree)
            if step is not None:
                stack.extend(step)
                continue
            coef, key = labeled.canonicalize(tree, self.inner)
            accumulate(result, key, coef, self.p)
        return result

    # ------------------------------------------------------------------
    # 算子結構
    # ------------------------------------------------------------------

    def act(self, perm: Permutation, label: Key) -> Combo:
        if label in (UNIT_KEY, STAR_KEY):
            return {label: 1}
        raw = self._raw(label)
        labeled.relabel_leaves(raw, {k: perm(k) for k in range(1, perm.arity + 1)})
        coef, key = labeled.canonicalize(raw, self.inner)
        return {key: coef % self.p} if coef % self.p else {}

    def compose(self, x: Key, i: int, y: Key) -> Combo:
        """嫁接，新邊長為 x1；與 * 合成時改走 ∂_i。"""

        if x == UNIT_KEY:
            return {y: 1}
        if y == UNIT_KEY:
            return {x: 1}
        if y == STAR_KEY:
            return self.partial(x, i)
        raw = labeled.graft(self._raw(x), i, self._raw(y), EdgeLength.X1)
        coef, key = labeled.canonicalize(raw, self.inner)
        return {key: coef % self.p} if coef % self.p else {}

    def partial(self, x: Key, i: int) -> Combo:
        """x ∘_i *：刪去葉 i 後重新正規化。"""

        if x == UNIT_KEY:
            return {STAR_KEY: 1}
        raw = labeled.graft(self._raw(x), i, self._raw(STAR_KEY), EdgeLength.X1)
        return self.normalize(raw)

    def differential(self, label: Key) -> Combo:
        result: Combo = {}
        if label in (UNIT_KEY, STAR_KEY):
            return result
        raw = self._raw(label)
        prefix = 0
        for factor in list(raw.order):
            kind, vid = factor
            sign = self.field.sign(prefix)
            if kind == "v":
                for image, coef in self.inner.differential(raw.vertices[vid][0]).items():
                    tree = raw.copy()
                    tree.vertices[vid][0] = image
                    tree.coef = sign * coef
                    merge(result, self.normalize(tree), 1, self.p)
            elif raw.lengths[vid] is EdgeLength.X01:
                for length, coef in ((EdgeLength.X1, 1), (EdgeLength.X0, -1)):
                    tree = raw.copy()
                    tree.lengths[vid] = length
                    tree.coef = sign * coef
                    merge(result, self.normalize(tree), 1, self.p)
            prefix += labeled.factor_degree(raw, factor, self.inner)
        return result

    def attaching_map(self, label: Key) -> Combo:
        """微分中來自 x01 邊的部分（胞腔黏合映射）。"""

        result: Combo = {}
        if label in (UNIT_KEY, STAR_KEY):
            return result
        raw = self._raw(label)
        prefix = 0
        for factor in list(raw.order):
            kind, vid = factor
            if kind == "e" and raw.lengths[vid] is EdgeLength.X01:
                for length, coef in ((EdgeLength.X1, 1), (EdgeLength.X0, -1)):
                    tree = raw.copy()
                    tree.lengths[vid] = length
                    tree.coef = self.field.sign(prefix) * coef
                    merge(result, self.normalize(tree), 1, self.p)
            prefix += labeled.factor_degree(raw, factor, self.inner)
        return result

    def unit(self) -> Key:
        return UNIT_KEY

    def star(self) -> Key:
        return STAR_KEY

    @property
    def is_hopf(self) -> bool:
        return self.inner.is_hopf

    def diagonal(self, label: Key) -> Dict[Tuple[Key, Key], int]:
        """標籤對角與邊長對角的張量，兩側各自正規化。"""

        if label in (UNIT_KEY, STAR_KEY):
            return {(label, label): 1}
        raw = self._raw(label)
        options = []
        for kind, vid in raw.order:
            if kind == "v":
                options.append([(a, b, c) for (a, b), c in self.inner.diagonal(raw.vertices[vid][0]).items()])
            else:
                options.append([(a, b, 1) for a, b in interval_diagonal(raw.lengths[vid])])
        result: Dict[Tuple[Key, Key], int] = {}
        for choice in product(*options):
            left, right = raw.copy(), raw.copy()
            coef = 1
            seconds: List[int] = []
            exponent = 0
            for (kind, vid), (a, b, c) in zip(raw.order, choice):
                coef *= c
                if kind == "v":
                    left.vertices[vid][0], right.vertices[vid][0] = a, b
                    first_degree, second_degree = self.inner.degree(a), self.inner.degree(b)
                else:
                    left.lengths[vid], right.lengths[vid] = a, b
                    first_degree, second_degree = a.degree, b.degree
                exponent += first_degree * sum(seconds)
                seconds.append(second_degree)
            left.coef, right.coef = 1, 1
            factor = coef * self.field.sign(exponent)
            for lkey, lc in self.normalize(left).items():
                for rkey, rc in self.normalize(right).items():
                    accumulate(result, (lkey, rkey), factor * lc * rc, self.p)
        return result

    def iterated_diagonal(self, label: Key, n: int) -> Dict[Tuple[Key, ...], int]:
        """Δ^n = (id^{⊗n−2} ⊗ Δ)∘Δ^{n−1}；n = 1 為恆等。"""

        cache_key = (label, n)
        if cache_key in self._diagonals:
            return self._diagonals[cache_key]
        if n < 1:
            raise ValueError(f"對角的份數必須為正：{n}")
        if n == 1:
            result: Dict[Tuple[Key, ...], int] = {(label,): 1}
        else:
            result = {}
            for pieces, coef in self.iterated_diagonal(label, n - 1).items():
                for (left, right), c in self.diagonal(pieces[-1]).items():
                    accumulate(result, pieces[:-1] + (left, right), coef * c, self.p)
        self._diagonals[cache_key] = result
        return result

    def counit(self, label: Key) -> int:
        if label in (UNIT_KEY, STAR_KEY):
            return 1
        if any(length == EdgeLength.X01.value for length in labeled.iter_edges(label)):
            return 0
        value = 1
        for node in labeled.iter_nodes(label):
            value *= self.inner.counit(node[0])
        return value % self.p

    # ------------------------------------------------------------------
    # 增廣與截面
    # ------------------------------------------------------------------

    def augmentation(self, label: Key) -> Combo:
        """ε：有 x01 邊則為 0，否則在 P 中合成全部標籤。"""

        if label == UNIT_KEY:
            return {self.inner.unit(): 1}
        if label == STAR_KEY:
            return {self.inner.star(): 1}
        if any(length == EdgeLength.X01.value for length in labeled.iter_edges(label)):
            return {}
        raw = self._raw(label)
        for vid in list(raw.lengths):
            raw.lengths[vid] = EdgeLength.X0
        result: Combo = {}
        for key, coef in self.normalize(raw).items():
            if key == UNIT_KEY:
                accumulate(result, self.inner.unit(), coef, self.p)
            elif key == STAR_KEY:
                accumulate(result, self.inner.star(), coef, self.p)
            else:
                accumulate(result, key[0], coef, self.p)
        return result

    def section(self, label: Hashable) -> Combo:
        """η(p) = corolla(p)。"""

        r = self.inner.arity(label)
        if r == 0:
            return {STAR_KEY: 1}
        if r == 1:
            return {UNIT_KEY: 1} if label == self.inner.unit() else {}
        return {(label, tuple(range(1, r + 1))): 1}

    # ------------------------------------------------------------------
    # 生成元分解
    # ------------------------------------------------------------------

    def is_generator(self, label: Key) -> bool:
        return isinstance(label, tuple) and all(length == EdgeLength.X01.value for length in labeled.iter_edges(label))

    def cell_degree(self, label: Key) -> int:
        return labeled.key_internal_edges(label) if isinstance(label, tuple) else 0

    def split_at_edge(self, label: Key) -> Optional[EdgeSplit]:
        """在深度優先序的第一條 x1 邊切開；生成元回傳 None。"""

        if not isinstance(label, tuple):
            return None
        raw = self._raw(label)
        cut = next((vid for vid in raw.preorder()[1:] if raw.lengths[vid] is EdgeLength.X1), None)
        if cut is None:
            return None
        below = set()
        stack = [cut]
        while stack:
            vid = stack.pop()
            below.add(vid)
            stack.extend(v for kind, v in raw.vertices[vid][1] if kind == "vertex")
        inner_leaves = sorted(v for vid in below for kind, v in raw.vertices[vid][1] if kind == "leaf")
        anchor = inner_leaves[0]
        outer_leaves = sorted(
            [v for vid in raw.vertices if vid not in below for kind, v in raw.vertices[vid][1] if kind == "leaf"] + [anchor]
        )

        q = RawTree(
            vertices={vid: [lab, list(ch)] for vid, (lab, ch) in raw.vertices.items() if vid in below},
            root=cut,
            lengths={vid: raw.lengths[vid] for vid in below if vid != cut},
            order=[f for f in raw.order if f[1] in below and f != ("e", cut)],
        )
        labeled.relabel_leaves(q, {leaf: rank for rank, leaf in enumerate(inner_leaves, start=1)})
        p = RawTree(
            vertices={vid: [lab, list(ch)] for vid, (lab, ch) in raw.vertices.items() if vid not in below},
            root=raw.root,
            lengths={vid: raw.lengths[vid] for vid in raw.lengths if vid not in below},
            order=[f for f in raw.order if f[1] not in below],
        )
        parent, slot = raw.parent_of(cut)
        p.vertices[parent][1][slot] = ("leaf", anchor)
        labeled.relabel_leaves(p, {leaf: rank for rank, leaf in enumerate(outer_leaves, start=1)})
        _, outer = labeled.canonicalize(p, self.inner)
        _, inner = labeled.canonicalize(q, self.inner)
        slot_index = outer_leaves.index(anchor) + 1
        t = len(inner_leaves)
        images = []
        for k in range(1, len(outer_leaves) + t):
            if k < slot_index:
                images.append(outer_leaves[k - 1])
            elif k < slot_index + t:
                images.append(inner_leaves[k - slot_index])
            else:
                images.append(outer_leaves[k - t])
        perm = Permutation(tuple(images))
        rebuilt = self.act_combo(perm, self.compose(outer, slot_index, inner))
        coef = rebuilt.get(label, 0)
        if len(rebuilt) != 1 or not coef:
            raise ValueError(f"切邊重組失敗：{self.format_label(label)}")
        return EdgeSplit(self.field.inverse(coef), perm, outer, slot_index, inner)

    def generator_split(self, label: Key) -> Union[SplitTree, Key]:
        """反覆切開 x1 邊，把正規形元素寫成生成元的合成樹。"""

        split = self.split_at_edge(label)
        if split is None:
            return label
        return SplitTree(
            split.coef,
            split.perm,
            self.generator_split(split.outer),
            split.slot,
            self.generator_split(split.inner),
        )

    def compose_split(self, split: Union[SplitTree, Key]) -> Combo:
        """generator_split 的反向：沿合成樹重新合成。"""

        if not isinstance(split, SplitTree):
            return {split: 1}
        composed = self.compose_combo(self.compose_split(split.outer), split.slot, self.compose_split(split.inner))
        result: Combo = {}
        merge(result, self.act_combo(split.perm, composed), split.coef, self.p)
        return result

    # ------------------------------------------------------------------
    # 文字與圖形
    # ------------------------------------------------------------------

    def format_label(self, label: Key) -> str:
        return labeled.key_text(label, self.inner)

    def parse_label(self, text: str) -> Key:
        parsed = labeled.parse_key_text(text, self.inner)
        if parsed in (UNIT_KEY, STAR_KEY):
            return parsed
        coef, key = labeled.canonicalize(self._raw(parsed), self.inner)
        if coef % self.p != 1 or key != parsed:
            raise ValueError(f"樹鍵不是正規形：{text}")
        return key

    def to_dot(self, label: Key, name: str = "w") -> str:
        """帶邊長與頂點標籤的 DOT 圖。"""

        if label == STAR_KEY:
            return f'digraph {name} {{\n  star [label="*"];\n}}'
        if label == UNIT_KEY:
            return to_dot(RTree.unit(), name=name)
        lengths: Dict[tuple, str] = {}
        labels: Dict[tuple, str] = {}

        def walk(node: tuple, path: tuple) -> Shape:
            labels[path] = self.inner.format_label(node[0])
            shape = []
            for index, child in enumerate(node[1]):
                if isinstance(child, int):
                    shape.append(child)
                else:
                    lengths[path + (index,)] = child[0]
                    shape.append(walk(child[1], path + (index,)))
            return tuple(shape)

        tree = RTree(walk(label, ()))
        return to_dot(tree, lengths=lengths, labels=labels, name=name)


def build_w(inner: DgOperad, arity_max: int = 3, edge_max: int = 2, label_degree_max: int = 2) -> WOperad:
    operad = WOperad(inner, arity_max, edge_max, label_degree_max)
    logger.info("已建立 %s：元數≤%s 內部邊≤%s 標籤度數≤%s", operad.name, arity_max, edge_max, label_degree_max)
    return operad


def check_augmentation(W: WOperad, arity_bound: int, degree_bound: int, sample: int = 200, seed: int = 0) -> CheckReport:
    """ε: W(P) → P 為鏈映射與算子態射，且 εη = id。"""

    P = W.inner
    p = W.p
    report = CheckReport(name=f"{W.name}-augmentation")
    rng = random.Random(seed)

    def augment(combo: Combo) -> Combo:
        result: Combo = {}
        for key, coef in combo.items():
            merge(result, W.augmentation(key), coef, p)
        return result

    basis = {r: W.basis_upto(r, degree_bound) for r in range(2, arity_bound + 1)}
    for r, labels in basis.items():
        for label in labels:
            left = augment(W.differential(label))
            right = P.differential_combo(W.augmentation(label))
            report.record("chain-map", not difference(left, right, p), W.format_label(label))
        for label in P.basis_upto(r, min(degree_bound, P.degree_max)):
            report.record("section", not difference(augment(W.section(label)), {label: 1}, p), P.format_label(label))
    for s, labels_s in basis.items():
        for t, labels_t in basis.items():
            if s + t - 1 > arity_bound:
                continue
            for x, y in draw_samples([labels_s, labels_t], sample, rng, report):
                for i in range(1, s + 1):
                    left = augment(W.compose(x, i, y))
                    right = P.compose_combo(W.augmentation(x), i, W.augmentation(y))
                    report.record("morphism", not difference(left, right, p), f"{W.format_label(x)} ∘_{i} {W.format_label(y)}")
    logger.info("%s 增廣檢查：%s 項，失敗 %s 項", W.name, report.checked, len(report.failures))
    return report
