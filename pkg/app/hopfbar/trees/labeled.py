"""帶標籤樹的正規形引擎，自由算子與 W 構造共用。

鍵（key）格式：
- 單位元為整數 ``1``；0 元操作為 ``"*"``；
- 頂點為 ``(label, children)``，子節點是葉（整數）或 ``(length, node)``，
  自由算子的 length 為 ``None``，W 構造則為邊長字串。

張量因子的標準順序：頂點標籤依深度優先前序，其後是邊長（同樣前序）。
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Hashable, Iterator, List, Optional, Protocol, Tuple, Union

from app.hopfbar.combinatorics.permutations import Permutation
from app.hopfbar.trees.interval import EdgeLength

Key = Union[int, str, tuple]
Child = Tuple[str, int]
Factor = Tuple[str, int]

UNIT_KEY: Key = 1
STAR_KEY: Key = "*"


class LabelOperad(Protocol):
    """頂點標籤所在的算子需提供的介面。"""

    def arity(self, label: Hashable) -> int: ...

    def degree(self, label: Hashable) -> int: ...

    def act(self, perm: Permutation, label: Hashable) -> Dict[Hashable, int]: ...

    def format_label(self, label: Hashable) -> str: ...

    def parse_label(self, text: str) -> Hashable: ...


@dataclass
class RawTree:
    """可就地修改的工作用樹。"""

    vertices: Dict[int, List[Any]] = field(default_factory=dict)
    root: Optional[int] = None
    lengths: Dict[int, Optional[EdgeLength]] = field(default_factory=dict)
    order: List[Factor] = field(default_factory=list)
    coef: int = 1

    def copy(self) -> "RawTree":
        return RawTree(
            vertices={vid: [label, list(children)] for vid, (label, children) in self.vertices.items()},
            root=self.root,
            lengths=dict(self.lengths),
            order=list(self.order),
            coef=self.coef,
        )

    def parent_of(self, vid: int) -> Tuple[int, int]:
        """回傳 (父頂點, 0 起算的槽位)。"""

        for parent, (_, children) in self.vertices.items():
            for slot, child in enumerate(children):
                if child == ("vertex", vid):
                    return parent, slot
        raise KeyError(vid)

    def leaf_count(self) -> int:
        if self.root is None:
            return 1
        return sum(1 for _, children in self.vertices.values() for child in children if child[0] == "leaf")

    def preorder(self) -> List[int]:
        found: List[int] = []
        if self.root is None:
            return found
        stack = [self.root]
        while stack:
            vid = stack.pop()
            found.append(vid)
            children = self.vertices[vid][1]
            stack.extend(child[1] for child in reversed(children) if child[0] == "vertex")
        return found

    def min_leaf(self, vid: int) -> int:
        best: Optional[int] = None
        for kind, value in self.vertices[vid][1]:
            candidate = value if kind == "leaf" else self.min_leaf(value)
            if best is None or candidate < best:
                best = candidate
        return best if best is not None else 0

    def leaf_vertex(self, leaf: int) -> Tuple[int, int]:
        """含有葉 leaf 的頂點與槽位。"""

        for vid, (_, children) in self.vertices.items():
            for slot, child in enumerate(children):
                if child == ("leaf", leaf):
                    return vid, slot
        raise KeyError(leaf)

    def next_vid(self) -> int:
        return max(self.vertices, default=-1) + 1


def factor_degree(raw: RawTree, factor: Factor, ops: LabelOperad) -> int:
    kind, vid = factor
    if kind == "v":
        return ops.degree(raw.vertices[vid][0])
    length = raw.lengths[vid]
    return length.degree if length is not None else 0


def koszul_exponent(degrees: List[int], target: List[int]) -> int:
    """把 degrees（目前順序）重排為 target 指定的位置時的 Koszul 指數。"""

    exponent = 0
    for a in range(len(degrees)):
        if degrees[a] % 2 == 0:
            continue
        for b in range(a + 1, len(degrees)):
            if degrees[b] % 2 and target[a] > target[b]:
                exponent += 1
    return exponent


# ------------------------------------------------------------------
# 鍵與工作樹的互轉
# ------------------------------------------------------------------


def key_arity(key: Key) -> int:
    if key == UNIT_KEY:
        return 1
    if key == STAR_KEY:
        return 0
    return len(key_leaves(key))


def key_leaves(node: Any) -> List[int]:
    if isinstance(node, int):
        return [node]
    if node == STAR_KEY:
        return []
    _, children = node
    leaves: List[int] = []
    for child in children:
        leaves.extend([child] if isinstance(child, int) else key_leaves(child[1]))
    return leaves


def iter_nodes(key: Key) -> Iterator[tuple]:
    """深度優先前序走訪鍵中的頂點。"""

    if not isinstance(key, tuple):
        return
    stack = [key]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(child[1] for child in reversed(node[1]) if not isinstance(child, int))


def iter_edges(key: Key) -> Iterator[Optional[str]]:
    """深度優先前序列出內部邊長。"""

    for node in iter_nodes(key):
        for child in node[1]:
            if not isinstance(child, int):
                yield child[0]


def key_internal_edges(key: Key) -> int:
    return sum(1 for _ in iter_edges(key))


def key_label_degree(key: Key, ops: LabelOperad) -> int:
    return sum(ops.degree(node[0]) for node in iter_nodes(key))


def key_degree(key: Key, ops: LabelOperad) -> int:
    edges = sum(1 for length in iter_edges(key) if length == EdgeLength.X01.value)
    return key_label_degree(key, ops) + edges


def to_raw(key: Key, star_label: Optional[Hashable] = None) -> RawTree:
    """由標準鍵建立工作樹，因子順序即標準順序。"""

    raw = RawTree()
    if key == UNIT_KEY:
        return raw
    if key == STAR_KEY:
        raw.vertices[0] = [star_label, []]
        raw.root = 0
        raw.order = [("v", 0)]
        return raw
    edge_factors: List[Factor] = []

    def build(node: tuple) -> int:
        vid = raw.next_vid()
        label, children = node
        raw.vertices[vid] = [label, []]
        raw.order.append(("v", vid))
        for child in children:
            if isinstance(child, int):
                raw.vertices[vid][1].append(("leaf", child))
            else:
                length, sub = child
                child_vid = build(sub)
                raw.vertices[vid][1].append(("vertex", child_vid))
                raw.lengths[child_vid] = EdgeLength(length) if length is not None else None
        return vid

    raw.root = build(key)
    for vid in raw.preorder()[1:]:
        if raw.lengths.get(vid) is not None:
            edge_factors.append(("e", vid))
    raw.order.extend(edge_factors)
    return raw


def canonicalize(raw: RawTree, ops: LabelOperad) -> Tuple[int, Key]:
    """排序子節點（作用在標籤上）並計算 Koszul 符號，回傳 (係數, 鍵)。"""

    if raw.root is None:
        return raw.coef, UNIT_KEY
    coef = raw.coef
    vertices = {vid: [label, list(children)] for vid, (label, children) in raw.vertices.items()}

    def settle(vid: int) -> int:
        nonlocal coef
        label, children = vertices[vid]
        mins = []
        for kind, value in children:
            mins.append(value if kind == "leaf" else settle(value))
        if not children:
            return 0
        old_positions = sorted(range(len(children)), key=lambda k: mins[k])
        if old_positions != list(range(len(children))):
            pi = Permutation(tuple(k + 1 for k in old_positions))
            image = ops.act(pi.inverse(), label)
            if len(image) != 1:
                raise ValueError(f"標籤作用不是單項式：{ops.format_label(label)}")
            (new_label, factor), = image.items()
            vertices[vid] = [new_label, [children[k] for k in old_positions]]
            coef *= factor
        return min(mins)

    settle(raw.root)
    sorted_raw = RawTree(vertices=vertices, root=raw.root, lengths=raw.lengths, order=raw.order, coef=coef)
    preorder = sorted_raw.preorder()
    canonical: List[Factor] = [("v", vid) for vid in preorder]
    canonical.extend(("e", vid) for vid in preorder[1:] if raw.lengths.get(vid) is not None)
    if sorted(canonical) != sorted(raw.order):
        raise ValueError("工作樹的因子順序與頂點不一致")
    position = {f: k for k, f in enumerate(canonical)}
    degrees = [factor_degree(sorted_raw, f, ops) for f in raw.order]
    if koszul_exponent(degrees, [position[f] for f in raw.order]) % 2:
        coef = -coef

    def build(vid: int) -> Key:
        label, children = vertices[vid]
        parts = []
        for kind, value in children:
            if kind == "leaf":
                parts.append(value)
            else:
                length = raw.lengths.get(value)
                parts.append((length.value if length is not None else None, build(value)))
        return (label, tuple(parts))

    if not vertices[raw.root][1]:
        return coef, STAR_KEY
    return coef, build(raw.root)


# ------------------------------------------------------------------
# 樹的基本操作
# ------------------------------------------------------------------


def relabel_leaves(raw: RawTree, mapping: Dict[int, int]) -> None:
    for vid, (_, children) in raw.vertices.items():
        raw.vertices[vid][1] = [("leaf", mapping[v]) if kind == "leaf" else (kind, v) for kind, v in children]


def _renumbered(raw: RawTree, offset: int) -> RawTree:
    def shift(child: Child) -> Child:
        return child if child[0] == "leaf" else ("vertex", child[1] + offset)

    return RawTree(
        vertices={vid + offset: [label, [shift(c) for c in children]] for vid, (label, children) in raw.vertices.items()},
        root=None if raw.root is None else raw.root + offset,
        lengths={vid + offset: length for vid, length in raw.lengths.items()},
        order=[(kind, vid + offset) for kind, vid in raw.order],
        coef=raw.coef,
    )


def graft(outer: RawTree, i: int, inner: RawTree, length: Optional[EdgeLength]) -> RawTree:
    """把 inner 的根接到 outer 的第 i 片葉；新邊長為 length。"""

    s = outer.leaf_count()
    t = inner.leaf_count() if inner.root is not None else 1
    if not 1 <= i <= s:
        raise ValueError(f"嫁接位置超出範圍：{i}（元數 {s}）")
    if outer.root is None:
        result = inner.copy()
        result.coef *= outer.coef
        return result
    result = outer.copy()
    result.coef *= inner.coef
    if inner.root is None:
        return result
    vid, slot = result.leaf_vertex(i)
    relabel_leaves(result, {k: (k if k < i else k + t - 1) for k in range(1, s + 1) if k != i} | {i: i})
    moved = _renumbered(inner, result.next_vid())
    relabel_leaves(moved, {k: k + i - 1 for k in range(1, t + 1)})
    result.vertices.update(moved.vertices)
    result.vertices[vid][1][slot] = ("vertex", moved.root)
    result.lengths.update(moved.lengths)
    result.lengths[moved.root] = length
    result.order.extend(moved.order)
    if length is not None:
        result.order.append(("e", moved.root))
    return result


def substitute(raw: RawTree, vid: int, tree: RawTree) -> RawTree:
    """以 tree（元數等於該頂點入口數）取代頂點 vid，tree 的第 k 片葉接上原第 k 個子節點。"""

    result = raw.copy()
    children = result.vertices[vid][1]
    moved = _renumbered(tree, result.next_vid())
    if moved.root is None:
        raise ValueError("不能以單位樹取代頂點")
    for sub_vid, (_, sub_children) in moved.vertices.items():
        moved.vertices[sub_vid][1] = [children[v - 1] if kind == "leaf" else (kind, v) for kind, v in sub_children]
    del result.vertices[vid]
    result.vertices.update(moved.vertices)
    result.lengths.update({k: v for k, v in moved.lengths.items()})
    if result.root == vid:
        result.root = moved.root
    else:
        parent, slot = result.parent_of(vid)
        result.vertices[parent][1][slot] = ("vertex", moved.root)
        result.lengths[moved.root] = result.lengths.pop(vid)
    position = result.order.index(("v", vid))
    result.order[position : position + 1] = moved.order
    result.order = [("e", moved.root) if f == ("e", vid) else f for f in result.order]
    result.coef *= moved.coef
    return result


def contract(raw: RawTree, child: int, ops: Any) -> List[RawTree]:
    """收縮 child 的出邊（長度必須是 0 度），回傳標籤合成展開後的各項。"""

    parent, slot = raw.parent_of(child)
    label_v = raw.vertices[parent][0]
    label_c, grand = raw.vertices[child]
    order = [f for f in raw.order if f != ("e", child)]
    pos_c = order.index(("v", child))
    pos_v = order.index(("v", parent))
    degree_c = ops.degree(label_c)
    if pos_c > pos_v:
        between = order[pos_v + 1 : pos_c]
    else:
        between = order[pos_c + 1 : pos_v + 1]
    passed = sum(factor_degree(raw, f, ops) for f in between)
    sign = -1 if (degree_c * passed) % 2 else 1
    order.remove(("v", child))
    results = []
    for label, coef in ops.compose(label_v, slot + 1, label_c).items():
        tree = raw.copy()
        tree.order = list(order)
        children = tree.vertices[parent][1]
        tree.vertices[parent] = [label, children[:slot] + list(grand) + children[slot + 1 :]]
        del tree.vertices[child]
        tree.lengths.pop(child, None)
        tree.coef *= sign * coef
        results.append(tree)
    return results


def remove_factor(raw: RawTree, factor: Factor) -> None:
    if factor in raw.order:
        raw.order.remove(factor)


# ------------------------------------------------------------------
# 文字格式
# ------------------------------------------------------------------


def key_text(key: Key, ops: LabelOperad) -> str:
    """`{label}(children)`；子節點為葉或 `x1:{…}(…)`。"""

    if key == UNIT_KEY:
        return "1"
    if key == STAR_KEY:
        return "*"
    def render(node: tuple) -> str:
        label, children = node
        parts = []
        for child in children:
            if isinstance(child, int):
                parts.append(str(child))
            else:
                length, sub = child
                prefix = f"{length}:" if length is not None else ""
                parts.append(prefix + render(sub))
        return "{" + ops.format_label(label) + "}(" + ",".join(parts) + ")"

    return render(key)


def parse_key_text(text: str, ops: LabelOperad) -> Key:
    """key_text 的反函式；回傳的鍵尚未經標準化。"""

    text = text.strip()
    if text == "1":
        return UNIT_KEY
    if text == "*":
        return STAR_KEY
    position = 0

    def expect(char: str) -> None:
        nonlocal position
        if position >= len(text) or text[position] != char:
            raise ValueError(f"樹鍵格式錯誤（位置 {position} 需要 {char!r}）：{text}")
        position += 1

    def node() -> tuple:
        nonlocal position
        expect("{")
        end = text.index("}", position)
        label = ops.parse_label(text[position:end])
        position = end + 1
        expect("(")
        children = []
        while text[position] != ")":
            if text[position].isdigit():
                start = position
                while text[position].isdigit():
                    position += 1
                children.append(int(text[start:position]))
            else:
                length = None
                if text[position] == "x":
                    colon = text.index(":", position)
                    length = text[position:colon]
                    position = colon + 1
                children.append((length, node()))
            if text[position] == ",":
                position += 1
        expect(")")
        return (label, tuple(children))

    result = node()
    if position != len(text):
        raise ValueError(f"樹鍵後方有多餘文字：{text}")
    return result
