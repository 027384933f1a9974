"""r-樹：以巢狀 tuple 表示的有根樹、邊收縮、嫁接與約化樹枚舉。

葉為整數 1..r；頂點為其子樹的 tuple。單位樹就是葉 1。
頂點以自根出發的子節點索引路徑識別，非根頂點的路徑同時代表它的出邊（內部邊）。
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple, Union

Shape = Union[int, tuple]
Path = Tuple[int, ...]


def min_leaf(shape: Shape) -> int:
    if isinstance(shape, int):
        return shape
    return min(min_leaf(child) for child in shape)


def leaves_of(shape: Shape) -> List[int]:
    if isinstance(shape, int):
        return [shape]
    return [leaf for child in shape for leaf in leaves_of(child)]


def canonical_shape(shape: Shape) -> Shape:
    """遞迴地依最小葉標籤排序子樹。"""

    if isinstance(shape, int):
        return shape
    return tuple(sorted((canonical_shape(child) for child in shape), key=min_leaf))


def relabel_shape(shape: Shape, mapping: Dict[int, int]) -> Shape:
    if isinstance(shape, int):
        return mapping[shape]
    return tuple(relabel_shape(child, mapping) for child in shape)


@dataclass(frozen=True)
class RTree:
    """葉集合為 {1..r} 的有根樹（標準形）。"""

    shape: Shape

    def __post_init__(self) -> None:
        leaves = leaves_of(self.shape)
        if sorted(leaves) != list(range(1, len(leaves) + 1)):
            raise ValueError(f"葉必須恰為 1..r：{self.shape}")
        object.__setattr__(self, "shape", canonical_shape(self.shape))

    @classmethod
    def unit(cls) -> "RTree":
        return cls(1)

    @classmethod
    def corolla(cls, r: int) -> "RTree":
        """只有一個頂點的終端 r-樹 τ_r。"""

        if r == 1:
            return cls(1)
        return cls(tuple(range(1, r + 1)))

    @property
    def arity(self) -> int:
        return len(leaves_of(self.shape))

    def is_unit(self) -> bool:
        return isinstance(self.shape, int)

    def subtree(self, path: Path) -> Shape:
        node = self.shape
        for index in path:
            node = node[index]
        return node

    def vertices(self) -> List[Path]:
        """深度優先前序的頂點路徑。"""

        found: List[Path] = []

        def walk(node: Shape, path: Path) -> None:
            if isinstance(node, int):
                return
            found.append(path)
            for index, child in enumerate(node):
                walk(child, path + (index,))

        walk(self.shape, ())
        return found

    def internal_edges(self) -> List[Path]:
        """內部邊（以其來源頂點路徑表示），深度優先序。"""

        return [path for path in self.vertices() if path]

    def entries(self, path: Path) -> List[Union[int, Path]]:
        """頂點的入口集合 I_v：葉標籤或子頂點路徑。"""

        node = self.subtree(path)
        return [child if isinstance(child, int) else path + (index,) for index, child in enumerate(node)]

    def is_reduced(self) -> bool:
        """每個頂點至少兩個入口。"""

        return all(len(self.subtree(path)) >= 2 for path in self.vertices())

    def __str__(self) -> str:
        return shape_text(self.shape)


def shape_text(shape: Shape) -> str:
    if isinstance(shape, int):
        return str(shape)
    return "(" + ",".join(shape_text(child) for child in shape) + ")"


def _vertex_leafsets(tree: RTree) -> Dict[Path, FrozenSet[int]]:
    return {path: frozenset(leaves_of(tree.subtree(path))) for path in tree.vertices()}


def contract_edge(tree: RTree, edge: Path) -> Tuple[RTree, Dict[Path, Path]]:
    """收縮內部邊 edge，回傳新樹與頂點對應（以葉集合比對）。"""

    if not edge or edge not in tree.internal_edges():
        raise ValueError(f"只能收縮內部邊：{edge}")

    def rebuild(node: Shape, path: Path) -> Shape:
        if isinstance(node, int):
            return node
        children: List[Shape] = []
        for index, child in enumerate(node):
            child_path = path + (index,)
            if child_path == edge:
                children.extend(rebuild(grand, child_path + (k,)) for k, grand in enumerate(child))
            else:
                children.append(rebuild(child, child_path))
        return tuple(children)

    contracted = RTree(rebuild(tree.shape, ()))
    old_sets = _vertex_leafsets(tree)
    new_by_set = {leafset: path for path, leafset in _vertex_leafsets(contracted).items()}
    merged = edge[:-1]
    mapping: Dict[Path, Path] = {}
    for path, leafset in old_sets.items():
        if path == edge:
            mapping[path] = new_by_set[old_sets[merged]]
        else:
            mapping[path] = new_by_set[leafset]
    return contracted, mapping


def graft(outer: RTree, i: int, inner: RTree) -> RTree:
    """將 inner 的根接到 outer 的第 i 片葉，葉依 ∘_i 慣例重新編號。"""

    s, t = outer.arity, inner.arity
    if not 1 <= i <= s:
        raise ValueError(f"嫁接位置超出範圍：{i}（元數 {s}）")
    shifted_inner = relabel_shape(inner.shape, {k: k + i - 1 for k in range(1, t + 1)})
    outer_map = {k: (k if k < i else k + t - 1) for k in range(1, s + 1) if k != i}

    def rebuild(node: Shape) -> Shape:
        if isinstance(node, int):
            return shifted_inner if node == i else outer_map[node]
        return tuple(rebuild(child) for child in node)

    return RTree(rebuild(outer.shape))


def set_partitions(items: Sequence[int]) -> Iterator[List[List[int]]]:
    """集合分割，區塊依最小元素排序。"""

    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in set_partitions(rest):
        yield [[first]] + partition
        for index in range(len(partition)):
            yield partition[:index] + [[first] + partition[index]] + partition[index + 1 :]


@lru_cache(maxsize=None)
def _reduced_shapes(labels: Tuple[int, ...]) -> Tuple[Tuple[Shape, int], ...]:
    """標籤集合上全部 1-約化樹與其內部邊數。"""

    if len(labels) == 1:
        return ((labels[0], 0),)
    found: List[Tuple[Shape, int]] = []
    for partition in set_partitions(list(labels)):
        if len(partition) < 2:
            continue
        blocks = sorted(partition, key=min)
        options = [_reduced_shapes(tuple(sorted(block))) for block in blocks]
        for combo in product(*options):
            edges = sum(count for _, count in combo) + sum(1 for shape, _ in combo if not isinstance(shape, int))
            found.append((tuple(shape for shape, _ in combo), edges))
    return tuple(found)


def enumerate_reduced_trees(r: int, max_edges: Optional[int] = None) -> List[RTree]:
    """每個同構類一個代表的 1-約化 r-樹，依內部邊數與文字排序。"""

    if r < 1:
        raise ValueError("r 必須至少為 1")
    shapes = [
        (edges, shape_text(shape), shape)
        for shape, edges in _reduced_shapes(tuple(range(1, r + 1)))
        if max_edges is None or edges <= max_edges
    ]
    return [RTree(shape) for _, _, shape in sorted(shapes)]


def to_dot(tree: RTree, lengths: Optional[Dict[Path, str]] = None, labels: Optional[Dict[Path, str]] = None, name: str = "tree") -> str:
    """輸出 Graphviz DOT，邊上可標註長度，頂點可標註標籤。"""

    lengths = lengths or {}
    labels = labels or {}
    lines = [f"digraph {name} {{", "  rankdir=BT;", '  root [shape=point];']

    def vertex_id(path: Path) -> str:
        return "v" + "_".join(str(k) for k in path) if path else "v"

    if tree.is_unit():
        lines.append('  leaf1 [label="1", shape=plaintext];')
        lines.append("  leaf1 -> root;")
        lines.append("}")
        return "\n".join(lines)
    for path in tree.vertices():
        text = labels.get(path, "")
        lines.append(f'  {vertex_id(path)} [label="{text}", shape=circle];')
    lines.append(f"  {vertex_id(())} -> root;")
    for path in tree.vertices():
        for entry in tree.entries(path):
            if isinstance(entry, int):
                lines.append(f'  leaf{entry} [label="{entry}", shape=plaintext];')
                lines.append(f"  leaf{entry} -> {vertex_id(path)};")
            else:
                decoration = lengths.get(entry)
                suffix = f' [label="{decoration}"]' if decoration else ""
                lines.append(f"  {vertex_id(entry)} -> {vertex_id(path)}{suffix};")
    lines.append("}")
    return "\n".join(lines)
