"""draw 指令的物件代號：樹、嫁接後的 W 元素與胞腔。"""

from __future__ import annotations

from typing import List, Tuple

from app.hopfbar.trees.rtree import enumerate_reduced_trees, to_dot
from app.hopfbar.wconstruction.operad import WOperad

DotFile = Tuple[str, str]


def draw_tree(r: int, index: int) -> List[DotFile]:
    trees = enumerate_reduced_trees(r)
    if not 0 <= index < len(trees):
        raise ValueError(f"元數 {r} 的約化樹只有 {len(trees)} 棵")
    name = f"tree_{r}_{index}"
    return [(name, to_dot(trees[index], name=name))]


def draw_composite(W: WOperad, i: int) -> List[DotFile]:
    """兩個二元 corolla 沿第 i 個輸入以 x1 邊嫁接。"""

    if i not in (1, 2):
        raise ValueError(f"二元 corolla 只有輸入 1、2：{i}")
    key = next(iter(W.section(W.inner.basis(2, 0)[0])))
    files: List[DotFile] = []
    for n, (composite, coef) in enumerate(sorted(W.compose(key, i, key).items(), key=lambda item: W.format_label(item[0]))):
        name = f"compose_{i}_{n}"
        files.append((name, f"// {coef}*{W.format_label(composite)}\n" + W.to_dot(composite, name=name)))
    return files


def draw_cells(W: WOperad, d: int, r: int) -> List[DotFile]:
    files: List[DotFile] = []
    for n, key in enumerate(W.cells(d, r)):
        name = f"cell_{d}_{r}_{n}"
        files.append((name, f"// {W.format_label(key)}\n" + W.to_dot(key, name=name)))
    return files


def cell_records(W: WOperad, d: int, r: int) -> List[str]:
    """每個胞腔一行：`生成元 ; 黏合映射`。"""

    return [f"{W.format_label(key)} ; {W.format_combo(W.attaching_map(key))}" for key in W.cells(d, r)]


def draw_object(W: WOperad, text: str) -> List[DotFile]:
    """`tree:<r>:<index>`、`compose:<i>`、`cell:<d>:<r>`，其餘視為 W 元素的文字鍵。"""

    kind, _, rest = text.partition(":")
    parts = rest.split(":") if rest else []
    if kind == "tree" and len(parts) == 2:
        return draw_tree(int(parts[0]), int(parts[1]))
    if kind == "compose" and len(parts) == 1:
        return draw_composite(W, int(parts[0]))
    if kind == "cell" and len(parts) == 2:
        return draw_cells(W, int(parts[0]), int(parts[1]))
    key = W.parse_label(text)
    return [("w", W.to_dot(key, name="w"))]
