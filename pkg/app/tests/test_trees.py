"""r-樹枚舉、嫁接、邊收縮與區間 I 的單元測試。"""

from __future__ import annotations

import pytest

from app.hopfbar.trees.interval import (
    EdgeLength,
    interval_counit,
    interval_diagonal,
    interval_differential,
    interval_product,
    interval_table,
)
from app.hopfbar.trees.rtree import (
    RTree,
    contract_edge,
    enumerate_reduced_trees,
    graft,
    set_partitions,
    to_dot,
)


def test_reduced_tree_counts() -> None:
    """約化樹數量 1、4、26。"""

    assert [len(enumerate_reduced_trees(r)) for r in (2, 3, 4)] == [1, 4, 26]
    assert len(enumerate_reduced_trees(4, max_edges=0)) == 1


def test_reduced_trees_sorted_by_edges_then_text() -> None:
    trees = enumerate_reduced_trees(3)
    assert [str(tree) for tree in trees] == ["(1,2,3)", "((1,2),3)", "((1,3),2)", "(1,(2,3))"]
    assert all(tree.is_reduced() for tree in trees)


def test_rtree_validation_and_canonical_form() -> None:
    """葉必須恰為 1..r，子樹依最小葉排序。"""

    with pytest.raises(ValueError):
        RTree((1, 3))
    assert RTree((3, (2, 1))).shape == ((1, 2), 3)
    assert not RTree(((1,), 2)).is_reduced()
    assert RTree.unit().is_unit() and RTree.corolla(1).is_unit()
    assert RTree.corolla(3).internal_edges() == []


def test_graft_renumbers_leaves() -> None:
    binary = RTree.corolla(2)
    assert graft(binary, 1, binary).shape == ((1, 2), 3)
    assert graft(binary, 2, binary).shape == (1, (2, 3))
    with pytest.raises(ValueError):
        graft(binary, 3, binary)


def test_contract_edge_maps_vertices() -> None:
    tree = RTree(((1, 2), 3))
    contracted, mapping = contract_edge(tree, (0,))
    assert contracted == RTree.corolla(3)
    assert mapping == {(): (), (0,): ()}
    with pytest.raises(ValueError):
        contract_edge(tree, ())


def test_set_partitions_count() -> None:
    """Bell 數 B3 = 5。"""

    assert len(list(set_partitions([1, 2, 3]))) == 5


def test_to_dot_marks_lengths() -> None:
    dot = to_dot(RTree(((1, 2), 3)), lengths={(0,): "x01"}, name="t")
    assert dot.startswith("digraph t {")
    assert "x01" in dot


def test_interval_structure() -> None:
    """I 的乘積、微分、對角與餘單位。"""

    assert interval_product(EdgeLength.X01, EdgeLength.X1) is None
    assert interval_product(EdgeLength.X0, EdgeLength.X01) is EdgeLength.X01
    assert interval_product(EdgeLength.X1, EdgeLength.X1) is EdgeLength.X1
    assert interval_differential(EdgeLength.X01) == [(EdgeLength.X1, 1), (EdgeLength.X0, -1)]
    assert interval_differential(EdgeLength.X1) == []
    assert interval_diagonal(EdgeLength.X01) == [
        (EdgeLength.X0, EdgeLength.X01),
        (EdgeLength.X01, EdgeLength.X1),
    ]
    assert [interval_counit(length) for length in EdgeLength] == [1, 1, 0]
    assert interval_table()[("x01", "x01")] == "0"
    assert EdgeLength.X01.degree == 1
