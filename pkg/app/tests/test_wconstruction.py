"""W 構造：正規形、合成、微分、增廣、切邊分解與 draw 物件。"""

from __future__ import annotations

import pytest

from app.hopfbar.operads.checks import check_hopf_axioms, check_operad_axioms
from app.hopfbar.trees.labeled import STAR_KEY, UNIT_KEY
from app.hopfbar.wconstruction.drawing import cell_records, draw_composite, draw_object, draw_tree
from app.hopfbar.wconstruction.operad import build_w, check_augmentation
from app.hopfbar.zoo.barratt_eccles import build_barratt_eccles
from app.hopfbar.zoo.commutative import CommutativeOperad

ID2 = ((1, 2),)
ID3 = ((1, 2, 3),)
COROLLA = (ID2, (1, 2))
GRAFTED = (ID2, (("x1", COROLLA), 3))
CELL = (ID2, (("x01", COROLLA), 3))


def _w_of_e(p: int = 2):
    E, _ = build_barratt_eccles(p, 3, 2)
    return build_w(E, 3, edge_max=1, label_degree_max=1)


def test_w_of_commutative_composition_text() -> None:
    C = CommutativeOperad(2, arity_max=3)
    W = build_w(C, 3, edge_max=2, label_degree_max=0)
    c2 = next(iter(W.section(2)))
    (composite, coef), = W.compose(c2, 1, c2).items()
    assert coef == 1
    assert W.format_label(composite) == "{c2}(x1:{c2}(1,2),3)"
    assert W.differential(composite) == {}
    assert W.partial(c2, 1) == {UNIT_KEY: 1}
    assert W.compose(UNIT_KEY, 1, c2) == {c2: 1}


def test_w_of_commutative_cells() -> None:
    """每個 1-胞腔黏合到 x1 版本與完全收縮後的 corolla。"""

    C = CommutativeOperad(2, arity_max=3)
    W = build_w(C, 3, edge_max=2, label_degree_max=0)
    assert W.cells(0, 2) == [(2, (1, 2))]
    cells = W.cells(1, 3)
    assert len(cells) == 3
    for key in cells:
        attaching = W.attaching_map(key)
        assert len(attaching) == 2
        assert (3, (1, 2, 3)) in attaching
    records = cell_records(W, 1, 3)
    assert len(records) == 3
    assert all(" ; " in line for line in records)


def test_w_basis_bounds() -> None:
    W = _w_of_e()
    assert W.degree_max == 2
    assert W.basis(0, 0) == [STAR_KEY]
    assert W.basis(1, 0) == [UNIT_KEY]
    assert W.basis(2, 0) == [COROLLA, (((2, 1),), (1, 2))]
    assert len(W.cells(1, 3)) == 36


def test_w_compose_grafts_with_x1_edge() -> None:
    W = _w_of_e()
    assert W.compose(COROLLA, 1, COROLLA) == {GRAFTED: 1}
    assert W.format_label(GRAFTED) == "{[12]}(x1:{[12]}(1,2),3)"
    assert W.parse_label("{[12]}(x1:{[12]}(1,2),3)") == GRAFTED
    with pytest.raises(ValueError):
        W.parse_label("{[12]}(3,x1:{[12]}(1,2))")


@pytest.mark.parametrize("p, coef", [(2, 1), (3, 2)])
def test_x01_edge_differential(p: int, coef: int) -> None:
    """d(x01) = x1 − x0，x0 邊收縮成 E 中的合成。"""

    W = _w_of_e(p)
    assert W.differential(CELL) == {GRAFTED: 1, (ID3, (1, 2, 3)): coef}
    assert W.attaching_map(CELL) == W.differential(CELL)


def test_counit_and_augmentation() -> None:
    W = _w_of_e()
    assert W.counit(CELL) == 0
    assert W.counit(GRAFTED) == 1
    assert W.augmentation(GRAFTED) == {ID3: 1}
    assert W.augmentation(CELL) == {}
    assert W.augmentation(UNIT_KEY) == {((1,),): 1}


def test_edge_split_round_trip() -> None:
    W = _w_of_e()
    assert W.is_generator(CELL) and not W.is_generator(GRAFTED)
    assert W.cell_degree(CELL) == 1
    assert W.split_at_edge(CELL) is None
    split = W.split_at_edge(GRAFTED)
    assert split is not None
    assert (split.outer, split.slot, split.inner) == (COROLLA, 1, COROLLA)
    assert split.perm.is_identity()
    assert W.compose_split(W.generator_split(GRAFTED)) == {GRAFTED: 1}


def test_w_label_parse_matches_format() -> None:
    W = _w_of_e()
    for key in W.basis_upto(3, 1):
        assert W.parse_label(W.format_label(key)) == key


def test_w_operad_axioms_and_augmentation() -> None:
    """W(E) 的算子公理、Hopf 對角的餘單位性與 ε 的性質。"""

    W = _w_of_e()
    assert check_operad_axioms(W, 3, 1, sample=30).passed
    report = check_augmentation(W, 3, 1, sample=30)
    assert report.passed, report.lines()
    assert check_hopf_axioms(W, 3, 1, sample=30).passed


@pytest.mark.parametrize("p", [2, 3])
def test_w_differential_squares_to_zero_with_two_edges(p: int) -> None:
    E, _ = build_barratt_eccles(p, 3, 2)
    W = build_w(E, 3, edge_max=2, label_degree_max=1)
    basis = W.basis_upto(3, W.degree_max)
    assert basis
    for key in basis:
        assert W.differential_combo(W.differential(key)) == {}, W.format_label(key)


def test_iterated_diagonal_counts() -> None:
    W = _w_of_e()
    assert W.iterated_diagonal(COROLLA, 1) == {(COROLLA,): 1}
    assert W.iterated_diagonal(COROLLA, 3) == {(COROLLA, COROLLA, COROLLA): 1}
    with pytest.raises(ValueError):
        W.iterated_diagonal(COROLLA, 0)


def test_draw_objects() -> None:
    W = _w_of_e()
    (name, dot), = draw_tree(3, 0)
    assert name == "tree_3_0" and dot.startswith("digraph tree_3_0")
    with pytest.raises(ValueError):
        draw_tree(2, 1)
    (name, dot), = draw_composite(W, 1)
    assert name == "compose_1_0"
    assert dot.splitlines()[0] == "// 1*{[12]}(x1:{[12]}(1,2),3)"
    assert 'label="x1"' in dot
    assert len(draw_object(W, "cell:1:3")) == 36
    assert draw_object(W, "{[12]}(1,2)")[0][0] == "w"
