"""算子公理檢查、懸置、Λ*-作用與匹配模的單元測試。"""

from __future__ import annotations

import random

import pytest

from app.hopfbar.combinatorics.permutations import InjectiveMap, Permutation
from app.hopfbar.errors import ShapeMismatchError
from app.hopfbar.linear.homology import homology_ranks
from app.hopfbar.models.reports import CheckReport
from app.hopfbar.operads.base import OperadElement, operad_compose
from app.hopfbar.operads.checks import check_hopf_axioms, check_operad_axioms, draw_samples
from app.hopfbar.operads.free import TrivialGenerators, free_operad
from app.hopfbar.operads.matching import lambda_action, lambda_matching, prim_op_matching, prim_op_weights
from app.hopfbar.operads.suspension import operadic_suspension
from app.hopfbar.zoo.ainfinity import build_ainf
from app.hopfbar.zoo.barratt_eccles import build_barratt_eccles
from app.hopfbar.zoo.commutative import CommutativeOperad

ID2 = ((1, 2),)
TAU = ((2, 1),)


def test_commutative_operad_axioms() -> None:
    report = check_operad_axioms(CommutativeOperad(2, arity_max=4), 4, 0)
    assert report.passed
    assert report.checked > 0


def test_ainfinity_operad_axioms() -> None:
    K = build_ainf(2, 4)
    report = check_operad_axioms(K, 4, 2, sample=100)
    assert report.passed, report.lines()


@pytest.mark.parametrize("p", [2, 3])
def test_barratt_eccles_axioms(p: int) -> None:
    """E 在小截斷下滿足算子公理與 Hopf 公理。"""

    E, _ = build_barratt_eccles(p, 3, 2)
    assert check_operad_axioms(E, 3, 1, sample=100).passed
    assert check_hopf_axioms(E, 3, 1, sample=100).passed


def test_hopf_check_skips_non_hopf_operad() -> None:
    report = check_hopf_axioms(build_ainf(2, 3), 3, 1)
    assert report.skipped == 1 and report.checked == 0


def test_small_homology() -> None:
    """E(2) 與 K(3) 皆同調集中在 0 度。"""

    E, _ = build_barratt_eccles(2, 3, 2)
    assert homology_ranks(E.chain_complex(2, 2), [0, 1]) == [(0, 1), (1, 0)]
    K = build_ainf(2, 3)
    assert homology_ranks(K.chain_complex(3), [0, 1]) == [(0, 6), (1, 0)]
    C = CommutativeOperad(3, arity_max=3)
    assert homology_ranks(C.chain_complex(3), [0]) == [(0, 1)]


def test_suspension_shifts_degree_and_twists_action() -> None:
    E, _ = build_barratt_eccles(3, 3, 2)
    LE = operadic_suspension(E)
    assert LE.name == "ΛE"
    assert LE.degree(((1, 2), (2, 1))) == 0
    assert LE.min_degree(3) == -2
    assert LE.act(Permutation((2, 1)), ID2) == {TAU: 2}
    assert LE.format_label(ID2) == "[12]"


@pytest.mark.parametrize("p", [2, 3])
def test_suspension_satisfies_axioms(p: int) -> None:
    """ΛE 中 * 的度數為 1，∂_i 的交換關係因此帶負號。"""

    E, _ = build_barratt_eccles(p, 3, 2)
    LE = operadic_suspension(E)
    assert LE.degree(LE.star()) == 1
    left = LE.partial_combo(LE.partial(ID2, 2), 1)
    right = LE.partial_combo(LE.partial(ID2, 1), 1)
    assert left and left == {key: -c % p for key, c in right.items()}
    report = check_operad_axioms(LE, 3, 1, sample=200)
    assert report.passed, report.lines()


def test_draw_samples_counts_unvisited_tuples() -> None:
    """不超過上限時窮舉；超過時不重複抽樣，並把未走訪的組數記為略過。"""

    report = CheckReport(name="demo")
    small = list(draw_samples([[1, 2], ["a", "b"]], 4, random.Random(0), report))
    assert small == [(1, "a"), (1, "b"), (2, "a"), (2, "b")]
    assert report.skipped == 0
    pool = list(range(10))
    drawn = list(draw_samples([pool, pool], 30, random.Random(5), report))
    assert len(drawn) == len(set(drawn)) == 30
    assert report.skipped == 70
    assert drawn == list(draw_samples([pool, pool], 30, random.Random(5)))


def test_axiom_check_reports_skipped_beyond_budget() -> None:
    E, _ = build_barratt_eccles(3, 3, 2)
    report = check_operad_axioms(E, 3, 1, sample=5)
    assert report.passed, report.lines()
    assert report.skipped > 0


def test_operad_element_arithmetic() -> None:
    E, _ = build_barratt_eccles(2, 3, 2)
    x = OperadElement.basis_element(E, ID2)
    y = OperadElement.basis_element(E, TAU)
    assert (x + x).is_zero()
    assert operad_compose(x, 1, x).terms == {((1, 2, 3),): 1}
    assert x.act(Permutation((2, 1))) == y
    assert str(x + y) in ("[12] + [21]", "[21] + [12]")
    with pytest.raises(ShapeMismatchError):
        operad_compose(x, 3, y)


def test_lambda_action_uses_partials_then_permutation() -> None:
    """u = α∘σ：先沿補集作 ∂_i，再以 σ⁻¹ 作用。"""

    E, _ = build_barratt_eccles(2, 3, 2)
    x = {((1, 2, 3),): 1}
    assert lambda_action(E, InjectiveMap(2, 3, (1, 3)), x) == {ID2: 1}
    assert lambda_action(E, InjectiveMap(2, 3, (3, 1)), x) == {TAU: 1}
    assert lambda_action(E, InjectiveMap(2, 2, (1, 2)), {ID2: 1}) == {ID2: 1}


def test_lambda_matching_arity_two() -> None:
    E, _ = build_barratt_eccles(2, 3, 2)
    module, matching_map = lambda_matching(E, 2, [0])
    assert module.dimension(0) == 1
    assert matching_map.apply({ID2: 1}) == {(0, 0): 1}


def test_prim_op_weights() -> None:
    assert prim_op_weights(2, 2) == [(0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]
    groups = prim_op_matching(2, 2)
    assert groups == {1: [(0, 1), (0, 2)], 2: [(1, 0), (2, 0)]}


def test_report_lines() -> None:
    report = CheckReport(name="demo")
    report.record("units", True, "x")
    report.record("units", False, "y", "detail")
    assert report.lines() == ["# demo: FAIL checked=2 skipped=0 failures=1", "units ; y ; detail"]


def test_free_operad_on_binary_generator() -> None:
    """自由算子的基底是以 g2 標記的二元樹，合成即嫁接。"""

    F = free_operad(TrivialGenerators({2: 0}), p=2, arity_bound=3, degree_bound=0)
    assert len(F.basis(2, 0)) == 1
    assert len(F.basis(3, 0)) == 3
    x = F.corolla("g2")
    (grafted, coef), = F.compose(x, 1, x).items()
    assert coef == 1
    assert F.act(Permutation((2, 1, 3)), grafted) == {grafted: 1}
    assert grafted not in F.act(Permutation((3, 2, 1)), grafted)
    assert F.differential(grafted) == {}
    with pytest.raises(ValueError):
        TrivialGenerators({1: 0})
