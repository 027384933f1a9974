"""C、K、E 與態射 K → E 的單元測試。"""

from __future__ import annotations

import pytest

from app.hopfbar.combinatorics.permutations import Permutation
from app.hopfbar.errors import OutOfTruncationError
from app.hopfbar.zoo.ainfinity import build_ainf
from app.hopfbar.zoo.barratt_eccles import build_barratt_eccles, check_retract
from app.hopfbar.zoo.commutative import CommutativeOperad
from app.hopfbar.zoo.k_to_e import build_k_to_e

ID2 = ((1, 2),)
TAU = ((2, 1),)


def test_commutative_operad_is_one_dimensional() -> None:
    C = CommutativeOperad(5, arity_max=4)
    assert C.basis(3, 0) == [3]
    assert C.basis(3, 1) == []
    assert C.compose(3, 2, 2) == {4: 1}
    assert C.partial(3, 1) == {2: 1}
    assert C.diagonal(2) == {(2, 2): 1}
    assert C.format_label(2) == "c2" and C.parse_label("c2") == 2


def test_barratt_eccles_basis_and_differential() -> None:
    E, _ = build_barratt_eccles(3, 3, 2)
    assert len(E.basis(3, 0)) == 6
    assert len(E.basis(2, 1)) == 2
    assert E.differential(((1, 2), (2, 1))) == {TAU: 1, ID2: 2}
    assert E.compose(ID2, 1, ID2) == {((1, 2, 3),): 1}
    assert E.act(Permutation((2, 1)), ((1, 2), (2, 1))) == {((2, 1), (1, 2)): 1}
    assert E.partial(((1, 2, 3),), 2) == {ID2: 1}
    assert E.partial(((1, 2), (2, 1)), 1) == {}
    with pytest.raises(OutOfTruncationError):
        E.basis(4, 0)


def test_barratt_eccles_labels() -> None:
    E, _ = build_barratt_eccles(2, 3, 2)
    word = ((1, 2), (2, 1))
    assert E.format_label(word) == "[12|21]"
    assert E.parse_label("[12|21]") == word
    with pytest.raises(ValueError):
        E.parse_label("[12|12]")
    with pytest.raises(ValueError):
        E.parse_label("12|21")


def test_alexander_whitney_diagonal() -> None:
    E, _ = build_barratt_eccles(2, 3, 2)
    word = ((1, 2), (2, 1))
    assert E.diagonal(word) == {(ID2, word): 1, (word, TAU): 1}
    assert E.counit(ID2) == 1 and E.counit(word) == 0


@pytest.mark.parametrize("p", [2, 3, 5])
def test_retract_is_contraction(p: int) -> None:
    """dν + νd = id − ηε 逐基底成立。"""

    _, retract = build_barratt_eccles(p, 3, 2)
    report = check_retract(retract, 3, 1)
    assert report.passed, report.lines()
    assert retract.contraction(TAU) == {((1, 2), (2, 1)): 1}
    assert retract.contraction(ID2) == {}
    assert retract.section(3) == ((1, 2, 3),)


def test_ainfinity_differential() -> None:
    """dμ₃ = μ₂∘₁μ₂ − μ₂∘₂μ₂。"""

    K = build_ainf(3, 4)
    d_mu3 = K.differential(K.mu(3))
    assert len(d_mu3) == 2
    assert sorted(d_mu3.values()) == [1, 2]
    assert K.degree(K.mu(4)) == 2
    assert K.format_label(K.mu(2)).startswith("{m2}")


def test_k_to_e_images() -> None:
    """φ(μ₂) = (id₂)，φ(μ₃) = 0；態射檢查全數通過。"""

    K = build_ainf(2, 4)
    E, retract = build_barratt_eccles(2, 4, 3)
    phi = build_k_to_e(K, E, retract)
    assert phi.mu_image(2) == {ID2: 1}
    assert phi.mu_image(3) == {}
    assert phi.generator_image((2, (2, 1))) == {TAU: 1}
    report = phi.check(4, sample=50)
    assert report.passed, report.lines()
