"""測試代數與截斷 bar 複形的單元測試。"""

from __future__ import annotations

import pytest

from app.hopfbar.bar.algebras import ExteriorAlgebra, FreeEAlgebra, TruncatedPolynomial, fixtures
from app.hopfbar.bar.complex import EMPTY_WORD, bar_diagonal, bar_filtration, build_bar, parse_word, shuffle_product
from app.hopfbar.errors import OutOfTruncationError, UnsupportedFixtureError
from app.hopfbar.linear.homology import homology_ranks
from app.hopfbar.zoo.ainfinity import build_ainf
from app.hopfbar.zoo.barratt_eccles import build_barratt_eccles
from app.hopfbar.zoo.k_to_e import build_k_to_e


def _morphism(p: int):
    E, retract = build_barratt_eccles(p, 4, 3)
    return build_k_to_e(build_ainf(p, 4), E, retract)


def test_polynomial_fixture() -> None:
    algebra = fixtures("poly", {"n": 4}, _morphism(2))
    assert isinstance(algebra, TruncatedPolynomial)
    assert algebra.letters() == [1, 2, 3]
    assert algebra.multiply(2, 2) == {}
    assert algebra.evaluate(((1, 2, 3),), [1, 1, 1]) == {3: 1}
    assert algebra.evaluate(((1, 2), (2, 1)), [1, 1]) == {}
    assert algebra.format_letter(2) == "x^2" and algebra.parse_letter("x") == 1
    with pytest.raises(ValueError):
        algebra.parse_letter("x^4")


def test_fixture_validation() -> None:
    morphism = _morphism(3)
    with pytest.raises(UnsupportedFixtureError):
        fixtures("nope", {}, morphism)
    with pytest.raises(ValueError):
        TruncatedPolynomial(morphism, 1)
    with pytest.raises(ValueError):
        TruncatedPolynomial(morphism, 3, generator_degree=1)


def test_exterior_algebra_signs() -> None:
    algebra = ExteriorAlgebra(_morphism(3), 2)
    assert algebra.letters() == [(1,), (2,), (1, 2)]
    assert algebra.multiply((2,), (1,)) == {(1, 2): 2}
    assert algebra.multiply((1,), (1, 2)) == {}
    assert algebra.parse_letter("e1e2") == (1, 2)
    with pytest.raises(ValueError):
        algebra.parse_letter("e2e1")


@pytest.mark.parametrize("p, expected", [(2, 3), (3, 2)])
def test_free_e_algebra_truncation(p: int, expected: int) -> None:
    """頂端度數模去邊界：p = 2 時 [12|21] 存活，p = 3 時為邊界。"""

    algebra = FreeEAlgebra(_morphism(p), weight_max=2, degree_max=1)
    assert len(algebra.letters()) == expected
    v = ((1,),)
    assert algebra.evaluate(((1, 2),), [v, v]) == {((1, 2),): 1}
    assert algebra.evaluate(((2, 1),), [v, v]) == {((1, 2),): 1}
    assert algebra.evaluate(((1, 2),), [v, ((1, 2),)]) == {}


def test_free_e_letter_text() -> None:
    algebra = FreeEAlgebra(_morphism(2), weight_max=2, degree_max=1)
    letter = ((1, 2), (2, 1))
    assert algebra.format_letter(letter) == "w:12/21"
    assert algebra.parse_letter("w:12/21") == letter
    with pytest.raises(ValueError):
        algebra.parse_letter("w:21")


@pytest.mark.parametrize("p, coef", [(2, 1), (3, 2)])
def test_bar_differential_uses_products(p: int, coef: int) -> None:
    """d[x|x] = −[x²]（懸置符號）。"""

    bar = build_bar(TruncatedPolynomial(_morphism(p), 3), 3)
    assert bar.bar_differential((1, 1)) == {(2,): coef}
    assert bar.bar_differential((1,)) == {}
    assert bar.degree((1, 1)) == 2
    assert bar_filtration((1, 1)) == 2
    assert bar.differential_combo(bar.bar_differential((1, 1, 1))) == {}


def test_bar_words_and_parsing() -> None:
    bar = build_bar(TruncatedPolynomial(_morphism(2), 3), 2)
    assert len(bar.words()) == 1 + 2 + 4
    assert bar.parse_word("[x|x^2]") == (1, 2)
    assert parse_word(bar.algebra, "[]") == EMPTY_WORD
    assert bar.format_word((1, 2)) == "[x|x^2]"
    with pytest.raises(OutOfTruncationError):
        bar.parse_word("[x|x|x]")
    with pytest.raises(ValueError):
        bar.parse_word("x|x")


def test_deconcatenation() -> None:
    word = ("a", "b")
    assert bar_diagonal(word) == {((), word): 1, (("a",), ("b",)): 1, (word, ()): 1}
    assert len(bar_diagonal(word, 3)) == 6
    with pytest.raises(ValueError):
        bar_diagonal(word, 0)


@pytest.mark.parametrize("p, coef", [(2, 1), (3, 2)])
def test_shuffle_product_signs(p: int, coef: int) -> None:
    algebra = TruncatedPolynomial(_morphism(p), 3)
    assert shuffle_product(algebra, (1,), (2,)) == {(1, 2): 1, (2, 1): coef}
    assert shuffle_product(algebra, (1,), EMPTY_WORD) == {(1,): 1}


@pytest.mark.parametrize(
    "kind, params, p",
    [("poly", {"n": 3}, 2), ("poly", {"n": 3}, 3), ("exterior", {"k": 2}, 2), ("free_E", {"weight": 2, "degree": 1}, 2)],
)
def test_bar_checks_pass(kind: str, params: dict, p: int) -> None:
    bar = build_bar(fixtures(kind, params, _morphism(p)), 3)
    report = bar.check(3, sample=60)
    assert report.passed, report.lines()


def test_bar_check_visits_every_word() -> None:
    """逐字的六項檢查走遍每個 bar 字；只有洗牌積的配對受抽樣上限影響。"""

    bar = build_bar(TruncatedPolynomial(_morphism(2), 5), 4)
    words = bar.words(4)
    assert len(words) == 341
    report = bar.check(4, sample=1)
    assert report.passed, report.lines()
    assert 6 * len(words) <= report.checked <= 6 * len(words) + 5
    assert report.skipped == (len(words) ** 2 - 1) + (len(words) ** 3 - 1)


def test_bar_homology_of_dual_numbers() -> None:
    """F[x]/(x²) 的 bar 複形微分為 0，每個長度各一維。"""

    bar = build_bar(TruncatedPolynomial(_morphism(2), 2), 3)
    cx = bar.chain_complex()
    assert homology_ranks(cx, [0, 1, 2, 3]) == [(0, 1), (1, 1), (2, 1), (3, 1)]
