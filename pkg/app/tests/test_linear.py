"""F_p 純量、線性組合、消去與同調維度的單元測試。"""

from __future__ import annotations

import random

import numpy as np
import pytest

from app.hopfbar.errors import NotAChainComplexError, ShapeMismatchError
from app.hopfbar.linear.combination import accumulate, format_combination, merge, parse_combination
from app.hopfbar.linear.elimination import nullspace_mod_p, rank_mod_p, sparse_rank
from app.hopfbar.linear.field import PrimeField, get_field, is_prime
from app.hopfbar.linear.homology import homology_ranks
from app.hopfbar.linear.modules import ChainComplex, GradedBasedModule, SparseGradedMap


def test_prime_field_arithmetic() -> None:
    """反元素與 (−1)^k 的代表。"""

    field = PrimeField(5)
    assert field.inverse(2) == 3
    assert PrimeField(3).sign(3) == 2
    assert PrimeField(2).sign(1) == 1
    assert is_prime(7) and not is_prime(1)
    with pytest.raises(ValueError):
        PrimeField(4)
    with pytest.raises(ZeroDivisionError):
        field.inverse(10)


def test_combinations_cancel_mod_p() -> None:
    """係數歸零的項會被移除。"""

    combo = {"a": 2}
    accumulate(combo, "a", 1, 3)
    assert combo == {}
    merge(combo, {"a": 1, "b": 1}, 2, 3)
    assert combo == {"a": 2, "b": 2}


def test_format_and_parse_combination() -> None:
    """輸出以最靠近 0 的代表呈現，讀回後相同。"""

    combo = {"b": 2, "a": 1}
    text = format_combination(combo, str, 3)
    assert text == "a + -1*b"
    assert parse_combination(text, str, 3) == combo
    assert format_combination({}, str, 3) == "0"
    assert parse_combination("0", str, 3) == {}


def test_dense_and_sparse_rank_agree() -> None:
    """行列式為 3 的矩陣在 F_3 上降秩。"""

    matrix = np.array([[1, 2], [2, 1]])
    assert rank_mod_p(matrix, 3) == 1
    assert rank_mod_p(matrix, 5) == 2
    columns = [{0: 1, 1: 2}, {0: 2, 1: 1}]
    assert sparse_rank(columns, 3) == 1
    assert sparse_rank(columns, 5) == 2


def test_nullspace_vectors_are_killed() -> None:
    """零空間的每個向量都被矩陣送到 0。"""

    matrix = np.array([[1, 1, 0], [0, 1, 1]])
    basis = nullspace_mod_p(matrix, 2)
    assert len(basis) == 1
    for vector in basis:
        assert not np.any(matrix.dot(vector) % 2)


def test_homology_of_interval() -> None:
    """區間 [a,b] 的胞腔鏈：H₀ = F、H₁ = 0。"""

    module = GradedBasedModule({0: ["a", "b"], 1: ["e"]})
    cx = ChainComplex.from_function(module, lambda label: {"b": 1, "a": -1} if label == "e" else {}, get_field(3))
    assert homology_ranks(cx, [0, 1]) == [(0, 1), (1, 0)]


def test_square_zero_violation_has_witness() -> None:
    """d∘d ≠ 0 時回報見證元素。"""

    module = GradedBasedModule({0: ["a"], 1: ["b"], 2: ["c"]})
    images = {"c": {"b": 1}, "b": {"a": 1}}
    cx = ChainComplex.from_function(module, lambda label: images.get(label, {}), get_field(2))
    with pytest.raises(NotAChainComplexError) as info:
        cx.check_square_zero()
    assert info.value.degree == 2


def test_map_rejects_wrong_degree() -> None:
    """像的度數與位移不符時拋出 ShapeMismatchError。"""

    module = GradedBasedModule({0: ["a"], 1: ["b"]})
    with pytest.raises(ShapeMismatchError):
        SparseGradedMap(module, module, -1, {"a": {"b": 1}}, get_field(2))


SQUARE_EDGES = {"ab": ("a", "b"), "bc": ("b", "c"), "cd": ("c", "d"), "da": ("d", "a"), "ac": ("a", "c")}


def _square_differential(label: str) -> dict:
    if label == "t":
        return {"ab": 1, "bc": 1, "ac": -1}
    if label in SQUARE_EDGES:
        tail, head = SQUARE_EDGES[label]
        return {head: 1, tail: -1}
    return {}


@pytest.mark.parametrize("p", [2, 3])
def test_homology_ranks_ignore_basis_order(p: int) -> None:
    """填了一個三角形的正方形：基底重新排序不改變同調維度。"""

    degrees = {0: ["a", "b", "c", "d"], 1: list(SQUARE_EDGES), 2: ["t"]}
    rng = random.Random(p)
    for _ in range(5):
        shuffled = {d: rng.sample(labels, len(labels)) for d, labels in degrees.items()}
        module = GradedBasedModule(shuffled, sort=False)
        cx = ChainComplex.from_function(module, _square_differential, get_field(p))
        assert homology_ranks(cx, [0, 1, 2]) == [(0, 1), (1, 1), (2, 0)]
