"""置換、區塊置換、洗牌與單射分解的單元測試。"""

from __future__ import annotations

from itertools import permutations, product

import pytest

from app.hopfbar.combinatorics.permutations import (
    InjectiveMap,
    Permutation,
    all_permutations,
    bloc_permutation,
    lambda_decompose,
    pq_shuffles,
    shuffle_index,
    shuffle_perm,
)


def test_composition_applies_right_first() -> None:
    """σ∘τ 先作用 τ；反元素與奇偶。"""

    sigma = Permutation((2, 3, 1))
    tau = Permutation((2, 1, 3))
    assert sigma.compose(tau).images == (3, 2, 1)
    assert sigma.inverse().images == (3, 1, 2)
    assert sigma.sign() == 0 and tau.sign() == 1
    assert str(sigma) == "(1 2 3)"
    assert str(Permutation.identity(3)) == "()"
    with pytest.raises(ValueError):
        Permutation((1, 1))


def test_bloc_permutation_examples() -> None:
    """交換兩個區塊：(1,2,3) → (3,1,2)；空區塊給出恆等。"""

    swap = Permutation((2, 1))
    assert bloc_permutation(swap, (1, 2)).images == (3, 1, 2)
    assert bloc_permutation(swap, (0, 3)).is_identity()
    assert bloc_permutation(Permutation.identity(3), (2, 0, 1)).is_identity()


def test_bloc_permutation_is_functorial() -> None:
    """bloc(w, sizes∘w′)∘bloc(w′, sizes) = bloc(w′∘w, sizes)。"""

    for sizes in product(range(3), repeat=3):
        for w in all_permutations(3):
            for w_prime in all_permutations(3):
                moved = tuple(sizes[w_prime(j) - 1] for j in range(1, 4))
                left = bloc_permutation(w, moved).compose(bloc_permutation(w_prime, sizes))
                assert left == bloc_permutation(w_prime.compose(w), sizes)


def test_shuffle_permutations() -> None:
    """r = n = 2、全部大小為 1 時即指標置換 (1,3,2,4)。"""

    assert shuffle_index(2, 2).images == (1, 3, 2, 4)
    assert shuffle_perm(2, 2, [[1, 1], [1, 1]]) == shuffle_index(2, 2)
    assert shuffle_index(1, 4).is_identity()
    assert shuffle_index(3, 1).is_identity()
    # 空群組直接刪去
    assert shuffle_perm(2, 2, [[1, 0], [1, 1]]).is_identity()
    assert shuffle_perm(2, 2, [[1, 1], [0, 1]]).is_identity()
    assert shuffle_perm(2, 2, [[1, 1], [1, 0]]).images == (1, 3, 2)


def test_lambda_decompose_examples() -> None:
    """u = α∘σ，α 遞增。"""

    alpha, sigma = lambda_decompose(InjectiveMap(2, 3, (3, 1)))
    assert alpha.images == (1, 3)
    assert sigma.images == (2, 1)
    monotone = InjectiveMap(2, 4, (2, 4))
    assert lambda_decompose(monotone) == (monotone, Permutation.identity(2))


def test_lambda_decompose_round_trip() -> None:
    """所有 s ≤ 4 的單射都能由分解重建。"""

    for s in range(1, 5):
        for r in range(0, s + 1):
            for images in permutations(range(1, s + 1), r):
                u = InjectiveMap(r, s, tuple(images))
                alpha, sigma = lambda_decompose(u)
                assert alpha.is_monotone()
                assert alpha.compose(sigma).images == u.images
    with pytest.raises(ValueError):
        InjectiveMap(2, 3, (1, 1))


def test_pq_shuffles_signs() -> None:
    """(2,1) 洗牌的符號和在 F_3 中為 1。"""

    assert pq_shuffles(0, 3) == [(Permutation.identity(3), 1)]
    assert [sign for _, sign in pq_shuffles(1, 1)] == [1, -1]
    shuffles = pq_shuffles(2, 1)
    assert len(shuffles) == 3
    assert sum(sign for _, sign in shuffles) % 3 == 1
