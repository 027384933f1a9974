"""以 ρ 表格在 B(A) 上求值 W(E) 的運算，並檢查鏈映射、餘代數映射與交換約化。"""

from __future__ import annotations

import random
from itertools import product
from typing import List, Sequence, Tuple

from app.hopfbar.action.rho import RhoEngine, positive_entries
from app.hopfbar.bar.complex import (
    EMPTY_WORD,
    BarCombo,
    BarWord,
    TensorCombo,
    TruncatedBar,
    bar_diagonal,
    shuffle_product,
    shuffle_sign,
)
from app.hopfbar.errors import OutOfTruncationError, ShapeMismatchError
from app.hopfbar.linear.combination import accumulate, difference, merge
from app.hopfbar.models.reports import CheckReport
from app.hopfbar.operads.base import Combo
from app.hopfbar.operads.checks import draw_samples
from app.hopfbar.trees.labeled import Key
from app.hopfbar.utils.logging import get_logger

logger = get_logger(__name__)


def evaluate_operation(engine: RhoEngine, bar: TruncatedBar, key: Key, inputs: Sequence[BarWord]) -> BarCombo:
    """θ(q)(α₁,…,α_r) = Σ_n Σ ⊗_j ρ_{m^j}(q^j)(α^j)，沿 Δ^n(q) 與各 α_k 的解連接展開。"""

    W = engine.W
    algebra = bar.algebra
    p = engine.p
    r = W.arity(key)
    if len(inputs) != r:
        raise ShapeMismatchError(f"輸入個數 {len(inputs)} 與元數 {r} 不符", [len(inputs), r])
    total = sum(len(word) for word in inputs)
    result: BarCombo = {}
    if total == 0:
        counit = W.counit(key) % p
        return {EMPTY_WORD: counit} if counit else {}
    for n in range(1, total + 1):
        splits = [list(bar_diagonal(word, n)) for word in inputs]
        for pieces_keys, coef in W.iterated_diagonal(key, n).items():
            for choice in product(*splits):
                # choice[k][j]：第 k 個輸入的第 j 段
                lengths = [tuple(len(choice[k][j]) for k in range(r)) for j in range(n)]
                if any(sum(m) == 0 for m in lengths):
                    continue
                word_terms: BarCombo = {EMPTY_WORD: coef}
                exponent = _reorder_exponent(bar, choice, n)
                passed = 0
                for j in range(n):
                    letters = [a for k in range(r) for a in choice[k][j]]
                    value = engine.rho(pieces_keys[j], lengths[j])
                    images = algebra.evaluate_suspended(value, letters)
                    exponent += W.degree(pieces_keys[j]) * passed
                    passed += sum(algebra.degree(a) + 1 for a in letters)
                    extended: BarCombo = {}
                    for word, c in word_terms.items():
                        for letter, c2 in images.items():
                            accumulate(extended, word + (letter,), c * c2, p)
                    word_terms = extended
                    if not word_terms:
                        break
                merge(result, word_terms, engine.field.sign(exponent), p)
    return result


def _reorder_exponent(bar: TruncatedBar, choice: Sequence[Sequence[BarWord]], n: int) -> int:
    """由「輸入 k、段 j」換成「段 j、輸入 k」時奇數度字母的交錯次數。"""

    degrees: List[int] = []
    positions: List[Tuple[int, int, int]] = []
    for k, pieces in enumerate(choice):
        for j in range(n):
            for index, letter in enumerate(pieces[j]):
                degrees.append(bar.algebra.degree(letter) + 1)
                positions.append((j, k, index))
    ranks = {position: rank for rank, position in enumerate(sorted(positions), start=1)}
    return shuffle_sign(degrees, [ranks[position] for position in positions])


def evaluate_combo(engine: RhoEngine, bar: TruncatedBar, combo: Combo, inputs: Sequence[BarWord]) -> BarCombo:
    result: BarCombo = {}
    for key, coef in combo.items():
        merge(result, evaluate_operation(engine, bar, key, inputs), coef, engine.p)
    return result


def _input_words(bar: TruncatedBar, r: int, length: int) -> List[Tuple[BarWord, ...]]:
    words = bar.words(length)
    return [inputs for inputs in product(words, repeat=r) if sum(len(w) for w in inputs) <= length]


def check_chain_map(engine: RhoEngine, bar: TruncatedBar, keys: Sequence[Key], length: int, sample: int = 200, seed: int = 0) -> CheckReport:
    """d∘θ(q) = θ(dq) + (−1)^{|q|} Σ_k ± θ(q)(…, dα_k, …)。"""

    report = CheckReport(name=f"chain-map({bar.algebra.name})")
    rng = random.Random(seed)
    W = engine.W
    p = engine.p
    for key in keys:
        pool = _input_words(bar, W.arity(key), length)
        for (inputs,) in draw_samples([pool], sample, rng, report):
            witness = f"{W.format_label(key)} {' '.join(bar.format_word(w) for w in inputs)}"
            try:
                left = bar.differential_combo(evaluate_operation(engine, bar, key, inputs))
                right = evaluate_combo(engine, bar, W.differential(key), inputs)
                prefix = W.degree(key)
                for k, word in enumerate(inputs):
                    for image, c in bar.bar_differential(word).items():
                        changed = tuple(inputs[:k]) + (image,) + tuple(inputs[k + 1 :])
                        merge(right, evaluate_operation(engine, bar, key, changed), c * engine.field.sign(prefix), p)
                    prefix += bar.degree(word)
            except OutOfTruncationError:
                report.skipped += 1
                continue
            diff = difference(left, right, p)
            report.record("chain-map", not diff, witness, bar.format_combo(diff))
    return report


def check_coalgebra_map(engine: RhoEngine, bar: TruncatedBar, keys: Sequence[Key], length: int, sample: int = 200, seed: int = 0) -> CheckReport:
    """Δθ(q)(α) = Σ θ(q′)(α′) ⊗ θ(q″)(α″)。"""

    report = CheckReport(name=f"coalgebra-map({bar.algebra.name})")
    rng = random.Random(seed)
    W = engine.W
    p = engine.p
    for key in keys:
        r = W.arity(key)
        pool = _input_words(bar, r, length)
        for (inputs,) in draw_samples([pool], sample, rng, report):
            witness = f"{W.format_label(key)} {' '.join(bar.format_word(w) for w in inputs)}"
            try:
                left = bar.diagonal_combo(evaluate_operation(engine, bar, key, inputs))
                right: TensorCombo = {}
                splits = [list(bar_diagonal(word)) for word in inputs]
                for (first, second), coef in W.diagonal(key).items():
                    for choice in product(*splits):
                        front = tuple(piece[0] for piece in choice)
                        back = tuple(piece[1] for piece in choice)
                        exponent = W.degree(second) * sum(bar.degree(w) for w in front)
                        for a, k in enumerate(back):
                            exponent += bar.degree(k) * sum(bar.degree(w) for w in front[a + 1 :])
                        sign = engine.field.sign(exponent)
                        x = evaluate_operation(engine, bar, first, front)
                        y = evaluate_operation(engine, bar, second, back)
                        for u, cu in x.items():
                            for v, cv in y.items():
                                accumulate(right, (u, v), coef * cu * cv * sign, p)
            except OutOfTruncationError:
                report.skipped += 1
                continue
            diff = difference(left, right, p)
            report.record("coalgebra-map", not diff, witness, str(len(diff)))
    return report


def check_commutative_reduction(engine: RhoEngine, bar: TruncatedBar, length: int) -> CheckReport:
    """交換代數上，0 度二元運算的求值等於洗牌積。"""

    report = CheckReport(name=f"commutative-reduction({bar.algebra.name})")
    if not bar.algebra.commutative:
        report.skipped += 1
        logger.warning("%s 不是交換代數，略過交換約化檢查", bar.algebra.name)
        return report
    W = engine.W
    keys = [key for key in W.basis(2, 0)]
    words = bar.words(length)
    for key in keys:
        for u, v in product(words, words):
            if len(u) + len(v) > length:
                continue
            witness = f"{W.format_label(key)} {bar.format_word(u)} {bar.format_word(v)}"
            try:
                value = evaluate_operation(engine, bar, key, (u, v))
            except OutOfTruncationError:
                report.skipped += 1
                continue
            expected = shuffle_product(bar.algebra, u, v)
            diff = difference(value, expected, engine.p)
            report.record("shuffle", not diff, witness, bar.format_combo(diff))
    return report


def table_generators(engine: RhoEngine) -> List[Key]:
    """表格中出現的生成元代表，依文字排序。"""

    return sorted({key for key, _ in positive_entries(engine.table)}, key=engine.W.format_label)
