"""算子公理與 Hopf 條件的窮舉（或抽樣）檢查。"""

from __future__ import annotations

import random
from itertools import product
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from app.hopfbar.combinatorics.permutations import Permutation, all_permutations, substitute_images
from app.hopfbar.linear.combination import merge
from app.hopfbar.models.reports import CheckReport
from app.hopfbar.operads.base import Combo, DgOperad, Label
from app.hopfbar.utils.logging import get_logger

logger = get_logger(__name__)

DEFAULT_SAMPLE = 400


def draw_samples(
    pools: Sequence[Sequence],
    limit: int,
    rng: random.Random,
    report: Optional[CheckReport] = None,
) -> Iterator[Tuple]:
    """pools 的笛卡兒積；超過 limit 時不重複地抽取 limit 組，未走訪的組數記入 report.skipped。"""

    sizes = [len(pool) for pool in pools]
    total = 1
    for size in sizes:
        total *= size
    if total == 0:
        return
    if total <= limit:
        yield from product(*pools)
        return
    if report is not None:
        report.skipped += total - limit
    for index in sorted(rng.sample(range(total), limit)):
        picked = []
        for pool, size in zip(reversed(pools), reversed(sizes)):
            index, position = divmod(index, size)
            picked.append(pool[position])
        yield tuple(reversed(picked))


class OperadChecker:
    """對單一算子累積檢查結果。"""

    def __init__(
        self,
        operad: DgOperad,
        arity_bound: int,
        degree_bound: int,
        sample: int = DEFAULT_SAMPLE,
        seed: int = 0,
    ) -> None:
        self.operad = operad
        self.arity_bound = arity_bound
        self.degree_bound = degree_bound
        self.sample = sample
        self.rng = random.Random(seed)
        self.report = CheckReport(name=operad.name)
        self._basis: Dict[int, List[Label]] = {}

    def basis(self, r: int) -> List[Label]:
        if r not in self._basis:
            top = min(self.degree_bound, self.operad.degree_max)
            self._basis[r] = self.operad.basis_upto(r, top) if r <= self.operad.arity_max else []
        return self._basis[r]

    def arities(self) -> List[int]:
        return [r for r in range(1, self.arity_bound + 1) if self.basis(r)]

    # ------------------------------------------------------------------
    # 小工具
    # ------------------------------------------------------------------

    def fmt(self, *labels: Label) -> str:
        return " , ".join(self.operad.format_label(label) for label in labels)

    def sign(self, exponent: int) -> int:
        return self.operad.field.sign(exponent)

    def _equal(self, left: Combo, right: Combo) -> bool:
        diff = dict(left)
        merge(diff, right, -1, self.operad.p)
        return not diff

    def _check(self, name: str, left: Combo, right: Combo, witness: str) -> None:
        ok = self._equal(left, right)
        detail = "" if ok else f"{self.operad.format_combo(left)} != {self.operad.format_combo(right)}"
        self.report.record(name, ok, witness, detail)

    # ------------------------------------------------------------------
    # 各項公理
    # ------------------------------------------------------------------

    def check_units(self) -> None:
        P = self.operad
        unit = P.unit()
        for r in self.arities():
            for x in self.basis(r):
                self._check("unit-left", P.compose(unit, 1, x), {x: 1}, self.fmt(x))
                for i in range(1, r + 1):
                    self._check("unit-right", P.compose(x, i, unit), {x: 1}, f"{self.fmt(x)} ∘_{i} 1")

    def check_action(self) -> None:
        P = self.operad
        for r in self.arities():
            perms = list(all_permutations(r))
            for x, sigma, tau in draw_samples([self.basis(r), perms, perms], self.sample, self.rng, self.report):
                left = P.act_combo(sigma, P.act(tau, x))
                right = P.act(sigma.compose(tau), x)
                self._check("action", left, right, f"{sigma}·({tau}·{self.fmt(x)})")
            for x in self.basis(r):
                self._check("action-identity", P.act(Permutation.identity(r), x), {x: 1}, self.fmt(x))

    def check_differential(self) -> None:
        P = self.operad
        for r in self.arities():
            perms = list(all_permutations(r))
            for x in self.basis(r):
                self._check("d-square", P.differential_combo(P.differential(x)), {}, self.fmt(x))
            for x, sigma in draw_samples([self.basis(r), perms], self.sample, self.rng, self.report):
                left = P.differential_combo(P.act(sigma, x))
                right = P.act_combo(sigma, P.differential(x))
                self._check("d-equivariance", left, right, f"{sigma}·{self.fmt(x)}")

    def pairs(self, report: Optional[CheckReport] = None) -> Iterator[Tuple[Label, Label, int, int]]:
        report = self.report if report is None else report
        for s in self.arities():
            for t in self.arities():
                if s + t - 1 > self.arity_bound:
                    continue
                for x, y in draw_samples([self.basis(s), self.basis(t)], self.sample, self.rng, report):
                    yield x, y, s, t

    def check_derivation(self) -> None:
        P = self.operad
        for x, y, s, _ in self.pairs():
            for i in range(1, s + 1):
                left = P.differential_combo(P.compose(x, i, y))
                right = P.compose_combo(P.differential(x), i, {y: 1})
                merge(right, P.compose_combo({x: 1}, i, P.differential(y)), self.sign(P.degree(x)), P.p)
                self._check("derivation", left, right, f"{self.fmt(x)} ∘_{i} {self.fmt(y)}")

    def check_equivariance(self) -> None:
        P = self.operad
        for x, y, s, t in self.pairs():
            perms_s = list(all_permutations(s))
            perms_t = list(all_permutations(t))
            for sigma, tau in draw_samples([perms_s, perms_t], max(1, self.sample // 20), self.rng, self.report):
                for i in range(1, s + 1):
                    left = P.compose_combo(P.act(sigma, x), i, P.act(tau, y))
                    block = Permutation(substitute_images(sigma.images, i, tau.images))
                    right = P.act_combo(block, P.compose(x, sigma.inverse()(i), y))
                    self._check("equivariance", left, right, f"({sigma}·{self.fmt(x)}) ∘_{i} ({tau}·{self.fmt(y)})")

    def check_associativity(self) -> None:
        P = self.operad
        triples: List[Tuple[int, int, int]] = [
            (s, t, u)
            for s in self.arities()
            for t in self.arities()
            for u in self.arities()
            if s + t + u - 2 <= self.arity_bound
        ]
        for s, t, u in triples:
            for x, y, z in draw_samples([self.basis(s), self.basis(t), self.basis(u)], self.sample, self.rng, self.report):
                for i in range(1, s + 1):
                    for j in range(1, t + 1):
                        left = P.compose_combo(P.compose(x, i, y), i + j - 1, {z: 1})
                        right = P.compose_combo({x: 1}, i, P.compose(y, j, z))
                        self._check("associativity-sequential", left, right, f"{self.fmt(x, y, z)} i={i} j={j}")
                    for k in range(i + 1, s + 1):
                        left = P.compose_combo(P.compose(x, i, y), k + t - 1, {z: 1})
                        right = P.compose_combo(P.compose(x, k, z), i, {y: 1})
                        right = {key: c * self.sign(P.degree(y) * P.degree(z)) for key, c in right.items()}
                        self._check("associativity-parallel", left, right, f"{self.fmt(x, y, z)} i={i} k={k}")

    def check_partials(self) -> None:
        """∂_i 的交換關係與 ∘_i 的相容性（* 的度數帶來 Koszul 符號）。"""

        P = self.operad
        if not P.is_unital:
            self.report.skipped += 1
            return
        star_degree = P.degree(P.star())
        swap = self.sign(star_degree * star_degree)
        for r in self.arities():
            for x in self.basis(r):
                for i in range(1, r + 1):
                    for j in range(i + 1, r + 1):
                        left = P.partial_combo(P.partial(x, j), i)
                        right = P.partial_combo(P.partial(x, i), j - 1)
                        right = {key: c * swap for key, c in right.items()}
                        self._check("partial-commute", left, right, f"{self.fmt(x)} i={i} j={j}")
        for x, y, s, t in self.pairs():
            past = self.sign(P.degree(y) * star_degree)  # * 越過 y
            for i in range(1, s + 1):
                composite = P.compose(x, i, y)
                for k in range(1, s + t):
                    left = P.partial_combo(composite, k)
                    if k < i:
                        right = P.compose_combo(P.partial(x, k), i - 1, {y: 1})
                        right = {key: c * past for key, c in right.items()}
                    elif k < i + t:
                        right = P.compose_combo({x: 1}, i, P.partial(y, k - i + 1))
                    else:
                        right = P.compose_combo(P.partial(x, k - t + 1), i, {y: 1})
                        right = {key: c * past for key, c in right.items()}
                    self._check("partial-composite", left, right, f"({self.fmt(x)} ∘_{i} {self.fmt(y)}) ∘_{k} *")

    def run(self) -> CheckReport:
        for step in (
            self.check_units,
            self.check_action,
            self.check_differential,
            self.check_derivation,
            self.check_equivariance,
            self.check_associativity,
            self.check_partials,
        ):
            step()
        logger.info(
            "%s 公理檢查：%s 項，失敗 %s 項",
            self.operad.name,
            self.report.checked,
            len(self.report.failures),
        )
        return self.report


def check_operad_axioms(
    operad: DgOperad,
    arity_bound: int,
    degree_bound: int,
    sample: int = DEFAULT_SAMPLE,
    seed: int = 0,
) -> CheckReport:
    """檢查結合律、等變性、單位律、微分的導子性質與 ∂_i 關係。"""

    return OperadChecker(operad, arity_bound, degree_bound, sample=sample, seed=seed).run()


# ------------------------------------------------------------------
# Hopf 結構
# ------------------------------------------------------------------


def _tensor_map(
    pairs: Dict[Tuple[Label, Label], int],
    left: Optional[Callable[[Label], Combo]],
    right: Optional[Callable[[Label], Combo]],
    p: int,
) -> Dict[Tuple[Label, Label], int]:
    result: Dict[Tuple[Label, Label], int] = {}
    for (a, b), coef in pairs.items():
        images_a = left(a) if left else {a: 1}
        images_b = right(b) if right else {b: 1}
        for a2, ca in images_a.items():
            for b2, cb in images_b.items():
                merge(result, {(a2, b2): 1}, coef * ca * cb, p)
    return result


def check_hopf_axioms(
    operad: DgOperad,
    arity_bound: int,
    degree_bound: int,
    sample: int = DEFAULT_SAMPLE,
    seed: int = 0,
) -> CheckReport:
    """對角的餘單位性、餘結合性、鏈映射性質、等變性與合成相容性。"""

    checker = OperadChecker(operad, arity_bound, degree_bound, sample=sample, seed=seed)
    report = CheckReport(name=f"{operad.name}-hopf")
    P = operad
    p = P.p
    if not P.is_hopf:
        report.skipped += 1
        return report

    def equal(left: Dict, right: Dict) -> bool:
        diff = dict(left)
        merge(diff, right, -1, p)
        return not diff

    def cross(x: Label, y: Label, i: int) -> Dict[Tuple[Label, Label], int]:
        result: Dict[Tuple[Label, Label], int] = {}
        for (x1, x2), cx in P.diagonal(x).items():
            for (y1, y2), cy in P.diagonal(y).items():
                sign = P.field.sign(P.degree(x2) * P.degree(y1))
                for a, ca in P.compose(x1, i, y1).items():
                    for b, cb in P.compose(x2, i, y2).items():
                        merge(result, {(a, b): 1}, sign * cx * cy * ca * cb, p)
        return result

    for r in checker.arities():
        perms = list(all_permutations(r))
        for x in checker.basis(r):
            delta = P.diagonal(x)
            witness = P.format_label(x)
            left_counit: Combo = {}
            right_counit: Combo = {}
            for (a, b), coef in delta.items():
                merge(left_counit, {b: 1}, coef * P.counit(a), p)
                merge(right_counit, {a: 1}, coef * P.counit(b), p)
            report.record("counit-left", equal(left_counit, {x: 1}), witness)
            report.record("counit-right", equal(right_counit, {x: 1}), witness)
            twice_left: Dict = {}
            for (a, b), coef in delta.items():
                for (a1, a2), c2 in P.diagonal(a).items():
                    merge(twice_left, {(a1, a2, b): 1}, coef * c2, p)
            twice_right: Dict = {}
            for (a, b), coef in delta.items():
                for (b1, b2), c2 in P.diagonal(b).items():
                    merge(twice_right, {(a, b1, b2): 1}, coef * c2, p)
            report.record("coassociative", equal(twice_left, twice_right), witness)
            d_first = P.diagonal_combo(P.differential(x))
            d_after = _tensor_map(delta, P.differential, None, p)
            for (a, b), coef in delta.items():
                for b2, cb in P.differential(b).items():
                    merge(d_after, {(a, b2): 1}, coef * cb * P.field.sign(P.degree(a)), p)
            report.record("diagonal-chain-map", equal(d_first, d_after), witness)
        for x, sigma in draw_samples([checker.basis(r), perms], sample, checker.rng, report):
            left = P.diagonal_combo(P.act(sigma, x))
            right = _tensor_map(P.diagonal(x), lambda a: P.act(sigma, a), lambda b: P.act(sigma, b), p)
            report.record("diagonal-equivariance", equal(left, right), f"{sigma}·{P.format_label(x)}")
    for x, y, s, _ in checker.pairs(report):
        for i in range(1, s + 1):
            left = P.diagonal_combo(P.compose(x, i, y))
            report.record("hopf-composition", equal(left, cross(x, y, i)), f"{P.format_label(x)} ∘_{i} {P.format_label(y)}")
    logger.info("%s Hopf 檢查：%s 項，失敗 %s 項", operad.name, report.checked, len(report.failures))
    return report
