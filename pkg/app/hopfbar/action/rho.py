"""W(E) 在 bar 複形上的 Hopf 作用：分量 ρ_m : W(E)(r) → ΛE(m₁+…+m_r) 的遞迴建構。

規則依序套用：
- 單位：ρ_(1)(1) = 1，其餘為 0；
- 有 0 權重時改算 ρ(q ∘_i *)，並刪去 m_i；
- 含 x1 邊的元素在第一條 x1 邊切開，套用置換規則與合成規則；
- 生成元取 Σ_r 軌道代表，代表元上以 ν 作用於微分關係的右側。
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Set, Tuple

from app.hopfbar.action.weights import (
    ActionBounds,
    WeightVector,
    block_shuffle,
    format_weights,
    parse_weights,
    permuted_weights,
    weight_splittings,
)
from app.hopfbar.combinatorics.permutations import Permutation, all_permutations, block_order
from app.hopfbar.errors import LiftObstructionError, OutOfTruncationError, RecursionCycleError
from app.hopfbar.linear.combination import format_combination, merge, parse_combination, scaled
from app.hopfbar.models.reports import RhoEntryRecord
from app.hopfbar.operads.base import Combo
from app.hopfbar.operads.matching import prim_op_weights
from app.hopfbar.operads.suspension import SuspendedOperad
from app.hopfbar.trees.labeled import UNIT_KEY, Key
from app.hopfbar.utils.logging import get_logger
from app.hopfbar.wconstruction.operad import WOperad
from app.hopfbar.zoo.barratt_eccles import DeformationRetract
from app.hopfbar.zoo.k_to_e import KToEMorphism

logger = get_logger(__name__)

PROVENANCES = ("unit", "lambda", "nu")


@dataclass
class RhoEntry:
    value: Combo
    provenance: str


class RhoTable:
    """(生成元代表, 權重向量) → ΛE 元素，附來源規則。"""

    def __init__(self, bounds: ActionBounds, p: int) -> None:
        self.bounds = bounds
        self.p = p
        self.entries: Dict[Tuple[Key, WeightVector], RhoEntry] = {}

    def __contains__(self, item: Tuple[Key, WeightVector]) -> bool:
        return item in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, key: Key, m: WeightVector) -> Optional[RhoEntry]:
        return self.entries.get((key, m))

    def store(self, key: Key, m: WeightVector, value: Combo, provenance: str) -> None:
        if provenance not in PROVENANCES:
            raise ValueError(f"未知的來源規則：{provenance}")
        self.entries[(key, m)] = RhoEntry(dict(value), provenance)

    def ordered(self, W: WOperad) -> List[Tuple[Key, WeightVector, RhoEntry]]:
        """標準順序：(胞腔度數, 總權重, 生成元文字, 權重向量)。"""

        rows = [(key, m, entry) for (key, m), entry in self.entries.items()]
        rows.sort(key=lambda row: (W.cell_degree(row[0]), sum(row[1]), W.format_label(row[0]), row[1]))
        return rows

    def serialize(self, W: WOperad, target: SuspendedOperad) -> List[str]:
        lines = [f"# rho-table p={self.p}", f"# bounds {self.bounds.header()}"]
        for key, m, entry in self.ordered(W):
            value = format_combination(entry.value, target.format_label, self.p)
            lines.append(f"{W.format_label(key)} ; {format_weights(m)} ; {value} ; {entry.provenance}")
        return lines

    @classmethod
    def parse(cls, lines: List[str], W: WOperad, target: SuspendedOperad) -> "RhoTable":
        """serialize 的反函式；需要與建表時相同的算子。"""

        bounds: Optional[ActionBounds] = None
        p: Optional[int] = None
        rows: List[Tuple[Key, WeightVector, Combo, str]] = []
        for number, raw in enumerate(lines, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("# rho-table"):
                p = int(line.split("p=", 1)[1])
                continue
            if line.startswith("# bounds"):
                bounds = ActionBounds.from_header(line[len("# bounds") :])
                continue
            if line.startswith("#"):
                continue
            parts = [part.strip() for part in line.split(" ; ")]
            if len(parts) != 4:
                raise ValueError(f"第 {number} 行需要 4 個欄位：{line}")
            key = W.parse_label(parts[0])
            m = parse_weights(parts[1])
            value = parse_combination(parts[2], target.parse_label, W.p)
            rows.append((key, m, value, parts[3]))
        if bounds is None or p is None:
            raise ValueError("ρ 表格缺少標頭（p 與 bounds）")
        if p != W.p:
            raise ValueError(f"表格係數體 F_{p} 與算子的 F_{W.p} 不符")
        table = cls(bounds, p)
        for key, m, value, provenance in rows:
            table.store(key, m, value, provenance)
        return table

    def records(self, W: WOperad, target: SuspendedOperad) -> List[RhoEntryRecord]:
        return [
            RhoEntryRecord(
                generator=W.format_label(key),
                weights=format_weights(m),
                total_weight=sum(m),
                cell_degree=W.cell_degree(key),
                value=format_combination(entry.value, target.format_label, self.p),
                provenance=entry.provenance,
            )
            for key, m, entry in self.ordered(W)
        ]


class RhoEngine:
    """依規則計算 ρ_m(q)；生成元代表的值寫入（或讀自）表格。

    frozen 為真時不再以 ν 產生新值，缺少的生成元分量視為超出截斷。
    """

    def __init__(
        self,
        W: WOperad,
        target: SuspendedOperad,
        morphism: KToEMorphism,
        retract: DeformationRetract,
        table: RhoTable,
        frozen: bool = False,
    ) -> None:
        self.W = W
        self.target = target
        self.morphism = morphism
        self.retract = retract
        self.table = table
        self.frozen = frozen
        self.p = W.p
        self.field = W.field
        self._cache: Dict[Tuple[Key, WeightVector], Combo] = {}
        self._active: Set[Tuple[Key, WeightVector]] = set()
        self._orbits: Dict[Key, Tuple[int, Permutation, Key]] = {}

    # ------------------------------------------------------------------
    # 軌道代表
    # ------------------------------------------------------------------

    def orbit(self, key: Key) -> Tuple[int, Permutation, Key]:
        """key = c·σ·rep，rep 為 Σ_r 軌道中文字最小者。"""

        if key not in self._orbits:
            best: Optional[Tuple[str, Key, int, Permutation]] = None
            for perm in all_permutations(self.W.arity(key)):
                (image, coef), = self.W.act(perm, key).items()
                text = self.W.format_label(image)
                if best is None or text < best[0]:
                    best = (text, image, coef, perm)
            _, rep, coef, perm = best
            self._orbits[key] = (self.field.inverse(coef), perm.inverse(), rep)
        return self._orbits[key]

    def is_representative(self, key: Key) -> bool:
        return self.orbit(key)[2] == key

    # ------------------------------------------------------------------
    # 主要入口
    # ------------------------------------------------------------------

    def rho(self, key: Key, m: WeightVector) -> Combo:
        """ρ_m(key) ∈ ΛE(Σm)。"""

        m = tuple(m)
        if len(m) != self.W.arity(key):
            raise ValueError(f"權重向量長度 {len(m)} 與元數 {self.W.arity(key)} 不符")
        if sum(m) <= 0:
            raise ValueError("權重總和必須為正")
        if sum(m) > self.table.bounds.weight_max:
            raise OutOfTruncationError(f"權重上限 {self.table.bounds.weight_max}", format_weights(m))
        cached = self._cache.get((key, m))
        if cached is not None:
            return cached
        value = self._compute(key, m)
        self._cache[(key, m)] = value
        return value

    def rho_combo(self, combo: Combo, m: WeightVector) -> Combo:
        result: Combo = {}
        for key, coef in combo.items():
            merge(result, self.rho(key, m), coef, self.p)
        return result

    def _compute(self, key: Key, m: WeightVector) -> Combo:
        if key == UNIT_KEY:
            return {self.target.unit(): 1} if m == (1,) else {}
        if 0 in m:
            i = m.index(0) + 1
            return self.rho_combo(self.W.partial(key, i), m[: i - 1] + m[i:])
        split = self.W.split_at_edge(key)
        if split is not None:
            shuffled = self.compose_rule(split.outer, split.slot, split.inner, permuted_weights(m, split.perm))
            return scaled(self.permute(split.perm, m, shuffled), split.coef, self.p)
        coef, perm, rep = self.orbit(key)
        if rep != key:
            return scaled(self.permute(perm, m, self.rho(rep, permuted_weights(m, perm))), coef, self.p)
        return self.generator_value(rep, m)

    def permute(self, perm: Permutation, m: WeightVector, value: Combo) -> Combo:
        """ρ_m(σ·q) = β·ρ_{m∘σ}(q)，β 依 σ 排列大小為 m 的區塊。"""

        if perm.is_identity():
            return value
        return self.target.act_combo(block_order(m, perm.images), value)

    # ------------------------------------------------------------------
    # 合成規則
    # ------------------------------------------------------------------

    def compose_rule(self, outer: Key, i: int, inner: Key, m: WeightVector) -> Combo:
        """ρ_m(outer ∘_i inner)：沿 inner 的 n 重對角展開，再以洗牌置換重排輸入。"""

        s = self.W.arity(inner)
        before, middle, after = m[: i - 1], m[i - 1 : i - 1 + s], m[i - 1 + s :]
        head = sum(before)
        result: Combo = {}
        for n in range(1, sum(middle) + 1):
            outer_value = self.rho(outer, before + (n,) + after)
            if not outer_value:
                continue
            for pieces_keys, coef in self.W.iterated_diagonal(inner, n).items():
                for pieces in weight_splittings(middle, n):
                    current = outer_value
                    position = head + 1
                    for piece_key, piece in zip(pieces_keys, pieces):
                        current = self.target.compose_combo(current, position, self.rho(piece_key, piece))
                        if not current:
                            break
                        position += sum(piece)
                    if not current:
                        continue
                    beta = block_shuffle(before, pieces, after)
                    merge(result, self.target.act_combo(beta, current), coef, self.p)
        return result

    # ------------------------------------------------------------------
    # 生成元
    # ------------------------------------------------------------------

    def mu(self, n: int) -> Combo:
        return self.morphism.mu_image(n)

    def bracket(self, xi: Key, m: WeightVector) -> Combo:
        """ρ_m(dξ) − Σ shuffle·μ_n(ρ(ξ¹),…,ρ(ξⁿ)) + (−1)^{|ξ|} Σ ρ_{m′}(ξ) ∘_t μ_n。"""

        result = self.rho_combo(self.W.differential(xi), m)
        total = sum(m)
        for n in range(2, total + 1):
            mu = self.mu(n)
            if not mu:
                continue
            for pieces_keys, coef in self.W.iterated_diagonal(xi, n).items():
                for pieces in weight_splittings(m, n):
                    current = mu
                    position = 1
                    for piece_key, piece in zip(pieces_keys, pieces):
                        current = self.target.compose_combo(current, position, self.rho(piece_key, piece))
                        if not current:
                            break
                        position += sum(piece)
                    if not current:
                        continue
                    beta = block_shuffle((), pieces, ())
                    merge(result, self.target.act_combo(beta, current), -coef, self.p)
        sign = self.field.sign(self.W.degree(xi))
        for index, mi in enumerate(m):
            for n in range(2, mi + 1):
                mu = self.mu(n)
                if not mu:
                    continue
                shorter = m[:index] + (mi - n + 1,) + m[index + 1 :]
                lower = self.rho(xi, shorter)
                if not lower:
                    continue
                offset = sum(shorter[:index])
                for t in range(1, shorter[index] + 1):
                    merge(result, self.target.compose_combo(lower, offset + t, mu), sign, self.p)
        return result

    def generator_value(self, rep: Key, m: WeightVector) -> Combo:
        """軌道代表上的 ρ_m：讀表，或以 ν(bracket) 產生並寫入。"""

        entry = self.table.get(rep, m)
        if entry is not None:
            return entry.value
        if self.frozen:
            raise OutOfTruncationError("ρ 表格中沒有此生成元分量", f"{self.W.format_label(rep)} {format_weights(m)}")
        marker = (rep, m)
        if marker in self._active:
            raise RecursionCycleError(f"{self.W.format_label(rep)} {format_weights(m)}")
        self._active.add(marker)
        try:
            bracket = self.bracket(rep, m)
        finally:
            self._active.discard(marker)
        defect = self.target.differential_combo(bracket)
        augmented = sum(self.retract.augmentation(label) * coef for label, coef in bracket.items()) % self.p
        if defect or augmented:
            detail = f"d = {self.target.format_combo(defect)}" if defect else f"ε = {augmented}"
            logger.error("ν 的輸入不是增廣核中的循環：%s %s（%s）", self.W.format_label(rep), format_weights(m), detail)
            raise LiftObstructionError(self.W.format_label(rep), format_weights(m), detail)
        value = self.retract.contract_combo(bracket)
        self.table.store(rep, m, value, "nu")
        logger.debug("ρ%s(%s) = %s", format_weights(m), self.W.format_label(rep), self.target.format_combo(value))
        return value


# ------------------------------------------------------------------
# 建表
# ------------------------------------------------------------------


def generator_representatives(engine: RhoEngine, bounds: ActionBounds) -> Iterator[Key]:
    """界限內各元數、各胞腔度數的生成元軌道代表，依 (胞腔度數, 文字) 排序。"""

    W = engine.W
    reps: Set[Key] = set()
    for d in range(bounds.cell_degree_max + 1):
        for r in range(2, bounds.r_max + 1):
            for key in W.cells(d, r):
                if W.degree(key) <= bounds.degree_max:
                    reps.add(engine.orbit(key)[2])
    yield from sorted(reps, key=lambda key: (W.cell_degree(key), W.arity(key), W.format_label(key)))


def build_rho(
    W: WOperad,
    target: SuspendedOperad,
    morphism: KToEMorphism,
    retract: DeformationRetract,
    bounds: ActionBounds,
) -> RhoTable:
    """依 (胞腔度數, 總權重, 生成元) 的順序填滿 ρ 表格。"""

    table = RhoTable(bounds, W.p)
    engine = RhoEngine(W, target, morphism, retract, table)
    for k in range(1, bounds.weight_max + 1):
        table.store(UNIT_KEY, (k,), engine.rho(UNIT_KEY, (k,)), "unit")
    reps = list(generator_representatives(engine, bounds))
    for d in range(bounds.cell_degree_max + 1):
        for total in range(1, bounds.weight_max + 1):
            for rep in reps:
                if W.cell_degree(rep) != d:
                    continue
                for m in prim_op_weights(W.arity(rep), bounds.weight_max):
                    if sum(m) != total:
                        continue
                    value = engine.rho(rep, m)
                    if 0 in m:
                        table.store(rep, m, value, "lambda")
    logger.info("ρ 表格建立完成：%s 個生成元代表，%s 筆分量", len(reps), len(table))
    return table


def positive_entries(table: RhoTable) -> List[Tuple[Key, WeightVector]]:
    return [(key, m) for (key, m), entry in table.entries.items() if entry.provenance == "nu"]

