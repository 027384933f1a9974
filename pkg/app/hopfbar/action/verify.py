"""ρ 表格的關係檢查：單位、置換與 Λ*、合成、微分。"""

from __future__ import annotations

from itertools import product
from typing import Dict, List, Tuple

from app.hopfbar.action.rho import RhoEngine, RhoTable, positive_entries
from app.hopfbar.action.weights import WeightVector, format_weights, permuted_weights, positive_weights
from app.hopfbar.combinatorics.permutations import all_permutations, block_order
from app.hopfbar.errors import OutOfTruncationError
from app.hopfbar.linear.combination import difference
from app.hopfbar.models.reports import CheckReport
from app.hopfbar.operads.base import Combo
from app.hopfbar.trees.labeled import UNIT_KEY, Key
from app.hopfbar.utils.logging import get_logger

logger = get_logger(__name__)


def _witness(engine: RhoEngine, key: Key, m: WeightVector) -> str:
    return f"{engine.W.format_label(key)} {format_weights(m)}"


def _compare(report: CheckReport, engine: RhoEngine, check: str, witness: str, left: Combo, right: Combo) -> None:
    diff = difference(left, right, engine.p)
    detail = "" if not diff else f"{engine.target.format_combo(left)} != {engine.target.format_combo(right)}"
    report.record(check, not diff, witness, detail)


def verify_relations(engine: RhoEngine) -> CheckReport:
    """以凍結的表格重新計算四類關係的右側，逐筆比對；合成關係走遍所有代表的配對。"""

    table = engine.table
    W = engine.W
    report = CheckReport(name="rho-relations")

    for (key, m), entry in sorted(table.entries.items(), key=lambda item: (W.format_label(item[0][0]), item[0][1])):
        witness = _witness(engine, key, m)
        try:
            if key == UNIT_KEY:
                expected: Combo = {engine.target.unit(): 1} if m == (1,) else {}
                _compare(report, engine, "unit", witness, entry.value, expected)
                continue
            if 0 in m:
                for index, mi in enumerate(m):
                    if mi:
                        continue
                    expected = engine.rho_combo(W.partial(key, index + 1), m[:index] + m[index + 1 :])
                    _compare(report, engine, "lambda", f"{witness} i={index + 1}", entry.value, expected)
                continue
            for perm in all_permutations(W.arity(key)):
                if perm.is_identity():
                    continue
                moved = W.act(perm, key)
                left = engine.rho_combo(moved, m)
                right = engine.target.act_combo(block_order(m, perm.images), engine.rho(key, permuted_weights(m, perm)))
                _compare(report, engine, "permutation", f"{witness} σ={perm}", left, right)
            bracket = engine.bracket(key, m)
            _compare(report, engine, "differential", witness, engine.target.differential_combo(entry.value), bracket)
        except OutOfTruncationError as exc:
            report.skipped += 1
            logger.debug("略過 %s：%s", witness, exc)

    reps = sorted({key for key, _ in positive_entries(table)}, key=W.format_label)
    for outer, inner in product(reps, reps):
        a, s = W.arity(outer), W.arity(inner)
        r = a + s - 1
        if r > table.bounds.r_max:
            continue
        for i in range(1, a + 1):
            composite = W.compose(outer, i, inner)
            for m in positive_weights(r, table.bounds.weight_max):
                witness = f"{W.format_label(outer)} ∘_{i} {W.format_label(inner)} {format_weights(m)}"
                try:
                    left = engine.rho_combo(composite, m)
                    right = engine.compose_rule(outer, i, inner, m)
                except OutOfTruncationError:
                    report.skipped += 1
                    continue
                _compare(report, engine, "composition", witness, left, right)

    logger.info("ρ 關係檢查：%s 項，略過 %s 項，失敗 %s 項", report.checked, report.skipped, len(report.failures))
    return report


def commutative_projection(engine: RhoEngine) -> Dict[Tuple[Key, WeightVector], int]:
    """ε: ΛE → ΛC 下各表格分量的像（純量）。"""

    projection: Dict[Tuple[Key, WeightVector], int] = {}
    for (key, m), entry in engine.table.entries.items():
        value = sum(engine.retract.augmentation(label) * coef for label, coef in entry.value.items())
        projection[(key, m)] = value % engine.p
    return projection


def check_shuffle_datum(engine: RhoEngine) -> CheckReport:
    """ε 投影恰在 0 度生成元、總權重 1 的分量上為 1。"""

    report = CheckReport(name="shuffle-datum")
    for (key, m), value in sorted(commutative_projection(engine).items(), key=lambda item: (engine.W.format_label(item[0][0]), item[0][1])):
        expected = 1 if sum(m) == 1 and (key == UNIT_KEY or engine.W.degree(key) == 0) else 0
        report.record("projection", value == expected, _witness(engine, key, m), f"{value} != {expected}")
    return report


def corrupt_table(table: RhoTable) -> Tuple[Key, WeightVector]:
    """把第一筆非零的 ν 分量改為 0，作為關係檢查的負面對照。"""

    for key, m in sorted(positive_entries(table), key=lambda item: (repr(item[0]), item[1])):
        entry = table.entries[(key, m)]
        if entry.value:
            table.store(key, m, {}, entry.provenance)
            return key, m
    raise ValueError("表格中沒有可供破壞的非零分量")


def frozen_engine(source: RhoEngine, table: RhoTable) -> RhoEngine:
    """以同樣的算子建立只讀取 table 的引擎。"""

    return RhoEngine(source.W, source.target, source.morphism, source.retract, table, frozen=True)


def rho_differences(left: RhoTable, right: RhoTable, fmt_key, fmt_value) -> List[str]:
    """兩張表格中值不同（或只出現在一邊）的分量。"""

    lines: List[str] = []
    keys = sorted(set(left.entries) | set(right.entries), key=lambda item: (fmt_key(item[0]), item[1]))
    for key, m in keys:
        a = left.entries.get((key, m))
        b = right.entries.get((key, m))
        a_value = a.value if a is not None else None
        b_value = b.value if b is not None else None
        if a_value is None or b_value is None or difference(a_value, b_value, left.p):
            shown_a = fmt_value(a_value) if a_value is not None else "-"
            shown_b = fmt_value(b_value) if b_value is not None else "-"
            lines.append(f"{fmt_key(key)} ; {format_weights(m)} ; {shown_a} ; {shown_b}")
    return lines
