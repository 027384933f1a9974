"""批次 Pipeline 抽象基底類別與共用的算子建構。"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path
from typing import Generic, List, TypeVar

from app.hopfbar.bar.algebras import PAlgebra, fixtures
from app.hopfbar.bar.complex import TruncatedBar, build_bar
from app.hopfbar.models.reports import CheckReport
from app.hopfbar.models.run_config import RunConfig
from app.hopfbar.operads.suspension import SuspendedOperad, operadic_suspension
from app.hopfbar.utils.logging import get_logger
from app.hopfbar.wconstruction.operad import WOperad, build_w
from app.hopfbar.zoo.ainfinity import AInfinityOperad, build_ainf
from app.hopfbar.zoo.barratt_eccles import BarrattEcclesOperad, DeformationRetract, build_barratt_eccles
from app.hopfbar.zoo.commutative import CommutativeOperad
from app.hopfbar.zoo.k_to_e import KToEMorphism, build_k_to_e

logger = get_logger(__name__)

RawT = TypeVar("RawT")
ResultT = TypeVar("ResultT")


class BasePipeline(ABC, Generic[RawT, ResultT]):
    """所有 Pipeline 的共同介面；run 回傳轉換結果供呼叫端決定結束碼。"""

    name: str = "base-pipeline"

    @abstractmethod
    def extract(self) -> RawT:
        """建立或讀入計算所需的物件。"""

    @abstractmethod
    def transform(self, raw: RawT) -> ResultT:
        """執行計算與檢查。"""

    @abstractmethod
    def load(self, result: ResultT) -> None:
        """寫出文字檔與 DuckDB。"""

    def run(self) -> ResultT:
        logger.info("開始執行 Pipeline：%s", self.name)
        raw = self.extract()
        result = self.transform(raw)
        self.load(result)
        logger.info("Pipeline 完成：%s", self.name)
        return result


@dataclass
class HopfbarContext:
    """同一組截斷界限下建立的全部算子、態射與測試代數。"""

    config: RunConfig
    C: CommutativeOperad
    K: AInfinityOperad
    E: BarrattEcclesOperad
    retract: DeformationRetract
    morphism: KToEMorphism
    W: WOperad
    target: SuspendedOperad
    algebra: PAlgebra
    bar: TruncatedBar


def build_context(config: RunConfig) -> HopfbarContext:
    """E 的元數與度數放寬到 ρ 值可能落入的範圍；列舉仍只到檢查界限。"""

    p = config.prime
    top_arity = max(config.arity_max, config.weight_max)
    C = CommutativeOperad(p, arity_max=top_arity)
    K = build_ainf(p, top_arity)
    E, retract = build_barratt_eccles(p, top_arity, config.degree_max + config.weight_max)
    morphism = build_k_to_e(K, E, retract)
    W = build_w(E, config.arity_max, edge_max=2, label_degree_max=config.degree_max - config.cell_degree_max)
    target = operadic_suspension(E)
    algebra = fixtures(config.fixture, config.fixture_params, morphism)
    bar = build_bar(algebra, config.bar_length)
    return HopfbarContext(config, C, K, E, retract, morphism, W, target, algebra, bar)


def write_lines(path: Path, lines: List[str]) -> Path:
    """以 LF 結尾的 UTF-8 文字檔，內容相同時位元組也相同。"""

    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.info("已寫出 %s（%s 行）", path, len(lines))
    return path


def report_lines(reports: List[CheckReport]) -> List[str]:
    lines: List[str] = []
    for report in reports:
        lines.extend(report.lines())
    return lines
