"""build-rho / verify-rho：建立或讀入 ρ 表格，驗證關係並檢查求值的性質。"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

from app.hopfbar.action.evaluate import (
    check_chain_map,
    check_coalgebra_map,
    check_commutative_reduction,
    table_generators,
)
from app.hopfbar.action.rho import RhoEngine, RhoTable, build_rho
from app.hopfbar.action.verify import check_shuffle_datum, verify_relations
from app.hopfbar.models.reports import CheckReport
from app.hopfbar.models.run_config import RunConfig
from app.hopfbar.pipelines.base import BasePipeline, HopfbarContext, build_context, report_lines, write_lines
from app.hopfbar.storage.duckdb_client import DuckDBClient
from app.hopfbar.storage.schema import initialize_duckdb
from app.hopfbar.utils.logging import get_logger

logger = get_logger(__name__)

TABLE_FILE = "rho-table.txt"
REPORT_FILE = "rho-report.txt"


@dataclass
class RhoRun:
    context: HopfbarContext
    engine: RhoEngine
    reports: List[CheckReport] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(report.passed for report in self.reports)


def load_table(context: HopfbarContext, path: Path) -> RhoTable:
    lines = path.read_text(encoding="utf-8").splitlines()
    return RhoTable.parse(lines, context.W, context.target)


class RhoPipeline(BasePipeline[HopfbarContext, RhoRun]):
    """table_path 為 None 時以遞迴建表，否則讀入既有表格並凍結。

    evaluate 為真時另外在 bar 複形上檢查鏈映射、餘代數映射與交換約化。
    """

    name = "rho-pipeline"

    def __init__(
        self,
        config: RunConfig,
        duck_client: Optional[DuckDBClient] = None,
        table_path: Optional[Path] = None,
        evaluate: bool = True,
    ) -> None:
        self.config = config
        self.duck_client = duck_client
        self.table_path = table_path
        self.evaluate = evaluate

    def extract(self) -> HopfbarContext:
        logger.info("建立算子：%s", self.config.describe())
        return build_context(self.config)

    # ------------------------------------------------------------------
    # 轉換階段
    # ------------------------------------------------------------------
    def transform(self, raw: HopfbarContext) -> RhoRun:
        config = self.config
        if self.table_path is None:
            table = build_rho(raw.W, raw.target, raw.morphism, raw.retract, config.bounds)
            engine = RhoEngine(raw.W, raw.target, raw.morphism, raw.retract, table)
        else:
            table = load_table(raw, self.table_path)
            if table.bounds.weight_max > config.bar_length:
                logger.warning("表格的 weight_max=%s 超過 bar 長度 %s", table.bounds.weight_max, config.bar_length)
            engine = RhoEngine(raw.W, raw.target, raw.morphism, raw.retract, table, frozen=True)
        run = RhoRun(raw, engine)
        run.reports.append(verify_relations(engine))
        run.reports.append(check_shuffle_datum(engine))
        if self.evaluate:
            self._evaluation_checks(run)
        return run

    def _evaluation_checks(self, run: RhoRun) -> None:
        config = self.config
        engine, bar = run.engine, run.context.bar
        keys = table_generators(engine)
        length = min(config.bar_length, engine.table.bounds.weight_max)
        run.reports.append(check_chain_map(engine, bar, keys, length, config.sample, config.seed))
        run.reports.append(check_coalgebra_map(engine, bar, keys, min(length, 3), config.sample, config.seed))
        run.reports.append(check_commutative_reduction(engine, bar, length))

    # ------------------------------------------------------------------
    # 載入階段
    # ------------------------------------------------------------------
    def load(self, result: RhoRun) -> None:
        context = result.context
        table = result.engine.table
        out = self.config.output_dir
        if self.table_path is None:
            write_lines(out / TABLE_FILE, table.serialize(context.W, context.target))
        write_lines(out / REPORT_FILE, report_lines(result.reports))
        if self.duck_client is None:
            return
        initialize_duckdb(self.duck_client)
        records = table.records(context.W, context.target)
        self.duck_client.replace_rho_entries(records, table.p, self.name)
        self.duck_client.append_failures(result.reports, self.name)
