"""check-operads：C、K、E、W(E) 的公理、收縮、Hopf 結構與 bar 複形的全套檢查。"""

from __future__ import annotations

from typing import List, Optional

from app.hopfbar.action.rho import RhoEngine, build_rho
from app.hopfbar.action.verify import corrupt_table, frozen_engine, verify_relations
from app.hopfbar.action.weights import ActionBounds, format_weights
from app.hopfbar.models.reports import CheckReport
from app.hopfbar.models.run_config import RunConfig
from app.hopfbar.operads.checks import check_hopf_axioms, check_operad_axioms
from app.hopfbar.pipelines.base import BasePipeline, HopfbarContext, build_context, report_lines, write_lines
from app.hopfbar.storage.duckdb_client import DuckDBClient
from app.hopfbar.storage.schema import initialize_duckdb
from app.hopfbar.utils.logging import get_logger
from app.hopfbar.wconstruction.operad import check_augmentation
from app.hopfbar.zoo.barratt_eccles import check_retract

logger = get_logger(__name__)

REPORT_FILE = "operad-checks.txt"


class OperadCheckPipeline(BasePipeline[HopfbarContext, List[CheckReport]]):
    """依序執行各項檢查；corrupt 為真時另外驗證一張被破壞的小型 ρ 表格。"""

    name = "operad-check-pipeline"

    def __init__(self, config: RunConfig, duck_client: Optional[DuckDBClient] = None, corrupt: bool = False) -> None:
        self.config = config
        self.duck_client = duck_client
        self.corrupt = corrupt

    def extract(self) -> HopfbarContext:
        logger.info("建立算子：%s", self.config.describe())
        return build_context(self.config)

    # ------------------------------------------------------------------
    # 轉換階段
    # ------------------------------------------------------------------
    def transform(self, raw: HopfbarContext) -> List[CheckReport]:
        config = self.config
        sample, seed = config.sample, config.seed
        arity = max(config.arity_max, config.weight_max)
        degree = config.degree_max
        w_degree = min(degree, raw.W.degree_max)

        reports = [
            check_operad_axioms(raw.C, arity, 0, sample, seed),
            check_operad_axioms(raw.K, arity, arity - 2, sample, seed),
            check_operad_axioms(raw.E, arity, degree, sample, seed),
            check_retract(raw.retract, arity, degree),
            check_hopf_axioms(raw.E, arity, degree, sample, seed),
            raw.morphism.check(arity, sample, seed),
            check_operad_axioms(raw.W, config.arity_max, w_degree, sample, seed),
            check_hopf_axioms(raw.W, config.arity_max, w_degree, sample, seed),
            check_augmentation(raw.W, config.arity_max, w_degree, sample, seed),
            raw.bar.check(config.bar_length, sample, seed),
        ]
        if self.corrupt:
            reports.append(self._corrupted_relations(raw))
        for report in reports:
            log = logger.info if report.passed else logger.error
            log("%s：檢查 %s 項，略過 %s 項，失敗 %s 項", report.name, report.checked, report.skipped, len(report.failures))
        return reports

    def _corrupted_relations(self, raw: HopfbarContext) -> CheckReport:
        """最小的二元表格，破壞一筆後重新驗證，應出現微分關係的失敗。"""

        bounds = ActionBounds(r_max=2, weight_max=2, cell_degree_max=0, degree_max=0, bar_length=2)
        table = build_rho(raw.W, raw.target, raw.morphism, raw.retract, bounds)
        engine = RhoEngine(raw.W, raw.target, raw.morphism, raw.retract, table)
        key, m = corrupt_table(table)
        logger.warning("已破壞 ρ 分量：%s %s", raw.W.format_label(key), format_weights(m))
        report = verify_relations(frozen_engine(engine, table))
        report.name = "rho-relations(corrupted)"
        return report

    # ------------------------------------------------------------------
    # 載入階段
    # ------------------------------------------------------------------
    def load(self, result: List[CheckReport]) -> None:
        write_lines(self.config.output_dir / REPORT_FILE, report_lines(result))
        if self.duck_client is None:
            return
        initialize_duckdb(self.duck_client)
        self.duck_client.append_failures(result, self.name)
