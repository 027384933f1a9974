"""DuckDB 儲存層：ρ 表格分量、檢查失敗與同調維度。"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import duckdb
import pandas as pd
from pydantic import BaseModel

from app.config.settings import settings
from app.hopfbar.models.reports import CheckReport, HomologyRecord, RhoEntryRecord
from app.hopfbar.utils.logging import get_logger

logger = get_logger(__name__)


def records_frame(records: Sequence[BaseModel], **extra: object) -> pd.DataFrame:
    """pydantic 紀錄轉成 DataFrame；extra 為每列共用的欄位。"""

    df = pd.DataFrame([record.model_dump() for record in records])
    for column, value in extra.items():
        df[column] = value
    return df


class DuckDBClient:
    """寫入的資料表需先以 initialize_duckdb 建立；db_path 為 ":memory:" 時不落地。"""

    def __init__(self, db_path: str | None = None) -> None:
        self.db_path = db_path or settings.storage.duckdb_path
        self._conn: duckdb.DuckDBPyConnection | None = None

    def connect(self) -> duckdb.DuckDBPyConnection:
        if self._conn is None:
            if self.db_path != ":memory:":
                Path(self.db_path).parent.mkdir(parents=True, exist_ok=True)
            logger.info("開啟 DuckDB 連線：%s", self.db_path)
            self._conn = duckdb.connect(self.db_path)
        return self._conn

    def close(self) -> None:
        if self._conn is not None:
            logger.debug("關閉 DuckDB 連線")
            self._conn.close()
            self._conn = None

    def execute(self, sql: str, parameters: dict | None = None) -> None:
        self.connect().execute(sql, parameters or {})

    def query_dataframe(self, sql: str, parameters: dict | None = None) -> pd.DataFrame:
        return self.connect().execute(sql, parameters or {}).fetch_df()

    def _insert(self, df: pd.DataFrame, table: str) -> int:
        if df.empty:
            logger.warning("無資料寫入 DuckDB：%s", table)
            return 0
        conn = self.connect()
        conn.register("staged_rows", df)
        try:
            conn.execute(f"INSERT INTO {table} BY NAME SELECT * FROM staged_rows")
        finally:
            conn.unregister("staged_rows")
        logger.info("寫入 DuckDB 資料表 %s，筆數=%s", table, len(df))
        return len(df)

    # ------------------------------------------------------------------
    # 領域寫入
    # ------------------------------------------------------------------
    def replace_rho_entries(self, records: Sequence[RhoEntryRecord], prime: int, run_id: str) -> int:
        """同一 (run_id, p) 的舊分量先刪除再寫入，重跑不會重複。"""

        self.execute(
            "DELETE FROM rho_entries WHERE run_id = $run_id AND prime = $prime",
            {"run_id": run_id, "prime": prime},
        )
        return self._insert(records_frame(records, prime=prime, run_id=run_id), "rho_entries")

    def append_failures(self, reports: Sequence[CheckReport], run_id: str) -> int:
        frames = [records_frame(report.failures, report=report.name) for report in reports if report.failures]
        if not frames:
            return 0
        df = pd.concat(frames, ignore_index=True)
        df["run_id"] = run_id
        return self._insert(df, "check_failures")

    def append_homology(self, records: Sequence[HomologyRecord], run_id: str) -> int:
        return self._insert(records_frame(records, run_id=run_id), "homology_ranks")

    def rho_entries(self, prime: int) -> pd.DataFrame:
        """依總權重與生成元排序的 ρ 分量。"""

        return self.query_dataframe(
            "SELECT generator, weights, value, provenance FROM rho_entries "
            "WHERE prime = $prime ORDER BY cell_degree, total_weight, generator, weights",
            {"prime": prime},
        )

    def __enter__(self) -> "DuckDBClient":
        self.connect()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:
        self.close()
