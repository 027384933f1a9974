"""DuckDB Schema 初始化工具。"""

from __future__ import annotations

from typing import Iterable

from app.hopfbar.storage.duckdb_client import DuckDBClient

SCHEMA_STATEMENTS: Iterable[str] = (
    """
    CREATE TABLE IF NOT EXISTS rho_entries (
        generator VARCHAR,
        weights VARCHAR,
        total_weight INTEGER,
        cell_degree INTEGER,
        value VARCHAR,
        provenance VARCHAR,
        prime INTEGER,
        run_id VARCHAR
    )
    """,
    """
    CREATE TABLE IF NOT EXISTS check_failures (
        report VARCHAR,
        "check" VARCHAR,
        witness VARCHAR,
        detail VARCHAR,
        run_id VARCHAR
    )
    """,
    """
    CREATE TABLE IF NOT EXISTS homology_ranks (
        complex_spec VARCHAR,
        degree INTEGER,
        rank INTEGER,
        prime INTEGER,
        run_id VARCHAR
    )
    """,
)


def initialize_duckdb(client: DuckDBClient) -> None:
    """建立 ρ 表格、檢查失敗與同調維度三張表。"""

    for statement in SCHEMA_STATEMENTS:
        client.execute(statement)
