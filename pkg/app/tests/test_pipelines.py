"""執行設定、複形代號與三條 Pipeline 的單元測試。"""

from __future__ import annotations

from pathlib import Path

import pytest
from pydantic import ValidationError

from app.config.settings import Settings
from app.hopfbar.models.run_config import RunConfig, build_run_config, parse_fixture, read_config_file
from app.hopfbar.pipelines.check_pipeline import REPORT_FILE, OperadCheckPipeline
from app.hopfbar.pipelines.homology_pipeline import HomologyPipeline, parse_complex_spec
from app.hopfbar.pipelines.rho_pipeline import REPORT_FILE as RHO_REPORT_FILE
from app.hopfbar.pipelines.rho_pipeline import TABLE_FILE, RhoPipeline
from app.hopfbar.storage.duckdb_client import DuckDBClient


def _small(out: Path) -> RunConfig:
    return RunConfig(
        prime=2,
        arity_max=2,
        degree_max=0,
        weight_max=2,
        bar_length=2,
        cell_degree_max=0,
        fixture="poly",
        fixture_params={"n": 3},
        sample=30,
        out=str(out),
    )


# ------------------------------------------------------------------
# 執行設定
# ------------------------------------------------------------------


def test_run_config_validation() -> None:
    """p 必須為質數，界限需彼此相容。"""

    with pytest.raises(ValidationError):
        RunConfig(prime=4)
    with pytest.raises(ValidationError):
        RunConfig(weight_max=5, bar_length=4)
    with pytest.raises(ValidationError):
        RunConfig(degree_max=0, cell_degree_max=1)
    with pytest.raises(ValidationError):
        RunConfig(fixture="nope")
    config = RunConfig(prime=3)
    assert config.bounds.r_max == 3
    assert "fixture=poly:" in config.describe()


def test_parse_fixture() -> None:
    assert parse_fixture("poly") == ("poly", {})
    assert parse_fixture("exterior:k=2") == ("exterior", {"k": 2})
    assert parse_fixture("poly: n=4, x_degree=0") == ("poly", {"n": 4, "x_degree": 0})
    with pytest.raises(ValueError):
        parse_fixture("poly:n")


def test_read_config_file(tmp_path: Path) -> None:
    path = tmp_path / "run.cfg"
    path.write_text("# 小型截斷\nprime=3\n--arity-max = 2\n\nfixture=exterior:k=2\n", encoding="utf-8")
    assert read_config_file(path) == {"prime": "3", "arity_max": "2", "fixture": "exterior:k=2"}
    path.write_text("colour=red\n", encoding="utf-8")
    with pytest.raises(ValueError):
        read_config_file(path)


def test_build_run_config_layers(tmp_path: Path) -> None:
    """settings → 設定檔 → 旗標；None 表示沿用上一層。"""

    path = tmp_path / "run.cfg"
    path.write_text("prime=3\nweight_max=2\n", encoding="utf-8")
    config = build_run_config(Settings(), path, {"prime": 5, "seed": None})
    assert config.prime == 5
    assert config.weight_max == 2
    assert config.seed == Settings().algebra.seed
    assert config.fixture_params == {"n": 3, "x_degree": 0}
    changed = build_run_config(Settings(), None, {"fixture": "exterior:k=2"})
    assert (changed.fixture, changed.fixture_params) == ("exterior", {"k": 2})


# ------------------------------------------------------------------
# 同調
# ------------------------------------------------------------------


def test_parse_complex_spec() -> None:
    spec = parse_complex_spec("W(C):2")
    assert (spec.name, spec.arity) == ("W(C)", 2)
    assert spec.slug == "W-C-2" and spec.text == "W(C):2"
    assert parse_complex_spec("bar").arity is None
    assert parse_complex_spec("W(E):3").slug == "W-E-3"
    with pytest.raises(ValueError):
        parse_complex_spec("F:2")


def test_homology_pipeline_writes_file_and_duckdb(tmp_path: Path) -> None:
    config = _small(tmp_path)
    client = DuckDBClient(db_path=":memory:")
    try:
        records = HomologyPipeline(config, parse_complex_spec("E:2"), duck_client=client).run()
        df = client.query_dataframe("SELECT complex_spec, degree, rank FROM homology_ranks")
    finally:
        client.close()
    assert [(record.degree, record.rank) for record in records] == [(0, 1)]
    lines = (tmp_path / "homology-E-2.txt").read_text(encoding="utf-8").splitlines()
    assert lines == ["# homology E:2 p=2", "(0,1)"]
    assert df.to_dict("records") == [{"complex_spec": "E:2", "degree": 0, "rank": 1}]


def test_homology_of_w_commutative(tmp_path: Path) -> None:
    HomologyPipeline(_small(tmp_path), parse_complex_spec("W(C):2")).run()
    lines = (tmp_path / "homology-W-C-2.txt").read_text(encoding="utf-8").splitlines()
    assert lines == ["# homology W(C):2 p=2", "(0,1)"]


def test_homology_rejects_large_arity(tmp_path: Path) -> None:
    with pytest.raises(ValueError):
        HomologyPipeline(_small(tmp_path), parse_complex_spec("E:7")).run()


# ------------------------------------------------------------------
# ρ 表格與算子檢查
# ------------------------------------------------------------------


def test_rho_pipeline_build_then_verify(tmp_path: Path) -> None:
    """先建表寫檔，再以凍結表格重新驗證。"""

    config = _small(tmp_path)
    client = DuckDBClient(db_path=":memory:")
    try:
        RhoPipeline(config, duck_client=client).run()
        built = RhoPipeline(config, duck_client=client).run()
        entries = client.rho_entries(2)
        failures = client.query_dataframe("SELECT count(*) AS n FROM check_failures")["n"].iloc[0]
    finally:
        client.close()
    assert built.passed, [report.lines() for report in built.reports]
    assert len(entries) == len(built.engine.table) == 7
    assert (entries.iloc[0]["generator"], entries.iloc[0]["weights"]) == ("1", "(1)")
    assert failures == 0
    table_path = tmp_path / TABLE_FILE
    assert table_path.read_text(encoding="utf-8").startswith("# rho-table p=2\n")
    assert (tmp_path / "rho-report.txt").exists()

    verified = RhoPipeline(config, table_path=table_path, evaluate=False).run()
    assert verified.passed
    assert verified.engine.frozen
    assert len(verified.reports) == 2


@pytest.mark.parametrize("p", [2, 3])
def test_rho_pipeline_output_is_reproducible(tmp_path: Path, p: int) -> None:
    """同一設定跑兩次，表格與報告逐位元組相同。"""

    for name in ("first", "second"):
        RhoPipeline(_small(tmp_path / name).model_copy(update={"prime": p})).run()
    for filename in (TABLE_FILE, RHO_REPORT_FILE):
        first = (tmp_path / "first" / filename).read_bytes()
        assert first == (tmp_path / "second" / filename).read_bytes()
    assert (tmp_path / "first" / TABLE_FILE).read_text(encoding="utf-8").startswith(f"# rho-table p={p}\n")


def test_check_pipeline_with_corrupted_table(tmp_path: Path) -> None:
    reports = OperadCheckPipeline(_small(tmp_path), corrupt=True).run()
    corrupted = reports[-1]
    assert corrupted.name == "rho-relations(corrupted)"
    assert not corrupted.passed
    assert all(report.passed for report in reports[:-1]), [r.lines() for r in reports if not r.passed]
    text = (tmp_path / REPORT_FILE).read_text(encoding="utf-8")
    assert "# rho-relations(corrupted): FAIL" in text
