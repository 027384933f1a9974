"""批次運算指令列介面：算子檢查、ρ 表格、求值、同調與 DOT 輸出。"""

from __future__ import annotations

from pathlib import Path
from typing import Dict, List, Optional

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from app.hopfbar.action.evaluate import evaluate_operation
from app.hopfbar.action.rho import RhoEngine
from app.hopfbar.action.verify import rho_differences
from app.hopfbar.errors import LiftObstructionError, OutOfTruncationError, UnsupportedFixtureError
from app.hopfbar.linear.combination import format_combination
from app.hopfbar.models.reports import CheckReport
from app.hopfbar.models.run_config import RunConfig, build_run_config
from app.hopfbar.pipelines.base import build_context, write_lines
from app.hopfbar.pipelines.check_pipeline import OperadCheckPipeline
from app.hopfbar.pipelines.homology_pipeline import HomologyPipeline, parse_complex_spec
from app.hopfbar.pipelines.rho_pipeline import RhoPipeline, load_table
from app.hopfbar.storage.duckdb_client import DuckDBClient
from app.hopfbar.utils.logging import get_logger, set_log_level
from app.hopfbar.wconstruction.drawing import cell_records, draw_object

logger = get_logger(__name__)
console = Console()

app = typer.Typer(help="W(E) 在 bar 複形上的 Hopf 作用：建構、驗證與求值。")

EXIT_FAILED = 1
EXIT_USAGE = 2

ConfigOption = typer.Option(None, "--config", help="key=value 設定檔，鍵名同旗標")
PrimeOption = typer.Option(None, "--prime", help="係數體 F_p 的 p")
ArityOption = typer.Option(None, "--arity-max", help="W(E) 與檢查的元數上限")
DegreeOption = typer.Option(None, "--degree-max", help="度數上限")
WeightOption = typer.Option(None, "--weight-max", help="ρ 表格的總權重上限")
BarLengthOption = typer.Option(None, "--bar-length", help="bar 字的張量長度上限")
FixtureOption = typer.Option(None, "--fixture", help="測試代數，例如 poly:n=3,x_degree=0、exterior:k=2、free_E")
SeedOption = typer.Option(None, "--seed", help="抽樣檢查的隨機種子")
OutOption = typer.Option(None, "--out", help="輸出目錄")
DuckOption = typer.Option(False, "--duckdb/--no-duckdb", help="同時寫入 DuckDB")


@app.callback()
def main(log_level: Optional[str] = typer.Option(None, "--log-level", help="DEBUG、INFO、WARNING 或 ERROR")) -> None:
    if log_level is None:
        return
    try:
        set_log_level(log_level)
    except ValueError as exc:
        raise typer.BadParameter(str(exc), param_hint="--log-level") from exc


def _run_config(
    config: Optional[Path],
    prime: Optional[int],
    arity_max: Optional[int],
    degree_max: Optional[int],
    weight_max: Optional[int],
    bar_length: Optional[int],
    fixture: Optional[str],
    seed: Optional[int],
    out: Optional[Path],
) -> RunConfig:
    """設定錯誤一律以結束碼 2 離開。"""

    overrides: Dict[str, object] = {
        "prime": prime,
        "arity_max": arity_max,
        "degree_max": degree_max,
        "weight_max": weight_max,
        "bar_length": bar_length,
        "fixture": fixture,
        "seed": seed,
        "out": str(out) if out is not None else None,
    }
    try:
        return build_run_config(config_file=config, overrides=overrides)
    except (ValidationError, ValueError, OSError) as exc:
        console.print(f"[red]設定錯誤：{escape(str(exc))}[/red]")
        raise typer.Exit(EXIT_USAGE) from exc


def _duck_client(run: RunConfig, enabled: bool) -> Optional[DuckDBClient]:
    return DuckDBClient(db_path=run.duckdb_path) if enabled else None


def _print_reports(reports: List[CheckReport]) -> bool:
    """以 rich 表格列出各報告，回傳是否全數通過。"""

    table = Table(title="檢查結果")
    table.add_column("報告")
    table.add_column("狀態")
    table.add_column("檢查", justify="right")
    table.add_column("略過", justify="right")
    table.add_column("失敗", justify="right")
    for report in reports:
        status = "[green]PASS[/green]" if report.passed else "[red]FAIL[/red]"
        table.add_row(report.name, status, str(report.checked), str(report.skipped), str(len(report.failures)))
    console.print(table)
    for report in reports:
        for failure in report.failures[:5]:
            detail = escape(f"{failure.check} ; {failure.witness} ; {failure.detail}")
            console.print(f"[red]{escape(report.name)}[/red] {detail}")
    return all(report.passed for report in reports)


def _exit_for(passed: bool) -> None:
    if not passed:
        raise typer.Exit(EXIT_FAILED)


@app.command("check-operads")
def check_operads(
    config: Optional[Path] = ConfigOption,
    prime: Optional[int] = PrimeOption,
    arity_max: Optional[int] = ArityOption,
    degree_max: Optional[int] = DegreeOption,
    weight_max: Optional[int] = WeightOption,
    bar_length: Optional[int] = BarLengthOption,
    fixture: Optional[str] = FixtureOption,
    seed: Optional[int] = SeedOption,
    out: Optional[Path] = OutOption,
    corrupt: bool = typer.Option(False, "--corrupt", help="另外驗證一張被破壞的 ρ 表格（負面對照）"),
    duckdb: bool = DuckOption,
) -> None:
    """C、K、E、W(E) 的公理、E 的收縮、Hopf 結構、K→E 與 bar 複形檢查。"""

    run = _run_config(config, prime, arity_max, degree_max, weight_max, bar_length, fixture, seed, out)
    client = _duck_client(run, duckdb)
    try:
        reports = OperadCheckPipeline(run, duck_client=client, corrupt=corrupt).run()
    except UnsupportedFixtureError as exc:
        console.print(f"[red]{escape(str(exc))}[/red]")
        raise typer.Exit(EXIT_USAGE) from exc
    finally:
        if client is not None:
            client.close()
    _exit_for(_print_reports(reports))


@app.command("build-rho")
def build_rho_command(
    config: Optional[Path] = ConfigOption,
    prime: Optional[int] = PrimeOption,
    arity_max: Optional[int] = ArityOption,
    degree_max: Optional[int] = DegreeOption,
    weight_max: Optional[int] = WeightOption,
    bar_length: Optional[int] = BarLengthOption,
    fixture: Optional[str] = FixtureOption,
    seed: Optional[int] = SeedOption,
    out: Optional[Path] = OutOption,
    evaluate: bool = typer.Option(True, "--evaluate/--no-evaluate", help="在 bar 複形上檢查求值性質"),
    duckdb: bool = DuckOption,
) -> None:
    """遞迴建立 ρ 表格並寫出，隨後驗證全部關係。"""

    run = _run_config(config, prime, arity_max, degree_max, weight_max, bar_length, fixture, seed, out)
    client = _duck_client(run, duckdb)
    try:
        result = RhoPipeline(run, duck_client=client, evaluate=evaluate).run()
    except LiftObstructionError as exc:
        console.print(f"[red]建表中止：{escape(str(exc))}[/red]")
        raise typer.Exit(EXIT_FAILED) from exc
    finally:
        if client is not None:
            client.close()
    console.print(f"ρ 表格：{len(result.engine.table)} 筆 → {run.output_dir / 'rho-table.txt'}")
    _exit_for(_print_reports(result.reports))


@app.command("verify-rho")
def verify_rho(
    table_file: Path = typer.Argument(..., exists=True, dir_okay=False, help="build-rho 寫出的表格"),
    config: Optional[Path] = ConfigOption,
    prime: Optional[int] = PrimeOption,
    arity_max: Optional[int] = ArityOption,
    degree_max: Optional[int] = DegreeOption,
    weight_max: Optional[int] = WeightOption,
    bar_length: Optional[int] = BarLengthOption,
    fixture: Optional[str] = FixtureOption,
    seed: Optional[int] = SeedOption,
    out: Optional[Path] = OutOption,
    evaluate: bool = typer.Option(False, "--evaluate/--no-evaluate", help="在 bar 複形上檢查求值性質"),
    duckdb: bool = DuckOption,
) -> None:
    """讀入表格（凍結），重新驗證四類關係；失敗清單為空時結束碼 0。"""

    run = _run_config(config, prime, arity_max, degree_max, weight_max, bar_length, fixture, seed, out)
    client = _duck_client(run, duckdb)
    try:
        result = RhoPipeline(run, duck_client=client, table_path=table_file, evaluate=evaluate).run()
    except ValueError as exc:
        console.print(f"[red]表格錯誤：{escape(str(exc))}[/red]")
        raise typer.Exit(EXIT_USAGE) from exc
    finally:
        if client is not None:
            client.close()
    _exit_for(_print_reports(result.reports))


@app.command("act")
def act(
    table_file: Path = typer.Argument(..., exists=True, dir_okay=False, help="ρ 表格"),
    key: str = typer.Option(..., "--key", help="W(E) 元素，例如 {[12]}(1,2)"),
    inputs: List[str] = typer.Option(..., "--input", help="bar 字，例如 [x|x^2]；依序給 r 次"),
    config: Optional[Path] = ConfigOption,
    prime: Optional[int] = PrimeOption,
    fixture: Optional[str] = FixtureOption,
    bar_length: Optional[int] = BarLengthOption,
    out: Optional[Path] = OutOption,
) -> None:
    """θ(q)(α₁,…,α_r)：以表格在測試代數的 bar 複形上求值。"""

    run = _run_config(config, prime, None, None, None, bar_length, fixture, None, out)
    context = build_context(run)
    try:
        table = load_table(context, table_file)
        q = context.W.parse_label(key)
        words = [context.bar.parse_word(text) for text in inputs]
    except ValueError as exc:
        raise typer.BadParameter(str(exc)) from exc
    engine = RhoEngine(context.W, context.target, context.morphism, context.retract, table, frozen=True)
    try:
        value = evaluate_operation(engine, context.bar, q, words)
    except OutOfTruncationError as exc:
        console.print(f"[red]{escape(str(exc))}[/red]")
        raise typer.Exit(EXIT_USAGE) from exc
    text = format_combination(value, context.bar.format_word, run.prime)
    lines = [f"# act {key} {' '.join(inputs)} fixture={context.algebra.name}", text]
    write_lines(run.output_dir / "act.txt", lines)
    console.print(text, markup=False)


@app.command("homology")
def homology(
    spec: str = typer.Argument(..., help="複形代號：C:r、K:r、E:r、LE:r、W(C):r、W(E):r 或 bar"),
    config: Optional[Path] = ConfigOption,
    prime: Optional[int] = PrimeOption,
    degree_max: Optional[int] = DegreeOption,
    bar_length: Optional[int] = BarLengthOption,
    fixture: Optional[str] = FixtureOption,
    out: Optional[Path] = OutOption,
    duckdb: bool = DuckOption,
) -> None:
    """截斷鏈複形的同調維度 (degree, rank)。"""

    run = _run_config(config, prime, None, degree_max, None, bar_length, fixture, None, out)
    try:
        parsed = parse_complex_spec(spec)
    except ValueError as exc:
        raise typer.BadParameter(str(exc)) from exc
    client = _duck_client(run, duckdb)
    try:
        records = HomologyPipeline(run, parsed, duck_client=client).run()
    except (ValueError, OutOfTruncationError) as exc:
        console.print(f"[red]{escape(str(exc))}[/red]")
        raise typer.Exit(EXIT_USAGE) from exc
    finally:
        if client is not None:
            client.close()
    table = Table(title=f"H_*({parsed.text}; F_{run.prime})")
    table.add_column("度數", justify="right")
    table.add_column("維度", justify="right")
    for record in records:
        table.add_row(str(record.degree), str(record.rank))
    console.print(table)


@app.command("draw")
def draw(
    key: str = typer.Argument(..., help="tree:<r>:<index>、compose:<i>、cell:<d>:<r> 或 W(E) 元素"),
    cells: bool = typer.Option(False, "--cells", help="cell:<d>:<r> 時另寫出生成元與黏合映射"),
    config: Optional[Path] = ConfigOption,
    prime: Optional[int] = PrimeOption,
    arity_max: Optional[int] = ArityOption,
    degree_max: Optional[int] = DegreeOption,
    out: Optional[Path] = OutOption,
) -> None:
    """輸出 DOT 檔，每張圖一個檔案。"""

    run = _run_config(config, prime, arity_max, degree_max, None, None, None, None, out)
    W = build_context(run).W
    try:
        files = draw_object(W, key)
    except ValueError as exc:
        raise typer.BadParameter(str(exc)) from exc
    if not files:
        logger.warning("%s 沒有可輸出的圖", key)
    for name, dot in files:
        path = write_lines(run.output_dir / "dot" / f"{name}.dot", dot.splitlines())
        console.print(str(path))
    if cells and key.startswith("cell:"):
        _, d, r = key.split(":")
        path = write_lines(run.output_dir / "dot" / f"cells_{d}_{r}.txt", cell_records(W, int(d), int(r)))
        console.print(str(path))


@app.command("diff-rho")
def diff_rho(
    left: Path = typer.Argument(..., exists=True, dir_okay=False),
    right: Path = typer.Argument(..., exists=True, dir_okay=False),
    config: Optional[Path] = ConfigOption,
    prime: Optional[int] = PrimeOption,
) -> None:
    """列出兩張表格中值不同的分量；有差異時結束碼 1。"""

    run = _run_config(config, prime, None, None, None, None, None, None, None)
    context = build_context(run)
    try:
        a = load_table(context, left)
        b = load_table(context, right)
    except ValueError as exc:
        raise typer.BadParameter(str(exc)) from exc
    lines = rho_differences(a, b, context.W.format_label, context.target.format_combo)
    for line in lines:
        console.print(line, markup=False)
    console.print(f"差異分量：{len(lines)}")
    _exit_for(not lines)


if __name__ == "__main__":
    app()
