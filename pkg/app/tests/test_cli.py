"""指令列介面的結束碼與輸出檔案。"""

from __future__ import annotations

from pathlib import Path

import pytest
from typer.testing import CliRunner

from app.hopfbar.action.rho import RhoEngine
from app.hopfbar.cli import EXIT_FAILED, EXIT_USAGE, app
from app.hopfbar.utils.logging import LOG_FORMAT, get_logger

runner = CliRunner()

SMALL_CONFIG = "\n".join(
    [
        "prime=2",
        "arity_max=2",
        "degree_max=0",
        "weight_max=2",
        "bar_length=2",
        "cell_degree_max=0",
        "fixture=poly:n=3",
        "sample=30",
    ]
)


def _config(tmp_path: Path) -> list:
    path = tmp_path / "small.cfg"
    path.write_text(SMALL_CONFIG + "\n", encoding="utf-8")
    return ["--config", str(path), "--out", str(tmp_path)]


def _build_table(tmp_path: Path) -> Path:
    result = runner.invoke(app, ["build-rho", *_config(tmp_path)])
    assert result.exit_code == 0, result.output
    return tmp_path / "rho-table.txt"


def test_build_and_verify_rho(tmp_path: Path) -> None:
    table = _build_table(tmp_path)
    assert table.exists()
    result = runner.invoke(app, ["verify-rho", str(table), *_config(tmp_path)])
    assert result.exit_code == 0, result.output


def test_verify_rho_fails_on_corrupted_table(tmp_path: Path) -> None:
    """ν 分量改成 0 後重新驗證，結束碼為 1；diff-rho 也回報差異。"""

    table = _build_table(tmp_path)
    text = table.read_text(encoding="utf-8")
    original = "{[12]}(1,2) ; (1,1) ; [12|21] ; nu"
    assert original in text
    broken = tmp_path / "broken.txt"
    broken.write_text(text.replace(original, "{[12]}(1,2) ; (1,1) ; 0 ; nu"), encoding="utf-8")

    result = runner.invoke(app, ["verify-rho", str(broken), *_config(tmp_path)])
    assert result.exit_code == EXIT_FAILED

    same = runner.invoke(app, ["diff-rho", str(table), str(table), "--config", str(tmp_path / "small.cfg")])
    assert same.exit_code == 0
    diff = runner.invoke(app, ["diff-rho", str(table), str(broken), "--config", str(tmp_path / "small.cfg")])
    assert diff.exit_code == EXIT_FAILED


def test_act_writes_shuffle(tmp_path: Path) -> None:
    table = _build_table(tmp_path)
    args = ["act", str(table), "--key", "{[12]}(1,2)", "--input", "[x]", "--input", "[x^2]", *_config(tmp_path)]
    result = runner.invoke(app, args)
    assert result.exit_code == 0, result.output
    lines = (tmp_path / "act.txt").read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("# act {[12]}(1,2) [x] [x^2] fixture=")
    assert lines[1] == "[x^2|x] + [x|x^2]"


def test_homology_command(tmp_path: Path) -> None:
    result = runner.invoke(app, ["homology", "W(C):2", *_config(tmp_path)])
    assert result.exit_code == 0, result.output
    lines = (tmp_path / "homology-W-C-2.txt").read_text(encoding="utf-8").splitlines()
    assert lines == ["# homology W(C):2 p=2", "(0,1)"]


def test_draw_tree(tmp_path: Path) -> None:
    result = runner.invoke(app, ["draw", "tree:3:0", *_config(tmp_path)])
    assert result.exit_code == 0, result.output
    dot = (tmp_path / "dot" / "tree_3_0.dot").read_text(encoding="utf-8")
    assert dot.startswith("digraph tree_3_0")


def test_usage_errors_exit_with_two(tmp_path: Path) -> None:
    """設定錯誤與無法解析的參數一律結束碼 2。"""

    bad_prime = runner.invoke(app, ["build-rho", *_config(tmp_path), "--prime", "4"])
    assert bad_prime.exit_code == EXIT_USAGE
    bad_spec = runner.invoke(app, ["homology", "F:2", *_config(tmp_path)])
    assert bad_spec.exit_code == EXIT_USAGE
    bad_key = runner.invoke(app, ["draw", "tree:2:1", *_config(tmp_path)])
    assert bad_key.exit_code == EXIT_USAGE


def test_log_level_option(tmp_path: Path) -> None:
    ok = runner.invoke(app, ["--log-level", "info", "draw", "tree:2:0", *_config(tmp_path)])
    assert ok.exit_code == 0, ok.output
    bad = runner.invoke(app, ["--log-level", "loud", "draw", "tree:2:0", *_config(tmp_path)])
    assert bad.exit_code == EXIT_USAGE


def test_build_rho_stops_on_obstructed_lift(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    """無法提升時結束碼 1，且不寫出表格。"""

    monkeypatch.setattr(RhoEngine, "bracket", lambda self, key, m: {((1, 2),): 1})
    result = runner.invoke(app, ["build-rho", *_config(tmp_path)])
    assert result.exit_code == EXIT_FAILED
    assert not (tmp_path / "rho-table.txt").exists()


def test_get_logger_is_shared_and_formatted() -> None:
    logger = get_logger("app.hopfbar.demo")
    assert get_logger("app.hopfbar.demo") is logger
    assert logger.handlers[0].formatter._fmt == LOG_FORMAT
    assert not logger.propagate
    assert get_logger.__doc__
