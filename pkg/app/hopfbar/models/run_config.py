"""單次批次執行的設定：settings 預設值 → key=value 設定檔 → 命令列旗標。"""

from __future__ import annotations

from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

from app.config.settings import Settings, settings
from app.hopfbar.action.weights import ActionBounds
from app.hopfbar.bar.algebras import FIXTURE_KINDS
from app.hopfbar.linear.field import is_prime

# 設定檔鍵名與旗標同名（去掉前綴 --，連字號可寫成底線）
CONFIG_KEYS = (
    "prime",
    "arity_max",
    "degree_max",
    "weight_max",
    "bar_length",
    "cell_degree_max",
    "fixture",
    "seed",
    "out",
    "duckdb_path",
    "sample",
)


class RunConfig(BaseModel):
    """係數體、截斷界限、測試代數與輸出位置。"""

    prime: int = 2
    arity_max: int = 3
    degree_max: int = 2
    weight_max: int = 4
    bar_length: int = 4
    cell_degree_max: int = 1
    fixture: str = "poly"
    fixture_params: Dict[str, int] = Field(default_factory=dict)
    seed: int = 20240607
    out: str = "./data/hopfbar"
    duckdb_path: Optional[str] = None
    sample: int = 200

    model_config = {"frozen": True}

    @field_validator("prime")
    @classmethod
    def _check_prime(cls, value: int) -> int:
        if not is_prime(value):
            raise ValueError(f"p 必須為質數：{value}")
        return value

    @field_validator("fixture")
    @classmethod
    def _check_fixture(cls, value: str) -> str:
        if value not in FIXTURE_KINDS:
            raise ValueError(f"不支援的代數種類：{value}（可用：{', '.join(FIXTURE_KINDS)}）")
        return value

    @model_validator(mode="after")
    def _check_bounds(self) -> "RunConfig":
        if min(self.arity_max, self.weight_max, self.bar_length, self.sample) < 1:
            raise ValueError("元數、權重、bar 長度與抽樣數必須為正")
        if min(self.degree_max, self.cell_degree_max) < 0:
            raise ValueError("度數上限必須非負")
        if self.cell_degree_max > self.degree_max:
            raise ValueError("cell_degree_max 不可超過 degree_max")
        if self.weight_max > self.bar_length:
            raise ValueError(f"weight_max ({self.weight_max}) 不可超過 bar_length ({self.bar_length})")
        return self

    @property
    def bounds(self) -> ActionBounds:
        return ActionBounds(
            r_max=self.arity_max,
            weight_max=self.weight_max,
            cell_degree_max=self.cell_degree_max,
            degree_max=self.degree_max,
            bar_length=self.bar_length,
        )

    @property
    def output_dir(self) -> Path:
        return Path(self.out)

    def describe(self) -> str:
        params = ",".join(f"{key}={value}" for key, value in sorted(self.fixture_params.items()))
        return (
            f"p={self.prime} arity_max={self.arity_max} degree_max={self.degree_max} "
            f"weight_max={self.weight_max} bar_length={self.bar_length} cell_degree_max={self.cell_degree_max} "
            f"fixture={self.fixture}:{params} seed={self.seed}"
        )


def parse_fixture(text: str) -> Tuple[str, Dict[str, int]]:
    """`poly` 或 `poly:n=4,x_degree=0`。"""

    kind, _, rest = text.strip().partition(":")
    params: Dict[str, int] = {}
    for item in filter(None, (part.strip() for part in rest.split(","))):
        name, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"代數參數需為 name=value：{item}")
        params[name.strip()] = int(value)
    return kind.strip(), params


def read_config_file(path: Path) -> Dict[str, str]:
    """key=value 格式；# 開頭為註解。"""

    values: Dict[str, str] = {}
    for number, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip().lstrip("-").replace("-", "_")
        if not sep or key not in CONFIG_KEYS:
            raise ValueError(f"設定檔第 {number} 行無法解析：{raw}")
        values[key] = value.strip()
    return values


def build_run_config(
    base: Settings = settings,
    config_file: Optional[Path] = None,
    overrides: Optional[Dict[str, Any]] = None,
) -> RunConfig:
    """依序合併 settings、設定檔與旗標；任一層的 None 表示沿用上一層。"""

    data: Dict[str, Any] = {
        "prime": base.algebra.prime,
        "seed": base.algebra.seed,
        "arity_max": base.bounds.arity_max,
        "degree_max": base.bounds.degree_max,
        "weight_max": base.bounds.weight_max,
        "bar_length": base.bounds.bar_length,
        "cell_degree_max": base.bounds.cell_degree_max,
        "fixture": base.fixture.kind,
        "fixture_params": dict(base.fixture.params),
        "out": base.storage.output_dir,
        "duckdb_path": base.storage.duckdb_path,
    }
    layers = []
    if config_file is not None:
        layers.append(read_config_file(config_file))
    if overrides:
        layers.append({key: value for key, value in overrides.items() if value is not None})
    for layer in layers:
        for key, value in layer.items():
            if key == "fixture":
                kind, params = parse_fixture(str(value))
                # 同種類且未給參數時沿用原參數
                if kind != data["fixture"] or params:
                    data["fixture_params"] = params
                data["fixture"] = kind
            else:
                data[key] = value
    return RunConfig.model_validate(data)
