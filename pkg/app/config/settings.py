"""設定讀取模組，負責整合 YAML、.env 與環境變數。"""

from __future__ import annotations

import os
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel

BASE_DIR = Path(__file__).resolve().parents[1]
CONFIG_PATH = BASE_DIR / "config" / "settings.yaml"


class AppSettings(BaseModel):
    """應用程式層級設定。"""

    name: str = "Hopf 棒複形運算工具"
    environment: str = "development"


class AlgebraSettings(BaseModel):
    """係數體與隨機抽樣設定。"""

    prime: int = 2
    seed: int = 20240607


class BoundSettings(BaseModel):
    """有限截斷的預設界限。"""

    arity_max: int = 3
    degree_max: int = 2
    weight_max: int = 4
    bar_length: int = 4
    cell_degree_max: int = 1


class FixtureSettings(BaseModel):
    """測試代數的預設種類與參數。"""

    kind: str = "poly"
    params: Dict[str, int] = {"n": 3, "x_degree": 0}


class StorageSettings(BaseModel):
    """輸出檔案與 DuckDB 位置。"""

    output_dir: str = "./data/hopfbar"
    duckdb_path: str = "./data/hopfbar.duckdb"


class LoggingSettings(BaseModel):
    """紀錄設定。"""

    level: str = "INFO"


class Settings(BaseModel):
    """總設定模型，提供給其他模組使用。"""

    app: AppSettings = AppSettings()
    algebra: AlgebraSettings = AlgebraSettings()
    bounds: BoundSettings = BoundSettings()
    fixture: FixtureSettings = FixtureSettings()
    storage: StorageSettings = StorageSettings()
    logging: LoggingSettings = LoggingSettings()

    model_config = {"frozen": True}


def _load_yaml_config(path: Path) -> Dict[str, Any]:
    """載入 YAML 設定檔，若不存在則回傳空字典。"""

    if not path.exists():
        return {}
    with path.open("r", encoding="utf-8") as file:
        return yaml.safe_load(file) or {}


def _apply_env_overrides(config: Dict[str, Any]) -> Dict[str, Any]:
    """以環境變數覆蓋設定值。"""

    algebra = config.setdefault("algebra", {})
    algebra["prime"] = int(os.getenv("HOPFBAR_PRIME", algebra.get("prime", 2)))
    algebra["seed"] = int(os.getenv("HOPFBAR_SEED", algebra.get("seed", 20240607)))

    storage = config.setdefault("storage", {})
    storage["output_dir"] = os.getenv("HOPFBAR_OUTPUT_DIR", storage.get("output_dir", "./data/hopfbar"))
    storage["duckdb_path"] = os.getenv("DUCKDB_PATH", storage.get("duckdb_path", "./data/hopfbar.duckdb"))

    app_cfg = config.setdefault("app", {})
    app_cfg["environment"] = os.getenv("APP_ENV", app_cfg.get("environment", "development"))

    log_cfg = config.setdefault("logging", {})
    log_cfg["level"] = os.getenv("LOG_LEVEL", log_cfg.get("level", "INFO"))
    return config


@lru_cache
def get_settings() -> Settings:
    """取得設定，使用快取避免重複 IO。"""

    load_dotenv()
    data = _load_yaml_config(CONFIG_PATH)
    merged = _apply_env_overrides(data)
    return Settings.model_validate(merged)


settings = get_settings()
