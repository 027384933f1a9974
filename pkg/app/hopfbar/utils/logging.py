"""運算模組共用的紀錄器：同一格式，層級預設取自 settings，可由 CLI 調整。"""

from __future__ import annotations

import logging
from logging import Logger
from typing import Dict

from app.config.settings import settings

LOG_FORMAT = "%(asctime)s | %(levelname)s | %(name)s | %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")

_loggers: Dict[str, Logger] = {}


def get_logger(name: str) -> Logger:
    """建立帶有預設格式的紀錄器。"""

    if name in _loggers:
        return _loggers[name]
    logger = logging.getLogger(name)
    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(fmt=LOG_FORMAT, datefmt=DATE_FORMAT))
        logger.addHandler(handler)
    logger.setLevel(settings.logging.level)
    logger.propagate = False
    _loggers[name] = logger
    return logger


def set_log_level(level: str) -> None:
    """調整所有已建立紀錄器的層級。"""

    level = level.upper()
    if level not in LEVELS:
        raise ValueError(f"不支援的紀錄層級：{level}（可用：{', '.join(LEVELS)}）")
    for logger in _loggers.values():
        logger.setLevel(level)
