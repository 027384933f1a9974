"""檢查報告與表格紀錄的資料模型。"""

from __future__ import annotations

from typing import List

from pydantic import BaseModel, Field


class Failure(BaseModel):
    """單一失敗的檢查與其見證。"""

    check: str
    witness: str
    detail: str = ""


class CheckReport(BaseModel):
    """一組檢查的彙總結果。"""

    name: str
    checked: int = 0
    skipped: int = 0
    failures: List[Failure] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, check: str, ok: bool, witness: str, detail: str = "") -> None:
        """累計一次檢查；失敗時留下見證。"""

        self.checked += 1
        if not ok:
            self.failures.append(Failure(check=check, witness=witness, detail=detail))

    def merge(self, other: "CheckReport") -> None:
        self.checked += other.checked
        self.skipped += other.skipped
        self.failures.extend(other.failures)

    def lines(self) -> List[str]:
        """報告的標準文字形式。"""

        status = "PASS" if self.passed else "FAIL"
        header = f"# {self.name}: {status} checked={self.checked} skipped={self.skipped} failures={len(self.failures)}"
        body = [f"{f.check} ; {f.witness} ; {f.detail}" for f in self.failures]
        return [header, *body]


class RhoEntryRecord(BaseModel):
    """ρ 表格中的一筆資料（寫入 DuckDB 用）。"""

    generator: str
    weights: str
    total_weight: int
    cell_degree: int
    value: str
    provenance: str


class HomologyRecord(BaseModel):
    """單一度數的同調維度。"""

    complex_spec: str
    degree: int
    rank: int
    prime: int
