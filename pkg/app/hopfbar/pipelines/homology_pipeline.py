"""homology：依複形代號建立截斷鏈複形並計算各度數的同調維度。"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional, Tuple

from app.hopfbar.linear.homology import homology_ranks
from app.hopfbar.linear.modules import ChainComplex
from app.hopfbar.models.reports import HomologyRecord
from app.hopfbar.models.run_config import RunConfig
from app.hopfbar.operads.base import DgOperad
from app.hopfbar.pipelines.base import BasePipeline, HopfbarContext, build_context, write_lines
from app.hopfbar.storage.duckdb_client import DuckDBClient
from app.hopfbar.storage.schema import initialize_duckdb
from app.hopfbar.utils.logging import get_logger
from app.hopfbar.wconstruction.operad import build_w

logger = get_logger(__name__)

# 例：E:3、K:4、C:2、W(C):2、W(E):3、LE:2、bar
SPEC_PATTERN = re.compile(r"^(?P<name>C|K|E|LE|W\(C\)|W\(E\)):(?P<arity>\d+)$")


@dataclass
class ComplexSpec:
    name: str
    arity: Optional[int] = None

    @property
    def slug(self) -> str:
        text = self.name if self.arity is None else f"{self.name}-{self.arity}"
        return re.sub(r"[^A-Za-z0-9-]", "", text.replace("(", "-"))

    @property
    def text(self) -> str:
        return self.name if self.arity is None else f"{self.name}:{self.arity}"


def parse_complex_spec(text: str) -> ComplexSpec:
    text = text.strip()
    if text == "bar":
        return ComplexSpec("bar")
    match = SPEC_PATTERN.match(text)
    if match is None:
        raise ValueError(f"無法解析複形代號：{text}（例如 E:3、W(C):2、bar）")
    return ComplexSpec(match.group("name"), int(match.group("arity")))


class HomologyPipeline(BasePipeline[Tuple[ChainComplex, List[int]], List[HomologyRecord]]):
    """頂端度數多建一層，使報告中的最高度數也被邊界正確扣除。"""

    name = "homology-pipeline"

    def __init__(self, config: RunConfig, spec: ComplexSpec, duck_client: Optional[DuckDBClient] = None) -> None:
        self.config = config
        self.spec = spec
        self.duck_client = duck_client

    def _operad(self, context: HopfbarContext) -> DgOperad:
        name = self.spec.name
        r = self.spec.arity or 1
        if name == "C":
            return context.C
        if name == "K":
            return context.K
        if name == "E":
            return context.E
        if name == "LE":
            return context.target
        inner = context.C if name == "W(C)" else context.E
        label_degree = 0 if name == "W(C)" else self.config.degree_max
        return build_w(inner, max(r, 2), edge_max=max(r - 2, 0) + 2, label_degree_max=label_degree)

    def extract(self) -> Tuple[ChainComplex, List[int]]:
        context = build_context(self.config)
        if self.spec.name == "bar":
            cx = context.bar.chain_complex(self.config.bar_length)
            degrees = sorted(d for d in cx.module.degrees() if cx.module.dimension(d))
            return cx, degrees
        operad = self._operad(context)
        r = self.spec.arity or 1
        if r > operad.arity_max:
            raise ValueError(f"{operad.name} 的元數上限為 {operad.arity_max}")
        low = operad.min_degree(r)
        top = low + self.config.degree_max
        cx = operad.chain_complex(r, min(top + 1, operad.degree_max))
        return cx, list(range(low, min(top, operad.degree_max) + 1))

    def transform(self, raw: Tuple[ChainComplex, List[int]]) -> List[HomologyRecord]:
        cx, degrees = raw
        ranks = homology_ranks(cx, degrees)
        return [
            HomologyRecord(complex_spec=self.spec.text, degree=d, rank=rank, prime=self.config.prime)
            for d, rank in ranks
        ]

    def load(self, result: List[HomologyRecord]) -> None:
        lines = [f"# homology {self.spec.text} p={self.config.prime}"]
        lines.extend(f"({record.degree},{record.rank})" for record in result)
        write_lines(self.config.output_dir / f"homology-{self.spec.slug}.txt", lines)
        if self.duck_client is not None and result:
            initialize_duckdb(self.duck_client)
            self.duck_client.append_homology(result, self.name)
