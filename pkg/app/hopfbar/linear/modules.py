"""分次有基模、稀疏分次映射與鏈複形。"""

from __future__ import annotations

from typing import Any, Callable, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from app.hopfbar.errors import NotAChainComplexError, ShapeMismatchError
from app.hopfbar.linear.combination import accumulate, format_combination, merge
from app.hopfbar.linear.field import PrimeField

Label = Hashable
Formatter = Callable[[Any], str]


class GradedBasedModule:
    """每個度數對應一串有序基底標籤的分次模。"""

    def __init__(
        self,
        degrees: Mapping[int, Iterable[Label]],
        formatter: Formatter = str,
        sort: bool = True,
    ) -> None:
        self.formatter = formatter
        self._basis: Dict[int, Tuple[Label, ...]] = {}
        self._degree_of: Dict[Label, int] = {}
        for degree in sorted(degrees):
            labels = list(degrees[degree])
            if sort:
                labels.sort(key=formatter)
            for label in labels:
                if label in self._degree_of:
                    raise ShapeMismatchError(f"基底標籤重複：{formatter(label)}", [self._degree_of[label], degree])
                self._degree_of[label] = degree
            if labels:
                self._basis[degree] = tuple(labels)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[int, Label]], formatter: Formatter = str) -> "GradedBasedModule":
        """由 (度數, 標籤) 配對建立。"""

        grouped: Dict[int, List[Label]] = {}
        for degree, label in pairs:
            grouped.setdefault(degree, []).append(label)
        return cls(grouped, formatter=formatter)

    def basis(self, degree: int) -> Tuple[Label, ...]:
        return self._basis.get(degree, ())

    def degree_of(self, label: Label) -> int:
        try:
            return self._degree_of[label]
        except KeyError as exc:
            raise ShapeMismatchError(f"標籤不在模中：{self.formatter(label)}") from exc

    def __contains__(self, label: object) -> bool:
        return label in self._degree_of

    def degrees(self) -> List[int]:
        return sorted(self._basis)

    def dimension(self, degree: int) -> int:
        return len(self._basis.get(degree, ()))

    def labels(self) -> List[Label]:
        return [label for degree in self.degrees() for label in self._basis[degree]]

    def serialize(self) -> List[str]:
        """每行一個基底元素：`degree<TAB>label`。"""

        return [f"{degree}\t{self.formatter(label)}" for degree in self.degrees() for label in self._basis[degree]]


def tensor_module(left: GradedBasedModule, right: GradedBasedModule) -> GradedBasedModule:
    """兩個分次模的張量積，基底為標籤配對。"""

    grouped: Dict[int, List[Label]] = {}
    for dl in left.degrees():
        for dr in right.degrees():
            for x in left.basis(dl):
                for y in right.basis(dr):
                    grouped.setdefault(dl + dr, []).append((x, y))

    def fmt(pair: Tuple[Label, Label]) -> str:
        return f"{left.formatter(pair[0])}⊗{right.formatter(pair[1])}"

    return GradedBasedModule(grouped, formatter=fmt)


class SparseGradedMap:
    """以基底為索引的稀疏線性映射，具固定度數位移。"""

    def __init__(
        self,
        source: GradedBasedModule,
        target: GradedBasedModule,
        degree_shift: int,
        entries: Mapping[Label, Mapping[Label, int]],
        field: PrimeField,
    ) -> None:
        self.source = source
        self.target = target
        self.degree_shift = degree_shift
        self.field = field
        self.entries: Dict[Label, Dict[Label, int]] = {}
        for label, image in entries.items():
            src_degree = source.degree_of(label)
            clean: Dict[Label, int] = {}
            for tgt, coef in image.items():
                if tgt not in target:
                    raise ShapeMismatchError(f"像不在目標模中：{target.formatter(tgt)}", [src_degree + degree_shift])
                if target.degree_of(tgt) != src_degree + degree_shift:
                    raise ShapeMismatchError(
                        f"映射度數不符：{source.formatter(label)} ↦ {target.formatter(tgt)}",
                        [src_degree, target.degree_of(tgt)],
                    )
                accumulate(clean, tgt, coef, field.p)
            if clean:
                self.entries[label] = clean

    @classmethod
    def from_function(
        cls,
        source: GradedBasedModule,
        target: GradedBasedModule,
        degree_shift: int,
        function: Callable[[Label], Mapping[Label, int]],
        field: PrimeField,
    ) -> "SparseGradedMap":
        """對每個來源基底元素呼叫 function 建立映射。"""

        return cls(source, target, degree_shift, {label: function(label) for label in source.labels()}, field)

    @classmethod
    def identity(cls, module: GradedBasedModule, field: PrimeField) -> "SparseGradedMap":
        return cls(module, module, 0, {label: {label: 1} for label in module.labels()}, field)

    def apply_label(self, label: Label) -> Dict[Label, int]:
        return dict(self.entries.get(label, {}))

    def apply(self, combo: Mapping[Label, int]) -> Dict[Label, int]:
        """線性延拓地作用在組合上。"""

        result: Dict[Label, int] = {}
        for label, coef in combo.items():
            merge(result, self.entries.get(label, {}), coef, self.field.p)
        return result

    def _require(self, condition: bool, message: str, degrees: Sequence[int] = ()) -> None:
        if not condition:
            raise ShapeMismatchError(message, degrees)

    def compose(self, inner: "SparseGradedMap") -> "SparseGradedMap":
        """self ∘ inner。"""

        self._require(inner.target is self.source, "合成時 inner 的目標必須是 self 的來源", [inner.degree_shift, self.degree_shift])
        entries = {label: self.apply(image) for label, image in inner.entries.items()}
        return SparseGradedMap(inner.source, self.target, inner.degree_shift + self.degree_shift, entries, self.field)

    def add(self, other: "SparseGradedMap") -> "SparseGradedMap":
        self._require(
            other.source is self.source and other.target is self.target and other.degree_shift == self.degree_shift,
            "相加的映射形狀不同",
            [self.degree_shift, other.degree_shift],
        )
        entries: Dict[Label, Dict[Label, int]] = {label: dict(image) for label, image in self.entries.items()}
        for label, image in other.entries.items():
            merge(entries.setdefault(label, {}), image, 1, self.field.p)
        return SparseGradedMap(self.source, self.target, self.degree_shift, entries, self.field)

    def scale(self, factor: int) -> "SparseGradedMap":
        entries = {label: {t: c * factor for t, c in image.items()} for label, image in self.entries.items()}
        return SparseGradedMap(self.source, self.target, self.degree_shift, entries, self.field)

    def tensor(self, other: "SparseGradedMap") -> "SparseGradedMap":
        """(f⊗g)(x⊗y) = (−1)^{|g||x|} f(x)⊗g(y)。"""

        source = tensor_module(self.source, other.source)
        target = tensor_module(self.target, other.target)
        p = self.field.p
        entries: Dict[Label, Dict[Label, int]] = {}
        for x, y in source.labels():
            sign = self.field.sign(other.degree_shift * self.source.degree_of(x))
            image: Dict[Label, int] = {}
            for fx, cx in self.entries.get(x, {}).items():
                for gy, cy in other.entries.get(y, {}).items():
                    accumulate(image, (fx, gy), sign * cx * cy, p)
            if image:
                entries[(x, y)] = image
        return SparseGradedMap(source, target, self.degree_shift + other.degree_shift, entries, self.field)

    def is_zero(self) -> bool:
        return not self.entries

    def serialize(self) -> List[str]:
        """每行 `src -> coeff*tgt (+ …)`，依來源排序。"""

        lines = []
        for label in self.source.labels():
            image = self.entries.get(label)
            if image:
                lines.append(f"{self.source.formatter(label)} -> {format_combination(image, self.target.formatter, self.field.p)}")
        return lines


def map_arith(first: SparseGradedMap, ops: Sequence[Tuple[str, Any]]) -> SparseGradedMap:
    """依序套用 compose / add / scale / tensor 運算。"""

    current = first
    for name, operand in ops:
        if name == "compose":
            current = current.compose(operand)
        elif name == "add":
            current = current.add(operand)
        elif name == "scale":
            current = current.scale(int(operand))
        elif name == "tensor":
            current = current.tensor(operand)
        else:
            raise ValueError(f"未知的映射運算：{name}")
    return current


class ChainComplex:
    """帶有 −1 度微分的分次模。"""

    def __init__(self, module: GradedBasedModule, differential: SparseGradedMap) -> None:
        if differential.degree_shift != -1:
            raise ShapeMismatchError("鏈複形的微分必須是 −1 度", [differential.degree_shift])
        if differential.source is not module or differential.target is not module:
            raise ShapeMismatchError("微分的來源與目標必須是同一個模")
        self.module = module
        self.differential = differential
        self.field = differential.field

    @classmethod
    def from_function(
        cls,
        module: GradedBasedModule,
        function: Callable[[Label], Mapping[Label, int]],
        field: PrimeField,
        truncate: bool = True,
    ) -> "ChainComplex":
        """由逐基底的微分函式建立；truncate 時丟棄落在模外的項。"""

        entries = {}
        for label in module.labels():
            image = function(label)
            if truncate:
                image = {t: c for t, c in image.items() if t in module}
            entries[label] = image
        return cls(module, SparseGradedMap(module, module, -1, entries, field))

    def check_square_zero(self, degrees: Optional[Iterable[int]] = None) -> None:
        """逐一檢查基底元素的 d∘d；失敗時拋出帶見證的例外。"""

        wanted = set(self.module.degrees() if degrees is None else degrees)
        for degree in sorted(wanted):
            for label in self.module.basis(degree):
                if self.differential.apply(self.differential.apply_label(label)):
                    raise NotAChainComplexError(self.module.formatter(label), degree)
