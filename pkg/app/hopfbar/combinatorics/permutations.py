"""對稱群、區塊置換、洗牌置換與單射分解。

置換以像序列 (σ(1),…,σ(n)) 表示；合成 σ∘τ 先作用 τ。
運算上的左作用為 (σ·f)(z₁,…,z_n) = f(z_{σ(1)},…,z_{σ(n)})。
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterator, List, Sequence, Tuple

Images = Tuple[int, ...]


def compose_images(left: Sequence[int], right: Sequence[int]) -> Images:
    """(left∘right)(k) = left(right(k))。"""

    return tuple(left[k - 1] for k in right)


def inverse_images(images: Sequence[int]) -> Images:
    result = [0] * len(images)
    for position, value in enumerate(images, start=1):
        result[value - 1] = position
    return tuple(result)


def images_sign(images: Sequence[int]) -> int:
    """置換的奇偶：回傳 0（偶）或 1（奇）。"""

    seen = [False] * len(images)
    parity = 0
    for start in range(len(images)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = images[k] - 1
            length += 1
        parity += length - 1
    return parity % 2


def substitute_images(outer: Sequence[int], i: int, inner: Sequence[int]) -> Images:
    """結合算子的 ∘_i：在 outer 中以平移後的 inner 區塊取代值 i。"""

    t = len(inner)
    result: List[int] = []
    for value in outer:
        if value == i:
            result.extend(v + i - 1 for v in inner)
        elif value > i:
            result.append(value + t - 1)
        else:
            result.append(value)
    return tuple(result)


def delete_value(images: Sequence[int], i: int) -> Images:
    """刪去值 i 並將較大的值減一。"""

    return tuple(v - 1 if v > i else v for v in images if v != i)


@dataclass(frozen=True)
class Permutation:
    """{1..n} 上的雙射。"""

    images: Images

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"不是置換：{self.images}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @property
    def arity(self) -> int:
        return len(self.images)

    def __call__(self, k: int) -> int:
        return self.images[k - 1]

    def compose(self, other: "Permutation") -> "Permutation":
        """self∘other，先作用 other。"""

        return Permutation(compose_images(self.images, other.images))

    def inverse(self) -> "Permutation":
        return Permutation(inverse_images(self.images))

    def sign(self) -> int:
        """奇偶性（0 或 1）。"""

        return images_sign(self.images)

    def is_identity(self) -> bool:
        return all(v == k for k, v in enumerate(self.images, start=1))

    def cycle_notation(self) -> str:
        """單行循環記號，恆等置換記為 ()。"""

        seen = set()
        cycles = []
        for start in range(1, self.arity + 1):
            if start in seen or self(start) == start:
                seen.add(start)
                continue
            cycle = []
            k = start
            while k not in seen:
                seen.add(k)
                cycle.append(str(k))
                k = self(k)
            cycles.append("(" + " ".join(cycle) + ")")
        return "".join(cycles) or "()"

    def __str__(self) -> str:
        return self.cycle_notation()


@dataclass(frozen=True)
class InjectiveMap:
    """單射 u: {1..r} → {1..s}。"""

    r: int
    s: int
    images: Images

    def __post_init__(self) -> None:
        if len(self.images) != self.r or len(set(self.images)) != self.r:
            raise ValueError(f"不是單射：{self.images}")
        if any(v < 1 or v > self.s for v in self.images):
            raise ValueError(f"像超出範圍 1..{self.s}：{self.images}")

    def __call__(self, k: int) -> int:
        return self.images[k - 1]

    def compose(self, other: "InjectiveMap | Permutation") -> "InjectiveMap":
        """self∘other。"""

        return InjectiveMap(len(other.images), self.s, compose_images(self.images, other.images))

    def is_monotone(self) -> bool:
        return all(a < b for a, b in zip(self.images, self.images[1:]))

    def complement(self) -> List[int]:
        """不在像中的元素（遞增）。"""

        hit = set(self.images)
        return [k for k in range(1, self.s + 1) if k not in hit]


def lambda_decompose(u: InjectiveMap) -> Tuple[InjectiveMap, Permutation]:
    """唯一分解 u = α∘σ，α 為遞增單射、σ 為置換。"""

    ordered = tuple(sorted(u.images))
    rank = {value: position for position, value in enumerate(ordered, start=1)}
    alpha = InjectiveMap(u.r, u.s, ordered)
    sigma = Permutation(tuple(rank[v] for v in u.images))
    return alpha, sigma


def block_order(sizes: Sequence[int], order: Sequence[int]) -> Permutation:
    """依 order 列出區塊後，各位置對應的原始位置（序列形式）。"""

    starts = []
    total = 0
    for size in sizes:
        starts.append(total)
        total += size
    images: List[int] = []
    for block in order:
        start = starts[block - 1]
        images.extend(range(start + 1, start + sizes[block - 1] + 1))
    return Permutation(tuple(images))


def bloc_permutation(w: Permutation, sizes: Sequence[int]) -> Permutation:
    """依 w 置換大小為 sizes 的連續區塊；第 k 個元素送到其新位置。"""

    if len(sizes) != w.arity:
        raise ValueError("區塊數必須等於置換的元數")
    if any(size < 0 for size in sizes):
        raise ValueError("區塊大小必須非負")
    return block_order(sizes, w.images).inverse()


@lru_cache(maxsize=None)
def shuffle_index(r: int, n: int) -> Permutation:
    """Σ_{rn} 中的指標置換 shuffle((j−1)r+i) = (i−1)n+j。"""

    images = [0] * (r * n)
    for i in range(1, r + 1):
        for j in range(1, n + 1):
            images[(j - 1) * r + i - 1] = (i - 1) * n + j
    return Permutation(tuple(images))


def shuffle_perm(r: int, n: int, sizes: Sequence[Sequence[int]]) -> Permutation:
    """將 rn 個群組 (i,j)（大小 sizes[i-1][j-1] = m^j_i）由 i 為主序重排為 j 為主序。

    回傳序列形式：新位置 → 原始位置。同一函式以 (t, m, n^k_j) 呼叫即得合成積所用的版本。
    """

    flat = [sizes[i][j] for i in range(r) for j in range(n)]
    return block_order(flat, shuffle_index(r, n).images)


@lru_cache(maxsize=None)
def lattice_paths(p: int, q: int) -> Tuple[Tuple[Tuple[Tuple[int, int], ...], int], ...]:
    """(p,q) 洗牌對應的格點路徑與其奇偶（a 步在前的交錯計數）。"""

    paths = []
    total = p + q
    for a_steps in combinations(range(total), p):
        chosen = set(a_steps)
        a = b = 0
        vertices = [(0, 0)]
        inversions = 0
        b_seen = 0
        for step in range(total):
            if step in chosen:
                a += 1
                inversions += b_seen
            else:
                b += 1
                b_seen += 1
            vertices.append((a, b))
        paths.append((tuple(vertices), inversions % 2))
    return tuple(paths)


def pq_shuffles(p: int, q: int) -> List[Tuple[Permutation, int]]:
    """全部 C(p+q, p) 個 (p,q) 洗牌與其 Koszul 符號（±1）。"""

    result = []
    for a_steps in combinations(range(1, p + q + 1), p):
        b_steps = [k for k in range(1, p + q + 1) if k not in a_steps]
        perm = Permutation(tuple(a_steps) + tuple(b_steps))
        result.append((perm, -1 if perm.sign() else 1))
    return result


def all_permutations(n: int) -> Iterator[Permutation]:
    for images in permutations(range(1, n + 1)):
        yield Permutation(images)


def format_images(images: Sequence[int]) -> str:
    """單行像序列；元數 ≤ 9 時省略逗號。"""

    if len(images) <= 9:
        return "".join(str(v) for v in images)
    return ",".join(str(v) for v in images)


def parse_images(text: str) -> Images:
    if not text:
        return ()
    if "," in text:
        return tuple(int(v) for v in text.split(","))
    return tuple(int(v) for v in text)
