"""以字典表示的有限線性組合（基底標籤 → 係數）。"""

from __future__ import annotations

from typing import Callable, Dict, Hashable, Iterable, Tuple, TypeVar

K = TypeVar("K", bound=Hashable)
Combination = Dict[K, int]


def accumulate(target: Dict[K, int], key: K, coef: int, p: int) -> None:
    """就地加上 coef·key，係數歸零時移除。"""

    value = (target.get(key, 0) + coef) % p
    if value:
        target[key] = value
    else:
        target.pop(key, None)


def merge(target: Dict[K, int], other: Dict[K, int], factor: int, p: int) -> None:
    """就地加上 factor·other。"""

    factor %= p
    if not factor:
        return
    for key, coef in other.items():
        accumulate(target, key, coef * factor, p)


def scaled(combo: Dict[K, int], factor: int, p: int) -> Dict[K, int]:
    """回傳 factor·combo。"""

    factor %= p
    if not factor:
        return {}
    return {key: (coef * factor) % p for key, coef in combo.items() if (coef * factor) % p}


def from_terms(terms: Iterable[Tuple[K, int]], p: int) -> Dict[K, int]:
    """由 (標籤, 係數) 序列建立組合。"""

    result: Dict[K, int] = {}
    for key, coef in terms:
        accumulate(result, key, coef, p)
    return result


def difference(left: Dict[K, int], right: Dict[K, int], p: int) -> Dict[K, int]:
    """left − right。"""

    result = dict(left)
    merge(result, right, -1, p)
    return result


def signed_coefficient(coef: int, p: int) -> int:
    """將係數以最靠近 0 的代表呈現，輸出時較易閱讀。"""

    coef %= p
    return coef - p if coef > p // 2 and p > 2 else coef


def format_combination(combo: Dict[K, int], fmt: Callable[[K], str], p: int) -> str:
    """依序列化文字排序後輸出為 `c*label + …`。"""

    if not combo:
        return "0"
    parts = []
    for text, coef in sorted((fmt(key), coef) for key, coef in combo.items()):
        shown = signed_coefficient(coef, p)
        parts.append(text if shown == 1 else f"{shown}*{text}")
    return " + ".join(parts)


def parse_combination(text: str, parse: Callable[[str], K], p: int) -> Dict[K, int]:
    """format_combination 的反函式；`0` 為空組合。"""

    text = text.strip()
    result: Dict[K, int] = {}
    if text == "0":
        return result
    for part in text.split(" + "):
        part = part.strip()
        head, star, rest = part.partition("*")
        if star and rest and head.lstrip("-").isdigit():
            accumulate(result, parse(rest), int(head), p)
        else:
            accumulate(result, parse(part), 1, p)
    return result
