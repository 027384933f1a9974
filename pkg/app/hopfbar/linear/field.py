"""質數體 F_p 上的純量運算。"""

from __future__ import annotations

from functools import lru_cache


def is_prime(value: int) -> bool:
    """判斷整數是否為質數。"""

    if value < 2:
        return False
    divisor = 2
    while divisor * divisor <= value:
        if value % divisor == 0:
            return False
        divisor += 1
    return True


class PrimeField:
    """以 Python 整數表示、模 p 約化的有限體。"""

    def __init__(self, p: int = 2) -> None:
        if not is_prime(p):
            raise ValueError(f"係數體特徵必須為質數：{p}")
        self.p = p

    def normalize(self, value: int) -> int:
        """將整數約化到 0..p-1。"""

        return value % self.p

    def inverse(self, value: int) -> int:
        """乘法反元素。"""

        value %= self.p
        if value == 0:
            raise ZeroDivisionError("F_p 中 0 沒有反元素")
        return pow(value, self.p - 2, self.p)

    def sign(self, exponent: int) -> int:
        """回傳 (-1)^exponent 在 F_p 中的代表。"""

        return 1 if exponent % 2 == 0 else self.p - 1

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("PrimeField", self.p))

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"


@lru_cache(maxsize=None)
def get_field(p: int) -> PrimeField:
    """取得快取的 F_p 實例。"""

    return PrimeField(p)
