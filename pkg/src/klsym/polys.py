"""Integer polynomials with constant term 1 and their quotients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import NotDivisibleError

__all__ = ["IntPoly", "RatFunc", "poly_gcd"]


def _trim(c: Sequence[int]) -> tuple[int, ...]:
    c = list(c)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(int(x) for x in c)


@dataclass(frozen=True)
class IntPoly:
    """``c[0] + c[1] T + ...`` with ``c[0] == 1``."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int]):
        c = _trim(list(coeffs) or [1])
        if c[0] != 1:
            raise ValueError(f"constant term must be 1, got {c[0]}")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def one(cls) -> IntPoly:
        return cls((1,))

    @classmethod
    def linear(cls, a: int) -> IntPoly:
        """``1 - a T``."""
        return cls((1, -a))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __mul__(self, other: IntPoly) -> IntPoly:
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    def __pow__(self, e: int) -> IntPoly:
        if e < 0:
            raise ValueError("negative exponent")
        result = IntPoly.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def divmod(self, other: IntPoly) -> tuple[IntPoly, tuple[int, ...]]:
        """Division by increasing powers of T; the divisor's constant term is 1 so it is exact over Z."""
        num = list(self.coeffs)
        dd = other.degree
        qdeg = self.degree - dd
        if qdeg < 0:
            return IntPoly.one(), tuple(num)
        quot = [0] * (qdeg + 1)
        for i in range(qdeg + 1):
            c = num[i]
            quot[i] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    num[i + j] -= c * b
        return IntPoly(quot), _trim(num)

    def exact_div(self, other: IntPoly) -> IntPoly:
        quot, rem = self.divmod(other)
        if any(rem):
            raise NotDivisibleError(f"{other} does not divide {self}")
        return quot

    def divides(self, other: IntPoly) -> bool:
        return not any(other.divmod(self)[1])

    def series(self, length: int) -> list[int]:
        return [self[i] for i in range(length)]

    def evaluate(self, t):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __repr__(self) -> str:
        return f"IntPoly({list(self.coeffs)})"


def _strip(x: list) -> list:
    x = list(x)
    while len(x) > 1 and x[-1] == 0:
        x.pop()
    return x


def _rational_gcd(a: Sequence[int], b: Sequence[int]) -> list[Fraction]:
    """Euclid over Q; coefficient lists are low-degree first."""
    a = _strip([Fraction(v) for v in a])
    b = _strip([Fraction(v) for v in b])
    while any(b):
        r = list(a)
        while len(r) >= len(b) and any(r):
            f = r[-1] / b[-1]
            shift = len(r) - len(b)
            for i, v in enumerate(b):
                r[i + shift] -= f * v
            r = _strip(r)
        a, b = b, r
    return a


def poly_gcd(f: IntPoly, g: IntPoly) -> IntPoly:
    """Gcd normalized to constant term 1."""
    h = _rational_gcd(f.coeffs, g.coeffs)
    c0 = h[0]
    if c0 == 0:
        raise ArithmeticError("gcd vanishes at T=0, impossible for constant-term-1 inputs")
    scaled = [v / c0 for v in h]
    if any(v.denominator != 1 for v in scaled):
        raise ArithmeticError("gcd is not integral after normalization")
    return IntPoly(int(v) for v in scaled)


@dataclass(frozen=True)
class RatFunc:
    """``num / den`` in lowest terms, both with constant term 1."""

    num: IntPoly
    den: IntPoly

    def reduced(self) -> RatFunc:
        g = poly_gcd(self.num, self.den)
        if g.degree == 0:
            return self
        return RatFunc(self.num.exact_div(g), self.den.exact_div(g))

    def series(self, length: int) -> list[int]:
        """Power series coefficients; exact because ``den`` has constant term 1."""
        out = []
        for i in range(length):
            c = self.num[i] - sum(self.den[j] * out[i - j] for j in range(1, min(i, self.den.degree) + 1))
            out.append(c)
        return out

    def __mul__(self, other: RatFunc | IntPoly) -> RatFunc:
        if isinstance(other, IntPoly):
            other = RatFunc(other, IntPoly.one())
        return RatFunc(self.num * other.num, self.den * other.den).reduced()

    def __truediv__(self, other: RatFunc | IntPoly) -> RatFunc:
        if isinstance(other, IntPoly):
            other = RatFunc(other, IntPoly.one())
        return RatFunc(self.num * other.den, self.den * other.num).reduced()

    def as_poly(self) -> IntPoly:
        if self.den.degree:
            raise NotDivisibleError(f"{self} is not a polynomial")
        return self.num

    def __repr__(self) -> str:
        return f"RatFunc({list(self.num.coeffs)} / {list(self.den.coeffs)})"
