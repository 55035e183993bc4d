"""Truncated Laurent series with exact rational coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class Laurent:
    """sum_k coeffs[k] * s**(val + k), known exactly up to s**(val + len(coeffs) - 1)."""

    val: int
    coeffs: tuple[Fraction, ...]

    @classmethod
    def make(cls, val: int, coeffs: Sequence) -> "Laurent":
        return cls(val, tuple(Fraction(c) for c in coeffs))

    @classmethod
    def const(cls, c, order: int) -> "Laurent":
        return cls.make(0, [c] + [0] * order)

    @property
    def top(self) -> int:
        """Exponent of the last known coefficient."""
        return self.val + len(self.coeffs) - 1

    def coeff(self, k: int) -> Fraction:
        j = k - self.val
        if j < 0:
            return Fraction(0)
        if j >= len(self.coeffs):
            raise ValueError(f"coefficient of s^{k} is beyond the truncation order")
        return self.coeffs[j]

    def _aligned(self, other: "Laurent") -> tuple[int, int]:
        return min(self.val, other.val), min(self.top, other.top)

    def __add__(self, other: "Laurent | int | Fraction") -> "Laurent":
        if not isinstance(other, Laurent):
            other = Laurent.const(other, max(self.top, 0))
        lo, hi = self._aligned(other)
        return Laurent.make(lo, [self._get(k) + other._get(k) for k in range(lo, hi + 1)])

    __radd__ = __add__

    def __neg__(self) -> "Laurent":
        return Laurent(self.val, tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Laurent | int | Fraction") -> "Laurent":
        if not isinstance(other, Laurent):
            other = Laurent.const(other, max(self.top, 0))
        return self + (-other)

    def __rsub__(self, other) -> "Laurent":
        return (-self) + other

    def _get(self, k: int) -> Fraction:
        j = k - self.val
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else Fraction(0)

    def __mul__(self, other: "Laurent | int | Fraction") -> "Laurent":
        if not isinstance(other, Laurent):
            c = Fraction(other)
            return Laurent(self.val, tuple(c * a for a in self.coeffs))
        # relative precision is limited by the shorter expansion
        n = min(len(self.coeffs), len(other.coeffs))
        out = [Fraction(0)] * n
        for i in range(n):
            a = self.coeffs[i]
            if a:
                for j in range(n - i):
                    out[i + j] += a * other.coeffs[j]
        return Laurent(self.val + other.val, tuple(out))

    __rmul__ = __mul__

    def normalized(self) -> "Laurent":
        k = 0
        while k < len(self.coeffs) - 1 and self.coeffs[k] == 0:
            k += 1
        return Laurent(self.val + k, self.coeffs[k:])

    def inverse(self) -> "Laurent":
        a = self.normalized()
        if a.coeffs[0] == 0:
            raise ZeroDivisionError("series is zero to the known order")
        n = len(a.coeffs)
        inv = [Fraction(0)] * n
        inv[0] = 1 / a.coeffs[0]
        for k in range(1, n):
            acc = sum((a.coeffs[j] * inv[k - j] for j in range(1, k + 1)), Fraction(0))
            inv[k] = -acc / a.coeffs[0]
        return Laurent(-a.val, tuple(inv))

    def __truediv__(self, other: "Laurent | int | Fraction") -> "Laurent":
        if not isinstance(other, Laurent):
            return self * (1 / Fraction(other))
        return self * other.inverse()

    def __pow__(self, p: int) -> "Laurent":
        if p < 0:
            return self.inverse() ** (-p)
        out = Laurent.const(1, len(self.coeffs) - 1)
        base = self
        while p:
            if p & 1:
                out = out * base
            base = base * base
            p >>= 1
        return out


def power_series_reversion(coeffs: Sequence[Fraction], order: int) -> list[Fraction]:
    """Compositional inverse of f(z) = z + c_2 z^2 + ... given as [0, 1, c_2, ...].

    Returns g with f(g(w)) = w up to w**order, by fixed-point iteration on the coefficients.
    """
    f = [Fraction(c) for c in coeffs] + [Fraction(0)] * (order + 1)
    if f[0] != 0 or f[1] != 1:
        raise ValueError("series must start z + ...")
    g = [Fraction(0), Fraction(1)] + [Fraction(0)] * (order - 1)
    for k in range(2, order + 1):
        # coefficient of w^k in f(g(w)) with g's k-th coefficient still zero
        comp = _compose(f[: order + 1], g, order)
        g[k] = -comp[k]
    return g


def _compose(f: Sequence[Fraction], g: Sequence[Fraction], order: int) -> list[Fraction]:
    """f(g(w)) truncated at w**order; g has zero constant term."""
    out = [Fraction(0)] * (order + 1)
    power = [Fraction(1)] + [Fraction(0)] * order
    for j, fj in enumerate(f):
        if j > 0:
            power = _mul_trunc(power, g, order)
        if fj:
            for k in range(order + 1):
                out[k] += fj * power[k]
    return out


def _mul_trunc(a: Sequence[Fraction], b: Sequence[Fraction], order: int) -> list[Fraction]:
    out = [Fraction(0)] * (order + 1)
    for i, ai in enumerate(a[: order + 1]):
        if ai:
            for j in range(order + 1 - i):
                out[i + j] += ai * b[j]
    return out


def compose(f: Sequence[Fraction], g: Sequence[Fraction], order: int) -> list[Fraction]:
    return _compose(f, g, order)
