"""Rational ranks of the relative K-groups over the integers.

The ranks are encoded as Poincare series with exact integer coefficients,
materialized up to a cutoff degree.  Two routes are provided for each series:
a direct expansion of the closed form, and an oracle that counts lattice
points s in N^n by the statistic sum_i floor((s_i - 1) / c_i), which is the
complex dimension of the representation attached to s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DomainError
from .truncation import normalize_axes


@dataclass(frozen=True)
class PoincareSeries:
    """Integer coefficients of a power series in t, degrees 0..deg_max."""

    deg_max: int
    coefficients: tuple[int, ...]

    @staticmethod
    def from_dict(deg_max: int, coeffs: dict[int, int]) -> "PoincareSeries":
        out = [0] * (deg_max + 1)
        for d, c in coeffs.items():
            if 0 <= d <= deg_max:
                out[d] = c
        return PoincareSeries(deg_max=deg_max, coefficients=tuple(out))

    def coefficient(self, degree: int) -> int:
        if not 0 <= degree <= self.deg_max:
            raise DomainError(f"degree {degree} outside 0..{self.deg_max}")
        return self.coefficients[degree]

    def pairs(self) -> list[tuple[int, int]]:
        return [(d, c) for d, c in enumerate(self.coefficients)]

    def to_json(self) -> dict:
        return {"deg_max": self.deg_max,
                "coefficients": [[d, c] for d, c in self.pairs()]}


def _validate(a: Sequence[int], deg_max: int) -> tuple[int, ...]:
    a = tuple(int(x) for x in a)
    if not a or any(x < 1 for x in a):
        raise DomainError(f"truncation exponents must be positive, got {a}")
    if deg_max < 1:
        raise DomainError(f"cutoff degree must be >= 1, got {deg_max}")
    return a


def k_rational_series(a: Sequence[int], deg_max: int) -> PoincareSeries:
    """Poincare series of the rationalized relative K-groups over Z:

        sum_{j>=1} t^(2j-1) (1+t)^(n-1) binom(n+j-2, n-1) prod_i (a_i - 1).
    """
    a = _validate(a, deg_max)
    n = len(a)
    scale = math.prod(x - 1 for x in a)
    out = [0] * (deg_max + 1)
    j = 1
    while 2 * j - 1 <= deg_max:
        c = math.comb(n + j - 2, n - 1) * scale
        for k in range(n):
            d = 2 * j - 1 + k
            if d <= deg_max:
                out[d] += c * math.comb(n - 1, k)
        j += 1
    return PoincareSeries(deg_max=deg_max, coefficients=tuple(out))


def tc_vertex_series(a: Sequence[int], I: Iterable[int],
                     deg_max: int) -> PoincareSeries:
    """Rank series attached to the vertex I of the cube:

        sum_{j>=1} t^(2j-1) binom(n+j-2, n-1) prod_{i in I} a_i.
    """
    a = _validate(a, deg_max)
    n = len(a)
    axes = normalize_axes(I, n)
    scale = math.prod(a[i - 1] for i in axes)
    out = [0] * (deg_max + 1)
    j = 1
    while 2 * j - 1 <= deg_max:
        out[2 * j - 1] = math.comb(n + j - 2, n - 1) * scale
        j += 1
    return PoincareSeries(deg_max=deg_max, coefficients=tuple(out))


def _count_by_dimension(c: Sequence[int], j_max: int,
                        skip_multiples_of: Sequence[int] | None = None) -> list[int]:
    """counts[b] = #{s in N^n : sum_i floor((s_i - 1)/c_i) = b} for b < j_max,
    optionally dropping points with some s_i divisible by the given moduli."""
    n = len(c)
    counts = [0] * j_max

    def rec(i: int, used: int) -> None:
        if i == n:
            counts[used] += 1
            return
        ci = c[i]
        for b in range(j_max - used):
            lo = b * ci + 1
            for si in range(lo, lo + ci):
                if skip_multiples_of and si % skip_multiples_of[i] == 0:
                    continue
                rec(i + 1, used + b)

    rec(0, 0)
    return counts


def tc_vertex_series_oracle(a: Sequence[int], I: Iterable[int],
                            deg_max: int) -> PoincareSeries:
    """Enumeration oracle for tc_vertex_series.

    Puts a unit in degree 2j-1 for every lattice point s whose dimension
    statistic equals j-1, with c_i = a_i exactly when i is in I."""
    a = _validate(a, deg_max)
    n = len(a)
    axes = normalize_axes(I, n)
    c = [a[i] if (i + 1) in axes else 1 for i in range(n)]
    j_max = (deg_max + 1) // 2
    counts = _count_by_dimension(c, j_max)
    out = [0] * (deg_max + 1)
    for b, cnt in enumerate(counts):
        out[2 * b + 1] = cnt
    return PoincareSeries(deg_max=deg_max, coefficients=tuple(out))


def k_rational_series_oracle(a: Sequence[int], deg_max: int) -> PoincareSeries:
    """Enumeration oracle for k_rational_series.

    Counts lattice points with c_i = a_i and s_i never divisible by a_i,
    then multiplies the resulting odd series by (1+t)^(n-1) exactly."""
    a = _validate(a, deg_max)
    n = len(a)
    if any(x == 1 for x in a):
        return PoincareSeries(deg_max=deg_max,
                              coefficients=(0,) * (deg_max + 1))
    j_max = (deg_max + 1) // 2
    counts = _count_by_dimension(a, j_max, skip_multiples_of=a)
    out = [0] * (deg_max + 1)
    for b, cnt in enumerate(counts):
        base = 2 * b + 1
        for k in range(n):
            if base + k <= deg_max:
                out[base + k] += cnt * math.comb(n - 1, k)
    return PoincareSeries(deg_max=deg_max, coefficients=tuple(out))
