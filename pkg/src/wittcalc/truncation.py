"""Finite division-closed subsets of N^n and their line decompositions.

A point u divides a point s when d*u = s componentwise for some integer
d >= 1 (the weight).  A truncation set is a finite set of points closed
under taking divisors.  Every such set splits into "lines": for each
primitive direction (gcd of coordinates 1), the set of weights d with
d*s in the set is an ordinary divisor-closed subset of N, and all of the
one-dimensional Witt theory applies line by line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence

from ._numutil import divisors
from .errors import DomainError

Point = tuple[int, ...]


def _as_point(coords: Sequence[int]) -> Point:
    pt = tuple(int(c) for c in coords)
    if not pt or any(c < 1 for c in pt):
        raise DomainError(f"point coordinates must be positive integers, got {pt}")
    return pt


@dataclass(frozen=True)
class TruncationSet:
    """A finite division-closed subset of N^n, points sorted lexicographically."""

    n: int
    points: tuple[Point, ...]

    @staticmethod
    def from_points(points: Iterable[Sequence[int]], n: Optional[int] = None,
                    validate: bool = True) -> "TruncationSet":
        pts = sorted({_as_point(p) for p in points})
        if pts:
            dims = {len(p) for p in pts}
            if len(dims) != 1:
                raise DomainError(f"mixed point dimensions {sorted(dims)}")
            dim = dims.pop()
            if n is not None and n != dim:
                raise DomainError(f"declared dimension {n} != point dimension {dim}")
            n = dim
        elif n is None:
            raise DomainError("empty set needs an explicit dimension")
        ts = TruncationSet(n=n, points=tuple(pts))
        if validate:
            ts.validate()
        return ts

    def validate(self) -> None:
        members = set(self.points)
        for s in self.points:
            g = math.gcd(*s)
            for d in divisors(g):
                if d > 1 and tuple(c // d for c in s) not in members:
                    raise DomainError(
                        f"set is not division-closed: {s} present but {s}/{d} missing")

    def __contains__(self, point: Sequence[int]) -> bool:
        return tuple(point) in self._member_set()

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def _member_set(self) -> frozenset:
        return _member_set(self)

    def is_subset(self, other: "TruncationSet") -> bool:
        return self.n == other.n and set(self.points) <= other._member_set()

    def to_json(self) -> dict:
        return {"n": self.n, "points": [list(p) for p in self.points]}

    @staticmethod
    def from_json(obj) -> "TruncationSet":
        return TruncationSet.from_points(obj["points"], n=int(obj["n"]))


@lru_cache(maxsize=None)
def _member_set(ts: TruncationSet) -> frozenset:
    return frozenset(ts.points)


@dataclass(frozen=True)
class OrbitDecomposition:
    """Splitting of a truncation set into lines of multiples of primitive points.

    `lines` pairs each primitive point with the sorted divisor-closed set of
    weights d such that d*point belongs to the set.
    """

    n: int
    lines: tuple[tuple[Point, tuple[int, ...]], ...]

    def multipliers(self, primitive: Point) -> tuple[int, ...]:
        for prim, mult in self.lines:
            if prim == primitive:
                return mult
        return ()

    def reassemble(self) -> TruncationSet:
        pts = []
        for prim, mult in self.lines:
            for d in mult:
                pts.append(tuple(d * c for c in prim))
        return TruncationSet.from_points(pts, n=self.n)


def divides(u: Sequence[int], s: Sequence[int]) -> Optional[int]:
    """The weight d with d*u = s componentwise, or None if u does not divide s."""
    u, s = _as_point(u), _as_point(s)
    if len(u) != len(s):
        raise DomainError(f"dimension mismatch: {len(u)} vs {len(s)}")
    d, r = divmod(s[0], u[0])
    if r:
        return None
    for uc, sc in zip(u[1:], s[1:]):
        if uc * d != sc:
            return None
    return d


def point_divisors(s: Sequence[int]) -> list[Point]:
    """All points dividing s, i.e. s/d for each divisor d of gcd(s)."""
    s = _as_point(s)
    g = math.gcd(*s)
    return [tuple(c // d for c in s) for d in divisors(g)]


def closure(generators: Iterable[Sequence[int]]) -> TruncationSet:
    """Smallest division-closed set containing the generators."""
    pts = set()
    for gen in generators:
        pts.update(point_divisors(gen))
    if not pts:
        raise DomainError("closure needs at least one generator")
    return TruncationSet.from_points(pts, validate=False)


def normalize_axes(I: Iterable[int], n: int) -> frozenset[int]:
    axes = frozenset(int(i) for i in I)
    for i in axes:
        if not 1 <= i <= n:
            raise DomainError(f"axis {i} out of range 1..{n}")
    return axes


def sq_set(a: Sequence[int], q: int, I: Iterable[int]) -> TruncationSet:
    """The finite truncation set of points s with
    sum_i floor((s_i - 1) / c_i) <= q - 1, where c_i = a_i for i in I and 1
    otherwise."""
    a = tuple(int(x) for x in a)
    n = len(a)
    if n < 1 or any(x < 1 for x in a):
        raise DomainError(f"exponent tuple must have positive entries, got {a}")
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    axes = normalize_axes(I, n)
    c = [a[i] if (i + 1) in axes else 1 for i in range(n)]
    pts: list[Point] = []
    prefix = [0] * n

    def rec(i: int, budget: int) -> None:
        if i == n:
            pts.append(tuple(prefix))
            return
        ci = c[i]
        for b in range(budget + 1):
            lo = b * ci + 1
            for s in range(lo, lo + ci):
                prefix[i] = s
                rec(i + 1, budget - b)

    rec(0, q - 1)
    return TruncationSet(n=n, points=tuple(sorted(pts)))


def cardinality_formula(a: Sequence[int], q: int, I: Iterable[int]) -> int:
    """Closed form binom(n+q-1, n) * prod_{i in I} a_i for the size of sq_set."""
    a = tuple(int(x) for x in a)
    n = len(a)
    axes = normalize_axes(I, n)
    out = math.comb(n + q - 1, n)
    for i in axes:
        out *= a[i - 1]
    return out


@lru_cache(maxsize=None)
def decompose(S: TruncationSet) -> OrbitDecomposition:
    """Group the points of S by primitive direction.

    Each point s lies on the line through s/gcd(s) with weight gcd(s)."""
    lines: dict[Point, list[int]] = {}
    for s in S.points:
        g = math.gcd(*s)
        prim = tuple(c // g for c in s)
        lines.setdefault(prim, []).append(g)
    packed = tuple((prim, tuple(sorted(mult)))
                   for prim, mult in sorted(lines.items()))
    return OrbitDecomposition(n=S.n, lines=packed)


def quotient(S: TruncationSet, i: int, r: int) -> TruncationSet:
    """The truncation set {t : (t_1, ..., r*t_i, ..., t_n) in S}; axis i is 1-based."""
    if not 1 <= i <= S.n:
        raise DomainError(f"axis {i} out of range 1..{S.n}")
    if r < 1:
        raise DomainError(f"scale factor must be >= 1, got {r}")
    if r == 1:
        return S
    pts = []
    for s in S.points:
        if s[i - 1] % r == 0:
            t = list(s)
            t[i - 1] //= r
            pts.append(tuple(t))
    return TruncationSet(n=S.n, points=tuple(sorted(pts)))


def line_intersect(S: TruncationSet, s: Sequence[int], span: bool = False) -> tuple[int, ...]:
    """One-dimensional truncation set cut out by the line through s.

    Default: the multiples variant {d : d*s in S}.  With span=True: the
    divisors of s lying in S, reported by their multiplier e relative to the
    primitive direction s/gcd(s) (so the result is always divisor-closed).
    When s itself lies in S the span variant equals all divisors of gcd(s).
    """
    s = _as_point(s)
    if len(s) != S.n:
        raise DomainError(f"dimension mismatch: {len(s)} vs {S.n}")
    members = S._member_set()
    if span:
        g = math.gcd(*s)
        prim = tuple(c // g for c in s)
        return tuple(e for e in divisors(g)
                     if tuple(e * c for c in prim) in members)
    bound = max((max(pt) for pt in S.points), default=0)
    return tuple(d for d in range(1, bound + 1)
                 if tuple(d * c for c in s) in members)


def span_intersect_points(S: TruncationSet, s: Sequence[int]) -> TruncationSet:
    """The truncation set of divisors of s that lie in S."""
    pts = [u for u in point_divisors(s) if u in S._member_set()]
    return TruncationSet.from_points(pts, n=S.n, validate=False) if pts \
        else TruncationSet(n=S.n, points=())


def p_line(S: TruncationSet, s: Sequence[int], p: int) -> int:
    """Length m of {p^j * s : j >= 0} inside S; zero when s is not in S."""
    s = _as_point(s)
    members = S._member_set()
    m = 0
    current = s
    while current in members:
        m += 1
        current = tuple(p * c for c in current)
    return m
