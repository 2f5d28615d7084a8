"""Unimodular integer-matrix factorizations from the Euclidean algorithm.

Given positive integers s1, s2 and a scale a, write g = gcd(s1, s2) and
factor a = d*e where e*g = gcd(s1, a*s2).  There are matrices A, B, B', C in
GL_2(Z) with

    A (s1, s2)^T   = (g, 0)^T
    B (s1, e*s2)^T = B' (s1, e*s2)^T = (e*g, 0)^T
    C (s1, a*s2)^T = (e*g, 0)^T
    diag(e, 1) A   = B diag(1, e)
    diag(1, d) B'  = C diag(1, d)

and this module constructs one canonical choice and re-verifies every
identity before returning.  A companion routine reduces a longer tuple to
(gcd, 0, ..., 0) by a single unimodular matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError


class InternalVerificationFailure(RuntimeError):
    """A constructed factorization failed its own identity checks."""


Matrix = tuple[tuple[int, ...], ...]


def _det(m: Matrix) -> int:
    """Exact integer determinant by fraction-free Gaussian elimination."""
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[-1][-1]


def _mat_mul(x: Matrix, y: Matrix) -> Matrix:
    return tuple(tuple(sum(x[i][k] * y[k][j] for k in range(len(y)))
                       for j in range(len(y[0]))) for i in range(len(x)))


def _mat_vec(m: Matrix, v: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(row[k] * v[k] for k in range(len(v))) for row in m)


@dataclass(frozen=True)
class UnimodularMatrix:
    """Square integer matrix with determinant +1 or -1."""

    entries: Matrix

    def __post_init__(self):
        n = len(self.entries)
        if n == 0 or any(len(row) != n for row in self.entries):
            raise DomainError("matrix must be square and nonempty")
        object.__setattr__(self, "entries",
                           tuple(tuple(int(x) for x in row) for row in self.entries))
        if self.det not in (1, -1):
            raise DomainError(f"matrix determinant {self.det} is not +-1")

    @property
    def det(self) -> int:
        return _det(self.entries)

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        return _mat_vec(self.entries, v)

    def to_json(self) -> list:
        return [list(row) for row in self.entries]


def _minimal_bezout(u: int, v: int) -> tuple[int, int, int]:
    """(g, x, y) with x*u + y*v = g = gcd(u, v) and |x| minimal.

    Ties (possible when (v/g) is even) resolve to the positive x, so the
    output is canonical."""
    g = math.gcd(u, v)
    x0, x1 = 1, 0
    r0, r1 = u, v
    while r1:
        qq = r0 // r1
        x0, x1 = x1, x0 - qq * x1
        r0, r1 = r1, r0 - qq * r1
    m = v // g
    x = x0 % m
    if x > m - x:
        x -= m
    y = (g - x * u) // v
    return g, x, y


def _euclid_matrix(u: int, v: int) -> tuple[int, Matrix]:
    """Canonical E in GL_2(Z), det +1, with E (u, v)^T = (gcd(u, v), 0)^T."""
    g, x, y = _minimal_bezout(u, v)
    return g, ((x, y), (-(v // g), u // g))


@dataclass(frozen=True)
class EuclidFactorization:
    s1: int
    s2: int
    a: int
    g: int
    e: int
    d: int
    A: UnimodularMatrix
    B: UnimodularMatrix
    Bp: UnimodularMatrix
    C: UnimodularMatrix

    def to_json(self) -> dict:
        return {"s1": self.s1, "s2": self.s2, "a": self.a,
                "g": self.g, "e": self.e, "d": self.d,
                "A": self.A.to_json(), "B": self.B.to_json(),
                "Bp": self.Bp.to_json(), "C": self.C.to_json(),
                "verified": True}


def _verify(fact: EuclidFactorization) -> None:
    s1, s2, a, g, e, d = (fact.s1, fact.s2, fact.a, fact.g, fact.e, fact.d)
    checks = [
        (fact.A.apply((s1, s2)) == (g, 0), "A (s1,s2) = (g,0)"),
        (fact.B.apply((s1, e * s2)) == (e * g, 0), "B (s1,e s2) = (eg,0)"),
        (fact.Bp.apply((s1, e * s2)) == (e * g, 0), "B' (s1,e s2) = (eg,0)"),
        (fact.C.apply((s1, a * s2)) == (e * g, 0), "C (s1,a s2) = (eg,0)"),
        (_mat_mul(((e, 0), (0, 1)), fact.A.entries)
         == _mat_mul(fact.B.entries, ((1, 0), (0, e))),
         "diag(e,1) A = B diag(1,e)"),
        (_mat_mul(((1, 0), (0, d)), fact.Bp.entries)
         == _mat_mul(fact.C.entries, ((1, 0), (0, d))),
         "diag(1,d) B' = C diag(1,d)"),
        (e * g == math.gcd(s1, a * s2), "e g = gcd(s1, a s2)"),
        (d * e == a, "a = d e"),
    ]
    failed = [name for ok, name in checks if not ok]
    if failed:
        raise InternalVerificationFailure(
            f"factorization of ({s1}, {s2}, {a}) failed: {', '.join(failed)}")


def euclid_factorize(s1: int, s2: int, a: int) -> EuclidFactorization:
    """Construct and verify the canonical factorization for (s1, s2, a).

    A and C come from the extended Euclidean algorithm with minimal Bezout
    coefficients; B is forced by diag(e,1) A = B diag(1,e), which is integral
    because e = gcd(s1/g, a) divides s1/g, and B' is forced symmetrically
    from C."""
    if s1 < 1 or s2 < 1 or a < 1:
        raise DomainError("s1, s2, a must be positive integers")
    g, A_ = _euclid_matrix(s1, s2)
    eg = math.gcd(s1, a * s2)
    e = eg // g
    d = a // e
    # B = diag(e,1) A diag(1,e)^{-1}: scale row 1 by e, divide column 2 by e
    (ax, ay), (au, av) = A_
    if av % e:
        raise InternalVerificationFailure(
            f"second row of A not divisible by e = {e}")
    B_ = ((e * ax, ay), (au, av // e))
    _, C_ = _euclid_matrix(s1, a * s2)
    # B' = diag(1,d)^{-1} C diag(1,d): scale column 2 by d, divide row 2 by d
    (cx, cy), (cu, cv) = C_
    if cu % d:
        raise InternalVerificationFailure(
            f"second row of C not divisible by d = {d}")
    Bp_ = ((cx, d * cy), (cu // d, cv))
    fact = EuclidFactorization(
        s1=s1, s2=s2, a=a, g=g, e=e, d=d,
        A=UnimodularMatrix(A_), B=UnimodularMatrix(B_),
        Bp=UnimodularMatrix(Bp_), C=UnimodularMatrix(C_))
    _verify(fact)
    return fact


def torus_reduce(s: Sequence[int]) -> tuple[int, UnimodularMatrix]:
    """A single unimodular M with M s^T = (gcd(s), 0, ..., 0)^T.

    Folds the coordinates into the first slot by iterated 2x2 Euclid blocks;
    every block has determinant +1, so det M = +1."""
    s = tuple(int(x) for x in s)
    if not s or any(x < 1 for x in s):
        raise DomainError("tuple entries must be positive integers")
    m = len(s)
    rows = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    v = list(s)
    for k in range(1, m):
        g, x, y = _minimal_bezout(v[0], v[k])
        r0 = [x * rows[0][j] + y * rows[k][j] for j in range(m)]
        rk = [-(v[k] // g) * rows[0][j] + (v[0] // g) * rows[k][j]
              for j in range(m)]
        rows[0], rows[k] = r0, rk
        v[0], v[k] = g, 0
    M = UnimodularMatrix(tuple(tuple(row) for row in rows))
    if M.apply(s) != (v[0],) + (0,) * (m - 1):
        raise InternalVerificationFailure("torus reduction failed to verify")
    return v[0], M
