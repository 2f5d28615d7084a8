"""Exact coefficient rings for Witt-vector arithmetic.

Five ring kinds are supported: the integers, the rationals, Z/m, GF(p^f)
presented as F_p[t]/(modulus), and multivariate polynomial rings over the
integers or rationals.  A ring handle exposes zero/one, the ring operations,
equality, and the canonical embedding of integers.  Elements are plain
immutable payloads interpreted by their handle:

    integers          -> int
    rationals         -> fractions.Fraction
    Z/m               -> int in [0, m)
    GF(p^f)           -> tuple of f residues, low degree first
    polynomial ring   -> MultiPoly with int or Fraction coefficients

All payloads are kept in canonical reduced form, so `==` on payloads is
ring-element equality and payloads are hashable.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .errors import DomainError

KIND_INTEGERS = "integers"
KIND_RATIONALS = "rationals"
KIND_INTEGERS_MOD_M = "integers_mod_m"
KIND_FINITE_FIELD = "finite_field"
KIND_POLYNOMIAL_RING = "polynomial_ring"


class RingConstructionError(DomainError):
    """A ring descriptor violates one of its invariants."""


class NonIntegralDivision(DomainError):
    """Exact division failed; carries the offending coefficient and divisor."""

    def __init__(self, coefficient, divisor):
        self.coefficient = coefficient
        self.divisor = divisor
        super().__init__(f"coefficient {coefficient} is not divisible by {divisor}")


# ---------------------------------------------------------------------------
# descriptors


@dataclass(frozen=True)
class RingDescriptor:
    """Serializable description of a coefficient ring."""

    kind: str
    m: Optional[int] = None
    p: Optional[int] = None
    f: Optional[int] = None
    modulus: Optional[tuple[int, ...]] = None
    base: Optional["RingDescriptor"] = None
    variables: Optional[tuple[str, ...]] = None

    def to_json(self) -> dict:
        if self.kind == KIND_INTEGERS_MOD_M:
            return {"kind": self.kind, "m": self.m}
        if self.kind == KIND_FINITE_FIELD:
            return {"kind": self.kind, "p": self.p, "f": self.f,
                    "modulus": list(self.modulus)}
        if self.kind == KIND_POLYNOMIAL_RING:
            return {"kind": self.kind, "base": self.base.to_json(),
                    "variables": list(self.variables)}
        return {"kind": self.kind}

    @staticmethod
    def from_json(obj: Mapping) -> "RingDescriptor":
        kind = obj.get("kind")
        if kind == KIND_INTEGERS:
            return integers()
        if kind == KIND_RATIONALS:
            return rationals()
        if kind == KIND_INTEGERS_MOD_M:
            return integers_mod(int(obj["m"]))
        if kind == KIND_FINITE_FIELD:
            modulus = obj.get("modulus")
            return finite_field(int(obj["p"]), int(obj["f"]),
                                None if modulus is None else tuple(int(c) for c in modulus))
        if kind == KIND_POLYNOMIAL_RING:
            return polynomial_ring(RingDescriptor.from_json(obj["base"]),
                                   tuple(obj["variables"]))
        raise RingConstructionError(f"unknown ring kind {kind!r}")


def integers() -> RingDescriptor:
    return RingDescriptor(kind=KIND_INTEGERS)


def rationals() -> RingDescriptor:
    return RingDescriptor(kind=KIND_RATIONALS)


def integers_mod(m: int) -> RingDescriptor:
    return RingDescriptor(kind=KIND_INTEGERS_MOD_M, m=m)


def finite_field(p: int, f: int, modulus: Optional[Sequence[int]] = None) -> RingDescriptor:
    mod = None if modulus is None else tuple(int(c) for c in modulus)
    return RingDescriptor(kind=KIND_FINITE_FIELD, p=p, f=f, modulus=mod)


def polynomial_ring(base: RingDescriptor, variables: Sequence[str]) -> RingDescriptor:
    return RingDescriptor(kind=KIND_POLYNOMIAL_RING, base=base,
                          variables=tuple(variables))


# ---------------------------------------------------------------------------
# polynomials over F_p as coefficient lists (internal, used by GF(p^f))


def _fp_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_divmod(a: Sequence[int], b: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    """Division with remainder in F_p[t]; b must have invertible lead."""
    r = [c % p for c in a]
    _fp_trim(r)
    db = len(b) - 1
    inv_lead = pow(b[-1], -1, p)
    q = [0] * max(0, len(r) - db)
    while len(r) - 1 >= db and r:
        shift = len(r) - 1 - db
        c = (r[-1] * inv_lead) % p
        q[shift] = c
        for i, bc in enumerate(b):
            r[shift + i] = (r[shift + i] - c * bc) % p
        _fp_trim(r)
    return q, r


def _fp_is_irreducible(mod: Sequence[int], p: int) -> bool:
    """Trial division by all monic polynomials of degree <= deg/2."""
    f = len(mod) - 1
    if f <= 1:
        return f == 1
    for d in range(1, f // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            g = list(tail) + [1]
            _, r = _fp_divmod(mod, g, p)
            if not r:
                return False
    return True


def default_field_modulus(p: int, f: int) -> tuple[int, ...]:
    """Lexicographically least irreducible monic polynomial of degree f.

    Candidates t^f + c_{f-1} t^{f-1} + ... + c_0 are compared by the
    coefficient word (c_{f-1}, ..., c_0).
    """
    for high_to_low in itertools.product(range(p), repeat=f):
        mod = tuple(reversed(high_to_low)) + (1,)
        if _fp_is_irreducible(mod, p):
            return mod
    raise RingConstructionError(f"no irreducible polynomial of degree {f} over F_{p}")


# ---------------------------------------------------------------------------
# sparse multivariate polynomials (payload type for polynomial rings)


class MultiPoly:
    """Immutable sparse multivariate polynomial.

    Terms map exponent tuples (one slot per variable) to nonzero int or
    Fraction coefficients.  Treat instances as frozen values.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Optional[Mapping[tuple, object]] = None):
        self.nvars = nvars
        clean = {}
        if terms:
            for exps, c in terms.items():
                if c:
                    clean[tuple(exps)] = c
        self.terms = clean

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, c) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, index: int, exp: int = 1) -> "MultiPoly":
        e = [0] * nvars
        e[index] = exp
        return cls(nvars, {tuple(e): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return (isinstance(other, MultiPoly) and self.nvars == other.nvars
                and self.terms == other.terms)

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        out = dict(self.terms)
        for exps, c in other.terms.items():
            out[exps] = out.get(exps, 0) + c
        return MultiPoly(self.nvars, out)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        out = dict(self.terms)
        for exps, c in other.terms.items():
            out[exps] = out.get(exps, 0) - c
        return MultiPoly(self.nvars, out)

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        out: dict[tuple, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                out[key] = out.get(key, 0) + c1 * c2
        return MultiPoly(self.nvars, out)

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise ValueError("negative polynomial power")
        result = MultiPoly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def scale(self, c) -> "MultiPoly":
        if not c:
            return MultiPoly.zero(self.nvars)
        return MultiPoly(self.nvars, {e: c * v for e, v in self.terms.items()})

    def map_coefficients(self, fn) -> "MultiPoly":
        return MultiPoly(self.nvars, {e: fn(c) for e, c in self.terms.items()})

    def remap_variables(self, nvars: int, index_map: Sequence[int]) -> "MultiPoly":
        """Reindex variables into a space of `nvars` slots; old slot i maps to
        index_map[i]."""
        out = {}
        for exps, c in self.terms.items():
            key = [0] * nvars
            for i, e in enumerate(exps):
                if e:
                    key[index_map[i]] += e
            out[tuple(key)] = out.get(tuple(key), 0) + c
        return MultiPoly(nvars, out)

    def sorted_terms(self) -> list[tuple[tuple, object]]:
        """Terms in graded-lexicographic order, largest first."""
        return sorted(self.terms.items(),
                      key=lambda item: (sum(item[0]), item[0]), reverse=True)

    def __repr__(self) -> str:
        return f"MultiPoly({self.nvars}, {dict(self.sorted_terms())!r})"


# ---------------------------------------------------------------------------
# ring handles


class Ring:
    """Handle providing operations on one coefficient ring.

    Handles compare equal iff their descriptors do; they hold no mutable
    state and are safe to share between threads.
    """

    descriptor: RingDescriptor

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def embed_int(self, n: int):
        raise NotImplementedError

    def pow(self, a, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = self.one()
        while k:
            if k & 1:
                result = self.mul(result, a)
            a = self.mul(a, a) if k > 1 else a
            k >>= 1
        return result

    def eq(self, a, b) -> bool:
        return a == b

    def is_zero(self, a) -> bool:
        return a == self.zero()

    def element_to_str(self, a) -> str:
        raise NotImplementedError

    def element_from_str(self, s: str):
        raise NotImplementedError

    def __eq__(self, other) -> bool:
        return isinstance(other, Ring) and self.descriptor == other.descriptor

    def __hash__(self) -> int:
        return hash(self.descriptor)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.descriptor.kind})"


class IntegerRing(Ring):
    def __init__(self):
        self.descriptor = integers()

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def embed_int(self, n):
        return n

    def pow(self, a, k):
        return a ** k

    def element_to_str(self, a):
        return str(a)

    def element_from_str(self, s):
        return int(s)


class RationalRing(Ring):
    def __init__(self):
        self.descriptor = rationals()

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def embed_int(self, n):
        return Fraction(n)

    def pow(self, a, k):
        return a ** k

    def element_to_str(self, a):
        return str(a)

    def element_from_str(self, s):
        return Fraction(s)


class IntegerModRing(Ring):
    def __init__(self, m: int):
        if m < 2:
            raise RingConstructionError(f"modulus must be >= 2, got {m}")
        self.m = m
        self.descriptor = integers_mod(m)

    def zero(self):
        return 0

    def one(self):
        return 1 % self.m

    def add(self, a, b):
        return (a + b) % self.m

    def neg(self, a):
        return (-a) % self.m

    def mul(self, a, b):
        return (a * b) % self.m

    def embed_int(self, n):
        return n % self.m

    def pow(self, a, k):
        return pow(a, k, self.m)

    def invert_int(self, n: int):
        try:
            return pow(n % self.m, -1, self.m)
        except ValueError:
            raise DomainError(f"{n} is not invertible mod {self.m}") from None

    def element_to_str(self, a):
        return str(a)

    def element_from_str(self, s):
        return int(s) % self.m


class GaloisFieldRing(Ring):
    """GF(p^f) as F_p[t]/(modulus); elements are f-tuples of residues."""

    def __init__(self, p: int, f: int, modulus: Optional[tuple[int, ...]] = None):
        from ._numutil import is_prime

        if not is_prime(p):
            raise RingConstructionError(f"field characteristic {p} is not prime")
        if f < 1:
            raise RingConstructionError(f"extension degree must be >= 1, got {f}")
        if modulus is None:
            modulus = default_field_modulus(p, f)
        else:
            modulus = tuple(c % p for c in modulus)
            if len(modulus) != f + 1 or modulus[-1] != 1:
                raise RingConstructionError(
                    f"modulus must be monic of degree {f}, got {list(modulus)}")
            if not _fp_is_irreducible(modulus, p):
                raise RingConstructionError(
                    f"modulus {list(modulus)} is reducible over F_{p}")
        self.p = p
        self.f = f
        self.modulus = modulus
        self.descriptor = finite_field(p, f, modulus)
        self._zero = (0,) * f
        one = [0] * f
        one[0] = 1 % p
        self._one = tuple(one)

    @property
    def order(self) -> int:
        return self.p ** self.f

    def zero(self):
        return self._zero

    def one(self):
        return self._one

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def mul(self, a, b):
        p, f = self.p, self.f
        if f == 1:
            return ((a[0] * b[0]) % p,)
        prod = [0] * (2 * f - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        mod = self.modulus
        for i in range(2 * f - 2, f - 1, -1):
            c = prod[i] % p
            if c:
                for j in range(f + 1):
                    prod[i - f + j] -= c * mod[j]
        return tuple(c % p for c in prod[:f])

    def embed_int(self, n):
        out = [0] * self.f
        out[0] = n % self.p
        return tuple(out)

    def invert(self, a):
        """Multiplicative inverse via extended Euclid in F_p[t]."""
        p = self.p
        r0, r1 = list(self.modulus), _fp_trim([c for c in a])
        if not r1:
            raise DomainError("zero is not invertible")
        s0, s1 = [], [1]
        while r1:
            q, r = _fp_divmod(r0, r1, p)
            s = [c % p for c in s0]
            s += [0] * (len(q) + len(s1) - 1 - len(s))
            for i, qc in enumerate(q):
                if qc:
                    for j, sc in enumerate(s1):
                        s[i + j] = (s[i + j] - qc * sc) % p
            r0, r1, s0, s1 = r1, r, s1, _fp_trim(s)
        inv_lead = pow(r0[-1], -1, p) if len(r0) == 1 else None
        if inv_lead is None:
            raise DomainError("element is not invertible (gcd has positive degree)")
        out = [(c * inv_lead) % p for c in s0]
        out += [0] * (self.f - len(out))
        return tuple(out[: self.f])

    def invert_int(self, n: int):
        return self.invert(self.embed_int(n))

    def elements(self) -> Iterable[tuple[int, ...]]:
        """All field elements, in lexicographic payload order."""
        for combo in itertools.product(range(self.p), repeat=self.f):
            yield combo

    def element_to_str(self, a):
        return ",".join(str(c) for c in a)

    def element_from_str(self, s):
        parts = [int(c) % self.p for c in s.split(",")] if s else []
        if len(parts) > self.f:
            raise DomainError(f"too many coefficients for GF({self.p}^{self.f})")
        parts += [0] * (self.f - len(parts))
        return tuple(parts)


class PolynomialRingHandle(Ring):
    """Multivariate polynomials over the integers or the rationals."""

    def __init__(self, base: RingDescriptor, variables: Sequence[str]):
        if base.kind not in (KIND_INTEGERS, KIND_RATIONALS):
            raise RingConstructionError(
                "polynomial base ring must be the integers or the rationals")
        variables = tuple(variables)
        if not variables or len(set(variables)) != len(variables):
            raise RingConstructionError("variables must be nonempty and distinct")
        for v in variables:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", v):
                raise RingConstructionError(f"bad variable name {v!r}")
        self.base = base
        self.variables = variables
        self.nvars = len(variables)
        self.rational = base.kind == KIND_RATIONALS
        self.descriptor = polynomial_ring(base, variables)

    def zero(self):
        return MultiPoly.zero(self.nvars)

    def one(self):
        return MultiPoly.constant(self.nvars, self._coeff(1))

    def _coeff(self, n: int):
        return Fraction(n) if self.rational else n

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def pow(self, a, k):
        return a ** k

    def embed_int(self, n):
        return MultiPoly.constant(self.nvars, self._coeff(n))

    def variable(self, name: str) -> MultiPoly:
        return MultiPoly.variable(self.nvars, self.variables.index(name))

    def element_to_str(self, a: MultiPoly) -> str:
        if a.is_zero():
            return "0"
        parts = []
        for exps, c in a.sorted_terms():
            factors = []
            for name, e in zip(self.variables, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = str(mag) + "*" + "*".join(factors)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def element_from_str(self, s: str) -> MultiPoly:
        s = s.replace(" ", "")
        if not s or s == "0":
            return self.zero()
        out = self.zero()
        for tok in re.findall(r"[+-]?[^+-]+", s):
            out = out + self._parse_term(tok)
        return out

    def _parse_term(self, tok: str) -> MultiPoly:
        sign = 1
        if tok.startswith("-"):
            sign, tok = -1, tok[1:]
        elif tok.startswith("+"):
            tok = tok[1:]
        coeff = self._coeff(sign)
        exps = [0] * self.nvars
        for factor in tok.split("*"):
            if not factor:
                raise DomainError(f"empty factor in term {tok!r}")
            if re.fullmatch(r"\d+(/\d+)?", factor):
                c = Fraction(factor) if "/" in factor else int(factor)
                coeff = coeff * (Fraction(c) if self.rational else c)
                continue
            m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)(?:\^(\d+))?", factor)
            if not m or m.group(1) not in self.variables:
                raise DomainError(f"unknown factor {factor!r} in polynomial")
            exps[self.variables.index(m.group(1))] += int(m.group(2) or 1)
        return MultiPoly(self.nvars, {tuple(exps): coeff})


def ring_make(spec: RingDescriptor) -> Ring:
    """Build a ring handle from a descriptor, validating its invariants."""
    kind = spec.kind
    if kind == KIND_INTEGERS:
        return IntegerRing()
    if kind == KIND_RATIONALS:
        return RationalRing()
    if kind == KIND_INTEGERS_MOD_M:
        return IntegerModRing(spec.m)
    if kind == KIND_FINITE_FIELD:
        return GaloisFieldRing(spec.p, spec.f, spec.modulus)
    if kind == KIND_POLYNOMIAL_RING:
        return PolynomialRingHandle(spec.base, spec.variables)
    raise RingConstructionError(f"unknown ring kind {kind!r}")


def is_torsion_free(ring: Ring) -> bool:
    """True for the integers, the rationals, and polynomial rings over them."""
    return ring.descriptor.kind in (KIND_INTEGERS, KIND_RATIONALS,
                                    KIND_POLYNOMIAL_RING)


def zp_algebra_prime(ring: Ring) -> Optional[int]:
    """The prime p if the ring is Z/(p^k) or GF(p^f), else None."""
    desc = ring.descriptor
    if desc.kind == KIND_FINITE_FIELD:
        return desc.p
    if desc.kind == KIND_INTEGERS_MOD_M:
        m = desc.m
        p = 2
        while p * p <= m:
            if m % p == 0:
                break
            p += 1
        else:
            p = m
        while m % p == 0:
            m //= p
        return p if m == 1 else None
    return None


def div_exact(ring: Ring, a, n: int):
    """Divide a by the integer n, requiring the result to stay in the ring.

    Supported over the integers, the rationals, and polynomial rings over
    them; raises NonIntegralDivision when a coefficient is not divisible.
    """
    if n == 0:
        raise ZeroDivisionError("division by zero")
    kind = ring.descriptor.kind
    if kind == KIND_INTEGERS:
        q, r = divmod(a, n)
        if r:
            raise NonIntegralDivision(a, n)
        return q
    if kind == KIND_RATIONALS:
        return a / n
    if kind == KIND_POLYNOMIAL_RING:
        if ring.rational:
            return a.scale(Fraction(1, n))
        out = {}
        for exps, c in a.terms.items():
            q, r = divmod(c, n)
            if r:
                raise NonIntegralDivision(c, n)
            out[exps] = q
        return MultiPoly(a.nvars, out)
    raise DomainError(f"exact integer division is not defined over {kind}")
