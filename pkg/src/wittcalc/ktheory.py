"""Relative K-group calculators for truncated polynomial rings over GF(p^f).

For k a finite field of characteristic p, the Witt group over a finite
truncation set S decomposes into p-typical pieces: one factor (Z/p^m)^f for
each point u of S whose weight gcd(u) is prime to p, where m is the number
of p-power multiples of u inside S.  Everything here is bookkeeping on top
of that decomposition:

  * e1_hat / e1_full - the first page of the spectral sequence computing the
    multi-relative K-groups, before and after tensoring with the exterior
    algebra on n-1 degree-one generators;
  * khat_group       - the reduced odd K-group as a quotient of Witt vectors
    by the images of the n Verschiebung maps, in closed form (requires the
    characteristic to be prime to every truncation exponent);
  * khat_brute       - an independent oracle that materializes the Witt group
    and the Verschiebung images and recovers the quotient's invariant
    factors by exhaustive enumeration;
  * ktilde_groups    - the full odd/even K-groups assembled from khat;
  * tf_group         - the fixed-point tower groups attached to a vertex of
    the cube and a lattice point, concentrated in odd degrees.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

from ._numutil import divisors
from .errors import BudgetExceeded, DomainError
from .rings import GaloisFieldRing
from .truncation import (
    Point,
    TruncationSet,
    cardinality_formula,
    decompose,
    line_intersect,
    p_line,
    quotient,
    span_intersect_points,
    sq_set,
)
from .witt import OP_SUM, element_poly, p_typical_factors

DEFAULT_BUDGET = 3 ** 8


class HypothesisViolation(DomainError):
    """The closed form requires p coprime to every truncation exponent."""


# ---------------------------------------------------------------------------
# finite abelian groups


def _prime_power_exponent(factor: int) -> tuple[int, int]:
    if factor < 2:
        raise DomainError(f"group factor must exceed 1, got {factor}")
    p = 2
    while factor % p:
        p += 1
    m = 0
    rest = factor
    while rest % p == 0:
        rest //= p
        m += 1
    if rest != 1:
        raise DomainError(f"group factor {factor} is not a prime power")
    return p, m


@dataclass(frozen=True)
class AbelianGroup:
    """Finite abelian group as prime-power cyclic factors, sorted descending."""

    factors: tuple[int, ...]

    @staticmethod
    def from_factors(factors: Iterable[int]) -> "AbelianGroup":
        fs = tuple(sorted((int(x) for x in factors), reverse=True))
        for x in fs:
            _prime_power_exponent(x)
        return AbelianGroup(factors=fs)

    @staticmethod
    def trivial() -> "AbelianGroup":
        return AbelianGroup(factors=())

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    def direct_sum(self, *others: "AbelianGroup") -> "AbelianGroup":
        fs = list(self.factors)
        for g in others:
            fs.extend(g.factors)
        return AbelianGroup(factors=tuple(sorted(fs, reverse=True)))

    def p_log_order(self, p: int) -> int:
        """Exponent e with order = p^e; order must be a p-power."""
        e = 0
        order = self.order
        while order % p == 0:
            order //= p
            e += 1
        if order != 1:
            raise DomainError(f"group order {self.order} is not a power of {p}")
        return e

    def to_json(self) -> dict:
        return {"factors": list(self.factors)}

    def __str__(self) -> str:
        if not self.factors:
            return "0"
        return " + ".join(f"Z/{x}" for x in self.factors)


# ---------------------------------------------------------------------------
# problem data


@dataclass(frozen=True)
class ProblemSpec:
    """Finite field GF(p^f) and truncation exponents a_1..a_n (all >= 2)."""

    p: int
    f: int
    a: tuple[int, ...]

    def __post_init__(self):
        from ._numutil import is_prime

        if not is_prime(self.p):
            raise DomainError(f"p must be prime, got {self.p}")
        if self.f < 1:
            raise DomainError(f"f must be >= 1, got {self.f}")
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))
        if len(self.a) < 1:
            raise DomainError("need at least one truncation exponent")
        if any(x < 2 for x in self.a):
            raise DomainError(
                f"truncation exponents must be >= 2 (a 1 collapses the variable), got {self.a}")

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def field_order(self) -> int:
        return self.p ** self.f

    @property
    def all_axes(self) -> frozenset[int]:
        return frozenset(range(1, self.n + 1))

    def to_json(self) -> dict:
        return {"p": self.p, "f": self.f, "a": list(self.a)}


def _require_coprime(spec: ProblemSpec) -> None:
    bad = [x for x in spec.a if x % spec.p == 0]
    if bad:
        raise HypothesisViolation(
            f"characteristic {spec.p} divides truncation exponent(s) {bad}; "
            "no closed form is provided in that case")


# ---------------------------------------------------------------------------
# Witt groups over finite fields


def witt_group_over_finite_field(S: TruncationSet, p: int, f: int) -> AbelianGroup:
    """Group structure of the Witt vectors over GF(p^f) on the set S.

    Each p-typical factor of length m contributes (Z/p^m)^f."""
    factors: list[int] = []
    for _prim, _e, m in p_typical_factors(S, p):
        factors.extend([p ** m] * f)
    return AbelianGroup.from_factors(factors)


# ---------------------------------------------------------------------------
# first page of the spectral sequence


@dataclass(frozen=True)
class E1Entry:
    I: tuple[int, ...]
    exponent: int
    group: AbelianGroup


@dataclass(frozen=True)
class E1HatRow:
    """Reduced first-page row in odd degree t = 2q-1 (even rows vanish)."""

    spec: ProblemSpec
    q: int
    entries: tuple[E1Entry, ...]

    @property
    def t(self) -> int:
        return 2 * self.q - 1

    def column(self, s: int) -> tuple[E1Entry, ...]:
        return tuple(e for e in self.entries if len(e.I) == s)

    def column_group(self, s: int) -> AbelianGroup:
        return AbelianGroup.trivial().direct_sum(*(e.group for e in self.column(s)))

    def to_json(self) -> dict:
        columns = []
        for s in range(self.spec.n + 1):
            entries = self.column(s)
            exponents = [e.exponent for e in entries]
            columns.append({
                "s": s,
                "entries": [{"I": list(e.I), "exponent": e.exponent,
                             "group": e.group.to_json()} for e in entries],
                "order_log_k": sum(exponents),
                "summand_order_sum": sum(self.spec.field_order ** x
                                         for x in exponents),
            })
        return {
            "spec": self.spec.to_json(),
            "q": self.q,
            "t": self.t,
            "columns": columns,
            "note": ("the order of a direct sum is the product of the summand "
                     "orders (|k|^order_log_k); summand_order_sum lists the sum "
                     "of the summand orders for cross-checking"),
        }


def e1_hat(spec: ProblemSpec, q: int) -> E1HatRow:
    """Reduced row at t = 2q-1: one Witt group per subset I of the axes."""
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    entries = []
    for s in range(spec.n + 1):
        for I in itertools.combinations(range(1, spec.n + 1), s):
            S = sq_set(spec.a, q, I)
            exponent = cardinality_formula(spec.a, q, I)
            if exponent != len(S):
                raise RuntimeError(
                    f"cardinality formula mismatch for I={I}: {exponent} != {len(S)}")
            group = witt_group_over_finite_field(S, spec.p, spec.f)
            entries.append(E1Entry(I=I, exponent=exponent, group=group))
    return E1HatRow(spec=spec, q=q, entries=tuple(entries))


@dataclass(frozen=True)
class E1Page:
    """Assembled first page: reduced rows tensored with the exterior algebra."""

    spec: ProblemSpec
    q_max: int
    entries: tuple[tuple[tuple[int, int], AbelianGroup], ...]

    def group(self, s: int, t: int) -> AbelianGroup:
        for key, g in self.entries:
            if key == (s, t):
                return g
        return AbelianGroup.trivial()

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "q_max": self.q_max,
            "entries": [{"s": s, "t": t, "group": g.to_json()}
                        for (s, t), g in self.entries],
        }


def e1_full(spec: ProblemSpec, q_max: int) -> E1Page:
    """Entries (s, t) for t up to 2*q_max - 1 + (n-1).

    The entry at (s, t) is the direct sum over k of binom(n-1, k) copies of
    the reduced entry at (s, t-k)."""
    if q_max < 1:
        raise DomainError(f"q_max must be >= 1, got {q_max}")
    n = spec.n
    rows = {2 * q - 1: e1_hat(spec, q) for q in range(1, q_max + 1)}
    entries = []
    t_max = 2 * q_max - 1 + (n - 1)
    for t in range(1, t_max + 1):
        for s in range(n + 1):
            parts: list[AbelianGroup] = []
            for k in range(n):
                row = rows.get(t - k)
                if row is None:
                    continue
                parts.extend([row.column_group(s)] * math.comb(n - 1, k))
            group = AbelianGroup.trivial().direct_sum(*parts)
            if group.factors:
                entries.append(((s, t), group))
    return E1Page(spec=spec, q_max=q_max, entries=tuple(entries))


# ---------------------------------------------------------------------------
# closed-form reduced K-groups


def khat_order_exponent(spec: ProblemSpec, q: int) -> int:
    """Predicted log_|k| of the order: binom(n+q-1, n) * prod (a_i - 1)."""
    return math.comb(spec.n + q - 1, spec.n) * math.prod(x - 1 for x in spec.a)


def khat_group(spec: ProblemSpec, q: int) -> AbelianGroup:
    """Reduced K-group in degree 2q-1, via p-typical lines.

    One factor (Z/p^m)^f for each point s of the full truncation set with
    gcd(s) prime to p and a_i never dividing s_i, where m is the length of
    the p-power line through s."""
    _require_coprime(spec)
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    S = sq_set(spec.a, q, spec.all_axes)
    p, f = spec.p, spec.f
    factors: list[int] = []
    for s in S.points:
        if math.gcd(*s) % p == 0:
            continue
        if any(si % ai == 0 for si, ai in zip(s, spec.a)):
            continue
        m = p_line(S, s, p)
        factors.extend([p ** m] * f)
    return AbelianGroup.from_factors(factors)


def ktilde_groups(spec: ProblemSpec, degree: int) -> AbelianGroup:
    """Full relative K-group in a given degree.

    Shifts the odd-degree reduced groups by the exterior algebra on n-1
    degree-one generators: binom(n-1, k) copies of the reduced group in
    degree (degree - k)."""
    _require_coprime(spec)
    parts: list[AbelianGroup] = []
    for k in range(spec.n):
        t = degree - k
        if t >= 1 and t % 2 == 1:
            q = (t + 1) // 2
            parts.extend([khat_group(spec, q)] * math.comb(spec.n - 1, k))
    return AbelianGroup.trivial().direct_sum(*parts)


# ---------------------------------------------------------------------------
# fixed-point tower groups


@dataclass(frozen=True)
class TFGroupResult:
    group: AbelianGroup
    tset: TruncationSet
    weights: tuple[int, ...]

    def to_json(self) -> dict:
        return {"group": self.group.to_json(), "set": self.tset.to_json(),
                "weights": list(self.weights)}


def tf_group(spec: ProblemSpec, I: Iterable[int], s: Sequence[int],
             q: int) -> TFGroupResult:
    """Group in degree 2q-1 attached to vertex I and the line through s.

    Built on the intersection of the vertex truncation set with the divisors
    of s; the weights metadata records which multipliers of the primitive
    direction of s survive (these index the restriction maps down the line)."""
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    S = sq_set(spec.a, q, I)
    inter = span_intersect_points(S, s)
    weights = line_intersect(S, s, span=True)
    group = witt_group_over_finite_field(inter, spec.p, spec.f)
    return TFGroupResult(group=group, tset=inter, weights=weights)


def tf_group_in_degree(spec: ProblemSpec, I: Iterable[int], s: Sequence[int],
                       degree: int) -> TFGroupResult:
    """Degree-indexed variant; even or nonpositive degrees are trivial."""
    if degree < 1 or degree % 2 == 0:
        empty = TruncationSet(n=spec.n, points=())
        return TFGroupResult(group=AbelianGroup.trivial(), tset=empty, weights=())
    return tf_group(spec, I, s, (degree + 1) // 2)


# ---------------------------------------------------------------------------
# brute-force oracle


class _TupleWitt:
    """Compiled additive structure of W_S(GF(p^f)) on plain component tuples.

    Components are ordered by the set's point order.  Addition evaluates the
    per-line universal sum polynomials with coefficients pre-embedded in the
    field and a memoized power table; this is the oracle's only arithmetic.
    """

    def __init__(self, S: TruncationSet, ring: GaloisFieldRing):
        self.S = S
        self.ring = ring
        self.points = S.points
        index = {pt: i for i, pt in enumerate(self.points)}
        self.zero = tuple(ring.zero() for _ in self.points)
        self._pow_cache: dict[tuple[Any, int], Any] = {}
        self.lines = []
        for prim, mult in decompose(S).lines:
            per_d = []
            for d in mult:
                divs = divisors(d)
                nx = len(divs)
                poly = element_poly(d, OP_SUM)
                terms = []
                for exps, coeff in poly.terms.items():
                    payload = ring.embed_int(coeff)
                    if ring.is_zero(payload):
                        continue
                    factors = []
                    for slot, ex in enumerate(exps):
                        if ex:
                            t = divs[slot % nx]
                            pos = index[tuple(t * c for c in prim)]
                            factors.append((slot < nx, pos, ex))
                    terms.append((payload, tuple(factors)))
                target = index[tuple(d * c for c in prim)]
                per_d.append((target, tuple(terms)))
            self.lines.append(tuple(per_d))

    def _pow(self, val, e: int):
        if e == 1:
            return val
        key = (val, e)
        out = self._pow_cache.get(key)
        if out is None:
            out = self.ring.pow(val, e)
            self._pow_cache[key] = out
        return out

    def add(self, u: tuple, v: tuple) -> tuple:
        ring = self.ring
        radd, rmul = ring.add, ring.mul
        fzero = ring.zero()
        out = [fzero] * len(self.points)
        for per_d in self.lines:
            for target, terms in per_d:
                acc = fzero
                for payload, factors in terms:
                    term = payload
                    dead = False
                    for is_x, pos, ex in factors:
                        val = u[pos] if is_x else v[pos]
                        if val == fzero:
                            dead = True
                            break
                        term = rmul(term, self._pow(val, ex))
                    if not dead:
                        acc = radd(acc, term)
                out[target] = acc
        return tuple(out)

    def scalar(self, k: int, u: tuple) -> tuple:
        acc = None
        base = u
        while k:
            if k & 1:
                acc = base if acc is None else self.add(acc, base)
            k >>= 1
            if k:
                base = self.add(base, base)
        return self.zero if acc is None else acc

    def all_vectors(self) -> Iterable[tuple]:
        elems = list(self.ring.elements())
        return itertools.product(elems, repeat=len(self.points))


def _verschiebung_images(spec: ProblemSpec, S: TruncationSet,
                         ops: _TupleWitt, axis: int,
                         rng: random.Random) -> list[tuple]:
    """All images of the axis Verschiebung, with an additivity spot-check."""
    ring = ops.ring
    Q = quotient(S, axis, spec.a[axis - 1])
    sub = _TupleWitt(Q, ring)
    index = {pt: i for i, pt in enumerate(S.points)}
    lift_pos = []
    for t in Q.points:
        lifted = list(t)
        lifted[axis - 1] *= spec.a[axis - 1]
        lift_pos.append(index[tuple(lifted)])

    def lift(vec: tuple) -> tuple:
        out = [ring.zero()] * len(S.points)
        for j, val in enumerate(vec):
            out[lift_pos[j]] = val
        return tuple(out)

    elems = list(ring.elements())
    for _ in range(4):
        x = tuple(rng.choice(elems) for _ in Q.points)
        y = tuple(rng.choice(elems) for _ in Q.points)
        if lift(sub.add(x, y)) != ops.add(lift(x), lift(y)):
            raise RuntimeError(
                f"Verschiebung along axis {axis} failed the additivity check")
    return [lift(vec) for vec in sub.all_vectors()]


def _p_power_log(value: int, p: int, what: str) -> int:
    e = 0
    while value % p == 0:
        value //= p
        e += 1
    if value != 1:
        raise RuntimeError(f"{what} = {value * p**e} is not a power of {p}")
    return e


def khat_brute(spec: ProblemSpec, q: int,
               budget: int = DEFAULT_BUDGET) -> AbelianGroup:
    """Oracle for khat_group by exhaustive enumeration.

    Materializes the Witt group over the full truncation set, sums the
    Verschiebung image subgroups, and recovers the quotient's invariant
    factors from the profile of elements killed by successive powers of p.
    """
    _require_coprime(spec)
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    S = sq_set(spec.a, q, spec.all_axes)
    total = spec.field_order ** len(S)
    if total > budget:
        raise BudgetExceeded(
            f"W-group order {total} exceeds the budget {budget}")
    ring = GaloisFieldRing(spec.p, spec.f)
    ops = _TupleWitt(S, ring)
    rng = random.Random(7)

    subgroup = {ops.zero}
    for axis in range(1, spec.n + 1):
        image = _verschiebung_images(spec, S, ops, axis, rng)
        subgroup = {ops.add(h, g) for h in subgroup for g in image}

    # N_j = #{g : p^j g in H}; in the quotient, dividing by |H| gives the
    # number of elements killed by p^j, and successive ratios give the
    # invariant factors.
    p = spec.p
    mulp = {}
    depth_counts: dict[int, int] = {}
    for g in ops.all_vectors():
        t, j = g, 0
        while t not in subgroup:
            nxt = mulp.get(t)
            if nxt is None:
                nxt = ops.scalar(p, t)
                mulp[t] = nxt
            t = nxt
            j += 1
        depth_counts[j] = depth_counts.get(j, 0) + 1

    h_size = len(subgroup)
    max_depth = max(depth_counts)
    quotient_counts = []
    running = 0
    for j in range(max_depth + 1):
        running += depth_counts.get(j, 0)
        if running % h_size:
            raise RuntimeError("subgroup does not evenly divide the kill profile")
        quotient_counts.append(running // h_size)
    logs = [_p_power_log(c, p, "quotient kill count") for c in quotient_counts]
    # D_j = #factors with exponent >= j; c_j = D_j - D_{j+1}
    diffs = [logs[j] - logs[j - 1] for j in range(1, len(logs))]
    factors = []
    for j in range(1, len(diffs) + 1):
        d_j = diffs[j - 1]
        d_next = diffs[j] if j < len(diffs) else 0
        factors.extend([p ** j] * (d_j - d_next))
    return AbelianGroup.from_factors(factors)


# ---------------------------------------------------------------------------
# reporting


def khat_report(spec: ProblemSpec, q: int, with_oracle: bool = False,
                budget: int = DEFAULT_BUDGET) -> dict:
    """Result record for the reduced K-group, with self-checks."""
    group = khat_group(spec, q)
    log_k, rem = divmod(group.p_log_order(spec.p), spec.f)
    if rem:
        raise RuntimeError("group order is not a power of the field order")
    checks = {"order_formula": log_k == khat_order_exponent(spec, q)}
    out = {"spec": spec.to_json(), "q": q, "group": group.to_json(),
           "order_log_k": log_k, "checks": checks}
    if with_oracle:
        oracle = khat_brute(spec, q, budget=budget)
        out["oracle_group"] = oracle.to_json()
        checks["oracle_match"] = oracle == group
    return out
