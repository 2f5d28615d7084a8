"""Witt vectors on truncation sets in N^n.

A Witt vector over a set S assigns a coefficient-ring element to each point
of S (sparsely; missing points are zero).  The ghost map sends a vector x to

    w_s = sum over factorizations d*u = s of gcd(u) * (x_u)^d,

and there is exactly one functorial ring structure on these vectors making
the ghost map a ring homomorphism.  We realize that structure constructively:
addition, multiplication, negation, and Frobenius are given by universal
integer polynomials, one per element d of a one-dimensional truncation set,
obtained by inverting the ghost map over a rational polynomial ring and
certifying that all coefficients are integers.  Multidimensional sets reduce
to one-dimensional lines through their primitive points, so the same tables
drive every coefficient ring and every dimension.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import tempfile
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Optional, Sequence

from ._numutil import divisors, split_p_part
from .errors import DomainError
from .rings import (
    MultiPoly,
    PolynomialRingHandle,
    Ring,
    RingDescriptor,
    div_exact,
    is_torsion_free,
    rationals,
    ring_make,
    zp_algebra_prime,
)
from .truncation import Point, TruncationSet, decompose, quotient

OP_SUM = "sum"
OP_PRODUCT = "product"
OP_NEGATION = "negation"
OP_FROBENIUS = "frobenius"

_BINARY_OPS = (OP_SUM, OP_PRODUCT)
_ALL_OPS = (OP_SUM, OP_PRODUCT, OP_NEGATION, OP_FROBENIUS)


class IntegralityCertificationError(RuntimeError):
    """A universal polynomial came out non-integral; indicates a bug."""


# ---------------------------------------------------------------------------
# vectors


@dataclass(frozen=True)
class WittVector:
    """Element of the Witt ring over a truncation set.

    `components` is a sorted tuple of (point, payload) pairs with all zero
    payloads stripped, so equality and hashing are structural.
    """

    tset: TruncationSet
    ring: Ring
    components: tuple[tuple[Point, Any], ...]

    def as_dict(self) -> dict[Point, Any]:
        return dict(self.components)

    def component(self, point: Sequence[int]):
        pt = tuple(point)
        for p, v in self.components:
            if p == pt:
                return v
        if pt not in self.tset:
            raise DomainError(f"{pt} is not a point of the underlying set")
        return self.ring.zero()

    def is_zero(self) -> bool:
        return not self.components


def witt_vector(tset: TruncationSet, ring: Ring,
                components: Mapping[Sequence[int], Any]) -> WittVector:
    members = set(tset.points)
    comp = {}
    for pt, val in components.items():
        pt = tuple(pt)
        if pt not in members:
            raise DomainError(f"component key {pt} is not in the truncation set")
        if not ring.is_zero(val):
            comp[pt] = val
    return WittVector(tset, ring, tuple(sorted(comp.items())))


def witt_zero(tset: TruncationSet, ring: Ring) -> WittVector:
    return WittVector(tset, ring, ())


def witt_one(tset: TruncationSet, ring: Ring) -> WittVector:
    """The multiplicative unit: 1 at every primitive point, 0 elsewhere."""
    one = ring.one()
    return witt_vector(tset, ring,
                       {prim: one for prim, _ in decompose(tset).lines})


# ---------------------------------------------------------------------------
# ghost coordinates


def ghost(x: WittVector) -> dict[Point, Any]:
    """All ghost components of x, computed in the coefficient ring."""
    ring = x.ring
    comp = x.as_dict()
    out = {}
    for s in x.tset.points:
        g = math.gcd(*s)
        acc = ring.zero()
        for d in divisors(g):
            u = tuple(c // d for c in s)
            xu = comp.get(u)
            if xu is None:
                continue
            term = ring.mul(ring.embed_int(g // d), ring.pow(xu, d))
            acc = ring.add(acc, term)
        out[s] = acc
    return out


def ghost_inverse(w: Mapping[Sequence[int], Any], tset: TruncationSet,
                  ring: Ring) -> WittVector:
    """The unique vector x with ghost(x) = w, over a torsion-free ring.

    Solves line by line: along the line through a primitive point, the ghost
    component at weight d is d*x_d plus terms in strictly smaller weights,
    so x_d is recovered by exact division by d.  Over the integers the
    division raises NonIntegralDivision when w is not a ghost image.
    """
    if not is_torsion_free(ring):
        raise DomainError("ghost inversion needs a torsion-free coefficient ring")
    wmap = {tuple(pt): val for pt, val in w.items()}
    for pt in wmap:
        if pt not in tset:
            raise DomainError(f"ghost key {pt} is not in the truncation set")
    comp: dict[Point, Any] = {}
    for prim, mult in decompose(tset).lines:
        for d in mult:
            point = tuple(d * c for c in prim)
            acc = wmap.get(point, ring.zero())
            for c in divisors(d):
                if c == d:
                    continue
                u = tuple(c * k for k in prim)
                xu = comp.get(u)
                if xu is None:
                    continue
                acc = ring.sub(acc, ring.mul(ring.embed_int(c),
                                             ring.pow(xu, d // c)))
            comp[point] = div_exact(ring, acc, d)
    return witt_vector(tset, ring, comp)


# ---------------------------------------------------------------------------
# universal polynomial tables
#
# The polynomial attached to an element d depends only on d (its variables
# are indexed by the divisors of d, which every truncation set containing d
# must also contain), so the cache is per (op, e, d).  Variable conventions:
#   sum/product:   [X_t for t | d] + [Y_t for t | d]
#   negation:      [X_t for t | d]
#   frobenius(e):  polynomial for d uses [X_t for t | e*d]

_ELEMENT_POLY_CACHE: dict[tuple[str, int, int], MultiPoly] = {}


def _one_dim_set(elements: Iterable[int]) -> TruncationSet:
    return TruncationSet.from_points([(t,) for t in elements], n=1)


def _certify_integral(poly: MultiPoly, what: str) -> MultiPoly:
    out = {}
    for exps, c in poly.terms.items():
        if getattr(c, "denominator", 1) != 1:
            raise IntegralityCertificationError(
                f"{what}: coefficient {c} is not an integer")
        out[exps] = int(c)
    return MultiPoly(poly.nvars, out)


def _restrict_vars(poly: MultiPoly, old_names: Sequence[str],
                   new_names: Sequence[str]) -> MultiPoly:
    index = {name: i for i, name in enumerate(new_names)}
    index_map = []
    for i, name in enumerate(old_names):
        if name in index:
            index_map.append(index[name])
        else:
            for exps in poly.terms:
                if exps[i]:
                    raise IntegralityCertificationError(
                        f"polynomial unexpectedly uses {name}")
            index_map.append(0)
    return poly.remap_variables(len(new_names), index_map)


def _fill_element_polys(d: int, op: str, e: int = 1) -> None:
    """Compute and cache the universal polynomials for every divisor of d."""
    if op in _BINARY_OPS or op == OP_NEGATION:
        divs = divisors(d)
        xnames = [f"X{t}" for t in divs]
        ynames = [f"Y{t}" for t in divs]
        names = xnames + ynames if op in _BINARY_OPS else xnames
        ring = PolynomialRingHandle(rationals(), names)
        tset = _one_dim_set(divs)
        gx = ghost(witt_vector(tset, ring,
                               {(t,): ring.variable(f"X{t}") for t in divs}))
        if op in _BINARY_OPS:
            gy = ghost(witt_vector(tset, ring,
                                   {(t,): ring.variable(f"Y{t}") for t in divs}))
            combine = ring.add if op == OP_SUM else ring.mul
            target = {pt: combine(gx[pt], gy[pt]) for pt in gx}
        else:
            target = {pt: ring.neg(gx[pt]) for pt in gx}
        solution = ghost_inverse(target, tset, ring).as_dict()
        for c in divs:
            key = (op, 1, c)
            if key in _ELEMENT_POLY_CACHE:
                continue
            cdivs = divisors(c)
            new_names = [f"X{t}" for t in cdivs]
            if op in _BINARY_OPS:
                new_names += [f"Y{t}" for t in cdivs]
            poly = solution.get((c,), MultiPoly.zero(len(names)))
            poly = _restrict_vars(poly, names, new_names)
            _ELEMENT_POLY_CACHE[key] = _certify_integral(poly, f"{op} at {c}")
    elif op == OP_FROBENIUS:
        big = divisors(e * d)
        names = [f"X{t}" for t in big]
        ring = PolynomialRingHandle(rationals(), names)
        big_set = _one_dim_set(big)
        g = ghost(witt_vector(big_set, ring,
                              {(t,): ring.variable(f"X{t}") for t in big}))
        small = divisors(d)
        target = {(c,): g[(e * c,)] for c in small}
        solution = ghost_inverse(target, _one_dim_set(small), ring).as_dict()
        for c in small:
            key = (OP_FROBENIUS, e, c)
            if key in _ELEMENT_POLY_CACHE:
                continue
            new_names = [f"X{t}" for t in divisors(e * c)]
            poly = _restrict_vars(solution[(c,)], names, new_names)
            _ELEMENT_POLY_CACHE[key] = _certify_integral(
                poly, f"frobenius({e}) at {c}")
    else:
        raise DomainError(f"unknown universal polynomial op {op!r}")


def element_poly(d: int, op: str, e: int = 1) -> MultiPoly:
    """The universal polynomial for element d of any set containing it."""
    if op != OP_FROBENIUS:
        e = 1
    key = (op, e, d)
    poly = _ELEMENT_POLY_CACHE.get(key)
    if poly is None:
        _fill_element_polys(d, op, e)
        poly = _ELEMENT_POLY_CACHE[key]
    return poly


def clear_polynomial_cache() -> None:
    _ELEMENT_POLY_CACHE.clear()


@dataclass(frozen=True)
class UniversalPolynomialTable:
    """Universal polynomials for one operation on a 1-dimensional set.

    For sum/product/negation the table is indexed by the set itself; for
    frobenius(e) it is indexed by {a : e*a in set}, the target set of the
    operation.
    """

    op: str
    e: int
    source_set: tuple[int, ...]
    index_set: tuple[int, ...]
    polys: tuple[tuple[int, MultiPoly], ...]

    def poly(self, d: int) -> MultiPoly:
        for k, p in self.polys:
            if k == d:
                return p
        raise KeyError(d)

    def to_json(self) -> dict:
        out_polys = {}
        for d, poly in self.polys:
            divs = divisors(self.e * d if self.op == OP_FROBENIUS else d)
            nx = len(divs)
            terms = []
            for exps, c in poly.sorted_terms():
                xpart = [[divs[i], exps[i]] for i in range(nx) if exps[i]]
                ypart = [[divs[i - nx], exps[i]]
                         for i in range(nx, len(exps)) if exps[i]]
                terms.append([str(c), xpart, ypart])
            out_polys[str(d)] = terms
        return {"op": self.op, "e": self.e, "set": list(self.source_set),
                "polys": out_polys}

    @staticmethod
    def from_json(obj: Mapping) -> "UniversalPolynomialTable":
        op = obj["op"]
        e = int(obj["e"])
        source = tuple(int(t) for t in obj["set"])
        polys = []
        for dstr, terms in obj["polys"].items():
            d = int(dstr)
            divs = divisors(e * d if op == OP_FROBENIUS else d)
            nx = len(divs)
            binary = op in _BINARY_OPS
            nvars = 2 * nx if binary else nx
            pos = {t: i for i, t in enumerate(divs)}
            term_map = {}
            for coeff, xpart, ypart in terms:
                exps = [0] * nvars
                for t, ex in xpart:
                    exps[pos[t]] = ex
                for t, ex in ypart:
                    exps[nx + pos[t]] = ex
                term_map[tuple(exps)] = int(coeff)
            polys.append((d, MultiPoly(nvars, term_map)))
        polys.sort()
        index = tuple(d for d, _ in polys)
        return UniversalPolynomialTable(op=op, e=e, source_set=source,
                                        index_set=index, polys=tuple(polys))


def _validate_one_dim_set(S1: Iterable[int]) -> tuple[int, ...]:
    elems = tuple(sorted({int(t) for t in S1}))
    if not elems or elems[0] < 1:
        raise DomainError("1-dimensional truncation set must be positive integers")
    members = set(elems)
    for t in elems:
        for c in divisors(t):
            if c not in members:
                raise DomainError(f"set is not divisor-closed: {t} needs {c}")
    return elems


def universal_polys(S1: Iterable[int], op: str, e: int = 1) -> UniversalPolynomialTable:
    """Assemble the table of universal polynomials for a 1-dimensional set.

    Tables are cached per element in memory and, when WITT_CACHE_DIR is set,
    persisted as canonical JSON keyed by a hash of (set, op, e).
    """
    elems = _validate_one_dim_set(S1)
    if op not in _ALL_OPS:
        raise DomainError(f"unknown op {op!r}")
    if op != OP_FROBENIUS:
        e = 1
    elif e < 1:
        raise DomainError(f"frobenius scale must be >= 1, got {e}")
    members = set(elems)
    index = tuple(t for t in elems if e * t in members) \
        if op == OP_FROBENIUS else elems

    cached = _disk_cache_load(elems, op, e)
    if cached is not None:
        for d, poly in cached.polys:
            _ELEMENT_POLY_CACHE.setdefault((op, e, d), poly)
        return cached

    polys = tuple((d, element_poly(d, op, e)) for d in index)
    table = UniversalPolynomialTable(op=op, e=e, source_set=elems,
                                     index_set=index, polys=polys)
    _disk_cache_store(table)
    return table


def _disk_cache_path(elems: tuple[int, ...], op: str, e: int) -> Optional[str]:
    root = os.environ.get("WITT_CACHE_DIR")
    if not root:
        return None
    key = json.dumps({"set": list(elems), "op": op, "e": e},
                     sort_keys=True, separators=(",", ":"))
    digest = hashlib.sha256(key.encode()).hexdigest()
    return os.path.join(root, f"{digest}.json")


def _disk_cache_load(elems, op, e) -> Optional[UniversalPolynomialTable]:
    path = _disk_cache_path(elems, op, e)
    if path is None or not os.path.exists(path):
        return None
    with open(path, "r", encoding="utf-8") as fh:
        return UniversalPolynomialTable.from_json(json.load(fh))


def _disk_cache_store(table: UniversalPolynomialTable) -> None:
    path = _disk_cache_path(table.source_set, table.op, table.e)
    if path is None:
        return
    os.makedirs(os.path.dirname(path), exist_ok=True)
    payload = json.dumps(table.to_json(), sort_keys=True, separators=(",", ":"))
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)


# ---------------------------------------------------------------------------
# ring structure


def _eval_poly(poly: MultiPoly, values: Sequence[Any], ring: Ring):
    """Evaluate an integer-coefficient polynomial on ring elements."""
    total = ring.zero()
    zero = ring.zero()
    for exps, coeff in poly.terms.items():
        term = None
        dead = False
        for i, ex in enumerate(exps):
            if not ex:
                continue
            v = values[i]
            if v is None or v == zero:
                dead = True
                break
            factor = ring.pow(v, ex)
            term = factor if term is None else ring.mul(term, factor)
        if dead:
            continue
        c = ring.embed_int(coeff)
        term = c if term is None else ring.mul(c, term)
        total = ring.add(total, term)
    return total


def _check_compatible(x: WittVector, y: WittVector) -> None:
    if x.tset != y.tset:
        raise DomainError("vectors live on different truncation sets")
    if x.ring != y.ring:
        raise DomainError("vectors have different coefficient rings")


def _binary_line_values(comp: dict, prim: Point, mult: Sequence[int], ring):
    vals = {}
    for t in mult:
        v = comp.get(tuple(t * c for c in prim))
        if v is not None:
            vals[t] = v
    return vals


def _binary_op(x: WittVector, y: WittVector, op: str) -> WittVector:
    _check_compatible(x, y)
    ring = x.ring
    if op == OP_SUM:
        if x.is_zero():
            return y
        if y.is_zero():
            return x
    elif x.is_zero() or y.is_zero():
        return witt_zero(x.tset, ring)
    xc, yc = x.as_dict(), y.as_dict()
    out: dict[Point, Any] = {}
    for prim, mult in decompose(x.tset).lines:
        xv = _binary_line_values(xc, prim, mult, ring)
        yv = _binary_line_values(yc, prim, mult, ring)
        if not xv and not yv:
            continue
        if op == OP_SUM and not xv:
            for t, v in yv.items():
                out[tuple(t * c for c in prim)] = v
            continue
        if op == OP_SUM and not yv:
            for t, v in xv.items():
                out[tuple(t * c for c in prim)] = v
            continue
        if op == OP_PRODUCT and (not xv or not yv):
            continue
        for d in mult:
            poly = element_poly(d, op)
            divs = divisors(d)
            values = [xv.get(t) for t in divs] + [yv.get(t) for t in divs]
            out[tuple(d * c for c in prim)] = _eval_poly(poly, values, ring)
    return witt_vector(x.tset, ring, out)


def witt_add(x: WittVector, y: WittVector) -> WittVector:
    return _binary_op(x, y, OP_SUM)


def witt_mul(x: WittVector, y: WittVector) -> WittVector:
    return _binary_op(x, y, OP_PRODUCT)


def witt_neg(x: WittVector) -> WittVector:
    ring = x.ring
    xc = x.as_dict()
    out: dict[Point, Any] = {}
    for prim, mult in decompose(x.tset).lines:
        xv = _binary_line_values(xc, prim, mult, ring)
        if not xv:
            continue
        for d in mult:
            poly = element_poly(d, OP_NEGATION)
            values = [xv.get(t) for t in divisors(d)]
            out[tuple(d * c for c in prim)] = _eval_poly(poly, values, ring)
    return witt_vector(x.tset, ring, out)


def witt_sub(x: WittVector, y: WittVector) -> WittVector:
    return witt_add(x, witt_neg(y))


def witt_int_mul(k: int, x: WittVector) -> WittVector:
    """k-fold sum of x (doubling), for integer k of either sign."""
    if k < 0:
        return witt_int_mul(-k, witt_neg(x))
    acc = witt_zero(x.tset, x.ring)
    base = x
    while k:
        if k & 1:
            acc = witt_add(acc, base)
        k >>= 1
        if k:
            base = witt_add(base, base)
    return acc


def restrict(x: WittVector, subset: TruncationSet) -> WittVector:
    """Projection onto a division-closed subset; a ring homomorphism."""
    if not subset.is_subset(x.tset):
        raise DomainError("restriction target is not a subset")
    members = set(subset.points)
    comp = {pt: v for pt, v in x.components if pt in members}
    return WittVector(subset, x.ring, tuple(sorted(comp.items())))


def verschiebung(x: WittVector, target: TruncationSet, i: int, r: int) -> WittVector:
    """Reindex x from target/(1,...,r,...,1) into target along axis i.

    The component at t is x at (t_1, ..., t_i/r, ..., t_n) when r | t_i and
    zero otherwise.  Additive but not multiplicative.
    """
    expected = quotient(target, i, r)
    if x.tset != expected:
        raise DomainError("vector does not live on the quotient of the target set")
    if r == 1:
        return x
    out = {}
    for pt, v in x.components:
        lifted = list(pt)
        lifted[i - 1] *= r
        out[tuple(lifted)] = v
    return witt_vector(target, x.ring, out)


def frobenius(x: WittVector, i: int, r: int) -> WittVector:
    """Frobenius along axis i with scale r; lands on the quotient set.

    On the line through a primitive point s it acts as the classical
    one-dimensional Frobenius of degree e = r / gcd(s_i, r); its ghost
    components satisfy w(Fx)_t = w(x)_(t with t_i replaced by r*t_i).
    """
    S = x.tset
    if not 1 <= i <= S.n:
        raise DomainError(f"axis {i} out of range 1..{S.n}")
    if r == 1:
        return x
    target = quotient(S, i, r)
    ring = x.ring
    xc = x.as_dict()
    out: dict[Point, Any] = {}
    for prim, mult in decompose(S).lines:
        d_i = math.gcd(prim[i - 1], r)
        e = r // d_i
        members = set(mult)
        image_mult = [a for a in mult if e * a in members]
        if not image_mult:
            continue
        v = list(e * c for c in prim)
        v[i - 1] = prim[i - 1] // d_i
        v = tuple(v)
        xv = _binary_line_values(xc, prim, mult, ring)
        if e == 1:
            for a in image_mult:
                val = xv.get(a)
                if val is not None:
                    out[tuple(a * c for c in v)] = val
            continue
        if not xv:
            continue
        for a in image_mult:
            poly = element_poly(a, OP_FROBENIUS, e)
            values = [xv.get(t) for t in divisors(e * a)]
            out[tuple(a * c for c in v)] = _eval_poly(poly, values, ring)
    return witt_vector(target, ring, out)


# ---------------------------------------------------------------------------
# p-typical splitting


def _require_zp_algebra(ring: Ring, p: int) -> None:
    found = zp_algebra_prime(ring)
    if found != p:
        raise DomainError(
            f"coefficient ring is not an algebra over the {p}-local integers")


def _p_typical_set(p: int, m: int) -> TruncationSet:
    return _one_dim_set([p ** j for j in range(m)]) if m else \
        TruncationSet(n=1, points=())


def p_typical_factors(S: TruncationSet, p: int) -> list[tuple[Point, int, int]]:
    """Index of the p-typical factors of the Witt ring over S.

    Yields (primitive point, prime-to-p part e, length m) for every line and
    every e in the line's multiplier set with p not dividing e, where m is
    the number of j with e * p^j in the multiplier set.
    """
    out = []
    for prim, mult in decompose(S).lines:
        members = set(mult)
        for e in mult:
            if e % p == 0:
                continue
            m = 0
            while e * p ** m in members:
                m += 1
            out.append((prim, e, m))
    return out


def p_typical_split(x: WittVector, p: int) -> dict[tuple[Point, int], WittVector]:
    """Split a vector over a Z_(p)-algebra into its p-typical components.

    The component for (primitive point, e) is the restriction to p-power
    weights of the classical Frobenius F_e applied along the line; together
    these give a ring isomorphism onto the product of p-typical Witt rings.
    """
    ring = x.ring
    _require_zp_algebra(ring, p)
    xc = x.as_dict()
    out: dict[tuple[Point, int], WittVector] = {}
    for prim, mult in decompose(x.tset).lines:
        xv = _binary_line_values(xc, prim, mult, ring)
        members = set(mult)
        for e in mult:
            if e % p == 0:
                continue
            m = 0
            while e * p ** m in members:
                m += 1
            factor_set = _p_typical_set(p, m)
            comp = {}
            for j in range(m):
                t = e * p ** j
                if e == 1:
                    val = xv.get(t)
                else:
                    poly = element_poly(p ** j, OP_FROBENIUS, e)
                    values = [xv.get(u) for u in divisors(t)]
                    val = _eval_poly(poly, values, ring)
                if val is not None and not ring.is_zero(val):
                    comp[(p ** j,)] = val
            out[(prim, e)] = witt_vector(factor_set, ring, comp)
    return out


def p_typical_assemble(S: TruncationSet, ring: Ring, p: int,
                       factors: Mapping[tuple[Point, int], WittVector]) -> WittVector:
    """Inverse of p_typical_split.

    Processes each line in increasing weight order: the factor entry for
    weight t = e * p^j equals e * x_t plus an integer polynomial in the
    components of strictly smaller weight, and e is invertible in any
    Z_(p)-algebra, so x_t is recovered directly.
    """
    _require_zp_algebra(ring, p)
    expected = {(prim, e) for prim, e, _ in p_typical_factors(S, p)}
    for key in factors:
        if (tuple(key[0]), key[1]) not in expected:
            raise DomainError(f"unexpected factor key {key}")
    out: dict[Point, Any] = {}
    for prim, mult in decompose(S).lines:
        line_vals: dict[int, Any] = {}
        for t in mult:
            e, j = split_p_part(t, p)
            factor = factors.get((prim, e))
            y = ring.zero() if factor is None else factor.component((p ** j,))
            if e == 1:
                x_t = y
            else:
                poly = element_poly(p ** j, OP_FROBENIUS, e)
                divs = divisors(t)
                lead = [0] * len(divs)
                lead[divs.index(t)] = 1
                lead_coeff = poly.terms.get(tuple(lead), 0)
                if lead_coeff != e:
                    raise IntegralityCertificationError(
                        f"frobenius({e}) at p^{j}: leading coefficient "
                        f"{lead_coeff} != {e}")
                rest = poly - MultiPoly(len(divs), {tuple(lead): e})
                values = [line_vals.get(u) for u in divs]
                acc = ring.sub(y, _eval_poly(rest, values, ring))
                x_t = ring.mul(ring.invert_int(e), acc)
            line_vals[t] = x_t
        for t, v in line_vals.items():
            out[tuple(t * c for c in prim)] = v
    return witt_vector(S, ring, out)


# ---------------------------------------------------------------------------
# serialization


def witt_to_json(x: WittVector) -> dict:
    return {"set": x.tset.to_json(),
            "ring": x.ring.descriptor.to_json(),
            "components": [[list(pt), x.ring.element_to_str(v)]
                           for pt, v in x.components]}


def witt_from_json(obj: Mapping) -> WittVector:
    tset = TruncationSet.from_json(obj["set"])
    ring = ring_make(RingDescriptor.from_json(obj["ring"]))
    comps = {tuple(int(c) for c in pt): ring.element_from_str(s)
             for pt, s in obj.get("components", [])}
    return witt_vector(tset, ring, comps)
