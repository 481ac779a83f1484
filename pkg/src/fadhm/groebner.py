"""Buchberger's algorithm over the rationals, normal forms, and dimensions.

Inside Buchberger polynomials are kept as dicts of primitive integer
coefficients and reduced fraction-free; the reduced basis that comes out is
made monic over the rationals.  Pairs are handled with the Gebauer-Moeller
criteria and selected by the sugar strategy (smallest lcm first under lex).
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd
from operator import le

from . import _kernels
from .orders import MonomialOrder
from .poly import Exp, Polynomial, PolyRing

DEFAULT_MAX_PAIRS = 200_000
DEFAULT_MAX_TERMS = 200_000


class ResourceLimitError(RuntimeError):
    """A Groebner computation hit its pair or term budget.

    ``partial`` holds the basis elements found so far (not a Groebner basis).
    """

    def __init__(self, message: str, partial=None, stats=None):
        super().__init__(message)
        self.partial = partial or []
        self.stats = stats or {}


@dataclass
class IdealBasis:
    generators: list[Polynomial]
    order: MonomialOrder
    ring: PolyRing
    reduced: bool = False
    stats: dict = field(default_factory=dict)

    def leading_monomials(self) -> list[Exp]:
        return [g.leading_monomial(self.order) for g in self.generators]

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def to_text(self) -> list[str]:
        return [g.to_text(self.order) for g in self.generators]


def _key_cache(order: MonomialOrder):
    cache: dict = {}
    key = order.key

    def k(e):
        try:
            return cache[e]
        except KeyError:
            v = cache[e] = key(e)
            return v

    return k


def _primitive(p: dict) -> dict:
    if not p:
        return p
    g = reduce(gcd, p.values())
    if g != 1:
        p = {e: c // g for e, c in p.items()}
    return p


def _to_int_dict(f: Polynomial) -> dict:
    den = 1
    for c in f.terms.values():
        den = den * c.denominator // gcd(den, c.denominator)
    return _primitive({e: int(c * den) for e, c in f.terms.items()})


class _Elem:
    __slots__ = ("poly", "lm", "lc", "sugar", "alive")

    def __init__(self, poly, lm, sugar):
        self.poly = poly
        self.lm = lm
        self.lc = poly[lm]
        self.sugar = sugar
        self.alive = True


def _lcm(a: Exp, b: Exp) -> Exp:
    return tuple(map(max, a, b))


def _divides(a: Exp, b: Exp) -> bool:
    return all(map(le, a, b))


def _reduce_ff(p: dict, basis, K, full: bool, max_terms: int) -> dict:
    """Fraction-free reduction of p by basis elements (list of _Elem).

    The result is a nonzero-integer multiple of the true remainder, made
    primitive with positive leading coefficient.
    """
    p = dict(p)
    rem: dict = {}
    steps = 0
    while p:
        m = max(p, key=K)
        c = p[m]
        for g in basis:
            if _divides(g.lm, m):
                break
        else:
            if not full:
                break
            rem[m] = c
            del p[m]
            continue
        lc = g.lc
        d = gcd(c, lc)
        a, b = lc // d, c // d
        if a < 0:
            a, b = -a, -b
        if a != 1:
            p = {e: v * a for e, v in p.items()}
            if rem:
                rem = {e: v * a for e, v in rem.items()}
        q = tuple(x - y for x, y in zip(m, g.lm))
        for e, v in g.poly.items():
            ne = tuple(x + y for x, y in zip(e, q))
            nv = p.get(ne, 0) - b * v
            if nv:
                p[ne] = nv
            else:
                p.pop(ne, None)
        if len(p) + len(rem) > max_terms:
            raise ResourceLimitError(f"term budget {max_terms} exceeded during reduction")
        steps += 1
        if a != 1 and (steps % 4 == 0 or abs(lc).bit_length() + abs(c).bit_length() > 256):
            # keep coefficient growth in check
            g_all = reduce(gcd, p.values(), reduce(gcd, rem.values(), 0))
            if g_all > 1:
                p = {e: v // g_all for e, v in p.items()}
                rem = {e: v // g_all for e, v in rem.items()}
    if p:
        rem.update(p)
    if not rem:
        return rem
    rem = _primitive(rem)
    lm = max(rem, key=K)
    if rem[lm] < 0:
        rem = {e: -v for e, v in rem.items()}
    return rem


def groebner_basis(
    gens,
    order: MonomialOrder,
    *,
    ring: PolyRing | None = None,
    max_pairs: int = DEFAULT_MAX_PAIRS,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> IdealBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``."""
    gens = list(gens)
    if ring is None:
        if not gens:
            raise ValueError("ring required for an empty generator list")
        ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise ValueError("generators over different rings")
    t0 = time.perf_counter()
    K = _key_cache(order)
    G: list[_Elem] = []
    pairs: list = []
    stats = {"pairs_processed": 0, "pairs_reduced_to_zero": 0, "max_basis": 0}
    # sugar suits graded orders; under lex the smallest lcm first keeps coefficients small
    by_sugar = order.kind != "lex"

    def update(h: _Elem):
        # Gebauer-Moeller: prune old pairs, then add minimal new ones
        lm = h.lm
        live = [k for k, g in enumerate(G) if g.alive]
        new = {}
        for k in live:
            L = _lcm(G[k].lm, lm)
            new.setdefault(L, []).append(k)
        kept = []
        for entry in pairs:
            _, _, i, j, L, _ = entry
            if (
                _divides(lm, L)
                and L != _lcm(G[i].lm, lm)
                and L != _lcm(G[j].lm, lm)
            ):
                continue
            kept.append(entry)
        pairs[:] = kept
        heapq.heapify(pairs)
        lcms = sorted(new, key=K)
        minimal: list[Exp] = []
        for L in lcms:
            if any(_divides(M, L) for M in minimal):
                continue
            minimal.append(L)
        hidx = len(G)
        for L in minimal:
            ks = new[L]
            if any(L == tuple(a + b for a, b in zip(G[k].lm, lm)) for k in ks):
                continue  # coprime leading monomials
            k = min(ks)
            g = G[k]
            sugar = max(
                g.sugar + sum(L) - sum(g.lm),
                h.sugar + sum(L) - sum(lm),
            )
            heapq.heappush(pairs, (sugar if by_sugar else 0, K(L), k, hidx, L, sugar))
        for g in G:
            if g.alive and _divides(lm, g.lm):
                g.alive = False
        G.append(h)

    inputs = []
    for f in gens:
        p = _to_int_dict(f)
        if p:
            inputs.append((f.total_degree(), p))
    inputs.sort(key=lambda t: (t[0], K(max(t[1], key=K))))
    for deg, p in inputs:
        p = _reduce_ff(p, [g for g in G if g.alive], K, True, max_terms)
        if not p:
            continue
        lm = max(p, key=K)
        update(_Elem(p, lm, deg))
        if not any(lm):
            break

    try:
        while pairs:
            if any(not any(g.lm) for g in G if g.alive):
                break  # unit ideal
            _, _, i, j, L, sugar = heapq.heappop(pairs)
            stats["pairs_processed"] += 1
            if stats["pairs_processed"] > max_pairs:
                raise ResourceLimitError(f"pair budget {max_pairs} exceeded")
            gi, gj = G[i], G[j]
            s = _spoly(gi, gj, L)
            live = [g for g in G if g.alive]
            h = _reduce_ff(s, live, K, False, max_terms)
            if h:
                h = _reduce_ff(h, live, K, True, max_terms)
            if not h:
                stats["pairs_reduced_to_zero"] += 1
                continue
            lm = max(h, key=K)
            update(_Elem(h, lm, sugar))
            stats["max_basis"] = max(stats["max_basis"], sum(g.alive for g in G))
    except ResourceLimitError as exc:
        exc.partial = [_from_int(ring, g.poly, order) for g in G if g.alive]
        stats["seconds"] = time.perf_counter() - t0
        exc.stats = stats
        raise

    reduced = _interreduce([g for g in G if g.alive], K, max_terms)
    out = [_from_int(ring, p, order) for p in reduced]
    out.sort(key=lambda f: K(f.leading_monomial(order)), reverse=True)
    stats["seconds"] = time.perf_counter() - t0
    return IdealBasis(out, order, ring, reduced=True, stats=stats)


def _spoly(f: _Elem, g: _Elem, L: Exp) -> dict:
    qf = tuple(a - b for a, b in zip(L, f.lm))
    qg = tuple(a - b for a, b in zip(L, g.lm))
    d = gcd(f.lc, g.lc)
    af, ag = g.lc // d, f.lc // d
    out: dict = {}
    for e, v in f.poly.items():
        ne = tuple(a + b for a, b in zip(e, qf))
        out[ne] = v * af
    for e, v in g.poly.items():
        ne = tuple(a + b for a, b in zip(e, qg))
        nv = out.get(ne, 0) - v * ag
        if nv:
            out[ne] = nv
        else:
            out.pop(ne, None)
    return out


def _interreduce(elems: list[_Elem], K, max_terms) -> list[dict]:
    # minimal basis: drop elements whose leading monomial is divisible by another's
    elems = sorted(elems, key=lambda g: K(g.lm))
    minimal: list[_Elem] = []
    for g in elems:
        if not any(_divides(h.lm, g.lm) for h in minimal):
            minimal.append(g)
    if any(not any(g.lm) for g in minimal):
        lm = next(g.lm for g in minimal if not any(g.lm))
        return [{lm: 1}]
    out = []
    for k, g in enumerate(minimal):
        others = minimal[:k] + minimal[k + 1:]
        out.append(_reduce_ff(g.poly, others, K, True, max_terms))
    return out


def _from_int(ring: PolyRing, p: dict, order: MonomialOrder) -> Polynomial:
    lm = max(p, key=order.key)
    lc = p[lm]
    return Polynomial(ring, {e: Fraction(v, lc) for e, v in p.items()})


def normal_form(f: Polynomial, basis: IdealBasis) -> Polynomial:
    """Remainder of multivariate division of f by a Groebner basis."""
    if not basis.generators:
        return f
    order = basis.order
    K = _key_cache(order)
    divisors = []
    for g in basis.generators:
        lm, lc = g.leading(order)
        divisors.append((lm, g if lc == 1 else g * (1 / lc)))
    p = dict(f.terms)
    rem = {}
    while p:
        m = max(p, key=K)
        c = p[m]
        for lm, g in divisors:
            if _divides(lm, m):
                break
        else:
            rem[m] = c
            del p[m]
            continue
        q = tuple(x - y for x, y in zip(m, lm))
        for e, v in g.terms.items():
            ne = tuple(x + y for x, y in zip(e, q))
            nv = p.get(ne, 0) - c * v
            if nv:
                p[ne] = nv
            else:
                p.pop(ne, None)
    return Polynomial(f.ring, rem)


def ideal_contains(basis: IdealBasis, f: Polynomial) -> bool:
    return normal_form(f, basis).is_zero()


def is_groebner(basis: IdealBasis) -> bool:
    """Buchberger criterion: every S-polynomial reduces to zero."""
    gens = basis.generators
    order = basis.order
    for a in range(len(gens)):
        for b in range(a + 1, len(gens)):
            fa, fb = gens[a], gens[b]
            la, ca = fa.leading(order)
            lb, cb = fb.leading(order)
            L = _lcm(la, lb)
            s = fa.mul_term(tuple(x - y for x, y in zip(L, la)), 1 / ca) - fb.mul_term(
                tuple(x - y for x, y in zip(L, lb)), 1 / cb
            )
            if not normal_form(s, basis).is_zero():
                return False
    return True


def krull_dimension(basis: IdealBasis) -> int:
    """Dimension of k[x]/I read off the initial ideal; -1 for the unit ideal."""
    lms = basis.leading_monomials()
    n = basis.ring.nvars
    if any(not any(e) for e in lms):
        return -1
    if not lms:
        return n
    if n <= _kernels.MAX_VARS:
        return _kernels.monomial_ideal_dimension(lms, n)
    return _dimension_bigint(lms, n)


def _dimension_bigint(lms, n) -> int:
    masks = sorted({sum(1 << j for j, a in enumerate(e) if a) for e in lms}, key=int.bit_count)
    minimal = []
    for m in masks:
        if not any(h & m == h for h in minimal):
            minimal.append(m)
    best = [n + 1]

    def search(chosen, size):
        if size >= best[0]:
            return
        for m in minimal:
            if not m & chosen:
                break
        else:
            best[0] = size
            return
        b = m
        while b:
            low = b & -b
            search(chosen | low, size + 1)
            b ^= low

    search(0, 0)
    return n - best[0]


def monomials_form_regular_sequence(leading) -> bool:
    """Monomials form a regular sequence iff their supports are pairwise disjoint."""
    leading = [tuple(e) for e in leading]
    if not leading:
        raise ValueError("empty monomial list")
    if any(not any(e) for e in leading):
        raise ValueError("constant monomial in list")
    if len(leading[0]) <= _kernels.MAX_VARS:
        return bool(_kernels.pairwise_disjoint(_kernels.support_masks(leading)))
    acc = 0
    for e in leading:
        m = sum(1 << j for j, a in enumerate(e) if a)
        if m & acc:
            return False
        acc |= m
    return True
