"""Complete-intersection verdicts for moment-map systems.

Three levels of evidence, kept strictly apart:

* exact: a reduced Groebner basis and the dimension of its initial ideal;
* shortcut: pairwise coprime leading monomials (can only prove, never refute);
* probabilistic: exact Jacobian rank at sampled points of the zero fiber.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import linalg as la
from .adhm import MomentMapSystem
from .groebner import (
    DEFAULT_MAX_PAIRS,
    DEFAULT_MAX_TERMS,
    IdealBasis,
    ResourceLimitError,
    groebner_basis,
    krull_dimension,
    monomials_form_regular_sequence,
)
from .orders import MonomialOrder
from .poly import Polynomial

PROVED_CI = "PROVED_CI"
PROVED_NOT_CI = "PROVED_NOT_CI"
LIKELY_CI = "LIKELY_CI"
INCONCLUSIVE = "INCONCLUSIVE"
NO_DECISION = "NO_DECISION"


@dataclass
class CIVerdict:
    status: str
    evidence: dict = field(default_factory=dict)
    stats: dict = field(default_factory=dict)
    certificate: IdealBasis | None = None
    warnings: list[str] = field(default_factory=list)

    @property
    def proved(self) -> bool:
        return self.status in (PROVED_CI, PROVED_NOT_CI)

    def to_json(self, certificate: bool = False, timing: bool = False) -> dict:
        out = {"status": self.status, "evidence": self.evidence}
        stats = {k: v for k, v in self.stats.items() if timing or k != "seconds"}
        if stats:
            out["stats"] = stats
        if self.warnings:
            out["warnings"] = list(self.warnings)
        if certificate and self.certificate is not None:
            out["certificate"] = {
                "order": self.certificate.order.describe(self.certificate.ring),
                "basis": self.certificate.to_text(),
            }
        return out


ORDER_NAMES = ("degrevlex", "block", "lex")


@dataclass
class OrderingStrategy:
    """Orders to try in sequence, each with its own Groebner budget."""

    orders: tuple[str, ...] = ORDER_NAMES
    max_pairs: int = DEFAULT_MAX_PAIRS
    max_terms: int = DEFAULT_MAX_TERMS

    def __post_init__(self):
        if not self.orders:
            raise ValueError("ordering strategy needs at least one order")
        for name in self.orders:
            if name not in ORDER_NAMES and name != "grevlex":
                raise ValueError(f"unknown order {name!r}")

    @classmethod
    def single(cls, name: str, **budget) -> OrderingStrategy:
        return cls((name,), **budget)

    def build(self, name: str, system: MomentMapSystem) -> MonomialOrder:
        ring = system.ring
        if name == "block":
            first = linear_block(system)
            if not first or len(first) == ring.nvars:
                return MonomialOrder.degrevlex(ring)
            rest = [k for k in range(ring.nvars) if k not in set(first)]
            return MonomialOrder.block(ring, [first, rest])
        return MonomialOrder.from_name(name, ring)


def linear_block(system: MomentMapSystem) -> list[int]:
    """Variables of opposite arrows and of j, in which the moment map is linear."""
    rep = system.rep
    if rep is None:
        return []
    out = []
    for k, (kind, key, _, _) in enumerate(rep.slots):
        if kind == "j" or (kind == "C" and not rep.dq[key].is_forward):
            out.append(k)
    return out


def _check_components(system: MomentMapSystem) -> str | None:
    if not system.components:
        return "system has no components"
    if any(f.is_zero() for f in system.polys):
        return "system has a zero component"
    return None


def ci_exact(system: MomentMapSystem, strategy: OrderingStrategy | None = None) -> CIVerdict:
    strategy = strategy or OrderingStrategy()
    problem = _check_components(system)
    if problem:
        return CIVerdict(INCONCLUSIVE, {"reason": problem})
    attempts = []
    t0 = time.perf_counter()
    for name in strategy.orders:
        order = strategy.build(name, system)
        try:
            gb = groebner_basis(system.polys, order, ring=system.ring,
                                max_pairs=strategy.max_pairs, max_terms=strategy.max_terms)
        except ResourceLimitError as exc:
            attempts.append({"order": name, "result": "budget exhausted", "message": str(exc)})
            continue
        dim = krull_dimension(gb)
        status = PROVED_CI if dim == system.expected_dim else PROVED_NOT_CI
        attempts.append({"order": name, "result": "completed"})
        evidence = {
            "order": name,
            "dimension": dim,
            "expected_dimension": system.expected_dim,
            "basis_size": len(gb),
            "attempts": attempts,
        }
        stats = dict(gb.stats)
        stats["seconds"] = time.perf_counter() - t0
        return CIVerdict(status, evidence, stats, gb)
    return CIVerdict(INCONCLUSIVE, {"expected_dimension": system.expected_dim, "attempts": attempts},
                     {"seconds": time.perf_counter() - t0})


def ci_leading_shortcut(system: MomentMapSystem, order: MonomialOrder | None = None) -> CIVerdict:
    """PROVED_CI when the leading monomials are pairwise coprime, NO_DECISION otherwise."""
    order = order or MonomialOrder.degrevlex(system.ring)
    problem = _check_components(system)
    if problem:
        return CIVerdict(NO_DECISION, {"reason": problem})
    lms = [f.leading_monomial(order) for f in system.polys]
    ring = system.ring
    texts = [ring.monomial(e).to_text() for e in lms]
    evidence = {"order": order.kind, "leading_monomials": texts,
                "expected_dimension": system.expected_dim}
    if any(not any(e) for e in lms):
        evidence["reason"] = "constant leading monomial"
        return CIVerdict(NO_DECISION, evidence)
    if monomials_form_regular_sequence(lms):
        evidence["dimension"] = system.expected_dim
        return CIVerdict(PROVED_CI, evidence)
    evidence["reason"] = "leading monomials share variables"
    return CIVerdict(NO_DECISION, evidence)


def gradients(polys: list[Polynomial]) -> list[list[Polynomial]]:
    ring = polys[0].ring
    return [[f.diff(k) for k in range(ring.nvars)] for f in polys]


def jacobian_at(polys: list[Polynomial], point, grads=None) -> list[list[Fraction]]:
    grads = grads or gradients(polys)
    return [[Fraction(g.evaluate(point)) if not g.is_zero() else Fraction(0) for g in row]
            for row in grads]


def jacobian_rank(polys: list[Polynomial], point, grads=None) -> int:
    return la.rank(la.matrix(jacobian_at(polys, point, grads)))


def default_sampler(system: MomentMapSystem) -> Callable | None:
    """Fiber sampler for framed Jordan systems, else None."""
    from . import gs

    rep = system.rep
    if rep is None or len(rep.dq.vertices) != 1 or len(rep.dq.base.arrows) != 1:
        return None
    a = rep.dq.base.arrows[0]
    if a.head != a.tail:
        return None
    v = rep.dq.vertices[0]
    n, w = rep.dims[v], rep.framing.get(v, 0)
    if n == 0 or w == 0:
        return None
    alpha = rep.filtration.blocks(v, n)
    blocks = None if all(b == 1 for b in alpha) else tuple(alpha)
    if gs.jordan_rep(n, blocks, w).nvars != rep.nvars:
        return None
    return lambda rng: gs.sample_fiber(n, rng, blocks, w).values()


def ci_probabilistic(system: MomentMapSystem, n_samples: int, rng,
                     sampler: Callable | None = None) -> CIVerdict:
    """Exact Jacobian rank at sampled points of the zero fiber; never PROVED."""
    problem = _check_components(system)
    if problem:
        return CIVerdict(INCONCLUSIVE, {"reason": problem})
    sampler = sampler or default_sampler(system)
    if sampler is None:
        return CIVerdict(INCONCLUSIVE, {"reason": "no fiber sampler for this system"})
    polys = system.polys
    grads = gradients(polys)
    k = len(polys)
    t0 = time.perf_counter()
    ranks: dict[int, int] = {}
    deficient = 0
    for _ in range(n_samples):
        try:
            pt = sampler(rng)
        except Exception as exc:  # sampler failures are reported, not raised
            return CIVerdict(INCONCLUSIVE, {"reason": f"sampler failed: {exc}",
                                            "samples": sum(ranks.values())})
        if any(Fraction(f.evaluate(pt)) != 0 for f in polys):
            return CIVerdict(INCONCLUSIVE, {"reason": "sampler returned a point off the fiber"})
        r = jacobian_rank(polys, pt, grads)
        ranks[r] = ranks.get(r, 0) + 1
        deficient += r < k
    evidence = {
        "samples": n_samples,
        "components": k,
        "rank_counts": {str(r): c for r, c in sorted(ranks.items())},
        "rank_deficient": deficient,
        "expected_dimension": system.expected_dim,
    }
    stats = {"seconds": time.perf_counter() - t0}
    if deficient:
        return CIVerdict(INCONCLUSIVE, evidence, stats,
                         warnings=[f"Jacobian rank below {k} at {deficient} of {n_samples} points"])
    return CIVerdict(LIKELY_CI, evidence, stats)


def flatness_report(system: MomentMapSystem, verdict: CIVerdict) -> dict:
    """Fiber dimension against expectation; orbit stratification is not computed."""
    expected = system.expected_dim
    computed = verdict.evidence.get("dimension")
    if computed is None:
        consistency = "likely" if verdict.status == LIKELY_CI else "unknown"
    else:
        consistency = "consistent" if computed == expected else "mismatch"
    return {
        "ambient_dimension": system.ring.nvars,
        "components": len(system.components),
        "expected_fiber_dimension": expected,
        "computed_fiber_dimension": computed,
        "quotient_dimension_target": expected - len(system.components),
        "verdict": verdict.status,
        "flatness": consistency,
        "codimension_condition": "not computed",
    }
