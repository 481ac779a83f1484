"""Symplectic form, parabolic action, and the moment map on filtered ADHM data.

Coordinates on the opposite arrows are the transpose-masked matrices: the
dual of a filtered Hom-space under the trace pairing.  The action on those
coordinates is conjugation followed by zeroing the entries outside the mask,
i.e. the coadjoint-style action on the quotient by the annihilator.  The
moment map takes values in the same kind of coordinates at each vertex.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

from . import linalg as la
from .poly import Polynomial, PolyRing
from .quiver import (
    BlockMask,
    DoubleQuiver,
    FiltrationSpec,
    GenericFilteredRep,
    generic_rep,
    group_dims,
    loop_mask,
)
from .rng import rand_fraction, rand_nonzero


class ActionError(ValueError):
    pass


def compose_eps(dq: DoubleQuiver, C: Mapping, C2: Mapping, dims: Mapping[str, int]) -> dict:
    """Per vertex, the sum of eps(a) C_a C2_{a^op} over arrows a ending there."""
    out = {v: la.zeros(dims[v]) for v in dq.vertices}
    for a in dq.arrows:
        A, B = C[a.name], C2[a.op]
        if A.shape[1] != B.shape[0] or A.shape[0] != B.shape[1]:
            raise la.ShapeError(f"incompatible shapes at arrow {a.name}")
        prod = la.mat_mul(A, B)
        out[a.head] = out[a.head] + prod if a.eps == 1 else out[a.head] - prod
    return out


@dataclass
class RepPoint:
    """Numeric point of filtered ADHM data (Fraction entries)."""

    rep: GenericFilteredRep
    C: dict
    i: dict
    j: dict

    def assignment(self) -> list[Fraction]:
        vals = []
        for kind, key, p, q in self.rep.slots:
            vals.append(Fraction({"C": self.C, "i": self.i, "j": self.j}[kind][key][p, q]))
        return vals

    @classmethod
    def from_values(cls, rep: GenericFilteredRep, values) -> RepPoint:
        values = list(values)
        C = {a: la.zeros(*M.shape) for a, M in rep.C.items()}
        I = {v: la.zeros(*M.shape) for v, M in rep.i.items()}
        J = {v: la.zeros(*M.shape) for v, M in rep.j.items()}
        for val, (kind, key, p, q) in zip(values, rep.slots):
            {"C": C, "i": I, "j": J}[kind][key][p, q] = Fraction(val)
        return cls(rep, C, I, J)

    def respects_masks(self) -> bool:
        for a, M in self.C.items():
            allowed = self.rep.masks[a].allowed
            for (p, q), v in np.ndenumerate(M):
                if v != 0 and (p, q) not in allowed:
                    return False
        return True

    def __eq__(self, other):
        return isinstance(other, RepPoint) and self.assignment() == other.assignment()


@dataclass
class GroupElement:
    """Per-vertex invertible matrices of parabolic shape."""

    mats: dict

    def __matmul__(self, other: GroupElement) -> GroupElement:
        return GroupElement({v: la.mat_mul(self.mats[v], other.mats[v]) for v in self.mats})

    def inverse(self) -> GroupElement:
        return GroupElement({v: la.inverse(M) for v, M in self.mats.items()})


def identity_element(dims: Mapping[str, int]) -> GroupElement:
    return GroupElement({v: la.to_fractions(la.identity(n)) for v, n in dims.items()})


def check_group_element(p: GroupElement, dims, filt: FiltrationSpec):
    for v, n in dims.items():
        M = p.mats[v]
        allowed = loop_mask(v, dims, filt).allowed
        for (a, b), x in np.ndenumerate(M):
            if x != 0 and (a, b) not in allowed:
                raise ActionError(f"group element at vertex {v} violates the parabolic shape")
        if n and la.det(la.to_fractions(M)) == 0:
            raise ActionError(f"group element at vertex {v} is singular")


def _project(M: np.ndarray, mask: BlockMask) -> np.ndarray:
    out = la.zeros(*M.shape)
    for p, q in mask.allowed:
        out[p, q] = M[p, q]
    return out


def act(p: GroupElement, x: RepPoint, check: bool = True) -> RepPoint:
    """p . (C, i, j) = (p C p^-1, p i, j p^-1), opposite arrows projected to their mask."""
    rep = x.rep
    if check:
        check_group_element(p, rep.dims, rep.filtration)
    inv = {v: la.inverse(M) if M.shape[0] else M for v, M in p.mats.items()}
    C = {}
    for a in rep.dq.arrows:
        M = la.mat_mul(la.mat_mul(p.mats[a.head], x.C[a.name]), inv[a.tail])
        C[a.name] = M if a.is_forward else _project(M, rep.masks[a.name])
    I = {v: la.mat_mul(p.mats[v], M) for v, M in x.i.items()}
    J = {v: la.mat_mul(M, inv[v]) for v, M in x.j.items()}
    return RepPoint(rep, C, I, J)


def symplectic_form(x: RepPoint, y: RepPoint) -> Fraction:
    """omega = Tr(eps C C') + Tr(i j' - i' j)."""
    rep = x.rep
    total = Fraction(0)
    for M in compose_eps(rep.dq, x.C, y.C, rep.dims).values():
        total += Fraction(la.trace(M)) if M.shape[0] else 0
    for v in x.i:
        total += Fraction(la.trace(la.mat_mul(x.i[v], y.j[v])))
        total -= Fraction(la.trace(la.mat_mul(y.i[v], x.j[v])))
    return total


@dataclass(frozen=True)
class Character:
    """chi(p) = prod over vertices and diagonal blocks of det(block)^theta."""

    exponents: Mapping[str, tuple[int, ...]]

    def __call__(self, p: GroupElement, dims, filt: FiltrationSpec) -> Fraction:
        val = Fraction(1)
        for v, thetas in self.exponents.items():
            blocks = filt.blocks(v, dims[v])
            if len(thetas) != len(blocks):
                raise ValueError(f"character at vertex {v} needs {len(blocks)} exponents")
            start = 0
            for size, th in zip(blocks, thetas):
                B = p.mats[v][start:start + size, start:start + size]
                d = Fraction(la.det(la.to_fractions(B)))
                val *= d**th
                start += size
        return val


@dataclass
class MomentComponent:
    vertex: str
    row: int
    col: int
    poly: Polynomial

    def to_json(self) -> dict:
        return {"vertex": self.vertex, "row": self.row + 1, "col": self.col + 1,
                "polynomial": self.poly.to_text()}


@dataclass
class MomentMapSystem:
    components: list[MomentComponent]
    ring: PolyRing
    expected_dim: int
    rep: GenericFilteredRep | None = None
    full: dict = field(default_factory=dict)  # vertex -> unprojected eps C C + i j

    @property
    def polys(self) -> list[Polynomial]:
        return [c.poly for c in self.components]

    def to_json(self) -> dict:
        return {
            "variables": list(self.ring.names),
            "components": [c.to_json() for c in self.components],
            "expected_dim": self.expected_dim,
        }

    @classmethod
    def from_polys(cls, polys, ring: PolyRing, expected_dim: int | None = None) -> MomentMapSystem:
        comps = [MomentComponent("-", k, 0, f) for k, f in enumerate(polys)]
        if expected_dim is None:
            expected_dim = ring.nvars - len(comps)
        return cls(comps, ring, expected_dim)


def dual_positions(vertex: str, dims, filt) -> list[tuple[int, int]]:
    """Coordinates of the dual of the parabolic algebra, row-major order."""
    return sorted(loop_mask(vertex, dims, filt).transpose().allowed)


def moment_map(dq: DoubleQuiver, dims, framing, filt: FiltrationSpec,
               rep: GenericFilteredRep | None = None) -> MomentMapSystem:
    rep = rep or generic_rep(dq, dims, framing, filt)
    full = moment_full(rep, rep.C, rep.i, rep.j)
    comps = []
    for v in dq.vertices:
        for p, q in dual_positions(v, rep.dims, filt):
            comps.append(MomentComponent(v, p, q, rep.ring.coerce(full[v][p, q])))
    _, dim_group = group_dims(rep.dims, filt)
    assert len(comps) == dim_group
    return MomentMapSystem(comps, rep.ring, rep.nvars - dim_group, rep, full)


def moment_full(rep: GenericFilteredRep, C, I, J) -> dict:
    """Unprojected eps C C + i j at every vertex."""
    out = compose_eps(rep.dq, C, C, rep.dims)
    for v in I:
        out[v] = out[v] + la.mat_mul(I[v], J[v])
    return out


def moment_value(x: RepPoint) -> dict:
    return moment_full(x.rep, x.C, x.i, x.j)


def moment_components_at(x: RepPoint) -> list[Fraction]:
    full = moment_value(x)
    return [Fraction(full[v][p, q]) for v in x.rep.dq.vertices
            for p, q in dual_positions(v, x.rep.dims, x.rep.filtration)]


@dataclass
class Verdict:
    passed: bool
    checked: int
    counterexample: object = None
    detail: str = ""

    def to_json(self) -> dict:
        out = {"passed": self.passed, "checked": self.checked}
        if self.detail:
            out["detail"] = self.detail
        return out


def equivariance_holds(p: GroupElement, x: RepPoint) -> bool:
    """mu(p.x) equals the projection of p mu_hat(x) p^-1."""
    rep = x.rep
    lhs = moment_value(act(p, x))
    rhs = moment_value(x)
    for v in rep.dq.vertices:
        if not rep.dims[v]:
            continue
        P = p.mats[v]
        conj = la.mat_mul(la.mat_mul(P, rhs[v]), la.inverse(P))
        for a, b in dual_positions(v, rep.dims, rep.filtration):
            if Fraction(lhs[v][a, b]) != Fraction(conj[a, b]):
                return False
    return True


def equivariance_check(rep: GenericFilteredRep, rng, samples: int = 100,
                       group_sampler=None, point_sampler=None) -> Verdict:
    group_sampler = group_sampler or (lambda g: random_group_element(rep.dims, rep.filtration, g))
    point_sampler = point_sampler or (lambda g: random_point(rep, g))
    for k in range(samples):
        p, x = group_sampler(rng), point_sampler(rng)
        if not equivariance_holds(p, x):
            return Verdict(False, k + 1, (p, x), "moment map not equivariant")
    return Verdict(True, samples)


# random sampling ------------------------------------------------------------


def random_point(rep: GenericFilteredRep, rng, **kw) -> RepPoint:
    return RepPoint.from_values(rep, [rand_fraction(rng, **kw) for _ in rep.slots])


def random_group_element(dims, filt: FiltrationSpec, rng, unipotent: bool = False,
                         diagonal: bool = False, **kw) -> GroupElement:
    """Random invertible element of the parabolic (block upper triangular).

    ``unipotent`` gives upper unitriangular matrices, ``diagonal`` torus
    elements.  A singular draw drops its below-diagonal entries, which leaves
    an upper triangular matrix with nonzero diagonal.
    """
    mats = {}
    for v, n in dims.items():
        mask = loop_mask(v, dims, filt).allowed
        M = la.zeros(n)
        for a, b in mask:
            if a == b:
                M[a, b] = Fraction(1) if unipotent else rand_nonzero(rng, **kw)
            elif not diagonal and (a < b or not unipotent):
                M[a, b] = rand_fraction(rng, **kw)
        M = la.to_fractions(M)
        if n and not unipotent and la.det(M) == 0:
            for a in range(n):
                for b in range(a):
                    M[a, b] = Fraction(0)
        mats[v] = M
    return GroupElement(mats)
