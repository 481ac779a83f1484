"""Degree-bounded invariant theory for unipotent and Borel actions.

A connected unipotent group fixes f iff f is killed by the derivations of a
set of Lie algebra generators, so invariants of bounded degree are the joint
kernel of a finite linear system on monomial coefficients.  Semi-invariants
additionally fix a torus weight, which for the diagonal torus just selects
monomials of that weight.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Callable, Sequence

import numpy as np

from . import linalg as la
from .groebner import IdealBasis, normal_form
from .poly import Exp, Polynomial, PolyRing, RationalFunction, monomials_up_to
from .quiver import FiltrationSpec, GenericFilteredRep, Quiver, filtered_mask, loop_mask


class DerivationError(ValueError):
    pass


@dataclass
class DerivationOperator:
    ring: PolyRing
    images: dict  # variable index -> Polynomial

    def __call__(self, f: Polynomial) -> Polynomial:
        out = self.ring.zero
        for k, img in self.images.items():
            if img.is_zero():
                continue
            df = f.diff(k)
            if not df.is_zero():
                out = out + img * df
        return out

    def of(self, name: str) -> Polynomial:
        return self.images.get(self.ring.index[name], self.ring.zero)

    def is_linear(self) -> bool:
        return all(all(sum(e) == 1 for e in p.terms) for p in self.images.values())


# matrix spaces carrying a parabolic action ----------------------------------------


@dataclass
class SpaceBlock:
    """One matrix of coordinates and how the vertex groups act on it.

    kind: "hom" (u_h B u_t^-1), "dual" (same, then projected to the mask),
    "left" (u_v i), "right" (j u_v^-1).
    """

    name: str
    M: np.ndarray
    kind: str
    head: str | None
    tail: str | None
    mask: frozenset = frozenset()


@dataclass
class MatrixSpace:
    ring: PolyRing
    blocks: list[SpaceBlock]
    dims: dict
    filtration: FiltrationSpec
    slots: list = field(default_factory=list)  # (block index, row, col) per variable

    def coordinates(self) -> list[tuple[str, int]]:
        return [(v, k) for v, n in self.dims.items() for k in range(n)]


def space_from_rep(rep: GenericFilteredRep) -> MatrixSpace:
    blocks = []
    for a in rep.dq.arrows:
        blocks.append(SpaceBlock(a.name, rep.C[a.name], "hom" if a.is_forward else "dual",
                                 a.head, a.tail, rep.masks[a.name].allowed))
    for v, M in rep.i.items():
        blocks.append(SpaceBlock(f"i{v}", M, "left", v, None))
    for v, M in rep.j.items():
        blocks.append(SpaceBlock(f"j{v}", M, "right", None, v))
    return _attach_slots(MatrixSpace(rep.ring, blocks, dict(rep.dims), rep.filtration))


def arrow_space(Q: Quiver, dims: dict, filt: FiltrationSpec | None = None) -> MatrixSpace:
    """Filtered maps along the arrows of Q only (no opposite arrows, no framing)."""
    dims = {v: int(dims[v]) for v in Q.vertices}
    filt = filt or FiltrationSpec.complete(dims)
    wide = max(dims.values()) > 9
    names, pending = [], []
    for a in Q.arrows:
        mask = filtered_mask(dims[a.head], dims[a.tail], filt.at(a.tail, dims[a.tail]),
                             filt.at(a.head, dims[a.head]))
        rows, cols = np.nonzero(mask)
        allowed = sorted(zip(map(int, rows), map(int, cols)))
        for p, q in allowed:
            sep = "_" if wide else ""
            names.append(f"{a.name}{p + 1}{sep}{q + 1}")
        pending.append((a, allowed))
    ring = PolyRing(names)
    gens = iter(ring.gens())
    blocks = []
    for a, allowed in pending:
        M = la.zeros(dims[a.head], dims[a.tail])
        for p, q in allowed:
            M[p, q] = next(gens)
        blocks.append(SpaceBlock(a.name, M, "hom", a.head, a.tail, frozenset(allowed)))
    return _attach_slots(MatrixSpace(ring, blocks, dims, filt))


def matrix_space(n: int, m: int, name: str = "a") -> MatrixSpace:
    """M_{n x m} with the Borel of GL_n acting on the left."""
    wide = max(n, m) > 9
    sep = "_" if wide else ""
    ring = PolyRing([f"{name}{p + 1}{sep}{q + 1}" for p in range(n) for q in range(m)])
    M = la.zeros(n, m)
    for g, (p, q) in zip(ring.gens(), [(p, q) for p in range(n) for q in range(m)]):
        M[p, q] = g
    dims = {"1": n}
    return _attach_slots(MatrixSpace(ring, [SpaceBlock(name, M, "left", "1", None)], dims,
                                     FiltrationSpec.complete(dims)))


def _attach_slots(space: MatrixSpace) -> MatrixSpace:
    slots = [None] * space.ring.nvars
    for b, blk in enumerate(space.blocks):
        for (p, q), v in np.ndenumerate(blk.M):
            if isinstance(v, Polynomial):
                k = next(iter(v.terms))
                slots[k.index(1)] = (b, p, q)
    space.slots = slots
    return space


def elementary(n: int, k: int, l: int) -> np.ndarray:
    E = la.zeros(n)
    E[k, l] = 1
    return E


def in_nilradical(e: np.ndarray, vertex: str, dims, filt: FiltrationSpec) -> bool:
    """Support of e lies strictly above the diagonal blocks of the parabolic."""
    n = dims[vertex]
    blocks = filt.blocks(vertex, n)
    block_of = [b for b, size in enumerate(blocks) for _ in range(size)]
    for (a, b), v in np.ndenumerate(e):
        if v != 0 and block_of[a] >= block_of[b]:
            return False
    return True


def derivation_for(space: MatrixSpace, vertex: str, e: np.ndarray, check_nilpotent: bool = True) -> DerivationOperator:
    """Infinitesimal action of the Lie algebra element e placed at one vertex."""
    if vertex not in space.dims:
        raise DerivationError(f"unknown vertex {vertex!r}")
    if check_nilpotent and not in_nilradical(e, vertex, space.dims, space.filtration):
        raise DerivationError("element is not in the nilradical of the parabolic")
    mask = loop_mask(vertex, space.dims, space.filtration).allowed
    for (a, b), v in np.ndenumerate(e):
        if v != 0 and (a, b) not in mask:
            raise DerivationError("element is not in the parabolic Lie algebra")
    ring = space.ring
    images: dict[int, Polynomial] = {}
    deltas = []
    for blk in space.blocks:
        M = blk.M
        d = la.zeros(*M.shape)
        if blk.kind in ("hom", "dual"):
            if blk.head == vertex:
                d = d + la.mat_mul(e, M)
            if blk.tail == vertex:
                d = d - la.mat_mul(M, e)
        elif blk.kind == "left" and blk.head == vertex:
            d = la.mat_mul(e, M)
        elif blk.kind == "right" and blk.tail == vertex:
            d = -la.mat_mul(M, e)
        if blk.kind == "hom" and blk.mask:
            for (p, q), v in np.ndenumerate(d):
                if (p, q) not in blk.mask and not la._is_zero(v):
                    raise DerivationError(f"action leaves the filtered space at block {blk.name}")
        deltas.append(d)
    for k, (b, p, q) in enumerate(space.slots):
        images[k] = ring.coerce(deltas[b][p, q])
    return DerivationOperator(ring, images)


def simple_root_derivations(space: MatrixSpace, vertices: Sequence[str] | None = None) -> list[DerivationOperator]:
    """Derivations of E_{k,k+1} at each vertex; these generate the upper nilradical.

    At a vertex with a partial flag the superdiagonal is not inside the
    nilradical, so every elementary nilradical element is used there instead.
    """
    out = []
    for v in vertices or list(space.dims):
        n = space.dims[v]
        if any(b != 1 for b in space.filtration.blocks(v, n)):
            out.extend(nilradical_derivations(space, [v]))
            continue
        for k in range(n - 1):
            out.append(derivation_for(space, v, elementary(n, k, k + 1)))
    return out


def nilradical_derivations(space: MatrixSpace, vertices=None) -> list[DerivationOperator]:
    """One derivation per elementary matrix of the nilradical of each parabolic."""
    out = []
    for v in vertices or list(space.dims):
        n = space.dims[v]
        for a in range(n):
            for b in range(n):
                e = elementary(n, a, b)
                if a != b and in_nilradical(e, v, space.dims, space.filtration):
                    out.append(derivation_for(space, v, e))
    return out


def torus_weights(space: MatrixSpace) -> list[tuple[int, ...]]:
    """Weight of each variable under the diagonal torus, over space.coordinates()."""
    coords = space.coordinates()
    pos = {c: k for k, c in enumerate(coords)}
    out = []
    for b, p, q in space.slots:
        blk = space.blocks[b]
        w = [0] * len(coords)
        if blk.kind in ("hom", "dual", "left"):
            w[pos[(blk.head, p)]] += 1
        if blk.kind in ("hom", "dual"):
            w[pos[(blk.tail, q)]] -= 1
        if blk.kind == "right":
            w[pos[(blk.tail, q)]] -= 1
        out.append(tuple(w))
    return out


# graded kernels -------------------------------------------------------------------------


@dataclass
class GradedSubspace:
    degree: int
    basis: list[Polynomial]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def to_json(self) -> dict:
        return {"degree": self.degree, "dim": self.dim, "basis": [f.to_text() for f in self.basis]}


def _kernel_on(ring: PolyRing, monos: list[Exp], derivations) -> list[Polynomial]:
    if not monos:
        return []
    col_of = {m: c for c, m in enumerate(monos)}
    rows: dict[tuple, dict] = {}
    for di, D in enumerate(derivations):
        for c, m in enumerate(monos):
            img = D(ring.monomial(m))
            for e, v in img.terms.items():
                rows.setdefault((di, e), {})[c] = v
    kernel = la.nullspace_rows(list(rows.values()), len(monos))
    out = []
    for vec in kernel:
        out.append(Polynomial(ring, {m: v for m, v in zip(monos, vec) if v}))
    del col_of
    return out


def invariant_space(ring: PolyRing, derivations, d: int,
                    variables: Sequence[str] | None = None) -> GradedSubspace:
    """Basis of {f : deg f <= d, D f = 0 for every derivation}.

    Linear derivations preserve degree, so each homogeneous degree is solved
    separately.
    """
    monos = _monomials(ring, d, variables)
    basis: list[Polynomial] = []
    if all(D.is_linear() for D in derivations):
        for deg in range(d + 1):
            level = [m for m in monos if sum(m) == deg]
            basis.extend(_kernel_on(ring, level, derivations))
    else:
        basis = _kernel_on(ring, monos, derivations)
    return GradedSubspace(d, basis)


def semi_invariant_space(ring: PolyRing, derivations, weights: Sequence[tuple[int, ...]],
                         target: tuple[int, ...], d: int) -> GradedSubspace:
    """Degree <= d polynomials killed by the derivations and of torus weight ``target``."""
    target = tuple(target)
    monos = [m for m in _monomials(ring, d, None) if _weight(m, weights) == target]
    basis: list[Polynomial] = []
    for deg in range(d + 1):
        level = [m for m in monos if sum(m) == deg]
        basis.extend(_kernel_on(ring, level, derivations))
    return GradedSubspace(d, basis)


def _weight(m: Exp, weights) -> tuple[int, ...]:
    acc = [0] * len(weights[0]) if weights else []
    for a, w in zip(m, weights):
        if a:
            for k, x in enumerate(w):
                acc[k] += a * x
    return tuple(acc)


def _monomials(ring: PolyRing, d: int, variables) -> list[Exp]:
    if variables is None:
        return monomials_up_to(ring.nvars, d)
    idx = [ring.index[v] for v in variables]
    out = []
    for sub in monomials_up_to(len(idx), d):
        e = [0] * ring.nvars
        for k, a in zip(idx, sub):
            e[k] = a
        out.append(tuple(e))
    return out


def in_span(f: Polynomial, basis: list[Polynomial]) -> bool:
    monos = sorted({e for g in basis + [f] for e in g.terms})
    col = {m: k for k, m in enumerate(monos)}
    rows = [{col[e]: c for e, c in g.terms.items()} for g in basis]
    r0 = len(la.rref_rows(rows, len(monos))[0])
    rows.append({col[e]: c for e, c in f.terms.items()})
    return len(la.rref_rows(rows, len(monos))[0]) == r0


def diagonal_variables(space: MatrixSpace) -> list[str]:
    """Names of the diagonal coordinates of square hom blocks."""
    out = []
    for k, (b, p, q) in enumerate(space.slots):
        blk = space.blocks[b]
        if blk.kind == "hom" and p == q and blk.M.shape[0] == blk.M.shape[1]:
            out.append(space.ring.names[k])
    return out


def polynomial_count(nvars: int, d: int) -> int:
    """Dimension of polynomials of degree <= d in nvars variables."""
    return comb(nvars + d, d)


def unipotent_invariant_dimension_check(Q: Quiver, n: int, d: int) -> dict:
    """Compare dim of U-invariants of degree <= d against the diagonal polynomial count."""
    dims = {v: n for v in Q.vertices}
    space = arrow_space(Q, dims)
    ders = simple_root_derivations(space)
    inv = invariant_space(space.ring, ders, d)
    diag = diagonal_variables(space)
    expected = polynomial_count(len(diag), d)
    diag_poly = invariant_space(space.ring, [], d, diag)
    return {
        "nvars": space.ring.nvars,
        "diagonal_variables": diag,
        "dim": inv.dim,
        "expected": expected,
        "match": inv.dim == expected,
        "diagonal_contained": all(in_span(f, inv.basis) for f in diag_poly.basis),
    }


# bideterminants ------------------------------------------------------------------------


@dataclass(frozen=True)
class Bitableau:
    """Rows of row-index sets D and column-index sets E (1-based, strictly increasing)."""

    D: tuple[tuple[int, ...], ...]
    E: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.D) != len(self.E):
            raise ValueError("D and E need the same number of rows")
        for d, e in zip(self.D, self.E):
            if len(d) != len(e):
                raise ValueError("row lengths of D and E differ")
            if list(d) != sorted(set(d)) or list(e) != sorted(set(e)):
                raise ValueError("index rows must be strictly increasing")

    def is_trailing(self, n: int) -> bool:
        return all(tuple(d) == tuple(range(d[0], n + 1)) for d in self.D if d)


def bideterminant(bt: Bitableau, A: np.ndarray):
    """Product over rows of det A[D_i, E_i]."""
    rows, cols = A.shape
    out = 1
    for d, e in zip(bt.D, bt.E):
        if any(k < 1 or k > rows for k in d) or any(k < 1 or k > cols for k in e):
            raise IndexError("bitableau index out of range")
        sub = A[np.ix_([k - 1 for k in d], [k - 1 for k in e])]
        out = out * la.det(sub)
    return out


def trailing_minors(n: int, m: int) -> list[Bitableau]:
    """Single-row bitableaux with D = (p, ..., n)."""
    out = []
    for p in range(n, 0, -1):
        size = n - p + 1
        if size > m:
            break
        for E in combinations(range(1, m + 1), size):
            out.append(Bitableau((tuple(range(p, n + 1)),), (E,)))
    return out


def trailing_bitableaux(n: int, m: int, rows: int = 2) -> list[Bitableau]:
    """Products of up to ``rows`` trailing minors, longest rows first."""
    singles = trailing_minors(n, m)
    out = list(singles)
    if rows >= 2:
        for a in range(len(singles)):
            for b in range(a, len(singles)):
                x, y = singles[a], singles[b]
                if len(x.D[0]) < len(y.D[0]):
                    x, y = y, x
                out.append(Bitableau(x.D + y.D, x.E + y.E))
    return out


def bitableau_character(bt: Bitableau, b: np.ndarray) -> Fraction:
    """Value of the character of a left Borel factor: prod over rows of prod_{k in D_i} b_kk."""
    val = Fraction(1)
    for d in bt.D:
        for k in d:
            val *= Fraction(b[k - 1, k - 1])
    return val


# randomized invariance --------------------------------------------------------------------


@dataclass
class InvarianceVerdict:
    status: str  # "invariant" | "counterexample" | "inconclusive"
    checked: int
    counterexample: object = None
    resampled: int = 0

    @property
    def passed(self) -> bool:
        return self.status == "invariant"

    def to_json(self) -> dict:
        return {"status": self.status, "checked": self.checked, "resampled": self.resampled}


def check_invariance(f, action: Callable, group_sampler: Callable, point_sampler: Callable,
                     n_samples: int, rng, character: Callable | None = None,
                     max_resample: int = 1000) -> InvarianceVerdict:
    """Test f(g.x) == chi(g) f(x) exactly on sampled (g, x).

    ``f`` is a Polynomial, RationalFunction, or callable on points; points are
    whatever ``point_sampler`` returns and ``action(g, x)`` accepts.  Draws
    hitting a vanishing denominator are redrawn, up to ``max_resample``.
    """
    evaluate = f.evaluate if isinstance(f, (Polynomial, RationalFunction)) else f
    resampled = 0
    k = 0
    while k < n_samples:
        g, x = group_sampler(rng), point_sampler(rng)
        try:
            before = evaluate(x)
            after = evaluate(action(g, x))
        except ZeroDivisionError:
            resampled += 1
            if resampled > max_resample:
                return InvarianceVerdict("inconclusive", k, None, resampled)
            continue
        scale = character(g) if character is not None else 1
        if after != scale * before:
            return InvarianceVerdict("counterexample", k + 1, (g, x), resampled)
        k += 1
    return InvarianceVerdict("invariant", n_samples, None, resampled)


# relations among generators ------------------------------------------------------------


@dataclass
class Relation:
    coefficients: dict  # exponent tuple over generators -> Fraction

    def to_text(self, names: Sequence[str] | None = None) -> str:
        k = len(next(iter(self.coefficients)))
        ring = PolyRing(names or [f"g{j + 1}" for j in range(k)])
        return Polynomial(ring, self.coefficients).to_text()


def relations_up_to_degree(generators: Sequence[Polynomial], basis: IdealBasis | None,
                           d: int) -> list[Relation]:
    """Basis of linear relations among normal forms of generator monomials of degree <= d."""
    k = len(generators)
    if not generators:
        return []
    ring = generators[0].ring
    exps = monomials_up_to(k, d)
    images = []
    for e in exps:
        p = ring.one
        for g, a in zip(generators, e):
            if a:
                p = p * g**a
        images.append(normal_form(p, basis) if basis is not None else p)
    monos = sorted({m for img in images for m in img.terms})
    row_of = {m: r for r, m in enumerate(monos)}
    rows = [dict() for _ in monos]
    for c, img in enumerate(images):
        for m, v in img.terms.items():
            rows[row_of[m]][c] = v
    kernel = la.nullspace_rows(rows, len(exps))
    return [Relation({e: v for e, v in zip(exps, vec) if v}) for vec in kernel]
