"""Framed Jordan quiver tools: spectral idempotents, B-invariants, fiber sampling.

Points are (r, s, i, j) with r in the parabolic (upper triangular for the
complete flag), s in the dual coordinates (lower triangular), i an n x w
column block and j a w x n row block.  Indices into r's diagonal are 0-based
throughout the API.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import linalg as la
from .adhm import (
    GroupElement,
    RepPoint,
    Verdict,
    act,
    moment_components_at,
    moment_map,
    random_group_element,
)
from .poly import Polynomial, RationalFunction
from .quiver import FiltrationSpec, GenericFilteredRep, Quiver, double, generic_rep
from .rng import rand_distinct, rand_nonzero


class NotRSSError(ValueError):
    """The diagonal of r has a repeated entry (the point lies over the diagonal locus)."""


class SamplingError(RuntimeError):
    pass


@lru_cache(maxsize=None)
def jordan_rep(n: int, blocks: tuple[int, ...] | None = None, w: int = 1) -> GenericFilteredRep:
    """Generic framed Jordan data; ``blocks=None`` means the complete flag."""
    dq = double(Quiver.jordan())
    dims = {"1": n}
    filt = FiltrationSpec.complete(dims) if blocks is None else FiltrationSpec.from_blocks({"1": blocks})
    return generic_rep(dq, dims, {"1": w}, filt)


@lru_cache(maxsize=None)
def jordan_system(n: int, blocks: tuple[int, ...] | None = None, w: int = 1):
    rep = jordan_rep(n, blocks, w)
    return moment_map(rep.dq, rep.dims, rep.framing, rep.filtration, rep)


@dataclass
class RssCertificate:
    diagonal: list
    distinct: bool

    def to_json(self) -> dict:
        return {"diagonal": [str(x) for x in self.diagonal], "distinct": self.distinct}


@dataclass
class GSPoint:
    r: np.ndarray
    s: np.ndarray
    i: np.ndarray
    j: np.ndarray
    blocks: tuple[int, ...] | None = None
    certificate: RssCertificate | None = None

    @property
    def n(self) -> int:
        return self.r.shape[0]

    @property
    def w(self) -> int:
        return self.i.shape[1]

    def rep(self) -> GenericFilteredRep:
        return jordan_rep(self.n, self.blocks, self.w)

    def to_rep_point(self) -> RepPoint:
        rep = self.rep()
        s_name = rep.dq.op("r")
        return RepPoint(rep, {"r": self.r, s_name: self.s}, {"1": self.i}, {"1": self.j})

    @classmethod
    def from_rep_point(cls, x: RepPoint, blocks=None) -> GSPoint:
        s_name = x.rep.dq.op("r")
        return cls(x.C["r"], x.C[s_name], x.i["1"], x.j["1"], blocks)

    def values(self) -> list[Fraction]:
        return self.to_rep_point().assignment()

    def moment_components(self) -> list[Fraction]:
        return moment_components_at(self.to_rep_point())

    def on_fiber(self) -> bool:
        return all(c == 0 for c in self.moment_components())

    def to_json(self) -> dict:
        def mat(M):
            return {"rows": M.shape[0], "cols": M.shape[1],
                    "entries": [[str(Fraction(v)) for v in row] for row in M]}

        out = {"r": mat(self.r), "s": mat(self.s), "i": mat(self.i), "j": mat(self.j)}
        if self.blocks is not None:
            out["blocks"] = list(self.blocks)
        return out

    @classmethod
    def from_json(cls, data: dict) -> GSPoint:
        def mat(d):
            M = la.matrix([[Fraction(v) for v in row] for row in d["entries"]])
            if M.shape != (d["rows"], d["cols"]):
                raise ValueError("matrix shape does not match rows/cols")
            return M

        blocks = tuple(data["blocks"]) if data.get("blocks") is not None else None
        p = cls(mat(data["r"]), mat(data["s"]), mat(data["i"]), mat(data["j"]), blocks)
        p.validate()
        return p

    def validate(self):
        n = self.n
        if self.r.shape != (n, n) or self.s.shape != (n, n):
            raise ValueError("r and s must be n x n")
        if self.i.shape[0] != n or self.j.shape[1] != n or self.i.shape[1] != self.j.shape[0]:
            raise ValueError("i must be n x w and j must be w x n")
        if not self.to_rep_point().respects_masks():
            raise ValueError("r or s violates the filtration mask")


def rss_certificate(r: np.ndarray) -> RssCertificate:
    diag = [Fraction(r[k, k]) for k in range(r.shape[0])]
    return RssCertificate(diag, len(set(diag)) == len(diag))


# spectral idempotents --------------------------------------------------------


def m_operator(r: np.ndarray, iota: int) -> np.ndarray:
    """Product of (r - r_kk I) over k != iota, in ascending k."""
    n = r.shape[0]
    out = la.identity(n)
    for k in range(n):
        if k == iota:
            continue
        factor = r.copy()
        for a in range(n):
            factor[a, a] = factor[a, a] - r[k, k]
        out = la.mat_mul(out, factor)
    return out


def m_support_ok(M: np.ndarray, iota: int) -> bool:
    """Entries vanish outside rows <= iota <= columns."""
    for (a, b), v in np.ndenumerate(M):
        if (a > iota or b < iota) and not la._is_zero(v):
            return False
    return True


@dataclass
class SpectralProjectors:
    L: list
    M: list
    traces: list
    symbolic: bool = False

    def __len__(self):
        return len(self.L)


def spectral_projectors(r: np.ndarray) -> SpectralProjectors:
    """L^iota = M^iota / tr(M^iota); symbolic when r has Polynomial entries."""
    n = r.shape[0]
    symbolic = any(isinstance(v, Polynomial) for v in r.flat)
    if not symbolic:
        r = la.to_fractions(r)
        cert = rss_certificate(r)
        if not cert.distinct:
            raise NotRSSError("diagonal of r has repeated entries")
    Ms, Ls, ds = [], [], []
    for iota in range(n):
        M = m_operator(r, iota)
        d = la.trace(M)
        Ms.append(M)
        ds.append(d)
        L = np.empty(M.shape, dtype=object)
        if symbolic:
            ring = next(v.ring for v in r.flat if isinstance(v, Polynomial))
            d = ring.coerce(d)
            if d.is_zero():
                raise NotRSSError("symbolic trace vanishes identically")
            for idx, v in np.ndenumerate(M):
                L[idx] = RationalFunction(ring.coerce(v), d)
        else:
            for idx, v in np.ndenumerate(M):
                L[idx] = Fraction(v) / d
        Ls.append(L)
    return SpectralProjectors(Ls, Ms, ds, symbolic)


def idempotent_checks(proj: SpectralProjectors) -> dict:
    """L^a L^b = delta_ab L^a, sum L = I, upper triangular L, M support shape."""
    n = len(proj)
    out = {"orthogonal_idempotents": True, "sum_identity": True,
           "upper_triangular": True, "m_support": True}
    for a in range(n):
        for b in range(n):
            prod = la.mat_mul(proj.L[a], proj.L[b])
            target = proj.L[a] if a == b else la.zeros(n)
            if not la.matrices_equal(prod, target):
                out["orthogonal_idempotents"] = False
    total = la.zeros(n)
    for L in proj.L:
        total = total + L
    if not la.matrices_equal(total, la.identity(n)):
        out["sum_identity"] = False
    for iota in range(n):
        L = proj.L[iota]
        for (a, b), v in np.ndenumerate(L):
            if a > b and not la._is_zero(v):
                out["upper_triangular"] = False
        if not m_support_ok(proj.M[iota], iota):
            out["m_support"] = False
    out["all"] = all(out.values())
    return out


def trace_of_m_identity(r: np.ndarray, iota: int) -> bool:
    """tr(M^iota) equals the product of (r_ii - r_kk) over k != iota."""
    n = r.shape[0]
    expect = 1
    for k in range(n):
        if k != iota:
            expect = expect * (r[iota, iota] - r[k, k])
    diff = la.trace(m_operator(r, iota)) - expect
    return la._is_zero(diff)


# B-invariant functions ----------------------------------------------------------


@dataclass
class FGHK:
    F: list
    G: list
    H: list
    K: dict = field(default_factory=dict)  # (gamma, nu) with gamma < nu

    def to_json(self) -> dict:
        return {
            "F": [str(x) for x in self.F],
            "G": [str(x) for x in self.G],
            "H": [str(x) for x in self.H],
            "K": {f"{a + 1},{b + 1}": str(v) for (a, b), v in sorted(self.K.items())},
        }

    def flat(self) -> list:
        return list(self.F) + list(self.G) + list(self.H) + [self.K[k] for k in sorted(self.K)]


def fghk(point: GSPoint) -> FGHK:
    """F = tr(j L i), G = tr(L s), H = tr(L r), K = 1 / tr((L^nu - L^gamma) r)."""
    proj = spectral_projectors(point.r)
    n = point.n
    F, G, H = [], [], []
    for L in proj.L:
        F.append(Fraction(la.trace(la.mat_mul(la.mat_mul(point.j, L), point.i))))
        G.append(Fraction(la.trace(la.mat_mul(L, point.s))))
        H.append(Fraction(la.trace(la.mat_mul(L, point.r))))
    K = {}
    for g in range(n):
        for nu in range(g + 1, n):
            t = Fraction(la.trace(la.mat_mul(proj.L[nu] - proj.L[g], point.r)))
            K[(g, nu)] = 1 / t
    return FGHK(F, G, H, K)


def symbolic_trace_identities(n: int) -> dict:
    """Check tr(L^i r) = r_ii and tr((L^nu - L^gamma) r) = r_nu,nu - r_gamma,gamma."""
    rep = jordan_rep(n)
    r = rep.C["r"]
    proj = spectral_projectors(r)
    ring = rep.ring
    h_ok = True
    for iota, L in enumerate(proj.L):
        if not (la.trace(la.mat_mul(L, r)) == ring.coerce(r[iota, iota])):
            h_ok = False
    k_ok = True
    for g in range(n):
        for nu in range(g + 1, n):
            lhs = la.trace(la.mat_mul(proj.L[nu] - proj.L[g], r))
            if not (lhs == ring.coerce(r[nu, nu] - r[g, g])):
                k_ok = False
    return {"H_identity": h_ok, "K_identity": k_ok}


def cleared_invariants(n: int, w: int = 1) -> list[tuple[str, Polynomial]]:
    """Polynomial B-invariants tr(j M i), tr(M s), tr(M r) for each iota."""
    rep = jordan_rep(n, None, w)
    r, s = rep.C["r"], rep.C[rep.dq.op("r")]
    i, j = rep.i["1"], rep.j["1"]
    out = []
    for iota in range(n):
        M = m_operator(r, iota)
        out.append((f"tr(j M{iota + 1} i)", rep.ring.coerce(la.trace(la.mat_mul(la.mat_mul(j, M), i)))))
        out.append((f"tr(M{iota + 1} s)", rep.ring.coerce(la.trace(la.mat_mul(M, s)))))
        out.append((f"tr(M{iota + 1} r)", rep.ring.coerce(la.trace(la.mat_mul(M, r)))))
    return out


# fiber sampling -------------------------------------------------------------------


def _charpoly(A: np.ndarray) -> list[Fraction]:
    """Coefficients of det(tI - A), highest first (Faddeev-LeVerrier)."""
    n = A.shape[0]
    A = la.to_fractions(A)
    coeffs = [Fraction(1)]
    M = la.zeros(n)
    I = la.to_fractions(la.identity(n))
    c = Fraction(1)
    for k in range(1, n + 1):
        M = la.mat_mul(A, M) + I * c
        AM = la.mat_mul(A, M)
        c = -Fraction(la.trace(AM)) / k
        coeffs.append(c)
    return coeffs


def _strip(p: list) -> list:
    k = 0
    while k < len(p) and p[k] == 0:
        k += 1
    return p[k:]


def _poly_rem(a: list, b: list) -> list:
    r = list(a)
    while r and len(r) >= len(b):
        f = r[0] / b[0]
        for k in range(len(b)):
            r[k] -= f * b[k]
        r = _strip(r[1:])
    return r


def _poly_gcd_degree(a: list[Fraction], b: list[Fraction]) -> int:
    """Degree of gcd of univariate polynomials given highest coefficient first."""
    a, b = _strip(a), _strip(b)
    while b:
        a, b = b, _poly_rem(a, b)
    return len(a) - 1


def has_distinct_eigenvalues(r: np.ndarray) -> bool:
    cp = _charpoly(r)
    n = len(cp) - 1
    deriv = [c * (n - k) for k, c in enumerate(cp[:-1])]
    return n <= 1 or _poly_gcd_degree(cp, deriv) == 0


def _linear_system(system, known: dict[int, Fraction], unknown: list[int]):
    """Rows of the components after fixing ``known``; components must become affine."""
    pos = {v: k for k, v in enumerate(unknown)}
    A = la.zeros(len(system.components), len(unknown))
    b = [Fraction(0)] * len(system.components)
    for row, comp in enumerate(system.components):
        for e, c in comp.poly.terms.items():
            val = c
            hit = None
            for v, a in enumerate(e):
                if not a:
                    continue
                if v in known:
                    val *= known[v] ** a
                elif a == 1 and hit is None:
                    hit = v
                else:
                    raise ValueError("system is not affine in the unknowns")
            if hit is None:
                b[row] -= val
            else:
                A[row, pos[hit]] = A[row, pos[hit]] + val
    return A, b


def sample_fiber(n: int, rng, blocks: tuple[int, ...] | None = None, w: int = 1,
                 max_retries: int = 50) -> GSPoint:
    """Random point of mu^-1(0) with r regular semisimple.

    r and i are drawn at random; the moment equations are then linear in the
    entries of s and j, and a random point of their solution space is taken.
    """
    system = jordan_system(n, blocks, w)
    rep = system.rep
    r_slots = [k for k, sl in enumerate(rep.slots) if sl[0] == "C" and sl[1] == "r"]
    i_slots = [k for k, sl in enumerate(rep.slots) if sl[0] == "i"]
    unknown = [k for k in range(rep.nvars) if k not in r_slots and k not in i_slots]
    for _ in range(max_retries):
        diag = rand_distinct(rng, n)
        known = {}
        for k in r_slots:
            _, _, p, q = rep.slots[k]
            known[k] = diag[p] if p == q else rand_nonzero(rng)
        # zero entries in r or i land on special strata far more often than a
        # generic point would, so the free parameters are drawn nonzero
        for k in i_slots:
            known[k] = rand_nonzero(rng)
        A, b = _linear_system(system, known, unknown)
        sol = la.solve_linear(A, b)
        if sol is None:
            continue
        x = sol.point([rand_nonzero(rng) for _ in sol.kernel_basis])
        values = [Fraction(0)] * rep.nvars
        for k, v in known.items():
            values[k] = v
        for k, v in zip(unknown, x):
            values[k] = v
        pt = GSPoint.from_rep_point(RepPoint.from_values(rep, values), blocks)
        if blocks is None:
            cert = rss_certificate(pt.r)
        else:
            cert = RssCertificate([Fraction(pt.r[k, k]) for k in range(n)], has_distinct_eigenvalues(pt.r))
        if not cert.distinct:
            continue
        pt.certificate = cert
        if not pt.on_fiber():
            raise AssertionError("sampled point is off the fiber")
        return pt
    raise SamplingError(f"no admissible fiber point after {max_retries} draws")


# the map P ----------------------------------------------------------------------------


def gs_map_P(point: GSPoint) -> list[Fraction]:
    """(r_11..r_nn, G_1..G_n); G_iota = tr(L^iota s) plays the role of s'_ii."""
    if point.blocks is not None and any(b != 1 for b in point.blocks):
        raise ValueError("the map P is defined for the complete flag only")
    cert = rss_certificate(point.r)
    if not cert.distinct:
        raise NotRSSError("point is not in the rss locus")
    return cert.diagonal + fghk(point).G


def in_diagonal_locus(v) -> bool:
    n = len(v) // 2
    head = list(v[:n])
    return len(set(head)) < n


def surjectivity_witness(target) -> GSPoint:
    target = [Fraction(t) for t in target]
    if len(target) % 2 or not target:
        raise ValueError("target must have even positive length 2n")
    n = len(target) // 2
    if in_diagonal_locus(target):
        raise ValueError("target lies in the diagonal locus (repeated first-half entries)")
    r, s = la.zeros(n), la.zeros(n)
    for k in range(n):
        r[k, k] = target[k]
        s[k, k] = target[n + k]
    pt = GSPoint(la.to_fractions(r), la.to_fractions(s),
                 la.to_fractions(la.zeros(n, 1)), la.to_fractions(la.zeros(1, n)))
    pt.certificate = rss_certificate(pt.r)
    return pt


def act_gs(b: GroupElement, point: GSPoint) -> GSPoint:
    out = GSPoint.from_rep_point(act(b, point.to_rep_point()), point.blocks)
    return out


def random_borel(n: int, rng, blocks=None, unipotent=False) -> GroupElement:
    rep = jordan_rep(n, blocks)
    return random_group_element(rep.dims, rep.filtration, rng, unipotent=unipotent)


def orbit_consistency(x: GSPoint, m: int, rng, action=None, group_sampler=None) -> Verdict:
    """P(b.x) == P(x) for m sampled Borel elements; stops at the first failure."""
    action = action or act_gs
    group_sampler = group_sampler or (lambda g: random_borel(x.n, g))
    base = gs_map_P(x)
    for k in range(m):
        b = group_sampler(rng)
        if gs_map_P(action(b, x)) != base:
            return Verdict(False, k + 1, b, f"P changed under sample {k + 1}")
    return Verdict(True, m)


def random_rss(n: int, rng) -> np.ndarray:
    """Upper triangular r with distinct random diagonal and nonzero off-diagonal entries."""
    r = la.zeros(n)
    for k, d in enumerate(rand_distinct(rng, n)):
        r[k, k] = d
    for a in range(n):
        for b in range(a + 1, n):
            r[a, b] = rand_nonzero(rng)
    return la.to_fractions(r)
