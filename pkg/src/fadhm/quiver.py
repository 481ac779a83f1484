"""Quivers, their doubles, filtrations, block masks, and generic filtered points."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .linalg import zeros
from .poly import PolyRing


class QuiverError(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    name: str
    tail: str
    head: str
    op_name: str | None = None


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise QuiverError("duplicate vertex ids")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise QuiverError("duplicate arrow names")
        for a in self.arrows:
            if a.tail not in vs or a.head not in vs:
                raise QuiverError(f"arrow {a.name} references an undeclared vertex")

    @classmethod
    def jordan(cls, loop: str = "r", op: str = "s") -> Quiver:
        return cls(("1",), (Arrow(loop, "1", "1", op),))

    @classmethod
    def linear(cls, k: int) -> Quiver:
        """Type A_k: vertices 1..k, arrows a_i : i -> i+1."""
        verts = tuple(str(i) for i in range(1, k + 1))
        arrows = tuple(
            Arrow(f"a{i}" if k > 2 else "a", str(i), str(i + 1)) for i in range(1, k)
        )
        return cls(verts, arrows)


@dataclass(frozen=True)
class DArrow:
    name: str
    tail: str
    head: str
    eps: int
    op: str
    base: str

    @property
    def is_forward(self) -> bool:
        return self.eps == 1


@dataclass(frozen=True)
class DoubleQuiver:
    base: Quiver
    arrows: tuple[DArrow, ...]

    def __getitem__(self, name: str) -> DArrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise KeyError(name)

    @property
    def vertices(self):
        return self.base.vertices

    def forward(self):
        return [a for a in self.arrows if a.eps == 1]

    def opposite(self):
        return [a for a in self.arrows if a.eps == -1]

    def op(self, name: str) -> str:
        return self[name].op


def double(Q: Quiver) -> DoubleQuiver:
    """Double quiver: each arrow gets a reversed partner; eps = +1 / -1."""
    fwd, rev = [], []
    taken = {a.name for a in Q.arrows}
    for a in Q.arrows:
        opn = a.op_name or f"{a.name}op"
        if opn in taken:
            raise QuiverError(f"opposite arrow name {opn!r} collides with another arrow")
        taken.add(opn)
        fwd.append(DArrow(a.name, a.tail, a.head, 1, opn, a.name))
        rev.append(DArrow(opn, a.head, a.tail, -1, a.name, a.name))
    return DoubleQuiver(Q, tuple(fwd + rev))


@dataclass(frozen=True)
class FiltrationSpec:
    """Per-vertex weakly increasing dimension sequences ending at v."""

    steps: Mapping[str, tuple[int, ...]]

    @classmethod
    def complete(cls, dims: Mapping[str, int]) -> FiltrationSpec:
        return cls({v: tuple(range(1, n + 1)) if n else (0,) for v, n in dims.items()})

    @classmethod
    def from_blocks(cls, blocks: Mapping[str, tuple[int, ...]]) -> FiltrationSpec:
        out = {}
        for v, alpha in blocks.items():
            if any(a <= 0 for a in alpha):
                raise QuiverError(f"block sizes at vertex {v} must be positive")
            acc, seq = 0, []
            for a in alpha:
                acc += a
                seq.append(acc)
            out[v] = tuple(seq)
        return cls(out)

    def at(self, vertex: str, dim: int) -> tuple[int, ...]:
        seq = self.steps.get(vertex)
        if seq is None:
            return (dim,)
        return tuple(seq)

    def blocks(self, vertex: str, dim: int) -> tuple[int, ...]:
        """Positive block sizes alpha derived from the filtration."""
        prev, out = 0, []
        for g in self.at(vertex, dim):
            if g > prev:
                out.append(g - prev)
            prev = g
        return tuple(out)

    def validate(self, dims: Mapping[str, int]) -> list[tuple[str, str]]:
        errs = []
        for v, seq in self.steps.items():
            path = f"filtration.{v}"
            if v not in dims:
                errs.append((path, "filtration given for an undeclared vertex"))
                continue
            if not seq:
                errs.append((path, "empty filtration"))
                continue
            if any(not isinstance(g, int) or g < 0 for g in seq):
                errs.append((path, "entries must be nonnegative integers"))
                continue
            if any(a > b for a, b in zip(seq, seq[1:])):
                errs.append((path, "entries must be weakly increasing"))
            if seq[-1] != dims[v]:
                errs.append((path, f"last entry {seq[-1]} != dimension {dims[v]}"))
        return errs


def _levels(ft: tuple[int, ...], fh: tuple[int, ...]):
    N = max(len(ft), len(fh))
    ft = ft + (ft[-1],) * (N - len(ft))
    fh = fh + (fh[-1],) * (N - len(fh))
    return ft, fh


def filtered_mask(rows: int, cols: int, f_tail: tuple[int, ...], f_head: tuple[int, ...]) -> np.ndarray:
    """Boolean mask of maps C^cols -> C^rows sending each tail step into the head step."""
    if f_tail[-1] != cols or f_head[-1] != rows:
        raise QuiverError("filtration last entry must equal the dimension")
    ft, fh = _levels(f_tail, f_head)
    mask = np.ones((rows, cols), dtype=bool)
    for gt, gh in zip(ft, fh):
        # columns q <= gt (1-based) must land in rows p <= gh
        mask[gh:, :gt] = False
    return mask


@dataclass(frozen=True)
class BlockMask:
    rows: int
    cols: int
    allowed: frozenset

    @classmethod
    def from_array(cls, arr: np.ndarray) -> BlockMask:
        rows, cols = np.nonzero(arr)
        return cls(arr.shape[0], arr.shape[1], frozenset(zip(map(int, rows), map(int, cols))))

    def array(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=bool)
        for p, q in self.allowed:
            out[p, q] = True
        return out

    def transpose(self) -> BlockMask:
        return BlockMask(self.cols, self.rows, frozenset((q, p) for p, q in self.allowed))

    def __len__(self):
        return len(self.allowed)


def block_mask(dq: DoubleQuiver, arrow: str, dims: Mapping[str, int], filt: FiltrationSpec) -> BlockMask:
    a = dq[arrow]
    base = dq[a.base]
    vt, vh = dims[base.tail], dims[base.head]
    m = filtered_mask(vh, vt, filt.at(base.tail, vt), filt.at(base.head, vh))
    bm = BlockMask.from_array(m)
    return bm if a.is_forward else bm.transpose()


def loop_mask(vertex: str, dims: Mapping[str, int], filt: FiltrationSpec) -> BlockMask:
    """Mask of the parabolic Lie algebra at a vertex (block upper triangular)."""
    n = dims[vertex]
    f = filt.at(vertex, n)
    return BlockMask.from_array(filtered_mask(n, n, f, f))


def group_dims(dims: Mapping[str, int], filt: FiltrationSpec) -> tuple[dict, int]:
    per = {v: len(loop_mask(v, dims, filt)) for v in dims}
    return per, sum(per.values())


def _sanitize(v: str) -> str:
    return re.sub(r"[^A-Za-z0-9_]", "_", str(v))


def _idx(*ks, wide: bool) -> str:
    return "_".join(str(k) for k in ks) if wide else "".join(str(k) for k in ks)


@dataclass
class GenericFilteredRep:
    """Symbolic point (C, i, j): fresh variables on every allowed position."""

    dq: DoubleQuiver
    dims: dict
    framing: dict
    filtration: FiltrationSpec
    ring: PolyRing
    C: dict  # arrow name -> object matrix
    i: dict  # vertex -> v x w matrix
    j: dict  # vertex -> w x v matrix
    masks: dict = field(default_factory=dict)
    slots: list = field(default_factory=list)  # (kind, key, row, col) per variable, ring order

    @property
    def nvars(self) -> int:
        return self.ring.nvars


def generic_rep(dq: DoubleQuiver, dims: Mapping[str, int], framing: Mapping[str, int] | None,
                filt: FiltrationSpec) -> GenericFilteredRep:
    dims = {v: int(dims.get(v, 0)) for v in dq.vertices}
    framing = {v: int(w) for v, w in (framing or {}).items() if int(w) > 0}
    wide = max(list(dims.values()) + list(framing.values()) + [0]) > 9
    masks = {a.name: block_mask(dq, a.name, dims, filt) for a in dq.arrows}
    names: list[str] = []
    slots: list[tuple] = []
    for a in dq.arrows:
        for p, q in sorted(masks[a.name].allowed):
            names.append(f"{a.name}{_idx(p + 1, q + 1, wide=wide)}")
            slots.append(("C", a.name, p, q))
    framed = [v for v in dq.vertices if framing.get(v, 0) and dims[v]]
    single = len(framed) == 1

    def fname(letter, v, p, q, w):
        pre = letter if single else f"{letter}{_sanitize(v)}_"
        if w == 1:
            return pre + str(p + 1 if letter == "i" else q + 1)
        return pre + _idx(p + 1, q + 1, wide=wide)

    for v in framed:
        w = framing[v]
        for p in range(dims[v]):
            for q in range(w):
                names.append(fname("i", v, p, q, w))
                slots.append(("i", v, p, q))
    for v in framed:
        w = framing[v]
        for p in range(w):
            for q in range(dims[v]):
                names.append(fname("j", v, p, q, w))
                slots.append(("j", v, p, q))
    ring = PolyRing(names)
    gens = ring.gens()
    C = {}
    for a in dq.arrows:
        vt, vh = dims[a.tail], dims[a.head]
        C[a.name] = zeros(vh, vt)
    I = {v: zeros(dims[v], framing[v]) for v in framed}
    J = {v: zeros(framing[v], dims[v]) for v in framed}
    for g, (kind, key, p, q) in zip(gens, slots):
        {"C": C, "i": I, "j": J}[kind][key][p, q] = g
    return GenericFilteredRep(dq, dims, framing, filt, ring, C, I, J, masks, slots)
