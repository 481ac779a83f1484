"""Monomial orders as sort keys on dense exponent tuples."""

from __future__ import annotations

from dataclasses import dataclass
from operator import neg

from .poly import Exp, PolyRing

KINDS = ("lex", "degrevlex", "block")


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order.

    ``priority`` lists variable indices from most to least significant.  For
    ``block`` orders ``blocks`` partitions the variables; blocks are compared
    in sequence and each block is compared by degrevlex.
    """

    kind: str
    priority: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown order kind {self.kind!r}")
        if self.kind == "block":
            flat = sorted(k for b in self.blocks for k in b)
            if flat != sorted(self.priority) or not self.blocks:
                raise ValueError("blocks must partition the variables")
        object.__setattr__(self, "key", _make_key(self))

    @classmethod
    def lex(cls, ring: PolyRing, priority=None) -> MonomialOrder:
        return cls("lex", _priority(ring, priority))

    @classmethod
    def degrevlex(cls, ring: PolyRing, priority=None) -> MonomialOrder:
        return cls("degrevlex", _priority(ring, priority))

    @classmethod
    def block(cls, ring: PolyRing, blocks) -> MonomialOrder:
        blocks = tuple(tuple(_priority(ring, b)) for b in blocks)
        return cls("block", tuple(k for b in blocks for k in b), blocks)

    @classmethod
    def from_name(cls, name: str, ring: PolyRing) -> MonomialOrder:
        if name == "lex":
            return cls.lex(ring)
        if name in ("degrevlex", "grevlex"):
            return cls.degrevlex(ring)
        raise ValueError(f"unknown order {name!r}; block orders need explicit blocks")

    def describe(self, ring: PolyRing | None = None) -> dict:
        out = {"kind": self.kind}
        if ring is not None:
            if self.kind == "block":
                out["blocks"] = [[ring.names[k] for k in b] for b in self.blocks]
            else:
                out["priority"] = [ring.names[k] for k in self.priority]
        return out

    def compare(self, a: Exp, b: Exp) -> int:
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)


def _priority(ring: PolyRing, priority) -> tuple[int, ...]:
    if priority is None:
        return tuple(range(ring.nvars))
    return tuple(ring.index[p] if isinstance(p, str) else int(p) for p in priority)


def _make_key(order: MonomialOrder):
    if order.kind == "lex":
        idx = order.priority
        if idx == tuple(range(len(idx))):
            return lambda e: e
        return lambda e: tuple(e[k] for k in idx)
    if order.kind == "degrevlex":
        rev = order.priority[::-1]
        return lambda e: (sum(e),) + tuple(map(neg, (e[k] for k in rev)))
    revs = [b[::-1] for b in order.blocks]

    def key(e):
        out = []
        for rev in revs:
            out.append(sum(e[k] for k in rev))
            out.extend(-e[k] for k in rev)
        return tuple(out)

    return key
