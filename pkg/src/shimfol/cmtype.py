"""Orbit and signature data shared by the unitary-case modules.

An orbit is the set of embeddings of K over one prime of L above p, cyclically
permuted by Frobenius (index i -> i+1). For an inert prime the conjugate of
index i is i + size/2 in the same orbit. For a split prime only the P-side
orbit is stored; its mirror carries signature d - f(i) and the conjugate of
(i, P) is (i, P-bar).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "DatumError",
    "OrbitDatum",
    "Embedding",
    "Pair",
    "CMTypeDatum",
    "check_signature",
    "SPLIT",
    "INERT",
]

SPLIT = "split"
INERT = "inert"


class DatumError(ValueError):
    pass


@dataclass(frozen=True)
class OrbitDatum:
    size: int
    kind: str = SPLIT

    def __post_init__(self):
        if self.kind not in (SPLIT, INERT):
            raise DatumError(f"unknown orbit kind {self.kind!r}")
        if self.size < 1:
            raise DatumError("orbit size must be positive")
        if self.kind == INERT and self.size % 2:
            raise DatumError("an inert orbit has even size")

    @property
    def half_shift(self) -> int:
        if self.kind != INERT:
            raise DatumError("half-shift is only defined for inert orbits")
        return self.size // 2


def check_signature(d: int, f: Sequence[int], orbit: OrbitDatum) -> tuple[int, ...]:
    f = tuple(int(x) for x in f)
    if d < 1:
        raise DatumError("d must be >= 1")
    if len(f) != orbit.size:
        raise DatumError(f"signature has {len(f)} entries, orbit has {orbit.size}")
    for i, v in enumerate(f):
        if not 0 <= v <= d:
            raise DatumError(f"f({i}) = {v} outside [0, {d}]")
    if orbit.kind == INERT:
        m = orbit.half_shift
        for i in range(orbit.size):
            if f[i] + f[(i + m) % orbit.size] != d:
                raise DatumError(f"inert orbit needs f({i}) + f({(i + m) % orbit.size}) = {d}")
    return f


@dataclass(frozen=True, order=True)
class Embedding:
    orbit: int
    index: int
    mirror: bool = False

    def __str__(self) -> str:
        bar = "'" if self.mirror else ""
        return f"{self.orbit}:{self.index}{bar}"


@dataclass(frozen=True, order=True)
class Pair:
    """{tau, tau-bar}; ``index`` is the P-side member for split orbits and the
    member in [0, size/2) for inert ones."""

    orbit: int
    index: int

    def __str__(self) -> str:
        return f"{self.orbit}:{self.index}"


@dataclass(frozen=True)
class CMTypeDatum:
    d: int
    orbits: tuple[OrbitDatum, ...]
    signatures: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.orbits) != len(self.signatures):
            raise DatumError("one signature per orbit is required")
        object.__setattr__(self, "signatures",
                           tuple(check_signature(self.d, f, o) for o, f in zip(self.orbits, self.signatures)))

    @classmethod
    def single(cls, d: int, f: Sequence[int], kind: str = SPLIT) -> CMTypeDatum:
        return cls(d, (OrbitDatum(len(f), kind),), (tuple(f),))

    @classmethod
    def build(cls, d: int, orbits: Iterable[tuple[str, Sequence[int]]]) -> CMTypeDatum:
        orbits = list(orbits)
        return cls(d, tuple(OrbitDatum(len(f), k) for k, f in orbits), tuple(tuple(f) for _, f in orbits))

    # -- embeddings --------------------------------------------------------

    def r(self, emb: Embedding) -> int:
        v = self.signatures[emb.orbit][emb.index]
        return self.d - v if emb.mirror else v

    def phi(self, emb: Embedding, t: int = 1) -> Embedding:
        size = self.orbits[emb.orbit].size
        return Embedding(emb.orbit, (emb.index + t) % size, emb.mirror)

    def phi_inv(self, emb: Embedding) -> Embedding:
        return self.phi(emb, -1)

    def conj(self, emb: Embedding) -> Embedding:
        orbit = self.orbits[emb.orbit]
        if orbit.kind == INERT:
            return Embedding(emb.orbit, (emb.index + orbit.half_shift) % orbit.size)
        return Embedding(emb.orbit, emb.index, not emb.mirror)

    def embeddings(self) -> list[Embedding]:
        out = []
        for o, orbit in enumerate(self.orbits):
            out.extend(Embedding(o, i) for i in range(orbit.size))
            if orbit.kind == SPLIT:
                out.extend(Embedding(o, i, True) for i in range(orbit.size))
        return out

    # -- pairs {tau, tau-bar} ---------------------------------------------

    def pairs(self) -> list[Pair]:
        out = []
        for o, orbit in enumerate(self.orbits):
            count = orbit.half_shift if orbit.kind == INERT else orbit.size
            out.extend(Pair(o, i) for i in range(count))
        return out

    def pair_of(self, emb: Embedding) -> Pair:
        orbit = self.orbits[emb.orbit]
        if orbit.kind == INERT:
            return Pair(emb.orbit, emb.index % orbit.half_shift)
        return Pair(emb.orbit, emb.index)

    def members(self, pair: Pair) -> tuple[Embedding, Embedding]:
        first = Embedding(pair.orbit, pair.index)
        return first, self.conj(first)

    def representative(self, pair: Pair) -> Embedding:
        """The member tau with r(phi^-1 tau) <= r(tau); ties go to the member
        listed first by ``members``."""
        first, second = self.members(pair)
        if self.r(self.phi_inv(first)) <= self.r(first):
            return first
        return second

    def pair_from_ref(self, ref: Sequence[int]) -> Pair:
        """Pair containing embedding [orbit, index] or [orbit, index, mirror]."""
        if len(ref) not in (2, 3):
            raise DatumError(f"bad pair reference {list(ref)!r}")
        o, i = int(ref[0]), int(ref[1])
        mirror = bool(ref[2]) if len(ref) == 3 else False
        if not 0 <= o < len(self.orbits) or not 0 <= i < self.orbits[o].size:
            raise DatumError(f"pair reference {list(ref)!r} out of range")
        if mirror and self.orbits[o].kind == INERT:
            raise DatumError("inert orbits have no mirror")
        return self.pair_of(Embedding(o, i, mirror))

    def dim_M(self) -> int:
        return sum(self.r(a) * self.r(b) for a, b in map(self.members, self.pairs()))
