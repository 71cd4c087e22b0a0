"""Shuffles and Ekedahl-Oort labels for unitary data.

Permutations use 1-based one-line notation: ``image[k-1]`` is w(k).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb, prod
from typing import Iterable, Sequence

from .cmtype import CMTypeDatum, DatumError, Embedding, Pair

__all__ = [
    "DEFAULT_CAP",
    "CapExceeded",
    "Shuffle",
    "EOLabel",
    "StratumRow",
    "ScanReport",
    "enumerate_shuffles",
    "shuffle_length",
    "inversions",
    "check_involution",
    "bruhat_leq",
    "ord_shuffle",
    "fol_shuffle",
    "identity_shuffle",
    "label_ord",
    "label_fol",
    "label_identity",
    "enumerate_labels",
    "label_count",
    "dim_stratum",
    "count_a",
    "count_b",
    "r_V_at",
    "in_M_sigma",
    "bruhat_over_fol",
    "scan_strata",
]

DEFAULT_CAP = 10**6


class CapExceeded(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class Shuffle:
    """An (e, d-e)-shuffle: the preimages of 1..e and of e+1..d both increase."""

    d: int
    e: int
    image: tuple[int, ...]

    def __post_init__(self):
        image = tuple(int(v) for v in self.image)
        object.__setattr__(self, "image", image)
        if len(image) != self.d or sorted(image) != list(range(1, self.d + 1)):
            raise DatumError(f"{list(image)} is not a permutation of 1..{self.d}")
        if not 0 <= self.e <= self.d:
            raise DatumError(f"block size {self.e} outside [0, {self.d}]")
        inv = _inverse(image)
        low, high = inv[:self.e], inv[self.e:]
        if list(low) != sorted(low) or list(high) != sorted(high):
            raise DatumError(f"{list(image)} is not an ({self.e},{self.d - self.e})-shuffle")

    def __call__(self, k: int) -> int:
        return self.image[k - 1]

    def inverse(self) -> tuple[int, ...]:
        return _inverse(self.image)

    def __str__(self) -> str:
        return ".".join(map(str, self.image))


def _inverse(image: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(image)
    for k, v in enumerate(image, start=1):
        inv[v - 1] = k
    return tuple(inv)


def enumerate_shuffles(e: int, d: int) -> list[Shuffle]:
    """All (e, d-e)-shuffles in lexicographic order of one-line notation.

    A shuffle is fixed by the set of positions carrying the values 1..e.
    """
    if not 0 <= e <= d:
        raise DatumError(f"block size {e} outside [0, {d}]")
    out = []
    for low_positions in itertools.combinations(range(d), e):
        image = [0] * d
        low_iter, high_iter = iter(range(1, e + 1)), iter(range(e + 1, d + 1))
        low_set = set(low_positions)
        for k in range(d):
            image[k] = next(low_iter) if k in low_set else next(high_iter)
        out.append(Shuffle(d, e, tuple(image)))
    return sorted(out, key=lambda w: w.image)


def shuffle_length(w: Shuffle) -> int:
    inv = w.inverse()
    return sum(inv[i - 1] - i for i in range(1, w.e + 1))


def inversions(image: Sequence[int]) -> int:
    return sum(1 for a, b in itertools.combinations(range(len(image)), 2) if image[a] > image[b])


def check_involution(w: Shuffle) -> Shuffle:
    """w0 w w0, an (d-e, e)-shuffle."""
    d = w.d
    return Shuffle(d, d - w.e, tuple(d + 1 - w.image[d - x] for x in range(1, d + 1)))


def bruhat_leq(u: Sequence[int] | Shuffle, v: Sequence[int] | Shuffle) -> bool:
    """Rank-matrix criterion: for all i, j, #{a <= i : u(a) >= j} <= #{a <= i : v(a) >= j}."""
    u = getattr(u, "image", u)
    v = getattr(v, "image", v)
    if len(u) != len(v):
        raise DatumError("permutations of different degree")
    d = len(u)
    cu = [0] * (d + 2)
    cv = [0] * (d + 2)
    for i in range(d):
        for j in range(1, u[i] + 1):
            cu[j] += 1
        for j in range(1, v[i] + 1):
            cv[j] += 1
        if any(cu[j] > cv[j] for j in range(1, d + 1)):
            return False
    return True


def identity_shuffle(e: int, d: int) -> Shuffle:
    return Shuffle(d, e, tuple(range(1, d + 1)))


def ord_shuffle(n: int, m: int) -> Shuffle:
    """1..m -> n+1..n+m and m+1..n+m -> 1..n."""
    image = [n + k for k in range(1, m + 1)] + list(range(1, n + 1))
    return Shuffle(n + m, n, tuple(image))


def fol_shuffle(r_tau: int, r_prev: int, d: int) -> Shuffle:
    """Shortest shuffle in Pi_{r_tau, d-r_tau} meeting the foliation condition
    at an embedding with r(tau) = r_tau and r(phi^-1 tau) = r_prev."""
    if r_prev <= r_tau:
        jump = r_tau - r_prev
        image = (list(range(1, jump + 1))
                 + list(range(r_tau + 1, d + 1))
                 + list(range(jump + 1, r_tau + 1)))
    else:
        g_prev = d - r_prev
        image = (list(range(r_tau + 1, g_prev + r_tau + 1))
                 + list(range(1, r_tau + 1))
                 + list(range(g_prev + r_tau + 1, d + 1)))
    return Shuffle(d, r_tau, tuple(image))


# -- labels ----------------------------------------------------------------

@dataclass(frozen=True)
class EOLabel:
    """One shuffle per pair {tau, tau-bar}, stored at the pair representative
    (order of ``datum.pairs()``); the conjugate carries the check involution."""

    datum: CMTypeDatum = field(compare=False, repr=False)
    shuffles: tuple[Shuffle, ...]

    def __post_init__(self):
        pairs = self.datum.pairs()
        if len(self.shuffles) != len(pairs):
            raise DatumError(f"label needs {len(pairs)} shuffles, got {len(self.shuffles)}")
        for pair, w in zip(pairs, self.shuffles):
            rep = self.datum.representative(pair)
            if w.d != self.datum.d or w.e != self.datum.r(rep):
                raise DatumError(f"shuffle {w} at {rep} must lie in Pi_({self.datum.r(rep)},"
                                 f"{self.datum.d - self.datum.r(rep)})")

    @classmethod
    def from_images(cls, datum: CMTypeDatum, images: Iterable[Sequence[int]]) -> EOLabel:
        images = list(images)
        pairs = datum.pairs()
        if len(images) != len(pairs):
            raise DatumError(f"label needs {len(pairs)} shuffles, got {len(images)}")
        return cls(datum, tuple(Shuffle(datum.d, datum.r(datum.representative(p)), tuple(w))
                                for p, w in zip(pairs, images)))

    def at_pair(self, pair: Pair) -> Shuffle:
        return self.shuffles[self.datum.pairs().index(pair)]

    def at(self, emb: Embedding) -> Shuffle:
        pair = self.datum.pair_of(emb)
        w = self.at_pair(pair)
        return w if self.datum.representative(pair) == emb else check_involution(w)

    def orbit_shuffles(self, orbit: int, mirror: bool = False) -> list[Shuffle]:
        """Per-index shuffles along one orbit (or its mirror), for module construction."""
        size = self.datum.orbits[orbit].size
        return [self.at(Embedding(orbit, i, mirror)) for i in range(size)]

    def images(self) -> list[list[int]]:
        return [list(w.image) for w in self.shuffles]

    def __str__(self) -> str:
        return "_".join(str(w) for w in self.shuffles)


def label_ord(datum: CMTypeDatum) -> EOLabel:
    d = datum.d
    return EOLabel(datum, tuple(ord_shuffle(datum.r(t), d - datum.r(t))
                                for t in map(datum.representative, datum.pairs())))


def label_identity(datum: CMTypeDatum) -> EOLabel:
    return EOLabel(datum, tuple(identity_shuffle(datum.r(t), datum.d)
                                for t in map(datum.representative, datum.pairs())))


def label_fol(datum: CMTypeDatum, sigma: Iterable[Pair]) -> EOLabel:
    sigma = set(sigma)
    out = []
    for pair in datum.pairs():
        tau = datum.representative(pair)
        if pair in sigma:
            out.append(fol_shuffle(datum.r(tau), datum.r(datum.phi_inv(tau)), datum.d))
        else:
            out.append(identity_shuffle(datum.r(tau), datum.d))
    return EOLabel(datum, tuple(out))


def label_count(datum: CMTypeDatum) -> int:
    return prod(comb(datum.d, datum.r(datum.representative(p))) for p in datum.pairs())


def enumerate_labels(datum: CMTypeDatum, cap: int = DEFAULT_CAP) -> Iterable[EOLabel]:
    total = label_count(datum)
    if total > cap:
        raise CapExceeded(f"{total} labels exceeds the cap of {cap}")
    choices = [enumerate_shuffles(datum.r(datum.representative(p)), datum.d) for p in datum.pairs()]
    for combo in itertools.product(*choices):
        yield EOLabel(datum, combo)


def dim_stratum(label: EOLabel) -> int:
    return sum(shuffle_length(w) for w in label.shuffles)


# -- the r_V invariant -------------------------------------------------------

def count_a(w: Shuffle, r_tau: int, r_prev: int, d: int) -> int:
    """#{j <= d - r_prev : w(j) <= r_tau}: dim ker V on the cotangent piece at tau."""
    return sum(1 for j in range(1, d - r_prev + 1) if w(j) <= r_tau)


def count_b(w: Shuffle, r_tau: int, r_prev: int, d: int) -> int:
    """#{j >= d - r_prev + 1 : w(j) >= r_tau + 1}: the same quantity at tau-bar."""
    return sum(1 for j in range(d - r_prev + 1, d + 1) if w(j) >= r_tau + 1)


def _pair_data(label: EOLabel, pair: Pair) -> tuple[Shuffle, int, int, int]:
    datum = label.datum
    tau = datum.representative(pair)
    return label.at_pair(pair), datum.r(tau), datum.r(datum.phi_inv(tau)), datum.d


def r_V_at(label: EOLabel, pair: Pair) -> int:
    w, r_tau, r_prev, d = _pair_data(label, pair)
    a = count_a(w, r_tau, r_prev, d)
    b = count_b(w, r_tau, r_prev, d)
    return a * (d - r_tau) + r_tau * b - a * b


def in_M_sigma(label: EOLabel, sigma: Iterable[Pair]) -> bool:
    for pair in sigma:
        w, r_tau, r_prev, d = _pair_data(label, pair)
        if count_a(w, r_tau, r_prev, d) != abs(r_tau - r_prev):
            return False
    return True


def bruhat_over_fol(label: EOLabel, fol: EOLabel) -> bool:
    return all(bruhat_leq(u, v) for u, v in zip(fol.shuffles, label.shuffles))


# -- scans -----------------------------------------------------------------

@dataclass(frozen=True)
class StratumRow:
    label: EOLabel
    dim: int
    rV: tuple[int, ...]
    in_sigma: bool
    bruhat_over_fol: bool


@dataclass(frozen=True)
class ScanReport:
    datum: CMTypeDatum
    sigma: tuple[Pair, ...]
    rows: tuple[StratumRow, ...]
    fol: EOLabel
    minimal: tuple[EOLabel, ...]

    @property
    def fol_is_unique_minimum(self) -> bool:
        return len(self.minimal) == 1 and self.minimal[0] == self.fol

    @property
    def all_dominate_fol(self) -> bool:
        return all(row.bruhat_over_fol for row in self.rows if row.in_sigma)

    @property
    def ok(self) -> bool:
        return self.fol_is_unique_minimum and self.all_dominate_fol


def scan_strata(datum: CMTypeDatum, sigma: Iterable[Pair] = (), cap: int = DEFAULT_CAP) -> ScanReport:
    sigma = tuple(sorted(set(sigma)))
    fol = label_fol(datum, sigma)
    rows = []
    for label in enumerate_labels(datum, cap):
        member = in_M_sigma(label, sigma)
        rows.append(StratumRow(label, dim_stratum(label), tuple(r_V_at(label, p) for p in sigma),
                               member, bruhat_over_fol(label, fol)))
    rows.sort(key=lambda row: [w.image for w in row.label.shuffles])
    members = [row for row in rows if row.in_sigma]
    minimal: tuple[EOLabel, ...] = ()
    if members:
        low = min(row.dim for row in members)
        minimal = tuple(row.label for row in members if row.dim == low)
    return ScanReport(datum, sigma, tuple(rows), fol, minimal)
