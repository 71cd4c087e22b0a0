"""Rank and dimension calculators for the V-foliations of a unitary datum."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .cmtype import CMTypeDatum, DatumError, Embedding, OrbitDatum, Pair
from .dieudonne import SlopeProfile, slope_decomposition
from .eo import EOLabel, count_a, dim_stratum, label_fol

__all__ = [
    "FoliationReport",
    "CascadeReport",
    "r_V_ord_pair",
    "foliation_rank",
    "foliation_report",
    "blowup_fiber_dim",
    "embedding_profile",
    "cascade_pq",
    "dim_ext_group",
    "cascade_identity_check",
]


def _r_pair(datum: CMTypeDatum, tau: Embedding) -> tuple[int, int, int, int]:
    """(r_tau, r_prev, r_tau_bar, r_prev_bar) where prev = phi^-1."""
    bar = datum.conj(tau)
    return (datum.r(tau), datum.r(datum.phi_inv(tau)),
            datum.r(bar), datum.r(datum.phi_inv(bar)))


def r_V_ord_pair(datum: CMTypeDatum, pair: Pair) -> int:
    """r_V on the mu-ordinary locus, contributed by one pair."""
    r_tau, r_prev, _, _ = _r_pair(datum, datum.members(pair)[0])
    d = datum.d
    return max(0, r_tau - r_prev) * (d - r_tau) + r_tau * max(0, r_prev - r_tau)


def foliation_rank(datum: CMTypeDatum, sigma: Iterable[Pair]) -> int:
    sigma = set(sigma)
    total = 0
    for pair in datum.pairs():
        r_tau, r_prev, r_bar, r_prev_bar = _r_pair(datum, datum.members(pair)[0])
        if pair in sigma:
            total += min(r_tau, r_prev) * min(r_bar, r_prev_bar)
        else:
            total += r_tau * r_bar
    return total


@dataclass(frozen=True)
class FoliationReport:
    dim_M: int
    rank: int
    corank: int
    dim_M_fol: int
    r_V_ord: dict[Pair, int]

    @property
    def consistent(self) -> bool:
        return self.rank + self.corank == self.dim_M


def foliation_report(datum: CMTypeDatum, sigma: Iterable[Pair]) -> FoliationReport:
    """The corank is summed from the per-pair r_V^ord values, independently of
    the rank formula; dim M_Sigma^fol is the length of the foliation label."""
    sigma = sorted(set(sigma))
    rv = {pair: r_V_ord_pair(datum, pair) for pair in sigma}
    return FoliationReport(
        dim_M=datum.dim_M(),
        rank=foliation_rank(datum, sigma),
        corank=sum(rv.values()),
        dim_M_fol=dim_stratum(label_fol(datum, sigma)),
        r_V_ord=rv,
    )


def blowup_fiber_dim(datum: CMTypeDatum, label: EOLabel, sigma: Iterable[Pair]) -> int:
    total = 0
    for pair in set(sigma):
        tau = datum.representative(pair)
        r_tau, r_prev = datum.r(tau), datum.r(datum.phi_inv(tau))
        a = count_a(label.at_pair(pair), r_tau, r_prev, datum.d)
        total += (r_tau - r_prev) * (a - r_tau + r_prev)
    return total


# -- cascade bookkeeping -----------------------------------------------------

def embedding_profile(datum: CMTypeDatum, tau: Embedding) -> SlopeProfile:
    """Slope profile of the orbit (or mirror orbit) containing tau."""
    orbit = datum.orbits[tau.orbit]
    f = [datum.r(Embedding(tau.orbit, i, tau.mirror)) for i in range(orbit.size)]
    return slope_decomposition(datum.d, f, OrbitDatum(orbit.size, orbit.kind))


def cascade_pq(profile: SlopeProfile, i: int) -> tuple[int, int]:
    """(p_tau, q_tau) at orbit index i; refuses i with f(i-1) > f(i)."""
    f = profile.signature
    size = len(f)
    i %= size
    prev = (i - 1) % size
    if f[prev] > f[i]:
        raise DatumError(f"index {i} is not normalized: f({prev}) = {f[prev]} > f({i}) = {f[i]}")
    p_tau = sum(1 for part in profile.parts if part.g[i] == 0)
    q_tau = sum(1 for part in profile.parts if part.g[prev] == 0)
    return p_tau, q_tau


def dim_ext_group(profile: SlopeProfile, a: int, b: int) -> int:
    """d^a d^b sum_i (g^b(i) - g^a(i)), slopes numbered from 1."""
    if not 1 <= a < b <= len(profile):
        raise DatumError(f"need 1 <= a < b <= {len(profile)}, got ({a}, {b})")
    pa, pb = profile.parts[a - 1], profile.parts[b - 1]
    return pa.multiplicity * pb.multiplicity * sum(x - y for x, y in zip(pb.g, pa.g))


@dataclass(frozen=True)
class CascadeReport:
    p_tau: int
    q_tau: int
    cascade_dim: int
    expected: int
    foliation_rank_part: int
    jumps_ok: bool

    @property
    def passed(self) -> bool:
        return self.jumps_ok and self.cascade_dim == self.expected == self.foliation_rank_part


def cascade_identity_check(datum: CMTypeDatum, tau: Embedding) -> CascadeReport:
    """Compare the cascade subspace dimension at tau with r(phi^-1 tau)(d - r(tau))
    and with the rank of the foliation piece for {tau, tau-bar}."""
    profile = embedding_profile(datum, tau)
    i = tau.index
    p_tau, q_tau = cascade_pq(profile, i)
    parts = profile.parts
    cascade = 0
    jumps_ok = True
    for a in range(1, p_tau + 1):
        for b in range(q_tau + 1, len(parts) + 1):
            cascade += parts[a - 1].multiplicity * parts[b - 1].multiplicity
            jumps_ok &= parts[b - 1].g[i] - parts[a - 1].g[i] == 1
    r_tau, r_prev, r_bar, r_prev_bar = _r_pair(datum, tau)
    return CascadeReport(
        p_tau=p_tau,
        q_tau=q_tau,
        cascade_dim=cascade,
        expected=r_prev * (datum.d - r_tau),
        foliation_rank_part=min(r_tau, r_prev) * min(r_bar, r_prev_bar),
        jumps_ok=jumps_ok,
    )
