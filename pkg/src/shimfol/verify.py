"""Cross-checks between closed formulas and brute-force computations.

Each suite returns a SuiteResult and stops at the first counterexample. The
formulas a suite consumes are looked up in a table that callers may override,
which is how the negative-control tests inject a broken formula.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Callable, Iterator, Mapping

from . import eo, foliation, hilbert
from .cmtype import INERT, SPLIT, CMTypeDatum, Embedding, OrbitDatum
from .dieudonne import (build_from_shuffle, build_standard, dim_ker_V_on_cotangent, duality_check,
                        fv_relations_hold, slope_decomposition)
from .gfpn import build_field

__all__ = [
    "SuiteResult",
    "VerifyConfig",
    "FORMULAS",
    "SUITES",
    "unitary_cases",
    "run_suites",
]

# formulas under test; each suite reads them through ``fx``
FORMULAS: dict[str, Callable] = {
    "count_a": eo.count_a,
    "count_b": eo.count_b,
    "r_V_at": eo.r_V_at,
    "label_fol": eo.label_fol,
    "r_V_ord_pair": foliation.r_V_ord_pair,
    "foliation_rank": foliation.foliation_rank,
    "hasse_weight": hilbert.hasse_weight,
    "weight_feasibility": hilbert.weight_feasibility,
    "cone_membership": hilbert.cone_membership,
    "xi_derivation": hilbert.xi_derivation,
}


@dataclass
class SuiteResult:
    name: str
    passed: bool = True
    checked: int = 0
    seconds: float = 0.0
    counterexample: str | None = None

    def fail(self, message: str) -> SuiteResult:
        self.passed = False
        self.counterexample = message
        return self


@dataclass(frozen=True)
class VerifyConfig:
    max_d: int = 4
    orbit_max: int = 3
    seed: int = 0
    primes: tuple[int, ...] = (2, 3, 5)
    cone_samples: int = 1000
    qexp_samples: int = 100
    overrides: Mapping[str, Callable] = field(default_factory=dict)

    def fx(self, name: str) -> Callable:
        return self.overrides.get(name, FORMULAS[name])


def unitary_cases(max_d: int, orbit_max: int, min_d: int = 1) -> Iterator[CMTypeDatum]:
    """Single-orbit data: split orbits of size <= orbit_max and inert orbits of
    even size <= orbit_max, all signatures, 1 <= d <= max_d."""
    for d in range(min_d, max_d + 1):
        for size in range(1, orbit_max + 1):
            for f in itertools.product(range(d + 1), repeat=size):
                yield CMTypeDatum.single(d, f, SPLIT)
        for size in range(2, orbit_max + 1, 2):
            m = size // 2
            for half in itertools.product(range(d + 1), repeat=m):
                yield CMTypeDatum.single(d, half + tuple(d - x for x in half), INERT)


def _case(datum: CMTypeDatum) -> str:
    return f"d={datum.d} {datum.orbits[0].kind} f={list(datum.signatures[0])}"


# -- unitary suites ----------------------------------------------------------

def suite_u21(cfg: VerifyConfig) -> SuiteResult:
    res = SuiteResult("u21_inert")
    datum = CMTypeDatum.single(3, (2, 1), INERT)
    sigma = datum.pairs()
    pair = sigma[0]
    labels = list(eo.enumerate_labels(datum))
    dims = sorted(eo.dim_stratum(w) for w in labels)
    res.checked += 1
    if dims != [0, 1, 2]:
        return res.fail(f"dims {dims} != [0, 1, 2]")
    rvs = sorted(cfg.fx("r_V_at")(w, pair) for w in labels)
    res.checked += 1
    if rvs != [1, 1, 2]:
        return res.fail(f"r_V values {rvs} != [1, 1, 2]")
    members = sorted(eo.dim_stratum(w) for w in labels if eo.in_M_sigma(w, sigma))
    res.checked += 1
    if members != [1, 2]:
        return res.fail(f"M_Sigma dims {members} != [1, 2]")
    rep = foliation.foliation_report(datum, sigma)
    rank = cfg.fx("foliation_rank")(datum, sigma)
    res.checked += 1
    if rank != 1 or rep.dim_M_fol != 1 or rep.corank != 1 or rep.dim_M != 2:
        return res.fail(f"rank {rank}, dim_M_fol {rep.dim_M_fol}, corank {rep.corank}, dim_M {rep.dim_M}")
    bottom = eo.label_identity(datum)
    res.checked += 1
    if foliation.blowup_fiber_dim(datum, bottom, sigma) != 1:
        return res.fail("blow-up fiber over the 0-dimensional stratum is not 1")
    return res


def suite_kernel_oracle(cfg: VerifyConfig) -> SuiteResult:
    """a, b and r_V from the shuffle formulas against kernel dimensions of V on
    the cotangent pieces of N_w."""
    res = SuiteResult("kernel_oracle")
    count_a, count_b, r_V_at = cfg.fx("count_a"), cfg.fx("count_b"), cfg.fx("r_V_at")
    for datum in unitary_cases(cfg.max_d, cfg.orbit_max):
        orbit = datum.orbits[0]
        sides = [False] if orbit.kind == INERT else [False, True]
        for label in eo.enumerate_labels(datum):
            modules = {}
            for mirror in sides:
                f = [datum.r(Embedding(0, i, mirror)) for i in range(orbit.size)]
                modules[mirror] = build_from_shuffle(datum.d, f, orbit, label.orbit_shuffles(0, mirror))
            for pair in datum.pairs():
                tau = datum.representative(pair)
                bar = datum.conj(tau)
                ka = dim_ker_V_on_cotangent(modules[tau.mirror], tau.index)
                kb = dim_ker_V_on_cotangent(modules[bar.mirror], bar.index)
                w = label.at_pair(pair)
                r_tau, r_prev, d = datum.r(tau), datum.r(datum.phi_inv(tau)), datum.d
                a, b = count_a(w, r_tau, r_prev, d), count_b(w, r_tau, r_prev, d)
                rv = r_V_at(label, pair)
                res.checked += 1
                if (a, b) != (ka, kb) or rv != ka * (d - r_tau) + r_tau * kb - ka * kb:
                    return res.fail(f"{_case(datum)} label {label} pair {pair}: formula a={a} b={b} "
                                    f"rV={rv}, kernels a={ka} b={kb}")
    return res


def suite_minimal_stratum(cfg: VerifyConfig) -> SuiteResult:
    res = SuiteResult("minimal_stratum")
    label_fol = cfg.fx("label_fol")
    for datum in unitary_cases(cfg.max_d, cfg.orbit_max):
        pairs = datum.pairs()
        rows = [(w, eo.dim_stratum(w)) for w in eo.enumerate_labels(datum)]
        for n in range(len(pairs) + 1):
            for sigma in itertools.combinations(pairs, n):
                fol = label_fol(datum, sigma)
                members = [(w, dim) for w, dim in rows if eo.in_M_sigma(w, sigma)]
                low = min(dim for _, dim in members)
                minimal = [w for w, dim in members if dim == low]
                res.checked += 1
                if minimal != [fol]:
                    return res.fail(f"{_case(datum)} sigma {list(sigma)}: minimal {[str(w) for w in minimal]}"
                                    f", foliation label {fol}")
                for w, _ in members:
                    if not eo.bruhat_over_fol(w, fol):
                        return res.fail(f"{_case(datum)} sigma {list(sigma)}: {w} does not dominate {fol}")
    return res


def suite_slopes_duality(cfg: VerifyConfig) -> SuiteResult:
    res = SuiteResult("slopes_duality")
    for d in range(1, cfg.max_d + 1):
        for size in range(1, cfg.orbit_max + 1):
            orbit = OrbitDatum(size)
            for f in itertools.product(range(d + 1), repeat=size):
                prof = slope_decomposition(d, f, orbit)
                res.checked += 1
                slopes = prof.slopes
                if any(x >= y for x, y in zip(slopes, slopes[1:])):
                    return res.fail(f"d={d} f={list(f)}: slopes not increasing")
                if sum(part.multiplicity for part in prof.parts) != d:
                    return res.fail(f"d={d} f={list(f)}: multiplicities do not sum to d")
                for i in range(size):
                    if f[i] != sum(part.multiplicity * part.g[i] for part in prof.parts):
                        return res.fail(f"d={d} f={list(f)}: f({i}) not recovered from slopes")
                for lo, hi in zip(prof.parts, prof.parts[1:]):
                    if any(x > y for x, y in zip(lo.g, hi.g)):
                        return res.fail(f"d={d} f={list(f)}: g not monotone")
                if size % 2 == 0:
                    m = size // 2
                    if all(f[i] + f[(i + m) % size] == d for i in range(size)):
                        rep = duality_check(d, f, OrbitDatum(size, INERT))
                        if not rep.passed:
                            return res.fail(f"d={d} f={list(f)}: duality {rep.message} {rep.counterexample}")
    return res


def suite_cascade(cfg: VerifyConfig) -> SuiteResult:
    res = SuiteResult("cascade")
    for d in range(1, cfg.max_d + 1):
        for size in range(1, cfg.orbit_max + 1):
            for f in itertools.product(range(d + 1), repeat=size):
                datum = CMTypeDatum.single(d, f)
                for tau in datum.embeddings():
                    if datum.r(datum.phi_inv(tau)) > datum.r(tau):
                        continue
                    rep = foliation.cascade_identity_check(datum, tau)
                    res.checked += 1
                    if not rep.passed:
                        return res.fail(f"d={d} f={list(f)} tau={tau}: {rep}")
    return res


def suite_foliation_identities(cfg: VerifyConfig) -> SuiteResult:
    """rank + corank = dim M, corank from r_V^ord, full-Sigma rank = dim M^fol,
    r_V^ord = r_V on the ordinary label, monotonicity in Sigma, F V = V F = 0."""
    res = SuiteResult("foliation_identities")
    r_V_ord_pair, rank_fn, r_V_at = cfg.fx("r_V_ord_pair"), cfg.fx("foliation_rank"), cfg.fx("r_V_at")
    for datum in unitary_cases(cfg.max_d, cfg.orbit_max):
        pairs = datum.pairs()
        ordinary = eo.label_ord(datum)
        for pair in pairs:
            res.checked += 1
            if r_V_ord_pair(datum, pair) != r_V_at(ordinary, pair):
                return res.fail(f"{_case(datum)} pair {pair}: r_V^ord differs from r_V on the ordinary label")
        ranks = {}
        for n in range(len(pairs) + 1):
            for sigma in itertools.combinations(pairs, n):
                rank = rank_fn(datum, sigma)
                corank = sum(r_V_ord_pair(datum, p) for p in sigma)
                ranks[frozenset(sigma)] = rank
                res.checked += 1
                if rank + corank != datum.dim_M():
                    return res.fail(f"{_case(datum)} sigma {list(sigma)}: rank {rank} + corank {corank}"
                                    f" != dim M {datum.dim_M()}")
        for small, big in itertools.combinations(ranks, 2):
            if small <= big and ranks[small] < ranks[big]:
                return res.fail(f"{_case(datum)}: rank not monotone in sigma")
        full = eo.dim_stratum(eo.label_fol(datum, pairs))
        if full != ranks[frozenset(pairs)]:
            return res.fail(f"{_case(datum)}: dim M^fol {full} != rank {ranks[frozenset(pairs)]}")
        orbit = datum.orbits[0]
        if not fv_relations_hold(build_standard(datum.d, datum.signatures[0], orbit)):
            return res.fail(f"{_case(datum)}: F V or V F nonzero on the standard module")
    return res


# -- Hilbert suites ------------------------------------------------------------

def suite_hilbert_dichotomy(cfg: VerifyConfig, f_max: int = 4) -> SuiteResult:
    res = SuiteResult("hilbert_dichotomy")
    feas, hasse = cfg.fx("weight_feasibility"), cfg.fx("hasse_weight")
    for p in cfg.primes:
        for f in range(1, f_max + 1):
            datum = hilbert.SplittingDatum(p, (f,))
            for s in range(f):
                res.checked += 1
                if hilbert.is_p_closed(datum, {s}) != (f == 1):
                    return res.fail(f"p={p} f={f}: closedness of {{{s}}} wrong")
                twice = tuple(2 * x for x in hasse(datum, datum.phi(s)))
                if hilbert.obstruction_weight(datum, s, datum.phi(s)) != twice:
                    return res.fail(f"p={p} f={f} sigma={s}: obstruction is not twice the Hasse weight")
                for t in range(f):
                    if t == s:
                        continue
                    w = feas(datum, hilbert.obstruction_weight(datum, s, t))
                    res.checked += 1
                    expected = t == datum.phi(s)
                    if (w is not None) != expected:
                        return res.fail(f"p={p} f={f} sigma={s} tau={t}: feasibility {w}")
                    if w is not None and any(w.residue):
                        return res.fail(f"p={p} f={f} sigma={s} tau={t}: residue {w.residue} is not 0")
    return res


def _compositions(g_max: int) -> Iterator[tuple[int, ...]]:
    for g in range(1, g_max + 1):
        for cuts in itertools.product((0, 1), repeat=g - 1):
            sizes, run = [], 1
            for c in cuts:
                if c:
                    sizes.append(run)
                    run = 1
                else:
                    run += 1
            sizes.append(run)
            yield tuple(sizes)


def suite_cone_chain(cfg: VerifyConfig, g_max: int = 4) -> SuiteResult:
    res = SuiteResult("cone_chain")
    cone = cfg.fx("cone_membership")
    rng = random.Random(cfg.seed)
    for sizes in _compositions(g_max):
        for p in cfg.primes:
            datum = hilbert.SplittingDatum(p, sizes)
            for _ in range(cfg.cone_samples):
                k = tuple(rng.randint(-2, 3 * p) for _ in range(datum.g))
                in_min, in_std, in_hasse = (cone(datum, k, c) for c in ("min", "std", "hasse"))
                res.checked += 1
                if (in_min and not in_std) or (in_std and not in_hasse):
                    return res.fail(f"p={p} orbits={list(sizes)} k={list(k)}: "
                                    f"min={in_min} std={in_std} hasse={in_hasse}")
    return res


def _subsets_lcm(limit: int) -> Iterator[tuple[int, ...]]:
    for n in range(1, limit + 1):
        for combo in itertools.combinations(range(1, limit + 1), n):
            l = 1
            for x in combo:
                l = l * x // gcd(l, x)
            if l <= limit:
                yield combo


@lru_cache(maxsize=None)
def _idempotent_ok(p: int, f: int, n: int) -> bool:
    kappa = build_field(p, n)
    return hilbert.idempotent_frobenius_check(hilbert.SplittingDatum(p, (f,)), kappa).passed


def suite_operators(cfg: VerifyConfig, lcm_max: int = 6) -> SuiteResult:
    res = SuiteResult("operators")
    xi = cfg.fx("xi_derivation")
    for p in cfg.primes:
        for sizes in _subsets_lcm(lcm_max):
            n = 1
            for x in sizes:
                n = n * x // gcd(n, x)
            for f in sizes:
                res.checked += 1
                if not _idempotent_ok(p, f, n):
                    return res.fail(f"p={p} orbit size {f} in GF({p}^{n}): idempotent check fails")
    rng = random.Random(cfg.seed)
    for sample in range(cfg.qexp_samples):
        p = rng.choice(cfg.primes)
        n = rng.randint(1, lcm_max)
        divisors = [x for x in range(1, n + 1) if n % x == 0]
        sizes = tuple(rng.choice(divisors) for _ in range(rng.randint(1, 3)))
        datum = hilbert.SplittingDatum(p, sizes)
        space = hilbert.ExponentSpace.build(datum, build_field(p, n), rng)
        q = hilbert.QExp.random(space, rng)
        other = hilbert.QExp.random(space, rng, max_terms=10)
        for s in range(datum.g):
            lhs = q
            for _ in range(p):
                lhs = xi(lhs, s)
            res.checked += 1
            if lhs != xi(q, datum.phi(s)):
                return res.fail(f"sample {sample} p={p} orbits={list(sizes)} sigma={s}: xi^p != xi_phi")
            if hilbert.xi_via_katz(q, s) != xi(q, s):
                return res.fail(f"sample {sample} sigma={s}: xi differs from the trace-derivation sum")
            if xi(q * other, s) != xi(q, s) * other + q * xi(other, s):
                return res.fail(f"sample {sample} sigma={s}: Leibniz rule fails")
    return res


SUITES: dict[str, Callable[[VerifyConfig], SuiteResult]] = {
    "u21_inert": suite_u21,
    "kernel_oracle": suite_kernel_oracle,
    "minimal_stratum": suite_minimal_stratum,
    "slopes_duality": suite_slopes_duality,
    "cascade": suite_cascade,
    "foliation_identities": suite_foliation_identities,
    "hilbert_dichotomy": suite_hilbert_dichotomy,
    "cone_chain": suite_cone_chain,
    "operators": suite_operators,
}


def run_suites(cfg: VerifyConfig, names: list[str] | None = None) -> list[SuiteResult]:
    out = []
    for name in names or list(SUITES):
        start = time.perf_counter()
        result = SUITES[name](cfg)
        result.seconds = time.perf_counter() - start
        out.append(result)
    return out
