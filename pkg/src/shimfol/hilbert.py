"""Weight combinatorics and q-expansion derivations for Hilbert modular data.

Embeddings are numbered 0..g-1, contiguously per prime above p; Frobenius
moves each index to the next one inside its orbit, cyclically. A weight is an
integer vector indexed by the embeddings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .cmtype import DatumError
from .eo import DEFAULT_CAP, CapExceeded
from .gfpn import (FieldElement, FiniteField, embedding_roots, frobenius, is_prime, subfield_elements,
                   tensor_frobenius, tensor_from_subfield, tensor_idempotents, tensor_mul)

__all__ = [
    "CONES",
    "SplittingDatum",
    "HasseReport",
    "FeasibilityWitness",
    "GOReport",
    "IdempotentReport",
    "ExponentSpace",
    "QExp",
    "is_p_closed",
    "unit_weight",
    "hasse_weight",
    "obstruction_weight",
    "hasse_weights",
    "hasse_coefficients",
    "cone_membership",
    "weight_feasibility",
    "go_stratum_report",
    "idempotent_frobenius_check",
    "xi_derivation",
    "katz_derivation",
    "xi_via_katz",
]

Weight = tuple[int, ...]
CONES = ("min", "std", "hasse")


@dataclass(frozen=True)
class SplittingDatum:
    p: int
    orbit_sizes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "orbit_sizes", tuple(int(s) for s in self.orbit_sizes))
        if not is_prime(self.p):
            raise DatumError(f"{self.p} is not prime")
        if not self.orbit_sizes or any(s < 1 for s in self.orbit_sizes):
            raise DatumError("orbit sizes must be positive")

    @property
    def g(self) -> int:
        return sum(self.orbit_sizes)

    @property
    def orbits(self) -> list[range]:
        out, start = [], 0
        for size in self.orbit_sizes:
            out.append(range(start, start + size))
            start += size
        return out

    def orbit_of(self, sigma: int) -> range:
        self._check(sigma)
        return next(o for o in self.orbits if sigma in o)

    def phi(self, sigma: int, t: int = 1) -> int:
        orbit = self.orbit_of(sigma)
        return orbit.start + (sigma - orbit.start + t) % len(orbit)

    def phi_inv(self, sigma: int) -> int:
        return self.phi(sigma, -1)

    def _check(self, sigma: int) -> None:
        if not 0 <= sigma < self.g:
            raise DatumError(f"embedding {sigma} outside 0..{self.g - 1}")


def is_p_closed(datum: SplittingDatum, sigma: Iterable[int]) -> bool:
    sigma = set(sigma)
    return {datum.phi(s) for s in sigma} == sigma


# -- weights ---------------------------------------------------------------

def unit_weight(datum: SplittingDatum, sigma: int, coeff: int = 1) -> Weight:
    datum._check(sigma)
    return tuple(coeff if s == sigma else 0 for s in range(datum.g))


def _add(*weights: Weight) -> Weight:
    return tuple(sum(ws) for ws in zip(*weights))


def hasse_weight(datum: SplittingDatum, sigma: int) -> Weight:
    """p[phi^-1 sigma] - [sigma]."""
    return _add(unit_weight(datum, datum.phi_inv(sigma), datum.p), unit_weight(datum, sigma, -1))


def obstruction_weight(datum: SplittingDatum, sigma: int, tau: int) -> Weight:
    """2p[sigma] - 2[tau]."""
    return _add(unit_weight(datum, sigma, 2 * datum.p), unit_weight(datum, tau, -2))


@dataclass(frozen=True)
class HasseReport:
    hasse: dict[int, Weight]
    obstruction: dict[tuple[int, int], Weight]
    square_identity: bool


def hasse_weights(datum: SplittingDatum) -> HasseReport:
    hasse = {s: hasse_weight(datum, s) for s in range(datum.g)}
    obstruction = {(s, t): obstruction_weight(datum, s, t)
                   for s in range(datum.g) for t in range(datum.g)}
    square = all(obstruction[s, datum.phi(s)] == tuple(2 * x for x in hasse[datum.phi(s)])
                 for s in range(datum.g))
    return HasseReport(hasse, obstruction, square)


def _check_weight(datum: SplittingDatum, k: Sequence[int]) -> Weight:
    k = tuple(int(x) for x in k)
    if len(k) != datum.g:
        raise DatumError(f"weight has {len(k)} entries, expected {datum.g}")
    return k


def hasse_coefficients(datum: SplittingDatum, k: Sequence[int]) -> tuple[Fraction, ...]:
    """The unique rational a with k = sum_s a_s (p[phi^-1 s] - [s]).

    Per orbit this is the system k_t = p a_{phi t} - a_t, solved exactly by
    Gaussian elimination over the rationals.
    """
    k = _check_weight(datum, k)
    p = datum.p
    a: list[Fraction] = [Fraction(0)] * datum.g
    for orbit in datum.orbits:
        idx = list(orbit)
        n = len(idx)
        rows = []
        for pos, t in enumerate(idx):
            row = [Fraction(0)] * n
            row[pos] -= 1
            row[idx.index(datum.phi(t))] += p
            rows.append(row + [Fraction(k[t])])
        for c in range(n):
            piv = next(r for r in range(c, n) if rows[r][c] != 0)
            rows[c], rows[piv] = rows[piv], rows[c]
            inv = 1 / rows[c][c]
            rows[c] = [x * inv for x in rows[c]]
            for r in range(n):
                if r != c and rows[r][c] != 0:
                    fac = rows[r][c]
                    rows[r] = [x - fac * y for x, y in zip(rows[r], rows[c])]
        for pos, t in enumerate(idx):
            a[t] = rows[pos][n]
    return tuple(a)


def cone_membership(datum: SplittingDatum, k: Sequence[int], cone: str) -> bool:
    k = _check_weight(datum, k)
    if cone == "std":
        return all(x >= 0 for x in k)
    if cone == "min":
        return all(datum.p * k[s] >= k[datum.phi_inv(s)] for s in range(datum.g))
    if cone == "hasse":
        return all(x >= 0 for x in hasse_coefficients(datum, k))
    raise DatumError(f"unknown cone {cone!r}; expected one of {CONES}")


@dataclass(frozen=True)
class FeasibilityWitness:
    a: tuple[int, ...]
    residue: Weight


def _residue(datum: SplittingDatum, k: Weight, a: Sequence[int]) -> Weight:
    """k - sum_b a_b (p[b] - [phi b])."""
    p = datum.p
    return tuple(k[t] - p * a[t] + a[datum.phi_inv(t)] for t in range(datum.g))


def weight_feasibility(datum: SplittingDatum, k: Sequence[int],
                       cap: int = DEFAULT_CAP) -> FeasibilityWitness | None:
    """First nonnegative integer a (lexicographic) with k - sum a_b(p[b] - [phi b]) >= 0.

    Orbits are independent. On an orbit the residue entries sum to
    sum k - (p-1) sum a, which bounds the search.
    """
    k = _check_weight(datum, k)
    p = datum.p
    a = [0] * datum.g
    for orbit in datum.orbits:
        idx = list(orbit)
        total = sum(k[t] for t in idx)
        if total < 0:
            return None
        bound = total // (p - 1)
        size = (bound + 1) ** len(idx)
        if size > cap:
            raise CapExceeded(f"feasibility search over {size} vectors exceeds the cap of {cap}")
        found = None
        for combo in itertools.product(range(bound + 1), repeat=len(idx)):
            if sum(combo) > bound:
                continue
            ok = True
            for pos, t in enumerate(idx):
                prev = idx.index(datum.phi_inv(t))
                if k[t] - p * combo[pos] + combo[prev] < 0:
                    ok = False
                    break
            if ok:
                found = combo
                break
        if found is None:
            return None
        for pos, t in enumerate(idx):
            a[t] = found[pos]
    return FeasibilityWitness(tuple(a), _residue(datum, k, a))


# -- Goren-Oort strata -----------------------------------------------------

@dataclass(frozen=True)
class GOReport:
    dim: int
    rank: int
    quotient_degree: int
    theta_degrees: tuple[int, ...]

    @property
    def matches(self) -> bool:
        return self.dim == self.rank


def go_stratum_report(datum: SplittingDatum, sigma: Iterable[int]) -> GOReport:
    """dim M_Sigma = g - |Sigma| against the rank of the tautological foliation
    spanned by the line pieces outside Sigma. ``theta_degrees`` lists p^(g - f_P)
    for each prime P."""
    sigma = set(sigma)
    for s in sigma:
        datum._check(s)
    if not is_p_closed(datum, sigma):
        raise DatumError(f"{sorted(sigma)} is not Frobenius-stable")
    rank = 0
    for orbit in datum.orbits:
        rank += sum(1 for s in orbit if s not in sigma)
    return GOReport(
        dim=datum.g - len(sigma),
        rank=rank,
        quotient_degree=datum.p ** rank,
        theta_degrees=tuple(datum.p ** (datum.g - size) for size in datum.orbit_sizes),
    )


# -- idempotents -----------------------------------------------------------

@dataclass(frozen=True)
class IdempotentReport:
    per_orbit: tuple[bool, ...]
    details: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return all(self.per_orbit)


def idempotent_frobenius_check(datum: SplittingDatum, kappa: FiniteField) -> IdempotentReport:
    """For every orbit of size f: the idempotents of GF(p^f) (x) kappa are
    complete, orthogonal, have the eigenvalue property, and the coefficientwise
    p-power permutes them cyclically."""
    if kappa.p != datum.p:
        raise DatumError("field characteristic differs from p")
    bad = [f for f in datum.orbit_sizes if kappa.n % f]
    if bad:
        raise DatumError(f"orbit sizes {bad} do not divide [kappa : F_p] = {kappa.n}")
    results, details = [], []
    for f in datum.orbit_sizes:
        msg = _check_idempotents(f, kappa)
        results.append(msg == "")
        details.append(msg or "pass")
    return IdempotentReport(tuple(results), tuple(details))


def _check_idempotents(f: int, kappa: FiniteField) -> str:
    es = tensor_idempotents(f, kappa)
    zero = tuple([kappa.zero] * f)
    one = tensor_from_subfield([1], f, kappa)
    total = zero
    for e in es:
        total = tuple(x + y for x, y in zip(total, e))
    if total != one:
        return "idempotents do not sum to 1"
    for i, ei in enumerate(es):
        for j, ej in enumerate(es):
            prod = tensor_mul(ei, ej, f, kappa)
            if prod != (ei if i == j else zero):
                return f"e_{i} e_{j} wrong"
    # alpha (x) 1, where alpha generates GF(p^f) over F_p; for f = 1 any alpha is a scalar
    alpha = tensor_from_subfield([0, 1] if f > 1 else [1], f, kappa)
    roots = embedding_roots(f, kappa) if f > 1 else [kappa.one]
    for i, (ei, root) in enumerate(zip(es, roots)):
        lhs = tensor_mul(alpha, ei, f, kappa)
        rhs = tuple(root * c for c in ei)
        if lhs != rhs:
            return f"eigenvalue property fails at e_{i}"
        if tensor_frobenius(ei) != es[(i + 1) % f]:
            return f"phi(e_{i}) != e_{(i + 1) % f}"
    return ""


# -- q-expansions ------------------------------------------------------------

@lru_cache(maxsize=64)
def _subfield(f: int, kappa: FiniteField) -> tuple[FieldElement, ...]:
    return tuple(subfield_elements(f, kappa))


@dataclass(frozen=True)
class ExponentSpace:
    """Exponents alpha = sum_k key_k b_k in a free Z-module with basis b_k.

    ``images[k][s]`` is s(b_k) in kappa, consistent with Frobenius
    (images[k][phi s] = images[k][s]^p). ``pairings[k][j]`` is the integer
    Tr(b_k gamma_j); with the default identity matrix gamma is the dual basis.
    """

    datum: SplittingDatum
    kappa: FiniteField
    images: tuple[tuple[FieldElement, ...], ...]
    pairings: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        g = self.datum.g
        if len(self.images) != g or any(len(row) != g for row in self.images):
            raise DatumError("images must be a g x g array")
        for k, row in enumerate(self.images):
            for s in range(g):
                if frobenius(row[s], 1) != row[self.datum.phi(s)]:
                    raise DatumError(f"images of b_{k} are not Frobenius-compatible")

    @classmethod
    def build(cls, datum: SplittingDatum, kappa: FiniteField, rng,
              pairings: Sequence[Sequence[int]] | None = None) -> ExponentSpace:
        """Random Frobenius-compatible images: on each orbit of size f pick
        beta in GF(p^f) and send the orbit's j-th embedding to beta^(p^j)."""
        g = datum.g
        subfields = {f: _subfield(f, kappa) for f in set(datum.orbit_sizes)}
        images = []
        for _ in range(g):
            row: list[FieldElement] = [kappa.zero] * g
            for orbit in datum.orbits:
                beta = rng.choice(subfields[len(orbit)])
                for j, s in enumerate(orbit):
                    row[s] = frobenius(beta, j)
            images.append(tuple(row))
        if pairings is None:
            pairings = [[1 if i == j else 0 for j in range(g)] for i in range(g)]
        return cls(datum, kappa, tuple(images), tuple(tuple(int(x) for x in r) for r in pairings))

    def embed(self, key: Sequence[int], sigma: int) -> FieldElement:
        acc = self.kappa.zero
        for c, row in zip(key, self.images):
            if c:
                acc = acc + row[sigma] * c
        return acc

    def trace(self, key: Sequence[int], j: int) -> int:
        return sum(c * row[j] for c, row in zip(key, self.pairings))


@dataclass(frozen=True)
class QExp:
    """Finite sum of c_alpha q^alpha; ``terms`` maps exponent keys to nonzero
    coefficients."""

    space: ExponentSpace
    terms: Mapping[tuple[int, ...], FieldElement] = field(default_factory=dict)

    def __post_init__(self):
        clean = {tuple(k): v for k, v in self.terms.items() if not v.is_zero()}
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def random(cls, space: ExponentSpace, rng, max_terms: int = 50, spread: int = 5) -> QExp:
        g, kappa = space.datum.g, space.kappa
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            key = tuple(rng.randint(-spread, spread) for _ in range(g))
            terms[key] = kappa.random_element(rng)
        return cls(space, terms)

    def __add__(self, other: QExp) -> QExp:
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return QExp(self.space, out)

    def __mul__(self, other: QExp) -> QExp:
        out: dict[tuple[int, ...], FieldElement] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(x + y for x, y in zip(k1, k2))
                out[k] = out[k] + v1 * v2 if k in out else v1 * v2
        return QExp(self.space, out)

    def scale(self, c: FieldElement) -> QExp:
        return QExp(self.space, {k: v * c for k, v in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QExp):
            return NotImplemented
        return self.terms == other.terms

    def __len__(self) -> int:
        return len(self.terms)


def xi_derivation(expansion: QExp, sigma: int) -> QExp:
    """c q^alpha -> sigma(alpha) c q^alpha."""
    space = expansion.space
    return QExp(space, {k: v * space.embed(k, sigma) for k, v in expansion.terms.items()})


def katz_derivation(expansion: QExp, j: int) -> QExp:
    """c q^alpha -> Tr(alpha gamma_j) c q^alpha."""
    space = expansion.space
    return QExp(space, {k: v * space.trace(k, j) for k, v in expansion.terms.items()})


def xi_via_katz(expansion: QExp, sigma: int) -> QExp:
    """sum_j sigma(b_j) D(gamma_j), which is xi_sigma when gamma is the dual basis."""
    space = expansion.space
    out = QExp(space, {})
    for j in range(space.datum.g):
        out = out + katz_derivation(expansion, j).scale(space.images[j][sigma])
    return out
