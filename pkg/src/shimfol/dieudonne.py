"""Mod-p Dieudonne modules attached to one Frobenius orbit.

A module has d basis vectors e_{i,1..d} in each graded component i. F maps
component i to i+1 (phi-semilinear) and V maps component i to i-1
(phi^-1-semilinear). Both are stored as matrices whose column j is the image of
e_{i,j+1}; all structure constants are 0 or 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .cmtype import INERT, DatumError, OrbitDatum, check_signature
from .gfpn import FieldElement, FiniteField, Matrix, build_field, kernel_basis, semilinear_kernel_dim

__all__ = [
    "SemilinearMap",
    "ModPDieudonneModule",
    "SlopePart",
    "SlopeProfile",
    "DualityReport",
    "build_standard",
    "build_from_shuffle",
    "cotangent_component",
    "dim_ker_V_on_cotangent",
    "word_map",
    "word_profile",
    "fv_relations_hold",
    "slope_decomposition",
    "duality_check",
]


@dataclass(frozen=True)
class SemilinearMap:
    """x -> matrix . phi^twist(x), from component ``source`` to ``target``."""

    matrix: Matrix
    twist: int
    source: int
    target: int

    def __matmul__(self, other: SemilinearMap) -> SemilinearMap:
        # A phi^s (B phi^t x) = A phi^s(B) phi^{s+t} x
        if other.target != self.source:
            raise ValueError("components do not match")
        return SemilinearMap(self.matrix @ other.matrix.frobenius(self.twist),
                             self.twist + other.twist, other.source, self.target)

    def apply(self, x: Sequence[FieldElement]) -> tuple[FieldElement, ...]:
        from .gfpn import frobenius
        return self.matrix.apply([frobenius(c, self.twist) for c in x])

    def kernel_dim(self) -> int:
        return semilinear_kernel_dim(self.matrix, self.twist)

    def image_dim(self) -> int:
        return self.matrix.rank()


@dataclass(frozen=True)
class ModPDieudonneModule:
    field: FiniteField
    orbit: OrbitDatum
    d: int
    signature: tuple[int, ...]
    F_mats: tuple[Matrix, ...]
    V_mats: tuple[Matrix, ...]

    @property
    def size(self) -> int:
        return self.orbit.size

    def F(self, i: int) -> SemilinearMap:
        i %= self.size
        return SemilinearMap(self.F_mats[i], 1, i, (i + 1) % self.size)

    def V(self, i: int) -> SemilinearMap:
        i %= self.size
        return SemilinearMap(self.V_mats[i], -1, i, (i - 1) % self.size)


def _default_field(field: FiniteField | None) -> FiniteField:
    return field if field is not None else build_field(2)


def _from_images(field: FiniteField, d: int, images: list[int | None]) -> Matrix:
    """Matrix whose column j is e_{images[j]} (1-based), or zero when None."""
    return _image_matrix(field, d, tuple(images))


@lru_cache(maxsize=65536)
def _image_matrix(field: FiniteField, d: int, images: tuple[int | None, ...]) -> Matrix:
    zero, one = field.zero, field.one
    rows = [[zero] * d for _ in range(d)]
    for j, target in enumerate(images):
        if target is not None:
            rows[target - 1][j] = one
    return Matrix(field, d, d, tuple(tuple(r) for r in rows))


def build_standard(d: int, f: Sequence[int], orbit: OrbitDatum,
                   field: FiniteField | None = None) -> ModPDieudonneModule:
    """N(d, f) = M(d, f) / p.

    F(e_{i,j}) = e_{i+1,j} for j <= d - f(i), else 0;
    V(e_{i+1,j}) = e_{i,j} for j > d - f(i), else 0.
    """
    f = check_signature(d, f, orbit)
    field = _default_field(field)
    size = orbit.size
    F_mats, V_mats = [], [None] * size
    for i in range(size):
        F_mats.append(_from_images(field, d, [j if j <= d - f[i] else None for j in range(1, d + 1)]))
        V_mats[(i + 1) % size] = _from_images(field, d, [j if j > d - f[i] else None for j in range(1, d + 1)])
    return ModPDieudonneModule(field, orbit, d, f, tuple(F_mats), tuple(V_mats))


def build_from_shuffle(d: int, f: Sequence[int], orbit: OrbitDatum, shuffles: Sequence,
                       field: FiniteField | None = None) -> ModPDieudonneModule:
    """N_w for per-index shuffles w_i in Pi_{f(i), d-f(i)}.

    F(e_{i,j}) = 0 if w_i(j) <= f(i), e_{i+1,m} if w_i(j) = f(i) + m;
    V(e_{i+1,j}) = 0 if j <= d - f(i), e_{i,n} if j = d - f(i) + w_i(n).

    ``shuffles`` may hold eo.Shuffle objects or plain one-line sequences.
    """
    f = check_signature(d, f, orbit)
    field = _default_field(field)
    size = orbit.size
    if len(shuffles) != size:
        raise DatumError(f"need {size} shuffles, got {len(shuffles)}")
    images = [tuple(getattr(w, "image", w)) for w in shuffles]
    for i, w in enumerate(images):
        _check_shuffle(w, f[i], d, i)
    F_mats, V_mats = [], [None] * size
    for i, w in enumerate(images):
        F_mats.append(_from_images(field, d, [None if w[j] <= f[i] else w[j] - f[i] for j in range(d)]))
        v_img: list[int | None] = [None] * d
        for n in range(d):
            if w[n] <= f[i]:
                v_img[d - f[i] + w[n] - 1] = n + 1
        V_mats[(i + 1) % size] = _from_images(field, d, v_img)
    return ModPDieudonneModule(field, orbit, d, f, tuple(F_mats), tuple(V_mats))


def _check_shuffle(w: Sequence[int], e: int, d: int, i: int) -> None:
    if sorted(w) != list(range(1, d + 1)):
        raise DatumError(f"w_{i} = {list(w)} is not a permutation of 1..{d}")
    low = [w.index(v) for v in range(1, e + 1)]
    high = [w.index(v) for v in range(e + 1, d + 1)]
    if low != sorted(low) or high != sorted(high):
        raise DatumError(f"w_{i} = {list(w)} is not an ({e},{d - e})-shuffle")


def cotangent_component(module: ModPDieudonneModule, i: int) -> list[tuple[FieldElement, ...]]:
    """Basis of ker F on component i."""
    return kernel_basis(module.F_mats[i % module.size])[1]


def dim_ker_V_on_cotangent(module: ModPDieudonneModule, i: int) -> int:
    basis = cotangent_component(module, i)
    if not basis:
        return 0
    restricted = module.V_mats[i % module.size] @ Matrix.from_columns(module.field, basis, module.d)
    return semilinear_kernel_dim(restricted, -1)


def word_map(module: ModPDieudonneModule, word: str, i: int) -> SemilinearMap:
    """Composite operator for a word in F, V read as a composition (rightmost
    letter applied first), starting at component i."""
    current = SemilinearMap(Matrix.identity(module.field, module.d), 0, i % module.size, i % module.size)
    for letter in reversed(word):
        step = module.F(current.target) if letter == "F" else module.V(current.target)
        current = step @ current
    return current


def word_profile(module: ModPDieudonneModule, max_len: int = 2) -> dict[str, tuple[tuple[int, int], ...]]:
    """For each word of length 1..max_len, (kernel dim, image dim) per component."""
    words = [""]
    out = {}
    for _ in range(max_len):
        words = [w + c for w in words for c in "FV"]
        for w in words:
            out[w] = tuple((m.kernel_dim(), m.image_dim())
                           for m in (word_map(module, w, i) for i in range(module.size)))
    return out


def fv_relations_hold(module: ModPDieudonneModule) -> bool:
    return all(word_map(module, w, i).matrix.is_zero()
               for w in ("FV", "VF") for i in range(module.size))


# -- slopes ----------------------------------------------------------------

@dataclass(frozen=True)
class SlopePart:
    slope: Fraction
    multiplicity: int
    g: tuple[int, ...]


@dataclass(frozen=True)
class SlopeProfile:
    d: int
    signature: tuple[int, ...]
    parts: tuple[SlopePart, ...]

    @property
    def slopes(self) -> list[Fraction]:
        return [part.slope for part in self.parts]

    def __len__(self) -> int:
        return len(self.parts)


def slope_decomposition(d: int, f: Sequence[int], orbit: OrbitDatum) -> SlopeProfile:
    """Group the rank-one submodules span{e_{i,j} : i} by slope
    |{i : j > d - f(i)}| / size."""
    f = check_signature(d, f, orbit)
    size = orbit.size
    parts: list[SlopePart] = []
    for j in range(1, d + 1):
        g = tuple(1 if j > d - f[i] else 0 for i in range(size))
        slope = Fraction(sum(g), size)
        if parts and parts[-1].slope == slope:
            last = parts[-1]
            parts[-1] = SlopePart(slope, last.multiplicity + 1, last.g)
        else:
            parts.append(SlopePart(slope, 1, g))
    return SlopeProfile(d, f, tuple(parts))


# -- duality for inert orbits ------------------------------------------------

@dataclass(frozen=True)
class DualityReport:
    passed: bool
    message: str
    counterexample: tuple | None = None


def duality_check(d: int, f: Sequence[int], orbit: OrbitDatum,
                  field: FiniteField | None = None) -> DualityReport:
    """Check the symmetric pairing <e_{i,j}, e_{i+m,j'}> = delta_{j', d+1-j}
    against <Fx, y> = <x, Vy>^phi on all basis pairs of the standard module."""
    if orbit.kind != INERT:
        raise DatumError("duality check needs an inert orbit")
    f = tuple(f)
    size, m = orbit.size, orbit.half_shift
    for i in range(size):
        if f[i] + f[(i + m) % size] != d:
            return DualityReport(False, f"f({i}) + f({(i + m) % size}) = {f[i] + f[(i + m) % size]} != {d}")
    module = build_standard(d, f, orbit, field)
    fld = module.field

    def pair(comp_x: int, x: Sequence[FieldElement], comp_y: int, y: Sequence[FieldElement]) -> FieldElement:
        if (comp_x + m) % size != comp_y:
            return fld.zero
        acc = fld.zero
        for j in range(d):
            acc = acc + x[j] * y[d - 1 - j]
        return acc

    def unit(j: int) -> tuple[FieldElement, ...]:
        return tuple(fld.one if k == j else fld.zero for k in range(d))

    from .gfpn import frobenius
    for i in range(size):
        for k in range(size):
            for j in range(d):
                for jj in range(d):
                    x, y = unit(j), unit(jj)
                    Fx = module.F(i).apply(x)
                    Vy = module.V(k).apply(y)
                    lhs = pair((i + 1) % size, Fx, k, y)
                    rhs = frobenius(pair(i, x, (k - 1) % size, Vy), 1)
                    if lhs != rhs:
                        return DualityReport(False, "adjunction fails",
                                             ((i, j + 1), (k, jj + 1), lhs, rhs))
                    if pair(i, x, k, y) != pair(k, y, i, x):
                        return DualityReport(False, "pairing not symmetric", ((i, j + 1), (k, jj + 1)))
    return DualityReport(True, "pass")
