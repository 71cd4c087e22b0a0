"""Exact arithmetic in GF(p) and GF(p^n), plus the dense linear algebra used
throughout the package.

Elements of GF(p^n) are coefficient vectors (c_0, ..., c_{n-1}) with respect to
the power basis 1, x, ..., x^{n-1} of GF(p)[x]/(modulus). Everything here is
immutable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

__all__ = [
    "FieldError",
    "FiniteField",
    "FieldElement",
    "Matrix",
    "build_field",
    "is_prime",
    "is_irreducible",
    "frobenius",
    "kernel_basis",
    "semilinear_kernel_dim",
    "solve",
    "subfield_elements",
    "embedding_roots",
    "tensor_mul",
    "tensor_frobenius",
    "tensor_idempotents",
    "tensor_from_subfield",
]

MAX_DEGREE = 12


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# Polynomials over GF(p) are tuples of residues, lowest degree first, trimmed.

def _trim(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> tuple[int, ...]:
    r = list(a)
    db = len(b) - 1
    inv_lead = pow(b[-1], p - 2, p)
    while len(r) - 1 >= db and r:
        coef = (r[-1] * inv_lead) % p
        shift = len(r) - 1 - db
        if coef:
            for k, bk in enumerate(b):
                r[shift + k] = (r[shift + k] - coef * bk) % p
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return tuple(r)


def _monic_polys(p: int, degree: int) -> Iterator[tuple[int, ...]]:
    """Monic polynomials of the given degree, ordered by the integer
    sum c_k p^k of their lower coefficients."""
    for code in range(p ** degree):
        coeffs = []
        for _ in range(degree):
            coeffs.append(code % p)
            code //= p
        yield tuple(coeffs) + (1,)


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= n/2."""
    n = len(modulus) - 1
    if n < 1:
        return False
    for deg in range(1, n // 2 + 1):
        for divisor in _monic_polys(p, deg):
            if not _poly_mod(modulus, divisor, p):
                return False
    return True


class FiniteField:
    """GF(p^n) presented as GF(p)[x]/(modulus)."""

    __slots__ = ("p", "n", "modulus", "order", "_zero", "_one")

    def __init__(self, p: int, n: int, modulus: tuple[int, ...]):
        self.p = p
        self.n = n
        self.modulus = modulus
        self.order = p ** n
        self._zero = FieldElement(self, (0,) * n)
        self._one = FieldElement(self, (1,) + (0,) * (n - 1))

    def __repr__(self) -> str:
        if self.n == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.n}, modulus={_poly_str(self.modulus)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteField):
            return NotImplemented
        return self.p == other.p and self.modulus == other.modulus

    def __hash__(self) -> int:
        return hash((self.p, self.modulus))

    @property
    def zero(self) -> FieldElement:
        return self._zero

    @property
    def one(self) -> FieldElement:
        return self._one

    @property
    def gen(self) -> FieldElement:
        """The class of x (for n = 1 this is the residue of x mod the linear
        modulus, i.e. minus its constant term)."""
        if self.n == 1:
            return self(-self.modulus[0])
        return FieldElement(self, (0, 1) + (0,) * (self.n - 2))

    def __call__(self, value: int | Sequence[int] | FieldElement) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.field is not self and value.field != self:
                raise FieldError("element belongs to a different field")
            return value
        if isinstance(value, int):
            return FieldElement(self, (value % self.p,) + (0,) * (self.n - 1))
        coeffs = [c % self.p for c in value]
        if len(coeffs) > self.n:
            raise FieldError(f"expected at most {self.n} coefficients")
        coeffs += [0] * (self.n - len(coeffs))
        return FieldElement(self, tuple(coeffs))

    def from_int(self, code: int) -> FieldElement:
        """Inverse of FieldElement.to_int."""
        coeffs = []
        for _ in range(self.n):
            coeffs.append(code % self.p)
            code //= self.p
        return FieldElement(self, tuple(coeffs))

    def elements(self) -> Iterator[FieldElement]:
        for code in range(self.order):
            yield self.from_int(code)

    def random_element(self, rng) -> FieldElement:
        return FieldElement(self, tuple(rng.randrange(self.p) for _ in range(self.n)))

    def prime_field(self) -> FiniteField:
        return build_field(self.p, 1)


def _poly_str(c: Sequence[int]) -> str:
    terms = []
    for k in range(len(c) - 1, -1, -1):
        if not c[k]:
            continue
        coef = "" if (c[k] == 1 and k) else str(c[k])
        mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
        terms.append(coef + mono)
    return " + ".join(terms) or "0"


class FieldElement:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: FiniteField, coeffs: tuple[int, ...]):
        self.field = field
        self.coeffs = coeffs

    def _coerce(self, other) -> FieldElement | None:
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise FieldError("mixed-field arithmetic")
            return other
        if isinstance(other, int):
            return self.field(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.field.p
        return FieldElement(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.field.p
        return FieldElement(self.field, tuple((a - b) % p for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        field = self.field
        p = field.p
        if field.n == 1:
            return FieldElement(field, ((self.coeffs[0] * o.coeffs[0]) % p,))
        prod = [0] * (2 * field.n - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        prod[i + j] += a * b
        mod = field.modulus
        n = field.n
        # modulus is monic: x^n = -(m_0 + ... + m_{n-1} x^{n-1})
        for k in range(len(prod) - 1, n - 1, -1):
            c = prod[k] % p
            if c:
                for t in range(n):
                    prod[k - n + t] -= c * mod[t]
        return FieldElement(field, tuple(c % p for c in prod[:n]))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> FieldElement:
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> FieldElement:
        if self.is_zero():
            raise ZeroDivisionError("zero has no inverse")
        return self ** (self.field.order - 2)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self.field(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.coeffs == other.coeffs and self.field == other.field

    def __hash__(self) -> int:
        return hash((self.field.p, self.coeffs))

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def to_int(self) -> int:
        """Integer code sum c_k p^k; ordering by it is the lexicographic order
        on coefficient vectors read from the top coefficient down."""
        v = 0
        for c in reversed(self.coeffs):
            v = v * self.field.p + c
        return v

    def __lt__(self, other: FieldElement) -> bool:
        return self.to_int() < other.to_int()

    def __repr__(self) -> str:
        if self.field.n == 1:
            return str(self.coeffs[0])
        return f"({_poly_str(self.coeffs).replace('x', 'g')})"


def build_field(p: int, n: int = 1, modulus: Sequence[int] | None = None) -> FiniteField:
    """Construct GF(p^n).

    ``modulus`` is a coefficient sequence, lowest degree first. Without one, the
    first monic irreducible of degree n in the order of ``_monic_polys`` is used.
    """
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if n < 1:
        raise FieldError("extension degree must be >= 1")
    if n > MAX_DEGREE:
        raise FieldError(f"extension degree {n} exceeds {MAX_DEGREE}")
    if modulus is not None:
        mod = tuple(c % p for c in modulus)
        if len(mod) != n + 1 or mod[-1] != 1:
            raise FieldError(f"modulus must be monic of degree {n}")
        if not is_irreducible(mod, p):
            raise FieldError(f"modulus {_poly_str(mod)} is reducible over GF({p})")
        return _cached_field(p, n, mod)
    return _cached_field(p, n, _default_modulus(p, n))


_FIELDS: dict[tuple[int, tuple[int, ...]], FiniteField] = {}
_DEFAULT_MODULI: dict[tuple[int, int], tuple[int, ...]] = {}


def _default_modulus(p: int, n: int) -> tuple[int, ...]:
    key = (p, n)
    if key not in _DEFAULT_MODULI:
        if n == 1:
            _DEFAULT_MODULI[key] = (0, 1)
        else:
            _DEFAULT_MODULI[key] = next(m for m in _monic_polys(p, n) if is_irreducible(m, p))
    return _DEFAULT_MODULI[key]


def _cached_field(p: int, n: int, modulus: tuple[int, ...]) -> FiniteField:
    key = (p, modulus)
    if key not in _FIELDS:
        _FIELDS[key] = FiniteField(p, n, modulus)
    return _FIELDS[key]


def frobenius(x: FieldElement, t: int = 1) -> FieldElement:
    """x^(p^t). The exponent is reduced mod n, so negative t gives the inverse
    Frobenius."""
    field = x.field
    t %= field.n
    if t == 0 or field.n == 1:
        return x
    return x ** (field.p ** t)


@dataclass(frozen=True)
class Matrix:
    """Dense matrix over a finite field; ``entries`` is a tuple of rows."""

    field: FiniteField
    rows: int
    cols: int
    entries: tuple[tuple[FieldElement, ...], ...]

    @classmethod
    def from_rows(cls, field: FiniteField, rows: Sequence[Sequence], cols: int | None = None) -> Matrix:
        entries = tuple(tuple(field(v) for v in row) for row in rows)
        ncols = len(entries[0]) if entries else (cols or 0)
        if any(len(r) != ncols for r in entries):
            raise ValueError("ragged matrix")
        return cls(field, len(entries), ncols, entries)

    @classmethod
    def zeros(cls, field: FiniteField, rows: int, cols: int) -> Matrix:
        z = field.zero
        return cls(field, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, field: FiniteField, size: int) -> Matrix:
        z, o = field.zero, field.one
        return cls(field, size, size, tuple(tuple(o if i == j else z for j in range(size)) for i in range(size)))

    @classmethod
    def from_columns(cls, field: FiniteField, columns: Sequence[Sequence], rows: int) -> Matrix:
        cols = [tuple(field(v) for v in c) for c in columns]
        return cls(field, rows, len(cols), tuple(tuple(c[i] for c in cols) for i in range(rows)))

    def __getitem__(self, ij: tuple[int, int]) -> FieldElement:
        i, j = ij
        return self.entries[i][j]

    def column(self, j: int) -> tuple[FieldElement, ...]:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> list[tuple[FieldElement, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> Matrix:
        return Matrix(self.field, self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else ())

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        if self.field.n == 1:
            return self._prime_matmul(other)
        zero = self.field.zero
        out = []
        other_cols = other.columns()
        for row in self.entries:
            new_row = []
            for col in other_cols:
                acc = zero
                for a, b in zip(row, col):
                    if a and b:
                        acc = acc + a * b
                new_row.append(acc)
            out.append(tuple(new_row))
        return Matrix(self.field, self.rows, other.cols, tuple(out))

    def _ints(self) -> list[list[int]]:
        return [[x.coeffs[0] for x in row] for row in self.entries]

    def _from_ints(self, rows: list[list[int]], ncols: int) -> Matrix:
        field = self.field
        elems = [FieldElement(field, (v,)) for v in range(field.p)]
        return Matrix(field, len(rows), ncols, tuple(tuple(elems[v] for v in row) for row in rows))

    def _prime_matmul(self, other: Matrix) -> Matrix:
        p = self.field.p
        a, b = self._ints(), other._ints()
        cols = list(zip(*b)) if b else [()] * other.cols
        out = [[sum(x * y for x, y in zip(row, col)) % p for col in cols] for row in a]
        return self._from_ints(out, other.cols)

    def apply(self, vector: Sequence[FieldElement]) -> tuple[FieldElement, ...]:
        zero = self.field.zero
        out = []
        for row in self.entries:
            acc = zero
            for a, b in zip(row, vector):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return tuple(out)

    def frobenius(self, t: int = 1) -> Matrix:
        return Matrix(self.field, self.rows, self.cols,
                      tuple(tuple(frobenius(x, t) for x in row) for row in self.entries))

    def is_zero(self) -> bool:
        return all(x.is_zero() for row in self.entries for x in row)

    def rref(self) -> tuple[Matrix, list[int]]:
        """Reduced row echelon form and pivot columns."""
        if self.field.n == 1:
            return self._prime_rref()
        rows = [list(r) for r in self.entries]
        pivots: list[int] = []
        r = 0
        for c in range(self.cols):
            pivot = next((i for i in range(r, self.rows) if rows[i][c]), None)
            if pivot is None:
                continue
            rows[r], rows[pivot] = rows[pivot], rows[r]
            inv = rows[r][c].inverse()
            rows[r] = [x * inv for x in rows[r]]
            for i in range(self.rows):
                if i != r and rows[i][c]:
                    factor = rows[i][c]
                    rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return Matrix(self.field, self.rows, self.cols, tuple(tuple(row) for row in rows)), pivots

    def _prime_rref(self) -> tuple[Matrix, list[int]]:
        # same elimination as rref, on plain residues
        p = self.field.p
        rows = self._ints()
        pivots: list[int] = []
        r = 0
        for c in range(self.cols):
            pivot = next((i for i in range(r, self.rows) if rows[i][c]), None)
            if pivot is None:
                continue
            rows[r], rows[pivot] = rows[pivot], rows[r]
            inv = pow(rows[r][c], p - 2, p)
            rows[r] = [(x * inv) % p for x in rows[r]]
            for i in range(self.rows):
                if i != r and rows[i][c]:
                    factor = rows[i][c]
                    rows[i] = [(x - factor * y) % p for x, y in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return self._from_ints(rows, self.cols), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def __repr__(self) -> str:
        body = "; ".join(" ".join(repr(x) for x in row) for row in self.entries)
        return f"Matrix[{self.rows}x{self.cols}]({body})"


def kernel_basis(a: Matrix) -> tuple[int, list[tuple[FieldElement, ...]]]:
    """Rank of ``a`` and a basis of its right null space {x : a x = 0}."""
    reduced, pivots = a.rref()
    free = [c for c in range(a.cols) if c not in pivots]
    zero, one = a.field.zero, a.field.one
    basis = []
    for fc in free:
        v = [zero] * a.cols
        v[fc] = one
        for r, pc in enumerate(pivots):
            v[pc] = -reduced.entries[r][fc]
        basis.append(tuple(v))
    return len(pivots), basis


def semilinear_kernel_dim(a: Matrix, twist: int = 0) -> int:
    """Dimension of the kernel of x -> a . phi^twist(x).

    Coordinatewise p-power is a bijection of k^n, so the twisted map has the
    same kernel dimension as ``a`` itself.
    """
    return a.cols - a.rank()


def solve(a: Matrix, b: Sequence[FieldElement]) -> tuple[FieldElement, ...] | None:
    """One solution of a x = b, or None when the system is inconsistent."""
    aug = Matrix(a.field, a.rows, a.cols + 1,
                 tuple(tuple(row) + (a.field(bi),) for row, bi in zip(a.entries, b)))
    reduced, pivots = aug.rref()
    if a.cols in pivots:
        return None
    x = [a.field.zero] * a.cols
    for r, pc in enumerate(pivots):
        x[pc] = reduced.entries[r][a.cols]
    return tuple(x)


# -- subfields, embeddings and the split algebra GF(p^f) (x) K -----------------

def subfield_elements(f: int, field: FiniteField) -> list[FieldElement]:
    """All elements of the unique subfield GF(p^f) of ``field``.

    The subfield is the kernel of the GF(p)-linear map x -> x^(p^f) - x, found
    by linear algebra over the prime field.
    """
    if field.n % f:
        raise FieldError(f"{f} does not divide {field.n}")
    p, n = field.p, field.n
    prime = build_field(p, 1)
    images = []
    for k in range(n):
        basis_vec = field([1 if i == k else 0 for i in range(n)])
        images.append((frobenius(basis_vec, f) - basis_vec).coeffs)
    mat = Matrix.from_columns(prime, images, n)
    _, basis = kernel_basis(mat)
    out = []
    for combo in itertools.product(range(p), repeat=len(basis)):
        coeffs = [0] * n
        for c, vec in zip(combo, basis):
            for i in range(n):
                coeffs[i] = (coeffs[i] + c * vec[i].coeffs[0]) % p
        out.append(field(coeffs))
    return sorted(out, key=FieldElement.to_int)


def _eval_poly(coeffs: Sequence[int], x: FieldElement) -> FieldElement:
    acc = x.field.zero
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def embedding_roots(f: int, field: FiniteField) -> list[FieldElement]:
    """Images of the generator of GF(p^f) under its f embeddings into ``field``.

    The generator is a root of the default degree-f modulus. Index 0 is the
    root with the smallest integer code; index i+1 is the p-th power of index i,
    so the list is in Frobenius-cyclic order.
    """
    mu = _default_modulus(field.p, f)
    roots = [x for x in subfield_elements(f, field) if _eval_poly(mu, x).is_zero()]
    if len(roots) != f:
        raise FieldError(f"expected {f} roots, found {len(roots)}")
    beta = min(roots, key=FieldElement.to_int)
    ordered = [beta]
    for _ in range(f - 1):
        ordered.append(frobenius(ordered[-1], 1))
    return ordered


TensorElement = tuple[FieldElement, ...]


def tensor_mul(u: TensorElement, v: TensorElement, f: int, field: FiniteField) -> TensorElement:
    """Product in GF(p^f) (x) K = K[x]/(mu), elements as coefficient vectors
    over K in the basis alpha^k (x) 1."""
    mu = _default_modulus(field.p, f)
    prod = [field.zero] * (2 * f - 1)
    for i, a in enumerate(u):
        if a:
            for j, b in enumerate(v):
                if b:
                    prod[i + j] = prod[i + j] + a * b
    for k in range(len(prod) - 1, f - 1, -1):
        c = prod[k]
        if c:
            for t in range(f):
                prod[k - f + t] = prod[k - f + t] - c * mu[t]
    return tuple(prod[:f])


def tensor_frobenius(u: TensorElement) -> TensorElement:
    """a (x) r -> a (x) r^p."""
    return tuple(frobenius(c, 1) for c in u)


def tensor_idempotents(f: int, field: FiniteField) -> list[TensorElement]:
    """Primitive idempotents e_0..e_{f-1} of GF(p^f) (x) K.

    e_i is the Lagrange polynomial at the i-th embedding root, so
    (a (x) 1) e_i = (1 (x) sigma_i(a)) e_i.
    """
    if f < 1 or field.n % f:
        raise FieldError(f"subfield degree {f} does not divide {field.n}")
    roots = embedding_roots(f, field)
    out = []
    for i, bi in enumerate(roots):
        poly: list[FieldElement] = [field.one]
        denom = field.one
        for j, bj in enumerate(roots):
            if j == i:
                continue
            # poly *= (x - bj)
            new = [field.zero] * (len(poly) + 1)
            for k, c in enumerate(poly):
                new[k + 1] = new[k + 1] + c
                new[k] = new[k] - c * bj
            poly = new
            denom = denom * (bi - bj)
        inv = denom.inverse()
        out.append(tuple(c * inv for c in poly))
    return out


def tensor_from_subfield(a_coeffs: Iterable[int], f: int, field: FiniteField) -> TensorElement:
    """a (x) 1 for a = sum a_k alpha^k in GF(p^f)."""
    coeffs = list(a_coeffs)
    coeffs += [0] * (f - len(coeffs))
    return tuple(field(c) for c in coeffs)
