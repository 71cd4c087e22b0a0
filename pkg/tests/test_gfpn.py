import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shimfol.gfpn import (FieldError, Matrix, build_field, embedding_roots, frobenius, is_irreducible,
                          kernel_basis, semilinear_kernel_dim, solve, subfield_elements, tensor_frobenius,
                          tensor_from_subfield, tensor_idempotents, tensor_mul)


def _has_root(poly, p):
    return any(sum(c * x**k for k, c in enumerate(poly)) % p == 0 for x in range(p))


def test_prime_field_needs_no_modulus():
    f = build_field(5)
    assert f.order == 5 and f.n == 1


def test_gf4_modulus_is_only_irreducible_quadratic():
    # oracle: a quadratic is irreducible iff it has no root
    irreducible = [(c0, c1, 1) for c0, c1 in itertools.product(range(2), repeat=2)
                   if not _has_root((c0, c1, 1), 2)]
    assert irreducible == [(1, 1, 1)]
    assert build_field(2, 2).modulus == (1, 1, 1)


def test_default_modulus_is_smallest_irreducible():
    # cubics over GF(3): irreducible iff rootless; order by the code c0 + 3 c1 + 9 c2
    candidates = sorted(itertools.product(range(3), repeat=3), key=lambda c: c[0] + 3 * c[1] + 9 * c[2])
    first = next(c + (1,) for c in candidates if not _has_root(c + (1,), 3))
    assert build_field(3, 3).modulus == first


def test_reducible_modulus_rejected():
    with pytest.raises(FieldError):
        build_field(2, 2, modulus=(1, 0, 1))


def test_non_prime_rejected():
    with pytest.raises(FieldError):
        build_field(6)


def test_is_irreducible():
    assert is_irreducible((1, 1, 1), 2)
    assert not is_irreducible((1, 0, 1), 2)


def test_field_size_and_frobenius_order():
    for p, n in [(2, 3), (3, 2), (5, 2), (2, 4)]:
        k = build_field(p, n)
        assert len(set(k.elements())) == p**n
        g = k.gen
        orbit = [frobenius(g, t) for t in range(n)]
        assert len(set(orbit)) == n
        assert frobenius(g, n) == g


def test_frobenius_examples():
    f5 = build_field(5)
    assert all(frobenius(x, 1) == x for x in f5.elements())
    k = build_field(2, 2)
    g = k.gen
    assert frobenius(g, 1) == g * g == g + 1
    assert frobenius(g, 1) != g


def test_frobenius_is_automorphism_on_random_pairs():
    rng = random.Random(11)
    for p, n in [(2, 4), (3, 3), (5, 2), (5, 6)]:
        k = build_field(p, n)
        for _ in range(250):
            x, y = k.random_element(rng), k.random_element(rng)
            assert frobenius(x * y, 1) == frobenius(x, 1) * frobenius(y, 1)
            assert frobenius(x + y, 1) == frobenius(x, 1) + frobenius(y, 1)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([(2, 3), (3, 2), (7, 1), (5, 3)]), st.data())
def test_field_axioms(pn, data):
    k = build_field(*pn)
    elem = st.integers(0, k.order - 1).map(k.from_int)
    x, y, z = data.draw(elem), data.draw(elem), data.draw(elem)
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert x - x == k.zero
    if x:
        assert x * x.inverse() == k.one


def test_kernel_examples():
    f2 = build_field(2)
    rank, basis = kernel_basis(Matrix.identity(f2, 3))
    assert rank == 3 and basis == []
    rank, basis = kernel_basis(Matrix.zeros(f2, 2, 3))
    assert rank == 0 and len(basis) == 3
    rank, basis = kernel_basis(Matrix.from_rows(f2, [[1, 1], [1, 1]]))
    assert rank == 1 and basis == [(f2(1), f2(1))]


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.sampled_from([(2, 1), (3, 1), (2, 2), (3, 2)]), st.data())
def test_kernel_rank_nullity(rows, cols, pn, data):
    k = build_field(*pn)
    entries = [[k.from_int(data.draw(st.integers(0, k.order - 1))) for _ in range(cols)] for _ in range(rows)]
    a = Matrix.from_rows(k, entries)
    rank, basis = kernel_basis(a)
    assert rank + len(basis) == cols
    assert rank <= min(rows, cols)
    assert rank == a.rref()[0].rank()
    for b in basis:
        assert all(x.is_zero() for x in a.apply(b))


def test_semilinear_kernel_dim():
    k = build_field(2, 2)
    assert semilinear_kernel_dim(Matrix.identity(k, 3), 1) == 0
    assert semilinear_kernel_dim(Matrix.zeros(k, 2, 2), -1) == 2
    g = k.gen
    rank_one = Matrix.from_rows(k, [[g, g * g], [k.one, g]])
    assert rank_one.rank() == 1
    assert semilinear_kernel_dim(rank_one, 1) == 1


def test_solve():
    k = build_field(3)
    a = Matrix.from_rows(k, [[1, 2], [0, 1]])
    x = solve(a, [k(1), k(2)])
    assert a.apply(x) == (k(1), k(2))
    assert solve(Matrix.from_rows(k, [[1, 1], [1, 1]]), [k(0), k(1)]) is None


def test_subfield_elements():
    k = build_field(3, 4)
    sub = subfield_elements(2, k)
    assert len(sub) == 9
    assert all(frobenius(x, 2) == x for x in sub)


# -- idempotents -------------------------------------------------------------

def _oracle_idempotents(f, k):
    """Solve (alpha (x) 1 - 1 (x) beta_i) e = 0 and scale so that e^2 = e."""
    out = []
    alpha = tensor_from_subfield([0, 1], f, k)
    for beta in embedding_roots(f, k):
        # columns: (alpha (x) 1 - 1 (x) beta) applied to the basis alpha^j (x) 1
        columns = []
        for j in range(f):
            basis = tuple(k.one if t == j else k.zero for t in range(f))
            prod = tensor_mul(alpha, basis, f, k)
            columns.append(tuple(x - beta * y for x, y in zip(prod, basis)))
        _, kernel = kernel_basis(Matrix.from_columns(k, columns, f))
        assert len(kernel) == 1
        v = kernel[0]
        sq = tensor_mul(v, v, f, k)
        pivot = next(t for t in range(f) if v[t])
        lam = sq[pivot] / v[pivot]
        out.append(tuple(x / lam for x in v))
    return out


def test_single_idempotent():
    k = build_field(3, 2)
    assert tensor_idempotents(1, k) == [(k.one,)]


@pytest.mark.parametrize("p,f,n", [(2, 2, 2), (3, 2, 4), (5, 3, 6), (2, 3, 6)])
def test_idempotents_match_linear_solve_oracle(p, f, n):
    k = build_field(p, n)
    es = tensor_idempotents(f, k)
    assert es == _oracle_idempotents(f, k)
    for i, e in enumerate(es):
        assert tensor_frobenius(e) == es[(i + 1) % f]
    total = tuple(sum((e[t] for e in es), k.zero) for t in range(f))
    assert total == tensor_from_subfield([1], f, k)


def test_idempotent_degree_must_divide():
    with pytest.raises(FieldError):
        tensor_idempotents(3, build_field(2, 4))
