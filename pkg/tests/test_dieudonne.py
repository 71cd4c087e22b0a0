import itertools
from fractions import Fraction

import pytest

from shimfol.cmtype import DatumError, OrbitDatum
from shimfol.dieudonne import (build_from_shuffle, build_standard, cotangent_component, dim_ker_V_on_cotangent,
                               duality_check, fv_relations_hold, slope_decomposition, word_profile)
from shimfol.eo import enumerate_shuffles, ord_shuffle
from shimfol.gfpn import build_field

SPLIT2 = OrbitDatum(2)
INERT2 = OrbitDatum(2, "inert")


def _unit_columns(mat):
    """Column j of a 0/1 matrix as the 1-based index of its nonzero row, or None."""
    out = []
    for j in range(mat.cols):
        rows = [i for i in range(mat.rows) if mat[i, j]]
        out.append(rows[0] + 1 if rows else None)
    return out


def test_multiplicative_component():
    n = build_standard(1, (1, 1), SPLIT2)
    assert all(m.is_zero() for m in n.F_mats)
    assert all(_unit_columns(m) == [1] for m in n.V_mats)


def test_etale_component():
    n = build_standard(1, (0, 0), SPLIT2)
    assert all(m.is_zero() for m in n.V_mats)
    assert all(_unit_columns(m) == [1] for m in n.F_mats)


def test_standard_kernel_dims_u21():
    n = build_standard(3, (2, 1), INERT2)
    assert [len(cotangent_component(n, i)) for i in range(2)] == [2, 1]


def test_standard_cotangent_is_top_basis_vectors():
    f = (2, 1, 3)
    n = build_standard(4, f, OrbitDatum(3))
    for i in range(3):
        support = sorted(_unit_columns_of_vectors(cotangent_component(n, i)))
        assert support == list(range(4 - f[i] + 1, 5))


def _unit_columns_of_vectors(vectors):
    return [next(j + 1 for j, x in enumerate(v) if x) for v in vectors]


def test_empty_cotangent():
    n = build_standard(3, (0, 2), SPLIT2)
    assert cotangent_component(n, 0) == []


def test_signature_out_of_range():
    with pytest.raises(DatumError):
        build_standard(2, (3, 1), SPLIT2)


def test_wrong_shuffle_blocks():
    with pytest.raises(DatumError):
        build_from_shuffle(3, (2, 1), INERT2, [[2, 1, 3], [1, 2, 3]])


def test_shuffle_cotangent_matches_F_rule():
    d, f = 4, (2, 3)
    for w0 in enumerate_shuffles(2, 4):
        for w1 in enumerate_shuffles(3, 4):
            n = build_from_shuffle(d, f, SPLIT2, [w0, w1])
            for i, w in enumerate((w0, w1)):
                expected = sorted(j for j in range(1, d + 1) if w(j) <= f[i])
                assert sorted(_unit_columns_of_vectors(cotangent_component(n, i))) == expected


def test_ordinary_shuffle_module_matches_standard():
    for d in range(1, 5):
        for f in itertools.product(range(d + 1), repeat=2):
            std = build_standard(d, f, SPLIT2)
            ordinary = build_from_shuffle(d, f, SPLIT2, [ord_shuffle(x, d - x) for x in f])
            assert word_profile(std) == word_profile(ordinary)


def test_identity_shuffle_kernel_counts():
    # direct evaluation: #{j <= d - f(i-1) : j <= f(i)}
    for d in range(1, 5):
        for f in itertools.product(range(d + 1), repeat=2):
            ids = [list(range(1, d + 1))] * 2
            n = build_from_shuffle(d, f, SPLIT2, ids)
            for i in range(2):
                assert dim_ker_V_on_cotangent(n, i) == min(f[i], d - f[i - 1])


def test_identity_shuffle_d2():
    n = build_from_shuffle(2, (1, 1), INERT2, [[1, 2], [1, 2]])
    assert dim_ker_V_on_cotangent(n, 0) == 1


def test_u21_fol_shuffle_kernel():
    # conjugate index carries the check involution of [1, 3, 2], namely [2, 1, 3]
    n = build_from_shuffle(3, (2, 1), INERT2, [[1, 3, 2], [2, 1, 3]])
    assert dim_ker_V_on_cotangent(n, 0) == 1


def test_standard_V_kernel_on_cotangent_exhaustive():
    for d in range(1, 7):
        for size in (1, 2, 3):
            if d == 6 and size == 3:
                continue
            for f in itertools.product(range(d + 1), repeat=size):
                n = build_standard(d, f, OrbitDatum(size))
                for i in range(size):
                    assert dim_ker_V_on_cotangent(n, i) == max(0, f[i] - f[i - 1])


def test_fv_vanish_on_shuffle_modules():
    for w0 in enumerate_shuffles(2, 4):
        for w1 in enumerate_shuffles(1, 4):
            assert fv_relations_hold(build_from_shuffle(4, (2, 1), SPLIT2, [w0, w1]))


def test_modules_over_extension_field():
    k = build_field(3, 2)
    n = build_standard(3, (2, 1), INERT2, k)
    assert fv_relations_hold(n)
    assert dim_ker_V_on_cotangent(n, 0) == 1


def _slope_oracle(d, f):
    size = len(f)
    per_column = [Fraction(sum(1 for i in range(size) if j > d - f[i]), size) for j in range(1, d + 1)]
    slopes = sorted(set(per_column))
    return [(s, per_column.count(s)) for s in slopes]


@pytest.mark.parametrize("d,f,expected", [
    (2, (1, 2), [(Fraction(1, 2), 1), (Fraction(1), 1)]),
    (3, (1, 2), [(Fraction(0), 1), (Fraction(1, 2), 1), (Fraction(1), 1)]),
    (4, (0, 0), [(Fraction(0), 4)]),
])
def test_slope_examples(d, f, expected):
    prof = slope_decomposition(d, f, SPLIT2)
    assert [(p.slope, p.multiplicity) for p in prof.parts] == expected == _slope_oracle(d, f)


def test_slope_g_profiles():
    prof = slope_decomposition(2, (1, 2), SPLIT2)
    assert [p.g for p in prof.parts] == [(0, 1), (1, 1)]


def test_slopes_match_oracle():
    for d in range(1, 6):
        for f in itertools.product(range(d + 1), repeat=3):
            prof = slope_decomposition(d, f, OrbitDatum(3))
            assert [(p.slope, p.multiplicity) for p in prof.parts] == _slope_oracle(d, f)


def test_duality_examples():
    assert duality_check(3, (2, 1), INERT2).passed
    assert duality_check(2, (1, 1), INERT2).passed
    bad = duality_check(2, (2, 1), INERT2)
    assert not bad.passed and "3" in bad.message


def test_duality_requires_inert():
    with pytest.raises(DatumError):
        duality_check(2, (1, 1), SPLIT2)
