import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shimfol.cmtype import DatumError
from shimfol.eo import CapExceeded
from shimfol.gfpn import build_field
from shimfol.hilbert import (ExponentSpace, QExp, SplittingDatum, cone_membership, go_stratum_report,
                             hasse_coefficients, hasse_weight, hasse_weights, idempotent_frobenius_check,
                             is_p_closed, katz_derivation, obstruction_weight, unit_weight, weight_feasibility,
                             xi_derivation, xi_via_katz)


def test_p_closed_examples():
    datum = SplittingDatum(3, (3,))
    assert not is_p_closed(datum, {0})
    assert is_p_closed(datum, {0, 1, 2})
    split = SplittingDatum(5, (1, 1, 1))
    for n in range(4):
        for s in itertools.combinations(range(3), n):
            assert is_p_closed(split, s)


def test_singleton_closed_iff_orbit_size_one():
    datum = SplittingDatum(2, (1, 2, 3, 1))
    for s in range(datum.g):
        assert is_p_closed(datum, {s}) == (len(datum.orbit_of(s)) == 1)


def test_hasse_examples():
    p = 3
    inert = SplittingDatum(p, (2,))
    assert hasse_weight(inert, 0) == (-1, p)
    assert obstruction_weight(inert, 0, 1) == (2 * p, -2)
    assert obstruction_weight(inert, 0, 1) == tuple(2 * x for x in hasse_weight(inert, 1))
    single = SplittingDatum(p, (1,))
    assert hasse_weight(single, 0) == (p - 1,)
    assert hasse_weights(SplittingDatum(5, (1, 2, 3))).square_identity


def test_cone_examples():
    for p in (2, 3, 5):
        datum = SplittingDatum(p, (2, 1))
        ones = (1, 1, 1)
        assert all(cone_membership(datum, ones, c) for c in ("min", "std", "hasse"))
        h = hasse_weight(datum, 0)
        assert cone_membership(datum, h, "hasse") and not cone_membership(datum, h, "std")
        assert all(cone_membership(datum, (0, 0, 0), c) for c in ("min", "std", "hasse"))
    with pytest.raises(DatumError):
        cone_membership(SplittingDatum(2, (1,)), (1,), "bogus")


def _closed_form(datum, k):
    # a_t = sum_j p^j k_{phi^j t} / (p^f - 1)
    p = datum.p
    out = []
    for t in range(datum.g):
        f = len(datum.orbit_of(t))
        out.append(Fraction(sum(p**j * k[datum.phi(t, j)] for j in range(f)), p**f - 1))
    return tuple(out)


def test_hasse_coefficients_match_closed_form():
    rng = random.Random(3)
    for p in (2, 3, 5):
        for sizes in [(1,), (2,), (3,), (4,), (1, 3), (2, 2)]:
            datum = SplittingDatum(p, sizes)
            for _ in range(50):
                k = tuple(rng.randint(-9, 9) for _ in range(datum.g))
                assert hasse_coefficients(datum, k) == _closed_form(datum, k)


def test_ones_hasse_coefficients():
    datum = SplittingDatum(3, (2,))
    assert hasse_coefficients(datum, (1, 1)) == (Fraction(1, 2), Fraction(1, 2))


@settings(max_examples=300, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.sampled_from([(1,), (2,), (3,), (1, 2), (4,), (2, 2)]), st.data())
def test_cone_chain_property(p, sizes, data):
    datum = SplittingDatum(p, sizes)
    k = tuple(data.draw(st.integers(-3, 4 * p)) for _ in range(datum.g))
    if cone_membership(datum, k, "min"):
        assert cone_membership(datum, k, "std")
    if cone_membership(datum, k, "std"):
        assert cone_membership(datum, k, "hasse")


def test_feasibility_examples():
    for p in (2, 3, 5):
        two = SplittingDatum(p, (2,))
        w = weight_feasibility(two, obstruction_weight(two, 0, 1))
        assert w.a == (2, 0) and w.residue == (0, 0)
        three = SplittingDatum(p, (3,))
        assert weight_feasibility(three, obstruction_weight(three, 0, 2)) is None
        assert weight_feasibility(three, (0, 0, 0)).a == (0, 0, 0)


def _feasible_brute(datum, k, bound):
    p = datum.p
    for a in itertools.product(range(bound + 1), repeat=datum.g):
        if all(k[t] - p * a[t] + a[datum.phi_inv(t)] >= 0 for t in range(datum.g)):
            return a
    return None


def test_feasibility_agrees_with_unbounded_search():
    # the brute force uses a box three times larger than the solver's bound
    rng = random.Random(5)
    for p in (2, 3):
        for size in (1, 2, 3):
            datum = SplittingDatum(p, (size,))
            for _ in range(40):
                k = tuple(rng.randint(-3, 6) for _ in range(size))
                bound = max(0, sum(k)) // (p - 1)
                w = weight_feasibility(datum, k)
                brute = _feasible_brute(datum, k, 3 * bound + 2)
                assert (w is None) == (brute is None)
                if w is not None:
                    assert all(x >= 0 for x in w.residue)
                    assert w.a == _feasible_brute(datum, k, bound)


def test_feasibility_cap():
    datum = SplittingDatum(2, (4,))
    with pytest.raises(CapExceeded):
        weight_feasibility(datum, (50, 50, 50, 50), cap=100)


def test_go_examples():
    inert = SplittingDatum(5, (3,))
    rep = go_stratum_report(inert, {0, 1, 2})
    assert (rep.dim, rep.rank, rep.quotient_degree) == (0, 0, 1)
    mixed = SplittingDatum(3, (1, 2))
    rep = go_stratum_report(mixed, {1, 2})
    assert (rep.dim, rep.rank, rep.quotient_degree) == (1, 1, 3)
    assert rep.theta_degrees[0] == 3**2
    empty = go_stratum_report(mixed, set())
    assert (empty.dim, empty.rank) == (3, 3) and empty.matches
    with pytest.raises(DatumError):
        go_stratum_report(mixed, {1})


def test_idempotent_check():
    assert idempotent_frobenius_check(SplittingDatum(2, (1, 1)), build_field(2, 1)).passed
    assert idempotent_frobenius_check(SplittingDatum(3, (2,)), build_field(3, 2)).passed
    assert idempotent_frobenius_check(SplittingDatum(2, (3, 1)), build_field(2, 6)).passed
    with pytest.raises(DatumError):
        idempotent_frobenius_check(SplittingDatum(2, (3,)), build_field(2, 4))


def _space(p=3, sizes=(1, 2), n=2, seed=0):
    return ExponentSpace.build(SplittingDatum(p, sizes), build_field(p, n), random.Random(seed))


def test_xi_single_term():
    space = _space()
    kappa = space.kappa
    c = kappa.gen
    q = QExp(space, {(1, 2, 0): c})
    s = space.embed((1, 2, 0), 1)
    assert xi_derivation(q, 1).terms == ({(1, 2, 0): c * s} if s else {})


def test_xi_power_is_xi_of_frobenius():
    for p, sizes, n in [(2, (2, 1), 2), (3, (3,), 3), (5, (2, 3), 6)]:
        space = _space(p, sizes, n, seed=p)
        q = QExp.random(space, random.Random(9))
        datum = space.datum
        for s in range(datum.g):
            lhs = q
            for _ in range(p):
                lhs = xi_derivation(lhs, s)
            assert lhs == xi_derivation(q, datum.phi(s))


def test_katz_zero_pairing_gives_zero():
    datum = SplittingDatum(3, (2,))
    space = ExponentSpace.build(datum, build_field(3, 2), random.Random(1), pairings=[[3, 0], [6, 0]])
    q = QExp.random(space, random.Random(2))
    # every pairing with gamma_0 is a multiple of 3
    assert len(katz_derivation(q, 0)) == 0


def test_leibniz_and_trace_route():
    rng = random.Random(4)
    space = _space(5, (1, 2), 2, seed=4)
    for _ in range(10):
        f, g = QExp.random(space, rng, max_terms=15), QExp.random(space, rng, max_terms=15)
        for s in range(3):
            assert xi_derivation(f * g, s) == xi_derivation(f, s) * g + f * xi_derivation(g, s)
            assert xi_via_katz(f, s) == xi_derivation(f, s)
        for j in range(3):
            assert katz_derivation(f * g, j) == katz_derivation(f, j) * g + f * katz_derivation(g, j)


def test_exponent_space_rejects_incompatible_images():
    datum = SplittingDatum(2, (2,))
    k = build_field(2, 2)
    with pytest.raises(DatumError):
        ExponentSpace(datum, k, ((k.gen, k.gen), (k.one, k.one)), ((1, 0), (0, 1)))


def test_unit_weight_range():
    with pytest.raises(DatumError):
        unit_weight(SplittingDatum(2, (2,)), 5)
