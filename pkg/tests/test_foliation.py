import itertools

import pytest

from shimfol.cmtype import CMTypeDatum, DatumError, Embedding, OrbitDatum
from shimfol.dieudonne import slope_decomposition
from shimfol.eo import enumerate_labels, in_M_sigma, label_identity
from shimfol.foliation import (blowup_fiber_dim, cascade_identity_check, cascade_pq, dim_ext_group,
                               foliation_rank, foliation_report, r_V_ord_pair)

U21 = CMTypeDatum.single(3, (2, 1), "inert")


def test_r_V_ord_examples():
    assert r_V_ord_pair(U21, U21.pairs()[0]) == 1
    flat = CMTypeDatum.single(4, (2, 2))
    assert all(r_V_ord_pair(flat, p) == 0 for p in flat.pairs())
    zero = CMTypeDatum.single(3, (0, 2))
    assert r_V_ord_pair(zero, zero.pairs()[0]) == 0


def test_r_V_ord_symmetric_in_pair_members():
    datum = CMTypeDatum.single(5, (1, 4, 2))
    for pair in datum.pairs():
        tau, bar = datum.members(pair)
        d = datum.d

        def value(t):
            r, rp = datum.r(t), datum.r(datum.phi_inv(t))
            return max(0, r - rp) * (d - r) + r * max(0, rp - r)

        assert value(tau) == value(bar) == r_V_ord_pair(datum, pair)


def test_report_u21():
    rep = foliation_report(U21, U21.pairs())
    assert (rep.rank, rep.corank, rep.dim_M, rep.dim_M_fol) == (1, 1, 2, 1)


def test_report_empty_sigma():
    datum = CMTypeDatum.single(4, (1, 3, 2))
    rep = foliation_report(datum, [])
    assert rep.corank == 0 and rep.rank == rep.dim_M


def test_two_split_orbits():
    datum = CMTypeDatum.build(3, [("split", (2, 1)), ("split", (2, 1))])
    rep = foliation_report(datum, datum.pairs())
    # independent evaluation: each orbit contributes pairs (r, r_prev) = (2, 1) and (1, 2)
    per_pair = [max(0, r - rp) * (3 - r) + r * max(0, rp - r) for r, rp in [(2, 1), (1, 2)] * 2]
    assert rep.corank == sum(per_pair) == 4
    assert rep.rank + rep.corank == rep.dim_M == 8
    assert rep.rank == rep.dim_M_fol == 4


def test_rank_monotone_and_full_sigma():
    for d in range(1, 5):
        for f in itertools.product(range(d + 1), repeat=3):
            datum = CMTypeDatum.single(d, f)
            pairs = datum.pairs()
            subsets = [frozenset(s) for n in range(4) for s in itertools.combinations(pairs, n)]
            ranks = {s: foliation_rank(datum, s) for s in subsets}
            for a in subsets:
                rep = foliation_report(datum, a)
                assert rep.consistent
                assert rep.dim_M_fol <= rep.rank
                for b in subsets:
                    if a <= b:
                        assert ranks[a] >= ranks[b]
            full = foliation_report(datum, pairs)
            assert full.rank == full.dim_M_fol


def test_blowup_examples():
    pair = U21.pairs()[0]
    assert blowup_fiber_dim(U21, label_identity(U21), [pair]) == 1
    for w in enumerate_labels(U21):
        if in_M_sigma(w, [pair]):
            assert blowup_fiber_dim(U21, w, [pair]) == 0
    flat = CMTypeDatum.single(4, (2, 2), "inert")
    assert all(blowup_fiber_dim(flat, w, flat.pairs()) == 0 for w in enumerate_labels(flat))


def test_blowup_nonnegative_and_zero_exactly_on_M_sigma():
    for d in range(1, 5):
        for f in itertools.product(range(d + 1), repeat=2):
            datum = CMTypeDatum.single(d, f)
            for w in enumerate_labels(datum):
                for pair in datum.pairs():
                    value = blowup_fiber_dim(datum, w, [pair])
                    assert value >= 0
                    tau = datum.representative(pair)
                    jump = datum.r(tau) - datum.r(datum.phi_inv(tau))
                    if jump:
                        assert (value == 0) == in_M_sigma(w, [pair])


def test_cascade_pq_examples():
    prof = slope_decomposition(3, (1, 2), OrbitDatum(2))
    assert cascade_pq(prof, 1) == (1, 2)
    flat = slope_decomposition(4, (2, 2, 2), OrbitDatum(3))
    p, q = cascade_pq(flat, 1)
    assert p == q
    full = slope_decomposition(3, (1, 3), OrbitDatum(2))
    assert cascade_pq(full, 1)[0] == 0


def test_cascade_pq_refuses_unnormalized():
    prof = slope_decomposition(3, (1, 2), OrbitDatum(2))
    with pytest.raises(DatumError):
        cascade_pq(prof, 0)


def test_dim_ext_examples():
    prof = slope_decomposition(3, (1, 2), OrbitDatum(2))
    assert dim_ext_group(prof, 1, 2) == 1
    assert dim_ext_group(prof, 1, 3) == 2
    with pytest.raises(DatumError):
        dim_ext_group(prof, 2, 2)


def test_cascade_examples():
    datum = CMTypeDatum.single(3, (1, 2))
    rep = cascade_identity_check(datum, Embedding(0, 1))
    assert rep.passed and rep.cascade_dim == 1 and (rep.p_tau, rep.q_tau) == (1, 2)
    flat = CMTypeDatum.single(4, (2, 2))
    rep = cascade_identity_check(flat, Embedding(0, 0))
    assert rep.passed and rep.p_tau == rep.q_tau and rep.cascade_dim == 4
    top = CMTypeDatum.single(3, (3, 3))
    rep = cascade_identity_check(top, Embedding(0, 0))
    assert rep.passed and rep.cascade_dim == 0


def test_cascade_mirror_side():
    datum = CMTypeDatum.single(3, (2, 1))
    # on the mirror orbit the signature is (1, 2), normalized at index 1
    rep = cascade_identity_check(datum, Embedding(0, 1, True))
    assert rep.passed
