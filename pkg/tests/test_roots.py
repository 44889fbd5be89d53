"""Tests for the restricted root decomposition."""

import itertools

import pytest

from cohomatlas.linalg import Subspace, is_zero_vec, subspace_sum, vadd
from cohomatlas.models import build_sl, build_so1n, build_su1n, direct_sum
from cohomatlas.roots import decompose, dynkin_components, sigma_phi


def test_sl3_positive_system():
    g = build_sl(3)
    datum = decompose(g)
    assert datum.rank == 2
    pos = sorted(datum.coeffs[r.covector] for r in datum.positive)
    assert pos == [(0, 1), (1, 0), (1, 1)]
    assert all(datum.multiplicity(r) == 1 for r in datum.roots)


def test_sl_positive_roots_are_consecutive_sums():
    # type A: the positives over simple roots a_1..a_n are the interval sums
    for m in (2, 3, 4, 5):
        datum = decompose(build_sl(m))
        n = m - 1
        got = sorted(datum.coeffs[r.covector] for r in datum.positive)
        expected = sorted(
            tuple(1 if j <= i <= k else 0 for i in range(n))
            for j in range(n)
            for k in range(j, n)
        )
        assert got == expected


def test_sl_root_spaces_are_matrix_units():
    g = build_sl(4)
    datum = decompose(g)
    # the root summing a_j..a_k has space spanned by E_{j,k+1}
    for j in range(3):
        for k in range(j, 3):
            coeff = tuple(1 if j <= i <= k else 0 for i in range(3))
            r = datum.root_with_coeff(coeff)
            sp = datum.space(r)
            assert sp.dim == 1
            mat = g.matrix(sp.basis[0])
            nz = [(a, b) for a in range(4) for b in range(4) if mat.rows[a][b]]
            assert nz == [(j, k + 1)]


def test_so1n_single_root():
    for n in (2, 3, 4):
        datum = decompose(build_so1n(n))
        assert datum.rank == 1
        assert len(datum.positive) == 1
        assert datum.multiplicity(datum.positive[0]) == n - 1
        assert len(datum.roots) == 2  # {alpha, -alpha}


def test_su1n_bc1_system():
    datum = decompose(build_su1n(2))
    assert datum.rank == 1
    coeffs = sorted(datum.coeffs[r.covector] for r in datum.positive)
    assert coeffs == [(1,), (2,)]
    alpha = datum.root_with_coeff((1,))
    two_alpha = datum.root_with_coeff((2,))
    assert datum.multiplicity(alpha) == 2
    assert datum.multiplicity(two_alpha) == 1


def test_product_of_hyperbolic_planes():
    p = direct_sum([build_so1n(2), build_so1n(2)])
    datum = decompose(p)
    assert datum.rank == 2
    assert len(datum.simple) == 2
    h1, h2 = (r.root_vector for r in datum.simple)
    assert p.inner_product(h1, h2) == 0
    assert datum.dynkin_edges == frozenset()


def test_mixed_product_multiplicities():
    p = direct_sum([build_sl(2), build_so1n(3)])
    datum = decompose(p)
    mults = [datum.multiplicity(r) for r in datum.simple]
    assert mults == [1, 2]


def test_simple_root_order_is_path_order():
    datum = decompose(build_sl(5))
    # adjacency must be exactly the path a_1 - a_2 - a_3 - a_4
    assert datum.dynkin_edges == frozenset({(0, 1), (1, 2), (2, 3)})


def test_root_vector_defining_relation():
    g = build_sl(3)
    datum = decompose(g)
    for r in datum.roots:
        for h in g.a_space.basis:
            assert datum.evaluate(r, h) == g.inner_product(r.root_vector, h)
            # lam(H) is also the bracket eigenvalue on the root space
            x = datum.space(r).basis[0]
            lhs = g.bracket(h, x)
            lam = datum.evaluate(r, h)
            assert lhs == tuple(lam * c for c in x)


def test_decomposition_fills_model():
    for g in (build_sl(3), build_so1n(3), build_su1n(2)):
        datum = decompose(g)
        total = datum.zero_space
        for r in datum.roots:
            total = subspace_sum(total, datum.space(r))
        assert total == Subspace.full(g.dim)
        assert datum.zero_space.dim + sum(datum.space(r).dim for r in datum.roots) == g.dim


def test_theta_pairs_opposite_roots():
    datum = decompose(build_su1n(2))
    g = datum.model
    for r in datum.positive:
        neg = tuple(-c for c in r.covector)
        assert g.theta_image(datum.space(r)) == datum.spaces[neg]


def test_bracket_grading():
    g = build_sl(4)
    datum = decompose(g)
    covs = set(datum.spaces)
    for r in datum.roots:
        for s in datum.roots:
            tgt = vadd(r.covector, s.covector)
            br = g.bracket_span(datum.space(r).basis, datum.space(s).basis)
            if br.dim == 0:
                continue
            if all(not c for c in tgt):
                assert datum.zero_space.contains(br)
            elif tuple(tgt) in covs:
                assert datum.spaces[tuple(tgt)].contains(br)
            else:
                assert br.dim == 0


def test_k0_centralizes_a():
    for g in (build_sl(3), build_so1n(3), build_su1n(2)):
        datum = decompose(g)
        assert datum.k0.dim == datum.zero_space.dim - g.a_space.dim
        for x in datum.k0.basis:
            for h in g.a_space.basis:
                assert is_zero_vec(g.bracket(x, h))
    # sl has trivial k0, su(1,n) does not
    assert decompose(build_sl(3)).k0.dim == 0
    assert decompose(build_su1n(2)).k0.dim == 1


def test_dynkin_components_path_graph():
    datum = decompose(build_sl(5))  # A_4 diagram
    assert dynkin_components(datum, [0, 1, 3]) == [(0, 1), (3,)]
    assert dynkin_components(datum, []) == []
    # two non-adjacent singletons
    datum4 = decompose(build_sl(4))
    assert dynkin_components(datum4, [0, 2]) == [(0,), (2,)]


def test_sigma_phi():
    datum = decompose(build_sl(4))
    inside, inside_pos = sigma_phi(datum, [0, 1])
    got = sorted(datum.coeffs[r.covector] for r in inside_pos)
    assert got == [(0, 1, 0), (1, 0, 0), (1, 1, 0)]
    assert len(inside) == 6
    # phi = everything / nothing
    all_in, all_pos = sigma_phi(datum, range(3))
    assert len(all_in) == len(datum.roots)
    none_in, none_pos = sigma_phi(datum, [])
    assert none_in == [] and none_pos == []


def test_rank_one_recognition():
    # a factor is rank one exactly when its positive system is {a} or {a, 2a}
    for build, expected in ((build_so1n(3), [(1,)]), (build_su1n(2), [(1,), (2,)])):
        datum = decompose(build)
        pos = sorted(datum.coeffs[r.covector] for r in datum.positive)
        assert pos == expected
    datum = decompose(build_sl(3))
    assert len(datum.positive) > 2
