"""Tests for parabolic subalgebra data, gradings and nested chains."""

import itertools

import pytest

from cohomatlas.linalg import Matrix, Subspace, is_zero_vec, subspace_intersect, subspace_sum
from cohomatlas.models import build_sl, build_so1n, build_su1n, direct_sum
from cohomatlas.parabolic import (
    build_nested,
    build_parabolic,
    grade_nilpotent,
    tensor_action_pair,
    tensor_model,
)
from cohomatlas.roots import decompose


def sl4():
    g = build_sl(4)
    return g, decompose(g)


class TestBuildParabolic:
    def test_full_phi_degenerates(self):
        g, datum = sl4()
        pd = build_parabolic(datum, range(3))
        assert pd.a_phi.dim == 0
        assert pd.n_phi.dim == 0
        assert pd.s == Subspace.full(g.dim)

    def test_empty_phi_is_minimal(self):
        g, datum = sl4()
        pd = build_parabolic(datum, [])
        assert pd.l == datum.zero_space
        assert pd.n_phi == g.n_space
        assert pd.b.dim == 0

    def test_sl4_two_root_block(self):
        g, datum = sl4()
        pd = build_parabolic(datum, [0, 1])
        # three positive roots involve a_3: a_3, a_2+a_3, a_1+a_2+a_3
        assert pd.n_phi.dim == 3
        # s is the sl(3) block: dimension 8, root spaces preserved
        assert pd.s.dim == 8
        for r in datum.positive:
            if datum.coeffs[r.covector][2] == 0:
                assert pd.s.contains(datum.space(r))

    def test_decomposition_identities(self):
        g, datum = sl4()
        for size in range(4):
            for phi in itertools.combinations(range(3), size):
                pd = build_parabolic(datum, phi)
                assert subspace_sum(pd.a_phi, pd.a_upper) == g.a_space
                assert subspace_sum(pd.n_phi, pd.n_upper) == g.n_space
                assert subspace_sum(pd.m, pd.a_phi) == pd.l
                assert pd.s.dim == pd.b.dim + g.bracket_span(pd.b.basis, pd.b.basis).dim

    def test_levi_is_centralizer_of_a_phi(self):
        g, datum = sl4()
        for phi in ([0], [1], [0, 2], [0, 1]):
            pd = build_parabolic(datum, phi)
            assert g.centralizer_in(Subspace.full(g.dim), pd.a_phi) == pd.l

    def test_levi_normalizes_nilpotent(self):
        g, datum = sl4()
        for phi in ([0], [0, 2], [1, 2]):
            pd = build_parabolic(datum, phi)
            for x in pd.l.basis:
                for y in pd.n_phi.basis:
                    assert pd.n_phi.contains_vector(g.bracket(x, y))

    def test_m_normalizes_a_phi_plus_n_phi(self):
        g, datum = sl4()
        for phi in ([0], [0, 1], [0, 2]):
            pd = build_parabolic(datum, phi)
            an = subspace_sum(pd.a_phi, pd.n_phi)
            for x in pd.m.basis:
                for y in an.basis:
                    assert an.contains_vector(g.bracket(x, y))

    def test_b_is_lie_triple_system(self):
        g, datum = sl4()
        for size in range(4):
            for phi in itertools.combinations(range(3), size):
                pd = build_parabolic(datum, phi)
                bb = g.bracket_span(pd.b.basis, pd.b.basis)
                bbb = g.bracket_span(bb.basis, pd.b.basis)
                assert pd.b.contains(bbb)

    def test_s_root_spaces_match(self):
        g, datum = sl4()
        pd = build_parabolic(datum, [0, 1])
        from cohomatlas.roots import sigma_phi

        _, inside_pos = sigma_phi(datum, [0, 1])
        for r in inside_pos:
            assert subspace_intersect(pd.s, datum.space(r)) == datum.space(r)

    def test_q_is_subalgebra(self):
        g, datum = sl4()
        for phi in ([0], [0, 2]):
            pd = build_parabolic(datum, phi)
            assert g.is_subalgebra(pd.q)
            assert g.is_subalgebra(pd.s)

    def test_invalid_phi_rejected(self):
        _, datum = sl4()
        with pytest.raises(ValueError):
            build_parabolic(datum, [7])


class TestGrading:
    def test_sl4_middle_root(self):
        g, datum = sl4()
        pd = build_parabolic(datum, [0, 2])  # removes a_2 (index 1)
        grading = grade_nilpotent(datum, pd)
        assert set(grading) == {1}
        assert grading[1].dim == 4  # j(n-j+1) with n=3, j=2 (1-based)
        assert grading[1] == pd.n_phi

    def test_sl4_end_root(self):
        g, datum = sl4()
        pd = build_parabolic(datum, [1, 2])  # removes a_1
        grading = grade_nilpotent(datum, pd)
        assert grading[1].dim == 3
        assert set(grading) == {1}

    def test_grading_vector_values(self):
        g, datum = sl4()
        pd = build_parabolic(datum, [0, 2])
        for k, r in enumerate(datum.simple):
            val = datum.evaluate(r, pd.h_j)
            assert val == (1 if k == 1 else 0)
        # every root's value on h_j equals its coefficient on the removed root
        for r in datum.positive:
            assert datum.evaluate(r, pd.h_j) == datum.coeffs[r.covector][1]

    def test_product_gradings(self):
        p = direct_sum([build_so1n(2), build_su1n(2)])
        datum = decompose(p)
        # removing the real hyperbolic root leaves only grade one
        pd0 = build_parabolic(datum, [1])
        assert set(grade_nilpotent(datum, pd0)) == {1}
        # removing the complex hyperbolic root leaves grades one and two
        pd1 = build_parabolic(datum, [0])
        grading = grade_nilpotent(datum, pd1)
        assert set(grading) == {1, 2}
        assert grading[1].dim == 2
        assert grading[2].dim == 1

    def test_grades_sum_to_n_phi(self):
        g, datum = sl4()
        for j in range(3):
            phi = [i for i in range(3) if i != j]
            pd = build_parabolic(datum, phi)
            total = Subspace.zero(g.dim)
            for sp in grade_nilpotent(datum, pd).values():
                total = subspace_sum(total, sp)
            assert total == pd.n_phi

    def test_graded_bracket(self):
        g, datum = sl4()
        pd = build_parabolic(datum, [1, 2])
        grading = grade_nilpotent(datum, pd)
        for mu, sp1 in grading.items():
            for nu, sp2 in grading.items():
                br = g.bracket_span(sp1.basis, sp2.basis)
                if br.dim == 0:
                    continue
                assert (mu + nu) in grading
                assert grading[mu + nu].contains(br)

    def test_requires_cosimple_phi(self):
        _, datum = sl4()
        pd = build_parabolic(datum, [0])
        with pytest.raises(ValueError):
            grade_nilpotent(datum, pd)


class TestNested:
    def test_psi_equals_phi(self):
        _, datum = sl4()
        nd = build_nested(datum, [0, 1], [0, 1])
        assert nd.n_np.dim == 0

    def test_psi_empty(self):
        _, datum = sl4()
        pd = build_parabolic(datum, [0, 1])
        nd = build_nested(datum, [], [0, 1])
        assert nd.n_np == pd.n_upper

    def test_sl4_chain_dimension(self):
        _, datum = sl4()
        nd = build_nested(datum, [0], [0, 1])
        assert nd.n_np.dim == 2  # roots a_2 and a_1+a_2

    def test_nested_identities_all_chains(self):
        g, datum = sl4()
        for phi_size in range(4):
            for phi in itertools.combinations(range(3), phi_size):
                pd = build_parabolic(datum, phi)
                for psi_size in range(phi_size + 1):
                    for psi in itertools.combinations(phi, psi_size):
                        nd = build_nested(datum, psi, phi)
                        pd_psi = build_parabolic(datum, psi)
                        assert subspace_sum(pd.a_phi, nd.a_np) == pd_psi.a_phi
                        assert subspace_sum(pd.n_phi, nd.n_np) == pd_psi.n_phi

    def test_inclusion_violated(self):
        _, datum = sl4()
        with pytest.raises(ValueError):
            build_nested(datum, [2], [0, 1])


class TestTensorModel:
    def test_sl4_middle_root_cover(self):
        g, datum = sl4()
        tm = tensor_model(datum, 1)
        assert (tm.nrows, tm.ncols) == (2, 2)
        expected = {
            (1, 1): (0, 1, 0),
            (2, 1): (1, 1, 0),
            (1, 2): (0, 1, 1),
            (2, 2): (1, 1, 1),
        }
        for key, coeff in expected.items():
            r = datum.root_with_coeff(coeff)
            assert datum.space(r).contains_vector(tm.generators[key])

    def test_dimension_formula(self):
        for m, j in ((3, 0), (4, 1), (5, 2)):
            datum = decompose(build_sl(m))
            tm = tensor_model(datum, j)
            pd = build_parabolic(datum, [i for i in range(m - 1) if i != j])
            jj, n = j + 1, m - 1
            assert len(tm.generators) == jj * (n - jj + 1)
            assert pd.n_phi.dim == jj * (n - jj + 1)
            assert tm.subspace(tm.generators) == pd.n_phi

    def test_row_model_for_first_root(self):
        datum = decompose(build_sl(4))
        tm = tensor_model(datum, 0)
        assert tm.nrows == 1 and tm.ncols == 3

    def test_action_splits_as_tensor_pair(self):
        g, datum = sl4()
        tm = tensor_model(datum, 1)
        pd = build_parabolic(datum, [0, 2])
        for x in pd.m.basis:
            a, b = tensor_action_pair(datum, tm, x)
            assert a.nrows == 2 and b.nrows == 2
            # reconstruction: [x, e_i(x)f^l] = sum A e + sum B f components
            for (i, l), gen in tm.generators.items():
                img = g.bracket(x, gen)
                recon = [0] * g.dim
                for i2 in range(1, 3):
                    c = a.entry(i2 - 1, i - 1)
                    if c:
                        g2 = tm.generators[(i2, l)]
                        recon = [r + c * y for r, y in zip(recon, g2)]
                for l2 in range(1, 3):
                    c = b.entry(l2 - 1, l - 1)
                    if c:
                        g2 = tm.generators[(i, l2)]
                        recon = [r + c * y for r, y in zip(recon, g2)]
                assert tuple(recon) == img

    def test_action_space_has_levi_pair_dimension(self):
        # the restricted action spans a space of operators of dimension
        # dim sl_j + dim sl_{n-j+1} + 1 (the grading direction)
        g, datum = sl4()
        tm = tensor_model(datum, 1)
        pd = build_parabolic(datum, [0, 2])
        ops = []
        for x in pd.l.basis:
            a, b = tensor_action_pair(datum, tm, x)
            ops.append(a.flatten() + b.flatten())
        assert Subspace.span(8, ops).dim == 7  # sl2 + sl2 + center of l

    def test_non_sl_rejected(self):
        datum = decompose(build_so1n(3))
        with pytest.raises(ValueError):
            tensor_model(datum, 0)
