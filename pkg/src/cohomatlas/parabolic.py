"""Parabolic subalgebra data attached to subsets of simple roots.

For a subset phi of the simple roots (given as 0-based indices into
``datum.simple``) this module materializes the Levi piece l, the abelian
piece a_phi, the nilpotent piece n_phi, the reductive complement m, the
compact piece k_phi, the split pieces a^phi and n^phi, the boundary tangent
b (a Lie triple system), the boundary isometry algebra s = [b,b] + b, the
coarse grading of n_phi when phi omits exactly one simple root, and nested
data for chains psi inside phi.

Everything is an exact Subspace of the model; nested data is always
cross-validated against the intersection identity q_{psi,phi} = q_psi & s_phi
and construction aborts on mismatch.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Sequence, Tuple

from .linalg import (
    Matrix,
    Q0,
    Q1,
    Subspace,
    kernel_rows,
    orthocomplement_in,
    rat,
    solve_linear_system,
    subspace_intersect,
    subspace_sum,
)
from .roots import RootDatum, sigma_phi


@dataclass(frozen=True)
class ParabolicDatum:
    phi: tuple  # sorted 0-based indices into datum.simple
    l: Subspace  # Levi: g_0 + sum of root spaces inside span(phi)
    a_phi: Subspace  # common kernel of the roots in phi, inside a
    n_phi: Subspace  # positive root spaces outside span(phi)
    m: Subspace  # l minus a_phi
    k_phi: Subspace  # k_0 + projected root spaces inside span(phi)
    a_upper: Subspace  # a minus a_phi
    n_upper: Subspace  # positive root spaces inside span(phi)
    b: Subspace  # boundary tangent: a_upper + p-projections
    s: Subspace  # [b, b] + b
    s0: Subspace  # s intersect g_0
    grading: Optional[dict]  # nu -> Subspace, only when phi omits one root
    h_j: Optional[tuple]  # grading vector, only when phi omits one root
    n_phi_gens: tuple = field(repr=False, default=())

    @property
    def q(self) -> Subspace:
        return subspace_sum(self.l, self.n_phi)


@dataclass(frozen=True)
class NestedParabolicDatum:
    psi: tuple
    phi: tuple
    l_np: Subspace
    n_np: Subspace
    a_np: Subspace
    m_np: Subspace
    k_np: Subspace

    @property
    def q_np(self) -> Subspace:
        return subspace_sum(self.l_np, self.n_np)


def _check_phi(datum: RootDatum, phi: Iterable[int]) -> tuple:
    phi = tuple(sorted(set(int(i) for i in phi)))
    for i in phi:
        if not 0 <= i < datum.rank:
            raise ValueError(f"simple root index {i} out of range")
    return phi


def build_parabolic(datum: RootDatum, phi: Iterable[int]) -> ParabolicDatum:
    """All parabolic pieces for a subset of simple roots (cached per datum)."""
    phi = _check_phi(datum, phi)
    cached = datum._parabolic_cache.get(phi)
    if cached is not None:
        return cached

    model = datum.model
    d = model.dim
    inside, inside_pos = sigma_phi(datum, phi)
    pos_covs = {r.covector for r in datum.positive}
    inside_covs = {r.covector for r in inside}

    l = datum.zero_space
    for r in inside:
        l = subspace_sum(l, datum.space(r))

    # a_phi = {H in a : alpha(H) = 0 for alpha in phi}
    a = model.a_space
    if phi:
        cond = [datum.simple[i].covector for i in phi]
        ker = kernel_rows(cond, a.dim)
        a_phi = Subspace.span(d, [a.from_coords(t) for t in ker])
    else:
        a_phi = a

    outside_pos = [r for r in datum.positive if r.covector not in inside_covs]
    n_gens = []
    for r in outside_pos:
        n_gens.extend(datum.space(r).basis)
    n_phi = Subspace.span(d, n_gens)

    m = orthocomplement_in(a_phi, l, model.inner)

    k_phi = datum.k0
    n_upper = Subspace.zero(d)
    b = orthocomplement_in(a_phi, a, model.inner)
    a_upper = b
    for r in inside_pos:
        sp = datum.space(r)
        k_phi = subspace_sum(k_phi, model.project_k_subspace(sp))
        n_upper = subspace_sum(n_upper, sp)
        b = subspace_sum(b, model.project_p_subspace(sp))

    bb = model.bracket_span(b.basis, b.basis)
    s = subspace_sum(bb, b)
    s0 = subspace_intersect(s, datum.zero_space)

    grading = None
    h_j = None
    if len(phi) == datum.rank - 1:
        (j,) = [i for i in range(datum.rank) if i not in phi]
        grading = {}
        for r in outside_pos:
            nu = datum.coeffs[r.covector][j]
            grading.setdefault(nu, []).append(r)
        grading = {
            nu: Subspace.span(d, [v for r in rs for v in datum.space(r).basis])
            for nu, rs in grading.items()
        }
        # alpha_i(sum t_b A_b) = sum_b cov_i[b] t_b, so the covector matrix
        # applied to a-coordinates solves alpha_k(H) = delta_kj directly
        rows = [datum.simple[i].covector for i in range(datum.rank)]
        rhs = [Q1 if i == j else Q0 for i in range(datum.rank)]
        coords = solve_linear_system(rows, rhs)
        h_j = model.a_space.from_coords(coords)

    pd = ParabolicDatum(
        phi=phi,
        l=l,
        a_phi=a_phi,
        n_phi=n_phi,
        m=m,
        k_phi=k_phi,
        a_upper=a_upper,
        n_upper=n_upper,
        b=b,
        s=s,
        s0=s0,
        grading=grading,
        h_j=h_j,
        n_phi_gens=tuple(n_gens),
    )
    datum._parabolic_cache[phi] = pd
    return pd


def grade_nilpotent(datum: RootDatum, pd: ParabolicDatum) -> dict:
    """The grading of n_phi; only defined when phi omits exactly one root."""
    if pd.grading is None:
        raise ValueError("grading requires phi to omit exactly one simple root")
    return pd.grading


def build_nested(datum: RootDatum, psi: Iterable[int], phi: Iterable[int]) -> NestedParabolicDatum:
    """Parabolic data of s_phi for psi inside phi, with the intersection check."""
    psi = _check_phi(datum, psi)
    phi = _check_phi(datum, phi)
    if not set(psi) <= set(phi):
        raise ValueError("psi must be contained in phi")
    key = (psi, phi)
    cached = datum._nested_cache.get(key)
    if cached is not None:
        return cached

    model = datum.model
    d = model.dim
    pd_phi = build_parabolic(datum, phi)
    pd_psi = build_parabolic(datum, psi)

    _, phi_pos = sigma_phi(datum, phi)
    _, psi_pos = sigma_phi(datum, psi)
    psi_pos_covs = {r.covector for r in psi_pos}
    inside_psi, _ = sigma_phi(datum, psi)

    n_np = Subspace.zero(d)
    for r in phi_pos:
        if r.covector not in psi_pos_covs:
            n_np = subspace_sum(n_np, datum.space(r))
    if n_np != subspace_intersect(pd_phi.n_upper, pd_psi.n_phi):
        raise ValueError("nested nilpotent piece fails its intersection identity")

    a_np = subspace_intersect(pd_phi.a_upper, pd_psi.a_phi)

    l_np = pd_phi.s0
    for r in inside_psi:
        l_np = subspace_sum(l_np, datum.space(r))

    m_np = orthocomplement_in(a_np, l_np, model.inner)
    k_np = subspace_intersect(model.k_space, l_np)

    q_np = subspace_sum(l_np, n_np)
    q_psi = subspace_sum(pd_psi.l, pd_psi.n_phi)
    if q_np != subspace_intersect(q_psi, pd_phi.s):
        raise ValueError("nested parabolic fails q_{psi,phi} = q_psi & s_phi")

    nd = NestedParabolicDatum(psi=psi, phi=phi, l_np=l_np, n_np=n_np, a_np=a_np,
                              m_np=m_np, k_np=k_np)
    datum._nested_cache[key] = nd
    return nd


# ---------------------------------------------------------------------------
# tensor picture of the top grade for sl models


@dataclass(frozen=True)
class TensorModel:
    """Identification of n_{Lambda minus one root} with a matrix space.

    For the sl(n+1) model with the j-th simple root removed (0-based), the
    nilpotent piece is spanned by the generators indexed by pairs (i, l),
    1 <= i <= j+1, 1 <= l <= n-j, where (i, l) corresponds to the root
    summing the simple roots from position j+1-i to j+l-1 (0-based).
    """

    j: int
    nrows: int
    ncols: int
    generators: dict  # (i, l) -> ambient coordinate vector

    def subspace(self, keys: Iterable[tuple]) -> Subspace:
        amb = len(next(iter(self.generators.values())))
        return Subspace.span(amb, [self.generators[k] for k in keys])

    def vector(self, combo: dict) -> tuple:
        amb = len(next(iter(self.generators.values())))
        out = [Q0] * amb
        for k, c in combo.items():
            g = self.generators[k]
            c = rat(c)
            for t, x in enumerate(g):
                if x:
                    out[t] += c * x
        return tuple(out)

    def column(self, l: int, depth: Optional[int] = None) -> Subspace:
        depth = self.nrows if depth is None else depth
        return self.subspace([(i, l) for i in range(1, depth + 1)])

    def row(self, i: int, width: Optional[int] = None) -> Subspace:
        width = self.ncols if width is None else width
        return self.subspace([(i, l) for l in range(1, width + 1)])


def tensor_model(datum: RootDatum, j: int) -> TensorModel:
    """The indexed generator basis of the top nilpotent piece of an sl model."""
    model = datum.model
    if not model.name.startswith("sl("):
        raise ValueError("tensor model is defined for sl models only")
    n = datum.rank
    if not 0 <= j < n:
        raise ValueError("removed root index out of range")
    nrows = j + 1
    ncols = n - j
    gens = {}
    for i in range(1, nrows + 1):
        for l in range(1, ncols + 1):
            lo, hi = j + 1 - i, j + l - 1
            coeff = tuple(1 if lo <= t <= hi else 0 for t in range(n))
            r = datum.root_with_coeff(coeff)
            sp = datum.space(r)
            if sp.dim != 1:
                raise ValueError("sl root spaces must be one dimensional")
            gens[(i, l)] = sp.basis[0]
    return TensorModel(j=j, nrows=nrows, ncols=ncols, generators=gens)


def tensor_action_pair(datum: RootDatum, tm: TensorModel, x: Sequence):
    """Decompose ad(x) on the tensor basis as A (x) I + I (x) B.

    x must preserve the top nilpotent piece and act in split tensor form;
    returns the pair (A, B) of matrices (gauge: the first diagonal entry of B
    is zero) and raises ValueError otherwise.
    """
    from .linalg import SpanSolver

    model = datum.model
    keys = [(i, l) for i in range(1, tm.nrows + 1) for l in range(1, tm.ncols + 1)]
    solver = SpanSolver([tm.generators[k] for k in keys], model.dim)
    M = {}
    for t, k in enumerate(keys):
        img = model.bracket(x, tm.generators[k])
        coeffs = solver.coords(img)  # raises if the image escapes the span
        for t2, k2 in enumerate(keys):
            M[(k2, k)] = coeffs[t2]

    zero = Q0
    arows = [[zero] * tm.nrows for _ in range(tm.nrows)]
    brows = [[zero] * tm.ncols for _ in range(tm.ncols)]

    # off-diagonal blocks must not mix both indices at once
    for (i2, l2), (i, l) in ((k2, k) for k2 in keys for k in keys):
        if i2 != i and l2 != l and M[((i2, l2), (i, l))]:
            raise ValueError("action mixes both tensor indices")

    for i in range(1, tm.nrows + 1):
        for i2 in range(1, tm.nrows + 1):
            if i2 == i:
                continue
            vals = {M[((i2, l), (i, l))] for l in range(1, tm.ncols + 1)}
            if len(vals) != 1:
                raise ValueError("row action is not constant across columns")
            arows[i2 - 1][i - 1] = vals.pop()
    for l in range(1, tm.ncols + 1):
        for l2 in range(1, tm.ncols + 1):
            if l2 == l:
                continue
            vals = {M[((i, l2), (i, l))] for i in range(1, tm.nrows + 1)}
            if len(vals) != 1:
                raise ValueError("column action is not constant across rows")
            brows[l2 - 1][l - 1] = vals.pop()

    diag = {(i, l): M[((i, l), (i, l))] for i, l in keys}
    for i in range(1, tm.nrows + 1):
        arows[i - 1][i - 1] = diag[(i, 1)]  # gauge: B[1][1] = 0
    for l in range(1, tm.ncols + 1):
        brows[l - 1][l - 1] = diag[(1, l)] - diag[(1, 1)]
    for i, l in keys:
        if diag[(i, l)] != arows[i - 1][i - 1] + brows[l - 1][l - 1]:
            raise ValueError("diagonal action does not split")

    return Matrix(tuple(tuple(r) for r in arows)), Matrix(tuple(tuple(r) for r in brows))
