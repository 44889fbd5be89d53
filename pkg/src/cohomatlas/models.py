"""Matrix models of the ambient real semisimple Lie algebras.

A model fixes a basis of g inside N x N rational matrices and precomputes
everything coordinate computations need: sparse structure constants, the
Cartan involution theta(X) = -X^T in coordinates, the Killing form B (by the
ad-trace definition), the inner product <X,Y> = -B(X, theta Y), and the
Iwasawa pieces k, a, n together with p.

Shipped families:

* ``build_sl(m)``       traceless real m x m matrices,
* ``build_so1n(n)``     the Lorentz algebra so(1,n),
* ``build_su1n(n)``     su(1,n) realified to 2(n+1) x 2(n+1) real matrices
                        commuting with a stored complex structure J,
* ``direct_sum``        block-diagonal products of the above.

All coordinate vectors are tuples over the exact rational scalar type; every
operation is pure, and models are immutable after construction.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .linalg import (
    Matrix,
    Q0,
    Q1,
    Subspace,
    invariant_eigensplit,
    is_zero_vec,
    kernel_rows,
    rat,
    rref_with_transform,
    subspace_sum,
    unit_vec,
    vdot,
    vec,
    zero_vec,
)


class LieModel:
    """A concrete matrix model of a real semisimple Lie algebra."""

    def __init__(self, name: str, basis: Sequence[Matrix], a_vectors, n_vectors=None):
        self.name = name
        self.basis = tuple(basis)
        self.dim = len(self.basis)
        self.matrix_size = self.basis[0].nrows

        flat = [b.flatten() for b in self.basis]
        ncols = self.matrix_size * self.matrix_size
        reduced, pivots, transform = rref_with_transform(flat, ncols)
        if len(pivots) != self.dim:
            raise ValueError("model basis is linearly dependent")
        self._flat = flat
        self._flat_rref = reduced
        self._flat_pivots = pivots
        self._flat_transform = transform

        self._struct = self._structure_constants()
        self.theta = self._theta_matrix()
        self.killing = self._killing_gram()
        self.inner = self._inner_gram()

        eig = invariant_eigensplit(self.theta.apply, Subspace.full(self.dim))
        by_val = dict((mu, sp) for mu, sp in eig)
        if set(by_val) - {rat(1), rat(-1)}:
            raise ValueError("theta is not an involution on this basis")
        self.k_space = by_val.get(rat(1), Subspace.zero(self.dim))
        self.p_space = by_val.get(rat(-1), Subspace.zero(self.dim))

        self.a_space = Subspace.span(self.dim, a_vectors)
        if n_vectors is None:
            n_vectors = self._positive_ad_eigenvectors()
        self.n_space = Subspace.span(self.dim, n_vectors)

        self._iwasawa_inverse = self._iwasawa_basis_inverse()
        self._proj_p = (Matrix.identity(self.dim) - self.theta).scale(rat(1, 2))
        self._proj_k = (Matrix.identity(self.dim) + self.theta).scale(rat(1, 2))

    # -- construction helpers ------------------------------------------------

    def coords(self, mat: Matrix) -> tuple:
        """Coordinates of a matrix in the model basis; raises if outside."""
        flat = mat.flatten()
        c = [flat[p] for p in self._flat_pivots]
        # membership: flat must equal c . rref
        rem = list(flat)
        for ci, row in zip(c, self._flat_rref):
            if ci:
                for j, x in enumerate(row):
                    if x:
                        rem[j] -= ci * x
        if not is_zero_vec(rem):
            raise ValueError("matrix does not lie in the span of the model basis")
        out = [Q0] * self.dim
        for ci, trow in zip(c, self._flat_transform):
            if ci:
                for j, t in enumerate(trow):
                    if t:
                        out[j] += ci * t
        return tuple(out)

    def matrix(self, x: Sequence) -> Matrix:
        n = self.matrix_size
        rows = [[Q0] * n for _ in range(n)]
        for c, b in zip(x, self.basis):
            if c:
                for i in range(n):
                    br = b.rows[i]
                    for j in range(n):
                        if br[j]:
                            rows[i][j] += c * br[j]
        return Matrix(tuple(tuple(r) for r in rows))

    def _structure_constants(self):
        table = {}
        for i in range(self.dim):
            bi = self.basis[i]
            for j in range(self.dim):
                if i == j:
                    continue
                bj = self.basis[j]
                comm = bi @ bj - bj @ bi
                if comm.is_zero():
                    continue
                cx = self.coords(comm)
                entry = tuple((k, c) for k, c in enumerate(cx) if c)
                if entry:
                    table[(i, j)] = entry
        return table

    def _theta_matrix(self) -> Matrix:
        cols = [self.coords(-b.transpose()) for b in self.basis]
        return Matrix(tuple(tuple(cols[j][i] for j in range(self.dim)) for i in range(self.dim)))

    def _ad_sparse(self, i: int):
        """ad(e_i) as {(k, j): c} with [e_i, e_j] = sum_k c * e_k."""
        out = {}
        for j in range(self.dim):
            entry = self._struct.get((i, j))
            if entry:
                for k, c in entry:
                    out[(k, j)] = c
        return out

    def _killing_gram(self) -> Matrix:
        ads = [self._ad_sparse(i) for i in range(self.dim)]
        rows = []
        for i in range(self.dim):
            row = []
            ai = ads[i]
            for j in range(self.dim):
                aj = ads[j]
                s = Q0
                if len(ai) <= len(aj):
                    for (k, l), c in ai.items():
                        d = aj.get((l, k))
                        if d:
                            s += c * d
                else:
                    for (k, l), c in aj.items():
                        d = ai.get((l, k))
                        if d:
                            s += c * d
                row.append(s)
            rows.append(tuple(row))
        return Matrix(tuple(rows))

    def _inner_gram(self) -> Matrix:
        # <X, Y> = -B(X, theta Y)
        return -(self.killing @ self.theta)

    def _positive_ad_eigenvectors(self):
        h = self.a_space.basis[0]
        parts = invariant_eigensplit(lambda x: self.bracket(h, x), Subspace.full(self.dim))
        vecs = []
        for mu, sp in parts:
            if mu > 0:
                vecs.extend(sp.basis)
        return vecs

    def _iwasawa_basis_inverse(self) -> Matrix:
        rows = list(self.k_space.basis) + list(self.a_space.basis) + list(self.n_space.basis)
        if len(rows) != self.dim:
            raise ValueError("k + a + n does not have full dimension")
        cols = [[rows[j][i] for j in range(self.dim)] for i in range(self.dim)]
        reduced, pivots, transform = rref_with_transform(cols, self.dim)
        if len(pivots) != self.dim:
            raise ValueError("Iwasawa pieces do not span the model")
        return Matrix(tuple(transform))

    # -- algebra operations --------------------------------------------------

    def bracket(self, x: Sequence, y: Sequence) -> tuple:
        out = [Q0] * self.dim
        xs = [(i, c) for i, c in enumerate(x) if c]
        ys = [(j, c) for j, c in enumerate(y) if c]
        table = self._struct
        for i, xi in xs:
            for j, yj in ys:
                entry = table.get((i, j))
                if entry:
                    f = xi * yj
                    for k, c in entry:
                        out[k] += f * c
        return tuple(out)

    def killing_form(self, x: Sequence, y: Sequence):
        return vdot(x, self.killing.apply(y))

    def inner_product(self, x: Sequence, y: Sequence):
        return vdot(x, self.inner.apply(y))

    def theta_apply(self, x: Sequence) -> tuple:
        return self.theta.apply(x)

    def theta_image(self, sub: Subspace) -> Subspace:
        return Subspace.span(self.dim, [self.theta.apply(b) for b in sub.basis])

    def project_p(self, x: Sequence) -> tuple:
        return self._proj_p.apply(x)

    def project_k(self, x: Sequence) -> tuple:
        return self._proj_k.apply(x)

    def project_p_subspace(self, sub) -> Subspace:
        rows = sub.basis if isinstance(sub, Subspace) else sub
        return Subspace.span(self.dim, [self._proj_p.apply(b) for b in rows])

    def project_k_subspace(self, sub) -> Subspace:
        rows = sub.basis if isinstance(sub, Subspace) else sub
        return Subspace.span(self.dim, [self._proj_k.apply(b) for b in rows])

    def iwasawa_project(self, x: Sequence):
        """Unique decomposition x = x_k + x_a + x_n."""
        c = self._iwasawa_inverse.apply(x)
        dk, da = self.k_space.dim, self.a_space.dim
        xk = self.k_space.from_coords(c[:dk]) if dk else zero_vec(self.dim)
        xa = self.a_space.from_coords(c[dk:dk + da]) if da else zero_vec(self.dim)
        xn = self.n_space.from_coords(c[dk + da:]) if self.n_space.dim else zero_vec(self.dim)
        return xk, xa, xn

    def project_an_subspace(self, sub: Subspace) -> Subspace:
        """Span of the a+n Iwasawa components of a subspace."""
        rows = []
        for b in sub.basis:
            _, xa, xn = self.iwasawa_project(b)
            rows.append(tuple(p + q for p, q in zip(xa, xn)))
        return Subspace.span(self.dim, rows)

    def bracket_span(self, u: Iterable, v: Iterable) -> Subspace:
        """Span of pairwise brackets of two generating sets."""
        vl = list(v)
        rows = [self.bracket(x, y) for x in u for y in vl]
        return Subspace.span(self.dim, rows)

    def is_subalgebra(self, sub: Subspace, spanning: Sequence = None) -> bool:
        gens = list(spanning) if spanning is not None else list(sub.basis)
        for a in range(len(gens)):
            for b in range(a + 1, len(gens)):
                if not sub.contains_vector(self.bracket(gens[a], gens[b])):
                    return False
        return True

    def normalizer_in(self, domain: Subspace, of: Subspace) -> Subspace:
        """{X in domain : [X, of] subset of of}, computed exactly."""
        cands = list(domain.basis)
        images = [[self.bracket(c, w) for w in of.basis] for c in cands]
        from .linalg import solve_inclusion_constraint

        return solve_inclusion_constraint(cands, images, of)

    def centralizer_in(self, domain: Subspace, of: Subspace) -> Subspace:
        cands = list(domain.basis)
        images = [[self.bracket(c, w) for w in of.basis] for c in cands]
        from .linalg import solve_inclusion_constraint

        return solve_inclusion_constraint(cands, images, Subspace.zero(self.dim))


# ---------------------------------------------------------------------------
# concrete families


def _basis_entry(n: int, i: int, j: int) -> Matrix:
    rows = [[Q0] * n for _ in range(n)]
    rows[i][j] = Q1
    return Matrix(tuple(tuple(r) for r in rows))


def build_sl(n_plus_1: int) -> LieModel:
    """Traceless (n+1) x (n+1) real matrices; a = diagonal, n = strictly upper."""
    if n_plus_1 < 2:
        raise ValueError("sl model needs size >= 2")
    m = n_plus_1
    basis = []
    for i in range(m - 1):  # H_i = E_ii - E_{i+1,i+1}
        h = [[Q0] * m for _ in range(m)]
        h[i][i] = Q1
        h[i + 1][i + 1] = -Q1
        basis.append(Matrix(tuple(tuple(r) for r in h)))
    uppers = [(i, j) for i in range(m) for j in range(m) if i < j]
    lowers = [(i, j) for i in range(m) for j in range(m) if i > j]
    for i, j in uppers:
        basis.append(_basis_entry(m, i, j))
    for i, j in lowers:
        basis.append(_basis_entry(m, i, j))
    d = m * m - 1
    a_vecs = [unit_vec(d, i) for i in range(m - 1)]
    n_vecs = [unit_vec(d, m - 1 + t) for t in range(len(uppers))]
    return LieModel(f"sl({m})", basis, a_vecs, n_vecs)


def build_so1n(n: int) -> LieModel:
    """so(1,n) = {X : X^T I_{1,n} + I_{1,n} X = 0} with I_{1,n} = diag(-1,1..1)."""
    if n < 2:
        raise ValueError("so(1,n) model needs n >= 2")
    m = n + 1
    basis = []
    for i in range(1, m):  # boosts E_{0i} + E_{i0}, span p
        b = [[Q0] * m for _ in range(m)]
        b[0][i] = Q1
        b[i][0] = Q1
        basis.append(Matrix(tuple(tuple(r) for r in b)))
    for i in range(1, m):  # rotations E_{ij} - E_{ji}, span k
        for j in range(i + 1, m):
            k = [[Q0] * m for _ in range(m)]
            k[i][j] = Q1
            k[j][i] = -Q1
            basis.append(Matrix(tuple(tuple(r) for r in k)))
    d = len(basis)
    a_vecs = [unit_vec(d, 0)]  # a = R (E_01 + E_10)
    return LieModel(f"so(1,{n})", basis, a_vecs)


def build_su1n(n: int) -> LieModel:
    """su(1,n) realified: 2(n+1) x 2(n+1) real matrices commuting with J.

    The complex model {X : X^H I_{1,n} + I_{1,n} X = 0, tr X = 0} is solved
    exactly over the real and imaginary entry variables, then realified via
    a + ib -> [[a, -b], [b, a]].  J is the realification of iI.
    """
    if n < 2:
        raise ValueError("su(1,n) model needs n >= 2")
    m = n + 1
    sig = [-1] + [1] * n
    nvars = 2 * m * m  # x_{pq} then y_{pq}, row-major

    def xv(p, q):
        return p * m + q

    def yv(p, q):
        return m * m + p * m + q

    rows = []
    for p in range(m):
        for q in range(m):
            # (X^H I + I X)_{pq} = 0 : real and imaginary parts
            r = [Q0] * nvars
            r[xv(q, p)] += rat(sig[q])
            r[xv(p, q)] += rat(sig[p])
            rows.append(tuple(r))
            r = [Q0] * nvars
            r[yv(q, p)] -= rat(sig[q])
            r[yv(p, q)] += rat(sig[p])
            rows.append(tuple(r))
    tr_re = [Q0] * nvars
    tr_im = [Q0] * nvars
    for p in range(m):
        tr_re[xv(p, p)] = Q1
        tr_im[yv(p, p)] = Q1
    rows.append(tuple(tr_re))
    rows.append(tuple(tr_im))

    basis = []
    for sol in kernel_rows(rows, nvars):
        real = [[sol[xv(p, q)] for q in range(m)] for p in range(m)]
        imag = [[sol[yv(p, q)] for q in range(m)] for p in range(m)]
        big = [[Q0] * (2 * m) for _ in range(2 * m)]
        for p in range(m):
            for q in range(m):
                big[p][q] = real[p][q]
                big[p][q + m] = -imag[p][q]
                big[p + m][q] = imag[p][q]
                big[p + m][q + m] = real[p][q]
        basis.append(Matrix(tuple(tuple(r) for r in big)))

    # a = R * realify(E_01 + E_10)
    h0 = [[Q0] * (2 * m) for _ in range(2 * m)]
    h0[0][1] = h0[1][0] = Q1
    h0[m][m + 1] = h0[m + 1][m] = Q1
    h0_mat = Matrix(tuple(tuple(r) for r in h0))

    a_coords = _coords_in_basis(basis, h0_mat)
    model = LieModel(f"su(1,{n})", basis, [a_coords])
    j_rows = [[Q0] * (2 * m) for _ in range(2 * m)]
    for p in range(m):
        j_rows[p][p + m] = -Q1
        j_rows[p + m][p] = Q1
    model.complex_structure = Matrix(tuple(tuple(r) for r in j_rows))
    return model


def _coords_in_basis(basis: Sequence[Matrix], mat: Matrix) -> tuple:
    """Coordinates of mat in a list of basis matrices (exact solve)."""
    ncols = basis[0].nrows * basis[0].ncols
    flat = [b.flatten() for b in basis]
    target = mat.flatten()
    reduced, pivots, transform = rref_with_transform(flat, ncols)
    c = [target[p] for p in pivots]
    rem = list(target)
    for ci, row in zip(c, reduced):
        if ci:
            for j, x in enumerate(row):
                if x:
                    rem[j] -= ci * x
    if not is_zero_vec(rem):
        raise ValueError("matrix does not lie in the span of the basis")
    out = [Q0] * len(basis)
    for ci, trow in zip(c, transform):
        if ci:
            for j, t in enumerate(trow):
                if t:
                    out[j] += ci * t
    return tuple(out)


class ProductModel(LieModel):
    """Block-diagonal direct sum of factor models."""

    def __init__(self, factors: Sequence[LieModel]):
        if not factors:
            raise ValueError("direct_sum needs at least one factor")
        self.factors = tuple(factors)
        sizes = [f.matrix_size for f in factors]
        dims = [f.dim for f in factors]
        total_size = sum(sizes)
        self.matrix_offsets = tuple(sum(sizes[:i]) for i in range(len(factors)))
        self.block_offsets = tuple(sum(dims[:i]) for i in range(len(factors)))
        basis = []
        a_vecs = []
        n_vecs = []
        d = sum(dims)
        for idx, f in enumerate(factors):
            off = self.matrix_offsets[idx]
            for b in f.basis:
                rows = [[Q0] * total_size for _ in range(total_size)]
                for i in range(f.matrix_size):
                    for j in range(f.matrix_size):
                        if b.rows[i][j]:
                            rows[off + i][off + j] = b.rows[i][j]
                basis.append(Matrix(tuple(tuple(r) for r in rows)))
            coff = self.block_offsets[idx]
            for v in f.a_space.basis:
                a_vecs.append(self._embed_raw(v, coff, d))
            for v in f.n_space.basis:
                n_vecs.append(self._embed_raw(v, coff, d))
        name = "*".join(f.name for f in factors)
        super().__init__(name, basis, a_vecs, n_vecs)

    @staticmethod
    def _embed_raw(v, offset, total):
        out = [Q0] * total
        for i, c in enumerate(v):
            out[offset + i] = c
        return tuple(out)

    def factor_slice(self, idx: int):
        start = self.block_offsets[idx]
        return start, start + self.factors[idx].dim

    def embed_vector(self, idx: int, v: Sequence) -> tuple:
        return self._embed_raw(v, self.block_offsets[idx], self.dim)

    def embed_subspace(self, idx: int, sub: Subspace) -> Subspace:
        return Subspace.span(self.dim, [self.embed_vector(idx, b) for b in sub.basis])

    def factor_block(self, idx: int) -> Subspace:
        start, stop = self.factor_slice(idx)
        return Subspace.span(self.dim, [unit_vec(self.dim, i) for i in range(start, stop)])

    def restrict_vector(self, idx: int, v: Sequence) -> tuple:
        start, stop = self.factor_slice(idx)
        if any(c for i, c in enumerate(v) if c and not (start <= i < stop)):
            raise ValueError("vector is not supported on the requested factor")
        return tuple(v[start:stop])


def direct_sum(models: Sequence[LieModel]) -> ProductModel:
    """Block-diagonal assembly; root data becomes the orthogonal disjoint union."""
    return ProductModel(models)


# ---------------------------------------------------------------------------
# module-level operation aliases


def bracket(model: LieModel, x, y):
    return model.bracket(x, y)


def killing_form(model: LieModel, x, y):
    return model.killing_form(x, y)


def iwasawa_project(model: LieModel, x):
    return model.iwasawa_project(x)
