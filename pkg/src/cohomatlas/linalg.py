"""Exact rational linear algebra: matrices, canonical subspaces, constraint solving.

Everything downstream (brackets, root spaces, normalizer systems) reduces to
the two types here.  All arithmetic is exact rational; no operation ever
rounds, so re-running any pipeline yields bit-identical results.

Subspaces are canonicalized eagerly: the stored basis is the reduced row
echelon form of whatever spanning set was supplied, so two subspaces are
equal iff their ``basis`` tuples are equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Sequence

try:  # optional exact-arithmetic speedup; identical semantics to Fraction
    from gmpy2 import mpq as Rat
except ImportError:  # pragma: no cover
    from fractions import Fraction as Rat

Q0 = Rat(0)
Q1 = Rat(1)


def rat(x, y=None):
    """Coerce to the exact rational scalar type."""
    if y is None:
        return Rat(x)
    return Rat(x, y)


def vec(entries) -> tuple:
    return tuple(Rat(e) for e in entries)


def zero_vec(n: int) -> tuple:
    return (Q0,) * n


def unit_vec(n: int, i: int) -> tuple:
    return tuple(Q1 if j == i else Q0 for j in range(n))


def vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, u):
    return tuple(c * a for a in u)


def vdot(u, v):
    s = Q0
    for a, b in zip(u, v):
        if a and b:
            s += a * b
    return s


def is_zero_vec(u) -> bool:
    return all(not a for a in u)


# ---------------------------------------------------------------------------
# row reduction


def rref_rows(rows: Sequence[Sequence], ncols: int):
    """Reduced row echelon form.

    Returns (reduced nonzero rows, pivot column indices).  Rows are fully
    normalized: pivots are 1 with zeros above and below.
    """
    work = [list(r) for r in rows if not is_zero_vec(r)]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(work)):
            if work[i][c]:
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = Q1 / work[r][c]
        if inv != 1:
            work[r] = [x * inv for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c]:
                f = work[i][c]
                work[i] = [a - f * b for a, b in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    out = [tuple(row) for row in work[:r]]
    return out, pivots


def rref_with_transform(rows: Sequence[Sequence], ncols: int):
    """RREF plus the transform T with T @ rows == rref (zero rows kept last).

    Returns (reduced rows incl. zero rows, pivots, T rows).
    """
    m = len(rows)
    work = [list(r) + [Q1 if j == i else Q0 for j in range(m)] for i, r in enumerate(rows)]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(work)):
            if work[i][c]:
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = Q1 / work[r][c]
        if inv != 1:
            work[r] = [x * inv for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c]:
                f = work[i][c]
                work[i] = [a - f * b for a, b in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    reduced = [tuple(row[:ncols]) for row in work]
    transform = [tuple(row[ncols:]) for row in work]
    return reduced, pivots, transform


def kernel_rows(rows: Sequence[Sequence], ncols: int) -> list:
    """Basis of {x : R x = 0} for the matrix with the given rows."""
    red, pivots = rref_rows(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Q0] * ncols
        x[f] = Q1
        for i, p in enumerate(pivots):
            x[p] = -red[i][f]
        basis.append(tuple(x))
    return basis


def solve_linear_system(rows: Sequence[Sequence], rhs: Sequence) -> tuple:
    """Unique solution x of (rows) x = rhs; raises if none or not unique."""
    n = len(rows[0])
    aug = [tuple(r) + (b,) for r, b in zip(rows, rhs)]
    red, pivots = rref_rows(aug, n + 1)
    if n in pivots:
        raise ValueError("inconsistent linear system")
    if len(pivots) != n:
        raise ValueError("linear system is underdetermined")
    x = [Q0] * n
    for row, p in zip(red, pivots):
        x[p] = row[n]
    return tuple(x)


def linear_dependence(vectors: Sequence[Sequence], ncols: int):
    """If the last vector depends on the previous ones, return the coefficients.

    Returns c with vectors[-1] = sum(c[i] * vectors[i]) or None if independent.
    """
    *prev, last = vectors
    red, pivots, transform = rref_with_transform(list(prev) + [list(last)], ncols)
    if not is_zero_vec(red[-1]):
        return None
    t = transform[-1]
    scale = -Q1 / t[-1]
    return tuple(scale * t[i] for i in range(len(prev)))


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class Matrix:
    """Immutable exact rational matrix, row-major."""

    rows: tuple

    @classmethod
    def from_rows(cls, rows) -> "Matrix":
        return cls(tuple(vec(r) for r in rows))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(tuple(unit_vec(n, i) for i in range(n)))

    @classmethod
    def zeros(cls, r: int, c: int) -> "Matrix":
        return cls(tuple(zero_vec(c) for _ in range(r)))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def entry(self, i: int, j: int):
        return self.rows[i][j]

    def transpose(self) -> "Matrix":
        return Matrix(tuple(zip(*self.rows))) if self.rows else self

    def __matmul__(self, other: "Matrix") -> "Matrix":
        bt = list(zip(*other.rows))
        return Matrix(tuple(tuple(vdot(r, c) for c in bt) for r in self.rows))

    def __add__(self, other: "Matrix") -> "Matrix":
        return Matrix(tuple(vadd(a, b) for a, b in zip(self.rows, other.rows)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        return Matrix(tuple(vsub(a, b) for a, b in zip(self.rows, other.rows)))

    def __neg__(self) -> "Matrix":
        return Matrix(tuple(vscale(-Q1, r) for r in self.rows))

    def scale(self, c) -> "Matrix":
        return Matrix(tuple(vscale(Rat(c), r) for r in self.rows))

    def apply(self, v: Sequence) -> tuple:
        """Matrix-vector product (v as a column)."""
        return tuple(vdot(r, v) for r in self.rows)

    def flatten(self) -> tuple:
        return tuple(x for r in self.rows for x in r)

    def trace(self):
        return sum((self.rows[i][i] for i in range(self.nrows)), Q0)

    def rank(self) -> int:
        _, pivots = rref_rows(self.rows, self.ncols)
        return len(pivots)

    def kernel(self) -> list:
        return kernel_rows(self.rows, self.ncols)

    def is_zero(self) -> bool:
        return all(is_zero_vec(r) for r in self.rows)


def rref(m: Matrix) -> Matrix:
    """Unique reduced row echelon form, shape preserved (zero rows kept)."""
    red, _ = rref_rows(m.rows, m.ncols)
    pad = [zero_vec(m.ncols)] * (m.nrows - len(red))
    return Matrix(tuple(red) + tuple(pad))


# ---------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True)
class Subspace:
    """Subspace of Q^n as a canonical (RREF) row-space basis."""

    ambient_dim: int
    basis: tuple  # RREF rows, linearly independent, no zero rows

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        rows = [vec(v) for v in vectors]
        for r in rows:
            if len(r) != ambient_dim:
                raise ValueError("vector length does not match ambient dimension")
        red, _ = rref_rows(rows, ambient_dim)
        return cls(ambient_dim, tuple(red))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, tuple(unit_vec(ambient_dim, i) for i in range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def pivots(self) -> tuple:
        return tuple(next(j for j, x in enumerate(row) if x) for row in self.basis)

    def reduce(self, v: Sequence):
        """Reduce v against the basis; returns (residual, coefficients).

        v = sum(coeffs[i] * basis[i]) + residual, residual having zeros in all
        pivot columns.  v lies in the subspace iff residual == 0.
        """
        res = list(v)
        coeffs = []
        for row, p in zip(self.basis, self.pivots):
            c = res[p]
            coeffs.append(c)
            if c:
                for j in range(p, self.ambient_dim):
                    if row[j]:
                        res[j] -= c * row[j]
        return tuple(res), tuple(coeffs)

    def contains_vector(self, v: Sequence) -> bool:
        res, _ = self.reduce(v)
        return is_zero_vec(res)

    def contains(self, other: "Subspace") -> bool:
        return all(self.contains_vector(row) for row in other.basis)

    def coords_of(self, v: Sequence) -> tuple:
        res, coeffs = self.reduce(v)
        if not is_zero_vec(res):
            raise ValueError("vector does not lie in the subspace")
        return coeffs

    def from_coords(self, coeffs: Sequence) -> tuple:
        out = [Q0] * self.ambient_dim
        for c, row in zip(coeffs, self.basis):
            if c:
                for j, x in enumerate(row):
                    if x:
                        out[j] += c * x
        return tuple(out)


def subspace_sum(u: Subspace, v: Subspace) -> Subspace:
    """Smallest subspace containing both."""
    if u.ambient_dim != v.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    return Subspace.span(u.ambient_dim, list(u.basis) + list(v.basis))


def subspace_intersect(u: Subspace, v: Subspace) -> Subspace:
    """Largest common subspace, via the kernel of stacked constraints."""
    if u.ambient_dim != v.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    if u.dim == 0 or v.dim == 0:
        return Subspace.zero(u.ambient_dim)
    # columns of the stacked transpose [U^T | -V^T]; kernel elements (x|y)
    # satisfy x U = y V, so x U runs over the intersection.
    p, q = u.dim, v.dim
    stacked = []
    for j in range(u.ambient_dim):
        stacked.append(tuple(u.basis[i][j] for i in range(p)) + tuple(-v.basis[i][j] for i in range(q)))
    ker = kernel_rows(stacked, p + q)
    vectors = []
    for k in ker:
        x = k[:p]
        w = [Q0] * u.ambient_dim
        for c, row in zip(x, u.basis):
            if c:
                for j, a in enumerate(row):
                    if a:
                        w[j] += c * a
        vectors.append(tuple(w))
    return Subspace.span(u.ambient_dim, vectors)


def gram(form: Matrix, rows_u: Sequence, rows_v: Sequence) -> list:
    """Gram matrix [u_i^T form v_j] for the given row vectors."""
    fv = [form.apply(v) for v in rows_v]
    return [[vdot(u, f) for f in fv] for u in rows_u]


def orthocomplement_in(v: Subspace, w: Subspace, form: Matrix) -> Subspace:
    """w minus v: the complement of v inside w orthogonal w.r.t. form.

    form must be a symmetric bilinear form that is positive definite (in
    particular nondegenerate) on w, and v must be contained in w.
    """
    if not w.contains(v):
        raise ValueError("v is not contained in w")
    gw = gram(form, w.basis, w.basis)
    red, piv = rref_rows(gw, w.dim)
    if len(piv) != w.dim:
        raise ValueError("form is degenerate on w")
    if v.dim == 0:
        return w
    # x = sum t_i w_i with <x, v_j>_form = 0 for all j
    gv = gram(form, w.basis, v.basis)
    conditions = [tuple(gv[i][j] for i in range(w.dim)) for j in range(v.dim)]
    ker = kernel_rows(conditions, w.dim)
    return Subspace.span(w.ambient_dim, [w.from_coords(t) for t in ker])


def solve_inclusion_constraint(
    candidates: Sequence[Sequence],
    images: Sequence[Sequence[Sequence]],
    target: Subspace,
) -> Subspace:
    """Solve {X in span(candidates) : action(X) subset of target} exactly.

    images[a] lists, slot by slot, the images of candidates[a] under the
    linear map family; the family is linear in X, so the solution set is the
    span of sum(x_a * candidates[a]) over the kernel of the induced system.
    """
    m = len(candidates)
    if m == 0:
        return Subspace.zero(target.ambient_dim)
    nslots = len(images[0])
    if any(len(im) != nslots for im in images):
        raise ValueError("inconsistent slot counts across candidates")
    for im in images:
        for w in im:
            if len(w) != target.ambient_dim:
                raise ValueError("image dimension does not match target ambient")
    # v in target  <=>  v . n = 0 for every n in kernel(target basis)
    if target.dim == target.ambient_dim:
        normals = []
    elif target.dim == 0:
        normals = [unit_vec(target.ambient_dim, i) for i in range(target.ambient_dim)]
    else:
        normals = kernel_rows(target.basis, target.ambient_dim)
    equations = []
    for s in range(nslots):
        for n in normals:
            equations.append(tuple(vdot(images[a][s], n) for a in range(m)))
    ker = kernel_rows(equations, m) if equations else [unit_vec(m, i) for i in range(m)]
    amb = len(candidates[0])
    out = []
    for x in ker:
        w = [Q0] * amb
        for c, cand in zip(x, candidates):
            if c:
                for j, a in enumerate(cand):
                    if a:
                        w[j] += c * a
        out.append(tuple(w))
    return Subspace.span(amb, out)


def apply_to_subspace(mat: Matrix, sub: Subspace) -> Subspace:
    """Image span of a subspace under a linear map (columns act on vectors)."""
    return Subspace.span(mat.nrows, [mat.apply(row) for row in sub.basis])


class SpanSolver:
    """Coefficient extraction relative to a fixed independent spanning list."""

    def __init__(self, rows: Sequence[Sequence], ncols: int):
        reduced, pivots, transform = rref_with_transform(rows, ncols)
        if len(pivots) != len(rows):
            raise ValueError("spanning rows are linearly dependent")
        self._reduced = reduced
        self._pivots = pivots
        self._transform = transform
        self._n = len(rows)
        self._ncols = ncols

    def coords(self, v: Sequence) -> tuple:
        """c with v = sum(c[i] * rows[i]); raises if v is outside the span."""
        c = [v[p] for p in self._pivots]
        rem = list(v)
        for ci, row in zip(c, self._reduced):
            if ci:
                for j, x in enumerate(row):
                    if x:
                        rem[j] -= ci * x
        if not is_zero_vec(rem):
            raise ValueError("vector does not lie in the span")
        out = [Q0] * self._n
        for ci, trow in zip(c, self._transform):
            if ci:
                for j, t in enumerate(trow):
                    if t:
                        out[j] += ci * t
        return tuple(out)


# ---------------------------------------------------------------------------
# exact eigensplitting of a diagonalizable operator with rational spectrum


def _int_divisors(n: int) -> list:
    n = abs(n)
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            out.add(n // d)
        d += 1
    return sorted(out)


def _poly_eval(coeffs: Sequence, x):
    acc = Q0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_deflate(coeffs: Sequence, root):
    """Divide by (t - root) via synthetic division; root must be exact."""
    out = []
    acc = coeffs[-1]
    for i in range(len(coeffs) - 2, -1, -1):
        out.append(acc)
        acc = coeffs[i] + acc * root
    out.reverse()
    return out


def rational_roots(coeffs: Sequence) -> tuple:
    """All rational roots of the polynomial sum(coeffs[i] t^i), with flag.

    Returns (roots, fully_factored) where fully_factored says whether the
    polynomial splits completely into linear rational factors.
    """
    cs = [Rat(c) for c in coeffs]
    while cs and not cs[-1]:
        cs.pop()
    if not cs:
        raise ValueError("zero polynomial")
    roots = []
    while len(cs) > 1 and not cs[0]:
        roots.append(Q0)
        cs = cs[1:]
    while len(cs) > 1:
        den = 1
        for c in cs:
            den = den * c.denominator // _gcd(den, c.denominator)
        ints = [int(c * den) for c in cs]
        a0, alead = ints[0], ints[-1]
        if a0 == 0:
            roots.append(Q0)
            cs = _poly_deflate(cs, Q0)
            continue
        found = None
        for p in _int_divisors(a0):
            for q in _int_divisors(alead):
                for sign in (1, -1):
                    cand = Rat(sign * p, q)
                    if _poly_eval(cs, cand) == 0:
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            return tuple(roots), False
        roots.append(found)
        cs = _poly_deflate(cs, found)
    return tuple(roots), True


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def invariant_eigensplit(apply_fn: Callable[[Sequence], tuple], space: Subspace) -> list:
    """Exact eigenspace decomposition of an operator restricted to a space.

    apply_fn must map the space into itself and be diagonalizable with
    rational eigenvalues there; otherwise ValueError is raised.  Returns a
    list of (eigenvalue, eigenspace) pairs sorted by eigenvalue, eigenspaces
    given in the ambient coordinates.
    """
    m = space.dim
    if m == 0:
        return []
    # action matrix in the restricted coordinates: columns are images
    cols = []
    for row in space.basis:
        img = apply_fn(row)
        cols.append(space.coords_of(img))  # raises if not invariant
    act = [tuple(cols[j][i] for j in range(m)) for i in range(m)]  # act[i][j]

    def act_on(x):
        return tuple(vdot(act[i], x) for i in range(m))

    eigenvalues: list = []
    spaces: dict = {}
    covered = Subspace.zero(m)
    while covered.dim < m:
        covered_before = covered.dim
        seed = None
        for i in range(m):
            e = unit_vec(m, i)
            if not covered.contains_vector(e):
                seed = e
                break
        if seed is None:
            raise ValueError("eigensplit internal error")
        krylov = [seed]
        coeffs = None
        while True:
            nxt = act_on(krylov[-1])
            dep = linear_dependence(krylov + [nxt], m)
            if dep is not None:
                coeffs = list(dep) + [-Q1]
                break
            krylov.append(nxt)
        minpoly = [-c for c in coeffs]  # monic up to sign; roots unchanged
        roots, complete = rational_roots(minpoly)
        if not complete:
            raise ValueError("operator has non-rational eigenvalues (unsupported model)")
        for mu in roots:
            if mu in eigenvalues:
                continue
            shifted = [tuple(act[i][j] - (mu if i == j else Q0) for j in range(m)) for i in range(m)]
            ker = kernel_rows(shifted, m)
            if ker:
                eigenvalues.append(mu)
                spaces[mu] = ker
                covered = subspace_sum(covered, Subspace.span(m, ker))
        if covered.dim == covered_before:
            raise ValueError("operator is not diagonalizable over the rationals")
    if sum(len(spaces[mu]) for mu in eigenvalues) != m:
        raise ValueError("operator is not diagonalizable over the rationals")
    out = []
    for mu in sorted(eigenvalues):
        amb = [space.from_coords(x) for x in spaces[mu]]
        out.append((mu, Subspace.span(space.ambient_dim, amb)))
    return out
