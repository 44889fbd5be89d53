"""Constructors for the Lie algebras of the cohomogeneity one action families.

Each constructor returns an :class:`ActionSpec`: the action kind, the
defining data, and the resulting subalgebra as an exact subspace of the
ambient model, together with a sparse spanning set used for fast closure
checks.  Kinds:

* ``FH``   codimension one horospherical foliation, (a minus line) + n
* ``FS``   solvable foliation, a + (n minus a line in a simple root space)
* ``CEI``  canonical extension of a reductive boundary subalgebra
* ``CER``  canonical extension of a diagonal subalgebra over two orthogonal
           rank-one boundary pieces (or a whole-factor diagonal in products)
* ``NC``   nilpotent construction from a subspace of the top graded piece
* ``Prod`` factor action assembled with the remaining full factors
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .linalg import (
    Matrix,
    Q0,
    Q1,
    Subspace,
    is_zero_vec,
    kernel_rows,
    orthocomplement_in,
    rat,
    subspace_intersect,
    subspace_sum,
    vadd,
)
from .models import LieModel, ProductModel
from .parabolic import ParabolicDatum, build_parabolic
from .roots import RootDatum, dynkin_components


@dataclass(frozen=True)
class ActionSpec:
    """A constructed action: kind, defining data, resulting subalgebra."""

    kind: str
    model: LieModel
    phi: Optional[tuple]
    algebra: Subspace
    spanning: tuple = field(repr=False)
    payload: dict = field(repr=False, default_factory=dict)

    def to_json(self) -> dict:
        data = {}
        if self.phi is not None:
            data["phi"] = [i + 1 for i in self.phi]
        for key, value in sorted(self.payload.items()):
            if key.startswith("_"):
                continue
            data[key] = _jsonify(value, key)
        return {
            "kind": self.kind,
            "data": data,
            "algebra_basis": [[str(c) for c in row] for row in self.algebra.basis],
        }


def _jsonify(value, key=""):
    if isinstance(value, Subspace):
        return {"basis": [[str(c) for c in row] for row in value.basis]}
    if isinstance(value, SigmaMap):
        return {
            "domain": [[str(c) for c in row] for row in value.domain_basis],
            "images": [[str(c) for c in row] for row in value.images],
        }
    if isinstance(value, (list, tuple)):
        return [_jsonify(v) for v in value]
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return value + 1 if key in ("j", "k", "factor") else value
    if isinstance(value, str):
        return value
    return str(value)


def _check_subalgebra(model: LieModel, algebra: Subspace, spanning) -> None:
    if not model.is_subalgebra(algebra, spanning):
        raise ValueError("constructed space is not closed under the bracket")


# ---------------------------------------------------------------------------
# foliations


def make_fh(model: LieModel, line: Subspace) -> ActionSpec:
    """Horospherical foliation algebra (a minus line) + n."""
    if line.dim != 1:
        raise ValueError("FH needs a one dimensional subspace of a")
    if not model.a_space.contains(line):
        raise ValueError("FH line must lie in a")
    a_rest = orthocomplement_in(line, model.a_space, model.inner)
    algebra = subspace_sum(a_rest, model.n_space)
    spanning = tuple(a_rest.basis) + tuple(model.n_space.basis)
    if algebra.dim != model.a_space.dim + model.n_space.dim - 1:
        raise ValueError("FH dimension bookkeeping failed")
    _check_subalgebra(model, algebra, spanning)
    return ActionSpec("FH", model, None, algebra, spanning, {"line": line})


def make_fs(datum: RootDatum, j: int, line: Optional[Subspace] = None) -> ActionSpec:
    """Solvable foliation algebra a + (n minus a line in the j-th simple root space)."""
    model = datum.model
    if not 0 <= j < datum.rank:
        raise ValueError("FS needs a simple root index")
    root_space = datum.space(datum.simple[j])
    if line is None:
        line = Subspace.span(model.dim, [root_space.basis[0]])
    if line.dim != 1 or not root_space.contains(line):
        raise ValueError("FS line must be a line inside a simple root space")
    n_rest = orthocomplement_in(line, model.n_space, model.inner)
    algebra = subspace_sum(model.a_space, n_rest)
    spanning = tuple(model.a_space.basis) + tuple(n_rest.basis)
    if algebra.dim != model.a_space.dim + model.n_space.dim - 1:
        raise ValueError("FS dimension bookkeeping failed")
    _check_subalgebra(model, algebra, spanning)
    return ActionSpec("FS", model, (j,), algebra, spanning, {"j": j, "line": line})


# ---------------------------------------------------------------------------
# canonical extension


def canonical_extend(
    datum: RootDatum,
    pd: ParabolicDatum,
    h_phi: Subspace,
    spanning: Optional[Sequence] = None,
    kind: str = "CEI",
    payload: Optional[dict] = None,
) -> ActionSpec:
    """Extend a boundary subalgebra h_phi over phi: h_phi + a_phi + n_phi."""
    model = datum.model
    if not pd.s.contains(h_phi):
        raise ValueError("boundary subalgebra must lie in s_phi")
    h_gens = tuple(spanning) if spanning is not None else tuple(h_phi.basis)
    if not model.is_subalgebra(h_phi, h_gens):
        raise ValueError("boundary subalgebra is not closed under the bracket")
    algebra = subspace_sum(subspace_sum(h_phi, pd.a_phi), pd.n_phi)
    if algebra.dim != h_phi.dim + pd.a_phi.dim + pd.n_phi.dim:
        raise ValueError("extension pieces are not in direct sum")
    full_spanning = h_gens + tuple(pd.a_phi.basis) + tuple(pd.n_phi_gens)
    _check_subalgebra(model, algebra, full_spanning)
    data = {"h_phi": h_phi}
    if payload:
        data.update(payload)
    return ActionSpec(kind, model, pd.phi, algebra, full_spanning, data)


# ---------------------------------------------------------------------------
# diagonal subalgebras


@dataclass(frozen=True)
class SigmaMap:
    """A linear map between two subalgebras, given on an explicit basis."""

    domain_basis: tuple
    images: tuple

    def apply(self, solver, x: Sequence) -> tuple:
        coeffs = solver.coords(x)
        n = len(self.images[0])
        out = [Q0] * n
        for c, img in zip(coeffs, self.images):
            if c:
                for t, v in enumerate(img):
                    if v:
                        out[t] += c * v
        return tuple(out)

    def validate(self, model: LieModel, domain: Subspace, image: Subspace) -> None:
        from .linalg import SpanSolver

        if len(self.domain_basis) != domain.dim:
            raise ValueError("sigma domain basis does not span the domain")
        img_span = Subspace.span(model.dim, self.images)
        if img_span != image or img_span.dim != domain.dim:
            raise ValueError("sigma is not bijective onto the target algebra")
        solver = SpanSolver(self.domain_basis, model.dim)
        for i, x in enumerate(self.domain_basis):
            for k in range(i + 1, len(self.domain_basis)):
                y = self.domain_basis[k]
                lhs = self.apply(solver, model.bracket(x, y))
                rhs = model.bracket(self.images[i], self.images[k])
                if lhs != rhs:
                    raise ValueError("sigma does not preserve the bracket")

    def is_theta_equivariant(self, model: LieModel) -> bool:
        from .linalg import SpanSolver

        solver = SpanSolver(self.domain_basis, model.dim)
        for x, img in zip(self.domain_basis, self.images):
            if self.apply(solver, model.theta_apply(x)) != model.theta_apply(img):
                return False
        return True


def _sl2_triple(model: LieModel, datum: RootDatum, root) -> tuple:
    """Canonical (H, E, F) with [H,E]=2E, [H,F]=-2F, [E,F]=H for a (1,0) root."""
    sp = datum.space(root)
    if sp.dim != 1:
        raise ValueError("sl2 triple needs a multiplicity one root")
    e = sp.basis[0]
    f_raw = tuple(-c for c in model.theta_apply(e))
    h_raw = model.bracket(e, f_raw)
    if not model.a_space.contains_vector(h_raw):
        raise ValueError("bracket of the root pair leaves a (unsupported model)")
    c = datum.evaluate(root, h_raw)
    if c <= 0:
        raise ValueError("degenerate root normalization")
    scale = rat(2) / c
    h = tuple(scale * t for t in h_raw)
    f = tuple(scale * t for t in f_raw)
    return h, e, f, c


def _rational_sqrt(x):
    """Exact square root of a positive rational, or None."""
    num, den = x.numerator, x.denominator
    rn = _isqrt(num)
    rd = _isqrt(den)
    if rn is None or rd is None:
        return None
    return rat(rn, rd)


def _isqrt(n: int):
    import math

    r = math.isqrt(int(n))
    return r if r * r == n else None


def default_cer_sigma(datum: RootDatum, j: int, k: int) -> SigmaMap:
    """Canonical isomorphism between two rank-one boundary algebras.

    Identical product factors get the coordinate block translation; pairs of
    multiplicity (1,0) roots get the sl2-triple map, rescaled so the result
    is theta equivariant (requires an exact rational square root).
    """
    model = datum.model
    pd_j = build_parabolic(datum, [j])
    pd_k = build_parabolic(datum, [k])
    if isinstance(model, ProductModel):
        fj = _factor_of_root(model, datum.simple[j])
        fk = _factor_of_root(model, datum.simple[k])
        if fj is not None and fk is not None and fj != fk:
            fac_j, fac_k = model.factors[fj], model.factors[fk]
            if fac_j.name == fac_k.name and pd_j.s == model.factor_block(fj):
                dom = [model.embed_vector(fj, v) for v in
                       (tuple(Q1 if t == i else Q0 for t in range(fac_j.dim)) for i in range(fac_j.dim))]
                img = [model.embed_vector(fk, v) for v in
                       (tuple(Q1 if t == i else Q0 for t in range(fac_k.dim)) for i in range(fac_k.dim))]
                sigma = SigmaMap(tuple(dom), tuple(img))
                sigma.validate(model, pd_j.s, pd_k.s)
                return sigma
    # sl2-triple route for multiplicity (1,0) pairs
    for idx in (j, k):
        root = datum.simple[idx]
        if datum.multiplicity(root) != 1:
            raise ValueError("no canonical sigma for this pair of boundary algebras")
        double = tuple(2 * c for c in root.covector)
        if double in datum.spaces:
            raise ValueError("no canonical sigma for this pair of boundary algebras")
    hj, ej, fj_, cj = _sl2_triple(model, datum, datum.simple[j])
    hk, ek, fk_, ck = _sl2_triple(model, datum, datum.simple[k])
    t = _rational_sqrt(cj / ck)
    if t is None:
        raise ValueError("boundary algebras are homothetic but admit no rational "
                         "theta-equivariant identification")
    dom = (hj, ej, fj_)
    img = (hk, tuple(t * v for v in ek), tuple((Q1 / t) * v for v in fk_))
    sigma = SigmaMap(dom, img)
    sigma.validate(model, pd_j.s, pd_k.s)
    if not sigma.is_theta_equivariant(model):
        raise ValueError("default sigma failed theta equivariance")
    return sigma


def _factor_of_root(model: ProductModel, root) -> Optional[int]:
    for idx in range(len(model.factors)):
        start, stop = model.factor_slice(idx)
        if all(start <= t < stop for t, c in enumerate(root.root_vector) if c):
            return idx
    return None


def _diagonal_subspace(model: LieModel, sigma: SigmaMap) -> tuple:
    rows = [vadd(x, y) for x, y in zip(sigma.domain_basis, sigma.images)]
    return Subspace.span(model.dim, rows), tuple(rows)


def make_cer(datum: RootDatum, j: int, k: int, sigma: Optional[SigmaMap] = None) -> ActionSpec:
    """Diagonal subalgebra over two orthogonal simple roots, canonically extended."""
    model = datum.model
    if j == k:
        raise ValueError("CER needs two distinct simple roots")
    if tuple(sorted((j, k))) in datum.dynkin_edges:
        raise ValueError("CER roots must be orthogonal in the Dynkin diagram")
    for a, b in ((j, k), (k, j)):
        ra, rb = datum.simple[a], datum.simple[b]
        if datum.multiplicity(ra) != datum.multiplicity(rb):
            raise ValueError("CER multiplicities do not match")
        da = tuple(2 * c for c in ra.covector)
        db = tuple(2 * c for c in rb.covector)
        ma = datum.spaces[da].dim if da in datum.spaces else 0
        mb = datum.spaces[db].dim if db in datum.spaces else 0
        if ma != mb:
            raise ValueError("CER double root multiplicities do not match")
    pd_j = build_parabolic(datum, [j])
    pd_k = build_parabolic(datum, [k])
    if sigma is None:
        sigma = default_cer_sigma(datum, j, k)
    else:
        sigma.validate(model, pd_j.s, pd_k.s)
    diag, diag_gens = _diagonal_subspace(model, sigma)
    pd = build_parabolic(datum, [j, k])
    payload = {
        "j": j,
        "k": k,
        "sigma": sigma,
        "diag": diag,
        "a_section_domain": pd_j.a_upper,
        "theta_equivariant": sigma.is_theta_equivariant(model),
    }
    return canonical_extend(datum, pd, diag, diag_gens, kind="CER", payload=payload)


def make_factor_diagonal(
    pm: ProductModel,
    datum: RootDatum,
    j: int,
    k: int,
    sigma: Optional[SigmaMap] = None,
) -> ActionSpec:
    """Whole-factor diagonal {X + sigma X} plus the remaining full factors."""
    if j == k or not (0 <= j < len(pm.factors) and 0 <= k < len(pm.factors)):
        raise ValueError("factor diagonal needs two distinct factor indices")
    fac_j, fac_k = pm.factors[j], pm.factors[k]
    if sigma is None:
        if fac_j.name != fac_k.name:
            raise ValueError("no canonical sigma between non-identical factors")
        dom = [pm.embed_vector(j, tuple(Q1 if t == i else Q0 for t in range(fac_j.dim)))
               for i in range(fac_j.dim)]
        img = [pm.embed_vector(k, tuple(Q1 if t == i else Q0 for t in range(fac_k.dim)))
               for i in range(fac_k.dim)]
        sigma = SigmaMap(tuple(dom), tuple(img))
    sigma.validate(pm, pm.factor_block(j), pm.factor_block(k))
    diag, diag_gens = _diagonal_subspace(pm, sigma)
    algebra = diag
    spanning = list(diag_gens)
    for i in range(len(pm.factors)):
        if i in (j, k):
            continue
        block = pm.factor_block(i)
        algebra = subspace_sum(algebra, block)
        spanning.extend(block.basis)
    _check_subalgebra(pm, algebra, spanning)
    phi = tuple(i for i, r in enumerate(datum.simple)
                if _factor_of_root(pm, r) in (j, k))
    payload = {
        "j": j,
        "k": k,
        "sigma": sigma,
        "diag": diag,
        "a_section_domain": pm.embed_subspace(j, pm.factors[j].a_space),
        "theta_equivariant": sigma.is_theta_equivariant(pm),
        "factor_level": True,
    }
    return ActionSpec("CER", pm, phi, algebra, tuple(spanning), payload)


# ---------------------------------------------------------------------------
# nilpotent construction


def nilpotent_construct(datum: RootDatum, pd: ParabolicDatum, v: Subspace) -> ActionSpec:
    """Normalizer-plus-complement algebra from a subspace of the top grade."""
    model = datum.model
    if pd.grading is None:
        raise ValueError("nilpotent construction needs phi omitting exactly one root")
    if v.dim < 2:
        raise ValueError("nilpotent construction needs dim v >= 2")
    if not pd.grading[1].contains(v):
        raise ValueError("v must lie inside the first graded piece")
    complement = orthocomplement_in(v, pd.n_phi, model.inner)
    normalizer = model.normalizer_in(pd.l, complement)
    theta_dual = model.theta_image(model.normalizer_in(pd.l, v))
    algebra = subspace_sum(normalizer, complement)
    if algebra.dim != normalizer.dim + complement.dim:
        raise ValueError("normalizer overlaps the nilpotent complement")
    spanning = tuple(normalizer.basis) + tuple(complement.basis)
    _check_subalgebra(model, algebra, spanning)
    (j,) = [i for i in range(datum.rank) if i not in pd.phi]
    payload = {
        "j": j,
        "v": v,
        "complement": complement,
        "normalizer": normalizer,
        "theta_dual_ok": normalizer == theta_dual,
    }
    return ActionSpec("NC", model, pd.phi, algebra, spanning, payload)


# ---------------------------------------------------------------------------
# product assembly


def product_assemble(pm: ProductModel, j: int, inner: ActionSpec) -> ActionSpec:
    """Factor action on the j-th block plus all remaining full factors."""
    if not 0 <= j < len(pm.factors):
        raise ValueError("factor index out of range")
    factor = pm.factors[j]
    if inner.algebra.ambient_dim != factor.dim:
        raise ValueError("inner action does not live on the requested factor")
    algebra = pm.embed_subspace(j, inner.algebra)
    spanning = [pm.embed_vector(j, row) for row in inner.spanning]
    for i in range(len(pm.factors)):
        if i == j:
            continue
        block = pm.factor_block(i)
        algebra = subspace_sum(algebra, block)
        spanning.extend(block.basis)
    _check_subalgebra(pm, algebra, spanning)
    payload = {
        "factor": j,
        "inner_kind": inner.kind,
        "_inner": inner,
    }
    return ActionSpec("Prod", pm, None, algebra, tuple(spanning), payload)


# ---------------------------------------------------------------------------
# built-in reductive boundary subalgebras


def _entries_zero_subspace(model: LieModel, inside: Subspace, positions) -> Subspace:
    """{x in inside : matrix(x) vanishes at the given positions}."""
    conditions = []
    for row in inside.basis:
        mat = model.matrix(row)
        conditions.append(tuple(mat.rows[p][q] for p, q in positions))
    cols = list(zip(*conditions)) if conditions else []
    ker = kernel_rows([tuple(c) for c in cols], inside.dim) if cols else \
        [tuple(Q1 if t == i else Q0 for t in range(inside.dim)) for i in range(inside.dim)]
    return Subspace.span(model.dim, [inside.from_coords(t) for t in ker])


def builtin_cei_catalog(datum: RootDatum, phi: Iterable[int]) -> list:
    """Named maximal reductive boundary subalgebras for the shipped tables.

    Returns (name, subalgebra, spanning) triples with the subalgebra inside
    s_phi; every entry is closed under the bracket and theta invariant.
    """
    model = datum.model
    phi = tuple(sorted(set(phi)))
    pd = build_parabolic(datum, phi)
    out = []

    if model.name.startswith("sl("):
        comps = dynkin_components(datum, phi)
        if len(comps) != 1:
            raise ValueError("built-in catalog needs a connected phi")
        if len(phi) == 1:
            iso = subspace_intersect(pd.s, model.k_space)
            out.append(("so(2)", iso, tuple(iso.basis)))
        else:
            from .parabolic import build_nested

            psi = phi[:-1]
            nd = build_nested(datum, psi, phi)
            m = len(phi)
            out.append((f"sl({m})+R", nd.l_np, tuple(nd.l_np.basis)))
        if len(phi) == 3:
            lo = phi[0]
            block = list(range(lo, lo + 4))
            jmat = [[Q0] * model.matrix_size for _ in range(model.matrix_size)]
            jmat[block[0]][block[2]] = Q1
            jmat[block[1]][block[3]] = Q1
            jmat[block[2]][block[0]] = -Q1
            jmat[block[3]][block[1]] = -Q1
            jm = Matrix(tuple(tuple(r) for r in jmat))
            conditions = []
            for row in pd.s.basis:
                m_ = model.matrix(row)
                cond = (m_.transpose() @ jm) + (jm @ m_)
                conditions.append(cond.flatten())
            cols = list(zip(*conditions))
            ker = kernel_rows([tuple(c) for c in cols], pd.s.dim)
            sp2 = Subspace.span(model.dim, [pd.s.from_coords(t) for t in ker])
            out.append(("sp(2,R)", sp2, tuple(sp2.basis)))
    elif model.name.startswith("so(1,"):
        n = model.matrix_size - 1
        for k in range(0, n - 1):
            cross = [(p, q) for p in range(k + 1) for q in range(k + 1, n + 1)]
            cross += [(q, p) for p, q in cross]
            sub = _entries_zero_subspace(model, Subspace.full(model.dim), cross)
            name = f"so({n})" if k == 0 else f"so(1,{k})+so({n - k})"
            out.append((name, sub, tuple(sub.basis)))
    elif model.name.startswith("su(1,"):
        m = model.matrix_size // 2
        n = m - 1
        for k in range(0, n):
            cross = []
            for p in range(k + 1):
                for q in range(k + 1, m):
                    for pp, qq in ((p, q), (q, p)):
                        cross.extend([(pp, qq), (pp, qq + m), (pp + m, qq), (pp + m, qq + m)])
            sub = _entries_zero_subspace(model, Subspace.full(model.dim), cross)
            name = f"s(u(1,{k})+u({n - k}))" if k else f"u({n})"
            out.append((name, sub, tuple(sub.basis)))
        imag = [(p, q + m) for p in range(m) for q in range(m)]
        real_form = _entries_zero_subspace(model, Subspace.full(model.dim), imag)
        out.append((f"so(1,{n})", real_form, tuple(real_form.basis)))
    else:
        raise ValueError(f"no built-in reductive catalog for model {model.name}")

    for name, sub, gens in out:
        if not pd.s.contains(sub):
            raise ValueError(f"catalog entry {name} escapes the boundary algebra")
        if not model.is_subalgebra(sub, gens):
            raise ValueError(f"catalog entry {name} is not a subalgebra")
        if model.theta_image(sub) != sub:
            raise ValueError(f"catalog entry {name} is not theta invariant")
    return out
