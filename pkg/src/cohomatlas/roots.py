"""Restricted root space decomposition and simple root combinatorics.

``decompose`` splits a model into the joint ad(a)-eigenspaces by exact
simultaneous eigendecomposition, chooses the positive system matching the
model's stored nilpotent part, and extracts simple roots, multiplicities,
root vectors and Dynkin adjacency.

Covectors are stored as tuples of values on the RREF basis of a; the
coefficient tuple of a root over the ordered simple roots is precomputed
since nearly all downstream bookkeeping (parabolic subsets, gradings) is
driven by it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .linalg import (
    Subspace,
    invariant_eigensplit,
    rat,
    solve_linear_system,
    subspace_sum,
    vscale,
)
from .models import LieModel
from .linalg import orthocomplement_in


@dataclass(frozen=True)
class Root:
    """A restricted root: covector on a and the dual vector H in a."""

    covector: tuple  # values on the RREF basis of a
    root_vector: tuple  # ambient coordinates of H with lam(H') = <H, H'>

    def neg(self) -> "Root":
        return Root(vscale(rat(-1), self.covector), vscale(rat(-1), self.root_vector))


class RootDatum:
    """Complete restricted root data of a model."""

    def __init__(self, model, roots, positive, simple, spaces, zero_space, k0,
                 coeffs, dynkin_edges):
        self.model = model
        self.roots = tuple(roots)
        self.positive = tuple(positive)
        self.simple = tuple(simple)
        self.spaces = dict(spaces)  # covector -> Subspace
        self.zero_space = zero_space
        self.k0 = k0
        self.coeffs = dict(coeffs)  # covector -> integer tuple over simple
        self.dynkin_edges = frozenset(dynkin_edges)  # pairs (i, j), i < j
        self.multiplicities = {cov: sp.dim for cov, sp in self.spaces.items()}
        self._parabolic_cache: dict = {}
        self._nested_cache: dict = {}

    @property
    def rank(self) -> int:
        return len(self.simple)

    def space(self, root) -> Subspace:
        cov = root.covector if isinstance(root, Root) else tuple(root)
        return self.spaces[cov]

    def multiplicity(self, root) -> int:
        cov = root.covector if isinstance(root, Root) else tuple(root)
        return self.multiplicities[cov]

    def coeff(self, root) -> tuple:
        cov = root.covector if isinstance(root, Root) else tuple(root)
        return self.coeffs[cov]

    def root_with_coeff(self, coeff: Sequence) -> Root:
        target = tuple(int(c) for c in coeff)
        for r in self.roots:
            if self.coeffs[r.covector] == target:
                return r
        raise KeyError(f"no root with coefficients {target}")

    def evaluate(self, root, h: Sequence):
        """lam(H) for H given in ambient coordinates (must lie in a)."""
        cov = root.covector if isinstance(root, Root) else tuple(root)
        c = self.model.a_space.coords_of(h)
        return sum((a * b for a, b in zip(cov, c)), rat(0))


def decompose(model: LieModel) -> RootDatum:
    """Exact restricted root space decomposition with respect to a."""
    d = model.dim
    blocks = [((), Subspace.full(d))]
    for h in model.a_space.basis:
        nxt = []
        for wt, sp in blocks:
            for mu, esp in invariant_eigensplit(lambda x: model.bracket(h, x), sp):
                nxt.append((wt + (mu,), esp))
        blocks = nxt

    zero_space = None
    raw = {}
    for wt, sp in blocks:
        if all(not c for c in wt):
            zero_space = sp
        else:
            raw[wt] = sp
    if zero_space is None:
        raise ValueError("missing zero weight space")
    total = zero_space.dim + sum(sp.dim for sp in raw.values())
    if total != d:
        raise ValueError("weight spaces do not fill the model")

    # theta pairing: theta g_lam = g_{-lam}
    for wt, sp in raw.items():
        neg = tuple(-c for c in wt)
        if neg not in raw:
            raise ValueError("weights are not symmetric under negation")
        if model.theta_image(sp) != raw[neg]:
            raise ValueError("theta does not pair opposite root spaces")

    # positivity from the stored nilpotent part
    theta_n = model.theta_image(model.n_space)
    pos_cov = []
    for wt, sp in raw.items():
        if model.n_space.contains(sp):
            pos_cov.append(wt)
        elif not theta_n.contains(sp):
            raise ValueError("root space lies in neither n nor theta(n)")
    if sum(raw[wt].dim for wt in pos_cov) != model.n_space.dim:
        raise ValueError("positive root spaces do not fill n")

    pos_set = set(pos_cov)
    simple_cov = []
    for lam in pos_cov:
        decomposable = any(
            tuple(a - b for a, b in zip(lam, mu)) in pos_set
            for mu in pos_cov
            if mu != lam
        )
        if not decomposable:
            simple_cov.append(lam)

    # dual vectors H_lam from the Gram matrix of a
    a_basis = model.a_space.basis
    gram_a = [[model.inner_product(x, y) for y in a_basis] for x in a_basis]

    def dual_vector(cov):
        c = solve_linear_system(gram_a, cov)
        out = [rat(0)] * d
        for ci, row in zip(c, a_basis):
            if ci:
                for j, x in enumerate(row):
                    if x:
                        out[j] += ci * x
        return tuple(out)

    duals = {wt: dual_vector(wt) for wt in raw}

    def pairing(u, v):
        return model.inner_product(duals[u], duals[v])

    # Dynkin adjacency on the unordered simple roots
    adj = {s: set() for s in simple_cov}
    for i, s in enumerate(simple_cov):
        for t in simple_cov[i + 1:]:
            if 2 * pairing(s, t) != 0:
                adj[s].add(t)
                adj[t].add(s)

    ordered_simple = _order_simple_roots(simple_cov, adj)
    r = len(ordered_simple)
    if r != model.a_space.dim:
        raise ValueError("number of simple roots does not match the rank")

    # coefficients of every root over the ordered simple roots
    smat_cols = [[ordered_simple[i][b] for i in range(r)] for b in range(len(ordered_simple[0]))]
    coeffs = {}
    for wt in raw:
        c = solve_linear_system(smat_cols, wt)
        ints = []
        for x in c:
            if x.denominator != 1:
                raise ValueError("root is not an integer combination of simple roots")
            ints.append(int(x))
        if wt in pos_set and any(v < 0 for v in ints):
            raise ValueError("positive root with negative simple coefficient")
        coeffs[wt] = tuple(ints)

    edges = set()
    for i in range(r):
        for j in range(i + 1, r):
            if ordered_simple[j] in adj[ordered_simple[i]]:
                edges.add((i, j))

    def sortkey(wt):
        cs = coeffs[wt]
        return (sum(cs), cs)

    pos_sorted = sorted(pos_cov, key=sortkey)
    roots = [Root(wt, duals[wt]) for wt in pos_sorted]
    roots += [
        Root(neg, duals[neg])
        for neg in (tuple(-c for c in wt) for wt in pos_sorted)
    ]
    positive = tuple(roots[: len(pos_sorted)])
    simple = tuple(Root(wt, duals[wt]) for wt in ordered_simple)

    k0 = orthocomplement_in(model.a_space, zero_space, model.inner)

    return RootDatum(
        model=model,
        roots=roots,
        positive=positive,
        simple=simple,
        spaces={wt: sp for wt, sp in raw.items()},
        zero_space=zero_space,
        k0=k0,
        coeffs=coeffs,
        dynkin_edges=edges,
    )


def _order_simple_roots(simple_cov, adj):
    """Path order per connected component, components by descending covector."""
    seen = set()
    components = []
    for s in simple_cov:
        if s in seen:
            continue
        comp = set()
        stack = [s]
        while stack:
            x = stack.pop()
            if x in comp:
                continue
            comp.add(x)
            stack.extend(adj[x] - comp)
        seen |= comp
        components.append(comp)

    ordered_components = []
    for comp in components:
        if len(comp) == 1:
            ordered_components.append(list(comp))
            continue
        ends = sorted((s for s in comp if len(adj[s] & comp) <= 1), reverse=True)
        if not ends:
            raise ValueError("Dynkin component is not a path (unsupported diagram)")
        walk = [ends[0]]
        while len(walk) < len(comp):
            nxt = [x for x in adj[walk[-1]] & comp if x not in walk]
            if len(nxt) != 1:
                raise ValueError("Dynkin component is not a path (unsupported diagram)")
            walk.append(nxt[0])
        ordered_components.append(walk)

    ordered_components.sort(key=lambda c: c[0], reverse=True)
    out = []
    for comp in ordered_components:
        out.extend(comp)
    return out


def dynkin_components(datum: RootDatum, phi: Iterable[int]) -> list:
    """Partition of a subset of simple-root indices into Dynkin components."""
    phi = sorted(set(phi))
    for i in phi:
        if not 0 <= i < datum.rank:
            raise ValueError("phi contains an invalid simple root index")
    adj = {i: set() for i in phi}
    for i, j in datum.dynkin_edges:
        if i in adj and j in adj:
            adj[i].add(j)
            adj[j].add(i)
    out = []
    seen = set()
    for i in phi:
        if i in seen:
            continue
        comp = set()
        stack = [i]
        while stack:
            x = stack.pop()
            if x in comp:
                continue
            comp.add(x)
            stack.extend(adj[x] - comp)
        seen |= comp
        out.append(tuple(sorted(comp)))
    out.sort()
    return out


def sigma_phi(datum: RootDatum, phi: Iterable[int]):
    """Roots in the span of a subset of simple roots, and the positive part."""
    phi = set(phi)
    for i in phi:
        if not 0 <= i < datum.rank:
            raise ValueError("phi contains an invalid simple root index")
    inside = []
    inside_pos = []
    pos_covs = {r.covector for r in datum.positive}
    for r in datum.roots:
        cs = datum.coeffs[r.covector]
        if all(c == 0 for i, c in enumerate(cs) if i not in phi):
            inside.append(r)
            if r.covector in pos_covs:
                inside_pos.append(r)
    return inside, inside_pos
