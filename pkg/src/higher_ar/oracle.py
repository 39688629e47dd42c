"""Brute-force cross-checks that never read the category caches.

Modules over a tensor product of path algebras are built explicitly as
representations graded by vertex pairs, with the arrows of the first quiver
acting by ``L_a (x) 1`` and those of the second by ``1 (x) N_b``.  Hom spaces
are solved directly from both families of intertwining equations.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .exactlin import RatMatrix, block, hstack, kernel_basis, kron, rank
from .quiver import QuiverSpec, Representation, hom_basis, rad_basis

SEED = 20240607


@dataclass(frozen=True, eq=False)
class BiModuleRep:
    left: QuiverSpec
    right: QuiverSpec
    dims: dict[tuple[int, int], int]  # 0-based vertex pairs
    left_maps: dict[tuple[int, int], RatMatrix]  # (arrow of left, vertex of right)
    right_maps: dict[tuple[int, int], RatMatrix]  # (vertex of left, arrow of right)

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return sorted(self.dims)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def commutes(self) -> bool:
        for (a, (i, j)), (b, (u, v)) in product(enumerate(self.left.arrows), enumerate(self.right.arrows)):
            i, j, u, v = i - 1, j - 1, u - 1, v - 1
            lhs = self.right_maps[(j, b)] @ self.left_maps[(a, u)]
            rhs = self.left_maps[(a, v)] @ self.right_maps[(i, b)]
            if lhs != rhs:
                return False
        return True


def explicit_tensor(l: Representation, n: Representation) -> BiModuleRep:
    ql, qn = l.quiver, n.quiver
    dims = {(v, w): l.dims[v] * n.dims[w] for v in range(ql.vertex_count) for w in range(qn.vertex_count)}
    lm = {(a, w): kron(l.arrow_maps[a], RatMatrix.identity(n.dims[w]))
          for a in range(len(ql.arrows)) for w in range(qn.vertex_count)}
    rm = {(v, b): kron(RatMatrix.identity(l.dims[v]), n.arrow_maps[b])
          for v in range(ql.vertex_count) for b in range(len(qn.arrows))}
    return BiModuleRep(ql, qn, dims, lm, rm)


def bimodule_sum(x: BiModuleRep, y: BiModuleRep) -> BiModuleRep:
    def diag(p, q):
        return block([[p, RatMatrix(p.rows, q.cols)], [RatMatrix(q.rows, p.cols), q]],
                     [p.rows, q.rows], [p.cols, q.cols])
    return BiModuleRep(x.left, x.right, {k: x.dims[k] + y.dims[k] for k in x.dims},
                       {k: diag(x.left_maps[k], y.left_maps[k]) for k in x.left_maps},
                       {k: diag(x.right_maps[k], y.right_maps[k]) for k in x.right_maps})


def _arrow_equations(x: BiModuleRep, y: BiModuleRep):
    """Every (source pair, target pair, X-matrix, Y-matrix) for both arrow families."""
    for a, (i, j) in enumerate(x.left.arrows):
        for w in range(x.right.vertex_count):
            yield (i - 1, w), (j - 1, w), x.left_maps[(a, w)], y.left_maps[(a, w)]
    for b, (u, v) in enumerate(x.right.arrows):
        for p in range(x.left.vertex_count):
            yield (p, u - 1), (p, v - 1), x.right_maps[(p, b)], y.right_maps[(p, b)]


def _layout(x: BiModuleRep, y: BiModuleRep):
    offs, pos = {}, 0
    for k in x.pairs:
        offs[k] = pos
        pos += y.dims[k] * x.dims[k]
    return offs, pos


def hom_direct(x: BiModuleRep, y: BiModuleRep) -> list[dict[tuple[int, int], RatMatrix]]:
    """Basis of Hom(x, y): one matrix per vertex pair, intertwining every arrow."""
    offs, nvars = _layout(x, y)
    rows = []
    for s, t, xm, ym in _arrow_equations(x, y):
        # ym F_s - F_t xm = 0, shape y[t] x x[s]
        for r in range(y.dims[t]):
            for c in range(x.dims[s]):
                row = [Fraction(0)] * nvars
                for k in range(y.dims[s]):
                    if ym[r, k]:
                        row[offs[s] + k * x.dims[s] + c] += ym[r, k]
                for k in range(x.dims[t]):
                    if xm[k, c]:
                        row[offs[t] + r * x.dims[t] + k] -= xm[k, c]
                rows.append(row)
    null = kernel_basis(RatMatrix(len(rows), nvars, rows))
    out = []
    for j in range(null.cols):
        v = null.col(j)
        f = {}
        for k in x.pairs:
            a, b = y.dims[k], x.dims[k]
            seg = v[offs[k]:offs[k] + a * b]
            f[k] = RatMatrix(a, b, (seg[r * b:(r + 1) * b] for r in range(a)))
        out.append(f)
    return out


def _flat(f: dict[tuple[int, int], RatMatrix]) -> tuple[Fraction, ...]:
    return tuple(x for k in sorted(f) for x in f[k].entries())


def _trace_after(g, f) -> Fraction:
    return sum(((g[k] @ f[k]).trace() for k in f), Fraction(0))


def rad_direct(x: BiModuleRep, y: BiModuleRep) -> list[dict[tuple[int, int], RatMatrix]]:
    """rad(x, y) as the (y, x) corner of the Jacobson radical of End(x (+) y).

    The radical of the endomorphism algebra is the kernel of its trace form
    (characteristic zero).
    """
    s = bimodule_sum(x, y)
    end = hom_direct(s, s)
    form = RatMatrix(len(end), len(end), ([_trace_after(g, f) for f in end] for g in end))
    rad = kernel_basis(form)
    corners = []
    for j in range(rad.cols):
        r = {k: RatMatrix(s.dims[k], s.dims[k]) for k in s.pairs}
        for c, e in zip(rad.col(j), end):
            if c:
                for k in r:
                    r[k] = r[k] + e[k].scale(c)
        corners.append({k: r[k].submatrix(range(x.dims[k], s.dims[k]), range(x.dims[k])) for k in s.pairs})
    # keep an independent spanning set
    cols, kept = [], []
    for cnr in corners:
        trial = cols + [_flat(cnr)]
        if rank(RatMatrix.from_columns(trial, len(trial[0]))) > len(cols):
            cols = trial
            kept.append(cnr)
    return kept


def _span_rank(vecs: Sequence[Sequence[Fraction]], length: int) -> int:
    return rank(RatMatrix.from_columns(list(vecs), length)) if vecs else 0


def _kron_morphism(f, g, l: Representation, n: Representation) -> dict[tuple[int, int], RatMatrix]:
    return {(v, w): kron(f.vertex_maps[v], g.vertex_maps[w])
            for v in range(l.quiver.vertex_count) for w in range(n.quiver.vertex_count)}


@dataclass
class RadFormulaResult:
    ok: bool
    lhs_dim: int
    rhs_dim: int
    predicted_dim_ok: bool


def rad_formula_check(m: Representation, n: Representation, m2: Representation, n2: Representation) -> RadFormulaResult:
    """rad(M,N) (x) Hom(M',N') + Hom(M,N) (x) rad(M',N') = rad(M (x) M', N (x) N')."""
    x, y = explicit_tensor(m, m2), explicit_tensor(n, n2)
    length = sum(y.dims[k] * x.dims[k] for k in x.pairs)
    h1, h2 = hom_basis(m, n), hom_basis(m2, n2)
    r1, r2 = rad_basis(m, n), rad_basis(m2, n2)
    lhs = [_flat(_kron_morphism(f, g, m, m2)) for f in r1 for g in h2]
    lhs += [_flat(_kron_morphism(f, g, m, m2)) for f in h1 for g in r2]
    rhs = [_flat(f) for f in rad_direct(x, y)]
    lr, rr = _span_rank(lhs, length), _span_rank(rhs, length)
    both = _span_rank(lhs + rhs, length)
    ok = lr == rr == both
    predicted = len(r1) * len(h2) + len(h1) * len(r2) - len(r1) * len(r2)
    return RadFormulaResult(ok, lr, rr, predicted == rr)


# ---------------------------------------------------------------------------
# homology


def lin_tensor(a, b):
    """Total tensor product of two explicit complexes (Koszul sign on the second factor)."""
    from .complexes import LinComplex
    da, db = a.degrees(), b.degrees()
    if not da or not db:
        return LinComplex({})
    degs = range(min(da) + min(db), max(da) + max(db) + 1)

    def parts(m):
        return [(j, m - j) for j in sorted(da, reverse=True) if b.dim(m - j)]

    dims = {m: sum(a.dim(j) * b.dim(k) for j, k in parts(m)) for m in degs}
    maps = {}
    for m in degs:
        src, tgt = parts(m), parts(m - 1)
        grid = []
        for jt, kt in tgt:
            row = []
            for j, k in src:
                if (jt, kt) == (j - 1, k):
                    row.append(kron(a.map(j), RatMatrix.identity(b.dim(k))))
                elif (jt, kt) == (j, k - 1):
                    blk = kron(RatMatrix.identity(a.dim(j)), b.map(k))
                    row.append(blk.scale(-1) if j % 2 else blk)
                else:
                    row.append(RatMatrix(a.dim(jt) * b.dim(kt), a.dim(j) * b.dim(k)))
            grid.append(row)
        maps[m] = block(grid, [a.dim(j) * b.dim(k) for j, k in tgt], [a.dim(j) * b.dim(k) for j, k in src])
    return LinComplex(dims, maps)


def convolve(ha: dict[int, int], hb: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for i, x in ha.items():
        for j, y in hb.items():
            if x * y:
                out[i + j] = out.get(i + j, 0) + x * y
    return out


def _nonzero(h: dict[int, int]) -> dict[int, int]:
    return {k: v for k, v in h.items() if v}


def kunneth_check(c, d) -> bool:
    """Homology of the total tensor equals the convolution of the factor homologies,
    both for the category-level construction and for the explicit kron complex."""
    from .complexes import realize, total_tensor
    rc, rd = realize(c), realize(d)
    expected = _nonzero(convolve(rc.homology_dims(), rd.homology_dims()))
    t = realize(total_tensor(c, d))
    lt = lin_tensor(rc, rd)
    if not t.is_complex() or not lt.is_complex():
        return False
    return _nonzero(t.homology_dims()) == expected == _nonzero(lt.homology_dims())


def induced_homology_iso(f) -> bool:
    """Quasi-isomorphism test through the induced maps on homology."""
    src, tgt = f.source, f.target
    for i in sorted(set(src.degrees()) | set(tgt.degrees())):
        z = kernel_basis(src.map(i))
        bnd = tgt.map(i + 1)
        h_src = z.cols - rank(src.map(i + 1))
        h_tgt = tgt.dim(i) - rank(tgt.map(i)) - rank(bnd)
        if h_src != h_tgt:
            return False
        img = f.comp(i) @ z
        induced = rank(hstack([img, bnd], tgt.dim(i))) - rank(bnd)
        if induced != h_src:
            return False
    return True


# ---------------------------------------------------------------------------
# seeded random inputs


def random_radical_complex(cat, rng: random.Random, slice_: int | None = None, length: int = 3,
                           max_summands: int = 2):
    """A random bounded complex with radical differentials, all labels in one slice."""
    from .complexes import ComplexF
    from .ctcat import FormalModule, from_flat, hom_space_dim, left_compose_matrix
    labs = cat.slice_labels(rng.randrange(cat.slice_count) if slice_ is None else slice_)
    terms = {i: FormalModule(tuple(rng.choice(labs) for _ in range(rng.randint(1, max_summands))))
             for i in range(length)}
    diffs = {}
    for i in range(1, length):
        src, tgt = terms[i], terms[i - 1]
        # radical subspace of Hom(src, tgt): blocks between equal labels restricted to rad
        cols = []
        pos = 0
        total = hom_space_dim(cat, src, tgt)
        for b in tgt:
            for a in src:
                r = cat.rad_basis(a, b)
                for j in range(r.cols):
                    v = [Fraction(0)] * total
                    for k, x in enumerate(r.col(j)):
                        v[pos + k] = x
                    cols.append(v)
                pos += cat.hom_dim(a, b)
        basis = RatMatrix.from_columns(cols, total)
        if i >= 2 and basis.cols:
            constraint = left_compose_matrix(cat, diffs[i - 1], src) @ basis
            basis = basis @ kernel_basis(constraint)
        coeffs = [Fraction(rng.randint(-2, 2)) for _ in range(basis.cols)]
        vec = basis.apply(coeffs) if basis.cols else (Fraction(0),) * total
        diffs[i] = from_flat(cat, src, tgt, vec)
    return ComplexF(cat, terms, diffs)


def random_chain_map(a, b, rng: random.Random):
    from .complexes import chain_map_space, combine_chain_maps
    basis = chain_map_space(a, b)
    return combine_chain_maps(a, b, basis, [rng.randint(-2, 2) for _ in basis])
