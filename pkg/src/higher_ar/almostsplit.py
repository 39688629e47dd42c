"""n-almost split sequences: verification, construction, extraction and tensoring.

A sequence ``0 -> C_{n+1} -> ... -> C_0 -> 0`` is stored as a :class:`ComplexF`
supported in degrees ``0..n+1``.  It is n-almost split when the differentials
are radical, both ends are indecomposable, and ``F_X(C)`` is exact for every
indecomposable X of the category, where ``F_X`` is ``Hom(X, -)`` with
``Hom(X, C_0)`` replaced by ``rad(X, C_0)``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .complexes import (ChainMapF, ComplexF, LinChainMap, LinComplex, cone, lin_cone, realize,
                        tensor_chain_map)
from .ctcat import (BaseCategory, CTCategory, FormalModule, IndLabel, MorphismMatrix, assemble,
                    compose, from_flat, hom_space_dim, identity_matrix, left_compose_matrix,
                    right_compose_matrix, tensor_category)
from .errors import (ConstructionFailed, Injective, NonRadicalTail, NotRadical, SliceLeak,
                     SliceMismatch, VerificationFailed)
from .exactlin import RatMatrix, block, block_diag, hstack, inverse, is_invertible, kernel_basis, rank, solve, vstack
from .quiver import (RepMorphism, Representation, cokernel, direct_sum, hom_basis,
                     projective_presentation, rad_basis)


# ---------------------------------------------------------------------------
# the functors F_X, G_X and F~_X


def _hom_block(cat: CTCategory, x: IndLabel, d: MorphismMatrix) -> RatMatrix:
    """Post-composition with d as a map Hom(x, d.source) -> Hom(x, d.target)."""
    cols = [cat.hom_dim(x, a) for a in d.source]
    rws = [cat.hom_dim(x, b) for b in d.target]
    blocks = [[cat.post_matrix(x, a, b, d.blocks[t][s]) for s, a in enumerate(d.source)]
              for t, b in enumerate(d.target)]
    return block(blocks, rws, cols)


def _rad_coords(cat: CTCategory, x: IndLabel, m: FormalModule) -> RatMatrix:
    """Columns: a basis of rad(x, m) in the coordinates of Hom(x, m)."""
    return block_diag([cat.rad_basis(x, b) for b in m])


def hom_complex(x: IndLabel, c: ComplexF) -> LinComplex:
    cat = c.cat
    dims = {i: sum(cat.hom_dim(x, b) for b in m) for i, m in c.terms.items()}
    return LinComplex(dims, {i: _hom_block(cat, x, d) for i, d in c.diffs.items()})


def apply_F(x: IndLabel, c: ComplexF) -> LinComplex:
    """Hom(x, C_i) in every degree except 0, which carries rad(x, C_0)."""
    cat = c.cat
    h = hom_complex(x, c)
    if 0 not in c.terms:
        return h
    r = _rad_coords(cat, x, c.term(0))
    dims = dict(h.dims)
    dims[0] = r.cols
    maps = dict(h.maps)
    if 1 in maps:
        sol = solve(r, maps[1])
        if sol is None:
            raise NonRadicalTail(f"d_1 does not land in rad({x}, C_0)")
        maps[1] = sol
    if 0 in maps:
        maps[0] = maps[0] @ r
    return LinComplex(dims, maps)


def apply_G(x: IndLabel, c: ComplexF) -> LinComplex:
    """Hom(C_i, x) with rad(C_{n+1}, x) on top, n = cat.n.

    The result is a cochain complex; it is returned reindexed by ``-i`` so that
    maps lower the degree like every other :class:`LinComplex`.
    """
    cat = c.cat
    top = cat.n + 1
    dims, maps = {}, {}
    coords = {}
    for i, m in c.terms.items():
        full = sum(cat.hom_dim(b, x) for b in m)
        if i == top:
            r = block_diag([cat.rad_basis(b, x) for b in m])
        else:
            r = RatMatrix.identity(full)
        coords[i] = r
        dims[-i] = r.cols
    for i, d in c.diffs.items():
        # h -> h o d_i : Hom(C_{i-1}, x) -> Hom(C_i, x)
        m = right_compose_matrix(cat, d, FormalModule((x,))) @ coords[i - 1]
        sol = solve(coords[i], m)
        if sol is None:
            raise NonRadicalTail(f"d_{top} does not land in rad(C_{top}, {x})")
        maps[-(i - 1)] = sol
    return LinComplex(dims, maps)


def apply_F_tilde(x: IndLabel, phi: ChainMapF) -> LinChainMap:
    """phi o - : Hom(x, A) -> F_x(B)."""
    cat = phi.cat
    if not phi.is_radical():
        raise NotRadical("F~ needs a radical chain map")
    src = hom_complex(x, phi.source)
    tgt = apply_F(x, phi.target)
    comps = {}
    for i, f in phi.components.items():
        m = _hom_block(cat, x, f)
        if i == 0:
            sol = solve(_rad_coords(cat, x, phi.target.term(0)), m)
            if sol is None:
                raise NotRadical(f"phi_0 o Hom({x}, A_0) is not radical")
            m = sol
        comps[i] = m
    return LinChainMap(src, tgt, comps)


def apply_F_tilde_is_quasi_iso(x: IndLabel, phi: ChainMapF) -> bool:
    return lin_cone(apply_F_tilde(x, phi)).is_exact()


# ---------------------------------------------------------------------------
# verification


@dataclass
class Condition:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class VerificationReport:
    n: int
    conditions: list[Condition] = field(default_factory=list)
    first_failing_label: IndLabel | None = None
    checked_labels: int = 0

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.conditions)

    def add(self, name: str, ok: bool, detail: str = "") -> bool:
        self.conditions.append(Condition(name, ok, detail))
        return ok

    def format(self) -> str:
        lines = [f"verification (n = {self.n}): {'PASS' if self.passed else 'FAIL'}"]
        for c in self.conditions:
            lines.append(f"  {c.name}: {'pass' if c.ok else 'FAIL'}" + (f" ({c.detail})" if c.detail else ""))
        if self.first_failing_label is not None:
            lines.append(f"  first failing label: {self.first_failing_label}")
        return "\n".join(lines) + "\n"


def verify_almost_split(c: ComplexF, labels: Sequence[IndLabel] | None = None) -> VerificationReport:
    cat = c.cat
    n = cat.n
    rep = VerificationReport(n)
    sup = c.support
    if not rep.add("support", sup is not None and sup == (0, n + 1),
                   f"degrees {sup} expected (0, {n + 1})"):
        return rep
    start, end = c.term(n + 1), c.term(0)
    if not rep.add("end terms indecomposable", len(start) == 1 and len(end) == 1,
                   f"C_{n + 1} = {start}, C_0 = {end}"):
        return rep
    rep.add("tau", cat.tau_next(start[0]) == end[0], f"tau-({start[0]}) = {cat.tau_next(start[0])}")
    if not rep.add("d o d = 0", c.is_complex()):
        return rep
    rep.add("radical differentials", c.is_radical())
    lin = realize(c)
    h = lin.homology_dims()
    rep.add("exact", all(v == 0 for v in h.values()),
            "homology " + ",".join(f"{i}:{v}" for i, v in sorted(h.items()) if v) if any(h.values()) else "")
    if not rep.passed:
        return rep
    bad = None
    count = 0
    for x in (labels if labels is not None else cat.labels):
        count += 1
        if not apply_F(x, c).is_exact():
            bad = x
            break
    rep.checked_labels = count
    rep.first_failing_label = bad
    rep.add("F_X exact for all X", bad is None, f"{count} labels checked")
    return rep


def G_exact_all(c: ComplexF) -> bool:
    return all(apply_G(x, c).is_exact() for x in c.cat.labels)


# ---------------------------------------------------------------------------
# sequences


@dataclass
class AlmostSplitSeq:
    cat: CTCategory
    complex: ComplexF
    start_label: IndLabel
    end_label: IndLabel
    report: VerificationReport | None = None

    @property
    def start_slice(self) -> int:
        return self.start_label.slice

    @property
    def n(self) -> int:
        return self.cat.n


def as_sequence(c: ComplexF, report: VerificationReport | None = None) -> AlmostSplitSeq:
    n = c.cat.n
    top, bottom = c.term(n + 1), c.term(0)
    if len(top) != 1 or len(bottom) != 1:
        raise VerificationFailed("end terms are not single labels")
    return AlmostSplitSeq(c.cat, c, top[0], bottom[0], report)


def _ext_data(cat: BaseCategory, start: IndLabel, end: IndLabel):
    """Cocycle space for Ext^1(end, start) via the projective presentation of end."""
    s_rep, t_rep = cat.reps[start], cat.reps[end]
    q = s_rep.quiver
    pres = projective_presentation(t_rep)
    # Hom(P0, S) -> Hom(P1, S), generators of P_v determined by an element of S_v
    d1 = [s_rep.dims[u] for u, _ in pres.p1_gens]
    cols = []
    for g, (v, _) in enumerate(pres.p0_gens):
        for e in range(s_rep.dims[v]):
            sv = [Fraction(int(k == e)) for k in range(s_rep.dims[v])]
            img = []
            for u, elt in pres.p1_gens:
                acc = [Fraction(0)] * s_rep.dims[u]
                pos = sum(len(q.paths(w, u)) for w, _ in pres.p0_gens[:g])
                for c, p in zip(elt[pos:pos + len(q.paths(v, u))], q.paths(v, u)):
                    if c:
                        val = s_rep.path_map(p, v).apply(sv)
                        acc = [a + c * b for a, b in zip(acc, val)]
                img += acc
            cols.append(img)
    coboundary = RatMatrix.from_columns(cols, sum(d1))
    return pres, coboundary


def _cocycle_morphism(s_rep: Representation, pres, vec: Sequence[Fraction]) -> RepMorphism:
    """The morphism P1 -> S sending the generator of each summand P_u to its slice of vec."""
    q = s_rep.quiver
    maps = []
    for w in range(q.vertex_count):
        cols = []
        pos = 0
        for u, _ in pres.p1_gens:
            su = vec[pos:pos + s_rep.dims[u]]
            pos += s_rep.dims[u]
            for p in q.paths(u, w):
                cols.append(s_rep.path_map(p, u).apply(su))
        maps.append(RatMatrix.from_columns(cols, s_rep.dims[w]))
    return RepMorphism(pres.p1, s_rep, tuple(maps))


def _ext_candidates(coboundary: RatMatrix, variant: int) -> list[tuple[Fraction, ...]]:
    """Cocycles representing a basis of Ext^1; ``variant`` picks other representatives."""
    n = coboundary.rows
    span = coboundary
    r = rank(span)
    out = []
    for j in range(n):
        e = [Fraction(int(k == j)) for k in range(n)]
        trial = hstack([span, RatMatrix.column(e)], n)
        if rank(trial) > r:
            span, r = trial, r + 1
            out.append(tuple(e))
    if variant:
        rng = random.Random(variant)
        shifted = []
        for v in out:
            scale = Fraction(rng.choice([-3, -2, 2, 3, 5]), rng.choice([1, 2, 3]))
            c = [Fraction(rng.randint(-3, 3)) for _ in range(coboundary.cols)]
            bnd = coboundary.apply(c) if coboundary.cols else (Fraction(0),) * n
            shifted.append(tuple(scale * a + b for a, b in zip(v, bnd)))
        out = shifted
    return out


def _pushout(s_rep: Representation, pres, h: RepMorphism):
    """E = coker([h; -d]: P1 -> S (+) P0) with iota: S -> E and pi: E -> T."""
    q = s_rep.quiver
    sp = direct_sum([s_rep, pres.p0], q)
    maps = tuple(vstack([h.vertex_maps[v], -pres.d.vertex_maps[v]], pres.p1.dims[v])
                 for v in range(q.vertex_count))
    e, quot = cokernel(RepMorphism(pres.p1, sp, maps))
    iota = RepMorphism(s_rep, e, tuple(
        quot.vertex_maps[v] @ vstack([RatMatrix.identity(s_rep.dims[v]), RatMatrix(pres.p0.dims[v], s_rep.dims[v])])
        for v in range(q.vertex_count)))
    t_rep = pres.epi.target
    pis = []
    for v in range(q.vertex_count):
        full = hstack([RatMatrix(t_rep.dims[v], s_rep.dims[v]), pres.epi.vertex_maps[v]], t_rep.dims[v])
        section = solve(quot.vertex_maps[v], RatMatrix.identity(e.dims[v]))
        pis.append(full @ section)
    pi = RepMorphism(e, t_rep, tuple(pis))
    return e, iota, pi


def _split_middle(cat: BaseCategory, e: Representation):
    """Write e as a direct sum of category labels: returns (labels, U) with U: (+) labels -> e iso."""
    labels, incs = [], []
    for lab in cat.labels:
        x = cat.reps[lab]
        hom = hom_basis(x, e)
        if not hom:
            continue
        rad = rad_basis(x, e)
        mult = len(hom) - len(rad)
        if mult == 0:
            continue
        span = [r.flat() for r in rad]
        r0 = len(span)
        chosen = []
        for f in hom:
            trial = span + [f.flat()]
            if rank(RatMatrix.from_columns(trial, len(f.flat()))) > r0:
                span, r0 = trial, r0 + 1
                chosen.append(f)
                if len(chosen) == mult:
                    break
        labels += [lab] * len(chosen)
        incs += chosen
    src = direct_sum([cat.reps[lab] for lab in labels], e.quiver)
    u = RepMorphism(src, e, tuple(hstack([f.vertex_maps[v] for f in incs], e.dims[v])
                                  for v in range(e.quiver.vertex_count)))
    return labels, incs, u


def build_base_sequence(cat: BaseCategory, start: IndLabel, variant: int = 0) -> AlmostSplitSeq:
    """0 -> start -> E -> tau^-(start) -> 0 from a nonzero class in Ext^1.

    ``variant`` > 0 uses a rescaled, coboundary-shifted cocycle instead of the
    canonical one; the result is then a different but isomorphic sequence.
    """
    end = cat.tau_next(start)
    if end is None:
        raise Injective(f"{start} is injective: no almost split sequence starts there")
    s_rep = cat.reps[start]
    pres, coboundary = _ext_data(cat, start, end)
    for vec in _ext_candidates(coboundary, variant):
        h = _cocycle_morphism(s_rep, pres, vec)
        e, iota, pi = _pushout(s_rep, pres, h)
        labels, incs, u = _split_middle(cat, e)
        if not u.is_iso():
            continue
        uinv = RepMorphism(e, u.source, tuple(inverse(m) for m in u.vertex_maps))
        iota2 = uinv @ iota
        pi2 = pi @ u
        mid = FormalModule(tuple(labels))
        d2, d1 = [], []
        for k, lab in enumerate(labels):
            dim = cat.reps[lab].dims
            part = RepMorphism(s_rep, cat.reps[lab], tuple(
                iota2.vertex_maps[v].submatrix(range(_offset(labels, cat, k, v), _offset(labels, cat, k, v) + dim[v]),
                                               range(s_rep.dims[v]))
                for v in range(len(dim))))
            d2.append((cat.coordinates(part, start, lab),))
            back = RepMorphism(cat.reps[lab], cat.reps[end], tuple(
                pi2.vertex_maps[v].submatrix(range(cat.reps[end].dims[v]),
                                             range(_offset(labels, cat, k, v), _offset(labels, cat, k, v) + dim[v]))
                for v in range(len(dim))))
            d1.append(cat.coordinates(back, lab, end))
        c = ComplexF(cat, {2: FormalModule((start,)), 1: mid, 0: FormalModule((end,))},
                     {2: MorphismMatrix(cat, FormalModule((start,)), mid, tuple(d2)),
                      1: MorphismMatrix(cat, mid, FormalModule((end,)), (tuple(d1),))})
        report = verify_almost_split(c)
        if report.passed:
            return AlmostSplitSeq(cat, c, start, end, report)
    raise ConstructionFailed(f"no extension class gave an almost split sequence starting at {start}")


def _offset(labels: Sequence[IndLabel], cat: BaseCategory, k: int, v: int) -> int:
    return sum(cat.reps[lab].dims[v] for lab in labels[:k])


# ---------------------------------------------------------------------------
# slices and extraction


@dataclass
class SliceSplit:
    i0: int
    low: dict[int, list[int]]  # positions of slice-i0 summands in C_m
    high: dict[int, list[int]]  # positions of slice-(i0+1) summands
    b0: dict[int, MorphismMatrix]
    b1: dict[int, MorphismMatrix]
    gamma: dict[int, MorphismMatrix]  # slice i0 part of C_m -> slice i0+1 part of C_{m-1}


def _sub(cat: CTCategory, d: MorphismMatrix, rows: list[int], cols: list[int]) -> MorphismMatrix:
    return MorphismMatrix(cat, FormalModule(tuple(d.source[s] for s in cols)),
                          FormalModule(tuple(d.target[t] for t in rows)),
                          tuple(tuple(d.blocks[t][s] for s in cols) for t in rows))


def slice_decompose(seq: AlmostSplitSeq | ComplexF) -> SliceSplit:
    c = seq.complex if isinstance(seq, AlmostSplitSeq) else seq
    cat = c.cat
    i0 = c.term(max(c.terms))[0].slice
    low, high = {}, {}
    for m, mod in c.terms.items():
        low[m], high[m] = [], []
        for k, lab in enumerate(mod):
            if lab.slice == i0:
                low[m].append(k)
            elif lab.slice == i0 + 1:
                high[m].append(k)
            else:
                raise SliceLeak(f"{lab} in degree {m} lies outside slices {i0}, {i0 + 1}")
    b0, b1, gamma = {}, {}, {}
    for m in c.terms:
        d = c.diff(m)
        lo_t, hi_t = low.get(m - 1, []), high.get(m - 1, [])
        xi = _sub(cat, d, lo_t, high[m])
        if not xi.is_zero():
            raise SliceLeak(f"nonzero map from slice {i0 + 1} to slice {i0} in d_{m}")
        b0[m] = _sub(cat, d, lo_t, low[m])
        b1[m] = _sub(cat, d, hi_t, high[m])
        gamma[m] = _sub(cat, d, hi_t, low[m])
    return SliceSplit(i0, low, high, b0, b1, gamma)


@dataclass
class ExtractedPair:
    a0: ComplexF
    a1: ComplexF
    phi: ChainMapF
    i0: int
    iso: dict[int, MorphismMatrix]  # C_m -> Cone(phi)_m


def _part(c: ComplexF, positions: dict[int, list[int]], m: int) -> FormalModule:
    return FormalModule(tuple(c.term(m)[k] for k in positions.get(m, [])))


def extract_chain_map(seq: AlmostSplitSeq | ComplexF) -> ExtractedPair:
    """A^0_m = B^{i0}_{m+1}, d^{A0}_m = -b^{i0}_{m+1}, A^1_m = B^{i0+1}_m, phi_m = -gamma_{m+1}."""
    c = seq.complex if isinstance(seq, AlmostSplitSeq) else seq
    cat = c.cat
    sp = slice_decompose(c)
    degs = list(c.terms)
    a0_terms = {m - 1: _part(c, sp.low, m) for m in degs}
    a1_terms = {m: _part(c, sp.high, m) for m in degs}
    a0 = ComplexF(cat, a0_terms, {m - 1: -sp.b0[m] for m in degs if m - 1 in c.terms})
    a1 = ComplexF(cat, a1_terms, {m: sp.b1[m] for m in degs if m - 1 in c.terms})
    phi = ChainMapF(a0, a1, {m - 1: -sp.gamma[m] for m in degs if m - 1 in c.terms})
    cn = cone(phi)
    iso = {}
    for m in degs:
        order = sp.low[m] + sp.high[m]
        signs = [1] * len(sp.low[m]) + [-1] * len(sp.high[m])
        blocks = []
        for t, k in enumerate(order):
            row = []
            for s, lab in enumerate(c.term(m)):
                tl = c.term(m)[k]
                row.append(tuple(signs[t] * x for x in cat.identity_vec(lab)) if s == k
                           else (Fraction(0),) * cat.hom_dim(lab, tl))
            blocks.append(tuple(row))
        iso[m] = MorphismMatrix(cat, c.term(m), cn.term(m), tuple(blocks))
    for m in degs:
        if m - 1 in iso and compose(cat, iso[m - 1], c.diff(m)) != compose(cat, cn.diff(m), iso[m]):
            raise VerificationFailed(f"extraction isomorphism fails in degree {m}")
    if not phi.is_chain_map():
        raise VerificationFailed("extracted phi is not a chain map")
    return ExtractedPair(a0, a1, phi, sp.i0, iso)


# ---------------------------------------------------------------------------
# uniqueness up to homotopy


@dataclass
class HomotopyWitness:
    f: ChainMapF
    g: ChainMapF
    h: dict[int, MorphismMatrix]  # h_k : A0_k -> A1'_{k+1}
    alpha: ChainMapF  # Cone(phi) -> Cone(psi), an isomorphism


def _label_multiset(c: ComplexF) -> dict:
    return {i: sorted(x.name for x in m) for i, m in c.terms.items()}


def homotopy_square_equiv(phi: ChainMapF, psi: ChainMapF, tries: int = 40,
                          seed: int = 0) -> HomotopyWitness | None:
    """Isomorphisms f: A0 -> A0', g: A1 -> A1' and h with
    g phi - psi f = d^{A1'} h + h d^{A0}; then Cone(phi) and Cone(psi) are isomorphic."""
    cat = phi.cat
    a0, a1, b0, b1 = phi.source, phi.target, psi.source, psi.target
    if psi.cat is not cat or _label_multiset(a0) != _label_multiset(b0) \
            or _label_multiset(a1) != _label_multiset(b1):
        return None
    degs = sorted(set(a0.terms) | set(a1.terms))
    lo, hi = degs[0] - 1, degs[-1] + 1
    # unknown layout
    layout: list[tuple[str, int, FormalModule, FormalModule]] = []
    for k in range(lo, hi + 1):
        layout.append(("f", k, a0.term(k), b0.term(k)))
    for k in range(lo, hi + 1):
        layout.append(("g", k, a1.term(k), b1.term(k)))
    for k in range(lo, hi + 1):
        layout.append(("h", k, a0.term(k), b1.term(k + 1)))
    offs, pos = {}, 0
    for kind, k, s, t in layout:
        offs[(kind, k)] = (pos, hom_space_dim(cat, s, t))
        pos += offs[(kind, k)][1]
    nvars = pos
    eqs: list[RatMatrix] = []

    def row_block(terms: list[tuple[str, int, RatMatrix]], nrows: int) -> RatMatrix:
        full = [[Fraction(0)] * nvars for _ in range(nrows)]
        for kind, k, m in terms:
            o, w = offs[(kind, k)]
            for i in range(m.rows):
                for j in range(m.cols):
                    if m[i, j]:
                        full[i][o + j] += m[i, j]
        return RatMatrix(nrows, nvars, full)

    for k in range(lo, hi + 1):
        # f chain map: d^{B0}_k f_k - f_{k-1} d^{A0}_k = 0 in Hom(A0_k, B0_{k-1})
        n = hom_space_dim(cat, a0.term(k), b0.term(k - 1))
        if n:
            eqs.append(row_block([("f", k, left_compose_matrix(cat, b0.diff(k), a0.term(k))),
                                  ("f", k - 1, -right_compose_matrix(cat, a0.diff(k), b0.term(k - 1)))], n))
        n = hom_space_dim(cat, a1.term(k), b1.term(k - 1))
        if n:
            eqs.append(row_block([("g", k, left_compose_matrix(cat, b1.diff(k), a1.term(k))),
                                  ("g", k - 1, -right_compose_matrix(cat, a1.diff(k), b1.term(k - 1)))], n))
        # g_k phi_k - psi_k f_k - d^{B1}_{k+1} h_k - h_{k-1} d^{A0}_k = 0 in Hom(A0_k, B1_k)
        n = hom_space_dim(cat, a0.term(k), b1.term(k))
        if n:
            eqs.append(row_block([
                ("g", k, right_compose_matrix(cat, phi.component(k), b1.term(k))),
                ("f", k, -left_compose_matrix(cat, psi.component(k), a0.term(k))),
                ("h", k, -left_compose_matrix(cat, b1.diff(k + 1), a0.term(k))),
                ("h", k - 1, -right_compose_matrix(cat, a0.diff(k), b1.term(k))),
            ], n))
    system = vstack(eqs, nvars) if eqs else RatMatrix(0, nvars)
    null = kernel_basis(system)
    if null.cols == 0:
        return None

    def unpack(vec):
        parts = {}
        for kind, k, s, t in layout:
            o, w = offs[(kind, k)]
            parts[(kind, k)] = from_flat(cat, s, t, vec[o:o + w])
        return parts

    def invertible(parts) -> bool:
        for kind, k, s, t in layout:
            if kind != "h" and not is_invertible(parts[(kind, k)].realize()):
                return False
        return True

    candidates = []
    if a0 == b0 and a1 == b1:
        ident = [Fraction(0)] * nvars
        for kind, k, s, t in layout:
            if kind in "fg" and len(s):
                o, w = offs[(kind, k)]
                ident[o:o + w] = identity_matrix(cat, s).flat()
        if system.apply(ident) == (Fraction(0),) * system.rows:
            candidates.append(tuple(ident))
    rng = random.Random(seed)
    for _ in range(tries):
        coeffs = [Fraction(rng.randint(-5, 5)) for _ in range(null.cols)]
        candidates.append(null.apply(coeffs))
    for vec in candidates:
        parts = unpack(vec)
        if not invertible(parts):
            continue
        f = ChainMapF(a0, b0, {k: parts[("f", k)] for k in range(lo, hi + 1)})
        g = ChainMapF(a1, b1, {k: parts[("g", k)] for k in range(lo, hi + 1)})
        h = {k: parts[("h", k)] for k in range(lo, hi + 1)}
        c1, c2 = cone(phi), cone(psi)
        comps = {}
        for m in c1.terms:
            comps[m] = assemble(cat, [a0.term(m - 1), a1.term(m)], [b0.term(m - 1), b1.term(m)],
                                [[parts[("f", m - 1)] if ("f", m - 1) in parts else None, None],
                                 [parts[("h", m - 1)] if ("h", m - 1) in parts else None,
                                  parts[("g", m)] if ("g", m) in parts else None]])
        alpha = ChainMapF(c1, c2, comps)
        if alpha.is_chain_map() and all(is_invertible(comps[m].realize()) for m in c1.terms):
            return HomotopyWitness(f, g, h, alpha)
    return None


# ---------------------------------------------------------------------------
# the tensor construction


def criterion_holds(phi: ChainMapF) -> bool:
    """Cone(phi) has single-label ends and F~_X(phi) is a quasi-isomorphism for every X."""
    c = cone(phi)
    n = phi.cat.n
    if len(c.term(n + 1)) != 1 or len(c.term(0)) != 1:
        return False
    if not phi.is_radical():
        return False
    return all(apply_F_tilde_is_quasi_iso(x, phi) for x in phi.cat.labels)


def tensor_almost_split(pa: ExtractedPair, pb: ExtractedPair, verify: bool = True) -> AlmostSplitSeq:
    if pa.i0 != pb.i0:
        raise SliceMismatch(f"sequences start in slices {pa.i0} and {pb.i0}")
    tc = tensor_category(pa.phi.cat, pb.phi.cat)
    big = tensor_chain_map(pa.phi, pb.phi, tc)
    c = cone(big)
    report = verify_almost_split(c) if verify else None
    if report is not None and not report.passed:
        raise VerificationFailed("tensor cone failed verification:\n" + report.format())
    return as_sequence(c, report)


def base_pair(cat: BaseCategory, start: IndLabel) -> ExtractedPair:
    return extract_chain_map(build_base_sequence(cat, start))
