"""Finite acyclic quivers and their representations over the rationals.

Convention: a right module over the path algebra is stored as a
representation of the quiver itself.  The map attached to an arrow ``i -> j``
sends the space at ``i`` to the space at ``j`` (shape dims[j] x dims[i]) and
paths act by left-to-right composition.  Under this convention the
indecomposable projective ``P_i`` has one basis vector at ``j`` for each path
from ``i`` to ``j``, and the injective ``I_i`` one for each path from ``j`` to
``i``.

Vertices are numbered from 1 in the public API and stored 0-based.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import sympy

from .errors import NotIndecomposable, ParseError, UnsupportedField, ZeroModule
from .exactlin import (RatMatrix, block_diag, column_basis, hstack, inverse, is_invertible,
                       kernel_basis, rank, solve)

Path = tuple[int, int, tuple[int, ...]]  # (source, target, arrow indices), 0-based


@dataclass(frozen=True)
class QuiverSpec:
    vertex_count: int
    arrows: tuple[tuple[int, int], ...]
    name: str = "Q"
    # optional naming of indecomposables by dimension vector
    labels: tuple[tuple[str, tuple[int, ...]], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "arrows", tuple(tuple(a) for a in self.arrows))
        object.__setattr__(self, "labels", tuple((n, tuple(d)) for n, d in self.labels))
        if self.vertex_count < 1:
            raise ParseError("a quiver needs at least one vertex")
        for s, t in self.arrows:
            if not (1 <= s <= self.vertex_count and 1 <= t <= self.vertex_count):
                raise ParseError(f"arrow {s} -> {t} uses a vertex outside 1..{self.vertex_count}")
        if self._has_cycle():
            raise ParseError("quiver has a directed cycle")
        for lname, dims in self.labels:
            if len(dims) != self.vertex_count:
                raise ParseError(f"label {lname}: dimension vector has wrong length")

    def _has_cycle(self) -> bool:
        indeg = [0] * self.vertex_count
        for _, t in self.arrows:
            indeg[t - 1] += 1
        stack = [v for v in range(self.vertex_count) if indeg[v] == 0]
        seen = 0
        while stack:
            v = stack.pop()
            seen += 1
            for s, t in self.arrows:
                if s - 1 == v:
                    indeg[t - 1] -= 1
                    if indeg[t - 1] == 0:
                        stack.append(t - 1)
        return seen != self.vertex_count

    @property
    def vertices(self) -> range:
        return range(1, self.vertex_count + 1)

    def opposite(self) -> QuiverSpec:
        return QuiverSpec(self.vertex_count, tuple((t, s) for s, t in self.arrows), self.name + "^op")

    @cached_property
    def _paths(self) -> dict[tuple[int, int], tuple[tuple[int, ...], ...]]:
        # all paths grouped by (source, target), shortest first then lexicographic
        out: dict[tuple[int, int], list[tuple[int, ...]]] = {}
        frontier = [(v, v, ()) for v in range(self.vertex_count)]
        while frontier:
            nxt = []
            for s, t, arr in frontier:
                out.setdefault((s, t), []).append(arr)
                for k, (a, b) in enumerate(self.arrows):
                    if a - 1 == t:
                        nxt.append((s, b - 1, arr + (k,)))
            frontier = nxt
        return {key: tuple(sorted(v, key=lambda p: (len(p), p))) for key, v in out.items()}

    def paths(self, source: int, target: int) -> tuple[tuple[int, ...], ...]:
        """Paths from ``source`` to ``target`` (0-based vertices) as arrow tuples."""
        return self._paths.get((source, target), ())


_VERT = re.compile(r"^vertices\s*=\s*(\d+)$")
_ARROW = re.compile(r"^arrow\s+(\d+)\s*->\s*(\d+)$")
_LABEL = re.compile(r"^label\s+(\S+)\s*=\s*([\d\s]+)$")


def parse_quiver(text: str, name: str = "Q") -> QuiverSpec:
    """Parse the quiver file format.

    ``vertices = N`` first, then ``arrow i -> j`` lines, then optional
    ``label NAME = d1 d2 ... dN`` lines fixing the names of indecomposables.
    Blank lines and ``#`` comments are ignored.
    """
    n = None
    arrows = []
    labels = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if (m := _VERT.match(line)):
            if n is not None:
                raise ParseError(f"line {lineno}: duplicate vertices line")
            n = int(m.group(1))
        elif (m := _ARROW.match(line)):
            if n is None:
                raise ParseError(f"line {lineno}: arrow before vertices line")
            arrows.append((int(m.group(1)), int(m.group(2))))
        elif (m := _LABEL.match(line)):
            if n is None:
                raise ParseError(f"line {lineno}: label before vertices line")
            labels.append((m.group(1), tuple(int(x) for x in m.group(2).split())))
        else:
            raise ParseError(f"line {lineno}: cannot parse {raw!r}")
    if n is None:
        raise ParseError("missing 'vertices = N' line")
    return QuiverSpec(n, tuple(arrows), name, tuple(labels))


def format_quiver(q: QuiverSpec) -> str:
    lines = [f"vertices = {q.vertex_count}"]
    lines += [f"arrow {s} -> {t}" for s, t in q.arrows]
    lines += [f"label {n} = " + " ".join(str(d) for d in dims) for n, dims in q.labels]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# representations


@dataclass(frozen=True, eq=False)
class Representation:
    quiver: QuiverSpec
    dims: tuple[int, ...]
    arrow_maps: tuple[RatMatrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(self.dims))
        object.__setattr__(self, "arrow_maps", tuple(self.arrow_maps))
        if len(self.dims) != self.quiver.vertex_count:
            raise ValueError("dimension vector length does not match the quiver")
        if len(self.arrow_maps) != len(self.quiver.arrows):
            raise ValueError("one matrix per arrow is required")
        for (s, t), m in zip(self.quiver.arrows, self.arrow_maps):
            if m.shape != (self.dims[t - 1], self.dims[s - 1]):
                raise ValueError(f"arrow {s}->{t}: matrix shape {m.shape} does not fit dims")

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def dim_string(self) -> str:
        return "(" + "".join(str(d) for d in self.dims) + ")" if max(self.dims, default=0) < 10 \
            else "(" + ",".join(str(d) for d in self.dims) + ")"

    def path_map(self, arrows: Sequence[int], source: int) -> RatMatrix:
        m = RatMatrix.identity(self.dims[source])
        for k in arrows:
            m = self.arrow_maps[k] @ m
        return m

    def __repr__(self) -> str:
        return f"Representation({self.quiver.name}, dims={self.dim_string()})"


@dataclass(frozen=True, eq=False)
class RepMorphism:
    source: Representation
    target: Representation
    vertex_maps: tuple[RatMatrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertex_maps", tuple(self.vertex_maps))
        for v, m in enumerate(self.vertex_maps):
            if m.shape != (self.target.dims[v], self.source.dims[v]):
                raise ValueError(f"vertex {v + 1}: map shape {m.shape} does not fit")

    def is_morphism(self) -> bool:
        q = self.source.quiver
        for k, (s, t) in enumerate(q.arrows):
            lhs = self.target.arrow_maps[k] @ self.vertex_maps[s - 1]
            rhs = self.vertex_maps[t - 1] @ self.source.arrow_maps[k]
            if lhs != rhs:
                return False
        return True

    def __matmul__(self, other: RepMorphism) -> RepMorphism:
        return RepMorphism(other.source, self.target,
                           tuple(a @ b for a, b in zip(self.vertex_maps, other.vertex_maps)))

    def __add__(self, other: RepMorphism) -> RepMorphism:
        return RepMorphism(self.source, self.target,
                           tuple(a + b for a, b in zip(self.vertex_maps, other.vertex_maps)))

    def scale(self, c) -> RepMorphism:
        return RepMorphism(self.source, self.target, tuple(m.scale(c) for m in self.vertex_maps))

    def total_matrix(self) -> RatMatrix:
        return block_diag(self.vertex_maps)

    def flat(self) -> tuple[Fraction, ...]:
        return tuple(x for m in self.vertex_maps for x in m.entries())

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.vertex_maps)

    def is_iso(self) -> bool:
        return all(is_invertible(m) for m in self.vertex_maps)

    def trace(self) -> Fraction:
        return sum((m.trace() for m in self.vertex_maps), Fraction(0))


def zero_rep(q: QuiverSpec) -> Representation:
    return Representation(q, (0,) * q.vertex_count, tuple(RatMatrix(0, 0) for _ in q.arrows))


def identity(x: Representation) -> RepMorphism:
    return RepMorphism(x, x, tuple(RatMatrix.identity(d) for d in x.dims))


def zero_morphism(x: Representation, y: Representation) -> RepMorphism:
    return RepMorphism(x, y, tuple(RatMatrix(b, a) for a, b in zip(x.dims, y.dims)))


def direct_sum(reps: Sequence[Representation], q: QuiverSpec | None = None) -> Representation:
    if not reps:
        if q is None:
            raise ValueError("empty direct sum needs a quiver")
        return zero_rep(q)
    q = reps[0].quiver
    dims = tuple(sum(r.dims[v] for r in reps) for v in range(q.vertex_count))
    maps = tuple(block_diag([r.arrow_maps[k] for r in reps]) for k in range(len(q.arrows)))
    return Representation(q, dims, maps)


def morphism_from_blocks(source: Representation, target: Representation,
                         src_parts: Sequence[Representation], tgt_parts: Sequence[Representation],
                         blocks: Sequence[Sequence[RepMorphism | None]]) -> RepMorphism:
    """Assemble a morphism between direct sums; ``blocks[t][s]`` maps part s to part t."""
    maps = []
    for v in range(source.quiver.vertex_count):
        rows = []
        for t, tp in enumerate(tgt_parts):
            line = []
            for s, sp in enumerate(src_parts):
                b = blocks[t][s]
                line.append(b.vertex_maps[v] if b is not None else RatMatrix(tp.dims[v], sp.dims[v]))
            rows.append(hstack(line, tp.dims[v]) if line else RatMatrix(tp.dims[v], 0))
        from .exactlin import vstack
        maps.append(vstack(rows, source.dims[v]) if rows else RatMatrix(0, source.dims[v]))
    return RepMorphism(source, target, tuple(maps))


def dual(x: Representation) -> Representation:
    """The k-dual, a representation of the opposite quiver."""
    return Representation(x.quiver.opposite(), x.dims, tuple(m.T for m in x.arrow_maps))


def dual_morphism(f: RepMorphism, dsource: Representation, dtarget: Representation) -> RepMorphism:
    """D f : D target -> D source."""
    return RepMorphism(dtarget, dsource, tuple(m.T for m in f.vertex_maps))


# ---------------------------------------------------------------------------
# projectives and injectives


def projective(q: QuiverSpec, i: int) -> Representation:
    """P_i: basis at j = paths i ~> j; an arrow appends itself to a path."""
    src = i - 1
    bases = [q.paths(src, v) for v in range(q.vertex_count)]
    maps = []
    for k, (s, t) in enumerate(q.arrows):
        rows = [[0] * len(bases[s - 1]) for _ in bases[t - 1]]
        index_t = {p: r for r, p in enumerate(bases[t - 1])}
        for c, p in enumerate(bases[s - 1]):
            rows[index_t[p + (k,)]][c] = 1
        maps.append(RatMatrix(len(bases[t - 1]), len(bases[s - 1]), rows))
    return Representation(q, tuple(len(b) for b in bases), tuple(maps))


def injective(q: QuiverSpec, i: int) -> Representation:
    """I_i: dual basis at j = paths j ~> i; an arrow strips itself off the front."""
    tgt = i - 1
    bases = [q.paths(v, tgt) for v in range(q.vertex_count)]
    maps = []
    for k, (s, t) in enumerate(q.arrows):
        rows = [[0] * len(bases[s - 1]) for _ in bases[t - 1]]
        index_t = {p: r for r, p in enumerate(bases[t - 1])}
        for c, p in enumerate(bases[s - 1]):
            if p and p[0] == k:
                rows[index_t[p[1:]]][c] = 1
        maps.append(RatMatrix(len(bases[t - 1]), len(bases[s - 1]), rows))
    return Representation(q, tuple(len(b) for b in bases), tuple(maps))


def simple(q: QuiverSpec, i: int) -> Representation:
    dims = tuple(1 if v == i - 1 else 0 for v in range(q.vertex_count))
    return Representation(q, dims, tuple(RatMatrix(dims[t - 1], dims[s - 1]) for s, t in q.arrows))


# ---------------------------------------------------------------------------
# Hom and rad


def hom_basis(x: Representation, y: Representation) -> list[RepMorphism]:
    """Basis of Hom(x, y): the kernel of the intertwining equations."""
    q = x.quiver
    offsets = []
    off = 0
    for v in range(q.vertex_count):
        offsets.append(off)
        off += y.dims[v] * x.dims[v]
    nvars = off
    eqs = []
    for k, (s, t) in enumerate(q.arrows):
        s, t = s - 1, t - 1
        ya, xa = y.arrow_maps[k], x.arrow_maps[k]
        # (ya F_s - F_t xa)[r][c] = 0, shape y_t x x_s
        for r in range(y.dims[t]):
            for c in range(x.dims[s]):
                row = [Fraction(0)] * nvars
                for kk in range(y.dims[s]):
                    a = ya[r, kk]
                    if a:
                        row[offsets[s] + kk * x.dims[s] + c] += a
                for kk in range(x.dims[t]):
                    b = xa[kk, c]
                    if b:
                        row[offsets[t] + r * x.dims[t] + kk] -= b
                eqs.append(row)
    kb = kernel_basis(RatMatrix(len(eqs), nvars, eqs))
    out = []
    for j in range(kb.cols):
        vec = kb.col(j)
        maps = []
        for v in range(q.vertex_count):
            a, b = y.dims[v], x.dims[v]
            seg = vec[offsets[v]:offsets[v] + a * b]
            maps.append(RatMatrix(a, b, (seg[r * b:(r + 1) * b] for r in range(a))))
        out.append(RepMorphism(x, y, tuple(maps)))
    return out


def end_basis(x: Representation) -> list[RepMorphism]:
    return hom_basis(x, x)


def _rad_coefficients(hom_xy: list[RepMorphism], hom_yx: list[RepMorphism]) -> RatMatrix:
    # f in rad(X,Y)  iff  tr(g f) = 0 for every g in Hom(Y,X)  (char 0)
    form = RatMatrix(len(hom_yx), len(hom_xy),
                     ([(g @ f).trace() for f in hom_xy] for g in hom_yx))
    return kernel_basis(form)


def combine(basis: Sequence[RepMorphism], coeffs: Sequence, x: Representation,
            y: Representation) -> RepMorphism:
    acc = zero_morphism(x, y)
    for c, b in zip(coeffs, basis):
        if c:
            acc = acc + b.scale(c)
    return acc


def rad_basis(x: Representation, y: Representation) -> list[RepMorphism]:
    """Basis of rad(x, y), computed with the trace form."""
    hxy = hom_basis(x, y)
    if not hxy:
        return []
    coeffs = _rad_coefficients(hxy, hom_basis(y, x))
    return [combine(hxy, coeffs.col(j), x, y) for j in range(coeffs.cols)]


def top_dimension(x: Representation) -> int:
    """dim End(x) - dim rad End(x)."""
    e = end_basis(x)
    return len(e) - _rad_coefficients(e, e).cols


def is_indecomposable(x: Representation) -> bool:
    if x.is_zero():
        raise ZeroModule("the zero representation has no decomposition type")
    if top_dimension(x) == 1:
        return True
    if _split(x) is not None:
        return False
    raise UnsupportedField("End/rad has dimension > 1 but no idempotent was found")


# ---------------------------------------------------------------------------
# sub- and quotient representations


def kernel(f: RepMorphism) -> tuple[Representation, RepMorphism]:
    x = f.source
    ks = [kernel_basis(m) if m.rows else RatMatrix.identity(m.cols) for m in f.vertex_maps]
    return _subrep(x, ks)


def _subrep(x: Representation, spans: Sequence[RatMatrix]) -> tuple[Representation, RepMorphism]:
    """Subrepresentation spanned by the columns of ``spans[v]`` (must be closed under arrows)."""
    q = x.quiver
    maps = []
    for k, (s, t) in enumerate(q.arrows):
        sol = solve(spans[t - 1], x.arrow_maps[k] @ spans[s - 1])
        if sol is None:
            raise ValueError("subspace is not closed under the arrow maps")
        maps.append(sol)
    sub = Representation(q, tuple(m.cols for m in spans), tuple(maps))
    return sub, RepMorphism(sub, x, tuple(spans))


def image(f: RepMorphism) -> tuple[Representation, RepMorphism]:
    return _subrep(f.target, [column_basis(m) for m in f.vertex_maps])


def cokernel(f: RepMorphism) -> tuple[Representation, RepMorphism]:
    y = f.target
    q = y.quiver
    quots, sections = [], []
    for v, m in enumerate(f.vertex_maps):
        qv = kernel_basis(m.T).T  # rows span the annihilator of im m
        quots.append(qv)
        sections.append(solve(qv, RatMatrix.identity(qv.rows)))
    maps = tuple(quots[t - 1] @ y.arrow_maps[k] @ sections[s - 1] for k, (s, t) in enumerate(q.arrows))
    c = Representation(q, tuple(m.rows for m in quots), maps)
    return c, RepMorphism(y, c, tuple(quots))


# ---------------------------------------------------------------------------
# projective presentations and the Auslander-Reiten translate


def _top_generators(x: Representation) -> list[tuple[int, tuple[Fraction, ...]]]:
    """Vectors spanning a complement of rad x, vertex by vertex."""
    q = x.quiver
    gens = []
    for v in range(q.vertex_count):
        d = x.dims[v]
        if d == 0:
            continue
        incoming = [x.arrow_maps[k] for k, (s, t) in enumerate(q.arrows) if t - 1 == v]
        span = hstack(incoming, d) if incoming else RatMatrix(d, 0)
        r = rank(span)
        for j in range(d):
            e = RatMatrix.column([1 if i == j else 0 for i in range(d)])
            trial = hstack([span, e])
            if rank(trial) > r:
                span, r = trial, r + 1
                gens.append((v, e.col(0)))
    return gens


@dataclass(frozen=True, eq=False)
class ProjectiveCover:
    cover: Representation
    generators: tuple[tuple[int, tuple[Fraction, ...]], ...]  # (vertex, element of x at vertex)
    epi: RepMorphism


def projective_cover(x: Representation) -> ProjectiveCover:
    q = x.quiver
    gens = _top_generators(x)
    parts = [projective(q, v + 1) for v, _ in gens]
    cover = direct_sum(parts, q)
    maps = []
    for w in range(q.vertex_count):
        cols = []
        for v, elt in gens:
            for p in q.paths(v, w):
                cols.append(x.path_map(p, v).apply(elt))
        maps.append(RatMatrix.from_columns(cols, x.dims[w]))
    return ProjectiveCover(cover, tuple(gens), RepMorphism(cover, x, tuple(maps)))


@dataclass(frozen=True, eq=False)
class Presentation:
    """Minimal projective presentation 0 -> P1 -> P0 -> x -> 0 (exact on the left
    for hereditary path algebras)."""
    p1_gens: tuple[tuple[int, tuple[Fraction, ...]], ...]  # (vertex u, element of P0 at u)
    p0_gens: tuple[tuple[int, tuple[Fraction, ...]], ...]
    p1: Representation
    p0: Representation
    d: RepMorphism  # P1 -> P0
    epi: RepMorphism  # P0 -> x


def projective_presentation(x: Representation) -> Presentation:
    q = x.quiver
    pc = projective_cover(x)
    k, inc = kernel(pc.epi)
    kgens = _top_generators(k)
    p1_gens = tuple((u, inc.vertex_maps[u].apply(e)) for u, e in kgens)
    p1 = direct_sum([projective(q, u + 1) for u, _ in p1_gens], q)
    maps = []
    for w in range(q.vertex_count):
        cols = []
        for u, elt in p1_gens:
            for p in q.paths(u, w):
                cols.append(pc.cover.path_map(p, u).apply(elt))
        maps.append(RatMatrix.from_columns(cols, pc.cover.dims[w]))
    d = RepMorphism(p1, pc.cover, tuple(maps))
    return Presentation(p1_gens, pc.generators, p1, pc.cover, d, pc.epi)


def _nakayama_of_presentation(pres: Presentation) -> RepMorphism:
    """nu(d): nu P1 -> nu P0, with nu P_u = I_u and paths acting by right division."""
    q = pres.p0.quiver
    src_parts = [injective(q, u + 1) for u, _ in pres.p1_gens]
    tgt_parts = [injective(q, v + 1) for v, _ in pres.p0_gens]
    blocks: list[list[RepMorphism | None]] = [[None] * len(src_parts) for _ in tgt_parts]
    for s, (u, elt) in enumerate(pres.p1_gens):
        # split the element of P0 at u into per-generator path coefficients
        pos = 0
        for t, (v, _) in enumerate(pres.p0_gens):
            paths = q.paths(v, u)
            coeffs = elt[pos:pos + len(paths)]
            pos += len(paths)
            maps = []
            for w in range(q.vertex_count):
                src_basis = q.paths(w, u)
                tgt_basis = q.paths(w, v)
                index = {p: r for r, p in enumerate(tgt_basis)}
                rows = [[Fraction(0)] * len(src_basis) for _ in tgt_basis]
                for c, r in zip(coeffs, paths):
                    if not c:
                        continue
                    for col, p in enumerate(src_basis):
                        if len(p) >= len(r) and p[len(p) - len(r):] == r:
                            qpath = p[:len(p) - len(r)]
                            rows[index[qpath]][col] += c
                maps.append(RatMatrix(len(tgt_basis), len(src_basis), rows))
            blocks[t][s] = RepMorphism(src_parts[s], tgt_parts[t], tuple(maps))
    return morphism_from_blocks(direct_sum(src_parts, q), direct_sum(tgt_parts, q),
                                src_parts, tgt_parts, blocks)


def _require_indecomposable(x: Representation) -> None:
    if x.is_zero() or not is_indecomposable(x):
        raise NotIndecomposable(f"{x!r} is not indecomposable")


def tau(x: Representation) -> Representation:
    """tau x = ker(nu P1 -> nu P0) for the minimal projective presentation."""
    _require_indecomposable(x)
    return _tau(x)


def _tau(x: Representation) -> Representation:
    pres = projective_presentation(x)
    if pres.p1.is_zero():
        return zero_rep(x.quiver)
    k, _ = kernel(_nakayama_of_presentation(pres))
    return k


def tau_minus(x: Representation) -> Representation:
    """tau^- x = D tau_{Q^op} D x."""
    _require_indecomposable(x)
    t = _tau(dual(x))
    back = dual(t)
    return Representation(x.quiver, back.dims, back.arrow_maps)


# ---------------------------------------------------------------------------
# isomorphism and Krull-Schmidt decomposition


def find_isomorphism(x: Representation, y: Representation, tries: int = 20,
                     seed: int = 0) -> RepMorphism | None:
    if x.dims != y.dims:
        return None
    basis = hom_basis(x, y)
    if not basis:
        return identity(x) if x.is_zero() else None
    for b in basis:
        if b.is_iso():
            return b
    rng = random.Random(seed)
    for _ in range(tries):
        f = combine(basis, [rng.randint(-3, 3) for _ in basis], x, y)
        if f.is_iso():
            return f
    return None


def is_isomorphic(x: Representation, y: Representation) -> bool:
    return find_isomorphism(x, y) is not None


def _charpoly_factors(f: RepMorphism) -> list[list[Fraction]]:
    """Distinct irreducible factors over Q of the characteristic polynomial,
    as coefficient lists (highest degree first)."""
    lam = sympy.Symbol("lam")
    poly = sympy.Integer(1)
    for m in f.vertex_maps:
        if m.rows:
            poly *= sympy.Matrix(m.to_lists()).charpoly(lam).as_expr()
    _, facs = sympy.factor_list(sympy.Poly(poly, lam, domain="QQ"))
    out = []
    for fac, _ in facs:
        coeffs = sympy.Poly(fac, lam).all_coeffs()
        out.append([Fraction(int(c.p), int(c.q)) for c in coeffs])
    return out


def _poly_at(coeffs: Sequence[Fraction], m: RatMatrix) -> RatMatrix:
    acc = RatMatrix(m.rows, m.cols)
    for c in coeffs:
        acc = acc @ m + RatMatrix.identity(m.rows).scale(c)
    return acc


def _split(x: Representation, tries: int = 60, seed: int = 0):
    """Find x = K (+) I with both parts nonzero (Fitting decomposition of an
    endomorphism along one irreducible factor of its characteristic
    polynomial).  Returns the two inclusions or None."""
    ends = end_basis(x)
    rng = random.Random(seed)
    candidates = iter(ends)
    for attempt in range(len(ends) + tries):
        f = next(candidates, None)
        if f is None:
            f = combine(ends, [rng.randint(-4, 4) for _ in ends], x, x)
        factors = _charpoly_factors(f)
        if len(factors) < 2:
            continue
        p = factors[0]
        ks, ims = [], []
        for m, d in zip(f.vertex_maps, x.dims):
            pm = _poly_at(p, m)
            power = RatMatrix.identity(d)
            for _ in range(max(d, 1)):
                power = power @ pm
            ks.append(kernel_basis(power) if d else RatMatrix(0, 0))
            ims.append(column_basis(power) if d else RatMatrix(0, 0))
        kdim = sum(k.cols for k in ks)
        if 0 < kdim < x.total_dim:
            return _subrep(x, ks)[1], _subrep(x, ims)[1]
    return None


@dataclass(frozen=True, eq=False)
class Decomposition:
    summands: tuple[tuple[Representation, int], ...]
    iso: RepMorphism  # (expanded direct sum of summands) -> x

    @property
    def expanded(self) -> list[Representation]:
        return [r for r, m in self.summands for _ in range(m)]


def _leaves(x: Representation) -> list[RepMorphism]:
    if x.is_zero():
        return []
    if top_dimension(x) == 1:
        return [identity(x)]
    parts = _split(x)
    if parts is None:
        raise UnsupportedField("End/rad has dimension > 1 but no idempotent was found")
    out = []
    for inc in parts:
        out += [inc @ leaf for leaf in _leaves(inc.source)]
    return out


def decompose(x: Representation) -> Decomposition:
    """Krull-Schmidt decomposition with an explicit isomorphism onto x.

    Summands are ordered by dimension vector (lexicographic) and isomorphic
    summands are grouped under one representative.
    """
    leaves = _leaves(x)
    leaves.sort(key=lambda inc: inc.source.dims)
    groups: list[tuple[Representation, list[RepMorphism]]] = []
    for inc in leaves:
        for rep, incs in groups:
            phi = find_isomorphism(rep, inc.source)
            if phi is not None:
                incs.append(inc @ phi)
                break
        else:
            groups.append((inc.source, [inc]))
    summands = tuple((rep, len(incs)) for rep, incs in groups)
    flat = [inc for _, incs in groups for inc in incs]
    total = direct_sum([inc.source for inc in flat], x.quiver)
    maps = tuple(hstack([inc.vertex_maps[v] for inc in flat], x.dims[v])
                 for v in range(x.quiver.vertex_count))
    iso = RepMorphism(total, x, maps)
    if not iso.is_iso() or not iso.is_morphism():
        raise AssertionError("decomposition did not produce an isomorphism")
    return Decomposition(summands, iso)


def inverse_morphism(f: RepMorphism) -> RepMorphism:
    maps = []
    for m in f.vertex_maps:
        inv = inverse(m)
        if inv is None:
            raise ValueError("morphism is not invertible")
        maps.append(inv)
    return RepMorphism(f.target, f.source, tuple(maps))
