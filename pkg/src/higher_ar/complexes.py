"""Bounded chain complexes over a :class:`CTCategory` and explicit matrix complexes.

Differentials lower the degree: ``d_i : C_i -> C_{i-1}``.  Sign conventions:

* shift:  ``A[m]_i = A_{i+m}``, ``d[m]_i = (-1)^m d_{i+m}``
* cone:   ``Cone(f)_i = A_{i-1} (+) B_i`` with differential
  ``[[-d^A_{i-1}, 0], [f_{i-1}, d^B_i]]``
* total tensor: ``(A (x) B)_m = (+)_j A_j (x) B_{m-j}``, j descending, and
  ``d(v (x) w) = d^A v (x) w + (-1)^j v (x) d^B w``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .ctcat import (CTCategory, FormalModule, MorphismMatrix, TensorCategory,
                    ZERO_MODULE, assemble, compose, identity_matrix, is_radical, tensor_category,
                    tensor_matrix, zero_matrix)
from .errors import ParseError, ShapeMismatch
from .exactlin import RatMatrix, block, rank


class ComplexF:
    """Bounded complex of formal modules; missing degrees are zero."""

    def __init__(self, cat: CTCategory, terms: Mapping[int, FormalModule],
                 diffs: Mapping[int, MorphismMatrix] | None = None):
        self.cat = cat
        self.terms = {i: m for i, m in sorted(terms.items()) if not m.is_zero()}
        diffs = dict(diffs or {})
        self.diffs: dict[int, MorphismMatrix] = {}
        for i in self.terms:
            if i - 1 in self.terms:
                d = diffs.get(i)
                if d is None:
                    d = zero_matrix(cat, self.terms[i], self.terms[i - 1])
                if d.source != self.terms[i] or d.target != self.terms[i - 1]:
                    raise ShapeMismatch(f"d_{i} does not map C_{i} to C_{i - 1}")
                self.diffs[i] = d
        for i, d in diffs.items():
            if i not in self.diffs and not d.is_zero():
                raise ShapeMismatch(f"nonzero d_{i} between zero terms")

    def term(self, i: int) -> FormalModule:
        return self.terms.get(i, ZERO_MODULE)

    def diff(self, i: int) -> MorphismMatrix:
        d = self.diffs.get(i)
        return d if d is not None else zero_matrix(self.cat, self.term(i), self.term(i - 1))

    def degrees(self) -> list[int]:
        return sorted(self.terms)

    @property
    def support(self) -> tuple[int, int] | None:
        if not self.terms:
            return None
        return min(self.terms), max(self.terms)

    def degree_range(self) -> range:
        s = self.support
        return range(0) if s is None else range(s[0], s[1] + 1)

    def is_complex(self) -> bool:
        return all(compose(self.cat, self.diff(i - 1), self.diff(i)).is_zero()
                   for i in self.diffs if i - 1 in self.diffs)

    def is_radical(self) -> bool:
        return all(is_radical(self.cat, d) for d in self.diffs.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, ComplexF):
            return NotImplemented
        return self.cat is other.cat and self.terms == other.terms and self.diffs == other.diffs

    def __repr__(self) -> str:
        body = " -> ".join(f"[{i}] {m}" for i, m in sorted(self.terms.items(), reverse=True))
        return f"ComplexF({body or '0'})"


class ChainMapF:
    def __init__(self, source: ComplexF, target: ComplexF, components: Mapping[int, MorphismMatrix]):
        if source.cat is not target.cat:
            raise ShapeMismatch("chain map between complexes over different categories")
        self.source, self.target, self.cat = source, target, source.cat
        self.components: dict[int, MorphismMatrix] = {}
        for i, f in components.items():
            if f.source != source.term(i) or f.target != target.term(i):
                raise ShapeMismatch(f"component {i} has the wrong source or target")
            if not source.term(i).is_zero() and not target.term(i).is_zero():
                self.components[i] = f

    def component(self, i: int) -> MorphismMatrix:
        f = self.components.get(i)
        return f if f is not None else zero_matrix(self.cat, self.source.term(i), self.target.term(i))

    def degrees(self) -> list[int]:
        lo = [s[0] for s in (self.source.support, self.target.support) if s]
        hi = [s[1] for s in (self.source.support, self.target.support) if s]
        return list(range(min(lo), max(hi) + 1)) if lo else []

    def is_chain_map(self) -> bool:
        c = self.cat
        for i in self.degrees():
            lhs = compose(c, self.target.diff(i), self.component(i))
            rhs = compose(c, self.component(i - 1), self.source.diff(i))
            if lhs != rhs:
                return False
        return True

    def is_radical(self) -> bool:
        return all(is_radical(self.cat, f) for f in self.components.values())

    def scale(self, s) -> ChainMapF:
        return ChainMapF(self.source, self.target, {i: f.scale(s) for i, f in self.components.items()})

    def __repr__(self) -> str:
        return f"ChainMapF({self.source!r} -> {self.target!r})"


def identity_chain_map(c: ComplexF) -> ChainMapF:
    return ChainMapF(c, c, {i: identity_matrix(c.cat, m) for i, m in c.terms.items()})


def zero_complex(cat: CTCategory) -> ComplexF:
    return ComplexF(cat, {})


def shift(c: ComplexF, m: int) -> ComplexF:
    sign = -1 if m % 2 else 1
    terms = {i - m: t for i, t in c.terms.items()}
    diffs = {i - m: d.scale(sign) for i, d in c.diffs.items()}
    return ComplexF(c.cat, terms, diffs)


def cone(f: ChainMapF) -> ComplexF:
    a, b, cat = f.source, f.target, f.cat
    degs = set(i + 1 for i in a.terms) | set(b.terms)
    terms = {i: a.term(i - 1) + b.term(i) for i in degs}
    diffs = {}
    for i in degs:
        if i - 1 not in degs:
            continue
        grid = [[-a.diff(i - 1), None],
                [f.component(i - 1), b.diff(i)]]
        diffs[i] = assemble(cat, [a.term(i - 1), b.term(i)], [a.term(i - 2), b.term(i - 1)], grid)
    return ComplexF(cat, terms, diffs)


def _tensor_parts(tc: TensorCategory, c: ComplexF, d: ComplexF, m: int) -> list[tuple[int, FormalModule]]:
    """(j, A_j (x) B_{m-j}) for every j in the support of c, j descending."""
    out = []
    for j in sorted(c.terms, reverse=True):
        out.append((j, FormalModule(tuple(tc.pair(x, y) for x in c.term(j) for y in d.term(m - j)))))
    return out


def total_tensor(c: ComplexF, d: ComplexF, tc: TensorCategory | None = None) -> ComplexF:
    tc = tc or tensor_category(c.cat, d.cat)
    if not c.terms or not d.terms:
        return ComplexF(tc, {})
    degs = sorted({i + j for i in c.terms for j in d.terms})
    terms = {}
    parts = {}
    for m in range(degs[0] - 1, degs[-1] + 1):
        parts[m] = _tensor_parts(tc, c, d, m)
        terms[m] = FormalModule(tuple(x for _, p in parts[m] for x in p))
    diffs = {}
    for m in degs:
        src, tgt = parts[m], parts[m - 1]
        grid: list[list[MorphismMatrix | None]] = [[None] * len(src) for _ in tgt]
        for s, (j, _) in enumerate(src):
            for t, (jt, _) in enumerate(tgt):
                if jt == j - 1:
                    grid[t][s] = tensor_matrix(tc, c.diff(j), identity_matrix(d.cat, d.term(m - j)))
                elif jt == j:
                    g = tensor_matrix(tc, identity_matrix(c.cat, c.term(j)), d.diff(m - j))
                    grid[t][s] = g.scale(-1) if j % 2 else g
        diffs[m] = assemble(tc, [p for _, p in src], [p for _, p in tgt], grid)
    return ComplexF(tc, terms, diffs)


def tensor_chain_map(f: ChainMapF, g: ChainMapF, tc: TensorCategory | None = None) -> ChainMapF:
    tc = tc or tensor_category(f.cat, g.cat)
    src = total_tensor(f.source, g.source, tc)
    tgt = total_tensor(f.target, g.target, tc)
    comps = {}
    for m in sorted(set(src.terms) & set(tgt.terms)):
        sp = _tensor_parts(tc, f.source, g.source, m)
        tp = _tensor_parts(tc, f.target, g.target, m)
        grid: list[list[MorphismMatrix | None]] = [[None] * len(sp) for _ in tp]
        for s, (j, _) in enumerate(sp):
            for t, (jt, _) in enumerate(tp):
                if jt == j:
                    grid[t][s] = tensor_matrix(tc, f.component(j), g.component(m - j))
        comps[m] = assemble(tc, [p for _, p in sp], [p for _, p in tp], grid)
    return ChainMapF(src, tgt, comps)


# ---------------------------------------------------------------------------
# explicit complexes of matrices


@dataclass
class LinComplex:
    """Explicit complex: ``dims[i]`` and ``maps[i] : dims[i] -> dims[i-1]``."""
    dims: dict[int, int]
    maps: dict[int, RatMatrix] = field(default_factory=dict)

    def dim(self, i: int) -> int:
        return self.dims.get(i, 0)

    def map(self, i: int) -> RatMatrix:
        m = self.maps.get(i)
        return m if m is not None else RatMatrix(self.dim(i - 1), self.dim(i))

    def degrees(self) -> list[int]:
        return sorted(i for i, d in self.dims.items() if d)

    def is_complex(self) -> bool:
        return all((self.map(i - 1) @ self.map(i)).is_zero() for i in self.degrees())

    def homology_dims(self) -> dict[int, int]:
        return {i: self.dim(i) - rank(self.map(i)) - rank(self.map(i + 1)) for i in self.degrees()}

    def is_exact(self) -> bool:
        return all(h == 0 for h in self.homology_dims().values())


@dataclass
class LinChainMap:
    source: LinComplex
    target: LinComplex
    comps: dict[int, RatMatrix]

    def comp(self, i: int) -> RatMatrix:
        m = self.comps.get(i)
        return m if m is not None else RatMatrix(self.target.dim(i), self.source.dim(i))

    def degrees(self) -> list[int]:
        return sorted(set(self.source.degrees()) | set(self.target.degrees()))

    def is_chain_map(self) -> bool:
        return all(self.target.map(i) @ self.comp(i) == self.comp(i - 1) @ self.source.map(i)
                   for i in self.degrees() + [max(self.degrees(), default=0) + 1])


def lin_cone(f: LinChainMap) -> LinComplex:
    a, b = f.source, f.target
    degs = set(i + 1 for i in a.degrees()) | set(b.degrees())
    dims = {i: a.dim(i - 1) + b.dim(i) for i in degs}
    maps = {}
    for i in degs:
        maps[i] = block([[-a.map(i - 1), RatMatrix(a.dim(i - 2), b.dim(i))],
                         [f.comp(i - 1), b.map(i)]],
                        [a.dim(i - 2), b.dim(i - 1)], [a.dim(i - 1), b.dim(i)])
    return LinComplex(dims, maps)


def realize(c: ComplexF) -> LinComplex:
    cat = c.cat
    dims = {i: sum(cat.total_dim(x) for x in m) for i, m in c.terms.items()}
    return LinComplex(dims, {i: d.realize() for i, d in c.diffs.items()})


def realize_map(f: ChainMapF) -> LinChainMap:
    return LinChainMap(realize(f.source), realize(f.target),
                       {i: m.realize() for i, m in f.components.items()})


def homology_dims(c: ComplexF) -> dict[int, int]:
    return realize(c).homology_dims()


def is_exact(c: ComplexF) -> bool:
    return realize(c).is_exact()


def is_quasi_iso(f: ChainMapF) -> bool:
    return is_exact(cone(f))


# ---------------------------------------------------------------------------
# text format


def _fmt_frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_matrix(d: MorphismMatrix) -> str:
    rows = []
    for row in d.blocks:
        rows.append(" ".join("(" + ",".join(_fmt_frac(x) for x in v) + ")" for v in row))
    return "[" + " ; ".join(rows) + "]"


def format_complex(c: ComplexF) -> str:
    """One line per degree, highest first: ``deg i: L (+) L ; d = [...]``."""
    lines = []
    for i in sorted(c.terms, reverse=True):
        line = f"deg {i}: {c.term(i)}"
        if i in c.diffs:
            line += " ; d = " + format_matrix(c.diffs[i])
        lines.append(line)
    return "\n".join(lines) + "\n"


_DEG = re.compile(r"^deg\s+(-?\d+)\s*:\s*(.*?)(?:\s*;\s*d\s*=\s*\[(.*)\])?\s*$")
_VEC = re.compile(r"\(([^()]*)\)")


def _parse_blocks(body: str, source: FormalModule, target: FormalModule) -> list[list[tuple[Fraction, ...]]]:
    rows = [r.strip() for r in body.split(";")] if body.strip() else []
    if len(rows) != len(target):
        raise ParseError(f"expected {len(target)} matrix rows, found {len(rows)}")
    out = []
    for r in rows:
        vecs = _VEC.findall(r)
        if len(vecs) != len(source):
            raise ParseError(f"expected {len(source)} blocks in row {r!r}")
        try:
            out.append([tuple(Fraction(x.strip()) for x in v.split(",") if x.strip()) for v in vecs])
        except ValueError as e:
            raise ParseError(f"bad number in {r!r}: {e}") from None
    return out


def parse_complex(text: str, cat: CTCategory) -> ComplexF:
    terms: dict[int, FormalModule] = {}
    raw: dict[int, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        m = _DEG.match(line)
        if not m:
            raise ParseError(f"line {lineno}: cannot parse {line!r}")
        i = int(m.group(1))
        names = m.group(2).strip()
        labs = () if names in ("", "0") else tuple(cat.label(s) for s in re.split(r"\s*⊕\s*|\s*\(\+\)\s*", names))
        terms[i] = FormalModule(labs)
        if m.group(3) is not None:
            raw[i] = m.group(3)
    diffs = {}
    for i, body in raw.items():
        src, tgt = terms.get(i, ZERO_MODULE), terms.get(i - 1, ZERO_MODULE)
        diffs[i] = MorphismMatrix(cat, src, tgt, tuple(tuple(r) for r in _parse_blocks(body, src, tgt)))
    return ComplexF(cat, terms, diffs)


def chain_map_space(a: ComplexF, b: ComplexF) -> list[ChainMapF]:
    """A basis of all chain maps a -> b."""
    from .ctcat import from_flat, hom_space_dim, left_compose_matrix, right_compose_matrix
    from .exactlin import kernel_basis
    cat = a.cat
    degs = sorted(set(a.terms) & set(b.terms))
    offs, pos = {}, 0
    for k in degs:
        offs[k] = pos
        pos += hom_space_dim(cat, a.term(k), b.term(k))
    nvars = pos
    eqs = []
    for k in sorted(set(a.terms) | set(b.terms) | {i + 1 for i in b.terms}):
        n = hom_space_dim(cat, a.term(k), b.term(k - 1))
        if not n:
            continue
        rows = [[Fraction(0)] * nvars for _ in range(n)]
        if k in offs:
            m = left_compose_matrix(cat, b.diff(k), a.term(k))
            for i in range(m.rows):
                for j in range(m.cols):
                    rows[i][offs[k] + j] += m[i, j]
        if k - 1 in offs:
            m = right_compose_matrix(cat, a.diff(k), b.term(k - 1))
            for i in range(m.rows):
                for j in range(m.cols):
                    rows[i][offs[k - 1] + j] -= m[i, j]
        eqs += rows
    null = kernel_basis(RatMatrix(len(eqs), nvars, eqs))
    out = []
    for c in range(null.cols):
        v = null.col(c)
        comps = {}
        for k in degs:
            w = hom_space_dim(cat, a.term(k), b.term(k))
            comps[k] = from_flat(cat, a.term(k), b.term(k), v[offs[k]:offs[k] + w])
        out.append(ChainMapF(a, b, comps))
    return out


def combine_chain_maps(a: ComplexF, b: ComplexF, maps: list[ChainMapF], coeffs) -> ChainMapF:
    comps = {}
    for k in set(a.terms) & set(b.terms):
        acc = zero_matrix(a.cat, a.term(k), b.term(k))
        for c, f in zip(coeffs, maps):
            if c:
                acc = acc + f.component(k).scale(c)
        comps[k] = acc
    return ChainMapF(a, b, comps)
