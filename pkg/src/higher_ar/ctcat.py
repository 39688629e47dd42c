"""Cluster tilting categories presented by labelled indecomposables.

A :class:`CTCategory` stores, for each ordered pair of labels, the dimension
of the Hom space in a fixed basis, the radical as a subspace of coefficient
vectors, and composition structure constants.  Base categories come from
knitting the preprojective component of a Dynkin quiver; tensor categories are
built from two existing categories and keep flat factor lists.
"""
from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import HeterogeneousFactors, ParseError, RepInfinite, ShapeMismatch, SliceMismatch
from .exactlin import RatMatrix, column_basis, hstack, kron, rank, solve
from .quiver import (QuiverSpec, Representation, RepMorphism, _rad_coefficients, combine,
                     find_isomorphism, hom_basis, injective, projective, tau_minus)

TENSOR = "⊗"
ASCII_TENSOR = "(x)"

Entries = tuple[tuple[int, int, int, Fraction], ...]  # (k, j, i, c): g_j o f_i = sum c h_k


@dataclass(frozen=True)
class IndLabel:
    name: str
    slice: int
    factors: tuple[IndLabel, ...] = ()

    @property
    def parts(self) -> tuple[IndLabel, ...]:
        """Flat factor list; a base label is its own single factor."""
        return self.factors or (self,)

    def __str__(self) -> str:
        return self.name


def _natural_key(name: str):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", name)]


def _dynkin_bound(n: int) -> int:
    # number of positive roots is maximal for E_n when 6 <= n <= 8, else for D_n
    exceptional = {6: 36, 7: 63, 8: 120}
    return max(n * (n + 1) // 2, n * (n - 1), exceptional.get(n, 0))


class CTCategory:
    """Finite additive category given by labels, Hom bases and structure constants.

    Subclasses supply ``_hom_dim``, ``_rad``, ``_comp``, ``_identity`` and the
    realization hooks; the base class memoizes them.
    """

    def __init__(self, name: str, labels: Sequence[IndLabel], n: int,
                 orbits: Sequence[Sequence[IndLabel]]):
        self.name = name
        self.labels = tuple(labels)
        self.n = n
        self.orbits = tuple(tuple(o) for o in orbits)
        self._index = {lab.name: k for k, lab in enumerate(self.labels)}
        if len(self._index) != len(self.labels):
            raise ValueError("label names must be unique")
        self._next: dict[IndLabel, IndLabel] = {}
        for orb in self.orbits:
            for a, b in zip(orb, orb[1:]):
                self._next[a] = b
        self._prev = {b: a for a, b in self._next.items()}
        self._hom_cache: dict = {}
        self._rad_cache: dict = {}
        self._comp_cache: dict = {}
        self._id_cache: dict = {}

    # labels ---------------------------------------------------------------

    def label(self, name: str) -> IndLabel:
        name = name.strip().replace(ASCII_TENSOR, TENSOR)
        name = TENSOR.join(p.strip() for p in name.split(TENSOR))
        try:
            return self.labels[self._index[name]]
        except KeyError:
            raise ParseError(f"unknown label {name!r} in category {self.name}") from None

    def index(self, lab: IndLabel) -> int:
        return self._index[lab.name]

    def __contains__(self, lab: IndLabel) -> bool:
        k = self._index.get(lab.name)
        return k is not None and self.labels[k] == lab

    @property
    def slice_count(self) -> int:
        return 1 + max(lab.slice for lab in self.labels)

    def slice_labels(self, s: int) -> list[IndLabel]:
        return [lab for lab in self.labels if lab.slice == s]

    def tau_next(self, lab: IndLabel) -> IndLabel | None:
        """tau^- on labels; None on injectives."""
        return self._next.get(lab)

    def tau_prev(self, lab: IndLabel) -> IndLabel | None:
        return self._prev.get(lab)

    @property
    def l(self) -> int | None:
        return homogeneity(self)

    # cached structure -----------------------------------------------------

    def hom_dim(self, a: IndLabel, b: IndLabel) -> int:
        key = (a, b)
        d = self._hom_cache.get(key)
        if d is None:
            d = self._hom_cache[key] = self._hom_dim(a, b)
        return d

    def rad_basis(self, a: IndLabel, b: IndLabel) -> RatMatrix:
        """Columns: coefficient vectors spanning rad(a, b) inside hom(a, b)."""
        key = (a, b)
        r = self._rad_cache.get(key)
        if r is None:
            if a != b:
                r = RatMatrix.identity(self.hom_dim(a, b))
            else:
                r = self._rad(a)
            self._rad_cache[key] = r
        return r

    def rad_dim(self, a: IndLabel, b: IndLabel) -> int:
        return self.rad_basis(a, b).cols

    def comp(self, a: IndLabel, b: IndLabel, c: IndLabel) -> Entries:
        """Structure constants of hom(b, c) x hom(a, b) -> hom(a, c)."""
        key = (a, b, c)
        e = self._comp_cache.get(key)
        if e is None:
            if self.hom_dim(a, b) == 0 or self.hom_dim(b, c) == 0 or self.hom_dim(a, c) == 0:
                e = ()
            else:
                e = self._comp(a, b, c)
            self._comp_cache[key] = e
        return e

    def identity_vec(self, a: IndLabel) -> tuple[Fraction, ...]:
        v = self._id_cache.get(a)
        if v is None:
            v = self._id_cache[a] = self._identity(a)
        return v

    def compose_vec(self, a: IndLabel, b: IndLabel, c: IndLabel, g: Sequence, f: Sequence) -> tuple[Fraction, ...]:
        out = [Fraction(0)] * self.hom_dim(a, c)
        if not any(g) or not any(f):
            return tuple(out)
        for k, j, i, val in self.comp(a, b, c):
            gj, fi = g[j], f[i]
            if gj and fi:
                out[k] += val * gj * fi
        return tuple(out)

    def post_matrix(self, x: IndLabel, b: IndLabel, c: IndLabel, g: Sequence) -> RatMatrix:
        """Matrix of f -> g o f from hom(x, b) to hom(x, c)."""
        rows = [[Fraction(0)] * self.hom_dim(x, b) for _ in range(self.hom_dim(x, c))]
        if any(g):
            for k, j, i, val in self.comp(x, b, c):
                if g[j]:
                    rows[k][i] += val * g[j]
        return RatMatrix(self.hom_dim(x, c), self.hom_dim(x, b), rows)

    def pre_matrix(self, a: IndLabel, b: IndLabel, x: IndLabel, f: Sequence) -> RatMatrix:
        """Matrix of h -> h o f from hom(b, x) to hom(a, x)."""
        rows = [[Fraction(0)] * self.hom_dim(b, x) for _ in range(self.hom_dim(a, x))]
        if any(f):
            for k, j, i, val in self.comp(a, b, x):
                if f[i]:
                    rows[k][j] += val * f[i]
        return RatMatrix(self.hom_dim(a, x), self.hom_dim(b, x), rows)

    def in_rad(self, a: IndLabel, b: IndLabel, vec: Sequence) -> bool:
        if a != b:
            return True
        r = self.rad_basis(a, b)
        return solve(r, RatMatrix.column(vec)) is not None

    # realization ------------------------------------------------------------

    def total_dim(self, a: IndLabel) -> int:
        raise NotImplementedError

    def realize_basis(self, a: IndLabel, b: IndLabel) -> list[RatMatrix]:
        """Hom basis of (a, b) as matrices between the total spaces."""
        raise NotImplementedError

    def realize_hom(self, a: IndLabel, b: IndLabel, vec: Sequence) -> RatMatrix:
        acc = RatMatrix(self.total_dim(b), self.total_dim(a))
        for c, m in zip(vec, self.realize_basis(a, b)):
            if c:
                acc = acc + m.scale(c)
        return acc

    def dims_string(self, a: IndLabel) -> str:
        raise NotImplementedError

    # subclass hooks
    def _hom_dim(self, a, b) -> int:
        raise NotImplementedError

    def _rad(self, a) -> RatMatrix:
        raise NotImplementedError

    def _comp(self, a, b, c) -> Entries:
        raise NotImplementedError

    def _identity(self, a) -> tuple[Fraction, ...]:
        raise NotImplementedError

    # checks -----------------------------------------------------------------

    def validate(self, sample: int | None = None, seed: int = 0) -> None:
        """Check slice vanishing, radical dimensions, identities and associativity.

        With ``sample=None`` every pair, triple and quadruple is examined;
        otherwise ``sample`` random tuples of each kind.
        """
        labs = self.labels
        rng = random.Random(seed)

        def tuples(k):
            if sample is None:
                return itertools.product(labs, repeat=k)
            return (tuple(rng.choice(labs) for _ in range(k)) for _ in range(sample))

        for a, b in tuples(2):
            if a.slice > b.slice and self.hom_dim(a, b):
                raise AssertionError(f"hom({a},{b}) nonzero across slices")
            if a == b and self.rad_dim(a, a) != self.hom_dim(a, a) - 1:
                raise AssertionError(f"rad({a},{a}) has the wrong dimension")
        for a, b in tuples(2):
            ida, idb = self.identity_vec(a), self.identity_vec(b)
            for i in range(self.hom_dim(a, b)):
                e = tuple(Fraction(int(k == i)) for k in range(self.hom_dim(a, b)))
                if self.compose_vec(a, b, b, idb, e) != e or self.compose_vec(a, a, b, e, ida) != e:
                    raise AssertionError(f"identity law fails on hom({a},{b})")
        for a, b, c, d in tuples(4):
            dab, dbc, dcd = self.hom_dim(a, b), self.hom_dim(b, c), self.hom_dim(c, d)
            if not (dab and dbc and dcd):
                continue
            for i, j, k in itertools.product(range(dab), range(dbc), range(dcd)):
                f = _unit(dab, i)
                g = _unit(dbc, j)
                h = _unit(dcd, k)
                lhs = self.compose_vec(a, c, d, h, self.compose_vec(a, b, c, g, f))
                rhs = self.compose_vec(a, b, d, self.compose_vec(b, c, d, h, g), f)
                if lhs != rhs:
                    raise AssertionError(f"associativity fails on {a},{b},{c},{d}")
        counts = {len(self.slice_labels(s)) for s in range(self.slice_count)}
        if homogeneity(self) is not None and len(counts) != 1:
            raise AssertionError("slices have different sizes")

    def __repr__(self) -> str:
        return f"CTCategory({self.name}, {len(self.labels)} labels, n={self.n})"


def _unit(d: int, i: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(int(k == i)) for k in range(d))


# ---------------------------------------------------------------------------
# base categories


class BaseCategory(CTCategory):
    """The category of all indecomposables over a Dynkin path algebra (n = 1)."""

    def __init__(self, quiver: QuiverSpec, labels, orbits, reps: dict[IndLabel, Representation]):
        super().__init__(quiver.name, labels, 1, orbits)
        self.quiver = quiver
        self.reps = reps
        self._basis: dict[tuple[IndLabel, IndLabel], list[RepMorphism]] = {}
        self._total: dict[tuple[IndLabel, IndLabel], list[RatMatrix]] = {}
        self._flat: dict[tuple[IndLabel, IndLabel], RatMatrix] = {}
        for a in self.labels:
            for b in self.labels:
                hb = hom_basis(reps[a], reps[b])
                self._basis[(a, b)] = hb
                self._hom_cache[(a, b)] = len(hb)

    def hom_morphisms(self, a: IndLabel, b: IndLabel) -> list[RepMorphism]:
        return self._basis[(a, b)]

    def coordinates(self, f: RepMorphism, a: IndLabel, b: IndLabel) -> tuple[Fraction, ...]:
        """Coefficients of a morphism reps[a] -> reps[b] in the cached basis."""
        key = (a, b)
        m = self._flat.get(key)
        if m is None:
            basis = self._basis[key]
            m = self._flat[key] = RatMatrix.from_columns([h.flat() for h in basis], len(f.flat()))
        x = solve(m, RatMatrix.column(f.flat()))
        if x is None:
            raise ValueError(f"morphism is not in hom({a},{b})")
        return x.col(0)

    def morphism(self, a: IndLabel, b: IndLabel, vec: Sequence) -> RepMorphism:
        return combine(self._basis[(a, b)], vec, self.reps[a], self.reps[b])

    def _hom_dim(self, a, b):
        return len(self._basis[(a, b)])

    def _rad(self, a):
        hb = self._basis[(a, a)]
        return _rad_coefficients(hb, hb)

    def _comp(self, a, b, c):
        out = []
        for j, g in enumerate(self._basis[(b, c)]):
            for i, f in enumerate(self._basis[(a, b)]):
                vec = self.coordinates(g @ f, a, c)
                out += [(k, j, i, v) for k, v in enumerate(vec) if v]
        return tuple(out)

    def _identity(self, a):
        from .quiver import identity
        return self.coordinates(identity(self.reps[a]), a, a)

    def total_dim(self, a):
        return self.reps[a].total_dim

    def realize_basis(self, a, b):
        key = (a, b)
        t = self._total.get(key)
        if t is None:
            t = self._total[key] = [h.total_matrix() for h in self._basis[key]]
        return t

    def dims_string(self, a):
        return "(" + "".join(str(d) for d in self.reps[a].dims) + ")"


def knit(q: QuiverSpec) -> BaseCategory:
    """All indecomposables as tau^- orbits of the projectives, sliced by orbit position."""
    bound = _dynkin_bound(q.vertex_count)
    injs = [injective(q, i) for i in q.vertices]
    overrides = {dims: name for name, dims in q.labels}
    raw_orbits: list[list[tuple[Representation, int | None]]] = []
    total = 0
    for i in q.vertices:
        x = projective(q, i)
        orbit = []
        while True:
            inj = next((j for j, r in enumerate(injs, 1)
                        if r.dims == x.dims and find_isomorphism(r, x) is not None), None)
            orbit.append((x, inj))
            total += 1
            if total > bound:
                raise RepInfinite(f"more than {bound} indecomposables: quiver is not Dynkin")
            if inj is not None:
                break
            x = tau_minus(x)
        raw_orbits.append(orbit)

    longest = max(len(o) for o in raw_orbits)
    names: dict[tuple[int, int], str] = {}
    m_count = 0
    for s in range(longest):
        for o, orbit in enumerate(raw_orbits):
            if s >= len(orbit):
                continue
            rep, inj = orbit[s]
            if rep.dims in overrides:
                names[(o, s)] = overrides[rep.dims]
            elif s == 0:
                names[(o, s)] = f"P{o + 1}"
            elif inj is not None:
                names[(o, s)] = f"I{inj}"
            else:
                m_count += 1
                names[(o, s)] = f"M{m_count}"

    reps: dict[IndLabel, Representation] = {}
    orbits = []
    for o, orbit in enumerate(raw_orbits):
        labs = []
        for s, (rep, _) in enumerate(orbit):
            lab = IndLabel(names[(o, s)], s)
            reps[lab] = rep
            labs.append(lab)
        orbits.append(labs)
    labels = sorted(reps, key=lambda lab: (lab.slice, _natural_key(lab.name)))
    return BaseCategory(q, labels, orbits, reps)


def homogeneity(c: CTCategory) -> int | None:
    lengths = {len(o) for o in c.orbits}
    return lengths.pop() if len(lengths) == 1 else None


def sigma(c: CTCategory) -> dict[IndLabel, IndLabel]:
    """Projective label -> injective label ending its orbit."""
    return {o[0]: o[-1] for o in c.orbits}


# ---------------------------------------------------------------------------
# tensor categories


class TensorCategory(CTCategory):
    """Labels a (x) b with slice(a) = slice(b); everything else factorwise."""

    def __init__(self, left: CTCategory, right: CTCategory):
        la, lb = homogeneity(left), homogeneity(right)
        if la is None or lb is None or la != lb:
            raise HeterogeneousFactors(
                f"factors must be homogeneous with equal l (got {la} and {lb})")
        self.left, self.right = left, right
        self._split: dict[IndLabel, tuple[IndLabel, IndLabel]] = {}
        labels = []
        for s in range(la):
            for a in left.slice_labels(s):
                for b in right.slice_labels(s):
                    lab = _tensor_label(a, b)
                    self._split[lab] = (a, b)
                    labels.append(lab)
        self._pair = {v: k for k, v in self._split.items()}
        orbits = []
        for oa in left.orbits:
            for ob in right.orbits:
                orbits.append([self._pair[(a, b)] for a, b in zip(oa, ob)])
        orbits.sort(key=lambda o: labels.index(o[0]))
        super().__init__(f"{left.name}{TENSOR}{right.name}", labels, left.n + right.n, orbits)

    def split(self, lab: IndLabel) -> tuple[IndLabel, IndLabel]:
        return self._split[lab]

    def pair(self, a: IndLabel, b: IndLabel) -> IndLabel:
        try:
            return self._pair[(a, b)]
        except KeyError:
            raise SliceMismatch(f"{a}{TENSOR}{b} is not a label: slices {a.slice} and {b.slice}") from None

    def _hom_dim(self, x, y):
        (a, b), (c, d) = self._split[x], self._split[y]
        return self.left.hom_dim(a, c) * self.right.hom_dim(b, d)

    def _rad(self, x):
        a, b = self._split[x]
        L, R = self.left, self.right
        ha, hb = L.hom_dim(a, a), R.hom_dim(b, b)
        span = hstack([kron(L.rad_basis(a, a), RatMatrix.identity(hb)),
                       kron(RatMatrix.identity(ha), R.rad_basis(b, b))], ha * hb)
        return column_basis(span)

    def _comp(self, x, y, z):
        (a, b), (c, d), (e, f) = self._split[x], self._split[y], self._split[z]
        ea, eb = self.left.comp(a, c, e), self.right.comp(b, d, f)
        if not ea or not eb:
            return ()
        n_df, n_bd, n_bf = self.right.hom_dim(d, f), self.right.hom_dim(b, d), self.right.hom_dim(b, f)
        return tuple((k1 * n_bf + k2, j1 * n_df + j2, i1 * n_bd + i2, v1 * v2)
                     for k1, j1, i1, v1 in ea for k2, j2, i2, v2 in eb)

    def _identity(self, x):
        a, b = self._split[x]
        ia, ib = self.left.identity_vec(a), self.right.identity_vec(b)
        return tuple(u * v for u in ia for v in ib)

    def total_dim(self, x):
        a, b = self._split[x]
        return self.left.total_dim(a) * self.right.total_dim(b)

    def realize_basis(self, x, y):
        (a, c), (b, d) = self._split[x], self._split[y]
        return [kron(f, g) for f in self.left.realize_basis(a, b) for g in self.right.realize_basis(c, d)]

    def dims_string(self, x):
        a, b = self._split[x]
        return self.left.dims_string(a) + TENSOR + self.right.dims_string(b)

    @property
    def base_factors(self) -> tuple[CTCategory, ...]:
        return _base_factors(self.left) + _base_factors(self.right)


def _base_factors(c: CTCategory) -> tuple[CTCategory, ...]:
    return c.base_factors if isinstance(c, TensorCategory) else (c,)


def _tensor_label(a: IndLabel, b: IndLabel) -> IndLabel:
    if a.slice != b.slice:
        raise SliceMismatch(f"{a} and {b} lie in different slices")
    return IndLabel(a.name + TENSOR + b.name, a.slice, a.parts + b.parts)


_TENSOR_MEMO: dict[tuple[int, int], TensorCategory] = {}


def tensor_category(ca: CTCategory, cb: CTCategory) -> TensorCategory:
    """Memoized on the identity of the two factors so that repeated calls share caches."""
    key = (id(ca), id(cb))
    hit = _TENSOR_MEMO.get(key)
    if hit is not None and hit.left is ca and hit.right is cb:
        return hit
    t = TensorCategory(ca, cb)
    _TENSOR_MEMO[key] = t
    return t


def fold_tensor(cats: Sequence[CTCategory]) -> CTCategory:
    out = cats[0]
    for c in cats[1:]:
        out = tensor_category(out, c)
    return out


# ---------------------------------------------------------------------------
# formal modules and morphism matrices


@dataclass(frozen=True)
class FormalModule:
    summands: tuple[IndLabel, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "summands", tuple(self.summands))

    def __len__(self) -> int:
        return len(self.summands)

    def __iter__(self):
        return iter(self.summands)

    def __getitem__(self, k: int) -> IndLabel:
        return self.summands[k]

    def __add__(self, other: FormalModule) -> FormalModule:
        return FormalModule(self.summands + other.summands)

    def is_zero(self) -> bool:
        return not self.summands

    def __str__(self) -> str:
        return " ⊕ ".join(s.name for s in self.summands) if self.summands else "0"


ZERO_MODULE = FormalModule(())


@dataclass(frozen=True, eq=False)
class MorphismMatrix:
    cat: CTCategory
    source: FormalModule
    target: FormalModule
    blocks: tuple[tuple[tuple[Fraction, ...], ...], ...]  # blocks[t][s]

    def __post_init__(self):
        blocks = tuple(tuple(tuple(Fraction(x) for x in v) for v in row) for row in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if len(blocks) != len(self.target) or any(len(r) != len(self.source) for r in blocks):
            raise ShapeMismatch("block grid does not match the summand counts")
        for t, b in enumerate(self.target):
            for s, a in enumerate(self.source):
                if len(blocks[t][s]) != self.cat.hom_dim(a, b):
                    raise ShapeMismatch(f"block ({t},{s}) has length {len(blocks[t][s])}, "
                                        f"hom({a},{b}) has dimension {self.cat.hom_dim(a, b)}")

    def block(self, t: int, s: int) -> tuple[Fraction, ...]:
        return self.blocks[t][s]

    def __eq__(self, other) -> bool:
        if not isinstance(other, MorphismMatrix):
            return NotImplemented
        return (self.cat is other.cat and self.source == other.source
                and self.target == other.target and self.blocks == other.blocks)

    def __hash__(self):
        return hash((self.source, self.target, self.blocks))

    def is_zero(self) -> bool:
        return all(not any(v) for row in self.blocks for v in row)

    def __add__(self, other: MorphismMatrix) -> MorphismMatrix:
        if self.source != other.source or self.target != other.target:
            raise ShapeMismatch("sum of morphisms with different source or target")
        return MorphismMatrix(self.cat, self.source, self.target,
                              tuple(tuple(tuple(x + y for x, y in zip(u, v)) for u, v in zip(r1, r2))
                                    for r1, r2 in zip(self.blocks, other.blocks)))

    def scale(self, c) -> MorphismMatrix:
        c = Fraction(c)
        return MorphismMatrix(self.cat, self.source, self.target,
                              tuple(tuple(tuple(c * x for x in v) for v in row) for row in self.blocks))

    def __neg__(self) -> MorphismMatrix:
        return self.scale(-1)

    def __sub__(self, other: MorphismMatrix) -> MorphismMatrix:
        return self + (-other)

    def __matmul__(self, other: MorphismMatrix) -> MorphismMatrix:
        return compose(self.cat, self, other)

    def with_block(self, t: int, s: int, vec: Sequence) -> MorphismMatrix:
        rows = [list(r) for r in self.blocks]
        rows[t][s] = tuple(vec)
        return MorphismMatrix(self.cat, self.source, self.target, tuple(tuple(r) for r in rows))

    def flat(self) -> tuple[Fraction, ...]:
        """Coefficient vector, row-major over (t, s)."""
        return tuple(x for row in self.blocks for v in row for x in v)

    def realize(self) -> RatMatrix:
        c = self.cat
        rows = []
        for t, b in enumerate(self.target):
            rows.append(hstack([c.realize_hom(a, b, self.blocks[t][s]) for s, a in enumerate(self.source)],
                               c.total_dim(b)))
        from .exactlin import vstack
        return vstack(rows, sum(c.total_dim(a) for a in self.source))

    def __repr__(self) -> str:
        return f"MorphismMatrix({self.source} -> {self.target})"


def zero_matrix(cat: CTCategory, source: FormalModule, target: FormalModule) -> MorphismMatrix:
    return MorphismMatrix(cat, source, target,
                          tuple(tuple((Fraction(0),) * cat.hom_dim(a, b) for a in source) for b in target))


def identity_matrix(cat: CTCategory, m: FormalModule) -> MorphismMatrix:
    return MorphismMatrix(cat, m, m, tuple(
        tuple(cat.identity_vec(a) if s == t else (Fraction(0),) * cat.hom_dim(a, b)
              for s, a in enumerate(m)) for t, b in enumerate(m)))


def compose(cat: CTCategory, g: MorphismMatrix, f: MorphismMatrix) -> MorphismMatrix:
    """g o f."""
    if f.target != g.source:
        raise ShapeMismatch(f"cannot compose: {f.target} is not {g.source}")
    blocks = []
    for t, c in enumerate(g.target):
        row = []
        for s, a in enumerate(f.source):
            acc = [Fraction(0)] * cat.hom_dim(a, c)
            for m, b in enumerate(f.target):
                v = cat.compose_vec(a, b, c, g.blocks[t][m], f.blocks[m][s])
                for k, x in enumerate(v):
                    if x:
                        acc[k] += x
            row.append(tuple(acc))
        blocks.append(tuple(row))
    return MorphismMatrix(cat, f.source, g.target, tuple(blocks))


def is_radical(cat: CTCategory, f: MorphismMatrix) -> bool:
    return all(cat.in_rad(a, b, f.blocks[t][s])
               for t, b in enumerate(f.target) for s, a in enumerate(f.source) if a == b)


def assemble(cat: CTCategory, source_parts: Sequence[FormalModule], target_parts: Sequence[FormalModule],
             grid: Sequence[Sequence[MorphismMatrix | None]]) -> MorphismMatrix:
    """Block matrix between concatenated modules; ``grid[t][s]`` maps part s to part t (None = 0)."""
    source = FormalModule(tuple(x for p in source_parts for x in p))
    target = FormalModule(tuple(x for p in target_parts for x in p))
    rows = []
    for t, tp in enumerate(target_parts):
        for ti, b in enumerate(tp):
            row = []
            for s, sp in enumerate(source_parts):
                m = grid[t][s]
                if m is not None and (m.source != sp or m.target != tp):
                    raise ShapeMismatch(f"grid entry ({t},{s}) has the wrong source or target")
                for si, a in enumerate(sp):
                    row.append(m.blocks[ti][si] if m is not None else (Fraction(0),) * cat.hom_dim(a, b))
            rows.append(tuple(row))
    return MorphismMatrix(cat, source, target, tuple(rows))


def tensor_matrix(tc: TensorCategory, f: MorphismMatrix, g: MorphismMatrix) -> MorphismMatrix:
    """f (x) g, summands ordered f-summand-major."""
    def pairs(m1: FormalModule, m2: FormalModule) -> FormalModule:
        return FormalModule(tuple(tc.pair(a, b) for a in m1 for b in m2))

    source, target = pairs(f.source, g.source), pairs(f.target, g.target)
    nf, ng = len(f.source), len(g.source)
    out = []
    for row_f in range(len(f.target)):
        for row_g in range(len(g.target)):
            row = []
            for sf in range(nf):
                for sg in range(ng):
                    p, q = f.blocks[row_f][sf], g.blocks[row_g][sg]
                    row.append(tuple(x * y for x in p for y in q))
            out.append(tuple(row))
    return MorphismMatrix(tc, source, target, tuple(out))


# ---------------------------------------------------------------------------
# reports


def label_table(cat: CTCategory) -> str:
    lines = []
    width = max(len(lab.name) for lab in cat.labels)
    for lab in cat.labels:
        nxt = cat.tau_next(lab)
        lines.append(f"{lab.name:<{width}}  slice {lab.slice}  dims {cat.dims_string(lab)}"
                     f"  tau- {nxt.name if nxt else '-'}")
    return "\n".join(lines) + "\n"


def slice_listing(cat: CTCategory) -> str:
    return "".join(f"slice {s}: " + " ".join(lab.name for lab in cat.slice_labels(s)) + "\n"
                   for s in range(cat.slice_count))


def irreducible_dim(cat: CTCategory, a: IndLabel, b: IndLabel) -> int:
    """dim rad(a,b) / rad^2(a,b)."""
    r = cat.rad_dim(a, b)
    if r == 0:
        return 0
    cols = []
    for c in cat.labels:
        if c.slice < a.slice or c.slice > b.slice:
            continue
        r1, r2 = cat.rad_basis(a, c), cat.rad_basis(c, b)
        for i in range(r1.cols):
            for j in range(r2.cols):
                cols.append(cat.compose_vec(a, c, b, r2.col(j), r1.col(i)))
    return r - (rank(RatMatrix.from_columns(cols, cat.hom_dim(a, b))) if cols else 0)


def ar_quiver_dot(cat: CTCategory) -> str:
    def q(s: str) -> str:
        return '"' + s.replace('"', '\\"') + '"'

    lines = [f"digraph {q(cat.name)} {{", "  rankdir=LR;"]
    for lab in cat.labels:
        lines.append(f"  {q(lab.name)} [label={q(lab.name + ' ' + cat.dims_string(lab))}];")
    for a in cat.labels:
        for b in cat.labels:
            if a.slice <= b.slice and a != b:
                k = irreducible_dim(cat, a, b)
                for _ in range(k):
                    lines.append(f"  {q(a.name)} -> {q(b.name)};")
    for a in cat.labels:
        b = cat.tau_next(a)
        if b is not None:
            lines.append(f"  {q(a.name)} -> {q(b.name)} [style=dotted];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Hom between formal modules in flat coordinates (row-major over (t, s))


def hom_space_dim(cat: CTCategory, m: FormalModule, n: FormalModule) -> int:
    return sum(cat.hom_dim(a, b) for b in n for a in m)


def from_flat(cat: CTCategory, m: FormalModule, n: FormalModule, vec) -> MorphismMatrix:
    vec = list(vec)
    pos = 0
    rows = []
    for b in n:
        row = []
        for a in m:
            d = cat.hom_dim(a, b)
            row.append(tuple(vec[pos:pos + d]))
            pos += d
        rows.append(tuple(row))
    if pos != len(vec):
        raise ShapeMismatch("flat vector has the wrong length")
    return MorphismMatrix(cat, m, n, tuple(rows))


def _offsets(cat: CTCategory, m: FormalModule, n: FormalModule) -> dict[tuple[int, int], int]:
    out = {}
    pos = 0
    for t, b in enumerate(n):
        for s, a in enumerate(m):
            out[(t, s)] = pos
            pos += cat.hom_dim(a, b)
    return out


def left_compose_matrix(cat: CTCategory, g: MorphismMatrix, w: FormalModule) -> RatMatrix:
    """Matrix of f -> g o f from Hom(w, g.source) to Hom(w, g.target)."""
    src_off = _offsets(cat, w, g.source)
    tgt_off = _offsets(cat, w, g.target)
    rows = [[Fraction(0)] * hom_space_dim(cat, w, g.source) for _ in range(hom_space_dim(cat, w, g.target))]
    for t, c in enumerate(g.target):
        for m, b in enumerate(g.source):
            gv = g.blocks[t][m]
            if not any(gv):
                continue
            for s, a in enumerate(w):
                blk = cat.post_matrix(a, b, c, gv)
                r0, c0 = tgt_off[(t, s)], src_off[(m, s)]
                for i in range(blk.rows):
                    for j in range(blk.cols):
                        if blk[i, j]:
                            rows[r0 + i][c0 + j] += blk[i, j]
    return RatMatrix(len(rows), hom_space_dim(cat, w, g.source), rows)


def right_compose_matrix(cat: CTCategory, f: MorphismMatrix, z: FormalModule) -> RatMatrix:
    """Matrix of h -> h o f from Hom(f.target, z) to Hom(f.source, z)."""
    src_off = _offsets(cat, f.target, z)
    tgt_off = _offsets(cat, f.source, z)
    rows = [[Fraction(0)] * hom_space_dim(cat, f.target, z) for _ in range(hom_space_dim(cat, f.source, z))]
    for m, b in enumerate(f.target):
        for s, a in enumerate(f.source):
            fv = f.blocks[m][s]
            if not any(fv):
                continue
            for t, c in enumerate(z):
                blk = cat.pre_matrix(a, b, c, fv)
                r0, c0 = tgt_off[(t, s)], src_off[(t, m)]
                for i in range(blk.rows):
                    for j in range(blk.cols):
                        if blk[i, j]:
                            rows[r0 + i][c0 + j] += blk[i, j]
    return RatMatrix(len(rows), hom_space_dim(cat, f.target, z), rows)
