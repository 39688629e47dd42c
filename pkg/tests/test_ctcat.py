import random
from fractions import Fraction

import pytest

from higher_ar.ctcat import (FormalModule, MorphismMatrix, ar_quiver_dot, compose, fold_tensor, homogeneity,
                             identity_matrix, irreducible_dim, is_radical, knit, label_table, sigma,
                             tensor_category, tensor_matrix)
from higher_ar.errors import HeterogeneousFactors, RepInfinite, ShapeMismatch, SliceMismatch
from higher_ar.quiver import QuiverSpec, is_indecomposable


def rand_vec(rng, d):
    return [Fraction(rng.randint(-3, 3)) for _ in range(d)]


def test_a5_labels(a5):
    assert len(a5.labels) == 15
    assert [lab.name for lab in a5.slice_labels(0)] == ["P1", "P2", "P3", "P4", "P5"]
    assert {lab.name for lab in a5.slice_labels(2)} == {"I1", "I2", "I3", "I4", "I5"}
    assert a5.tau_next(a5.label("P2")).name == "M5"
    assert a5.tau_prev(a5.label("M2")).name == "P5"
    assert a5.tau_next(a5.label("I3")) is None
    assert all(is_indecomposable(r) for r in a5.reps.values())


def test_homogeneity():
    assert homogeneity(knit(QuiverSpec(2, ((1, 2),)))) is None
    assert homogeneity(knit(QuiverSpec(1, ()))) == 1
    a3 = knit(QuiverSpec(3, ((1, 2), (3, 2))))
    assert homogeneity(a3) == 2


def test_a5_homogeneous(a5):
    assert homogeneity(a5) == 3 == a5.l
    s = sigma(a5)
    assert s[a5.label("P1")].slice == 2
    assert s[a5.label("P3")].name == "I3"


def test_rep_infinite():
    with pytest.raises(RepInfinite):
        knit(QuiverSpec(2, ((1, 2), (1, 2))))


def test_heterogeneous_factors(a5):
    a2 = knit(QuiverSpec(2, ((1, 2),)))
    with pytest.raises(HeterogeneousFactors):
        tensor_category(a2, a5)


def test_tensor_sizes(a5, a5a5):
    assert len(a5a5.labels) == 75
    assert len(fold_tensor([a5, a5, a5]).labels) == 375
    x, y = a5a5.label("P2(x)P5"), a5a5.label("P1⊗P5")
    assert a5a5.hom_dim(x, y) == 1
    with pytest.raises(SliceMismatch):
        a5a5.pair(a5.label("P2"), a5.label("M5"))


def test_base_validates(a5):
    a5.validate()


def test_tensor_validates_sampled(a5a5):
    a5a5.validate(sample=150, seed=3)


@pytest.mark.parametrize("which", ["base", "tensor"])
def test_compose_matches_realization(a5, a5a5, which):
    cat = a5 if which == "base" else a5a5
    rng = random.Random(11)
    checked = 0
    while checked < 20:
        a, b, c = sorted((rng.choice(cat.labels) for _ in range(3)), key=lambda l: l.slice)
        if not (cat.hom_dim(a, b) and cat.hom_dim(b, c)):
            continue
        f, g = rand_vec(rng, cat.hom_dim(a, b)), rand_vec(rng, cat.hom_dim(b, c))
        lhs = cat.realize_hom(a, c, cat.compose_vec(a, b, c, g, f))
        rhs = cat.realize_hom(b, c, g) @ cat.realize_hom(a, b, f)
        assert lhs == rhs
        checked += 1


def test_morphism_matrices(a5):
    p2, p1, m3 = a5.label("P2"), a5.label("P1"), a5.label("M3")
    src, tgt = FormalModule((p2,)), FormalModule((p1, m3))
    f = MorphismMatrix(a5, src, tgt, (((1,),), ((1,),)))
    assert is_radical(a5, f)
    ident = identity_matrix(a5, tgt)
    assert compose(a5, ident, f) == f
    assert not is_radical(a5, ident)
    assert f.realize().shape == (a5.total_dim(p1) + a5.total_dim(m3), a5.total_dim(p2))
    with pytest.raises(ShapeMismatch):
        MorphismMatrix(a5, src, tgt, (((1, 0),), ((1,),)))
    assert str(tgt) == "P1 ⊕ M3"


def test_tensor_matrix_realizes_as_kron(a5, a5a5):
    from higher_ar.exactlin import kron
    p2, p1, p5, p4 = (a5.label(n) for n in ("P2", "P1", "P5", "P4"))
    f = MorphismMatrix(a5, FormalModule((p2,)), FormalModule((p1,)), (((1,),),))
    g = MorphismMatrix(a5, FormalModule((p4, p5)), FormalModule((p5,)), (((1,), (3,)),))
    fg = tensor_matrix(a5a5, f, g)
    # block (t, s) of f (x) g realizes as the Kronecker product of the factor blocks
    for t, y in enumerate(fg.target):
        for s, x in enumerate(fg.source):
            (xa, xb), (ya, yb) = a5a5.split(x), a5a5.split(y)
            ta, sa = divmod(t, len(g.target))[0], divmod(s, len(g.source))[0]
            tb, sb = t % len(g.target), s % len(g.source)
            expect = kron(a5.realize_hom(xa, ya, f.block(ta, sa)), a5.realize_hom(xb, yb, g.block(tb, sb)))
            assert a5a5.realize_hom(x, y, fg.block(t, s)) == expect


def test_reports(a5):
    table = label_table(a5)
    assert "P1  slice 0  dims (11100)  tau- M4" in table
    dot = ar_quiver_dot(a5)
    assert dot.startswith("digraph")
    solid = [l for l in dot.splitlines() if "->" in l and "dotted" not in l]
    dotted = [l for l in dot.splitlines() if "dotted" in l]
    # the AR quiver of A_n has n(n-1) arrows and one translate per non-injective
    assert len(dotted) == 10
    assert len(solid) == 20
    assert irreducible_dim(a5, a5.label("P2"), a5.label("P1")) == 1
    assert irreducible_dim(a5, a5.label("P3"), a5.label("P1")) == 0


def test_orbits_partition_labels(a5):
    seen = [lab for o in a5.orbits for lab in o]
    assert sorted(seen, key=a5.index) == list(a5.labels)
    for o in a5.orbits:
        assert o[0].name.startswith("P") and o[-1].name.startswith("I")
        assert [lab.slice for lab in o] == list(range(len(o)))


def test_tensor_dimensions_are_products(a5, a5a5):
    from higher_ar.exactlin import RatMatrix, hstack, kron, rank
    for x in a5a5.labels:
        a, b = a5a5.split(x)
        assert a5a5.total_dim(x) == a5.total_dim(a) * a5.total_dim(b)
        for y in a5a5.labels:
            c, d = a5a5.split(y)
            assert a5a5.hom_dim(x, y) == a5.hom_dim(a, c) * a5.hom_dim(b, d)
    rng = random.Random(5)
    for _ in range(40):
        x, y = rng.choice(a5a5.labels), rng.choice(a5a5.labels)
        (a, b), (c, d) = a5a5.split(x), a5a5.split(y)
        h1, h2 = a5.hom_dim(a, c), a5.hom_dim(b, d)
        if not h1 * h2:
            continue
        span = hstack([kron(a5.rad_basis(a, c), RatMatrix.identity(h2)),
                       kron(RatMatrix.identity(h1), a5.rad_basis(b, d))], h1 * h2)
        assert a5a5.rad_dim(x, y) == rank(span)
