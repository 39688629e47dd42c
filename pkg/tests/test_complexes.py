import random

import pytest
from hypothesis import given, settings, strategies as st

from higher_ar import oracle
from higher_ar.complexes import (ChainMapF, ComplexF, LinChainMap, LinComplex, cone, format_complex,
                                 homology_dims, identity_chain_map, is_exact, is_quasi_iso, lin_cone,
                                 parse_complex, realize, realize_map, shift, tensor_chain_map, total_tensor,
                                 zero_complex)
from higher_ar.ctcat import FormalModule, zero_matrix
from higher_ar.errors import ParseError
from higher_ar.exactlin import RatMatrix

seeds = st.integers(0, 10**6)


def rand_complex(cat, seed, slice_=None):
    rng = random.Random(seed)
    s = rng.randrange(cat.slice_count) if slice_ is None else slice_
    return oracle.random_radical_complex(cat, rng, s)


def rand_map(cat, seed, slice_=None):
    rng = random.Random(seed)
    s = rng.randrange(cat.slice_count) if slice_ is None else slice_
    a = oracle.random_radical_complex(cat, rng, s)
    b = oracle.random_radical_complex(cat, rng, s)
    return oracle.random_chain_map(a, b, rng)


def total_homology(c):
    return sum(homology_dims(c).values())


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_random_cones_are_complexes(a5, seed):
    f = rand_map(a5, seed)
    assert f.is_chain_map()
    c = cone(f)
    assert c.is_complex()
    for i in c.degrees():
        assert len(c.term(i)) == len(f.source.term(i - 1)) + len(f.target.term(i))


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(-3, 3))
def test_shift_laws(a5, seed, m):
    c = rand_complex(a5, seed)
    assert shift(shift(c, m), -m) == c
    s = shift(c, m)
    assert s.is_complex()
    assert {i - m: v for i, v in homology_dims(c).items() if v} == {i: v for i, v in homology_dims(s).items() if v}


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_cone_of_zero_map_splits(a5, seed):
    rng = random.Random(seed)
    s = rng.randrange(3)
    a = oracle.random_radical_complex(a5, rng, s)
    b = oracle.random_radical_complex(a5, rng, s)
    zero = ChainMapF(a, b, {i: zero_matrix(a5, a.term(i), b.term(i)) for i in set(a.terms) & set(b.terms)})
    c = cone(zero)
    assert total_homology(c) == total_homology(a) + total_homology(b)
    assert is_exact(c) == (is_exact(a) and is_exact(b))


@settings(max_examples=50, deadline=None)
@given(seeds, seeds, st.integers(0, 2))
def test_tensor_chain_maps(a5, a5a5, s1, s2, slice_):
    f, g = rand_map(a5, s1, slice_), rand_map(a5, s2, slice_)
    fg = tensor_chain_map(f, g, a5a5)
    assert fg.source.is_complex() and fg.target.is_complex()
    assert fg.is_chain_map()
    ident = tensor_chain_map(identity_chain_map(f.source), identity_chain_map(g.source), a5a5)
    assert ident.is_chain_map()
    for i in ident.degrees():
        assert ident.component(i) == identity_chain_map(fg.source).component(i)


def test_realized_dimensions(a5, a5a5):
    assert a5.total_dim(a5.label("P1")) == 3
    assert a5a5.total_dim(a5a5.label("M5⊗M2")) == 4
    c = ComplexF(a5, {0: FormalModule((a5.label("P1"), a5.label("M3")))})
    assert realize(c).dims == {0: 6}


def test_total_tensor_term_counts(a5, a5a5):
    for seed in range(20):
        rng = random.Random(seed)
        s = rng.randrange(3)
        c = oracle.random_radical_complex(a5, rng, s)
        d = oracle.random_radical_complex(a5, rng, s)
        t = total_tensor(c, d, a5a5)
        assert t.is_complex() and t.is_radical()
        for m in t.degrees():
            expect = sum(len(c.term(j)) * len(d.term(m - j)) for j in c.degrees())
            assert len(t.term(m)) == expect
        assert realize(t).dims == {m: sum(realize(c).dim(j) * realize(d).dim(m - j) for j in c.degrees())
                                   for m in t.degrees()}


def test_tensor_with_exact_factor_is_exact(a5, a5a5):
    from higher_ar.ctcat import identity_matrix
    p1 = FormalModule((a5.label("P1"),))
    ex = ComplexF(a5, {1: p1, 0: p1}, {1: identity_matrix(a5, p1)})
    assert is_exact(ex)
    for seed in range(5):
        c = rand_complex(a5, seed, 0)
        assert is_exact(total_tensor(c, ex, a5a5))
        assert is_exact(total_tensor(ex, c, a5a5))


def test_lin_complex_homology():
    d = RatMatrix.from_rows([[1], [1]])
    c = LinComplex({1: 1, 0: 2}, {1: d})
    assert c.is_complex()
    assert c.homology_dims() == {1: 0, 0: 1}
    f = LinChainMap(c, c, {1: RatMatrix.identity(1), 0: RatMatrix.identity(2)})
    assert f.is_chain_map()
    assert lin_cone(f).is_exact()


def test_quasi_iso_of_identity(a5):
    c = rand_complex(a5, 5)
    assert is_quasi_iso(identity_chain_map(c))
    assert oracle.induced_homology_iso(realize_map(identity_chain_map(c)))


def test_format_parse_roundtrip(a5):
    for seed in range(10):
        c = rand_complex(a5, seed)
        text = format_complex(c)
        assert parse_complex(text, a5) == c
        assert parse_complex(text.replace("⊕", "(+)"), a5) == c


def test_zero_complex_and_parse_errors(a5):
    assert format_complex(zero_complex(a5)) == "\n"
    assert zero_complex(a5).support is None
    with pytest.raises(ParseError):
        parse_complex("degree 0: P1", a5)
    with pytest.raises(ParseError):
        parse_complex("deg 1: P2 ; d = [(1) (1)]\ndeg 0: P1", a5)


def test_tensor_preserves_quasi_isos_and_radical_maps(a5, a5a5):
    from higher_ar.almostsplit import base_pair
    rng = random.Random(7)
    for _ in range(10):
        c = rand_complex(a5, rng.randrange(10**6), 0)
        d = rand_complex(a5, rng.randrange(10**6), 0)
        f = identity_chain_map(c).scale(2)
        g = identity_chain_map(d).scale(-1)
        assert is_quasi_iso(f) and is_quasi_iso(g)
        assert is_quasi_iso(tensor_chain_map(f, g, a5a5))
    phi = base_pair(a5, a5.label("P2")).phi
    psi = base_pair(a5, a5.label("P5")).phi
    assert phi.is_radical() and psi.is_radical()
    assert tensor_chain_map(phi, psi, a5a5).is_radical()
