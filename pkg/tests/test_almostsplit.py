from fractions import Fraction

import pytest

from higher_ar.almostsplit import (G_exact_all, apply_F, apply_F_tilde, apply_G, base_pair,
                                   build_base_sequence, criterion_holds, extract_chain_map, hom_complex,
                                   homotopy_square_equiv, slice_decompose, tensor_almost_split,
                                   verify_almost_split)
from higher_ar.complexes import ChainMapF, ComplexF, cone, identity_chain_map, lin_cone
from higher_ar.ctcat import FormalModule, compose, identity_matrix
from higher_ar.errors import Injective, NonRadicalTail, NotRadical, SliceLeak, SliceMismatch

# middle terms of the ten almost split sequences of A5, frozen from the construction
# and cross-checked below by additivity of dimension vectors
MIDDLES = {
    "P1": ("M4", ["M5"]), "P2": ("M5", ["P1", "M3"]), "P3": ("M3", ["P2", "P4"]),
    "P4": ("M1", ["P5", "M3"]), "P5": ("M2", ["M1"]), "M1": ("I2", ["M2", "I3"]),
    "M2": ("I1", ["I2"]), "M3": ("I3", ["M1", "M5"]), "M4": ("I5", ["I4"]),
    "M5": ("I4", ["M4", "I3"]),
}


def names(m):
    return [x.name for x in m]


def vec(x):
    return tuple(Fraction(v) for v in x)


@pytest.fixture(scope="module")
def seqs(a5):
    return {x.name: build_base_sequence(a5, x) for x in a5.labels if a5.tau_next(x) is not None}


@pytest.fixture(scope="module")
def e_seq(a5):
    return tensor_almost_split(base_pair(a5, a5.label("P2")), base_pair(a5, a5.label("P5")))


def test_base_sequence_terms(a5, seqs):
    assert set(seqs) == set(MIDDLES)
    for start, (end, middle) in MIDDLES.items():
        c = seqs[start].complex
        assert names(c.term(2)) == [start]
        assert names(c.term(0)) == [end]
        assert sorted(names(c.term(1))) == sorted(middle)
        dims = [sum(a5.reps[x].dims[v] for x in c.term(i)) for i in (2, 1, 0) for v in range(5)]
        for v in range(5):
            assert dims[v] + dims[10 + v] == dims[5 + v]


def test_base_sequences_verify(seqs):
    for s in seqs.values():
        rep = s.report or verify_almost_split(s.complex)
        assert rep.passed, rep.format()
        assert s.n == 1
        assert G_exact_all(s.complex)


def test_injective_start_rejected(a5):
    with pytest.raises(Injective):
        build_base_sequence(a5, a5.label("I3"))


def test_f_and_g_exact_on_e(e_seq):
    c = e_seq.complex
    assert all(apply_F(x, c).is_exact() for x in c.cat.labels)
    assert G_exact_all(c)


def test_plain_hom_complex_is_not_exact(seqs, a5):
    # Hom(M5, C) is not exact at the end: the identity of M5 does not lift
    c = seqs["P2"].complex
    assert not hom_complex(a5.label("M5"), c).is_exact()
    assert apply_F(a5.label("M5"), c).is_exact()


def test_f_of_cone_is_cone_of_f_tilde(a5, seqs):
    for s in seqs.values():
        phi = extract_chain_map(s).phi
        c = cone(phi)
        for x in a5.labels:
            lhs = apply_F(x, c)
            rhs = lin_cone(apply_F_tilde(x, phi))
            assert {i: v for i, v in lhs.dims.items() if v} == {i: v for i, v in rhs.dims.items() if v}
            for i in set(lhs.degrees()) | set(rhs.degrees()):
                assert lhs.map(i) == rhs.map(i)


def test_criterion_on_base_pairs(seqs):
    for s in seqs.values():
        assert criterion_holds(extract_chain_map(s).phi)


def test_extraction_of_c(a5, seqs):
    p = extract_chain_map(seqs["P2"])
    assert p.i0 == 0
    assert names(p.a0.term(1)) == ["P2"] and names(p.a0.term(0)) == ["P1"]
    assert names(p.a1.term(1)) == ["M3"] and names(p.a1.term(0)) == ["M5"]
    # C has d2 = (a; b) = (1; 1) and d1 = (c, d) = (-1, 1)
    assert p.a0.diff(1).block(0, 0) == vec([-1])   # -a
    assert p.a1.diff(1).block(0, 0) == vec([1])    # d
    assert p.phi.component(1).block(0, 0) == vec([-1])  # -b
    assert p.phi.component(0).block(0, 0) == vec([1])   # -c
    assert cone(p.phi).is_complex()


def test_extraction_of_d_puts_p5_in_degree_one(seqs):
    p = extract_chain_map(seqs["P5"])
    assert names(p.a0.term(1)) == ["P5"]
    assert p.a0.support == (1, 1)
    assert names(p.a1.term(1)) == ["M1"] and names(p.a1.term(0)) == ["M2"]
    assert p.phi.component(1).block(0, 0) == vec([-1])  # -e
    assert p.a1.diff(1).block(0, 0) == vec([-1])        # f


def test_extraction_iso_is_chain_iso(seqs):
    for s in seqs.values():
        p = extract_chain_map(s)
        c, cn = s.complex, cone(p.phi)
        for m in c.degrees():
            assert p.iso[m].realize().rows == p.iso[m].realize().cols
            if m - 1 in p.iso:
                assert compose(c.cat, p.iso[m - 1], c.diff(m)) == compose(c.cat, cn.diff(m), p.iso[m])


def test_slice_decompose_e(e_seq):
    sp = slice_decompose(e_seq)
    assert sp.i0 == 0
    c = e_seq.complex
    assert [c.term(3)[k].name for k in sp.low[3]] == ["P2⊗P5"]
    assert [c.term(2)[k].name for k in sp.low[2]] == ["P1⊗P5"]
    assert [c.term(2)[k].name for k in sp.high[2]] == ["M3⊗M1"]
    assert sp.low[0] == []


def test_slice_leak(a5):
    p1, i1 = a5.label("P1"), a5.label("I1")
    c = ComplexF(a5, {1: FormalModule((p1,)), 0: FormalModule((i1,))})
    with pytest.raises(SliceLeak):
        slice_decompose(c)


def test_e_extraction_feeds_three_fold(a5, e_seq):
    p = extract_chain_map(e_seq)
    assert criterion_holds(p.phi)
    assert p.a0.is_complex() and p.a1.is_complex()


def test_slice_mismatch(a5):
    with pytest.raises(SliceMismatch):
        tensor_almost_split(base_pair(a5, a5.label("P2")), base_pair(a5, a5.label("M5")))


def test_homotopy_witness_for_conjugate(a5, seqs):
    phi = extract_chain_map(seqs["P2"]).phi
    psi = phi.scale(3)
    w = homotopy_square_equiv(phi, psi)
    assert w is not None
    assert w.f.is_chain_map() and w.g.is_chain_map() and w.alpha.is_chain_map()
    cat = phi.cat
    a0, b1 = phi.source, psi.target
    for k in w.h:
        lhs = compose(cat, w.g.component(k), phi.component(k)) - compose(cat, psi.component(k), w.f.component(k))
        rhs = compose(cat, b1.diff(k + 1), w.h[k])
        if k - 1 in w.h:
            rhs = rhs + compose(cat, w.h[k - 1], a0.diff(k))
        assert lhs == rhs
    other = extract_chain_map(build_base_sequence(a5, a5.label("P2"), variant=3)).phi
    assert homotopy_square_equiv(phi, other) is not None
    assert homotopy_square_equiv(phi, extract_chain_map(seqs["P5"]).phi) is None


def test_variants_differ_but_verify(a5, seqs):
    for v in (1, 2, 3):
        s = build_base_sequence(a5, a5.label("P2"), variant=v)
        assert s.complex != seqs["P2"].complex
        assert verify_almost_split(s.complex).passed


def _mutate(c: ComplexF, deg: int, scale) -> ComplexF:
    d = c.diff(deg)
    diffs = dict(c.diffs)
    diffs[deg] = d.with_block(0, 0, [scale * x for x in d.block(0, 0)])
    return ComplexF(c.cat, c.terms, diffs)


def test_mutations_fail(seqs):
    for name in ("P2", "P3", "P5", "M3"):
        c = seqs[name].complex
        assert not verify_almost_split(_mutate(c, 1, 0)).passed
        assert not verify_almost_split(_mutate(c, 2, 0)).passed
        bad = _mutate(c, 2, 2)
        rep = verify_almost_split(bad)
        assert rep.passed == (len(c.term(1)) == 1)


def test_report_reasons(a5, seqs):
    c = seqs["P2"].complex
    short = ComplexF(a5, {0: c.term(0), 1: c.term(1)}, {1: c.diff(1)})
    rep = verify_almost_split(short)
    assert not rep.passed and rep.conditions[0].name == "support"
    rep = verify_almost_split(_mutate(c, 1, 0))
    assert "FAIL" in rep.format()


def test_radical_guards(a5):
    m = FormalModule((a5.label("P1"),))
    c = ComplexF(a5, {1: m, 0: m}, {1: identity_matrix(a5, m)})
    with pytest.raises(NonRadicalTail):
        apply_F(a5.label("P1"), c)
    with pytest.raises(NonRadicalTail):
        apply_G(a5.label("P1"), ComplexF(a5, {2: m, 1: m}, {2: identity_matrix(a5, m)}))
    with pytest.raises(NotRadical):
        apply_F_tilde(a5.label("P1"), identity_chain_map(c))
    assert not criterion_holds(identity_chain_map(c))
    assert isinstance(identity_chain_map(c), ChainMapF)


@pytest.mark.parametrize("slice_", [0, 1])
def test_tensor_closure_over_slice(a5, slice_):
    pairs = [base_pair(a5, x) for x in a5.slice_labels(slice_)]
    assert len(pairs) == 5
    for p in pairs:
        for q in pairs:
            seq = tensor_almost_split(p, q)
            assert seq.report.passed and seq.report.checked_labels == 75
            sp = slice_decompose(seq)
            assert sp.i0 == slice_
