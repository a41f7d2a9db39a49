from __future__ import annotations

import json
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sdkit import corpus
from sdkit import ordinal as od
from sdkit.cat import FinCat, codiscrete, ordinal_category, terminal_category, twisted_arrow
from sdkit.checkers import is_culf, is_right_fibration
from sdkit.errors import InvalidSSet, OutOfTruncation
from sdkit.ordinal import omap
from sdkit.sset import (
    SMap,
    TruncSSet,
    compose_maps,
    dec_bot,
    dec_top,
    enumerate_maps,
    identity_map,
    interval,
    isomorphic,
    nerve,
    pullback,
    representable,
    sd,
    sd_of_map,
    simplex_map,
    slice_over,
)


def test_representable_sizes():
    assert representable(0, 2).sizes() == [1, 1, 1]
    assert representable(1, 1).sizes() == [2, 3]
    assert representable(2, 2).sizes() == [3, 6, 10]
    for n in range(4):
        assert representable(n, 4).sizes() == [comb(n + k + 1, k + 1) for k in range(5)]


def test_validate_finds_broken_identity():
    X = representable(2, 3)
    X.validate()
    faces = [list(map(list, fs)) for fs in X.faces]
    # swap d_0 and d_1 on one 2-simplex
    j = X.index(2, omap((0, 1, 2), 2))
    faces[2][0][j], faces[2][1][j] = faces[2][1][j], faces[2][0][j]
    bad = TruncSSet(X.dim, X.levels, faces, X.degens)
    assert bad.violations()
    with pytest.raises(InvalidSSet):
        bad.validate()


def test_nerves_validate():
    for name in corpus.CATEGORIES:
        nerve(corpus.category(name), 4).validate()


def test_act_examples():
    X = representable(2, 2)
    assert X.act(omap((0, 2), 2), od.identity(2)) == omap((0, 2), 2)
    assert X.act(od.identity(2), omap((0, 1, 1), 2)) == omap((0, 1, 1), 2)
    C = ordinal_category(2)
    N = nerve(C, 3)
    f, g = C.hom(0, 1)[0], C.hom(1, 2)[0]
    assert N.act(omap((0, 2), 2), (f, g)) == (C.compose(g, f),)
    with pytest.raises(OutOfTruncation):
        N.op_table(od.identity(4))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["nerve-poset-2", "circle", "horn-2-1", "nerve-Z2", "triangles-along-12"]), st.data())
def test_act_is_functorial(name, data):
    X = corpus.get(name, 4)
    n = data.draw(st.integers(0, 4))
    m = data.draw(st.integers(0, 4))
    k = data.draw(st.integers(0, 4))
    a = data.draw(st.sampled_from(od.all_maps(m, n)))
    b = data.draw(st.sampled_from(od.all_maps(k, m)))
    for x in X.levels[n]:
        assert X.act(od.compose(a, b), x) == X.act(b, X.act(a, x))


def test_nerve_examples():
    assert nerve(terminal_category(), 3).sizes() == [1, 1, 1, 1]
    assert nerve(codiscrete([0, 1]), 2).sizes() == [2, 4, 8]
    assert isomorphic(nerve(ordinal_category(1), 4), representable(1, 4))


def test_sd_examples():
    assert sd(representable(1, 3)).sizes() == [3, 5]
    assert sd(representable(0, 3)).sizes() == [1, 1]
    assert sd(representable(1, 7)).dim == 3
    with pytest.raises(OutOfTruncation):
        sd(representable(1, 0))


def test_sd_of_nerve_is_twisted_arrow_nerve():
    for name in corpus.CATEGORIES:
        C = corpus.category(name)
        assert isomorphic(sd(nerve(C, 5)), nerve(twisted_arrow(C), 2)), name


def test_sd_of_maps():
    X = representable(2, 5)
    assert sd_of_map(identity_map(X)).components == identity_map(sd(X)).components
    v = simplex_map(1, omap((1,), 1), 3)
    (j,) = sd_of_map(v).components[0]
    assert sd(representable(1, 3)).levels[0][j] == omap((1, 1), 1)
    f = simplex_map(2, omap((0, 2), 2), 5)
    g = simplex_map(3, omap((0, 1, 3), 3), 5)
    assert sd_of_map(compose_maps(g, f)).components == compose_maps(sd_of_map(g), sd_of_map(f)).components


def test_pullback_examples():
    X = corpus.get("nerve-poset-2", 3)
    P, _, _ = pullback(identity_map(X), identity_map(X))
    assert isomorphic(P, X)
    v0 = simplex_map(1, omap((0,), 1), 3)
    v1 = simplex_map(1, omap((1,), 1), 3)
    P, _, _ = pullback(v0, v1)
    assert P.is_empty()


def test_pullback_matches_levelwise_fibers():
    p = corpus.get("s0-2-1", 4)
    v = simplex_map(1, omap((1,), 1), 4)
    P, a, b = pullback(p, v)
    for n in range(5):
        brute = sorted((y, w) for y in range(p.source.size(n)) for w in range(v.source.size(n))
                       if p.components[n][y] == v.components[n][w])
        assert sorted(zip(a.components[n], b.components[n])) == brute


def test_pullback_universal_by_cone_search():
    # cones from Delta^1 into the pullback of two maps into N[1]
    p = corpus.get("s0-2-1", 3)
    v = simplex_map(1, omap((1,), 1), 3)
    P, a, b = pullback(p, v)
    T = representable(1, 3)
    for u in enumerate_maps(T, p.source):
        for w in enumerate_maps(T, v.source):
            if any(p.components[n][u[n][j]] != v.components[n][w[n][j]] for n in range(4) for j in range(T.size(n))):
                continue
            fill = [h for h in enumerate_maps(T, P)
                    if all(a.components[n][h[n][j]] == u[n][j] and b.components[n][h[n][j]] == w[n][j] for n in range(4) for j in range(T.size(n)))]
            assert len(fill) == 1


def test_decalage():
    assert isomorphic(dec_top(representable(0, 2)), representable(0, 1))
    assert dec_top(nerve(ordinal_category(1), 3)).sizes() == [3, 4, 5]
    for name in ("nerve-poset-2", "circle", "horn-3-1", "nerve-parallel-pair"):
        X = corpus.get(name, 4)
        assert isomorphic(dec_bot(dec_top(X)), dec_top(dec_bot(X)))


def _category_slice(C: FinCat, x) -> FinCat:
    objs = list(C.morphisms_into(x))
    mors = [((g, f), f, h) for f in objs for h in objs for g in C.hom(C.src(f), C.src(h)) if C.compose(h, g) == f]
    ids = {f: (C.identity(C.src(f)), f) for f in objs}
    comp = {}
    for g1, f1, h1 in mors:
        for g2, f2, h2 in mors:
            if f2 == h1:
                comp[(g2, g1)] = (C.compose(g2[0], g1[0]), f1)
    return FinCat(objs, mors, ids, comp)


def test_slice_examples():
    assert slice_over(representable(1, 3), omap((1,), 1)).sizes()[:2] == [2, 3]
    assert isomorphic(slice_over(representable(0, 2), omap((0,), 0)), representable(0, 1))
    for name in ("poset-2", "lattice-2x2", "span", "Z2", "parallel-pair"):
        C = corpus.category(name)
        for x in C.objects:
            assert isomorphic(slice_over(nerve(C, 4), x), nerve(_category_slice(C, x), 3)), (name, x)


def test_interval_examples():
    I = interval(nerve(ordinal_category(1), 4), (ordinal_category(1).hom(0, 1)[0],))
    assert I.space.size(0) == 2
    C = ordinal_category(2)
    I = interval(nerve(C, 4), (C.hom(0, 2)[0],))
    assert I.space.size(0) == 3
    I = interval(nerve(C, 4), (C.identity(1),))
    assert I.space.size(0) == 1 and I.initial == I.terminal


def _induced(p: SMap, sub_src: list[list[int]], sub_tgt: list[list[int]], shift: int, d: int) -> bool:
    """Is ``p`` restricted to the given index sets (levels shifted by
    ``shift``) a levelwise bijection onto the target index sets?"""
    for k in range(d + 1):
        img = [p.components[k + shift][j] for j in sub_src[k]]
        if sorted(img) != sorted(sub_tgt[k]):
            return False
    return True


def test_slices_detect_right_fibrations():
    for name in corpus.names("smap"):
        p = corpus.get(name, 5)
        Y, X = p.source, p.target
        ok = True
        for y in range(Y.size(0)):
            x = p.components[0][y]
            src = [[j for j, w in enumerate(Y.last_vertex(k + 1)) if w == y] for k in range(4)]
            tgt = [[j for j, w in enumerate(X.last_vertex(k + 1)) if w == x] for k in range(4)]
            ok &= _induced(p, src, tgt, 1, 3)
        assert ok == is_right_fibration(p).holds, name


def test_intervals_detect_culf():
    for name in corpus.names("smap"):
        p = corpus.get(name, 5)
        Y, X = p.source, p.target
        ok = True
        for e in range(Y.size(1)):
            f = p.components[1][e]
            src = [[j for j, w in enumerate(Y.long_edge(k + 2)) if w == e] for k in range(3)]
            tgt = [[j for j, w in enumerate(X.long_edge(k + 2)) if w == f] for k in range(3)]
            ok &= _induced(p, src, tgt, 2, 2)
        assert ok == is_culf(p).holds, name


def test_yoneda_counts():
    for name in ("nerve-poset-2", "circle", "horn-2-1", "nerve-E1"):
        X = corpus.get(name, 3)
        for n in range(4):
            assert sum(1 for _ in enumerate_maps(representable(n, 3), X)) == X.size(n)


def test_json_roundtrip():
    X = corpus.get("triangles-along-12", 3)
    Y = TruncSSet.from_json(json.loads(json.dumps(X.to_json())))
    assert Y.sizes() == X.sizes() and isomorphic(X, Y)
    p = corpus.get("parallel-pair-over-arrow", 3)
    q = SMap.from_json(json.loads(json.dumps(p.to_json())))
    assert q.components == p.components


def test_isomorphic_negative():
    assert not isomorphic(corpus.get("horn-2-1", 3), corpus.get("boundary-2", 3))
    assert not isomorphic(corpus.get("nerve-E1", 3), corpus.get("nerve-discrete-2", 3))
