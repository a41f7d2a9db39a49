from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sdkit import corpus
from sdkit import ordinal as od
from sdkit.elements import (
    ElPresheaf,
    el,
    lambda_map,
    lower_segment_fillers,
    lower_segments,
    middle_segment_fillers,
    middle_segments,
    nel,
    nerve_of_omega,
    presheaf_to_smap,
    smap_to_discfib,
    smap_to_presheaf,
    xi,
)
from sdkit.errors import DimensionMismatch, OutOfTruncation
from sdkit.ordinal import omap
from sdkit.sset import empty, identity_map, isomorphic_over, representable, sd


def chains(max_len: int = 3, max_dim: int = 4):
    def extend(chain):
        if len(chain) >= max_len:
            return st.just(chain)
        return st.one_of(
            st.just(chain),
            st.integers(0, max_dim).flatmap(lambda n: st.sampled_from(od.all_maps(chain[-1].cod, n))).flatmap(lambda f: extend(chain + [f])),
        )

    first = st.tuples(st.integers(0, max_dim), st.integers(0, max_dim)).flatmap(lambda mn: st.sampled_from(od.all_maps(*mn)))
    return first.flatmap(lambda f: extend([f]))


def test_el_examples():
    assert len(el(representable(0, 1)).objects) == 2
    assert len(el(representable(1, 1)).objects) == 5
    assert el(empty(2)).objects == []


def test_nel_examples():
    assert nel(empty(2), 2).sizes() == [0, 0, 0]
    assert nel(representable(0, 1), 1).size(0) == 2
    assert nel(representable(1, 1), 1, el_dim=1).sizes() == [5, 19]
    for name in ("nerve-poset-1", "horn-2-1", "circle"):
        X = corpus.get(name, 3)
        pairs = sum(X.size(n) * len(od.all_maps(m, n)) for n in range(3) for m in range(3))
        assert nel(X, 1, el_dim=2).size(1) == pairs


def test_lower_segments_examples():
    assert lower_segments([], 3) == omap((3,), 3)
    assert lower_segments([od.coface(2, 0)]) == omap((2, 2), 2)
    chain = [od.codegeneracy(1, 0), od.coface(2, 1)]
    b = lower_segments(chain)
    assert lower_segment_fillers(chain) == [b]
    assert od.is_last_point_preserving(b)
    with pytest.raises(DimensionMismatch):
        lower_segments([od.codegeneracy(0, 0), od.coface(2, 0)])


def test_middle_segments_examples():
    assert middle_segments([], 4) == omap((0, 4), 4)
    g = omap((1, 2), 3)
    assert middle_segments([g]) == omap((0, 1, 2, 3), 3)
    a = middle_segments([omap((0, 3), 3)])
    assert a == omap((0, 0, 3, 3), 3)
    # doubly degenerate: factors through Q(s^0) : [3] -> [1]
    assert a == od.compose(omap((0, 3), 3), od.q_on_map(od.codegeneracy(0, 0)))
    f = [od.coface(2, 0)]
    assert od.q_on_map(lower_segments(f)) == middle_segments([od.q_on_map(x) for x in f]) == omap((0, 0, 5, 5), 5)


@settings(max_examples=200, deadline=None)
@given(chains())
def test_segments_formula(chain):
    k = len(chain)
    ns = [chain[0].dom] + [f.cod for f in chain]

    def push(i, v):
        for f in chain[i:]:
            v = f(v)
        return v

    b = lower_segments(chain)
    a = middle_segments(chain)
    assert b.images == tuple(push(i, ns[i]) for i in range(k + 1))
    assert a.images == tuple(push(i, 0) for i in reversed(range(k + 1))) + b.images
    assert od.is_active(a) and od.is_last_point_preserving(b)


@settings(max_examples=40, deadline=None)
@given(chains(max_len=2, max_dim=3))
def test_fillers_unique(chain):
    assert lower_segment_fillers(chain) == [lower_segments(chain)]
    assert middle_segment_fillers(chain) == [middle_segments(chain)]


def test_xi_examples():
    X = representable(1, 2)
    N = nel(X, 1)
    x = xi(X, 1, N).validate()
    E = el(X)
    for j, (n, s) in enumerate(N.levels[0]):
        assert X.levels[0][x.components[0][j]] == od.compose(X.levels[n][s], od.last_vertex_inclusion(n))
    for j, chain in enumerate(N.levels[1]):
        (alpha, n, s), = chain
        beta = lower_segments([alpha])
        assert x.components[1][j] == X.index(1, od.compose(X.levels[n][s], beta))
    assert xi(empty(2), 1).components == [(), ()]
    with pytest.raises(OutOfTruncation):
        xi(representable(1, 1), 2)
    assert E.objects


def test_lambda_examples():
    X = representable(2, 5)
    S = sd(X)
    N = nel(X, 1, el_dim=2)
    lam = lambda_map(X, 1, N, SdX=S).validate()
    for j, (n, s) in enumerate(N.levels[0]):
        assert S.levels[0][lam.components[0][j]] == od.compose(X.levels[n][s], od.long_edge(n))
    # active 1-simplices go to degenerate edges of Sd X
    degen = set(S.degens[0][0])
    for j, chain in enumerate(N.levels[1]):
        (alpha, n, s), = chain
        if od.is_active(alpha):
            assert lam.components[1][j] in degen
    with pytest.raises(OutOfTruncation):
        lambda_map(representable(1, 4), 2)


def test_lambda_through_omega_is_xi_of_sd():
    for name in ("delta-1", "nerve-parallel-pair", "horn-2-1"):
        X = corpus.get(name, 7)
        S = sd(X)
        N_sd = nel(S, 2, el_dim=1)
        N_X = nel(X, 2, el_dim=3)
        w = nerve_of_omega(X, 2, N_sd, N_X).validate()
        lam = lambda_map(X, 2, N_X, SdX=S)
        x = xi(S, 2, N_sd)
        for k in range(3):
            assert tuple(lam.components[k][v] for v in w.components[k]) == x.components[k]


def test_maps_and_presheaves_roundtrip():
    for name in ("parallel-pair-over-arrow", "rfib-poset-2", "s0-2-1", "untwist-tw1-example"):
        q = corpus.get(name, 4)
        back = presheaf_to_smap(smap_to_presheaf(q), 4)
        back.validate()
        assert isomorphic_over(back, q) is not None
    X = corpus.get("nerve-poset-2", 4)
    P = ElPresheaf(X, lambda n, j: ["*"], lambda a, n, j, e: e)
    q = presheaf_to_smap(P)
    assert q.is_levelwise_bijective()
    ob, mor = smap_to_discfib(identity_map(X))
    assert all(ob(o) == o for o in el(X, 2).objects)
