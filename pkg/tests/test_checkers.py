from __future__ import annotations

import pytest

from sdkit import corpus
from sdkit import ordinal as od
from sdkit.cat import constant_functor, identity_functor, nerve_of_functor, ordinal_category, terminal_category
from sdkit.checkers import (
    Square,
    cartesian_on_d0,
    degeneracy_square,
    equivalences,
    is_culf,
    is_culfy,
    is_decomposition,
    is_dk_equivalence,
    is_final_functor,
    is_left_fibration,
    is_pullback_square,
    is_relative_complete,
    is_rezk_complete,
    is_right_fibration,
    is_righteous,
    is_segal,
    operator_square,
    preserves_initial_and_terminal,
    preserves_terminal,
)
from sdkit.elements import smap_to_presheaf, presheaf_to_smap
from sdkit.errors import NonCommuting, OutOfTruncation
from sdkit.ordinal import omap
from sdkit.sset import compose_maps, identity_map, pullback, representable, simplex_map


def test_pullback_square_examples():
    assert is_pullback_square(Square((3, 3, 3, 3), [0, 1, 2], [0, 1, 2], [0, 1, 2], [0, 1, 2])).holds
    # a fiber of size 2 over a point, claimed to be a single point
    v = is_pullback_square(Square((1, 2, 1, 1), [0], [0], [0, 0], [0]))
    assert not v.holds and v.witness["preimages"] == "none"
    assert not is_pullback_square(v.square).holds
    with pytest.raises(NonCommuting):
        is_pullback_square(Square((1, 2, 2, 2), [0], [0], [0, 1], [1, 0]))


def test_sset_pullbacks_are_pullbacks():
    p = corpus.get("s0-2-1", 3)
    v = simplex_map(1, omap((1,), 1), 3)
    P, a, b = pullback(p, v)
    for n in range(4):
        sq = Square((P.size(n), p.source.size(n), v.source.size(n), p.target.size(n)),
                    a.components[n], b.components[n], p.components[n], v.components[n])
        assert is_pullback_square(sq).holds


def test_fibration_examples():
    X = corpus.get("circle", 4)
    assert is_right_fibration(identity_map(X)).holds and is_left_fibration(identity_map(X)).holds
    at0 = simplex_map(1, omap((0,), 1), 4)
    at1 = simplex_map(1, omap((1,), 1), 4)
    assert is_right_fibration(at0).holds and not is_left_fibration(at0).holds
    v = is_right_fibration(at1)
    assert not v.holds and v.witness is not None
    assert not is_pullback_square(v.square).holds
    assert is_left_fibration(at1).holds


def test_grothendieck_maps_are_right_fibrations():
    for name in ("rfib-poset-2", "rfib-parallel-pair", "Z2-cover"):
        p = corpus.get(name, 4)
        assert is_right_fibration(p).holds
        assert is_right_fibration(presheaf_to_smap(smap_to_presheaf(p), 4)).holds


def test_culf_examples():
    assert is_culf(corpus.get("parallel-pair-over-arrow", 4)).holds
    assert not is_right_fibration(corpus.get("parallel-pair-over-arrow", 4)).holds
    assert not is_left_fibration(corpus.get("parallel-pair-over-arrow", 4)).holds
    v = is_culf(corpus.get("s0-2-1", 4))
    assert not v.holds
    assert v.witness["preimages"] == "several"
    assert not is_pullback_square(v.square).holds


def test_corpus_tags_agree_with_checkers():
    for name in corpus.names("smap"):
        p = corpus.get(name, 5)
        tags = corpus.item(name).tags
        if "culf" in tags or "not-culf" in tags:
            assert is_culf(p).holds == ("culf" in tags), name
        if "rfib" in tags or "not-rfib" in tags:
            assert is_right_fibration(p).holds == ("rfib" in tags), name


def test_right_fibrations_are_culf_and_ulf_implies_culf():
    for name in corpus.names("smap"):
        p = corpus.get(name, 5)
        if is_right_fibration(p).holds or is_left_fibration(p).holds:
            assert is_culf(p).holds, name
        if is_culf(p).holds:
            assert degeneracy_square(p).holds, name


def _composable():
    maps = {name: corpus.get(name, 2) for name in corpus.names("smap")}
    for a, f in maps.items():
        for b, g in maps.items():
            if f.target.levels == g.source.levels and f.target.faces == g.source.faces:
                yield a, b, f, g


def test_right_fibrations_compose_and_cancel():
    seen = 0
    for a, b, f, g in _composable():
        gf = compose_maps(g, f)
        seen += 1
        if is_right_fibration(f).holds and is_right_fibration(g).holds:
            assert is_right_fibration(gf).holds, (a, b)
        if is_right_fibration(gf).holds and is_right_fibration(g).holds:
            assert is_right_fibration(f).holds, (a, b)
        if is_culf(f).holds and is_culf(g).holds:
            assert is_culf(gf).holds, (a, b)
    assert seen > 0


def test_segal_examples():
    for name in corpus.CATEGORIES:
        assert is_segal(corpus.get(f"nerve-{name}", 4)).holds
    for n in range(4):
        assert is_segal(representable(n, 4)).holds
    v = is_segal(corpus.get("horn-2-1", 2))
    assert not v.holds and v.witness["preimages"] == "none"
    with pytest.raises(OutOfTruncation):
        is_segal(representable(1, 1))


def test_right_fibration_over_segal_has_segal_total():
    for name in corpus.names("smap"):
        p = corpus.get(name, 3)
        if is_right_fibration(p).holds and is_segal(p.target).holds:
            assert is_segal(p.source).holds, name


def test_d0_square_suffices_between_segal_objects():
    for name in corpus.names("smap"):
        p = corpus.get(name, 4)
        if is_segal(p.source).holds and is_segal(p.target).holds:
            assert cartesian_on_d0(p).holds == is_right_fibration(p).holds, name


def test_decomposition_examples():
    for name in ("nerve-poset-2", "nerve-Z2", "nerve-parallel-pair"):
        assert is_decomposition(corpus.get(name, 5)).holds
    Y = corpus.get("decomp-untwist-poset-2-non-segal-0", 7)
    assert is_decomposition(Y).holds and not is_segal(Y).holds
    # 1-skeletal: every relevant square is between sets of degenerate simplices
    assert is_decomposition(corpus.get("boundary-2", 5)).holds
    # regression values, fixed by agreement of both routes
    for name in ("horn-3-1", "boundary-3", "square-one-diagonal"):
        assert not is_decomposition(corpus.get(name, 5)).holds
    with pytest.raises(OutOfTruncation):
        is_decomposition(corpus.get("nerve-poset-2", 4))


def test_equivalences_examples():
    for name in ("nerve-poset-2", "nerve-lattice-2x2", "horn-2-1", "circle"):
        X = corpus.get(name, 3)
        assert set(X.degens[0][0]) <= set(equivalences(X))
    for name in ("nerve-poset-2", "nerve-lattice-2x2", "nerve-span"):
        X = corpus.get(name, 3)
        assert equivalences(X) == sorted(set(X.degens[0][0]))
    assert len(equivalences(corpus.get("nerve-E1", 3))) == 4
    with pytest.raises(OutOfTruncation):
        equivalences(representable(1, 1))


def test_rezk_examples():
    assert is_rezk_complete(corpus.get("nerve-poset-2", 3)).holds
    assert not is_rezk_complete(corpus.get("nerve-E1", 3)).holds
    assert not is_rezk_complete(corpus.get("nerve-Z2", 3)).holds
    for n in range(3):
        assert is_rezk_complete(representable(n, 3)).holds


def test_final_functor_examples():
    A = ordinal_category(1)
    assert is_final_functor(identity_functor(A)).holds
    assert is_final_functor(constant_functor(terminal_category(), A, 1)).holds
    v = is_final_functor(constant_functor(terminal_category(), A, 0))
    assert not v.holds and v.witness["components"] == 0
    for name in corpus.names("functor"):
        F = corpus.get(name)
        if preserves_terminal(F):
            assert is_final_functor(F).holds, name
    assert preserves_initial_and_terminal(identity_functor(ordinal_category(2)))
    assert not preserves_initial_and_terminal(constant_functor(terminal_category(), A, 1))


def test_dk_and_relative_complete_examples():
    C = corpus.category("lattice-2x2")
    assert is_dk_equivalence(identity_functor(C)).holds and is_relative_complete(identity_functor(C)).holds
    F = corpus.get("functor-E1-to-point")
    assert is_dk_equivalence(F).holds and not is_relative_complete(F).holds
    G = corpus.get("functor-vertex-0-into-arrow")
    assert not is_dk_equivalence(G).holds and is_relative_complete(G).holds
    for name in corpus.names("functor"):
        H = corpus.get(name)
        v = is_relative_complete(H)
        assert v.details["outgoing"] == v.details["incoming"], name
        ok = v.holds and is_dk_equivalence(H).holds
        assert ok == nerve_of_functor(H, 3).is_levelwise_bijective(), name


def test_culfy_righteous_examples():
    X = corpus.get("nerve-poset-2", 3)
    assert is_culfy(identity_map(X)).holds and is_righteous(identity_map(X)).holds
    for name in corpus.names("smap"):
        p = corpus.get(name, 3)
        assert is_culfy(p, 2).holds == is_culf(p).holds, name
        assert is_righteous(p, 2).holds == is_right_fibration(p).holds, name


def test_operator_square_shape():
    p = corpus.get("s0-2-1", 3)
    sq = operator_square(p, od.long_edge(2))
    assert sq.sizes == (p.source.size(2), p.source.size(1), p.target.size(2), p.target.size(1))
