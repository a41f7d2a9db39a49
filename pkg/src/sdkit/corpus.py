"""Built-in instances addressed as ``corpus:<name>``.

Tags record the properties an item is meant to exhibit.  They are claims,
re-derived by the checkers in ``verify-all`` and in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from . import ordinal as od
from .cat import (
    FinCat,
    Functor,
    Presheaf,
    codiscrete,
    discrete,
    enumerate_presheaves,
    fundamental_category,
    grothendieck,
    group,
    ordinal_category,
    parallel_pair,
    poset,
    product_category,
    terminal_category,
    twisted_arrow,
)
from .checkers import is_segal
from .factorization import rfib_from_presheaf, untwist
from .ordinal import OrdinalMap
from .sset import SMap, TruncSSet, from_action, nerve, representable, sd, subcomplex_of_representable

DEFAULT_DIM = 7


@dataclass
class Item:
    name: str
    kind: str  # fincat | sset | smap | functor | presheaf
    build: Callable[[int], object]
    tags: frozenset = field(default_factory=frozenset)
    note: str = ""


_ITEMS: dict[str, Item] = {}


def _reg(name: str, kind: str, tags=(), note: str = ""):
    def deco(fn):
        _ITEMS[name] = Item(name, kind, fn, frozenset(tags), note)
        return fn

    return deco


# --- categories ---------------------------------------------------------------

def _lattice() -> FinCat:
    C = product_category(ordinal_category(1), ordinal_category(1), name="2x2")
    return C


def _z2() -> FinCat:
    return group([0, 1], lambda a, b: (a + b) % 2, 0, name="Z/2")


def _cospan() -> FinCat:
    rel = {("a", "c"), ("b", "c")}
    return poset(["a", "b", "c"], lambda x, y: x == y or (x, y) in rel, name="cospan")


def _span() -> FinCat:
    rel = {("c", "a"), ("c", "b")}
    return poset(["a", "b", "c"], lambda x, y: x == y or (x, y) in rel, name="span")


CATEGORIES: dict[str, Callable[[], FinCat]] = {
    "terminal": terminal_category,
    "poset-1": lambda: ordinal_category(1),
    "poset-2": lambda: ordinal_category(2),
    "lattice-2x2": _lattice,
    "E0": lambda: codiscrete([0], name="E(0)"),
    "E1": lambda: codiscrete([0, 1], name="E(1)"),
    "parallel-pair": parallel_pair,
    "cospan": _cospan,
    "span": _span,
    "Z2": _z2,
    "discrete-2": lambda: discrete([0, 1], name="2"),
}

_CAT_TAGS = {
    "terminal": ("segal", "rezk"),
    "poset-1": ("segal", "rezk"),
    "poset-2": ("segal", "rezk"),
    "lattice-2x2": ("segal", "rezk"),
    "E0": ("segal", "rezk"),
    "E1": ("segal", "not-rezk"),
    "parallel-pair": ("segal", "rezk"),
    "cospan": ("segal", "rezk"),
    "span": ("segal", "rezk"),
    "Z2": ("segal", "not-rezk"),
    "discrete-2": ("segal", "rezk"),
}


@lru_cache(maxsize=None)
def category(name: str) -> FinCat:
    return CATEGORIES[name]()


for _n in CATEGORIES:
    _reg(f"cat-{_n}", "fincat", note="finite category")(lambda d, _n=_n: category(_n))
    _reg(f"nerve-{_n}", "sset", ("decomposition",) + _CAT_TAGS[_n], "nerve")(lambda d, _n=_n: _nerve(_n, d))


@lru_cache(maxsize=None)
def _nerve(name: str, dim: int) -> TruncSSet:
    X = nerve(category(name), dim)
    X.name = f"N({name})"
    return X


# --- simplicial sets that are not nerves ------------------------------------------

for _k in range(4):
    _reg(f"delta-{_k}", "sset", ("segal", "decomposition", "rezk"), "representable")(
        lambda d, _k=_k: representable(_k, d)
    )


# 1-dimensional simplicial sets are decomposition sets
@_reg("horn-2-1", "sset", ("not-segal", "decomposition", "rezk"), "inner horn of Delta^2")
def _horn(dim: int) -> TruncSSet:
    keep = lambda a: set(a.images) <= {0, 1} or set(a.images) <= {1, 2}
    return subcomplex_of_representable(2, dim, keep, name="horn(2,1)")


@_reg("boundary-2", "sset", ("not-segal", "decomposition", "rezk"), "boundary of Delta^2")
def _boundary(dim: int) -> TruncSSet:
    return subcomplex_of_representable(2, dim, lambda a: len(set(a.images)) < 3, name="boundary(2)")


@_reg("circle", "sset", ("not-segal", "decomposition", "rezk"), "Delta^1 with its two vertices identified")
def _circle(dim: int) -> TruncSSet:
    levels = [["pt"] + [a for a in od.all_maps(n, 1) if len(set(a.images)) == 2] for n in range(dim + 1)]

    def act(alpha: OrdinalMap, x):
        if x == "pt":
            return "pt"
        y = od.compose(x, alpha)
        return "pt" if len(set(y.images)) == 1 else y

    return from_action(dim, levels, act, name="S1")


@_reg("horn-3-1", "sset", ("not-segal", "not-decomposition"), "inner horn of Delta^3")
def _horn31(dim: int) -> TruncSSet:
    keep = lambda a: set(a.images) not in ({0, 1, 2, 3}, {0, 2, 3})
    return subcomplex_of_representable(3, dim, keep, name="horn(3,1)")


@_reg("boundary-3", "sset", ("not-segal", "not-decomposition"), "boundary of Delta^3 (2-dimensional)")
def _boundary3(dim: int) -> TruncSSet:
    return subcomplex_of_representable(3, dim, lambda a: len(set(a.images)) < 4, name="boundary(3)")


@_reg("square-one-diagonal", "sset", ("not-segal", "not-decomposition"), "triangles 012 and 023 glued along 02")
def _square(dim: int) -> TruncSSet:
    keep = lambda a: set(a.images) <= {0, 1, 2} or set(a.images) <= {0, 2, 3}
    return subcomplex_of_representable(3, dim, keep, name="square(012,023)")


@_reg("triangles-along-12", "sset", ("not-segal", "decomposition", "rezk"), "triangles 012 and 123 glued along 12")
def _triangles(dim: int) -> TruncSSet:
    keep = lambda a: set(a.images) <= {0, 1, 2} or set(a.images) <= {1, 2, 3}
    return subcomplex_of_representable(3, dim, keep, name="triangles(012,123)")


# --- maps ------------------------------------------------------------------------

def _functor(src: str, tgt: str, obj: dict, mor: dict | None = None) -> Functor:
    C, D = category(src), category(tgt)
    if mor is None:
        # thin source and target: a morphism is determined by its ends
        mor = {f: D.hom(obj[C.src(f)], obj[C.tgt(f)])[0] for f in C.morphisms}
    return Functor(C, D, obj, mor)


FUNCTORS: dict[str, Callable[[], Functor]] = {
    "vertex-0-into-arrow": lambda: _functor("terminal", "poset-1", {0: 0}),
    "vertex-1-into-arrow": lambda: _functor("terminal", "poset-1", {0: 1}),
    "s0-2-1": lambda: _functor("poset-2", "poset-1", {0: 0, 1: 0, 2: 1}),
    "d1-1-2": lambda: _functor("poset-1", "poset-2", {0: 0, 1: 2}),
    "arrow-to-point": lambda: _functor("poset-1", "terminal", {0: 0, 1: 0}),
    "E1-to-point": lambda: _functor("E1", "terminal", {0: 0, 1: 0}),
    "lattice-diagonal": lambda: _functor("poset-1", "lattice-2x2", {0: (0, 0), 1: (1, 1)}),
    "lattice-bottom-corner": lambda: _functor("terminal", "lattice-2x2", {0: (0, 0)}),
    "identity-poset-2": lambda: _functor("poset-2", "poset-2", {0: 0, 1: 1, 2: 2}),
    "parallel-pair-over-arrow": lambda: Functor(
        category("parallel-pair"), category("poset-1"), {"a": 0, "b": 1},
        {"1a": (0, 0), "1b": (1, 1), "f": (0, 1), "g": (0, 1)},
    ),
    "arrow-f-into-parallel-pair": lambda: Functor(
        category("poset-1"), category("parallel-pair"), {0: "a", 1: "b"},
        {(0, 0): "1a", (1, 1): "1b", (0, 1): "f"},
    ),
}

_FUNCTOR_TAGS = {
    "vertex-0-into-arrow": ("culf", "rfib"),
    "vertex-1-into-arrow": ("culf", "not-rfib"),
    "s0-2-1": ("not-culf", "not-rfib"),
    "d1-1-2": ("not-culf", "not-rfib"),
    "arrow-to-point": ("not-culf", "not-rfib"),
    "E1-to-point": ("not-culf", "not-rfib"),
    "lattice-diagonal": ("not-culf", "not-rfib"),
    "lattice-bottom-corner": ("culf", "rfib"),
    "identity-poset-2": ("culf", "rfib"),
    "parallel-pair-over-arrow": ("culf", "not-rfib"),
    "arrow-f-into-parallel-pair": ("culf", "not-rfib"),
}


@lru_cache(maxsize=None)
def functor(name: str) -> Functor:
    return FUNCTORS[name]()


def _nerve_of_named_functor(name: str, dim: int) -> SMap:
    F = functor(name)
    src = _nerve_for(F.source, dim)
    tgt = _nerve_for(F.target, dim)

    def fn(n, x):
        return F.obj[x] if n == 0 else tuple(F.mor[f] for f in x)

    return SMap.from_function(src, tgt, fn, dim)


def _nerve_for(C: FinCat, dim: int) -> TruncSSet:
    for name in CATEGORIES:
        if category(name) is C:
            return _nerve(name, dim)
    return nerve(C, dim)


for _n in FUNCTORS:
    _reg(f"functor-{_n}", "functor", _FUNCTOR_TAGS[_n])(lambda d, _n=_n: functor(_n))
    _reg(_n, "smap", _FUNCTOR_TAGS[_n], "nerve of a functor")(lambda d, _n=_n: _nerve_of_named_functor(_n, d))


@_reg("horn-into-delta-2", "smap", ("culf", "not-rfib"), "inclusion of the inner horn")
def _horn_inclusion(dim: int) -> SMap:
    H, D = _horn(dim), representable(2, dim)
    return SMap.from_function(H, D, lambda n, x: x)


# right fibrations from presheaves
PRESHEAVES: dict[str, Callable[[], Presheaf]] = {}


def _presheaf(name: str):
    def deco(fn):
        PRESHEAVES[name] = fn
        return fn

    return deco


@_presheaf("poset-2-211")
def _p_poset2() -> Presheaf:
    C = category("poset-2")
    fiber = {0: ["x", "y"], 1: ["u"], 2: ["v"]}
    act = {}
    for f in C.morphisms:
        a, b = f
        act[f] = {e: fiber[a][0] if a != b else e for e in fiber[b]}
    return Presheaf(C, fiber, act, name="P211")


@_presheaf("parallel-pair-split")
def _p_pp() -> Presheaf:
    C = category("parallel-pair")
    fiber = {"a": ["u", "v"], "b": ["x"]}
    act = {"1a": {"u": "u", "v": "v"}, "1b": {"x": "x"}, "f": {"x": "u"}, "g": {"x": "v"}}
    return Presheaf(C, fiber, act, name="Psplit")


@_presheaf("Z2-regular")
def _p_z2() -> Presheaf:
    C = category("Z2")
    return Presheaf(C, {"*": [0, 1]}, {g: {x: (x + g) % 2 for x in (0, 1)} for g in (0, 1)}, name="Z2")


@_presheaf("tw1-example")
def _p_tw1() -> Presheaf:
    """Fibers ``{a}, {a, b}, {b}`` over ``id_0, 0 -> 1, id_1`` in ``Tw([1])``."""
    C = twisted_arrow(category("poset-1"))
    fib = {(0, 0): ["a"], (0, 1): ["a", "b"], (1, 1): ["b"]}
    act = {}
    for f in C.morphisms:
        s, t = C.src(f), C.tgt(f)
        act[f] = {e: fib[s][0] if s != t else e for e in fib[t]}
    return Presheaf(C, fib, act, name="tw1-example")


for _n in PRESHEAVES:
    _reg(f"presheaf-{_n}", "presheaf")(lambda d, _n=_n: PRESHEAVES[_n]())


def _grothendieck_map(pname: str, base: str, dim: int) -> SMap:
    P = PRESHEAVES[pname]()
    q = grothendieck(P)
    E = q.total
    NE = nerve(E, dim)
    NB = _nerve(base, dim)
    F = q.projection

    def fn(n, x):
        return F.obj[x] if n == 0 else tuple(F.mor[f] for f in x)

    return SMap.from_function(NE, NB, fn, dim)


_reg("rfib-poset-2", "smap", ("culf", "rfib"), "discrete fibration over [2]")(lambda d: _grothendieck_map("poset-2-211", "poset-2", d))
_reg("rfib-parallel-pair", "smap", ("culf", "rfib"), "discrete fibration over the parallel pair")(
    lambda d: _grothendieck_map("parallel-pair-split", "parallel-pair", d)
)
_reg("Z2-cover", "smap", ("culf", "rfib"), "regular covering of BZ/2")(lambda d: _grothendieck_map("Z2-regular", "Z2", d))


# --- untwist-generated culf maps -------------------------------------------------------

_SELECT_DIM = 5  # Sd N(base) reaches level 2, so tau_1 is exact


@lru_cache(maxsize=None)
def _untwist_setup(base: str, dim: int):
    X = _nerve(base, dim)
    S = sd(X)
    T = fundamental_category(S)
    return X, S, T, list(enumerate_presheaves(T, 2))


@lru_cache(maxsize=None)
def _untwist_index(base: str, which: str) -> int:
    kind, k = which.rsplit("-", 1)
    k = int(k)
    if kind == "index":
        return k
    X, S, T, ps = _untwist_setup(base, _SELECT_DIM)
    seen = 0
    for i, P in enumerate(ps):
        q = untwist(rfib_from_presheaf(P, S, T), X)
        if is_segal(q.source).holds:
            continue
        if seen == k:
            return i
        seen += 1
    raise KeyError(f"no such untwisted map {which!r} over {base!r}")


@lru_cache(maxsize=None)
def untwisted(base: str, which: str, dim: int) -> SMap:
    """Culf maps over ``N(base)`` obtained by untwisting right fibrations
    over ``Sd N(base)`` with fibers of size at most 2.  ``which`` is
    ``non-segal-<k>`` (the k-th non-Segal output in enumeration order) or
    ``index-<k>``.  The choice is made once, at a fixed dimension."""
    i = _untwist_index(base, which)
    X, S, T, ps = _untwist_setup(base, max(dim, _SELECT_DIM))
    q = untwist(rfib_from_presheaf(ps[i], S, T), X, dim=dim)
    q.source.name = f"untwist-{base}-{which}"
    return q


for _base, _which in (("poset-2", "non-segal-0"), ("poset-2", "non-segal-1"), ("poset-2", "non-segal-5")):
    _nm = f"untwist-{_base}-{_which}"
    _reg(_nm, "smap", ("culf", "not-rfib"), "untwisted right fibration")(lambda d, b=_base, w=_which: untwisted(b, w, d))
    _reg(f"decomp-{_nm}", "sset", ("not-segal", "decomposition", "rezk"), "source of an untwisted map")(
        lambda d, b=_base, w=_which: untwisted(b, w, d).source
    )


@_reg("untwist-tw1-example", "smap", ("culf",), "untwisting of presheaf-tw1-example")
def _untwist_tw1(dim: int) -> SMap:
    X = _nerve("poset-1", max(dim, _SELECT_DIM))
    S = sd(X)
    T = fundamental_category(S)
    P = _p_tw1()
    # tau_1(Sd N[1]) and Tw([1]) share objects; move P across by endpoints
    Pt = _transport_poset_presheaf(P, T, lambda c: c[0])
    return untwist(rfib_from_presheaf(Pt, S, T), X, dim=dim)


def _transport_poset_presheaf(P: Presheaf, T: FinCat, obj: Callable) -> Presheaf:
    """Move a presheaf on a thin category along an object bijection onto an
    isomorphic thin category."""
    B = P.base
    act = {}
    for f in T.morphisms:
        (g,) = B.hom(obj(T.src(f)), obj(T.tgt(f)))
        act[f] = P.action[g]
    return Presheaf(T, {c: P.fiber[obj(c)] for c in T.objects}, act, name=P.name)


# --- access --------------------------------------------------------------------

def names(kind: str | None = None) -> list[str]:
    return [n for n, it in _ITEMS.items() if kind is None or it.kind == kind]


def item(name: str) -> Item:
    if name.startswith("corpus:"):
        name = name[len("corpus:"):]
    if name not in _ITEMS:
        raise KeyError(f"unknown corpus item {name!r}")
    return _ITEMS[name]


def get(name: str, dim: int = DEFAULT_DIM):
    return item(name).build(dim)


def tagged(kind: str, *tags: str) -> list[str]:
    return [n for n, it in _ITEMS.items() if it.kind == kind and all(t in it.tags for t in tags)]
