"""Finite categories, functors, presheaves and discrete fibrations.

Composition is ``compose(g, f) = g . f`` (``f`` first).  Presheaves are
contravariant: ``action[f]`` for ``f : a -> b`` maps ``fiber[b]`` to
``fiber[a]``.
"""

from __future__ import annotations

import os
from collections import deque
from itertools import product
from typing import Callable, Hashable, Iterable, Iterator, Sequence

from .ordinal import OrdinalMap
from .errors import BudgetExceeded, InvalidCategory, InvalidMap, NotDiscFib
from .sset import SMap, TruncSSet, nerve

DEFAULT_BUDGET = 10000


def default_budget() -> int:
    return int(os.environ.get("SDKIT_BUDGET", DEFAULT_BUDGET))


class FinCat:
    """A finite category given by explicit tables."""

    def __init__(
        self,
        objects: Sequence[Hashable],
        morphisms: Sequence[tuple[Hashable, Hashable, Hashable]],
        identities: dict,
        compose: dict,
        name: str = "",
    ):
        self.objects = list(objects)
        self.morphisms = [m for m, _, _ in morphisms]
        self._src = {m: s for m, s, _ in morphisms}
        self._tgt = {m: t for m, _, t in morphisms}
        self._id = dict(identities)
        self._comp = dict(compose)
        self.name = name
        if len(self._src) != len(self.morphisms):
            raise InvalidCategory("duplicate morphism ids")
        self._into: dict = {b: [] for b in self.objects}
        self._from: dict = {a: [] for a in self.objects}
        self._hom: dict = {}
        for m in self.morphisms:
            s, t = self._src[m], self._tgt[m]
            if s not in self._from or t not in self._into:
                raise InvalidCategory(f"morphism {m!r} has an unknown endpoint")
            self._into[t].append(m)
            self._from[s].append(m)
            self._hom.setdefault((s, t), []).append(m)
        self._id_set = set(self._id.values())

    # access
    def src(self, f):
        return self._src[f]

    def tgt(self, f):
        return self._tgt[f]

    def identity(self, x):
        return self._id[x]

    def is_identity(self, f) -> bool:
        return f in self._id_set

    def compose(self, g, f):
        try:
            return self._comp[(g, f)]
        except KeyError:
            raise InvalidCategory(f"{g!r} . {f!r} is not defined") from None

    def hom(self, a, b) -> list:
        return self._hom.get((a, b), [])

    def morphisms_into(self, b) -> list:
        return self._into[b]

    def morphisms_from(self, a) -> list:
        return self._from[a]

    def is_iso(self, f) -> bool:
        return self.inverse(f) is not None

    def inverse(self, f):
        a, b = self._src[f], self._tgt[f]
        for g in self.hom(b, a):
            if self._comp[(g, f)] == self._id[a] and self._comp[(f, g)] == self._id[b]:
                return g
        return None

    def __repr__(self) -> str:
        return f"FinCat({self.name or '?'}, {len(self.objects)} objects, {len(self.morphisms)} morphisms)"

    def violations(self) -> list[dict]:
        out = []
        for x in self.objects:
            i = self._id.get(x)
            if i is None or self._src.get(i) != x or self._tgt.get(i) != x:
                out.append({"law": "identity", "object": x})
        for f in self.morphisms:
            a, b = self._src[f], self._tgt[f]
            for g in self._from[b]:
                h = self._comp.get((g, f))
                if h is None or self._src.get(h) != a or self._tgt.get(h) != self._tgt[g]:
                    out.append({"law": "composition total", "pair": (g, f)})
            if self._comp.get((self._id[b], f)) != f or self._comp.get((f, self._id[a])) != f:
                out.append({"law": "unit", "morphism": f})
        if out:
            return out
        for f in self.morphisms:
            for g in self._from[self._tgt[f]]:
                gf = self._comp[(g, f)]
                for h in self._from[self._tgt[g]]:
                    if self._comp[(h, gf)] != self._comp[(self._comp[(h, g)], f)]:
                        out.append({"law": "associativity", "triple": (h, g, f)})
        return out

    def validate(self) -> "FinCat":
        v = self.violations()
        if v:
            raise InvalidCategory(f"{len(v)} category laws fail", v)
        return self

    def opposite(self) -> "FinCat":
        return FinCat(
            self.objects,
            [(m, self._tgt[m], self._src[m]) for m in self.morphisms],
            self._id,
            {(f, g): h for (g, f), h in self._comp.items()},
            name=f"{self.name}^op",
        )

    def to_json(self) -> dict:
        return {
            "kind": "fincat",
            "objects": [_js(x) for x in self.objects],
            "morphisms": [{"id": _js(m), "src": _js(self._src[m]), "tgt": _js(self._tgt[m])} for m in self.morphisms],
            "identities": {str(i): _js(self._id[x]) for i, x in enumerate(self.objects)},
            "compose": [[_js(g), _js(f), _js(h)] for (g, f), h in self._comp.items()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FinCat":
        if data.get("kind") != "fincat":
            raise InvalidCategory("not a fincat instance")
        objs = [_hs(x) for x in data["objects"]]
        mors = [(_hs(m["id"]), _hs(m["src"]), _hs(m["tgt"])) for m in data["morphisms"]]
        ids = {objs[int(i)]: _hs(m) for i, m in data["identities"].items()}
        comp = {(_hs(g), _hs(f)): _hs(h) for g, f, h in data["compose"]}
        return cls(objs, mors, ids, comp, data.get("name", "")).validate()


def _js(x):
    if isinstance(x, OrdinalMap):
        return list(x.images)
    if isinstance(x, (tuple, list)):
        return [_js(v) for v in x]
    return x


def _hs(x):
    if isinstance(x, list):
        return tuple(_hs(v) for v in x)
    return x


# --- small builders -----------------------------------------------------------

def poset(elements: Sequence[Hashable], leq: Callable[[Hashable, Hashable], bool], name: str = "") -> FinCat:
    """Poset as a category; the morphism ``a <= b`` has id ``(a, b)``."""
    mors = [((a, b), a, b) for a in elements for b in elements if leq(a, b)]
    comp = {((b, c), (a, b)): (a, c) for (_, a, b) in mors for (_, b2, c) in mors if b2 == b}
    return FinCat(elements, mors, {a: (a, a) for a in elements}, comp, name)


def ordinal_category(n: int) -> FinCat:
    return poset(list(range(n + 1)), lambda a, b: a <= b, name=f"[{n}]")


def codiscrete(elements: Sequence[Hashable], name: str = "") -> FinCat:
    """Contractible groupoid: exactly one morphism between any two objects."""
    return poset(elements, lambda a, b: True, name=name)


def discrete(elements: Sequence[Hashable], name: str = "") -> FinCat:
    return poset(elements, lambda a, b: a == b, name=name)


def group(elements: Sequence[Hashable], mult: Callable, unit: Hashable, name: str = "") -> FinCat:
    mors = [(g, "*", "*") for g in elements]
    comp = {(g, f): mult(g, f) for g in elements for f in elements}
    return FinCat(["*"], mors, {"*": unit}, comp, name)


def terminal_category() -> FinCat:
    return ordinal_category(0)


def parallel_pair() -> FinCat:
    mors = [("1a", "a", "a"), ("1b", "b", "b"), ("f", "a", "b"), ("g", "a", "b")]
    comp = {("1a", "1a"): "1a", ("1b", "1b"): "1b"}
    for m in ("f", "g"):
        comp[(m, "1a")] = m
        comp[("1b", m)] = m
    return FinCat(["a", "b"], mors, {"a": "1a", "b": "1b"}, comp, "parallel-pair")


def product_category(C: FinCat, D: FinCat, name: str = "") -> FinCat:
    objs = [(a, b) for a in C.objects for b in D.objects]
    mors = [((f, g), (C.src(f), D.src(g)), (C.tgt(f), D.tgt(g))) for f in C.morphisms for g in D.morphisms]
    comp = {}
    for (f, g), _, t in mors:
        for f2 in C.morphisms_from(t[0]):
            for g2 in D.morphisms_from(t[1]):
                comp[((f2, g2), (f, g))] = (C.compose(f2, f), D.compose(g2, g))
    return FinCat(objs, mors, {(a, b): (C.identity(a), D.identity(b)) for a, b in objs}, comp, name)


# --- functors -----------------------------------------------------------------

class Functor:
    def __init__(self, source: FinCat, target: FinCat, obj: dict, mor: dict, name: str = ""):
        self.source = source
        self.target = target
        self.obj = dict(obj)
        self.mor = dict(mor)
        self.name = name

    def __call__(self, f):
        return self.mor[f]

    def violations(self) -> list[dict]:
        C, D = self.source, self.target
        out = []
        for x in C.objects:
            if self.obj.get(x) not in D._into:
                out.append({"law": "object map", "object": x})
        if out:
            return out
        for f in C.morphisms:
            m = self.mor.get(f)
            if m is None or D._src.get(m) != self.obj[C.src(f)] or D._tgt.get(m) != self.obj[C.tgt(f)]:
                out.append({"law": "endpoints", "morphism": f})
        if out:
            return out
        for x in C.objects:
            if self.mor[C.identity(x)] != D.identity(self.obj[x]):
                out.append({"law": "identity", "object": x})
        for f in C.morphisms:
            for g in C.morphisms_from(C.tgt(f)):
                if self.mor[C.compose(g, f)] != D.compose(self.mor[g], self.mor[f]):
                    out.append({"law": "composition", "pair": (g, f)})
        return out

    def validate(self) -> "Functor":
        v = self.violations()
        if v:
            raise InvalidMap(f"not a functor: {v[:3]}")
        return self

    def is_isomorphism(self) -> bool:
        return (
            len(set(self.obj.values())) == len(self.target.objects) == len(self.source.objects)
            and len(set(self.mor.values())) == len(self.target.morphisms) == len(self.source.morphisms)
        )

    def to_json(self) -> dict:
        return {
            "kind": "functor",
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "objects": [[_js(a), _js(b)] for a, b in self.obj.items()],
            "morphisms": [[_js(a), _js(b)] for a, b in self.mor.items()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Functor":
        if data.get("kind") != "functor":
            raise InvalidMap("not a functor instance")
        C, D = FinCat.from_json(data["source"]), FinCat.from_json(data["target"])
        obj = {_hs(a): _hs(b) for a, b in data["objects"]}
        mor = {_hs(a): _hs(b) for a, b in data["morphisms"]}
        return cls(C, D, obj, mor).validate()

    def __repr__(self) -> str:
        return f"Functor({self.source.name or '?'} -> {self.target.name or '?'})"


def identity_functor(C: FinCat) -> Functor:
    return Functor(C, C, {x: x for x in C.objects}, {f: f for f in C.morphisms})


def compose_functors(G: Functor, F: Functor) -> Functor:
    return Functor(F.source, G.target, {x: G.obj[y] for x, y in F.obj.items()}, {f: G.mor[g] for f, g in F.mor.items()})


def constant_functor(C: FinCat, D: FinCat, d) -> Functor:
    return Functor(C, D, {x: d for x in C.objects}, {f: D.identity(d) for f in C.morphisms})


def nerve_of_functor(F: Functor, dim: int, source: TruncSSet | None = None, target: TruncSSet | None = None) -> SMap:
    NC = source if source is not None else nerve(F.source, dim)
    ND = target if target is not None else nerve(F.target, dim)

    def fn(n, x):
        return F.obj[x] if n == 0 else tuple(F.mor[f] for f in x)

    return SMap.from_function(NC, ND, fn, dim)


def enumerate_functors(
    C: FinCat,
    D: FinCat,
    *,
    allowed_objects: Callable[[Hashable], Iterable] | None = None,
    allowed_morphisms: Callable[[Hashable], Iterable] | None = None,
    limit: int | None = None,
) -> Iterator[Functor]:
    """All functors ``C -> D`` (optionally restricted pointwise)."""
    objs = C.objects
    nonid = [f for f in C.morphisms if not C.is_identity(f)]
    count = 0

    def obj_choices(x):
        return list(allowed_objects(x)) if allowed_objects else D.objects

    def mor_rec(i: int, obj: dict, mor: dict):
        nonlocal count
        if i == len(nonid):
            count += 1
            yield Functor(C, D, obj, dict(mor))
            return
        f = nonid[i]
        cands = D.hom(obj[C.src(f)], obj[C.tgt(f)])
        if allowed_morphisms is not None:
            allow = set(allowed_morphisms(f))
            cands = [m for m in cands if m in allow]
        for m in cands:
            mor[f] = m
            if _composition_ok(C, D, mor, f):
                yield from mor_rec(i + 1, obj, mor)
                if limit is not None and count >= limit:
                    return
            del mor[f]

    def obj_rec(i: int, obj: dict):
        if i == len(objs):
            mor = {C.identity(x): D.identity(obj[x]) for x in objs}
            yield from mor_rec(0, obj, mor)
            return
        for d in obj_choices(objs[i]):
            obj[objs[i]] = d
            yield from obj_rec(i + 1, obj)
            if limit is not None and count >= limit:
                return
        obj.pop(objs[i], None)

    yield from obj_rec(0, {})


def _composition_ok(C: FinCat, D: FinCat, mor: dict, f) -> bool:
    """Check every composition relation among assigned morphisms that
    involves ``f``."""
    a, b = C.src(f), C.tgt(f)
    for g in C.morphisms_from(b):
        if g in mor:
            h = C.compose(g, f)
            if h in mor and D.compose(mor[g], mor[f]) != mor[h]:
                return False
    for g in C.morphisms_into(a):
        if g in mor:
            h = C.compose(f, g)
            if h in mor and D.compose(mor[f], mor[g]) != mor[h]:
                return False
    # f as a composite of assigned morphisms
    for g in C.morphisms_from(a):
        if g in mor:
            for k in C.morphisms_from(C.tgt(g)):
                if k in mor and C.compose(k, g) == f and D.compose(mor[k], mor[g]) != mor[f]:
                    return False
    return True


# --- presheaves and discrete fibrations ---------------------------------------

class Presheaf:
    def __init__(self, base: FinCat, fiber: dict, action: dict, name: str = ""):
        self.base = base
        self.fiber = {x: list(v) for x, v in fiber.items()}
        self.action = {f: dict(m) for f, m in action.items()}
        self.name = name

    def __call__(self, f, x):
        return self.action[f][x]

    def violations(self) -> list[dict]:
        C = self.base
        out = []
        for f in C.morphisms:
            m = self.action.get(f)
            src, tgt = self.fiber[C.src(f)], set(self.fiber[C.src(f)])
            if m is None or set(m) != set(self.fiber[C.tgt(f)]) or any(v not in tgt for v in m.values()):
                out.append({"law": "action total", "morphism": f})
        if out:
            return out
        for x in C.objects:
            m = self.action[C.identity(x)]
            if any(m[v] != v for v in self.fiber[x]):
                out.append({"law": "identity", "object": x})
        for f in C.morphisms:
            for g in C.morphisms_from(C.tgt(f)):
                gf = self.action[C.compose(g, f)]
                ag, af = self.action[g], self.action[f]
                if any(gf[v] != af[ag[v]] for v in self.fiber[C.tgt(g)]):
                    out.append({"law": "composition", "pair": (g, f)})
        return out

    def validate(self) -> "Presheaf":
        v = self.violations()
        if v:
            raise InvalidMap(f"not a presheaf: {v[:3]}")
        return self

    def sizes(self) -> dict:
        return {x: len(v) for x, v in self.fiber.items()}

    def to_json(self) -> dict:
        C = self.base
        return {
            "kind": "presheaf",
            "base": C.to_json(),
            "fibers": [[_js(x), [_js(v) for v in self.fiber[x]]] for x in C.objects],
            "action": [[_js(f), [[_js(a), _js(b)] for a, b in self.action[f].items()]] for f in C.morphisms],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Presheaf":
        if data.get("kind") != "presheaf":
            raise InvalidMap("not a presheaf instance")
        C = FinCat.from_json(data["base"])
        fiber = {_hs(x): [_hs(v) for v in vs] for x, vs in data["fibers"]}
        action = {_hs(f): {_hs(a): _hs(b) for a, b in m} for f, m in data["action"]}
        return cls(C, fiber, action).validate()


def terminal_presheaf(C: FinCat) -> Presheaf:
    return Presheaf(C, {x: ["*"] for x in C.objects}, {f: {"*": "*"} for f in C.morphisms})


def presheaf_isomorphic(P: Presheaf, Q: Presheaf) -> bool:
    """Isomorphism of presheaves on the same base, by backtracking."""
    C = P.base
    if P.sizes() != Q.sizes():
        return False
    objs = C.objects
    pos: dict = {}

    def consistent(x) -> bool:
        for f in C.morphisms_into(x):
            a = C.src(f)
            if a in pos:
                mp, mq = P.action[f], Q.action[f]
                if any(pos[a][mp[v]] != mq[pos[x][v]] for v in P.fiber[x]):
                    return False
        for f in C.morphisms_from(x):
            b = C.tgt(f)
            if b in pos:
                mp, mq = P.action[f], Q.action[f]
                if any(pos[x][mp[v]] != mq[pos[b][v]] for v in P.fiber[b]):
                    return False
        return True

    def rec(i: int) -> bool:
        if i == len(objs):
            return True
        x = objs[i]
        from itertools import permutations

        for perm in permutations(Q.fiber[x]):
            pos[x] = dict(zip(P.fiber[x], perm))
            if consistent(x) and rec(i + 1):
                return True
        del pos[x]
        return False

    return rec(0)


class DiscFib:
    """A functor ``projection : total -> base`` with unique lifts of arrows
    into objects of the total category."""

    def __init__(self, projection: Functor):
        self.projection = projection
        self.total = projection.source
        self.base = projection.target

    def lift(self, e, alpha):
        """The unique morphism of ``total`` with target ``e`` over ``alpha``."""
        E, p = self.total, self.projection
        found = [m for m in E.morphisms_into(e) if p.mor[m] == alpha]
        if len(found) != 1:
            raise NotDiscFib(f"{len(found)} lifts of {alpha!r} into {e!r}")
        return found[0]

    def violations(self) -> list[dict]:
        E, B, p = self.total, self.base, self.projection
        out = []
        for e in E.objects:
            counts: dict = {}
            for m in E.morphisms_into(e):
                counts[p.mor[m]] = counts.get(p.mor[m], 0) + 1
            for alpha in B.morphisms_into(p.obj[e]):
                if counts.get(alpha, 0) != 1:
                    out.append({"object": e, "morphism": alpha, "lifts": counts.get(alpha, 0)})
        return out

    def is_valid(self) -> bool:
        return not self.violations()

    def validate(self) -> "DiscFib":
        v = self.violations()
        if v:
            raise NotDiscFib("unique lifting fails", v)
        return self


def grothendieck(P: Presheaf) -> DiscFib:
    """Total category of elements: objects ``(c, x)``; the morphism
    ``(alpha, x')`` over ``alpha : c -> c'`` goes ``(c, P(alpha) x') -> (c', x')``."""
    C = P.base
    objs = [(c, x) for c in C.objects for x in P.fiber[c]]
    mors = []
    for f in C.morphisms:
        a, b = C.src(f), C.tgt(f)
        for x in P.fiber[b]:
            mors.append(((f, x), (a, P.action[f][x]), (b, x)))
    comp = {}
    for (f, x), _, (b, _) in mors:
        for g in C.morphisms_from(b):
            for y in P.fiber[C.tgt(g)]:
                if P.action[g][y] == x:
                    comp[((g, y), (f, x))] = (C.compose(g, f), y)
    ids = {(c, x): (C.identity(c), x) for c, x in objs}
    E = FinCat(objs, mors, ids, comp, name=f"el({P.name or 'P'})")
    proj = Functor(E, C, {o: o[0] for o in objs}, {m: m[0] for m, _, _ in mors})
    return DiscFib(proj)


def fiber_presheaf(q: DiscFib) -> Presheaf:
    E, B, p = q.total, q.base, q.projection
    q.validate()
    fiber = {b: [e for e in E.objects if p.obj[e] == b] for b in B.objects}
    action = {f: {e: E.src(q.lift(e, f)) for e in fiber[B.tgt(f)]} for f in B.morphisms}
    return Presheaf(B, fiber, action)


def pullback_presheaf(P: Presheaf, F: Functor) -> Presheaf:
    """``F^* P`` on the source of ``F``."""
    C = F.source
    return Presheaf(C, {x: P.fiber[F.obj[x]] for x in C.objects}, {f: P.action[F.mor[f]] for f in C.morphisms})


# --- commas and components ----------------------------------------------------

def comma_into(F: Functor, d) -> FinCat:
    """``d | F``: objects ``(c, alpha : d -> F c)``; morphisms ``(gamma, alpha)``
    from ``(c, alpha)`` to ``(c', F(gamma) . alpha)``."""
    C, D = F.source, F.target
    objs = [(c, a) for c in C.objects for a in D.hom(d, F.obj[c])]
    mors = []
    for c, a in objs:
        for g in C.morphisms_from(c):
            mors.append(((g, a), (c, a), (C.tgt(g), D.compose(F.mor[g], a))))
    comp = {}
    for (g, a), _, (c2, a2) in mors:
        for h in C.morphisms_from(c2):
            comp[((h, a2), (g, a))] = (C.compose(h, g), a)
    ids = {(c, a): (C.identity(c), a) for c, a in objs}
    return FinCat(objs, mors, ids, comp, name=f"{d}|F")


class UnionFind:
    def __init__(self, items: Iterable[Hashable] = ()):
        self.parent = {x: x for x in items}

    def add(self, x) -> None:
        self.parent.setdefault(x, x)

    def find(self, x):
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra

    def classes(self) -> list[list]:
        groups: dict = {}
        for x in self.parent:
            groups.setdefault(self.find(x), []).append(x)
        return list(groups.values())


def pi0(C: FinCat) -> list[list]:
    """Connected components, each listed in object order, ordered by first object."""
    uf = UnionFind(C.objects)
    for f in C.morphisms:
        uf.union(C.src(f), C.tgt(f))
    return uf.classes()


# --- twisted arrows -----------------------------------------------------------

def twisted_arrow(C: FinCat) -> FinCat:
    """Objects are morphisms of ``C``.  The morphism ``(a, f, b)`` with
    ``a : x' -> src f`` and ``b : tgt f -> y'`` goes from ``f`` to ``b . f . a``."""
    mors = []
    for f in C.morphisms:
        x, y = C.src(f), C.tgt(f)
        for a in C.morphisms_into(x):
            fa = C.compose(f, a)
            for b in C.morphisms_from(y):
                mors.append(((a, f, b), f, C.compose(b, fa)))
    comp = {}
    for (a, f, b), _, t in mors:
        for a2 in C.morphisms_into(C.src(t)):
            for b2 in C.morphisms_from(C.tgt(t)):
                comp[((a2, t, b2), (a, f, b))] = (C.compose(a, a2), f, C.compose(b2, b))
    ids = {f: (C.identity(C.src(f)), f, C.identity(C.tgt(f))) for f in C.morphisms}
    return FinCat(list(C.morphisms), mors, ids, comp, name=f"Tw({C.name})")


# --- fundamental category -----------------------------------------------------

class FundamentalCategory(FinCat):
    """``tau_1 X``.  Morphism ids are ``(a, word)`` with ``word`` the
    shortlex-least tuple of nondegenerate edge indices representing it."""

    X: TruncSSet
    edge_class: list

    def edge_morphism(self, e: int):
        """Class of the edge with index ``e`` in ``X_1``."""
        return self.edge_class[e]


def fundamental_category(X: TruncSSet, budget: int | None = None) -> FundamentalCategory:
    """Presentation: generators ``X_1``, relations ``s_0 x = id`` and
    ``d_0 t . d_2 t = d_1 t`` for ``t`` in ``X_2``.  Hom-sets are computed by
    coset enumeration of the right action on ``Hom(a, -)`` for each object
    ``a``; ``budget`` bounds the number of coset definitions per object."""
    if budget is None:
        budget = default_budget()
    if X.dim < 1:
        raise InvalidCategory("fundamental category needs edges")
    n0 = X.size(0)
    src, tgt = X.faces[1][1], X.faces[1][0]
    degen_edges = set(X.degens[0][0])
    gens = [e for e in range(X.size(1)) if e not in degen_edges]
    out_edges: list[list[int]] = [[] for _ in range(n0)]
    for e in gens:
        out_edges[src[e]].append(e)
    # relations rooted at each vertex: (word, word)
    rels: list[list[tuple[tuple, tuple]]] = [[] for _ in range(n0)]

    def word(e: int) -> tuple:
        return () if e in degen_edges else (e,)

    if X.dim >= 2:
        d0, d1, d2 = X.faces[2]
        seen = set()
        for t in range(X.size(2)):
            lhs = word(d2[t]) + word(d0[t])
            rhs = word(d1[t])
            if lhs == rhs:
                continue
            key = (src[d1[t]], lhs, rhs)
            if key in seen:
                continue
            seen.add(key)
            v = X.faces[1][1][d2[t]]
            rels[v].append((lhs, rhs))

    homs: list[dict[tuple, int]] = []
    reduce_tables = []
    for a in range(n0):
        words, tables = _enumerate_hom_from(a, out_edges, rels, tgt, budget)
        homs.append(words)
        reduce_tables.append(tables)

    objects = list(X.levels[0])
    mors = []
    ids = {}
    for a in range(n0):
        words = homs[a]
        for w, b in words.items():
            mid = (objects[a], tuple(X.levels[1][e] for e in w))
            mors.append((mid, objects[a], objects[b]))
        ids[objects[a]] = (objects[a], ())
    # composition: follow g's word from f's state
    idx_of = {}
    for a in range(n0):
        for w in homs[a]:
            idx_of[(a, w)] = (objects[a], tuple(X.levels[1][e] for e in w))
    comp = {}
    for a in range(n0):
        tab, state_of_word, word_of_state = reduce_tables[a]
        for wf, b in homs[a].items():
            s = state_of_word[wf]
            for wg, c in homs[b].items():
                t = s
                for e in wg:
                    t = tab[t][e]
                comp[(idx_of[(b, wg)], idx_of[(a, wf)])] = idx_of[(a, word_of_state[t])]
    C = FundamentalCategory(objects, mors, ids, comp, name=f"tau1({X.name})")
    C.X = X
    C.edge_class = []
    for e in range(X.size(1)):
        a = src[e]
        if e in degen_edges:
            C.edge_class.append(ids[objects[a]])
        else:
            tab, state_of_word, word_of_state = reduce_tables[a]
            C.edge_class.append(idx_of[(a, word_of_state[tab[0][e]])])
    return C


def _enumerate_hom_from(a, out_edges, rels, tgt, budget):
    """Coset enumeration (HLT strategy) of paths from ``a`` modulo relations.
    Returns ``{shortlex word: target vertex}`` and the reduced action table."""
    obj = [a]
    rows: list[dict[int, int]] = [{}]
    parent = [0]
    defs = 1

    def find(s: int) -> int:
        while parent[s] != s:
            parent[s] = parent[parent[s]]
            s = parent[s]
        return s

    def new_state(v: int) -> int:
        nonlocal defs
        defs += 1
        if defs > budget:
            raise BudgetExceeded(f"fundamental category: more than {budget} coset definitions from vertex {a}")
        obj.append(v)
        rows.append({})
        parent.append(len(parent))
        return len(parent) - 1

    def merge(x: int, y: int) -> None:
        queue = [(x, y)]
        while queue:
            x, y = queue.pop()
            x, y = find(x), find(y)
            if x == y:
                continue
            if x > y:
                x, y = y, x
            parent[y] = x
            for e, t in rows[y].items():
                u = rows[x].get(e)
                if u is None:
                    rows[x][e] = t
                else:
                    queue.append((u, t))
            rows[y] = {}

    def trace(s: int, w: tuple) -> int:
        for e in w:
            s = find(s)
            t = rows[s].get(e)
            if t is None:
                t = new_state(tgt[e])
                rows[s][e] = t
            s = t
        return find(s)

    i = 0
    while i < len(parent):
        if find(i) != i:
            i += 1
            continue
        v = obj[i]
        for lhs, rhs in rels[v]:
            if find(i) != i:
                break
            x = trace(i, lhs)
            y = trace(find(i), rhs)
            merge(x, y)
        if find(i) == i:
            for e in out_edges[v]:
                if e not in rows[i]:
                    rows[i][e] = new_state(tgt[e])
        i += 1
    # normalize table and collect shortlex words by BFS
    live = [s for s in range(len(parent)) if find(s) == s]
    tab = {s: {e: find(t) for e, t in rows[s].items()} for s in live}
    word_of_state = {0: ()}
    queue = deque([0])
    while queue:
        s = queue.popleft()
        for e in sorted(tab[s]):
            t = tab[s][e]
            if t not in word_of_state:
                word_of_state[t] = word_of_state[s] + (e,)
                queue.append(t)
    state_of_word = {w: s for s, w in word_of_state.items()}
    words = {w: obj[s] for s, w in sorted(word_of_state.items(), key=lambda kv: (len(kv[1]), kv[1]))}
    return words, (tab, state_of_word, word_of_state)


def el_to_tau1(X: TruncSSet, T: FundamentalCategory, n: int, j: int, alpha) -> Hashable:
    """Image in ``tau_1 X`` of the morphism ``alpha : (m, alpha^* x) -> (n, x)`` of
    ``el(X)`` for ``x`` the ``j``-th n-simplex: the class of the edge
    ``(alpha(m), n)`` of ``x``."""
    from .ordinal import OrdinalMap

    e = X.op_table(OrdinalMap(1, n, (alpha.images[-1], n)))[j] if n >= 1 else X.degens[0][0][j]
    return T.edge_morphism(e)


# --- presheaf enumeration -----------------------------------------------------

def generating_morphisms(C: FinCat) -> list:
    """A set of non-identity morphisms generating ``C`` under composition,
    chosen greedily in morphism order."""
    gens: list = []
    closure = {C.identity(x) for x in C.objects}
    for f in C.morphisms:
        if f in closure:
            continue
        gens.append(f)
        closure = _closure(C, closure | {f})
    return gens


def _closure(C: FinCat, S: set) -> set:
    S = set(S)
    changed = True
    while changed:
        changed = False
        for f in list(S):
            for g in C.morphisms_from(C.tgt(f)):
                if g in S:
                    h = C.compose(g, f)
                    if h not in S:
                        S.add(h)
                        changed = True
    return S


def enumerate_presheaves(C: FinCat, max_fiber: int) -> Iterator[Presheaf]:
    """Presheaves on ``C`` with fibers ``{0, .., k-1}``, ``k <= max_fiber``,
    one per isomorphism class, in a deterministic order.

    Objects are added one at a time; after each step the partial presheaves
    on the full subcategory seen so far are reduced to canonical
    representatives.  Every presheaf is isomorphic to an extension of the
    representative of its restriction, so nothing is lost.
    """
    objs = C.objects
    layer: list[tuple[dict, dict]] = [({}, {})]  # (fiber sizes, action tables)
    seen_objs: set = set()
    for x in objs:
        seen_objs.add(x)
        new_mors = [
            f for f in C.morphisms
            if not C.is_identity(f) and x in (C.src(f), C.tgt(f))
            and C.src(f) in seen_objs and C.tgt(f) in seen_objs
        ]
        order = [f for f in C.morphisms if not C.is_identity(f) and C.src(f) in seen_objs and C.tgt(f) in seen_objs]
        reps: dict = {}
        for size, act in layer:
            for k in range(max_fiber + 1):
                size2 = dict(size)
                size2[x] = k
                for act2 in _extend_actions(C, new_mors, size2, act):
                    key = _canonical_form(C, order, size2, act2)
                    if key not in reps:
                        reps[key] = (size2, act2)
        layer = list(reps.values())
    for size, act in layer:
        fiber = {x: list(range(size[x])) for x in objs}
        action = {}
        for f in C.morphisms:
            t = act.get(f)
            if t is None:
                t = tuple(range(size[C.src(f)]))
            action[f] = dict(enumerate(t))
        yield Presheaf(C, fiber, action)


def _extend_actions(C: FinCat, new_mors: list, size: dict, act: dict) -> Iterator[dict]:
    act = dict(act)

    def table(f):
        if C.is_identity(f):
            return tuple(range(size[C.src(f)]))
        return act.get(f)

    def ok(f) -> bool:
        a, b = C.src(f), C.tgt(f)
        # P(g . h) = P(h) P(g) for every composable pair touching f
        pairs = [(g, f) for g in C.morphisms_from(b)] + [(f, h) for h in C.morphisms_into(a)]
        pairs += [(g, h) for h in C.morphisms_from(a) for g in C.morphisms_from(C.tgt(h)) if C.compose(g, h) == f]
        for g, h in pairs:
            tg, th, tgh = table(g), table(h), table(C.compose(g, h))
            if tg is None or th is None or tgh is None:
                continue
            if any(tgh[v] != th[tg[v]] for v in range(len(tg))):
                return False
        return True

    def rec(i: int):
        if i == len(new_mors):
            yield dict(act)
            return
        f = new_mors[i]
        dom, cod = size[C.tgt(f)], size[C.src(f)]
        for t in product(range(cod), repeat=dom):
            act[f] = t
            if ok(f):
                yield from rec(i + 1)
        act.pop(f, None)

    yield from rec(0)


def _canonical_form(C: FinCat, order: list, size: dict, act: dict) -> tuple:
    """Lexicographically least transport of the action tables under
    permutations of the fibers, found by branching only on ties."""
    from itertools import permutations

    perms = {x: list(permutations(range(n))) for x, n in size.items()}
    branches: list[dict] = [{}]
    key = [tuple(sorted(size.items(), key=lambda kv: objs_index(C, kv[0])))]
    for f in order:
        a, b = C.src(f), C.tgt(f)
        best = None
        nxt: list[dict] = []
        for br in branches:
            pa_opts = [br[a]] if a in br else perms[a]
            for pa in pa_opts:
                pb_opts = [br[b]] if b in br else ([pa] if a == b else perms[b])
                for pb in pb_opts:
                    if a == b and pa != pb:
                        continue
                    inv_b = [0] * len(pb)
                    for i, v in enumerate(pb):
                        inv_b[v] = i
                    t = act[f]
                    val = tuple(pa[t[inv_b[v]]] for v in range(len(pb)))
                    if best is None or val < best:
                        best = val
                        nxt = []
                    if val == best:
                        nb = dict(br)
                        nb[a] = pa
                        nb[b] = pb
                        nxt.append(nb)
        key.append(best)
        uniq = {tuple(sorted((objs_index(C, o), p) for o, p in nb.items())): nb for nb in nxt}
        branches = list(uniq.values())
    return tuple(key)


def objs_index(C: FinCat, x) -> int:
    idx = getattr(C, "_obj_index", None)
    if idx is None:
        idx = {o: i for i, o in enumerate(C.objects)}
        C._obj_index = idx
    return idx[x]
