"""Finite truncated simplicial sets and simplicial maps.

A :class:`TruncSSet` stores levels ``X_0 .. X_D`` as lists of opaque ids and
the generating face/degeneracy operators as index tables.  Every other
operator is evaluated through :meth:`TruncSSet.op_table`, which factors it
into generators and caches the resulting table.

Verdicts and constructions never reach above the stored bound ``D``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Iterator, Sequence

from . import ordinal as od
from .errors import DimensionMismatch, InvalidMap, InvalidSSet, OutOfTruncation
from .ordinal import OrdinalMap

Table = tuple[int, ...]


class TruncSSet:
    """A simplicial set known up to dimension ``dim``.

    ``faces[n][i]`` maps indices of level ``n`` to level ``n - 1`` and
    ``degens[n][i]`` maps level ``n`` to level ``n + 1``.
    """

    __slots__ = ("dim", "levels", "faces", "degens", "name", "_index", "_ops")

    def __init__(
        self,
        dim: int,
        levels: Sequence[Sequence[Hashable]],
        faces: Sequence[Sequence[Table]],
        degens: Sequence[Sequence[Table]],
        name: str = "",
    ):
        if dim < 0:
            raise InvalidSSet("negative dimension bound")
        if len(levels) != dim + 1:
            raise InvalidSSet(f"expected {dim + 1} levels, got {len(levels)}")
        self.dim = dim
        self.levels = [list(lv) for lv in levels]
        self.faces = [[tuple(t) for t in fs] for fs in faces]
        self.degens = [[tuple(t) for t in ds] for ds in degens]
        self.name = name
        self._index = []
        for n, lv in enumerate(self.levels):
            idx = {x: j for j, x in enumerate(lv)}
            if len(idx) != len(lv):
                raise InvalidSSet(f"duplicate ids in level {n}")
            self._index.append(idx)
        self._check_shapes()
        self._ops: dict[OrdinalMap, Table] = {}

    def _check_shapes(self) -> None:
        if len(self.faces) != self.dim + 1 or len(self.degens) != self.dim + 1:
            raise InvalidSSet("face/degeneracy tables must be indexed by level")
        for n in range(self.dim + 1):
            size = len(self.levels[n])
            nf = n + 1 if n >= 1 else 0
            nd = n + 1 if n < self.dim else 0
            if len(self.faces[n]) != nf or len(self.degens[n]) != nd:
                raise InvalidSSet(f"wrong number of generators at level {n}")
            for t in self.faces[n]:
                if len(t) != size or any(not 0 <= v < len(self.levels[n - 1]) for v in t):
                    raise InvalidSSet(f"face table at level {n} is not total")
            for t in self.degens[n]:
                if len(t) != size or any(not 0 <= v < len(self.levels[n + 1]) for v in t):
                    raise InvalidSSet(f"degeneracy table at level {n} is not total")

    # --- basic access -------------------------------------------------------

    def size(self, n: int) -> int:
        return len(self.levels[n])

    def sizes(self) -> list[int]:
        return [len(lv) for lv in self.levels]

    def index(self, n: int, x: Hashable) -> int:
        try:
            return self._index[n][x]
        except KeyError:
            raise KeyError(f"{x!r} is not a {n}-simplex of {self.name or 'X'}") from None

    def elem(self, n: int, j: int) -> Hashable:
        return self.levels[n][j]

    def is_empty(self) -> bool:
        return all(not lv for lv in self.levels)

    def __repr__(self) -> str:
        return f"TruncSSet({self.name or '?'}, dim={self.dim}, sizes={self.sizes()})"

    # --- operators ----------------------------------------------------------

    def op_table(self, alpha: OrdinalMap) -> Table:
        """Table of ``alpha^* : X_n -> X_m`` for ``alpha : [m] -> [n]``."""
        t = self._ops.get(alpha)
        if t is not None:
            return t
        if alpha.dom > self.dim or alpha.cod > self.dim:
            raise OutOfTruncation(f"{alpha!r} leaves dimension bound {self.dim}")
        word = od.generator_word(alpha)
        t = tuple(range(self.size(alpha.cod)))
        # alpha = w[-1] ... w[0], so alpha^* = w[0]^* ... w[-1]^*
        for gen in reversed(word):
            if gen.dom < gen.cod:
                i = next(j for j in range(gen.cod + 1) if j not in gen.images)
                g = self.faces[gen.cod][i]
            else:
                i = next(j for j in range(gen.dom) if gen.images[j] == gen.images[j + 1])
                g = self.degens[gen.cod][i]
            t = tuple(g[v] for v in t)
        self._ops[alpha] = t
        return t

    def act(self, alpha: OrdinalMap, x: Hashable) -> Hashable:
        j = self.index(alpha.cod, x)
        return self.levels[alpha.dom][self.op_table(alpha)[j]]

    def act_idx(self, alpha: OrdinalMap, j: int) -> int:
        return self.op_table(alpha)[j]

    def face(self, n: int, i: int, j: int) -> int:
        return self.faces[n][i][j]

    def degen(self, n: int, i: int, j: int) -> int:
        return self.degens[n][i][j]

    def vertex_table(self, n: int, v: int) -> Table:
        return self.op_table(OrdinalMap(0, n, (v,)))

    def last_vertex(self, n: int) -> Table:
        return self.op_table(od.last_vertex_inclusion(n))

    def first_vertex(self, n: int) -> Table:
        return self.op_table(od.first_vertex_inclusion(n))

    def long_edge(self, n: int) -> Table:
        return self.op_table(od.long_edge(n))

    def is_degenerate(self, n: int, j: int) -> bool:
        if n == 0:
            return False
        return any(j in set(t) for t in self.degens[n - 1])

    def degenerate_flags(self, n: int) -> list[bool]:
        flags = [False] * self.size(n)
        if n > 0:
            for t in self.degens[n - 1]:
                for v in t:
                    flags[v] = True
        return flags

    def truncate(self, d: int) -> "TruncSSet":
        if d > self.dim:
            raise OutOfTruncation(f"cannot truncate dimension {self.dim} to {d}")
        degens = [list(self.degens[n]) if n < d else [] for n in range(d + 1)]
        return TruncSSet(d, self.levels[: d + 1], self.faces[: d + 1], degens, self.name)

    # --- validation ---------------------------------------------------------

    def violations(self, limit: int | None = None) -> list[dict]:
        """Every failing simplicial identity, each with a witness element."""
        out: list[dict] = []
        F, S = self.faces, self.degens

        def bad(kind: str, n: int, i: int, j: int, x: int) -> None:
            out.append({"identity": kind, "level": n, "i": i, "j": j, "element": self.levels[n][x]})

        for n in range(2, self.dim + 1):
            for j in range(1, n + 1):
                for i in range(j):
                    # d_i d_j = d_{j-1} d_i
                    a, b = F[n - 1][i], F[n][j]
                    c, d = F[n - 1][j - 1], F[n][i]
                    for x in range(self.size(n)):
                        if a[b[x]] != c[d[x]]:
                            bad("d_i d_j = d_{j-1} d_i", n, i, j, x)
                            break
        for n in range(self.dim):
            for j in range(n + 1):
                s = S[n][j]
                for i in range(n + 2):
                    d = F[n + 1][i]
                    for x in range(self.size(n)):
                        y = d[s[x]]
                        if i == j or i == j + 1:
                            ok = y == x
                        elif i < j:
                            ok = y == S[n - 1][j - 1][F[n][i][x]]
                        else:
                            ok = y == S[n - 1][j][F[n][i - 1][x]]
                        if not ok:
                            bad("d_i s_j", n, i, j, x)
                            break
        for n in range(self.dim - 1):
            for j in range(n + 1):
                for i in range(j + 1):
                    # s_i s_j = s_{j+1} s_i  (i <= j)
                    a, b = S[n + 1][i], S[n][j]
                    c, d = S[n + 1][j + 1], S[n][i]
                    for x in range(self.size(n)):
                        if a[b[x]] != c[d[x]]:
                            bad("s_i s_j = s_{j+1} s_i", n, i, j, x)
                            break
        if limit is not None:
            out = out[:limit]
        return out

    def validate(self) -> "TruncSSet":
        v = self.violations()
        if v:
            raise InvalidSSet(f"{len(v)} simplicial identities fail", v)
        return self

    # --- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "kind": "trunc_sset",
            "dim": self.dim,
            "levels": [[_jsonable(x) for x in lv] for lv in self.levels],
            "faces": {str(n): [list(t) for t in self.faces[n]] for n in range(1, self.dim + 1)},
            "degeneracies": {str(n): [list(t) for t in self.degens[n]] for n in range(self.dim)},
        }

    @classmethod
    def from_json(cls, data: dict) -> "TruncSSet":
        if data.get("kind") != "trunc_sset":
            raise InvalidSSet("not a trunc_sset instance")
        dim = int(data["dim"])
        levels = [[_hashable(x) for x in lv] for lv in data["levels"]]
        faces = [[]] + [data["faces"][str(n)] for n in range(1, dim + 1)]
        degens = [data["degeneracies"][str(n)] for n in range(dim)] + [[]]
        return cls(dim, levels, faces, degens, data.get("name", ""))


def _jsonable(x):
    if isinstance(x, OrdinalMap):
        return list(x.images)
    if isinstance(x, (tuple, list)):
        return [_jsonable(v) for v in x]
    return x


def _hashable(x):
    if isinstance(x, list):
        return tuple(_hashable(v) for v in x)
    return x


def from_action(
    dim: int,
    levels: Sequence[Sequence[Hashable]],
    act: Callable[[OrdinalMap, Hashable], Hashable],
    name: str = "",
) -> TruncSSet:
    """Build a TruncSSet from an operator action evaluated on generators."""
    index = [{x: j for j, x in enumerate(lv)} for lv in levels]
    faces: list[list[Table]] = [[]]
    degens: list[list[Table]] = []
    for n in range(1, dim + 1):
        faces.append([tuple(index[n - 1][act(od.coface(n, i), x)] for x in levels[n]) for i in range(n + 1)])
    for n in range(dim):
        degens.append([tuple(index[n + 1][act(od.codegeneracy(n, i), x)] for x in levels[n]) for i in range(n + 1)])
    degens.append([])
    return TruncSSet(dim, levels, faces, degens, name)


def from_tables(dim: int, levels, op: Callable[[OrdinalMap], Table], name: str = "") -> TruncSSet:
    """Build a TruncSSet whose generator tables are computed by ``op``."""
    faces = [[]] + [[op(od.coface(n, i)) for i in range(n + 1)] for n in range(1, dim + 1)]
    degens = [[op(od.codegeneracy(n, i)) for i in range(n + 1)] for n in range(dim)] + [[]]
    return TruncSSet(dim, levels, faces, degens, name)


# --- simplicial maps ----------------------------------------------------------

class SMap:
    """Levelwise map ``source -> target`` on levels ``0 .. dim``."""

    __slots__ = ("source", "target", "components", "dim")

    def __init__(self, source: TruncSSet, target: TruncSSet, components: Sequence[Sequence[int]], dim: int | None = None):
        if dim is None:
            dim = min(source.dim, target.dim)
        if dim > min(source.dim, target.dim):
            raise OutOfTruncation("map components above a dimension bound")
        if len(components) < dim + 1:
            raise InvalidMap(f"need components for levels 0..{dim}")
        self.source = source
        self.target = target
        self.dim = dim
        self.components = [tuple(c) for c in components[: dim + 1]]
        for n, c in enumerate(self.components):
            if len(c) != source.size(n) or any(not 0 <= v < target.size(n) for v in c):
                raise InvalidMap(f"component {n} is not a function X_{n} -> Y_{n}")

    @classmethod
    def from_function(cls, source: TruncSSet, target: TruncSSet, fn: Callable[[int, Hashable], Hashable], dim: int | None = None) -> "SMap":
        if dim is None:
            dim = min(source.dim, target.dim)
        comps = [tuple(target.index(n, fn(n, x)) for x in source.levels[n]) for n in range(dim + 1)]
        return cls(source, target, comps, dim)

    def __call__(self, n: int, x: Hashable) -> Hashable:
        return self.target.levels[n][self.components[n][self.source.index(n, x)]]

    def naturality_failures(self) -> list[dict]:
        out = []
        X, Y, c = self.source, self.target, self.components
        for n in range(1, self.dim + 1):
            for i in range(n + 1):
                fx, fy = X.faces[n][i], Y.faces[n][i]
                for j in range(X.size(n)):
                    if c[n - 1][fx[j]] != fy[c[n][j]]:
                        out.append({"op": f"d_{i}", "level": n, "element": X.levels[n][j]})
                        break
        for n in range(self.dim):
            for i in range(n + 1):
                sx, sy = X.degens[n][i], Y.degens[n][i]
                for j in range(X.size(n)):
                    if c[n + 1][sx[j]] != sy[c[n][j]]:
                        out.append({"op": f"s_{i}", "level": n, "element": X.levels[n][j]})
                        break
        return out

    def validate(self) -> "SMap":
        bad = self.naturality_failures()
        if bad:
            raise InvalidMap(f"not simplicial: {bad[:3]}")
        return self

    def is_levelwise_bijective(self) -> bool:
        return all(
            len(set(self.components[n])) == self.source.size(n) == self.target.size(n)
            for n in range(self.dim + 1)
        )

    def truncate(self, d: int) -> "SMap":
        return SMap(self.source.truncate(d), self.target.truncate(d), self.components[: d + 1], d)

    def to_json(self) -> dict:
        return {
            "kind": "smap",
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "components": [list(c) for c in self.components],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SMap":
        if data.get("kind") != "smap":
            raise InvalidMap("not an smap instance")
        src = TruncSSet.from_json(data["source"])
        tgt = TruncSSet.from_json(data["target"])
        return cls(src, tgt, data["components"])

    def __repr__(self) -> str:
        return f"SMap({self.source.name or '?'} -> {self.target.name or '?'}, dim={self.dim})"


def identity_map(X: TruncSSet) -> SMap:
    return SMap(X, X, [tuple(range(X.size(n))) for n in range(X.dim + 1)])


def compose_maps(g: SMap, f: SMap) -> SMap:
    if f.target is not g.source and f.target.sizes()[: f.dim + 1] != g.source.sizes()[: f.dim + 1]:
        raise DimensionMismatch("maps are not composable")
    d = min(f.dim, g.dim)
    return SMap(f.source, g.target, [tuple(g.components[n][v] for v in f.components[n]) for n in range(d + 1)], d)


# --- basic objects ------------------------------------------------------------

def empty(dim: int) -> TruncSSet:
    return from_tables(dim, [[] for _ in range(dim + 1)], lambda a: (), name="empty")


def representable(n: int, dim: int) -> TruncSSet:
    """``Delta^n`` up to level ``dim``; k-simplices are maps ``[k] -> [n]``."""
    levels = [list(od.all_maps(k, n)) for k in range(dim + 1)]
    return from_action(dim, levels, lambda a, x: od.compose(x, a), name=f"Delta^{n}")


def terminal(dim: int) -> TruncSSet:
    return representable(0, dim)


def simplex_map(n: int, sigma: OrdinalMap, dim: int) -> SMap:
    """``Delta^m -> Delta^n`` induced by ``sigma : [m] -> [n]``."""
    src, tgt = representable(sigma.dom, dim), representable(n, dim)
    return SMap.from_function(src, tgt, lambda k, x: od.compose(sigma, x))


def yoneda_map(X: TruncSSet, n: int, x: Hashable, source: TruncSSet | None = None) -> SMap:
    """The map ``Delta^n -> X`` classifying ``x in X_n``."""
    if source is None:
        source = representable(n, X.dim)
    j = X.index(n, x)
    comps = [tuple(X.op_table(b)[j] for b in source.levels[k]) for k in range(min(source.dim, X.dim) + 1)]
    return SMap(source, X, comps)


def subcomplex_of_representable(n: int, dim: int, keep: Callable[[OrdinalMap], bool], name: str = "") -> TruncSSet:
    """Sub-simplicial set of ``Delta^n`` of maps accepted by ``keep``
    (``keep`` must be closed under precomposition)."""
    levels = [[x for x in od.all_maps(k, n) if keep(x)] for k in range(dim + 1)]
    return from_action(dim, levels, lambda a, x: od.compose(x, a), name=name)


def nerve(C, dim: int) -> TruncSSet:
    """Nerve of a finite category: level 0 are objects, level k the
    composable k-chains ``(f_1, ..., f_k)`` with ``f_1`` applied first."""
    levels: list[list] = [list(C.objects)]
    if dim >= 1:
        levels.append([(f,) for b in C.objects for f in C.morphisms_into(b)])
    for k in range(2, dim + 1):
        levels.append([(g,) + c for c in levels[k - 1] for g in C.morphisms_into(C.src(c[0]))])

    def vertex(c, i):
        return C.src(c[0]) if i == 0 else C.tgt(c[i - 1])

    def act(a: OrdinalMap, x):
        if a.cod == 0:
            return (C.identity(x),) * a.dom if a.dom else x
        verts = [vertex(x, i) for i in range(a.cod + 1)]
        if a.dom == 0:
            return verts[a.images[0]]
        out = []
        for j in range(a.dom):
            lo, hi = a.images[j], a.images[j + 1]
            if lo == hi:
                out.append(C.identity(verts[lo]))
            else:
                f = x[lo]
                for t in range(lo + 1, hi):
                    f = C.compose(x[t], f)
                out.append(f)
        return tuple(out)

    return from_action(dim, levels, act, name=f"N({getattr(C, 'name', '') or 'C'})")


# --- edgewise subdivision -----------------------------------------------------

def sd(X: TruncSSet, convention: str = "q") -> TruncSSet:
    """``Sd X = X . Q``: level k is ``X_{2k+1}``."""
    if X.dim < 1:
        raise OutOfTruncation("Sd needs dimension at least 1")
    d = (X.dim - 1) // 2
    levels = [X.levels[2 * k + 1] for k in range(d + 1)]
    return from_tables(d, levels, lambda a: X.op_table(od.q_on_map(a, convention)), name=f"Sd({X.name})")


def sd_of_map(f: SMap, source: TruncSSet | None = None, target: TruncSSet | None = None, convention: str = "q") -> SMap:
    if f.dim < 1:
        raise OutOfTruncation("Sd needs dimension at least 1")
    src = source if source is not None else sd(f.source, convention)
    tgt = target if target is not None else sd(f.target, convention)
    d = min(src.dim, tgt.dim, (f.dim - 1) // 2)
    return SMap(src, tgt, [f.components[2 * k + 1] for k in range(d + 1)], d)


# --- decalage, slices, intervals ---------------------------------------------

def _top_extend(a: OrdinalMap) -> OrdinalMap:
    return OrdinalMap(a.dom + 1, a.cod + 1, a.images + (a.cod + 1,))


def _bot_extend(a: OrdinalMap) -> OrdinalMap:
    return OrdinalMap(a.dom + 1, a.cod + 1, (0,) + tuple(v + 1 for v in a.images))


def dec_top(X: TruncSSet) -> TruncSSet:
    """Upper decalage: ``(Dec^T X)_k = X_{k+1}`` without top faces/degeneracies."""
    if X.dim < 1:
        raise OutOfTruncation("decalage needs dimension at least 1")
    return from_tables(X.dim - 1, X.levels[1:], lambda a: X.op_table(_top_extend(a)), name=f"DecT({X.name})")


def dec_bot(X: TruncSSet) -> TruncSSet:
    if X.dim < 1:
        raise OutOfTruncation("decalage needs dimension at least 1")
    return from_tables(X.dim - 1, X.levels[1:], lambda a: X.op_table(_bot_extend(a)), name=f"DecB({X.name})")


def _restrict(X: TruncSSet, keep: list[list[int]], extend: Callable[[OrdinalMap], OrdinalMap], shift: int, name: str) -> TruncSSet:
    """Sub-object of a shifted ``X`` on the given index sets (closed under the
    shifted operators)."""
    d = X.dim - shift
    pos = [{j: p for p, j in enumerate(ks)} for ks in keep]
    levels = [[X.levels[k + shift][j] for j in keep[k]] for k in range(d + 1)]

    def op(a: OrdinalMap) -> Table:
        t = X.op_table(extend(a))
        return tuple(pos[a.dom][t[j]] for j in keep[a.cod])

    return from_tables(d, levels, op, name=name)


def slice_over(X: TruncSSet, x: Hashable) -> TruncSSet:
    """``X_{/x}``: ``(k+1)``-simplices whose last vertex is ``x``."""
    if X.dim < 1:
        raise OutOfTruncation("slice needs dimension at least 1")
    v = X.index(0, x)
    keep = [[j for j, w in enumerate(X.last_vertex(k + 1)) if w == v] for k in range(X.dim)]
    return _restrict(X, keep, _top_extend, 1, f"{X.name}/{x}")


@dataclass
class Interval:
    space: TruncSSet
    initial: Hashable
    terminal: Hashable


def interval(X: TruncSSet, f: Hashable) -> Interval:
    """``I(f)``: ``(k+2)``-simplices whose long edge is ``f``."""
    if X.dim < 2:
        raise OutOfTruncation("interval needs dimension at least 2")
    e = X.index(1, f)
    keep = [[j for j, w in enumerate(X.long_edge(k + 2)) if w == e] for k in range(X.dim - 1)]
    space = _restrict(X, keep, lambda a: _top_extend(_bot_extend(a)), 2, f"I({f})")
    return Interval(space, X.levels[2][X.degens[1][0][e]], X.levels[2][X.degens[1][1][e]])


# --- limits -------------------------------------------------------------------

def pullback(f: SMap, g: SMap) -> tuple[TruncSSet, SMap, SMap]:
    """Levelwise fiber product of ``f : A -> X`` and ``g : B -> X``."""
    if f.target.sizes()[: min(f.dim, g.dim) + 1] != g.target.sizes()[: min(f.dim, g.dim) + 1]:
        raise DimensionMismatch("pullback needs a common target")
    d = min(f.dim, g.dim)
    A, B = f.source, g.source
    levels = []
    for n in range(d + 1):
        by_base: dict[int, list[int]] = {}
        for b, z in enumerate(g.components[n]):
            by_base.setdefault(z, []).append(b)
        levels.append([(a, b) for a, z in enumerate(f.components[n]) for b in by_base.get(z, ())])
    index = [{x: j for j, x in enumerate(lv)} for lv in levels]

    def op(alpha: OrdinalMap) -> Table:
        ta, tb = A.op_table(alpha), B.op_table(alpha)
        return tuple(index[alpha.dom][(ta[a], tb[b])] for a, b in levels[alpha.cod])

    ids = [[(A.levels[n][a], B.levels[n][b]) for a, b in levels[n]] for n in range(d + 1)]
    P = from_tables(d, ids, op, name=f"({A.name} x {B.name})")
    pa = SMap(P, A, [tuple(a for a, _ in levels[n]) for n in range(d + 1)], d)
    pb = SMap(P, B, [tuple(b for _, b in levels[n]) for n in range(d + 1)], d)
    return P, pa, pb


# --- map enumeration and isomorphism search -----------------------------------

def _element_order(A: TruncSSet, dim: int) -> list[tuple[int, int]]:
    """Elements of ``A`` so that each comes after all of its faces and right
    after its last new vertex (keeps backtracking local)."""
    keyed = []
    for n in range(dim + 1):
        vt = [A.vertex_table(n, v) for v in range(n + 1)]
        for j in range(A.size(n)):
            keyed.append((max(t[j] for t in vt), n, j))
    keyed.sort()
    return [(n, j) for _, n, j in keyed]


def enumerate_maps(
    A: TruncSSet,
    W: TruncSSet,
    *,
    over: tuple[SMap, SMap] | None = None,
    injective: bool = False,
    dim: int | None = None,
    limit: int | None = None,
    hint: Callable[[int, int], int] | None = None,
) -> Iterator[list[list[int]]]:
    """Yield component tables of simplicial maps ``A -> W`` up to ``dim``.

    With ``over=(p, g)`` for ``p : W -> Z`` and ``g : A -> Z`` only maps
    ``h`` with ``p h = g`` are produced.  ``hint(n, j)`` names a candidate
    image tried first for the ``j``-th n-simplex; the search stays complete.
    """
    if dim is None:
        dim = min(A.dim, W.dim)
    if over is not None:
        p, g = over
        dim = min(dim, p.dim, g.dim)
    order = _element_order(A, dim)
    deg_src: list[list[list[tuple[int, int]]]] = [[[] for _ in range(A.size(n))] for n in range(dim + 1)]
    for n in range(dim):
        for i in range(n + 1):
            for j, y in enumerate(A.degens[n][i]):
                deg_src[n + 1][y].append((i, j))
    by_faces: list[dict[tuple, list[int]]] = []
    for n in range(dim + 1):
        idx: dict[tuple, list[int]] = {}
        for w in range(W.size(n)):
            key = tuple(W.faces[n][i][w] for i in range(n + 1)) if n else ()
            if over is not None:
                key = key + (p.components[n][w],)
            idx.setdefault(key, []).append(w)
        by_faces.append(idx)
    phi = [[-1] * A.size(n) for n in range(dim + 1)]
    used = [set() for _ in range(dim + 1)] if injective else None
    produced = 0

    def candidates(n: int, j: int) -> list[int]:
        key = tuple(phi[n - 1][A.faces[n][i][j]] for i in range(n + 1)) if n else ()
        if over is not None:
            key = key + (g.components[n][j],)
        cands = by_faces[n].get(key, [])
        srcs = deg_src[n][j]
        if srcs:
            forced = {W.degens[n - 1][i][phi[n - 1][y]] for i, y in srcs}
            if len(forced) != 1:
                return []
            (w,) = forced
            return [w] if w in cands else []
        if hint is not None and len(cands) > 1:
            h = hint(n, j)
            if h in cands:
                return [h] + [w for w in cands if w != h]
        return cands

    def rec(pos: int):
        nonlocal produced
        if pos == len(order):
            produced += 1
            yield [list(c) for c in phi]
            return
        n, j = order[pos]
        for w in candidates(n, j):
            if used is not None:
                if w in used[n]:
                    continue
                used[n].add(w)
            phi[n][j] = w
            yield from rec(pos + 1)
            if limit is not None and produced >= limit:
                return
            phi[n][j] = -1
            if used is not None:
                used[n].discard(w)

    yield from rec(0)


def all_maps_between(A: TruncSSet, W: TruncSSet, dim: int | None = None) -> list[SMap]:
    d = min(A.dim, W.dim) if dim is None else dim
    return [SMap(A, W, c, d) for c in enumerate_maps(A, W, dim=d)]


def find_isomorphism(
    A: TruncSSet,
    B: TruncSSet,
    *,
    over: tuple[SMap, SMap] | None = None,
    dim: int | None = None,
    hint: Callable[[int, int], int] | None = None,
) -> SMap | None:
    """An isomorphism ``A -> B`` (over a common base when ``over=(q, p)``
    with ``q : B -> Z``, ``p : A -> Z``), or ``None``."""
    d = min(A.dim, B.dim) if dim is None else dim
    if over is not None:
        d = min(d, over[0].dim, over[1].dim)
    if A.sizes()[: d + 1] != B.sizes()[: d + 1]:
        return None
    for comps in enumerate_maps(A, B, over=over, injective=True, dim=d, limit=1, hint=hint):
        return SMap(A, B, comps, d)
    return None


def isomorphic(A: TruncSSet, B: TruncSSet, dim: int | None = None) -> bool:
    return find_isomorphism(A, B, dim=dim) is not None


def isomorphic_over(p: SMap, q: SMap, dim: int | None = None, hint: Callable[[int, int], int] | None = None) -> SMap | None:
    """Isomorphism ``p.source -> q.source`` commuting with the projections."""
    return find_isomorphism(p.source, q.source, over=(q, p), dim=dim, hint=hint)


def same_id_hint(A: TruncSSet, B: TruncSSet) -> Callable[[int, int], int]:
    """Search hint: prefer the element of ``B`` carrying the same id."""

    def hint(n: int, j: int) -> int:
        return B._index[n].get(A.levels[n][j], -1)

    return hint
