"""Categories of elements and the maps xi (last vertex) and lambda.

``el(X)`` is kept lazy: an object is ``(n, j)`` with ``j`` the index of an
n-simplex, and a morphism is ``(alpha, n, j)`` for ``alpha : [m] -> [n]``,
going from ``(m, alpha^* x_j)`` to ``(n, j)``.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Hashable, Iterator, Sequence

from . import ordinal as od
from .errors import DimensionMismatch, OutOfTruncation
from .ordinal import OrdinalMap
from .sset import SMap, TruncSSet, from_tables, nerve, sd


class ElCat:
    """Lazy category of elements of ``X`` restricted to objects of dimension
    at most ``el_dim``."""

    def __init__(self, X: TruncSSet, el_dim: int | None = None):
        if el_dim is None:
            el_dim = X.dim
        if el_dim > X.dim:
            raise OutOfTruncation("el_dim above the dimension bound")
        self.X = X
        self.el_dim = el_dim
        self.name = f"el({X.name})"
        self.objects = [(n, j) for n in range(el_dim + 1) for j in range(X.size(n))]
        self._into: dict = {}

    def src(self, f):
        alpha, n, j = f
        return (alpha.dom, self.X.op_table(alpha)[j])

    def tgt(self, f):
        return (f[1], f[2])

    def identity(self, x):
        return (od.identity(x[0]), x[0], x[1])

    def is_identity(self, f) -> bool:
        a = f[0]
        return a.dom == a.cod and a.images == tuple(range(a.dom + 1))

    def compose(self, g, f):
        beta, n2, j2 = g
        alpha, n, j = f
        if (n, j) != self.src(g):
            raise DimensionMismatch("morphisms of el(X) not composable")
        return (od.compose(beta, alpha), n2, j2)

    def morphisms_into(self, b):
        got = self._into.get(b)
        if got is None:
            n, j = b
            got = [(a, n, j) for m in range(self.el_dim + 1) for a in od.all_maps(m, n)]
            self._into[b] = got
        return got

    def morphisms_from(self, a):
        m, i = a
        out = []
        for n in range(self.el_dim + 1):
            for alpha in od.all_maps(m, n):
                t = self.X.op_table(alpha)
                out.extend((alpha, n, j) for j in range(self.X.size(n)) if t[j] == i)
        return out

    def hom(self, a, b):
        return [f for f in self.morphisms_into(b) if self.src(f) == a]

    @property
    def morphisms(self):
        return [f for b in self.objects for f in self.morphisms_into(b)]

    def projection(self, f) -> OrdinalMap:
        """Image of a morphism in the simplex category."""
        return f[0]


def el(X: TruncSSet, el_dim: int | None = None) -> ElCat:
    return ElCat(X, el_dim)


def nel(X: TruncSSet, dim: int, el_dim: int | None = None) -> TruncSSet:
    """Nerve of ``el(X)`` up to level ``dim``."""
    N = nerve(ElCat(X, el_dim), dim)
    N.name = f"Nel({X.name})"
    return N


def nel_of_map(p: SMap, dim: int, el_dim: int | None = None, N_src: TruncSSet | None = None, N_tgt: TruncSSet | None = None) -> SMap:
    """``Nel(p) : Nel(Y) -> Nel(X)``."""
    if N_src is None:
        N_src = nel(p.source, dim, el_dim)
    if N_tgt is None:
        N_tgt = nel(p.target, dim, el_dim)
    pc = p.components

    def fn(k: int, x):
        if k == 0:
            return (x[0], pc[x[0]][x[1]])
        return tuple((a, n, pc[n][j]) for a, n, j in x)

    return SMap.from_function(N_src, N_tgt, fn, dim)


# --- segment maps -------------------------------------------------------------

def _check_chain(chain: Sequence[OrdinalMap]) -> None:
    for f, g in zip(chain, chain[1:]):
        if f.cod != g.dom:
            raise DimensionMismatch(f"chain breaks between {f!r} and {g!r}")


def _ordinals(chain: Sequence[OrdinalMap], n0: int | None) -> list[int]:
    _check_chain(chain)
    if chain:
        return [chain[0].dom] + [f.cod for f in chain]
    if n0 is None:
        raise DimensionMismatch("an empty chain needs its object")
    return [n0]


def _push(chain: Sequence[OrdinalMap], start: list[int]) -> list[int]:
    """``f_k ... f_{i+1}(start[i])`` for each ``i``."""
    vals = list(start)
    for j, f in enumerate(chain, 1):
        im = f.images
        for i in range(j):
            vals[i] = im[vals[i]]
    return vals


def lower_segments(chain: Sequence[OrdinalMap], n0: int | None = None) -> OrdinalMap:
    """``beta(f) : [k] -> [n_k]``, ``i -> f_k ... f_{i+1}(n_i)``."""
    ns = _ordinals(chain, n0)
    return od._trusted(len(chain), ns[-1], tuple(_push(chain, ns)))


def middle_segments(chain: Sequence[OrdinalMap], n0: int | None = None) -> OrdinalMap:
    """``alpha(f) : Q[k] -> [n_k]``; ``i -> f_k ... f_{i+1}(n_i)`` and
    ``i' -> f_k ... f_{i+1}(0)`` (positions as in :func:`ordinal.q_position`)."""
    ns = _ordinals(chain, n0)
    k = len(chain)
    hi = _push(chain, ns)
    lo = _push(chain, [0] * (k + 1))
    # positions k', ..., 0', 0, ..., k
    return od._trusted(2 * k + 1, ns[-1], tuple(lo[::-1]) + tuple(hi))


def lower_segment_fillers(chain: Sequence[OrdinalMap], n0: int | None = None) -> list[OrdinalMap]:
    """Brute force: every ``b : [k] -> [n_k]`` completing a commutative ladder
    of last-point-preserving maps ``b_i : [i] -> [n_i]`` with top row ``d^top``."""
    ns = _ordinals(chain, n0)
    return [b for b in od.all_maps(len(chain), ns[-1]) if _lpp_components(chain, ns, b) is not None]


def _lpp_components(chain, ns, b):
    """Find last-point-preserving ``b_i : [i] -> [n_i]`` with ``b_k = b`` and
    ``f_{i+1} . b_i = b_{i+1} . d^top``; None if impossible, else the list
    (unique when it exists)."""
    k = len(chain)
    found = []

    def rec(i, comps_after):
        if i < 0:
            found.append(list(reversed(comps_after)))
            return
        nxt = comps_after[-1]
        target = nxt.images[:i + 1]  # b_{i+1} . d^top restricted
        for c in od.all_maps(i, ns[i]):
            if c.images[-1] != ns[i]:
                continue
            if tuple(chain[i].images[v] for v in c.images) == target:
                rec(i - 1, comps_after + [c])

    if b.images[-1] != ns[-1]:
        return None
    rec(k - 1, [b])
    return found[0] if found else None


def middle_segment_fillers(chain: Sequence[OrdinalMap], n0: int | None = None) -> list[OrdinalMap]:
    """Brute force: every ``a : Q[k] -> [n_k]`` admitting active components
    ``a_i : Q[i] -> [n_i]`` with ``a_k = a`` and
    ``f_{i+1} . a_i = a_{i+1} . Q(d^top)``."""
    ns = _ordinals(chain, n0)
    k = len(chain)
    out = []
    for a in od.all_maps(2 * k + 1, ns[-1]):
        if not od.is_active(a):
            continue
        if _active_components(chain, ns, a):
            out.append(a)
    return out


def _active_components(chain, ns, a) -> bool:
    k = len(chain)

    def rec(i, nxt) -> bool:
        if i < 0:
            return True
        target = od.compose(nxt, od.q_on_map(od.top_coface(i + 1))).images
        for c in od.all_maps(2 * i + 1, ns[i]):
            if od.is_active(c) and tuple(chain[i].images[v] for v in c.images) == target:
                if rec(i - 1, c):
                    return True
        return False

    return rec(k - 1, a)


# --- xi and lambda ------------------------------------------------------------

def _chain_of(E: ElCat, n: int, x) -> tuple[list[OrdinalMap], tuple[int, int]]:
    """Ordinal chain and top object of a simplex of ``Nel(X)``."""
    if n == 0:
        return [], x
    return [f[0] for f in x], (x[-1][1], x[-1][2])


def xi(X: TruncSSet, dim: int, N: TruncSSet | None = None, el_dim: int | None = None) -> SMap:
    """Last-vertex map ``Nel(X) -> X`` on levels ``0..dim``."""
    if dim > X.dim:
        raise OutOfTruncation("xi needs X up to the requested level")
    if N is None:
        N = nel(X, dim, el_dim)
    E = ElCat(X, el_dim)

    def comp(k: int, x):
        chain, (n, j) = _chain_of(E, k, x)
        beta = lower_segments(chain, n)
        return X.op_table(beta)[j]

    comps = [tuple(comp(k, x) for x in N.levels[k]) for k in range(min(dim, N.dim) + 1)]
    return SMap(N, X, comps)


def lambda_map(X: TruncSSet, dim: int, N: TruncSSet | None = None, el_dim: int | None = None, SdX: TruncSSet | None = None) -> SMap:
    """``lambda : Nel(X) -> Sd X`` on levels ``0..dim``."""
    if 2 * dim + 1 > X.dim:
        raise OutOfTruncation("lambda needs X up to level 2*dim+1")
    if N is None:
        N = nel(X, dim, el_dim)
    if SdX is None:
        SdX = sd(X)
    E = ElCat(X, el_dim)

    def comp(k: int, x):
        chain, (n, j) = _chain_of(E, k, x)
        a = middle_segments(chain, n)
        return X.op_table(a)[j]

    comps = [tuple(comp(k, x) for x in N.levels[k]) for k in range(min(dim, N.dim) + 1)]
    return SMap(N, SdX, comps)


def omega_object(k: int, j: int) -> tuple[int, int]:
    """``omega : el(Sd X) -> el(X)`` on objects: ``(k, rho) -> (2k+1, rho)``."""
    return (2 * k + 1, j)


def omega_morphism(f):
    alpha, k, j = f
    return (od.q_on_map(alpha), 2 * k + 1, j)


def nerve_of_omega(X: TruncSSet, dim: int, N_sd: TruncSSet, N_X: TruncSSet) -> SMap:
    """``N(omega) : Nel(Sd X) -> Nel(X)``.  The renaming identifies the
    object ``(k, rho)`` of ``el(Sd X)`` with ``(2k+1, rho)`` in ``el(X)``."""

    def fn(k: int, x):
        if k == 0:
            return omega_object(*x)
        return tuple(omega_morphism(f) for f in x)

    return SMap.from_function(N_sd, N_X, fn, dim)


# --- maps over X versus presheaves on el(X) -----------------------------------

class ElPresheaf:
    """Presheaf on ``el(X)``: ``fiber(n, j)`` is a list and ``act(alpha, n, j, e)``
    moves ``e`` in the fiber over ``(n, j)`` to the fiber over
    ``(m, alpha^* x_j)``."""

    def __init__(self, X: TruncSSet, fiber: Callable[[int, int], list], act: Callable[[OrdinalMap, int, int, Hashable], Hashable]):
        self.X = X
        self.fiber = fiber
        self.act = act


def smap_to_presheaf(q: SMap) -> ElPresheaf:
    """Fibers of ``q : Y -> X`` as a presheaf on ``el(X)``."""
    Y, X = q.source, q.target
    fibers = [[[] for _ in range(X.size(n))] for n in range(q.dim + 1)]
    for n in range(q.dim + 1):
        for y, x in enumerate(q.components[n]):
            fibers[n][x].append(Y.levels[n][y])

    def act(alpha, n, j, e):
        return Y.act(alpha, e)

    return ElPresheaf(X, lambda n, j: fibers[n][j], act)


def presheaf_to_smap(P: ElPresheaf, dim: int | None = None) -> SMap:
    """``Y_n = {(x, e) : e in P(n, x)}`` with ``alpha^*(x, e) = (alpha^* x, P(alpha) e)``."""
    X = P.X
    if dim is None:
        dim = X.dim
    levels = [[(x, e) for j, x in enumerate(X.levels[n]) for e in P.fiber(n, j)] for n in range(dim + 1)]
    js = [[j for j in range(X.size(n)) for _ in P.fiber(n, j)] for n in range(dim + 1)]
    index = [{y: i for i, y in enumerate(lv)} for lv in levels]

    def op(alpha: OrdinalMap):
        t = X.op_table(alpha)
        out = []
        for (x, e), j in zip(levels[alpha.cod], js[alpha.cod]):
            out.append(index[alpha.dom][(X.levels[alpha.dom][t[j]], P.act(alpha, alpha.cod, j, e))])
        return tuple(out)

    Y = from_tables(dim, levels, op, name=f"Y/{X.name}")
    return SMap(Y, X, js)


def smap_to_discfib(q: SMap) -> Callable:
    """Functor ``el(Y) -> el(X)`` as a pair of object/morphism maps."""

    def on_object(o):
        n, j = o
        return (n, q.components[n][j])

    def on_morphism(f):
        alpha, n, j = f
        return (alpha, n, q.components[n][j])

    return on_object, on_morphism
