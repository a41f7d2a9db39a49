"""Comprehensive and (ambifinal, culf) factorizations, and the untwisting
equivalence between culf maps over ``X`` and right fibrations over ``Sd X``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable

from . import ordinal as od
from .cat import (
    DiscFib,
    FinCat,
    FundamentalCategory,
    Functor,
    Presheaf,
    UnionFind,
    comma_into,
    fundamental_category,
    grothendieck,
    pi0,
)
from .checkers import is_right_fibration
from .errors import NotRightFibration, OutOfTruncation
from .ordinal import OrdinalMap
from .sset import (
    SMap,
    TruncSSet,
    enumerate_maps,
    isomorphic_over,
    from_tables,
    representable,
    sd,
    sd_of_map,
    simplex_map,
)


@dataclass
class Factorization:
    left: object
    right: object
    middle: object

    def composite_matches(self, original) -> bool:
        """``right . left == original`` (functors or simplicial maps)."""
        if isinstance(original, Functor):
            L, R = self.left, self.right
            return all(R.obj[L.obj[x]] == original.obj[x] for x in original.source.objects) and all(
                R.mor[L.mor[f]] == original.mor[f] for f in original.source.morphisms
            )
        L, R = self.left, self.right
        d = min(L.dim, R.dim, original.dim)
        for n in range(d + 1):
            if any(R.components[n][L.components[n][y]] != original.components[n][y] for y in range(original.source.size(n))):
                return False
        return True


# --- functors -----------------------------------------------------------------

def comprehensive_factorize_functor(F: Functor) -> Factorization:
    """``F = r . l`` with ``r`` the discrete fibration of ``P(d) = pi0(d | F)``
    and ``l(c) = (F c, [c, id])``.  A component is named by its first object
    in the comma category."""
    C, D = F.source, F.target
    comp_of: dict = {}
    fiber: dict = {}
    for d in D.objects:
        comps = pi0(comma_into(F, d))
        fiber[d] = []
        for cl in comps:
            rep = cl[0]
            fiber[d].append(rep)
            for o in cl:
                comp_of[(d, o)] = rep
    action = {}
    for alpha in D.morphisms:
        a, b = D.src(alpha), D.tgt(alpha)
        # (c, u : b -> F c) |-> (c, u . alpha)
        action[alpha] = {rep: comp_of[(a, (rep[0], D.compose(rep[1], alpha)))] for rep in fiber[b]}
    P = Presheaf(D, fiber, action, name="pi0(d|F)")
    q = grothendieck(P)
    E = q.total
    obj = {c: (F.obj[c], comp_of[(F.obj[c], (c, D.identity(F.obj[c])))]) for c in C.objects}
    mor = {}
    for g in C.morphisms:
        c2 = C.tgt(g)
        mor[g] = (F.mor[g], obj[c2][1])
    left = Functor(C, E, obj, mor)
    return Factorization(left, q.projection, q)


def sections_over(F: Functor, P: Presheaf) -> list[dict]:
    """Functors ``C -> grothendieck(P)`` over ``F : C -> D``, as families
    ``c |-> x_c in P(F c)`` with ``P(F g) x_c' = x_c`` for ``g : c -> c'``."""
    C = F.source
    objs = C.objects
    out: list[dict] = []
    sec: dict = {}

    def ok(c) -> bool:
        for g in C.morphisms_from(c):
            c2 = C.tgt(g)
            if c2 in sec and P.action[F.mor[g]][sec[c2]] != sec[c]:
                return False
        for g in C.morphisms_into(c):
            c1 = C.src(g)
            if c1 in sec and P.action[F.mor[g]][sec[c]] != sec[c1]:
                return False
        return True

    def rec(i: int) -> None:
        if i == len(objs):
            out.append(dict(sec))
            return
        c = objs[i]
        for x in P.fiber[F.obj[c]]:
            sec[c] = x
            if ok(c):
                rec(i + 1)
        sec.pop(c, None)

    rec(0)
    return out


def filler_counts(fac: Factorization, F: Functor, P: Presheaf) -> list[int]:
    """For each square ``u : C -> el(P)`` over ``F = r . l``, the number of
    diagonals ``M -> el(P)`` over ``r`` restricting to ``u`` along ``l``."""
    L, R = fac.left, fac.right
    counts = {tuple(sorted(u.items(), key=repr)): 0 for u in sections_over(F, P)}
    for h in sections_over(R, P):
        key = tuple(sorted(((c, h[L.obj[c]]) for c in F.source.objects), key=repr))
        counts[key] += 1
    return list(counts.values())


# --- right fibrations and presheaves on tau_1 ----------------------------------

def _edge_at(Z: TruncSSet, n: int, a: int) -> tuple[int, ...]:
    """Table ``Z_n -> Z_1`` of the edge from vertex ``a`` to the last vertex."""
    if n == 0:
        return Z.degens[0][0]
    return Z.op_table(OrdinalMap(1, n, (a, n)))


def rfib_from_presheaf(P: Presheaf, Z: TruncSSet, T: FundamentalCategory) -> SMap:
    """``R_n = {(rho, x) : x in P(last vertex of rho)}``;
    ``alpha^*(rho, x) = (alpha^* rho, P([edge alpha(m) -> n of rho]) x)``."""
    objs = T.objects
    levels = []
    owner = []
    for n in range(Z.dim + 1):
        lv, ow = [], []
        last = Z.last_vertex(n)
        for j, rho in enumerate(Z.levels[n]):
            for x in P.fiber[objs[last[j]]]:
                lv.append((rho, x))
                ow.append(j)
        levels.append(lv)
        owner.append(ow)
    index = [{y: i for i, y in enumerate(lv)} for lv in levels]

    def op(alpha: OrdinalMap):
        m, n = alpha.dom, alpha.cod
        t = Z.op_table(alpha)
        e = _edge_at(Z, n, alpha.images[-1])
        out = []
        for (rho, x), j in zip(levels[n], owner[n]):
            act = P.action[T.edge_morphism(e[j])]
            out.append(index[m][(Z.levels[m][t[j]], act[x])])
        return tuple(out)

    R = from_tables(Z.dim, levels, op, name=f"R/{Z.name}")
    return SMap(R, Z, owner)


def presheaf_from_rfib(p: SMap, T: FundamentalCategory) -> Presheaf:
    """Fibers of ``R_0`` with the action of edges by unique lifting."""
    R, Z = p.source, p.target
    if not is_right_fibration(p, 1).holds:
        raise NotRightFibration("no unique edge lifts")
    objs = T.objects
    fiber = {z: [] for z in objs}
    for r, z in enumerate(p.components[0]):
        fiber[objs[z]].append(R.levels[0][r])
    lift = {}
    d0, d1 = R.faces[1][0], R.faces[1][1]
    for e in range(R.size(1)):
        lift[(p.components[1][e], d0[e])] = d1[e]
    action = {}
    eindex = Z._index[1]
    for f in T.morphisms:
        a, word = f
        # word: edges applied first to last; act right to left on fibers
        b = T.tgt(f)
        table = {}
        for r in fiber[b]:
            ri = R.index(0, r)
            for eid in reversed(word):
                ri = lift[(eindex[eid], ri)]
            table[r] = R.levels[0][ri]
        action[f] = table
    return Presheaf(T, fiber, action)


def rfib_reflection(g: SMap, T: FundamentalCategory | None = None, budget: int | None = None) -> tuple[SMap, SMap]:
    """Right-fibration part of ``g : W -> Z`` and the unit ``W -> R``.

    ``P(z)`` is the set of pairs ``(w, q : z -> g(w))`` in ``tau_1 Z`` modulo
    ``(d_1 e, q) ~ (d_0 e, [g e] . q)`` for edges ``e`` of ``W``.
    """
    W, Z = g.source, g.target
    if T is None:
        T = fundamental_category(Z, budget)
    objs = T.objects
    pairs = []
    for z in objs:
        for w in range(W.size(0)):
            gw = objs[g.components[0][w]]
            for q in T.hom(z, gw):
                pairs.append((w, q))
    uf = UnionFind(pairs)
    if g.dim >= 1:
        d0, d1 = W.faces[1][0], W.faces[1][1]
        for e in range(W.size(1)):
            w1, w0 = d1[e], d0[e]
            ge = T.edge_morphism(g.components[1][e])
            for q in T.morphisms_into(objs[g.components[0][w1]]):
                uf.union((w1, q), (w0, T.compose(ge, q)))
    mpos = {m: i for i, m in enumerate(T.morphisms)}
    classes = {}
    reps_at: dict = {z: [] for z in objs}
    for cl in uf.classes():
        rep = min(cl, key=lambda wq: (wq[0], mpos[wq[1]]))
        reps_at[T.src(rep[1])].append(rep)
        for x in cl:
            classes[x] = rep
    fiber = {z: [_pair_id(W, r) for r in sorted(reps_at[z], key=lambda wq: (wq[0], mpos[wq[1]]))] for z in objs}
    action = {}
    for t in T.morphisms:
        action[t] = {_pair_id(W, (w, q)): _pair_id(W, classes[(w, T.compose(q, t))]) for w, q in reps_at[T.tgt(t)]}
    P = Presheaf(T, fiber, action, name="reflection")
    R = rfib_from_presheaf(P, Z, T)
    unit_comps = []
    for n in range(g.dim + 1):
        last = W.last_vertex(n)
        comp = []
        for y in range(W.size(n)):
            w = last[y]
            gw = objs[g.components[0][w]]
            rep = classes[(w, T.identity(gw))]
            comp.append(R.source.index(n, (Z.levels[n][g.components[n][y]], _pair_id(W, rep))))
        unit_comps.append(tuple(comp))
    unit = SMap(W, R.source, unit_comps, g.dim)
    return R, unit


def _pair_id(W: TruncSSet, wq) -> tuple:
    return (W.levels[0][wq[0]], wq[1])


# --- untwisting -----------------------------------------------------------------

def _middle_edge(alpha: OrdinalMap) -> OrdinalMap:
    """``A(alpha) = (0, alpha(0), alpha(m), n) : [3] -> [n]``."""
    return OrdinalMap(3, alpha.cod, (0, alpha.images[0], alpha.images[-1], alpha.cod))


def untwist(p: SMap, X: TruncSSet, dim: int | None = None, check: bool = True) -> SMap:
    """Culf map over ``X`` corresponding to the right fibration
    ``p : R -> Sd X``: the pullback of ``p`` along ``lambda``, read as a
    presheaf on ``el(X)``.

    ``Y_n = {(sigma, r) : p(r) = long edge of sigma}`` and
    ``alpha^*(sigma, r) = (alpha^* sigma, r')`` where ``r'`` is the source of
    the unique edge of ``R`` ending at ``r`` over ``A(alpha)^* sigma``.
    """
    R, S = p.source, p.target
    if dim is None:
        dim = X.dim
    if dim > X.dim or X.dim < 3:
        raise OutOfTruncation("untwist needs X up to level max(dim, 3)")
    if S.levels[0] != X.levels[1] or S.dim < 1 or S.levels[1] != X.levels[3]:
        raise OutOfTruncation("the right fibration must live over Sd X")
    if check and not is_right_fibration(p, 1).holds:
        raise NotRightFibration("untwist needs unique lifts of edges")
    by_vertex: list[list[int]] = [[] for _ in range(S.size(0))]
    for r, v in enumerate(p.components[0]):
        by_vertex[v].append(r)
    lift = {}
    d0, d1 = R.faces[1][0], R.faces[1][1]
    for e in range(R.size(1)):
        key = (p.components[1][e], d0[e])
        if key in lift:
            raise NotRightFibration("two lifts of an edge of Sd X")
        lift[key] = d1[e]
    levels, pairs = [], []
    for n in range(dim + 1):
        le = X.long_edge(n) if n >= 1 else X.degens[0][0]
        ps = [(j, r) for j in range(X.size(n)) for r in by_vertex[le[j]]]
        pairs.append(ps)
        levels.append([(X.levels[n][j], R.levels[0][r]) for j, r in ps])
    index = [{jr: i for i, jr in enumerate(ps)} for ps in pairs]

    def op(alpha: OrdinalMap):
        m, n = alpha.dom, alpha.cod
        t = X.op_table(alpha)
        a = X.op_table(_middle_edge(alpha))
        try:
            return tuple(index[m][(t[j], lift[(a[j], r)])] for j, r in pairs[n])
        except KeyError:
            raise NotRightFibration("missing edge lift in the right fibration") from None

    Y = from_tables(dim, levels, op, name=f"untwist/{X.name}")
    return SMap(Y, X, [tuple(j for j, _ in ps) for ps in pairs])


def culf_reflection(f: SMap, SdX: TruncSSet | None = None, T: FundamentalCategory | None = None, budget: int | None = None) -> Factorization:
    """(ambifinal, culf) factorization of ``f : Y -> X``: the culf part is
    the untwisting of the right-fibration reflection of ``Sd f``."""
    Y, X = f.source, f.target
    if SdX is None:
        SdX = sd(X)
    sdf = sd_of_map(f, target=SdX)
    if T is None:
        T = fundamental_category(SdX, budget)
    R, unit = rfib_reflection(sdf, T)
    q = untwist(R, X)
    C = q.source
    comps = []
    for n in range(f.dim + 1):
        le = Y.long_edge(n) if n >= 1 else Y.degens[0][0]
        comp = []
        for y in range(Y.size(n)):
            r = unit.components[0][le[y]]
            comp.append(C.index(n, (X.levels[n][f.components[n][y]], R.source.levels[0][r])))
        comps.append(tuple(comp))
    left = SMap(Y, C, comps, f.dim)
    return Factorization(left, q, C)


# --- the right adjoint of Sd ---------------------------------------------------------

class SdRightAdjoint:
    """``(Q_* W)_n`` = simplicial maps ``Sd(Delta^n) -> W``, for ``n <= W.dim // 2``
    (``Sd Delta^n`` has no nondegenerate simplices above level ``2n``, so these
    hom-sets are exact)."""

    def __init__(self, W: TruncSSet, n_max: int | None = None):
        top = W.dim // 2
        if n_max is None:
            n_max = top
        if n_max > top:
            raise OutOfTruncation(f"Q_* W is only exact up to level {top}")
        self.W = W
        self.n_max = n_max
        # all levels up to 2 * n_max, so that degeneracies stay inside
        top_level = 2 * n_max
        self.top_level = top_level
        self.sd_simplex = [sd(representable(n, 2 * top_level + 1)) for n in range(n_max + 1)]
        self.maps = [
            [tuple(tuple(c) for c in comps) for comps in enumerate_maps(self.sd_simplex[n], W, dim=top_level)]
            for n in range(n_max + 1)
        ]
        levels = self.maps
        index = [{m: i for i, m in enumerate(lv)} for lv in levels]

        def op(alpha: OrdinalMap):
            m, n = alpha.dom, alpha.cod
            S_m, S_n = self.sd_simplex[m], self.sd_simplex[n]
            # Sd(alpha) on levels 0..2m
            pre = [tuple(S_n.index(k, od.compose(alpha, x)) for x in S_m.levels[k]) for k in range(top_level + 1)]
            return tuple(index[m][tuple(tuple(phi[k][v] for v in pre[k]) for k in range(top_level + 1))] for phi in levels[n])

        self.space = from_tables(n_max, [list(range(len(lv))) for lv in levels], op, name=f"Q*({W.name})")

    def components_of(self, n: int, i: int):
        return self.maps[n][i]

    def index_of(self, n: int, comps) -> int:
        return self.maps[n].index(tuple(tuple(c) for c in comps))


def q_star(W: TruncSSet, n_max: int | None = None) -> SdRightAdjoint:
    return SdRightAdjoint(W, n_max)


def q_star_map(p: SMap, QR: SdRightAdjoint, QZ: SdRightAdjoint) -> SMap:
    """``Q_* p`` by postcomposition."""
    if QR.n_max != QZ.n_max:
        raise OutOfTruncation("Q_* p needs both sides computed to the same level")
    comps = []
    for n in range(QR.n_max + 1):
        index = {m: i for i, m in enumerate(QZ.maps[n])}
        comps.append(tuple(index[tuple(tuple(p.components[k][v] for v in phi[k]) for k in range(QR.top_level + 1))] for phi in QR.maps[n]))
    return SMap(QR.space, QZ.space, comps)


def eta_prime(X: TruncSSet, QS: SdRightAdjoint) -> SMap:
    """Unit ``X -> Q_* Sd X``: ``sigma |-> Sd(sigma)``."""
    SdX = QS.W
    if 2 * QS.top_level + 1 > X.dim:
        raise OutOfTruncation(f"the unit needs X up to level {2 * QS.top_level + 1}")
    comps = []
    for n in range(min(QS.n_max, X.dim) + 1):
        S = QS.sd_simplex[n]
        index = {m: i for i, m in enumerate(QS.maps[n])}
        row = []
        for j in range(X.size(n)):
            phi = tuple(tuple(SdX.index(k, X.levels[2 * k + 1][X.op_table(x)[j]]) for x in S.levels[k]) for k in range(QS.top_level + 1))
            row.append(index[phi])
        comps.append(tuple(row))
    return SMap(X, QS.space, comps, len(comps) - 1)


def eps_prime_vertex(QW: SdRightAdjoint, phi_index: int) -> int:
    """``epsilon' : Sd Q_* W -> W`` at level 0: a map ``Sd Delta^1 -> W`` goes
    to its value at the vertex ``(0, 1)``."""
    S = QW.sd_simplex[1]
    v = S.index(0, OrdinalMap(1, 1, (0, 1)))
    return QW.maps[1][phi_index][0][v]


def untwist_via_right_adjoint(p: SMap, X: TruncSSet, QR: SdRightAdjoint, QS: SdRightAdjoint) -> SMap:
    """Pullback of ``Q_* p`` along the unit ``X -> Q_* Sd X``, in the
    levels where ``Q_*`` is exact."""
    eta = eta_prime(X, QS)
    Qp = q_star_map(p, QR, QS)
    d = min(eta.dim, Qp.dim)
    levels, comps = [], []
    for n in range(d + 1):
        by_base: dict[int, list[int]] = {}
        for i, z in enumerate(Qp.components[n]):
            by_base.setdefault(z, []).append(i)
        ps = [(j, i) for j in range(X.size(n)) for i in by_base.get(eta.components[n][j], ())]
        levels.append(ps)
        comps.append(tuple(j for j, _ in ps))
    index = [{x: i for i, x in enumerate(lv)} for lv in levels]
    QRs = QR.space

    def op(alpha: OrdinalMap):
        tX, tQ = X.op_table(alpha), QRs.op_table(alpha)
        return tuple(index[alpha.dom][(tX[j], tQ[i])] for j, i in levels[alpha.cod])

    ids = [[(X.levels[n][j], i) for j, i in levels[n]] for n in range(d + 1)]
    Y = from_tables(d, ids, op, name=f"Q*-untwist/{X.name}")
    return SMap(Y, X, comps, d)


# --- the Q_! -| Q^* adjunction on representables -----------------------------------

def eta_simplex(n: int, dim: int) -> SMap:
    """``Delta^n -> Sd(Delta^{2n+1})``, ``beta |-> Q(beta)``; vertex ``i`` goes to
    the arrow ``(n - i, n + i + 1)``."""
    src = representable(n, dim)
    tgt = sd(representable(2 * n + 1, 2 * dim + 1))
    return SMap.from_function(src, tgt, lambda k, b: od.q_on_map(b))


def eta_simplex_functor(n: int) -> Functor:
    """The poset map ``[n] -> Tw([2n+1])`` underlying :func:`eta_simplex`."""
    from .cat import ordinal_category, twisted_arrow

    C = ordinal_category(n)
    Tw = twisted_arrow(ordinal_category(2 * n + 1))
    obj = {i: (n - i, n + i + 1) for i in C.objects}
    mor = {}
    for (i, j) in C.morphisms:
        mor[(i, j)] = ((n - j, n - i), (n - i, n + i + 1), (n + i + 1, n + j + 1))
    return Functor(C, Tw, obj, mor)


def q_shriek_of_sd_simplex(n: int, dim: int) -> tuple[TruncSSet, SMap]:
    """``Q_! Sd(Delta^n)`` up to level ``dim`` and the counit to ``Delta^n``.

    Level ``j`` is the quotient of pairs ``(a, theta)`` with ``a`` a k-simplex
    of ``Sd Delta^n`` (a map ``[2k+1] -> [n]``, ``k <= 2n``) and
    ``theta : [j] -> [2k+1]``, by ``(alpha^* a, theta) ~ (a, Q(alpha) theta)``.
    The counit sends ``(a, theta)`` to ``a . theta``.
    """
    A = sd(representable(n, 4 * n + 1))
    K = A.dim
    levels, counit = [], []
    for j in range(dim + 1):
        pairs = [(k, a, th) for k in range(K + 1) for a in range(A.size(k)) for th in od.all_maps(j, 2 * k + 1)]
        uf = UnionFind(pairs)
        for k2 in range(K + 1):
            for k in range(K + 1):
                if k2 == k + 1:
                    gens = [od.codegeneracy(k, i) for i in range(k + 1)]
                elif k2 == k - 1:
                    gens = [od.coface(k, i) for i in range(k + 1)]
                else:
                    continue
                for alpha in gens:
                    t = A.op_table(alpha)
                    qa = od.q_on_map(alpha)
                    for a in range(A.size(k)):
                        for th in od.all_maps(j, 2 * k2 + 1):
                            uf.union((k2, t[a], th), (k, a, od.compose(qa, th)))
        reps = {}
        for cl in uf.classes():
            rep = min(cl, key=lambda x: (x[0], x[1], x[2].images))
            for x in cl:
                reps[x] = rep
        lv = sorted({r for r in reps.values()}, key=lambda x: (x[0], x[1], x[2].images))
        levels.append((lv, reps))
    ids = [[(k, A.levels[k][a], th) for k, a, th in lv] for lv, _ in levels]
    index = [{x: i for i, x in enumerate(lv)} for lv, _ in levels]

    def op(alpha: OrdinalMap):
        lv, _ = levels[alpha.cod]
        _, reps_m = levels[alpha.dom]
        return tuple(index[alpha.dom][reps_m[(k, a, od.compose(th, alpha))]] for k, a, th in lv)

    Y = from_tables(dim, ids, op, name=f"Q!Sd(Delta^{n})")
    D = representable(n, dim)
    comps = [tuple(D.index(j, od.compose(a, th)) for (_, a, th) in ids[j]) for j in range(dim + 1)]
    return Y, SMap(Y, D, comps)


# --- roundtrips -------------------------------------------------------------------

def rfib_roundtrip(p: SMap, X: TruncSSet, q: SMap | None = None) -> SMap | None:
    """Isomorphism ``Sd(untwist p) -> R`` over ``Sd X``, found by search.
    The search starts from ``(sigma, (e, x)) |-> (sigma, x)``."""
    if q is None:
        q = untwist(p, X)
    SY = sd(q.source)
    sq = sd_of_map(q, SY, p.target)
    R = p.source

    def hint(n: int, j: int) -> int:
        sigma, (_, x) = SY.levels[n][j]
        return R._index[n].get((sigma, x), -1)

    return isomorphic_over(sq, p, hint=hint)


def culf_roundtrip(q: SMap, SdX: TruncSSet | None = None) -> SMap | None:
    """Isomorphism ``Y -> untwist(Sd q)`` over ``X``, found by search.
    The search starts from ``y |-> (q y, long edge of y)``."""
    Y, X = q.source, q.target
    if SdX is None:
        SdX = sd(X)
    SY = sd(Y)
    u = untwist(sd_of_map(q, SY, SdX), X, dim=q.dim)
    U = u.source

    def hint(n: int, j: int) -> int:
        le = Y.long_edge(n)[j] if n else Y.degens[0][0][j]
        return U._index[n].get((X.levels[n][q.components[n][j]], Y.levels[1][le]), -1)

    return isomorphic_over(q, u, hint=hint)
