"""Combinatorics of the simplex category.

Monotone maps ``[m] -> [n]`` are stored as image tuples.  Cofaces and
codegeneracies are ordinary maps built by :func:`coface` and
:func:`codegeneracy`.

Position encoding of ``Q[n] = [n]^op * [n] = [2n+1]``: the primed element
``i'`` sits at position ``n - i`` and the unprimed element ``i`` at position
``n + 1 + i``.  So ``n', ..., 1', 0', 0, 1, ..., n`` read left to right.
Every index computation involving ``Q`` goes through :func:`q_on_map`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Iterator, Sequence

from .errors import DimensionMismatch


@dataclass(frozen=True, slots=True)
class OrdinalMap:
    dom: int
    cod: int
    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.dom < 0 or self.cod < 0:
            raise ValueError("ordinals are non-negative")
        if len(self.images) != self.dom + 1:
            raise ValueError(f"need {self.dom + 1} images, got {len(self.images)}")
        prev = 0
        for v in self.images:
            if not 0 <= v <= self.cod:
                raise ValueError(f"image {v} outside [0, {self.cod}]")
            if v < prev:
                raise ValueError(f"images {self.images} not monotone")
            prev = v

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "OrdinalMap") -> "OrdinalMap":
        return compose(self, other)

    def __repr__(self) -> str:
        return f"OrdinalMap({self.images}:[{self.dom}]->[{self.cod}])"

    def to_json(self) -> dict:
        return {"dom": self.dom, "cod": self.cod, "images": list(self.images)}

    @classmethod
    def from_json(cls, data: dict) -> "OrdinalMap":
        return cls(int(data["dom"]), int(data["cod"]), tuple(int(v) for v in data["images"]))


_new = object.__new__
_set = object.__setattr__


def _trusted(dom: int, cod: int, images: tuple[int, ...]) -> OrdinalMap:
    """Construct without validation; for results computed from valid maps."""
    f = _new(OrdinalMap)
    _set(f, "dom", dom)
    _set(f, "cod", cod)
    _set(f, "images", images)
    return f


def omap(images: Sequence[int], cod: int | None = None) -> OrdinalMap:
    """Shorthand: ``omap((0, 2), 2)`` is the map ``[1] -> [2]``, 0->0, 1->2."""
    images = tuple(images)
    if cod is None:
        cod = max(images)
    return OrdinalMap(len(images) - 1, cod, images)


def identity(n: int) -> OrdinalMap:
    return OrdinalMap(n, n, tuple(range(n + 1)))


def coface(n: int, i: int) -> OrdinalMap:
    """``d^i : [n-1] -> [n]``, skipping ``i``."""
    if not 0 <= i <= n or n < 1:
        raise ValueError(f"no coface d^{i} into [{n}]")
    return OrdinalMap(n - 1, n, tuple(j if j < i else j + 1 for j in range(n)))


def codegeneracy(n: int, i: int) -> OrdinalMap:
    """``s^i : [n+1] -> [n]``, hitting ``i`` twice."""
    if not 0 <= i <= n:
        raise ValueError(f"no codegeneracy s^{i} onto [{n}]")
    return OrdinalMap(n + 1, n, tuple(j if j <= i else j - 1 for j in range(n + 2)))


def compose(g: OrdinalMap, f: OrdinalMap) -> OrdinalMap:
    """``g . f`` (apply ``f`` first)."""
    if f.cod != g.dom:
        raise DimensionMismatch(f"cannot compose {g!r} after {f!r}")
    gi = g.images
    return _trusted(f.dom, g.cod, tuple(gi[v] for v in f.images))


def compose_chain(maps: Sequence[OrdinalMap]) -> OrdinalMap:
    """Compose ``maps[-1] . ... . maps[0]``."""
    out = maps[0]
    for g in maps[1:]:
        out = compose(g, out)
    return out


@lru_cache(maxsize=None)
def all_maps(m: int, n: int) -> tuple[OrdinalMap, ...]:
    """Every monotone map ``[m] -> [n]`` in lexicographic order of images."""
    return tuple(OrdinalMap(m, n, imgs) for imgs in combinations_with_replacement(range(n + 1), m + 1))


def maps_up_to(bound: int) -> Iterator[OrdinalMap]:
    for m in range(bound + 1):
        for n in range(bound + 1):
            yield from all_maps(m, n)


# --- classification ---------------------------------------------------------

@dataclass(frozen=True, slots=True)
class MapClass:
    active: bool
    inert: bool
    last_point_preserving: bool
    first_point_preserving: bool
    injective: bool
    surjective: bool


def is_active(f: OrdinalMap) -> bool:
    return f.images[0] == 0 and f.images[-1] == f.cod


def is_inert(f: OrdinalMap) -> bool:
    im = f.images
    return all(im[i + 1] == im[i] + 1 for i in range(f.dom))


def is_last_point_preserving(f: OrdinalMap) -> bool:
    return f.images[-1] == f.cod


def is_first_point_preserving(f: OrdinalMap) -> bool:
    return f.images[0] == 0


def is_injective(f: OrdinalMap) -> bool:
    return len(set(f.images)) == f.dom + 1


def is_surjective(f: OrdinalMap) -> bool:
    return len(set(f.images)) == f.cod + 1


def classify(f: OrdinalMap) -> MapClass:
    return MapClass(
        active=is_active(f),
        inert=is_inert(f),
        last_point_preserving=is_last_point_preserving(f),
        first_point_preserving=is_first_point_preserving(f),
        injective=is_injective(f),
        surjective=is_surjective(f),
    )


# --- factorizations ---------------------------------------------------------

def epi_mono_factorize(f: OrdinalMap) -> tuple[OrdinalMap, OrdinalMap]:
    """Return ``(epi, mono)`` with ``mono . epi == f``."""
    image = sorted(set(f.images))
    k = len(image) - 1
    pos = {v: j for j, v in enumerate(image)}
    epi = OrdinalMap(f.dom, k, tuple(pos[v] for v in f.images))
    mono = OrdinalMap(k, f.cod, tuple(image))
    return epi, mono


def active_inert_factorize(f: OrdinalMap) -> tuple[OrdinalMap, OrdinalMap]:
    """Return ``(act, inr)`` with ``inr . act == f``; the middle ordinal is
    the segment ``[f(0), f(m)]`` of the codomain."""
    lo, hi = f.images[0], f.images[-1]
    act = OrdinalMap(f.dom, hi - lo, tuple(v - lo for v in f.images))
    inr = OrdinalMap(hi - lo, f.cod, tuple(range(lo, hi + 1)))
    return act, inr


def generator_word(f: OrdinalMap) -> list[OrdinalMap]:
    """Cofaces and codegeneracies whose composite is ``f``, listed in the
    order they are applied (first element applied first)."""
    epi, mono = epi_mono_factorize(f)
    word: list[OrdinalMap] = []
    # epi: peel off repeated values from the left
    cur = list(epi.images)
    while len(cur) > len(set(cur)):
        i = next(j for j in range(len(cur) - 1) if cur[j] == cur[j + 1])
        # cur = cur' . s^i with s^i : [len-1] -> [len-2]
        word.append(codegeneracy(len(cur) - 2, i))
        cur = cur[: i + 1] + cur[i + 2 :]
    # mono: insert missing values from the bottom up
    missing = sorted(set(range(f.cod + 1)) - set(mono.images))
    size = mono.dom
    for j in missing:
        size += 1
        word.append(coface(size, j))
    return word


# --- the functor Q ----------------------------------------------------------

def q_on_object(n: int) -> int:
    if n < 0:
        raise ValueError("negative ordinal")
    return 2 * n + 1


@lru_cache(maxsize=65536)
def q_on_map(f: OrdinalMap, convention: str = "q") -> OrdinalMap:
    """``Q(f) = f^op * f``; with ``convention="qprime"`` the other join order
    ``f * f^op`` is used (positions ``0..n`` unprimed, then ``n'..0'``)."""
    m, n = f.dom, f.cod
    im = f.images
    if convention == "q":
        left = tuple(n - im[m - j] for j in range(m + 1))
        right = tuple(n + 1 + im[j] for j in range(m + 1))
    elif convention == "qprime":
        left = tuple(im[j] for j in range(m + 1))
        right = tuple(2 * n + 1 - im[m - j] for j in range(m + 1))
    else:
        raise ValueError(f"unknown convention {convention!r}")
    return _trusted(2 * m + 1, 2 * n + 1, left + right)


def q_position(n: int, element: int, primed: bool) -> int:
    return n - element if primed else n + 1 + element


def last_vertex_inclusion(n: int) -> OrdinalMap:
    return OrdinalMap(0, n, (n,))


def first_vertex_inclusion(n: int) -> OrdinalMap:
    return OrdinalMap(0, n, (0,))


def long_edge(n: int) -> OrdinalMap:
    """The active map ``[1] -> [n]``."""
    return OrdinalMap(1, n, (0, n))


def top_coface(k: int) -> OrdinalMap:
    """``d^top : [k-1] -> [k]``."""
    return coface(k, k)


# --- active-inert pushouts --------------------------------------------------

@dataclass(frozen=True, slots=True)
class PushoutSquare:
    """Pushout of an inert map along an active map::

        [m] --inert--> [n]
         |              |
       active        active_out
         v              v
        [k] --inert_out--> [p]
    """

    inert: OrdinalMap
    active: OrdinalMap
    inert_out: OrdinalMap
    active_out: OrdinalMap

    @property
    def apex(self) -> int:
        return self.inert_out.cod


def pushout_inert_active(phi: OrdinalMap, g: OrdinalMap) -> PushoutSquare:
    if phi.dom != g.dom or not is_inert(phi) or not is_active(g):
        raise DimensionMismatch("need an inert and an active map with common domain")
    m, n, k = phi.dom, phi.cod, g.cod
    a = phi.images[0]
    p = n - m + k
    inert_out = OrdinalMap(k, p, tuple(a + i for i in range(k + 1)))
    out = []
    for j in range(n + 1):
        if j < a:
            out.append(j)
        elif j <= a + m:
            out.append(a + g.images[j - a])
        else:
            out.append(j - m + k)
    return PushoutSquare(phi, g, inert_out, OrdinalMap(n, p, tuple(out)))


def active_inert_pushouts(bound: int) -> list[PushoutSquare]:
    """All pushouts of inert ``[m] >-> [n]`` along active ``[m] -|> [k]`` in
    which every ordinal of the square is at most ``bound``."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    squares = []
    for m in range(bound + 1):
        for n in range(m, bound + 1):
            for a in range(n - m + 1):
                phi = OrdinalMap(m, n, tuple(range(a, a + m + 1)))
                for k in range(bound + 1):
                    if n - m + k > bound:
                        continue
                    for g in all_maps(m, k):
                        if is_active(g):
                            squares.append(pushout_inert_active(phi, g))
    return squares
