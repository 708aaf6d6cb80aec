"""Catalogue of the level-1 perfect crystals ``B^{1,1}`` and walks on them.

Node ids are synthetic (``x0``, ``x1``, ...) and follow the left-to-right,
top-to-bottom order of the usual drawings.  Each catalogue graph is checked
at construction: every colour class is a partial matching and the graph is
connected.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .cartan import (
    Family,
    RootSystemError,
    RootSystemType,
    WeightVector,
    cartan_matrix,
)

Walk = tuple  # tuple[int, ...]


class PerfectCrystalError(ValueError):
    pass


class PerfectCrystal:
    """Finite crystal given by its coloured arrows.

    ``eps``/``phi`` are read off the graph as string lengths, so the object
    can serve directly as a tensor factor.
    """

    def __init__(self, name: str, nodes: Sequence[str], arrows: Iterable[tuple[str, int, str]]):
        self.name = name
        self.nodes = tuple(nodes)
        self.arrows = tuple(sorted(set(arrows), key=lambda a: (self.nodes.index(a[0]), a[1])))
        self._out: dict[str, dict[int, str]] = {x: {} for x in self.nodes}
        self._in: dict[str, dict[int, str]] = {x: {} for x in self.nodes}
        for s, c, d in self.arrows:
            if s not in self._out or d not in self._in:
                raise PerfectCrystalError(f"{name}: arrow {s}-{c}->{d} uses an unknown node")
            if c in self._out[s] or c in self._in[d]:
                raise PerfectCrystalError(f"{name}: colour {c} is not a partial matching at {s}->{d}")
            self._out[s][c] = d
            self._in[d][c] = s
        if not self._connected():
            raise PerfectCrystalError(f"{name}: graph is not connected")

    def _connected(self) -> bool:
        if not self.nodes:
            return True
        seen = {self.nodes[0]}
        stack = [self.nodes[0]]
        while stack:
            x = stack.pop()
            for y in list(self._out[x].values()) + list(self._in[x].values()):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(self.nodes)

    def __len__(self):
        return len(self.nodes)

    def __repr__(self):
        return f"PerfectCrystal({self.name!r}, {len(self.nodes)} nodes)"

    @property
    def colours(self) -> list[int]:
        return sorted({c for _, c, _ in self.arrows})

    def e(self, b: str, i: int) -> Optional[str]:
        return self._in[b].get(i)

    def f(self, b: str, i: int) -> Optional[str]:
        return self._out[b].get(i)

    def eps(self, b: str, i: int) -> int:
        n = 0
        while (b := self._in[b].get(i)) is not None:
            n += 1
            if n > len(self.nodes):
                raise PerfectCrystalError(f"{self.name}: {i}-string is a cycle")
        return n

    def phi(self, b: str, i: int) -> int:
        n = 0
        while (b := self._out[b].get(i)) is not None:
            n += 1
            if n > len(self.nodes):
                raise PerfectCrystalError(f"{self.name}: {i}-string is a cycle")
        return n

    def epsilon_vector(self, b: str, index_set: Iterable[int]) -> WeightVector:
        return WeightVector({i: self.eps(b, i) for i in index_set})

    def phi_vector(self, b: str, index_set: Iterable[int]) -> WeightVector:
        return WeightVector({i: self.phi(b, i) for i in index_set})

    def reversed(self) -> "PerfectCrystal":
        return PerfectCrystal(self.name + "^rev", self.nodes, [(d, c, s) for s, c, d in self.arrows])

    def without_colour(self, colour: int) -> "PerfectCrystal":
        return PerfectCrystal(
            f"{self.name}\\{colour}", self.nodes, [a for a in self.arrows if a[1] != colour]
        )

    def arrows_of(self, colour: int) -> list[tuple[str, int, str]]:
        return [a for a in self.arrows if a[1] == colour]


# ---------------------------------------------------------------------------
# builders (rank-agnostic; RootSystemType validation happens in b11)


class _Drawing:
    def __init__(self):
        self.pos: dict[str, tuple[float, float]] = {}
        self.arrows: list[tuple[str, int, str]] = []

    def node(self, key: str, x: float, y: float = 0.0) -> str:
        self.pos[key] = (x, y)
        return key

    def chain(self, colours: Sequence[int], prefix: str = "p", x0: float = 0) -> list[str]:
        keys = [self.node(f"{prefix}{k}", x0 + k) for k in range(len(colours) + 1)]
        for k, c in enumerate(colours):
            self.arrows.append((keys[k], c, keys[k + 1]))
        return keys

    def arrow(self, s: str, c: int, d: str) -> None:
        self.arrows.append((s, c, d))

    def build(self, name: str) -> PerfectCrystal:
        order = sorted(self.pos, key=lambda k: (self.pos[k][0], -self.pos[k][1]))
        rename = {k: f"x{m}" for m, k in enumerate(order)}
        return PerfectCrystal(
            name,
            [rename[k] for k in order],
            [(rename[s], c, rename[d]) for s, c, d in self.arrows],
        )


def _up_down(n: int, double_top: bool) -> list[int]:
    """Colours 1..n..1, with the top colour n repeated when ``double_top``."""
    up = list(range(1, n + 1))
    down = list(range(n - 1, 0, -1))
    return up + ([n] if double_top else []) + down


def _type_a(n: int) -> PerfectCrystal:
    d = _Drawing()
    p = d.chain(list(range(1, n + 1)))
    d.arrow(p[-1], 0, p[0])
    return d.build(f"B11(A{n}~1)")


def _type_b(n: int) -> PerfectCrystal:
    d = _Drawing()
    p = d.chain(_up_down(n, True))
    d.arrow(p[-2], 0, p[0])
    d.arrow(p[-1], 0, p[1])
    return d.build(f"B11(B{n}~1)")


def _type_c(n: int) -> PerfectCrystal:
    d = _Drawing()
    p = d.chain(_up_down(n, False))
    d.arrow(p[-1], 0, p[0])
    return d.build(f"B11(C{n}~1)")


def _type_d(n: int) -> PerfectCrystal:
    d = _Drawing()
    left = d.chain(list(range(1, n - 1)), prefix="l")
    top = d.node("top", n - 1, 1)
    bottom = d.node("bottom", n - 1, -1)
    right = d.chain(list(range(n - 2, 0, -1)), prefix="r", x0=n)
    d.arrow(left[-1], n - 1, top)
    d.arrow(top, n, right[0])
    d.arrow(left[-1], n, bottom)
    d.arrow(bottom, n - 1, right[0])
    d.arrow(right[-2], 0, left[0])
    d.arrow(right[-1], 0, left[1])
    return d.build(f"B11(D{n}~1)")


def _type_a2even(n: int) -> PerfectCrystal:
    d = _Drawing()
    p = d.chain(_up_down(n, False))
    apex = d.node("apex", n - 0.5, 1)
    d.arrow(p[-1], 0, apex)
    d.arrow(apex, 0, p[0])
    return d.build(f"B11(A{2 * n}~2)")


def _type_a2even_dagger(n: int) -> PerfectCrystal:
    d = _Drawing()
    p = d.chain(_up_down(n, True))
    d.arrow(p[-1], 0, p[0])
    return d.build(f"B11(A{2 * n}~2d)")


def _type_a2odd(n: int) -> PerfectCrystal:
    d = _Drawing()
    p = d.chain(_up_down(n, False))
    d.arrow(p[-2], 0, p[0])
    d.arrow(p[-1], 0, p[1])
    return d.build(f"B11(A{2 * n - 1}~2)")


def _type_d2(n: int) -> PerfectCrystal:
    d = _Drawing()
    p = d.chain(_up_down(n, True))
    apex = d.node("apex", n, 1)
    d.arrow(p[-1], 0, apex)
    d.arrow(apex, 0, p[0])
    return d.build(f"B11(D{n + 1}~2)")


_BUILDERS = {
    Family.A1aff: _type_a,
    Family.Aaff: _type_a,
    Family.Baff: _type_b,
    Family.Caff: _type_c,
    Family.Daff: _type_d,
    Family.A2even: _type_a2even,
    Family.A2evenDagger: _type_a2even_dagger,
    Family.A2odd: _type_a2odd,
    Family.Daff2: _type_d2,
}

_EXPECTED_SIZE = {
    Family.A1aff: lambda n: n + 1,
    Family.Aaff: lambda n: n + 1,
    Family.Baff: lambda n: 2 * n + 1,
    Family.Caff: lambda n: 2 * n,
    Family.Daff: lambda n: 2 * n,
    Family.A2even: lambda n: 2 * n + 1,
    Family.A2evenDagger: lambda n: 2 * n + 1,
    Family.A2odd: lambda n: 2 * n,
    Family.Daff2: lambda n: 2 * n + 2,
}

_CATALOG: dict[RootSystemType, PerfectCrystal] = {}


def b11(t: RootSystemType) -> PerfectCrystal:
    """The level-1 perfect crystal ``B^{1,1}`` of an affine type."""
    if not t.affine:
        raise PerfectCrystalError(f"{t} is not affine; use finite_walk_graph")
    if t not in _CATALOG:
        pc = _BUILDERS[t.family](t.rank)
        expected = _EXPECTED_SIZE[t.family](t.rank)
        if len(pc) != expected:
            raise PerfectCrystalError(f"{pc.name}: {len(pc)} nodes, expected {expected}")
        _check_colours(pc, t)
        _CATALOG[t] = pc
    return _CATALOG[t]


def _check_colours(pc: PerfectCrystal, t: RootSystemType) -> None:
    idx = set(t.index_set)
    if not set(pc.colours) <= idx:
        raise PerfectCrystalError(f"{pc.name}: colours {pc.colours} outside {sorted(idx)}")


def bn1_typeA(n: int) -> PerfectCrystal:
    """``B^{n,1}`` of ``A_n^{(1)}``: ``B^{1,1}`` with every arrow reversed."""
    if n < 2:
        raise PerfectCrystalError("B^{n,1} needs n >= 2")
    pc = b11(RootSystemType(Family.Aaff, n)).reversed()
    pc.name = f"Bn1(A{n}~1)"
    return pc


def finite_walk_graph(t: RootSystemType) -> list[PerfectCrystal]:
    """Untwisted ``B^{1,1}`` with the 0-arrows removed.

    Type A returns both orientations (``B^{1,1}`` and ``B^{n,1}``).
    """
    if t.affine:
        raise PerfectCrystalError(f"{t} is affine; use b11")
    n = t.rank
    if t.family is Family.A:
        fwd = _type_a(n).without_colour(0)
        return [fwd, fwd.reversed()]
    builder = {Family.B: _type_b, Family.C: _type_c, Family.D: _type_d}[t.family]
    return [builder(n).without_colour(0)]


def walk_graphs(t: RootSystemType) -> list[PerfectCrystal]:
    """Every graph on which walks of type ``t`` may be read."""
    if not t.affine:
        return finite_walk_graph(t)
    if t.family is Family.Aaff:
        return [b11(t), bn1_typeA(t.rank)]
    return [b11(t)]


# ---------------------------------------------------------------------------
# walks


def _paths(pc: PerfectCrystal, w: Sequence[int]) -> list[list[str]]:
    """All node paths realising the colour sequence ``w``."""
    if not w:
        return [[x] for x in pc.nodes]
    out = []
    for s, _, _ in pc.arrows_of(w[0]):
        path = [s]
        x: Optional[str] = s
        for c in w:
            x = pc.f(x, c)
            if x is None:
                break
            path.append(x)
        else:
            out.append(path)
    return out


def is_consecutive(pc: PerfectCrystal, w: Sequence[int]) -> bool:
    if not w:
        return True
    return bool(_paths(pc, w))


def enumerate_walks(pc: PerfectCrystal, start_colour: int, k: int) -> list[Walk]:
    if k < 1:
        raise PerfectCrystalError("walk length must be >= 1")
    found: set[Walk] = set()

    def rec(x: str, acc: list[int]):
        if len(acc) == k:
            found.add(tuple(acc))
            return
        for c, y in sorted(pc._out[x].items()):
            acc.append(c)
            rec(y, acc)
            acc.pop()

    for s, c, d in pc.arrows_of(start_colour):
        rec(d, [c])
    return sorted(found)


def all_walks(pc: PerfectCrystal, max_len: int) -> list[Walk]:
    out: list[Walk] = []
    for c in pc.colours:
        for k in range(1, max_len + 1):
            out.extend(enumerate_walks(pc, c, k))
    return sorted(set(out), key=lambda w: (len(w), w))


def repeat_count_m(t: RootSystemType, w: Sequence[int]) -> int:
    a = cartan_matrix(t)
    return sum(1 for r in range(len(w) - 1) if a[w[r], w[r + 1]] >= 0)


@dataclass(frozen=True)
class BoxLabelling:
    walk: Walk
    path: tuple[str, ...]  # n_0 -> n_1 -> ... -> n_k
    kept: tuple[int, ...]  # indices r in 1..k whose node is a box
    m: int

    @property
    def boxes(self) -> tuple[str, ...]:
        return tuple(self.path[r] for r in self.kept)

    @property
    def predecessor(self) -> str:
        return self.path[0]

    @property
    def shifted(self) -> tuple[str, ...]:
        """Boxes moved one step back along the walk (``[i_0] ... [i_{k-1}]``)."""
        return tuple(self.path[r - 1] for r in self.kept)


def box_nodes(t: RootSystemType, pc: PerfectCrystal, w: Sequence[int]) -> BoxLabelling:
    """Box labelling of a consecutive walk.

    Node ``r`` of the walk (after the ``i_r`` arrow) is kept unless
    ``a_{i_r, i_{r+1}} >= 0``; the last node is always kept.  When the walk
    is realised from several start nodes the first in catalogue order wins.
    """
    w = tuple(w)
    if not w:
        raise PerfectCrystalError("box labelling needs a nonempty walk")
    paths = _paths(pc, w)
    if not paths:
        raise PerfectCrystalError(f"walk {w} is not consecutive on {pc.name}")
    paths.sort(key=lambda p: [pc.nodes.index(x) for x in p])
    a = cartan_matrix(t)
    k = len(w)
    kept = tuple(r for r in range(1, k + 1) if r == k or a[w[r - 1], w[r]] < 0)
    return BoxLabelling(w, tuple(paths[0]), kept, k - len(kept))
