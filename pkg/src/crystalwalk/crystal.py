"""Highest weight crystals B(lambda) realised by Kashiwara's monomial model.

A node is a Laurent monomial in variables ``Y_i(n)``; it is stored as the
sorted tuple of ``((colour, slot), exponent)`` pairs with nonzero exponent.
The highest weight node of ``B(lambda)`` is ``prod_i Y_i(0)^{lambda_i}`` and
its connected component under ``f_i`` is ``B(lambda)``.

Everything above this module only looks at ``e``, ``f``, ``eps``, ``phi`` and
weights, so the model choice stays local.
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .cartan import (
    RootSystemType,
    WeightVector,
    cartan_matrix,
    pairing,
    pairing_root,
)

Exponents = tuple  # tuple[tuple[tuple[int, int], int], ...]


class CrystalError(ValueError):
    pass


class FrontierError(CrystalError):
    """Raised when a query would need nodes outside the generated truncation."""


@dataclass(frozen=True)
class CrystalNode:
    exponents: Exponents
    depth: int = field(default=0, compare=False)

    @property
    def id(self) -> str:
        return node_id(self.exponents)

    def exponent_map(self) -> dict[tuple[int, int], int]:
        return dict(self.exponents)


def node_id(exponents: Exponents) -> str:
    text = ";".join(f"{c},{s},{y}" for (c, s), y in exponents)
    return hashlib.blake2b(text.encode(), digest_size=8).hexdigest()


def highest_node(t: RootSystemType, lam: WeightVector) -> CrystalNode:
    if not lam.is_dominant():
        raise CrystalError(f"highest weight must be dominant, got {lam!r}")
    for i in lam:
        pairing(t, i, lam)  # validates colours
    return CrystalNode(tuple(sorted(((i, 0), lam[i]) for i in lam)), 0)


# ---------------------------------------------------------------------------
# monomial model


def _colour_entries(exps: Exponents, i: int) -> list[tuple[int, int]]:
    return [(s, y) for (c, s), y in exps if c == i]


def _string_data(exps: Exponents, i: int):
    """Return (phi, eps, n_f, n_e) for colour ``i``.

    Partial sums ``S(n) = sum_{k<=n} y_i(k)`` are constant on intervals between
    consecutive slots.  ``phi`` is the maximum of ``S``; ``eps = phi - S(+inf)``.
    ``n_f`` is the leftmost point where the maximum is reached and ``n_e`` the
    rightmost.
    """
    entries = _colour_entries(exps, i)
    if not entries:
        return 0, 0, None, None
    slots = [s for s, _ in entries]
    # interval 0 is (-inf, slots[0]-1] with value 0
    values = [0]
    s = 0
    for _, y in entries:
        s += y
        values.append(s)
    top = max(values)
    total = values[-1]
    first = values.index(top)
    last = len(values) - 1 - values[::-1].index(top)
    n_f = slots[first - 1] if first > 0 else None
    n_e = slots[last] - 1 if last < len(entries) else None
    return top, top - total, n_f, n_e


def _a_monomial(t: RootSystemType, i: int, n: int) -> dict[tuple[int, int], int]:
    a = cartan_matrix(t)
    out = {(i, n): 1, (i, n + 1): 1}
    for j in t.index_set:
        if j != i and a[j, i] != 0:
            c_ji = 1 if j > i else 0
            key = (j, n + c_ji)
            out[key] = out.get(key, 0) + a[j, i]
    return out


def _multiply(exps: Exponents, other: dict, sign: int) -> Exponents:
    d = dict(exps)
    for k, v in other.items():
        nv = d.get(k, 0) + sign * v
        if nv:
            d[k] = nv
        else:
            d.pop(k, None)
    return tuple(sorted(d.items()))


def phi(t: RootSystemType, node: CrystalNode, i: int) -> int:
    pairing_root(t, i, i)
    return _string_data(node.exponents, i)[0]


def eps(t: RootSystemType, node: CrystalNode, i: int) -> int:
    pairing_root(t, i, i)
    return _string_data(node.exponents, i)[1]


def f(t: RootSystemType, node: CrystalNode, i: int) -> Optional[CrystalNode]:
    pairing_root(t, i, i)
    ph, _, n_f, _ = _string_data(node.exponents, i)
    if ph == 0:
        return None
    return CrystalNode(_multiply(node.exponents, _a_monomial(t, i, n_f), -1), node.depth + 1)


def e(t: RootSystemType, node: CrystalNode, i: int) -> Optional[CrystalNode]:
    pairing_root(t, i, i)
    _, ep, _, n_e = _string_data(node.exponents, i)
    if ep == 0:
        return None
    return CrystalNode(_multiply(node.exponents, _a_monomial(t, i, n_e), 1), node.depth - 1)


def weight(t: RootSystemType, node: CrystalNode) -> WeightVector:
    """Weight over fundamental weights (modulo the null root in affine type)."""
    out: dict[int, int] = {}
    for (c, _), y in node.exponents:
        out[c] = out.get(c, 0) + y
    return WeightVector(out)


def epsilon_vector(t: RootSystemType, node: CrystalNode) -> WeightVector:
    return WeightVector({i: eps(t, node, i) for i in t.index_set})


def phi_vector(t: RootSystemType, node: CrystalNode) -> WeightVector:
    return WeightVector({i: phi(t, node, i) for i in t.index_set})


def is_singular(t: RootSystemType, node: CrystalNode) -> bool:
    return epsilon_vector(t, node).total() <= 1


class MonomialCrystal:
    """The full (untruncated) crystal ``B(lambda)`` seen through the model.

    Used as a tensor factor where no graph bookkeeping is wanted.
    """

    def __init__(self, t: RootSystemType, lam: WeightVector):
        self.t = t
        self.lam = lam
        self.highest = highest_node(t, lam)

    def e(self, b, i):
        return e(self.t, b, i)

    def f(self, b, i):
        return f(self.t, b, i)

    def eps(self, b, i):
        return eps(self.t, b, i)

    def phi(self, b, i):
        return phi(self.t, b, i)

    def __repr__(self):
        return f"B({self.lam!r}) of type {self.t}"


# ---------------------------------------------------------------------------
# truncated graphs


class CrystalGraph:
    """Truncated crystal graph of ``B(lambda)``.

    Nodes at depth below ``depth_limit`` are *interior*: all of their arrows,
    in and out, are present.  Nodes at depth ``depth_limit`` only carry their
    incoming arrows.  ``eps`` and ``phi`` are stored per node so that checkers
    work purely off the stored data.
    """

    def __init__(self, t: RootSystemType, weight: Optional[WeightVector], depth_limit: Optional[int]):
        self.t = t
        self.weight = weight
        self.depth_limit = depth_limit
        self.nodes: dict[str, CrystalNode] = {}
        self.order: list[str] = []
        self.eps_data: dict[str, dict[int, int]] = {}
        self.phi_data: dict[str, dict[int, int]] = {}
        self.interior_flags: dict[str, bool] = {}
        self.out_edges: dict[str, dict[int, str]] = {}
        self.in_edges: dict[str, dict[int, str]] = {}
        self.highest: Optional[str] = None

    # -- construction
    def add_node(self, nid: str, node: CrystalNode, eps_row, phi_row, interior: bool) -> None:
        self.nodes[nid] = node
        self.order.append(nid)
        self.eps_data[nid] = dict(eps_row)
        self.phi_data[nid] = dict(phi_row)
        self.interior_flags[nid] = interior
        self.out_edges.setdefault(nid, {})
        self.in_edges.setdefault(nid, {})

    def add_edge(self, src: str, colour: int, dst: str) -> None:
        if colour in self.out_edges[src] or colour in self.in_edges[dst]:
            raise CrystalError(f"duplicate {colour}-arrow at {src}->{dst}")
        self.out_edges[src][colour] = dst
        self.in_edges[dst][colour] = src

    def remove_edge(self, src: str, colour: int) -> str:
        dst = self.out_edges[src].pop(colour)
        del self.in_edges[dst][colour]
        return dst

    def copy(self) -> "CrystalGraph":
        g = CrystalGraph(self.t, self.weight, self.depth_limit)
        for nid in self.order:
            g.add_node(nid, self.nodes[nid], self.eps_data[nid], self.phi_data[nid], self.interior_flags[nid])
        for src, dst_map in self.out_edges.items():
            for c, dst in dst_map.items():
                g.out_edges[src][c] = dst
                g.in_edges[dst][c] = src
        g.highest = self.highest
        return g

    # -- queries
    def __len__(self):
        return len(self.order)

    def __contains__(self, nid) -> bool:
        return nid in self.nodes

    def edges(self) -> Iterator[tuple[str, int, str]]:
        for src in self.order:
            for c in sorted(self.out_edges[src]):
                yield src, c, self.out_edges[src][c]

    def edge_count(self) -> int:
        return sum(len(v) for v in self.out_edges.values())

    def depth(self, nid: str) -> int:
        return self.nodes[nid].depth

    def interior(self, nid: str) -> bool:
        return self.interior_flags[nid]

    def e(self, nid: str, i: int) -> Optional[str]:
        return self.in_edges[nid].get(i)

    def f(self, nid: str, i: int) -> Optional[str]:
        if not self.interior_flags[nid]:
            raise FrontierError(f"node {nid} is on the frontier; f_{i} unknown")
        return self.out_edges[nid].get(i)

    def e_word(self, nid: Optional[str], word) -> Optional[str]:
        """Apply ``e_{w[0]} e_{w[1]} ...`` (rightmost first); None for zero."""
        for i in reversed(word):
            if nid is None:
                return None
            nid = self.e(nid, i)
        return nid

    def eps(self, nid: str, i: int) -> int:
        return self.eps_data[nid].get(i, 0)

    def phi(self, nid: str, i: int) -> int:
        return self.phi_data[nid].get(i, 0)

    def epsilon_vector(self, nid: str) -> WeightVector:
        return WeightVector(self.eps_data[nid])

    def is_singular(self, nid: str) -> bool:
        return sum(self.eps_data[nid].values()) <= 1

    def singular_parent(self, nid: str) -> Optional[str]:
        """The unique parent of a singular non-highest node, if singular."""
        ps = parents(self, nid)
        if len(ps) != 1:
            return None
        _, b = ps[0]
        return b if self.is_singular(b) else None

    def interior_nodes(self) -> Iterator[str]:
        return (nid for nid in self.order if self.interior_flags[nid])


def generate(t: RootSystemType, lam: WeightVector, depth_limit: Optional[int]) -> CrystalGraph:
    """Breadth-first closure of ``B(lambda)`` under the ``f_i``.

    ``depth_limit=None`` generates until the crystal closes (finite types
    only); the stored limit is then one past the deepest layer so every node
    is interior.
    """
    if depth_limit is not None and depth_limit < 0:
        raise CrystalError("depth_limit must be non-negative")
    if depth_limit is None and t.affine:
        raise CrystalError("affine crystals are infinite; give a depth limit")
    v = highest_node(t, lam)
    g = CrystalGraph(t, lam, depth_limit)
    idx = t.index_set

    def stats(node):
        e_row, p_row = {}, {}
        for i in idx:
            ph, ep, _, _ = _string_data(node.exponents, i)
            if ep:
                e_row[i] = ep
            if ph:
                p_row[i] = ph
        return e_row, p_row

    def add(node):
        nid = node.id
        er, pr = stats(node)
        interior = depth_limit is None or node.depth < depth_limit
        g.add_node(nid, node, er, pr, interior)
        return nid

    g.highest = add(v)
    layer = [g.highest]
    depth = 0
    while layer and (depth_limit is None or depth < depth_limit):
        nxt: list[str] = []
        for nid in layer:
            node = g.nodes[nid]
            for i in idx:
                if not g.phi_data[nid].get(i):
                    continue
                child = f(t, node, i)
                cid = child.id
                if cid not in g.nodes:
                    add(child)
                    nxt.append(cid)
                g.add_edge(nid, i, cid)
        layer = nxt
        depth += 1
    if depth_limit is None:
        g.depth_limit = depth
        for nid in g.order:
            g.interior_flags[nid] = True
    return g


def full_depth_graph(t: RootSystemType, lam: WeightVector) -> CrystalGraph:
    return generate(t, lam, None)


# ---------------------------------------------------------------------------
# node predicates and walks


def parents(graph: CrystalGraph, nid: str) -> list[tuple[int, str]]:
    return sorted(graph.in_edges[nid].items())


def _require_interior(graph: CrystalGraph, nid: str) -> None:
    if nid not in graph:
        raise CrystalError(f"node {nid} not in graph")
    if not graph.interior(nid):
        raise FrontierError(f"node {nid} is on the frontier")


def ancestors(graph: CrystalGraph, nid: str) -> set[str]:
    _require_interior(graph, nid)
    seen: set[str] = set()
    stack = [b for _, b in parents(graph, nid)]
    while stack:
        b = stack.pop()
        if b in seen:
            continue
        seen.add(b)
        stack.extend(p for _, p in parents(graph, b))
    return seen


def count_walks(graph: CrystalGraph, nid: str) -> int:
    """Number of directed paths from the highest node to ``nid``."""
    memo: dict[str, int] = {graph.highest: 1}

    def rec(x: str) -> int:
        if x in memo:
            return memo[x]
        total = sum(rec(b) for _, b in parents(graph, x))
        memo[x] = total
        return total

    # iterative by depth to avoid deep recursion
    for x in sorted(ancestors(graph, nid) if nid != graph.highest else set(), key=graph.depth):
        rec(x)
    return rec(nid)


def walks_to_highest(graph: CrystalGraph, nid: str, limit: Optional[int] = None) -> list[tuple[int, ...]]:
    """All walks from the highest node to ``nid``.

    A walk is reported as ``(i_1, ..., i_k)`` with
    ``node = f_{i_1} f_{i_2} ... f_{i_k} v``, i.e. the last arrow first.
    """
    _require_interior(graph, nid)
    if limit is not None and count_walks(graph, nid) > limit:
        raise CrystalError(f"more than {limit} walks to {nid}")
    out: list[tuple[int, ...]] = []

    def rec(x: str, acc: list[int]):
        if x == graph.highest:
            out.append(tuple(acc))
            return
        for c, b in parents(graph, x):
            acc.append(c)
            rec(b, acc)
            acc.pop()

    rec(nid, [])
    out.sort()
    return out


def wt_pairing(t: RootSystemType, graph: CrystalGraph, nid: str, i: int, walk=None) -> int:
    """``<h_i, wt(node)>`` from lambda and the colour counts of one walk."""
    if nid not in graph:
        raise CrystalError(f"node {nid} not in graph")
    if walk is None:
        walk = []
        x = nid
        while x != graph.highest:
            c, x = parents(graph, x)[0]
            walk.append(c)
    value = pairing(t, i, graph.weight)
    for j in walk:
        value -= pairing_root(t, i, j)
    return value


def find_node(graph: CrystalGraph, word) -> Optional[str]:
    """Node ``f_{w[0]} ... f_{w[-1]} v`` (rightmost applied first)."""
    x = graph.highest
    for i in reversed(word):
        if x is None:
            return None
        x = graph.f(x, i)
    return x
