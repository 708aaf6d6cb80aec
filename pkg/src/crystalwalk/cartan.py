"""Root-system metadata: index sets, Cartan matrices, pairings and levels.

Cartan matrices follow the convention ``a[i][j] = <h_i, alpha_j>``.  A double
bond in a Dynkin diagram whose arrow points at node ``i`` gives
``a[i][j] == -2`` for its neighbour ``j``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType
from typing import Iterable, Mapping


class Family(str, Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"
    A1aff = "A1aff"
    Aaff = "Aaff"
    A2even = "A2even"
    A2evenDagger = "A2evenDagger"
    A2odd = "A2odd"
    Baff = "Baff"
    Caff = "Caff"
    Daff = "Daff"
    Daff2 = "Daff2"


FINITE_FAMILIES = frozenset({Family.A, Family.B, Family.C, Family.D})

# smallest admissible n for each family
MIN_RANK = {
    Family.A: 1,
    Family.B: 2,
    Family.C: 2,
    Family.D: 4,
    Family.A1aff: 1,
    Family.Aaff: 2,
    Family.A2even: 2,
    Family.A2evenDagger: 2,
    Family.A2odd: 3,
    Family.Baff: 3,
    Family.Caff: 2,
    Family.Daff: 4,
    Family.Daff2: 2,
}


class RootSystemError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class RootSystemType:
    """A classical finite or affine family together with the rank ``n``.

    ``n`` is the subscript appearing in the usual name of the family, so
    ``A_4^{(2)}`` is ``RootSystemType(Family.A2even, 2)`` and ``D_3^{(2)}`` is
    ``RootSystemType(Family.Daff2, 2)``.
    """

    family: Family
    rank: int

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if not isinstance(self.rank, int) or isinstance(self.rank, bool):
            raise RootSystemError(f"rank must be an integer, got {self.rank!r}")
        if self.family is Family.A1aff and self.rank != 1:
            raise RootSystemError("A1aff only exists with rank 1")
        if self.rank < MIN_RANK[self.family]:
            raise RootSystemError(
                f"{self.family.value} requires rank >= {MIN_RANK[self.family]}, got {self.rank}"
            )

    @property
    def affine(self) -> bool:
        return self.family not in FINITE_FAMILIES

    @property
    def index_set(self) -> tuple[int, ...]:
        start = 0 if self.affine else 1
        return tuple(range(start, self.rank + 1))

    @property
    def simply_laced(self) -> bool:
        return self.family in (Family.A, Family.D, Family.Aaff, Family.Daff)

    def __str__(self) -> str:
        return format_type(self)


# ---------------------------------------------------------------------------
# type name grammar: A3, C2, D4, A2~1, A4~2, A4~2d, A5~2, B3~1, C2~1, D4~1, D3~2

_TYPE_RE = re.compile(r"^([ABCD])(\d+)(?:~([12])(d?))?$")


def parse_type(text: str) -> RootSystemType:
    m = _TYPE_RE.match(text.strip())
    if not m:
        raise RootSystemError(f"unrecognised type string {text!r}")
    letter, num, twist, dagger = m.group(1), int(m.group(2)), m.group(3), m.group(4)
    if twist is None:
        return RootSystemType(Family(letter), num)
    if dagger and not (letter == "A" and twist == "2" and num % 2 == 0):
        raise RootSystemError(f"dagger only applies to A_(2n)^(2): {text!r}")
    if twist == "1":
        if letter == "A":
            return RootSystemType(Family.A1aff if num == 1 else Family.Aaff, num)
        return RootSystemType({"B": Family.Baff, "C": Family.Caff, "D": Family.Daff}[letter], num)
    # twisted
    if letter == "A":
        if num % 2 == 0:
            fam = Family.A2evenDagger if dagger else Family.A2even
            return RootSystemType(fam, num // 2)
        return RootSystemType(Family.A2odd, (num + 1) // 2)
    if letter == "D":
        return RootSystemType(Family.Daff2, num - 1)
    raise RootSystemError(f"no twisted affine family {text!r}")


def format_type(t: RootSystemType) -> str:
    f, n = t.family, t.rank
    if f in FINITE_FAMILIES:
        return f"{f.value}{n}"
    return {
        Family.A1aff: "A1~1",
        Family.Aaff: f"A{n}~1",
        Family.Baff: f"B{n}~1",
        Family.Caff: f"C{n}~1",
        Family.Daff: f"D{n}~1",
        Family.A2even: f"A{2 * n}~2",
        Family.A2evenDagger: f"A{2 * n}~2d",
        Family.A2odd: f"A{2 * n - 1}~2",
        Family.Daff2: f"D{n + 1}~2",
    }[f]


# ---------------------------------------------------------------------------
# Cartan matrices


class CartanMatrix:
    """Integer matrix indexed by the colour set of a root system type."""

    def __init__(self, index_set: Iterable[int], entries: Mapping[tuple[int, int], int]):
        self.index_set = tuple(index_set)
        full = {(i, j): 0 for i in self.index_set for j in self.index_set}
        full.update(entries)
        self._entries = MappingProxyType(full)

    def __getitem__(self, key: tuple[int, int]) -> int:
        return self._entries[key]

    def rows(self) -> list[list[int]]:
        return [[self._entries[i, j] for j in self.index_set] for i in self.index_set]

    def transpose(self) -> "CartanMatrix":
        return CartanMatrix(self.index_set, {(j, i): v for (i, j), v in self._entries.items()})

    def is_symmetric(self) -> bool:
        return all(self._entries[i, j] == self._entries[j, i] for i, j in self._entries)

    def neighbours(self, i: int) -> list[int]:
        return [j for j in self.index_set if j != i and self._entries[i, j] != 0]

    def __eq__(self, other):
        if not isinstance(other, CartanMatrix):
            return NotImplemented
        return self.index_set == other.index_set and dict(self._entries) == dict(other._entries)

    def __repr__(self):
        return f"CartanMatrix({self.rows()})"


def _bond(entries: dict, i: int, j: int, aij: int = -1, aji: int = -1) -> None:
    entries[i, j] = aij
    entries[j, i] = aji


def _chain(entries: dict, nodes: Iterable[int]) -> None:
    nodes = list(nodes)
    for a, b in zip(nodes, nodes[1:]):
        _bond(entries, a, b)


def cartan_matrix(t: RootSystemType) -> CartanMatrix:
    return _cartan_cached(t)


_CACHE: dict[RootSystemType, CartanMatrix] = {}


def _cartan_cached(t: RootSystemType) -> CartanMatrix:
    if t not in _CACHE:
        _CACHE[t] = _build_cartan(t)
    return _CACHE[t]


def _build_cartan(t: RootSystemType) -> CartanMatrix:
    f, n = t.family, t.rank
    e: dict[tuple[int, int], int] = {(i, i): 2 for i in t.index_set}
    if f is Family.A:
        _chain(e, range(1, n + 1))
    elif f is Family.B:
        _chain(e, range(1, n))
        _bond(e, n - 1, n, -1, -2)
    elif f is Family.C:
        _chain(e, range(1, n))
        _bond(e, n - 1, n, -2, -1)
    elif f is Family.D:
        _chain(e, range(1, n))
        _bond(e, n - 2, n)
    elif f is Family.A1aff:
        _bond(e, 0, 1, -2, -2)
    elif f is Family.Aaff:
        _chain(e, range(0, n + 1))
        _bond(e, n, 0)
    elif f is Family.Baff:
        _chain(e, range(1, n))
        _bond(e, n - 1, n, -1, -2)
        _bond(e, 0, 2)
    elif f is Family.Caff:
        _chain(e, range(1, n))
        _bond(e, 0, 1, -1, -2)
        _bond(e, n - 1, n, -2, -1)
    elif f is Family.Daff:
        _chain(e, range(1, n))
        _bond(e, n - 2, n)
        _bond(e, 0, 2)
    elif f is Family.A2even:
        _chain(e, range(1, n))
        _bond(e, 0, 1, -2, -1)
        _bond(e, n - 1, n, -2, -1)
    elif f is Family.A2evenDagger:
        return _build_cartan(RootSystemType(Family.A2even, n)).transpose()
    elif f is Family.A2odd:
        _chain(e, range(1, n))
        _bond(e, n - 1, n, -2, -1)
        _bond(e, 0, 2)
    elif f is Family.Daff2:
        _chain(e, range(1, n))
        _bond(e, 0, 1, -2, -1)
        _bond(e, n - 1, n, -1, -2)
    return CartanMatrix(t.index_set, e)


def contains_branch_node(t: RootSystemType) -> bool:
    """True when some Dynkin node has three or more neighbours.

    This is the reading of "contains D_4 as a subdiagram" used by the walk
    uniqueness checks: bond multiplicities are ignored.
    """
    a = cartan_matrix(t)
    return any(len(a.neighbours(i)) >= 3 for i in t.index_set)


# ---------------------------------------------------------------------------
# weights


class WeightVector(Mapping[int, int]):
    """Sparse integer combination of fundamental weights."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c: dict[int, int] = {}
        for k, v in items:
            v = int(v)
            if v:
                c[int(k)] = c.get(int(k), 0) + v
                if c[int(k)] == 0:
                    del c[int(k)]
        self._c = dict(sorted(c.items()))
        self._hash = None

    @classmethod
    def fundamental(cls, i: int, mult: int = 1) -> "WeightVector":
        return cls({i: mult})

    @classmethod
    def from_list(cls, t: RootSystemType, values: Iterable[int]) -> "WeightVector":
        values = list(values)
        if len(values) != len(t.index_set):
            raise RootSystemError(
                f"{t} needs {len(t.index_set)} weight coefficients, got {len(values)}"
            )
        return cls(zip(t.index_set, values))

    def as_list(self, t: RootSystemType) -> list[int]:
        return [self[i] for i in t.index_set]

    def __getitem__(self, i: int) -> int:
        return self._c.get(i, 0)

    def __iter__(self):
        return iter(self._c)

    def __len__(self):
        return len(self._c)

    def __contains__(self, i) -> bool:
        return i in self._c

    def __eq__(self, other):
        if isinstance(other, WeightVector):
            return self._c == other._c
        if isinstance(other, Mapping):
            return self._c == WeightVector(other)._c
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._c.items()))
        return self._hash

    def __add__(self, other: "WeightVector") -> "WeightVector":
        out = dict(self._c)
        for k, v in other.items():
            out[k] = out.get(k, 0) + v
        return WeightVector(out)

    def __sub__(self, other: "WeightVector") -> "WeightVector":
        return self + (-1) * other

    def __rmul__(self, k: int) -> "WeightVector":
        return WeightVector({i: k * v for i, v in self._c.items()})

    def is_dominant(self) -> bool:
        return all(v >= 0 for v in self._c.values())

    def total(self) -> int:
        return sum(self._c.values())

    def __repr__(self):
        if not self._c:
            return "0"
        parts = []
        for i, v in self._c.items():
            parts.append(f"L{i}" if v == 1 else f"{v}*L{i}")
        return " + ".join(parts)


def _check_colour(t: RootSystemType, i: int) -> None:
    if i not in t.index_set:
        raise RootSystemError(f"colour {i} not in index set of {t}")


def pairing(t: RootSystemType, i: int, w: WeightVector) -> int:
    """``<h_i, w>`` for ``w`` written over the fundamental weights."""
    _check_colour(t, i)
    for k in w:
        _check_colour(t, k)
    return w[i]


def pairing_root(t: RootSystemType, i: int, j: int) -> int:
    """``<h_i, alpha_j>``."""
    _check_colour(t, i)
    _check_colour(t, j)
    return cartan_matrix(t)[i, j]


def simple_root(t: RootSystemType, j: int) -> WeightVector:
    """``alpha_j`` expressed over fundamental weights (modulo the null root)."""
    a = cartan_matrix(t)
    return WeightVector({i: a[i, j] for i in t.index_set})


# Coefficients of the canonical central element on the simple coroots, listed
# over colours 0..n.  Not derivable from the crystal data; taken from the
# standard affine tables and cross-checked against cartan_matrix in tests.
def dual_kac_labels(t: RootSystemType) -> dict[int, int]:
    if not t.affine:
        raise RootSystemError(f"level undefined for finite type {t}")
    f, n = t.family, t.rank
    if f in (Family.A1aff, Family.Aaff, Family.Caff):
        labels = [1] * (n + 1)
    elif f is Family.Baff:
        labels = [1, 1] + [2] * (n - 2) + [1]
    elif f is Family.Daff:
        labels = [1, 1] + [2] * (n - 3) + [1, 1]
    elif f is Family.A2even:
        labels = [1] + [2] * n
    elif f is Family.A2evenDagger:
        labels = [2] * n + [1]
    elif f is Family.A2odd:
        labels = [1, 1] + [2] * (n - 1)
    elif f is Family.Daff2:
        labels = [1] + [2] * (n - 1) + [1]
    else:  # pragma: no cover
        raise RootSystemError(f"no labels for {t}")
    return dict(zip(range(n + 1), labels))


def level(t: RootSystemType, w: WeightVector) -> int:
    labels = dual_kac_labels(t)
    if not w.is_dominant():
        raise RootSystemError(f"level expects a dominant weight, got {w!r}")
    for k in w:
        _check_colour(t, k)
    return sum(labels[i] * w[i] for i in t.index_set)


def dominant_weights_up_to_level(t: RootSystemType, max_level: int) -> list[WeightVector]:
    """All nonzero dominant weights of level at most ``max_level``."""
    labels = dual_kac_labels(t)
    idx = t.index_set
    out: list[WeightVector] = []

    def rec(pos: int, remaining: int, acc: dict[int, int]):
        if pos == len(idx):
            if acc:
                out.append(WeightVector(acc))
            return
        i = idx[pos]
        c = 0
        while c * labels[i] <= remaining:
            nxt = dict(acc)
            if c:
                nxt[i] = c
            rec(pos + 1, remaining - c * labels[i], nxt)
            c += 1

    rec(0, max_level, {})
    out.sort(key=lambda w: (level(t, w), [-w[i] for i in idx]))
    return out
