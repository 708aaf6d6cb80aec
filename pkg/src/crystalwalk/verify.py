"""Exhaustive checks of the singular-node results on generated graphs.

Every checker reads only the stored graph data (edges plus the per-node
``eps``/``phi`` rows), never the model, so a corrupted graph is caught.  The
one exception is :func:`check_axioms`, whose job is to tie the stored data
back to the model.

An operator expression ``e_i^m x`` is treated as nonzero when either the
stored ``eps_i(x) >= m`` or the ``i``-coloured in-edges give a chain of length
``m``.  Premises of the form ``... = 0`` therefore need both sources to agree,
and conclusions of that form are violated if either source disagrees.
"""

from __future__ import annotations

import configparser
import json
import random
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Optional, Sequence

from .cartan import (
    Family,
    RootSystemType,
    WeightVector,
    cartan_matrix,
    contains_branch_node,
    dominant_weights_up_to_level,
    level,
    parse_type,
)
from .crystal import (
    CrystalGraph,
    count_walks,
    e as model_e,
    f as model_f,
    generate,
    walks_to_highest,
    wt_pairing,
)
from .perfect import is_consecutive, walk_graphs
from .weyl import weyl_dimension

WALK_LIMIT = 4096


@dataclass
class VerificationReport:
    theorem: str
    type: str
    weight: Optional[list[int]]
    depth: Optional[int]
    instances: int = 0
    violations: list[tuple[str, str, str]] = field(default_factory=list)
    skipped_frontier: int = 0
    counts: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        if self.violations:
            return "fail"
        return "pass" if self.instances > 0 else "vacuous"

    @property
    def passed(self) -> bool:
        return not self.violations

    def violate(self, node: str, clause: str, details: str = "") -> None:
        self.violations.append((node, clause, details))

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "type": self.type,
            "weight": self.weight,
            "depth": self.depth,
            "instances": self.instances,
            "status": self.status,
            "violations": [list(v) for v in self.violations],
            "skipped_frontier": self.skipped_frontier,
            "counts": self.counts,
        }


def _report(name: str, g: CrystalGraph) -> VerificationReport:
    w = g.weight.as_list(g.t) if g.weight is not None else None
    return VerificationReport(name, str(g.t), w, g.depth_limit)


# ---------------------------------------------------------------------------
# graph primitives on stored data


def _chain(g: CrystalGraph, x: str, i: int) -> int:
    n = 0
    while (x := g.in_edges[x].get(i)) is not None:
        n += 1
    return n


def _nonzero(g: CrystalGraph, x: Optional[str], i: int, m: int = 1) -> bool:
    """Whether ``e_i^m x`` may be nonzero according to either data source."""
    if x is None:
        return False
    return g.eps(x, i) >= m or _chain(g, x, i) >= m


def _up(g: CrystalGraph, x: Optional[str], word: Sequence[int]) -> Optional[str]:
    """``e_{w[0]} ... e_{w[-1]} x`` along stored edges (rightmost first)."""
    for i in reversed(word):
        if x is None:
            return None
        x = g.in_edges[x].get(i)
    return x


def _singular(g: CrystalGraph, x: str) -> bool:
    return g.is_singular(x) and len(g.in_edges[x]) <= 1


# ---------------------------------------------------------------------------
# crystal axioms


def check_axioms(g: CrystalGraph) -> VerificationReport:
    """Mutual inverse edges, ``phi = eps + <h, wt>`` and string lengths."""
    rep = _report("axioms", g)
    t = g.t
    for s, c, d in g.edges():
        rep.instances += 1
        if g.in_edges[d].get(c) != s:
            rep.violate(d, "mutual-inverse", f"{s} -{c}-> {d} missing reverse")
        if model_f(t, g.nodes[s], c) != g.nodes[d] or model_e(t, g.nodes[d], c) != g.nodes[s]:
            rep.violate(d, "mutual-inverse", f"{s} -{c}-> {d} disagrees with f/e")
    for x in g.order:
        if not g.interior(x):
            rep.skipped_frontier += 1
            continue
        for i in t.index_set:
            rep.instances += 1
            if g.phi(x, i) - g.eps(x, i) != wt_pairing(t, g, x, i):
                rep.violate(x, "phi=eps+wt", f"colour {i}")
            if g.eps(x, i) != _chain(g, x, i):
                rep.violate(x, "string-length", f"eps_{i}")
            n, y = 0, x
            while y is not None and g.interior(y):
                y = g.out_edges[y].get(i)
                if y is not None:
                    n += 1
            if y is None and g.phi(x, i) != n:
                rep.violate(x, "string-length", f"phi_{i}")
    return rep


def check_weyl_dimension(t: RootSystemType, lam: WeightVector, g: Optional[CrystalGraph] = None) -> VerificationReport:
    g = g or generate(t, lam, None)
    rep = _report("weyl-dimension", g)
    rep.instances = 1
    expected = weyl_dimension(t, lam)
    rep.counts = {"nodes": len(g), "expected": expected}
    if len(g) != expected:
        rep.violate(g.highest, "dimension", f"{len(g)} nodes, Weyl dimension {expected}")
    return rep


# ---------------------------------------------------------------------------
# lemma and corollaries


def check_lemma_eps(g: CrystalGraph, literal: bool = False) -> VerificationReport:
    """``eps(e_i b) - eps(b)`` has ``m_i = -1`` and ``0 <= m_j <= -a_ji``.

    The bound is read with the indices in the order the lemma's own proof
    uses (``<h_j, alpha_i>``); the transposed bound fails on the 5-dimensional
    C_2 crystal, where ``e_2`` raises ``eps_1`` by two.  ``literal=True``
    checks the printed ``-a_ij`` instead, to measure that discrepancy.
    """
    rep = _report("lemma-eps", g)
    a = cartan_matrix(g.t)
    for b, i, x in g.edges():
        # x = f_i b, so b = e_i x plays the lemma's e_i b
        rep.instances += 1
        for j in g.t.index_set:
            m = g.eps(b, j) - g.eps(x, j)
            if j == i:
                if m != -1:
                    rep.violate(x, "m_i=-1", f"colour {i}: m={m}")
            elif not 0 <= m <= -(a[i, j] if literal else a[j, i]):
                rep.violate(x, "0<=m_j<=-a_ji", f"i={i} j={j} m={m}")
    return rep


def _pairs(t: RootSystemType):
    return [(i, j) for i in t.index_set for j in t.index_set if i != j]


def check_cor_zero(g: CrystalGraph) -> VerificationReport:
    """``a_ij = 0``: ``e_j b = 0  =>  e_j e_i b = 0``."""
    rep = _report("cor-zero", g)
    a = cartan_matrix(g.t)
    for b in g.order:
        if not g.interior(b):
            rep.skipped_frontier += 1
            continue
        for i, j in _pairs(g.t):
            if a[i, j] != 0 or _nonzero(g, b, j):
                continue
            c = _up(g, b, [i])
            if c is None:
                continue
            rep.instances += 1
            if _nonzero(g, c, j):
                rep.violate(b, "e_j e_i b = 0", f"i={i} j={j}")
    return rep


def check_cor_parent(g: CrystalGraph) -> VerificationReport:
    """``a``, ``b = e_i a`` singular and ``e_j b != 0``  =>  ``a_ij < 0``."""
    rep = _report("cor-parent", g)
    a = cartan_matrix(g.t)
    for x in g.order:
        if not g.interior(x):
            rep.skipped_frontier += 1
            continue
        if not g.is_singular(x):
            continue
        for i, b in g.in_edges[x].items():
            if not g.is_singular(b):
                continue
            rep.instances += 1
            for j in g.t.index_set:
                if _nonzero(g, b, j) and a[i, j] >= 0:
                    rep.violate(x, "a_ij<0", f"i={i} j={j}")
    return rep


def check_cor_serre(g: CrystalGraph) -> VerificationReport:
    """The three Serre cases, counted separately in ``counts``.

    An instance is counted when the premises hold and the element hit by
    the final ``e`` is nonzero, so vacuous truths are not counted.
    """
    rep = _report("cor-serre", g)
    a = cartan_matrix(g.t)
    counts = {"case0": 0, "case1": 0, "case2": 0, "case2_second": 0, "case2_refined": 0}

    def conclude(b, key, x, i, m, clause):
        if x is None:
            return
        counts[key] += 1
        rep.instances += 1
        if _nonzero(g, x, i, m):
            rep.violate(b, clause, "")

    for b in g.order:
        if not g.interior(b):
            rep.skipped_frontier += 1
            continue
        for i, j in _pairs(g.t):
            aij = a[i, j]
            prem = not _nonzero(g, b, j) and not _nonzero(g, b, i, 2)
            tag = f"(i={i},j={j})"
            if aij == 0 and prem:
                conclude(b, "case0", _up(g, b, [i]), j, 1, f"case0 e_j e_i b=0 {tag}")
            elif aij == -1 and prem:
                conclude(b, "case1", _up(g, b, [j, i]), i, 1, f"case1 e_i e_j e_i b=0 {tag}")
            elif aij == -2:
                if prem and not _nonzero(g, _up(g, b, [i]), j, 2):
                    conclude(b, "case2", _up(g, b, [i, j, i]), i, 1, f"case2 e_i e_i e_j e_i b=0 {tag}")
                if not _nonzero(g, b, i) and not _nonzero(g, b, j, 2):
                    conclude(b, "case2_second", _up(g, b, [j]), i, 3, f"case2 e_i^3 e_j b=0 {tag}")
                if a[j, i] == -1 and prem:
                    conclude(b, "case2_refined", _up(g, b, [i]), j, 2, f"case2 e_j^2 e_i b=0 {tag}")
                    conclude(b, "case2_refined", _up(g, b, [i, j, i]), j, 1, f"case2 e_j e_i e_j e_i b=0 {tag}")
    rep.counts = counts
    return rep


# ---------------------------------------------------------------------------
# the two theorems


def _w(t: RootSystemType, spec: str) -> WeightVector:
    """Parse ``"2*n"``, ``"n-1+n"``, ``"0+1"`` into a weight for rank ``n``."""
    out: dict[int, int] = {}
    for term in spec.split("+"):
        term = term.strip()
        mult = 1
        if "*" in term:
            k, term = term.split("*")
            mult = int(k)
        idx = eval_index(term, t.rank)
        out[idx] = out.get(idx, 0) + mult
    return WeightVector(out)


def eval_index(term: str, n: int) -> int:
    m = re.fullmatch(r"(n)?([+-]\d+)?|(\d+)", term.strip())
    if not m:
        raise ValueError(f"bad colour expression {term!r}")
    if m.group(3) is not None:
        return int(m.group(3))
    return n + int(m.group(2) or 0)


# Exceptional eps values of non-singular ancestors, per family.  The entry for
# A2odd is not in the theorem text; see exception_table().
DEFAULT_EXCEPTIONS: dict[Family, list[str]] = {
    Family.A: [],
    Family.C: [],
    Family.B: ["2*n"],
    Family.D: ["n-1+n"],
    Family.A1aff: [],
    Family.Aaff: [],
    Family.Caff: [],
    Family.A2even: ["2*0"],
    Family.A2evenDagger: ["2*n"],
    Family.Daff2: ["2*n", "2*0"],
    Family.Baff: ["2*n", "0+1"],
    Family.Daff: ["n-1+n", "0+1"],
    Family.A2odd: ["0+1"],
}

# finite B and D allow at most one non-singular ancestor
_AT_MOST_ONE = {Family.B, Family.D}


def exception_table(t: RootSystemType, overrides: Optional[dict] = None) -> list[WeightVector]:
    specs = (overrides or {}).get(t.family.value, DEFAULT_EXCEPTIONS[t.family])
    return [_w(t, s) for s in specs]


def _swap_pairs(t: RootSystemType) -> list[frozenset]:
    n = t.rank
    if t.family in (Family.D, Family.Daff):
        pairs = [frozenset((n - 1, n))]
        return pairs + ([frozenset((0, 1))] if t.affine else [])
    if t.family in (Family.Baff, Family.A2odd):
        return [frozenset((0, 1))]
    return []


def _canonical(walk: Sequence[int], swaps: list[frozenset]) -> tuple:
    """Sort every adjacent swap-pair occurrence so diamond variants coincide."""
    w = list(walk)
    r = 0
    while r < len(w) - 1:
        if frozenset((w[r], w[r + 1])) in swaps and w[r] != w[r + 1]:
            w[r], w[r + 1] = sorted((w[r], w[r + 1]))
            r += 2
        else:
            r += 1
    return tuple(w)


def qualifying_nodes(g: CrystalGraph, report: Optional[VerificationReport] = None):
    """Singular nodes with a singular parent (and grandparent in A_1^{(1)})."""
    grand = g.t.family is Family.A1aff
    for x in g.order:
        if x == g.highest or not _singular(g, x):
            continue
        if not g.interior(x):
            if report is not None:
                report.skipped_frontier += 1
            continue
        (i, b), = g.in_edges[x].items()
        if not _singular(g, b):
            continue
        if grand:
            if b == g.highest:
                continue
            (_, c), = g.in_edges[b].items()
            if not _singular(g, c):
                continue
        yield x


def _walk_clauses(g: CrystalGraph, x: str, rep: VerificationReport, graphs) -> list[tuple[int, ...]]:
    t = g.t
    n_walks = count_walks(g, x)
    if n_walks > WALK_LIMIT:
        rep.violate(x, "walk-count", f"{n_walks} walks")
        return []
    walks = walks_to_highest(g, x)
    rep.counts["walks"] = rep.counts.get("walks", 0) + len(walks)
    hist = rep.counts.setdefault("walk_count_histogram", {})
    hist[str(len(walks))] = hist.get(str(len(walks)), 0) + 1
    for w in walks:
        if not any(is_consecutive(pc, w) for pc in graphs):
            rep.violate(x, "consecutive", f"walk {list(w)}")
    branch = contains_branch_node(t)
    if not branch:
        if len(walks) != 1:
            rep.violate(x, "unique-walk", f"{len(walks)} walks")
    else:
        if not t.affine and len(walks) > 2:
            rep.violate(x, "at-most-two-walks", f"{len(walks)} walks")
        swaps = _swap_pairs(t)
        if len({_canonical(w, swaps) for w in walks}) != 1:
            rep.violate(x, "walks-differ-by-swap", str([list(w) for w in walks]))
        if len(walks) == 2:
            ex = rep.counts.setdefault("two_walk_examples", [])
            if len(ex) < 3:
                ex.append([list(w) for w in walks])
    return walks


def verify_thm_global(g: CrystalGraph, t: Optional[RootSystemType] = None) -> VerificationReport:
    t = t or g.t
    rep = _report("thm-global", g)
    graphs = walk_graphs(t)
    for x in qualifying_nodes(g, rep):
        rep.instances += 1
        _walk_clauses(g, x, rep, graphs)
    return rep


def verify_thm_type(
    g: CrystalGraph,
    t: Optional[RootSystemType] = None,
    exceptions: Optional[dict] = None,
    cross_validate: bool = False,
) -> VerificationReport:
    """Walk clauses plus the ancestor-singularity clause with its exceptions."""
    t = t or g.t
    rep = _report("thm-type", g)
    graphs = walk_graphs(t)
    allowed = exception_table(t, exceptions)
    seen_exceptions: dict[str, int] = {}
    cv = {"checked": 0, "passed": 0}
    for x in qualifying_nodes(g, rep):
        rep.instances += 1
        walks = _walk_clauses(g, x, rep, graphs)
        bad = []
        stack = list(g.in_edges[x].values())
        seen = set()
        while stack:
            c = stack.pop()
            if c in seen:
                continue
            seen.add(c)
            stack.extend(g.in_edges[c].values())
            if _singular(g, c):
                continue
            ev = g.epsilon_vector(c)
            if ev in allowed:
                key = str(ev.as_list(t))
                seen_exceptions[key] = seen_exceptions.get(key, 0) + 1
                bad.append(c)
            else:
                rep.violate(x, "ancestor-singular", f"ancestor {c} eps={ev.as_list(t)}")
        if t.family in _AT_MOST_ONE and len(bad) > 1:
            rep.violate(x, "at-most-one-exception", f"{len(bad)} non-singular ancestors")
        if cross_validate and t.affine and walks:
            cv["checked"] += 1
            if _cross_validate(t, g, x, walks[0]):
                cv["passed"] += 1
    rep.counts["exceptional_ancestors"] = seen_exceptions
    if cross_validate:
        rep.counts["cross_validation"] = cv
    return rep


def _cross_validate(t: RootSystemType, g: CrystalGraph, x: str, walk) -> bool:
    """construct_walk_node on ``walk`` succeeds when its ``mu`` is this graph's weight."""
    from .tensor import TensorError, construct_walk_node

    for rev in ([False, True] if t.family is Family.Aaff else [False]):
        try:
            _, report = construct_walk_node(t, walk, reversed_arrows=rev)
        except TensorError:
            continue
        if report.mu == g.weight.as_list(t):
            return report.passed
    return True  # no cataloged configuration matches this weight


# ---------------------------------------------------------------------------
# Stembridge axioms (simply-laced model validation)


def simply_laced(t: RootSystemType) -> bool:
    a = cartan_matrix(t)
    return a.is_symmetric() and all(a[i, j] in (0, -1) for i, j in _pairs(t))


def check_stembridge(g: CrystalGraph) -> VerificationReport:
    """Upward Stembridge axioms P4-P6 for simply-laced types."""
    rep = _report("stembridge", g)
    a = cartan_matrix(g.t)
    if not simply_laced(g.t):
        return rep
    for x in g.order:
        for i, j in _pairs(g.t):
            if i > j:
                continue
            xi, xj = g.in_edges[x].get(i), g.in_edges[x].get(j)
            if xi is None or xj is None:
                continue
            rep.instances += 1
            di = g.eps(xi, j) - g.eps(x, j)  # Delta_i eps_j
            dj = g.eps(xj, i) - g.eps(x, i)
            if not (0 <= di <= 1 and 0 <= dj <= 1):
                rep.violate(x, "P4", f"i={i} j={j}")
                continue
            if a[i, j] == 0 and (di or dj):
                rep.violate(x, "P3", f"i={i} j={j}")
            if di == 0 and dj == 0:
                if _up(g, x, [i, j]) is None or _up(g, x, [i, j]) != _up(g, x, [j, i]):
                    rep.violate(x, "P5", f"i={i} j={j}")
            elif di == 1 and dj == 1:
                y1 = _up(g, x, [i, j, j, i])
                y2 = _up(g, x, [j, i, i, j])
                if y1 is None or y1 != y2:
                    rep.violate(x, "P6", f"i={i} j={j}")
    return rep


# ---------------------------------------------------------------------------
# sweep


CHECKERS = {
    "axioms": check_axioms,
    "lemma-eps": check_lemma_eps,
    "cor-zero": check_cor_zero,
    "cor-parent": check_cor_parent,
    "cor-serre": check_cor_serre,
    "type": verify_thm_type,
    "global": verify_thm_global,
}


@dataclass
class SweepConfig:
    finite_types: list[str]
    finite_weights: str  # "fundamental", "pairs" or "fundamental,pairs"
    finite_depth: Optional[int]
    affine_types: list[str]
    affine_max_level: int
    affine_depth: int
    checkers: list[str]
    exceptions: dict[str, list[str]] = field(default_factory=dict)
    stembridge: bool = True
    cross_validate: bool = False

    @classmethod
    def from_text(cls, text: str) -> "SweepConfig":
        cp = configparser.ConfigParser()
        cp.read_string(text)

        def lst(sec, key, default=""):
            raw = cp.get(sec, key, fallback=default)
            return [s.strip() for s in raw.split(",") if s.strip()]

        fd = cp.get("finite", "depth", fallback="full").strip()
        exc = {}
        if cp.has_section("exceptions"):
            for fam, raw in cp.items("exceptions"):
                exc[_family_key(fam)] = [s.strip() for s in raw.split(",") if s.strip()]
        return cls(
            finite_types=lst("finite", "types"),
            finite_weights=cp.get("finite", "weights", fallback="fundamental,pairs"),
            finite_depth=None if fd == "full" else int(fd),
            affine_types=lst("affine", "types"),
            affine_max_level=cp.getint("affine", "max_level", fallback=2),
            affine_depth=cp.getint("affine", "depth", fallback=8),
            checkers=lst("sweep", "checkers", ",".join(CHECKERS)),
            exceptions=exc,
            stembridge=cp.getboolean("sweep", "stembridge", fallback=True),
            cross_validate=cp.getboolean("sweep", "cross_validate", fallback=False),
        )

    @classmethod
    def load(cls, path: Optional[str] = None) -> "SweepConfig":
        if path is None:
            text = resources.files("crystalwalk").joinpath("default_sweep.ini").read_text()
        else:
            with open(path) as fh:
                text = fh.read()
        return cls.from_text(text)


def _family_key(name: str) -> str:
    # configparser lowercases keys
    for fam in Family:
        if fam.value.lower() == name.lower():
            return fam.value
    raise ValueError(f"unknown family {name!r} in [exceptions]")


def finite_weights(t: RootSystemType, which: str) -> list[WeightVector]:
    idx = t.index_set
    out = []
    kinds = {s.strip() for s in which.split(",")}
    if "fundamental" in kinds:
        out += [WeightVector({i: 1}) for i in idx]
    if "pairs" in kinds:
        for p, i in enumerate(idx):
            for j in idx[p:]:
                out.append(WeightVector({i: 1}) + WeightVector({j: 1}))
    return out


def grid(cfg: SweepConfig) -> list[tuple[RootSystemType, WeightVector, Optional[int]]]:
    cells = []
    for s in cfg.finite_types:
        t = parse_type(s)
        for lam in finite_weights(t, cfg.finite_weights):
            cells.append((t, lam, cfg.finite_depth))
    for s in cfg.affine_types:
        t = parse_type(s)
        for lam in dominant_weights_up_to_level(t, cfg.affine_max_level):
            if level(t, lam) > 0:
                cells.append((t, lam, cfg.affine_depth))
    return cells


def run_cell(t: RootSystemType, lam: WeightVector, depth: Optional[int], cfg: SweepConfig) -> list[VerificationReport]:
    g = generate(t, lam, depth)
    out = []
    for name in cfg.checkers:
        if name == "type":
            out.append(verify_thm_type(g, t, cfg.exceptions, cfg.cross_validate))
        else:
            out.append(CHECKERS[name](g))
    if cfg.stembridge and simply_laced(t):
        out.append(check_stembridge(g))
    if not t.affine and depth is None:
        out.append(check_weyl_dimension(t, lam, g))
    for r in out:
        r.counts.setdefault("edges", g.edge_count())
        r.counts.setdefault("nodes", len(g))
    return out


def sweep(cfg: SweepConfig) -> Iterable[VerificationReport]:
    for t, lam, depth in grid(cfg):
        yield from run_cell(t, lam, depth, cfg)


def report_lines(reports: Iterable[VerificationReport]) -> Iterable[str]:
    for r in reports:
        yield json.dumps(r.to_json(), sort_keys=True)


# ---------------------------------------------------------------------------
# mutation self-tests


@dataclass
class Mutation:
    kind: str  # "flip-colour" or "alter-eps"
    node: str
    detail: str


def _flip(g: CrystalGraph, src: str, colour: int, new: int) -> Optional[Mutation]:
    dst = g.out_edges[src].get(colour)
    if dst is None or new in g.out_edges[src] or new in g.in_edges[dst]:
        return None
    g.remove_edge(src, colour)
    g.out_edges[src][new] = dst
    g.in_edges[dst][new] = src
    return Mutation("flip-colour", dst, f"{src} -{colour}-> {dst} recoloured {new}")


def _alter(g: CrystalGraph, x: str, i: int, value: int) -> Mutation:
    old = g.eps(x, i)
    g.eps_data[x][i] = value
    return Mutation("alter-eps", x, f"eps_{i} {old} -> {value}")


def _mutants(name: str, g: CrystalGraph, rng: random.Random, per_kind: int) -> list[tuple[Mutation, CrystalGraph]]:
    """Seeded corruptions aimed at the clause each checker asserts.

    Each mutant falsifies the checker's conclusion at one randomly chosen
    instance while leaving that instance's premises in place.
    """
    t = g.t
    a = cartan_matrix(t)
    idx = t.index_set
    out: list[tuple[Mutation, CrystalGraph]] = []
    edges = list(g.edges())
    interior = [x for x in g.order if g.interior(x)]

    def attempt(make):
        tries = 0
        got = 0
        while got < per_kind and tries < 200:
            tries += 1
            h = g.copy()
            m = make(h)
            if m is not None:
                out.append((m, h))
                got += 1

    if name == "axioms":
        def flip(h):
            s, c, d = rng.choice(edges)
            return _flip(h, s, c, rng.choice([k for k in idx if k != c]))

        def alter(h):
            x = rng.choice(interior)
            i = rng.choice(idx)
            return _alter(h, x, i, h.eps(x, i) + 1)
    elif name == "lemma-eps":
        def flip(h):
            s, c, d = rng.choice(edges)
            return _flip(h, s, c, rng.choice([k for k in idx if k != c]))

        def alter(h):
            s, c, d = rng.choice(edges)
            return _alter(h, d, c, h.eps(d, c) + 1)
    elif name == "cor-zero":
        inst = [(b, i, j, c) for b in interior for i, j in _pairs(t)
                if a[i, j] == 0 and not _nonzero(g, b, j) and (c := _up(g, b, [i])) is not None]

        def flip(h):
            b, i, j, c = rng.choice(inst)
            cands = [(k, p) for k, p in h.in_edges[c].items() if k != j]
            if not cands:
                return None
            k, p = rng.choice(cands)
            return _flip(h, p, k, j)

        def alter(h):
            b, i, j, c = rng.choice(inst)
            return _alter(h, c, j, 1)
    elif name == "cor-parent":
        inst = [(x, i, b) for x in interior if g.is_singular(x) for i, b in g.in_edges[x].items()
                if g.is_singular(b)]

        def bad_colour(i):
            return [j for j in idx if a[i, j] >= 0]

        def flip(h):
            x, i, b = rng.choice(inst)
            cands = [(k, p) for k, p in h.in_edges[b].items()]
            if not cands:
                return None
            k, p = cands[0]
            return _flip(h, p, k, rng.choice(bad_colour(i)))

        def alter(h):
            x, i, b = rng.choice(inst)
            for k in list(h.eps_data[b]):
                h.eps_data[b][k] = 0
            return _alter(h, b, rng.choice(bad_colour(i)), 1)
    elif name == "cor-serre":
        inst = []
        for b in interior:
            for i, j in _pairs(t):
                aij = a[i, j]
                prem = not _nonzero(g, b, j) and not _nonzero(g, b, i, 2)
                if aij == 0 and prem and (x := _up(g, b, [i])) is not None:
                    inst.append((x, j))
                elif aij == -1 and prem and (x := _up(g, b, [j, i])) is not None:
                    inst.append((x, i))

        def flip(h):
            x, k = rng.choice(inst)
            cands = [(c, p) for c, p in h.in_edges[x].items() if c != k]
            if not cands:
                return None
            c, p = rng.choice(cands)
            return _flip(h, p, c, k)

        def alter(h):
            x, k = rng.choice(inst)
            return _alter(h, x, k, 1)
    elif name in ("type", "global"):
        quals = list(qualifying_nodes(g))
        graphs = walk_graphs(t)

        def flip(h):
            # recolour the last arrow into a qualifying node so that, by a
            # direct check, none of its walks stays consecutive
            x = rng.choice(quals)
            (c, p), = h.in_edges[x].items()
            tails = walks_to_highest(h, p) if p != h.highest else [()]
            choices = [k for k in idx if k != c]
            rng.shuffle(choices)
            for k in choices:
                if all(not any(is_consecutive(pc, (k,) + w) for pc in graphs) for w in tails):
                    m = _flip(h, p, c, k)
                    if m is not None:
                        h.eps_data[x] = {k: 1}
                        return m
            return None

        if name == "type":
            def alter(h):
                # an ancestor beyond the parent gets an eps outside the table
                x = rng.choice(quals)
                h.eps_data[h.highest] = {idx[0]: 3}
                return Mutation("alter-eps", x, f"eps(v) -> 3*Lambda_{idx[0]}")
        else:
            promotable = []
            for x in g.order:
                if x == g.highest or not g.interior(x) or not _singular(g, x):
                    continue
                (c, b), = g.in_edges[x].items()
                if _singular(g, b) or len(g.in_edges[b]) != 1:
                    continue
                if t.family is Family.A1aff:
                    continue
                walks = walks_to_highest(g, x, limit=WALK_LIMIT)
                if (not contains_branch_node(t) and len(walks) != 1) or any(
                    not any(is_consecutive(pc, w) for pc in graphs) for w in walks
                ):
                    promotable.append((x, b))

            def alter(h):
                # make the parent of a non-qualifying node look singular
                if not promotable:
                    return None
                x, b = rng.choice(promotable)
                (k, _), = h.in_edges[b].items()
                h.eps_data[b] = {}
                return _alter(h, b, k, 1)
    else:
        raise ValueError(name)

    if name in ("cor-zero", "cor-parent", "cor-serre") and not locals().get("inst"):
        return out
    if name in ("type", "global") and not quals:
        return out
    attempt(flip)
    attempt(alter)
    return out


@dataclass
class MutationReport:
    checker: str
    seeded: int
    detected: int
    missed: list[str]

    @property
    def rate(self) -> float:
        return self.detected / self.seeded if self.seeded else 0.0


def mutation_selftest(g: CrystalGraph, seed: int = 0, per_kind: int = 5) -> list[MutationReport]:
    rng = random.Random(seed)
    out = []
    for name in CHECKERS:
        mutants = _mutants(name, g, rng, per_kind)
        det = 0
        missed = []
        for m, h in mutants:
            fn = CHECKERS[name]
            if not fn(h).passed:
                det += 1
            else:
                missed.append(f"{m.kind}: {m.detail}")
        out.append(MutationReport(name, len(mutants), det, missed))
    return out
