"""Tensor products of crystals and the existence construction for walks.

Factor order is left to right as written: ``TensorNode((x1, x2, x3))`` is
``x1 (x) x2 (x) x3``.  The binary rules are

    eps_i(b2 (x) b1) = eps_i(b2) + max(0, eps_i(b1) - phi_i(b2))
    phi_i(b2 (x) b1) = phi_i(b1) + max(0, phi_i(b2) - eps_i(b1))

with ``e_i`` acting on the left factor iff ``phi_i(b2) >= eps_i(b1)`` and
``f_i`` acting on the left factor iff ``phi_i(b2) > eps_i(b1)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

from .cartan import RootSystemType, WeightVector, cartan_matrix, level
from .crystal import CrystalError, MonomialCrystal, generate
from .perfect import (
    BoxLabelling,
    PerfectCrystal,
    b11,
    bn1_typeA,
    box_nodes,
    is_consecutive,
)


class TensorError(ValueError):
    pass


@dataclass(frozen=True)
class TensorNode:
    factors: tuple
    components: tuple = field(compare=False, repr=False)

    def replace(self, pos: int, value) -> "TensorNode":
        fs = list(self.factors)
        fs[pos] = value
        return TensorNode(tuple(fs), self.components)

    def __len__(self):
        return len(self.factors)


def tensor(components: Sequence[Any], factors: Sequence[Any]) -> TensorNode:
    if len(components) != len(factors):
        raise TensorError("one component crystal per factor")
    return TensorNode(tuple(factors), tuple(components))


def _suffix_stats(tn: TensorNode, i: int):
    """eps/phi of every suffix ``x_p (x) ... (x) x_N`` (right fold)."""
    n = len(tn.factors)
    eps_s = [0] * (n + 1)
    phi_s = [0] * (n + 1)
    for p in range(n - 1, -1, -1):
        c, x = tn.components[p], tn.factors[p]
        ex, px = c.eps(x, i), c.phi(x, i)
        if p == n - 1:
            eps_s[p], phi_s[p] = ex, px
        else:
            er, pr = eps_s[p + 1], phi_s[p + 1]
            eps_s[p] = ex + max(0, er - px)
            phi_s[p] = pr + max(0, px - er)
    return eps_s, phi_s


def tensor_eps(tn: TensorNode, i: int) -> int:
    return _suffix_stats(tn, i)[0][0]


def tensor_phi(tn: TensorNode, i: int) -> int:
    return _suffix_stats(tn, i)[1][0]


def tensor_e(tn: TensorNode, i: int) -> Optional[TensorNode]:
    eps_s, _ = _suffix_stats(tn, i)
    n = len(tn.factors)
    for p in range(n):
        c, x = tn.components[p], tn.factors[p]
        if p == n - 1 or c.phi(x, i) >= eps_s[p + 1]:
            y = c.e(x, i)
            return None if y is None else tn.replace(p, y)
    return None  # pragma: no cover


def tensor_f(tn: TensorNode, i: int) -> Optional[TensorNode]:
    eps_s, _ = _suffix_stats(tn, i)
    n = len(tn.factors)
    for p in range(n):
        c, x = tn.components[p], tn.factors[p]
        if p == n - 1 or c.phi(x, i) > eps_s[p + 1]:
            y = c.f(x, i)
            return None if y is None else tn.replace(p, y)
    return None  # pragma: no cover


# Left-fold versions, ((x1 (x) x2) (x) x3) ..., used to check associativity.


def _left_stats(tn: TensorNode, i: int, upto: int):
    c, x = tn.components[0], tn.factors[0]
    ep, ph = c.eps(x, i), c.phi(x, i)
    for p in range(1, upto):
        c, x = tn.components[p], tn.factors[p]
        ex, px = c.eps(x, i), c.phi(x, i)
        ep, ph = ep + max(0, ex - ph), px + max(0, ph - ex)
    return ep, ph


def left_fold_eps_phi(tn: TensorNode, i: int) -> tuple[int, int]:
    return _left_stats(tn, i, len(tn.factors))


def left_fold_e(tn: TensorNode, i: int) -> Optional[TensorNode]:
    for upto in range(len(tn.factors), 1, -1):
        _, ph_left = _left_stats(tn, i, upto - 1)
        c, x = tn.components[upto - 1], tn.factors[upto - 1]
        if ph_left < c.eps(x, i):
            y = c.e(x, i)
            return None if y is None else tn.replace(upto - 1, y)
    y = tn.components[0].e(tn.factors[0], i)
    return None if y is None else tn.replace(0, y)


def left_fold_f(tn: TensorNode, i: int) -> Optional[TensorNode]:
    for upto in range(len(tn.factors), 1, -1):
        _, ph_left = _left_stats(tn, i, upto - 1)
        c, x = tn.components[upto - 1], tn.factors[upto - 1]
        if ph_left <= c.eps(x, i):
            y = c.f(x, i)
            return None if y is None else tn.replace(upto - 1, y)
    y = tn.components[0].f(tn.factors[0], i)
    return None if y is None else tn.replace(0, y)


def tensor_eps_vector(tn: TensorNode, index_set) -> WeightVector:
    return WeightVector({i: tensor_eps(tn, i) for i in index_set})


def tensor_phi_vector(tn: TensorNode, index_set) -> WeightVector:
    return WeightVector({i: tensor_phi(tn, i) for i in index_set})


def is_singular_tensor(tn: TensorNode, index_set) -> bool:
    return tensor_eps_vector(tn, index_set).total() <= 1


def apply_f_word(tn: Optional[TensorNode], word: Sequence[int]) -> Optional[TensorNode]:
    """``f_{w[0]} ... f_{w[-1]} tn`` with the rightmost operator first."""
    for i in reversed(word):
        if tn is None:
            return None
        tn = tensor_f(tn, i)
    return tn


# ---------------------------------------------------------------------------
# box tensors


def box_tensor(pc: PerfectCrystal, boxes: Sequence[str]) -> TensorNode:
    return tensor([pc] * len(boxes), boxes)


def box_tensor_stats(t: RootSystemType, pc: PerfectCrystal, boxes: Sequence[str]):
    tn = box_tensor(pc, boxes)
    return tensor_eps_vector(tn, t.index_set), tensor_phi_vector(tn, t.index_set)


def lemma_eps_tensor_clauses(t: RootSystemType, pc: PerfectCrystal, lab: BoxLabelling) -> dict[str, bool]:
    """The three equalities relating a box tensor to its end boxes."""
    boxes = lab.boxes
    tn = box_tensor(pc, boxes)
    idx = t.index_set
    eps_v, phi_v = box_tensor_stats(t, pc, boxes)
    first, last = boxes[0], boxes[-1]
    eps_ok = eps_v == pc.epsilon_vector(first, idx)
    phi_ok = phi_v == pc.phi_vector(last, idx)
    e_ok = True
    for i in idx:
        y = pc.e(first, i)
        expected = None if y is None else tn.replace(0, y)
        if tensor_e(tn, i) != expected:
            e_ok = False
    return {"eps_first": eps_ok, "e_first": e_ok, "phi_last": phi_ok}


# ---------------------------------------------------------------------------
# B(lambda) (x) B decomposition


def pc_weight(t: RootSystemType, pc: PerfectCrystal, b: str) -> WeightVector:
    return pc.phi_vector(b, t.index_set) - pc.epsilon_vector(b, t.index_set)


def kmn_decompose(t: RootSystemType, lam: WeightVector, pc: PerfectCrystal) -> list[tuple[str, WeightVector]]:
    """``B^{<=lambda}`` with the highest weights ``lambda + wt(b)`` of the summands."""
    if level(t, lam) < 1:
        raise TensorError(f"level of {lam!r} is below the perfect crystal level 1")
    out = []
    for b in pc.nodes:
        if all(pc.eps(b, i) <= lam[i] for i in t.index_set):
            out.append((b, lam + pc_weight(t, pc, b)))
    return out


@dataclass
class ComponentReport:
    type: str
    weight: list[int]
    depth: int
    components: int
    expected: int
    highest_weights: list[list[int]]
    expected_weights: list[list[int]]
    nodes: int

    @property
    def passed(self) -> bool:
        return self.components == self.expected and self.highest_weights == self.expected_weights


def kmn_component_check(t: RootSystemType, lam: WeightVector, pc: PerfectCrystal, depth: int = 6) -> ComponentReport:
    """Count components of the truncated product ``B(lambda) (x) B``.

    Truncation keeps pairs whose ``B(lambda)`` factor has depth <= ``depth``.
    The ``f`` arrows never lower that depth, so each component stays
    connected to its highest weight node inside the truncation.
    """
    expected = kmn_decompose(t, lam, pc)
    g = generate(t, lam, depth)
    bl = MonomialCrystal(t, lam)
    comps = (bl, pc)
    keys = [(x, b) for x in g.order for b in pc.nodes]
    parent = {k: k for k in keys}

    def find(k):
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    for x, b in keys:
        tn = TensorNode((g.nodes[x], b), comps)
        for i in t.index_set:
            y = tensor_f(tn, i)
            if y is None:
                continue
            xid = y.factors[0].id
            if xid not in g.nodes:
                continue
            ra, rb = find((x, b)), find((xid, y.factors[1]))
            if ra != rb:
                parent[ra] = rb
    roots = {find(k) for k in keys}
    highest = []
    for x, b in keys:
        tn = TensorNode((g.nodes[x], b), comps)
        if all(tensor_eps(tn, i) == 0 for i in t.index_set):
            highest.append(tensor_phi_vector(tn, t.index_set).as_list(t))
    return ComponentReport(
        type=str(t),
        weight=lam.as_list(t),
        depth=depth,
        components=len(roots),
        expected=len(expected),
        highest_weights=sorted(highest),
        expected_weights=sorted(w.as_list(t) for _, w in expected),
        nodes=len(keys),
    )


# ---------------------------------------------------------------------------
# the embedding psi: B(mu) -> B(lambda) (x) B^{(x)k}


def product_highest_nodes(t: RootSystemType, lam: WeightVector, pc: PerfectCrystal, k: int, mu: WeightVector) -> list[TensorNode]:
    bl = MonomialCrystal(t, lam)
    comps = (bl,) + (pc,) * k
    out = []
    for tail in itertools.product(pc.nodes, repeat=k):
        tn = TensorNode((bl.highest,) + tail, comps)
        if all(tensor_eps(tn, i) == 0 for i in t.index_set) and tensor_phi_vector(tn, t.index_set) == mu:
            out.append(tn)
    return out


def psi_embed(
    t: RootSystemType,
    lam: WeightVector,
    mu: WeightVector,
    k: int,
    walk: Sequence[int],
    pc: Optional[PerfectCrystal] = None,
    highest: Optional[TensorNode] = None,
) -> TensorNode:
    """Image under ``psi_k^{lambda,mu}`` of ``f_{walk[0]} ... f_{walk[-1]} v_mu``.

    The image is obtained by replaying the same operators on the highest
    weight node of weight ``mu`` in the product.  ``highest`` pins that node
    when several share the weight.
    """
    if highest is None:
        pc = pc or b11(t)
        cands = product_highest_nodes(t, lam, pc, k, mu)
        if not cands:
            raise TensorError(f"no highest weight node of weight {mu!r} in B({lam!r}) (x) B^{k}")
        highest = cands[0]
    out = apply_f_word(highest, walk)
    if out is None:
        raise TensorError(f"walk {tuple(walk)} leaves B({mu!r})")
    return out


def walk_from_highest(cr: MonomialCrystal, node) -> tuple[int, ...]:
    """Some walk ``(i_1, ..., i_k)`` with ``node = f_{i_1} ... f_{i_k} v``."""
    word = []
    x = node
    while True:
        for i in cr.t.index_set:
            y = cr.e(x, i)
            if y is not None:
                word.append(i)
                x = y
                break
        else:
            break
    if x != cr.highest:
        raise CrystalError("node is not in the component of the highest weight node")
    return tuple(word)


# ---------------------------------------------------------------------------
# existence construction


@dataclass
class WalkReport:
    walk: tuple[int, ...]
    type: str
    reversed: bool
    lam: list[int]
    mu: list[int]
    k: int
    m: int
    hw_check: bool
    replay_check: bool
    singular_check: bool
    parent_checked: bool
    lemma: dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.hw_check and self.replay_check and self.singular_check

    def to_json(self) -> dict:
        return {
            "walk": list(self.walk),
            "lambda": self.lam,
            "mu": self.mu,
            "k": self.k,
            "m": self.m,
            "clauses": {
                "hw_check": self.hw_check,
                "replay_check": self.replay_check,
                "singular_check": self.singular_check,
            },
            "pass": self.passed,
        }


def walk_crystal(t: RootSystemType, w: Sequence[int], reversed_arrows: bool = False) -> PerfectCrystal:
    if reversed_arrows:
        if not t.affine or t.rank < 2 or t.family.value != "Aaff":
            raise TensorError("B^{n,1} only exists for A_n^{(1)}, n >= 2")
        return bn1_typeA(t.rank)
    return b11(t)


def construct_walk_node(t: RootSystemType, w: Sequence[int], reversed_arrows: bool = False):
    """Build ``v_lambda (x) [i_1] (x) ... (x) [i_k]`` and check it.

    ``lambda = eps([i_0])`` and ``mu = phi([i_{k-1}])``.  Returns the node and
    a :class:`WalkReport` with the highest-weight, replay and singularity
    clauses.
    """
    w = tuple(w)
    pc = walk_crystal(t, w, reversed_arrows)
    if not w or not is_consecutive(pc, w):
        raise TensorError(f"walk {w} is not consecutive on {pc.name}")
    a = cartan_matrix(t)
    if len(w) >= 2 and a[w[0], w[1]] >= 0:
        raise TensorError(f"a_{{{w[0]},{w[1]}}} >= 0: the node would not be singular")
    idx = t.index_set
    lab = box_nodes(t, pc, w)
    lam = pc.epsilon_vector(lab.predecessor, idx)
    shifted = lab.shifted
    mu = pc.phi_vector(shifted[-1], idx)

    bl = MonomialCrystal(t, lam)
    comps = (bl,) + (pc,) * len(lab.boxes)
    hw = TensorNode((bl.highest,) + shifted, comps)
    target = TensorNode((bl.highest,) + lab.boxes, comps)

    hw_check = all(tensor_eps(hw, i) == 0 for i in idx) and tensor_phi_vector(hw, idx) == mu
    reached = apply_f_word(hw, w)
    replay_check = reached is not None and reached == target

    singular_check = is_singular_tensor(target, idx)
    k = len(w)
    parent_checked = k >= 2 and (k == 2 or a[w[1], w[2]] < 0)
    if parent_checked:
        parent = tensor_e(target, w[0])
        singular_check = singular_check and parent is not None and is_singular_tensor(parent, idx)
    if k == 1:
        # the only arrow into v_lambda (x) [i_1] has colour i_1
        singular_check = singular_check and tensor_eps_vector(target, idx) == WeightVector({w[0]: 1})

    report = WalkReport(
        walk=w,
        type=str(t),
        reversed=reversed_arrows,
        lam=lam.as_list(t),
        mu=mu.as_list(t),
        k=k,
        m=lab.m,
        hw_check=hw_check,
        replay_check=replay_check,
        singular_check=singular_check,
        parent_checked=parent_checked,
        lemma=lemma_eps_tensor_clauses(t, pc, lab),
    )
    return target, report


# ---------------------------------------------------------------------------
# psi as an embedding: intertwining and composition


@dataclass
class PsiReport:
    checked: int
    intertwine_failures: int
    injective: bool
    composition_failures: Optional[int] = None

    @property
    def passed(self) -> bool:
        return self.intertwine_failures == 0 and self.injective and not self.composition_failures


def psi_map(t: RootSystemType, lam: WeightVector, mu: WeightVector, k: int, depth: int,
            pc: Optional[PerfectCrystal] = None, highest: Optional[TensorNode] = None):
    """``psi_k^{lambda,mu}`` on the nodes of ``B(mu)`` up to ``depth``.

    Returns ``(graph, images)`` with images keyed by node id.
    """
    pc = pc or b11(t)
    g = generate(t, mu, depth)
    bm = MonomialCrystal(t, mu)
    if highest is None:
        cands = product_highest_nodes(t, lam, pc, k, mu)
        if not cands:
            raise TensorError(f"no highest weight node of weight {mu!r} in B({lam!r}) (x) B^{k}")
        highest = cands[0]
    images = {}
    for nid in g.order:
        walk = walk_from_highest(bm, g.nodes[nid])
        images[nid] = psi_embed(t, lam, mu, k, walk, highest=highest)
    return g, images


def psi_intertwines(t: RootSystemType, lam: WeightVector, mu: WeightVector, k: int = 1, depth: int = 4,
                    pc: Optional[PerfectCrystal] = None) -> PsiReport:
    """``psi f_i = f_i psi`` and ``psi e_i = e_i psi`` on interior nodes."""
    g, images = psi_map(t, lam, mu, k, depth, pc)
    bad = 0
    checked = 0
    for nid in g.interior_nodes():
        for i in t.index_set:
            checked += 1
            dst = g.f(nid, i)
            lhs = None if dst is None else images[dst]
            if tensor_f(images[nid], i) != lhs:
                bad += 1
            src = g.e(nid, i)
            lhs = None if src is None else images[src]
            if tensor_e(images[nid], i) != lhs:
                bad += 1
    injective = len(set(images.values())) == len(images)
    return PsiReport(checked, bad, injective)


def psi_composition(t: RootSystemType, lam: WeightVector, nu: WeightVector, mu: WeightVector,
                    depth: int = 3, pc: Optional[PerfectCrystal] = None) -> PsiReport:
    """``(psi_1^{lambda,nu} (x) id) o psi_1^{nu,mu} = psi_2^{lambda,mu}`` on ``B(mu)``.

    The right side is computed by replay in ``B(lambda) (x) B (x) B`` from the
    highest node of weight ``mu`` that the left side sends ``v_mu`` to; that
    node must be one of the product's highest weight nodes.
    """
    pc = pc or b11(t)
    bn = MonomialCrystal(t, nu)
    g, inner = psi_map(t, nu, mu, 1, depth, pc)
    outer_hw = product_highest_nodes(t, lam, pc, 1, nu)
    if not outer_hw:
        raise TensorError(f"{nu!r} is not a summand of B({lam!r}) (x) B")
    lhs = {}
    for nid, img in inner.items():
        y, b = img.factors
        z = psi_embed(t, lam, nu, 1, walk_from_highest(bn, y), highest=outer_hw[0])
        lhs[nid] = TensorNode(z.factors + (b,), z.components + (pc,))
    top = lhs[g.highest]
    cands = product_highest_nodes(t, lam, pc, 2, mu)
    if top not in cands:
        return PsiReport(len(lhs), 0, True, composition_failures=len(lhs))
    _, rhs = psi_map(t, lam, mu, 2, depth, pc, highest=top)
    fails = sum(1 for nid in lhs if lhs[nid] != rhs[nid])
    return PsiReport(len(lhs), 0, len(set(rhs.values())) == len(rhs), composition_failures=fails)


# ---------------------------------------------------------------------------
# existence witnesses straight from the monomial model


def existence_witness(t: RootSystemType, w: Sequence[int], max_level: int = 2) -> Optional[WeightVector]:
    """Smallest dominant ``mu`` (level <= ``max_level``) realising the walk.

    Realising means ``a = f_{i_1} ... f_{i_k} v_mu`` is nonzero and singular,
    with a singular parent whenever the walk-node construction demands one.
    Independent of the tensor construction; used to separate the existence
    statement from the particular witness built by construct_walk_node.
    """
    from . import crystal as cr
    from .cartan import dominant_weights_up_to_level

    a = cartan_matrix(t)
    w = tuple(w)
    k = len(w)
    need_parent = k >= 2 and (k == 2 or a[w[1], w[2]] < 0)
    for mu in dominant_weights_up_to_level(t, max_level):
        x = cr.highest_node(t, mu)
        for i in reversed(w):
            x = cr.f(t, x, i)
            if x is None:
                break
        if x is None or not cr.is_singular(t, x):
            continue
        if need_parent and not cr.is_singular(t, cr.e(t, x, w[0])):
            continue
        return mu
    return None


# ---------------------------------------------------------------------------
# sweep over the catalogue


@dataclass
class WalkSweepRow:
    type: str
    reversed: bool
    walks: int = 0
    construct_failures: int = 0
    lemma_failures: int = 0
    witnessed: int = 0
    examples: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.construct_failures == 0 and self.lemma_failures == 0


def catalogue_types(max_rank: int = 4) -> list[RootSystemType]:
    from .cartan import MIN_RANK, Family

    out = []
    for fam in Family:
        if fam in (Family.A, Family.B, Family.C, Family.D):
            continue
        top = 1 if fam is Family.A1aff else max_rank
        for n in range(MIN_RANK[fam], top + 1):
            out.append(RootSystemType(fam, n))
    return out


def eligible_walks(t: RootSystemType, pc: PerfectCrystal, max_len: int) -> list[tuple[int, ...]]:
    from .perfect import all_walks

    a = cartan_matrix(t)
    return [w for w in all_walks(pc, max_len) if len(w) == 1 or a[w[0], w[1]] < 0]


def walk_sweep(types: Optional[Sequence[RootSystemType]] = None, max_len: int = 6,
               witness_level: int = 0) -> list[WalkSweepRow]:
    """construct_walk_node and the box-tensor equalities on every eligible walk.

    With ``witness_level > 0`` each failing walk is also searched for a
    weight of that level or less that realises it in the monomial model.
    """
    rows = []
    for t in types if types is not None else catalogue_types():
        orientations = [False, True] if t.family.value == "Aaff" else [False]
        for rev in orientations:
            pc = walk_crystal(t, (), rev)
            row = WalkSweepRow(str(t), rev)
            for w in eligible_walks(t, pc, max_len):
                row.walks += 1
                _, rep = construct_walk_node(t, w, rev)
                lemma_ok = all(rep.lemma.values())
                if not lemma_ok:
                    row.lemma_failures += 1
                if not rep.passed:
                    row.construct_failures += 1
                    if len(row.examples) < 3:
                        row.examples.append(rep.to_json())
                    if witness_level and existence_witness(t, w, witness_level) is not None:
                        row.witnessed += 1
            rows.append(row)
    return rows
