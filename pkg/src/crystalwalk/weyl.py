"""Weyl dimension formula for finite types.

Used as an independent size oracle for generated crystals.  Positive coroots
are obtained by reflection closure in the dual root system (transposed
Cartan matrix), so nothing here touches the crystal model.
"""

from __future__ import annotations

from fractions import Fraction

from .cartan import RootSystemType, WeightVector, cartan_matrix


def positive_roots(rows: list[list[int]]) -> list[tuple[int, ...]]:
    """Positive roots, in simple-root coordinates, of a finite Cartan matrix."""
    n = len(rows)
    simple = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    found = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            for i in range(n):
                pair = sum(rows[i][j] * beta[j] for j in range(n))
                gamma = list(beta)
                gamma[i] -= pair
                gamma = tuple(gamma)
                if all(c >= 0 for c in gamma) and any(gamma) and gamma not in found:
                    found.add(gamma)
                    nxt.append(gamma)
        frontier = nxt
    return sorted(found)


def weyl_dimension(t: RootSystemType, lam: WeightVector) -> int:
    if t.affine:
        raise ValueError("Weyl dimension formula needs a finite type")
    rows = cartan_matrix(t).transpose().rows()
    idx = t.index_set
    lam_list = [lam[i] for i in idx]
    dim = Fraction(1)
    for co in positive_roots(rows):
        num = sum(k * (l + 1) for k, l in zip(co, lam_list))
        den = sum(co)
        dim *= Fraction(num, den)
    assert dim.denominator == 1
    return int(dim)
